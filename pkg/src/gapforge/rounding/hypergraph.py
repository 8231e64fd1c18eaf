"""Sums of bias products over injective labelings of small hypergraph patterns.

A pattern has an optional distinguished vertex α (always mapped to index 1, the
president) and free vertices mapped injectively to the citizens 2..k.  Edges have
arity 1 (a factor b_i) or 2 (a factor b_ij); repeated edges multiply.  The sum

    S_H = (1 / |Aut H|) Σ_{σ injective} Π_{e ∈ E(H)} b_{σ(e)}

counts each distinct image once.  Three evaluators are provided:

``s_direct``
    enumerates injective maps; the brute-force oracle, feasible for k <= 12.
``s_moebius``
    Möbius inversion over set partitions of the free vertices.  The unrestricted
    sum of each quotient pattern factorizes into a tensor contraction, so the cost
    is polynomial in k.
``s_aggregate``
    expands a disconnected pattern into a polynomial in connected primitive sums
    (the inclusion/exclusion identities) and evaluates the primitives by Möbius
    inversion.

Bias data may be compressed into citizen *types*: citizens with equal b_i, equal
president pair b_1i and a common pair value to every other type.  Mixtures of a
few vertices compress to at most 2^T types, which keeps the aggregate evaluator
fast at k = 60.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, perm
from typing import Iterable, Sequence

import numpy as np

from ..exactnum import lcm_denominator, rat

ALPHA = -1
MAX_FREE = 7
DIRECT_K_CAP = 12

__all__ = [
    "ALPHA", "HypergraphPattern", "pattern", "BiasData",
    "s_direct", "s_moebius", "s_aggregate", "expand_components",
    "PRINTED_IDENTITIES", "check_identities", "random_bias_data",
]


# --------------------------------------------------------------------------
# patterns

@dataclass(frozen=True)
class HypergraphPattern:
    """Free vertices 0..nfree-1, optional α (label ALPHA), unit and pair edges.

    Units and edges are stored as sorted tuples, so equal patterns compare equal
    under the same labeling.  ``canonical()`` removes the labeling.
    """

    nfree: int
    alpha: bool
    units: tuple[int, ...] = ()
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        verts = set(range(self.nfree)) | ({ALPHA} if self.alpha else set())
        units = tuple(sorted(self.units))
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        for v in units + tuple(x for e in edges for x in e):
            if v not in verts:
                raise ValueError(f"vertex {v} is not in the pattern")
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
        if self.nfree > MAX_FREE:
            raise ValueError(f"pattern has {self.nfree} free vertices; the cap is {MAX_FREE}")
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "edges", edges)

    @property
    def degree(self) -> int:
        """Number of bias factors in each product."""
        return len(self.units) + len(self.edges)

    def vertices(self) -> list[int]:
        return ([ALPHA] if self.alpha else []) + list(range(self.nfree))

    def relabel(self, mapping: dict[int, int], nfree: int | None = None) -> "HypergraphPattern":
        m = {ALPHA: ALPHA, **mapping}
        return HypergraphPattern(
            self.nfree if nfree is None else nfree, self.alpha,
            tuple(m[u] for u in self.units), tuple((m[u], m[v]) for u, v in self.edges))

    def components(self) -> list["HypergraphPattern"]:
        """Connected components, each relabeled from 0; isolated α is kept."""
        parent = {v: v for v in self.vertices()}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in self.edges:
            parent[find(u)] = find(v)
        groups: dict[int, list[int]] = {}
        for v in self.vertices():
            groups.setdefault(find(v), []).append(v)
        out = []
        for verts in groups.values():
            free = sorted(v for v in verts if v != ALPHA)
            m = {v: i for i, v in enumerate(free)}
            vs = set(verts)
            m[ALPHA] = ALPHA
            units = [m[u] for u in self.units if u in vs]
            edges = [(m[u], m[v]) for u, v in self.edges if u in vs]
            if not free and not units and not edges:
                continue  # α that carries no factor contributes 1
            out.append(HypergraphPattern(len(free), ALPHA in vs, tuple(units), tuple(edges)))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def canonical(self) -> "HypergraphPattern":
        return _canonical(self)

    def automorphisms(self) -> int:
        return _automorphisms(self)

    def __str__(self) -> str:
        def name(v):
            return "α" if v == ALPHA else f"i{v + 1}"

        parts = []
        for c in self.components() or [self]:
            items = [name(u) for u in c.units] + [f"({name(u)},{name(v)})" for u, v in c.edges]
            if c.alpha and not items:
                items = ["α"]
            parts.append("{" + ",".join(items) + "}")
        return ",".join(parts)


def _key(p: HypergraphPattern):
    return (p.units, p.edges)


@lru_cache(maxsize=None)
def _canonical(p: HypergraphPattern) -> HypergraphPattern:
    best = None
    for sigma in permutations(range(p.nfree)):
        q = p.relabel(dict(enumerate(sigma)))
        if best is None or _key(q) < _key(best):
            best = q
    return best


@lru_cache(maxsize=None)
def _automorphisms(p: HypergraphPattern) -> int:
    target = _key(p)
    return sum(1 for sigma in permutations(range(p.nfree))
               if _key(p.relabel(dict(enumerate(sigma)))) == target)


_TOKEN = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)|([^,()\s]+)")


def pattern(text: str) -> HypergraphPattern:
    """Parse the brace notation, e.g. ``"{i1},{(i2,i3)}"`` or ``"{α},{(i2,i3)}"``.

    Inside a component, ``iN`` is a unit factor and ``(u,v)`` a pair factor; α may
    be written ``α``, ``a`` or ``alpha``.  A component holding exactly two bare
    labels and nothing else, such as ``{i6,i7}``, is read as a single pair: that
    shorthand is common in hand-written sums.
    """
    comps = re.findall(r"\{([^{}]*)\}", text)
    if not comps or re.sub(r"\{[^{}]*\}|[\s,]", "", text):
        raise ValueError(f"cannot parse pattern {text!r}")
    labels: dict[str, int] = {}
    alpha = False

    def vid(tok: str) -> int:
        nonlocal alpha
        tok = tok.strip()
        if tok in ("α", "a", "alpha"):
            alpha = True
            return ALPHA
        if not re.fullmatch(r"i\d+", tok):
            raise ValueError(f"bad vertex label {tok!r}")
        return labels.setdefault(tok, len(labels))

    units, edges = [], []
    for body in comps:
        toks = _TOKEN.findall(body)
        bare = [t[2] for t in toks if t[2]]
        pairs = [(t[0], t[1]) for t in toks if not t[2]]
        if len(bare) == 2 and not pairs:
            edges.append((vid(bare[0]), vid(bare[1])))
            continue
        for b in bare:
            v = vid(b)
            if v == ALPHA and len(bare) == 1 and not pairs:
                units.append(ALPHA)  # the component {α} is the factor b_1
            elif v != ALPHA:
                units.append(v)
            else:
                units.append(ALPHA)
        for u, v in pairs:
            edges.append((vid(u), vid(v)))
    return HypergraphPattern(len(labels), alpha, tuple(units), tuple(edges))


# --------------------------------------------------------------------------
# bias data

@dataclass(frozen=True)
class BiasData:
    """Citizen biases grouped by type.

    ``alpha`` is b_1.  Type s has ``counts[s]`` citizens, each with first moment
    ``b[s]`` and president pair ``a[s]``; two distinct citizens of types s, t have
    pair moment ``M[s][t]``.  ``M[s][s]`` is only meaningful when counts[s] >= 2.
    """

    k: int
    alpha: Fraction
    counts: tuple[int, ...]
    b: tuple[Fraction, ...]
    a: tuple[Fraction, ...]
    M: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        t = len(self.counts)
        if len(self.b) != t or len(self.a) != t or len(self.M) != t or any(len(r) != t for r in self.M):
            raise ValueError("type arrays have inconsistent lengths")
        if sum(self.counts) != self.k - 1 or any(c < 1 for c in self.counts):
            raise ValueError(f"type counts must be positive and sum to k-1 = {self.k - 1}")
        for s in range(t):
            for u in range(t):
                if self.M[s][u] != self.M[u][s]:
                    raise ValueError("pair matrix must be symmetric")

    @property
    def ntypes(self) -> int:
        return len(self.counts)

    @classmethod
    def from_profile(cls, b: Sequence, bij) -> "BiasData":
        """Uncompressed data from first moments b_1..b_k and pairs.

        ``bij`` is a k×k array-like or a dict keyed by 0-based (i, j).
        """
        b = [rat(v) for v in b]
        k = len(b)
        if isinstance(bij, dict):
            def pair(i, j):
                return rat(bij.get((i, j), bij.get((j, i), 0)))
        else:
            rows = [[rat(v) for v in r] for r in bij]

            def pair(i, j):
                return rows[i][j]
        cit = range(1, k)
        M = tuple(tuple(Fraction(0) if i == j else pair(i, j) for j in cit) for i in cit)
        return cls(k, b[0], (1,) * (k - 1), tuple(b[1:]), tuple(pair(0, i) for i in cit), M)

    @classmethod
    def from_mixture(cls, points: Sequence[Sequence[int]], weights: Sequence) -> "BiasData":
        """Moments of a convex combination of ±1 points, grouped by sign pattern."""
        w = [rat(v) for v in weights]
        pts = [tuple(int(v) for v in x) for x in points]
        if not pts or len(pts) != len(w):
            raise ValueError("need one weight per point")
        k = len(pts[0])
        if any(len(x) != k for x in pts):
            raise ValueError("points have different lengths")
        groups: dict[tuple[int, ...], int] = {}
        for i in range(1, k):
            sig = tuple(x[i] for x in pts)
            groups[sig] = groups.get(sig, 0) + 1
        sigs = sorted(groups)
        pres = [x[0] for x in pts]
        alpha = sum((wt * p for wt, p in zip(w, pres)), Fraction(0))
        b = tuple(sum((wt * s for wt, s in zip(w, sig)), Fraction(0)) for sig in sigs)
        a = tuple(sum((wt * p * s for wt, p, s in zip(w, pres, sig)), Fraction(0)) for sig in sigs)
        M = tuple(tuple(sum((wt * s * t for wt, s, t in zip(w, si, sj)), Fraction(0)) for sj in sigs)
                  for si in sigs)
        return cls(k, alpha, tuple(groups[s] for s in sigs), b, a, M)

    @classmethod
    def from_vertex(cls, x: Sequence[int]) -> "BiasData":
        return cls.from_mixture([x], [1])

    def expand(self) -> "BiasData":
        """One type per citizen."""
        idx = [s for s, c in enumerate(self.counts) for _ in range(c)]
        n = len(idx)
        M = tuple(tuple(Fraction(0) if i == j else self.M[idx[i]][idx[j]] for j in range(n))
                  for i in range(n))
        return BiasData(self.k, self.alpha, (1,) * n, tuple(self.b[s] for s in idx),
                        tuple(self.a[s] for s in idx), M)

    def citizen_pairs(self) -> list[list[Fraction]]:
        """Citizen pair matrix with zero diagonal."""
        return [list(r) for r in self.expand().M]

    @property
    def beta(self) -> Fraction:
        return sum((c * v for c, v in zip(self.counts, self.b)), Fraction(0))


def random_bias_data(k: int, rng: np.random.Generator, denominators: Sequence[int] = (1, 2, 3, 4, 6)) -> BiasData:
    """Arbitrary rational moments in [-1, 1]; not necessarily realizable."""
    def draw():
        q = int(rng.choice(denominators))
        return Fraction(int(rng.integers(-q, q + 1)), q)

    b = [draw() for _ in range(k)]
    bij = {(i, j): draw() for i in range(k) for j in range(i + 1, k)}
    return BiasData.from_profile(b, bij)


class _Scaled:
    """Integer (object dtype) copies of the data with their denominators."""

    def __init__(self, d: BiasData):
        self.db = lcm_denominator(d.b)
        self.da = lcm_denominator(d.a)
        self.dm = lcm_denominator(v for r in d.M for v in r)
        self.alpha = d.alpha
        self.n = np.array(list(d.counts), dtype=object)
        self.b = np.array([int(v * self.db) for v in d.b], dtype=object)
        self.a = np.array([int(v * self.da) for v in d.a], dtype=object)
        self.M = np.array([[int(v * self.dm) for v in r] for r in d.M], dtype=object)
        if not len(d.counts):
            self.M = self.M.reshape(0, 0)
        self.diag = np.array([self.M[s, s] for s in range(len(d.counts))], dtype=object)
        self.total = int(sum(d.counts))
        self.maxabs = {name: max([abs(int(v)) for v in arr.ravel()] + [1])
                       for name, arr in (("b", self.b), ("a", self.a), ("M", self.M))}
        self.small = {name: np.array(arr, dtype=np.int64) if self.maxabs[key] < 2**62 else None
                      for name, arr, key in (("n", self.n, "b"), ("b", self.b, "b"), ("a", self.a, "a"),
                                             ("M", self.M, "M"), ("diag", self.diag, "M"))}

    def scale(self, p: HypergraphPattern) -> Fraction:
        """Denominator and α factor shared by every product of the pattern."""
        na = sum(1 for u in p.units if u == ALPHA)
        nb = len(p.units) - na
        nae = sum(1 for e in p.edges if ALPHA in e)
        ne = len(p.edges) - nae
        return self.alpha ** na / Fraction(self.db ** nb * self.da ** nae * self.dm ** ne)


# --------------------------------------------------------------------------
# direct evaluator

def s_direct(p: HypergraphPattern, d: BiasData) -> Fraction:
    """Sum over injective maps of the free vertices to the citizens, divided by |Aut|."""
    if d.k > DIRECT_K_CAP:
        raise ValueError(f"direct enumeration is capped at k = {DIRECT_K_CAP}")
    e = d.expand()
    n = e.k - 1
    if p.nfree > n:
        return Fraction(0)
    sc = _Scaled(e)
    maps = np.array(list(permutations(range(n), p.nfree)), dtype=np.int64).reshape(-1, p.nfree)
    prod = np.ones(len(maps), dtype=object)
    for u in p.units:
        if u != ALPHA:
            prod = prod * sc.b[maps[:, u]]
    for u, v in p.edges:
        if u == ALPHA:
            prod = prod * sc.a[maps[:, v]]
        else:
            prod = prod * sc.M[maps[:, u], maps[:, v]]
    total = int(prod.sum()) if len(prod) else 0
    return Fraction(total) * sc.scale(p) / p.automorphisms()


# --------------------------------------------------------------------------
# Möbius evaluator

def _set_partitions(n: int):
    """All set partitions of range(n), as block-label lists."""
    def rec(i, labels, nblocks):
        if i == n:
            yield tuple(labels)
            return
        for b in range(nblocks + 1):
            labels.append(b)
            yield from rec(i + 1, labels, max(nblocks, b + 1))
            labels.pop()
    yield from rec(0, [], 0)


@lru_cache(maxsize=None)
def _moebius_terms(p: HypergraphPattern) -> tuple[tuple[int, tuple], ...]:
    """(μ, quotient) pairs; a quotient is (nblocks, units, edges, loops)."""
    out = []
    for lab in _set_partitions(p.nfree):
        nb = max(lab) + 1 if lab else 0
        sizes = [lab.count(b) for b in range(nb)]
        mu = 1
        for s in sizes:
            mu *= (-1) ** (s - 1) * factorial(s - 1)
        m = dict(enumerate(lab))
        m[ALPHA] = ALPHA
        edges, loops = [], []
        for u, v in p.edges:
            if u != ALPHA and m[u] == m[v]:
                loops.append(m[u])
            else:
                edges.append(tuple(sorted((m[u], m[v]))))
        units = tuple(sorted(m[u] for u in p.units if u != ALPHA))
        out.append((mu, (nb, units, tuple(sorted(edges)), tuple(sorted(loops)))))
    return tuple(out)


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _unrestricted(q: tuple, sc: _Scaled) -> int:
    """Σ over all (not necessarily injective) type labelings of a quotient.

    Uses the C einsum on int64 when a magnitude bound rules out overflow, and an
    object-dtype contraction on Python integers otherwise.
    """
    nb, units, edges, loops = q
    if nb == 0:
        return 1
    names, subs = [], []
    for v in range(nb):
        names.append("n")
        subs.append(_LETTERS[v])
    for u in units:
        names.append("b")
        subs.append(_LETTERS[u])
    for u in loops:
        names.append("diag")
        subs.append(_LETTERS[u])
    for u, v in edges:
        if u == ALPHA:
            names.append("a")
            subs.append(_LETTERS[v])
        else:
            names.append("M")
            subs.append(_LETTERS[u] + _LETTERS[v])
    expr = ",".join(subs) + "->"
    bound = sc.total ** nb
    for nm in names:
        if nm != "n":
            bound *= sc.maxabs["M" if nm == "diag" else nm]
    if bound < 2**62 and all(sc.small[nm] is not None for nm in names):
        return int(np.einsum(expr, *(sc.small[nm] for nm in names), optimize=False))
    full = {"n": sc.n, "b": sc.b, "a": sc.a, "M": sc.M, "diag": sc.diag}
    operands = [full[nm] for nm in names]
    key = (expr, len(sc.n))
    path = _PATHS.get(key)
    if path is None:
        path = _PATHS[key] = np.einsum_path(expr, *operands, optimize="greedy")[0]
    return int(np.einsum(expr, *operands, optimize=path))


_PATHS: dict = {}


def s_moebius(p: HypergraphPattern, d: BiasData, cache: dict | None = None) -> Fraction:
    """Exact S_H by Möbius inversion over partitions of the free vertices.

    Inj(H) = Σ_π μ(0̂, π) · Unr(H/π), with μ(0̂, π) = Π_blocks (-1)^{|B|-1}(|B|-1)!.
    Edges that collapse to loops read the type's intra-type pair value, which
    leaves Inj unchanged because injective maps never touch the diagonal.
    """
    sc = cache.get("_scaled") if cache is not None else None
    if sc is None:
        sc = _Scaled(d)
        if cache is not None:
            cache["_scaled"] = sc
    total = 0
    for mu, q in _moebius_terms(p):
        if cache is not None:
            if q not in cache:
                cache[q] = _unrestricted(q, sc)
            val = cache[q]
        else:
            val = _unrestricted(q, sc)
        total += mu * val
    return Fraction(total) * sc.scale(p) / p.automorphisms()


# --------------------------------------------------------------------------
# inclusion/exclusion expansion

def _glue(parts: Sequence[HypergraphPattern], match: dict[int, int]) -> HypergraphPattern:
    """Disjoint union of parts, then identify vertex i of part 0 with match[i] of the rest."""
    offset, units, edges = 0, [], []
    offsets = []
    for q in parts:
        offsets.append(offset)
        offset += q.nfree
    n0 = parts[0].nfree
    # vertices of the rest keep their union labels; part-0 vertices map onto them or are appended
    mapping0 = {}
    nxt = offset - n0
    for i in range(n0):
        if i in match:
            mapping0[i] = match[i]
        else:
            mapping0[i] = nxt
            nxt += 1
    alpha = any(q.alpha for q in parts)
    for idx, q in enumerate(parts):
        if idx == 0:
            m = {ALPHA: ALPHA, **mapping0}
        else:
            m = {ALPHA: ALPHA, **{i: i + offsets[idx] - n0 for i in range(q.nfree)}}
        units += [m[u] for u in q.units]
        edges += [(m[u], m[v]) for u, v in q.edges]
    return HypergraphPattern(nxt, alpha, tuple(units), tuple(edges))


def _partial_matchings(left: int, right: int):
    """Nonempty injective partial maps range(left) -> range(right)."""
    def rec(i, used, cur):
        if i == left:
            if cur:
                yield dict(cur)
            return
        yield from rec(i + 1, used, cur)
        for j in range(right):
            if j not in used:
                cur[i] = j
                used.add(j)
                yield from rec(i + 1, used, cur)
                del cur[i]
                used.discard(j)
    yield from rec(0, set(), {})


def _components_key(comps: Iterable[HypergraphPattern]) -> tuple:
    return tuple(sorted((c.canonical() for c in comps), key=lambda c: (c.nfree, c.alpha, _key(c))))


@lru_cache(maxsize=None)
def _inj_expand(comps: tuple[HypergraphPattern, ...]) -> dict:
    """Inj(⊔ comps) as {multiset of connected canonical patterns: integer coefficient}.

    Uses Inj(G1)·Inj(rest) = Σ_μ Inj(G1 ∪_μ rest) over partial matchings μ of the
    free vertices; the μ = ∅ term is the disjoint union itself.
    """
    if len(comps) == 1:
        return {comps: 1}
    g1, rest = comps[0], comps[1:]
    out: dict = {}
    for term, c in _inj_expand(rest).items():
        key = tuple(sorted(term + (g1,), key=lambda c: (c.nfree, c.alpha, _key(c))))
        out[key] = out.get(key, 0) + c
    nrest = sum(q.nfree for q in rest)
    for match in _partial_matchings(g1.nfree, nrest):
        glued = _glue((g1,) + rest, match)
        for term, c in _inj_expand(_components_key(glued.components())).items():
            out[term] = out.get(term, 0) - c
    return {t: c for t, c in out.items() if c}


def expand_components(p: HypergraphPattern) -> dict[tuple[HypergraphPattern, ...], Fraction]:
    """S_H as a polynomial in connected primitive sums.

    Returns {tuple of connected canonical patterns: coefficient}, meaning
    S_H = Σ coefficient · Π S_{primitive}.
    """
    return dict(_expand_cached(p.canonical() if p.is_connected() else p))


@lru_cache(maxsize=None)
def _expand_cached(p: HypergraphPattern):
    comps = _components_key(p.components())
    aut = p.automorphisms()
    out = []
    for term, c in _inj_expand(comps).items():
        coef = Fraction(c, aut)
        for q in term:
            coef *= q.automorphisms()
        out.append((term, coef))
    return tuple(out)


def s_aggregate(p: HypergraphPattern, d: BiasData, cache: dict | None = None) -> Fraction:
    """S_H from its inclusion/exclusion expansion into connected primitives."""
    cache = {} if cache is None else cache
    prim = cache.setdefault("_primitives", {})
    total = Fraction(0)
    for term, coef in expand_components(p).items():
        val = coef
        for q in term:
            if q not in prim:
                prim[q] = _primitive(q, d, cache)
            val *= prim[q]
            if not val:
                break
        total += val
    return total


def _primitive(q: HypergraphPattern, d: BiasData, cache: dict) -> Fraction:
    if q.nfree == 0:
        # only the isolated {α} component carries no free vertex
        return d.alpha ** len(q.units)
    if q.nfree == 1 and not q.edges and len(q.units) == 1:
        return d.beta
    return s_moebius(q, d, cache)


# --------------------------------------------------------------------------
# the identities as printed in the hand derivation

def _t(coef, *factors):
    return (Fraction(coef), factors)


# Each entry: (name, lhs multiplier, lhs pattern, right-hand terms).  A term is a
# coefficient and a list of factors: "alpha", "beta" or a pattern string.
PRINTED_IDENTITIES = [
    ("S1", 1, "{i1},{(i2,i3)}", [
        _t(1, "beta", "{(i1,i2)}"), _t(-1, "{i1,(i1,i2)}")]),
    ("S2", 1, "{α},{(i2,i3)}", [
        _t(1, "alpha", "{(i1,i2)}")]),
    ("S3", 1, "{i1},{(α,i2)}", [
        _t(1, "beta", "{(α,i1)}"), _t(-1, "{i1,(i1,α)}")]),
    ("S4", 2, "{i1},{(i2,i3)},{(i4,i5)}", [
        _t(1, "beta", "{(i1,i2)}", "{(i1,i2)}"), _t(-2, "{i1,(i1,i2)}", "{(i1,i2)}"),
        _t(-2, "beta", "{(i1,i2),(i1,i3)}"), _t(-1, "beta", "{(i1,i2),(i1,i2)}"),
        _t(2, "{i1,(i1,i2),(i2,i3)}"), _t(4, "{i1,(i1,i2),(i1,i3)}"),
        _t(2, "{i1,(i1,i2),(i1,i2)}")]),
    ("S5", 2, "{α},{(i2,i3)},{(i4,i5)}", [
        _t(1, "alpha", "{(i1,i2)}", "{(i1,i2)}"), _t(-2, "alpha", "{(i1,i2),(i1,i3)}"),
        _t(-1, "alpha", "{(i1,i2),(i1,i2)}")]),
    ("S6", 1, "{i1},{(α,i2)},{(i3,i4)}", [
        _t(1, "beta", "{(α,i1)}", "{(i1,i2)}"), _t(-1, "{i1,(i1,α)}", "{(i1,i2)}"),
        _t(-1, "{i1,(i1,i2)}", "{(α,i1)}"), _t(-1, "beta", "{(α,i1),(i1,i2)}"),
        _t(1, "{i1,(i1,i2),(i2,α)}"), _t(2, "{i1,(i1,α),(i1,i2)}")]),
    ("S7", 6, "{i1},{(i2,i3)},{(i4,i5)},{(i6,i7)}", [
        _t(1, "beta", "{(i1,i2)}", "{(i1,i2)}", "{(i1,i2)}"),
        _t(-3, "{i1,(i1,i2)}", "{(i1,i2)}", "{(i1,i2)}"),
        _t(-6, "beta", "{(i1,i2),(i1,i3)}", "{(i1,i2)}"),
        _t(-3, "beta", "{(i1,i2),(i1,i2)}", "{(i1,i2)}"),
        _t(6, "{i1,(i1,i2),(i2,i3)}", "{(i1,i2)}"),
        _t(12, "{i1,(i1,i2),(i1,i3)}", "{(i1,i2)}"),
        _t(6, "{i1,(i1,i2),(i1,i2)}", "{(i1,i2)}"),
        _t(12, "beta", "{(i1,i2),(i1,i3),(i1,i4)}"),
        _t(12, "beta", "{(i1,i2),(i1,i3),(i2,i3)}"),
        _t(6, "beta", "{(i1,i2),(i2,i3),(i3,i4)}"),
        _t(6, "beta", "{(i1,i2),(i1,i2),(i1,i3)}"),
        _t(2, "beta", "{(i1,i2),(i1,i2),(i1,i2)}"),
        _t(-18, "{i1,(i1,i2),(i1,i3),(i1,i4)}"), _t(-6, "{i2,(i1,i2),(i1,i3),(i1,i4)}"),
        _t(-12, "{i1,(i1,i2),(i1,i3),(i2,i3)}"), _t(-6, "{i2,(i1,i2),(i2,i3),(i3,i4)}"),
        _t(-12, "{i1,(i1,i2),(i1,i2),(i1,i3)}"), _t(-3, "{i2,(i1,i2),(i1,i2),(i1,i3)}"),
        _t(-3, "{i3,(i1,i2),(i1,i2),(i1,i3)}"), _t(-3, "{i1,(i1,i2),(i1,i2),(i1,i2)}")]),
    ("S8", 6, "{α},{(i2,i3)},{(i4,i5)},{(i6,i7)}", [
        _t(1, "alpha", "{(i1,i2)}", "{(i1,i2)}", "{(i1,i2)}"),
        _t(-6, "alpha", "{(i1,i2),(i1,i3)}", "{(i1,i2)}"),
        _t(-3, "alpha", "{(i1,i2),(i1,i2)}", "{(i1,i2)}"),
        _t(12, "alpha", "{(i1,i2),(i1,i3),(i1,i4)}"),
        _t(12, "alpha", "{(i1,i2),(i1,i3),(i2,i3)}"),
        _t(6, "alpha", "{(i1,i2),(i2,i3),(i3,i4)}"),
        _t(6, "alpha", "{(i1,i2),(i1,i2),(i1,i3)}"),
        _t(2, "alpha", "{(i1,i2),(i1,i2),(i1,i2)}")]),
    ("S9", 2, "{i1},{(α,i2)},{(i3,i4)},{(i5,i6)}", [
        _t(1, "beta", "{(α,i1)}", "{(i1,i2)}", "{(i1,i2)}"),
        _t(-1, "{i1,(i1,α)}", "{(i1,i2)}", "{(i1,i2)}"),
        _t(-2, "{i1,(i1,i2)}", "{(α,i1)}", "{(i1,i2)}"),
        _t(-2, "beta", "{(i1,α),(i1,i3)}", "{(i1,i2)}"),
        _t(-2, "beta", "{(i1,i2),(i1,i3)}", "{(α,i1)}"),
        _t(-1, "beta", "{(i1,i2),(i1,i2)}", "{(α,i1)}"),
        _t(2, "{i1,(i1,i2),(i2,α)}", "{(i1,i2)}"),
        _t(2, "{i1,(i1,i2),(i2,i3)}", "{(α,i1)}"),
        _t(4, "{i1,(i1,α),(i1,i2)}", "{(i1,i2)}"),
        _t(4, "{i1,(i1,i2),(i1,i3)}", "{(α,i1)}"),
        _t(2, "{i1,(i1,i2),(i1,i2)}", "{(α,i1)}"),
        _t(12, "beta", "{(i1,i2),(i1,i3),(i1,i4)}"),
        _t(12, "beta", "{(i1,i2),(i1,i3),(i2,i3)}"),
        _t(6, "beta", "{(i1,i2),(i2,i3),(i3,i4)}"),
        _t(6, "beta", "{(i1,i2),(i1,i2),(i1,i3)}"),
        _t(2, "beta", "{(i1,i2),(i1,i2),(i1,i2)}"),
        _t(-10, "{i1,(i1,α),(i1,i2),(i1,i3)}"), _t(-2, "{i2,(i1,i2),(i1,α),(i1,i3)}"),
        _t(-2, "{i2,(α,i1),(i1,i2),(i2,i3)}"), _t(-2, "{i3,(α,i1),(i1,i2),(i2,i3)}"),
        _t(-3, "{i1,(i1,i2),(i1,i2),(i1,α)}"), _t(-2, "{i2,(i1,i2),(i1,i2),(i1,α)}")]),
]

TARGETS = {name: pattern(p) for name, _, p, _ in PRINTED_IDENTITIES}


def printed_rhs(name: str, d: BiasData, cache: dict | None = None) -> Fraction:
    """Right-hand side of a printed identity divided by its left multiplier."""
    cache = {} if cache is None else cache
    entry = next(e for e in PRINTED_IDENTITIES if e[0] == name)
    _, mult, _, terms = entry
    total = Fraction(0)
    for coef, factors in terms:
        val = coef
        for f in factors:
            if f == "alpha":
                val *= d.alpha
            elif f == "beta":
                val *= d.beta
            else:
                val *= s_moebius(pattern(f), d, cache)
        total += val
    return total / mult


def check_identities(d: BiasData, direct: bool = True) -> dict[str, dict]:
    """Compare, for each of the nine patterns, the printed and expanded forms.

    ``direct`` adds the brute-force value (k <= 12).  The expansion is exact by
    construction; the printed forms are reported, not trusted.
    """
    cache: dict = {}
    out = {}
    for name, p in TARGETS.items():
        agg = s_aggregate(p, d, cache)
        row = {"pattern": str(p), "aggregate": agg, "printed": printed_rhs(name, d, cache)}
        if direct:
            row["direct"] = s_direct(p, d)
        out[name] = row
    return out


def falling(n: int, r: int) -> int:
    return perm(n, r) if 0 <= r <= n else 0
