"""Rounding operators acting on tables of monomial expectations.

A rounding scheme is tracked through E[x_I] for every subset I up to a degree
bound.  Starting from the all-ones scheme (every E[x_I] = 1), three operators act:

χ single (V)
    multiplies each x_i, i ∈ V, by an independent sign with mean α·b_i.
χ pair (V, V′)
    picks a Gaussian direction w and multiplies x_i, i ∈ V ∪ V′, by sign(w·u_i),
    where the u_i factor αB + (1-α)Id.
parity (V_1..V_j)
    the signed combination Σ_y 2^{-j} Π y_a · (x_i → y_a x_i on V_a).

Subsets are bitmasks over 0-based variable indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import asin, pi
from typing import Sequence

import numpy as np

from ..polytope import BiasProfile
from ..predicate import popcount

MC_SAMPLES = 100_000


class NotPSD(ValueError):
    """αB + (1-α)Id has a negative eigenvalue on the requested block."""


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def _indices(m: int) -> list[int]:
    return [i for i in range(m.bit_length()) if m >> i & 1]


@dataclass
class ExpectationMap:
    """E[x_I] for every I ⊆ [0, n) with |I| <= degree.

    ``stderr`` holds Monte Carlo standard errors of estimated entries.  A signed
    combination of schemes need not keep E[x_∅] = 1, so ``signed`` relaxes that.
    """

    n: int
    degree: int
    values: dict = field(default_factory=dict)
    stderr: dict = field(default_factory=dict)
    signed: bool = False

    @classmethod
    def all_ones(cls, n: int, degree: int | None = None) -> "ExpectationMap":
        degree = n if degree is None else degree
        vals = {_mask(I): Fraction(1) for d in range(degree + 1) for I in combinations(range(n), d)}
        return cls(n, degree, vals)

    def __getitem__(self, I) -> object:
        return self.values[I if isinstance(I, int) else _mask(I)]

    def copy(self, **kw) -> "ExpectationMap":
        return ExpectationMap(self.n, self.degree, dict(self.values), dict(self.stderr),
                              kw.get("signed", self.signed))

    def validate(self, tol: float = 1e-12) -> None:
        if not self.signed and self.values.get(0) != 1:
            raise ValueError("E[x_∅] must be 1")
        for m, v in self.values.items():
            if abs(v) > 1 + tol + 4 * self.stderr.get(m, 0):
                raise ValueError(f"E[x_{_indices(m)}] = {v} lies outside [-1, 1]")

    def combine(self, other: "ExpectationMap", c1=1, c2=1) -> "ExpectationMap":
        """c1·self + c2·other (a signed mixture of two schemes)."""
        vals = {m: c1 * v + c2 * other.values[m] for m, v in self.values.items()}
        err = {m: float(np.hypot(abs(c1) * self.stderr.get(m, 0), abs(c2) * other.stderr.get(m, 0)))
               for m in set(self.stderr) | set(other.stderr)}
        return ExpectationMap(self.n, self.degree, vals, err, True)


def apply_chi_single(E: ExpectationMap, alpha, V: Sequence[int], B: BiasProfile) -> ExpectationMap:
    """Exact: E[x_I] gains the factor Π_{i ∈ I∩V} α·b_i."""
    if not 0 <= alpha <= 1:
        raise ValueError("α must lie in [0, 1]")
    Vm = _mask(V)
    out = E.copy()
    for m, v in E.values.items():
        for i in _indices(m & Vm):
            v = v * alpha * B.b[i]
        out.values[m] = v
        if m in out.stderr:
            f = 1.0
            for i in _indices(m & Vm):
                f *= abs(float(alpha * B.b[i]))
            out.stderr[m] *= f
    return out


def pair_matrix(alpha, B: BiasProfile, W: Sequence[int]) -> np.ndarray:
    """αB + (1-α)Id restricted to the indices W, in floating point."""
    W = list(W)
    return np.array([[1.0 if i == j else float(alpha * B.pair(i, j)) for j in W] for i in W])


def factor_vectors(M: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Rows u_i with u_i·u_j = M_ij; raises NotPSD on a negative eigenvalue."""
    w, Q = np.linalg.eigh(M)
    if w.min(initial=0.0) < -tol:
        raise NotPSD(f"minimum eigenvalue {w.min():.3g}")
    return Q * np.sqrt(np.clip(w, 0, None))


def apply_chi_pair(E: ExpectationMap, alpha, V: Sequence[int], Vp: Sequence[int], B: BiasProfile,
                   rng: np.random.Generator | None = None, samples: int = MC_SAMPLES) -> ExpectationMap:
    """Random-hyperplane signs on V ∪ V′.

    |I∩W| = 1 gives 0 and |I∩W| = 2 gives (2/π)·arcsin(M_ij) exactly; larger
    intersections are Monte Carlo estimates with standard errors in ``stderr``.
    """
    if not 0 <= alpha <= 1:
        raise ValueError("α must lie in [0, 1]")
    W = sorted(set(V) | set(Vp))
    Wm = _mask(W)
    U = factor_vectors(pair_matrix(alpha, B, W))
    pos = {i: r for r, i in enumerate(W)}
    signs = None
    mult: dict[int, tuple[float, float]] = {}
    out = E.copy()
    for m, v in E.values.items():
        J = m & Wm
        c = popcount(J)
        if c == 0:
            continue
        if J not in mult:
            idx = _indices(J)
            if c == 1:
                mult[J] = (0.0, 0.0)
            elif c == 2:
                i, j = idx
                val = float(np.clip(U[pos[i]] @ U[pos[j]], -1, 1))
                mult[J] = (2 / pi * asin(val), 0.0)
            else:
                if signs is None:
                    rng = np.random.default_rng() if rng is None else rng
                    g = rng.standard_normal((samples, U.shape[1]))
                    signs = np.where(g @ U.T >= 0, 1, -1).astype(np.int8)
                prod = np.prod(signs[:, [pos[i] for i in idx]], axis=1, dtype=np.int64)
                mult[J] = (float(prod.mean()), float(prod.std(ddof=1) / np.sqrt(samples)))
        f, se = mult[J]
        fv = float(v)
        out.values[m] = fv * f
        out.stderr[m] = float(np.hypot(abs(fv) * se, abs(f) * E.stderr.get(m, 0.0)))
    return out


def _check_parts(parts: Sequence[Sequence[int]]) -> list[int]:
    masks = [_mask(p) for p in parts]
    seen = 0
    for m in masks:
        if m & seen:
            raise ValueError("parity parts must be disjoint")
        seen |= m
    return masks


def apply_parity(E: ExpectationMap, parts: Sequence[Sequence[int]]) -> ExpectationMap:
    """Keep E[x_I] iff |I∩V_a| is odd for every part; zero it otherwise."""
    masks = _check_parts(parts)
    out = E.copy(signed=True)
    for m in E.values:
        if not all(popcount(m & pm) % 2 == 1 for pm in masks):
            out.values[m] = Fraction(0) if isinstance(E.values[m], Fraction) else 0.0
            out.stderr.pop(m, None)
    return out


def apply_flip(E: ExpectationMap, parts: Sequence[Sequence[int]], y: Sequence[int]) -> ExpectationMap:
    """Deterministic x_i → y_a x_i on part V_a; one branch of the parity operator."""
    masks = _check_parts(parts)
    out = E.copy()
    for m, v in E.values.items():
        s = 1
        for pm, ya in zip(masks, y):
            if popcount(m & pm) % 2:
                s *= ya
        out.values[m] = s * v
    return out


# --------------------------------------------------------------------------
# scheme mixtures

@dataclass
class SignedSchemeMixture:
    """Σ_q c_q · (scheme q), each scheme an operator list applied to all-ones.

    Operators are tuples: ("chi_single", V), ("chi_pair", V, V′) and
    ("flip", parts, y).  The order within each list is the composition order.
    """

    n: int
    alpha: object
    profile: BiasProfile
    terms: list = field(default_factory=list)

    def add(self, coef, ops) -> None:
        if not np.isfinite(float(coef)):
            raise ValueError("mixture coefficients must be finite")
        self.terms.append((coef, tuple(ops)))

    def expectations(self, degree: int, samples: int = MC_SAMPLES, seed: int = 0) -> ExpectationMap:
        """Σ_q c_q E_q.

        Every χ pair draws from a generator seeded with ``seed``, so all terms share
        common random numbers and the combination is reproducible.
        """
        total = None
        for coef, ops in self.terms:
            E = ExpectationMap.all_ones(self.n, degree)
            for op in ops:
                if op[0] == "chi_single":
                    E = apply_chi_single(E, self.alpha, op[1], self.profile)
                elif op[0] == "chi_pair":
                    E = apply_chi_pair(E, self.alpha, op[1], op[2], self.profile,
                                       np.random.default_rng(seed), samples)
                elif op[0] == "flip":
                    E = apply_flip(E, op[1], op[2])
                else:
                    raise ValueError(f"unknown operator {op[0]!r}")
            if total is None:
                total = ExpectationMap(self.n, degree, {m: coef * v for m, v in E.values.items()},
                                       {m: abs(float(coef)) * e for m, e in E.stderr.items()}, True)
            else:
                total = total.combine(E, 1, coef)
        return total

    def describe(self) -> list[dict]:
        return [{"coefficient": c, "operators": [_jsonable(op) for op in ops]} for c, ops in self.terms]


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


# --------------------------------------------------------------------------
# literal simulation

def simulate(ops: Sequence[tuple], n: int, alpha: float, B: BiasProfile, masks: Sequence[int],
             samples: int, rng: np.random.Generator) -> dict[int, tuple[float, float]]:
    """Run the random processes literally and estimate E[weight · x_I].

    ``("parity", parts)`` is simulated as a uniformly random y with importance
    weight 2^j Π y_a · 2^{-j}, i.e. the signed combination sampled term by term.
    """
    x = np.ones((samples, n), dtype=np.int8)
    weight = np.ones(samples, dtype=np.int8)
    for op in ops:
        kind = op[0]
        if kind == "chi_single":
            for i in op[1]:
                p_plus = (1 + float(alpha * B.b[i])) / 2
                s = np.where(rng.random(samples) < p_plus, 1, -1).astype(np.int8)
                x[:, i] *= s
        elif kind == "chi_pair":
            W = sorted(set(op[1]) | set(op[2]))
            U = factor_vectors(pair_matrix(alpha, B, W))
            g = rng.standard_normal((samples, U.shape[1]))
            x[:, W] *= np.where(g @ U.T >= 0, 1, -1).astype(np.int8)
        elif kind == "parity":
            for part in op[1]:
                y = np.where(rng.random(samples) < 0.5, 1, -1).astype(np.int8)
                x[:, list(part)] *= y[:, None]
                weight *= y
        else:
            raise ValueError(f"unknown operator {kind!r}")
    out = {}
    for m in masks:
        idx = _indices(m)
        v = weight.astype(np.int64) * (np.prod(x[:, idx], axis=1, dtype=np.int64) if idx else 1)
        out[m] = (float(np.mean(v)), float(np.std(v, ddof=1) / np.sqrt(samples)))
    return out


# --------------------------------------------------------------------------
# monomial synthesis

@dataclass(frozen=True)
class Monomial:
    """Π b_{role} · Π b_{role, role'}; roles index the parts of a partition."""

    singles: tuple[int, ...] = ()
    pairs: tuple[tuple[int, int], ...] = ()

    @property
    def degree(self) -> int:
        return len(self.singles) + len(self.pairs)

    def roles(self) -> list[int]:
        return list(self.singles) + [r for p in self.pairs for r in p]


@dataclass
class SynthesisReport:
    mixture: SignedSchemeMixture
    targets: list[dict]
    off_target: list[dict]
    alpha: float
    samples: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(t["ok"] for t in self.targets) and all(t["ok"] for t in self.off_target)


def build_mixture(p: Monomial, parts: Sequence[Sequence[int]], alpha, B: BiasProfile) -> SignedSchemeMixture:
    """χ single per b_i factor, χ pair per b_ij factor, then the parity split."""
    roles = p.roles()
    if len(set(roles)) != len(roles):
        raise ValueError("each part may carry at most one factor")
    if any(not 0 <= r < len(parts) for r in roles):
        raise ValueError("monomial role outside the partition")
    _check_parts(parts)
    ops = [("chi_single", tuple(parts[r])) for r in p.singles]
    ops += [("chi_pair", tuple(parts[r]), tuple(parts[t])) for r, t in p.pairs]
    mix = SignedSchemeMixture(B.n, alpha, B)
    j = len(parts)
    for y in product((1, -1), repeat=j):
        mix.add(Fraction(int(np.prod(y)), 2 ** j), ops + [("flip", tuple(map(tuple, parts)), y)])
    return mix


def _achieved(p: Monomial, parts, alpha, B: BiasProfile, pick: Sequence[int]) -> tuple[float, float]:
    """(exact achieved value, leading term) at the target picking pick[r] in part r."""
    val, lead = 1.0, 1.0
    for r in p.singles:
        v = float(alpha * B.b[pick[r]])
        val *= v
        lead *= v
    for r, t in p.pairs:
        bij = float(B.pair(pick[r], pick[t]))
        val *= 2 / pi * asin(float(alpha) * bij)
        lead *= 2 / pi * float(alpha) * bij
    return val, lead


def synthesize_monomial(p: Monomial, parts: Sequence[Sequence[int]], alpha, B: BiasProfile,
                        samples: int = MC_SAMPLES, seed: int = 0, max_extra: int = 2) -> SynthesisReport:
    """Compose the operators and check the targets and off-target decay.

    Targets pick one variable per part; their achieved expectation must equal
    Π α b_i · Π (2/π) arcsin(α b_ij).  Off-target monomials surviving parity (odd
    in every part, larger than one in some) must shrink by 2^{-(deg+1)} or more
    when α halves; Monte Carlo entries get a 4σ allowance.
    """
    degree = len(parts) + max_extra
    report_t, report_o = [], []
    maps = {}
    for a in (alpha, alpha / 2):
        maps[a] = build_mixture(p, parts, a, B).expectations(degree, samples, seed)
    E, Eh = maps[alpha], maps[alpha / 2]
    for pick in product(*parts):
        m = _mask(pick)
        exact, lead = _achieved(p, parts, alpha, B, pick)
        got = float(E.values[m])
        report_t.append({"subset": [i + 1 for i in pick], "achieved": got, "expected": exact,
                         "leading": lead, "ok": abs(got - exact) <= 1e-12 + 4 * E.stderr.get(m, 0.0)})
    masks = [_mask(pm) for pm in parts]
    factor = 2.0 ** -(p.degree + 1)
    for m, v in E.values.items():
        counts = [popcount(m & pm) for pm in masks]
        if popcount(m) <= len(parts) or not all(c % 2 for c in counts) or m & ~sum(masks):
            continue
        big, small = abs(float(v)), abs(float(Eh.values[m]))
        slack = 4 * (E.stderr.get(m, 0.0) + Eh.stderr.get(m, 0.0))
        report_o.append({"subset": [i + 1 for i in _indices(m)], "at_alpha": float(v),
                         "at_half_alpha": float(Eh.values[m]), "stderr": slack / 4,
                         "ok": small <= factor * big * (1 + 1e-9) + 1e-15 + slack})
    return SynthesisReport(build_mixture(p, parts, alpha, B), report_t, report_o, float(alpha), samples, seed)
