"""Permutation gadgets: constraints, exhaustive verification and the moments of three chained gadgets.

Indicator p_ab = 1 means output position a takes the input at position b.
Slack variables satisfy d+ = 2B p_ab + v_bk - w_ak and d- = 2B p_ab - v_bk + w_ak.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial, lcm

import numpy as np

from ..exactnum import rat
from ..predicate import LinearForm
from .moments import MomentSpec
from .surgery import VarRange

F = Fraction
SEARCH_CAP = 1 << 24


@dataclass
class Gadget:
    vectors: tuple[tuple[int, ...], ...]
    B: int
    names: list = field(default_factory=list)
    ranges: list = field(default_factory=list)
    constraints: list = field(default_factory=list)  # (label, LinearForm), each required to vanish

    @property
    def m(self) -> int:
        return len(self.vectors)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    def index(self) -> dict:
        return {u: i for i, u in enumerate(self.names)}

    def satisfied(self, values: dict) -> bool:
        """All constraints vanish and every variable lies in its range."""
        x = [values[u] for u in self.names]
        if any(v not in r.values() for v, r in zip(x, self.ranges)):
            return False
        return all(l.value(x) == 0 for _, l in self.constraints)

    def identity_assignment(self) -> dict:
        vals = {}
        for a, v in enumerate(self.vectors):
            for k, x in enumerate(v):
                vals[("v", a, k)] = vals[("w", a, k)] = x
        for a in range(self.m):
            for b in range(self.m):
                vals[("p", a, b)] = int(a == b)
                for k in range(self.n):
                    diff = self.vectors[b][k] - self.vectors[a][k]
                    vals[("d+", a, b, k)] = 2 * self.B * (a == b) + diff
                    vals[("d-", a, b, k)] = 2 * self.B * (a == b) - diff
        return vals


def build_gadget(vectors, B: int) -> Gadget:
    """Variables and linear constraints of a permutation gadget on m vectors."""
    vectors = tuple(tuple(int(x) for x in v) for v in vectors)
    if not vectors or len({len(v) for v in vectors}) != 1:
        raise ValueError("vectors must be nonempty and of equal length")
    if B < 1 or any(abs(x) > B for v in vectors for x in v):
        raise ValueError(f"bound B={B} does not cover the inputs")
    m, n = len(vectors), len(vectors[0])
    g = Gadget(vectors, B)
    for kind, lo, hi in (("v", -B, B), ("w", -B, B)):
        for a in range(m):
            for k in range(n):
                g.names.append((kind, a, k))
                g.ranges.append(VarRange(lo, hi))
    for a in range(m):
        for b in range(m):
            g.names.append(("p", a, b))
            g.ranges.append(VarRange(0, 1))
    for kind in ("d+", "d-"):
        for a in range(m):
            for b in range(m):
                for k in range(n):
                    g.names.append((kind, a, b, k))
                    g.ranges.append(VarRange(-2 * B, 2 * B))
    idx = g.index()

    def form(terms, const=0):
        w = [0] * len(g.names)
        for c, u in terms:
            w[idx[u]] += c
        return LinearForm(tuple(w), const)

    for a in range(m):
        g.constraints.append((f"row {a + 1}", form([(1, ("p", a, b)) for b in range(m)], -1)))
    for b in range(m):
        g.constraints.append((f"column {b + 1}", form([(1, ("p", a, b)) for a in range(m)], -1)))
    for a, b, k in product(range(m), range(m), range(n)):
        # (d+ - d-)/2 = v_bk - w_ak, scaled by 2
        g.constraints.append((f"difference {a + 1},{b + 1},{k + 1}",
                              form([(1, ("d+", a, b, k)), (-1, ("d-", a, b, k)), (-2, ("v", b, k)), (2, ("w", a, k))])))
        g.constraints.append((f"total {a + 1},{b + 1},{k + 1}",
                              form([(1, ("d+", a, b, k)), (1, ("d-", a, b, k)), (-4 * B, ("p", a, b))])))
    return g


@dataclass(frozen=True)
class GadgetVerification:
    ok: bool
    outputs: tuple  # satisfiable outputs, as tuples of vectors
    permutations: tuple  # indicator permutations found, as tuples π with w_a = v_π(a)
    searched: int
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_gadget(g: Gadget, cap: int = SEARCH_CAP) -> GadgetVerification:
    """Enumerate every output and indicator setting with the inputs fixed.

    The slack pair of each cell is determined by the constraints
    (d± = 2B p ± (v - w)), so a (w, p) setting is satisfiable iff those values
    fall in [-2B, 2B]; this is equivalent to enumerating the slacks too.
    Confirms the satisfiable outputs are exactly the permutations of the inputs.
    """
    m, n, B = g.m, g.n, g.B
    n_w = (2 * B + 1) ** (m * n)
    n_p = 1 << (m * m)
    if n_w * n_p > cap:
        raise ValueError(f"search space {n_w * n_p} exceeds cap {cap}")
    v = np.array(g.vectors, dtype=np.int64)
    P = ((np.arange(n_p)[:, None] >> np.arange(m * m)) & 1).reshape(n_p, m, m)
    vals = np.arange(-B, B + 1)
    W = np.array(list(product(vals, repeat=m * n)), dtype=np.int64).reshape(n_w, m, n)
    rows_ok = (P.sum(axis=2) == 1).all(axis=1) & (P.sum(axis=1) == 1).all(axis=1)
    found_out, found_perm = set(), set()
    chunk = max(1, (1 << 22) // max(1, n_p * m * m * n))
    for s in range(0, n_w, chunk):
        Wc = W[s:s + chunk]
        diff = v[None, None, :, :] - Wc[:, :, None, :]  # [w, a, b, k] = v_bk - w_ak
        base = 2 * B * P[None, :, :, :, None]
        dp = base + diff[:, None]
        dm = base - diff[:, None]
        ok = ((np.abs(dp) <= 2 * B) & (np.abs(dm) <= 2 * B)).all(axis=(2, 3, 4)) & rows_ok[None, :]
        for wi, pi in zip(*np.nonzero(ok)):
            found_out.add(tuple(map(tuple, Wc[wi].tolist())))
            found_perm.add(tuple(int(np.argmax(r)) for r in P[pi]))
    perms = {tuple(g.vectors[i] for i in p) for p in permutations(range(m))}
    witness = None
    extra = found_out - perms
    missing = perms - found_out
    bad_perm = [p for p in found_perm if not any(all(g.vectors[p[a]] == w[a] for a in range(m)) for w in found_out)]
    if extra:
        witness = {"non_permutation_output": [list(w) for w in sorted(extra)[0]]}
    elif missing:
        witness = {"unreachable_permutation": [list(w) for w in sorted(missing)[0]]}
    elif bad_perm:
        witness = {"inconsistent_indicators": list(bad_perm[0])}
    return GadgetVerification(witness is None, tuple(sorted(found_out)), tuple(sorted(found_perm)), n_w * n_p, witness)


# ---------------------------------------------------------------------------
# Three chained gadgets.  Stage 0 holds the fixed vectors v, stage 1 the
# outputs of the first gadget (= v'), stage 2 those of the second (= v''),
# stage 3 those of the third (= w'').  Gadget g maps stage g-1 to stage g.

def chain_variables(m: int, n: int) -> list:
    out = [("x", s, a, k) for s in range(4) for a in range(m) for k in range(n)]
    out += [("p", g, a, b) for g in (1, 2, 3) for a in range(m) for b in range(m)]
    out += [(d, g, a, b, k) for d in ("d+", "d-") for g in (1, 2, 3) for a in range(m) for b in range(m) for k in range(n)]
    return out


def var_label(u) -> str:
    """Readable name: v, v', v'', w'' for the stages; p, p', p'' and matching slacks."""
    stage = ["v", "v'", "v''", "w''"]
    prime = ["", "", "'", "''"]
    if u[0] == "x":
        return f"{stage[u[1]]}_{u[2] + 1},{u[3] + 1}"
    if u[0] == "p":
        return f"p{prime[u[1]]}_{u[2] + 1},{u[3] + 1}"
    return f"{u[0][0]}{prime[u[1]]}{u[0][1]}_{u[2] + 1},{u[3] + 1},{u[4] + 1}"


class GadgetMoments:
    """Closed-form expectations for three chained gadgets.

    w''_1 is drawn with E[w''_1k] = c_k and E[w''_1k w''_1l] = c_kl; given
    w''_1 = v_i the three permutations are uniform subject to mapping i to
    position 1.  Stages 1, 2, 3 are then mutually independent and each
    indicator correlates only with its own gadget's indicators and the
    adjacent stage named below.
    """

    def __init__(self, vectors, c, cc, B: int | None = None):
        self.v = [[F(x) for x in vec] for vec in vectors]
        self.m, self.n = len(self.v), len(self.v[0])
        if self.m < 3:
            raise ValueError("three chained gadgets need m >= 3")
        m, n = self.m, self.n
        self.B = max(abs(x) for vec in self.v for x in vec) if B is None else B
        self.a = [sum(vec[k] for vec in self.v) / m for k in range(n)]
        self.aa = [[sum(vec[k] * vec[l] for vec in self.v) / m for l in range(n)] for k in range(n)]
        self.c = [rat(x) for x in c]
        self.cc = [[rat(x) for x in row] for row in cc]

    def variables(self) -> list:
        return chain_variables(self.m, self.n)

    # basic variables are stage coordinates and indicators; slacks are linear in them
    def _expand(self, u):
        if u[0] in ("d+", "d-"):
            _, g, a, b, k = u
            s = 1 if u[0] == "d+" else -1
            return [(F(2 * self.B), ("p", g, a, b)), (F(s), ("x", g - 1, b, k)), (F(-s), ("x", g, a, k))]
        return [(F(1), u)]

    def _mean_x(self, s, a, k) -> Fraction:
        m = self.m
        if s == 0:
            return self.v[a][k]
        if s in (1, 2):
            return self.a[k]
        return self.c[k] if a == 0 else (m * self.a[k] - self.c[k]) / (m - 1)

    def _mean_basic(self, u) -> Fraction:
        return self._mean_x(*u[1:]) if u[0] == "x" else F(1, self.m)

    def _xx(self, s, a, k, t, b, l) -> Fraction:
        m, A, AA, c, cc = self.m, self.a, self.aa, self.c, self.cc
        if s == 0 or t == 0 or s != t:
            return self._mean_x(s, a, k) * self._mean_x(t, b, l)
        if s in (1, 2):
            return AA[k][l] if a == b else (m * A[k] * A[l] - AA[k][l]) / (m - 1)
        if a == b == 0:
            return cc[k][l]
        if a == b:
            return (m * AA[k][l] - cc[k][l]) / (m - 1)
        if a == 0:
            return (m * A[l] * c[k] - cc[k][l]) / (m - 1)
        if b == 0:
            return (m * A[k] * c[l] - cc[k][l]) / (m - 1)
        return (m * m * A[k] * A[l] - m * A[l] * c[k] - m * A[k] * c[l] - m * AA[k][l] + 2 * cc[k][l]) / ((m - 1) * (m - 2))

    def _px(self, g, a, b, s, c_, k) -> Fraction:
        m, A, c = self.m, self.a, self.c
        if g == 1 and s == 1:
            vb = self.v[b][k]
            return vb / m if c_ == a else (m * A[k] - vb) / (m * (m - 1))
        if g == 3 and s == 2:
            if c_ == b:
                return c[k] / m if a == 0 else (m * A[k] - c[k]) / (m * (m - 1))
            if a == 0:
                return (m * A[k] - c[k]) / (m * (m - 1))
            return ((m - 2) * m * A[k] + c[k]) / (m * (m - 1) ** 2)
        return self._mean_x(s, c_, k) / m

    def _pp(self, g, a, b, h, c, d) -> Fraction:
        m = self.m
        if g != h:
            return F(1, m * m)
        if a == c:
            return F(int(b == d), m)
        return F(int(b != d), m * (m - 1))

    def _basic_pair(self, u, w) -> Fraction:
        if u[0] == "x" and w[0] == "x":
            return self._xx(*u[1:], *w[1:])
        if u[0] == "p" and w[0] == "p":
            return self._pp(*u[1:], *w[1:])
        if u[0] == "x":
            u, w = w, u
        return self._px(*u[1:], *w[1:])

    def mean(self, u) -> Fraction:
        return sum((c * self._mean_basic(b) for c, b in self._expand(u)), F(0))

    def moment(self, u, w) -> Fraction:
        """E[u w]; u == w gives the second moment."""
        return sum((cu * cw * self._basic_pair(bu, bw) for cu, bu in self._expand(u) for cw, bw in self._expand(w)), F(0))

    def matrix(self):
        """All moments at once: (variables, mean numerators, second-moment numerators, denominator).

        Slacks are expanded through an integer matrix, so this is much faster
        than calling :meth:`moment` pair by pair.
        """
        names = self.variables()
        basics = [u for u in names if u[0] in ("x", "p")]
        bi = {u: j for j, u in enumerate(basics)}
        mb = [self._mean_basic(u) for u in basics]
        Mb = [[self._basic_pair(u, w) for w in basics] for u in basics]
        D = lcm(*(x.denominator for x in mb), *(x.denominator for row in Mb for x in row))
        mb = np.array([int(x * D) for x in mb], dtype=object)
        Mb = np.array([[int(x * D) for x in row] for row in Mb], dtype=object)
        T = np.zeros((len(names), len(basics)), dtype=object)
        for r, u in enumerate(names):
            for c, b in self._expand(u):
                T[r, bi[b]] += int(c)
        return names, T @ mb, T @ Mb @ T.T, D

    def spec(self, variables=None) -> MomentSpec:
        variables = self.variables() if variables is None else list(variables)
        out = MomentSpec()
        for u in variables:
            out.set(u, self.mean(u), self.moment(u, u))
        for i, u in enumerate(variables):
            for w in variables[i + 1:]:
                out.set_pair(u, w, self.moment(u, w))
        return out


def gadget_moments(vectors, base: MomentSpec, B: int | None = None) -> GadgetMoments:
    """Moments of every chained-gadget variable from the moments of w''_1.

    ``base`` lists the n coordinates of w''_1 in order.  The vectors themselves
    are needed, not only their averages a_k and a_kl, because the fixed inputs
    and the first gadget's indicators correlate with individual vectors.
    """
    names = base.names
    c = [base.mean[u] for u in names]
    cc = [[base.get_pair(u, w) for w in names] for u in names]
    return GadgetMoments(vectors, c, cc, B)


def chain_oracle(vectors, q, B: int | None = None):
    """Brute-force moments by enumerating every (i, σ, σ', σ'') with σ''σ'σ(i) = 1.

    Returns (variables, mean numerators, second-moment numerator matrix, denominator).
    """
    m, n = len(vectors), len(vectors[0])
    v = np.array(vectors, dtype=np.int64)
    B = int(np.abs(v).max()) if B is None else B
    q = [rat(x) for x in q]
    L = lcm(*(x.denominator for x in q))
    names = chain_variables(m, n)
    col = {u: j for j, u in enumerate(names)}
    perms = [np.array(p) for p in permutations(range(m))]
    rows, weights = [], []
    for i in range(m):
        if q[i] == 0:
            continue
        finals = [r for r in perms if r[0] == i]
        for r1 in perms:
            for p2 in perms:
                r2 = r1[p2]
                inv2 = np.argsort(r2)
                for r3 in finals:
                    pi = [r1, p2, inv2[r3]]
                    stages = [np.arange(m), r1, r2, r3]
                    x = np.zeros(len(names), dtype=np.int64)
                    for s in range(4):
                        block = v[stages[s]].ravel()
                        j0 = col[("x", s, 0, 0)]
                        x[j0:j0 + m * n] = block
                    for g in (1, 2, 3):
                        P = np.zeros((m, m), dtype=np.int64)
                        P[np.arange(m), pi[g - 1]] = 1
                        j0 = col[("p", g, 0, 0)]
                        x[j0:j0 + m * m] = P.ravel()
                        prev = v[stages[g - 1]]
                        cur = v[stages[g]]
                        diff = prev[None, :, :] - cur[:, None, :]  # [a, b, k] = in_bk - out_ak
                        for d, s_ in (("d+", 1), ("d-", -1)):
                            j0 = col[(d, g, 0, 0, 0)]
                            x[j0:j0 + m * m * n] = (2 * B * P[:, :, None] + s_ * diff).ravel()
                    rows.append(x)
                    weights.append(int(q[i] * L))
    X = np.array(rows, dtype=np.int64)
    w = np.array(weights, dtype=np.int64)
    denom = L * factorial(m) ** 2 * factorial(m - 1)
    if np.abs(X).max() ** 2 * w.sum() >= 1 << 62:
        X, w = X.astype(object), w.astype(object)
    means = w @ X
    second = (X * w[:, None]).T @ X
    return names, means, second, denom
