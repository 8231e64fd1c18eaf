"""Exact rational scalars, symmetric matrices, PSD testing and convex hull membership.

All arithmetic here is done with :class:`fractions.Fraction`, which is always
kept in lowest terms with a positive denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


def rat(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected because they are never exact in the verification paths.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rat_str(q) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class SymMatrix:
    """Symmetric matrix holding only its upper triangle."""

    __slots__ = ("n", "_upper")

    def __init__(self, n: int, entries: dict | None = None):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.n = n
        self._upper: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            self[i, j] = v

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SymMatrix":
        n = len(rows)
        m = cls(n)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix must be square")
            for j in range(i, n):
                a, b = rat(rows[i][j]), rat(rows[j][i])
                if a != b:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")
                m[i, j] = a
        return m

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(n, {(i, i): 1 for i in range(n)})

    def _key(self, i: int, j: int) -> tuple[int, int]:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"index ({i},{j}) out of range for n={self.n}")
        return (i, j) if i <= j else (j, i)

    def __getitem__(self, ij) -> Fraction:
        return self._upper.get(self._key(*ij), Fraction(0))

    def __setitem__(self, ij, value) -> None:
        key = self._key(*ij)
        value = rat(value)
        if value:
            self._upper[key] = value
        else:
            self._upper.pop(key, None)

    def rows(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def quad(self, v: Sequence) -> Fraction:
        """vᵀ M v."""
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        v = [rat(x) for x in v]
        total = Fraction(0)
        for (i, j), m in self._upper.items():
            total += m * v[i] * v[j] * (1 if i == j else 2)
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self.n == other.n and self._upper == other._upper

    def __repr__(self) -> str:
        return f"SymMatrix({self.rows()!r})"


@dataclass(frozen=True)
class PSDResult:
    psd: bool
    witness: tuple[Fraction, ...] | None = None
    value: Fraction | None = None  # witnessᵀ M witness when not PSD

    def __bool__(self) -> bool:
        return self.psd


def psd_check(M: SymMatrix) -> PSDResult:
    """Decide positive semidefiniteness by pivoted symmetric elimination.

    A negative pivot, or a zero pivot with a nonzero off-diagonal entry in its
    row, refutes PSD; the refuting vector of the Schur complement is lifted back
    through the elimination steps into a witness with vᵀMv < 0.
    """
    n = M.n
    # prefer the simplest refutations: e_i, e_i - e_j, e_i + e_j
    for i in range(n):
        if M[i, i] < 0:
            w = tuple(Fraction(int(t == i)) for t in range(n))
            return PSDResult(False, w, M[i, i])
    for s in (-1, 1):
        for i in range(n):
            for j in range(i + 1, n):
                val = M[i, i] + M[j, j] + 2 * s * M[i, j]
                if val < 0:
                    w = tuple(Fraction(1 if t == i else s if t == j else 0) for t in range(n))
                    return PSDResult(False, w, val)
    S = M.rows()
    active = list(range(n))
    steps: list[tuple[int, list[tuple[int, Fraction]]]] = []

    def lift(u: dict[int, Fraction]) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * n
        for i, x in u.items():
            v[i] = x
        for p, mult in reversed(steps):
            # v_p minimizes the quadratic form given the later coordinates
            v[p] = -sum((c * v[i] for i, c in mult), Fraction(0))
        return tuple(v)

    while active:
        neg = [i for i in active if S[i][i] < 0]
        if neg:
            w = lift({neg[0]: Fraction(1)})
            return PSDResult(False, w, M.quad(w))
        pos = [i for i in active if S[i][i] > 0]
        if not pos:
            for i in active:
                for j in active:
                    if i < j and S[i][j] != 0:
                        # u = t e_i + e_j with uᵀSu = 2 t S_ij + S_jj = -1
                        t = -(S[j][j] + 1) / (2 * S[i][j])
                        w = lift({i: t, j: Fraction(1)})
                        return PSDResult(False, w, M.quad(w))
            return PSDResult(True)
        p = pos[0]
        active.remove(p)
        piv = S[p][p]
        mult = [(i, S[i][p] / piv) for i in active if S[i][p] != 0]
        for i, ci in mult:
            for j in active:
                if S[p][j] != 0:
                    S[i][j] -= ci * S[p][j]
        for i in active:
            S[i][p] = S[p][i] = Fraction(0)
        steps.append((p, mult))
    return PSDResult(True)


@dataclass(frozen=True)
class HullResult:
    """Either convex weights (member) or a separating hyperplane (non-member).

    The hyperplane (h, c) satisfies h·q + c >= 0 for every point q and h·p + c < 0.
    """

    member: bool
    weights: tuple[Fraction, ...] | None = None
    normal: tuple[Fraction, ...] | None = None
    offset: Fraction | None = None

    def __bool__(self) -> bool:
        return self.member

    def check(self, p: Sequence, pts: Sequence[Sequence]) -> bool:
        """Re-verify the certificate by direct substitution."""
        p = [rat(x) for x in p]
        if self.member:
            w = self.weights
            if any(a < 0 for a in w) or sum(w) != 1:
                return False
            for d in range(len(p)):
                if sum((a * rat(q[d]) for a, q in zip(w, pts)), Fraction(0)) != p[d]:
                    return False
            return True
        h, c = self.normal, self.offset
        if dot(h, p) + c >= 0:
            return False
        return all(dot(h, [rat(x) for x in q]) + c >= 0 for q in pts)


def _phase_one(A: list[list[Fraction]], b: list[Fraction]):
    """Minimize the sum of artificials for A x = b, x >= 0 with b >= 0.

    Smallest-index (Bland) entering and leaving rules guarantee termination.
    Returns (x, y) where x is the final primal point over the original columns
    and y the final duals of the equality rows.
    """
    m, n = len(A), len(A[0]) if A else 0
    # tableau rows: [A | I | b]
    T = [list(A[r]) + [Fraction(int(r == s)) for s in range(m)] + [b[r]] for r in range(m)]
    basis = [n + r for r in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    width = n + m

    while True:
        # reduced costs: c_j - c_B B^-1 A_j
        red = []
        for j in range(width):
            red.append(cost[j] - sum((cost[basis[r]] * T[r][j] for r in range(m)), Fraction(0)))
        entering = next((j for j in range(width) if red[j] < 0), None)
        if entering is None:
            break
        best = None
        for r in range(m):
            a = T[r][entering]
            if a > 0:
                ratio = T[r][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:  # cannot happen: phase one is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        r = best[1]
        piv = T[r][entering]
        T[r] = [v / piv for v in T[r]]
        for s in range(m):
            if s != r and T[s][entering] != 0:
                f = T[s][entering]
                T[s] = [vs - f * vr for vs, vr in zip(T[s], T[r])]
        basis[r] = entering

    x = [Fraction(0)] * width
    for r in range(m):
        x[basis[r]] = T[r][-1]
    # duals: y_r = 1 - reduced cost of artificial column r
    y = []
    for r in range(m):
        j = n + r
        rc = cost[j] - sum((cost[basis[s]] * T[s][j] for s in range(m)), Fraction(0))
        y.append(cost[j] - rc)
    return x, y


def hull_member(p: Sequence, pts: Sequence[Sequence]) -> HullResult:
    """Decide p ∈ conv(pts) by an exact phase-one simplex.

    Feasible: the basic solution gives convex weights.  Infeasible: the phase-one
    duals give a Farkas vector, read as a separating hyperplane.
    """
    if not pts:
        raise ValueError("empty point set")
    d = len(p)
    for q in pts:
        if len(q) != d:
            raise ValueError(f"dimension mismatch: point of length {len(q)}, target of length {d}")
    p = [rat(x) for x in p]
    P = [[rat(x) for x in q] for q in pts]
    N = len(P)
    rows = [[P[i][k] for i in range(N)] for k in range(d)] + [[Fraction(1)] * N]
    rhs = p + [Fraction(1)]
    flip = [1] * (d + 1)
    for r in range(d + 1):
        if rhs[r] < 0:
            flip[r] = -1
            rows[r] = [-v for v in rows[r]]
            rhs[r] = -rhs[r]
    x, y = _phase_one(rows, rhs)
    if sum(x[N:]) == 0:
        res = HullResult(True, weights=tuple(x[:N]))
    else:
        # y A_j <= 0 for every column and y b > 0; undo the row flips and negate
        g = [-y[r] * flip[r] for r in range(d + 1)]
        res = HullResult(False, normal=tuple(g[:d]), offset=g[d])
    assert res.check(p, P), "internal error: certificate failed substitution"
    return res


def principal_minors(rows: Sequence[Sequence]) -> list[Fraction]:
    """All principal minors of a symmetric matrix, by exact elimination.

    PSD holds iff every principal minor (not only the leading ones) is >= 0;
    this is the brute-force oracle used in the tests.
    """
    from itertools import combinations

    n = len(rows)
    out = []
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            sub = [[rat(rows[i][j]) for j in idx] for i in idx]
            out.append(det(sub))
    return out


def det(A: list[list[Fraction]]) -> Fraction:
    A = [list(r) for r in A]
    n = len(A)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        result *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return sign * result


def lcm_denominator(values: Iterable) -> int:
    from math import lcm

    out = 1
    for v in values:
        out = lcm(out, rat(v).denominator)
    return out
