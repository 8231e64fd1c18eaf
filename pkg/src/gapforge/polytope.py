"""KTW polytope machinery: embeddings, bias profiles, projections and membership.

A point over k coordinates lists the k degree-1 entries, then the pair entries
(i, j), i < j, in lexicographic order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exactnum import HullResult, SymMatrix, hull_member, psd_check, rat
from .predicate import Constraint, Predicate, assignment

ARITY_CAP = 20


def pair_list(k: int) -> list[tuple[int, int]]:
    """0-based pairs in the embedding's lexicographic order."""
    return list(combinations(range(k), 2))


def embed(x: Sequence[int]) -> tuple[int, ...]:
    """p_x: the assignment followed by all pairwise products."""
    if any(v not in (1, -1) for v in x):
        raise ValueError("embed takes a ±1 assignment")
    return tuple(x) + tuple(x[i] * x[j] for i, j in pair_list(len(x)))


def point_arity(dim: int) -> int:
    k = 0
    while k + k * (k - 1) // 2 < dim:
        k += 1
    if k + k * (k - 1) // 2 != dim:
        raise ValueError(f"{dim} is not a valid point dimension")
    return k


@dataclass(frozen=True)
class BiasProfile:
    """First moments b_i and pair moments b_ij (0-based, i < j; unlisted pairs are 0)."""

    n: int
    b: tuple[Fraction, ...]
    bij: dict = field(default_factory=dict)

    def __post_init__(self):
        b = tuple(rat(v) for v in self.b)
        if len(b) != self.n:
            raise ValueError(f"expected {self.n} first moments, got {len(b)}")
        pairs = {}
        for (i, j), v in dict(self.bij).items():
            i, j = (i, j) if i < j else (j, i)
            if i == j or not (0 <= i and j < self.n):
                raise ValueError(f"invalid pair index ({i},{j})")
            v = rat(v)
            if v:
                pairs[(i, j)] = v
        for v in list(b) + list(pairs.values()):
            if not -1 <= v <= 1:
                raise ValueError(f"moment {v} outside [-1, 1]")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "bij", pairs)

    @classmethod
    def zero(cls, n: int) -> "BiasProfile":
        return cls(n, (0,) * n)

    def pair(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(1)
        return self.bij.get((i, j) if i < j else (j, i), Fraction(0))

    def bordered(self) -> SymMatrix:
        """(n+1)×(n+1) matrix with 1 in the corner, b on the border and b_ij inside."""
        M = SymMatrix(self.n + 1)
        M[0, 0] = 1
        for i, v in enumerate(self.b):
            M[0, i + 1] = v
            M[i + 1, i + 1] = 1
        for (i, j), v in self.bij.items():
            M[i + 1, j + 1] = v
        return M

    def is_psd(self):
        return psd_check(self.bordered())

    def __eq__(self, other) -> bool:
        return isinstance(other, BiasProfile) and (self.n, self.b, self.bij) == (other.n, other.b, other.bij)

    def __hash__(self) -> int:
        return hash((self.n, self.b, tuple(sorted(self.bij.items()))))


def profile_of_distribution(dist: Iterable[tuple[Sequence[int], Fraction]], n: int) -> BiasProfile:
    """Moments of a distribution over ±1 assignments of n variables."""
    dist = [(tuple(x), rat(p)) for x, p in dist]
    b = [sum((p * x[i] for x, p in dist), Fraction(0)) for i in range(n)]
    bij = {(i, j): sum((p * x[i] * x[j] for x, p in dist), Fraction(0)) for i, j in pair_list(n)}
    return BiasProfile(n, tuple(b), bij)


def bias_projection(B: BiasProfile, I: Sequence[int]) -> tuple[Fraction, ...]:
    """p_{B,I}: the entries of B indexed by I (0-based) in embedding order."""
    for i in I:
        if not 0 <= i < B.n:
            raise IndexError(f"index {i} out of range for n={B.n}")
    if len(set(I)) != len(I):
        raise ValueError("projection indices must be distinct")
    return tuple(B.b[i] for i in I) + tuple(B.pair(I[a], I[c]) for a, c in pair_list(len(I)))


def signed_projection(B: BiasProfile, C: Constraint) -> tuple[Fraction, ...]:
    """The point of B seen through a constraint's sign flips: z_i b_{φ(i)}, z_i z_j b_{φ(i)φ(j)}."""
    z, phi = C.signs, C.phi
    return tuple(z[i] * B.b[phi[i]] for i in range(C.k)) + tuple(
        z[i] * z[j] * B.pair(phi[i], phi[j]) for i, j in pair_list(C.k)
    )


def _check_arity(k: int, cap: int) -> None:
    if k > cap:
        raise ValueError(f"arity {k} exceeds cap {cap}")


def ktw_vertices(C: Constraint | Predicate, cap: int = ARITY_CAP) -> list[tuple[int, ...]]:
    """{p_x : C(x) = 1}, with x the values of x_{φ(1)}, ..., x_{φ(k)}."""
    if isinstance(C, Predicate):
        C = Constraint(C, tuple(range(C.k)), (1,) * C.k)
    _check_arity(C.k, cap)
    pts = []
    for m in range(1 << C.k):
        x = assignment(m, C.k)
        if C.pred(tuple(z * v for z, v in zip(C.signs, x))) == 1:
            pts.append(embed(x))
    return pts


def all_vertices(k: int, cap: int = ARITY_CAP) -> list[tuple[int, ...]]:
    """ALL_k: every embedded assignment."""
    _check_arity(k, cap)
    return [embed(assignment(m, k)) for m in range(1 << k)]


@dataclass(frozen=True)
class SDPCertificate:
    ok: bool
    hull: HullResult
    distribution: tuple[tuple[tuple[int, ...], Fraction], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def perfect_sdp_check(B: BiasProfile, C: Constraint, cap: int = ARITY_CAP) -> SDPCertificate:
    """p_{B,φ} ∈ KTW_C; on success the weights form a satisfying distribution matching B."""
    verts = ktw_vertices(C, cap)
    if not verts:
        raise ValueError("constraint is unsatisfiable: its polytope is empty")
    p = bias_projection(B, C.phi)
    res = hull_member(p, verts)
    if not res.member:
        return SDPCertificate(False, res)
    dist = tuple((v[: C.k], w) for v, w in zip(verts, res.weights) if w)
    return SDPCertificate(True, res, dist)
