"""Perfect integrality gap verification and the KTW vanishing-measure check."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Sequence

import numpy as np

from .exactnum import rat, rat_str
from .polytope import BiasProfile, pair_list, signed_projection
from .report import Clause
from .predicate import Constraint, Predicate, fourier_transform, glst, mask_indices, popcount, xor3

ENUMERATION_CAP = 16
VANISH_ARITY_CAP = 6


@dataclass(frozen=True)
class GapInstance:
    """Constraints over n variables, a bias profile and one distribution per constraint.

    A distribution lists (values of x_{φ(1)}, ..., x_{φ(k)}, probability).
    """

    n: int
    constraints: tuple[Constraint, ...]
    bias: BiasProfile
    dists: tuple[tuple[tuple[tuple[int, ...], Fraction], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(
            self, "dists", tuple(tuple((tuple(x), rat(p)) for x, p in d) for d in self.dists)
        )
        if len(self.dists) != len(self.constraints):
            raise ValueError("need exactly one distribution per constraint")
        if self.bias.n != self.n:
            raise ValueError("bias profile size does not match n")
        for c, d in zip(self.constraints, self.dists):
            if max(c.phi) >= self.n:
                raise ValueError(f"constraint uses variable {max(c.phi) + 1} beyond n={self.n}")
            if any(p < 0 for _, p in d) or sum(p for _, p in d) != 1:
                raise ValueError("distribution probabilities must be nonnegative and sum to 1")
            if any(len(x) != c.k for x, _ in d):
                raise ValueError("distribution assignments must have one value per constraint input")

    @property
    def m(self) -> int:
        return len(self.constraints)

    def without(self, a: int) -> "GapInstance":
        keep = [i for i in range(self.m) if i != a]
        return GapInstance(self.n, [self.constraints[i] for i in keep], self.bias, [self.dists[i] for i in keep])

    def permuted(self, order: Sequence[int]) -> "GapInstance":
        return GapInstance(self.n, [self.constraints[i] for i in order], self.bias, [self.dists[i] for i in order])


@dataclass
class GapReport:
    clauses: list[Clause]
    constant: Fraction | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, name: str) -> Clause:
        return next(c for c in self.clauses if c.name == name)

    def to_dict(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "clauses": [c.to_dict() for c in self.clauses],
            "constant": None if self.constant is None else rat_str(self.constant),
        }


def _constraint_key(c: Constraint) -> tuple:
    return (c.phi, c.signs, c.pred.k, tuple(c.pred.plus_set()))


def _describe(c: Constraint) -> dict:
    return {"phi": [i + 1 for i in c.phi], "signs": list(c.signs), "pred": c.pred.name or f"arity-{c.k}"}


def _moment_clause(inst: GapInstance) -> Clause:
    fails = []
    for c, d in zip(inst.constraints, inst.dists):
        for i in range(c.k):
            got = sum((p * x[i] for x, p in d), Fraction(0))
            want = inst.bias.b[c.phi[i]]
            if got != want:
                fails.append((_constraint_key(c), (c.phi[i],), got, want, c))
        for i, j in pair_list(c.k):
            got = sum((p * x[i] * x[j] for x, p in d), Fraction(0))
            want = inst.bias.pair(c.phi[i], c.phi[j])
            if got != want:
                fails.append((_constraint_key(c), (c.phi[i], c.phi[j]), got, want, c))
    if not fails:
        return Clause("moments", True)
    key, var, got, want, c = min(fails, key=lambda f: (f[0], f[1]))
    return Clause("moments", False, {
        "constraint": _describe(c), "variables": [v + 1 for v in var],
        "distribution_moment": rat_str(got), "bias_moment": rat_str(want),
    })


def _support_clause(inst: GapInstance) -> Clause:
    fails = []
    for c, d in zip(inst.constraints, inst.dists):
        for x, p in d:
            if p and c.pred(tuple(z * v for z, v in zip(c.signs, x))) != 1:
                fails.append((_constraint_key(c), x, c))
    if not fails:
        return Clause("support", True)
    _, x, c = min(fails, key=lambda f: (f[0], f[1]))
    return Clause("support", False, {"constraint": _describe(c), "assignment": list(x)})


def _psd_clause(inst: GapInstance) -> Clause:
    res = inst.bias.is_psd()
    if res.psd:
        return Clause("psd", True)
    return Clause("psd", False, {"vector": [rat_str(v) for v in res.witness], "value": rat_str(res.value)})


def fourier_sum(inst: GapInstance) -> dict[int, Fraction]:
    """Σ_a f̂_a over global subsets; keys are bitmasks over the n variables."""
    total: dict[int, Fraction] = {}
    cache: dict[Predicate, dict] = {}
    for c in inst.constraints:
        if c.pred not in cache:
            cache[c.pred] = dict(fourier_transform(c.pred).items())
        for S, v in cache[c.pred].items():
            g, s = 0, 1
            for i in range(c.k):
                if (S >> i) & 1:
                    g |= 1 << c.phi[i]
                    s *= c.signs[i]
            total[g] = total.get(g, Fraction(0)) + s * v
    return {T: v for T, v in total.items() if v}


def _constant_clause(inst: GapInstance) -> tuple[Clause, Fraction]:
    sums = fourier_sum(inst)
    c = sums.get(0, Fraction(0)) / inst.m
    bad = sorted((T for T in sums if T), key=lambda T: (popcount(T), T))
    if not bad:
        return Clause("constant", True, None), c
    T = bad[0]
    return Clause("constant", False, {"subset": list(mask_indices(T)), "coefficient_sum": rat_str(sums[T])}), c


def verify_perfect_gap(inst: GapInstance) -> GapReport:
    """Check the four clauses of a perfect integrality gap instance."""
    clauses = [_moment_clause(inst), _support_clause(inst), _psd_clause(inst)]
    c4, c = _constant_clause(inst)
    clauses.append(c4)
    return GapReport(clauses, c)


def enumerate_constraint_sum(inst: GapInstance, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Σ_a f_a(x) at every global assignment x (bitmask-indexed); the oracle for clause (4)."""
    n = inst.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")
    masks = np.arange(1 << n, dtype=np.int64)
    total = np.zeros(1 << n, dtype=np.int64)
    for c in inst.constraints:
        local = np.zeros(1 << n, dtype=np.int64)
        for i, (v, z) in enumerate(zip(c.phi, c.signs)):
            bit = (masks >> v) & 1
            if z == -1:
                bit = 1 - bit
            local |= bit << i
        total += c.pred.table.astype(np.int64)[local]
    return total


def enumerated_constant(inst: GapInstance) -> tuple[bool, Fraction | None]:
    total = enumerate_constraint_sum(inst)
    if np.all(total == total[0]):
        return True, Fraction(int(total[0]), inst.m)
    return False, None


@dataclass
class VanishLevel:
    t: int
    vanished: bool
    point: tuple[Fraction, ...] | None = None
    residual: Fraction | None = None
    atoms: int = 0

    def to_dict(self) -> dict:
        return {
            "t": self.t, "vanished": self.vanished, "atoms": self.atoms,
            "point": None if self.point is None else [rat_str(v) for v in self.point],
            "residual": None if self.residual is None else rat_str(self.residual),
        }


def vanish_measure(inst: GapInstance, t: int, order: str = "permute-then-negate",
                   points: Sequence[Sequence] | None = None) -> dict[tuple, Fraction]:
    """Λ^{(t)} as a map from atom coordinates to signed weight.

    Each constraint contributes mass 1/m at its signed bias point p_a.  An atom
    (S, π, z) projects p_a onto S, reorders by π and flips signs by z, with
    weight (Π z) f̂_S / (C(k,t) t! 2^t).
    """
    if order not in ("permute-then-negate", "negate-then-permute"):
        raise ValueError(f"unknown order {order!r}")
    if points is None:
        points = [signed_projection(inst.bias, c) for c in inst.constraints]
    measure: dict[tuple, Fraction] = {}
    for c, p in zip(inst.constraints, points):
        k = c.k
        if k > VANISH_ARITY_CAP:
            raise ValueError(f"arity {k} exceeds the vanish-check cap {VANISH_ARITY_CAP}")
        if not 1 <= t <= k:
            continue
        fhat = fourier_transform(c.pred)
        pidx = {pr: k + a for a, pr in enumerate(pair_list(k))}

        def pair_val(a, b):
            return p[pidx[(a, b) if a < b else (b, a)]]

        scale = Fraction(1, inst.m * comb(k, t) * factorial(t) * 2**t)
        for S in combinations(range(k), t):
            coef = fhat[sum(1 << s for s in S)]
            if not coef:
                continue
            for pi in permutations(range(t)):
                src = [S[pi[i]] for i in range(t)]
                for z in product((1, -1), repeat=t):
                    zz = z if order == "permute-then-negate" else tuple(z[pi[i]] for i in range(t))
                    sign = 1
                    for v in z:
                        sign *= v
                    q = tuple(zz[i] * p[src[i]] for i in range(t)) + tuple(
                        zz[i] * zz[j] * pair_val(src[i], src[j]) for i, j in pair_list(t)
                    )
                    measure[q] = measure.get(q, Fraction(0)) + sign * coef * scale
    return measure


def ktw_vanish_check(inst: GapInstance, t: int, order: str = "permute-then-negate",
                     points: Sequence[Sequence] | None = None) -> VanishLevel:
    """Does Λ^{(t)} cancel exactly?  On failure, name the atom with nonzero total weight."""
    measure = vanish_measure(inst, t, order, points)
    bad = sorted((q for q, w in measure.items() if w), key=lambda q: q)
    if not bad:
        return VanishLevel(t, True, atoms=len(measure))
    return VanishLevel(t, False, bad[0], measure[bad[0]], len(measure))


def vanish_report(inst: GapInstance, max_t: int | None = None,
                  points: Sequence[Sequence] | None = None) -> dict:
    """Levels 1..max_t under both readings of the atom map."""
    k = max(c.k for c in inst.constraints)
    max_t = k if max_t is None else min(max_t, k)
    levels = [ktw_vanish_check(inst, t, points=points) for t in range(1, max_t + 1)]
    out = {"vanished": all(lv.vanished for lv in levels), "levels": [lv.to_dict() for lv in levels]}
    alt = [ktw_vanish_check(inst, t, "negate-then-permute", points) for t in range(1, max_t + 1)]
    if [a.vanished for a in alt] != [lv.vanished for lv in levels]:
        out["alternate_order"] = [a.to_dict() for a in alt]
    return out


def three_xor_instance() -> GapInstance:
    """All 8 sign patterns of x1 x2 x3, zero biases, uniform solutions per constraint."""
    P = xor3()
    sols = P.satisfying()
    cons, dists = [], []
    for z in product((1, -1), repeat=3):
        cons.append(Constraint(P, (0, 1, 2), z))
        # x = z∘s maps solutions s of P to solutions of P(z∘x)
        dists.append([(tuple(zi * si for zi, si in zip(z, s)), Fraction(1, 4)) for s in sols])
    return GapInstance(3, cons, BiasProfile.zero(3), dists)


def glst_instance() -> GapInstance:
    """The two-constraint instance P(x1,x2,x3,x4), P(x1,-x2,x3,x4) with b34 = -1."""
    P = glst()
    q = Fraction(1, 4)
    d1 = [((1, 1, 1, -1), q), ((1, -1, -1, 1), q), ((-1, 1, -1, 1), q), ((-1, -1, 1, -1), q)]
    d2 = [((-1, 1, 1, -1), q), ((1, -1, 1, -1), q), ((1, 1, -1, 1), q), ((-1, -1, -1, 1), q)]
    cons = [Constraint(P, (0, 1, 2, 3), (1, 1, 1, 1)), Constraint(P, (0, 1, 2, 3), (1, -1, 1, 1))]
    return GapInstance(4, cons, BiasProfile(4, (0, 0, 0, 0), {(2, 3): -1}), [d1, d2])


def builtin_instances() -> dict[str, GapInstance]:
    return {"three_xor": three_xor_instance(), "glst": glst_instance()}
