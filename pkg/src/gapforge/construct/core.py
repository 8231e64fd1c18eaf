"""The 4-variable core: forms, solution vectors, distributions and the parameter solver."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from ..exactnum import rat_str
from ..predicate import LinearForm
from ..report import Report

F = Fraction


class NoSolution(ValueError):
    """The parametric core family has no positive rational solution here."""


def shift(v: tuple, a: int) -> tuple:
    """Move coordinate i to position i + a (mod len)."""
    n = len(v)
    out = [None] * n
    for i, x in enumerate(v):
        out[(i + a) % n] = x
    return tuple(out)


def distinct_permutations(pattern: tuple) -> list[tuple]:
    return sorted(set(permutations(pattern)))


@dataclass(frozen=True)
class Core:
    forms: tuple[LinearForm, ...]
    vectors: tuple[tuple[int, ...], ...]
    dists: tuple[dict, ...]  # D_a: vector -> probability
    c1: Fraction
    c2: Fraction
    c12: Fraction


def core_form() -> LinearForm:
    """l_1 = x_1 + 3/2 - (8/5)(x_2 + x_3)/299."""
    w = -F(8, 5) / 299
    return LinearForm((1, w, w, 0), F(3, 2))


def core_instance() -> Core:
    l1 = core_form()
    forms = tuple(LinearForm(shift(l1.weights, a), l1.constant) for a in range(4))
    patterns = [(299, 0, 0, 0), (-1, -1, -7, -7), (64, -1, -2, -2)]
    vectors = tuple(v for pat in patterns for v in distinct_permutations(pat))
    d1 = {(299, 0, 0, 0): F(15, 4500)}
    for v in [(-1, -1, -7, -7), (-1, -7, -1, -7), (-1, -7, -7, -1)]:
        d1[v] = F(1196, 4500)
    for v in [(-1, 64, -2, -2), (-1, -2, 64, -2), (-1, -2, -2, 64)]:
        d1[v] = F(299, 4500)
    dists = tuple({shift(v, a): p for v, p in d1.items()} for a in range(4))
    return Core(forms, vectors, dists, F(0), F(299), F(0))


def verify_core(core: Core) -> Report:
    rep = Report()
    bad = None
    for v in core.vectors:
        vals = [l.value(v) for l in core.forms]
        if any(x == 0 for x in vals) or sum(x > 0 for x in vals) * 2 != len(vals):
            bad = {"vector": list(v), "values": [rat_str(x) for x in vals]}
            break
    rep.add("half_positive", bad is None, bad)

    bad = None
    for a, (l, d) in enumerate(zip(core.forms, core.dists)):
        for v, p in d.items():
            if p < 0 or v not in core.vectors or l.value(v) <= 0:
                bad = {"distribution": a + 1, "vector": list(v), "probability": rat_str(p)}
                break
        if bad is None and sum(d.values()) != 1:
            bad = {"distribution": a + 1, "total": rat_str(sum(d.values()))}
        if bad:
            break
    rep.add("support", bad is None, bad)

    bad = None
    n = len(core.vectors[0])
    for a, d in enumerate(core.dists):
        for i in range(n):
            for j in range(i, n):
                got = sum((p * v[i] * v[j] for v, p in d.items()), F(0))
                want = core.c2 if i == j else core.c12
                if got != want:
                    bad = {"distribution": a + 1, "moment": f"E[v{i + 1} v{j + 1}]", "got": rat_str(got), "want": rat_str(want)}
                    break
            got = sum((p * v[i] for v, p in d.items()), F(0))
            if bad is None and got != core.c1:
                bad = {"distribution": a + 1, "moment": f"E[v{i + 1}]", "got": rat_str(got), "want": rat_str(core.c1)}
            if bad:
                break
        if bad:
            break
    rep.add("moments", bad is None, bad)
    return rep


@dataclass(frozen=True)
class CoreParameters:
    a: int
    c: int
    b: int
    d: Fraction
    e: Fraction
    p1: Fraction
    p2: Fraction
    p3: Fraction

    def distribution(self) -> dict:
        """D_1 over the vector patterns (-a,-a,-b,-b), (-a,-c,-c,d), (e,0,0,0) with x_1 leading."""
        a, b, c, d, e = self.a, self.b, self.c, self.d, self.e
        dist: dict = {}
        # place the odd coordinate by position, so coinciding values (a = b) still get 3 p1
        for j in range(3):
            for odd, rest, p in ((-a, -b, self.p1), (d, -c, self.p2)):
                v = (-a,) + tuple(odd if i == j else rest for i in range(3))
                dist[v] = dist.get(v, F(0)) + p
        dist[(e, 0, 0, 0)] = dist.get((e, 0, 0, 0), F(0)) + self.p3
        return dist

    def equations(self) -> dict[str, Fraction]:
        """Residuals of the six moment equations; all are 0 for a valid solution."""
        a, b, c, d, e = self.a, self.b, self.c, self.d, self.e
        p1, p2, p3 = self.p1, self.p2, self.p3
        return {
            "E[x1]": -3 * a * p1 - 3 * a * p2 + e * p3,
            "E[x2]": -(2 * b + a) * p1 + (d - 2 * c) * p2,
            "E[x1x2]": (a * a + 2 * a * b) * p1 + (2 * a * c - a * d) * p2,
            "E[x2x3]": (b * b + 2 * a * b) * p1 + (c * c - 2 * c * d) * p2,
            "E[x1^2]-E[x2^2]": 3 * a * a * (p1 + p2) + e * e * p3 - (2 * b * b + a * a) * p1 - (2 * c * c + d * d) * p2,
            "total": 3 * p1 + 3 * p2 + p3 - 1,
        }

    @property
    def second_moment(self) -> Fraction:
        return 3 * self.a**2 * (self.p1 + self.p2) + self.e**2 * self.p3


def solve_core_parameters(a: int, c: int, b: int) -> CoreParameters:
    """Solve the parametric core family for d, e and the probabilities.

    d comes from (2b+a)/(d-2c) = b(b+2a)/(c(2d-c)); the ratio p1/p2, then e and
    p3, follow from the mean and second-moment equations.
    """
    a, b, c = F(a), F(b), F(c)
    den = 2 * c * (2 * b + a) - b * (b + 2 * a)
    if den == 0:
        raise NoSolution("the equation for d is degenerate")
    d = (c * c * (2 * b + a) - 2 * b * c * (b + 2 * a)) / den
    if d - 2 * c == 0 or 2 * d - c == 0:
        raise NoSolution("d makes a ratio undefined")
    p1_rel, p2_rel = (d - 2 * c) / (2 * b + a), F(1)
    if p1_rel <= 0:
        raise NoSolution("probabilities p1 and p2 would have opposite signs")
    s = p1_rel + p2_rel
    if a == 0:
        raise NoSolution("a must be nonzero")
    e = ((2 * b * b + a * a) * p1_rel + (2 * c * c + d * d) * p2_rel - 3 * a * a * s) / (3 * a * s)
    if e <= 0:
        raise NoSolution("e is not positive")
    p3_rel = 3 * a * s / e
    total = 3 * s + p3_rel
    out = CoreParameters(int(a), int(c), int(b), d, e, p1_rel / total, p2_rel / total, p3_rel / total)
    if any(out.equations().values()) or min(out.p1, out.p2, out.p3) <= 0:
        raise NoSolution("solution fails the moment equations")
    return out
