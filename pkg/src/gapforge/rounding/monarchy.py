"""The degree-3 min-sign rounding scheme for the monarchy predicate.

After rounding, x_i has bias ε b_i and x_{i1}x_{i2}x_{i3} has bias
Cε sign(b_{i1}b_{i2}b_{i3}) min|b_{i·}|.  To first order in ε the advantage over a
random assignment is

    A/ε = f̂_P α + f̂_C β + C (f̂_3C S_3C + f̂_P+2C S_P2C)

with α = b_1, β = Σ_{i≥2} b_i and S_3C, S_P2C the min-sign sums over citizen
triples and president-citizen-citizen triples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from ..exactnum import hull_member, rat
from ..predicate import fourier_transform, monarchy
from .mixture import Mixture, NotCertified

HULL_K_CAP = 12


class SignPreconditionError(ArithmeticError):
    """f̂_3C > 0 and f̂_P+2C < 0 are needed for the constant C to be useful."""


def sign(v) -> int:
    return (v > 0) - (v < 0)


def minsign3(x, y, z) -> Fraction:
    """sign(xyz)·min(|x|,|y|,|z|); invariant under permutation, odd in each argument."""
    return sign(x) * sign(y) * sign(z) * min(abs(x), abs(y), abs(z))


@dataclass(frozen=True)
class MonarchyFourier:
    k: int
    P: Fraction
    C: Fraction
    C3: Fraction
    P2C: Fraction

    @property
    def constant(self) -> Fraction:
        k = self.k
        return (self.P - (k - 2) * self.C) / (self.C3 * comb(k - 1, 3) - self.P2C * comb(k - 1, 2))


def monarchy_fourier(k: int) -> MonarchyFourier:
    """Coefficients by the fast transform; raises if the sign pattern fails."""
    if k < 5:
        raise ValueError("the monarchy scheme needs k >= 5")
    F = fourier_transform(monarchy(k))
    f = MonarchyFourier(k, F.coefficient([1]), F.coefficient([2]),
                        F.coefficient([2, 3, 4]), F.coefficient([1, 2, 3]))
    if not (f.C3 > 0 and f.P2C < 0):
        raise SignPreconditionError(f"k={k}: f̂_3C={f.C3}, f̂_P+2C={f.P2C}")
    return f


@dataclass
class MonarchyResult:
    k: int
    advantage: Fraction  # A/ε
    alpha: Fraction
    beta: Fraction
    s3c: Fraction
    sp2c: Fraction
    C: Fraction
    fourier: MonarchyFourier
    certificate: str
    floor: Fraction = field(init=False)

    def __post_init__(self):
        self.floor = self.fourier.C

    @property
    def above_floor(self) -> bool:
        return self.advantage >= self.floor


def _certify(b: Sequence[Fraction], k: int, certificate) -> str:
    if certificate is not None:
        mix = certificate if isinstance(certificate, Mixture) else Mixture(*certificate)
        mix.certify(monarchy(k))
        if mix.first_moments() != tuple(b):
            raise NotCertified("certificate does not reproduce the first moments")
        return "mixture"
    if k > HULL_K_CAP:
        raise NotCertified(f"hull membership is capped at k = {HULL_K_CAP}; supply a mixture")
    res = hull_member(b, monarchy(k).satisfying())
    if not res:
        raise NotCertified(f"b lies outside the polytope; separating normal {res.normal}")
    return "hull"


def monarchy_advantage(b: Sequence, k: int | None = None, eps=1, certificate=None,
                       check: bool = True) -> MonarchyResult:
    """Leading-order advantage of the min-sign scheme at first moments ``b``.

    ``certificate`` may be a Mixture (or (points, weights)) reproducing ``b``;
    without one, membership is decided by exact hull membership.  The returned
    ``advantage`` is A/ε multiplied by ``eps``.
    """
    b = tuple(rat(v) for v in b)
    k = len(b) if k is None else k
    if len(b) != k:
        raise ValueError(f"expected {k} first moments, got {len(b)}")
    f = monarchy_fourier(k)
    how = _certify(b, k, certificate) if check else "unchecked"
    alpha, cit = b[0], b[1:]
    s3c = sum((minsign3(*t) for t in combinations(cit, 3)), Fraction(0))
    sp2c = sum((minsign3(alpha, x, y) for x, y in combinations(cit, 2)), Fraction(0))
    C = f.constant
    adv = f.P * alpha + f.C * sum(cit, Fraction(0)) + C * (f.C3 * s3c + f.P2C * sp2c)
    return MonarchyResult(k, adv * rat(eps), alpha, sum(cit, Fraction(0)), s3c, sp2c, C, f, how)


def monarchy_advantage_direct(b: Sequence, k: int) -> Fraction:
    """A/ε as Σ_S f̂_S·bias_S over every subset of size 1 and 3; the oracle."""
    b = tuple(rat(v) for v in b)
    F = fourier_transform(monarchy(k))
    C = monarchy_fourier(k).constant
    total = sum((F.coefficient([i + 1]) * b[i] for i in range(k)), Fraction(0))
    for t in combinations(range(k), 3):
        total += F.coefficient([i + 1 for i in t]) * C * minsign3(*(b[i] for i in t))
    return total


def sample_monarchy_vertex(k: int):
    """Sampler of satisfying assignments that reaches every vertex class."""
    def draw(rng: np.random.Generator):
        if rng.integers(0, k) == 0:
            return (-1,) + (1,) * (k - 1)
        x = np.where(rng.random(k - 1) < rng.random(), 1, -1)
        if (x == -1).all():
            x[rng.integers(0, k - 1)] = 1  # the president needs one supporter
        return (1,) + tuple(int(v) for v in x)
    return draw
