"""Certified bias profiles: convex combinations of satisfying assignments."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactnum import rat
from ..predicate import LinearForm, Predicate, eval_ltf
from .hypergraph import BiasData


class NotCertified(ValueError):
    """A profile is not shown to come from the predicate's satisfying assignments."""


@dataclass(frozen=True)
class Mixture:
    """Weights on ±1 points; the weights are nonnegative and sum to 1."""

    points: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(tuple(int(v) for v in x) for x in self.points)
        w = tuple(rat(v) for v in self.weights)
        if not pts or len(pts) != len(w):
            raise ValueError("need one weight per point")
        if any(len(x) != len(pts[0]) for x in pts):
            raise ValueError("points have different lengths")
        if any(v not in (1, -1) for x in pts for v in x):
            raise ValueError("points must be ±1 vectors")
        if any(v < 0 for v in w) or sum(w) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def k(self) -> int:
        return len(self.points[0])

    @classmethod
    def vertex(cls, x: Sequence[int]) -> "Mixture":
        return cls((tuple(x),), (Fraction(1),))

    def certify(self, P: Predicate | LinearForm) -> None:
        """Check every weighted point satisfies P; a LinearForm avoids the truth table."""
        if P.k != self.k:
            raise NotCertified(f"mixture has arity {self.k}, predicate {P.k}")
        test = (lambda x: eval_ltf(P, x)) if isinstance(P, LinearForm) else P
        for x, w in zip(self.points, self.weights):
            if w and test(x) != 1:
                raise NotCertified(f"point {x} is not a satisfying assignment")

    def first_moments(self) -> tuple[Fraction, ...]:
        return tuple(sum((w * x[i] for x, w in zip(self.points, self.weights)), Fraction(0))
                     for i in range(self.k))

    def bias_data(self) -> BiasData:
        return BiasData.from_mixture(self.points, self.weights)


def random_mixture(sample_point, rng: np.random.Generator, max_points: int = 4,
                   max_weight: int = 12) -> Mixture:
    """Convex combination of a few points drawn by ``sample_point(rng)``."""
    t = int(rng.integers(2, max_points + 1))
    pts = [tuple(sample_point(rng)) for _ in range(t)]
    raw = [int(v) for v in rng.integers(1, max_weight + 1, size=t)]
    s = sum(raw)
    return Mixture(tuple(pts), tuple(Fraction(r, s) for r in raw))
