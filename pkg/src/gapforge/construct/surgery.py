"""Zero sets of linear forms and the sign-enforcement trick over box domains."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import floor, gcd, prod
from typing import Iterator, Sequence

from ..predicate import LinearForm

ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class VarRange:
    """Integer values lo, lo + step, ..., hi."""

    lo: int
    hi: int
    step: int = 1
    name: str = ""

    def __post_init__(self):
        if self.step < 1 or self.hi < self.lo or (self.hi - self.lo) % self.step:
            raise ValueError(f"invalid range {self}")

    def values(self) -> range:
        return range(self.lo, self.hi + 1, self.step)

    def __len__(self) -> int:
        return (self.hi - self.lo) // self.step + 1


def pm1(n: int) -> tuple[VarRange, ...]:
    """The ±1 cube as a box."""
    return tuple(VarRange(-1, 1, 2) for _ in range(n))


def integer_box(ranges: Sequence[tuple[int, int]]) -> tuple[VarRange, ...]:
    return tuple(VarRange(a, b) for a, b in ranges)


def box_points(box: Sequence[VarRange]) -> Iterator[tuple[int, ...]]:
    return product(*(r.values() for r in box))


def box_size(box: Sequence[VarRange]) -> int:
    return prod(len(r) for r in box)


def _check(l: LinearForm, box: Sequence[VarRange]) -> None:
    if l.k != len(box):
        raise ValueError(f"form has {l.k} variables but the domain has {len(box)}")


def zset(l: LinearForm, box: Sequence[VarRange]) -> list[tuple[int, ...]]:
    """Z(l) = {x in the box : l(x) = 0}, by exact evaluation of every point."""
    _check(l, box)
    if box_size(box) > ENUMERATION_CAP:
        raise ValueError("domain exceeds the enumeration cap")
    return [x for x in box_points(box) if l.value(x) == 0]


def in_zset(l: LinearForm, x: Sequence[int]) -> bool:
    return l.value(x) == 0


def max_abs(l: LinearForm, box: Sequence[VarRange]) -> Fraction:
    """max |l| over the box, by coefficient-wise extremes."""
    _check(l, box)
    hi = l.constant + sum(max(w * r.lo, w * r.hi) for w, r in zip(l.weights, box))
    lo = l.constant + sum(min(w * r.lo, w * r.hi) for w, r in zip(l.weights, box))
    return max(abs(hi), abs(lo))


def min_nonzero_abs(l: LinearForm, box: Sequence[VarRange]) -> Fraction | None:
    """Smallest nonzero |l| over the box; None when l vanishes on the whole box.

    Exact by enumeration within the cap.  Beyond it, a lattice lower bound:
    every value lies in offset + g·Z, with g the gcd of the scaled steps.
    """
    _check(l, box)
    if box_size(box) <= ENUMERATION_CAP:
        vals = [abs(l.value(x)) for x in box_points(box)]
        nz = [v for v in vals if v]
        return min(nz) if nz else None
    w, c, L = l.integer_scaled()
    offset = c + sum(wi * r.lo for wi, r in zip(w, box))
    g = reduce(gcd, (abs(wi) * r.step for wi, r in zip(w, box) if wi), 0)
    if g == 0:
        return None if offset == 0 else Fraction(abs(offset), L)
    rem = offset % g
    return Fraction(min(rem, g - rem) if rem else g, L)


@dataclass(frozen=True)
class Enforced:
    plus: LinearForm   # B·l_c + l_r
    minus: LinearForm  # -B·l_c + l_r
    B: int
    a: Fraction
    b: Fraction


def enforce(l_c: LinearForm, l_r: LinearForm, box: Sequence[VarRange]) -> Enforced:
    """Pair of forms whose signs agree exactly on Z(l_c) and disagree off it.

    B = ⌊b/a⌋ + 1 with a = min nonzero |l_c| and b = max |l_r| over the box.
    """
    _check(l_r, box)
    a = min_nonzero_abs(l_c, box)
    if a is None:
        raise ValueError("constraint form is identically zero on the domain")
    b = max_abs(l_r, box)
    B = floor(b / a) + 1
    return Enforced(l_c.scale(B) + l_r, l_c.scale(-B) + l_r, B, a, b)


def stack(l1: LinearForm, l2: LinearForm, box: Sequence[VarRange]) -> tuple[LinearForm, int]:
    """B·l1 + l2 with Z(B·l1 + l2) = Z(l1) ∩ Z(l2) on the box."""
    a = min_nonzero_abs(l1, box)
    if a is None:
        return l2, 0
    B = floor(max_abs(l2, box) / a) + 1
    return l1.scale(B) + l2, B
