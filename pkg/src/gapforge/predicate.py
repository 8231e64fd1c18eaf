"""Linear forms, Boolean predicates, constraints and exact Fourier analysis.

Assignments over k variables are integers whose bit i is 1 when x_{i+1} = +1.
Subsets S of [1, k] are bitmasks in the same bit order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactnum import lcm_denominator, rat

TRANSFORM_CAP = 24


class ZeroValue(ArithmeticError):
    """A linear form evaluated to exactly 0, where a sign was required."""

    def __init__(self, form, point):
        super().__init__(f"form {form} is exactly 0 at {tuple(point)}")
        self.form = form
        self.point = tuple(point)


def popcount(m: int) -> int:
    return bin(m).count("1")


def subset_mask(indices: Iterable[int]) -> int:
    """Bitmask of a subset given by 1-based indices."""
    m = 0
    for i in indices:
        if i < 1:
            raise ValueError("subset indices are 1-based")
        m |= 1 << (i - 1)
    return m


def mask_indices(m: int) -> tuple[int, ...]:
    """1-based indices in a subset bitmask."""
    out = []
    i = 1
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def assignment(mask: int, k: int) -> tuple[int, ...]:
    return tuple(1 if (mask >> i) & 1 else -1 for i in range(k))


def assignment_mask(x: Sequence[int]) -> int:
    m = 0
    for i, v in enumerate(x):
        if v == 1:
            m |= 1 << i
        elif v != -1:
            raise ValueError(f"assignment entries must be ±1, got {v}")
    return m


def sign_matrix(k: int) -> np.ndarray:
    """Row m holds the ±1 assignment with bitmask m."""
    masks = np.arange(1 << k, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(k, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


@dataclass(frozen=True)
class LinearForm:
    """l(x) = Σ w_i x_i + constant with rational weights."""

    weights: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(rat(w) for w in self.weights))
        object.__setattr__(self, "constant", rat(self.constant))
        if not self.weights:
            raise ValueError("a linear form needs at least one variable")

    @property
    def k(self) -> int:
        return len(self.weights)

    def value(self, x: Sequence) -> Fraction:
        if len(x) != self.k:
            raise ValueError(f"expected {self.k} inputs, got {len(x)}")
        return self.constant + sum((w * rat(v) for w, v in zip(self.weights, x)), Fraction(0))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        if other.k != self.k:
            raise ValueError("arity mismatch")
        return LinearForm(tuple(a + b for a, b in zip(self.weights, other.weights)), self.constant + other.constant)

    def scale(self, c) -> "LinearForm":
        c = rat(c)
        return LinearForm(tuple(c * w for w in self.weights), c * self.constant)

    def integer_scaled(self) -> tuple[list[int], int, int]:
        """(integer weights, integer constant, positive scale) with scaled = scale * self."""
        L = lcm_denominator(list(self.weights) + [self.constant])
        return [int(w * L) for w in self.weights], int(self.constant * L), L

    def values_on_cube(self) -> np.ndarray:
        """Integer-scaled values of the form on every ±1 assignment, indexed by bitmask."""
        w, c, _ = self.integer_scaled()
        if sum(abs(v) for v in w) + abs(c) < 2**62:
            return sign_matrix(self.k).astype(np.int64) @ np.array(w, dtype=np.int64) + c
        X = sign_matrix(self.k).astype(object)
        return X @ np.array(w, dtype=object) + c

    def __str__(self) -> str:
        terms = [f"{w}*x{i + 1}" for i, w in enumerate(self.weights) if w]
        if self.constant or not terms:
            terms.append(str(self.constant))
        return " + ".join(terms)


def eval_ltf(l: LinearForm, x: Sequence) -> int:
    """sign(l(x)); an exact zero raises ZeroValue."""
    v = l.value(x)
    if v == 0:
        raise ZeroValue(l, x)
    return 1 if v > 0 else -1


@dataclass(frozen=True, eq=False)
class Predicate:
    """A ±1 predicate given by its truth table, optionally remembering an LTF form."""

    k: int
    table: np.ndarray = field(repr=False)  # int8, ±1, indexed by assignment bitmask
    form: LinearForm | None = None
    name: str = ""

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int8)
        if t.shape != (1 << self.k,):
            raise ValueError(f"truth table must have 2^{self.k} entries")
        if not np.all((t == 1) | (t == -1)):
            raise ValueError("truth table entries must be ±1")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def from_ltf(cls, l: LinearForm, name: str = "") -> "Predicate":
        vals = l.values_on_cube()
        zero = np.flatnonzero(vals == 0)
        if zero.size:
            raise ZeroValue(l, assignment(int(zero[0]), l.k))
        return cls(l.k, np.where(vals > 0, 1, -1).astype(np.int8), l, name)

    @classmethod
    def from_function(cls, k: int, fn: Callable[[tuple[int, ...]], object], name: str = "") -> "Predicate":
        vals = []
        for m in range(1 << k):
            v = fn(assignment(m, k))
            if v not in (1, -1):
                raise ValueError(f"predicate value {v} at {assignment(m, k)} is not ±1")
            vals.append(int(v))
        return cls(k, np.array(vals, dtype=np.int8), None, name)

    @classmethod
    def from_plus_set(cls, k: int, plus: Iterable[int], name: str = "") -> "Predicate":
        t = -np.ones(1 << k, dtype=np.int8)
        for m in plus:
            if not 0 <= m < (1 << k):
                raise ValueError(f"assignment {m} out of range for k={k}")
            t[m] = 1
        return cls(k, t, None, name)

    def plus_set(self) -> list[int]:
        return [int(m) for m in np.flatnonzero(self.table == 1)]

    def __call__(self, x: Sequence[int]) -> int:
        return int(self.table[assignment_mask(x)])

    def satisfying(self) -> list[tuple[int, ...]]:
        return [assignment(m, self.k) for m in self.plus_set()]

    def __eq__(self, other) -> bool:
        return isinstance(other, Predicate) and self.k == other.k and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.k, self.table.tobytes()))


@dataclass(frozen=True)
class Constraint:
    """P(z_1 x_{φ(1)}, ..., z_k x_{φ(k)}); φ holds 0-based variable indices."""

    pred: Predicate
    phi: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(int(i) for i in self.phi))
        object.__setattr__(self, "signs", tuple(int(z) for z in self.signs))
        if len(self.phi) != self.pred.k or len(self.signs) != self.pred.k:
            raise ValueError("phi and signs must have one entry per predicate input")
        if len(set(self.phi)) != len(self.phi) or min(self.phi) < 0:
            raise ValueError(f"phi {self.phi} is not an injective map into the variables")
        if any(z not in (1, -1) for z in self.signs):
            raise ValueError("signs must be ±1")

    @property
    def k(self) -> int:
        return self.pred.k

    def local(self, x: Sequence[int]) -> tuple[int, ...]:
        """The predicate's inputs z_i x_{φ(i)} under a global assignment x."""
        return tuple(z * x[i] for z, i in zip(self.signs, self.phi))

    def __call__(self, x: Sequence[int]) -> int:
        return self.pred(self.local(x))


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, H[S] = Σ_m a[m] (-1)^{|S & m|}."""
    a = np.array(a, copy=True)
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        x, y = v[:, 0, :].copy(), v[:, 1, :]
        v[:, 0, :] += y
        v[:, 1, :] = x - y
        h *= 2
    return a


@dataclass(frozen=True, eq=False)
class FourierTable:
    """f̂_S = numerators[S] / 2^k for every subset bitmask S."""

    k: int
    numerators: np.ndarray = field(repr=False)

    def __getitem__(self, S: int) -> Fraction:
        return Fraction(int(self.numerators[S]), 1 << self.k)

    def coefficient(self, indices: Iterable[int]) -> Fraction:
        """Coefficient of the subset given by 1-based indices."""
        return self[subset_mask(indices)]

    def items(self):
        """Nonzero (mask, coefficient) pairs."""
        for S in np.flatnonzero(self.numerators):
            yield int(S), self[int(S)]

    def parseval(self) -> Fraction:
        sq = sum(int(v) * int(v) for v in self.numerators)
        return Fraction(sq, 1 << (2 * self.k))

    def evaluate(self, x: Sequence[int]) -> Fraction:
        """Σ_S f̂_S x_S at a ±1 point."""
        m = assignment_mask(x)
        total = 0
        for S in np.flatnonzero(self.numerators):
            chi = (-1) ** popcount(int(S) & ~m)
            total += chi * int(self.numerators[S])
        return Fraction(total, 1 << self.k)


def fourier_transform(P: Predicate, cap: int = TRANSFORM_CAP) -> FourierTable:
    """Exact Fourier coefficients f̂_S = E_x[P(x) x_S] via the fast transform."""
    if P.k > cap:
        raise ValueError(f"arity {P.k} exceeds the transform cap {cap}")
    H = fwht(P.table.astype(np.int64))
    # x_i = +1 on bit 1, so x_S(m) = (-1)^{|S| - |S & m|}
    parity = np.array([popcount(S) & 1 for S in range(1 << P.k)], dtype=np.int64)
    return FourierTable(P.k, np.where(parity == 1, -H, H))


def fourier_direct(P: Predicate, S: int) -> Fraction:
    """E_x[P(x) x_S] by direct summation; the oracle for the fast transform."""
    total = 0
    for m in range(1 << P.k):
        chi = (-1) ** popcount(S & ~m)
        total += chi * int(P.table[m])
    return Fraction(total, 1 << P.k)


def random_sat_prob(P: Predicate) -> Fraction:
    """r_P = (f̂_∅ + 1) / 2."""
    return (fourier_transform(P)[0] + 1) / 2


def _parse_class(cls: str) -> tuple[bool, int]:
    """'P', 'C', 'aC' or 'P+aC' -> (has president, number of citizens)."""
    s = cls.replace(" ", "")
    president = s.startswith("P")
    rest = s[1:].lstrip("+") if president else s
    if rest == "":
        return president, 0
    if not rest.endswith("C"):
        raise ValueError(f"unrecognized class {cls!r}")
    a = int(rest[:-1]) if rest[:-1] else 1
    return president, a


def fourier_closed_form(k: int, cls: str) -> Fraction:
    """Closed-form Fourier coefficient of the almost-monarchy predicate.

    Valid classes: 'aC' for odd a, 'P', and 'P+aC' for even a >= 2.
    """
    if k < 5:
        raise ValueError("closed forms need k >= 5")
    president, a = _parse_class(cls)
    if president and a == 0:
        return 1 - Fraction(k, 2 ** (k - 2))
    if not 1 <= a <= k - 1:
        raise ValueError(f"class {cls!r} has {a} citizens but only {k - 1} exist")
    if not president:
        if a % 2 == 0:
            raise ValueError("citizen-only classes need an odd number of citizens")
        return Fraction(k - 2 * a, 2 ** (k - 2))
    if a % 2 == 1 or a < 2:
        raise ValueError("president classes need an even number of citizens >= 2")
    return Fraction(2 * a - k, 2 ** (k - 2))


def class_mask(cls: str) -> int:
    """Representative subset of a class: president is index 1, citizens 2, 3, ..."""
    president, a = _parse_class(cls)
    idx = ([1] if president else []) + list(range(2, 2 + a))
    return subset_mask(idx)


def layer_counts(l: LinearForm) -> dict[int, tuple[int, int, int]]:
    """For each non-extreme layer j (number of +1 inputs): (positive, zero, total) counts."""
    k = l.k
    vals = l.values_on_cube()
    layers = np.array([popcount(m) for m in range(1 << k)])
    out = {}
    for j in range(1, k):
        sel = vals[layers == j]
        out[j] = (int(np.count_nonzero(sel > 0)), int(np.count_nonzero(sel == 0)), int(sel.size))
    return out


def check_perfectly_balanced(l: LinearForm) -> bool:
    """True iff exactly half of every non-extreme Hamming layer is positive.

    A zero-free layer that is unbalanced decides False outright.  Otherwise a
    layer point with value exactly 0 raises ZeroValue.
    """
    if l.constant != 0:
        raise ValueError("perfect balance is defined for forms without a constant")
    counts = layer_counts(l)
    if any(z == 0 and 2 * pos != tot for pos, z, tot in counts.values()):
        return False
    for j, (pos, z, tot) in counts.items():
        if z:
            vals = l.values_on_cube()
            m = next(m for m in range(1 << l.k) if popcount(m) == j and vals[m] == 0)
            raise ZeroValue(l, assignment(m, l.k))
    return True


def xor3() -> Predicate:
    return Predicate.from_function(3, lambda x: x[0] * x[1] * x[2], "xor3")


def glst() -> Predicate:
    """P(x) = -((1-x1)/2) x2 x3 - ((1+x1)/2) x2 x4."""

    def fn(x):
        return -Fraction(1 - x[0], 2) * x[1] * x[2] - Fraction(1 + x[0], 2) * x[1] * x[3]

    return Predicate.from_function(4, fn, "glst")


def monarchy_form(k: int) -> LinearForm:
    return LinearForm(tuple([k - 2] + [1] * (k - 1)))


def almost_monarchy_form(k: int) -> LinearForm:
    return LinearForm(tuple([k - 4] + [1] * (k - 1)))


def monarchy(k: int) -> Predicate:
    if k < 3:
        raise ValueError("monarchy needs k >= 3")
    return Predicate.from_ltf(monarchy_form(k), f"monarchy-{k}")


def almost_monarchy(k: int) -> Predicate:
    if k < 5:
        raise ValueError("almost-monarchy needs k >= 5")
    return Predicate.from_ltf(almost_monarchy_form(k), f"almost-monarchy-{k}")


def constraint_fourier(c: Constraint) -> dict[int, Fraction]:
    """Fourier expansion of a constraint in global variables.

    f̂_S of the predicate moves to the global subset φ(S) with factor Π_{i∈S} z_i.
    """
    table = fourier_transform(c.pred)
    out: dict[int, Fraction] = {}
    for S, v in table.items():
        g = 0
        s = 1
        for i in range(c.k):
            if (S >> i) & 1:
                g |= 1 << c.phi[i]
                s *= c.signs[i]
        out[g] = out.get(g, Fraction(0)) + s * v
    return out


def binomial_layer_sizes(k: int) -> list[int]:
    return [comb(k, j) for j in range(k + 1)]
