"""Replace bounded integer variables by ±1 digits plus a constant-one variable.

x_i = (a_i + b_i)/2 · x_one + (1/2) Σ_k y_ik with b_i - a_i digits.  Given x_i,
x_i - a_i digits are +1 and b_i - x_i are -1, placed uniformly at random.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from ..exactnum import rat, rat_str
from ..predicate import LinearForm
from .moments import MomentSpec, NonRealizable

F = Fraction
ONE = "x_one"


@dataclass(frozen=True)
class IntegerVarSpec:
    name: str
    a: int
    b: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"range [{self.a}, {self.b}] of {self.name} is empty or a single point")

    @property
    def digits(self) -> int:
        return self.b - self.a


def digit_names(spec: IntegerVarSpec) -> list:
    return [(spec.name, k) for k in range(1, spec.digits + 1)]


def digit_mean(a, b, c) -> Fraction:
    """E[y] = (2c - a - b)/(b - a)."""
    return F(2 * rat(c) - a - b, b - a)


def digit_same(a, b, c, cc) -> Fraction:
    """E[y_k1 y_k2], k1 != k2: (E[S^2] - N)/(N(N-1)) with S = 2x - a - b the digit sum."""
    N = b - a
    if N < 2:
        raise ValueError("a single digit has no distinct pairs")
    s2 = 4 * rat(cc) - 4 * (a + b) * rat(c) + (a + b) ** 2
    return (s2 - N) / (N * (N - 1))


def digit_cross(ai, bi, ci, aj, bj, cj, cij) -> Fraction:
    """E[y_ik y_jl] for different variables: E[S_i S_j]/(N_i N_j)."""
    num = 4 * rat(cij) - 2 * (aj + bj) * rat(ci) - 2 * (ai + bi) * rat(cj) + (ai + bi) * (aj + bj)
    return num / ((bi - ai) * (bj - aj))


# the formulas exactly as printed, kept to report the discrepancy
def printed_mean(a, b, c) -> Fraction:
    return (2 * rat(c) - b + a) / (b - a)


def printed_same(a, b, c, cc) -> Fraction:
    num = 2 * rat(cc) - 2 * rat(c) - F((b + a) ** 2, 2) + b + a - F(b - a, 2)
    return num / ((b - a) * (b - a - 1))


def printed_cross(ai, bi, ci, aj, bj, cj, cij) -> Fraction:
    num = 4 * rat(cij) - 2 * (bi + ai) * rat(cj) - 2 * (bj + aj) * rat(ci) + (bi + ai) * (bj + ai)
    return num / ((bi - ai) * (bj - aj))


def _check_var(s: IntegerVarSpec, c, cc) -> None:
    if not s.a <= c <= s.b:
        raise NonRealizable(f"E[{s.name}] = {rat_str(c)} lies outside [{s.a}, {s.b}]")
    if cc is not None:
        if cc < c * c:
            raise NonRealizable(f"E[{s.name}^2] = {rat_str(cc)} is below E[{s.name}]^2")
        # x in [a, b] forces E[(x - a)(b - x)] >= 0
        if (s.a + s.b) * c - cc - s.a * s.b < 0:
            raise NonRealizable(f"E[{s.name}^2] = {rat_str(cc)} too large for range [{s.a}, {s.b}]")


@dataclass
class DigitMoments:
    """Digit moments per variable and per variable pair; every digit of a variable is alike."""

    mean: dict
    same: dict   # variable -> E[y_k1 y_k2], k1 != k2 (absent for single-digit variables)
    cross: dict  # (variable, variable) -> E[y_ik y_jl]

    def violations(self) -> list[dict]:
        out = []
        for u, v in self.mean.items():
            if abs(v) > 1:
                out.append({"variable": str(u), "reason": "|E[y]| > 1", "value": rat_str(v)})
        for u, v in list(self.same.items()) + list(self.cross.items()):
            if abs(v) > 1:
                out.append({"variables": str(u), "reason": "digit pair moment outside [-1, 1]", "value": rat_str(v)})
        return out


def digit_summary(specs: Sequence[IntegerVarSpec], moments: MomentSpec) -> DigitMoments:
    """Corrected digit moments without materializing the digits."""
    specs = list(specs)
    out = DigitMoments({}, {}, {})
    for s in specs:
        c = moments.mean[s.name]
        cc = moments.second.get(s.name)
        _check_var(s, c, cc)
        out.mean[s.name] = digit_mean(s.a, s.b, c)
        if s.digits > 1 and cc is not None:
            out.same[s.name] = digit_same(s.a, s.b, c, cc)
    for i, si in enumerate(specs):
        for sj in specs[i + 1:]:
            try:
                cij = moments.get_pair(si.name, sj.name)
            except KeyError:
                continue
            out.cross[(si.name, sj.name)] = digit_cross(si.a, si.b, moments.mean[si.name], sj.a, sj.b, moments.mean[sj.name], cij)
    bad = out.violations()
    if bad:
        raise NonRealizable(bad[0])
    return out


def unary_encode(specs: Sequence[IntegerVarSpec], moments: MomentSpec) -> MomentSpec:
    """Moments of x_one and every digit y_ik from the moments of the integer variables."""
    specs = list(specs)
    summ = digit_summary(specs, moments)
    out = MomentSpec()
    out.set(ONE, 1, 1)
    out.pm1.add(ONE)
    for s in specs:
        mu = summ.mean[s.name]
        names = digit_names(s)
        for u in names:
            out.set(u, mu, 1)
            out.pm1.add(u)
            out.set_pair(ONE, u, mu)
        if s.name in summ.same:
            for i, u in enumerate(names):
                for w in names[i + 1:]:
                    out.set_pair(u, w, summ.same[s.name])
    for i, si in enumerate(specs):
        for sj in specs[i + 1:]:
            if (si.name, sj.name) not in summ.cross:
                continue
            val = summ.cross[(si.name, sj.name)]
            for u in digit_names(si):
                for w in digit_names(sj):
                    out.set_pair(u, w, val)
    out.check()
    return out


def unary_discrepancies(specs: Sequence[IntegerVarSpec], moments: MomentSpec) -> list[dict]:
    """Every quantity where the printed formulas disagree with the corrected ones."""
    rows = []
    specs = list(specs)
    for s in specs:
        c, cc = moments.mean[s.name], moments.second.get(s.name)
        pairs = [("mean", digit_mean(s.a, s.b, c), printed_mean(s.a, s.b, c))]
        if cc is not None and s.digits > 1:
            pairs.append(("same", digit_same(s.a, s.b, c, cc), printed_same(s.a, s.b, c, cc)))
        for kind, good, printed in pairs:
            if good != printed:
                rows.append({"quantity": kind, "variables": [s.name], "corrected": rat_str(good), "printed": rat_str(printed)})
    for i, si in enumerate(specs):
        for sj in specs[i + 1:]:
            try:
                cij = moments.get_pair(si.name, sj.name)
            except KeyError:
                continue
            args = (si.a, si.b, moments.mean[si.name], sj.a, sj.b, moments.mean[sj.name], cij)
            good, printed = digit_cross(*args), printed_cross(*args)
            if good != printed:
                rows.append({"quantity": "cross", "variables": [si.name, sj.name], "corrected": rat_str(good), "printed": rat_str(printed)})
    return rows


def digit_oracle(specs: Sequence[IntegerVarSpec], dist) -> MomentSpec:
    """Exact digit moments by enumerating every digit placement for every support point."""
    specs = list(specs)
    names = [ONE] + [u for s in specs for u in digit_names(s)]
    acc = {}
    for x, p in dist:
        p = rat(p)
        choices = []
        for s, xi in zip(specs, x):
            if not s.a <= xi <= s.b:
                raise ValueError(f"support point value {xi} outside the range of {s.name}")
            opts = []
            for plus in combinations(range(s.digits), xi - s.a):
                opts.append(tuple(1 if k in plus else -1 for k in range(s.digits)))
            choices.append(opts)
        total = 1
        for o in choices:
            total *= len(o)
        for combo in product(*choices):
            y = (1,) + tuple(d for digits in combo for d in digits)
            w = p / total
            for i in range(len(y)):
                for j in range(i, len(y)):
                    acc[(i, j)] = acc.get((i, j), F(0)) + w * y[i] * y[j]
                acc[(i, None)] = acc.get((i, None), F(0)) + w * y[i]
    out = MomentSpec()
    for i, u in enumerate(names):
        out.set(u, acc[(i, None)], acc[(i, i)])
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            out.set_pair(names[i], names[j], acc[(i, j)])
    return out


def encode_form(l: LinearForm, specs: Sequence[IntegerVarSpec]) -> tuple[LinearForm, list]:
    """Rewrite a form over the integer variables as a form over [x_one, digits...]."""
    specs = list(specs)
    if l.k != len(specs):
        raise ValueError("form and variable list differ in length")
    names = [ONE] + [u for s in specs for u in digit_names(s)]
    w = [l.constant]
    for c, s in zip(l.weights, specs):
        w[0] += c * F(s.a + s.b, 2)
        w.extend([c / 2] * s.digits)
    return LinearForm(tuple(w), 0), names
