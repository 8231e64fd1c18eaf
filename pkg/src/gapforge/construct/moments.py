"""First and second moments over named variables, with realizability checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable

from ..exactnum import rat, rat_str


class NonRealizable(ValueError):
    """The moments cannot come from any probability distribution."""


def _key(u: Hashable, v: Hashable) -> tuple:
    return (u, v) if repr(u) <= repr(v) else (v, u)


@dataclass
class MomentSpec:
    """E[x_i], E[x_i^2] and E[x_i x_j] for a list of variables.

    ``pm1`` marks variables known to take values ±1, for which E[x^2] = 1 and
    |E[x]| <= 1 are required.
    """

    names: list = field(default_factory=list)
    mean: dict = field(default_factory=dict)
    second: dict = field(default_factory=dict)
    pair: dict = field(default_factory=dict)
    pm1: set = field(default_factory=set)

    def set(self, u, mean, second=None) -> None:
        if u not in self.mean:
            self.names.append(u)
        self.mean[u] = rat(mean)
        if second is not None:
            self.second[u] = rat(second)

    def set_pair(self, u, v, value) -> None:
        if u == v:
            self.second[u] = rat(value)
        else:
            self.pair[_key(u, v)] = rat(value)

    def get_pair(self, u, v) -> Fraction:
        if u == v:
            return self.second[u]
        return self.pair[_key(u, v)]

    def violations(self) -> list[dict]:
        """Necessary conditions for realizability that fail.

        Checked: E[x^2] >= E[x]^2; for ±1 variables also E[x^2] = 1 and
        |E[x]| <= 1; Cauchy-Schwarz for every recorded pair.
        """
        out = []
        for u in self.names:
            c, s = self.mean[u], self.second.get(u)
            if s is not None and s < c * c:
                out.append({"variable": str(u), "reason": "second moment below squared mean", "mean": rat_str(c), "second": rat_str(s)})
            if u in self.pm1:
                if s is not None and s != 1:
                    out.append({"variable": str(u), "reason": "±1 variable with E[x^2] != 1", "second": rat_str(s)})
                if abs(c) > 1:
                    out.append({"variable": str(u), "reason": "|E[x]| > 1", "mean": rat_str(c)})
        for (u, v), c in self.pair.items():
            su, sv = self.second.get(u), self.second.get(v)
            if su is not None and sv is not None and c * c > su * sv:
                out.append({"pair": [str(u), str(v)], "reason": "Cauchy-Schwarz violated", "value": rat_str(c)})
        return out

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise NonRealizable(bad[0])

    def to_dict(self) -> dict:
        return {
            "mean": {str(u): rat_str(self.mean[u]) for u in self.names},
            "second": {str(u): rat_str(self.second[u]) for u in self.names if u in self.second},
            "pair": {f"{u}|{v}": rat_str(c) for (u, v), c in sorted(self.pair.items(), key=repr)},
        }


def moments_of_distribution(dist, names=None) -> MomentSpec:
    """Exact moments of a finite distribution given as (vector, probability) pairs."""
    dist = [(tuple(x), rat(p)) for x, p in dist]
    n = len(dist[0][0])
    names = list(range(n)) if names is None else list(names)
    spec = MomentSpec()
    for i, u in enumerate(names):
        spec.set(u, sum((p * x[i] for x, p in dist), Fraction(0)), sum((p * x[i] * x[i] for x, p in dist), Fraction(0)))
    for i in range(n):
        for j in range(i + 1, n):
            spec.set_pair(names[i], names[j], sum((p * x[i] * x[j] for x, p in dist), Fraction(0)))
    return spec
