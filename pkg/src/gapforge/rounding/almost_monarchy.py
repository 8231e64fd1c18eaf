"""The degree-3/5/7 rounding scheme for the almost-monarchy predicate.

After rounding, a monomial on d ∈ {3, 5, 7} distinct indices has bias

    d = 3:   3Cε/E   · T_3,     d = 5:  -6Cε/E² · T_5,     d = 7:  6Cε/E³ · T_7,

where T_d sums b_{j0}·b_{j1 j2}···b_{j(d-2) j(d-1)} over the partitions of the index
set into one singleton and (d-1)/2 unordered pairs (3, 15 and 105 terms), with
E = (k² - 9k + 18)/2 and C = 2^{k-2}(f̂_P - (k-4)f̂_C)/((k-2)(k-3)).  Summing
against the Fourier coefficients turns each degree into S_H sums over the patterns

    S1 {i1},{(i2,i3)}   S2 {α},{(i2,i3)}   S3 {i1},{(α,i2)}          (d = 3)
    S4..S6 and S7..S9: the same with one and two extra disjoint pairs.

The advantage is exact: no term is dropped.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from ..exactnum import rat
from ..predicate import almost_monarchy_form, fourier_closed_form
from .hypergraph import BiasData, TARGETS, s_aggregate, s_direct, pattern
from .mixture import Mixture, NotCertified, random_mixture

DIRECT_K_CAP = 11

EDGE = pattern("{(i1,i2)}")
PRES_EDGE = pattern("{(α,i1)}")
LOOP = pattern("{i1,(i1,i2)}")


def E_of(k: int) -> Fraction:
    return Fraction(k * k - 9 * k + 18, 2)


@dataclass(frozen=True)
class AlmostFourier:
    k: int
    P: Fraction
    C: Fraction
    C3: Fraction
    C5: Fraction
    C7: Fraction
    P2C: Fraction
    P4C: Fraction
    P6C: Fraction

    @property
    def constant(self) -> Fraction:
        k = self.k
        return 2 ** (k - 2) * (self.P - (k - 4) * self.C) / ((k - 2) * (k - 3))


def almost_fourier(k: int) -> AlmostFourier:
    """Closed-form coefficients (checked against the transform in the test suite)."""
    f = lambda c: fourier_closed_form(k, c)  # noqa: E731
    return AlmostFourier(k, f("P"), f("C"), f("3C"), f("5C"), f("7C"), f("P+2C"), f("P+4C"), f("P+6C"))


def partition_terms(idx: Sequence[int]) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """All splits of ``idx`` (odd length) into one singleton and unordered pairs."""
    idx = tuple(idx)
    if len(idx) % 2 == 0:
        raise ValueError("need an odd number of indices")
    out = []
    for s in idx:
        rest = [i for i in idx if i != s]
        for m in _matchings(rest):
            out.append((s, m))
    return out


def _matchings(xs: list[int]):
    if not xs:
        yield ()
        return
    a = xs[0]
    for j in range(1, len(xs)):
        rest = xs[1:j] + xs[j + 1:]
        for m in _matchings(rest):
            yield ((a, xs[j]),) + m


def symmetric_bias(b: Sequence, pair, idx: Sequence[int]) -> Fraction:
    """T_d at the index tuple: Σ over singleton+pairs splits of Π biases."""
    total = Fraction(0)
    for s, m in partition_terms(idx):
        v = rat(b[s])
        for i, j in m:
            v *= pair(i, j)
            if not v:
                break
        total += v
    return total


@dataclass
class AlmostMonarchyResult:
    k: int
    advantage: Fraction  # A/ε
    alpha: Fraction
    beta: Fraction
    sums: dict
    degree_terms: dict
    delta: Fraction
    slack: Fraction
    telescoping: bool
    evaluator: str
    C: Fraction = field(default=Fraction(0))
    E: Fraction = field(default=Fraction(0))


def _validate_k(k: int, lo: int = 7) -> None:
    if k < lo:
        raise ValueError(f"the almost-monarchy scheme needs k >= {lo}")


def _coerce(profile, k: int | None) -> tuple[BiasData, int]:
    if isinstance(profile, Mixture):
        profile.certify(almost_monarchy_form(profile.k))
        return profile.bias_data(), profile.k
    if isinstance(profile, BiasData):
        return profile, profile.k
    raise NotCertified("pass a Mixture, or BiasData with certified=False")


def almost_monarchy_advantage(profile, eps=1, evaluator: str = "aggregate",
                              certified: bool = True, min_k: int = 15) -> AlmostMonarchyResult:
    """Exact leading-order advantage A/ε (times ``eps``) of the scheme.

    ``profile`` is a Mixture of satisfying assignments (checked here) or, with
    ``certified=False``, raw BiasData.  ``evaluator`` is "aggregate" (polynomial
    in k) or "direct" (injective enumeration, k <= 11).
    """
    if isinstance(profile, BiasData) and certified:
        raise NotCertified("raw BiasData is not certified; pass a Mixture or certified=False")
    d, k = (profile, profile.k) if isinstance(profile, BiasData) else _coerce(profile, None)
    _validate_k(k, min_k)
    if evaluator == "direct" and k > DIRECT_K_CAP:
        raise ValueError(f"direct evaluation is capped at k = {DIRECT_K_CAP}")
    f = almost_fourier(k)
    E, C = E_of(k), f.constant
    cache: dict = {}
    if evaluator == "aggregate":
        S = {n: s_aggregate(p, d, cache) for n, p in TARGETS.items()}
        edge = s_aggregate(EDGE, d, cache)
    elif evaluator == "direct":
        S = {n: s_direct(p, d) for n, p in TARGETS.items()}
        edge = s_direct(EDGE, d)
    else:
        raise ValueError(f"unknown evaluator {evaluator!r}")
    alpha, beta = d.alpha, d.beta
    deg = {
        1: f.P * alpha + f.C * beta,
        3: 3 * C / E * (f.C3 * S["S1"] + f.P2C * (S["S2"] + S["S3"])),
        5: -6 * C / E ** 2 * (f.C5 * S["S4"] + f.P4C * (S["S5"] + S["S6"])),
        7: 6 * C / E ** 3 * (f.C7 * S["S7"] + f.P6C * (S["S8"] + S["S9"])),
    }
    delta = edge / E - 1
    slack = (k - 4) * alpha + beta - Fraction(1, 3) - (k - 6) * abs(delta) / 3
    # leading β-parts of degrees 3, 5, 7 telescope to β(1 + Δ³)
    u = 1 + delta
    lead = 3 * beta * edge / E - 3 * beta * edge ** 2 / E ** 2 + beta * edge ** 3 / E ** 3
    tele = (3 * u - 3 * u ** 2 + u ** 3 == 1 + delta ** 3) and lead == beta * (1 + delta ** 3)
    S["edge"] = edge
    return AlmostMonarchyResult(k, sum(deg.values()) * rat(eps), alpha, beta, S, deg, delta, slack,
                                tele, evaluator, C, E)


def almost_monarchy_advantage_tuples(d: BiasData) -> Fraction:
    """A/ε by enumerating every index set of size 1, 3, 5, 7; the oracle."""
    k = d.k
    if k > DIRECT_K_CAP:
        raise ValueError(f"tuple enumeration is capped at k = {DIRECT_K_CAP}")
    e = d.expand()
    b = (e.alpha,) + e.b
    M = e.M

    def pair(i, j):
        if i == 0:
            return e.a[j - 1]
        if j == 0:
            return e.a[i - 1]
        return M[i - 1][j - 1]

    f = almost_fourier(k)
    E, C = E_of(k), f.constant
    coef = {3: 3 * C / E, 5: -6 * C / E ** 2, 7: 6 * C / E ** 3}
    cit = {3: f.C3, 5: f.C5, 7: f.C7}
    pres = {3: f.P2C, 5: f.P4C, 7: f.P6C}
    total = f.P * b[0] + f.C * sum(b[1:], Fraction(0))
    for dd in (3, 5, 7):
        for t in combinations(range(k), dd):
            fh = pres[dd] if t[0] == 0 else cit[dd]
            total += fh * coef[dd] * symmetric_bias(b, pair, t)
    return total


# --------------------------------------------------------------------------
# vertices

def vertex(k: int, president: int, dissenters: int) -> tuple[int, ...]:
    return (president,) + (-1,) * dissenters + (1,) * (k - 1 - dissenters)


def vertex_classes(k: int) -> list[tuple[int, int]]:
    """(president, number of -1 citizens) for every satisfying assignment class."""
    return [(1, j) for j in range(k - 2)] + [(-1, 0), (-1, 1)]


def _esym(p: int, q: int, d: int) -> int:
    """Elementary symmetric polynomial e_d of p values +1 and q values -1."""
    return sum(comb(p, j) * comb(q, d - j) * (-1) ** (d - j) for j in range(d + 1))


def vertex_advantage_closed(k: int, president: int, dissenters: int) -> Fraction:
    """A/ε at a vertex, independent of the S_H machinery.

    At a ±1 point every singleton+pairs product equals x_I, so T_d = N_d·x_I with
    N_d = 3, 15, 105 and the sums over index sets are elementary symmetric
    polynomials of the citizens.
    """
    f = almost_fourier(k)
    E, C = E_of(k), f.constant
    p, q = k - 1 - dissenters, dissenters
    total = f.P * president + f.C * (p - q)
    for d, n, c, cit, pres in ((3, 3, 3 * C / E, f.C3, f.P2C),
                               (5, 15, -6 * C / E ** 2, f.C5, f.P4C),
                               (7, 105, 6 * C / E ** 3, f.C7, f.P6C)):
        total += c * n * (cit * _esym(p, q, d) + pres * president * _esym(p, q, d - 1))
    return total


def is_satisfying(x: Sequence[int]) -> bool:
    k = len(x)
    return (k - 4) * x[0] + sum(x[1:]) > 0


def delta_floor_check(x: Sequence[int], k: int | None = None) -> bool:
    """(k-4)x_1 + Σ_{i≥2} x_i >= 1/3 + (k-6)|Δ|/3 at a satisfying assignment."""
    x = tuple(int(v) for v in x)
    k = len(x) if k is None else k
    if len(x) != k or not is_satisfying(x):
        raise ValueError(f"{x} does not satisfy almost-monarchy on {k} variables")
    s = sum(x[1:])
    pairs = Fraction(s * s - (k - 1), 2)  # Σ_{i<j} x_i x_j over citizens
    delta = pairs / E_of(k) - 1
    return (k - 4) * x[0] + s >= Fraction(1, 3) + (k - 6) * abs(delta) / 3


def sample_vertex(k: int):
    """Sampler that picks a class uniformly, then a random arrangement."""
    classes = vertex_classes(k)

    def draw(rng: np.random.Generator):
        p, j = classes[int(rng.integers(0, len(classes)))]
        cit = np.array([-1] * j + [1] * (k - 1 - j))
        rng.shuffle(cit)
        return (p,) + tuple(int(v) for v in cit)
    return draw


# --------------------------------------------------------------------------
# threshold search

@dataclass
class KReport:
    k: int
    vertices: int
    mixtures: int
    min_vertex: Fraction
    min_mixture: Fraction | None
    delta_floor: bool
    worst: dict | None = None

    @property
    def positive(self) -> bool:
        return self.min_vertex > 0 and (self.min_mixture is None or self.min_mixture > 0)


def scan_k(k: int, rng: np.random.Generator, vertices: int = 10_000, mixtures: int = 1_000) -> KReport:
    """Evaluate sampled vertices and mixtures at one k.

    A vertex's advantage depends only on its class (president sign, number of
    dissenters), so each class is evaluated once and samples are looked up.
    """
    by_class = {c: almost_monarchy_advantage(Mixture.vertex(vertex(k, *c))).advantage
                for c in vertex_classes(k)}
    draw = sample_vertex(k)
    floor_ok = True
    seen_min = None
    for _ in range(vertices):
        x = draw(rng)
        c = (x[0], sum(1 for v in x[1:] if v == -1))
        floor_ok &= delta_floor_check(x, k)
        v = by_class[c]
        seen_min = v if seen_min is None or v < seen_min else seen_min
    min_vertex = min(by_class.values())
    worst = None
    if min_vertex <= 0:
        c = min(by_class, key=by_class.get)
        worst = {"kind": "vertex", "point": vertex(k, *c), "advantage": min_vertex}
    min_mix = None
    for _ in range(mixtures):
        m = random_mixture(draw, rng)
        v = almost_monarchy_advantage(m).advantage
        if min_mix is None or v < min_mix:
            min_mix = v
            if v <= 0 and (worst is None or v < worst["advantage"]):
                worst = {"kind": "mixture", "points": m.points, "weights": m.weights, "advantage": v}
    return KReport(k, vertices, mixtures, min(min_vertex, seen_min), min_mix, floor_ok, worst)


def _scan_seeded(args) -> KReport:
    k, s, vertices, mixtures = args
    return scan_k(k, np.random.default_rng(s), vertices, mixtures)


def find_threshold(k_min: int = 15, k_max: int = 60, seed: int = 0, vertices: int = 10_000,
                   mixtures: int = 1_000, parallelism: int = 1) -> dict:
    """Smallest k* such that every k in [k*, k_max] shows only positive advantages.

    Each k draws from its own spawned seed, so results do not depend on
    ``parallelism`` (the number of worker processes).
    """
    if k_min < 15 or k_max < k_min:
        raise ValueError("need 15 <= k_min <= k_max")
    seeds = np.random.SeedSequence(seed).spawn(k_max - k_min + 1)
    jobs = [(k, s, vertices, mixtures) for k, s in zip(range(k_min, k_max + 1), seeds)]
    if parallelism > 1:
        with ProcessPoolExecutor(parallelism) as pool:
            reports = list(pool.map(_scan_seeded, jobs))
    else:
        reports = [_scan_seeded(j) for j in jobs]
    kstar = None
    for r in reversed(reports):
        if not r.positive:
            break
        kstar = r.k
    return {"k_star": kstar, "reports": reports, "seed": seed,
            "vertices": vertices, "mixtures": mixtures}
