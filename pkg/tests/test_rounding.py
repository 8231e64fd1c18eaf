from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapforge.predicate import almost_monarchy, fourier_closed_form, fourier_transform, monarchy
from gapforge.rounding.almost_monarchy import (E_of, almost_fourier, almost_monarchy_advantage,
                                               almost_monarchy_advantage_tuples, delta_floor_check,
                                               find_threshold, is_satisfying, partition_terms,
                                               sample_vertex, scan_k, symmetric_bias, vertex,
                                               vertex_advantage_closed, vertex_classes)
from gapforge.rounding.hypergraph import (ALPHA, TARGETS, BiasData, HypergraphPattern,
                                          check_identities, expand_components, pattern,
                                          random_bias_data, s_aggregate, s_direct, s_moebius)
from gapforge.rounding.mixture import Mixture, NotCertified, random_mixture
from gapforge.rounding.monarchy import (minsign3, monarchy_advantage, monarchy_advantage_direct,
                                        monarchy_fourier, sample_monarchy_vertex)
from oracles import all_subsets_advantage, cube, injective_sum

F = Fraction
fracs = st.fractions(-1, 1, max_denominator=6)


# --------------------------------------------------------------------------
# patterns

def test_pattern_parsing():
    p = pattern("{i1},{(i2,i3)}")
    assert (p.nfree, p.alpha, p.units, p.edges) == (3, False, (0,), ((1, 2),))
    q = pattern("{α},{(i2,i3)}")
    assert q.alpha and q.units == (ALPHA,) and q.nfree == 2
    # two bare labels read as a pair
    assert pattern("{i6,i7}") == HypergraphPattern(2, False, (), ((0, 1),))
    for bad in ("", "{x1}", "{i1} junk"):
        with pytest.raises(ValueError):
            pattern(bad)


def test_pattern_validation():
    with pytest.raises(ValueError):
        HypergraphPattern(1, False, (), ((0, 0),))
    with pytest.raises(ValueError):
        HypergraphPattern(1, False, (3,))
    with pytest.raises(ValueError):
        HypergraphPattern(8, False)


def test_canonical_and_automorphisms():
    a = pattern("{(i1,i2),(i1,i3)}")
    b = pattern("{(i1,i3),(i2,i3)}")
    assert a != b and a.canonical() == b.canonical()
    assert a.automorphisms() == 2
    assert pattern("{(i1,i2),(i1,i3),(i2,i3)}").automorphisms() == 6
    assert pattern("{i1},{(i2,i3)},{(i4,i5)},{(i6,i7)}").automorphisms() == 48


def test_components():
    p = TARGETS["S6"]
    comps = p.components()
    assert len(comps) == 3 and not p.is_connected()
    assert sum(c.nfree for c in comps) == p.nfree


def _oracle(p: HypergraphPattern, d: BiasData) -> Fraction:
    e = d.expand()
    b = (e.alpha,) + e.b

    def pair(i, j):
        if i == 0 or j == 0:
            return e.a[max(i, j) - 1]
        return e.M[i - 1][j - 1]

    return injective_sum(list(p.units), list(p.edges), list(range(p.nfree)), d.k, b, pair, ALPHA)


@pytest.mark.parametrize("name", sorted(TARGETS))
def test_direct_matches_injective_oracle(name):
    d = random_bias_data(8, np.random.default_rng(7))
    p = TARGETS[name]
    assert s_direct(p, d) == _oracle(p, d)


@pytest.mark.parametrize("text", ["{i1}", "{(α,i1)}", "{(i1,i2)}", "{i1,(i1,i2)}", "{i1,(i1,α),(i1,i2)}",
                                  "{(i1,i2),(i1,i2)}", "{(i1,i2),(i2,i3),(i3,i4)}",
                                  "{i1,(i1,i2),(i1,i3),(i2,i3)}"])
@pytest.mark.parametrize("k", [6, 8])
def test_connected_evaluators_agree(text, k):
    d = random_bias_data(k, np.random.default_rng(k))
    p = pattern(text)
    want = _oracle(p, d)
    assert s_direct(p, d) == want == s_moebius(p, d) == s_aggregate(p, d)


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(TARGETS)), st.integers(7, 9))
def test_aggregate_equals_direct_on_targets(seed, name, k):
    d = random_bias_data(k, np.random.default_rng(seed))
    p = TARGETS[name]
    assert s_aggregate(p, d) == s_direct(p, d) == s_moebius(p, d)


def test_expansion_leading_term_is_product_of_components():
    p = TARGETS["S1"]
    exp = expand_components(p)
    key = tuple(sorted((c.canonical() for c in p.components()), key=repr))
    assert any(sorted(t, key=repr) == list(key) for t in exp)


def test_type_compression_is_invisible():
    pts = [(1, 1, -1, 1, -1, 1, 1, -1, 1), (1, -1, 1, 1, 1, 1, -1, 1, -1), (-1, 1, 1, 1, 1, 1, 1, 1, 1)]
    w = [F(1, 2), F(1, 3), F(1, 6)]
    d = BiasData.from_mixture(pts, w)
    assert d.ntypes < d.k - 1
    e = d.expand()
    for p in TARGETS.values():
        assert s_aggregate(p, d) == s_aggregate(p, e) == s_direct(p, e)


def test_bias_data_validation():
    with pytest.raises(ValueError):
        BiasData(3, F(0), (1,), (F(0),), (F(0),), ((F(0),),))
    with pytest.raises(ValueError):
        BiasData(3, F(0), (1, 1), (F(0), F(0)), (F(0), F(0)), ((F(0), F(1)), (F(2), F(0))))


# --------------------------------------------------------------------------
# the nine identities

@pytest.mark.parametrize("k", [7, 8])
def test_expanded_identities_hold(k):
    rng = np.random.default_rng(100 + k)
    for _ in range(3):
        rows = check_identities(random_bias_data(k, rng))
        for name, r in rows.items():
            assert r["aggregate"] == r["direct"], name


def test_printed_identities_status():
    # S7 and S9 as printed do not match the injective sums; the others do
    rng = np.random.default_rng(3)
    mism = set()
    for _ in range(3):
        for name, r in check_identities(random_bias_data(7, rng)).items():
            if r["printed"] != r["direct"]:
                mism.add(name)
    assert mism == {"S7", "S9"}


# --------------------------------------------------------------------------
# monarchy

def test_monarchy_k5_all_ones():
    res = monarchy_advantage((1,) * 5)
    assert res.advantage == F(51, 40)
    assert (res.s3c, res.sp2c, res.C) == (4, 6, F(2, 5))
    assert res.above_floor and res.certificate == "hull"


@pytest.mark.parametrize("k", range(5, 11))
def test_monarchy_sign_preconditions(k):
    f = monarchy_fourier(k)
    assert f.C3 > 0 and f.P2C < 0 and f.C > 0


@pytest.mark.parametrize("k", [5, 6, 7])
def test_monarchy_vertices_above_floor_and_direct(k):
    P = monarchy(k)
    F_ = fourier_transform(P)
    C = monarchy_fourier(k).constant
    for x in cube(k):
        if P(x) != 1:
            continue
        res = monarchy_advantage(x, certificate=Mixture.vertex(x))
        assert res.above_floor
        assert res.advantage == monarchy_advantage_direct(x, k)
        want = all_subsets_advantage(
            lambda S: F_.coefficient([i + 1 for i in S]), lambda S: x[S[0]] if len(S) == 1 else C * minsign3(*(x[i] for i in S)),
            k, (1, 3))
        assert res.advantage == want


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(5, 8))
def test_monarchy_mixtures_above_floor(seed, k):
    rng = np.random.default_rng(seed)
    m = random_mixture(sample_monarchy_vertex(k), rng)
    res = monarchy_advantage(m.first_moments(), certificate=m)
    assert res.above_floor and res.advantage == monarchy_advantage_direct(m.first_moments(), k)


def test_monarchy_rejects_outside_point():
    with pytest.raises(NotCertified):
        monarchy_advantage((-1,) * 5)
    with pytest.raises(NotCertified):
        monarchy_advantage((1,) * 13)
    with pytest.raises(ValueError):
        monarchy_fourier(4)


@given(fracs, fracs, fracs, st.permutations(range(3)))
def test_minsign3_symmetric_and_odd(x, y, z, perm):
    v = (x, y, z)
    assert minsign3(*(v[i] for i in perm)) == minsign3(x, y, z)
    assert minsign3(-x, y, z) == -minsign3(x, y, z)


# --------------------------------------------------------------------------
# almost-monarchy

@pytest.mark.parametrize("k", [8, 10, 12, 14])
def test_almost_fourier_matches_transform(k):
    F_ = fourier_transform(almost_monarchy(k))
    f = almost_fourier(k)
    assert f.P == F_.coefficient([1]) and f.C == F_.coefficient([2])
    assert f.C5 == F_.coefficient([2, 3, 4, 5, 6])
    assert f.P4C == F_.coefficient([1, 2, 3, 4, 5])
    assert f.C7 == F_.coefficient(list(range(2, 9)))
    assert f.P6C == F_.coefficient(list(range(1, 8)))


def test_partition_term_counts():
    assert [len(partition_terms(range(d))) for d in (1, 3, 5, 7)] == [1, 3, 15, 105]
    with pytest.raises(ValueError):
        partition_terms(range(4))


@given(st.lists(fracs, min_size=5, max_size=5), st.permutations(range(5)))
def test_symmetric_bias_is_permutation_invariant(b, perm):
    pair = lambda i, j: F(i + j + 1, 7) * (1 if (i + j) % 2 else -1)  # noqa: E731
    assert symmetric_bias(b, pair, range(5)) == symmetric_bias(b, pair, [perm[i] for i in range(5)])


def test_symmetric_bias_at_a_vertex():
    x = (1, -1, 1, 1, -1)
    pair = lambda i, j: x[i] * x[j]  # noqa: E731
    assert symmetric_bias(x, pair, range(5)) == 15 * np.prod(x)


@pytest.mark.parametrize("k", [9, 10, 11])
def test_three_evaluators_agree(k):
    rng = np.random.default_rng(k)
    draw = sample_vertex(k)
    for _ in range(2):
        m = random_mixture(draw, rng)
        agg = almost_monarchy_advantage(m, min_k=7).advantage
        direct = almost_monarchy_advantage(m, evaluator="direct", min_k=7).advantage
        assert agg == direct == almost_monarchy_advantage_tuples(m.bias_data())


@pytest.mark.parametrize("k", [9, 11, 16, 20])
def test_vertex_closed_form(k):
    for c in vertex_classes(k):
        x = vertex(k, *c)
        assert is_satisfying(x)
        got = almost_monarchy_advantage(Mixture.vertex(x), min_k=7).advantage
        assert got == vertex_advantage_closed(k, *c)
    if k <= 11:
        x = vertex(k, 1, k - 3)
        assert almost_monarchy_advantage_tuples(BiasData.from_vertex(x)) == vertex_advantage_closed(k, 1, k - 3)


def test_vertex_classes_are_exactly_the_satisfying_ones():
    k = 9
    classes = {(x[0], x[1:].count(-1)) for x in map(tuple, cube(k)) if is_satisfying(x)}
    assert classes == set(vertex_classes(k))


def test_minimal_margin_vertex_value():
    # frozen from the three agreeing evaluators: negative at k = 15
    assert vertex_advantage_closed(15, 1, 12) == F(-12016075, 47775744)
    assert min(vertex_advantage_closed(15, *c) for c in vertex_classes(15)) == F(-12016075, 47775744)


def test_vertex_classes_positive_from_111():
    for k in (111, 120):
        assert all(vertex_advantage_closed(k, *c) > 0 for c in vertex_classes(k))
    assert min(vertex_advantage_closed(110, *c) for c in vertex_classes(110)) <= 0


def test_telescoping_and_delta():
    x = vertex(16, 1, 5)
    res = almost_monarchy_advantage(Mixture.vertex(x))
    assert res.telescoping and res.E == E_of(16)
    s = sum(x[1:])
    assert res.delta == F(s * s - 15, 2) / E_of(16) - 1


@pytest.mark.parametrize("k", [15, 30, 60])
def test_delta_floor_at_every_vertex_class(k):
    for c in vertex_classes(k):
        assert delta_floor_check(vertex(k, *c))
    with pytest.raises(ValueError):
        delta_floor_check((-1,) * k)


def test_certification_errors():
    d = BiasData.from_vertex(vertex(15, 1, 0))
    with pytest.raises(NotCertified):
        almost_monarchy_advantage(d)
    assert almost_monarchy_advantage(d, certified=False).advantage == vertex_advantage_closed(15, 1, 0)
    with pytest.raises(NotCertified):
        almost_monarchy_advantage(Mixture.vertex((-1,) * 15))
    with pytest.raises(ValueError):
        almost_monarchy_advantage(Mixture.vertex(vertex(9, 1, 0)))
    with pytest.raises(ValueError):
        almost_monarchy_advantage(Mixture.vertex(vertex(15, 1, 0)), evaluator="direct")


def test_mixture_validation():
    with pytest.raises(ValueError):
        Mixture(((1, 1),), (F(1, 2),))
    with pytest.raises(ValueError):
        Mixture(((1, 2),), (F(1),))
    with pytest.raises(ValueError):
        Mixture(((1, 1), (1,)), (F(1, 2), F(1, 2)))


def test_scan_and_threshold_are_seeded():
    r1 = scan_k(15, np.random.default_rng(1), vertices=50, mixtures=3)
    r2 = scan_k(15, np.random.default_rng(1), vertices=50, mixtures=3)
    assert r1 == r2 and not r1.positive and r1.worst["kind"] == "vertex"
    t1 = find_threshold(15, 16, seed=5, vertices=20, mixtures=2)
    t2 = find_threshold(15, 16, seed=5, vertices=20, mixtures=2, parallelism=2)
    assert t1["reports"] == t2["reports"] and t1["k_star"] is None
    with pytest.raises(ValueError):
        find_threshold(14, 20)


def test_closed_form_signs_used_by_the_scheme():
    k = 16
    assert fourier_closed_form(k, "3C") > 0 and fourier_closed_form(k, "P+2C") < 0
