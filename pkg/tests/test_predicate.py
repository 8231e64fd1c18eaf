from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gapforge.predicate import (Constraint, LinearForm, Predicate, ZeroValue, almost_monarchy,
                                assignment, assignment_mask, check_perfectly_balanced, class_mask,
                                constraint_fourier, eval_ltf, fourier_closed_form, fourier_direct,
                                fourier_transform, glst, layer_counts, mask_indices, monarchy,
                                random_sat_prob, subset_mask, xor3)
from oracles import cube, fourier_coefficient, layer_balanced


def test_bit_convention():
    # bit i set means x_{i+1} = +1
    assert assignment(0b101, 3) == (1, -1, 1)
    assert assignment_mask((1, -1, 1)) == 0b101
    assert subset_mask([1, 3]) == 0b101
    assert mask_indices(0b101) == (1, 3)


@given(st.integers(1, 8).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, 2**k - 1))))
def test_assignment_round_trip(km):
    k, m = km
    assert assignment_mask(assignment(m, k)) == m


def test_xor3_character():
    F = fourier_transform(xor3())
    assert F.coefficient([1, 2, 3]) == 1
    assert list(F.items()) == [(0b111, Fraction(1))]


def test_glst_random_rate():
    assert random_sat_prob(glst()) == Fraction(1, 2)


def test_monarchy_5_rate_matches_count():
    P = monarchy(5)
    count = sum(1 for x in cube(5) if 3 * x[0] + sum(x[1:]) > 0)
    assert random_sat_prob(P) == Fraction(count, 32)


@st.composite
def predicates(draw, max_k=6):
    k = draw(st.integers(1, max_k))
    plus = draw(st.sets(st.integers(0, 2**k - 1)))
    return Predicate.from_plus_set(k, plus)


@given(predicates(), st.data())
def test_transform_matches_direct_sum(P, data):
    S = data.draw(st.integers(0, 2**P.k - 1))
    F = fourier_transform(P)
    want = fourier_coefficient(P, P.k, [i for i in range(P.k) if S >> i & 1])
    assert F[S] == want == fourier_direct(P, S)


@given(predicates(max_k=8))
def test_parseval_and_inversion(P):
    F = fourier_transform(P)
    assert F.parseval() == 1
    for m in range(0, 2**P.k, max(1, 2**P.k // 16)):
        x = assignment(m, P.k)
        assert F.evaluate(x) == P(x)


@pytest.mark.parametrize("k", [6, 8, 10, 12])
def test_parseval_named(k):
    assert fourier_transform(almost_monarchy(k)).parseval() == 1
    assert fourier_transform(monarchy(k)).parseval() == 1


def closed_classes(k):
    out = ["P"] + [f"{a}C" for a in range(1, k, 2)] + [f"P+{a}C" for a in range(2, k, 2)]
    return out


@pytest.mark.parametrize("k", [6, 8, 10])
def test_closed_forms_match_transform(k):
    F = fourier_transform(almost_monarchy(k))
    for cls in closed_classes(k):
        assert fourier_closed_form(k, cls) == F[class_mask(cls)], cls


def test_closed_form_examples():
    # the sign of the P+aC class is 2a - k, so P+2C is negative for k > 4
    assert fourier_closed_form(8, "P+2C") == Fraction(4 - 8, 2**6)
    assert fourier_closed_form(8, "C") == Fraction(6, 2**6)
    with pytest.raises(ValueError):
        fourier_closed_form(8, "2C")
    with pytest.raises(ValueError):
        fourier_closed_form(8, "P+3C")


def test_closed_forms_by_symmetry():
    # every subset in a class has the same coefficient as its representative
    k = 7
    F = fourier_transform(almost_monarchy(k))
    for S in range(1, 2**k):
        pres = S & 1
        a = bin(S >> 1).count("1")
        if pres and a == 0:
            cls = "P"
        elif not pres and a % 2 == 1:
            cls = f"{a}C"
        elif pres and a % 2 == 0:
            cls = f"P+{a}C"
        else:
            assert F[S] == 0
            continue
        assert F[S] == fourier_closed_form(k, cls)


def test_balanced_examples():
    assert check_perfectly_balanced(LinearForm((2, 1, -1, -1)))
    assert not check_perfectly_balanced(LinearForm((1, 1, 1, 1)))
    with pytest.raises(ZeroValue):
        check_perfectly_balanced(LinearForm((1, -1, 1, -1)))
    with pytest.raises(ValueError):
        check_perfectly_balanced(LinearForm((1, 1), Fraction(1, 2)))


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=5))
def test_balance_agrees_with_layer_oracle(w):
    want = layer_balanced(w)
    l = LinearForm(tuple(w))
    if want is None:
        counts = layer_counts(l)
        # either an unbalanced zero-free layer decides first, or a zero raises
        try:
            assert check_perfectly_balanced(l) is False
        except ZeroValue as e:
            assert l.value(e.point) == 0
        assert any(z for _, z, _ in counts.values())
    else:
        assert check_perfectly_balanced(l) == want


def test_no_balanced_form_on_three_variables():
    # exhaustive over |w_i| <= 5: three is not a power of two
    for w in product(range(-5, 6), repeat=3):
        assert layer_balanced(w) is not True


def test_ltf_sign_of_zero_is_an_error():
    with pytest.raises(ZeroValue):
        eval_ltf(LinearForm((1, 1)), (1, -1))
    with pytest.raises(ZeroValue):
        Predicate.from_ltf(LinearForm((1, 1)))


def test_predicate_validation():
    with pytest.raises(ValueError):
        Predicate(2, np.array([1, 1, 1]))
    with pytest.raises(ValueError):
        Predicate(1, np.array([1, 0]))
    with pytest.raises(ValueError):
        Predicate.from_plus_set(2, [4])


def test_constraint_validation():
    P = xor3()
    with pytest.raises(ValueError):
        Constraint(P, (0, 0, 1), (1, 1, 1))
    with pytest.raises(ValueError):
        Constraint(P, (0, 1, 2), (1, 2, 1))


@given(st.permutations(range(4)), st.lists(st.sampled_from((1, -1)), min_size=3, max_size=3))
def test_constraint_fourier_is_the_global_expansion(perm, signs):
    c = Constraint(xor3(), tuple(perm[:3]), tuple(signs))
    expansion = constraint_fourier(c)
    for x in cube(4):
        val = Fraction(0)
        for S, v in expansion.items():
            chi = 1
            for i in range(4):
                if S >> i & 1:
                    chi *= x[i]
            val += v * chi
        assert val == c(x)
