from fractions import Fraction
import pytest
from hypothesis import given, strategies as st

from gapforge.gapverify import (GapInstance, builtin_instances, enumerated_constant, fourier_sum,
                                glst_instance, ktw_vanish_check, three_xor_instance, vanish_measure,
                                vanish_report, verify_perfect_gap)
from gapforge.polytope import (BiasProfile, all_vertices, bias_projection, embed, ktw_vertices,
                               pair_list, perfect_sdp_check, profile_of_distribution,
                               signed_projection)
from gapforge.predicate import Constraint, glst, monarchy, xor3
from oracles import cube

F = Fraction


# --------------------------------------------------------------------------
# polytope

def test_embedding_order():
    assert pair_list(3) == [(0, 1), (0, 2), (1, 2)]
    assert embed((1, -1, 1)) == (1, -1, 1, -1, 1, -1)
    assert len(all_vertices(4)) == 16


def test_profile_validation():
    with pytest.raises(ValueError):
        BiasProfile(2, (0,))
    with pytest.raises(ValueError):
        BiasProfile(2, (0, 0), {(0, 0): 1})
    with pytest.raises(ValueError):
        BiasProfile(2, (F(3, 2), 0))
    B = BiasProfile(3, (0, 0, 0), {(2, 1): F(-1, 2), (0, 1): 0})
    assert B.bij == {(1, 2): F(-1, 2)} and B.pair(2, 1) == F(-1, 2) and B.pair(1, 1) == 1


@st.composite
def distributions(draw, n=4):
    pts = draw(st.lists(st.tuples(*[st.sampled_from((1, -1))] * n), min_size=1, max_size=5))
    w = draw(st.lists(st.integers(1, 6), min_size=len(pts), max_size=len(pts)))
    return [(x, F(wi, sum(w))) for x, wi in zip(pts, w)]


@given(distributions())
def test_moments_of_distributions_are_psd(dist):
    assert profile_of_distribution(dist, 4).is_psd()


def test_bias_projection_and_signs():
    B = BiasProfile(4, (F(1, 2), 0, 0, F(-1, 3)), {(0, 3): F(1, 4)})
    assert bias_projection(B, (3, 0)) == (F(-1, 3), F(1, 2), F(1, 4))
    c = Constraint(xor3(), (3, 0, 1), (-1, 1, 1))
    assert signed_projection(B, c)[:3] == (F(1, 3), F(1, 2), 0)
    assert signed_projection(B, c)[3] == -F(1, 4)


def test_ktw_vertices_are_satisfying_embeddings():
    verts = ktw_vertices(xor3())
    assert sorted(verts) == sorted(embed(x) for x in cube(3) if x[0] * x[1] * x[2] == 1)


def test_perfect_sdp_check_on_builtins():
    for inst in builtin_instances().values():
        for c in inst.constraints:
            cert = perfect_sdp_check(inst.bias, c)
            assert cert
            assert sum(p for _, p in cert.distribution) == 1
            for x, p in cert.distribution:
                assert c.pred(tuple(z * v for z, v in zip(c.signs, x))) == 1


def test_perfect_sdp_check_rejects_outside_point():
    # every solution of xor3 has x1 x2 x3 = 1, so b = (1, 1, -1) is outside
    B = BiasProfile(3, (1, 1, -1), {(0, 1): 1, (0, 2): -1, (1, 2): -1})
    cert = perfect_sdp_check(B, Constraint(xor3(), (0, 1, 2), (1, 1, 1)))
    assert not cert and cert.hull.normal is not None


# --------------------------------------------------------------------------
# builtins and the four clauses

def test_builtin_shapes():
    assert three_xor_instance().m == 8
    g = glst_instance()
    assert g.m == 2 and g.bias.pair(2, 3) == -1


@pytest.mark.parametrize("name", ["three_xor", "glst"])
def test_builtins_pass(name):
    rep = verify_perfect_gap(builtin_instances()[name])
    assert rep.passed and rep.constant == 0
    assert [c.name for c in rep.clauses] == ["moments", "support", "psd", "constant"]


@pytest.mark.parametrize("name", ["three_xor", "glst"])
def test_algebraic_constant_matches_enumeration(name):
    inst = builtin_instances()[name]
    ok, c = enumerated_constant(inst)
    assert ok and c == verify_perfect_gap(inst).constant


@pytest.mark.parametrize("name, subset", [("three_xor", [1, 2, 3]), ("glst", [2, 3])])
def test_deletion_mutants_fail_constant_clause(name, subset):
    inst = builtin_instances()[name]
    for a in range(inst.m):
        rep = verify_perfect_gap(inst.without(a))
        cl = rep.clause("constant")
        assert not cl.passed and cl.witness["subset"] == subset
        assert enumerated_constant(inst.without(a)) == (False, None)


def test_moment_clause_names_the_pair():
    inst = glst_instance()
    B = BiasProfile(4, (0, 0, 0, 0), {})
    rep = verify_perfect_gap(GapInstance(4, inst.constraints, B, inst.dists))
    cl = rep.clause("moments")
    assert not cl.passed and cl.witness["variables"] == [3, 4]


def test_support_clause_names_the_point():
    inst = three_xor_instance()
    dists = list(inst.dists)
    x = dists[0][0][0]
    dists[0] = ((tuple(-v for v in x), F(1, 4)),) + dists[0][1:]
    rep = verify_perfect_gap(GapInstance(3, inst.constraints, inst.bias, dists))
    assert not rep.clause("support").passed


def test_psd_clause_witness():
    # b12 = b13 = 1, b23 = -1 is not a moment matrix
    B = BiasProfile(3, (0, 0, 0), {(0, 1): 1, (0, 2): 1, (1, 2): -1})
    inst = three_xor_instance()
    rep = verify_perfect_gap(GapInstance(3, inst.constraints, B, inst.dists))
    cl = rep.clause("psd")
    assert not cl.passed and Fraction(cl.witness["value"]) < 0


@given(st.permutations(range(8)))
def test_constraint_order_is_irrelevant(order):
    inst = three_xor_instance()
    assert verify_perfect_gap(inst.permuted(order)).to_dict() == verify_perfect_gap(inst).to_dict()


@st.composite
def random_instances(draw):
    n = draw(st.integers(3, 6))
    cons = []
    for _ in range(draw(st.integers(1, 4))):
        P = draw(st.sampled_from([xor3(), glst()] if n >= 4 else [xor3()]))
        k = P.k
        phi = draw(st.permutations(range(n)))[:k]
        z = draw(st.tuples(*[st.sampled_from((1, -1))] * k))
        cons.append(Constraint(P, tuple(phi), tuple(z)))
    # distributions need not match for the Fourier clause
    dists = [[(tuple(1 for _ in range(c.k)), F(1))] for c in cons]
    return GapInstance(n, cons, BiasProfile.zero(n), dists)


@given(random_instances())
def test_fourier_clause_matches_enumeration(inst):
    sums = fourier_sum(inst)
    algebraic = all(v == 0 for T, v in sums.items() if T)
    ok, c = enumerated_constant(inst)
    assert algebraic == ok
    rep = verify_perfect_gap(inst)
    assert rep.clause("constant").passed == ok
    if ok:
        assert c == rep.constant


def test_recomputed_distributions_are_idempotent():
    inst = glst_instance()
    first = verify_perfect_gap(inst).to_dict()
    B = profile_of_distribution(
        [(tuple(x[i] for i in range(4)), p) for x, p in inst.dists[0]], 4)
    assert B == inst.bias
    assert verify_perfect_gap(GapInstance(4, inst.constraints, B, inst.dists)).to_dict() == first


# --------------------------------------------------------------------------
# vanishing measure

def test_three_xor_vanishes_at_every_level():
    inst = three_xor_instance()
    for t in (1, 2, 3):
        assert ktw_vanish_check(inst, t).vanished


def test_glst_vanishes_at_every_level():
    inst = glst_instance()
    for t in (1, 2, 3, 4):
        assert ktw_vanish_check(inst, t).vanished


def test_both_atom_orders_agree_on_builtins():
    for inst in builtin_instances().values():
        out = vanish_report(inst)
        assert out["vanished"] and "alternate_order" not in out


def generic_shift(p, salt):
    return [max(min(v + F(7 * j + salt, 101), F(1)), F(-1)) for j, v in enumerate(p)]


@pytest.mark.parametrize("name", ["three_xor", "glst"])
@given(salt=st.integers(1, 50))
def test_perturbed_bias_point_fails(name, salt):
    inst = builtin_instances()[name]
    points = [list(signed_projection(inst.bias, c)) for c in inst.constraints]
    for a in range(inst.m):
        q = [list(p) for p in points]
        q[a] = generic_shift(q[a], salt)
        levels = [ktw_vanish_check(inst, t, points=q) for t in range(1, inst.constraints[0].k + 1)]
        bad = [lv for lv in levels if not lv.vanished]
        assert bad and bad[0].residual != 0 and bad[0].point is not None


@given(st.lists(st.fractions(-1, 1, max_denominator=4), min_size=3, max_size=3))
def test_profile_perturbation_cannot_break_sign_symmetric_instances(b):
    # the eight sign patterns of 3-XOR cancel for every profile, not only b = 0
    inst = three_xor_instance()
    mut = GapInstance(3, inst.constraints, BiasProfile(3, tuple(b)), inst.dists)
    assert vanish_report(mut)["vanished"]


def test_single_constraint_measure_does_not_cancel():
    # one 3-XOR constraint with nonzero first moments: the z-flips no longer pair up
    c = Constraint(xor3(), (0, 1, 2), (1, 1, 1))
    half = F(1, 2)
    inst = GapInstance(3, [c], BiasProfile(3, (half, half, half), {(0, 1): 0}), [[((1, 1, 1), F(1))]])
    meas = vanish_measure(inst, 3)
    assert any(v != 0 for v in meas.values())
    lv = ktw_vanish_check(inst, 3)
    assert not lv.vanished and lv.residual == meas[lv.point]


def test_vanish_arity_cap():
    big = Constraint(monarchy(7), tuple(range(7)), (1,) * 7)
    inst = GapInstance(7, [big], BiasProfile.zero(7), [[((1,) * 7, F(1))]])
    with pytest.raises(ValueError):
        ktw_vanish_check(inst, 1)
