import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gapforge import io
from gapforge.cli import dispatch
from gapforge.construct.core import core_instance
from gapforge.gapverify import builtin_instances, verify_perfect_gap
from gapforge.polytope import BiasProfile
from gapforge.predicate import LinearForm, Predicate, almost_monarchy, glst

F = Fraction


# --------------------------------------------------------------------------
# canonical JSON

def test_rationals_serialize_as_strings():
    assert io.dumps({"b": [F(1, 2), F(3), (1, 2)]}) == '{"b":["1/2","3",[1,2]]}'
    with pytest.raises(TypeError):
        io.dumps({"x": object()})


@pytest.mark.parametrize("name", ["three_xor", "glst"])
def test_instance_round_trip(name):
    inst = builtin_instances()[name]
    text = io.dumps(io.instance_to_json(inst))
    back = io.parse(text)
    assert io.dumps(io.instance_to_json(back)) == text
    assert verify_perfect_gap(back).to_dict() == verify_perfect_gap(inst).to_dict()


def test_core_round_trip():
    core = core_instance()
    text = io.dumps(io.core_to_json(core))
    assert io.parse(text) == core
    assert json.loads(text)["c_ii"] == "299"


def test_predicate_round_trips():
    for P in (glst(), almost_monarchy(7)):
        assert io.predicate_from_json(io.predicate_to_json(P)) == P
    T = Predicate.from_plus_set(3, [1, 2, 4, 7], "odd")
    d = io.predicate_to_json(T)
    assert d["kind"] == "table" and io.predicate_from_json(d) == T


@st.composite
def profiles(draw):
    n = draw(st.integers(1, 5))
    b = tuple(draw(st.fractions(-1, 1, max_denominator=7)) for _ in range(n))
    pairs = {(i, j): draw(st.fractions(-1, 1, max_denominator=7))
             for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    return BiasProfile(n, b, pairs)


@given(profiles())
def test_profile_round_trip(B):
    text = io.dumps(io.profile_to_json(B))
    assert io.parse(text) == B


@given(st.lists(st.fractions(-5, 5, max_denominator=5), min_size=1, max_size=6), st.fractions(-2, 2))
def test_form_round_trip(w, c):
    l = LinearForm(tuple(w), c)
    assert io.parse(io.dumps(io.form_to_json(l))) == l


@pytest.mark.parametrize("text", ["not json", '{"kind":"nope"}', '[1,2]', '{"kind":"ltf","weights":[0.5]}',
                                  '{"n":2,"b":["2","0"]}', '{"kind":"table","k":2,"plus_set":[9]}'])
def test_schema_errors(text):
    with pytest.raises(io.SchemaError):
        io.parse(text)


# --------------------------------------------------------------------------
# command line

def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def clause(doc, name):
    return next(c for c in doc["clauses"] if c["name"] == name)


def test_fourier_value(capsys):
    code, doc = run(capsys, "fourier", "--pred", "xor3", "--subset", "1,2,3")
    assert code == 0 and doc["value"] == "1"


def test_fourier_class(capsys):
    code, doc = run(capsys, "fourier", "--class", "P+2C", "--k", "8")
    assert code == 0 and doc["value"] == "-1/16"
    assert clause(doc, "closed_form_equals_transform")["status"] == "pass"


def test_balanced(capsys):
    assert run(capsys, "balanced", "--weights", "2,1,-1,-1")[0] == 0
    assert run(capsys, "balanced", "--weights", "1,1,1,1")[0] == 1


@pytest.mark.parametrize("name", ["three_xor", "glst"])
def test_verify_instance_file(capsys, tmp_path, name):
    f = tmp_path / "inst.json"
    f.write_text(io.dumps(io.instance_to_json(builtin_instances()[name])))
    code, doc = run(capsys, "verify-instance", str(f), "--vanish-max-t", "3")
    assert code == 0 and doc["status"] == "pass"


def test_verify_instance_deletion_mutant(capsys, tmp_path):
    f = tmp_path / "inst.json"
    f.write_text(io.dumps(io.instance_to_json(builtin_instances()["three_xor"].without(0))))
    code, doc = run(capsys, "verify-instance", str(f))
    assert code == 1 and clause(doc, "constant")["witness"]["subset"] == [1, 2, 3]


def test_core_commands(capsys):
    code, doc = run(capsys, "core", "verify")
    assert code == 0
    code, doc = run(capsys, "core", "solve", "--a", "1", "--c", "2", "--b", "7")
    assert code == 0 and (doc["d"], doc["e"]) == ("64", "299")
    assert doc["p"] == ["299/1125", "299/4500", "1/300"]


def test_gadget_command(capsys):
    code, doc = run(capsys, "gadget", "verify", "--m", "3", "--n", "1", "--range", "0:2")
    assert code == 0 and doc["outputs"] == 6


def test_encode_command(capsys, tmp_path):
    f = tmp_path / "dist.json"
    f.write_text(json.dumps([{"x": [0, 2], "p": "1/2"}, {"x": [3, -1], "p": "1/2"}]))
    code, doc = run(capsys, "encode", "--var", "u:0:3", "--var", "v:-1:2", "--dist", str(f))
    assert code == 0 and clause(doc, "oracle_match")["status"] == "pass"
    assert doc["printed_formula_discrepancies"]


def test_balance_and_merge(capsys):
    code, doc = run(capsys, "balance", "--weights", "3,-1")
    assert code == 0 and clause(doc, "restriction_identity")["status"] == "pass"
    code, doc = run(capsys, "merge", "--l1", "2,1", "--l2", "1,3", "--verify")
    assert code == 0


def test_pipeline_plan(capsys):
    code, doc = run(capsys, "pipeline", "plan")
    assert code == 0 and clause(doc, "counts_consistent")["status"] == "pass"


def test_round_monarchy(capsys):
    code, doc = run(capsys, "round", "monarchy", "--k", "5", "--samples", "20")
    assert code == 0 and doc["seed"] == 0
    assert clause(doc, "mixtures_above_floor")["status"] == "pass"


def test_round_almost_monarchy_reports_offending_profile(capsys):
    code, doc = run(capsys, "round", "almost-monarchy", "--k-min", "15", "--k-max", "16",
                    "--vertices", "20", "--samples", "2")
    assert code == 1
    wit = clause(doc, "threshold_found")["witness"]
    assert wit is not None and wit["k"] == 16


def test_round_synthesize(capsys):
    code, doc = run(capsys, "round", "synthesize", "--parts", "1,2;3,4", "--singles", "1,2",
                    "--samples", "1000")
    assert code == 0


def test_identities_seeded(capsys):
    a = run(capsys, "identities", "--k", "7", "--trials", "2", "--seed", "4")
    b = run(capsys, "identities", "--k", "7", "--trials", "2", "--seed", "4")
    a[1].pop("timing")
    b[1].pop("timing")
    assert a == b and a[0] == 0


def test_builtin_objects(capsys):
    dispatch(["builtin", "core"])
    assert json.loads(capsys.readouterr().out)["c_ii"] == "299"
    dispatch(["builtin", "three_xor"])
    assert len(json.loads(capsys.readouterr().out)["constraints"]) == 8


def test_bad_input_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"kind":"gap_instance"}')
    code, doc = run(capsys, "verify-instance", str(f))
    assert code == 2 and doc["status"] == "error"
    code, doc = run(capsys, "balanced", "--weights", "1,x")
    assert code == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        dispatch(["no-such-command"])
    assert e.value.code == 2


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "gapforge.cli", "fourier", "--pred", "glst", "--subset", "2,3"],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["command"] == "fourier"
