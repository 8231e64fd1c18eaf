"""Canonical JSON for predicates, forms, bias profiles, gap instances and cores.

Rationals are written as "p/q" strings (or "p" when q = 1), keys are sorted
and separators are fixed, so equal objects print to identical bytes.  Variable
indices in JSON are 1-based; the library works 0-based internally.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .construct.core import Core
from .exactnum import rat, rat_str
from .gapverify import GapInstance
from .polytope import BiasProfile
from .predicate import Constraint, LinearForm, Predicate


class SchemaError(ValueError):
    """A JSON document does not describe the expected object."""


def jsonable(x: Any) -> Any:
    """Recursively replace Fractions by "p/q", tuples by lists and numpy scalars by Python ones."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None


def _get(d: dict, key: str, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"missing field {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return v


def _rat(v) -> Fraction:
    try:
        return rat(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"{v!r} is not an exact rational") from None


# ---------------------------------------------------------------------------
# forms and predicates

def form_to_json(l: LinearForm) -> dict:
    return {"kind": "ltf", "weights": list(l.weights), "constant": l.constant}


def form_from_json(d: dict) -> LinearForm:
    if d.get("kind", "ltf") != "ltf":
        raise SchemaError("expected an ltf form")
    w = _get(d, "weights", list)
    return LinearForm(tuple(_rat(v) for v in w), _rat(d.get("constant", "0")))


def predicate_to_json(P: Predicate) -> dict:
    if P.form is not None:
        out = form_to_json(P.form)
    else:
        out = {"kind": "table", "k": P.k, "plus_set": P.plus_set()}
    if P.name:
        out["name"] = P.name
    return out


def predicate_from_json(d: dict) -> Predicate:
    kind = _get(d, "kind", str)
    name = d.get("name", "")
    if kind == "ltf":
        return Predicate.from_ltf(form_from_json(d), name)
    if kind == "table":
        k = _get(d, "k", int)
        plus = _get(d, "plus_set", list)
        try:
            return Predicate.from_plus_set(k, [int(m) for m in plus], name)
        except ValueError as e:
            raise SchemaError(str(e)) from None
    raise SchemaError(f"unknown predicate kind {kind!r}")


# ---------------------------------------------------------------------------
# bias profiles

def profile_to_json(B: BiasProfile) -> dict:
    pairs = [[i + 1, j + 1, v] for (i, j), v in sorted(B.bij.items())]
    return {"n": B.n, "b": list(B.b), "bij": pairs}


def profile_from_json(d: dict) -> BiasProfile:
    n = _get(d, "n", int)
    b = [_rat(v) for v in _get(d, "b", list)]
    pairs = {}
    for row in d.get("bij", []):
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError("bij entries are [i, j, value] triples")
        i, j, v = row
        pairs[(int(i) - 1, int(j) - 1)] = _rat(v)
    try:
        return BiasProfile(n, tuple(b), pairs)
    except ValueError as e:
        raise SchemaError(str(e)) from None


# ---------------------------------------------------------------------------
# gap instances

def _dist_to_json(dist) -> list:
    return [{"x": list(x), "p": p} for x, p in dist]


def _dist_from_json(rows) -> list:
    if not isinstance(rows, list):
        raise SchemaError("a distribution is a list of {x, p} entries")
    return [(tuple(int(v) for v in _get(r, "x", list)), _rat(_get(r, "p"))) for r in rows]


def instance_to_json(inst: GapInstance) -> dict:
    preds: list[Predicate] = []
    cons = []
    for c in inst.constraints:
        if c.pred not in preds:
            preds.append(c.pred)
        cons.append({"pred": preds.index(c.pred), "phi": [i + 1 for i in c.phi], "signs": list(c.signs)})
    return {
        "kind": "gap_instance",
        "n": inst.n,
        "predicates": [predicate_to_json(P) for P in preds],
        "constraints": cons,
        "bias": profile_to_json(inst.bias),
        "distributions": [_dist_to_json(d) for d in inst.dists],
    }


def instance_from_json(d: dict) -> GapInstance:
    if d.get("kind", "gap_instance") != "gap_instance":
        raise SchemaError("expected a gap_instance document")
    preds = [predicate_from_json(p) for p in _get(d, "predicates", list)]
    cons = []
    for c in _get(d, "constraints", list):
        idx = _get(c, "pred", int)
        if not 0 <= idx < len(preds):
            raise SchemaError(f"constraint refers to unknown predicate {idx}")
        try:
            cons.append(Constraint(preds[idx], tuple(int(i) - 1 for i in _get(c, "phi", list)),
                                   tuple(_get(c, "signs", list))))
        except ValueError as e:
            raise SchemaError(str(e)) from None
    try:
        return GapInstance(_get(d, "n", int), cons, profile_from_json(_get(d, "bias", dict)),
                           [_dist_from_json(r) for r in _get(d, "distributions", list)])
    except ValueError as e:
        raise SchemaError(str(e)) from None


# ---------------------------------------------------------------------------
# the four-form core

def core_to_json(core: Core) -> dict:
    return {
        "kind": "core",
        "forms": [form_to_json(l) for l in core.forms],
        "vectors": [list(v) for v in core.vectors],
        "distributions": [_dist_to_json(sorted(d.items())) for d in core.dists],
        "c_i": core.c1, "c_ii": core.c2, "c_ij": core.c12,
    }


def core_from_json(d: dict) -> Core:
    if d.get("kind", "core") != "core":
        raise SchemaError("expected a core document")
    forms = tuple(form_from_json(f) for f in _get(d, "forms", list))
    vectors = tuple(tuple(int(v) for v in row) for row in _get(d, "vectors", list))
    dists = tuple(dict(_dist_from_json(r)) for r in _get(d, "distributions", list))
    return Core(forms, vectors, dists, _rat(_get(d, "c_i")), _rat(_get(d, "c_ii")), _rat(_get(d, "c_ij")))


PARSERS = {
    "gap_instance": instance_from_json,
    "core": core_from_json,
    "ltf": form_from_json,
    "table": predicate_from_json,
}


def parse(text: str):
    """Inverse of ``dumps`` for every document kind this module prints."""
    d = loads(text)
    if isinstance(d, dict) and "kind" in d:
        if d["kind"] in PARSERS:
            return PARSERS[d["kind"]](d)
        raise SchemaError(f"unknown document kind {d['kind']!r}")
    if isinstance(d, dict) and {"n", "b"} <= d.keys():
        return profile_from_json(d)
    raise SchemaError("unrecognized document")
