"""``gapforge``: one entry point for every verifier and constructor.

Each command prints a single JSON document on stdout (``builtin`` prints the
named object; everything else prints a report with ``command``, ``status``,
``clauses`` and ``timing``, plus ``seed`` when it draws random numbers).
Diagnostics go to stderr.  Exit status: 0 pass, 1 verification failure,
2 input or parse error.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .construct.balance import (balance_double, balanced_by_layers, merge_dual, restriction,
                                verify_merge)
from .construct.core import NoSolution, core_instance, solve_core_parameters, verify_core
from .construct.gadget import build_gadget, verify_gadget
from .construct.moments import NonRealizable, moments_of_distribution
from .construct.pipeline import plan
from .construct.unary import IntegerVarSpec, digit_oracle, unary_discrepancies, unary_encode
from .exactnum import rat, rat_str
from .gapverify import builtin_instances, vanish_report, verify_perfect_gap
from .polytope import profile_of_distribution
from .predicate import (LinearForm, Predicate, ZeroValue, almost_monarchy, almost_monarchy_form,
                        check_perfectly_balanced, class_mask, fourier_closed_form, fourier_transform, glst,
                        layer_counts, monarchy, monarchy_form, xor3)
from .report import Report
from .rounding import almost_monarchy as am
from .rounding import monarchy as mon
from .rounding.hypergraph import DIRECT_K_CAP, check_identities, random_bias_data
from .rounding.mixture import Mixture, random_mixture
from .rounding.operators import Monomial, synthesize_monomial

DEFAULT_MAX_K = 24


class InputError(ValueError):
    """Bad flags or input files; exit status 2."""


# ---------------------------------------------------------------------------
# argument helpers

def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _rats(text: str) -> list[Fraction]:
    try:
        return [rat(v) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected comma-separated rationals, got {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"expected a range a:b, got {text!r}")
    a, b = (int(v) for v in parts)
    return a, b


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _named_k(name: str, prefix: str) -> int | None:
    if name.startswith(prefix + "-"):
        try:
            return int(name[len(prefix) + 1:])
        except ValueError:
            raise InputError(f"bad arity in {name!r}") from None
    return None


def _check_k(k: int, args) -> None:
    if k > args.max_k:
        raise InputError(f"arity {k} exceeds --max-k {args.max_k}")


def _predicate(name: str, args) -> Predicate:
    if name == "xor3":
        return xor3()
    if name == "glst":
        return glst()
    for prefix, make in (("almost-monarchy", almost_monarchy), ("monarchy", monarchy)):
        k = _named_k(name, prefix)
        if k is not None:
            _check_k(k, args)
            return make(k)
    if Path(name).exists():
        obj = io.parse(_read(name))
        if isinstance(obj, LinearForm):
            _check_k(obj.k, args)
            return Predicate.from_ltf(obj)
        if isinstance(obj, Predicate):
            return obj
        raise InputError(f"{name} does not hold a predicate")
    raise InputError(f"unknown predicate {name!r}")


def _form_arg(text: str) -> LinearForm:
    """A linear form from a JSON file, or inline comma-separated weights."""
    if Path(text).exists():
        obj = io.parse(_read(text))
        if not isinstance(obj, LinearForm):
            raise InputError(f"{text} does not hold a linear form")
        return obj
    return LinearForm(tuple(_rats(text)))


# ---------------------------------------------------------------------------
# commands; each returns a Report

def cmd_fourier(args) -> Report:
    rep = Report()
    if args.cls is not None:
        if args.k is None:
            raise InputError("--class needs --k")
        closed = fourier_closed_form(args.k, args.cls)
        rep.data["value"] = closed
        if args.k <= args.max_k:
            got = fourier_transform(almost_monarchy(args.k))[class_mask(args.cls)]
            rep.add("closed_form_equals_transform", got == closed,
                    {"closed_form": rat_str(closed), "transform": rat_str(got)})
        return rep
    if args.pred is None:
        raise InputError("give --pred or --class")
    P = _predicate(args.pred, args)
    if P.k > args.max_k:
        raise InputError(f"arity {P.k} exceeds --max-k {args.max_k}")
    F = fourier_transform(P)
    if args.subset is not None:
        S = _ints(args.subset)
        if any(not 1 <= i <= P.k for i in S) or len(set(S)) != len(S):
            raise InputError(f"subset {S} is not a set of indices in 1..{P.k}")
        rep.data["value"] = F.coefficient(S)
        return rep
    rep.data["coefficients"] = {",".join(map(str, idx)) or "∅": v for idx, v in F.items() if v}
    rep.add("parseval", F.parseval() == 1, {"sum_of_squares": rat_str(F.parseval())})
    return rep


def cmd_balanced(args) -> Report:
    l = LinearForm(tuple(_rats(args.weights)))
    _check_k(l.k, args)
    rep = Report()
    try:
        ok = check_perfectly_balanced(l)
        wit = None
        if not ok:
            j, (pos, _, tot) = next((j, c) for j, c in layer_counts(l).items() if 2 * c[0] != c[2])
            wit = {"layer": j, "positive": pos, "total": tot}
        rep.add("perfectly_balanced", ok, wit)
    except ZeroValue as e:
        rep.add("perfectly_balanced", False, {"zero_at": list(e.point)})
    rep.data["layers"] = {str(j): {"positive": p, "zero": z, "total": t} for j, (p, z, t) in layer_counts(l).items()}
    return rep


def _instance(path: str):
    obj = io.parse(_read(path))
    if not hasattr(obj, "constraints"):
        raise InputError(f"{path} does not hold a gap instance")
    return obj


def _vanish_clauses(rep: Report, inst, max_t) -> None:
    out = vanish_report(inst, max_t)
    for lv in out["levels"]:
        rep.add(f"vanish_t{lv['t']}", lv["vanished"],
                {"point": lv["point"], "residual": lv["residual"]})
    rep.data["vanish"] = out


def cmd_verify_instance(args) -> Report:
    inst = _instance(args.file)
    g = verify_perfect_gap(inst)
    rep = Report(list(g.clauses))
    rep.data["constant"] = g.constant
    rep.data["n"], rep.data["m"] = inst.n, inst.m
    if args.vanish_max_t is not None:
        _vanish_clauses(rep, inst, args.vanish_max_t)
    return rep


def cmd_vanish(args) -> Report:
    rep = Report()
    _vanish_clauses(rep, _instance(args.file), args.max_t)
    return rep


def cmd_core(args) -> Report:
    if args.action == "verify":
        core = io.parse(_read(args.file)) if args.file else core_instance()
        rep = verify_core(core)
        rep.data.update({"vectors": len(core.vectors), "c_i": core.c1, "c_ii": core.c2, "c_ij": core.c12})
        return rep
    if None in (args.a, args.c, args.b):
        raise InputError("core solve needs --a, --c and --b")
    try:
        p = solve_core_parameters(args.a, args.c, args.b)
    except NoSolution as e:
        rep = Report()
        rep.add("solution", False, {"reason": str(e)})
        return rep
    rep = Report()
    eqs = p.equations()
    bad = {k: rat_str(v) for k, v in eqs.items() if v}
    rep.add("moment_equations", not bad, bad)
    rep.add("probabilities", min(p.p1, p.p2, p.p3) >= 0, {"p": [rat_str(v) for v in (p.p1, p.p2, p.p3)]})
    rep.data.update({"a": p.a, "b": p.b, "c": p.c, "d": p.d, "e": p.e, "p": [p.p1, p.p2, p.p3],
                     "second_moment": p.second_moment})
    return rep


def cmd_gadget(args) -> Report:
    lo, hi = _range(args.range)
    if hi < lo:
        raise InputError("empty value range")
    if args.vectors:
        vectors = [tuple(_ints(v)) for v in args.vectors.split(";")]
    else:
        span = hi - lo + 1
        vectors = [(lo + a % span,) * args.n for a in range(args.m)]
    if any(not lo <= x <= hi for v in vectors for x in v):
        raise InputError("input vectors leave the value range")
    B = max(1, abs(lo), abs(hi))
    g = build_gadget(vectors, B)
    res = verify_gadget(g, args.cap)
    rep = Report()
    rep.add("permutations_only", res.ok, res.witness)
    rep.add("identity_satisfies", g.satisfied(g.identity_assignment()), {"reason": "identity assignment violates a constraint"})
    rep.data.update({"m": g.m, "n": g.n, "B": B, "vectors": [list(v) for v in vectors],
                     "outputs": len(res.outputs), "indicator_permutations": len(res.permutations),
                     "searched": res.searched, "variables": len(g.names), "constraints": len(g.constraints)})
    return rep


def cmd_encode(args) -> Report:
    specs = []
    for r in args.var:
        parts = r.split(":")
        if len(parts) != 3:
            raise InputError(f"expected name:a:b, got {r!r}")
        specs.append(IntegerVarSpec(parts[0], int(parts[1]), int(parts[2])))
    rows = io.loads(_read(args.dist))
    dist = io._dist_from_json(rows)
    if any(len(x) != len(specs) for x, _ in dist):
        raise InputError("every support point needs one value per --var")
    base = moments_of_distribution(dist, [s.name for s in specs])
    rep = Report()
    try:
        enc = unary_encode(specs, base)
    except NonRealizable as e:
        rep.add("realizable", False, e.args[0] if e.args and isinstance(e.args[0], dict) else {"reason": str(e)})
        return rep
    oracle = digit_oracle(specs, dist)
    bad = None
    for kind in ("mean", "second", "pair"):
        got, want = getattr(enc, kind), getattr(oracle, kind)
        for key in sorted(set(got) | set(want), key=repr):
            if got.get(key) != want.get(key):
                bad = {"moment": kind, "variables": repr(key),
                       "formula": None if key not in got else rat_str(got[key]),
                       "oracle": None if key not in want else rat_str(want[key])}
                break
        if bad:
            break
    rep.add("oracle_match", bad is None, bad)
    rep.data["digits"] = sum(s.digits for s in specs)
    rep.data["moments"] = enc.to_dict()
    rep.data["printed_formula_discrepancies"] = unary_discrepancies(specs, base)
    return rep


def cmd_balance(args) -> Report:
    l = _form_arg(args.weights)
    dbl = balance_double(l)
    w, _, _ = dbl.form.integer_scaled()
    _check_k(dbl.form.k, args)
    rep = Report()
    ok, wit = balanced_by_layers(w, dbl.form.k)
    rep.add("perfectly_balanced", ok, wit)
    r = restriction(dbl.form)
    rep.add("restriction_identity", r == l, {"restricted": io.form_to_json(r)})
    rep.data.update({"form": io.form_to_json(dbl.form), "core": io.form_to_json(dbl.core), "B": dbl.B})
    return rep


def cmd_merge(args) -> Report:
    l1, l2 = _form_arg(args.l1), _form_arg(args.l2)
    merged = merge_dual(l1, l2)
    rep = verify_merge(l1, l2, merged) if args.verify else Report()
    rep.data.update({"form": io.form_to_json(merged.form), "k": merged.k, "scale": merged.scale,
                     "grid": [list(r) for r in merged.grid], "ladder_terms": len(merged.terms)})
    return rep


def cmd_pipeline(args) -> Report:
    p = plan()
    rep = Report()
    rep.add("counts_consistent", p["counts_consistent"],
            {"stages": [(s["stage"], s["inputs"], s["outputs"]) for s in p["stages"]]})
    rep.add("integer_moments_realizable", p["moments"]["integer"]["realizable"],
            {"violations": p["moments"]["integer"]["violations"]})
    rep.add("digit_moments_realizable", p["moments"]["unary"]["realizable"],
            {"violations": p["moments"]["unary"]["violations"]})
    rep.data.update({k: v for k, v in p.items() if k != "status"})
    return rep


def _round_monarchy(args, rng) -> Report:
    k = args.k
    _check_k(k, args)
    rep = Report()
    try:
        f = mon.monarchy_fourier(k)
    except mon.SignPreconditionError as e:
        rep.add("sign_preconditions", False, {"reason": str(e)})
        return rep
    rep.add("sign_preconditions", True)
    floor = f.C
    worst_v = None
    for x in monarchy(k).satisfying():
        r = mon.monarchy_advantage(x, certificate=Mixture.vertex(x))
        if worst_v is None or r.advantage < worst_v[1]:
            worst_v = (x, r.advantage)
    rep.add("vertices_above_floor", worst_v[1] >= floor,
            {"point": list(worst_v[0]), "advantage": rat_str(worst_v[1]), "floor": rat_str(floor)})
    draw = mon.sample_monarchy_vertex(k)
    worst_m = None
    for _ in range(args.samples):
        m = random_mixture(draw, rng)
        r = mon.monarchy_advantage(m.first_moments(), certificate=m)
        if worst_m is None or r.advantage < worst_m[1]:
            worst_m = (m, r.advantage)
    if worst_m is not None:
        m, v = worst_m
        rep.add("mixtures_above_floor", v >= floor,
                {"points": [list(x) for x in m.points], "weights": [rat_str(w) for w in m.weights],
                 "advantage": rat_str(v), "floor": rat_str(floor)})
    rep.data.update({"k": k, "floor": floor, "C": f.constant,
                     "fourier": {"P": f.P, "C": f.C, "3C": f.C3, "P+2C": f.P2C},
                     "min_vertex_advantage": worst_v[1],
                     "min_mixture_advantage": None if worst_m is None else worst_m[1],
                     "mixtures": args.samples})
    return rep


def _round_almost(args, seed) -> Report:
    res = am.find_threshold(args.k_min, args.k_max, seed, args.vertices, args.samples, args.parallelism)
    rep = Report()
    reports = res["reports"]
    kstar = res["k_star"]
    failing = [r for r in reports if not r.positive]
    wit = None
    if failing:
        w = failing[-1].worst
        wit = {"k": failing[-1].k, **io.jsonable(w)}
    rep.add("threshold_found", kstar is not None, wit)
    if failing and kstar is not None:
        rep.clause("threshold_found").witness = None
    bad_floor = [r.k for r in reports if not r.delta_floor]
    rep.add("delta_floor", not bad_floor, {"k": bad_floor[:5]})
    classes = {}
    for k in range(args.k_min, args.k_max + 1):
        classes[k] = min(am.vertex_advantage_closed(k, *c) for c in am.vertex_classes(k))
    class_star = None
    for k in range(args.k_max, args.k_min - 1, -1):
        if classes[k] <= 0:
            break
        class_star = k
    rep.data.update({
        "k_star": kstar, "k_min": args.k_min, "k_max": args.k_max,
        "vertices_per_k": args.vertices, "mixtures_per_k": args.samples,
        "class_threshold": class_star,
        "per_k": [{"k": r.k, "min_vertex": r.min_vertex, "min_mixture": r.min_mixture,
                   "positive": r.positive, "delta_floor": r.delta_floor} for r in reports],
    })
    return rep


def _round_synthesize(args, seed) -> Report:
    parts = [tuple(i - 1 for i in _ints(p)) for p in args.parts.split(";")]
    singles = tuple(i - 1 for i in _ints(args.singles)) if args.singles else ()
    pairs = tuple(tuple(i - 1 for i in _ints(p.replace("-", ","))) for p in args.pairs.split(";")) if args.pairs else ()
    if any(len(p) != 2 for p in pairs):
        raise InputError("--pairs takes r-t part pairs separated by ';'")
    n = max(i for p in parts for i in p) + 1
    if args.profile:
        B = io.parse(_read(args.profile))
        if not hasattr(B, "bij"):
            raise InputError(f"{args.profile} does not hold a bias profile")
    else:
        rng = np.random.default_rng(seed)
        pts = [tuple(int(v) for v in rng.choice((-1, 1), size=n)) for _ in range(4)]
        B = profile_of_distribution([(x, Fraction(1, 4)) for x in pts], n)
    res = synthesize_monomial(Monomial(singles, pairs), parts, rat(args.alpha), B, args.samples, seed)
    rep = Report()
    bad_t = next((t for t in res.targets if not t["ok"]), None)
    rep.add("targets", bad_t is None, bad_t)
    bad_o = next((t for t in res.off_target if not t["ok"]), None)
    rep.add("off_target_decay", bad_o is None, bad_o)
    rep.data.update({"profile": io.profile_to_json(B), "alpha": res.alpha, "samples": res.samples,
                     "targets": res.targets, "off_target": res.off_target,
                     "schemes": res.mixture.describe()})
    return rep


def cmd_round(args) -> Report:
    seed = args.seed
    if args.scheme == "monarchy":
        return _round_monarchy(args, np.random.default_rng(seed))
    if args.scheme == "almost-monarchy":
        return _round_almost(args, seed)
    return _round_synthesize(args, seed)


def cmd_identities(args) -> Report:
    k = args.k
    if k > min(args.max_k, DIRECT_K_CAP):
        raise InputError(f"direct enumeration is capped at k = {min(args.max_k, DIRECT_K_CAP)}")
    rng = np.random.default_rng(args.seed)
    mismatch: dict = {}
    printed_off: dict = {}
    names = None
    for t in range(args.trials):
        d = random_bias_data(k, rng)
        rows = check_identities(d, direct=True)
        names = names or list(rows)
        for name, row in rows.items():
            if row["aggregate"] != row["direct"] and name not in mismatch:
                mismatch[name] = {"trial": t, "aggregate": rat_str(row["aggregate"]), "direct": rat_str(row["direct"]),
                                  "b": [rat_str(v) for v in d.b] if hasattr(d, "b") else None}
            if row["printed"] != row["direct"]:
                printed_off[name] = printed_off.get(name, 0) + 1
    rep = Report()
    for name in names or []:
        rep.add(f"{name}_aggregate_equals_direct", name not in mismatch, mismatch.get(name))
    rep.data.update({"k": k, "trials": args.trials,
                     "printed_form_mismatches": {n: printed_off.get(n, 0) for n in names or []}})
    return rep


# ---------------------------------------------------------------------------
# builtin objects

def builtin_object(name: str) -> dict:
    insts = builtin_instances()
    if name in insts:
        return io.instance_to_json(insts[name])
    if name == "core":
        return io.core_to_json(core_instance())
    for prefix, form in (("almost-monarchy", almost_monarchy_form), ("monarchy", monarchy_form)):
        k = _named_k(name, prefix)
        if k is not None:
            if k < 5:
                raise InputError(f"{prefix} needs k >= 5")
            return {**io.form_to_json(form(k)), "name": prefix}
    raise InputError(f"unknown builtin {name!r}; choose three_xor, glst, core, monarchy-K or almost-monarchy-K")


# ---------------------------------------------------------------------------
# parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo or mixture budget")
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="largest arity enumerated exhaustively")
    p.add_argument("--parallelism", type=int, default=1, help="worker processes for parallel scans")
    p.add_argument("--format", choices=["json"], default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="gapforge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fourier", parents=[common], help="Fourier coefficients of a predicate")
    p.add_argument("--pred", help="xor3, glst, monarchy-K, almost-monarchy-K or a JSON file")
    p.add_argument("--subset", help="1-based indices, e.g. 1,2,3")
    p.add_argument("--class", dest="cls", help="closed-form class such as P, 3C or P+2C")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("balanced", parents=[common], help="perfect-balance layer test of a linear form")
    p.add_argument("--weights", required=True)
    p.set_defaults(func=cmd_balanced)

    p = sub.add_parser("verify-instance", parents=[common], help="check a perfect integrality gap instance")
    p.add_argument("file")
    p.add_argument("--vanish-max-t", type=int)
    p.set_defaults(func=cmd_verify_instance)

    p = sub.add_parser("vanish", parents=[common], help="vanishing-measure check of an instance")
    p.add_argument("file")
    p.add_argument("--max-t", type=int)
    p.set_defaults(func=cmd_vanish)

    p = sub.add_parser("core", parents=[common], help="the four-form core certificate")
    p.add_argument("action", choices=["verify", "solve"])
    p.add_argument("--file", help="core JSON (default: the built-in core)")
    p.add_argument("--a", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--b", type=int)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("gadget", parents=[common], help="exhaustive permutation-gadget check")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--range", default="0:1", help="input values a:b")
    p.add_argument("--vectors", help="explicit inputs, e.g. '0,1;1,0'")
    p.add_argument("--cap", type=int, default=1 << 24, help="largest search space enumerated")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("encode", parents=[common], help="unary digit moments against the placement oracle")
    p.add_argument("--var", action="append", required=True, help="name:a:b, repeatable")
    p.add_argument("--dist", required=True, help="JSON list of {x, p}")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("balance", parents=[common], help="double a form into a perfectly balanced one")
    p.add_argument("--weights", required=True, help="comma-separated weights or an ltf JSON file")
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("merge", parents=[common], help="merge two balanced forms")
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("pipeline", parents=[common], help="dry-run sizing of the construction")
    p.add_argument("action", choices=["plan"])
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("round", help="rounding-scheme advantage checks")
    rsub = p.add_subparsers(dest="scheme", required=True)
    r = rsub.add_parser("monarchy", parents=[common])
    r.add_argument("--k", type=int, default=7)
    r.set_defaults(func=cmd_round, samples_default=1000)
    r = rsub.add_parser("almost-monarchy", parents=[common])
    r.add_argument("--k-min", type=int, default=15)
    r.add_argument("--k-max", type=int, default=60)
    r.add_argument("--vertices", type=int, default=10_000)
    r.set_defaults(func=cmd_round, samples_default=1000)
    r = rsub.add_parser("synthesize", parents=[common])
    r.add_argument("--parts", required=True, help="1-based variable parts, e.g. '1,2;3,4'")
    r.add_argument("--singles", default="", help="1-based parts carrying a b_i factor")
    r.add_argument("--pairs", default="", help="part pairs carrying a b_ij factor, e.g. '1-2'")
    r.add_argument("--alpha", default="1/4")
    r.add_argument("--profile", help="bias profile JSON (default: a random seeded mixture)")
    r.set_defaults(func=cmd_round, samples_default=100_000)

    p = sub.add_parser("identities", parents=[common], help="inclusion/exclusion identities on random profiles")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("builtin", parents=[common], help="print a built-in object as canonical JSON")
    p.add_argument("name")
    p.set_defaults(func=None)
    return ap


STOCHASTIC = {"round", "identities"}


def dispatch(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.samples is None:
        args.samples = getattr(args, "samples_default", 0)
    command = args.command + (f" {args.scheme}" if args.command == "round" else "")
    t0 = time.perf_counter()
    try:
        if args.command == "builtin":
            print(io.dumps(builtin_object(args.name)))
            return 0
        if args.samples < 0 or args.parallelism < 1:
            raise InputError("--samples must be >= 0 and --parallelism >= 1")
        rep = args.func(args)
    except (InputError, io.SchemaError, ValueError, KeyError) as e:
        msg = str(e) if not isinstance(e, KeyError) else f"missing key {e}"
        print(f"gapforge: error: {msg}", file=sys.stderr)
        print(io.dumps({"command": command, "status": "error", "error": msg, "clauses": []}))
        return 2
    out = {"command": command, **rep.to_dict(), "timing": {"seconds": round(time.perf_counter() - t0, 6)}}
    if args.command in STOCHASTIC:
        out["seed"] = args.seed
    print(io.dumps(out))
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
