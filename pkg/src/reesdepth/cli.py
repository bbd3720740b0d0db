"""Command-line front end.

Subcommands ``syzygy``, ``rank``, ``rr`` and ``depth`` run seeded
experiments and write one JSON report; ``verify`` (or ``--verify FILE``)
re-checks the witnesses stored in a report without repeating the run.

Exit codes: 0 when every check matches its expectation, 1 when a
mathematical check fails, 2 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from math import comb

from . import __version__
from . import depth as dp
from . import genrank as gr
from . import rrtest as rt
from .forms import BinaryForm, monomial, multiply, random_form
from .graded import (
    GenericityError,
    GradedIdeal,
    NotPrimaryError,
    contains,
    expected_hilbert_function,
    hilbert_table,
    power,
    sample_general_forms,
    syzygy_profile,
)
from .report import (
    FAIL,
    PASS,
    RECORDED,
    Report,
    dumps,
    form_from_json,
    form_to_json,
    optional_form_to_json,
    scalar_from_json,
    scalar_to_json,
)
from .scalars import GF_DEFAULT, QQ, FieldSpec

log = logging.getLogger("reesdepth")

EXIT_OK, EXIT_MATH, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    """Bad flags or input files."""


def _outcome(ok: bool, expected: bool = True) -> str:
    if not expected:
        return RECORDED
    return PASS if ok else FAIL


def _parse_field(text: str | None, default: FieldSpec) -> FieldSpec:
    if text is None:
        return default
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_input(path: str, field_flag: str | None) -> tuple[list[BinaryForm], FieldSpec]:
    """Forms from a JSON file holding ``forms`` or a 3x2 ``hilbert_burch`` matrix."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("input file must hold a JSON object")
    field = _parse_field(field_flag or doc.get("field"), QQ)
    try:
        if "forms" in doc:
            forms = [form_from_json(c, field) for c in doc["forms"]]
        elif "hilbert_burch" in doc:
            M = [[form_from_json(c, field) for c in row] for row in doc["hilbert_burch"]]
            forms = list(dp.hilbert_burch_generators(M))
        else:
            raise ConfigError("input needs a 'forms' or 'hilbert_burch' key")
    except ValueError as exc:
        raise ConfigError(f"bad input: {exc}") from None
    if len(forms) != 3:
        raise ConfigError("input must describe exactly three forms")
    return forms, field


def _forms_json(forms) -> list:
    return [form_to_json(f) for f in forms]


def _general_forms(args, field: FieldSpec, rng: random.Random) -> tuple[list[BinaryForm], list, bool]:
    """(forms, resample log, generated) from --input or seeded sampling."""
    if args.input:
        forms, _ = load_input(args.input, args.field)
        return forms, [], False
    if not field.is_prime_field:
        raise ConfigError("random forms need --field gfp:<p>")
    forms, resamples = sample_general_forms(args.degree, rng, field, args.max_resamples)
    return forms, resamples, True


def _need_degree(args, lowest: int) -> int:
    if args.degree is None:
        raise ConfigError("--degree is required")
    if args.degree < lowest:
        raise ConfigError(f"--degree must be >= {lowest}")
    return args.degree


def _config(args, field: FieldSpec) -> dict:
    keys = ("degree", "seed", "input", "example", "method", "strategy", "exploratory", "max_resamples")
    cfg = {k: getattr(args, k, None) for k in keys}
    cfg["field"] = str(field)
    return cfg


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


# -- syzygy -------------------------------------------------------------------


def cmd_syzygy(args) -> Report:
    field = _parse_field(args.field, GF_DEFAULT)
    rng = random.Random(args.seed)
    if args.input:
        forms, field = load_input(args.input, args.field)
        generated = False
    else:
        d = _need_degree(args, 2)
        if not field.is_prime_field:
            raise ConfigError("random forms need --field gfp:<p>")
        # raw draws: these checks are the genericity conditions themselves
        forms = [random_form(d, rng, field) for _ in range(3)]
        generated = True
    rep = Report("syzygy", _config(args, field))
    d = max(f.degree for f in forms)
    inputs = {"forms": _forms_json(forms)}
    with _Timer() as tm:
        prof = syzygy_profile(forms)
    expected = sorted([d // 2, (d + 1) // 2])
    rep.add(
        "syzygy_profile",
        inputs,
        _outcome(sorted(prof.degrees) == expected, generated),
        data={
            "degrees": list(prof.degrees),
            "total_degrees": list(prof.total_degrees),
            "syzygies": [[optional_form_to_json(h) for h in syz] for syz in prof.syzygies],
        },
        expected=expected if generated else None,
        seconds=tm.seconds,
    )
    with _Timer() as tm:
        table = hilbert_table(GradedIdeal(tuple(forms)))
    closed = [expected_hilbert_function(d, t) for t in range(len(table))]
    data = {"table": table, "socle_degree": len(table) - 2}
    s = d // 2
    if d >= 5:
        if d % 2:
            data["top_piece"] = {str(3 * s): table[3 * s] if 3 * s < len(table) else 0}
        else:
            data["top_piece"] = {str(3 * s - 2): table[3 * s - 2] if 3 * s - 2 < len(table) else 0,
                                 str(3 * s - 1): table[3 * s - 1] if 3 * s - 1 < len(table) else 0}
    rep.add("hilbert_function", inputs, _outcome(table == closed, generated),
            data=data, expected=closed if generated else None, seconds=tm.seconds)
    return rep


# -- rank ---------------------------------------------------------------------


def _assignment_json(a: dict) -> dict:
    return {f"T{t}_{l}": scalar_to_json(v) for (t, l), v in sorted(a.items())}


def _assignment_from_json(obj: dict, field: FieldSpec) -> dict:
    out = {}
    for key, v in obj.items():
        t, l = key[1:].split("_")
        out[(int(t), int(l))] = scalar_from_json(v, field)
    return out


def _strategies(flag: str) -> list[str]:
    return {"phi": [gr.PHI], "random": [gr.RANDOM], "both": [gr.PHI, gr.RANDOM]}[flag]


def cmd_rank(args) -> Report:
    field = _parse_field(args.field, GF_DEFAULT)
    d = _need_degree(args, 3)
    if not gr.in_range(d) and not args.exploratory:
        hint = "; use `reesdepth depth --degree %d` for the Huckaba-Marley route" % d if d in (6, 8) else ""
        raise ConfigError(f"rank certificates need odd d >= 5 or even d >= 10 (got {d}){hint}")
    if field.characteristic == 2:
        raise ConfigError("rank certificates need characteristic != 2")
    rep = Report("rank", _config(args, field))
    rng = random.Random(args.seed)
    for strategy in _strategies(args.strategy):
        with _Timer() as tm:
            cert = gr.maximal_rank_certificate(d, strategy, rng, field, args.seed, args.exploratory)
        M = gr.certificate_matrix(d, strategy, args.exploratory)
        data = {
            "assignment": _assignment_json(cert.assignment),
            "achieved_rank": cert.achieved_rank,
            "target_rank": cert.target_rank,
            "parity": cert.parity,
            "shape": [M.rows, M.cols],
        }
        if strategy == gr.PHI and d % 2:
            survivors = [cert.assignment[v] for v in gr.phi_survivors(d)]
            prod = field(survivors[1] * survivors[2] * survivors[2] * survivors[3])
            det = gr.pivot_determinant(d, cert.assignment, field)
            data["surviving_quadrics"] = [list(q) for q in gr.surviving_quadrics(d, cert.assignment, field)]
            data["pivot_determinant_ok"] = det == field(-prod)
        rep.add(f"rank_certificate[{strategy}]", {"d": d, "strategy": strategy, "field": str(field)},
                _outcome(cert.valid, not args.exploratory), data=data,
                expected={"achieved_rank": cert.target_rank}, seconds=tm.seconds)
    return rep


# -- rr -----------------------------------------------------------------------


def _methods(flag: str) -> list[str]:
    return {"content": [rt.CONTENT_MATRIX], "colon": [rt.COLON_ORACLE],
            "both": [rt.CONTENT_MATRIX, rt.COLON_ORACLE]}[flag]


def cmd_rr(args) -> Report:
    field = _parse_field(args.field, GF_DEFAULT)
    rng = random.Random(args.seed)
    if not args.input:
        _need_degree(args, 3)
    forms, resamples, generated = _general_forms(args, field, rng)
    field = forms[0].field
    d = forms[0].degree
    if not rt.content_applies(d) and not args.exploratory:
        raise ConfigError(f"the Ratliff-Rush test needs odd d >= 5 or even d >= 10 (got {d}); pass --exploratory")
    expect = generated and rt.content_applies(d)
    rep = Report("rr", _config(args, field))
    inputs = {"forms": _forms_json(forms)}
    results = {}
    for method in _methods(args.method):
        with _Timer() as tm:
            res = rt.rr_test(forms, method, exploratory=args.exploratory)
        results[method] = res
        if method == rt.CONTENT_MATRIX:
            cs = rt.content_system(*forms, exploratory=args.exploratory)
            targets = [
                {
                    "label": t.label,
                    "monomial": list(t.monomial),
                    "form_index": t.form_index,
                    "solvable": res.solvable[t.label],
                    "cofactors": None if t.label not in res.cofactors else
                    {f"{a},{b}": form_to_json(h) for (a, b), h in res.cofactors[t.label].items()},
                }
                for t in cs.targets
            ]
            data = {"strictly_larger": res.strictly_larger, "targets": targets,
                    "witness": _forms_json(res.witness)}
        else:
            data = {"strictly_larger": res.strictly_larger, "witness": _forms_json(res.witness),
                    "colon_generators": _forms_json(res.colon_gens)}
        rep.add(f"rr[{method}]", inputs, _outcome(res.strictly_larger, expect), data=data,
                expected={"strictly_larger": True} if expect else None, resamples=resamples, seconds=tm.seconds)
    if len(results) == 2:
        a, b = (r.strictly_larger for r in results.values())
        rep.add("rr_agreement", inputs, _outcome(a == b, True), data={"content_matrix": a, "colon_oracle": b})
    if d % 2 and d >= 5:
        with _Timer() as tm:
            conj = rt.conjecture_check(*forms)
        failing = None
        if conj.failing is not None:
            m, i, j = conj.failing
            failing = {"monomial": form_to_json(m), "pair": [i, j]}
        rep.add("conjecture", inputs, RECORDED,
                data={"holds": conj.holds, "failing": failing, "checked": conj.checked, "seed": args.seed},
                seconds=tm.seconds)
        with _Timer() as tm:
            w = rt.corollary_witness(*forms)
        rep.add("corollary", inputs, _outcome(w is not None, expect),
                data={"witness": optional_form_to_json(w)}, expected={"holds": True} if expect else None,
                seconds=tm.seconds)
    return rep


# -- depth --------------------------------------------------------------------


def _ladder_check_data(red: dp.Reduction, ladder: dp.LambdaLadder) -> dict:
    return {
        "values": list(ladder.values),
        "sum": ladder.total,
        "colon_degrees": [[list(p) for p in degs] for degs in ladder.colon_degrees],
        "colon_generators": [_forms_json(g) for g in ladder.colon_gens],
    }


def _reduction_inputs(red: dp.Reduction) -> dict:
    return {
        "forms": _forms_json(red.I.gens),
        "J": _forms_json(red.J.gens),
        "f": form_to_json(red.f),
        "reduction_number": red.reduction_number,
    }


EXAMPLE_LADDERS = {"a": (9, 2, 2, 1, 1), "b": (9, 3, 1, 1, 1)}


def cmd_depth(args) -> Report:
    if args.example:
        return _depth_example(args)
    field = _parse_field(args.field, GF_DEFAULT)
    forms = None
    if args.input:
        forms, field = load_input(args.input, args.field)
        d = forms[0].degree
        if d < 5:
            raise ConfigError("the depth driver needs d >= 5")
    else:
        d = _need_degree(args, 5)
        if not field.is_prime_field:
            raise ConfigError("random forms need --field gfp:<p>")
    generated = forms is None
    rep = Report("depth", _config(args, field))
    with _Timer() as tm:
        res = dp.theorem_driver(d, args.seed, field, args.max_resamples, forms=forms)
    red, ladder, closed = res.reduction, res.ladder, res.closed
    inputs = _reduction_inputs(red)
    rep.add("reduction", {"forms": inputs["forms"]}, _outcome(red.reduction_number == d - 1, generated),
            data={"J": inputs["J"], "f": inputs["f"], "reduction_number": red.reduction_number,
                  "mixing": [list(m) for m in red.mixing] if red.mixing else None},
            expected={"reduction_number": d - 1} if generated else None,
            resamples=res.resamples, seconds=tm.seconds)
    values = ladder.values
    ok = values[:2] == (closed.lambda1, closed.lambda2) and all(v >= 1 for v in values)
    expected = {"lambda1": closed.lambda1, "lambda2": closed.lambda2}
    if d in (6, 8):
        expected["lambda3"] = 3
        ok = ok and len(values) >= 3 and values[2] == 3
    if d == 6:
        expected["a3_generators"] = [[2, 3]]
        ok = ok and [list(p) for p in ladder.colon_degrees[2]] == [[2, 3]]
    rep.add("lambda_ladder", inputs, _outcome(ok, generated), data=_ladder_check_data(red, ladder),
            expected=expected if generated else None)
    fit_ok = res.e0 == d * d and res.e1 == comb(d, 2) and res.postulation_ok
    rep.add("hilbert_samuel", {"forms": inputs["forms"]}, _outcome(fit_ok, generated),
            data={"e0": res.e0, "e1": res.e1, "e2": res.e2, "postulation_ok": res.postulation_ok},
            expected={"e0": d * d, "e1": comb(d, 2), "postulation_ok": True} if generated else None)
    tail = ladder.total - sum(values[:2])
    rep.add("closed_forms", {"d": d}, _outcome(res.lambda_ri1 == closed.lambda_ri1 and tail > closed.threshold, generated),
            data={"lambda_ri1": res.lambda_ri1, "closed": {
                "lambda1": closed.lambda1, "lambda_ri1": closed.lambda_ri1, "lambda2": closed.lambda2,
                "threshold": closed.threshold, "e1": closed.e1}, "tail_sum": tail},
            expected={"lambda_ri1": closed.lambda_ri1, "tail_sum_exceeds": closed.threshold} if generated else None)
    if res.rr_verdict is not None:
        rep.add("rr_route", {"forms": inputs["forms"]}, _outcome(res.rr_verdict == dp.DEPTH_ONE, generated),
                data={"verdict": res.rr_verdict})
    rep.add("verdict", {"forms": inputs["forms"]}, _outcome(res.verdict == dp.DEPTH_ONE, generated),
            data={"verdict": res.verdict, "hm_verdict": res.hm_verdict, "rr_verdict": res.rr_verdict,
                  "sum": ladder.total, "e1": res.e1},
            expected={"verdict": dp.DEPTH_ONE} if generated else None)
    return rep


def _depth_example(args) -> Report:
    field = _parse_field(args.field, QQ)
    if field != QQ:
        raise ConfigError("the worked examples run over --field rational")
    rep = Report("depth", _config(args, field))
    with _Timer() as tm:
        res = dp.example_report(args.example)
    red, ladder = res.reduction, res.ladder
    inputs = _reduction_inputs(red)
    rep.add("reduction", {"forms": inputs["forms"]}, _outcome(red.reduction_number == 5),
            data={"J": inputs["J"], "f": inputs["f"], "reduction_number": red.reduction_number},
            expected={"reduction_number": 5}, seconds=tm.seconds)
    want = EXAMPLE_LADDERS[args.example]
    ok = ladder.values == want
    if args.example == "b":
        ok = ok and [list(p) for p in ladder.colon_degrees[2]] == [[1, 2]]
    rep.add("lambda_ladder", inputs, _outcome(ok), data=_ladder_check_data(red, ladder),
            expected={"values": list(want)})
    rep.add("hilbert_samuel", {"forms": inputs["forms"]}, _outcome(res.e1 == 15),
            data={"e0": res.e0, "e1": res.e1, "e2": res.e2, "postulation_ok": res.postulation_ok},
            expected={"e1": 15})
    rep.add("verdict", {"forms": inputs["forms"]}, _outcome(res.verdict == dp.ALMOST_CM),
            data={"verdict": res.verdict, "sum": ladder.total, "e1": res.e1}, expected={"verdict": dp.ALMOST_CM})
    return rep


# -- verify -------------------------------------------------------------------


def _verify_syzygy(check, field):
    forms = [form_from_json(c, field) for c in check["inputs"]["forms"]]
    for syz in check["data"]["syzygies"]:
        total = None
        for f, h in zip(forms, syz):
            if h is None:
                continue
            term = multiply(form_from_json(h, field), f)
            total = term if total is None else total + term
        if total is None or not total.is_zero:
            return False
    return True


def _verify_hilbert(check, field):
    forms = [form_from_json(c, field) for c in check["inputs"]["forms"]]
    return hilbert_table(GradedIdeal(tuple(forms))) == check["data"]["table"]


def _verify_corollary(check, field):
    w = check["data"]["witness"]
    if w is None:
        return True
    forms = [form_from_json(c, field) for c in check["inputs"]["forms"]]
    I = GradedIdeal(tuple(forms))
    m = form_from_json(w, field)
    return not contains(I, m) and all(contains(power(I, 2), multiply(m, f)) for f in forms)


def _verify_rank(check, field, cfg):
    data = check["data"]
    a = _assignment_from_json(data["assignment"], field)
    got = gr.recheck_certificate(check["inputs"]["d"], check["inputs"]["strategy"], a, field, bool(cfg.get("exploratory")))
    return got == data["achieved_rank"]


def _verify_content(check, field):
    forms = [form_from_json(c, field) for c in check["inputs"]["forms"]]
    for t in check["data"]["targets"]:
        if t["cofactors"] is None:
            continue
        cof = {tuple(int(v) for v in k.split(",")): form_from_json(h, field) for k, h in t["cofactors"].items()}
        target = multiply(monomial(*t["monomial"], field=field), forms[t["form_index"]])
        if rt.reconstruct(forms, cof) != target:
            return False
    return True


def _verify_colon(check, field):
    forms = [form_from_json(c, field) for c in check["inputs"]["forms"]]
    I = GradedIdeal(tuple(forms))
    I2 = power(I, 2)
    for w in check["data"]["witness"]:
        w = form_from_json(w, field)
        if contains(I, w) or not all(contains(I2, multiply(w, f)) for f in forms):
            return False
    return True


def _verify_ladder(check, field, seed):
    inp = check["inputs"]
    forms = tuple(form_from_json(c, field) for c in inp["forms"])
    J = GradedIdeal(tuple(form_from_json(c, field) for c in inp["J"]))
    red = dp.Reduction(GradedIdeal(forms), J, form_from_json(inp["f"], field), inp["reduction_number"])
    values = check["data"]["values"]
    ell = random.Random(seed).randint(1, len(values))
    lam, _ = dp.lambda_value(red, ell)
    return lam == values[ell - 1]


def verify_document(doc: dict) -> list[tuple[str, str]]:
    """(check name, pass|fail|skipped) for every check in a report."""
    cfg = doc.get("config", {})
    field = FieldSpec.parse(cfg.get("field", "rational"))
    seed = cfg.get("seed") or 0
    out = []
    for check in doc.get("checks", []):
        name = check["name"]
        if name == "syzygy_profile":
            ok = _verify_syzygy(check, field)
        elif name == "hilbert_function":
            ok = _verify_hilbert(check, field)
        elif name == "corollary":
            ok = _verify_corollary(check, field)
        elif name.startswith("rank_certificate"):
            ok = _verify_rank(check, field, cfg)
        elif name == f"rr[{rt.CONTENT_MATRIX}]":
            ok = _verify_content(check, field)
        elif name == f"rr[{rt.COLON_ORACLE}]":
            ok = _verify_colon(check, field)
        elif name == "lambda_ladder":
            ok = _verify_ladder(check, field, seed)
        else:
            out.append((name, "skipped"))
            continue
        out.append((name, PASS if ok else FAIL))
    return out


def cmd_verify(path: str) -> int:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        results = verify_document(doc)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed report: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for name, status in results:
        print(f"{status.upper():8s} {name}")
    return EXIT_MATH if any(s == FAIL for _, s in results) else EXIT_OK


# -- entry point --------------------------------------------------------------


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reesdepth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verify", metavar="REPORT", help="re-check the witnesses stored in a report")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--degree", "-d", type=int)
        p.add_argument("--seed", type=_seed, default=1)
        p.add_argument("--field", help="rational | gfp:<p> (default gfp:2147483647)")
        p.add_argument("--input", help="JSON file with 'forms' or a 3x2 'hilbert_burch' matrix")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--max-resamples", type=int, default=5)
        p.add_argument("--exploratory", action="store_true", help="allow degrees outside the supported range")
        return p

    common(sub.add_parser("syzygy", help="syzygy degrees and Hilbert function of R/I"))
    common(sub.add_parser("rank", help="maximal-rank certificates")).add_argument(
        "--strategy", choices=["phi", "random", "both"], default="both")
    common(sub.add_parser("rr", help="I^2 : I strictly larger than I")).add_argument(
        "--method", choices=["content", "colon", "both"], default="both")
    common(sub.add_parser("depth", help="Huckaba-Marley depth verdict")).add_argument(
        "--example", choices=["a", "b"])
    sub.add_parser("verify", help="re-check a stored report").add_argument("report")
    return parser


COMMANDS = {"syzygy": cmd_syzygy, "rank": cmd_rank, "rr": cmd_rr, "depth": cmd_depth}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verify:
        return cmd_verify(args.verify)
    if args.command == "verify":
        return cmd_verify(args.report)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    try:
        rep = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotPrimaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenericityError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    doc = rep.document()
    text = dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in rep.checks:
        print(f"{c['outcome'].upper():8s} {c['name']}", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
