"""Command-line front end.  Every command prints one JSON document.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.  Errors
are reported as {"error": code, "detail": message} on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import jsonio
from .algebra import AlgebraSpec, nilpotency_check, validate_defining_matrix
from .brace import (
    BraceCandidate,
    check_bibrace,
    check_left_brace,
    check_right_brace,
    circle_exponent_check,
    gamma_homomorphism_check,
)
from .classify import canonical_representatives, class_of, count_classes, iso_test
from .errors import FpBraceError
from .gf import GF, find_nonsquare
from .holomorph import TABLE_LIMIT, build_T_circ, verify_subgroup_properties
from .matfp import canonical_form, congruent_diagonalize, discriminant, rank
from .oracle import enumerate_regular_subgroups_small, enumerate_valid_theta, match_subgroup, partition_into_classes


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- commands -------------------------------------------------------------------


def cmd_field_info(args) -> dict:
    F = GF(args.p, args.k, args.modulus)
    return {"field": jsonio.field_to_json(F), "size": F.q, "q": jsonio.element_to_json(F, find_nonsquare(F))}


def cmd_theta_validate(args) -> dict:
    alg = jsonio.algebra_from_json(jsonio.load_json(args.file))
    report = validate_defining_matrix(alg.theta)
    return {
        "valid": report.valid,
        "symmetric": report.symmetric,
        "independent": report.independent,
        "invertible": report.invertible,
        "asymmetric_cell": list(report.asymmetric_cell) if report.asymmetric_cell else None,
        "vanishing_combination": (
            jsonio.vector_to_json(alg.field, report.vanishing_combination)
            if report.vanishing_combination is not None
            else None
        ),
    }


def cmd_algebra_verify(args) -> dict:
    alg = jsonio.algebra_from_json(jsonio.load_json(args.file))
    alg.require_valid()
    F = alg.field
    mode = "exhaustive" if args.exhaustive else "sampled"
    opts = {"mode": mode, "seed": args.seed, "samples": args.samples}
    cand = BraceCandidate.from_algebra(alg)
    out = {
        "left_brace": jsonio.verdict_to_json(check_left_brace(cand, **opts), F),
        "right_brace": jsonio.verdict_to_json(check_right_brace(cand, **opts), F),
        "bibrace": jsonio.verdict_to_json(check_bibrace(alg, **opts), F),
        "gamma_homomorphism": jsonio.verdict_to_json(gamma_homomorphism_check(alg, **opts), F),
        "exponent_p": jsonio.verdict_to_json(circle_exponent_check(alg, **opts), F),
        "nilpotency_index": nilpotency_check(alg),
    }
    if alg.size <= TABLE_LIMIT:
        report = verify_subgroup_properties(build_T_circ(alg), alg)
        out["subgroup"] = {name: r.passed for name, r in report.results().items()}
    else:
        out["subgroup"] = None
    return out


def cmd_classify_one(args) -> dict:
    alg = jsonio.algebra_from_json(jsonio.load_json(args.file))
    label = class_of(alg)
    F = alg.field
    reps = canonical_representatives(F.p, F.k, alg.n, field=F)
    rep = reps[1] if label.form.value == "nonsquare" else reps[0]
    witness = iso_test(alg, rep)
    doc = jsonio.classification_to_json(label, witness, len(reps))
    doc["representative"] = jsonio.algebra_to_json(rep)
    return doc


def cmd_classify_pair(args) -> dict:
    a1 = jsonio.algebra_from_json(jsonio.load_json(args.file1))
    a2 = jsonio.algebra_from_json(jsonio.load_json(args.file2))
    w = iso_test(a1, a2)
    return {"isomorphic": w is not None, "witness": jsonio.witness_to_json(w)}


def cmd_classify_count(args) -> dict:
    return {"count": count_classes(args.p, args.k, args.n)}


def cmd_classify_reps(args) -> dict:
    reps = canonical_representatives(args.p, args.k, args.n)
    return {"count": len(reps), "representatives": [jsonio.algebra_to_json(r) for r in reps]}


def cmd_form_diagonalize(args) -> dict:
    B = jsonio.matrix_from_json(jsonio.load_json(args.file))
    A, D = congruent_diagonalize(B)
    out = {
        "A": jsonio.matrix_to_json(A, with_field=False)["rows"],
        "D": jsonio.matrix_to_json(D, with_field=False)["rows"],
        "rank": rank(B),
        "canonical": None,
    }
    if rank(B) == B.rows:
        label, C = canonical_form(B)
        out["discriminant"] = discriminant(B).value
        out["canonical"] = {
            "A": jsonio.matrix_to_json(C, with_field=False)["rows"],
            "label": {"rank": label.rank, "disc": label.disc.value},
        }
    return out


def cmd_oracle_classes(args, emit) -> dict:
    thetas = enumerate_valid_theta(args.p, args.k, args.m)
    classes = partition_into_classes(thetas, via=args.via, workers=args.workers)
    if args.jsonl:
        which = {i: c for c, members in enumerate(classes) for i in members}
        for i, t in enumerate(thetas):
            emit({"index": i, "theta": jsonio.algebra_to_json(AlgebraSpec(t))["theta"], "class": which[i]})
    return {
        "p": args.p,
        "k": args.k,
        "m": args.m,
        "via": args.via,
        "total": len(thetas),
        "count": len(classes),
        "class_sizes": [len(c) for c in classes],
    }


def cmd_oracle_subgroups(args, emit) -> dict:
    tables = enumerate_regular_subgroups_small(args.p, args.n)
    census: Counter = Counter()
    for i, t in enumerate(tables):
        match = match_subgroup(t)
        kind = match.kind if match.theta is None else f"theta_d{match.theta.d}"
        census[kind] += 1
        if args.jsonl:
            rec = {"index": i, "kind": match.kind, "linear": [L.tolist() for L in t.linear]}
            if match.theta is not None:
                rec["theta"] = jsonio.algebra_to_json(AlgebraSpec(match.theta))["theta"]
                rec["basis"] = match.basis.tolist()
            emit(rec)
    return {"p": args.p, "n": args.n, "total": len(tables), "census": dict(sorted(census.items()))}


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpbrace", description="Bi-braces from radical algebras over finite fields.")
    parser.add_argument("--table", action="store_true", help="human-readable key/value output")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    field = sub.add_parser("field").add_subparsers(dest="command", required=True, parser_class=_Parser)
    info = field.add_parser("info")
    info.add_argument("--p", type=int, required=True)
    info.add_argument("--k", type=int, default=1)
    info.add_argument("--modulus", type=int, nargs="+", help="coefficients, constant term first")
    info.set_defaults(func=cmd_field_info)

    theta = sub.add_parser("theta").add_subparsers(dest="command", required=True, parser_class=_Parser)
    validate = theta.add_parser("validate")
    validate.add_argument("file")
    validate.set_defaults(func=cmd_theta_validate)

    algebra = sub.add_parser("algebra").add_subparsers(dest="command", required=True, parser_class=_Parser)
    verify = algebra.add_parser("verify")
    verify.add_argument("file")
    verify.add_argument("--exhaustive", action="store_true")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--samples", type=int, default=2000)
    verify.set_defaults(func=cmd_algebra_verify)

    classify = sub.add_parser("classify").add_subparsers(dest="command", required=True, parser_class=_Parser)
    one = classify.add_parser("one")
    one.add_argument("file")
    one.set_defaults(func=cmd_classify_one)
    pair = classify.add_parser("pair")
    pair.add_argument("file1")
    pair.add_argument("file2")
    pair.set_defaults(func=cmd_classify_pair)
    for name, func in (("count", cmd_classify_count), ("reps", cmd_classify_reps)):
        c = classify.add_parser(name)
        c.add_argument("--p", type=int, required=True)
        c.add_argument("--k", type=int, default=1)
        c.add_argument("--n", type=int, required=True)
        c.set_defaults(func=func)

    form = sub.add_parser("form").add_subparsers(dest="command", required=True, parser_class=_Parser)
    diag = form.add_parser("diagonalize")
    diag.add_argument("file")
    diag.set_defaults(func=cmd_form_diagonalize)

    oracle = sub.add_parser("oracle").add_subparsers(dest="command", required=True, parser_class=_Parser)
    classes = oracle.add_parser("classes")
    classes.add_argument("--p", type=int, required=True)
    classes.add_argument("--k", type=int, default=1)
    classes.add_argument("--m", type=int, required=True)
    classes.add_argument("--via", choices=["iso_test", "brute_force"], default="brute_force")
    classes.add_argument("--workers", type=int, default=1)
    classes.add_argument("--jsonl", action="store_true", help="stream one line per matrix before the summary")
    classes.set_defaults(func=cmd_oracle_classes, streams=True)
    subgroups = oracle.add_parser("subgroups")
    subgroups.add_argument("--p", type=int, required=True)
    subgroups.add_argument("--n", type=int, required=True)
    subgroups.add_argument("--workers", type=int, default=1, help="accepted for symmetry; the search is sequential")
    subgroups.add_argument("--jsonl", action="store_true", help="stream one line per subgroup before the summary")
    subgroups.set_defaults(func=cmd_oracle_subgroups, streams=True)
    return parser


def _render_table(doc: dict) -> str:
    width = max((len(str(k)) for k in doc), default=0)
    return "\n".join(f"{k:<{width}}  {json.dumps(v)}" for k, v in doc.items())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    out = sys.stdout

    def emit(record: dict) -> None:
        out.write(json.dumps(record) + "\n")

    try:
        args = parser.parse_args(argv)
        if getattr(args, "streams", False):
            doc = args.func(args, emit)
        else:
            doc = args.func(args)
    except UsageError as exc:
        emit({"error": "UsageError", "detail": str(exc)})
        return 2
    except FpBraceError as exc:
        emit(jsonio.error_to_json(exc))
        return 1
    out.write((_render_table(doc) if args.table else json.dumps(doc)) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
