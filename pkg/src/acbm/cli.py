"""Batch front end.

Subcommands ingest JSON files, run the generators, classifiers and
verification suites, and emit deterministic reports.  Exit codes:
0 success, 1 failed assertion, 2 parse error, 3 invalid data,
4 unknown class name, 5 singular matrix.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import sampling
from .errors import ParseError, Singular, UnknownClass, ValidationError
from .family import (
    AnsatzParams,
    FamilyParams,
    canonical_torsion_closed,
    canonical_torsion_from_F,
    dual_torsion,
    hayden_Q,
    is_canonical_identity,
    naturality_check,
    phiB_delta,
    standard_torsion,
    torsion_family,
)
from .fundamental import CLASS_TAGS, build_class_F, classify_F, lee_forms, validate_F
from .jsonio import (
    encode_tensor,
    f_to_dict,
    load_f_file,
    load_json,
    load_lie_file,
    load_params_file,
    load_torsion_file,
    structure_to_dict,
    torsion_to_dict,
    write_json,
)
from .liealg import (
    fundamental_from_nabla,
    jacobi_check,
    koszul_levi_civita,
    levi_civita_report,
    verify_natural_connection,
)
from .scalar import format_rational
from .structure import canonical_structure, change_basis
from .taxonomy import CLASS_IDS, classify_torsion, sum_membership, torsion_forms
from .tensor import eq, first_nonzero
from .verify import SUITES, run_suites

EXIT_ASSERTION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_UNKNOWN_CLASS = 4
EXIT_SINGULAR = 5


def _encode_covector(v) -> list:
    return [format_rational(x) for x in v]


def _is_canonical(s) -> bool:
    ref = canonical_structure(s.n)
    return eq(s.phi, ref.phi) and eq(s.xi, ref.xi) and eq(s.eta, ref.eta) and eq(s.g, ref.g)


def _attach_structure(out: dict, s) -> dict:
    if not _is_canonical(s):
        out["structure"] = structure_to_dict(s)
    return out


def cmd_generate(args) -> tuple[dict, bool]:
    n = args.n
    s = canonical_structure(n)
    if args.kind == "structure":
        if args.seed:
            s = change_basis(s, sampling.unimodular(s.dim, args.seed))
        return structure_to_dict(s), True
    tag = args.cls
    if tag not in CLASS_TAGS or tag == "F0":
        raise UnknownClass(f"cannot generate fixtures for class {tag!r}")
    if tag == "MAIN":
        cd = sampling.main_class_data(s, args.seed)
    else:
        cd = sampling.class_data_random(tag, s, args.seed)
    f = build_class_F(tag, cd, s)
    out = f_to_dict(f)
    out["class"] = tag
    out["seed"] = args.seed
    return out, True


def cmd_classify_f(args) -> tuple[dict, bool]:
    f, s = load_f_file(args.input)
    rep = validate_F(f, s)
    if not rep.ok:
        bad = rep.failures()[0]
        raise ValidationError(
            f"fundamental tensor fails {bad.name}"
            + (f" at {tuple(bad.where)}" if bad.where else "")
        )
    forms = lee_forms(f, s)
    out = {
        "n": s.n,
        "valid": True,
        "classes": classify_F(f, s),
        "lee_forms": {
            "theta": _encode_covector(forms.theta_h),
            "theta_star": _encode_covector(forms.theta_star_h),
            "omega": _encode_covector(forms.omega),
            "theta_xi": format_rational(np.dot(forms.theta_h, s.xi)),
            "theta_star_xi": format_rational(np.dot(forms.theta_star_h, s.xi)),
        },
    }
    return out, True


def cmd_torsion(args) -> tuple[dict, bool]:
    f, s = load_f_file(args.forms)
    p = load_params_file(args.params)
    forms = lee_forms(f, s)
    if isinstance(p, FamilyParams):
        t = torsion_family(p, forms, s)
        params_echo = {"alpha": [format_rational(a) for a in p.alpha]}
    else:
        from .family import ansatz_torsion

        t = ansatz_torsion(p, forms, s)
        params_echo = {"lambda": [format_rational(x) for x in p.lam]}
    natural = naturality_check(hayden_Q(t), f, s).ok
    out = torsion_to_dict(t, s, inline_structure=not _is_canonical(s))
    out["params"] = params_echo
    out["natural"] = natural
    return out, natural


def cmd_canonical(args) -> tuple[dict, bool]:
    f, s = load_f_file(args.forms)
    if args.n is not None and args.n != s.n:
        raise ParseError(f"--n {args.n} contradicts file n={s.n}")
    forms = lee_forms(f, s)
    direct = canonical_torsion_from_F(f, s)
    closed = canonical_torsion_closed(forms, s)
    diff = direct - closed
    idx = first_nonzero(diff)
    out = torsion_to_dict(direct, s, inline_structure=not _is_canonical(s))
    out["paths_agree"] = idx is None
    out["diff"] = encode_tensor(diff)
    out["identity_holds"] = is_canonical_identity(direct, s)
    ok = out["paths_agree"] and out["identity_holds"]
    return out, ok


def cmd_classify_torsion(args) -> tuple[dict, bool]:
    t, s = load_torsion_file(args.input)
    tf = torsion_forms(t, s)
    out = {
        "n": s.n,
        "classes": classify_torsion(t, s),
        "forms": {
            "t": _encode_covector(tf.t),
            "t_star": _encode_covector(tf.t_star),
            "t_hat": _encode_covector(tf.t_hat),
        },
    }
    ok = True
    if args.sum:
        names = tuple(x.strip() for x in args.sum.split(","))
        for name in names:
            if name not in CLASS_IDS:
                raise UnknownClass(f"unknown torsion class {name!r}")
        m = sum_membership(t, names, s)
        out["sum"] = {
            "classes": list(names),
            "member": m.member,
        }
        if m.member:
            out["sum"]["components"] = {
                cid: encode_tensor(comp) for cid, comp in m.components.items()
            }
        ok = m.member
    return out, ok


def cmd_verify(args) -> tuple[dict, bool]:
    names = None
    if args.suite:
        names = [x.strip() for x in args.suite.split(",")]
        for name in names:
            if name not in SUITES:
                raise ParseError(
                    f"unknown suite {name!r}; choose from {', '.join(SUITES)}"
                )
    reports = run_suites(args.n, args.seeds, seed=args.seed, names=names)
    out = {
        "n": args.n,
        "seeds": args.seeds,
        "ok": all(r.ok for r in reports),
        "suites": [r.as_dict() for r in reports],
    }
    return out, out["ok"]


def cmd_liegroup(args) -> tuple[dict, bool]:
    lie, s = load_lie_file(args.input)
    out: dict = {"dim": lie.dim}
    jac = jacobi_check(lie)
    out["jacobi"] = jac.as_dict()
    if not jac.ok:
        out["ok"] = False
        return out, False
    gamma = koszul_levi_civita(lie, s)
    out["levi_civita"] = levi_civita_report(lie, s).as_dict()
    f = fundamental_from_nabla(gamma, s)
    rep_f = validate_F(f, s)
    out["fundamental"] = rep_f.as_dict()
    out["F"] = encode_tensor(f)
    forms = lee_forms(f, s)
    out["classes"] = classify_F(f, s)
    out["lee_forms"] = {
        "theta": _encode_covector(forms.theta_h),
        "theta_star": _encode_covector(forms.theta_star_h),
        "omega": _encode_covector(forms.omega),
    }

    if args.connection == "canonical":
        delta = phiB_delta(f, s)
        q, t = delta.q, delta.torsion()
    else:
        t = {
            "standard": standard_torsion,
            "dual": dual_torsion,
        }[args.connection](forms, s)
        q = hayden_Q(t)
    rep_nat = verify_natural_connection(lie, s, q)
    out["connection"] = args.connection
    out["natural_connection"] = rep_nat.as_dict()
    out["T"] = encode_tensor(t)
    out["torsion_classes"] = classify_torsion(t, s)
    if args.connection == "canonical":
        t0 = canonical_torsion_from_F(f, s)
        out["torsion_matches_direct_formula"] = eq(t, t0)
        m = sum_membership(t, ("T13", "T31", "T41"), s)
        out["torsion_in_three_class_sum"] = m.member
    ok = (
        out["levi_civita"]["ok"]
        and rep_f.ok
        and rep_nat.ok
        and out.get("torsion_matches_direct_formula", True)
        and out.get("torsion_in_three_class_sum", True)
    )
    out["ok"] = ok
    return out, ok


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and not _is_flat(val):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_flat(val)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
    else:
        lines.append(f"{pad}{_flat(obj)}")
    return lines


def _is_flat(val) -> bool:
    if isinstance(val, list):
        return all(not isinstance(x, (dict, list)) for x in val)
    return not isinstance(val, dict)


def _flat(val) -> str:
    if isinstance(val, list):
        return "[" + ", ".join(_flat(x) for x in val) + "]"
    if isinstance(val, bool):
        return "true" if val else "false"
    if val is None:
        return "null"
    return str(val)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acbm",
        description="Exact-arithmetic engine for almost contact B-metric structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        if out:
            p.add_argument("--out", help="write the report to this path")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("generate", help="emit a seeded structure or class fixture")
    p.add_argument("--kind", choices=("structure", "f"), required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--class", dest="cls", default="MAIN",
                   help="fundamental class tag for --kind f")
    common(p)

    p = sub.add_parser("classify-f", help="class membership of a fundamental tensor")
    p.add_argument("--in", dest="input", required=True)
    common(p)

    p = sub.add_parser("torsion", help="build a family torsion from parameters")
    p.add_argument("--params", required=True)
    p.add_argument("--forms", required=True, help="F-file supplying the trace forms")
    common(p)

    p = sub.add_parser("canonical", help="distinguished torsion via both routes")
    p.add_argument("--forms", required=True)
    p.add_argument("--n", type=int, default=None)
    common(p)

    p = sub.add_parser("classify-torsion", help="torsion class predicates and sums")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--sum", help="comma-separated class ids for sum membership")
    common(p)

    p = sub.add_parser("verify", help="run the named invariant suites")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seeds", type=int, default=10, help="fixtures per suite")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--suite", help="comma-separated suite names (default: all)")
    common(p)

    p = sub.add_parser("liegroup", help="bracket table to final report pipeline")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--connection", choices=("canonical", "standard", "dual"),
                   default="canonical")
    common(p)

    return parser


COMMANDS = {
    "generate": cmd_generate,
    "classify-f": cmd_classify_f,
    "torsion": cmd_torsion,
    "canonical": cmd_canonical,
    "classify-torsion": cmd_classify_torsion,
    "verify": cmd_verify,
    "liegroup": cmd_liegroup,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, ok = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownClass as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_CLASS
    except Singular as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.format == "text":
        text = "\n".join(_render_text(report)) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        sys.stdout.write(text)
    else:
        text = write_json(report, args.out)
        sys.stdout.write(text)
    return 0 if ok else EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
