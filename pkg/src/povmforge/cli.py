"""Command-line front end.

Exit status is 0 when every verification passes, 1 when a verification
fails and 2 on a bad argument or failed precondition; in the last case a
JSON error record goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import serialize
from .construction_q import CONSTRUCTION as CONSTRUCTION_Q, build_ensemble_q, default_function
from .construction_q1 import CONSTRUCTION as CONSTRUCTION_Q1, build_ensemble_q1, build_s_set, verify_difference_structure, verify_li_bound
from .errors import PovmForgeError
from .finite_field import FieldSpec, is_prime, make_field, make_tower, prime_power
from .functions import (
    PolyFunction,
    build_f_permutation,
    count_two_to_one_bruteforce,
    count_two_to_one_formula,
    fiber_profile,
    is_pn,
)
from .verify import Tolerances, codebook_metrics, ledger_for, verify_povm_axioms, welch_bound

ALIASES = {
    ("construct", "q"): "construct-q",
    ("construct", "q1"): "construct-q1",
    ("fn", "check"): "fn-check",
    ("fn", "count"): "fn-count",
    ("fn", "count-2to1"): "fn-count",
}
SWEEP_COLUMNS = (
    "schema_version",
    "construction",
    "q",
    "f",
    "case",
    "pairs",
    "bound",
    "measured_max",
    "margin",
    "gap",
    "order",
    "scaled_gap",
    "verdict",
    "error",
)


class UsageError(ValueError):
    pass


def parse_field(args) -> FieldSpec:
    if args.field:
        try:
            p, k = (int(x) for x in args.field.split(","))
        except ValueError:
            raise UsageError(f"--field expects 'p,k', got {args.field!r}") from None
    else:
        if args.p is None:
            raise UsageError("give --p/--k or --field")
        p, k = args.p, args.k
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    if k < 1:
        raise UsageError(f"k={k} must be at least 1")
    return make_field(p, k)


def parse_poly(text: str, spec: FieldSpec) -> PolyFunction:
    """Coefficients constant term first.

    ``k = 1``: ``"0,0,1"`` is ``x^2``. ``k > 1``: ``;`` separates coefficients
    and ``,`` the base-p digits of one coefficient, so ``"0;0;1,0"`` is
    ``x^2``. Without ``;`` and ``k > 1`` each comma item is an encoded
    element.
    """
    try:
        if ";" in text:
            coeffs = [spec.from_digits([int(d) for d in part.split(",")]) if part.strip() else 0 for part in text.split(";")]
        else:
            coeffs = [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None
    return PolyFunction(spec, tuple(coeffs))


def _tolerances(args) -> Tolerances:
    return Tolerances(
        completeness=args.tol_completeness,
        bound=args.tol_bound,
        positivity=args.tol_positivity,
    )


def _write(path: Path | None, text: str) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _artifact_paths(args, stem: str) -> tuple[Path | None, Path | None]:
    out = Path(args.out) if args.out else None
    js = Path(args.json) if args.json else (out / f"{stem}.json" if out else None)
    cs = Path(args.csv) if args.csv else (out / f"{stem}_ledger.csv" if out else None)
    return js, cs


def _emit_construction(args, ens, stem: str) -> int:
    tol = _tolerances(args)
    if args.verify:
        report = verify_povm_axioms(ens, tol, args.workers)
        ledger = report.ledger
        ok = report.passed
    else:
        report = None
        ledger = ledger_for(ens, args.workers)
        ok = ledger.passed
    js, cs = _artifact_paths(args, stem)
    doc = serialize.ensemble_to_dict(ens, include_operators=not args.compact)
    doc["ledger"] = serialize.ledger_rows(ledger)
    if report is not None:
        doc["verification"] = report.to_dict()
    _write(js, serialize.dumps(doc))
    _write(cs, serialize.ledger_csv(ledger))
    print(f"{ens.construction} q={ens.q} dim={ens.dim} members={len(ens)}")
    for r in ledger.records:
        print(
            f"  case {r.case:>3}  bound={r.bound:.12g}  measured={r.measured_max:.12g}  "
            f"margin={r.margin:.3e}  {'pass' if r.passed else 'FAIL'}"
        )
    if report is not None:
        print(
            f"  completeness={report.completeness_error:.3e} rank={report.rank} "
            f"min_eig={report.min_member_eigenvalue:.3e} -> {'pass' if report.passed else 'FAIL'}"
        )
    return 0 if ok else 1


def cmd_construct_q(args) -> int:
    spec = parse_field(args)
    f = parse_poly(args.f, spec) if args.f else default_function(spec)
    ens = build_ensemble_q(spec, f, None, args.chi)
    return _emit_construction(args, ens, f"ensemble_q{spec.q}")


def cmd_construct_q1(args) -> int:
    spec = parse_field(args)
    ens = build_ensemble_q1(make_tower(spec.p, spec.k))
    return _emit_construction(args, ens, f"ensemble_q1_{spec.q}")


def cmd_verify(args) -> int:
    doc = json.loads(Path(args.path).read_text(encoding="utf-8"))
    ens = serialize.load_ensemble(doc)
    report = verify_povm_axioms(ens, _tolerances(args), args.workers)
    text = report.to_json() + "\n"
    print(text, end="")
    js, cs = _artifact_paths(args, "verification")
    _write(js, text)
    _write(cs, report.to_csv())
    return 0 if report.passed else 1


def cmd_fn_check(args) -> int:
    spec = parse_field(args)
    f = parse_poly(args.f, spec) if args.f else default_function(spec)
    prof = fiber_profile(f.table())
    pn = is_pn(f)
    out = {"f": str(f), "coeffs": list(f.coeffs), "two_to_one": prof.is_two_to_one, "pn": pn}
    if prof and spec.q % 2 == 1:
        out["permutation"] = build_f_permutation(f).to_json()
    print(json.dumps(out, sort_keys=True))
    return 0 if (prof and pn) else 1


def cmd_fn_count(args) -> int:
    spec = parse_field(args)
    formula = count_two_to_one_formula(spec)
    out = {"q": spec.q, "formula": formula}
    ok = True
    if args.brute:
        brute = count_two_to_one_bruteforce(spec)
        out["bruteforce"] = brute
        ok = brute == formula
    print(json.dumps(out, sort_keys=True))
    return 0 if ok else 1


def cmd_welch(args) -> int:
    if args.n is not None:
        if args.dim is None:
            raise UsageError("--n needs --dim")
        print(json.dumps({"N": args.n, "K": args.dim, "welch": welch_bound(args.n, args.dim)}))
        return 0
    spec = parse_field(args)
    ens = build_ensemble_q1(make_tower(spec.p, spec.k))
    m = codebook_metrics(ens.vectors)
    q = spec.q
    expected = math.sqrt((q + 2) / (q + 1))
    out = {"q": q, "N": m.N, "K": m.K, "i_max": m.i_max, "welch": m.welch, "ratio": m.ratio, "expected_ratio": expected}
    print(json.dumps(out, sort_keys=True))
    ok = abs(m.i_max - 1 / math.sqrt(q + 1)) <= 1e-9 and abs(m.ratio - expected) <= 1e-9
    return 0 if ok else 1


def cmd_libound(args) -> int:
    spec = parse_field(args)
    s = build_s_set(make_tower(spec.p, spec.k))
    diff = verify_difference_structure(s)
    li = verify_li_bound(s, strict=False)
    out = {
        "q": spec.q,
        "s_set": s.to_json(),
        "difference_set": {"ok": diff.ok, "quotients": diff.quotient_count, "distinct": diff.distinct_count},
        "li": {"max_modulus": li.max_modulus, "argmax": li.argmax, "bound": li.bound, "ok": li.passed},
    }
    print(json.dumps(out, sort_keys=True))
    return 0 if (diff.ok and li.passed) else 1


def sweep_rows(qs, construction: str, f_text: str | None = None, workers: int | None = None) -> list[dict]:
    """One row per ``(q, case)``; a failing ``q`` contributes a single error row."""
    rows = []
    for q in qs:
        tag = CONSTRUCTION_Q if construction == "q" else CONSTRUCTION_Q1
        base = {"schema_version": serialize.SCHEMA_VERSION, "construction": tag, "q": q, "f": ""}
        try:
            p, k = prime_power(q)
            spec = make_field(p, k)
            if construction == "q":
                f = parse_poly(f_text, spec) if f_text else default_function(spec)
                ens = build_ensemble_q(spec, f)
                base["f"] = ",".join(str(c) for c in f.coeffs)
            else:
                ens = build_ensemble_q1(make_tower(p, k))
            ledger = ledger_for(ens, workers)
        except (PovmForgeError, ValueError) as exc:
            rows.append({**base, "case": "", "verdict": "error", "error": f"{type(exc).__name__}: {exc}"})
            continue
        for r in ledger.records:
            rows.append(
                {
                    **base,
                    "case": r.case,
                    "pairs": r.pair_count,
                    "bound": repr(r.bound),
                    "measured_max": repr(r.measured_max),
                    "margin": repr(r.margin),
                    "gap": repr(r.gap),
                    "order": repr(r.order),
                    "scaled_gap": repr(r.scaled_gap),
                    "verdict": "pass" if r.passed else "fail",
                    "error": "",
                }
            )
    return rows


def cmd_sweep(args) -> int:
    try:
        qs = [int(x) for x in args.q.split(",")]
    except ValueError:
        raise UsageError(f"--q expects a comma list of integers, got {args.q!r}") from None
    rows = sweep_rows(qs, args.construction, args.f, args.workers)
    text = serialize.write_csv(rows, SWEEP_COLUMNS)
    if args.csv or args.out:
        _write(Path(args.csv) if args.csv else Path(args.out) / f"sweep_{args.construction}.csv", text)
    else:
        print(text, end="")
    return 0 if all(r["verdict"] == "pass" for r in rows) else 1


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _add_field(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, help="characteristic")
    p.add_argument("--k", type=int, default=1, help="extension degree (default 1)")
    p.add_argument("--field", help="shorthand 'p,k'")


def _add_outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="directory for the JSON and CSV artifacts")
    p.add_argument("--json", help="explicit JSON output path")
    p.add_argument("--csv", help="explicit CSV output path")
    p.add_argument("--workers", type=int, default=None, help="threads for the pairwise scan (default POVMFORGE_WORKERS or 1)")
    tol = Tolerances()
    p.add_argument("--tol-completeness", type=_positive, default=tol.completeness)
    p.add_argument("--tol-bound", type=_positive, default=tol.bound)
    p.add_argument("--tol-positivity", type=_positive, default=tol.positivity)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="povmforge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct-q", help="dimension-q ensemble from a 2-to-1 PN function")
    _add_field(p)
    p.add_argument("--f", help="coefficients, constant term first (default x^2)")
    p.add_argument("--chi", type=int, default=1, help="additive character index (nonzero)")
    p.add_argument("--verify", action="store_true", help="run the full axiom check")
    p.add_argument("--compact", action="store_true", help="omit member operators from the JSON")
    _add_outputs(p)
    p.set_defaults(func=cmd_construct_q)

    p = sub.add_parser("construct-q1", help="dimension-(q+1) ensemble from characters of N")
    _add_field(p)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--compact", action="store_true")
    _add_outputs(p)
    p.set_defaults(func=cmd_construct_q1)

    p = sub.add_parser("verify", help="replay and verify an ensemble JSON")
    p.add_argument("path")
    _add_outputs(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fn-check", help="2-to-1 and PN tests for a polynomial")
    _add_field(p)
    p.add_argument("--f")
    p.set_defaults(func=cmd_fn_check)

    p = sub.add_parser("fn-count", help="number of 2-to-1 maps on GF(q)")
    _add_field(p)
    p.add_argument("--brute", action="store_true", help="also enumerate (q <= 5)")
    p.set_defaults(func=cmd_fn_count)

    p = sub.add_parser("welch", help="codebook metrics of the dimension-(q+1) set, or a bare Welch bound")
    _add_field(p)
    p.add_argument("--n", type=int, help="codebook size for a bare Welch bound")
    p.add_argument("--dim", type=int, help="dimension for a bare Welch bound")
    p.set_defaults(func=cmd_welch)

    p = sub.add_parser("libound", help="difference structure and character-sum bound of S")
    _add_field(p)
    p.set_defaults(func=cmd_libound)

    p = sub.add_parser("sweep", help="ledger rows over a list of q")
    p.add_argument("--construction", choices=("q", "q1"), required=True)
    p.add_argument("--q", required=True, help="comma-separated field orders")
    p.add_argument("--f", help="polynomial for the dimension-q construction (default x^2)")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)
    return ap


def _normalize_argv(argv: list[str]) -> list[str]:
    if len(argv) >= 2 and (argv[0], argv[1]) in ALIASES:
        return [ALIASES[(argv[0], argv[1])]] + argv[2:]
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = _normalize_argv(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (PovmForgeError, ValueError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
