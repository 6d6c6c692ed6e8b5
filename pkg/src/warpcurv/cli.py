"""Command line interface.

    warpcurv verify <scenario.json>      slack report at sample points
    warpcurv extremal <scenario.json>    inf/sup of ambient K at sample points
    warpcurv catalog clifford --m1 2 --m2 2
    warpcurv lemma --n 4 --trials 10000 --seed 0

Exit codes: 0 all checks pass, 1 validation failure, 2 slack violation,
3 evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict

import numpy as np

from . import chen, scenario
from . import tolerances as tol
from .ambient import AmbientError, clifford_extrinsic, extremal_sectional, optimize_planes
from .immersion import evaluate
from .scenario import EXIT_EVAL_ERROR, EXIT_INVALID, EXIT_OK, EXIT_VIOLATION, ScenarioError


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def cmd_verify(args) -> int:
    sc = scenario.load(args.scenario)
    result = scenario.run(sc, args.samples, args.seed, args.tol_slack)
    text = scenario.to_csv(result) if args.format == "csv" else scenario.to_json(result)
    _emit(text, args.out)
    return result.exit_code


def cmd_extremal(args) -> int:
    sc = scenario.load(args.scenario)
    imm = sc.immersion
    names = list(sc.domain.names)
    rows, errors = [], []
    for idx, p in enumerate(scenario.sample_points(sc, args.samples, args.seed)):
        try:
            pt = evaluate(imm, p)
            kmin, kmax, _, _ = optimize_planes(pt.ambient_in_frame(), seed=idx)
            full = extremal_sectional(imm.ambient, pt.image, seed=idx)
        except (ArithmeticError, ValueError) as exc:
            errors.append({"index": idx, "point": [float(x) for x in p], "error": str(exc)})
            continue
        row = {name: float(v) for name, v in zip(names, p)}
        row.update(tangent_inf_K=kmin, tangent_sup_K=kmax, ambient_inf_K=full.inf_val,
                   ambient_sup_K=full.sup_val, ambient_method=full.method)
        rows.append(row)
    if args.format == "csv":
        cols = names + ["tangent_inf_K", "tangent_sup_K", "ambient_inf_K", "ambient_sup_K", "ambient_method"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], str) else repr(float(r[c])) for c in cols])
        text = buf.getvalue()
    else:
        text = _dump({"scenario": sc.name, "ambient": imm.ambient.kind, "points": rows, "errors": errors})
    _emit(text, args.out)
    return EXIT_EVAL_ERROR if errors else EXIT_OK


def cmd_catalog(args) -> int:
    rec = clifford_extrinsic(args.m1, args.m2, points=args.samples or 3, seed=args.seed or 0)
    doc = asdict(rec)
    num = doc.pop("numeric") or {}
    doc["numeric"] = {
        "points": num.get("points", []),
        "principal_curvatures": num.get("principal_curvatures", []),
        "h_norm2": num.get("h_norm2", []),
        "H2": num.get("H2", []),
        "tau": num.get("tau", []),
        "gauss_residual": num.get("gauss_residual", []),
    }
    ok = all(abs(v - rec.h_norm2) < 1e-6 for v in num.get("h_norm2", []))
    ok &= all(abs(v - rec.tau) < 1e-6 for v in num.get("tau", []))
    ok &= all(abs(v) < 1e-6 for v in num.get("H2", []))
    ok &= all(np.allclose(sorted(pc), sorted(rec.principal_curvatures), atol=1e-6)
              for pc in num.get("principal_curvatures", []))
    doc["matches_closed_form"] = bool(ok)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m1", "m2", "h_norm2", "H2", "tau", "principal_curvatures"])
        w.writerow([rec.m1, rec.m2, repr(rec.h_norm2), repr(rec.H2), repr(rec.tau),
                    " ".join(repr(k) for k in rec.principal_curvatures)])
        text = buf.getvalue()
    else:
        text = _dump(doc)
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_lemma(args) -> int:
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    trials = args.trials
    violations, equalities, mismatches = 0, 0, 0
    worst = np.inf
    for k in range(trials):
        n = args.n if args.n else int(rng.integers(2, 9))
        a = rng.standard_normal(n)
        if k % 10 == 0 and n > 2:
            # plant an equality case a1 + a2 = a3 = ... = an
            a[2:] = a[0] + a[1]
        c = chen.solve_lemma_c(a)
        res = chen.lemma_check(a, c)
        gap = 2 * a[0] * a[1] - c
        worst = min(worst, gap)
        if gap < -1e-9:
            violations += 1
        b = np.concatenate([[a[0] + a[1]], a[2:]])
        cond = bool(np.all(np.abs(b - b[0]) <= 1e-9))
        equalities += bool(res.is_equality)
        mismatches += bool(res.is_equality) != cond
    examples = []
    for a, c in (([1.0, 1.0], 2.0), ([1.0, 1.0, 2.0], 2.0), ([3.0, 1.0, 2.0], 4.0)):
        examples.append({"a": a, "c": c, **asdict(chen.lemma_check(a, c))})
    doc = {"trials": trials, "n": args.n, "seed": args.seed, "violations": violations,
           "min_gap": float(worst), "equality_cases": equalities,
           "equality_flag_mismatches": mismatches, "examples": examples}
    if args.format == "csv":
        text = "trials,violations,min_gap,equality_cases,equality_flag_mismatches\n" \
               f"{trials},{violations},{worst!r},{equalities},{mismatches}\n"
    else:
        text = _dump(doc)
    _emit(text, args.out)
    return EXIT_VIOLATION if violations or mismatches else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=None, help="number of sample points")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--tol-slack", type=float, default=None,
                        help=f"slack violation tolerance (default {tol.SLACK:g})")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="warpcurv",
                                     description="Curvature bounds for warped-product immersions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="slack report for a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extremal", parents=[common], help="inf/sup of ambient sectional curvature")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("catalog", parents=[common], help="golden records of catalog spaces")
    p.add_argument("which", choices=("clifford",))
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("lemma", parents=[common], help="randomized check of the algebraic lemma")
    p.add_argument("--n", type=int, default=None, help="vector length (default: random in 2..8)")
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_lemma)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 2:
        print("error: --n must be >= 2", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (ScenarioError, AmbientError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
