"""``expansion-bounds`` command line.

Exit codes: 0 success or certified, 1 certification/verification failure,
2 invalid input (argparse errors included).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__
from .asymmetric import METHODS, certify_asymmetric
from .baseline import baseline, bollobas_bound
from .errors import ExpansionBoundsError, NoSignChange
from .pairing import (EXACT_MAX_N, ScoreOrder, configuration_vector, exact_expansion,
                      local_search_expansion, sample_pairing, write_edge_list)
from .symmetric import DEFAULT_TOL, VERIFIED_DELTAS, format4, nu_star, truncate4
from .verification import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DELTAS_ENV = "EXPANSION_BOUNDS_DELTAS"
TABLE_HEADER = ("delta", "bollobas", "amit_linial", "daneshgar", "ours")

# published values from earlier work; reproduced verbatim, never recomputed
LITERATURE = {
    4: ("0.4403", "0.4452"),
    6: ("1.0438", "1.0584"),
    8: ("1.7161", "1.7297"),
}


class InputError(Exception):
    pass


def _even_delta(text: str) -> int:
    try:
        delta = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"delta must be an integer, got {text!r}")
    if delta < 4 or delta % 2:
        raise argparse.ArgumentTypeError(f"delta must be an even integer >= 4, got {delta}")
    return delta


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False))


# ---------------------------------------------------------------------------
# subcommands


def cmd_nu_star(args) -> int:
    value = nu_star(args.delta, args.tol)
    verified = args.delta in VERIFIED_DELTAS
    if args.json:
        _emit_json({"delta": args.delta, "nu_star": value, "nu_star_truncated": truncate4(value),
                    "tol": args.tol, "verified": verified})
    else:
        print(format4(value) + ("" if verified else "  (unverified degree)"))
    return EXIT_OK


def cmd_baseline(args) -> int:
    result = baseline(args.delta)
    if args.json:
        _emit_json(asdict(result))
    else:
        print(f"{result.nu_lower:.4f}")
    return EXIT_OK


def build_report(args) -> dict:
    started = time.perf_counter()
    star = nu_star(args.delta)
    nu = args.nu if args.nu is not None else star - args.margin
    nu_lower = args.nu_lower if args.nu_lower is not None else bollobas_bound(args.delta)
    cert = certify_asymmetric(args.delta, nu, grid_m=args.grid, alpha_floor=args.alpha_floor,
                              nu_lower=nu_lower, method=args.method, workers=args.threads)
    return {
        "delta": args.delta,
        "nu_star": star,
        "baseline": asdict(baseline(args.delta)),
        "certificate": cert.to_dict(),
        "tolerances": {"nu_star_bisection": DEFAULT_TOL, "margin": args.margin},
        "runtime_ms": int(round(1000 * (time.perf_counter() - started))),
        "tool_version": __version__,
        "seed": None,
    }


def cmd_certify(args) -> int:
    if args.margin < 0:
        raise InputError("--margin must be non-negative")
    report = build_report(args)
    cert = report["certificate"]
    if args.json:
        _emit_json(report)
    else:
        upper = cert["f_star_upper"]
        print(f"delta={cert['delta']} nu={cert['nu']:.6f} grid={cert['grid_m']} method={cert['method']}")
        print(f"f_star_upper={upper if upper is None else f'{upper:.6f}'}  "
              f"(corner {cert['corner_f_star_upper']}, tangent {cert['tangent_f_star_upper']})")
        if cert["worst_cell"]:
            w = cert["worst_cell"]
            print(f"worst cell: alpha in [{w['alpha_lo']:.4f}, {w['alpha_hi']:.4f}], "
                  f"gamma in [{w['gamma_lo']:.5f}, {w['gamma_hi']:.5f}]")
        if cert["cell_errors"]:
            print(f"{cert['cell_errors']} cells could not be bounded "
                  "(gamma range breaks G's monotonicity or a solve left its domain)")
        print("certified: f* < 0" if cert["negative"] else "NOT certified")
    return EXIT_OK if cert["negative"] else EXIT_FAIL


def table_deltas() -> list:
    raw = os.environ.get(DELTAS_ENV, "").strip()
    if not raw:
        return list(VERIFIED_DELTAS)
    try:
        deltas = [_even_delta(tok.strip()) for tok in raw.split(",") if tok.strip()]
    except (argparse.ArgumentTypeError, ValueError) as exc:
        raise InputError(f"{DELTAS_ENV}: {exc}")
    if not deltas:
        raise InputError(f"{DELTAS_ENV} lists no degrees")
    return deltas


def table_rows() -> list:
    rows = []
    for delta in table_deltas():
        lit = LITERATURE.get(delta, ("", ""))
        rows.append((str(delta), format4(bollobas_bound(delta)), lit[0], lit[1],
                     format4(nu_star(delta))))
    return rows


def cmd_table(args) -> int:
    rows = table_rows()
    if args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        writer.writerows(rows)
        return EXIT_OK
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(TABLE_HEADER)]
    for line in [TABLE_HEADER] + rows:
        print("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
    print("\namit_linial and daneshgar: published values from earlier work, quoted as-is.\n"
          "bollobas and ours: computed here, truncated to 4 decimals.")
    return EXIT_OK


def _local_search(graph, seed, restarts):
    rng = np.random.default_rng(seed)
    order = ScoreOrder.random(graph.n, rng)
    best = None
    for _ in range(restarts):
        start = rng.choice(graph.n, size=graph.n // 2, replace=False).tolist()
        found = local_search_expansion(graph, order, start)
        if best is None or found[0] < best[0]:
            best = found
    return best


def cmd_sample(args) -> int:
    if args.n < 2 or args.n % 2:
        raise InputError(f"n must be a positive even integer, got {args.n}")
    if not args.local_search and args.n > EXACT_MAX_N:
        raise InputError(f"--exact needs n <= {EXACT_MAX_N}; use --local-search")
    graph = sample_pairing(args.n, args.delta, args.seed)
    if args.local_search:
        method = "local_search"
        iota, witness = _local_search(graph, args.seed, args.restarts)
    else:
        method = "exact"
        iota, witness = exact_expansion(graph)
    cv = configuration_vector(graph, witness)
    if args.emit:
        write_edge_list(graph, args.emit)
    payload = {
        "n": args.n, "delta": args.delta, "seed": args.seed, "method": method,
        "iota": iota, "witness": list(witness),
        "configuration_vector": {"k": cv.k, "c": cv.c, "s": list(cv.s), "s_bar": list(cv.s_bar)},
        "emitted": args.emit,
    }
    if args.json:
        _emit_json(payload)
    else:
        print(f"iota={iota:.6f} ({method})")
        print(f"witness={list(witness)}")
        print(f"k={cv.k} c={cv.c} s={list(cv.s)} s_bar={list(cv.s_bar)}")
        if args.emit:
            print(f"edge list written to {args.emit}")
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.trials, args.seed)
    for check in checks:
        print(check.line())
    failed = sum(not c.passed for c in checks)
    print(f"{args.suite}: {len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expansion-bounds",
                                     description="Expansion lower bounds for random regular graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nu-star", help="balanced-cut bound nu* for one degree")
    p.add_argument("--delta", type=_even_delta, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_nu_star)

    p = sub.add_parser("baseline", help="Bollobas baseline bound")
    p.add_argument("--delta", type=_even_delta, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("certify", help="grid certificate that the unbalanced exponent is negative")
    p.add_argument("--delta", type=_even_delta, required=True)
    p.add_argument("--nu", type=float, default=None, help="defaults to nu* - margin")
    p.add_argument("--margin", type=float, default=0.0)
    p.add_argument("--grid", type=_positive_int, default=200)
    p.add_argument("--method", choices=METHODS, default="tangent")
    p.add_argument("--alpha-floor", type=float, default=0.1)
    p.add_argument("--nu-lower", type=float, default=None)
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("table", help="comparison table of lower bounds")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sample", help="sample a pairing-model graph and measure its expansion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=_even_delta, required=True)
    p.add_argument("--seed", type=int, default=0)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="full subset enumeration (default)")
    mode.add_argument("--local-search", action="store_true")
    p.add_argument("--restarts", type=_positive_int, default=8)
    p.add_argument("--emit", metavar="PATH", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--trials", type=_positive_int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoSignChange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, ExpansionBoundsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
