"""Command line front end.

Results go to stdout as JSON (default) or CSV, diagnostics to stderr. Exit
status is 0 on success, 1 on a domain error and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import chain_complex, disks, induction, novikov, volume
from .errors import FloerError
from .gf2linalg import resolve_threads
from .signvec import parse_point


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _degrees(text: str) -> list[int]:
    try:
        degs = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"degrees must be comma-separated integers: {text!r}") from None
    if len(degs) < 2 or any(d < 0 for d in degs):
        raise argparse.ArgumentTypeError("need at least two non-negative degrees d0,d1,...")
    return degs


def _emit(result, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(result, separators=(",", ":")) + "\n")
        return
    rows = result if isinstance(result, list) else [result]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0].keys()) if rows else []
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            json.dumps(row[h]) if isinstance(row[h], (dict, list)) else _csv_cell(row[h])
            for h in header
        )
    out.write(buf.getvalue())


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_homology(args):
    return chain_complex.homology(args.k, threads=args.threads)


def cmd_obstruction(args):
    rep = chain_complex.obstruction(args.k)
    if not rep.square_matches:
        raise FloerError(f"k={args.k}: d∘d does not match the disk count parity")
    return {"k": rep.k, "phi_total": rep.phi_total, "square_zero": rep.square_is_zero}


def cmd_boundary(args):
    m = chain_complex.boundary_matrix(args.k)
    r = m.rank(threads=args.threads)
    out = {"k": args.k, "rows": m.rows, "cols": m.cols, "rank": r}
    if args.dump_matrix:
        m.dump(args.dump_matrix)
        out["dump"] = args.dump_matrix
    return out


def cmd_recursion(args):
    return induction.recursion_check(args.n, threads=args.threads).to_json()


def cmd_novikov(args):
    out = novikov.novikov_report(args.k, precision=args.precision)
    if args.dump_matrix:
        m = novikov.novikov_boundary_matrix(args.k)
        with open(args.dump_matrix, "w") as fh:
            json.dump({"k": args.k, "entries": m.triples()}, fh, separators=(",", ":"))
        out["dump"] = args.dump_matrix
    return out


def cmd_disks_strips(args):
    p = parse_point(args.point, args.k)
    rows = []
    for i, d in enumerate(disks.isolated_strips(p)):
        start, end = disks.strip_endpoints(d)
        rows.append(
            {
                "index": i,
                "start": start.mask,
                "end": end.mask,
                "end_signs": end.to_string(),
                "maslov_disk": d.maslov,
                "maslov_strip": d.maslov // 2,
                "phases": list(d.phases),
            }
        )
    if args.format == "csv":
        return rows
    return {"k": args.k, "point": p.mask, "point_signs": p.to_string(), "strips": rows}


def cmd_disks_winding(args):
    rng = np.random.default_rng(args.seed)
    d = disks.random_disk(args.degrees, rng)
    w = disks.winding_maslov(d, samples=args.samples)
    return {
        "degrees": args.degrees,
        "seed": args.seed,
        "samples": args.samples,
        "winding_maslov": w,
        "expected": d.maslov,
        "match": w == d.maslov,
    }


def cmd_disks_energy(args):
    d = disks.degree_disk(args.k, args.degree)
    e = disks.energy(d, args.region, args.grid)
    out = {
        "k": args.k,
        "degree": args.degree,
        "region": args.region,
        "grid": args.grid,
        "energy": e,
    }
    if args.degree:
        # strip Maslov index is the degree on the upper half, twice it on the disk
        idx = args.degree if args.region == "upper" else 2 * args.degree
        out["c"] = e / idx
    return out


def cmd_volume(args):
    rows = [r.to_json() for r in volume.comparison_table(args.n_max)]
    if args.format == "csv":
        return [{key: r[key] for key in ("n", "ratio", "bound", "active")} for r in rows]
    return rows


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--threads", type=_positive, default=None,
        help="worker threads for elimination (default: $FLOER_THREADS or 1)",
    )

    parser = argparse.ArgumentParser(
        prog="cliffordfloer",
        description="Floer homology of (RP^k, T^k) at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="dim HF over Z/2 (odd k)")
    p.add_argument("--k", type=_positive, required=True)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("obstruction", parents=[common], help="disk-bubbling parity and d∘d")
    p.add_argument("--k", type=_positive, required=True)
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("boundary", parents=[common], help="boundary matrix, optional dump")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--dump-matrix", metavar="PATH")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("recursion", parents=[common], help="dimension recursion n -> n+1")
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_recursion)

    p = sub.add_parser("novikov", parents=[common], help="homology over the Novikov field")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--precision", type=_positive, default=4)
    p.add_argument("--dump-matrix", metavar="PATH", help="write (row, col, scalar) triples as JSON")
    p.set_defaults(func=cmd_novikov)

    dp = sub.add_parser("disks", help="Blaschke disks and strips")
    dsub = dp.add_subparsers(dest="disks_command", required=True)

    p = dsub.add_parser("strips", parents=[common], help="isolated strips from a point")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--point", default="0", help="mask (decimal or 0b...) or +/- string")
    p.set_defaults(func=cmd_disks_strips)

    p = dsub.add_parser("winding", parents=[common], help="Maslov index of a random disk by winding")
    p.add_argument("--degrees", type=_degrees, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=_positive, default=4096)
    p.set_defaults(func=cmd_disks_winding)

    p = dsub.add_parser("energy", parents=[common], help="symplectic area of a degree-D disk")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--region", choices=("upper", "full"), default="full")
    p.add_argument("--grid", type=_positive, default=64)
    p.set_defaults(func=cmd_disks_energy)

    p = sub.add_parser("volume", parents=[common], help="volume ratios and intersection bound")
    p.add_argument("--n-max", type=_positive, required=True)
    p.set_defaults(func=cmd_volume)

    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.threads = resolve_threads(args.threads)
    except ValueError:
        stderr.write("error: FLOER_THREADS must be a positive integer\n")
        return 2
    try:
        result = args.func(args)
    except (FloerError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    _emit(result, args.format, stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
