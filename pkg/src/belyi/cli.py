"""Command-line front end.

Subcommands: ``sample`` (graph JSON to stdout or a file), ``cheeger``
(division summary JSON), ``farey`` (subdivision counts and bounds),
``verify`` (invariant suites), and ``grid`` (Monte Carlo CSV runs).
Exit codes: 0 ok, 1 invariant failure, 2 usage or validation error,
3 no large cusp to cut.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import cheeger as cheeger_mod
from . import cusps, experiments, farey, ribbon

__all__ = ["main"]

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_EMPTY_I1 = 3


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _load_graph(source: str) -> ribbon.RibbonGraph:
    if source == "-":
        data = json.load(sys.stdin)
    else:
        with open(source) as fh:
            data = json.load(fh)
    return ribbon.RibbonGraph.from_json_dict(data)


def _cmd_sample(args) -> int:
    if args.n < 1:
        return _fail(f"--n must be >= 1, got {args.n}")
    if args.connected:
        g = ribbon.sample_connected(args.n, args.seed)
    else:
        g = ribbon.sample(args.n, args.seed)
    text = _dump_json(g.to_json_dict())
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    fd = ribbon.faces(g)
    print(
        f"lht={fd.lht} genus={fd.genus} connected={str(fd.connected).lower()} "
        f"degrees={sorted(fd.degrees)}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_cheeger(args) -> int:
    if args.y_factor <= 0:
        return _fail(f"--y-factor must be positive, got {args.y_factor}")
    seed = None
    if args.graph:
        try:
            g = _load_graph(args.graph)
        except (OSError, ValueError, KeyError) as exc:
            return _fail(f"cannot read graph: {exc}")
    else:
        if args.n is None or args.seed is None:
            return _fail("either --graph or both --n and --seed are required")
        if args.n < 1:
            return _fail(f"--n must be >= 1, got {args.n}")
        g = ribbon.sample(args.n, args.seed)
        seed = args.seed
    fd = ribbon.faces(g)
    try:
        division = cheeger_mod.cheeger_upper_bound(g, fd, g.n, args.y_factor)
    except cheeger_mod.EmptyI1 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_I1
    except (cheeger_mod.DisconnectedSurface, cusps.NTooSmall, ValueError) as exc:
        return _fail(str(exc))
    print(
        _dump_json(
            {
                "n": g.n,
                "seed": seed,
                "lht": fd.lht,
                "genus": fd.genus,
                "num_i1": division.num_i1,
                "boundary_segments": len(division.boundary_segments),
                "boundary_length": division.boundary_length,
                "area_a": division.area_a,
                "area_b": division.area_b,
                "h_upper": division.h_upper,
                "y_factor": args.y_factor,
            }
        )
    )
    return EXIT_OK


def _cmd_farey(args) -> int:
    if args.l <= 0:
        return _fail(f"--l must be positive, got {args.l}")
    try:
        out = {
            "l": args.l,
            "count_intersecting": farey.count_intersecting(args.l),
            "n_bound": farey.n_bound(args.l),
            "m_bound": farey.m_bound(args.l),
        }
        if args.level is not None:
            triangles = farey.enumerate_level(args.level)
            out["level"] = args.level
            out["triangles"] = [
                {
                    "left": _frac_str(t.left),
                    "apex": _frac_str(t.apex),
                    "right": _frac_str(t.right),
                }
                for t in triangles
            ]
    except farey.LevelCapExceeded as exc:
        return _fail(str(exc))
    print(_dump_json(out))
    return EXIT_OK


def _cmd_grid(args) -> int:
    try:
        n_values = [int(x) for x in args.n_list.split(",") if x]
    except ValueError:
        return _fail(f"cannot parse --n-list {args.n_list!r}")
    if not n_values or any(n < 3 for n in n_values):
        return _fail("--n-list needs integers >= 3")
    if args.trials < 1:
        return _fail(f"--trials must be >= 1, got {args.trials}")
    if args.y_factor <= 0:
        return _fail(f"--y-factor must be positive, got {args.y_factor}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = experiments.run_grid(
        n_values,
        args.trials,
        args.seed,
        y_factor=args.y_factor,
        out_path=out_dir / "trials.csv",
        s2_l=args.s2_l,
        workers=args.workers,
    )
    summary = []
    for n in n_values:
        stats = experiments.summarize(records, n, h_threshold=args.threshold)
        summary.append(
            {
                "n": stats.n,
                "trials": stats.trials,
                "usable": stats.usable,
                "excluded": stats.excluded,
                "mean_lht": stats.mean_lht,
                "var_lht": stats.var_lht,
                "h_threshold": stats.h_threshold,
                "fraction_h_below": stats.fraction_h_below,
            }
        )
    (out_dir / "summary.json").write_text(_dump_json(summary) + "\n")
    print(f"wrote {len(records)} rows to {out_dir / 'trials.csv'}")
    return EXIT_OK


def _check(ok: bool, message: str, failures: list[str]) -> None:
    if not ok:
        failures.append(message)


def _suite_identities(seeds: int, n: int, base_seed: int, y_factor: float) -> list[str]:
    failures: list[str] = []
    for k in range(seeds):
        seed = ribbon.derive_seed(base_seed, "identities", k)
        g = ribbon.sample(n, seed)
        fd = ribbon.faces(g)
        _check(fd.sum_degrees == 6 * n, f"seed {seed}: degree sum != 6n", failures)
        if fd.connected:
            _check(
                fd.genus is not None and 2 - 2 * fd.genus == fd.lht - n,
                f"seed {seed}: Euler identity fails",
                failures,
            )
        area = 2 * n * cusps.small_triangle_area() + fd.sum_degrees
        _check(
            math.isclose(area, cusps.surface_area(n), abs_tol=1e-9),
            f"seed {seed}: triangle + cusp area != total area",
            failures,
        )
        if not fd.connected:
            continue
        partition = cusps.partition_cusps(fd, n)
        _check(
            math.isclose(
                sum(fd.degrees[i] for i in partition.i1),
                6 * n - sum(fd.degrees[i] for i in partition.i2),
            ),
            f"seed {seed}: partition does not cover the degrees",
            failures,
        )
        # degree mass of large cusps, using the row's own lht as the cap
        c_row = fd.lht / math.log(n) if n >= 3 else None
        if c_row is not None:
            ok = cheeger_mod.sum_degrees_i1_bound_check(fd, partition, c_row + 1e-12, n)
            _check(ok, f"seed {seed}: large-cusp degree mass bound fails", failures)
        if not partition.i1:
            continue
        division = cheeger_mod.cheeger_upper_bound(g, fd, n, y_factor)
        _check(
            math.isclose(
                division.area_a + division.area_b, cusps.surface_area(n), abs_tol=1e-9
            ),
            f"seed {seed}: division areas do not conserve total area",
            failures,
        )
        _check(
            len(division.boundary_segments) <= 2 * n,
            f"seed {seed}: more than 2n boundary segments",
            failures,
        )
        if failures:
            break
    return failures


def _suite_farey() -> list[str]:
    failures: list[str] = []
    for m in range(1, 13):
        level = farey.enumerate_level(m)
        _check(len(level) == 2 ** (m - 1), f"level {m}: wrong size", failures)
        row = farey.vertex_row(m)
        gap = max(b - a for a, b in zip(row, row[1:]))
        _check(gap <= Fraction(1, m + 1), f"row {m}: gap bound fails", failures)
    for l in range(1, 31):
        _check(
            farey.count_intersecting(l) <= farey.n_bound(l),
            f"l={l}: count exceeds bound",
            failures,
        )
    _check(farey.n_bound(4) == 7, "n_bound(4) != 7", failures)
    _check(farey.m_bound(4) == 84, "m_bound(4) != 84", failures)
    return failures


def _suite_division(seeds: int, n: int, base_seed: int, y_factor: float) -> list[str]:
    failures: list[str] = []
    for k in range(seeds):
        seed = ribbon.derive_seed(base_seed, "division", k)
        g = ribbon.sample(n, seed)
        fd = ribbon.faces(g)
        if not fd.connected:
            continue
        partition = cusps.partition_cusps(fd, n)
        if not partition.i1:
            continue
        division = cheeger_mod.cheeger_upper_bound(g, fd, n, y_factor)
        _check(
            len(division.labels) == 2 * len(division.i1) + len(division.i2) + 2 * n,
            f"seed {seed}: label map does not cover the domains",
            failures,
        )
        per_triangle: dict[int, int] = {}
        for d in division.boundary_segments:
            per_triangle[d // 3] = per_triangle.get(d // 3, 0) + 1
        _check(
            all(v == 1 for v in per_triangle.values()),
            f"seed {seed}: a triangle contributes more than one boundary dart",
            failures,
        )
        _check(
            math.isclose(
                division.h_upper * min(division.area_a, division.area_b),
                division.boundary_length,
                rel_tol=1e-12,
            ),
            f"seed {seed}: quotient inconsistent with boundary length",
            failures,
        )
        eta_total = math.fsum(c.eta_length for c in division.cuts)
        _check(
            division.boundary_length <= 2 * n + eta_total + 1e-9,
            f"seed {seed}: boundary length exceeds 2n plus the cut curves",
            failures,
        )
        imbalance = abs(division.area_a - division.area_b)
        allowance = (
            2 * n * cusps.small_triangle_area()
            + len(division.i1)
            + sum(fd.degrees[i] for i in division.i2)
        )
        _check(
            imbalance <= allowance + 1e-9,
            f"seed {seed}: area imbalance beyond allowance",
            failures,
        )
        if failures:
            break
    return failures


def _cmd_verify(args) -> int:
    if args.seeds < 1:
        return _fail(f"--seeds must be >= 1, got {args.seeds}")
    if args.n < 3:
        return _fail(f"--n must be >= 3, got {args.n}")
    suites = ["identities", "farey", "division"] if args.suite == "all" else [args.suite]
    for name in suites:
        if name == "identities":
            failures = _suite_identities(args.seeds, args.n, args.seed, args.y_factor)
        elif name == "farey":
            failures = _suite_farey()
        else:
            failures = _suite_division(args.seeds, args.n, args.seed, args.y_factor)
        if failures:
            print(f"suite {name}: FAIL: {failures[0]}")
            return EXIT_INVARIANT
        print(f"suite {name}: ok")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belyi",
        description="Random oriented cubic graphs, their cusped surfaces, and "
        "certified Cheeger-constant upper bounds.",
        epilog="CSV schema: " + ",".join(experiments.CSV_COLUMNS),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a graph and print its JSON")
    p.add_argument("--n", type=int, required=True, help="size parameter (2n vertices)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--connected", action="store_true", help="reject disconnected samples")
    p.add_argument("--out", help="write the graph JSON to this file instead of stdout")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("cheeger", help="run the cut pipeline and print the division JSON")
    p.add_argument("--n", type=int, help="size parameter (with --seed)")
    p.add_argument("--seed", type=int, help="sampling seed (with --n)")
    p.add_argument("--graph", help="graph JSON file, or - for stdin")
    p.add_argument("--y-factor", type=float, default=1.0, help="cut height multiplier")
    p.set_defaults(func=_cmd_cheeger)

    p = sub.add_parser("farey", help="subdivision counts and bounds as JSON")
    p.add_argument("--l", type=float, required=True, help="strip depth parameter")
    p.add_argument("--level", type=int, help="also list the triangles of this level")
    p.set_defaults(func=_cmd_farey)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument(
        "--suite",
        choices=["identities", "farey", "division", "all"],
        default="all",
    )
    p.add_argument("--seeds", type=int, default=100, help="number of sampled surfaces")
    p.add_argument("--n", type=int, default=100, help="size parameter for samples")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--y-factor", type=float, default=1.0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("grid", help="Monte Carlo grid, CSV + JSON summary")
    p.add_argument("--n-list", required=True, help="comma-separated n values")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--y-factor", type=float, default=1.0)
    p.add_argument("--s2-l", type=float, default=None, help="also record |s2| at this l")
    p.add_argument("--threshold", type=float, default=2.0 / 3.0 + 0.05)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_grid)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
