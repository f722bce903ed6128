"""Command-line front end: instance generation, solving, validation,
oracle runs, and a bench mode that sweeps seeds into a CSV.

Exit codes: 0 success, 1 malformed JSON, 2 validation failure,
3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .gap import StateBudgetError
from .model import (
    Container,
    Item,
    KnapsackInstance,
    Packing,
    SolverParams,
    dumps,
    instance_from_json,
    instance_to_json,
    packing_from_json,
    packing_to_json,
    validate_packing,
)
from .oracle import OracleBudget, OracleBudgetError, exact_gvks_small
from .solver import solve_gvks_detailed

EXIT_OK = 0
EXIT_BAD_JSON = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

PROFILES = ("uniform", "skewed-wide", "skewed-tall", "heavy-vector")

CSV_COLUMNS = ("seed", "n", "d", "rotations", "solver_profit", "oracle_profit",
               "ratio", "configs_explored", "ms")


@dataclass
class RunReport:
    """One solve, summarized; wall_ms is excluded from determinism checks."""

    n: int
    d: int
    rotations: bool
    solver_profit: float
    oracle_profit: float | None
    ratio: float | None
    wall_ms: float
    configs_explored: int
    truncated: bool
    params: dict

    def to_json(self) -> dict:
        return asdict(self)


def generate_instance(
    seed: int, n: int, d: int, profile: str, rotations: bool = False
) -> KnapsackInstance:
    """Deterministic random instance; same arguments, same instance.

    Profiles: "uniform" draws free dimensions; "skewed-wide" and
    "skewed-tall" force one side to more than twice the other;
    "heavy-vector" rescales weights so each dimension sums to about 2,
    making the vector constraint bind.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    rng = random.Random(f"{seed}:{n}:{d}:{profile}")
    items = []
    for idx in range(n):
        if profile == "skewed-wide":
            w = rng.uniform(0.3, 0.95)
            h = rng.uniform(0.02, 0.49 * w)
        elif profile == "skewed-tall":
            h = rng.uniform(0.3, 0.95)
            w = rng.uniform(0.02, 0.49 * h)
        else:
            w = rng.uniform(0.05, 0.95)
            h = rng.uniform(0.05, 0.95)
        profit = rng.uniform(0.1, 1.0)
        weights = [rng.uniform(0.0, 0.35) for _ in range(d)]
        items.append(Item(id=f"i{idx:03d}", width=w, height=h, profit=profit,
                          weights=tuple(weights)))
    if profile == "heavy-vector" and n > 0:
        for q in range(d):
            total = sum(it.weights[q] for it in items)
            scale = 2.0 / total if total > 0 else 0.0
            items = [
                Item(id=it.id, width=it.width, height=it.height, profit=it.profit,
                     weights=tuple(min(1.0, w * scale) if qq == q else w
                                   for qq, w in enumerate(it.weights)))
                for it in items
            ]
    return KnapsackInstance(items=tuple(items), d=d, rotations_allowed=rotations)


def packing_svg(
    instance: KnapsackInstance,
    packing: Packing,
    containers: tuple[Container, ...] | None = None,
    scale: float = 1000.0,
) -> str:
    """Render the unit knapsack at 1000x1000: container outlines, filled
    item rects, hatching on rotated items."""
    by_id = instance.item_map()

    def ybox(y: float, h: float) -> float:
        return scale - (y + h) * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {scale:g} {scale:g}">',
        '<defs><pattern id="hatch" width="12" height="12" '
        'patternUnits="userSpaceOnUse" patternTransform="rotate(45)">'
        '<line x1="0" y1="0" x2="0" y2="12" stroke="#333" stroke-width="3"/>'
        "</pattern></defs>",
        f'<rect x="0" y="0" width="{scale:g}" height="{scale:g}" '
        'fill="white" stroke="black" stroke-width="2"/>',
    ]
    for c in containers or ():
        lines.append(
            f'<rect x="{c.x * scale:.2f}" y="{ybox(c.y, c.height):.2f}" '
            f'width="{c.width * scale:.2f}" height="{c.height * scale:.2f}" '
            f'fill="none" stroke="#888" stroke-width="2" stroke-dasharray="8 6">'
            f"<title>{c.kind}</title></rect>"
        )
    for idx, pl in enumerate(packing.placements):
        it = by_id[pl.item_id]
        w, h = it.dims(pl.rotated)
        hue = (idx * 47) % 360
        lines.append(
            f'<rect x="{pl.x * scale:.2f}" y="{ybox(pl.y, h):.2f}" '
            f'width="{w * scale:.2f}" height="{h * scale:.2f}" '
            f'fill="hsl({hue},60%,72%)" stroke="#222" stroke-width="1.5">'
            f"<title>{pl.item_id}</title></rect>"
        )
        if pl.rotated:
            lines.append(
                f'<rect x="{pl.x * scale:.2f}" y="{ybox(pl.y, h):.2f}" '
                f'width="{w * scale:.2f}" height="{h * scale:.2f}" '
                'fill="url(#hatch)" fill-opacity="0.5" stroke="none"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines)


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_json_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise _CliFailure(EXIT_BAD_JSON, f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _CliFailure(
            EXIT_BAD_JSON,
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
        ) from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text + ("\n" if not text.endswith("\n") else ""))
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _params_from_args(args: argparse.Namespace) -> SolverParams:
    return SolverParams(
        eps=args.eps,
        c_max=args.c_max,
        sum_depth=args.sum_depth,
        config_budget=args.budget,
        x_max=args.x_max,
    )


def _solve_one(
    instance: KnapsackInstance, params: SolverParams, want_oracle: bool
) -> tuple[Packing, object, RunReport]:
    t0 = time.perf_counter()
    result = solve_gvks_detailed(instance, params)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    oracle_profit = None
    ratio = None
    if want_oracle:
        oracle_profit, _ = exact_gvks_small(instance, OracleBudget(max_items=8))
        if oracle_profit > 0:
            ratio = max(0.0, min(1.0, result.packing.packed_profit / oracle_profit))
        else:
            ratio = 1.0
    report = RunReport(
        n=len(instance.items), d=instance.d, rotations=instance.rotations_allowed,
        solver_profit=result.packing.packed_profit, oracle_profit=oracle_profit,
        ratio=ratio, wall_ms=wall_ms, configs_explored=result.configs_explored,
        truncated=result.truncated,
        params={"eps": params.eps, "eps_cont": params.eps_cont,
                "eps_prime": params.eps_prime, "c_max": params.c_max,
                "sum_depth": params.sum_depth, "config_budget": params.config_budget,
                "x_max": params.x_max},
    )
    return result.packing, result, report


def _cmd_generate(args: argparse.Namespace) -> int:
    instance = generate_instance(args.seed, args.n, args.d, args.profile,
                                 args.rotations)
    _write_text(args.out, dumps(instance_to_json(instance)))
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = instance_from_json(_load_json_file(args.instance))
    params = _params_from_args(args)
    packing, result, report = _solve_one(instance, params, args.oracle)
    bad = validate_packing(packing, instance)
    if args.out:
        _write_text(args.out, dumps(packing_to_json(packing)))
    if args.svg:
        _write_text(args.svg, packing_svg(instance, packing, result.best_config))
    payload = {"packing": packing_to_json(packing), "report": report.to_json()}
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    if bad:
        for v in bad:
            sys.stderr.write(f"invalid packing: {v}\n")
        return EXIT_INVALID
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    instance = instance_from_json(_load_json_file(args.instance))
    packing = packing_from_json(_load_json_file(args.packing))
    violations = validate_packing(packing, instance)
    for v in violations:
        sys.stdout.write(f"{v.kind}: {v.message}\n")
    return EXIT_INVALID if violations else EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    instance = instance_from_json(_load_json_file(args.instance))
    profit, packing = exact_gvks_small(
        instance, OracleBudget(max_items=args.max_items, timeout=args.timeout))
    payload = {"profit": profit, "packing": packing_to_json(packing)}
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _bench_row(payload: tuple) -> dict:
    seed, n, d, profile, rotations, params, want_oracle = payload
    instance = generate_instance(seed, n, d, profile, rotations)
    packing, result, report = _solve_one(instance, params, want_oracle)
    return {
        "seed": seed, "n": len(instance.items), "d": d, "rotations": rotations,
        "solver_profit": f"{packing.packed_profit:.9g}",
        "oracle_profit": "" if report.oracle_profit is None
                         else f"{report.oracle_profit:.9g}",
        "ratio": "" if report.ratio is None else f"{report.ratio:.6f}",
        "configs_explored": result.configs_explored,
        "ms": f"{report.wall_ms:.1f}",
    }


def _cmd_bench(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    jobs = [(seed, args.n, args.d, args.profile, args.rotations, params, args.oracle)
            for seed in range(args.seed, args.seed + args.runs)]
    workers = int(os.environ.get("GVKS_THREADS", "1"))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_row, jobs))
    else:
        rows = [_bench_row(job) for job in jobs]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    writer.writerows(rows)
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--c-max", dest="c_max", type=int, default=2)
    p.add_argument("--sum-depth", dest="sum_depth", type=int, default=2)
    p.add_argument("--budget", type=int, default=4000,
                   help="max container configurations to evaluate")
    p.add_argument("--x-max", dest="x_max", type=int, default=None,
                   help="cap on the enumerated big-item sets in the GAP PTAS")
    p.add_argument("--oracle", action="store_true",
                   help="also run the exact oracle and report the ratio")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gvks",
        description="2-D geometric knapsack with vector constraints",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a random instance as JSON")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--profile", choices=PROFILES, default="uniform")
    g.add_argument("--rotations", action="store_true")
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    _add_solver_flags(s)
    s.add_argument("--svg", default=None, help="write an SVG rendering here")
    s.add_argument("--out", default=None, help="write the packing JSON here")
    s.set_defaults(func=_cmd_solve)

    v = sub.add_parser("validate", help="validate a packing against an instance")
    v.add_argument("instance")
    v.add_argument("packing")
    v.set_defaults(func=_cmd_validate)

    o = sub.add_parser("oracle", help="exact optimum for a tiny instance")
    o.add_argument("instance")
    o.add_argument("--max-items", dest="max_items", type=int, default=8)
    o.add_argument("--timeout", type=float, default=None)
    o.set_defaults(func=_cmd_oracle)

    b = sub.add_parser("bench", help="sweep seeds and emit a ratio CSV")
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--runs", type=int, default=10, help="number of seeds")
    b.add_argument("--n", type=int, default=5)
    b.add_argument("--d", type=int, default=1)
    b.add_argument("--profile", choices=PROFILES, default="uniform")
    b.add_argument("--rotations", action="store_true")
    _add_solver_flags(b)
    b.add_argument("--out", default=None, help="CSV path (default stdout)")
    b.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (OracleBudgetError, StateBudgetError) as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return EXIT_BUDGET
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_JSON


if __name__ == "__main__":
    sys.exit(main())
