"""Command-line front end.

Exit codes: 0 ok, 2 malformed input or bad flags, 3 validation failure,
4 internal consistency failure, 5 size limit.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import random
import sys
from dataclasses import dataclass

from . import io
from .bounds import revenue_bounds
from .core import Ordering, smith_order, total_weighted_waiting, waiting_costs
from .dynamics import PLACEMENTS, run_dynamics
from .equilibrium import is_nash, window_check
from .errors import FormatError, SizeLimitExceeded, ValidationError
from .mechanisms import BidProfile, MechanismKind, run_mechanism
from .numeric import format_number
from .oracle import enumerate_equilibria

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_CONSISTENCY, EXIT_SIZE = 0, 2, 3, 4, 5


class ConsistencyError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: tuple
    mechanism: MechanismKind | None = None
    tolerance: float | None = None
    mode: str = "auto"
    seed: int | None = None
    output: str = "json"
    ordering: tuple | None = None  # explicit queue order (ids), for bid ties

    def __post_init__(self):
        if self.tolerance is not None and self.tolerance < 0:
            raise ValidationError("tolerance must be >= 0")

    @property
    def exact(self):
        return {"auto": None, "exact": True, "float": False}[self.mode]


@dataclass
class Report:
    payload: dict
    rows: list | None = None
    text: str | None = None  # preformatted output (JSON lines), used as-is


def _load(cfg: RunConfig):
    return io.load_instance(cfg.inputs[0], exact=cfg.exact)


def cmd_order(cfg: RunConfig) -> Report:
    inst = _load(cfg)
    order = smith_order(inst)
    costs = waiting_costs(inst, order)
    rows = [
        {
            "position": pos,
            "participant": inst.ids[p],
            "t": format_number(inst.t[p]),
            "w": format_number(inst.w[p]),
            "v": format_number(inst.v[p]),
            "waiting_cost": format_number(costs[p]),
        }
        for pos, p in enumerate(order.sigma, start=1)
    ]
    total = total_weighted_waiting(inst, order)
    payload = {"ordering": order.labels(inst), "positions": rows, "total": format_number(total)}
    return Report(payload, rows)


def _profile(cfg: RunConfig, inst):
    return io.load_profile(cfg.inputs[1], inst, cfg.mechanism)


def _ordering(cfg: RunConfig, inst):
    return Ordering.from_ids(inst, cfg.ordering) if cfg.ordering else None


def cmd_run(cfg: RunConfig) -> Report:
    inst = _load(cfg)
    profile = _profile(cfg, inst)
    out = run_mechanism(inst, profile, _ordering(cfg, inst))
    payload = {"mechanism": profile.kind.value, **out.as_dict(inst)}
    return Report(payload, payload["positions"])


def cmd_verify(cfg: RunConfig, method: str = "both") -> Report:
    inst = _load(cfg)
    profile = _profile(cfg, inst)
    order = _ordering(cfg, inst)
    payload = {"mechanism": profile.kind.value, "method": method}
    verdicts = []
    rows = []
    if method in ("deviation", "both"):
        dev = is_nash(inst, profile, tolerance=cfg.tolerance, ordering=order)
        payload["deviation"] = dev.as_dict(inst)
        verdicts.append(dev.equilibrium)
        rows += [{"check": "deviation", **v} for v in payload["deviation"]["violations"]]
    if method in ("window", "both"):
        win = window_check(inst, profile, ordering=order)
        payload["window"] = win.as_dict()
        verdicts.append(win.satisfied)
        rows += [{"check": "window", **c} for c in payload["window"]["failed_constraints"]]
    payload["equilibrium"] = verdicts[0]
    if method == "both":
        payload["agree"] = verdicts[0] == verdicts[1]
        if not payload["agree"]:
            raise ConsistencyError(json.dumps(payload))
    return Report(payload, rows)


def cmd_bounds(cfg: RunConfig) -> Report:
    inst = _load(cfg)
    rb = revenue_bounds(inst, cfg.mechanism or MechanismKind.VCG)
    return Report(rb.as_dict(inst))


def cmd_oracle(cfg: RunConfig, grid: int = 1, dump: str | None = None) -> Report:
    inst = _load(cfg)
    eq = enumerate_equilibria(inst, cfg.mechanism or MechanismKind.VCG, grid_refinement=grid)
    lo, hi = eq.min_entry(), eq.max_entry()
    if dump:
        with open(dump, "w") as fh:
            fh.write(eq.jsonl(inst))
    payload = {
        **eq.search_meta,
        "min_revenue": format_number(lo.revenue),
        "max_revenue": format_number(hi.revenue),
        "witness_min": lo.as_dict(inst),
        "witness_max": hi.as_dict(inst),
    }
    rows = [
        {"ordering": " ".join(e.ordering.labels(inst)), "revenue": format_number(e.revenue)}
        for e in eq.entries
    ]
    return Report(payload, rows)


def cmd_dynamics(cfg: RunConfig, start: str = "truthful", max_steps: int = 1000,
                 rotation: str = "round-robin", placement: str = "midpoint") -> Report:
    inst = _load(cfg)
    kind = cfg.mechanism or MechanismKind.VCG
    if len(cfg.inputs) > 1 and cfg.inputs[1]:
        profile = io.load_profile(cfg.inputs[1], inst, kind)
    elif start == "truthful":
        profile = BidProfile(kind, inst.v)
    else:
        profile = BidProfile(kind, tuple(0 * x for x in inst.v))
    trace = run_dynamics(inst, profile, max_steps, rotation, cfg.seed, placement=placement)
    payload = trace.summary(inst)
    return Report(payload, text=trace.jsonl(inst))


def cmd_gen(cfg: RunConfig, n: int, dist: str = "uniform", exact: bool = False,
            distinct: bool = False, path: str | None = None) -> Report:
    if cfg.seed is None:
        raise ValidationError("gen needs --seed")
    inst = io.random_instance(n, random.Random(cfg.seed), dist, exact, distinct)
    payload = io.instance_to_dict(inst)
    if path:
        with open(path, "w") as fh:
            fh.write(io.dumps(payload))
    return Report(payload, payload["participants"])


def _flatten(d: dict) -> list[dict]:
    return [{"key": k, "value": json.dumps(v) if isinstance(v, (dict, list)) else v} for k, v in d.items()]


def render(report: Report, fmt: str) -> str:
    if report.text is not None and fmt == "json":
        return report.text
    if fmt == "json":
        return io.dumps(report.payload)
    rows = report.rows if report.rows is not None else _flatten(report.payload)
    if fmt == "csv":
        buf = _stdio.StringIO()
        fields = list(dict.fromkeys(k for r in rows for k in r)) or ["key", "value"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    # table
    lines = []
    if rows:
        fields = list(dict.fromkeys(k for r in rows for k in r))
        cells = [[str(r.get(f, "")) for f in fields] for r in rows]
        widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
        lines.append("  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    if report.rows is not None:
        for k, v in report.payload.items():
            if not isinstance(v, (dict, list)):
                lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="queuetion", description="Position auctions for queues.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--mode", choices=["auto", "exact", "float"], default="auto",
                        help="arithmetic mode (auto: exact unless the input has float literals)")
    mech = argparse.ArgumentParser(add_help=False)
    mech.add_argument("--mechanism", choices=["vcg", "gsp"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", parents=[common], help="efficient order and waiting costs")
    p.add_argument("instance")

    p = sub.add_parser("run", parents=[common, mech], help="run a mechanism on a bid file")
    p.add_argument("instance")
    p.add_argument("bids")
    p.add_argument("--ordering", help="comma-separated ids; breaks exact bid ties")

    p = sub.add_parser("verify", parents=[common, mech], help="check a bid profile for equilibrium")
    p.add_argument("instance")
    p.add_argument("bids")
    p.add_argument("--method", choices=["window", "deviation", "both"], default="both")
    p.add_argument("--ordering", help="comma-separated ids; breaks exact bid ties")
    p.add_argument("--tolerance", type=float, help="absolute tolerance on deviation gains")

    p = sub.add_parser("bounds", parents=[common, mech], help="organizer revenue bounds")
    p.add_argument("instance")

    p = sub.add_parser("oracle", parents=[common, mech], help="brute-force equilibrium enumeration")
    p.add_argument("instance")
    p.add_argument("--grid", type=int, default=1, help="grid refinement level (>= 1)")
    p.add_argument("--dump", help="write every equilibrium found as JSON lines")

    p = sub.add_parser("dynamics", parents=[common, mech], help="best-response dynamics")
    p.add_argument("instance")
    p.add_argument("bids", nargs="?")
    p.add_argument("--start", choices=["truthful", "zero"], default="truthful")
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--rotation", choices=["round-robin", "random"], default="round-robin")
    p.add_argument("--placement", choices=list(PLACEMENTS), default="midpoint")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dist", choices=["uniform", "lognormal"], default="uniform")
    p.add_argument("--exact", action="store_true", help="rational parameters")
    p.add_argument("--distinct", action="store_true", help="pairwise distinct value rates")
    p.add_argument("-o", "--output", help="write the instance here instead of stdout")
    return parser


def _dispatch(args) -> Report:
    inputs = tuple(x for x in (getattr(args, "instance", None), getattr(args, "bids", None)))
    cfg = RunConfig(
        command=args.command,
        inputs=inputs,
        mechanism=MechanismKind.parse(args.mechanism) if getattr(args, "mechanism", None) else None,
        tolerance=getattr(args, "tolerance", None),
        mode=args.mode,
        seed=getattr(args, "seed", None),
        output=args.format,
        ordering=tuple(args.ordering.split(",")) if getattr(args, "ordering", None) else None,
    )
    if args.command == "order":
        return cmd_order(cfg)
    if args.command == "run":
        return cmd_run(cfg)
    if args.command == "verify":
        return cmd_verify(cfg, args.method)
    if args.command == "bounds":
        return cmd_bounds(cfg)
    if args.command == "oracle":
        if args.grid < 1:
            raise FormatError("--grid must be >= 1")
        return cmd_oracle(cfg, args.grid, args.dump)
    if args.command == "dynamics":
        if args.max_steps < 1:
            raise FormatError("--max-steps must be >= 1")
        return cmd_dynamics(cfg, args.start, args.max_steps, args.rotation, args.placement)
    if args.n < 1:
        raise FormatError("--n must be >= 1")
    return cmd_gen(cfg, args.n, args.dist, args.exact, args.distinct, args.output)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = _dispatch(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsistencyError as exc:
        print(f"error: window and deviation checks disagree: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except SizeLimitExceeded as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SIZE
    if args.command == "gen" and args.output:
        return EXIT_OK
    sys.stdout.write(render(report, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
