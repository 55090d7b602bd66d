"""Command-line front end: design / topology / simulate / compare.

Exit codes: 0 success, 1 validation or verification failure, 2 usage error.
All randomness flows from --seed; identical flags and seed give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, designs, engine, topology


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_doc(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_design(args) -> int:
    design = designs.construct_mcrd(args.m, args.b, args.mu)
    report = designs.verify_mcrd(design)
    doc = {
        "design": design.to_json_dict(),
        "verification": {
            "passed": report.passed,
            "classes_partition": list(report.classes_partition),
            "block_size_ok": report.block_size_ok,
            "block_size": report.block_size,
            "intersection_sizes": list(report.intersection_sizes),
            "measured_mu": report.measured_mu,
        },
    }
    _emit(_json_doc(doc), args.out)
    return 0 if report.passed else 1


def _load_topology(args) -> topology.Topology:
    src = args.topology if hasattr(args, "topology") else args.source
    if src == "canonical":
        return topology.canonical_topology(args.m, args.b, args.z)
    if src == "random":
        return topology.random_topology(args.m, args.b, args.z, seed=args.seed)
    doc = json.loads(Path(src).read_text(encoding="utf-8"))
    if "topology" in doc:  # accept the `macc topology --out` document as-is
        doc = doc["topology"]
    if not {"m", "b", "z", "access"} <= set(doc):
        raise ValueError(f"{src} is not a topology JSON (need m, b, z, access)")
    top = topology.Topology.from_json_dict(doc)
    if (top.m, top.b, top.z) != (args.m, args.b, args.z):
        raise ValueError("topology file shape does not match --m/--b/--z")
    return top


def cmd_topology(args) -> int:
    top = _load_topology(args)
    report = topology.validate(top)
    doc = {
        "topology": top.to_json_dict(),
        "validation": {
            "passed": report.passed,
            "c1_ok": report.c1_ok,
            "c2_ok": report.c2_ok,
            "c2_at_most_ok": report.c2_at_most_ok,
            "c3_ok": report.c3_ok,
            "violations": list(report.violations),
            "warnings": list(report.warnings),
        },
    }
    _emit(_json_doc(doc), args.out)
    return 0 if report.passed else 1


def cmd_simulate(args) -> int:
    n_files = args.files if args.files is not None else args.m * args.b
    params = engine.SchemeParams(m=args.m, b=args.b, z=args.z, t=args.t, n_files=n_files)
    design = designs.construct_mcrd(args.m, args.b, 1)
    top = _load_topology(args)

    demands = None
    if args.demands:
        demands = json.loads(Path(args.demands).read_text(encoding="utf-8"))

    report = engine.simulate(
        design,
        top,
        params,
        demands=demands,
        payload_size=args.payload,
        seed=args.seed,
        placement_seed=args.seed if args.placement == "seeded" else None,
        keep_transmissions=True,
    )

    if args.log:
        lines = [
            json.dumps(tx.to_json_dict(), sort_keys=True)
            for tx in report.transmissions
        ]
        Path(args.log).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    if args.report:
        Path(args.report).write_text(_json_doc(report.to_json_dict()), encoding="utf-8")

    gains = report.beneficiary_counts
    sys.stdout.write(
        f"transmissions={report.transmission_count}\n"
        f"rate={report.rate.numerator}/{report.rate.denominator}\n"
        f"subpacketization={report.subpacketization}\n"
        f"decoded={sum(report.users_complete)}/{len(report.users_complete)}\n"
        f"coding_gain_min={min(gains) if gains else 0}\n"
        f"coding_gain_max={max(gains) if gains else 0}\n"
        f"byte_oracle={'skipped' if report.byte_oracle_ok is None else ('ok' if report.byte_oracle_ok else 'FAIL')}\n"
    )
    ok = report.all_complete() and report.byte_oracle_ok is not False
    return 0 if ok else 1


def _parse_grid(text: str | None, k: int, z: int) -> list[Fraction]:
    if text is None:
        return [Fraction(t, k) for t in range(0, -(-k // z) + 1)]
    text = text.strip()
    if not text:
        return []
    return [Fraction(part.strip()) for part in text.split(",")]


def cmd_compare(args) -> int:
    grid = _parse_grid(args.grid, args.K, args.z)
    rows = analysis.comparison_table(args.K, args.z, grid)
    _emit(analysis.rows_to_csv(rows), args.out)
    if args.json:
        Path(args.json).write_text(analysis.rows_to_json(rows) + "\n", encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macc",
        description="Multi-access coded caching: designs, topologies, simulation, comparisons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="construct and verify a block design")
    p.add_argument("--m", type=int, required=True, help="parallel classes / groups")
    p.add_argument("--b", type=int, required=True, help="blocks per class")
    p.add_argument("--mu", type=int, default=1, help="cross intersection size")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("topology", help="generate or check a user-to-cache graph")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--z", type=int, required=True, help="caches per user")
    p.add_argument("--source", default="canonical",
                   help="canonical | random | path to topology JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_topology)

    p = sub.add_parser("simulate", help="run placement, delivery, and decode checks")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--t", type=int, required=True, help="memory units (M = tN/b)")
    p.add_argument("--files", type=int, help="library size N (default: one per user)")
    p.add_argument("--topology", default="canonical",
                   help="canonical | random | path to topology JSON")
    p.add_argument("--demands", help="JSON file with one file index per user")
    p.add_argument("--payload", type=int, nargs="?", const=engine.DEFAULT_PAYLOAD_SIZE,
                   help="attach XOR payloads of this many bytes and run the byte oracle")
    p.add_argument("--placement", choices=("deterministic", "seeded"),
                   default="deterministic", help="extra-block selection mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log", help="write transmissions as JSON lines here")
    p.add_argument("--report", help="write the simulation report JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="emit rate/subpacketization comparison data")
    p.add_argument("--K", type=int, required=True, help="number of users and caches")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--grid", help="comma-separated memory fractions (default: t/K grid)")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--json", help="also write exact-rational JSON here")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, designs.PointBudgetError,
            topology.MatchingError, topology.GenerationError,
            engine.UnsupportedDesignError, analysis.ApplicabilityError,
            OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
