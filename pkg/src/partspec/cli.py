"""Command-line entry point.

Subcommands map one-to-one onto the library: `subrings`, `spec`,
`partspec`, `morphisms`, `check-ideal`, `ks-check`, `ks-lift` and
`verify-paper`.  Reports are JSON with a fixed schema and sorted keys so
that identical configurations produce byte-identical output; wall-clock
timings live in a separate `timing` field outside that guarantee, and the
text format is rendered from the JSON payload rather than computed
separately.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exhausted.  Emptiness claims (an empty partial spectrum, an UNSAT
coloring) are only ever printed when the underlying search ran to
completion; a truncated search exits 3 instead.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .budget import Budget, BudgetExhaustedError
from .commlattice import (
    CacheCorruptError,
    CacheMissError,
    CommLattice,
    cache_load,
    cache_store,
    enumerate_commutative_subrings,
    maximal_subrings,
)
from .finring import (
    AxiomError,
    CapExceededError,
    RingTable,
    check_ring_axioms,
    make_gf,
    make_matrix_ring,
    make_product,
    make_triangular_ring,
    make_zmod,
)
from .ks import (
    RayFormatError,
    bundled_peres_path,
    ks_colorable,
    lift_to_dimension,
    load_rays,
)
from .obstruction import build_report, render_report_text
from .partial import (
    is_partial_ideal,
    is_prime_partial_ideal,
    partial_ideal,
    standard_structure,
)
from .primespec import enumerate_partial_morphisms, part_spec, spec

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    ring_path: str | None = None
    field_path: str | None = None
    rays_path: str | None = None
    members: str | None = None
    prime: bool = False
    dimension: int = 4
    cache_dir: str | None = None
    node_budget: int = 10_000_000
    time_budget: float = 60.0
    output_format: str = "text"
    jobs: int = 1
    verbose: bool = False


# --------------------------------------------------------------------------
# ring-definition files


def parse_ring_definition(path: str | Path) -> RingTable:
    """Build a ring from a JSON definition file.

    Types: zmod, gf, matrix, product, triangular, tables.  Explicit
    "tables" definitions are validated exhaustively and rejected with a
    witness triple on any axiom failure.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"ring definition not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"ring definition {path} is not valid JSON: {exc}") from None
    return _ring_from_spec(data, where=str(path))


def _ring_from_spec(data, where: str) -> RingTable:
    if not isinstance(data, dict) or "type" not in data:
        raise UsageError(f"{where}: ring definition must be an object with a 'type'")
    kind = data["type"]
    try:
        if kind == "zmod":
            return make_zmod(int(data["m"]))
        if kind == "gf":
            return make_gf(int(data["p"]), int(data["k"]))
        if kind == "matrix":
            base = _ring_from_spec(data["base"], where=f"{where}.base")
            return make_matrix_ring(base, int(data["n"]))
        if kind == "product":
            a = _ring_from_spec(data["a"], where=f"{where}.a")
            b = _ring_from_spec(data["b"], where=f"{where}.b")
            return make_product(a, b)
        if kind == "triangular":
            base = _ring_from_spec(data["base"], where=f"{where}.base")
            return make_triangular_ring(base, int(data["n"]))
        if kind == "tables":
            return _ring_from_tables(data, where)
    except KeyError as exc:
        raise UsageError(f"{where}: missing field {exc}") from None
    except (ValueError, CapExceededError) as exc:
        raise UsageError(f"{where}: {exc}") from None
    raise UsageError(f"{where}: unknown ring type {kind!r}")


def _ring_from_tables(data: dict, where: str) -> RingTable:
    add = np.array(data["add"], dtype=np.int64)
    mul = np.array(data["mul"], dtype=np.int64)
    size = len(add)
    if "neg" in data:
        neg = np.array(data["neg"], dtype=np.int64)
    else:
        neg = np.full(size, -1, dtype=np.int64)
        for a in range(size):
            hits = np.nonzero(add[a] == int(data.get("zero", _find_zero(add))))[0]
            if hits.size == 0:
                raise UsageError(f"{where}: element {a} has no additive inverse")
            neg[a] = hits[0]
    zero = int(data.get("zero", _find_zero(add)))
    one = int(data.get("one", _find_one(mul)))
    ring = RingTable(size, add, mul, neg, zero, one, data.get("label", f"tables[{size}]"))
    try:
        check_ring_axioms(ring)
    except AxiomError as exc:
        raise UsageError(f"{where}: {exc}") from None
    return ring


def _find_zero(add: np.ndarray) -> int:
    size = len(add)
    for z in range(size):
        if np.array_equal(add[z], np.arange(size)):
            return z
    raise UsageError("tables have no additive identity")


def _find_one(mul: np.ndarray) -> int:
    size = len(mul)
    for o in range(size):
        if np.array_equal(mul[o], np.arange(size)) and np.array_equal(
            mul[:, o], np.arange(size)
        ):
            return o
    raise UsageError("tables have no multiplicative identity")


# --------------------------------------------------------------------------
# helpers


def _budget(config: RunConfig) -> Budget:
    return Budget(max_nodes=config.node_budget, max_seconds=config.time_budget)


def _lattice(ring: RingTable, config: RunConfig, budget: Budget, timing: dict) -> CommLattice:
    if config.cache_dir:
        try:
            lat = cache_load(ring, config.cache_dir)
            timing["lattice_cache"] = "hit"
            return lat
        except CacheMissError:
            timing["lattice_cache"] = "miss"
        except CacheCorruptError as exc:
            raise UsageError(f"lattice cache: {exc}") from None
    else:
        timing["lattice_cache"] = "off"
    lat = enumerate_commutative_subrings(ring, budget=budget)
    if config.cache_dir:
        cache_store(lat, config.cache_dir)
    return lat


def _render_text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for key in value:
            sub = value[key]
            if isinstance(sub, (dict, list)) and sub:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(sub, indent + 1))
            else:
                lines.append(f"{pad}{key}: {sub}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(pad + "-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def _emit(config: RunConfig, command: str, report: dict, timing: dict) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "report": report,
        "timing": timing,
    }
    if config.output_format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(f"# {command} (schema {SCHEMA_VERSION})")
        print("\n".join(_render_text(report)))
        if config.verbose:
            print("timing:")
            print("\n".join(_render_text(timing, 1)))


# --------------------------------------------------------------------------
# subcommand implementations


def _cmd_subrings(config: RunConfig) -> int:
    ring = parse_ring_definition(config.ring_path)
    timing: dict = {}
    t0 = time.monotonic()
    budget = _budget(config)
    lat = _lattice(ring, config, budget, timing)
    maxima = set(lat.maximal)
    report = {
        "ring": ring.label,
        "count": len(lat),
        "maximal_count": len(lat.maximal),
        "subrings": [
            {
                "elements": sub.indices(),
                "size": len(sub),
                "maximal": i in maxima,
            }
            for i, sub in enumerate(lat.subrings)
        ],
    }
    timing["seconds"] = time.monotonic() - t0
    _emit(config, "subrings", report, timing)
    return EXIT_OK


def _cmd_spec(config: RunConfig) -> int:
    ring = parse_ring_definition(config.ring_path)
    if not ring.is_commutative():
        raise UsageError(f"{ring.label} is not commutative; use `partspec` instead")
    timing: dict = {}
    t0 = time.monotonic()
    result = spec(ring, budget=_budget(config))
    from .finring import mask_indices

    report = {
        "ring": ring.label,
        "prime_count": len(result),
        "primes": [mask_indices(m) for m in result.primes],
    }
    timing["seconds"] = time.monotonic() - t0
    _emit(config, "spec", report, timing)
    return EXIT_OK


def _cmd_partspec(config: RunConfig) -> int:
    ring = parse_ring_definition(config.ring_path)
    timing: dict = {}
    t0 = time.monotonic()
    budget = _budget(config)
    lat = _lattice(ring, config, budget, timing)
    result = part_spec(ring, lat, budget=budget)
    if not result.stats.complete:
        raise BudgetExhaustedError("partSpec search", result.stats.nodes, time.monotonic() - t0)
    report = {
        "ring": ring.label,
        "count": len(result),
        "complete": result.stats.complete,
        "maximal_subrings": [lat.subrings[i].indices() for i in lat.maximal],
        "families": [
            {str(i): _mask_list(fam.ambient[i]) for i in sorted(fam.ambient)}
            for fam in result.families
        ],
        "ideals": [ideal.indices() for ideal in result.ideals],
        "stats": {"nodes": result.stats.nodes, "backtracks": result.stats.backtracks},
    }
    timing["seconds"] = time.monotonic() - t0
    timing["search_seconds"] = result.stats.seconds
    _emit(config, "partspec", report, timing)
    return EXIT_OK


def _mask_list(mask: int) -> list[int]:
    from .finring import mask_indices

    return mask_indices(mask)


def _cmd_morphisms(config: RunConfig) -> int:
    ring = parse_ring_definition(config.ring_path)
    field = parse_ring_definition(config.field_path)
    timing: dict = {}
    t0 = time.monotonic()
    budget = _budget(config)
    lat = _lattice(ring, config, budget, timing)
    morphisms = enumerate_partial_morphisms(ring, field, lat, budget=budget)
    report = {
        "ring": ring.label,
        "field": field.label,
        "count": len(morphisms),
        "tables": [[int(v) for v in m.table] for m in morphisms],
    }
    timing["seconds"] = time.monotonic() - t0
    _emit(config, "morphisms", report, timing)
    return EXIT_OK


def _cmd_check_ideal(config: RunConfig) -> int:
    ring = parse_ring_definition(config.ring_path)
    try:
        members = [int(x) for x in config.members.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"--members must be a comma list of indices, got {config.members!r}")
    if any(m < 0 or m >= ring.size for m in members):
        raise UsageError(f"--members contains an index outside 0..{ring.size - 1}")
    timing: dict = {}
    t0 = time.monotonic()
    candidate = partial_ideal(standard_structure(ring), members)
    verdict = is_partial_ideal(candidate)
    report = {
        "ring": ring.label,
        "members": sorted(members),
        "is_partial_ideal": bool(verdict),
        "witness": list(verdict.witness) if verdict.witness else None,
        "reason": verdict.reason or None,
    }
    ok = bool(verdict)
    if config.prime:
        if verdict:
            prime = is_prime_partial_ideal(candidate)
            report["is_prime"] = bool(prime)
            report["prime_witness"] = list(prime.witness) if prime.witness else None
            report["prime_reason"] = prime.reason or None
            ok = ok and bool(prime)
        else:
            report["is_prime"] = False
    timing["seconds"] = time.monotonic() - t0
    _emit(config, "check-ideal", report, timing)
    return EXIT_OK if ok else EXIT_VERIFICATION


def _load_ray_system(config: RunConfig):
    path = config.rays_path or str(bundled_peres_path())
    try:
        return path, load_rays(path)
    except FileNotFoundError:
        raise UsageError(f"ray file not found: {path}") from None
    except RayFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _coloring_report(system, result) -> dict:
    return {
        "rays": len(system),
        "bases": len(system.bases),
        "status": result.status,
        "complete": result.complete,
        "coloring": list(result.coloring) if result.coloring is not None else None,
        "stats": {"nodes": result.nodes, "backtracks": result.backtracks},
    }


def _cmd_ks_check(config: RunConfig) -> int:
    timing: dict = {}
    t0 = time.monotonic()
    path, system = _load_ray_system(config)
    result = ks_colorable(system, budget=_budget(config))
    report = {"source": os.path.basename(path), "dimension": system.dimension}
    report.update(_coloring_report(system, result))
    timing["seconds"] = time.monotonic() - t0
    _emit(config, "ks-check", report, timing)
    return EXIT_OK


def _cmd_ks_lift(config: RunConfig) -> int:
    timing: dict = {}
    t0 = time.monotonic()
    path, system = _load_ray_system(config)
    try:
        lifted = lift_to_dimension(system, config.dimension)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = ks_colorable(lifted, budget=_budget(config))
    report = {
        "source": os.path.basename(path),
        "dimension": lifted.dimension,
        "source_rays": len(system),
    }
    report.update(_coloring_report(lifted, result))
    timing["seconds"] = time.monotonic() - t0
    _emit(config, "ks-lift", report, timing)
    return EXIT_OK


def _cmd_verify_paper(config: RunConfig) -> int:
    timing: dict = {}
    t0 = time.monotonic()
    report_obj = build_report(budget=_budget(config))
    payload = report_obj.as_dict()
    timing["seconds"] = time.monotonic() - t0
    timing["claims"] = report_obj.timings()
    if config.output_format == "text":
        print(render_report_text(payload))
        if config.verbose:
            print("\n".join(_render_text({"timing": timing})))
    else:
        _emit(config, "verify-paper", payload, timing)
    if payload["verdict"] is None:
        print("error: budget: verdict withheld, some claims incomplete", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if payload["verdict"] else EXIT_VERIFICATION


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse default prints usage and exits 2, which matches the
        # documented usage-error exit code; keep the one-line reason format
        self.exit(EXIT_USAGE, f"error: usage: {message}\n")


def _parse_time_budget(text: str) -> float:
    raw = text.strip().lower()
    if raw.endswith("s"):
        raw = raw[:-1]
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad time budget {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("time budget must be positive")
    return value


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--cache-dir",
        default=os.environ.get("PARTSPEC_CACHE_DIR"),
        help="lattice cache directory (env PARTSPEC_CACHE_DIR; flag wins)",
    )
    sub.add_argument("--node-budget", type=int, default=10_000_000)
    sub.add_argument(
        "--time-budget",
        type=_parse_time_budget,
        default=60.0,
        metavar="SECONDS",
        help="wall-clock limit, e.g. 60 or 60s",
    )
    sub.add_argument("--format", choices=("json", "text"), default="text", dest="output_format")
    sub.add_argument("--jobs", type=int, default=1, help="worker cap (searches here are single-threaded)")
    sub.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="partspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"partspec {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("subrings", help="enumerate commutative subrings")
    sub.add_argument("--ring", required=True, dest="ring_path")
    _add_common(sub)

    sub = commands.add_parser("spec", help="prime ideals of a commutative ring")
    sub.add_argument("--ring", required=True, dest="ring_path")
    _add_common(sub)

    sub = commands.add_parser("partspec", help="prime partial ideals of a ring")
    sub.add_argument("--ring", required=True, dest="ring_path")
    _add_common(sub)

    sub = commands.add_parser("morphisms", help="partial morphisms to a finite field")
    sub.add_argument("--ring", required=True, dest="ring_path")
    sub.add_argument("--field", required=True, dest="field_path")
    _add_common(sub)

    sub = commands.add_parser("check-ideal", help="test a subset for the partial-ideal laws")
    sub.add_argument("--ring", required=True, dest="ring_path")
    sub.add_argument("--members", required=True, help="comma list of element indices")
    sub.add_argument("--prime", action="store_true", help="also test primality")
    _add_common(sub)

    sub = commands.add_parser("ks-check", help="color a ray system")
    sub.add_argument("--rays", dest="rays_path", help="ray file (default: bundled Peres 33)")
    _add_common(sub)

    sub = commands.add_parser("ks-lift", help="lift a 3-dimensional system and color it")
    sub.add_argument("--rays", dest="rays_path", help="ray file (default: bundled Peres 33)")
    sub.add_argument("--dimension", type=int, default=4)
    _add_common(sub)

    sub = commands.add_parser("verify-paper", help="run the full verification report")
    _add_common(sub)

    return parser


_DISPATCH = {
    "subrings": _cmd_subrings,
    "spec": _cmd_spec,
    "partspec": _cmd_partspec,
    "morphisms": _cmd_morphisms,
    "check-ideal": _cmd_check_ideal,
    "ks-check": _cmd_ks_check,
    "ks-lift": _cmd_ks_lift,
    "verify-paper": _cmd_verify_paper,
}


def run(config: RunConfig) -> int:
    """Dispatch a parsed configuration; returns the process exit code."""
    try:
        return _DISPATCH[config.command](config)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhaustedError as exc:
        print(f"error: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AxiomError, ValueError) as exc:
        print(f"error: verification: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        ring_path=getattr(args, "ring_path", None),
        field_path=getattr(args, "field_path", None),
        rays_path=getattr(args, "rays_path", None),
        members=getattr(args, "members", None),
        prime=getattr(args, "prime", False),
        dimension=getattr(args, "dimension", 4),
        cache_dir=args.cache_dir,
        node_budget=args.node_budget,
        time_budget=args.time_budget,
        output_format=args.output_format,
        jobs=args.jobs,
        verbose=args.verbose,
    )
    if config.node_budget <= 0:
        print("error: usage: --node-budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
