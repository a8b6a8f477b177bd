"""Command-line interface.

Subcommands: correlate, chsh, wigner, optimize, scan, sample, lhv-check.
Angles are radians (``--degrees`` converts inputs at the boundary);
directions are given as "theta,phi".  Output is a human-readable table by
default, or machine-readable JSON/CSV via ``--format``.  JSON documents
carry a ``schema_version`` field and echo all inputs in normalized form at
full precision, so a document can be fed back as an input spec; tables and
CSV print numbers with 15 significant digits.

Exit codes: 0 success, 2 argument parse error, 3 configuration violation
(for example a scan grid above the row cap).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .spin_core import (
    Direction,
    EntangledState,
    Polarization,
    bell_parallel,
    singlet,
    triplet,
)
from .correlations import (
    SignPair,
    canonical_sign_pairs,
    chsh_breakdown,
    spin_correlation,
    wigner_w,
)
from .lhv_oracle import Population8, population_from_local_state, verify_wigner
from .sampler import estimate_wigner
from .optimizer import (
    ANGLE_NAMES,
    DEFAULT_ROW_CAP,
    ScanRow,
    SearchConfig,
    maximize_chsh,
    maximize_w,
    scan_w,
)

SCHEMA_VERSION = 1
SEED_ENV = "SPINCORR_SEED"

PRESETS = {"singlet": singlet, "triplet": triplet, "bell-parallel": bell_parallel}

_SCAN_COLUMNS = list(ScanRow._fields)


@dataclass(frozen=True)
class RunSpec:
    """A fully resolved invocation, ready to dispatch."""

    command: str
    output_format: str = "table"
    state: EntangledState | None = None
    preset: str | None = None
    directions: Mapping[str, Direction] = field(default_factory=dict)
    signs: SignPair | None = None
    seed: int = 0
    shots: int = 100_000
    search: SearchConfig | None = None
    target: str = "wigner"
    pop: Population8 | None = None
    grid: Mapping[str, int] | None = None
    fixed: Mapping[str, float | str] | None = None
    row_cap: int = DEFAULT_ROW_CAP


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def _direction_doc(d: Direction) -> dict:
    return {"theta": d.theta, "phi": d.phi}


def _state_doc(state: EntangledState, preset: str | None) -> dict:
    doc = {
        "xi": state.xi,
        "eta": state.eta,
        "polarization": state.polarization.value,
    }
    if preset:
        doc["preset"] = preset
    return doc


def _breakdown_doc(result) -> dict:
    doc = {
        "local": result.local,
        "nonlocal": result.nonlocal_,
        "total": result.total,
    }
    if result.canonical is not None:
        doc["canonical"] = result.canonical
    return doc


def _resolve_signs(spec: RunSpec) -> SignPair:
    if spec.signs is not None:
        return spec.signs
    return canonical_sign_pairs(spec.state.polarization)[0]


def _dispatch(spec: RunSpec):
    """Compute the result document; returns (document, scan_rows or None)."""
    document = {"schema_version": SCHEMA_VERSION, "command": spec.command}
    inputs: dict = {}
    rows = None

    if spec.state is not None:
        inputs["state"] = _state_doc(spec.state, spec.preset)
    for name in ("a", "b", "c", "d"):
        if name in spec.directions:
            inputs[name] = _direction_doc(spec.directions[name])

    if spec.command == "correlate":
        result = spin_correlation(
            spec.state, spec.directions["a"], spec.directions["b"]
        )
        document["result"] = _breakdown_doc(result)

    elif spec.command == "chsh":
        combo = chsh_breakdown(
            spec.state,
            spec.directions["a"],
            spec.directions["b"],
            spec.directions["c"],
            spec.directions["d"],
        )
        document["result"] = {"value": abs(combo.total), "signed": _breakdown_doc(combo)}

    elif spec.command == "wigner":
        signs = _resolve_signs(spec)
        inputs["signs"] = str(signs)
        result = wigner_w(
            spec.state,
            signs,
            spec.directions["a"],
            spec.directions["b"],
            spec.directions["c"],
        )
        document["result"] = _breakdown_doc(result)

    elif spec.command == "optimize":
        config = spec.search or SearchConfig()
        inputs["target"] = spec.target
        inputs["search"] = {
            "restarts": config.restarts,
            "tolerance": config.tolerance,
            "max_iterations": config.max_iterations,
            "seed": config.seed,
            "fix_state": config.fix_state,
        }
        optimize = maximize_w if spec.target == "wigner" else maximize_chsh
        best = optimize(spec.state, config)
        document["result"] = {
            "best_value": best.best_value,
            "best_angles": [_direction_doc(d) for d in best.best_angles],
            "best_state": _state_doc(best.best_state, None),
            "restarts_used": best.restarts_used,
            "converged": best.converged,
        }

    elif spec.command == "scan":
        signs = _resolve_signs(spec)
        inputs["signs"] = str(signs)
        inputs["grid"] = dict(spec.grid or {})
        inputs["fixed"] = dict(spec.fixed or {})
        inputs["row_cap"] = spec.row_cap
        rows = scan_w(
            spec.state, spec.grid or {}, spec.fixed, signs=signs, row_cap=spec.row_cap
        )
        document["result"] = {"columns": _SCAN_COLUMNS}

    elif spec.command == "sample":
        signs = _resolve_signs(spec)
        inputs["signs"] = str(signs)
        inputs["shots_per_pair"] = spec.shots
        inputs["seed"] = spec.seed
        estimate = estimate_wigner(
            spec.state,
            signs,
            spec.directions["a"],
            spec.directions["b"],
            spec.directions["c"],
            spec.shots,
            spec.seed,
        )
        document["result"] = {
            "value": estimate.value,
            "std_error": estimate.std_error,
            "shots_per_pair": estimate.shots,
        }

    elif spec.command == "lhv-check":
        if spec.pop is not None:
            pop = spec.pop
        else:
            pop = population_from_local_state(
                spec.state,
                spec.directions["a"],
                spec.directions["b"],
                spec.directions["c"],
            )
        inputs["pop"] = list(pop.weights)
        check = verify_wigner(pop)
        document["result"] = {
            "holds_plus_minus": check.holds_plus_minus,
            "holds_minus_plus": check.holds_minus_plus,
            "slack_plus_minus": check.slack_plus_minus,
            "slack_minus_plus": check.slack_minus_plus,
        }

    else:  # pragma: no cover - argparse restricts the choices
        raise ValueError(f"unknown command {spec.command!r}")

    document["inputs"] = inputs
    return document, rows


def _emit_table(document: dict, rows: Iterable[ScanRow] | None) -> None:
    print(f"command: {document['command']}")
    for key, value in document["inputs"].items():
        if isinstance(value, dict):
            body = ", ".join(f"{k}={_fmt(v)}" for k, v in value.items())
            print(f"  {key}: {body}")
        elif isinstance(value, list):
            print(f"  {key}: {', '.join(_fmt(v) for v in value)}")
        else:
            print(f"  {key}: {_fmt(value)}")
    if rows is not None:
        print("  ".join(_SCAN_COLUMNS))
        for row in rows:
            print("  ".join(_fmt(v) for v in row))
        return
    print("result:")
    for key, value in document["result"].items():
        if isinstance(value, dict):
            body = ", ".join(f"{k}={_fmt(v)}" for k, v in value.items())
            print(f"  {key}: {body}")
        elif isinstance(value, list):
            if value and isinstance(value[0], dict):
                for i, item in enumerate(value):
                    body = ", ".join(f"{k}={_fmt(v)}" for k, v in item.items())
                    print(f"  {key}[{i}]: {body}")
            else:
                print(f"  {key}: {', '.join(_fmt(v) for v in value)}")
        else:
            print(f"  {key} = {_fmt(value)}")


def _emit_json(document: dict, rows: Iterable[ScanRow] | None) -> None:
    if rows is not None:
        document["result"]["rows"] = [list(row) for row in rows]
    print(json.dumps(document, indent=2))


def _emit_csv(document: dict, rows: Iterable[ScanRow] | None) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if rows is not None:
        writer.writerow(_SCAN_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return
    flat = {
        k: v
        for k, v in document["result"].items()
        if not isinstance(v, (dict, list))
    }
    writer.writerow(flat.keys())
    writer.writerow([_fmt(v) for v in flat.values()])


def run(spec: RunSpec) -> int:
    """Execute a resolved invocation; prints the document, returns exit code."""
    try:
        document, rows = _dispatch(spec)
        if spec.output_format == "json":
            _emit_json(document, rows)
        elif spec.output_format == "csv":
            _emit_csv(document, rows)
        else:
            _emit_table(document, rows)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _angle_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected 'theta,phi', got {text!r}"
        )
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _key_value(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    name, _, value = text.partition("=")
    return name.strip(), value.strip()


def _add_state_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--state", choices=sorted(PRESETS), help="named state preset"
    )
    parser.add_argument("--xi", type=float, help="state parameter xi (radians)")
    parser.add_argument("--eta", type=float, default=0.0, help="state parameter eta (radians)")
    parser.add_argument(
        "--polarization",
        choices=[p.value for p in Polarization],
        default=Polarization.ANTIPARALLEL.value,
        help="polarization flavor for --xi/--eta states",
    )


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=["table", "json", "csv"],
        default="table",
        help="output format",
    )
    parser.add_argument(
        "--degrees",
        action="store_true",
        help="interpret all input angles as degrees",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"random seed (default: ${SEED_ENV} or 0)",
    )


def _add_direction_arguments(parser, names: str) -> None:
    for name in names:
        parser.add_argument(
            f"--{name}",
            type=_angle_pair,
            required=True,
            metavar="THETA,PHI",
            help=f"direction {name}",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincorr",
        description="Measurement correlations of two-spin entangled states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", help="spin correlation along two directions")
    _add_state_arguments(p)
    _add_direction_arguments(p, "ab")
    _add_common_arguments(p)

    p = sub.add_parser("chsh", help="four-direction CHSH combination")
    _add_state_arguments(p)
    _add_direction_arguments(p, "abcd")
    _add_common_arguments(p)

    p = sub.add_parser("wigner", help="three-direction Wigner correlator")
    _add_state_arguments(p)
    _add_direction_arguments(p, "abc")
    p.add_argument("--signs", choices=["++", "+-", "-+", "--"], help="detected sign pair")
    _add_common_arguments(p)

    p = sub.add_parser("optimize", help="search for the maximal violation")
    _add_state_arguments(p)
    p.add_argument("--target", choices=["wigner", "chsh"], default="wigner")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--max-iterations", type=int, default=2000)
    p.add_argument(
        "--free-state",
        action="store_true",
        help="optimize xi and eta along with the angles",
    )
    _add_common_arguments(p)

    p = sub.add_parser("scan", help="tabulate the Wigner correlator over a grid")
    _add_state_arguments(p)
    p.add_argument(
        "--grid",
        type=_key_value,
        action="append",
        default=[],
        metavar="ANGLE=N",
        help="sample count for a free angle (repeatable)",
    )
    p.add_argument(
        "--fix",
        type=_key_value,
        action="append",
        default=[],
        metavar="ANGLE=VALUE",
        help="pin an angle to a value, or tie it to another angle by name",
    )
    p.add_argument("--signs", choices=["++", "+-", "-+", "--"])
    p.add_argument("--cap", type=int, default=DEFAULT_ROW_CAP, help="maximum rows")
    _add_common_arguments(p)

    p = sub.add_parser("sample", help="finite-shot Wigner estimate")
    _add_state_arguments(p)
    _add_direction_arguments(p, "abc")
    p.add_argument("--signs", choices=["++", "+-", "-+", "--"])
    p.add_argument("--shots", type=int, default=100_000, help="shots per direction pair")
    _add_common_arguments(p)

    p = sub.add_parser("lhv-check", help="Wigner inequality over an eight-population model")
    p.add_argument(
        "--pop",
        type=_float_list,
        metavar="N1,...,N8",
        help="population weights",
    )
    _add_state_arguments(p)
    p.add_argument("--a", type=_angle_pair, metavar="THETA,PHI")
    p.add_argument("--b", type=_angle_pair, metavar="THETA,PHI")
    p.add_argument("--c", type=_angle_pair, metavar="THETA,PHI")
    _add_common_arguments(p)

    return parser


def _angle_scale(args) -> float:
    return math.pi / 180.0 if args.degrees else 1.0


def _build_state(args, parser) -> tuple[EntangledState | None, str | None]:
    preset = getattr(args, "state", None)
    xi = getattr(args, "xi", None)
    if preset is not None and xi is not None:
        parser.error("give either --state or --xi, not both")
    if preset is not None:
        return PRESETS[preset](), preset
    if xi is not None:
        scale = _angle_scale(args)
        return (
            EntangledState(
                xi * scale,
                args.eta * scale,
                Polarization(args.polarization),
            ),
            None,
        )
    return None, None


def _build_directions(args, names: str) -> dict[str, Direction]:
    scale = _angle_scale(args)
    directions = {}
    for name in names:
        pair = getattr(args, name, None)
        if pair is not None:
            directions[name] = Direction(pair[0] * scale, pair[1] * scale)
    return directions


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get(SEED_ENV, "0"))


def build_spec(args, parser) -> RunSpec:
    state, preset = _build_state(args, parser)
    command = args.command
    if command == "lhv-check":
        if getattr(args, "pop", None) is not None:
            if state is not None:
                parser.error("give either --pop or a state, not both")
        else:
            if state is None:
                parser.error("lhv-check requires --pop, or a state with --a/--b/--c")
            if any(getattr(args, n, None) is None for n in "abc"):
                parser.error("lhv-check with a state requires --a, --b and --c")
    elif state is None:
        parser.error(f"{command} requires --state or --xi")

    signs = None
    if getattr(args, "signs", None):
        signs = SignPair.from_string(args.signs)

    spec_kwargs = dict(
        command=command,
        output_format=args.format,
        state=state,
        preset=preset,
        directions=_build_directions(args, "abcd"),
        signs=signs,
        seed=_resolve_seed(args),
    )

    if command == "optimize":
        spec_kwargs["target"] = args.target
        spec_kwargs["search"] = SearchConfig(
            restarts=args.restarts,
            tolerance=args.tolerance,
            max_iterations=args.max_iterations,
            seed=spec_kwargs["seed"],
            fix_state=not args.free_state,
        )
    elif command == "scan":
        scale = _angle_scale(args)
        grid = {}
        for name, value in args.grid:
            try:
                grid[name] = int(value)
            except ValueError:
                parser.error(f"grid count for {name!r} must be an integer")
        fixed: dict[str, float | str] = {}
        for name, value in args.fix:
            if value in ANGLE_NAMES:
                fixed[name] = value
            else:
                try:
                    fixed[name] = float(value) * scale
                except ValueError:
                    parser.error(
                        f"fixed value for {name!r} must be a number or an angle name"
                    )
        spec_kwargs["grid"] = grid
        spec_kwargs["fixed"] = fixed
        spec_kwargs["row_cap"] = args.cap
    elif command == "sample":
        spec_kwargs["shots"] = args.shots
    elif command == "lhv-check" and args.pop is not None:
        spec_kwargs["pop"] = Population8.from_weights(args.pop)

    return RunSpec(**spec_kwargs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = build_spec(args, parser)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
