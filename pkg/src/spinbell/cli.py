"""Command-line entry point: ``spinbell {verify,lhv,rotate-sweep,sample}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
``SPINBELL_OUTPUT`` names an output file when ``--output`` is not given.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .correlations import constraint_report, nine_constraints, rotated_constraints, verify_perfect
from .lhv import LHV_LABELS, exhaustive_search, parity_argument
from .observables import canonical_observables
from .rotations import RotationSpec, random_rotations, rotation_operator
from .sampling import run_experiment
from .states import invariance_defect, singlet

SPIN = Fraction(3, 2)
SWEEP_TOL = 1e-10
OUTPUT_ENV = "SPINBELL_OUTPUT"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(x + 0.0, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits.

    Parsing the output with ``json.loads`` and dumping it again reproduces
    it byte for byte.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(fieldnames, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: fmt_float(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    shots: int = 100_000
    rotations: int = 100
    axis: tuple[float, float, float] | None = None
    angle: float | None = None
    output_format: str = "text"
    output_path: str | None = None


def _emit(text: str, config: RunConfig) -> None:
    if not text.endswith("\n"):
        text += "\n"
    path = config.output_path or os.environ.get(OUTPUT_ENV)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bool(b: bool) -> str:
    return "true" if b else "false"


def cmd_verify(config: RunConfig, constraints=None, obs=None) -> int:
    """Exact check of the nine identities on the spin-3/2 singlet."""
    constraints = nine_constraints() if constraints is None else constraints
    obs = canonical_observables() if obs is None else obs
    psi = singlet(SPIN)
    reports = [constraint_report(psi, c, obs) for c in constraints]
    ok = all(r["holds"] for r in reports)

    if config.output_format == "json":
        text = dumps({"all_hold": ok, "constraints": reports})
    elif config.output_format == "csv":
        rows = [dict(r, alice=" ".join(r["alice"]), bob=" ".join(r["bob"]), holds=_bool(r["holds"])) for r in reports]
        text = _csv(list(reports[0]) if reports else ["id"], rows)
    else:
        text = "\n".join(
            f"constraint {r['id']}: {c.describe():<28} value={fmt_float(r['value'])} "
            f"holds={_bool(r['holds'])} max_violating_probability={fmt_float(r['max_violating_probability'])}"
            for r, c in zip(reports, constraints)
        )
    _emit(text, config)
    if not ok:
        failed = ", ".join(str(r["id"]) for r in reports if not r["holds"])
        print(f"verification failed for constraint(s): {failed}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_lhv(config: RunConfig) -> int:
    """Exhaustive search over local value assignments plus the parity count."""
    report = exhaustive_search()
    parity = parity_argument()
    data = report.to_dict()
    data["violation_histogram"] = {str(k): v for k, v in report.violation_histogram.items()}
    data["parity"] = parity.to_dict()

    if config.output_format == "json":
        text = dumps(data)
    elif config.output_format == "csv":
        rows = [
            {"key": "total", "value": report.total_assignments},
            {"key": "perfect", "value": report.perfectly_satisfying},
            {"key": "max_satisfied", "value": report.max_satisfied},
            {"key": "parity_lhs", "value": parity.lhs_sign},
            {"key": "parity_rhs", "value": parity.rhs_sign},
        ]
        if report.witness_assignment is not None:
            rows += [{"key": f"witness:{l}", "value": report.witness_assignment[l]} for l in LHV_LABELS]
        text = _csv(["key", "value"], rows)
    else:
        lines = [
            f"assignments={report.total_assignments} perfect={report.perfectly_satisfying} "
            f"max_satisfied={report.max_satisfied}",
            "violated-count histogram: "
            + " ".join(f"{k}:{v}" for k, v in report.violation_histogram.items()),
            f"parity: lhs={parity.lhs_sign:+d} rhs={parity.rhs_sign:+d} "
            f"label counts={sorted(set(parity.per_label_counts.values()))}",
        ]
        if report.witness_assignment is not None:
            lines.append(
                "witness: " + " ".join(f"{l}={v:+d}" for l, v in report.witness_assignment.items())
            )
        text = "\n".join(lines)
    _emit(text, config)
    return EXIT_OK if report.perfectly_satisfying == 0 else EXIT_FAIL


def _sweep_specs(config: RunConfig) -> list[RotationSpec]:
    if config.axis is not None:
        return [RotationSpec.normalized(config.axis, config.angle)]
    return random_rotations(config.rotations, config.seed)


def cmd_rotate_sweep(config: RunConfig) -> int:
    """Verify the nine identities for commonly rotated devices, plus state invariance."""
    psi = singlet(SPIN)
    rows = []
    for i, spec in enumerate(_sweep_specs(config)):
        r = rotation_operator(spec, SPIN)
        obs, constraints = rotated_constraints(r)
        checks = [verify_perfect(psi, c, obs) for c in constraints]
        worst = max(ch.max_violating_probability for ch in checks)
        defect = invariance_defect(psi, r)
        rows.append(
            {
                "index": i,
                "axis": list(spec.axis),
                "angle": spec.angle,
                "max_violating_probability": worst,
                "invariance_defect": defect,
                "holds": all(ch.holds for ch in checks) and worst <= SWEEP_TOL and abs(defect) <= SWEEP_TOL,
            }
        )
    ok = all(row["holds"] for row in rows)
    worst_p = max(row["max_violating_probability"] for row in rows)
    worst_d = max(abs(row["invariance_defect"]) for row in rows)

    if config.output_format == "json":
        text = dumps(
            {
                "rotations": len(rows),
                "seed": config.seed,
                "all_hold": ok,
                "worst_violating_probability": worst_p,
                "worst_invariance_defect": worst_d,
                "per_rotation": rows,
            }
        )
    elif config.output_format == "csv":
        flat = [
            dict(row, axis=" ".join(fmt_float(a) for a in row["axis"]), holds=_bool(row["holds"]))
            for row in rows
        ]
        text = _csv(list(rows[0]), flat)
    else:
        text = (
            f"rotations={len(rows)} all_hold={_bool(ok)} "
            f"worst_violating_probability={fmt_float(worst_p)} "
            f"worst_invariance_defect={fmt_float(worst_d)}"
        )
    _emit(text, config)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sample(config: RunConfig) -> int:
    """Monte Carlo rounds for each of the nine identities."""
    stats = run_experiment(singlet(SPIN), nine_constraints(), canonical_observables(), config.shots, config.seed)
    if config.output_format == "json":
        text = dumps(stats.to_dict())
    elif config.output_format == "csv":
        text = stats.to_csv()
    else:
        lines = [f"shots={stats.shots} seed={stats.seed}" + (" (no data)" if stats.no_data else "")]
        lines += [
            f"constraint {row['id']}: agree={row['agree']} disagree={row['disagree']} "
            f"empirical_value={fmt_float(row['empirical_value'])}"
            for row in stats.rows()
        ]
        text = "\n".join(lines)
    _emit(text, config)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "lhv": cmd_lhv,
    "rotate-sweep": cmd_rotate_sweep,
    "sample": cmd_sample,
}


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _axis(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed axis {text!r}; expected x,y,z") from None
    if len(parts) != 3 or not all(math.isfinite(p) for p in parts) or not any(parts):
        raise argparse.ArgumentTypeError(f"malformed axis {text!r}; expected three finite numbers, not all zero")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbell",
        description="Spin-3/2 singlet Bell argument without inequalities: exact checks, "
        "hidden-variable search, rotation sweeps and Born-rule sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--format", dest="output_format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", dest="output_path", help=f"write here instead of stdout (or set {OUTPUT_ENV})")

    sub.add_parser("verify", parents=[common], help="exact check of the nine correlations")
    sub.add_parser("lhv", parents=[common], help="exhaustive local hidden-variable search")
    rot = sub.add_parser("rotate-sweep", parents=[common], help="verify under common rotations")
    rot.add_argument("--rotations", type=_nonneg_int, default=100, help="number of random rotations")
    rot.add_argument("--axis", type=_axis, help="explicit rotation axis x,y,z")
    rot.add_argument("--angle", type=float, help="explicit rotation angle in radians")
    smp = sub.add_parser("sample", parents=[common], help="Born-rule sampling of the nine correlations")
    smp.add_argument("--shots", type=_nonneg_int, default=100_000)
    return parser


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    config = RunConfig(
        command=ns.command,
        seed=ns.seed,
        output_format=ns.output_format,
        output_path=ns.output_path,
    )
    if ns.command == "rotate-sweep":
        if (ns.axis is None) != (ns.angle is None):
            parser.error("--axis and --angle must be given together")
        if ns.angle is not None and not math.isfinite(ns.angle):
            parser.error("--angle must be finite")
        if ns.axis is None and ns.rotations == 0:
            parser.error("nothing to sweep: give --rotations >= 1 or --axis/--angle")
        config.rotations, config.axis, config.angle = ns.rotations, ns.axis, ns.angle
    if ns.command == "sample":
        config.shots = ns.shots
    return config


def main(argv=None) -> int:
    config = parse_config(argv)
    return COMMANDS[config.command](config)


if __name__ == "__main__":
    sys.exit(main())
