"""Command-line interface: file ingestion, command dispatch, and
machine-readable reports.

Exit codes are a stable contract: 0 for success, 1 for a domain-level
negative result (invalid filtration, not a loop, non-composable simplex),
2 for parse or usage errors.  Reports are JSON with sorted keys; every
numeric value is reduced "p/q" text or an integer, never a float.  The
``--format text`` renderer is derived from the same payload.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Optional

from . import __version__
from .category import CompositionError, arrow_path
from .exactlinalg import RatMatrix, rat_str
from .filtration import (
    Filtration,
    martingale_kernel,
    naive_obstruction,
    validate,
)
from .finprob import FiniteProbSpace, L1Class
from .gauge import build_gauge, gauge_distortion
from .holonomy import HolonomyReport, classify, is_loop, scan_loops
from .nerve import ParamSimplex
from .sigmacomplex import build_complex
from .specfile import SpecFileError, build_filtration, parse_document


class UsageError(ValueError):
    """Command-line level problem: exit code 2."""


class DomainFailure(ValueError):
    """Negative domain result: exit code 1, with a payload."""

    def __init__(self, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.payload = payload or {"error": message}


def measure_json(space: FiniteProbSpace) -> dict:
    return {a: rat_str(w) for a, w in zip(space.atoms, space.weights)}


def class_json(f: L1Class) -> dict:
    return {a: rat_str(v) for a, v in zip(f.space.atoms, f.values)}


def matrix_json(m: RatMatrix) -> list:
    return [[rat_str(x) for x in m.row(i)] for i in range(m.rows)]


def simplex_json(sigma: ParamSimplex) -> dict:
    return {
        "objects": list(sigma.objects),
        "arrows": [p.display() for p in sigma.arrows],
    }


def distortion_json(items) -> list:
    return [
        {
            "position": d.position,
            "relation": d.relation.value,
            "derivative": class_json(d.derivative) if d.derivative is not None else None,
        }
        for d in items
    ]


def holonomy_json(report: HolonomyReport) -> dict:
    return {
        "simplex": simplex_json(report.sigma),
        "is_loop": report.is_loop,
        "classification": report.classification.value,
        "arbitrage": report.arbitrage,
        "relation": report.relation.value,
        "initial_measure": measure_json(report.initial),
        "terminal_measure": measure_json(report.terminal),
        "distortion": class_json(report.distortion) if report.distortion is not None else None,
        "holonomy_matrix": matrix_json(report.holonomy),
        "internal_distortion": distortion_json(report.internal),
    }


def _require_valid(filtration: Filtration):
    report = validate(filtration)
    if not report.ok:
        raise DomainFailure(
            "invalid filtration",
            {"valid": False, "issues": list(report.issues)},
        )


def _parse_simplex(filtration: Filtration, spec: Optional[str]) -> ParamSimplex:
    if not spec:
        raise UsageError("--simplex is required for this command")
    names = [n for n in spec.split(",") if n]
    if not names:
        raise UsageError("--simplex needs at least one arrow name")
    try:
        paths = [arrow_path(filtration.presentation, n) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        return ParamSimplex.from_paths(paths)
    except CompositionError as exc:
        raise DomainFailure(f"non-composable simplex: {exc}") from None


def cmd_validate(filtration, args):
    report = validate(filtration)
    payload = {"valid": report.ok, "issues": list(report.issues)}
    return payload, {}, 0 if report.ok else 1


def cmd_martingale(filtration, args):
    _require_valid(filtration)
    result = martingale_kernel(filtration, max_path_len=args.max_path_len)
    payload = {
        "dimension": result.dimension,
        "arrows_used": [p.display() for p in result.arrows],
        "max_path_len": result.max_path_len,
    }
    if args.basis:
        payload["basis"] = [
            {obj: class_json(proc[obj]) for obj in filtration.presentation.objects}
            for proc in result.basis
        ]
    truncation = {}
    if result.max_path_len is not None:
        truncation["max_path_len"] = result.max_path_len
    return payload, truncation, 0


def cmd_complex(filtration, args):
    if args.max_degree < 1:
        raise UsageError("max-degree must be >= 1")
    _require_valid(filtration)
    sigma = _parse_simplex(filtration, args.simplex)
    gauge = build_gauge(filtration, sigma)
    sc = build_complex(gauge, args.max_degree + 1)
    cohomology = []
    for n in range(args.max_degree + 1):
        data = sc.cohomology(n)
        cohomology.append({
            "degree": n,
            "cocycles": data.cocycle_dim,
            "coboundaries": data.coboundary_dim,
            "cohomology": data.cohomology_dim,
        })
    payload = {
        "simplex": simplex_json(sigma),
        "gauge_measures": [measure_json(sp) for sp in gauge.gauged],
        "original_measures": [measure_json(sp) for sp in gauge.originals],
        "internal_distortion": distortion_json(gauge_distortion(gauge)),
        "block_dims": {
            str(n): list(sc.block_dims(n)) for n in range(sc.max_degree + 1)
        },
        "space_dims": {str(n): sc.dim(n) for n in range(sc.max_degree + 1)},
        "cohomology": cohomology,
        "coboundary_squared": "zero" if sc.delta_squared_is_zero else "nonzero",
        "degree_zero_convention": "incoming coboundary in degree 0 is the zero map",
    }
    return payload, {}, 0


def cmd_holonomy(filtration, args):
    _require_valid(filtration)
    sigma = _parse_simplex(filtration, args.simplex)
    if not is_loop(sigma):
        raise DomainFailure(
            f"not a loop: endpoints {sigma.objects[0]!r} and "
            f"{sigma.objects[-1]!r} differ"
        )
    return holonomy_json(classify(filtration, sigma)), {}, 0


def cmd_scan(filtration, args):
    _require_valid(filtration)
    scan = scan_loops(filtration, args.max_len, limit=args.limit)
    payload = {
        "max_len": scan.max_len,
        "count": len(scan.reports),
        "truncated": scan.truncated,
        "loops": [holonomy_json(r) for r in scan.reports],
    }
    truncation = {}
    if scan.truncated:
        truncation["loop_limit"] = args.limit
    return payload, truncation, 0


def cmd_naive_check(filtration, args):
    if args.degree < 1:
        raise UsageError("degree must be >= 1")
    _require_valid(filtration)
    report = naive_obstruction(filtration, args.degree,
                               max_total_len=args.max_path_len)
    witness = None
    if report.witness is not None:
        witness = {
            "basis_simplex": simplex_json(report.witness.basis_simplex),
            "basis_atom": report.witness.basis_atom,
            "simplex": simplex_json(report.witness.simplex),
            "value": class_json(report.witness.value),
        }
    payload = {
        "degree": report.degree,
        "is_zero": report.is_zero,
        "witness": witness,
        "nerve_bound": report.bound,
    }
    truncation = {}
    if report.truncated:
        truncation["nerve_total_len"] = report.bound
    return payload, truncation, 0


COMMANDS = {
    "validate": cmd_validate,
    "martingale": cmd_martingale,
    "complex": cmd_complex,
    "holonomy": cmd_holonomy,
    "scan": cmd_scan,
    "naive-check": cmd_naive_check,
}


def _render_text(value, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key in value:
            item = value[key]
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def _emit(envelope: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(envelope, sort_keys=True, indent=2))
    else:
        print("\n".join(_render_text(envelope)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fh",
        description="Exact transport cohomology and loop holonomy for "
                    "finite filtrations",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="filtration spec file (JSON)")
        p.add_argument("--format", choices=("json", "text"), default="json")

    common(sub.add_parser("validate", help="check filtration validity"))

    p = sub.add_parser("martingale", help="dimension of the martingale kernel")
    common(p)
    p.add_argument("--max-path-len", type=int, default=None,
                   help="free mode: path length bound for the arrow set")
    p.add_argument("--basis", action="store_true", help="include a kernel basis")

    p = sub.add_parser("complex", help="gauged cochain complex of a simplex")
    common(p)
    p.add_argument("--simplex", required=True,
                   help="comma-separated composable arrow names")
    p.add_argument("--max-degree", type=int, default=2,
                   help="top cohomology degree to report")

    p = sub.add_parser("holonomy", help="classify one loop")
    common(p)
    p.add_argument("--simplex", required=True,
                   help="comma-separated composable arrow names forming a loop")

    p = sub.add_parser("scan", help="classify every based loop up to a length")
    common(p)
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--limit", type=int, default=None,
                   help="cap on the number of reported loops")

    p = sub.add_parser("naive-check",
                       help="composite of consecutive naive coboundaries")
    common(p)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--max-path-len", type=int, default=None,
                   help="free mode: total generator bound for nerve slices")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        with open(args.spec, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.spec}: {exc}", file=sys.stderr)
        return 2
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = parse_document(raw.decode("utf-8"))
        filtration = build_filtration(doc)
    except (SpecFileError, UnicodeDecodeError) as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return 2

    def envelope(payload, truncation):
        return {
            "tool": "fh",
            "version": __version__,
            "command": args.command,
            "input": {"path": args.spec, "sha256": digest},
            "truncation": truncation,
            "payload": payload,
        }

    try:
        payload, truncation, code = COMMANDS[args.command](filtration, args)
    except DomainFailure as exc:
        _emit(envelope(exc.payload, {}), args.format)
        return 1
    except ValueError as exc:
        # UsageError and any out-of-range argument surfaced by the library
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(envelope(payload, truncation), args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
