"""Command-line entry point.

Exit status: 0 on success, 1 when the input (or a map, or the corpus) fails
a check, 2 for usage and parse errors.  Every failure is reported as a JSON
diagnostic on standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from .document import InputError, ValidationError, load_input, parse_json
from .expansion import ExpansionError, PointOutsideBase
from .figure import fibre_svg
from .linalg import LinalgError
from .report import (
    case_doc,
    dumps,
    fibre_doc,
    positions_doc,
    rubber_doc,
    stability_doc,
    strata_doc,
    validate_doc,
    validation_json,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_point(text: str) -> tuple[Fraction, ...]:
    """Parse ``"a/b,c/d"`` into exact rationals; decimals are rejected."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part or any(c in part for c in ".eE"):
            raise UsageError(f"bad coordinate {part!r}: use integers or a/b")
        try:
            out.append(Fraction(part))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad coordinate {part!r}: use integers or a/b") from None
    return tuple(out)


def corpus_dir() -> Path:
    return Path(str(resources.files("tropical_rubber").joinpath("corpus")))


def _json_paths_differ(a, b, path="$", out=None, limit=20):
    """Paths at which two JSON values differ (at most ``limit``)."""
    if out is None:
        out = []
    if len(out) >= limit:
        return out
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out.append(f"{path}.{k}")
            else:
                _json_paths_differ(a[k], b[k], f"{path}.{k}", out, limit)
    elif isinstance(a, list) and isinstance(b, list) and len(a) == len(b):
        for i, (x, y) in enumerate(zip(a, b)):
            _json_paths_differ(x, y, f"{path}[{i}]", out, limit)
    elif a != b:
        out.append(path)
    return out


def run_examples(directory: Path, update: bool = False) -> tuple[int, list[dict]]:
    inputs = sorted(directory.glob("*.json"))
    if not inputs:
        raise UsageError(f"no corpus inputs in {directory}")
    expected_dir = directory / "expected"
    results = []
    for path in inputs:
        name = path.stem
        exp_path = expected_dir / f"{name}.json"
        try:
            actual = json.loads(dumps(case_doc(load_input(path))))
        except (InputError, ExpansionError, LinalgError) as exc:
            results.append({"case": name, "passed": False, "diff": [f"error: {exc}"]})
            continue
        if update:
            expected_dir.mkdir(exist_ok=True)
            exp_path.write_text(dumps(actual, pretty=True))
        if not exp_path.exists():
            results.append({"case": name, "passed": False, "diff": ["missing expected report"]})
            continue
        expected = parse_json(exp_path.read_text())
        diff = _json_paths_differ(expected, actual)
        results.append({"case": name, "passed": not diff, "diff": diff})
    status = EXIT_OK if all(r["passed"] for r in results) else EXIT_FAILED
    return status, results


def _table(results: list[dict]) -> str:
    width = max(len(r["case"]) for r in results)
    lines = []
    for r in results:
        lines.append(f"{r['case']:<{width}}  {'PASS' if r['passed'] else 'FAIL'}")
        for d in r["diff"]:
            lines.append(f"{'':<{width}}    differs at {d}")
    passed = sum(r["passed"] for r in results)
    lines.append(f"{passed}/{len(results)} cases passed")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", default=None,
                     help="compact JSON output (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON output")

    parser = _Parser(prog="tropical-rubber",
                     description="Validate tropical expansions and compute their rubber actions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (
        ("validate", "check the subdivision and expansion axioms"),
        ("positions", "tropical position map of every vertex"),
        ("rubber", "full rubber action report"),
        ("strata", "strata over the base, asymptotic complex and tube vertices"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input")

    p = sub.add_parser("fibre", parents=[common], help="fibre complex over a base point")
    p.add_argument("input")
    p.add_argument("--point", required=True, help='base point, e.g. "1,1" or "1/2,3"')
    p.add_argument("--figure", metavar="PATH", help="also write an SVG drawing (rank-2 sigma only)")

    p = sub.add_parser("stability", parents=[common], help="stability verdict for one map")
    p.add_argument("input")
    p.add_argument("--map", required=True, dest="map_name")

    p = sub.add_parser("examples", parents=[common], help="run the bundled regression corpus")
    p.add_argument("--corpus", type=Path, help="directory of inputs (default: bundled corpus)")
    p.add_argument("--update", action="store_true", help="rewrite the expected reports first")
    return parser


def _emit(doc, pretty: Optional[bool]) -> None:
    sys.stdout.write(dumps(doc, pretty=bool(pretty)))


def _diagnostic(kind: str, message: str, **extra) -> dict:
    return {"error": {"type": kind, "message": message, **extra}}


def dispatch(args) -> int:
    if args.command == "examples":
        status, results = run_examples(args.corpus or corpus_dir(), update=args.update)
        if args.pretty is None:
            sys.stdout.write(_table(results))
        else:
            _emit({"command": "examples", "results": results, "passed": status == EXIT_OK}, args.pretty)
        return status

    if args.command == "validate":
        model = load_input(args.input, require_valid=False)
        doc = validate_doc(model)
        _emit(doc, args.pretty)
        return EXIT_OK if doc["valid"] else EXIT_FAILED

    model = load_input(args.input)
    if args.command == "positions":
        _emit(positions_doc(model), args.pretty)
    elif args.command == "rubber":
        _emit(rubber_doc(model), args.pretty)
    elif args.command == "strata":
        _emit(strata_doc(model), args.pretty)
    elif args.command == "fibre":
        point = parse_point(args.point)
        doc = fibre_doc(model, point)
        if args.figure:
            if model.expansion.n_sigma != 2:
                raise UsageError("--figure needs a rank-2 sigma")
            from .expansion import fibre
            svg = fibre_svg(fibre(model.expansion, point), labels=model.expansion.sigma_labels)
            Path(args.figure).write_text(svg)
            doc["figure"] = args.figure
        _emit(doc, args.pretty)
    elif args.command == "stability":
        if args.map_name not in model.maps:
            raise UsageError(f"no map named {args.map_name!r}; available: {sorted(model.maps)}")
        doc = stability_doc(model, args.map_name)
        _emit(doc, args.pretty)
        return EXIT_OK if doc["stable"] else EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    pretty = None
    try:
        args = parser.parse_args(argv)
        pretty = args.pretty
        return dispatch(args)
    except UsageError as exc:
        _emit(_diagnostic("UsageError", str(exc)), pretty)
        return EXIT_USAGE
    except ValidationError as exc:
        doc = _diagnostic(exc.kind, exc.message, key=exc.key)
        if exc.detail is not None:
            doc["error"]["detail"] = exc.detail
        if exc.report is not None:
            doc["report"] = validation_json(exc.report)
        _emit(doc, pretty)
        return EXIT_FAILED
    except InputError as exc:
        _emit({"error": exc.diagnostic()}, pretty)
        return exc.exit_status
    except PointOutsideBase as exc:
        _emit(_diagnostic("PointOutsideBase", str(exc)), pretty)
        return EXIT_USAGE
    except (ExpansionError, LinalgError) as exc:
        _emit(_diagnostic(type(exc).__name__, str(exc)), pretty)
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
