"""Command-line front end.

Four subcommands:

* ``classify SPECFILE`` — run the full defect analysis of an extension spec
  (equal-characteristic equation or synthetic jump) and emit a report;
* ``group GROUP EXPR…`` — evaluate one segment-calculus expression
  (``upclose``, ``scale``, ``negate``, ``shift``, ``lemma_sd``, ``is_prime``)
  over a value group given in shorthand like ``QxZ[1/2]``;
* ``kummer-check SPECFILE`` — analyze mixed-characteristic value data;
* ``examples list|run`` — enumerate or run the bundled example specs.

Exit codes: 0 for a coherent report, 2 when the cut detection is
inconclusive at the requested precision, 1 for any error.  JSON output uses
sorted keys so repeated runs with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from typing import Optional

from .artin_schreier import (
    ArtinSchreierExtension,
    classify_cut,
    classify_extension,
    sample_ramification_values,
)
from .conditions import CONDITION_NAMES
from .errors import DefectlabError, InconclusiveCutError, SpecFileError
from .groups import group_from_json, parse_group
from .kummer import KummerData, independence_conditions
from .segments import (
    FinalSegment,
    Ideal,
    InitialSegment,
    prime_subgroup,
    scale_invariant_shape,
    upward_closure,
)
from .series import BaseField
from .trace import verify_trace_ideal

_DEFAULT_TARGET = 10


# -- spec-file loading ---------------------------------------------------------------


def _load_spec(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(
            f"spec file {path} is not valid JSON (line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(data, dict):
        raise SpecFileError(f"spec file {path} must hold a JSON object")
    return data


def _require_prime(data: dict) -> int:
    p = data.get("p")
    if not isinstance(p, int):
        raise SpecFileError('spec needs an integer "p"')
    return p


def _parse_precision(text: Optional[str]) -> int:
    """Precision flag: a p-power exponent like ``p^-10`` or a bare exponent."""
    if text is None:
        return _DEFAULT_TARGET
    body = text.strip().lower()
    if body.startswith("p^"):
        body = body[2:]
    try:
        value = int(body)
    except ValueError:
        raise SpecFileError(
            f"cannot read precision {text!r}; use an exponent like 12 or p^-12"
        ) from None
    exponent = abs(value)
    if exponent < 1:
        raise SpecFileError("precision exponent must be at least 1")
    return exponent


# -- report assembly ------------------------------------------------------------------


def _filter_conditions(report_dict: dict, names: Optional[list[str]]) -> dict:
    if not names:
        return report_dict
    table = report_dict.get("report", {}).get("conditions")
    if table is None:
        return report_dict
    table["conditions"] = [
        entry for entry in table["conditions"] if entry["name"] in names
    ]
    return report_dict


def _classify_field_spec(data: dict, target: int, samples: int, seed: int) -> dict:
    p = _require_prime(data)
    base = BaseField.from_json(data.get("base"), p)
    rhs_text = data.get("as_rhs")
    if not isinstance(rhs_text, str):
        raise SpecFileError('an equation spec needs an "as_rhs" series literal')
    extension = ArtinSchreierExtension(base, base.series(rhs_text))
    classification = classify_extension(extension, target=target)
    result = classification.as_dict()
    result["kind"] = "equation"
    result["verdict"] = (
        "independent" if classification.report.independent else "dependent"
    )
    if samples > 0:
        rng = random.Random(seed)
        ramification = sample_ramification_values(
            extension,
            classification.approximation,
            classification.report.jump,
            count=samples,
            rng=rng,
        )
        trace_report = verify_trace_ideal(
            extension,
            classification.approximation,
            classification.report.jump,
            samples=samples,
            witnesses=20,
            rng=rng,
        )
        result["ramification_samples"] = ramification.as_dict()
        result["trace_samples"] = trace_report.as_dict()
    return result


def _classify_synthetic_spec(data: dict) -> dict:
    p = _require_prime(data)
    group = group_from_json(data.get("group"))
    literal = data.get("sigma_e")
    if not isinstance(literal, str):
        raise SpecFileError('a synthetic-cut spec needs a "sigma_e" segment literal')
    jump = FinalSegment.from_literal(group, literal)
    report = classify_cut(jump, p=p)
    return {
        "kind": "synthetic_cut",
        "verdict": "independent" if report.independent else "dependent",
        "report": report.as_dict(),
    }


def _classify_spec(data: dict, target: int, samples: int, seed: int) -> dict:
    if "as_rhs" in data:
        return _classify_field_spec(data, target, samples, seed)
    if "sigma_e" in data:
        return _classify_synthetic_spec(data)
    if "vp" in data and "distance" in data:
        return _kummer_report(data)
    raise SpecFileError(
        'spec must contain "as_rhs" (equation), "sigma_e" (synthetic cut), '
        'or "vp"+"distance" (mixed-characteristic data)'
    )


def _kummer_report(data: dict) -> dict:
    p = _require_prime(data)
    group = group_from_json(data.get("group"))
    if "vp" not in data:
        raise SpecFileError('mixed-characteristic data needs a "vp" value')
    vp = group.element(data["vp"])
    literal = data.get("distance")
    if not isinstance(literal, str):
        raise SpecFileError('mixed-characteristic data needs a "distance" literal')
    distance = InitialSegment.from_literal(group, literal)
    outcome = independence_conditions(KummerData(p=p, group=group, vp=vp, distance=distance))
    result = outcome.as_dict()
    result["kind"] = "mixed_characteristic"
    result["verdict"] = (
        "independent" if outcome.report.independent else "dependent"
    )
    return result


# -- rendering -------------------------------------------------------------------------


def _emit(result: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(result, indent=2, sort_keys=True))
        return
    for line in _text_lines(result, indent=0):
        print(line)


def _text_lines(value, indent: int) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for key in sorted(value):
            inner = value[key]
            if isinstance(inner, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(inner, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(inner)}")
    elif isinstance(value, list):
        for inner in value:
            if isinstance(inner, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text_lines(inner, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(inner)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


# -- group expression DSL ----------------------------------------------------------------


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise SpecFileError(f"expected an integer, got {text!r}") from None


def _parse_any_segment(group, literal: str):
    text = literal.strip()
    if text.startswith("<"):
        return InitialSegment.from_literal(group, text)
    return FinalSegment.from_literal(group, text)


def _run_group_expression(group_text: str, expr: list[str]) -> dict:
    group = parse_group(group_text)
    if not expr:
        raise SpecFileError("group expression is empty")
    verb, args = expr[0], expr[1:]
    if verb == "upclose":
        if not args:
            raise SpecFileError("upclose needs at least one point")
        segment = upward_closure(group, [group.element(a) for a in args])
        return {"verb": verb, "result": segment.to_literal()}
    if verb == "scale":
        if len(args) != 2:
            raise SpecFileError("scale needs a multiplier and a segment literal")
        segment = _parse_any_segment(group, args[1])
        return {"verb": verb, "result": segment.scale(_parse_int(args[0])).to_literal()}
    if verb == "negate":
        if len(args) != 1:
            raise SpecFileError("negate needs a segment literal")
        segment = _parse_any_segment(group, args[0])
        return {"verb": verb, "result": segment.negate().to_literal()}
    if verb == "shift":
        if len(args) != 2:
            raise SpecFileError("shift needs a point and a segment literal")
        segment = _parse_any_segment(group, args[1])
        return {"verb": verb, "result": segment.shift(group.element(args[0])).to_literal()}
    if verb == "lemma_sd":
        if len(args) not in (1, 2):
            raise SpecFileError("lemma_sd needs a segment literal and optional multiplier")
        segment = FinalSegment.from_literal(group, args[0])
        multiplier = _parse_int(args[1]) if len(args) == 2 else 2
        outcome = scale_invariant_shape(segment, multiplier)
        return {
            "verb": verb,
            "matches": outcome.matches,
            "subgroup": None if outcome.subgroup is None else outcome.subgroup.describe(),
            "scaled": outcome.scaled.to_literal(),
        }
    if verb == "is_prime":
        if len(args) != 1:
            raise SpecFileError("is_prime needs a segment literal")
        ideal = Ideal(FinalSegment.from_literal(group, args[0]))
        subgroup = prime_subgroup(ideal)
        return {
            "verb": verb,
            "prime": subgroup is not None,
            "subgroup": None if subgroup is None else subgroup.describe(),
        }
    raise SpecFileError(
        f"unknown verb {verb!r}; expected upclose, scale, negate, shift, "
        "lemma_sd, or is_prime"
    )


# -- bundled examples ----------------------------------------------------------------------


def _example_names() -> list[str]:
    container = resources.files("defectlab") / "examples"
    return sorted(
        entry.name[: -len(".json")]
        for entry in container.iterdir()
        if entry.name.endswith(".json")
    )


def _load_example(name: str) -> dict:
    container = resources.files("defectlab") / "examples"
    entry = container / f"{name}.json"
    try:
        text = entry.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError):
        raise SpecFileError(
            f"no bundled example named {name!r}; see `defectlab examples list`"
        ) from None
    data = json.loads(text)
    if not isinstance(data, dict):
        raise SpecFileError(f"bundled example {name!r} is malformed")
    return data


# -- argument parsing -------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectlab",
        description="Defect analysis of degree-p valued-field extensions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", help="classify an extension spec file")
    classify.add_argument("specfile", help="path to a JSON spec")
    _add_run_flags(classify)

    group = sub.add_parser("group", help="evaluate a segment-calculus expression")
    group.add_argument("group", help='value group shorthand, e.g. "QxZ[1/2]"')
    group.add_argument("expr", nargs=argparse.REMAINDER, help="verb and arguments")
    group.add_argument("--format", choices=("text", "json"), default="text")

    kummer = sub.add_parser(
        "kummer-check", help="analyze mixed-characteristic value data"
    )
    kummer.add_argument("specfile", help="path to a JSON value-data spec")
    kummer.add_argument("--format", choices=("text", "json"), default="text")
    kummer.add_argument(
        "--conditions",
        help="comma-separated condition names to include in the output table",
    )

    examples = sub.add_parser("examples", help="list or run the bundled examples")
    examples_sub = examples.add_subparsers(dest="examples_command", required=True)
    examples_sub.add_parser("list", help="list bundled example names")
    run = examples_sub.add_parser("run", help="classify a bundled example")
    run.add_argument("name", nargs="?", help="example name from `examples list`")
    run.add_argument("--all", action="store_true", help="run every bundled example")
    _add_run_flags(run)
    return parser


def _add_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--precision",
        help="approximation depth: an exponent like 12 or p^-12 (default p^-10)",
    )
    sub.add_argument(
        "--samples",
        type=int,
        default=0,
        help="number of random samples for the jump and trace checks",
    )
    sub.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument(
        "--conditions",
        help="comma-separated condition names to include in the output table",
    )


def _condition_filter(flag: Optional[str]) -> Optional[list[str]]:
    if flag is None:
        return None
    names = [name.strip() for name in flag.split(",") if name.strip()]
    unknown = [name for name in names if name not in CONDITION_NAMES]
    if unknown:
        raise SpecFileError(
            f"unknown condition name(s) {', '.join(unknown)}; "
            f"expected a subset of {', '.join(CONDITION_NAMES)}"
        )
    return names or None


# -- entry point ----------------------------------------------------------------------------


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except InconclusiveCutError as exc:
        bracket = None
        if exc.bracket is not None:
            low, high = exc.bracket
            bracket = [str(low), None if high is None else str(high)]
        result = {
            "verdict": "inconclusive",
            "message": str(exc),
            "bracket": bracket,
        }
        _emit(result, getattr(args, "format", "text"))
        return 2
    except DefectlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "classify":
        target = _parse_precision(args.precision)
        result = _classify_spec(
            _load_spec(args.specfile), target, args.samples, args.seed
        )
        _emit(_filter_conditions(result, _condition_filter(args.conditions)), args.format)
        return 0
    if args.command == "group":
        _emit(_run_group_expression(args.group, args.expr), args.format)
        return 0
    if args.command == "kummer-check":
        result = _kummer_report(_load_spec(args.specfile))
        _emit(_filter_conditions(result, _condition_filter(args.conditions)), args.format)
        return 0
    if args.command == "examples":
        return _dispatch_examples(args)
    raise SpecFileError(f"unknown command {args.command!r}")


def _dispatch_examples(args: argparse.Namespace) -> int:
    if args.examples_command == "list":
        for name in _example_names():
            print(name)
        return 0
    if args.examples_command == "run":
        target = _parse_precision(args.precision)
        names: list[str]
        if args.all:
            names = _example_names()
        elif args.name:
            names = [args.name]
        else:
            raise SpecFileError("examples run needs a name or --all")
        exit_code = 0
        for name in names:
            data = _load_example(name)
            result = _classify_spec(data, target, args.samples, args.seed)
            result["example"] = name
            _emit(
                _filter_conditions(result, _condition_filter(args.conditions)),
                args.format,
            )
        return exit_code
    raise SpecFileError("examples needs `list` or `run`")


if __name__ == "__main__":  # pragma: no cover - module execution hook
    sys.exit(main())
