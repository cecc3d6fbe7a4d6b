"""Command-line front end.

Subcommands compose the pipeline: ``validate`` -> ``personhood`` ->
``measure`` -> report / plot data, plus ``generate`` (synthetic logs) and
``classify`` (source leaning).  Every flag has a config-file equivalent
(``--config`` JSON, keys = long flag names with dashes as underscores);
explicit flags win.

Exit codes: 0 success, 1 input or validation error, 2 internal failure.
Row-level measure degeneracies are report content, not process failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Sequence

from infoseg.errors import ParseError, ValidationError
from infoseg.io import (
    KIND_EXACT_COUNTS,
    KIND_MEMBERSHIP_LOG,
    KIND_PERSONHOOD_TABLE,
    KIND_SOURCE_COMPOSITIONS,
    KIND_UNION_OBSERVATIONS,
    emit_membership_log,
    emit_personhood_table,
    emit_plot_data,
    emit_report,
    emit_source_mapping,
    emit_unit_summary,
    load_dataset,
    parse_unit_space,
)
from infoseg.leaning import LeaningThresholds, map_sources, unit_counts
from infoseg.measures import ALL_MEASURES, measure_all
from infoseg.model import UnitSpace
from infoseg.personhood import (
    exact_counts_from_memberships,
    exact_counts_from_union_observations,
    personhoods,
)
from infoseg.synthgen import generate, parse_generator_config


class _Parser(argparse.ArgumentParser):
    # bad usage is an input error (exit 1), not argparse's default exit 2
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise ValidationError(f"{self.prog}: {message}")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise ParseError("flag config must be a JSON object", path=path)
    return obj


def _opt(args: argparse.Namespace, config: dict, name: str, default=None):
    """Flag value if given, else config-file value, else default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    return config.get(name, default)


def _load_space(path: str | None) -> UnitSpace | None:
    if path is None:
        return None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=path) from exc
    return parse_unit_space(text, path)


def _personhood_table(parsed, kind: str, space: UnitSpace | None, population: float | None):
    if kind == KIND_PERSONHOOD_TABLE:
        if population is not None:
            parsed = dataclasses.replace(parsed, population=float(population))
        return parsed
    unit_ids = space.unit_ids if space is not None else None
    if kind == KIND_MEMBERSHIP_LOG:
        counts = exact_counts_from_memberships(parsed, unit_ids=unit_ids)
    elif kind == KIND_EXACT_COUNTS:
        counts = parsed
    elif kind == KIND_UNION_OBSERVATIONS:
        counts = exact_counts_from_union_observations(parsed)
    else:
        raise ValidationError(f"dataset kind {kind!r} carries no personhood data")
    return personhoods(counts, population_override=population)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    failures = 0
    space_path = _opt(args, config, "unit_space")
    if space_path is not None:
        try:
            space = _load_space(space_path)
            print(f"OK unit-space {space_path} ({space.m} units)")
        except ValidationError as exc:
            print(f"ERROR {space_path}: {exc}")
            failures += 1
    for dataset in args.datasets:
        try:
            parsed, manifest = load_dataset(dataset)
            print(f"OK {manifest.kind} {dataset} (sha256 {manifest.sha256[:12]})")
        except ValidationError as exc:
            print(f"ERROR {dataset}: {exc}")
            failures += 1
    return 1 if failures else 0


def cmd_personhood(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    space = _load_space(_opt(args, config, "unit_space"))
    parsed, manifest = load_dataset(args.dataset)
    population = _opt(args, config, "population")
    table = _personhood_table(parsed, manifest.kind, space, population)
    _write(emit_personhood_table(table), _opt(args, config, "out"))
    return 0


def _parse_pairs(spec: str) -> list[tuple[str, str]] | None:
    if spec == "all":
        return None
    pairs = []
    for chunk in spec.split(","):
        parts = chunk.split(":")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValidationError(f"bad pair {chunk!r}, expected GROUP:GROUP")
        pairs.append((parts[0], parts[1]))
    return pairs


def cmd_measure(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    space = _load_space(_opt(args, config, "unit_space"))
    parsed, manifest = load_dataset(args.dataset)
    table = _personhood_table(parsed, manifest.kind, space, _opt(args, config, "population"))
    if space is None:
        space = UnitSpace(unit_ids=table.unit_ids)  # bare: geometry errors surface per row

    variants = {"classical": ("classical",), "paper": ("paper",), "both": ("classical", "paper")}[
        _opt(args, config, "variants", "classical")
    ]
    measures_opt = _opt(args, config, "measures", "all")
    measures = None if measures_opt == "all" else tuple(measures_opt.split(","))
    pairs = _parse_pairs(_opt(args, config, "pairs", "all"))

    report = measure_all(table, space, pairs=pairs, variants=variants, measures=measures)
    _write(emit_report(report, _opt(args, config, "format", "json")), _opt(args, config, "out"))
    plot = _opt(args, config, "plot")
    if plot is not None:
        _write(emit_plot_data(report, plot), _opt(args, config, "plot_out"))
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    parsed, manifest = load_dataset(args.dataset)
    if manifest.kind != KIND_SOURCE_COMPOSITIONS:
        raise ValidationError(f"classify needs source compositions, got {manifest.kind}")
    thresholds_opt = _opt(args, config, "thresholds")
    if thresholds_opt is None:
        thresholds = LeaningThresholds()
    else:
        try:
            cuts = [float(x) for x in str(thresholds_opt).split(",")]
        except ValueError:
            raise ValidationError(f"bad thresholds {thresholds_opt!r}") from None
        if len(cuts) != 4:
            raise ValidationError("thresholds must be four comma-separated numbers lo_outer,lo_inner,hi_inner,hi_outer")
        thresholds = LeaningThresholds(*cuts)
    mapping = map_sources(parsed, thresholds)
    if _opt(args, config, "summary", False):
        _write(emit_unit_summary(unit_counts(mapping)), _opt(args, config, "out"))
    else:
        _write(emit_source_mapping(mapping, _opt(args, config, "format", "json")), _opt(args, config, "out"))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    try:
        text = Path(args.generator_config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=args.generator_config) from exc
    gen_config = parse_generator_config(text, args.generator_config)
    seed = _opt(args, config, "seed")
    if seed is not None:
        gen_config = dataclasses.replace(gen_config, seed=int(seed))
    _write(emit_membership_log(generate(gen_config)), _opt(args, config, "out"))
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infoseg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--unit-space", dest="unit_space", metavar="PATH", help="unit-space config JSON")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "tsv"), help="report format (default: json)")
        p.add_argument("--config", metavar="PATH", help="JSON file of flag defaults; flags win")

    p = sub.add_parser("validate", help="parse inputs and report diagnostics")
    p.add_argument("datasets", nargs="*", metavar="DATASET")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("personhood", help="compute the per-group personhood table")
    p.add_argument("dataset", metavar="DATASET")
    common(p)
    p.add_argument("--population", type=float, help="population override (>= loaded population)")
    p.set_defaults(func=cmd_personhood)

    p = sub.add_parser("measure", help="evaluate segregation measures")
    p.add_argument("dataset", metavar="DATASET")
    common(p)
    p.add_argument("--population", type=float, help="population override (>= loaded population)")
    p.add_argument("--measures", metavar="LIST", help=f"comma list from {','.join(ALL_MEASURES)} (default: all)")
    p.add_argument("--variants", choices=("paper", "classical", "both"), help="formula variant(s) (default: classical)")
    p.add_argument("--pairs", metavar="PAIRS", help="'all' or comma list of GROUP:GROUP (default: all)")
    p.add_argument("--plot", metavar="KIND", help="also emit plot CSV: evenness-by-group or exposure-of-group:GROUP")
    p.add_argument("--plot-out", dest="plot_out", metavar="PATH", help="plot CSV file (default: stdout)")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("classify", help="map sources to units by audience leaning")
    p.add_argument("dataset", metavar="COMPOSITIONS")
    common(p)
    p.add_argument("--thresholds", metavar="T,T,T,T", help="lo_outer,lo_inner,hi_inner,hi_outer")
    p.add_argument("--summary", action="store_true", default=None, help="emit per-unit source counts instead of the mapping")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", help="generate a synthetic membership log")
    p.add_argument("generator_config", metavar="CONFIG")
    common(p)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # noqa: BLE001 - contract: internal failures exit 2
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
