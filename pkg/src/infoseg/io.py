"""File grammars: dataset ingestion, report and plot-data emission.

Person-level data travels as CSV; set-valued data (access sets, union
observations) as JSON objects with a ``kind`` discriminator.  Parsers take
text (callers own file access), reject malformed input with line/field
locations, and never repair — the only two sanctioned fixups are the 1e-6
audience renormalization and the duplicate exact-count merge (which warns).

All emitters are deterministic: same value in, same bytes out.  Report and
plot numbers are rendered with 6 significant digits; personhood tables are
emitted at full precision because they are re-ingestible inputs.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from infoseg.errors import ParseError, ValidationError
from infoseg.leaning import AudienceComposition
from infoseg.measures import (
    MEASURE_EVENNESS,
    MEASURE_JOINT_EXPOSURE,
    VARIANT_CLASSICAL,
    MeasureReport,
    MeasureRow,
)
from infoseg.model import (
    POLITICAL_UNITS,
    ExactSetCounts,
    PersonhoodTable,
    UnitSpace,
    center_order_from_unit,
    validate_unit_space,
)
from infoseg.personhood import ObservationTable

KIND_MEMBERSHIP_LOG = "membership-log"
KIND_EXACT_COUNTS = "exact-set-counts"
KIND_UNION_OBSERVATIONS = "union-observations"
KIND_SOURCE_COMPOSITIONS = "source-compositions"
KIND_PERSONHOOD_TABLE = "personhood-table"
KIND_UNIT_SPACE = "unit-space"

DATASET_KINDS = (
    KIND_MEMBERSHIP_LOG,
    KIND_EXACT_COUNTS,
    KIND_UNION_OBSERVATIONS,
    KIND_SOURCE_COMPOSITIONS,
    KIND_PERSONHOOD_TABLE,
    KIND_UNIT_SPACE,
)

MEMBERSHIP_HEADER = ("person_id", "group_id", "unit_id")
COMPOSITION_HEADER = ("source_id", "f_vc", "f_c", "f_m", "f_l", "f_vl")


@dataclass(frozen=True)
class DatasetManifest:
    """What was loaded: kind, origin, axis label, and a content checksum."""

    kind: str
    path: str | None
    axis: str | None
    sha256: str


# ---------------------------------------------------------------------------
# parsing helpers


def _json_object(text: str, path: str | None, expected_kind: str | None = None) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object at top level", path=path)
    kind = obj.get("kind")
    if expected_kind is not None and kind != expected_kind:
        raise ParseError(f"expected kind {expected_kind!r}, file declares {kind!r}", path=path)
    return obj


def _field(obj: Mapping, name: str, path: str | None):
    if name not in obj:
        raise ParseError(f"missing field {name!r}", path=path)
    return obj[name]


def _csv_rows(text: str, header: tuple[str, ...], path: str | None):
    reader = csv.reader(_io.StringIO(text))
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError(f"empty file, expected header {','.join(header)}", path=path) from None
    if tuple(h.strip() for h in first) != header:
        raise ParseError(
            f"bad header {','.join(first)!r}, expected {','.join(header)}", path=path, line=1
        )
    for line, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", path=path, line=line)
        yield line, tuple(field.strip() for field in row)


# ---------------------------------------------------------------------------
# dataset parsers


def parse_membership_log(text: str, path: str | None = None) -> list[tuple[str, str, str]]:
    """CSV ``person_id,group_id,unit_id`` -> deduplicated rows, stable order."""
    rows: list[tuple[str, str, str]] = []
    seen: set[tuple[str, str, str]] = set()
    group_of: dict[str, tuple[str, int]] = {}
    for line, (person, group, unit) in _csv_rows(text, MEMBERSHIP_HEADER, path):
        for what, value in (("person_id", person), ("group_id", group), ("unit_id", unit)):
            if not value:
                raise ParseError(f"empty {what}", path=path, line=line)
        previous = group_of.get(person)
        if previous is not None and previous[0] != group:
            raise ParseError(
                f"person {person!r} in two groups ({previous[0]!r} at line {previous[1]}, {group!r} here)",
                path=path,
                line=line,
            )
        group_of.setdefault(person, (group, line))
        row = (person, group, unit)
        if row not in seen:
            seen.add(row)
            rows.append(row)
    return rows


def emit_membership_log(rows: Iterable[tuple[str, str, str]]) -> str:
    out = [",".join(MEMBERSHIP_HEADER)]
    out.extend(",".join(row) for row in rows)
    return "\n".join(out) + "\n"


def parse_exact_counts(text: str, path: str | None = None) -> ExactSetCounts:
    """JSON records ``{group, access_set, count}`` -> validated exact counts.

    Duplicate (group, access_set) records are merged by summation with a
    warning; everything else malformed is rejected.
    """
    obj = _json_object(text, path, KIND_EXACT_COUNTS)
    records = _field(obj, "records", path)
    counts: dict[str, dict[frozenset[str], int]] = {}
    for i, rec in enumerate(records):
        where = f"records[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(f"{where}: expected an object", path=path)
        group = _field(rec, "group", path)
        access = _field(rec, "access_set", path)
        count = _field(rec, "count", path)
        if not isinstance(access, list) or not access:
            raise ParseError(f"{where}: empty access set", path=path)
        if not isinstance(count, int) or isinstance(count, bool) or count < 0:
            raise ParseError(f"{where}: count must be a nonnegative integer", path=path)
        subset = frozenset(access)
        if len(subset) != len(access):
            raise ParseError(f"{where}: access set lists a unit twice", path=path)
        per_group = counts.setdefault(group, {})
        if subset in per_group:
            warnings.warn(
                f"duplicate exact-count record for group {group!r}, set {sorted(subset)}; counts summed",
                stacklevel=2,
            )
        per_group[subset] = per_group.get(subset, 0) + count
    unit_ids = obj.get("units")
    if unit_ids is None:
        unit_ids = sorted({u for sets in counts.values() for t in sets for u in t})
    try:
        return ExactSetCounts(tuple(unit_ids), counts, axis=obj.get("axis"))
    except ValidationError as exc:
        raise ParseError(str(exc), path=path) from exc


def parse_union_observations(text: str, path: str | None = None) -> ObservationTable:
    """JSON records ``{group, units, reach}`` -> complete union-reach table."""
    obj = _json_object(text, path, KIND_UNION_OBSERVATIONS)
    unit_ids = tuple(_field(obj, "units", path))
    records = _field(obj, "records", path)
    reach: dict[str, dict[frozenset[str], int]] = {}
    for i, rec in enumerate(records):
        where = f"records[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(f"{where}: expected an object", path=path)
        group = _field(rec, "group", path)
        units = _field(rec, "units", path)
        value = _field(rec, "reach", path)
        if not isinstance(units, list) or not units:
            raise ParseError(f"{where}: empty unit subset", path=path)
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ParseError(f"{where}: reach must be a nonnegative integer", path=path)
        subset = frozenset(units)
        per_group = reach.setdefault(group, {})
        if subset in per_group:
            raise ParseError(f"{where}: duplicate observation for group {group!r}, subset {sorted(subset)}", path=path)
        per_group[subset] = value
    try:
        return ObservationTable(unit_ids, reach, axis=obj.get("axis"))
    except ValidationError as exc:
        raise ParseError(str(exc), path=path) from exc


def parse_unit_space(text: str, path: str | None = None) -> UnitSpace:
    """Structured unit-space config -> validated :class:`UnitSpace`.

    ``positions``/``topic_counts`` may be mappings keyed by unit id or lists
    aligned with ``units``.  Give at most one of ``center`` (an id; the order
    is derived by ascending distance, unit-id tiebreak) and ``center_order``.
    """
    obj = _json_object(text, path)
    if "kind" in obj and obj["kind"] != KIND_UNIT_SPACE:
        raise ParseError(f"expected kind {KIND_UNIT_SPACE!r}, file declares {obj['kind']!r}", path=path)
    unit_ids = tuple(_field(obj, "units", path))

    def aligned(name: str) -> np.ndarray | None:
        value = obj.get(name)
        if value is None:
            return None
        if isinstance(value, dict):
            missing = [u for u in unit_ids if u not in value]
            if missing:
                raise ParseError(f"{name} missing entries for {missing}", path=path)
            extra = sorted(set(value) - set(unit_ids))
            if extra:
                raise ParseError(f"{name} has entries for unknown units {extra}", path=path)
            return np.array([value[u] for u in unit_ids], dtype=float)
        return np.asarray(value, dtype=float)

    positions = aligned("positions")
    if positions is not None and positions.ndim == 1:
        positions = positions[:, None]
    distances = obj.get("distances")
    if distances is not None:
        distances = np.asarray(distances, dtype=float)
    center_order = obj.get("center_order")
    center = obj.get("center")
    if center is not None and center_order is not None:
        raise ParseError("give either center or center_order, not both", path=path)
    try:
        space = validate_unit_space(
            UnitSpace(
                unit_ids=unit_ids,
                positions=positions,
                distances=distances,
                topic_counts=aligned("topic_counts"),
                center_order=tuple(center_order) if center_order is not None else None,
            )
        )
        if center is not None:
            space = validate_unit_space(
                UnitSpace(
                    unit_ids=space.unit_ids,
                    positions=space.positions,
                    distances=space.distances,
                    topic_counts=space.topic_counts,
                    center_order=center_order_from_unit(space, center),
                )
            )
        return space
    except ValidationError as exc:
        raise ParseError(str(exc), path=path) from exc


def parse_source_compositions(text: str, path: str | None = None) -> list[tuple[str, AudienceComposition]]:
    """CSV ``source_id,f_vc,f_c,f_m,f_l,f_vl`` -> (id, composition) pairs."""
    sources: list[tuple[str, AudienceComposition]] = []
    seen: dict[str, int] = {}
    for line, row in _csv_rows(text, COMPOSITION_HEADER, path):
        source_id = row[0]
        if not source_id:
            raise ParseError("empty source_id", path=path, line=line)
        if source_id in seen:
            raise ParseError(
                f"duplicate source id {source_id!r} (first at line {seen[source_id]})",
                path=path,
                line=line,
            )
        seen[source_id] = line
        try:
            fractions = [float(v) for v in row[1:]]
        except ValueError:
            raise ParseError(f"non-numeric fraction in {row[1:]}", path=path, line=line) from None
        try:
            sources.append((source_id, AudienceComposition(*fractions)))
        except ValidationError as exc:
            raise ParseError(str(exc), path=path, line=line) from exc
    return sources


def parse_personhood_table(text: str, path: str | None = None) -> PersonhoodTable:
    obj = _json_object(text, path, KIND_PERSONHOOD_TABLE)
    unit_ids = tuple(_field(obj, "units", path))
    groups = _field(obj, "groups", path)
    personhoods = _field(obj, "personhoods", path)
    sizes = _field(obj, "group_sizes", path)
    try:
        return PersonhoodTable(
            unit_ids=unit_ids,
            group_ids=tuple(groups),
            personhoods=np.array([personhoods[g] for g in groups], dtype=float).reshape(
                len(groups), len(unit_ids)
            ),
            group_sizes=np.array([sizes[g] for g in groups], dtype=float),
            population=float(_field(obj, "population", path)),
            axis=obj.get("axis"),
        )
    except (ValidationError, KeyError, TypeError) as exc:
        raise ParseError(f"bad personhood table: {exc}", path=path) from exc


def emit_personhood_table(table: PersonhoodTable) -> str:
    """Full-precision JSON, re-ingestible by :func:`parse_personhood_table`."""
    payload = {
        "kind": KIND_PERSONHOOD_TABLE,
        "axis": table.axis,
        "units": list(table.unit_ids),
        "groups": list(table.group_ids),
        "personhoods": {
            g: [float(x) for x in table.personhoods[i]] for i, g in enumerate(table.group_ids)
        },
        "group_sizes": {g: float(table.group_sizes[i]) for i, g in enumerate(table.group_ids)},
        "population": float(table.population),
        "digest": table.digest(),
    }
    return json.dumps(payload, indent=2) + "\n"


# ---------------------------------------------------------------------------
# kind sniffing


def sniff_kind(text: str, path: str | None = None) -> str:
    """Identify a dataset file by its declared JSON kind or CSV header."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        kind = _json_object(text, path).get("kind")
        if kind not in DATASET_KINDS:
            raise ParseError(f"unknown dataset kind {kind!r}", path=path)
        return kind
    header = tuple(h.strip() for h in stripped.splitlines()[0].split(",")) if stripped else ()
    if header == MEMBERSHIP_HEADER:
        return KIND_MEMBERSHIP_LOG
    if header == COMPOSITION_HEADER:
        return KIND_SOURCE_COMPOSITIONS
    raise ParseError(
        "unrecognized dataset: expected a JSON object with a 'kind' field or a known CSV header",
        path=path,
    )


_PARSERS = {
    KIND_MEMBERSHIP_LOG: parse_membership_log,
    KIND_EXACT_COUNTS: parse_exact_counts,
    KIND_UNION_OBSERVATIONS: parse_union_observations,
    KIND_SOURCE_COMPOSITIONS: parse_source_compositions,
    KIND_PERSONHOOD_TABLE: parse_personhood_table,
    KIND_UNIT_SPACE: parse_unit_space,
}


def load_dataset(path: str | Path) -> tuple[object, DatasetManifest]:
    """Read, sniff, and parse a dataset file; returns (parsed, manifest)."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=str(p)) from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8: {exc}", path=str(p)) from exc
    kind = sniff_kind(text, str(p))
    parsed = _PARSERS[kind](text, str(p))
    axis = getattr(parsed, "axis", None)
    manifest = DatasetManifest(
        kind=kind, path=str(p), axis=axis, sha256=hashlib.sha256(raw).hexdigest()
    )
    return parsed, manifest


# ---------------------------------------------------------------------------
# report / plot emission


def _render(value: float) -> float:
    """Round to 6 significant digits (exceeds every test tolerance)."""
    return float(f"{value:.6g}")


def emit_report(report: MeasureReport, format: str = "json") -> str:
    rows = sorted(report.rows, key=MeasureRow.sort_key)
    if format == "json":
        payload = {
            "rows": [
                {
                    "measure": r.measure,
                    "variant": r.variant,
                    "groups": list(r.groups),
                    "score": None if r.score is None else _render(r.score),
                    "error": r.error,
                }
                for r in rows
            ],
            "dataset_digest": report.dataset_digest,
            "space_digest": report.space_digest,
        }
        return json.dumps(payload, indent=2) + "\n"
    if format == "tsv":
        lines = ["measure\tvariant\tgroups\tscore\terror"]
        for r in rows:
            score = "" if r.score is None else f"{r.score:.6g}"
            lines.append(f"{r.measure}\t{r.variant}\t{','.join(r.groups)}\t{score}\t{r.error or ''}")
        return "\n".join(lines) + "\n"
    raise ValidationError(f"unknown report format {format!r} (expected 'json' or 'tsv')")


PLOT_EVENNESS = "evenness-by-group"
PLOT_EXPOSURE = "exposure-of-group"


def emit_plot_data(report: MeasureReport, kind: str) -> str:
    """Two-column CSV (label, value), sorted descending by value.

    Kinds: ``evenness-by-group`` (one bar per group; classical variant when
    present, otherwise paper) and ``exposure-of-group:G`` (G's joint exposure
    with every partner group appearing first in a report pair).
    """
    if kind == PLOT_EVENNESS:
        candidates = [r for r in report.rows if r.measure == MEASURE_EVENNESS and r.score is not None]
        variants = {r.variant for r in candidates}
        variant = VARIANT_CLASSICAL if VARIANT_CLASSICAL in variants else "paper"
        pairs = [(r.groups[0], r.score) for r in candidates if r.variant == variant]
    elif kind.startswith(PLOT_EXPOSURE):
        rest = kind[len(PLOT_EXPOSURE) :]
        if not rest.startswith(":") or not rest[1:]:
            raise ValidationError(
                f"plot kind {PLOT_EXPOSURE!r} needs a focal group, e.g. {PLOT_EXPOSURE}:VC"
            )
        focal = rest[1:]
        pairs = [
            (r.groups[1], r.score)
            for r in report.rows
            if r.measure == MEASURE_JOINT_EXPOSURE and r.score is not None and r.groups[0] == focal
        ]
    else:
        raise ValidationError(
            f"unknown plot kind {kind!r} (expected {PLOT_EVENNESS} or {PLOT_EXPOSURE}:GROUP)"
        )
    if not pairs:
        raise ValidationError(f"no matching rows in report for plot kind {kind!r}")
    pairs.sort(key=lambda lv: (-lv[1], lv[0]))
    lines = ["label,value"]
    lines.extend(f"{label},{value:.6g}" for label, value in pairs)
    return "\n".join(lines) + "\n"


def emit_source_mapping(mapping: Mapping[str, str], format: str = "json") -> str:
    """Source -> unit assignments, sorted by source id."""
    items = sorted(mapping.items())
    if format == "json":
        return json.dumps({"sources": dict(items)}, indent=2) + "\n"
    if format == "tsv":
        lines = ["source_id\tunit"]
        lines.extend(f"{s}\t{u}" for s, u in items)
        return "\n".join(lines) + "\n"
    raise ValidationError(f"unknown format {format!r} (expected 'json' or 'tsv')")


def emit_unit_summary(counts: Mapping[str, int]) -> str:
    """Source counts per unit as a unit-space-ready topic-count config."""
    ordered = {u: counts[u] for u in POLITICAL_UNITS if u in counts}
    extras = {u: counts[u] for u in sorted(counts) if u not in ordered}
    payload = {"kind": KIND_UNIT_SPACE, "units": list(ordered | extras), "topic_counts": ordered | extras}
    return json.dumps(payload, indent=2) + "\n"
