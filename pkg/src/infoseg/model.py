"""Shared data model: unit spaces, groups, access-set counts, personhood tables.

All types are immutable after validation (frozen dataclasses; numpy arrays
are marked read-only), so values can be shared freely across threads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from infoseg.errors import ValidationError

#: absolute/relative tolerance for personhood conservation and derived distances
ATOL = 1e-9

#: default 1-D political unit space: ids and line positions
POLITICAL_UNITS = ("VC", "C", "M", "L", "VL")
POLITICAL_POSITIONS = (-1.0, -0.5, 0.0, 0.5, 1.0)

#: label used for the derived whole-population distribution
POPULATION_GROUP = "(population)"

_RESERVED_ID_CHARS = set(":,\t\n\r")


def check_identifier(value: str, what: str) -> str:
    """Reject identifiers that would break the CSV/TSV/pair-list syntax."""
    if not isinstance(value, str) or not value:
        raise ValidationError(f"{what} must be a nonempty string, got {value!r}")
    if _RESERVED_ID_CHARS & set(value):
        raise ValidationError(f"{what} {value!r} contains a reserved character (one of ':,' tab or newline)")
    return value


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out


def _digest(payload: object) -> str:
    """SHA-256 over a canonical JSON encoding (floats rendered exactly via hex)."""

    def canon(obj):
        if isinstance(obj, float):
            return obj.hex()
        if isinstance(obj, np.floating):
            return float(obj).hex()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.ndarray):
            return [canon(x) for x in obj.tolist()]
        if isinstance(obj, (list, tuple)):
            return [canon(x) for x in obj]
        if isinstance(obj, dict):
            return {k: canon(v) for k, v in sorted(obj.items())}
        return obj

    text = json.dumps(canon(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Group:
    """A population group: an opaque id plus the demographic axis it belongs to."""

    group_id: str
    kind: str = ""

    def __post_init__(self):
        check_identifier(self.group_id, "group id")


@dataclass(frozen=True)
class UnitSpace:
    """The m information units, with optional geometry and topical capacity.

    ``distances`` is derived from ``positions`` (Euclidean) when positions are
    given and distances are not.  ``center_order`` lists units by ascending
    distance from a designated center; it is required by the centralization
    measure only.  Construct with arbitrary fields, then call
    :func:`validate_unit_space` (``parse_unit_space`` does this for you).
    """

    unit_ids: tuple[str, ...]
    positions: np.ndarray | None = None
    distances: np.ndarray | None = None
    topic_counts: np.ndarray | None = None
    center_order: tuple[str, ...] | None = None

    @property
    def m(self) -> int:
        return len(self.unit_ids)

    def index(self, unit_id: str) -> int:
        try:
            return self.unit_ids.index(unit_id)
        except ValueError:
            raise ValidationError(f"unknown unit {unit_id!r}") from None

    def require_distances(self) -> np.ndarray:
        if self.distances is None:
            raise ValidationError("unit space has no distances (provide positions or a distance matrix)")
        return self.distances

    def require_topic_counts(self) -> np.ndarray:
        if self.topic_counts is None:
            raise ValidationError("unit space has no topic counts")
        if int(self.topic_counts.sum()) <= 0:
            raise ValidationError("total topic count must be positive")
        return self.topic_counts

    def require_center_order(self) -> tuple[str, ...]:
        if self.center_order is None:
            raise ValidationError("unit space has no center_order (set a center unit)")
        return self.center_order

    def digest(self) -> str:
        return _digest(
            {
                "units": list(self.unit_ids),
                "positions": self.positions,
                "distances": self.distances,
                "topic_counts": self.topic_counts,
                "center_order": list(self.center_order) if self.center_order else None,
            }
        )


def validate_unit_space(space: UnitSpace) -> UnitSpace:
    """Check all unit-space invariants and fill in derived fields.

    Returns a new, read-only ``UnitSpace`` with distances derived from
    positions when absent.  Validation is idempotent: validating the result
    again yields identical arrays.
    """
    ids = tuple(space.unit_ids)
    if len(ids) < 1:
        raise ValidationError("unit space must contain at least one unit")
    for u in ids:
        check_identifier(u, "unit id")
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate unit ids")
    m = len(ids)

    positions = None
    if space.positions is not None:
        positions = np.asarray(space.positions, dtype=float)
        if positions.ndim == 1:
            positions = positions.reshape(m, 1)
        if positions.shape[0] != m or positions.ndim != 2 or positions.shape[1] < 1:
            raise ValidationError(f"positions must be an (m, n) array with m={m}, got shape {positions.shape}")
        if not np.all(np.isfinite(positions)):
            raise ValidationError("positions must be finite")

    distances = None
    if space.distances is not None:
        distances = np.asarray(space.distances, dtype=float)
        if distances.shape != (m, m):
            raise ValidationError(f"distances must be an {m}x{m} matrix, got shape {distances.shape}")
        if not np.all(np.isfinite(distances)):
            raise ValidationError("distances must be finite")
        if np.any(distances < 0):
            raise ValidationError("distances must be nonnegative")
        if np.any(np.abs(np.diagonal(distances)) > ATOL):
            raise ValidationError("distance matrix must have a zero diagonal")
        asym = np.abs(distances - distances.T)
        if np.any(asym > ATOL):
            i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
            raise ValidationError(
                f"asymmetric distances: d[{ids[i]},{ids[j]}]={distances[i, j]} != d[{ids[j]},{ids[i]}]={distances[j, i]}"
            )

    if positions is not None:
        derived = np.sqrt(((positions[:, None, :] - positions[None, :, :]) ** 2).sum(axis=2))
        if distances is None:
            distances = derived
        elif np.any(np.abs(distances - derived) > ATOL):
            raise ValidationError("distances disagree with Euclidean distances of positions")

    topic_counts = None
    if space.topic_counts is not None:
        raw = np.asarray(space.topic_counts)
        if raw.shape != (m,):
            raise ValidationError(f"topic_counts must have one entry per unit, got shape {raw.shape}")
        topic_counts = raw.astype(np.int64)
        if np.any(topic_counts != raw):
            raise ValidationError("topic counts must be integers")
        if np.any(topic_counts < 0):
            raise ValidationError("topic counts must be nonnegative")

    center_order = None
    if space.center_order is not None:
        center_order = tuple(space.center_order)
        if sorted(center_order) != sorted(ids):
            raise ValidationError("center_order is not a permutation of the unit ids")

    return UnitSpace(
        unit_ids=ids,
        positions=_readonly(positions) if positions is not None else None,
        distances=_readonly(distances) if distances is not None else None,
        topic_counts=_readonly(topic_counts) if topic_counts is not None else None,
        center_order=center_order,
    )


def center_order_from_unit(space: UnitSpace, center: str) -> tuple[str, ...]:
    """Units sorted by ascending distance from ``center``, ties broken by unit id."""
    d = space.require_distances()
    c = space.index(center)
    return tuple(sorted(space.unit_ids, key=lambda u: (d[space.index(u), c], u)))


def political_unit_space(
    topic_counts: Sequence[int] | None = None, center: str | None = "M"
) -> UnitSpace:
    """The default five-bucket political line (VC, C, M, L, VL at -1..1)."""
    space = validate_unit_space(
        UnitSpace(
            unit_ids=POLITICAL_UNITS,
            positions=np.array(POLITICAL_POSITIONS),
            topic_counts=np.asarray(topic_counts) if topic_counts is not None else None,
        )
    )
    if center is not None:
        space = validate_unit_space(replace(space, center_order=center_order_from_unit(space, center)))
    return space


@dataclass(frozen=True)
class ExactSetCounts:
    """For each group, how many people follow *exactly* each access set.

    This is the canonical population representation: both union-reach
    observations and fractional personhoods derive from it.
    """

    unit_ids: tuple[str, ...]
    counts: Mapping[str, Mapping[frozenset[str], int]]
    axis: str | None = None

    def __post_init__(self):
        units = set(self.unit_ids)
        for u in self.unit_ids:
            check_identifier(u, "unit id")
        if len(units) != len(self.unit_ids):
            raise ValidationError("duplicate unit ids")
        for g, sets in self.counts.items():
            check_identifier(g, "group id")
            for t, c in sets.items():
                if not t:
                    raise ValidationError(f"group {g!r}: empty access set")
                if not t <= units:
                    raise ValidationError(f"group {g!r}: access set {sorted(t)} contains unknown units")
                if int(c) != c or c < 0:
                    raise ValidationError(f"group {g!r}: count for {sorted(t)} must be a nonnegative integer")

    @property
    def group_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.counts))

    def group_size(self, group_id: str) -> int:
        if group_id not in self.counts:
            raise ValidationError(f"unknown group {group_id!r}")
        return int(sum(self.counts[group_id].values()))

    @property
    def total_people(self) -> int:
        return sum(self.group_size(g) for g in self.counts)


@dataclass(frozen=True)
class GroupDistribution:
    """One group's personhood vector over the units.

    ``a_total`` is the number of people in the group; ``a_prime_total`` the
    number of people in the reference population outside the group.
    """

    group_id: str
    a: np.ndarray
    a_total: float
    a_prime_total: float

    def __post_init__(self):
        a = _readonly(np.asarray(self.a, dtype=float))
        object.__setattr__(self, "a", a)
        if a.ndim != 1:
            raise ValidationError("personhood vector must be one-dimensional")
        if np.any(a < 0):
            raise ValidationError(f"group {self.group_id!r}: negative personhood mass")
        tol = ATOL * max(1.0, abs(self.a_total))
        if abs(float(a.sum()) - self.a_total) > tol:
            raise ValidationError(
                f"group {self.group_id!r}: personhood mass {a.sum()} does not match group size {self.a_total}"
            )
        if self.a_prime_total < -ATOL:
            raise ValidationError(f"group {self.group_id!r}: negative complement population")

    @property
    def m(self) -> int:
        return int(self.a.shape[0])


@dataclass(frozen=True)
class PersonhoodTable:
    """Per-group, per-unit fractional personhood masses with population totals.

    ``population`` is the reference universe used for complements; it defaults
    to the loaded population (sum of group sizes) and may be overridden with a
    larger external figure.  Empty-access people never enter the table.
    """

    unit_ids: tuple[str, ...]
    group_ids: tuple[str, ...]
    personhoods: np.ndarray  # shape (groups, units)
    group_sizes: np.ndarray  # shape (groups,); people, not personhood sums
    population: float
    axis: str | None = None

    def __post_init__(self):
        ph = _readonly(np.asarray(self.personhoods, dtype=float))
        sizes = _readonly(np.asarray(self.group_sizes, dtype=float))
        object.__setattr__(self, "personhoods", ph)
        object.__setattr__(self, "group_sizes", sizes)
        object.__setattr__(self, "unit_ids", tuple(self.unit_ids))
        object.__setattr__(self, "group_ids", tuple(self.group_ids))
        if ph.shape != (len(self.group_ids), len(self.unit_ids)):
            raise ValidationError("personhood matrix shape does not match group/unit ids")
        if sizes.shape != (len(self.group_ids),):
            raise ValidationError("group_sizes shape does not match group ids")
        if np.any(ph < 0) or np.any(sizes < 0):
            raise ValidationError("personhoods and group sizes must be nonnegative")
        for gi, g in enumerate(self.group_ids):
            tol = ATOL * max(1.0, sizes[gi])
            if abs(float(ph[gi].sum()) - float(sizes[gi])) > tol:
                raise ValidationError(
                    f"group {g!r}: personhood mass {ph[gi].sum()} does not match group size {sizes[gi]}"
                )
        loaded = float(sizes.sum())
        if self.population < loaded - ATOL * max(1.0, loaded):
            raise ValidationError(
                f"population override {self.population} is smaller than the loaded population {loaded}"
            )

    @classmethod
    def from_group_vectors(
        cls,
        unit_ids: Sequence[str],
        vectors: Mapping[str, np.ndarray],
        sizes: Mapping[str, float],
        axis: str | None = None,
        population_override: float | None = None,
    ) -> "PersonhoodTable":
        group_ids = tuple(sorted(vectors))
        ph = np.zeros((len(group_ids), len(unit_ids)))
        for i, g in enumerate(group_ids):
            ph[i] = np.asarray(vectors[g], dtype=float)
        sz = np.array([float(sizes[g]) for g in group_ids])
        population = float(population_override) if population_override is not None else float(sz.sum())
        return cls(tuple(unit_ids), group_ids, ph, sz, population, axis)

    @property
    def m(self) -> int:
        return len(self.unit_ids)

    @property
    def loaded_population(self) -> float:
        return float(self.group_sizes.sum())

    def totals(self) -> np.ndarray:
        """Per-unit total personhood mass across all groups."""
        return self.personhoods.sum(axis=0)

    def group_index(self, group_id: str) -> int:
        try:
            return self.group_ids.index(group_id)
        except ValueError:
            raise ValidationError(f"unknown group {group_id!r}") from None

    def group_distribution(self, group_id: str) -> GroupDistribution:
        gi = self.group_index(group_id)
        return GroupDistribution(
            group_id=group_id,
            a=self.personhoods[gi],
            a_total=float(self.group_sizes[gi]),
            a_prime_total=self.population - float(self.group_sizes[gi]),
        )

    def population_distribution(self) -> GroupDistribution:
        """The whole loaded population as a pseudo-group (b_i = total_i)."""
        return GroupDistribution(
            group_id=POPULATION_GROUP,
            a=self.totals(),
            a_total=self.loaded_population,
            a_prime_total=self.population - self.loaded_population,
        )

    def reindexed(self, unit_ids: Sequence[str]) -> "PersonhoodTable":
        """Align the table to another unit ordering; absent units get zero mass.

        Units carrying mass here but missing from ``unit_ids`` are an error.
        """
        target = tuple(unit_ids)
        pos = {u: i for i, u in enumerate(target)}
        ph = np.zeros((len(self.group_ids), len(target)))
        for i, u in enumerate(self.unit_ids):
            if u in pos:
                ph[:, pos[u]] = self.personhoods[:, i]
            elif np.any(self.personhoods[:, i] > 0):
                raise ValidationError(f"unit {u!r} carries personhood mass but is not in the unit space")
        return PersonhoodTable(target, self.group_ids, ph, self.group_sizes, self.population, self.axis)

    def digest(self) -> str:
        return _digest(
            {
                "units": list(self.unit_ids),
                "groups": list(self.group_ids),
                "personhoods": self.personhoods,
                "sizes": self.group_sizes,
                "population": self.population,
                "axis": self.axis,
            }
        )


def group_distribution(table: PersonhoodTable, group_id: str) -> GroupDistribution:
    """Project one group out of a personhood table."""
    return table.group_distribution(group_id)
