"""From raw access data to exact set counts and fractional personhoods.

Two input routes converge on :class:`~infoseg.model.ExactSetCounts`:

* membership logs (person, group, unit) are tabulated directly;
* union-reach observations U(T) = "people following at least one unit in T"
  are inverted over the subset lattice.

A person following k units contributes 1/k of a person to each followed
unit, so per-group personhood masses conserve head counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from infoseg import _kernels
from infoseg.errors import InconsistentObservationsError, ValidationError
from infoseg.model import ExactSetCounts, PersonhoodTable, check_identifier

#: hard cap for operations that enumerate all 2^m subsets
MAX_ENUM_UNITS = 20


def _unit_index(unit_ids: Sequence[str]) -> dict[str, int]:
    return {u: i for i, u in enumerate(unit_ids)}

def _mask(subset: frozenset[str], index: Mapping[str, int]) -> int:
    mask = 0
    for u in subset:
        mask |= 1 << index[u]
    return mask

def _subset(mask: int, unit_ids: Sequence[str]) -> frozenset[str]:
    return frozenset(unit_ids[i] for i in range(len(unit_ids)) if mask >> i & 1)

def _require_enumerable(m: int, what: str) -> None:
    if m > MAX_ENUM_UNITS:
        raise ValidationError(f"{what} enumerates 2^m subsets and is limited to m <= {MAX_ENUM_UNITS}, got m={m}")


@dataclass(frozen=True)
class ObservationTable:
    """Complete union-reach table: U_g(T) for every nonempty T, per group.

    Validation requires all 2^m - 1 nonempty subsets per group (partial
    tables are rejected, not imputed) and monotonicity T <= T' => U(T) <= U(T').
    """

    unit_ids: tuple[str, ...]
    reach: Mapping[str, Mapping[frozenset[str], int]]
    axis: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "unit_ids", tuple(self.unit_ids))
        m = len(self.unit_ids)
        if m < 1:
            raise ValidationError("observation table needs at least one unit")
        for u in self.unit_ids:
            check_identifier(u, "unit id")
        if len(set(self.unit_ids)) != m:
            raise ValidationError("duplicate unit ids")
        _require_enumerable(m, "a complete observation table")
        index = _unit_index(self.unit_ids)
        units = set(self.unit_ids)
        size = 1 << m
        dense: dict[str, np.ndarray] = {}
        for g, table in self.counts_by_group().items():
            check_identifier(g, "group id")
            u = np.zeros(size, dtype=np.int64)
            seen = np.zeros(size, dtype=bool)
            for t, c in table.items():
                if not t:
                    raise ValidationError(f"group {g!r}: empty subset in observation table")
                if not t <= units:
                    raise ValidationError(f"group {g!r}: subset {sorted(t)} contains unknown units")
                if int(c) != c or c < 0:
                    raise ValidationError(f"group {g!r}: reach for {sorted(t)} must be a nonnegative integer")
                u[_mask(t, index)] = int(c)
                seen[_mask(t, index)] = True
            if not seen[1:].all():
                missing = int(np.flatnonzero(~seen[1:])[0]) + 1
                raise ValidationError(
                    f"incomplete observation table: group {g!r} is missing subset "
                    f"{sorted(_subset(missing, self.unit_ids))}"
                )
            self._check_monotone(g, u, m)
            dense[g] = u
        object.__setattr__(self, "_dense", dense)

    def counts_by_group(self) -> Mapping[str, Mapping[frozenset[str], int]]:
        return self.reach

    def _check_monotone(self, group: str, u: np.ndarray, m: int) -> None:
        # covering relations suffice: compare each mask against mask-without-bit
        for i in range(m):
            view = u.reshape(-1, 2, 1 << i)
            bad = view[:, 1, :] < view[:, 0, :]
            if bad.any():
                hi, lo = np.nonzero(bad)
                hi, lo = int(hi[0]), int(lo[0])
                sup = (hi << (i + 1)) | (1 << i) | lo
                sub = sup ^ (1 << i)
                raise InconsistentObservationsError(
                    f"non-monotone observations for group {group!r}: "
                    f"U({sorted(_subset(sup, self.unit_ids))}) < U({sorted(_subset(sub, self.unit_ids))})",
                    group=group,
                    subset=_subset(sup, self.unit_ids),
                )

    @property
    def group_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.reach))

    def dense_reach(self, group: str) -> np.ndarray:
        """Reach indexed by unit bitmask (entry 0 is the empty set, reach 0)."""
        if group not in self._dense:  # type: ignore[attr-defined]
            raise ValidationError(f"unknown group {group!r}")
        return self._dense[group]  # type: ignore[attr-defined]


def exact_counts_from_memberships(
    log: Iterable[tuple[str, str, str]],
    unit_ids: Sequence[str] | None = None,
    axis: str | None = None,
) -> ExactSetCounts:
    """Tabulate exact access-set counts from (person, group, unit) rows.

    Duplicate rows are ignored; a person appearing under two groups is an
    error.  If ``unit_ids`` is given, every row's unit must belong to it;
    otherwise the universe is the sorted set of observed units.
    """
    person_group: dict[str, str] = {}
    person_units: dict[str, set[str]] = {}
    known = set(unit_ids) if unit_ids is not None else None
    for person, group, unit in log:
        check_identifier(person, "person id")
        check_identifier(group, "group id")
        check_identifier(unit, "unit id")
        if known is not None and unit not in known:
            raise ValidationError(f"unknown unit {unit!r} for person {person!r}")
        prev = person_group.setdefault(person, group)
        if prev != group:
            raise ValidationError(f"person {person!r} in two groups ({prev!r} and {group!r})")
        person_units.setdefault(person, set()).add(unit)

    universe = tuple(unit_ids) if unit_ids is not None else tuple(sorted({u for s in person_units.values() for u in s}))
    counts: dict[str, dict[frozenset[str], int]] = {}
    for person, units in person_units.items():
        g = person_group[person]
        t = frozenset(units)
        counts.setdefault(g, {})
        counts[g][t] = counts[g].get(t, 0) + 1
    return ExactSetCounts(unit_ids=universe, counts=counts, axis=axis)


def union_observations_from_exact(counts: ExactSetCounts) -> ObservationTable:
    """Forward model: U_g(T) = number of people whose access set intersects T."""
    m = len(counts.unit_ids)
    _require_enumerable(m, "union_observations_from_exact")
    index = _unit_index(counts.unit_ids)
    size = 1 << m
    reach: dict[str, dict[frozenset[str], int]] = {}
    for g in counts.group_ids:
        e = np.zeros(size, dtype=np.int64)
        for t, c in counts.counts[g].items():
            e[_mask(t, index)] += c
        _kernels.zeta_in_place(e, m)
        # e is now "people with access set inside X"; people intersecting T
        # are everyone minus those entirely inside the complement of T
        total = int(e[size - 1])
        u = total - e[::-1]
        reach[g] = {_subset(x, counts.unit_ids): int(u[x]) for x in range(1, size)}
    return ObservationTable(unit_ids=counts.unit_ids, reach=reach, axis=counts.axis)


def exact_counts_from_union_observations(obs: ObservationTable) -> ExactSetCounts:
    """Invert a complete union-reach table back to exact access-set counts.

    Subset-lattice inversion of F(X) = U(S) - U(S \\ X), the number of people
    whose access set lies inside X.  Round-trips exactly against
    :func:`union_observations_from_exact`.  Tables that no population can
    produce (a negative implied count) are rejected with the offending subset.
    """
    m = len(obs.unit_ids)
    size = 1 << m
    counts: dict[str, dict[frozenset[str], int]] = {}
    for g in obs.group_ids:
        u = obs.dense_reach(g)
        f = u[size - 1] - u[::-1]
        _kernels.mobius_in_place(f, m)
        negative = np.flatnonzero(f < 0)
        if negative.size:
            x = int(negative[0])
            raise InconsistentObservationsError(
                f"inconsistent observations for group {g!r}: implied count of access set "
                f"{sorted(_subset(x, obs.unit_ids))} is {int(f[x])}",
                group=g,
                subset=_subset(x, obs.unit_ids),
            )
        nonzero = np.flatnonzero(f)
        counts[g] = {_subset(int(x), obs.unit_ids): int(f[x]) for x in nonzero}
    return ExactSetCounts(unit_ids=obs.unit_ids, counts=counts, axis=obs.axis)


def personhoods(
    counts: ExactSetCounts, population_override: float | None = None
) -> PersonhoodTable:
    """Spread each person's unit mass of personhood evenly over their access set.

    a_i(g) = sum over access sets T containing i of E_g(T) / |T|.
    """
    index = _unit_index(counts.unit_ids)
    vectors: dict[str, np.ndarray] = {}
    sizes: dict[str, float] = {}
    for g in counts.group_ids:
        a = np.zeros(len(counts.unit_ids))
        people = 0
        for t in sorted(counts.counts[g], key=lambda s: tuple(sorted(s))):
            c = counts.counts[g][t]
            people += c
            share = c / len(t)
            for u in t:
                a[index[u]] += share
        vectors[g] = a
        sizes[g] = float(people)
    return PersonhoodTable.from_group_vectors(
        counts.unit_ids, vectors, sizes, axis=counts.axis, population_override=population_override
    )
