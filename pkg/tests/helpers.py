"""Shared builders for randomized test instances."""

from __future__ import annotations

import numpy as np

from infoseg.model import ExactSetCounts, PersonhoodTable, UnitSpace, validate_unit_space


def unit_names(m: int) -> tuple[str, ...]:
    return tuple(f"u{i:02d}" for i in range(m))


def random_exact_counts(
    rng: np.random.Generator,
    m_max: int = 10,
    groups_max: int = 4,
    sets_max: int = 12,
    count_max: int = 50,
) -> ExactSetCounts:
    m = int(rng.integers(1, m_max + 1))
    units = unit_names(m)
    counts = {}
    for g in range(int(rng.integers(1, groups_max + 1))):
        n_sets = int(rng.integers(1, min(sets_max, 2**m - 1) + 1))
        masks = rng.choice(2**m - 1, size=n_sets, replace=False) + 1
        counts[f"g{g}"] = {
            frozenset(units[i] for i in range(m) if mask >> i & 1): int(rng.integers(1, count_max + 1))
            for mask in masks
        }
    return ExactSetCounts(units, counts)


def random_membership_log(
    rng: np.random.Generator, people_max: int = 200, m_max: int = 6
) -> list[tuple[str, str, str]]:
    m = int(rng.integers(1, m_max + 1))
    units = unit_names(m)
    groups = [f"g{i}" for i in range(int(rng.integers(1, 4)))]
    rows = []
    for p in range(int(rng.integers(1, people_max + 1))):
        group = groups[int(rng.integers(len(groups)))]
        k = int(rng.integers(1, m + 1))
        for i in rng.choice(m, size=k, replace=False):
            rows.append((f"p{p}", group, units[int(i)]))
    return rows


def line_space(
    m: int,
    topic_counts=None,
    center: bool = False,
    spacing: float = 1.0,
) -> UnitSpace:
    """Units evenly spaced on a line, optionally with a center order from u00."""
    units = unit_names(m)
    positions = np.arange(m, dtype=float)[:, None] * spacing
    order = units if center else None
    return validate_unit_space(
        UnitSpace(units, positions=positions, topic_counts=topic_counts, center_order=order)
    )


def table_from_vectors(vectors: dict[str, list[float]], m: int, population=None) -> PersonhoodTable:
    """A valid table whose group sizes are the personhood row sums."""
    sizes = {g: float(np.sum(v)) for g, v in vectors.items()}
    return PersonhoodTable.from_group_vectors(
        unit_names(m),
        {g: np.asarray(v, dtype=float) for g, v in vectors.items()},
        sizes,
        population_override=population,
    )


def random_table(
    rng: np.random.Generator, m_max: int = 8, groups_max: int = 4
) -> PersonhoodTable:
    """Random nonnegative table, every group nonempty, >= 2 groups."""
    m = int(rng.integers(2, m_max + 1))
    vectors = {}
    for g in range(int(rng.integers(2, groups_max + 1))):
        a = rng.integers(0, 9, size=m).astype(float)
        if a.sum() == 0:
            a[int(rng.integers(m))] = 1.0
        vectors[f"g{g}"] = a
    return table_from_vectors(vectors, m)
