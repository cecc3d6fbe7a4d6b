"""The five information-segregation measures.

Evenness and concentration ship in two variants:

* ``paper`` — the published formula evaluated verbatim.  For evenness the
  normalization 2 * a_total * a'_total is not scale-free and the score can
  leave [0, 1] on valid input; for concentration the formula is a product of
  shares rather than a share mismatch.  Scores are reported raw, never
  corrected silently.
* ``classical`` (default) — the standard index from the segregation
  literature: the Gini complement bounded in [1/m, 1], and the Hoover/Duncan
  share-mismatch Delta bounded in [0, 1].

Joint exposure, centralization, and clustering have a single form each and
are labeled ``paper`` in reports.  Centralization uses cumulative personhood
shares over the center ordering (the only reading with the documented
[-1, 1] range).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from infoseg.errors import UndefinedMeasureError, ValidationError
from infoseg.model import GroupDistribution, PersonhoodTable, UnitSpace

VARIANT_PAPER = "paper"
VARIANT_CLASSICAL = "classical"

MEASURE_EVENNESS = "evenness"
MEASURE_JOINT_EXPOSURE = "joint-exposure"
MEASURE_CONCENTRATION = "concentration"
MEASURE_CENTRALIZATION = "centralization"
MEASURE_CLUSTERING = "clustering"

ALL_MEASURES = (
    MEASURE_EVENNESS,
    MEASURE_JOINT_EXPOSURE,
    MEASURE_CONCENTRATION,
    MEASURE_CENTRALIZATION,
    MEASURE_CLUSTERING,
)

#: measures with a paper/classical variant pair
DUAL_VARIANT_MEASURES = (MEASURE_EVENNESS, MEASURE_CONCENTRATION)


def _check_variant(variant: str) -> None:
    if variant not in (VARIANT_PAPER, VARIANT_CLASSICAL):
        raise ValidationError(f"unknown variant {variant!r} (expected 'paper' or 'classical')")


def evenness(dist: GroupDistribution, variant: str = VARIANT_CLASSICAL) -> float:
    """How uniformly the group's personhood mass spreads over the units.

    classical: 1 - G with G = sum_ij |a_i - a_j| / (2 m sum_i a_i), so the
    score lies in [1/m, 1] and is invariant under scaling of a.
    paper: 1 - sum_{i != j} |a_i - a_j| / (2 a_total a'_total), reported raw.
    """
    _check_variant(variant)
    if dist.a_total <= 0:
        raise ValidationError(f"group {dist.group_id!r}: evenness needs a_total > 0")
    a = dist.a
    pairwise = float(np.abs(a[:, None] - a[None, :]).sum())
    if variant == VARIANT_PAPER:
        if dist.a_prime_total <= 0:
            raise ValidationError(
                f"group {dist.group_id!r}: the paper evenness variant needs a'_total > 0"
            )
        return 1.0 - pairwise / (2.0 * dist.a_total * dist.a_prime_total)
    return 1.0 - pairwise / (2.0 * dist.m * float(a.sum()))


def joint_exposure(a: GroupDistribution, b: GroupDistribution, totals: np.ndarray) -> float:
    """Probability that a random member of A shares a unit with B's mass.

    JIE = sum_i (a_i / a_total) * (b_i / total_i).  Units without any of A's
    mass contribute 0; a unit with A-mass but zero total is an inconsistent
    table and is rejected.
    """
    if a.a_total <= 0:
        raise ValidationError(f"group {a.group_id!r}: joint exposure needs a_total > 0")
    totals = np.asarray(totals, dtype=float)
    if totals.shape != a.a.shape or totals.shape != b.a.shape:
        raise ValidationError("joint exposure needs aligned per-unit totals")
    active = a.a > 0
    if np.any(totals[active] <= 0):
        bad = int(np.flatnonzero(active & (totals <= 0))[0])
        raise ValidationError(f"inconsistent totals: unit index {bad} has group mass but zero total")
    if not active.any():
        return 0.0
    return float(np.sum((a.a[active] / a.a_total) * (b.a[active] / totals[active])))


def concentration(dist: GroupDistribution, space: UnitSpace, variant: str = VARIANT_CLASSICAL) -> float:
    """Mismatch between the group's unit shares and the units' topical capacity.

    classical: Delta = 1/2 sum_i |a_i/a_total - n_i/n_total|, in [0, 1].
    paper: 1/2 sum_i (a_i/a_total) * (n_i/n_total), evaluated verbatim.
    """
    _check_variant(variant)
    if dist.a_total <= 0:
        raise ValidationError(f"group {dist.group_id!r}: concentration needs a_total > 0")
    n = space.require_topic_counts().astype(float)
    if n.shape != dist.a.shape:
        raise ValidationError("distribution does not match the unit space")
    n_total = float(n.sum())
    shares_a = dist.a / dist.a_total
    shares_n = n / n_total
    if variant == VARIANT_PAPER:
        return 0.5 * float(np.sum(shares_a * shares_n))
    return 0.5 * float(np.abs(shares_a - shares_n).sum())


def centralization_index(a: GroupDistribution, b: GroupDistribution, space: UnitSpace) -> float:
    """How much closer to the center A's mass sits compared to B's.

    With units ordered by ascending distance from the center and X_i, Y_i the
    cumulative personhood proportions of A and B over the first i units:
    CI = sum_i (X_{i-1} Y_i - X_i Y_{i-1}), in [-1, 1], antisymmetric in (A, B).
    """
    order = space.require_center_order()
    if a.a_total <= 0 or b.a_total <= 0:
        raise ValidationError("centralization needs both groups nonempty")
    idx = [space.index(u) for u in order]
    av = a.a[idx]
    bv = b.a[idx]
    x = np.concatenate([[0.0], np.cumsum(av) / av.sum()])
    y = np.concatenate([[0.0], np.cumsum(bv) / bv.sum()])
    return float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def clustering_index(dist: GroupDistribution, totals: np.ndarray, space: UnitSpace) -> float:
    """Tendency of the group's mass to sit on mutually nearby units.

    Kernel-weighted with e^{-d_ij} (self term included, e^0 = 1):

        IC = (sum_i (a_i/a_total) sum_j e^{-d_ij} a_j - s)
           / (sum_i (a_i/a_total) sum_j e^{-d_ij} total_j - s),
        s = (a_total / m^2) sum_ij e^{-d_ij}

    0 for a uniformly spread group, 1 when the group is the population.
    Raises ``UndefinedMeasureError`` when the denominator vanishes.
    """
    if dist.a_total <= 0:
        raise ValidationError(f"group {dist.group_id!r}: clustering needs a_total > 0")
    totals = np.asarray(totals, dtype=float)
    if totals.shape != dist.a.shape:
        raise ValidationError("clustering needs aligned per-unit totals")
    if float(totals.sum()) <= 0:
        raise ValidationError("clustering needs a nonempty population")
    kernel = np.exp(-space.require_distances())
    weights = dist.a / dist.a_total
    group_term = float(weights @ (kernel @ dist.a))
    total_term = float(weights @ (kernel @ totals))
    shared = dist.a_total / dist.m**2 * float(kernel.sum())
    numerator = group_term - shared
    denominator = total_term - shared
    if abs(denominator) <= 1e-12 * (abs(total_term) + abs(shared)):
        raise UndefinedMeasureError(
            f"group {dist.group_id!r}: clustering denominator is degenerate (zero)"
        )
    return numerator / denominator


@dataclass(frozen=True)
class MeasureRow:
    """One scored (or failed) measure evaluation."""

    measure: str
    variant: str
    groups: tuple[str, ...]
    score: float | None
    error: str | None = None

    def sort_key(self) -> tuple:
        return (self.measure, self.variant, self.groups)


@dataclass(frozen=True)
class MeasureReport:
    """All requested measure rows for one run, with input provenance digests."""

    rows: tuple[MeasureRow, ...]
    dataset_digest: str
    space_digest: str


def _canonical_pairs(group_ids: Sequence[str]) -> tuple[list, list]:
    unordered = [tuple(sorted(p)) for p in combinations(group_ids, 2)]
    ordered = list(permutations(group_ids, 2))
    return unordered, ordered


def measure_all(
    table: PersonhoodTable,
    space: UnitSpace,
    pairs: Iterable[tuple[str, str]] | None = None,
    variants: Iterable[str] = (VARIANT_CLASSICAL,),
    measures: Iterable[str] | None = None,
) -> MeasureReport:
    """Evaluate the requested measures for all groups / group pairs.

    ``pairs=None`` evaluates every unordered pair for joint exposure (first
    group in sorted order is the exposed one) and every ordered pair for
    centralization.  An explicit pair list is used as given (ordered) for
    both.  Row-level failures (missing geometry, degenerate denominators)
    become error entries; other rows are still computed.  Rows are sorted by
    (measure, variant, groups).
    """
    wanted = tuple(measures) if measures is not None else ALL_MEASURES
    for name in wanted:
        if name not in ALL_MEASURES:
            raise ValidationError(f"unknown measure {name!r}")
    chosen_variants = tuple(variants)
    for v in chosen_variants:
        _check_variant(v)
    if not chosen_variants:
        raise ValidationError("at least one variant is required")

    if table.unit_ids != space.unit_ids:
        table = table.reindexed(space.unit_ids)
    group_ids = table.group_ids
    dists = {g: table.group_distribution(g) for g in group_ids}
    totals = table.totals()
    if pairs is None:
        exposure_pairs, central_pairs = _canonical_pairs(group_ids)
    else:
        explicit = []
        for ga, gb in pairs:
            for g in (ga, gb):
                if g not in dists:
                    raise ValidationError(f"unknown group {g!r} in pair list")
            explicit.append((ga, gb))
        exposure_pairs = central_pairs = explicit

    rows: list[MeasureRow] = []

    def attempt(measure: str, variant: str, groups: tuple[str, ...], fn) -> None:
        try:
            rows.append(MeasureRow(measure, variant, groups, float(fn())))
        except (ValidationError, UndefinedMeasureError) as exc:
            rows.append(MeasureRow(measure, variant, groups, None, error=str(exc)))

    for g in group_ids:
        if MEASURE_EVENNESS in wanted:
            for v in chosen_variants:
                attempt(MEASURE_EVENNESS, v, (g,), lambda g=g, v=v: evenness(dists[g], v))
        if MEASURE_CONCENTRATION in wanted:
            for v in chosen_variants:
                attempt(MEASURE_CONCENTRATION, v, (g,), lambda g=g, v=v: concentration(dists[g], space, v))
        if MEASURE_CLUSTERING in wanted:
            attempt(
                MEASURE_CLUSTERING,
                VARIANT_PAPER,
                (g,),
                lambda g=g: clustering_index(dists[g], totals, space),
            )
    if MEASURE_JOINT_EXPOSURE in wanted:
        for ga, gb in exposure_pairs:
            attempt(
                MEASURE_JOINT_EXPOSURE,
                VARIANT_PAPER,
                (ga, gb),
                lambda ga=ga, gb=gb: joint_exposure(dists[ga], dists[gb], totals),
            )
    if MEASURE_CENTRALIZATION in wanted:
        for ga, gb in central_pairs:
            attempt(
                MEASURE_CENTRALIZATION,
                VARIANT_PAPER,
                (ga, gb),
                lambda ga=ga, gb=gb: centralization_index(dists[ga], dists[gb], space),
            )

    rows.sort(key=MeasureRow.sort_key)
    return MeasureReport(rows=tuple(rows), dataset_digest=table.digest(), space_digest=space.digest())
