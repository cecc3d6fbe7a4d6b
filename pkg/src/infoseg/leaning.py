"""Audience-weighted leaning scores and the five-bucket source classifier."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from infoseg.errors import ValidationError
from infoseg.model import POLITICAL_UNITS

#: score weight per audience bucket
DEFAULT_WEIGHTS: Mapping[str, float] = {
    "VC": -1.0,
    "C": -0.5,
    "M": 0.0,
    "L": 0.5,
    "VL": 1.0,
}

_SUM_TOL = 1e-6
_SCORE_TOL = 1e-9


@dataclass(frozen=True)
class AudienceComposition:
    """Fractions of a source's audience per leaning bucket.

    Fractions must be nonnegative and sum to 1 within 1e-6; the stored
    fractions are renormalized to sum exactly to 1.
    """

    f_vc: float
    f_c: float
    f_m: float
    f_l: float
    f_vl: float

    def __post_init__(self) -> None:
        fractions = self.fractions
        for unit, f in zip(POLITICAL_UNITS, fractions):
            if not math.isfinite(f) or f < 0.0 or f > 1.0 + _SUM_TOL:
                raise ValidationError(f"audience fraction f_{unit} = {f!r} is not in [0, 1]")
        total = math.fsum(fractions)
        if abs(total - 1.0) > _SUM_TOL:
            raise ValidationError(f"audience fractions sum to {total!r}, expected 1 within {_SUM_TOL}")
        # renormalize, but leave float-exact sums alone so that normalization
        # is a fixed point (mirrored copies must not drift by an extra division)
        if abs(total - 1.0) > 1e-12:
            for name, f in zip(("f_vc", "f_c", "f_m", "f_l", "f_vl"), fractions):
                object.__setattr__(self, name, f / total)

    @property
    def fractions(self) -> tuple[float, float, float, float, float]:
        return (self.f_vc, self.f_c, self.f_m, self.f_l, self.f_vl)

    def mirrored(self) -> "AudienceComposition":
        """The composition with left and right buckets swapped."""
        return AudienceComposition(self.f_vl, self.f_l, self.f_m, self.f_c, self.f_vc)


@dataclass(frozen=True)
class LeaningThresholds:
    """Cut points splitting [-1, 1] into the five buckets.

    Buckets are VC: [-1, lo_outer) / C: [lo_outer, lo_inner) /
    M: [lo_inner, hi_inner] / L: (hi_inner, hi_outer] / VL: (hi_outer, 1].
    """

    lo_outer: float = -0.5
    lo_inner: float = -0.1
    hi_inner: float = 0.1
    hi_outer: float = 0.5

    def __post_init__(self) -> None:
        cuts = (self.lo_outer, self.lo_inner, self.hi_inner, self.hi_outer)
        if any(not math.isfinite(c) for c in cuts):
            raise ValidationError("thresholds must be finite")
        if not (-1.0 < cuts[0] < cuts[1] < cuts[2] < cuts[3] < 1.0):
            raise ValidationError(
                f"thresholds must be strictly increasing inside (-1, 1), got {cuts}"
            )

    @property
    def symmetric(self) -> bool:
        return self.lo_outer == -self.hi_outer and self.lo_inner == -self.hi_inner


DEFAULT_THRESHOLDS = LeaningThresholds()


def _check_weights(weights: Mapping[str, float]) -> None:
    if set(weights) != set(POLITICAL_UNITS):
        raise ValidationError(f"weights must cover exactly {POLITICAL_UNITS}")
    for unit, w in weights.items():
        if not math.isfinite(w) or abs(w) > 1.0:
            raise ValidationError(f"weight for {unit} = {w!r} is not in [-1, 1]")


def leaning_score(
    composition: AudienceComposition, weights: Mapping[str, float] = DEFAULT_WEIGHTS
) -> float:
    """Weighted mean position of the audience, in [-1, 1].

    Computed with a correctly rounded sum so that mirrored compositions get
    exactly negated scores under antisymmetric weights.
    """
    _check_weights(weights)
    return math.fsum(
        weights[unit] * f for unit, f in zip(POLITICAL_UNITS, composition.fractions)
    )


def classify_leaning(score: float, thresholds: LeaningThresholds = DEFAULT_THRESHOLDS) -> str:
    """Assign a score to one of VC, C, M, L, VL."""
    if not math.isfinite(score) or abs(score) > 1.0 + _SCORE_TOL:
        raise ValidationError(f"leaning score {score!r} is outside [-1, 1]")
    score = min(1.0, max(-1.0, score))
    if score < thresholds.lo_outer:
        return "VC"
    if score < thresholds.lo_inner:
        return "C"
    if score <= thresholds.hi_inner:
        return "M"
    if score <= thresholds.hi_outer:
        return "L"
    return "VL"


def map_sources(
    sources: Iterable[tuple[str, AudienceComposition]],
    thresholds: LeaningThresholds = DEFAULT_THRESHOLDS,
    weights: Mapping[str, float] = DEFAULT_WEIGHTS,
) -> dict[str, str]:
    """Classify every (source_id, composition) pair; source ids must be unique."""
    mapping: dict[str, str] = {}
    for source_id, composition in sources:
        if source_id in mapping:
            raise ValidationError(f"duplicate source id {source_id!r}")
        mapping[source_id] = classify_leaning(leaning_score(composition, weights), thresholds)
    return mapping


def unit_counts(mapping: Mapping[str, str]) -> dict[str, int]:
    """Number of sources per unit, over all five units (zeros included).

    The result is directly usable as the per-unit topic counts of the
    political unit space.
    """
    counts = {unit: 0 for unit in POLITICAL_UNITS}
    for source_id, unit in mapping.items():
        if unit not in counts:
            raise ValidationError(f"source {source_id!r} is mapped to unknown unit {unit!r}")
        counts[unit] += 1
    return counts
