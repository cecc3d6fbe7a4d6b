"""Seeded synthetic membership-log generator.

Randomness comes from the Philox counter-based generator, keyed by the
config seed, with the person's global index in the upper 128 counter bits.
Each person therefore owns an independent, reproducible stream: logs are
byte-identical for identical configs within this implementation, regardless
of how generation is scheduled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from infoseg.errors import ParseError, ValidationError
from infoseg.model import check_identifier

KIND_GENERATOR_CONFIG = "generator-config"


@dataclass(frozen=True)
class GroupSpec:
    """One group: its size, unit preferences, and follow-count distribution."""

    group_id: str
    size: int
    preferences: tuple[float, ...]
    follow_count_probs: Mapping[int, float]

    def __post_init__(self) -> None:
        check_identifier(self.group_id, "group id")
        if int(self.size) != self.size or self.size < 0:
            raise ValidationError(f"group {self.group_id!r}: size must be a nonnegative integer")
        prefs = tuple(float(w) for w in self.preferences)
        object.__setattr__(self, "preferences", prefs)
        if any(not math.isfinite(w) or w < 0 for w in prefs):
            raise ValidationError(f"group {self.group_id!r}: preferences must be nonnegative")
        if sum(prefs) <= 0:
            raise ValidationError(f"group {self.group_id!r}: at least one positive preference required")
        probs = {int(k): float(p) for k, p in self.follow_count_probs.items()}
        object.__setattr__(self, "follow_count_probs", probs)
        if not probs:
            raise ValidationError(f"group {self.group_id!r}: empty follow-count distribution")
        if any(p < 0 or not math.isfinite(p) for p in probs.values()):
            raise ValidationError(f"group {self.group_id!r}: follow-count probabilities must be nonnegative")
        total = math.fsum(probs.values())
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(
                f"group {self.group_id!r}: follow-count probabilities sum to {total!r}, expected 1"
            )

    @property
    def support(self) -> tuple[int, ...]:
        """Follow counts that can actually be drawn."""
        return tuple(sorted(k for k, p in self.follow_count_probs.items() if p > 0))


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    unit_ids: tuple[str, ...]
    groups: tuple[GroupSpec, ...]
    beta: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "unit_ids", tuple(self.unit_ids))
        object.__setattr__(self, "groups", tuple(self.groups))
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit nonnegative integer")
        m = len(self.unit_ids)
        if m < 1:
            raise ValidationError("at least one unit is required")
        for u in self.unit_ids:
            check_identifier(u, "unit id")
        if len(set(self.unit_ids)) != m:
            raise ValidationError("duplicate unit ids")
        if len({g.group_id for g in self.groups}) != len(self.groups):
            raise ValidationError("duplicate group ids")
        if not math.isfinite(self.beta) or self.beta < 0:
            raise ValidationError(f"beta must be >= 0, got {self.beta!r}")
        for g in self.groups:
            if len(g.preferences) != m:
                raise ValidationError(
                    f"group {g.group_id!r}: {len(g.preferences)} preferences for {m} units"
                )
            bad = [k for k in g.follow_count_probs if not 1 <= k <= m]
            if bad:
                raise ValidationError(
                    f"group {g.group_id!r}: follow counts {bad} outside [1, {m}]"
                )
            positive = sum(1 for w in g.preferences if w > 0)
            too_big = [k for k in g.support if k > positive]
            if too_big:
                raise ValidationError(
                    f"group {g.group_id!r}: follow count {too_big[0]} exceeds the "
                    f"{positive} units with positive preference"
                )


def sharpened(preferences: Sequence[float], beta: float) -> np.ndarray:
    """weight_i proportional to pref_i^beta on the support; beta=0 is uniform over it."""
    prefs = np.asarray(preferences, dtype=float)
    weights = np.zeros_like(prefs)
    positive = prefs > 0
    weights[positive] = prefs[positive] ** beta
    return weights / weights.sum()


def _draw_index(gen: np.random.Generator, cumulative: np.ndarray) -> int:
    r = gen.random() * cumulative[-1]
    return min(int(np.searchsorted(cumulative, r, side="right")), len(cumulative) - 1)


def generate(config: GeneratorConfig) -> list[tuple[str, str, str]]:
    """Produce (person_id, group_id, unit_id) rows, fully determined by the seed.

    Per person: draw a follow count k from the group's distribution, then k
    distinct units by sequential weighted sampling without replacement from
    the beta-sharpened group preferences.
    """
    rows: list[tuple[str, str, str]] = []
    person_index = 0
    for group in config.groups:
        weights = sharpened(group.preferences, config.beta)
        support = np.array(group.support)
        count_cdf = np.cumsum([group.follow_count_probs[int(k)] for k in support])
        for i in range(group.size):
            gen = np.random.Generator(
                np.random.Philox(key=config.seed, counter=person_index << 128)
            )
            person_index += 1
            k = int(support[_draw_index(gen, count_cdf)])
            remaining = weights.copy()
            person = f"{group.group_id}-p{i}"
            for _ in range(k):
                idx = _draw_index(gen, np.cumsum(remaining))
                remaining[idx] = 0.0
                rows.append((person, group.group_id, config.unit_ids[idx]))
    return rows


def parse_generator_config(text: str, path: str | None = None) -> GeneratorConfig:
    """JSON config -> validated :class:`GeneratorConfig`.

    Shape: ``{"kind": "generator-config", "seed": int, "units": [...],
    "beta": float?, "groups": [{"group", "size", "preferences",
    "follow_counts"}]}`` where preferences may be a list aligned with units
    or a mapping unit->weight (missing units get 0), and follow_counts maps
    the count (JSON string key) to its probability.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", path=path)
    if obj.get("kind", KIND_GENERATOR_CONFIG) != KIND_GENERATOR_CONFIG:
        raise ParseError(f"expected kind {KIND_GENERATOR_CONFIG!r}, got {obj.get('kind')!r}", path=path)
    try:
        unit_ids = tuple(obj["units"])
        groups = []
        for spec in obj["groups"]:
            prefs = spec["preferences"]
            if isinstance(prefs, dict):
                unknown = sorted(set(prefs) - set(unit_ids))
                if unknown:
                    raise ParseError(
                        f"group {spec.get('group')!r}: preferences for unknown units {unknown}",
                        path=path,
                    )
                prefs = [float(prefs.get(u, 0.0)) for u in unit_ids]
            groups.append(
                GroupSpec(
                    group_id=spec["group"],
                    size=spec["size"],
                    preferences=tuple(float(w) for w in prefs),
                    follow_count_probs={int(k): float(p) for k, p in spec["follow_counts"].items()},
                )
            )
        return GeneratorConfig(
            seed=obj["seed"],
            unit_ids=unit_ids,
            groups=tuple(groups),
            beta=float(obj.get("beta", 1.0)),
        )
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}", path=path) from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad generator config: {exc}", path=path) from exc
    except ValidationError as exc:
        raise ParseError(str(exc), path=path) from exc
