"""Information-segregation measures over fractional personhood distributions.

Pipeline: access data (membership logs, exact access-set counts, or
union-reach observations) -> per-group fractional personhoods over the
information units -> five segregation measures (evenness, joint exposure,
concentration, centralization, clustering).  A separate classifier assigns
media sources to units from their audience's leaning composition.
"""

from infoseg._kernels import BACKEND
from infoseg.errors import (
    InconsistentObservationsError,
    InfosegError,
    ParseError,
    UndefinedMeasureError,
    ValidationError,
)
from infoseg.leaning import (
    DEFAULT_THRESHOLDS,
    DEFAULT_WEIGHTS,
    AudienceComposition,
    LeaningThresholds,
    classify_leaning,
    leaning_score,
    map_sources,
    unit_counts,
)
from infoseg.measures import (
    ALL_MEASURES,
    MeasureReport,
    MeasureRow,
    centralization_index,
    clustering_index,
    concentration,
    evenness,
    joint_exposure,
    measure_all,
)
from infoseg.model import (
    POLITICAL_UNITS,
    ExactSetCounts,
    GroupDistribution,
    PersonhoodTable,
    UnitSpace,
    center_order_from_unit,
    group_distribution,
    political_unit_space,
    validate_unit_space,
)
from infoseg.personhood import (
    MAX_ENUM_UNITS,
    ObservationTable,
    exact_counts_from_memberships,
    exact_counts_from_union_observations,
    personhoods,
    union_observations_from_exact,
)
from infoseg.synthgen import GeneratorConfig, GroupSpec, generate, parse_generator_config

__version__ = "0.1.0"

__all__ = [
    "ALL_MEASURES",
    "AudienceComposition",
    "BACKEND",
    "DEFAULT_THRESHOLDS",
    "DEFAULT_WEIGHTS",
    "ExactSetCounts",
    "GeneratorConfig",
    "GroupDistribution",
    "GroupSpec",
    "InconsistentObservationsError",
    "InfosegError",
    "LeaningThresholds",
    "MAX_ENUM_UNITS",
    "MeasureReport",
    "MeasureRow",
    "ObservationTable",
    "POLITICAL_UNITS",
    "ParseError",
    "PersonhoodTable",
    "UndefinedMeasureError",
    "UnitSpace",
    "ValidationError",
    "center_order_from_unit",
    "centralization_index",
    "classify_leaning",
    "clustering_index",
    "concentration",
    "evenness",
    "exact_counts_from_memberships",
    "exact_counts_from_union_observations",
    "generate",
    "group_distribution",
    "joint_exposure",
    "leaning_score",
    "map_sources",
    "measure_all",
    "parse_generator_config",
    "personhoods",
    "political_unit_space",
    "unit_counts",
    "union_observations_from_exact",
    "validate_unit_space",
]
