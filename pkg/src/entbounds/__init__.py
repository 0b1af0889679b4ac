"""Tightened monogamy and polygamy bounds for multiqubit entanglement."""
from .bounds import (
    BoundReport,
    ExponentConfig,
    PartitionConditions,
    check_conditions,
    evaluate,
    max_admissible_gamma,
    theorem1_bound,
    theorem2_bound,
    theorem3_bound,
    theorem4_bound,
    theorem5_bound,
    theorem6_bound,
)
from .measures import (
    MeasureKind,
    MeasureVector,
    concurrence_of_assistance,
    measure_vector,
    wootters_concurrence,
)
from .scalar import DomainError
from .states import StateVector, catalog_state, haar_random_state, load_state, save_state

__version__ = "0.1.0"
