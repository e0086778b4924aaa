"""Colour systems: construction, validation, realization, and copy tables."""

from .counting import (
    ClassMeetingCounter,
    count_injective_tuples,
    exact_mu,
    exact_mu_system,
    exact_nu,
    kappa,
    kappa_table,
    psi_table,
)
from .extensions import (
    Decomposition,
    DispersednessQuery,
    DispersednessReport,
    PatternNotRepresented,
    decompose,
    dispersedness_estimate,
    extend_restricted,
    extension_system,
)
from .position import (
    Generality,
    GeneralPositionReport,
    SetFamily,
    classify_generality,
    general_position_check,
    intersection_deviation,
    is_essentially_p_general,
    is_essentially_weakly_p_general,
    is_p_general,
    is_weakly_p_general,
    neighbourhood_family,
)
from .systems import (
    ColourParams,
    ColourSystem,
    Edge,
    Extension,
    RestrictedColourSystem,
    Violation,
    assemble,
    drop_last_colour,
    ensure_valid,
    is_complete,
    itershades,
    realize,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
