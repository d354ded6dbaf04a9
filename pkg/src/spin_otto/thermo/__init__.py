"""Otto-cycle thermodynamics: numeric strokes, closed forms and local-spin views."""

from .closed_form import (
    efficiency_from_temperatures,
    finite_time_closed_form,
    irreversible_work,
    quasistatic_closed_form,
)
from .cycle import (
    classify_machine,
    classify_signs,
    cycle_states,
    efficiency_carnot,
    run_cycle_numeric,
    thermalization_profile,
    thermalization_time,
)
from .local import (
    local_cycle_numeric,
    local_finite_time,
    local_quasistatic,
    local_quasistatic_efficiency,
    max_power_point,
    single_spin_otto_eff,
    work_gap,
)

__all__ = [
    "classify_machine",
    "classify_signs",
    "cycle_states",
    "efficiency_carnot",
    "efficiency_from_temperatures",
    "finite_time_closed_form",
    "irreversible_work",
    "local_cycle_numeric",
    "local_finite_time",
    "local_quasistatic",
    "local_quasistatic_efficiency",
    "max_power_point",
    "quasistatic_closed_form",
    "run_cycle_numeric",
    "single_spin_otto_eff",
    "thermalization_profile",
    "thermalization_time",
    "work_gap",
]
