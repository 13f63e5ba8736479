"""Quantum memory on Fano-type exciton resonances.

Modules
-------
fano        dressed resonances: poles, phase shifts, Beutler-Fano profiles
response    complex response functions beta1, beta1L, beta2, b, f
dispersion  two-branch polariton dispersion and regime checks
dynamics    per-mode evolution (closed form and RK4 oracle), pulse transport
memory      write / store / retrieve protocol and fidelity diagnostics
scenario    YAML scenarios and presets behind the ``excitonmem`` CLI
"""
from .dispersion import (
    BranchPoint,
    MediumParams,
    check_conditions,
    dispersion_sweep,
    memory_regime,
    omega_pm,
    small_k,
    system_matrix,
    wavenumbers,
)
from .dynamics import (
    ModeState,
    PulseState,
    evolve_mode_analytic,
    gaussian_pulse,
    ode_oracle,
    propagate_pulse,
    uniform_grid,
)
from .errors import NumericalError, ValidationError
from .fano import (
    BareResonancePair,
    Resonance,
    effective_levels,
    fano_profile,
    fano_windows,
    phase_shift,
    poles,
)
from .memory import (
    ControlSchedule,
    MemoryReport,
    retrieve_stage,
    round_trip,
    shifted_overlap,
    write_stage,
)
from .response import (
    FanoModel,
    ResponsePoint,
    TwoResonanceModel,
    beta_quadrature,
    transparency_point,
)

__version__ = "0.1.0"
