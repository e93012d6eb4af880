"""Simulation and fitting toolkit for the unimon superconducting qubit."""

__version__ = "0.1.0"

from .circuit import (  # noqa: E402
    CircuitParams,
    DcOperatingPoint,
    FluxBias,
    check_impedance,
    cpw_line_constants,
    inductance_ratio,
    solve_dc_phase,
)
from .decoherence import (  # noqa: E402
    NoiseEnvironment,
    coherence_limit_fidelity,
    echo_dephasing_rate,
    echo_t2,
    fit_flux_noise_density,
    frequency_slope,
    t1_budget,
    t1_budget_sweep,
)
from .errors import *  # noqa: E402,F401,F403
from .fitting import (  # noqa: E402
    FitResult,
    SpectroscopyDataset,
    fit_coupling_from_crossing,
    fit_spectrum_model1,
)
from .modes import ModeSolution, orthogonality_residuals, solve_modes, solve_wavenumbers  # noqa: E402
from .readout import (  # noqa: E402
    ReadoutParams,
    avoided_crossing_trace,
    coupling_strengths,
    dispersive_shift_approx,
    dispersive_shift_exact,
)
from .spectrum1 import GridSpec, diagonalize, flux_sweep, parity_check, solve_point  # noqa: E402
from .spectrum2 import build_aux_model, build_lumped_model, diagonalize_model2, exact_kernel, model2_point  # noqa: E402
