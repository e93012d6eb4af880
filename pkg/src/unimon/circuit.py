"""Circuit parameters, CPW line constants and the dc flux-quantization solver."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.special import ellipk

from .constants import C_LIGHT, EPS0, FF, GHZ, H, MM, NH_PER_MM, FF_PER_MM, PHI0, PHI0_R
from .errors import NonConvergence, OutOfDomain, ParameterError

DC_XTOL = 1e-12
DC_MAXITER = 200
MULTIVALUED_SCAN = 2000


@dataclass(frozen=True)
class CircuitParams:
    """One unimon: a grounded lambda/2 CPW with a junction at ``junction_pos_xj``.

    All fields are SI.  ``junction_pos_xj`` is measured from the resonator centre.
    """

    total_length_2l: float
    junction_pos_xj: float
    cap_per_len_Cl: float
    ind_per_len_Ll: float
    josephson_energy_EJ: float
    junction_cap_CJ: float = 0.0
    temperature: float = 0.010

    def __post_init__(self):
        for name in ("total_length_2l", "cap_per_len_Cl", "ind_per_len_Ll", "josephson_energy_EJ"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {v!r}")
        if not (np.isfinite(self.junction_cap_CJ) and self.junction_cap_CJ >= 0):
            raise ParameterError(f"junction_cap_CJ must be >= 0, got {self.junction_cap_CJ!r}")
        if not abs(self.junction_pos_xj) < self.total_length_2l / 2:
            raise ParameterError("|junction_pos_xj| must be smaller than half the length")
        if not self.temperature > 0:
            raise ParameterError("temperature must be > 0")

    @classmethod
    def from_user_units(cls, length_mm, xj_mm, Cl_fF_per_mm, Ll_nH_per_mm, EJ_GHz, CJ_fF=0.0,
                        temperature_mK=10.0) -> "CircuitParams":
        return cls(length_mm * MM, xj_mm * MM, Cl_fF_per_mm * FF_PER_MM, Ll_nH_per_mm * NH_PER_MM,
                   EJ_GHz * GHZ * H, CJ_fF * FF, temperature_mK * 1e-3)

    def replace(self, **changes) -> "CircuitParams":
        return dataclasses.replace(self, **changes)

    @property
    def half_length(self) -> float:
        return self.total_length_2l / 2

    @property
    def phase_velocity(self) -> float:
        return 1.0 / math.sqrt(self.ind_per_len_Ll * self.cap_per_len_Cl)

    @property
    def impedance(self) -> float:
        return math.sqrt(self.ind_per_len_Ll / self.cap_per_len_Cl)

    @property
    def L_J(self) -> float:
        return PHI0_R**2 / self.josephson_energy_EJ

    @property
    def L_line(self) -> float:
        return self.total_length_2l * self.ind_per_len_Ll

    @property
    def E_L(self) -> float:
        """Inductive energy of a dc current through the whole centre conductor."""
        return PHI0_R**2 / self.L_line

    @property
    def C_sigma(self) -> float:
        return self.total_length_2l * self.cap_per_len_Cl + self.junction_cap_CJ


@dataclass(frozen=True)
class FluxBias:
    phi_diff: float  # in units of the flux quantum

    def __post_init__(self):
        if not np.isfinite(self.phi_diff):
            raise ParameterError("phi_diff must be finite")

    @property
    def angle(self) -> float:
        return 2 * np.pi * self.phi_diff


def as_bias(b) -> FluxBias:
    return b if isinstance(b, FluxBias) else FluxBias(float(b))


@dataclass(frozen=True)
class DcOperatingPoint:
    phase_phi0: float
    inductance_ratio: float
    branch_count: int
    is_single_valued: bool

    @property
    def multivalued(self) -> bool:
        return self.branch_count > 1


def inductance_ratio(params: CircuitParams) -> float:
    return params.L_line * params.josephson_energy_EJ * (2 * np.pi / PHI0) ** 2


def check_impedance(Cl: float, Ll: float) -> float:
    if not (Cl > 0 and Ll > 0):
        raise ParameterError("Cl and Ll must be positive")
    return math.sqrt(Ll / Cl)


def _k_ratio(m: float) -> float:
    # K(1) diverges, so both m and 1 - m must lie in [0, 1)
    if not (0.0 < m < 1.0):
        raise OutOfDomain(f"elliptic parameter {m!r} outside (0, 1)")
    return float(ellipk(m) / ellipk(1.0 - m))


def cpw_line_constants(center_width_a: float, total_width_b: float, substrate_thickness_eta: float,
                       rel_permittivity_epsr: float) -> tuple[float, float, float]:
    """Conformal-mapping estimate of (Cl, Ll, Z) for a CPW on a finite substrate."""
    a, b, eta, er = center_width_a, total_width_b, substrate_thickness_eta, rel_permittivity_epsr
    if not (eta > 0 and er >= 1):
        raise OutOfDomain("need eta > 0 and epsr >= 1")
    if not (0 < a < b):
        raise OutOfDomain("need 0 < a < b")
    r2 = math.tanh(math.pi * a / (4 * eta)) / math.tanh(math.pi * b / (4 * eta))
    r1 = _k_ratio(r2**2)
    r4 = a / b
    r3 = _k_ratio(r4**2)
    c_air = 2 * EPS0 * (r1 + r3)
    Cl = 2 * EPS0 * (er - 1) * r1 + c_air
    Ll = 1.0 / (c_air * C_LIGHT**2)
    return Cl, Ll, math.sqrt(Ll / Cl)


def _dc_potential(phi, target, params: CircuitParams):
    return -params.josephson_energy_EJ * np.cos(phi) + PHI0_R**2 * (phi - target) ** 2 / (2 * params.L_line)


def _bisect(f, lo, hi):
    root, res = bisect(f, lo, hi, xtol=DC_XTOL, maxiter=DC_MAXITER, full_output=True, disp=False)
    if not res.converged:
        raise NonConvergence(f"dc phase bisection did not converge in {DC_MAXITER} iterations")
    return root


def solve_dc_phase(params: CircuitParams, bias) -> DcOperatingPoint:
    """Solve phi0 + ratio*sin(phi0) = 2 pi Phi_diff / Phi0.

    The bias is folded to [0, 1/2] first, so odd symmetry and unit-period
    shifts hold to rounding.  For ratio > 1 every root in the bracket is
    enumerated and the one with the lowest dc energy is kept.
    """
    bias = as_bias(bias)
    ratio = inductance_ratio(params)
    n = float(np.round(bias.phi_diff))
    frac = bias.phi_diff - n
    sign = -1.0 if frac < 0 else 1.0
    t = 2 * np.pi * abs(frac)

    def f(p):
        return p + ratio * math.sin(p) - t

    lo, hi = t - (1 + ratio), t + (1 + ratio)
    if ratio <= 1:
        root = _bisect(f, lo, hi)
        count = 1
    else:
        grid = np.linspace(lo, hi, MULTIVALUED_SCAN)
        vals = grid + ratio * np.sin(grid) - t
        roots = [grid[i] for i in np.nonzero(vals == 0)[0]]
        for i in np.nonzero(vals[:-1] * vals[1:] < 0)[0]:
            roots.append(_bisect(f, grid[i], grid[i + 1]))
        roots = sorted(roots)
        count = len(roots)
        energies = np.array([_dc_potential(r, t, params) for r in roots])
        emin = energies.min()
        tie = np.abs(energies - emin) <= 1e-12 * max(abs(emin), params.josephson_energy_EJ)
        cands = [r for r, ok in zip(roots, tie) if ok]
        root = min(cands, key=lambda r: (abs(r - t), r))
    phase = sign * root + 2 * np.pi * n
    resid = abs(phase + ratio * math.sin(phase) - 2 * np.pi * bias.phi_diff)
    if resid > 1e-10 * max(1.0, abs(2 * np.pi * n)):
        raise NonConvergence(f"dc phase residual {resid:.3e} above tolerance")
    return DcOperatingPoint(float(phase), float(ratio), int(count), bool(ratio <= 1))
