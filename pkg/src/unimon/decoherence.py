"""Relaxation channels, dephasing models and coherence-limited gate fidelity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import as_bias
from .constants import HBAR, PHI0, coth_factor
from .errors import DegenerateDesign, InsufficientPoints, ResonantDivergence
from .readout import ReadoutParams, coupling_strengths
from .spectrum1 import DEFAULT_GRID, GridSpec, QubitPoint, SingleModeSpectrum, solve_point, thread_map

CHANNELS = ("ohmic_flux", "one_over_f_flux", "dielectric", "inductive", "radiative", "purcell")


@dataclass(frozen=True)
class NoiseEnvironment:
    """Noise sources; a channel whose parameter is None is disabled."""

    flux_line_mutual_M: float | None = None
    flux_line_resistance_R: float | None = None
    one_over_f_amp_APhi: float | None = None  # Wb
    q_dielectric_QC: float | None = None
    q_inductive_QL: float | None = None
    q_radiative_Qrad: float | None = None
    temperature: float = 0.010

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("temperature must be > 0")
        for name in ("q_dielectric_QC", "q_inductive_QL", "q_radiative_Qrad", "flux_line_resistance_R"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be > 0 when enabled")


@dataclass(frozen=True)
class DecoherenceBudget:
    rates: dict
    t1_total: float
    t1_per_channel: dict = field(default_factory=dict)


def _w01(spectrum: SingleModeSpectrum) -> float:
    return 2 * np.pi * spectrum.f01


def rate_ohmic_flux(spectrum: SingleModeSpectrum, E_L: float, env: NoiseEnvironment) -> float:
    M, R = env.flux_line_mutual_M or 0.0, env.flux_line_resistance_R
    if M == 0.0 or R is None:
        return 0.0
    w = _w01(spectrum)
    phi01 = spectrum.phase_elems[0, 1]
    return 8 * np.pi**2 * E_L**2 * M**2 * w / (PHI0**2 * HBAR * R) * phi01**2 * coth_factor(w, env.temperature)


def rate_one_over_f_flux(spectrum: SingleModeSpectrum, E_L: float, env: NoiseEnvironment) -> float:
    A = env.one_over_f_amp_APhi or 0.0
    phi01 = spectrum.phase_elems[0, 1]
    return 8 * np.pi**3 * (E_L / HBAR) ** 2 * (A / PHI0) ** 2 * phi01**2 / _w01(spectrum)


def rate_dielectric(spectrum: SingleModeSpectrum, E_C_m: float, env: NoiseEnvironment) -> float:
    if env.q_dielectric_QC is None:
        return 0.0
    w = _w01(spectrum)
    n01 = spectrum.charge_elems[0, 1]
    return 16 * E_C_m / (HBAR * env.q_dielectric_QC) * n01**2 * coth_factor(w, env.temperature)


def rate_inductive(spectrum: SingleModeSpectrum, E_L_m: float, env: NoiseEnvironment) -> float:
    if env.q_inductive_QL is None:
        return 0.0
    w = _w01(spectrum)
    phi01 = spectrum.phase_elems[0, 1]
    return 2 * E_L_m / (HBAR * env.q_inductive_QL) * phi01**2 * coth_factor(w, env.temperature)


def rate_radiative(spectrum: SingleModeSpectrum, env: NoiseEnvironment) -> float:
    if env.q_radiative_Qrad is None:
        return 0.0
    w = _w01(spectrum)
    n01 = spectrum.charge_elems[0, 1]
    return w / env.q_radiative_Qrad * coth_factor(w, env.temperature) * n01**2


def rate_purcell(g01: float, w01: float, wr: float, kappa: float) -> float:
    d = w01 - wr
    if kappa == 0:
        return 0.0
    if abs(d) < kappa:
        raise ResonantDivergence("|w01 - w_r| < kappa")
    return kappa * abs(g01) ** 2 / d**2


def channel_rates(point: QubitPoint, env: NoiseEnvironment, readout: ReadoutParams | None = None) -> dict:
    s, m, p = point.spectrum, point.mode, point.params
    rates = {}
    if env.flux_line_mutual_M is not None and env.flux_line_resistance_R is not None:
        rates["ohmic_flux"] = rate_ohmic_flux(s, p.E_L, env)
    if env.one_over_f_amp_APhi is not None:
        rates["one_over_f_flux"] = rate_one_over_f_flux(s, p.E_L, env)
    if env.q_dielectric_QC is not None:
        rates["dielectric"] = rate_dielectric(s, m.E_C_m, env)
    if env.q_inductive_QL is not None:
        rates["inductive"] = rate_inductive(s, m.E_L_m, env)
    if env.q_radiative_Qrad is not None:
        rates["radiative"] = rate_radiative(s, env)
    if readout is not None:
        g = coupling_strengths(s, m, readout, p).g_ij[0, 1]
        rates["purcell"] = rate_purcell(g, _w01(s), readout.omega_r, readout.linewidth_kappa)
    return rates


def _budget(rates: dict) -> DecoherenceBudget:
    total = math.fsum(rates.values())
    per = {k: (1.0 / r if r > 0 else math.inf) for k, r in rates.items()}
    return DecoherenceBudget(dict(rates), 1.0 / total if total > 0 else math.inf, per)


def reference_scaling(ref_rates: dict, measured_t1: float, include_purcell: bool = False) -> dict:
    """Per-channel multipliers so each scaled channel reproduces ``measured_t1`` at the reference.

    With ``include_purcell`` the target is the channel plus Purcell decay,
    i.e. the Purcell-limited remainder is what the channel must supply.
    """
    target = 1.0 / measured_t1
    if include_purcell:
        target -= ref_rates.get("purcell", 0.0)
        if target <= 0:
            raise ValueError("Purcell decay alone is faster than the measured T1")
    out = {}
    for k, r in ref_rates.items():
        if k == "purcell":
            continue
        out[k] = target / r if r > 0 else 0.0
    return out


def t1_budget(point: QubitPoint, env: NoiseEnvironment, readout: ReadoutParams | None = None,
              scale_to=None, include_purcell: bool = False, grid: GridSpec | None = None,
              scales: dict | None = None) -> DecoherenceBudget:
    """Rates at ``point``; ``scale_to=(bias, T1)`` rescales each non-Purcell channel's strength."""
    rates = channel_rates(point, env, readout)
    if scale_to is not None and scales is None:
        ref_bias, t1 = scale_to
        ref = solve_point(point.params, as_bias(ref_bias), grid or point.spectrum.grid_spec)
        scales = reference_scaling(channel_rates(ref, env, readout), t1, include_purcell)
    if scales:
        rates = {k: r * scales.get(k, 1.0) for k, r in rates.items()}
    return _budget(rates)


@dataclass(frozen=True)
class BudgetRow:
    phi_diff: float
    f01: float
    budget: DecoherenceBudget


def t1_budget_sweep(params, env: NoiseEnvironment, readout: ReadoutParams | None, biases, scale_to=None,
                    include_purcell: bool = False, grid: GridSpec = DEFAULT_GRID, threads: int = 1) -> list[BudgetRow]:
    scales = None
    if scale_to is not None:
        ref = solve_point(params, as_bias(scale_to[0]), grid)
        scales = reference_scaling(channel_rates(ref, env, readout), scale_to[1], include_purcell)

    def one(b):
        pt = solve_point(params, b, grid)
        return BudgetRow(pt.bias.phi_diff, pt.spectrum.f01, t1_budget(pt, env, readout, scales=scales))

    return thread_map(one, biases, threads)


def echo_dephasing_rate(dw_dphi: float, APhi: float, gamma_x: float) -> float:
    return math.sqrt(math.log(2)) * APhi * abs(dw_dphi) + gamma_x


def echo_t2(gamma_gauss: float, gamma_exp: float) -> float:
    """1/e time of exp(-Ge t - (Gg t)^2)."""
    if gamma_gauss == 0:
        return 1.0 / gamma_exp
    # positive root of g2 t^2 + Ge t - 1, written without cancellation
    return 2.0 / (gamma_exp + math.sqrt(gamma_exp**2 + 4 * gamma_gauss**2))


def ramsey_rate_model(dw_dphi, a_coef: float, b_coef: float):
    return a_coef * np.abs(dw_dphi) + b_coef


def frequency_slope(bias_freq_pairs, window: int | None = 5) -> np.ndarray:
    """d omega / d Phi at each bias from a least-squares parabola.

    ``window`` nearest points are used around each bias; None fits one
    parabola to everything.
    """
    pts = np.asarray(bias_freq_pairs, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise InsufficientPoints("need at least 3 (bias, frequency) pairs")
    x, y = pts[:, 0], pts[:, 1]
    if np.unique(x).size < 3:
        raise InsufficientPoints("need at least 3 distinct biases")
    if window is None or window >= len(x):
        a, b, _ = np.polyfit(x, y, 2)
        return 2 * a * x + b
    window = max(window, 3)
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        idx = np.argsort(np.abs(x - xi), kind="stable")[:window]
        a, b, _ = np.polyfit(x[idx], y[idx], 2)
        out[i] = 2 * a * xi + b
    return out


def coherence_limit_fidelity(tg: float, t1: float, t2e: float) -> float:
    return (3 + math.exp(-tg / t1) + 2 * math.exp(-tg / t2e)) / 6


@dataclass(frozen=True)
class FluxNoiseFit:
    APhi: float  # Wb
    gamma_x: float  # 1/s
    covariance: np.ndarray  # of (sqrt(ln2) A, gamma_x) in the raw OLS
    residual_rms: float
    clipped: bool


def fit_flux_noise_density(slope_rate_pairs) -> FluxNoiseFit:
    """OLS of Gamma = sqrt(ln 2) A |dw/dPhi| + Gamma_x; A is clipped at zero."""
    pts = np.asarray(slope_rate_pairs, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise InsufficientPoints("need at least 3 (slope, rate) pairs")
    s, g = np.abs(pts[:, 0]), pts[:, 1]
    if np.ptp(s) == 0:
        raise DegenerateDesign("all slopes are equal; A and Gamma_x are not separable")
    X = np.column_stack([s, np.ones_like(s)])
    col = np.abs(X).max(axis=0)  # column scaling keeps lstsq well conditioned
    coef, *_ = np.linalg.lstsq(X / col, g, rcond=None)
    coef = coef / col
    resid = g - X @ coef
    dof = max(len(g) - 2, 1)
    sigma2 = resid @ resid / dof
    cov = sigma2 * np.linalg.inv(X.T @ X)
    k = math.sqrt(math.log(2))
    A = coef[0] / k
    clipped = A < 0
    if clipped:
        A = 0.0
        coef = np.array([0.0, g.mean()])
        resid = g - coef[1]
    return FluxNoiseFit(float(A), float(coef[1]), cov, float(np.sqrt(np.mean(resid**2))), bool(clipped))
