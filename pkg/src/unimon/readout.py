"""Capacitive coupling of the qubit mode to a lambda/4 readout resonator."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams, as_bias
from .constants import RK
from .errors import DispersiveRegimeWarning, ParameterError, ResonantDivergence, TruncationNotConverged
from .modes import ModeSolution, envelope_value
from .spectrum1 import DEFAULT_GRID, GridSpec, SingleModeSpectrum, solve_point, thread_map
from .constants import H


@dataclass(frozen=True)
class ReadoutParams:
    resonator_freq_fr: float  # Hz
    linewidth_kappa: float  # rad/s, full width
    coupling_cap_Cg: float
    coupling_pos_xg: float  # measured from the resonator centre
    line_impedance_Ztr: float = 50.0
    resonator_cap_Cr: float | None = None
    resonator_ind_Lr: float | None = None

    def __post_init__(self):
        if not self.resonator_freq_fr > 0:
            raise ParameterError("resonator_freq_fr must be > 0")
        if not self.linewidth_kappa >= 0:
            raise ParameterError("linewidth_kappa must be >= 0")
        if not self.coupling_cap_Cg >= 0:
            raise ParameterError("coupling_cap_Cg must be >= 0")
        if not self.line_impedance_Ztr > 0:
            raise ParameterError("line_impedance_Ztr must be > 0")
        if self.resonator_cap_Cr is not None and self.resonator_ind_Lr is not None:
            wr = 1.0 / np.sqrt(self.resonator_ind_Lr * (self.resonator_cap_Cr + self.coupling_cap_Cg))
            if abs(wr / (2 * np.pi * self.resonator_freq_fr) - 1) > 1e-6:
                raise ParameterError("Cr, Lr and Cg are inconsistent with resonator_freq_fr")

    @property
    def omega_r(self) -> float:
        return 2 * np.pi * self.resonator_freq_fr

    @classmethod
    def from_quarter_wave(cls, Cl_r: float, Ll_r: float, length_r: float, Cg: float, xg: float,
                          kappa: float, Ztr: float = 50.0) -> "ReadoutParams":
        Cr = Cl_r * length_r / 2
        Lr = 8 * Ll_r * length_r / np.pi**2
        fr = 1.0 / (2 * np.pi * np.sqrt(Lr * (Cr + Cg)))
        return cls(fr, kappa, Cg, xg, Ztr, Cr, Lr)

    def check_position(self, params: CircuitParams):
        if not abs(self.coupling_pos_xg) < params.half_length:
            raise ParameterError("|coupling_pos_xg| must be smaller than half the qubit length")


@dataclass(frozen=True)
class CouplingTable:
    g_ij: np.ndarray  # rad/s
    u_at_xg: float
    C_u_tot: float


@dataclass(frozen=True)
class DispersiveResult:
    chi_exact: float
    chi_approx: float
    lamb_shifts_Lambda_j: np.ndarray
    chi_j_per_level: np.ndarray


def coupling_strengths(spectrum: SingleModeSpectrum, mode: ModeSolution, readout: ReadoutParams,
                       params: CircuitParams, exact_impedance: bool = False) -> CouplingTable:
    readout.check_position(params)
    xg = readout.coupling_pos_xg
    if np.isclose(xg, params.junction_pos_xj, rtol=0, atol=1e-12 * params.half_length):
        raise ParameterError("coupling point coincides with the junction")
    u = envelope_value(mode, xg)
    Cg = readout.coupling_cap_Cg
    C_tot = params.C_sigma + Cg * u * u
    if exact_impedance:
        if readout.resonator_cap_Cr is None or readout.resonator_ind_Lr is None:
            raise ParameterError("exact-impedance coupling needs resonator_cap_Cr and resonator_ind_Lr")
        z = np.sqrt(readout.resonator_ind_Lr / (readout.resonator_cap_Cr + Cg))
        imp = np.sqrt(np.pi * z / RK)
    else:
        imp = np.sqrt(4 * readout.line_impedance_Ztr / RK)
    pref = 2 * readout.omega_r * Cg * u * mode.delta_u / C_tot * imp
    return CouplingTable(pref * spectrum.charge_elems, float(u), float(C_tot))


def _levels(spectrum: SingleModeSpectrum, n_levels: int):
    E = spectrum.eigen_energies[:n_levels]
    return 2 * np.pi * (E - E[0]) / H


def dispersive_shift_exact(spectrum: SingleModeSpectrum, coupling: CouplingTable, readout: ReadoutParams,
                           n_levels: int = 6, rotating_only: bool = False) -> DispersiveResult:
    """chi_ij = |g_ij|^2 / (w_j - w_i - w_r), summed into Lambda_j, chi_j and chi."""
    n = min(n_levels, len(spectrum.eigen_energies))
    w = _levels(spectrum, n)
    g = coupling.g_ij[:n, :n]
    return _dispersive_from(w, g, readout, rotating_only, spectrum)


def _dispersive_from(w, g, readout: ReadoutParams, rotating_only: bool, spectrum=None) -> DispersiveResult:
    n = len(w)
    wr = readout.omega_r
    den = w[None, :] - w[:, None] - wr  # den[i, j] = w_j - w_i - w_r
    g2 = np.abs(g) ** 2
    active = g2 > 1e-24 * g2.max(initial=0.0)
    if rotating_only:
        active &= np.triu(np.ones((n, n), dtype=bool), 1)
    if np.any(np.abs(den[active]) < readout.linewidth_kappa):
        raise ResonantDivergence("a transition lies within kappa of the resonator")
    chi_ij = np.where(active, g2 / np.where(active, den, 1.0), 0.0)
    lam = chi_ij.sum(axis=0)
    chi_j = chi_ij.sum(axis=0) - chi_ij.sum(axis=1)
    chi = (chi_j[1] - chi_j[0]) / 2
    if n >= 3:
        approx = _approx(w[1] - w[0], w[2] - w[1], g[0, 1], g[1, 2], wr, readout.linewidth_kappa)
    else:
        approx = _approx(w[1] - w[0], 0.0, g[0, 1], 0.0, wr, readout.linewidth_kappa)
    if g2.max(initial=0.0) > 0 and abs(w[1] - w[0] - wr) < 10 * abs(g[0, 1]):
        warnings.warn(DispersiveRegimeWarning("|w01 - w_r| < 10 |g01|"), stacklevel=3)
    return DispersiveResult(float(chi), float(approx), lam, chi_j)


def _approx(w01, w12, g01, g12, wr, kappa=0.0):
    d1 = w01 - wr
    if abs(d1) < kappa or (g12 != 0 and abs(w12 - wr) < kappa):
        raise ResonantDivergence("transition within kappa of the resonator")
    out = abs(g01) ** 2 / d1
    if g12 != 0:
        out -= 0.5 * abs(g12) ** 2 / (w12 - wr)
    return out


def dispersive_shift_approx(f01: float, f12: float, g01: float, g12: float, fr: float, kappa: float = 0.0) -> float:
    """chi ~ g01^2/(w01 - w_r) - g12^2/(2 (w12 - w_r)); frequencies in Hz, couplings in rad/s."""
    tp = 2 * np.pi
    return float(_approx(tp * f01, tp * f12, g01, g12, tp * fr, kappa))


def _coupled_levels(w, g, wr, n_ph):
    """Eigenvalues of w_r a^dag a + sum w_j |j><j| + sum_ij (g_ij |i><j| a^dag + h.c.)."""
    nq = len(w)
    a = np.diag(np.sqrt(np.arange(1, n_ph)), 1)
    Hq = np.diag(w)
    Hm = np.kron(Hq, np.eye(n_ph)) + np.kron(np.eye(nq), wr * np.diag(np.arange(n_ph)))
    C = np.kron(g, a.T)
    Hm = Hm + C + C.conj().T
    return np.linalg.eigvalsh(Hm)


def dressed_branches(w, g, wr, n_ph):
    ev = _coupled_levels(w, g, wr, n_ph)
    trans = ev[1:] - ev[0]
    order = np.argsort(np.abs(trans - wr))[:2]
    return np.sort(trans[order])


@dataclass(frozen=True)
class CrossingRow:
    phi_diff: float
    lower: float  # Hz
    upper: float  # Hz


def avoided_crossing_trace(params: CircuitParams, readout: ReadoutParams, biases, n_q: int = 6, n_ph: int = 6,
                           grid: GridSpec = DEFAULT_GRID, threads: int = 1, check: bool = True,
                           points=None) -> list[CrossingRow]:
    """Two dressed branches nearest the resonator at each bias."""
    biases = [as_bias(b) for b in biases]
    if points is None:
        points = thread_map(lambda b: solve_point(params, b, grid, max(n_q, 3)), biases, threads)
    rows = []
    for b, pt in zip(biases, points):
        cpl = coupling_strengths(pt.spectrum, pt.mode, readout, params)
        w = _levels(pt.spectrum, n_q)
        g = cpl.g_ij[:n_q, :n_q]
        br = dressed_branches(w, g, readout.omega_r, n_ph)
        if check:
            br2 = dressed_branches(w, g, readout.omega_r, n_ph + 1)
            if np.max(np.abs(br2 - br) / np.abs(br)) > 1e-5:
                raise TruncationNotConverged(f"photon truncation not converged at phi_diff={b.phi_diff:.6g}")
        rows.append(CrossingRow(b.phi_diff, float(br[0] / (2 * np.pi)), float(br[1] / (2 * np.pi))))
    return rows
