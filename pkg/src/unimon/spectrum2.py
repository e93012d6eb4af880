"""Path-integral model: exact junction kernel, lumped limit, auxiliary-mode Hamiltonian.

The resonator seen from the junction is replaced by M harmonic modes at
the lambda/2 frequencies, coupled bilinearly to the junction flux.  The
couplings reproduce the kernel residues; C and L_psi reproduce its
second-order Taylor expansion.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigsh

from .circuit import CircuitParams, as_bias
from .constants import E, GHZ, H, HBAR, PHI0_R
from .errors import NegativeEffectiveCapacitance, TruncationNotConverged


@dataclass(frozen=True)
class KernelSpec:
    ll_left: float
    lr_right: float
    impedance_Z: float
    phase_velocity: float

    @classmethod
    def from_params(cls, params: CircuitParams) -> "KernelSpec":
        l, xJ = params.half_length, params.junction_pos_xj
        return cls(l + xJ, l - xJ, params.impedance, params.phase_velocity)


def exact_kernel(spec: KernelSpec, omega):
    """2w / (Z [tanh(w l_l / v) + tanh(w l_r / v)]), with the w -> 0 limit filled in."""
    w = np.asarray(omega, dtype=float)
    v, Z = spec.phase_velocity, spec.impedance_Z
    small = np.abs(w) * max(spec.ll_left, spec.lr_right) / v < 1e-6
    ws = np.where(small, 1.0, w)
    val = 2 * ws / (Z * (np.tanh(ws * spec.ll_left / v) + np.tanh(ws * spec.lr_right / v)))
    # series through second order; the quartic term is below rounding in this window
    s = spec.ll_left + spec.lr_right
    c0 = 2 * v / (Z * s)
    c2 = c0 * (spec.ll_left**3 + spec.lr_right**3) / (3 * v**2 * s)
    out = np.where(small, c0 + c2 * w * w, val)
    return float(out) if out.ndim == 0 else out


def kernel_taylor_coeffs(spec: KernelSpec, params: CircuitParams) -> tuple[float, float]:
    l, xJ = params.half_length, params.junction_pos_xj
    c0 = 1.0 / (l * params.ind_per_len_Ll)
    c2 = params.cap_per_len_Cl * (l**2 + 3 * xJ**2) / (3 * l)
    return c0, c2


def build_lumped_model(params: CircuitParams) -> tuple[float, float]:
    l, xJ = params.half_length, params.junction_pos_xj
    Ceff = params.junction_cap_CJ + params.cap_per_len_Cl * (l**2 + 3 * xJ**2) / (6 * l)
    return Ceff, params.total_length_2l * params.ind_per_len_Ll


@dataclass(frozen=True)
class AuxModeModel:
    M: int
    cap_C: float
    ind_Lpsi: float
    aux_freqs_Omega_k: tuple
    couplings_alpha_k: tuple
    cap_Ceff: float
    ind_Leff: float
    residue_weights: tuple  # alpha_k^2 / C, independent of C


def build_aux_model(params: CircuitParams, M: int = 2) -> AuxModeModel:
    if M not in (1, 2, 3):
        raise ValueError("M must be 1, 2 or 3")
    l, xJ = params.half_length, params.junction_pos_xj
    v, Z = params.phase_velocity, params.impedance
    ks = np.arange(1, M + 1)
    Om = np.pi * ks * v / (2 * l)
    a2C = Om**3 / (np.pi * ks * Z) * ((-1.0) ** ks * np.cos(np.pi * ks * xJ / l) + 1.0)
    a2C = np.where(np.abs(a2C) < 1e-14 * np.abs(a2C).max(initial=0.0), 0.0, a2C)
    Ceff, Leff = build_lumped_model(params)
    C = Ceff - np.sum(a2C / Om**4)
    if not C > 0:
        raise NegativeEffectiveCapacitance(f"C = {C:.4g} F for M = {M}")
    Lpsi = 1.0 / (1.0 / Leff + np.sum(a2C / Om**2))
    alpha = np.sqrt(a2C * C)
    return AuxModeModel(M, float(C), float(Lpsi), tuple(Om), tuple(alpha), Ceff, Leff, tuple(a2C))


@dataclass(frozen=True)
class Model2Grid:
    n_points: int = 512
    phi_max: float = 8.0  # span of the junction phase 2 pi psi / Phi0
    n_osc: int = 24


@dataclass(frozen=True)
class Model2Spectrum:
    eigen_energies: np.ndarray
    f01: float
    f12: float
    anharmonicity: float
    coupled_modes: tuple  # indices k kept in the tensor product
    dimension: int

    @property
    def f02_half(self) -> float:
        return (self.f01 + self.f12) / 2


def _hamiltonian(model: AuxModeModel, EJ: float, phi_diff: float, grid: Model2Grid):
    scale = H * GHZ
    C = model.cap_C
    x = np.linspace(-grid.phi_max, grid.phi_max, grid.n_points)
    dx = x[1] - x[0]
    ec = E**2 / (2 * C) / scale
    el = PHI0_R**2 / model.ind_Lpsi / scale
    pot = 0.5 * el * x * x - EJ / scale * np.cos(x + 2 * np.pi * phi_diff)
    n = grid.n_points
    Hm = sparse.diags([np.full(n - 1, -4 * ec / dx**2), pot + 8 * ec / dx**2, np.full(n - 1, -4 * ec / dx**2)],
                      [-1, 0, 1], format="csr")
    X = sparse.diags(x)
    kept = []
    for k, (Om, alpha) in enumerate(zip(model.aux_freqs_Omega_k, model.couplings_alpha_k), start=1):
        if alpha == 0.0:
            continue
        kept.append(k)
        m = grid.n_osc
        zpf = np.sqrt(HBAR / (2 * C * Om))
        g = alpha * PHI0_R * zpf / scale
        a = sparse.diags(np.sqrt(np.arange(1, m)), 1)
        q = a + a.T
        ho = sparse.diags(HBAR * Om / scale * (np.arange(m) + 0.5))
        dim = Hm.shape[0]
        Hm = sparse.kron(Hm, sparse.identity(m)) + sparse.kron(sparse.identity(dim), ho)
        Hm = Hm + g * sparse.kron(X, q)
        X = sparse.kron(X, sparse.identity(m))
    return Hm.tocsr(), tuple(kept), scale


def _lowest(Hm, k):
    v0 = np.ones(Hm.shape[0])
    w = eigsh(Hm, k=k, which="SA", v0=v0, return_eigenvectors=False, tol=1e-12)
    return np.sort(w)


def diagonalize_model2(model: AuxModeModel, EJ: float, bias, n_states: int = 4,
                       grid: Model2Grid = Model2Grid(), check_truncation: bool = False) -> Model2Spectrum:
    """Lowest eigenvalues of the auxiliary-mode Hamiltonian (grid x oscillator basis)."""
    bias = as_bias(bias)
    if sum(a != 0.0 for a in model.couplings_alpha_k) > 2:
        raise ValueError("more than two coupled auxiliary modes: problem dimension would exceed 3")
    Hm, kept, scale = _hamiltonian(model, EJ, bias.phi_diff, grid)
    w = _lowest(Hm, max(n_states, 3))
    energies = w * scale
    f01 = (energies[1] - energies[0]) / H
    f12 = (energies[2] - energies[1]) / H
    if check_truncation and kept:
        bigger = Model2Grid(grid.n_points, grid.phi_max, grid.n_osc + 4)
        H2, _, _ = _hamiltonian(model, EJ, bias.phi_diff, bigger)
        w2 = _lowest(H2, 3) * scale
        rel = abs((w2[1] - w2[0]) / H - f01) / f01
        if rel > 1e-4:
            raise TruncationNotConverged(f"oscillator truncation moved f01 by {rel:.2e}")
    return Model2Spectrum(energies[:n_states], float(f01), float(f12), float(f12 - f01), kept, Hm.shape[0])


def model2_point(params: CircuitParams, bias, M: int = 2, grid: Model2Grid = Model2Grid(),
                 n_states: int = 4) -> Model2Spectrum:
    return diagonalize_model2(build_aux_model(params, M), params.josephson_energy_EJ, bias, n_states, grid)
