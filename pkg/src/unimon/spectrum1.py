"""Single-mode (model 1) Hamiltonian on a uniform phase grid.

H = 4 E_C n^2 + E_Lm phi^2 / 2 + E_L phi (phi_diff - phi0) - E_J cos(phi - phi0)

The grid is centred on phi = 0, the classical minimum of the expansion,
so the potential is exactly mirror-symmetric at half flux.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .circuit import CircuitParams, DcOperatingPoint, FluxBias, as_bias, solve_dc_phase
from .constants import GHZ, H
from .errors import ConvergenceNotReached, GridTooSmall, ParityViolation, UnimonError
from .modes import ModeSolution, qubit_mode, solve_modes


@dataclass(frozen=True)
class GridSpec:
    phi_max: float = 8.0
    n_points: int = 16385


DEFAULT_GRID = GridSpec()
FIT_GRID = GridSpec(8.0, 2049)


@dataclass(frozen=True)
class HamiltonianSpec:
    E_C: float
    E_L_m: float
    E_L: float
    E_J: float
    phi0: float
    phi_diff_angle: float

    @property
    def linear_coeff(self) -> float:
        return self.E_L * (self.phi_diff_angle - self.phi0)

    def potential(self, phi):
        phi = np.asarray(phi, dtype=float)
        return 0.5 * self.E_L_m * phi**2 + self.linear_coeff * phi - self.E_J * np.cos(phi - self.phi0)


@dataclass(frozen=True)
class SingleModeSpectrum:
    eigen_energies: np.ndarray
    grid_spec: GridSpec
    wavefunctions: np.ndarray = field(repr=False)  # (state, grid), L2-normalized in phi
    f01: float
    f12: float
    anharmonicity: float
    charge_elems: np.ndarray  # n_ij = <i| d/dphi |j>
    phase_elems: np.ndarray

    @property
    def f02_half(self) -> float:
        return (self.f01 + self.f12) / 2

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-self.grid_spec.phi_max, self.grid_spec.phi_max, self.grid_spec.n_points)


def assemble_spec(mode: ModeSolution, params: CircuitParams, dc: DcOperatingPoint, bias) -> HamiltonianSpec:
    bias = as_bias(bias)
    return HamiltonianSpec(mode.E_C_m, mode.E_L_m, params.E_L, params.josephson_energy_EJ,
                           dc.phase_phi0, bias.angle)


def _solve(spec: HamiltonianSpec, n_states: int, grid: GridSpec):
    x = np.linspace(-grid.phi_max, grid.phi_max, grid.n_points)
    dx = x[1] - x[0]
    scale = H * GHZ
    ec = spec.E_C / scale
    diag = spec.potential(x) / scale + 8 * ec / dx**2
    off = np.full(grid.n_points - 1, -4 * ec / dx**2)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_states - 1))
    return x, dx, w * scale, v


def diagonalize(spec: HamiltonianSpec, n_states: int = 6, grid: GridSpec = DEFAULT_GRID,
                validate: bool = False) -> SingleModeSpectrum:
    if not 3 <= n_states <= 12:
        raise ValueError("n_states must be in [3, 12]")
    if not (spec.E_C > 0 and np.isfinite(spec.E_L_m)):
        raise ValueError("Hamiltonian needs a finite anharmonic mode (E_C > 0)")
    x, dx, energies, v = _solve(spec, n_states, grid)
    g0 = np.abs(v[:, 0])
    if max(g0[0], g0[-1]) > 1e-8 * g0.max():
        raise GridTooSmall(f"ground state reaches the grid edge (phi_max={grid.phi_max})")
    # fix the sign so the largest-magnitude component is positive
    idx = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[idx, np.arange(v.shape[1])])
    dv = np.zeros_like(v)
    dv[1:-1] = (v[2:] - v[:-2]) / (2 * dx)
    dv[0] = v[1] / (2 * dx)
    dv[-1] = -v[-2] / (2 * dx)
    n_ij = v.T @ dv
    phi_ij = v.T @ (x[:, None] * v)
    f01 = (energies[1] - energies[0]) / H
    f12 = (energies[2] - energies[1]) / H
    if validate:
        fine = GridSpec(grid.phi_max, 2 * grid.n_points - 1)
        _, _, e2, _ = _solve(spec, 3, fine)
        rel = abs((e2[1] - e2[0]) / H - f01) / f01
        if rel > 1e-6:
            raise ConvergenceNotReached(f"grid refinement moved f01 by {rel:.2e}")
    return SingleModeSpectrum(energies, grid, (v / np.sqrt(dx)).T, float(f01), float(f12), float(f12 - f01),
                              n_ij, phi_ij)


@dataclass(frozen=True)
class QubitPoint:
    """Everything model 1 produces at one bias."""

    params: CircuitParams
    bias: FluxBias
    dc: DcOperatingPoint
    modes: tuple
    mode: ModeSolution
    spec: HamiltonianSpec
    spectrum: SingleModeSpectrum


def solve_point(params: CircuitParams, bias, grid: GridSpec = DEFAULT_GRID, n_states: int = 6,
                mode_index: int | None = None, n_modes: int = 3) -> QubitPoint:
    bias = as_bias(bias)
    dc = solve_dc_phase(params, bias)
    count = max(n_modes, mode_index or 0)
    modes = solve_modes(params, dc, count)
    if mode_index is None:
        mode = qubit_mode(modes)
    else:
        mode = modes[mode_index - 1]
    spec = assemble_spec(mode, params, dc, bias)
    return QubitPoint(params, bias, dc, tuple(modes), mode, spec, diagonalize(spec, n_states, grid))


@dataclass(frozen=True)
class SweepRow:
    phi_diff: float
    phi0: float
    mode_index: int
    f01: float
    f02_half: float
    f12: float
    anharmonicity: float


def thread_map(fn, items, threads: int = 1):
    """Ordered map; the result never depends on the worker count."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def flux_sweep(params: CircuitParams, mode_index: int | None, biases, grid: GridSpec = DEFAULT_GRID,
               threads: int = 1) -> list[SweepRow]:
    def one(b):
        b = as_bias(b)
        try:
            pt = solve_point(params, b, grid, 6, mode_index)
        except UnimonError as exc:
            raise type(exc)(f"{exc} (at phi_diff={b.phi_diff:.12g})") from exc
        s = pt.spectrum
        return SweepRow(b.phi_diff, pt.dc.phase_phi0, pt.mode.index_m, s.f01, s.f02_half, s.f12, s.anharmonicity)

    return thread_map(one, biases, threads)


@dataclass(frozen=True)
class ParityReport:
    ratios: dict
    max_ratio: float


def parity_check(spectrum: SingleModeSpectrum, at_half_flux: bool = True) -> ParityReport:
    n = spectrum.charge_elems
    scale = np.abs(n).max()
    ratios = {(i, i + 2): float(abs(n[i, i + 2]) / scale) for i in (0, 1)}
    worst = max(ratios.values())
    if at_half_flux and worst >= 1e-8:
        raise ParityViolation(f"|n_i,i+2|/max|n| = {worst:.3e} at half flux")
    return ParityReport(ratios, worst)
