"""Normal modes of the linearized distributed circuit.

The wavenumber equation is solved in the dimensionless variable q = k l.
Envelopes are piecewise sinusoids, u = a sin k(x+l) left of the junction
and u = b sin k(x-l) right of it, with (a, b) taken as the null vector of
the junction matching conditions.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .circuit import CircuitParams, DcOperatingPoint
from .constants import E, PHI0_R
from .errors import DegenerateEnvelope, InsufficientScanRange, NonConvergence, OutOfDomain

log = logging.getLogger(__name__)

ANHARMONIC_EPS = 1e-6
RESIDUAL_TOL = 1e-9
SPURIOUS_ENVELOPE = 1e-10


@dataclass(frozen=True)
class ModeSolution:
    index_m: int
    wavenumber_km: float
    angular_freq_wm: float
    amp_A: float  # left amplitude a
    ratio_B: float  # b / a (inf when a == 0)
    amp_right: float  # b
    delta_u: float
    is_anharmonic: bool
    eff_inductance_Lm: float
    tilde_Lm: float
    cap_Cm_prime: float
    E_C_m: float
    E_L_m: float
    half_length: float
    junction_pos: float
    swapped: bool = False  # True when b/a is ill defined and b parameterizes the envelope

    @property
    def frequency(self) -> float:
        return self.angular_freq_wm / (2 * np.pi)


def _dimensionless(params: CircuitParams, dc: DcOperatingPoint):
    l = params.half_length
    cJ = params.junction_cap_CJ / (params.cap_per_len_Cl * l)
    beta = params.ind_per_len_Ll * l / params.L_J
    xi = params.junction_pos_xj / l
    return cJ, beta * np.cos(dc.phase_phi0), xi


def wavenumber_residual(q, params: CircuitParams, dc: DcOperatingPoint):
    """Left side of the wavenumber equation at q = k l (vectorized)."""
    cJ, bcos, xi = _dimensionless(params, dc)
    q = np.asarray(q, dtype=float)
    return q * np.cos(q * (xi - 1)) * np.cos(q * (xi + 1)) - (cJ * q * q - bcos) * np.sin(2 * q)


def _scan(F, count, extend):
    n_win = count + 4 + extend
    qmax = n_win * np.pi / 2
    q = np.linspace(0.0, qmax, 4096 * n_win + 1)[1:]
    v = F(q)
    roots = []
    for i in np.nonzero(v[:-1] * v[1:] < 0)[0]:
        r, res = brentq(F, q[i], q[i + 1], xtol=1e-15, rtol=1e-15, maxiter=200, full_output=True)
        if not res.converged:
            raise NonConvergence("wavenumber bracket did not converge")
        roots.append(r)
    roots.extend(q[v == 0])
    # touching roots (double zeros, no sign change) show up as local minima of |F|
    a = np.abs(v)
    loc = np.nonzero((a[1:-1] < a[:-2]) & (a[1:-1] < a[2:]) & (v[:-2] * v[2:] > 0))[0] + 1
    for i in loc:
        res = minimize_scalar(lambda x: F(x) ** 2, bounds=(q[i - 1], q[i + 1]), method="bounded",
                              options={"xatol": 1e-14})
        if abs(F(res.x)) < RESIDUAL_TOL:
            roots.append(float(res.x))
    roots = np.sort(np.asarray(roots, dtype=float))
    if roots.size:
        keep = np.concatenate([[True], np.diff(roots) > 1e-9])
        roots = roots[keep]
    return roots


def solve_wavenumbers(params: CircuitParams, dc: DcOperatingPoint, count: int) -> np.ndarray:
    """First ``count`` positive wavenumbers k_m (1/m), ascending."""
    if count < 1:
        raise ValueError("count must be >= 1")
    l = params.half_length

    def F(q):
        return wavenumber_residual(q, params, dc)

    for extend in (0, count + 4):
        roots = _scan(F, count, extend)
        if roots.size >= count:
            return roots[:count] / l
    raise InsufficientScanRange(f"found {roots.size} of {count} wavenumbers after extending the window")


def _closed_ss(km, kn, L):
    """Integral of sin(km y) sin(kn y) over [0, L]."""
    if np.isclose(km, kn, rtol=1e-13, atol=0):
        return L / 2 - np.sin(2 * km * L) / (4 * km)
    d, s = km - kn, km + kn
    return 0.5 * (np.sin(d * L) / d - np.sin(s * L) / s)


def _closed_cc(km, kn, L):
    if np.isclose(km, kn, rtol=1e-13, atol=0):
        return L / 2 + np.sin(2 * km * L) / (4 * km)
    d, s = km - kn, km + kn
    return 0.5 * (np.sin(d * L) / d + np.sin(s * L) / s)


def build_mode(params: CircuitParams, dc: DcOperatingPoint, km: float, index: int = 1) -> ModeSolution:
    l, xJ = params.half_length, params.junction_pos_xj
    cJ, bcos, _ = _dimensionless(params, dc)
    q = km * l
    sl, cl = np.sin(km * (xJ + l)), np.cos(km * (xJ + l))
    sr, cr = np.sin(km * (xJ - l)), np.cos(km * (xJ - l))
    gam = cJ * q * q - bcos
    # rows: flux-gradient continuity, current balance at the junction (both scaled by l)
    M = np.array([[cl, -cr], [-gam * sl + q * cl, gam * sr]])
    a, b = np.linalg.svd(M)[2][-1]
    swapped = abs(cr) < 1e-12 or abs(a) < 1e-12
    if swapped:
        warnings.warn(DegenerateEnvelope(f"amplitude ratio ill defined at k={km:.6g}; using null vector"),
                      stacklevel=2)
    L1, L2 = l + xJ, l - xJ
    Cl, CJ = params.cap_per_len_Cl, params.junction_cap_CJ
    du = b * sr - a * sl
    norm = Cl * (a * a * _closed_ss(km, km, L1) + b * b * _closed_ss(km, km, L2)) + CJ * du * du
    s = np.sqrt(params.C_sigma / norm)
    a, b, du = a * s, b * s, du * s
    anh = abs(du) > ANHARMONIC_EPS
    flip = (du < 0) if anh else (a if abs(a) >= abs(b) else b) < 0
    if flip:
        a, b, du = -a, -b, -du
    w = params.phase_velocity * km
    Lm = 1.0 / (params.C_sigma * w * w)
    if anh:
        tilde = 1.0 / (1.0 / Lm - np.cos(dc.phase_phi0) * du * du / params.L_J)
        Cp = params.C_sigma / du**2
        ECm = E**2 / (2 * Cp)
        ELm = PHI0_R**2 / (tilde * du**2)
    else:
        tilde, Cp, ECm, ELm = Lm, np.inf, 0.0, np.inf
    ratio = b / a if a != 0 else np.inf
    return ModeSolution(index, float(km), float(w), float(a), float(ratio), float(b), float(du), bool(anh),
                        float(Lm), float(tilde), float(Cp), float(ECm), float(ELm), l, xJ, bool(swapped))


def solve_modes(params: CircuitParams, dc: DcOperatingPoint, count: int) -> list[ModeSolution]:
    """Wavenumbers plus envelopes; zero-envelope roots are dropped and logged."""
    out = []
    extra = 0
    while True:
        ks = solve_wavenumbers(params, dc, count + extra)
        out = []
        for k in ks:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateEnvelope)
                m = build_mode(params, dc, k, len(out) + 1)
            peak = max(abs(m.amp_A), abs(m.amp_right))
            if peak < SPURIOUS_ENVELOPE:
                log.info("discarding spurious root k=%.9g (zero envelope)", k)
                continue
            out.append(m)
        if len(out) >= count or extra > 4:
            return out[:count]
        extra += 1


def envelope_value(mode: ModeSolution, x, side: str | None = None):
    """u_m(x).  At the junction itself ``side`` must be '-' or '+'."""
    l, xJ = mode.half_length, mode.junction_pos
    x = np.asarray(x, dtype=float)
    tol = 1e-12 * l
    if np.any(x < -l - tol) or np.any(x > l + tol):
        raise OutOfDomain("x outside [-l, l]")
    at_j = np.isclose(x, xJ, rtol=0, atol=tol)
    if np.any(at_j) and side not in ("-", "+"):
        raise OutOfDomain("envelope is discontinuous at the junction; pass side='-' or '+'")
    k = mode.wavenumber_km
    left = mode.amp_A * np.sin(k * (x + l))
    right = mode.amp_right * np.sin(k * (x - l))
    use_left = (x < xJ) | (at_j & (side == "-"))
    val = np.where(use_left, left, right)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class OrthogonalityReport:
    overlap: np.ndarray  # <u_m,u_n> / C_sigma
    stiffness: np.ndarray  # <du_m,du_n> * L_m
    max_offdiag: float


def inner_products(modes: list[ModeSolution], params: CircuitParams, dc: DcOperatingPoint):
    """Closed-form <u_m,u_n> and <du_m,du_n> including the junction terms."""
    n = len(modes)
    l, xJ = params.half_length, params.junction_pos_xj
    L1, L2 = l + xJ, l - xJ
    U = np.zeros((n, n))
    D = np.zeros((n, n))
    for i, mi in enumerate(modes):
        for j, mj in enumerate(modes):
            ki, kj = mi.wavenumber_km, mj.wavenumber_km
            # on the right segment, sin k(x-l) = -sin k(l-x); the signs cancel in products
            su = mi.amp_A * mj.amp_A * _closed_ss(ki, kj, L1) + mi.amp_right * mj.amp_right * _closed_ss(ki, kj, L2)
            sd = mi.amp_A * mj.amp_A * _closed_cc(ki, kj, L1) + mi.amp_right * mj.amp_right * _closed_cc(ki, kj, L2)
            U[i, j] = params.cap_per_len_Cl * su + params.junction_cap_CJ * mi.delta_u * mj.delta_u
            D[i, j] = ki * kj * sd / params.ind_per_len_Ll + np.cos(dc.phase_phi0) / params.L_J * mi.delta_u * mj.delta_u
    return U, D


def orthogonality_residuals(modes: list[ModeSolution], params: CircuitParams, dc: DcOperatingPoint) -> OrthogonalityReport:
    U, D = inner_products(modes, params, dc)
    Lm = np.array([m.eff_inductance_Lm for m in modes])
    over = U / params.C_sigma
    stiff = D * Lm[:, None]
    off = ~np.eye(len(modes), dtype=bool)
    mx = float(max(np.abs(over[off]).max(initial=0.0), np.abs(stiff[off]).max(initial=0.0)))
    return OrthogonalityReport(over, stiff, mx)


def qubit_mode(modes: list[ModeSolution]) -> ModeSolution:
    """Lowest mode with a junction discontinuity."""
    for m in modes:
        if m.is_anharmonic:
            return m
    raise InsufficientScanRange("no anharmonic mode among the computed modes")
