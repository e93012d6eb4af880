"""Parameter estimation from spectroscopy and avoided-crossing data."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .circuit import CircuitParams, as_bias
from .errors import InsufficientPoints, NonConvergence, UnidentifiableParameters, UnimonError
from .readout import ReadoutParams, avoided_crossing_trace
from .spectrum1 import FIT_GRID, GridSpec, solve_point, thread_map

LABELS = ("f01", "f02_half", "f12")
FIELDS = {"Ll": ("ind_per_len_Ll", "H/m"), "Cl": ("cap_per_len_Cl", "F/m"), "EJ": ("josephson_energy_EJ", "J")}
DEFAULT_SIGMA = 1e6


@dataclass(frozen=True)
class SpectroscopyDataset:
    flux: np.ndarray  # Phi0 units
    label: tuple
    freq: np.ndarray  # Hz
    sigma: np.ndarray  # Hz

    @classmethod
    def from_rows(cls, rows) -> "SpectroscopyDataset":
        rows = list(rows)
        flux = np.array([float(r[0]) for r in rows])
        labels = tuple(str(r[1]) for r in rows)
        freq = np.array([float(r[2]) for r in rows])
        sig = np.array([float(r[3]) if len(r) > 3 and r[3] is not None else DEFAULT_SIGMA for r in rows])
        return cls(flux, labels, freq, sig)

    def __post_init__(self):
        bad = set(self.label) - set(LABELS)
        if bad:
            raise ValueError(f"unknown transition labels {sorted(bad)}")
        if np.any(self.freq <= 0):
            raise ValueError("frequencies must be positive")
        if np.any(self.sigma <= 0):
            raise ValueError("sigma must be positive")

    def __len__(self):
        return len(self.freq)


@dataclass(frozen=True)
class FitResult:
    params_out: dict  # name -> (value, unit)
    residual_rms: float  # Hz
    n_iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)  # best parameters per iteration
    objective_history: list = field(default_factory=list, repr=False)
    n_evaluations: int = 0


def model_frequencies(params: CircuitParams, flux, labels, grid: GridSpec = FIT_GRID, threads: int = 1):
    flux = np.asarray(flux, dtype=float)
    uniq = sorted(set(flux.tolist()))
    spectra = dict(zip(uniq, thread_map(lambda f: solve_point(params, f, grid, 3).spectrum, uniq, threads)))
    out = np.empty(len(flux))
    for i, (f, lab) in enumerate(zip(flux, labels)):
        out[i] = getattr(spectra[f], lab)
    return out


def synthesize(params: CircuitParams, flux, labels=("f01", "f02_half"), grid: GridSpec = FIT_GRID,
               noise: float = 0.0, seed: int | None = None) -> SpectroscopyDataset:
    """Noise-free (or relative Gaussian noise) model data for round-trip checks."""
    rows_f, rows_l = [], []
    for f in flux:
        for lab in labels:
            rows_f.append(float(f))
            rows_l.append(lab)
    freq = model_frequencies(params, rows_f, rows_l, grid)
    if noise:
        rng = np.random.default_rng(seed)
        freq = freq * (1 + noise * rng.standard_normal(freq.size))
    sig = np.full(freq.size, DEFAULT_SIGMA)
    return SpectroscopyDataset(np.array(rows_f), tuple(rows_l), freq, sig)


class _Objective:
    def __init__(self, fn):
        self.fn = fn
        self.cache = {}
        self.nfev = 0

    def __call__(self, x):
        key = tuple(np.round(np.asarray(x, dtype=float), 15))
        if key not in self.cache:
            self.nfev += 1
            self.cache[key] = self.fn(np.asarray(x, dtype=float))
        return self.cache[key]


def _nelder_mead(obj: _Objective, x0, bounds, tol, max_eval, history, ohist):
    def cb(xk):
        history.append(np.array(xk))
        ohist.append(obj(xk))

    return minimize(obj, x0, method="Nelder-Mead", bounds=bounds, callback=cb,
                    options={"xatol": 1e-9, "fatol": tol, "maxfev": max_eval, "initial_simplex": None})


def fit_spectrum_model1(data: SpectroscopyDataset, init: CircuitParams, free=("Ll", "Cl", "EJ"),
                        bound_frac: float = 0.5, grid: GridSpec = FIT_GRID, tol: float = 1e-10,
                        max_eval: int = 2000, restart: bool = True, seed: int = 0, threads: int = 1) -> FitResult:
    """Weighted least squares over model-1 transition frequencies (bounded simplex)."""
    free = tuple(free)
    if not free or set(free) - set(FIELDS):
        raise ValueError(f"free parameters must be a subset of {sorted(FIELDS)}")
    if len(data) < 5 and len(free) > 1:
        raise InsufficientPoints("spectrum fit needs at least 5 rows")
    if np.unique(data.flux).size < 2 and len(free) > 1:
        raise InsufficientPoints("spectrum fit needs at least 2 distinct biases")
    base = np.array([getattr(init, FIELDS[k][0]) for k in free])
    bounds = [(1 - bound_frac, 1 + bound_frac)] * len(free)

    def params_at(x):
        return init.replace(**{FIELDS[k][0]: float(v) for k, v in zip(free, base * x)})

    def chi2(x):
        try:
            f = model_frequencies(params_at(x), data.flux, data.label, grid, threads)
        except (UnimonError, ValueError):
            return 1e30
        return float(np.sum(((f - data.freq) / data.sigma) ** 2))

    obj = _Objective(chi2)
    history, ohist = [], []
    res = _nelder_mead(obj, np.ones(len(free)), bounds, tol, max_eval, history, ohist)
    n_iter = res.nit
    if restart:
        rng = np.random.default_rng(seed)
        x1 = np.clip(res.x * (1 + 0.05 * rng.uniform(-1, 1, len(free))), 1 - bound_frac, 1 + bound_frac)
        res2 = _nelder_mead(obj, x1, bounds, tol, max(max_eval - obj.nfev, 50), [], [])
        n_iter += res2.nit
        if res2.fun < res.fun:
            res = res2
    if not res.success and obj.nfev >= max_eval:
        raise NonConvergence(f"simplex hit {max_eval} evaluations: {res.message}")
    simplex, fvals = res.final_simplex
    span = np.ptp(simplex, axis=0)
    flat = np.ptp(fvals) <= tol * max(1.0, abs(fvals.min()))
    if flat and np.any(span > 0.1 * 2 * bound_frac):
        raise UnidentifiableParameters(f"final simplex spans {span.max():.3g} of the normalized bounds")
    out = {k: (float(v), FIELDS[k][1]) for k, v in zip(free, base * res.x)}
    rms = math.sqrt(res.fun / len(data)) * float(np.sqrt(np.mean(data.sigma**2)))
    return FitResult(out, rms, int(n_iter), bool(res.success), history, ohist, obj.nfev)


def apply_fit(init: CircuitParams, fit: FitResult) -> CircuitParams:
    return init.replace(**{FIELDS[k][0]: v for k, (v, _) in fit.params_out.items()})


def _crossing_cost(rows, branch_fn):
    err = 0.0
    for phi, f in rows:
        lo, hi = branch_fn(phi)
        err += min((lo - f) ** 2, (hi - f) ** 2)
    return err


def fit_coupling_from_crossing(data, init_Cg: float, params: CircuitParams, readout: ReadoutParams,
                               bound_frac: float = 0.5, grid: GridSpec = FIT_GRID, xtol: float = 1e-21,
                               threads: int = 1) -> FitResult:
    """One-dimensional fit of C_g to dressed-branch frequencies (Hz)."""
    rows = [(float(a), float(b)) for a, b in data]
    if len(rows) < 2:
        raise InsufficientPoints("crossing fit needs at least 2 points")
    biases = sorted({r[0] for r in rows})
    points = dict(zip(biases, thread_map(lambda b: solve_point(params, b, grid, 6), biases, threads)))

    def branches(cg):
        ro = ReadoutParams(readout.resonator_freq_fr, readout.linewidth_kappa, cg, readout.coupling_pos_xg,
                           readout.line_impedance_Ztr)
        tr = avoided_crossing_trace(params, ro, [as_bias(b) for b in biases], grid=grid, check=False,
                                    points=[points[b] for b in biases])
        return {r.phi_diff: (r.lower, r.upper) for r in tr}

    history, ohist = [], []

    def cost(cg):
        br = branches(cg)
        c = _crossing_cost(rows, lambda phi: br[phi])
        history.append(np.array([cg]))
        ohist.append(c)
        return c

    lo, hi = init_Cg * (1 - bound_frac), init_Cg * (1 + bound_frac)
    res = minimize_scalar(cost, bounds=(lo, hi), method="bounded", options={"xatol": xtol, "maxiter": 500})
    if not res.success:
        raise NonConvergence(f"crossing fit failed: {res.message}")
    rms = math.sqrt(res.fun / len(rows))
    return FitResult({"Cg": (float(res.x), "F")}, rms, int(res.nit), True, history, ohist, int(res.nfev))
