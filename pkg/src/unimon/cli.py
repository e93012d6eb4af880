"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 configuration or dataset error,
3 numerical failure (the message names the module error).
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings

import numpy as np

from . import __version__
from .circuit import as_bias, cpw_line_constants, solve_dc_phase
from .config import DeviceConfig, config_hash, emit_config, load_config
from .constants import GHZ, H, MHZ, PHI0
from .decoherence import CHANNELS, coherence_limit_fidelity, fit_flux_noise_density, t1_budget_sweep
from .errors import ConfigError, OutOfDomain, ParameterError, UnimonError
from .fitting import FIELDS, FIT_GRID, apply_fit, fit_coupling_from_crossing, fit_spectrum_model1
from .io import ResultTable, make_metadata, read_crossing, read_fluxnoise, read_spectroscopy, write_text
from .modes import solve_modes
from .readout import coupling_strengths, dispersive_shift_exact
from .spectrum1 import flux_sweep, solve_point, thread_map
from .spectrum2 import build_aux_model, diagonalize_model2

THREADS_ENV = "UNIFLUX_THREADS"
TWO_PI = 2 * math.pi


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def biases(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    if steps == 1:
        return np.array([start])
    return np.linspace(start, stop, steps)


def _table(columns, rows, command, cfg: DeviceConfig | None = None) -> ResultTable:
    return ResultTable(tuple(columns), rows, make_metadata(command, config_hash(cfg) if cfg else None, __version__))


def _need(cfg: DeviceConfig, what: str):
    obj = getattr(cfg, what)
    if obj is None:
        raise ConfigError(f"{what}: section required for this command")
    return obj


def cmd_dc_phase(cfg: DeviceConfig, flux_range=(0.0, 1.0), steps: int = 101, threads: int = 1) -> ResultTable:
    p = cfg.circuit
    bs = biases(*flux_range, steps)
    rows = thread_map(lambda b: solve_dc_phase(p, as_bias(b)), bs, threads)
    out = [(b, dc.phase_phi0, dc.inductance_ratio, dc.branch_count) for b, dc in zip(bs, rows)]
    return _table([("flux", "Phi0"), ("phi0", "rad"), ("ratio", "1"), ("branches", "1")], out, "dc-phase", cfg)


def cmd_modes(cfg: DeviceConfig, flux: float = 0.5, count: int = 3) -> ResultTable:
    p = cfg.circuit
    dc = solve_dc_phase(p, as_bias(flux))
    rows = []
    for m in solve_modes(p, dc, count):
        rows.append((m.index_m, m.wavenumber_km, m.frequency / GHZ, m.delta_u, m.is_anharmonic,
                     m.E_C_m / (H * GHZ), m.E_L_m / (H * GHZ) if math.isfinite(m.E_L_m) else math.inf))
    cols = [("m", "1"), ("k", "1/m"), ("f", "GHz"), ("delta_u", "1"), ("anharmonic", "1"), ("E_C", "GHz"),
            ("E_L", "GHz")]
    return _table(cols, rows, "modes", cfg)


def cmd_spectrum(cfg: DeviceConfig, flux_range=(0.0, 1.0), steps: int = 101, model: int = 1,
                 threads: int = 1) -> ResultTable:
    bs = biases(*flux_range, steps)
    if model == 1:
        rows = flux_sweep(cfg.circuit, None, bs, cfg.grid, threads)
        out = [(r.phi_diff, r.phi0, r.mode_index, r.f01 / GHZ, r.f02_half / GHZ, r.anharmonicity / MHZ) for r in rows]
        cols = [("flux", "Phi0"), ("phi0", "rad"), ("mode", "1"), ("f01", "GHz"), ("f02_half", "GHz"),
                ("alpha", "MHz")]
        return _table(cols, out, "spectrum --model 1", cfg)
    if model != 2:
        raise UsageError("--model must be 1 or 2")
    aux = build_aux_model(cfg.circuit, cfg.aux_modes)
    EJ = cfg.circuit.josephson_energy_EJ
    specs = thread_map(lambda b: diagonalize_model2(aux, EJ, b, 4, cfg.model2_grid), bs, threads)
    out = [(b, s.f01 / GHZ, s.f02_half / GHZ, s.anharmonicity / MHZ) for b, s in zip(bs, specs)]
    cols = [("flux", "Phi0"), ("f01", "GHz"), ("f02_half", "GHz"), ("alpha", "MHz")]
    return _table(cols, out, "spectrum --model 2", cfg)


def cmd_dispersive(cfg: DeviceConfig, flux: float = 0.5) -> ResultTable:
    ro = _need(cfg, "readout")
    pt = solve_point(cfg.circuit, flux, cfg.grid, cfg.n_states)
    cpl = coupling_strengths(pt.spectrum, pt.mode, ro, cfg.circuit)
    res = dispersive_shift_exact(pt.spectrum, cpl, ro, cfg.n_states)
    s = pt.spectrum
    row = (flux, s.f01 / GHZ, s.anharmonicity / MHZ, abs(cpl.g_ij[0, 1]) / TWO_PI / MHZ,
           abs(cpl.g_ij[1, 2]) / TWO_PI / MHZ, res.chi_exact / TWO_PI / MHZ, res.chi_approx / TWO_PI / MHZ)
    cols = [("flux", "Phi0"), ("f01", "GHz"), ("alpha", "MHz"), ("g01", "MHz"), ("g12", "MHz"),
            ("chi_exact", "MHz"), ("chi_approx", "MHz")]
    return _table(cols, [row], "dispersive", cfg)


def cmd_t1_budget(cfg: DeviceConfig, flux_range=(0.0, 1.0), steps: int = 101, scale_reference=None,
                  include_purcell: bool = False, threads: int = 1) -> ResultTable:
    env = _need(cfg, "environment")
    ro = cfg.readout
    scale = None
    if scale_reference is not None:
        scale = (scale_reference[0], scale_reference[1] * 1e-6)
    rows = t1_budget_sweep(cfg.circuit, env, ro, biases(*flux_range, steps), scale, include_purcell, cfg.grid,
                           threads)
    present = [c for c in CHANNELS if rows and c in rows[0].budget.rates]
    out = []
    for r in rows:
        per = [r.budget.t1_per_channel[c] * 1e6 for c in present]
        out.append((r.phi_diff, r.f01 / GHZ, r.budget.t1_total * 1e6, *per))
    cols = [("flux", "Phi0"), ("f01", "GHz"), ("T1", "us")] + [(f"T1_{c}", "us") for c in present]
    return _table(cols, out, "t1-budget", cfg)


def cmd_coherence(t1_us: float, t2e_us: float, gate_ns) -> ResultTable:
    if not (t1_us > 0 and t2e_us > 0):
        raise UsageError("--t1 and --t2e must be positive")
    rows = [(tg, coherence_limit_fidelity(tg * 1e-9, t1_us * 1e-6, t2e_us * 1e-6)) for tg in gate_ns]
    return _table([("gate", "ns"), ("fidelity", "1")], rows, "coherence")


def cmd_fit_spectrum(cfg: DeviceConfig, dataset_path, free_params=("Ll", "Cl", "EJ"), threads: int = 1):
    data = read_spectroscopy(dataset_path)
    res = fit_spectrum_model1(data, cfg.circuit, tuple(free_params), grid=FIT_GRID, threads=threads)
    p = apply_fit(cfg.circuit, res)
    new_cfg = cfg.with_circuit(Cl_fF_per_mm=p.cap_per_len_Cl / 1e-12, Ll_nH_per_mm=p.ind_per_len_Ll / 1e-6,
                               EJ_GHz=p.josephson_energy_EJ / (H * GHZ))
    row = (p.ind_per_len_Ll / 1e-6, p.cap_per_len_Cl / 1e-12, p.josephson_energy_EJ / (H * GHZ),
           res.residual_rms / MHZ, res.n_iterations, res.converged)
    cols = [("Ll", "nH/mm"), ("Cl", "fF/mm"), ("EJ", "GHz"), ("residual_rms", "MHz"), ("iterations", "1"),
            ("converged", "1")]
    return _table(cols, [row], "fit-spectrum", cfg), new_cfg


def cmd_fit_crossing(cfg: DeviceConfig, dataset_path, threads: int = 1) -> ResultTable:
    ro = _need(cfg, "readout")
    data = read_crossing(dataset_path)
    res = fit_coupling_from_crossing(data, ro.coupling_cap_Cg, cfg.circuit, ro, threads=threads)
    row = (res.params_out["Cg"][0] / 1e-15, res.residual_rms / MHZ, res.n_iterations, res.converged)
    cols = [("Cg", "fF"), ("residual_rms", "MHz"), ("iterations", "1"), ("converged", "1")]
    return _table(cols, [row], "fit-crossing", cfg)


def cmd_fit_fluxnoise(dataset_path) -> ResultTable:
    res = fit_flux_noise_density(read_fluxnoise(dataset_path))
    row = (res.APhi / PHI0 * 1e6, res.gamma_x * 1e-6, res.residual_rms * 1e-6, res.clipped)
    cols = [("APhi", "uPhi0"), ("gamma_x", "1/us"), ("residual_rms", "1/us"), ("clipped", "1")]
    return _table(cols, [row], "fit-fluxnoise")


def cmd_cpw(a_um: float, b_um: float, eta_um: float, epsr: float) -> ResultTable:
    Cl, Ll, Z = cpw_line_constants(a_um * 1e-6, b_um * 1e-6, eta_um * 1e-6, epsr)
    cols = [("Cl", "fF/mm"), ("Ll", "nH/mm"), ("Z", "Ohm")]
    return _table(cols, [(Cl / 1e-12, Ll / 1e-6, Z)], "cpw")


def _threads_default() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="unimon", description="Unimon qubit simulation and fitting toolkit")
    ap.add_argument("--version", action="version", version=f"unimon {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, config=True, sweep=False):
        if config:
            p.add_argument("--config", "-c", required=True, help="device configuration file (INI)")
        if sweep:
            p.add_argument("--flux-start", type=float, default=0.0)
            p.add_argument("--flux-stop", type=float, default=1.0)
            p.add_argument("--steps", type=int, default=101)
        p.add_argument("--out", "-o", default="-", help="CSV output path (default stdout)")
        p.add_argument("--json", help="also write a JSON mirror here")
        p.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")

    common(sub.add_parser("dc-phase", help="dc operating point vs flux"), sweep=True)
    p = sub.add_parser("modes", help="normal modes at one bias")
    common(p)
    p.add_argument("--flux", type=float, default=0.5)
    p.add_argument("--count", type=int, default=3)
    p = sub.add_parser("spectrum", help="f01, f02/2, anharmonicity vs flux")
    common(p, sweep=True)
    p.add_argument("--model", type=int, choices=(1, 2), default=1)
    p = sub.add_parser("dispersive", help="couplings and dispersive shift at one bias")
    common(p)
    p.add_argument("--flux", type=float, default=0.5)
    p = sub.add_parser("t1-budget", help="relaxation budget vs flux")
    common(p, sweep=True)
    p.add_argument("--scale-flux", type=float, help="reference bias for channel scaling")
    p.add_argument("--scale-t1", type=float, help="measured T1 at the reference bias (us)")
    p.add_argument("--include-purcell", action="store_true", help="scale so channel + Purcell matches T1")
    p = sub.add_parser("coherence", help="coherence-limited gate fidelity")
    common(p, config=False)
    p.add_argument("--t1", type=float, required=True, help="us")
    p.add_argument("--t2e", type=float, required=True, help="us")
    p.add_argument("--gate", type=float, nargs="+", required=True, help="gate durations (ns)")
    p = sub.add_parser("fit-spectrum", help="fit Ll, Cl, EJ to spectroscopy")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--free", default="Ll,Cl,EJ", help="comma-separated subset of Ll,Cl,EJ")
    p.add_argument("--emit-config", help="write the updated configuration here")
    p = sub.add_parser("fit-crossing", help="fit Cg to avoided-crossing data")
    common(p)
    p.add_argument("--data", required=True)
    p = sub.add_parser("fit-fluxnoise", help="fit the 1/f flux-noise density")
    common(p, config=False)
    p.add_argument("--data", required=True)
    p = sub.add_parser("cpw", help="CPW line constants from geometry")
    common(p, config=False)
    p.add_argument("--a", type=float, required=True, help="centre-conductor width (um)")
    p.add_argument("--b", type=float, required=True, help="total width (um)")
    p.add_argument("--eta", type=float, required=True, help="substrate thickness (um)")
    p.add_argument("--epsr", type=float, default=11.45)
    return ap


def _dispatch(args) -> ResultTable:
    threads = args.threads if args.threads is not None else _threads_default()
    if threads < 1:
        raise UsageError("--threads must be >= 1")
    cmd = args.command
    if cmd == "coherence":
        return cmd_coherence(args.t1, args.t2e, args.gate)
    if cmd == "fit-fluxnoise":
        return cmd_fit_fluxnoise(args.data)
    if cmd == "cpw":
        return cmd_cpw(args.a, args.b, args.eta, args.epsr)
    cfg = load_config(args.config)
    if cmd == "dc-phase":
        return cmd_dc_phase(cfg, (args.flux_start, args.flux_stop), args.steps, threads)
    if cmd == "modes":
        if args.count < 1:
            raise UsageError("--count must be >= 1")
        return cmd_modes(cfg, args.flux, args.count)
    if cmd == "spectrum":
        return cmd_spectrum(cfg, (args.flux_start, args.flux_stop), args.steps, args.model, threads)
    if cmd == "dispersive":
        return cmd_dispersive(cfg, args.flux)
    if cmd == "t1-budget":
        if (args.scale_flux is None) != (args.scale_t1 is None):
            raise UsageError("--scale-flux and --scale-t1 go together")
        ref = None if args.scale_flux is None else (args.scale_flux, args.scale_t1)
        return cmd_t1_budget(cfg, (args.flux_start, args.flux_stop), args.steps, ref, args.include_purcell, threads)
    if cmd == "fit-spectrum":
        free = tuple(s.strip() for s in args.free.split(",") if s.strip())
        if not free or set(free) - set(FIELDS):
            raise UsageError("--free must be a subset of Ll,Cl,EJ")
        table, new_cfg = cmd_fit_spectrum(cfg, args.data, free, threads)
        if args.emit_config:
            write_text(args.emit_config, emit_config(new_cfg))
        return table
    if cmd == "fit-crossing":
        return cmd_fit_crossing(cfg, args.data, threads)
    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            table = _dispatch(args)
        for w in caught:
            print(f"warning: {w.category.__name__}: {w.message}", file=sys.stderr)
        write_text(args.out, table.to_csv())
        if args.json:
            write_text(args.json, table.to_json())
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, OutOfDomain) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except UnimonError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
