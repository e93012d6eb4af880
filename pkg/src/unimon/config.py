"""Device configuration files (INI sections, user units) and their canonical emission.

Values are kept exactly as written in user units, so emit -> parse -> emit
is byte-identical; SI objects are built on demand.
"""
from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field

from .circuit import CircuitParams
from .constants import H, PHI0
from .decoherence import NoiseEnvironment
from .errors import ConfigError
from .readout import ReadoutParams
from .spectrum1 import GridSpec
from .spectrum2 import Model2Grid

# section -> ordered (key, required, default)
SCHEMA = {
    "circuit": (
        ("length_mm", True, None),
        ("xj_mm", False, 0.0),
        ("Cl_fF_per_mm", True, None),
        ("Ll_nH_per_mm", True, None),
        ("EJ_GHz", True, None),
        ("CJ_fF", False, 0.0),
        ("temperature_mK", False, 10.0),
    ),
    "readout": (
        ("fr_GHz", True, None),
        ("kappa_MHz", True, None),  # kappa / 2 pi, full width
        ("Cg_fF", True, None),
        ("xg_mm", True, None),
        ("Ztr_ohm", False, 50.0),
    ),
    "environment": (
        ("M_pH", False, None),
        ("R_ohm", False, None),
        ("APhi_uPhi0", False, None),
        ("QC", False, None),
        ("QL", False, None),
        ("Qrad", False, None),
    ),
    "solver": (
        ("phi_max", False, 8.0),
        ("n_points", False, 16385.0),
        ("n_states", False, 6.0),
        ("n_modes", False, 3.0),
        ("m2_points", False, 512.0),
        ("m2_phi_max", False, 8.0),
        ("m2_n_osc", False, 24.0),
        ("m2_aux_modes", False, 2.0),
    ),
}
OPTIONAL_SECTIONS = ("readout", "environment", "solver")
INT_KEYS = {"n_points", "n_states", "n_modes", "m2_points", "m2_n_osc", "m2_aux_modes"}


def _fmt(key: str, v: float) -> str:
    if key in INT_KEYS:
        return str(int(v))
    return repr(float(v))


@dataclass(frozen=True)
class DeviceConfig:
    circuit_values: dict
    readout_values: dict | None = None
    environment_values: dict | None = None
    solver_values: dict = field(default_factory=dict)

    @property
    def circuit(self) -> CircuitParams:
        c = self.circuit_values
        return CircuitParams.from_user_units(c["length_mm"], c["xj_mm"], c["Cl_fF_per_mm"], c["Ll_nH_per_mm"],
                                             c["EJ_GHz"], c["CJ_fF"], c["temperature_mK"])

    @property
    def readout(self) -> ReadoutParams | None:
        r = self.readout_values
        if r is None:
            return None
        return ReadoutParams(r["fr_GHz"] * 1e9, 2 * math.pi * r["kappa_MHz"] * 1e6, r["Cg_fF"] * 1e-15,
                             r["xg_mm"] * 1e-3, r["Ztr_ohm"])

    @property
    def environment(self) -> NoiseEnvironment | None:
        e = self.environment_values
        if e is None:
            return None
        opt = lambda k, s: None if e.get(k) is None else e[k] * s  # noqa: E731
        return NoiseEnvironment(opt("M_pH", 1e-12), opt("R_ohm", 1.0), opt("APhi_uPhi0", 1e-6 * PHI0),
                                opt("QC", 1.0), opt("QL", 1.0), opt("Qrad", 1.0),
                                self.circuit_values["temperature_mK"] * 1e-3)

    def _solver(self, key):
        return self.solver_values.get(key, dict((k, d) for k, _, d in SCHEMA["solver"])[key])

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self._solver("phi_max"), int(self._solver("n_points")))

    @property
    def n_states(self) -> int:
        return int(self._solver("n_states"))

    @property
    def n_modes(self) -> int:
        return int(self._solver("n_modes"))

    @property
    def model2_grid(self) -> Model2Grid:
        return Model2Grid(int(self._solver("m2_points")), self._solver("m2_phi_max"), int(self._solver("m2_n_osc")))

    @property
    def aux_modes(self) -> int:
        return int(self._solver("m2_aux_modes"))

    def with_circuit(self, **values) -> "DeviceConfig":
        c = dict(self.circuit_values)
        c.update(values)
        return validate(DeviceConfig(c, self.readout_values, self.environment_values, self.solver_values))


def _section(cp: configparser.ConfigParser, name: str, required: bool) -> dict | None:
    if not cp.has_section(name):
        if required:
            raise ConfigError(f"{name}: missing section")
        return None
    keys = {k for k, _, _ in SCHEMA[name]}
    out = {}
    for raw in cp[name]:
        if raw not in keys:
            raise ConfigError(f"{name}.{raw}: unknown key")
    for key, req, default in SCHEMA[name]:
        if key in cp[name]:
            text = cp[name][key].strip()
            try:
                v = float(text)
            except ValueError:
                raise ConfigError(f"{name}.{key}: not a number: {text!r}") from None
            if not math.isfinite(v):
                raise ConfigError(f"{name}.{key}: must be finite")
            if key in INT_KEYS and v != int(v):
                raise ConfigError(f"{name}.{key}: must be an integer")
            out[key] = v
        elif req:
            raise ConfigError(f"{name}.{key}: missing required key")
        elif default is not None:
            out[key] = default
    return out


def parse_config(text: str) -> DeviceConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax: {exc}") from None
    for s in cp.sections():
        if s not in SCHEMA:
            raise ConfigError(f"{s}: unknown section")
    cfg = DeviceConfig(_section(cp, "circuit", True), _section(cp, "readout", False),
                       _section(cp, "environment", False), _section(cp, "solver", False) or {})
    return validate(cfg)


def load_config(path) -> DeviceConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text)


FIELD_KEYS = {
    "total_length_2l": "length_mm", "junction_pos_xj": "xj_mm", "cap_per_len_Cl": "Cl_fF_per_mm",
    "ind_per_len_Ll": "Ll_nH_per_mm", "josephson_energy_EJ": "EJ_GHz", "junction_cap_CJ": "CJ_fF",
    "temperature": "temperature_mK", "resonator_freq_fr": "fr_GHz", "linewidth_kappa": "kappa_MHz",
    "coupling_cap_Cg": "Cg_fF", "line_impedance_Ztr": "Ztr_ohm", "q_dielectric_QC": "QC", "q_inductive_QL": "QL",
    "q_radiative_Qrad": "Qrad", "flux_line_resistance_R": "R_ohm",
}


def _field_path(section: str, message: str) -> str:
    for attr, key in FIELD_KEYS.items():
        if attr in message:
            return f"{section}.{key}"
    return section


def validate(cfg: DeviceConfig) -> DeviceConfig:
    for section, attr in (("circuit", "circuit"), ("readout", "readout"), ("environment", "environment")):
        try:
            obj = getattr(cfg, attr)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{_field_path(section, str(exc))}: {exc}") from None
        if section == "readout" and obj is not None:
            try:
                obj.check_position(cfg.circuit)
            except ValueError as exc:
                raise ConfigError(f"readout.xg_mm: {exc}") from None
    checks = {"phi_max": lambda v: v > 0, "n_points": lambda v: v >= 65, "n_states": lambda v: 3 <= v <= 12,
              "n_modes": lambda v: v >= 1, "m2_points": lambda v: v >= 33, "m2_phi_max": lambda v: v > 0,
              "m2_n_osc": lambda v: v >= 2, "m2_aux_modes": lambda v: v in (1, 2, 3)}
    for k, v in cfg.solver_values.items():
        if not checks[k](v):
            raise ConfigError(f"solver.{k}: value {v!r} out of range")
    return cfg


def emit_config(cfg: DeviceConfig) -> str:
    lines = []
    for name, values in (("circuit", cfg.circuit_values), ("readout", cfg.readout_values),
                         ("environment", cfg.environment_values), ("solver", cfg.solver_values)):
        if values is None or (name == "solver" and not values):
            continue
        lines.append(f"[{name}]")
        for key, _, _ in SCHEMA[name]:
            if values.get(key) is not None:
                lines.append(f"{key} = {_fmt(key, values[key])}")
        lines.append("")
    return "\n".join(lines)


def config_hash(cfg: DeviceConfig) -> str:
    return hashlib.sha256(emit_config(cfg).encode()).hexdigest()


def config_from_params(params: CircuitParams, readout: ReadoutParams | None = None,
                       environment: NoiseEnvironment | None = None) -> DeviceConfig:
    c = {"length_mm": params.total_length_2l / 1e-3, "xj_mm": params.junction_pos_xj / 1e-3,
         "Cl_fF_per_mm": params.cap_per_len_Cl / 1e-12, "Ll_nH_per_mm": params.ind_per_len_Ll / 1e-6,
         "EJ_GHz": params.josephson_energy_EJ / (H * 1e9), "CJ_fF": params.junction_cap_CJ / 1e-15,
         "temperature_mK": params.temperature / 1e-3}
    r = None
    if readout is not None:
        r = {"fr_GHz": readout.resonator_freq_fr / 1e9, "kappa_MHz": readout.linewidth_kappa / (2 * math.pi * 1e6),
             "Cg_fF": readout.coupling_cap_Cg / 1e-15, "xg_mm": readout.coupling_pos_xg / 1e-3,
             "Ztr_ohm": readout.line_impedance_Ztr}
    e = None
    if environment is not None:
        e = {}
        for key, attr, s in (("M_pH", "flux_line_mutual_M", 1e-12), ("R_ohm", "flux_line_resistance_R", 1.0),
                             ("APhi_uPhi0", "one_over_f_amp_APhi", 1e-6 * PHI0), ("QC", "q_dielectric_QC", 1.0),
                             ("QL", "q_inductive_QL", 1.0), ("Qrad", "q_radiative_Qrad", 1.0)):
            v = getattr(environment, attr)
            e[key] = None if v is None else v / s
    return validate(DeviceConfig(c, r, e, {}))
