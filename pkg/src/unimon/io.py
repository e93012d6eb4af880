"""Result tables (CSV + JSON mirror) and dataset readers."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .constants import PHI0
from .errors import ConfigError
from .fitting import LABELS, SpectroscopyDataset

SCHEMA_VERSION = "1"
NUMBER_FORMAT = ".12g"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    return format(float(x), NUMBER_FORMAT)


@dataclass(frozen=True)
class ResultTable:
    """Unit-tagged numeric table.  ``columns`` is a sequence of (name, unit)."""

    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, unit in self.columns:
            if not unit:
                raise ValueError(f"column {name!r} has no unit tag")
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row length does not match the column count")

    @property
    def header(self) -> list[str]:
        return [f"{n}[{u}]" for n, u in self.columns]

    def column(self, name: str) -> np.ndarray:
        idx = [n for n, _ in self.columns].index(name)
        return np.array([float(r[idx]) for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.metadata.items():
            buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for r in self.rows:
            w.writerow([fmt(x) for x in r])
        return buf.getvalue()

    def to_json(self) -> str:
        def val(x):
            x = float(x)
            return float(fmt(x)) if math.isfinite(x) else fmt(x)

        doc = {"metadata": self.metadata, "columns": [{"name": n, "unit": u} for n, u in self.columns],
               "rows": [[val(x) for x in r] for r in self.rows]}
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def make_metadata(command: str, cfg_hash: str | None = None, version: str = "") -> dict:
    md = {"schema_version": SCHEMA_VERSION, "model_version": version}
    if cfg_hash is not None:
        md["config_hash"] = cfg_hash
    md["command"] = command
    md["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return md


def _read_rows(path, header: list[str]) -> list[dict]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    reader = csv.DictReader(lines)
    got = [h.strip() for h in (reader.fieldnames or [])]
    required = [h for h in header if not h.endswith("?")]
    optional = [h[:-1] for h in header if h.endswith("?")]
    if got[: len(required)] != required or set(got) - set(required) - set(optional):
        raise ConfigError(f"{path}: header must be {','.join(required + optional)}, got {','.join(got)}")
    rows = []
    for i, r in enumerate(reader, start=2):
        rows.append({(k or "").strip(): (v or "").strip() for k, v in r.items()} | {"_line": i})
    return rows


def _num(path, row, key):
    try:
        v = float(row[key])
    except (KeyError, ValueError):
        raise ConfigError(f"{path}:{row['_line']}: {key} is not a number") from None
    if not math.isfinite(v):
        raise ConfigError(f"{path}:{row['_line']}: {key} must be finite")
    return v


def read_spectroscopy(path) -> SpectroscopyDataset:
    """``flux_phi0,transition,freq_ghz,sigma_ghz`` (sigma optional; blank -> 1 MHz)."""
    rows = _read_rows(path, ["flux_phi0", "transition", "freq_ghz", "sigma_ghz?"])
    out = []
    for r in rows:
        lab = r["transition"]
        if lab not in LABELS:
            raise ConfigError(f"{path}:{r['_line']}: transition must be one of {', '.join(LABELS)}")
        sig = _num(path, r, "sigma_ghz") * 1e9 if r.get("sigma_ghz") else None
        out.append((_num(path, r, "flux_phi0"), lab, _num(path, r, "freq_ghz") * 1e9, sig))
    try:
        return SpectroscopyDataset.from_rows(out)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def read_crossing(path) -> list[tuple[float, float]]:
    rows = _read_rows(path, ["flux_phi0", "freq_ghz"])
    return [(_num(path, r, "flux_phi0"), _num(path, r, "freq_ghz") * 1e9) for r in rows]


def read_fluxnoise(path) -> list[tuple[float, float]]:
    """Returns (|d omega/d Phi| in rad/s per Wb, Gamma in 1/s)."""
    rows = _read_rows(path, ["slope_radps_per_phi0", "gamma_echo_per_us"])
    return [(_num(path, r, "slope_radps_per_phi0") / PHI0, _num(path, r, "gamma_echo_per_us") * 1e6) for r in rows]


def write_text(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
