import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from unimon.cli import biases, main
from unimon.config import config_from_params, config_hash, emit_config, load_config, parse_config
from unimon.errors import ConfigError
from unimon.io import ResultTable, fmt, read_crossing, read_fluxnoise
from unimon.params import QUBITS, DESIGN

ROOT = Path(__file__).resolve().parents[1]
QB_INI = ROOT / "configs" / "qubit_b.ini"
DESIGN_INI = ROOT / "configs" / "design.ini"


def _run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _body(csv_text):
    return [ln for ln in csv_text.splitlines() if not ln.startswith("#")]


def test_config_round_trip_byte_identical():
    text = emit_config(load_config(QB_INI))
    assert emit_config(parse_config(text)) == text
    cfg = config_from_params(DESIGN)
    text = emit_config(cfg)
    assert emit_config(parse_config(text)) == text
    assert config_hash(parse_config(text)) == config_hash(cfg)


def test_config_builds_same_circuit():
    cfg = load_config(QB_INI)
    q = QUBITS["B"].circuit
    assert cfg.circuit.josephson_energy_EJ == pytest.approx(q.josephson_energy_EJ, rel=1e-12)
    assert cfg.readout.linewidth_kappa == pytest.approx(QUBITS["B"].readout.linewidth_kappa, rel=1e-12)


@pytest.mark.parametrize("text,path", [
    ("[circuit]\nlength_mm = 8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\n", "circuit.EJ_GHz"),
    ("[circuit]\nlength_mm = 8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\nEJ_GHz = abc\n", "circuit.EJ_GHz"),
    ("[circuit]\nlength_mm = -8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\nEJ_GHz = 19\n", "circuit.length_mm"),
    ("[circuit]\nlength_mm = 8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\nEJ_GHz = 19\nbogus = 1\n", "circuit.bogus"),
    ("[circuit]\nlength_mm = 8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\nEJ_GHz = 19\n[solver]\nn_states = 2.5\n",
     "solver.n_states"),
    ("[circuit]\nlength_mm = 8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\nEJ_GHz = 19\n"
     "[readout]\nfr_GHz = 6\nkappa_MHz = 1\nCg_fF = 10\nxg_mm = 5\n", "readout.xg_mm"),
    ("[circuit]\nlength_mm = 8\nCl_fF_per_mm = 83\nLl_nH_per_mm = 0.83\nEJ_GHz = 19\n"
     "[environment]\nQC = -1\n", "environment.QC"),
    ("[circuitry]\n", "circuitry"),
])
def test_config_errors_name_the_field(text, path):
    with pytest.raises(ConfigError) as ei:
        parse_config(text)
    assert str(ei.value).startswith(path)


def test_spectrum_csv_format(capsys):
    code, out, _ = _run(["spectrum", "-c", DESIGN_INI, "--flux-start", 0.5, "--flux-stop", 0.5, "--steps", 1], capsys)
    assert code == 0
    meta = [ln for ln in out.splitlines() if ln.startswith("#")]
    keys = [ln[2:].split(":")[0] for ln in meta]
    assert keys == ["schema_version", "model_version", "config_hash", "command", "timestamp"]
    body = _body(out)
    assert body[0] == "flux[Phi0],phi0[rad],mode[1],f01[GHz],f02_half[GHz],alpha[MHz]"
    f01 = body[1].split(",")[3]
    assert len(re.sub(r"[^0-9]", "", f01.split("e")[0]).lstrip("0")) <= 12
    assert float(f01) == pytest.approx(4.5306, rel=1e-4)


def test_json_mirror_matches_csv(tmp_path, capsys):
    j = tmp_path / "o.json"
    code, out, _ = _run(["dc-phase", "-c", DESIGN_INI, "--steps", 5, "--json", j], capsys)
    assert code == 0
    doc = json.loads(j.read_text())
    body = _body(out)
    assert [c["name"] + "[" + c["unit"] + "]" for c in doc["columns"]] == body[0].split(",")
    for row, line in zip(doc["rows"], body[1:]):
        assert [fmt(v) for v in row] == line.split(",")


def test_thread_count_does_not_change_output(capsys, monkeypatch):
    argv = ["spectrum", "-c", DESIGN_INI, "--steps", 6]
    _, a, _ = _run(argv + ["--threads", 1], capsys)
    _, b, _ = _run(argv + ["--threads", 3], capsys)
    monkeypatch.setenv("UNIFLUX_THREADS", "2")
    _, c, _ = _run(argv, capsys)
    assert _body(a) == _body(b) == _body(c)


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("UNIFLUX_THREADS", "many")
    code, _, _ = _run(["spectrum", "-c", DESIGN_INI, "--steps", 2], capsys)
    assert code == 1


def test_exit_codes(tmp_path, capsys):
    assert _run(["no-such-command"], capsys)[0] == 1
    assert _run(["spectrum", "-c", DESIGN_INI, "--steps", 0], capsys)[0] == 1
    assert _run(["spectrum", "-c", tmp_path / "missing.ini"], capsys)[0] == 2
    assert _run(["cpw", "--a", 30, "--b", 10, "--eta", 525], capsys)[0] == 2
    bad = tmp_path / "noise.csv"
    bad.write_text("slope_radps_per_phi0,gamma_echo_per_us\n1e9,0.1\n1e9,0.2\n1e9,0.3\n")
    code, _, err = _run(["fit-fluxnoise", "--data", bad], capsys)
    assert code == 3 and "DegenerateDesign" in err
    assert _run(["dispersive", "-c", DESIGN_INI], capsys)[0] == 2


def test_coherence_command(capsys):
    code, out, _ = _run(["coherence", "--t1", 8.6, "--t2e", 9.2, "--gate", 20], capsys)
    assert code == 0
    assert float(_body(out)[1].split(",")[1]) == pytest.approx(0.9989, abs=2e-4)


def test_cpw_command(capsys):
    code, out, _ = _run(["cpw", "--a", 10, "--b", 30, "--eta", 525], capsys)
    assert code == 0
    assert _body(out)[0] == "Cl[fF/mm],Ll[nH/mm],Z[Ohm]"
    Cl, Ll, Z = map(float, _body(out)[1].split(","))
    assert Cl == pytest.approx(141.0523730163237, rel=1e-10)
    assert Z == pytest.approx(59.005442111165316, rel=1e-10)


def test_dispersive_command(capsys):
    code, out, _ = _run(["dispersive", "-c", QB_INI], capsys)
    assert code == 0
    row = dict(zip([h.split("[")[0] for h in _body(out)[0].split(",")], map(float, _body(out)[1].split(","))))
    assert row["g01"] == pytest.approx(70.0, rel=0.02)


def test_fit_spectrum_command_emits_config(tmp_path, capsys):
    data = tmp_path / "spec.csv"
    rows = ["# synthetic", "flux_phi0,transition,freq_ghz"]
    from unimon.fitting import synthesize
    d = synthesize(QUBITS["B"].circuit, [0.0, 0.3, 0.5])
    rows += [f"{float(f)!r},{lab},{float(v) / 1e9!r}" for f, lab, v in zip(d.flux, d.label, d.freq)]
    data.write_text("\n".join(rows) + "\n")
    new = tmp_path / "new.ini"
    code, out, _ = _run(["fit-spectrum", "-c", QB_INI, "--data", data, "--free", "EJ", "--emit-config", new], capsys)
    assert code == 0
    assert load_config(new).circuit_values["EJ_GHz"] == pytest.approx(19.0, rel=1e-6)
    assert _run(["fit-spectrum", "-c", QB_INI, "--data", data, "--free", "EC"], capsys)[0] == 1


def test_dataset_readers(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("# c\nflux_phi0,freq_ghz\n0.4,6.1\n0.41,6.3\n")
    assert read_crossing(p) == [(0.4, 6.1e9), (0.41, 6.3e9)]
    p.write_text("flux,freq\n0.4,6.1\n")
    with pytest.raises(ConfigError):
        read_crossing(p)
    p.write_text("flux_phi0,freq_ghz\n0.4,abc\n")
    with pytest.raises(ConfigError, match=":2:"):
        read_crossing(p)
    p.write_text("slope_radps_per_phi0,gamma_echo_per_us\n2.0,0.5\n")
    (s, g), = read_fluxnoise(p)
    assert g == 5e5 and s == pytest.approx(2.0 / 2.067833848e-15)


def test_result_table_validation():
    with pytest.raises(ValueError):
        ResultTable((("a", ""),), [(1.0,)])
    with pytest.raises(ValueError):
        ResultTable((("a", "Hz"),), [(1.0, 2.0)])
    assert fmt(True) == "1" and fmt(1 / 3) == "0.333333333333"


def test_biases_helper():
    assert list(biases(0.2, 0.9, 1)) == [0.2]
    assert len(biases(0, 1, 11)) == 11


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "unimon", "cpw", "--a", "10", "--b", "30", "--eta", "525"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "Z[Ohm]" in r.stdout


def test_single_step_at_zero_flux(capsys):
    code, out, _ = _run(["dc-phase", "-c", DESIGN_INI, "--flux-start", 0, "--flux-stop", 0, "--steps", 1], capsys)
    body = _body(out)
    assert code == 0 and len(body) == 2
    assert float(body[1].split(",")[1]) == 0.0


def test_design_full_sweep_half_flux_row(capsys):
    code, out, _ = _run(["spectrum", "-c", DESIGN_INI, "--steps", 101], capsys)
    body = _body(out)
    assert code == 0 and len(body) == 102
    row = body[51].split(",")
    assert float(row[0]) == 0.5
    assert float(row[3]) == pytest.approx(4.5, rel=0.02)
    assert float(row[5]) == pytest.approx(510, rel=0.05)
