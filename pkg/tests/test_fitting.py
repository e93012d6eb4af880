import numpy as np
import pytest

from unimon.errors import InsufficientPoints
from unimon.fitting import (
    SpectroscopyDataset,
    apply_fit,
    fit_coupling_from_crossing,
    fit_spectrum_model1,
    model_frequencies,
    synthesize,
)
from unimon.io import read_spectroscopy
from unimon.params import QUBITS
from unimon.readout import ReadoutParams, avoided_crossing_trace
from unimon.spectrum1 import FIT_GRID

QB = QUBITS["B"]
TRUE = QB.circuit
FLUX5 = [0.0, 0.2, 0.35, 0.45, 0.5]


def _perturbed(ll=1.08, cl=0.93, ej=1.06):
    return TRUE.replace(ind_per_len_Ll=TRUE.ind_per_len_Ll * ll, cap_per_len_Cl=TRUE.cap_per_len_Cl * cl,
                        josephson_energy_EJ=TRUE.josephson_energy_EJ * ej)


@pytest.fixture(scope="module")
def clean_data():
    return synthesize(TRUE, FLUX5)


@pytest.fixture(scope="module")
def full_fit(clean_data):
    return fit_spectrum_model1(clean_data, _perturbed(), restart=False)


def test_noiseless_round_trip(full_fit):
    for key, attr in (("Ll", "ind_per_len_Ll"), ("Cl", "cap_per_len_Cl"), ("EJ", "josephson_energy_EJ")):
        assert full_fit.params_out[key][0] == pytest.approx(getattr(TRUE, attr), rel=1e-2)
    assert full_fit.residual_rms < 1e3
    assert full_fit.converged


def test_objective_history_monotone(full_fit):
    h = np.array(full_fit.objective_history)
    assert np.all(np.diff(h) <= 1e-12 * h[:-1] + 1e-300)
    assert full_fit.n_evaluations > 0 and full_fit.n_iterations == len(h)


def test_units_reported(full_fit):
    assert full_fit.params_out["Ll"][1] == "H/m"
    assert full_fit.params_out["EJ"][1] == "J"


def test_apply_fit_reproduces_data(full_fit, clean_data):
    f = model_frequencies(apply_fit(_perturbed(), full_fit), clean_data.flux, clean_data.label)
    np.testing.assert_allclose(f, clean_data.freq, rtol=1e-4)


def test_single_free_parameter(clean_data):
    fit = fit_spectrum_model1(clean_data, _perturbed(1.0, 1.0, 1.1), free=("EJ",), restart=False)
    assert fit.params_out["EJ"][0] == pytest.approx(TRUE.josephson_energy_EJ, rel=1e-6)
    assert set(fit.params_out) == {"EJ"}


def test_relative_noise_unbiased():
    flux = [0.0, 0.25, 0.4, 0.5]
    clean = synthesize(TRUE, flux)
    est = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        noisy = SpectroscopyDataset(clean.flux, clean.label, clean.freq * (1 + 1e-3 * rng.standard_normal(len(clean))),
                                    clean.sigma)
        fit = fit_spectrum_model1(noisy, _perturbed(1.0, 1.0, 1.05), free=("EJ",), restart=False,
                                  tol=1e-6)
        est.append(fit.params_out["EJ"][0])
    assert np.mean(est) == pytest.approx(TRUE.josephson_energy_EJ, rel=0.03)


def test_reparameterized_input_same_fit(tmp_path, clean_data):
    p = tmp_path / "spec.csv"
    lines = ["flux_phi0,transition,freq_ghz,sigma_ghz"]
    lines += [f"{float(f)!r},{lab},{float(v) / 1e9!r},0.001" for f, lab, v in zip(clean_data.flux, clean_data.label, clean_data.freq)]
    p.write_text("\n".join(lines) + "\n")
    from_csv = read_spectroscopy(p)
    a = fit_spectrum_model1(clean_data, _perturbed(1.0, 1.0, 1.1), free=("EJ",), restart=False)
    b = fit_spectrum_model1(from_csv, _perturbed(1.0, 1.0, 1.1), free=("EJ",), restart=False)
    assert b.params_out["EJ"][0] == pytest.approx(a.params_out["EJ"][0], rel=1e-6)


def test_insufficient_points():
    d = synthesize(TRUE, [0.5, 0.4])
    with pytest.raises(InsufficientPoints):
        fit_spectrum_model1(d, TRUE)
    d = synthesize(TRUE, [0.5], labels=("f01", "f02_half", "f12", "f01", "f12"))
    with pytest.raises(InsufficientPoints):
        fit_spectrum_model1(d, TRUE)


def test_bad_free_names(clean_data):
    with pytest.raises(ValueError):
        fit_spectrum_model1(clean_data, TRUE, free=("EC",))


def test_dataset_validation():
    with pytest.raises(ValueError):
        SpectroscopyDataset.from_rows([(0.5, "f03", 4e9, None)])
    with pytest.raises(ValueError):
        SpectroscopyDataset.from_rows([(0.5, "f01", -4e9, None)])
    d = SpectroscopyDataset.from_rows([(0.5, "f01", 4e9, None), (0.4, "f12", 5e9, 2e6)])
    assert len(d) == 2 and d.sigma[0] == 1e6


@pytest.fixture(scope="module")
def crossing_data():
    ro = ReadoutParams(QB.fr_GHz * 1e9, 0.0, 10e-15, QB.xg_mm * 1e-3)
    biases = np.linspace(0.405, 0.445, 9)
    rows = avoided_crossing_trace(TRUE, ro, biases, grid=FIT_GRID, check=False)
    data = [(r.phi_diff, r.lower) for r in rows] + [(r.phi_diff, r.upper) for r in rows]
    return ro, data


def test_crossing_round_trip(crossing_data):
    ro, data = crossing_data
    fit = fit_coupling_from_crossing(data, 8e-15, TRUE, ro)
    assert fit.params_out["Cg"][0] == pytest.approx(10e-15, rel=0.02)
    assert fit.params_out["Cg"][1] == "F"
    assert fit.residual_rms < 1e4


def test_crossing_insufficient(crossing_data):
    ro, data = crossing_data
    with pytest.raises(InsufficientPoints):
        fit_coupling_from_crossing(data[:1], 8e-15, TRUE, ro)
