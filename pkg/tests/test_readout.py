import numpy as np
import pytest

from unimon.errors import DispersiveRegimeWarning, ParameterError, ResonantDivergence
from unimon.params import QUBITS
from unimon.readout import (
    ReadoutParams,
    _dispersive_from,
    avoided_crossing_trace,
    coupling_strengths,
    dispersive_shift_approx,
    dispersive_shift_exact,
    dressed_branches,
)
from unimon.spectrum1 import GridSpec, solve_point

TP = 2 * np.pi


def _ro(fr=6.0e9, kappa=0.0):
    return ReadoutParams(fr, kappa, 10e-15, 0.596e-3)


def test_three_level_hand_formula():
    w = TP * np.array([0.0, 4.5e9, 9.4e9])
    g01, g12 = TP * 70e6, TP * 103e6
    g = np.array([[0, g01, 0], [g01, 0, g12], [0, g12, 0]])
    wr = TP * 6.2e9
    res = _dispersive_from(w, g, _ro(6.2e9), rotating_only=False)
    c = lambda gg, wi, wj: gg**2 / (wj - wi - wr)  # noqa: E731
    chi01, chi10 = c(g01, w[0], w[1]), c(g01, w[1], w[0])
    chi12, chi21 = c(g12, w[1], w[2]), c(g12, w[2], w[1])
    assert res.chi_exact == pytest.approx(chi01 - chi10 + (chi21 - chi12) / 2, rel=1e-13)


def test_two_level_counter_rotating_term():
    w = TP * np.array([0.0, 4.5e9])
    g = TP * 50e6 * np.array([[0, 1.0], [1.0, 0]])
    wr = TP * 6.2e9
    res = _dispersive_from(w, g, _ro(6.2e9), rotating_only=False)
    gg = g[0, 1]
    assert res.chi_exact == pytest.approx(gg**2 / (w[1] - wr) + gg**2 / (w[1] + wr), rel=1e-13)


def test_rotating_only_reduces_to_approximate():
    pt = solve_point(QUBITS["B"].circuit, 0.5)
    ro = QUBITS["B"].readout
    cpl = coupling_strengths(pt.spectrum, pt.mode, ro, pt.params)
    res = dispersive_shift_exact(pt.spectrum, cpl, ro, n_levels=3, rotating_only=True)
    assert res.chi_exact == pytest.approx(res.chi_approx, rel=1e-12)


def test_approx_formula_units():
    g01, g12 = TP * 70e6, TP * 100e6
    chi = dispersive_shift_approx(4.5e9, 4.9e9, g01, g12, 6.2e9)
    ref = g01**2 / (TP * (4.5e9 - 6.2e9)) - g12**2 / (2 * TP * (4.9e9 - 6.2e9))
    assert chi == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("name", list(QUBITS))
def test_exact_and_approximate_close(name):
    q = QUBITS[name]
    pt = solve_point(q.circuit, 0.5)
    cpl = coupling_strengths(pt.spectrum, pt.mode, q.readout, pt.params)
    res = dispersive_shift_exact(pt.spectrum, cpl, q.readout)
    assert abs(res.chi_exact / res.chi_approx - 1) < 0.05


def test_qubit_b_coupling_near_reported():
    q = QUBITS["B"]
    pt = solve_point(q.circuit, 0.5)
    g = coupling_strengths(pt.spectrum, pt.mode, q.readout, pt.params).g_ij
    assert abs(g[0, 1]) / TP / 1e6 == pytest.approx(q.g01_MHz, rel=0.02)
    assert abs(g[0, 2]) < 1e-6 * abs(g[0, 1])


def test_coupling_scales_with_cg_and_vanishes_at_zero():
    q = QUBITS["B"]
    pt = solve_point(q.circuit, 0.5)
    mk = lambda cg: ReadoutParams(q.fr_GHz * 1e9, 0.0, cg, q.xg_mm * 1e-3)  # noqa: E731
    c1 = coupling_strengths(pt.spectrum, pt.mode, mk(1e-15), pt.params)
    c2 = coupling_strengths(pt.spectrum, pt.mode, mk(2e-15), pt.params)
    # Cg also loads the total capacitance through u(xg)^2
    assert c2.C_u_tot - c1.C_u_tot == pytest.approx(1e-15 * c1.u_at_xg**2, rel=1e-9)
    assert c2.g_ij[0, 1] / c1.g_ij[0, 1] == pytest.approx(2 * c1.C_u_tot / c2.C_u_tot, rel=1e-12)
    assert coupling_strengths(pt.spectrum, pt.mode, mk(0.0), pt.params).g_ij[0, 1] == 0.0


def test_resonant_divergence():
    w = TP * np.array([0.0, 6.2e9, 12.0e9])
    g = TP * 50e6 * np.array([[0, 1, 0], [1, 0, 1.4], [0, 1.4, 0]])
    with pytest.raises(ResonantDivergence):
        _dispersive_from(w, g, _ro(6.2e9, TP * 1e6), rotating_only=False)
    with pytest.raises(ResonantDivergence):
        dispersive_shift_approx(6.2e9, 5.8e9, g[0, 1], g[1, 2], 6.2e9, TP * 1e6)


def test_dispersive_regime_warning():
    w = TP * np.array([0.0, 6.0e9, 11.8e9])
    g = TP * 50e6 * np.array([[0, 1, 0], [1, 0, 1.4], [0, 1.4, 0]])
    with pytest.warns(DispersiveRegimeWarning):
        _dispersive_from(w, g, _ro(6.2e9), rotating_only=False)


def test_jaynes_cummings_gap():
    g = TP * 20e6
    wr = TP * 6e9
    br = dressed_branches(np.array([0.0, wr]), np.array([[0, g], [g, 0]]), wr, 5)
    assert br[1] - br[0] == pytest.approx(2 * g, rel=0.02)


def test_readout_validation():
    with pytest.raises(ParameterError):
        ReadoutParams(-1.0, 0.0, 1e-15, 0.0)
    with pytest.raises(ParameterError):
        ReadoutParams(6e9, -1.0, 1e-15, 0.0)
    with pytest.raises(ParameterError):
        QUBITS["B"].readout.__class__(6e9, 0.0, 1e-15, 5e-3).check_position(QUBITS["B"].circuit)
    with pytest.raises(ParameterError):
        ReadoutParams(6e9, 0.0, 1e-15, 1e-4, 50.0, 1e-12, 1e-9)


def test_quarter_wave_construction_consistent():
    ro = ReadoutParams.from_quarter_wave(87e-12, 0.82e-6, 5e-3, 10e-15, 0.596e-3, 0.0)
    wr = 1 / np.sqrt(ro.resonator_ind_Lr * (ro.resonator_cap_Cr + ro.coupling_cap_Cg))
    assert ro.omega_r == pytest.approx(wr, rel=1e-12)


def test_crossing_has_minimum_gap_near_resonance():
    q = QUBITS["B"]
    biases = np.linspace(0.40, 0.45, 11)
    rows = avoided_crossing_trace(q.circuit, q.readout, biases, grid=GridSpec(8.0, 4097))
    gaps = np.array([r.upper - r.lower for r in rows])
    pt = solve_point(q.circuit, 0.43)
    g = abs(coupling_strengths(pt.spectrum, pt.mode, q.readout, q.circuit).g_ij[0, 1]) / TP
    assert 0 < gaps.min() < 3 * g
    assert gaps[0] > gaps.min() and gaps[-1] > gaps.min()
