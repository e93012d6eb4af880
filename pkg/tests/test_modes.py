import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unimon.circuit import solve_dc_phase
from unimon.constants import GHZ, H
from unimon.errors import OutOfDomain
from unimon.modes import (
    envelope_value,
    orthogonality_residuals,
    qubit_mode,
    solve_modes,
    solve_wavenumbers,
    wavenumber_residual,
)
from unimon.params import QUBITS, DESIGN

QB = QUBITS["B"].circuit
DESIGN_OFFSET = DESIGN.replace(junction_pos_xj=1e-3)

# independent root scan (1e6 samples + bisection) of the transcendental equation
K_FROZEN = [
    (DESIGN, 0.0, [392.69908169872417, 483.995425027986, 1178.0972450961726]),
    (DESIGN, 0.25, [392.69908169872417, 450.5424274104297, 1178.0972450961726]),
    (DESIGN, 0.5, [199.90431641122638, 392.69908169872417, 1126.520845980565]),
    (QB, 0.0, [392.69908169872417, 483.34064125267093, 1178.0972450961726]),
    (QB, 0.5, [203.4837091800261, 392.69908169872417, 1127.420253284722]),
    (DESIGN_OFFSET, 0.0, [350.39013109078326, 577.7499621526033, 959.6941904715825]),
    (DESIGN_OFFSET, 0.25, [339.5118176313117, 555.4100837603255, 951.254042055431]),
    (DESIGN_OFFSET, 0.5, [179.35966243587677, 465.78454215394265, 919.607586398148]),
]


@pytest.mark.parametrize("params,phi,expected", K_FROZEN)
def test_wavenumbers_frozen(params, phi, expected):
    ks = solve_wavenumbers(params, solve_dc_phase(params, phi), 3)
    np.testing.assert_allclose(ks, expected, rtol=1e-10)


def test_qubit_b_quarter_flux_anharmonic_root():
    ks = solve_wavenumbers(QB, solve_dc_phase(QB, 0.25), 3)
    assert ks[1] == pytest.approx(449.7885168182635, rel=1e-10)


def test_wavenumber_residual_vanishes():
    dc = solve_dc_phase(DESIGN_OFFSET, 0.3)
    ks = solve_wavenumbers(DESIGN_OFFSET, dc, 4)
    l = DESIGN_OFFSET.half_length
    for k in ks:
        r = wavenumber_residual(k * l, DESIGN_OFFSET, dc)
        assert abs(r) < 1e-8


# trapezoid-integrated envelopes (1e5 points) of the matched sinusoids
ENVELOPE_FROZEN = [
    (QB, 0.5, 1, 3.2742059056478885, 0.2974177562193014, 25.16426587527277),
    (DESIGN, 0.5, 1, 3.2780904889319813, 0.3128195171286142, 24.87143954540942),
    (DESIGN, 0.0, 2, 2.427433586028151, 0.17153260334947687, 43.766790998292485),
    (DESIGN_OFFSET, 0.5, 1, 2.8571734922867305, 0.23764308979370555, 25.221834531562834),
]


@pytest.mark.parametrize("params,phi,index,du,ec,el", ENVELOPE_FROZEN)
def test_envelope_quantities_frozen(params, phi, index, du, ec, el):
    modes = solve_modes(params, solve_dc_phase(params, phi), 3)
    m = modes[index - 1]
    assert m.is_anharmonic
    assert abs(m.delta_u) == pytest.approx(du, rel=1e-8)
    assert m.E_C_m / (H * GHZ) == pytest.approx(ec, rel=1e-8)
    assert m.E_L_m / (H * GHZ) == pytest.approx(el, rel=1e-8)


def test_measured_qubit_energies_close_to_reported():
    for name, ec, el in (("A", 0.318, 24.9), ("B", 0.297, 25.2)):
        q = QUBITS[name].circuit
        m = qubit_mode(solve_modes(q, solve_dc_phase(q, 0.5), 3))
        assert m.E_C_m / (H * GHZ) == pytest.approx(ec, rel=0.01)
        assert m.E_L_m / (H * GHZ) == pytest.approx(el, rel=0.01)


def test_qubit_mode_index_moves_with_flux():
    assert qubit_mode(solve_modes(DESIGN, solve_dc_phase(DESIGN, 0.0), 3)).index_m == 2
    assert qubit_mode(solve_modes(DESIGN, solve_dc_phase(DESIGN, 0.5), 3)).index_m == 1


def test_harmonic_modes_have_no_jump():
    modes = solve_modes(DESIGN, solve_dc_phase(DESIGN, 0.0), 3)
    assert not modes[0].is_anharmonic
    assert abs(modes[0].delta_u) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=-2.5e-3, max_value=2.5e-3),
       st.floats(min_value=10.0, max_value=30.0))
def test_orthogonality(phi, xj, ej):
    from unimon.circuit import CircuitParams

    p = CircuitParams.from_user_units(8.0, xj * 1e3, 83.0, 0.83, ej, 1.4)
    dc = solve_dc_phase(p, phi)
    rep = orthogonality_residuals(solve_modes(p, dc, 3), p, dc)
    assert rep.max_offdiag < 1e-6


def test_stiffness_normalization():
    dc = solve_dc_phase(QB, 0.5)
    modes = solve_modes(QB, dc, 3)
    rep = orthogonality_residuals(modes, QB, dc)
    for i, m in enumerate(modes):
        if m.is_anharmonic:
            assert rep.stiffness[i, i] == pytest.approx(1.0, abs=1e-9)


def test_envelope_domain_and_junction_side():
    m = qubit_mode(solve_modes(QB, solve_dc_phase(QB, 0.5), 3))
    l = QB.half_length
    with pytest.raises(OutOfDomain):
        envelope_value(m, 1.01 * l)
    with pytest.raises(OutOfDomain):
        envelope_value(m, 0.0)
    jump = envelope_value(m, 0.0, "+") - envelope_value(m, 0.0, "-")
    assert abs(jump) == pytest.approx(abs(m.delta_u), rel=1e-12)
    assert envelope_value(m, -l) == pytest.approx(0.0, abs=1e-12)
    assert envelope_value(m, l) == pytest.approx(0.0, abs=1e-12)
