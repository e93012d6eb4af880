"""Couplings and dispersive shifts of the five qubits at half flux, model and measured inputs."""
import numpy as np

from unimon.params import QUBITS
from unimon.readout import coupling_strengths, dispersive_shift_approx, dispersive_shift_exact
from unimon.spectrum1 import solve_point

MHZ = 2 * np.pi * 1e6
print("qubit,g01_MHz,g01_meas_MHz,chi_exact_MHz,chi_approx_MHz,chi_from_measured_MHz,chi_meas_MHz")
for name, q in QUBITS.items():
    pt = solve_point(q.circuit, 0.5)
    cpl = coupling_strengths(pt.spectrum, pt.mode, q.readout, pt.params)
    res = dispersive_shift_exact(pt.spectrum, cpl, q.readout)
    n = pt.spectrum.charge_elems
    g01 = q.g01_MHz * MHZ
    g12 = g01 * abs(n[1, 2] / n[0, 1])  # ratio from the model; g12 is not measured
    chi_m = dispersive_shift_approx(q.f01_GHz * 1e9, q.f12_GHz * 1e9, g01, g12, q.fr_GHz * 1e9)
    print(f"{name},{abs(cpl.g_ij[0, 1]) / MHZ:.2f},{q.g01_MHz},{res.chi_exact / MHZ:.3f},"
          f"{res.chi_approx / MHZ:.3f},{chi_m / MHZ:.3f},{q.chi_MHz}")
