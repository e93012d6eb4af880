"""Half-flux frequency and anharmonicity of the five measured qubits against their E_J."""
from unimon.constants import GHZ, H
from unimon.params import QUBITS
from unimon.spectrum1 import solve_point

print("qubit,EJ_GHz,ELm_GHz,ECm_GHz,f01_GHz,f01_meas_GHz,alpha_MHz,alpha_meas_MHz,alpha_excess_pct")
for name, q in sorted(QUBITS.items(), key=lambda kv: kv[1].EJ_GHz):
    pt = solve_point(q.circuit, 0.5)
    s = pt.spectrum
    a = s.anharmonicity / 1e6
    print(f"{name},{q.EJ_GHz},{pt.mode.E_L_m / (H * GHZ):.3f},{pt.mode.E_C_m / (H * GHZ):.4f},"
          f"{s.f01 / 1e9:.4f},{q.f01_GHz},{a:.1f},{q.alpha_MHz},{100 * (a / q.alpha_MHz - 1):+.1f}")
