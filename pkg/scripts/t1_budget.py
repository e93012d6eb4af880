"""Qubit-B relaxation budget: dielectric loss plus Purcell decay, scaled to the half-flux T1."""
import argparse

import numpy as np

from unimon.decoherence import NoiseEnvironment, t1_budget_sweep
from unimon.params import QUBIT_B_DIELECTRIC_QC, QUBITS

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--steps", type=int, default=101)
ap.add_argument("--include-purcell", action="store_true",
                help="scale so dielectric plus Purcell reproduces the measured T1")
args = ap.parse_args()

q = QUBITS["B"]
env = NoiseEnvironment(q_dielectric_QC=QUBIT_B_DIELECTRIC_QC)
rows = t1_budget_sweep(q.circuit, env, q.readout, np.linspace(0, 1, args.steps),
                       scale_to=(0.5, q.T1_us * 1e-6), include_purcell=args.include_purcell)
print("flux,f01_GHz,T1_us,T1_dielectric_us,T1_purcell_us")
for r in rows:
    per = r.budget.t1_per_channel
    print(f"{r.phi_diff:.3f},{r.f01 / 1e9:.5f},{r.budget.t1_total * 1e6:.4f},"
          f"{per['dielectric'] * 1e6:.4f},{per['purcell'] * 1e6:.3f}")
