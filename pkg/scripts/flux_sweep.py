"""Model-1 spectrum of the reference design over one flux period."""
import argparse

import numpy as np

from unimon.params import DESIGN
from unimon.spectrum1 import flux_sweep

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--steps", type=int, default=41)
ap.add_argument("--threads", type=int, default=1)
args = ap.parse_args()

print("flux,f01_GHz,f02_half_GHz,alpha_MHz,mode")
for r in flux_sweep(DESIGN, None, np.linspace(0.0, 1.0, args.steps), threads=args.threads):
    print(f"{r.phi_diff:.4f},{r.f01 / 1e9:.6f},{r.f02_half / 1e9:.6f},{r.anharmonicity / 1e6:.3f},{r.mode_index}")
