"""Single-mode model against the auxiliary-mode (path-integral) model for the reference design."""
import argparse
import time

from unimon.params import DESIGN
from unimon.spectrum1 import solve_point
from unimon.spectrum2 import Model2Grid, model2_point

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--flux", type=float, nargs="+", default=[0.0, 0.25, 0.5])
ap.add_argument("--modes", type=int, default=2, choices=(1, 2, 3),
                help="auxiliary modes; with the junction centred only even modes couple")
ap.add_argument("--n-osc", type=int, default=24)
args = ap.parse_args()

print("flux,f01_model1_GHz,f01_model2_GHz,rel_diff_pct,alpha_model1_MHz,alpha_model2_MHz,seconds")
for phi in args.flux:
    t = time.perf_counter()
    s1 = solve_point(DESIGN, phi).spectrum
    s2 = model2_point(DESIGN, phi, args.modes, Model2Grid(512, 8.0, args.n_osc))
    print(f"{phi},{s1.f01 / 1e9:.5f},{s2.f01 / 1e9:.5f},{100 * (s2.f01 / s1.f01 - 1):+.2f},"
          f"{s1.anharmonicity / 1e6:.2f},{s2.anharmonicity / 1e6:.2f},{time.perf_counter() - t:.2f}")
