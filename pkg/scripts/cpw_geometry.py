"""Centre-strip width giving a target CPW impedance for several gap widths."""
import argparse

from scipy.optimize import brentq

from unimon.circuit import cpw_line_constants

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--z", type=float, default=100.0, help="target impedance (Ohm)")
ap.add_argument("--eta", type=float, default=525.0, help="substrate thickness (um)")
ap.add_argument("--epsr", type=float, default=11.45)
args = ap.parse_args()

print("b_um,a_um,Cl_pF_per_m,Ll_uH_per_m,Z_ohm")
for b in (20.0, 30.0, 40.0, 60.0, 100.0):
    z = lambda a: cpw_line_constants(a * 1e-6, b * 1e-6, args.eta * 1e-6, args.epsr)[2] - args.z  # noqa: E731
    a = brentq(z, 1e-4 * b, 0.999 * b, xtol=1e-12)
    Cl, Ll, Z = cpw_line_constants(a * 1e-6, b * 1e-6, args.eta * 1e-6, args.epsr)
    print(f"{b},{a:.5f},{Cl * 1e12:.3f},{Ll * 1e6:.5f},{Z:.4f}")
