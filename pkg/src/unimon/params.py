"""Reference parameter sets: the design example and the five measured qubits A-E."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import CircuitParams
from .readout import ReadoutParams

JUNCTION_CAP_FF = 1.4  # also used for the measured qubits, which do not list C_J
COUPLING_POS_MM = 0.596

DESIGN = CircuitParams.from_user_units(8.0, 0.0, 83.0, 0.83, 19.0, JUNCTION_CAP_FF)
DESIGN_RATIO = 0.772
DESIGN_Z = 100.0


@dataclass(frozen=True)
class MeasuredQubit:
    """One row of the measured-parameter table (user units) plus coherence data."""

    name: str
    EJ_GHz: float
    ELm_GHz: float
    ECm_GHz: float
    f01_GHz: float
    alpha_MHz: float
    Cg_fF: float
    g01_MHz: float
    chi_MHz: float
    fr_GHz: float
    kappa_MHz: float
    T1_us: float
    T2star_us: float
    T2e_us: float
    APhi_uPhi0: float
    length_mm: float = 8.0
    Ll_nH_per_mm: float = 0.821
    Cl_fF_per_mm: float = 87.1
    xg_mm: float = COUPLING_POS_MM

    @property
    def circuit(self) -> CircuitParams:
        return CircuitParams.from_user_units(self.length_mm, 0.0, self.Cl_fF_per_mm, self.Ll_nH_per_mm,
                                             self.EJ_GHz, JUNCTION_CAP_FF)

    @property
    def readout(self) -> ReadoutParams:
        return ReadoutParams(self.fr_GHz * 1e9, 2 * math.pi * self.kappa_MHz * 1e6, self.Cg_fF * 1e-15,
                             self.xg_mm * 1e-3)

    @property
    def f12_GHz(self) -> float:
        return self.f01_GHz + self.alpha_MHz * 1e-3


QUBITS = {
    "A": MeasuredQubit("A", 23.3, 24.9, 0.318, 3.547, 744, 9.0, 53.5, 0.74, 5.826, 0.43, 7.2, 1.9, 6.8, 6.1),
    "B": MeasuredQubit("B", 19.0, 25.2, 0.297, 4.488, 434, 10.0, 70.0, 1.2, 6.198, 1.24, 8.6, 3.1, 9.2, 15.0),
    "C": MeasuredQubit("C", 17.4, 25.3, 0.290, 4.781, 343, 12.5, 79.7, 9.20, 5.522, 9.2, 5.8, 2.3, 9.3, 11.2),
    "D": MeasuredQubit("D", 14.8, 25.7, 0.278, 5.257, 214, 12.5, 85.7, 20.2, 5.699, 10.0, 3.9, 2.3, 7.0, 11.1),
    "E": MeasuredQubit("E", 15.0, 25.7, 0.279, 5.224, 257, 12.5, 92.3, 4.1, 6.156, 1.8, 5.6, 2.5, 11.4, 14.3),
}

# qubit-B line constants from the model-2 fit; E_J for that fit is not reported
MODEL2_QUBIT_B = {"Cl_fF_per_mm": 79.8, "Ll_nH_per_mm": 0.893}

QUBIT_B_F01_ZERO_GHZ = 9.05
QUBIT_B_DIELECTRIC_QC = 1.7e5
QUBIT_B_CG_DESIGN_FF = 10.4
GATE_TIME_NS = 20.0
COHERENCE_LIMIT = 0.9989
