"""Physical constants and the user-unit conversions used at the I/O boundary."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants as _sc


@dataclass(frozen=True)
class PhysConsts:
    flux_quantum: float
    planck_h: float
    elem_charge: float
    reduced_flux_quantum: float
    von_klitzing: float
    boltzmann: float

    @classmethod
    def codata(cls) -> "PhysConsts":
        h, e = _sc.h, _sc.e
        phi0 = h / (2 * e)
        return cls(phi0, h, e, phi0 / (2 * np.pi), h / e**2, _sc.k)


CONSTS = PhysConsts.codata()

H = CONSTS.planck_h
HBAR = H / (2 * np.pi)
E = CONSTS.elem_charge
KB = CONSTS.boltzmann
PHI0 = CONSTS.flux_quantum
PHI0_R = CONSTS.reduced_flux_quantum
RK = CONSTS.von_klitzing
EPS0 = _sc.epsilon_0
C_LIGHT = _sc.c

# user units -> SI
GHZ = 1e9
MHZ = 1e6
FF = 1e-15
NH = 1e-9
MM = 1e-3
US = 1e-6
FF_PER_MM = FF / MM  # numerically pF/m
NH_PER_MM = NH / MM  # numerically uH/m


def ghz_to_joule(f_ghz: float) -> float:
    return f_ghz * GHZ * H


def joule_to_ghz(energy: float) -> float:
    return energy / (H * GHZ)


def hz_to_rad(f: float) -> float:
    return 2 * np.pi * f


def coth_factor(omega: float, temperature: float) -> float:
    """coth(hbar w / 2 kT), clamped to exactly 1 deep in the quantum regime."""
    if temperature <= 0:
        return 1.0
    x = HBAR * abs(omega) / (2 * KB * temperature)
    if x > 30:
        return 1.0
    if x < 1e-8:
        return 1.0 / x
    return 1.0 / np.tanh(x)
