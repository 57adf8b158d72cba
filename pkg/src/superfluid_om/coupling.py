"""Parametric coupling between an acoustic mode and a TE_0np microwave mode.

The acoustic pressure modulates the helium density and hence its
permittivity. The microwave frequency shift per unit pressure is

    d omega_c / dP = -(omega_c kappa / 6) (eps + 2)(eps - 1) Omega

where Omega is the overlap of the unit-peak pressure shape with the stored
electric energy, int f |E|^2 dV / int eps |E|^2 dV.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import UnsupportedModeError, ValidationError
from .materials import CONSTANTS
from .numerics import DEFAULT_QUADRATURE, integrate_cylinder


@dataclass(frozen=True)
class MicrowaveCavityParams:
    """Cavity resonance and loss rates, all angular (rad/s)."""

    omega_c: float
    kappa_int: float
    kappa_in: float
    kappa_out: float

    def __post_init__(self):
        for name in ("omega_c", "kappa_int", "kappa_in", "kappa_out"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(name, "must be positive and finite")

    @property
    def kappa_tot(self):
        return self.kappa_int + self.kappa_in + self.kappa_out

    @classmethod
    def reference_default(cls):
        two_pi = 2 * math.pi
        return cls(two_pi * 10.60e9, two_pi * 31.0, two_pi * 633.0, two_pi * 633.0)


@dataclass(frozen=True)
class CouplingResult:
    omega_overlap: float
    dwc_dP: float
    dP_sql: float
    g0: float
    sideband_resolved: bool

    @property
    def dwc_dp_hz_per_pa(self):
        return self.dwc_dP / (2 * math.pi)

    def to_row(self, acoustic_index, em_index):
        return {
            "acoustic_index": str(acoustic_index),
            "em_index": str(em_index),
            "omega_overlap": self.omega_overlap,
            "dwc_dp_hz_per_pa": self.dwc_dp_hz_per_pa,
            "dp_sql_pa": self.dP_sql,
            "g0_rad_s": self.g0,
            "sideband_resolved": self.sideband_resolved,
        }


def overlap_omega(acoustic, em, eps_R, spec=DEFAULT_QUADRATURE):
    """Geometric overlap Omega of a pressure mode with a TE_0np mode.

    |E|^2 of a TE_0np mode has no azimuthal dependence, so any acoustic
    mode with m >= 1 integrates cos(m theta) to zero over the turn.
    """
    if acoustic.geometry != em.geometry:
        raise ValidationError("geometry", "acoustic and microwave modes are on different geometries")
    if em.index.family != "TE" or em.index.m != 0:
        raise UnsupportedModeError(f"overlap needs a TE_0np microwave mode, got {em.index}")
    if acoustic.index.m != 0:
        return 0.0
    geom = acoustic.geometry
    numerator = integrate_cylinder(lambda r, z: acoustic.profile_rz(r, z) * em.intensity(r, z), geom, spec)
    denominator = eps_R * integrate_cylinder(em.intensity, geom, spec)
    return numerator / denominator


def dwc_dP(omega_c, he, omega_overlap):
    """Microwave frequency pull per unit acoustic pressure, rad/s per Pa."""
    eps = he.eps_R
    return -(omega_c * he.kappa_He / 6) * (eps + 2) * (eps - 1) * omega_overlap


def dp_sql(omega_m, he, v_eff, consts=CONSTANTS):
    """Zero-point pressure amplitude sqrt(hbar omega / (kappa V_eff)), Pa."""
    return math.sqrt(consts.hbar * omega_m / (he.kappa_He * v_eff))


def single_quantum_shift(dwc_dp, dp_sql_value):
    """|d omega_c/dP| * dP_sql in rad/s."""
    return abs(dwc_dp * dp_sql_value)


def sideband_resolved(omega_m, cavity):
    return omega_m > cavity.kappa_tot


def couple(acoustic, em, he, cavity, *, v_eff=None, spec=DEFAULT_QUADRATURE, consts=CONSTANTS):
    """Full coupling chain for one mode pair.

    ``v_eff`` replaces the acoustic mode's own effective volume when given.
    """
    omega = overlap_omega(acoustic, em, he.eps_R, spec)
    slope = dwc_dP(cavity.omega_c, he, omega)
    volume = acoustic.v_eff if v_eff is None else v_eff
    zpf = dp_sql(acoustic.omega, he, volume, consts)
    return CouplingResult(
        omega_overlap=omega,
        dwc_dP=slope,
        dP_sql=zpf,
        g0=single_quantum_shift(slope, zpf),
        sideband_resolved=sideband_resolved(acoustic.omega, cavity),
    )


def coupling_json(result, acoustic_index, em_index):
    return json.dumps(result.to_row(acoustic_index, em_index), indent=2, sort_keys=True)

