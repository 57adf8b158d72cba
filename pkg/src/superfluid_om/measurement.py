"""Measurement-chain estimates: pump heating, phase-noise floor, thermal and
inertial sensitivity of the helium resonator.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .errors import DomainError, ValidationError
from .materials import CONSTANTS

# k_B T/(m w^2) is a squared length; the amplitude is its square root.
X_TH_NOTE = "x_th = sqrt(k_B T / (m omega^2)); exponent 2 in the reference form corrected to 1/2"
T_NOISE_NOTE = "T_n = P^2 kappa V_eff / k_B (energy per k_B); half-quantum convention is T_n / 2"


@dataclass(frozen=True)
class PumpConfig:
    n_photons: float
    detuning: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.n_photons) and self.n_photons >= 0):
            raise ValidationError("n_photons", "must be >= 0")


@dataclass(frozen=True)
class PhaseNoiseSpec:
    """Single-sideband phase noise L(offset) in dBc/Hz and the detection bandwidth.

    The bandwidth has no default: it sets the pressure floor directly and
    must be stated by the user.
    """

    level_dbc: float
    offset: float
    bandwidth: float

    def __post_init__(self):
        if not self.offset > 0:
            raise ValidationError("offset", "must be > 0")
        if not self.bandwidth > 0:
            raise ValidationError("bandwidth", "must be > 0")


@dataclass(frozen=True)
class SensitivityReport:
    p_cavity: float
    p_helium: float
    p_min: float | None
    t_noise: float | None
    x_th: float
    x0_min: float
    strain_h: float
    spring_k: float
    mass: float
    notes: tuple = (X_TH_NOTE, T_NOISE_NOTE, "p_helium is an upper bound (filling factor 1)")

    def to_dict(self):
        d = asdict(self)
        d["notes"] = list(self.notes)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self):
        units = {
            "p_cavity": "W",
            "p_helium": "W (bound)",
            "p_min": "Pa",
            "t_noise": "K",
            "x_th": "m",
            "x0_min": "m",
            "strain_h": "",
            "spring_k": "N/m",
            "mass": "kg",
        }
        lines = []
        for key, unit in units.items():
            value = getattr(self, key)
            shown = "n/a" if value is None else f"{value:.4g}"
            lines.append(f"{key:<10} {shown:>12} {unit}")
        lines.extend(f"# {note}" for note in self.notes)
        return "\n".join(lines) + "\n"


def cavity_heating(pump, cavity, consts=CONSTANTS):
    """Power dissipated in the cavity walls, n hbar omega_c kappa_int (W)."""
    return pump.n_photons * consts.hbar * cavity.omega_c * cavity.kappa_int


def helium_heating(pump, omega_c, he, consts=CONSTANTS):
    """Upper bound on dielectric heating of the helium, n hbar omega_c^2 eps''/eps (W)."""
    return pump.n_photons * consts.hbar * omega_c * omega_c * (he.eps_loss / he.eps_R)


def pressure_resolution(noise, dwc_dp, omega_m):
    """Pressure whose phase sideband equals the phase-noise floor in the bandwidth.

    The acoustic pressure P phase-modulates the carrier with index
    |dw/dP| P / omega_m; setting the sideband power equal to
    2 * 10**(L/10) * B gives the floor.
    """
    if dwc_dp == 0:
        raise ZeroDivisionError("no transduction: d omega_c / dP is zero")
    return omega_m / abs(dwc_dp) * math.sqrt(2 * 10 ** (noise.level_dbc / 10) * noise.bandwidth)


def noise_temperature(p_min, he, v_eff, consts=CONSTANTS):
    return p_min**2 * he.kappa_He * v_eff / consts.k_B


def thermal_displacement(T, mass, omega_m, consts=CONSTANTS):
    if not (T > 0 and mass > 0 and omega_m > 0):
        raise DomainError("T, mass and omega_m must be positive")
    return math.sqrt(consts.k_B * T / (mass * omega_m**2))


def displacement_sensitivity(x_th, Q):
    """Smallest drive amplitude x0 of the container resolvable against x_th."""
    if not Q > 0:
        raise DomainError("Q must be positive")
    return x_th / Q


def strain_sensitivity(x0, baseline):
    if not baseline > 0:
        raise DomainError("baseline must be positive")
    return x0 / baseline


def sensitivity_report(
    *,
    pump,
    cavity,
    he,
    mass,
    omega_m,
    temperature,
    q_acoustic,
    baseline,
    v_eff,
    dwc_dp=None,
    noise=None,
    consts=CONSTANTS,
):
    """Assemble a SensitivityReport; p_min/t_noise need both ``noise`` and ``dwc_dp``."""
    p_min = t_noise = None
    if noise is not None and dwc_dp is not None:
        p_min = pressure_resolution(noise, dwc_dp, omega_m)
        t_noise = noise_temperature(p_min, he, v_eff, consts)
    x_th = thermal_displacement(temperature, mass, omega_m, consts)
    x0 = displacement_sensitivity(x_th, q_acoustic)
    return SensitivityReport(
        p_cavity=cavity_heating(pump, cavity, consts),
        p_helium=helium_heating(pump, cavity.omega_c, he, consts),
        p_min=p_min,
        t_noise=t_noise,
        x_th=x_th,
        x0_min=x0,
        strain_h=strain_sensitivity(x0, baseline),
        spring_k=mass * omega_m**2,
        mass=mass,
    )
