"""Acoustic loss channels and their combination into a quality factor.

Three-phonon attenuation of first sound below 0.5 K,

    alpha = (pi^3 / 60) (G + 1)^2 / (rho hbar^3 c^6) (k_B T)^4 omega,

is converted with Q = omega / (alpha c), i.e. alpha is read as an energy
attenuation per unit length. The amplitude reading would halve Q.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .materials import CONSTANTS

Q_CONVENTION = "energy: Q = omega / (alpha * c4)"
THREE_PHONON_T_MAX = 0.5


@dataclass(frozen=True)
class WallLossParams:
    q_substrate: float = 4e7
    energy_fraction: float = 4e-4

    def __post_init__(self):
        if not self.q_substrate > 0:
            raise ValidationError("q_substrate", "must be > 0")
        if not 0 < self.energy_fraction < 1:
            raise ValidationError("energy_fraction", "must lie in (0, 1)")


@dataclass(frozen=True)
class He3LossModel:
    """Placeholder ³He impurity channel, Q = A / (x3 omega^2).

    The coefficient has no built-in value; it must come from a calibration.
    """

    coefficient: float | None = None
    enabled: bool = False

    def __post_init__(self):
        if self.enabled and not (self.coefficient is not None and self.coefficient > 0):
            raise ValidationError("coefficient", "a positive coefficient is required when the channel is enabled")

    @classmethod
    def calibrated(cls, q_ref, x3_ref, omega_ref):
        """Choose A so that the channel gives ``q_ref`` at (x3_ref, omega_ref)."""
        return cls(coefficient=q_ref * x3_ref * omega_ref**2, enabled=True)


@dataclass(frozen=True)
class LossBudget:
    q_total: float
    channels: tuple = field(default_factory=tuple)
    temperature: float | None = None
    omega_m: float | None = None
    tau_n: float | None = None

    def channel(self, name):
        return dict(self.channels).get(name)

    @property
    def q_three_phonon(self):
        return self.channel("three_phonon")

    @property
    def q_he3(self):
        return self.channel("he3")

    @property
    def q_wall(self):
        return self.channel("wall")


def _check_operating_point(T, omega_m):
    if not (math.isfinite(T) and T > 0):
        raise DomainError(f"temperature must be positive, got {T!r}")
    if T > THREE_PHONON_T_MAX:
        raise DomainError(f"three-phonon model is valid below {THREE_PHONON_T_MAX} K, got {T} K")
    if not (math.isfinite(omega_m) and omega_m > 0):
        raise DomainError(f"omega_m must be positive, got {omega_m!r}")


def attenuation_three_phonon(T, omega_m, he, consts=CONSTANTS):
    """Attenuation coefficient alpha in 1/m."""
    _check_operating_point(T, omega_m)
    prefactor = math.pi**3 / 60 * (he.grueneisen_G + 1) ** 2 / (he.rho4 * consts.hbar**3 * he.c4**6)
    return prefactor * (consts.k_B * T) ** 4 * omega_m


def q_three_phonon(T, omega_m, he, consts=CONSTANTS):
    return omega_m / (attenuation_three_phonon(T, omega_m, he, consts) * he.c4)


def q_he3(model, x3, omega_m):
    if not model.enabled:
        raise ValidationError("he3", "channel disabled")
    if not x3 > 0:
        raise ValidationError("x3", "must be > 0 for the impurity channel")
    return model.coefficient / (x3 * omega_m**2)


def q_wall(params):
    return params.q_substrate / params.energy_fraction


def number_state_lifetime(Q, T, consts=CONSTANTS):
    """hbar Q / (k_B T) in seconds."""
    if not (Q > 0 and T > 0):
        raise DomainError("Q and T must be positive")
    return consts.hbar * Q / (consts.k_B * T)


def combine_budget(channels, *, temperature=None, omega_m=None, consts=CONSTANTS):
    """Reciprocal sum over independent channels given as (name, Q) pairs."""
    channels = tuple((str(name), float(q)) for name, q in channels)
    if not channels:
        raise ValidationError("channels", "at least one loss channel is required")
    for name, q in channels:
        if not q > 0:
            raise ValidationError(name, f"quality factor must be > 0, got {q!r}")
    q_total = 1.0 / math.fsum(1.0 / q for _, q in channels)
    tau = number_state_lifetime(q_total, temperature, consts) if temperature else None
    return LossBudget(q_total, channels, temperature, omega_m, tau)


def loss_budget(T, omega_m, he, *, wall=None, he3=None, three_phonon=True, consts=CONSTANTS):
    """Budget at one operating point with the standard channel set.

    ``wall`` / ``he3`` left as None omit those channels.
    """
    channels = []
    if three_phonon:
        channels.append(("three_phonon", q_three_phonon(T, omega_m, he, consts)))
    if he3 is not None and he3.enabled:
        channels.append(("he3", q_he3(he3, he.x3, omega_m)))
    if wall is not None:
        channels.append(("wall", q_wall(wall)))
    return combine_budget(channels, temperature=T, omega_m=omega_m, consts=consts)


def temperature_grid(t_min, t_max, points, log=True):
    if not (0 < t_min <= t_max) or points < 1:
        raise ValidationError("temperature", "need 0 < t_min <= t_max and points >= 1")
    if points == 1:
        return np.array([t_min])
    if log:
        return np.geomspace(t_min, t_max, points)
    return np.linspace(t_min, t_max, points)


def q_vs_temperature(temperatures, omega_m, he, *, wall=None, he3=None, three_phonon=True, consts=CONSTANTS):
    """One LossBudget per temperature, in the given (ascending) order."""
    temperatures = [float(t) for t in temperatures]
    if any(t <= 0 for t in temperatures) or any(b <= a for a, b in zip(temperatures, temperatures[1:])):
        raise ValidationError("temperatures", "must be positive and strictly ascending")
    return [
        loss_budget(t, omega_m, he, wall=wall, he3=he3, three_phonon=three_phonon, consts=consts)
        for t in temperatures
    ]


def curve_to_csv(budgets):
    names = [name for name, _ in budgets[0].channels] if budgets else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["temperature_k", *(f"q_{name}" for name in names), "q_total"])
    for b in budgets:
        writer.writerow([repr(b.temperature), *(repr(q) for _, q in b.channels), repr(b.q_total)])
    return buf.getvalue()
