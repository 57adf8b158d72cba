"""Physical constants, material property sets and cavity geometry.

All quantities are SI. Defaults describe the niobium cell with its
superfluid fill at saturated vapour pressure; any field except the
fundamental constants can be overridden.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from scipy import constants as _codata

from .errors import ValidationError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _codata.hbar
    k_B: float = _codata.k
    c_light: float = _codata.c


CONSTANTS = PhysicalConstants()


def _require(cond, name, message):
    if not cond:
        raise ValidationError(name, message)


def _finite(obj):
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f.name, f"expected a number, got {value!r}")
        _require(math.isfinite(value), f.name, "must be finite")


class _PropertySet:
    """Mixin giving dict round-trips and validated overrides."""

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ValidationError(key, f"unknown field for {cls.__name__}")
        return cls(**data)

    def with_overrides(self, **overrides):
        known = {f.name for f in fields(self)}
        for key in overrides:
            if key not in known:
                raise ValidationError(key, f"unknown field for {type(self).__name__}")
        return replace(self, **overrides)


@dataclass(frozen=True)
class HeliumProperties(_PropertySet):
    """Liquid ⁴He below 0.5 K.

    ``eps_loss`` is an upper bound on the imaginary permittivity and ``x3``
    the ³He number concentration of the fill.
    """

    rho4: float = 145.0
    c4: float = 238.0
    kappa_He: float = 1.2e-7
    eps_R: float = 1.057
    grueneisen_G: float = 2.84
    eps_loss: float = 1e-10
    x3: float = 1e-6

    def __post_init__(self):
        _finite(self)
        _require(self.rho4 > 0, "rho4", "must be > 0")
        _require(self.c4 > 0, "c4", "must be > 0")
        _require(self.kappa_He > 0, "kappa_He", "must be > 0")
        _require(self.eps_R > 1, "eps_R", "must be > 1")
        _require(0 <= self.x3 <= 1, "x3", "must lie in [0, 1]")
        _require(self.eps_loss >= 0, "eps_loss", "must be >= 0")


@dataclass(frozen=True)
class NiobiumProperties(_PropertySet):
    c_Nb: float = 3480.0
    q_mech: float = 4e7

    def __post_init__(self):
        _finite(self)
        _require(self.c_Nb > 0, "c_Nb", "must be > 0")
        _require(self.q_mech > 0, "q_mech", "must be > 0")


@dataclass(frozen=True)
class CylinderGeometry(_PropertySet):
    """Interior of a right circular cylinder, in metres."""

    radius: float = 0.0178
    length: float = 0.0395

    def __post_init__(self):
        _finite(self)
        _require(self.radius > 0, "radius", "must be > 0")
        _require(self.length > 0, "length", "must be > 0")

    def scaled(self, factor):
        return CylinderGeometry(self.radius * factor, self.length * factor)


def with_overrides(base, overrides=None):
    """Return a copy of ``base`` with ``overrides`` applied and revalidated.

    >>> with_overrides(HeliumProperties(), {"c4": 357.0}).c4
    357.0
    """
    return base.with_overrides(**(overrides or {}))


def cavity_volume(geom):
    return math.pi * geom.radius**2 * geom.length


def helium_mass(geom, he):
    return he.rho4 * cavity_volume(geom)
