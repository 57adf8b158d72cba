"""First-sound pressure eigenmodes of a rigid-walled helium cylinder.

A mode (m, n, k) has pressure shape

    f(r, theta, z) = J_m(alpha_mn r / R) cos(m theta) cos(k pi z / L) / N

with alpha_mn the n-th zero of J'_m (alpha_00 = 0) and N chosen so the
peak of |f| is one. Rigid walls make every surface a pressure antinode.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, ValidationError
from .materials import CylinderGeometry
from .numerics import (
    DEFAULT_QUADRATURE,
    MAX_ORDER,
    bessel_j,
    bessel_jprime,
    bessel_jprime_roots,
    integrate_cylinder,
    jprime_roots_below,
)


@dataclass(frozen=True, order=True)
class AcousticModeIndex:
    m: int
    n: int
    k: int

    def __post_init__(self):
        for name in ("m", "n", "k"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise ValidationError(name, f"must be a non-negative integer, got {value!r}")
        if (self.m, self.n, self.k) == (0, 0, 0):
            raise ValidationError("index", "(0, 0, 0) is the static pressure, not a mode")
        if self.n == 0 and self.m != 0:
            raise ValidationError("n", "n = 0 is only valid for m = 0")
        if self.m > MAX_ORDER:
            raise DomainError(f"azimuthal order {self.m} above supported maximum {MAX_ORDER}")

    @classmethod
    def parse(cls, text):
        """Parse ``"m,n,k"``."""
        parts = [p for p in str(text).replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise ValidationError("index", f"expected 'm,n,k', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self):
        return f"{self.m},{self.n},{self.k}"


def radial_eigenvalue(m, n):
    """n-th zero of J'_m, counting x = 0 as n = 0 for m = 0."""
    if m == 0:
        return bessel_jprime_roots(0, n + 1)[n]
    return bessel_jprime_roots(m, n)[n - 1]


def acoustic_frequency(geom, c4, idx):
    """Eigenfrequency in Hz, f = c4/(2 pi) * sqrt((alpha/R)^2 + (k pi/L)^2)."""
    alpha = radial_eigenvalue(idx.m, idx.n)
    kr = alpha / geom.radius
    kz = idx.k * math.pi / geom.length
    return c4 / (2 * math.pi) * math.hypot(kr, kz)


@dataclass(frozen=True)
class AcousticMode:
    """One rigid-wall pressure eigenmode on a given geometry.

    Modes with m >= 1 stand for the degenerate cos/sin pair
    (``degeneracy == 2``); only the cos member is evaluated.
    """

    index: AcousticModeIndex
    geometry: CylinderGeometry
    frequency: float
    alpha: float

    @property
    def omega(self):
        return 2 * math.pi * self.frequency

    @property
    def has_radial_node(self):
        return self.index.n >= 1

    @property
    def degeneracy(self):
        return 2 if self.index.m >= 1 else 1

    @cached_property
    def peak(self):
        # |J_m| on [0, alpha] peaks at the first zero of J'_m (x = 0 for m = 0).
        m = self.index.m
        if m == 0:
            return 1.0
        return abs(float(bessel_j(m, bessel_jprime_roots(m, 1)[0])))

    def radial(self, r):
        """Unit-peak radial factor J_m(alpha r/R)/N."""
        u = np.asarray(r, dtype=float) / self.geometry.radius
        return bessel_j(self.index.m, self.alpha * u) / self.peak

    def axial(self, z):
        return np.cos(self.index.k * math.pi * np.asarray(z, dtype=float) / self.geometry.length)

    def profile(self, r, theta, z):
        """Normalised pressure shape f(r, theta, z)."""
        return self.radial(r) * np.cos(self.index.m * np.asarray(theta, dtype=float)) * self.axial(z)

    def profile_rz(self, r, z):
        """f at theta = 0; the azimuthal factor cos(m theta) is left to the caller."""
        return self.radial(r) * self.axial(z)

    def dprofile_dr(self, r, theta, z):
        u = np.asarray(r, dtype=float) / self.geometry.radius
        slope = self.alpha / self.geometry.radius * bessel_jprime(self.index.m, self.alpha * u) / self.peak
        return slope * np.cos(self.index.m * np.asarray(theta, dtype=float)) * self.axial(z)

    def dprofile_dz(self, r, theta, z):
        kz = self.index.k * math.pi / self.geometry.length
        z = np.asarray(z, dtype=float)
        return (
            self.radial(r)
            * np.cos(self.index.m * np.asarray(theta, dtype=float))
            * (-kz * np.sin(kz * z))
        )

    @cached_property
    def v_eff(self):
        return effective_volume(self, self.geometry)

    @property
    def v_eff_closed_form(self):
        return closed_form_effective_volume(self.index, self.geometry)


def make_mode(geom, c4, idx):
    return AcousticMode(
        index=idx,
        geometry=geom,
        frequency=acoustic_frequency(geom, c4, idx),
        alpha=radial_eigenvalue(idx.m, idx.n),
    )


def azimuthal_weight(m):
    """Integral of cos^2(m theta) over a full turn."""
    return 2 * math.pi if m == 0 else math.pi


def effective_volume(mode, geom, spec=DEFAULT_QUADRATURE):
    """Integral of f^2 over the cavity, by quadrature in (r, z).

    ``mode`` may be an :class:`AcousticMode` or any object with a vectorised
    ``profile_rz(r, z)`` and an optional ``index.m`` (default 0).
    """
    index = getattr(mode, "index", None)
    m = getattr(index, "m", 0)
    rz = integrate_cylinder(lambda r, z: mode.profile_rz(r, z) ** 2, geom, spec)
    return rz / (2 * math.pi) * azimuthal_weight(m)


def closed_form_effective_volume(idx, geom):
    """V_eff from the Bessel product identity, used as an independent check.

    For J'_m(alpha) = 0, int_0^R J_m^2(alpha r/R) r dr = R^2/2 (1 - m^2/alpha^2) J_m(alpha)^2.
    """
    alpha = radial_eigenvalue(idx.m, idx.n)
    if alpha == 0.0:
        radial = geom.radius**2 / 2
        peak = 1.0
    else:
        radial = geom.radius**2 / 2 * (1 - idx.m**2 / alpha**2) * float(bessel_j(idx.m, alpha)) ** 2
        peak = 1.0 if idx.m == 0 else abs(float(bessel_j(idx.m, bessel_jprime_roots(idx.m, 1)[0])))
    axial = geom.length if idx.k == 0 else geom.length / 2
    return azimuthal_weight(idx.m) * radial / peak**2 * axial


def index_box(geom, c4, f_max):
    """Every (m, n, k) that can reach ``f_max``, with its eigenvalue.

    alpha_mn <= 2 pi R f_max / c4 and k <= 2 L f_max / c4 are necessary,
    and j'_m1 > m for m >= 1 bounds the azimuthal order.
    """
    alpha_max = 2 * math.pi * geom.radius * f_max / c4
    k_max = int(math.floor(2 * geom.length * f_max / c4))
    m_max = int(math.floor(alpha_max))
    if m_max > MAX_ORDER:
        raise DomainError(
            f"f_max {f_max} Hz needs azimuthal orders up to {m_max}; supported maximum is {MAX_ORDER}"
        )
    box = []
    for m in range(m_max + 1):
        roots = jprime_roots_below(m, alpha_max)
        for n0, alpha in enumerate(roots):
            n = n0 if m == 0 else n0 + 1
            for k in range(k_max + 1):
                if (m, n, k) != (0, 0, 0):
                    box.append((AcousticModeIndex(m, n, k), alpha))
    return box


def enumerate_modes(geom, c4, f_max):
    """All modes with frequency <= f_max, ascending; ties ordered by (m, n, k)."""
    if not f_max > 0:
        raise ValidationError("f_max", "must be > 0")
    modes = [
        AcousticMode(idx, geom, acoustic_frequency(geom, c4, idx), alpha)
        for idx, alpha in index_box(geom, c4, f_max)
    ]
    modes = [mode for mode in modes if mode.frequency <= f_max]
    modes.sort(key=lambda mode: (mode.frequency, mode.index))
    return modes


def match_frequency(modes, target, window=0.01):
    """Modes within ``window`` relative of ``target``, nearest first."""
    hits = [mode for mode in modes if abs(mode.frequency - target) <= window * target]
    return sorted(hits, key=lambda mode: (abs(mode.frequency - target), mode.index))


MODE_CSV_COLUMNS = ("m", "n", "k", "frequency_hz", "v_eff_m3", "has_radial_node", "degeneracy")


def modes_to_rows(modes):
    return [
        {
            "m": mode.index.m,
            "n": mode.index.n,
            "k": mode.index.k,
            "frequency_hz": mode.frequency,
            "v_eff_m3": mode.v_eff,
            "has_radial_node": mode.has_radial_node,
            "degeneracy": mode.degeneracy,
        }
        for mode in modes
    ]


def modes_to_csv(modes):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=MODE_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in modes_to_rows(modes):
        row = dict(row, frequency_hz=repr(row["frequency_hz"]), v_eff_m3=repr(row["v_eff_m3"]))
        row["has_radial_node"] = str(row["has_radial_node"]).lower()
        writer.writerow(row)
    return buf.getvalue()
