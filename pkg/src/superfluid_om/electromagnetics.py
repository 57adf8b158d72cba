"""Microwave eigenmodes of the dielectric-filled cylindrical cavity.

Frequencies are given for general TE_mnp / TM_mnp indices. Field
intensity is only implemented for the azimuthally symmetric TE_0np
family, whose electric field is purely azimuthal:

    |E|^2 ∝ J_1^2(alpha'_0n r / R) sin^2(p pi z / L).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, UnsupportedModeError, ValidationError
from .materials import CONSTANTS
from .numerics import MAX_ORDER, bessel_j, bessel_j_roots, bessel_jprime_roots

FAMILIES = ("TE", "TM")


@dataclass(frozen=True, order=True)
class EmModeIndex:
    family: str
    m: int
    n: int
    p: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError("family", f"must be TE or TM, got {self.family!r}")
        for name in ("m", "n", "p"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise ValidationError(name, f"must be a non-negative integer, got {value!r}")
        if self.n < 1:
            raise ValidationError("n", "must be >= 1")
        if self.family == "TE" and self.p < 1:
            raise ValidationError("p", "TE modes need p >= 1")

    @classmethod
    def parse(cls, text):
        """Parse ``"TE,0,1,1"`` (also accepts ``"TE011"``)."""
        text = str(text).strip().upper()
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) == 1 and len(text) == 5:
            parts = [text[:2], text[2], text[3], text[4]]
        if len(parts) != 4:
            raise ValidationError("em_index", f"expected 'TE,m,n,p', got {text!r}")
        return cls(parts[0], int(parts[1]), int(parts[2]), int(parts[3]))

    def __str__(self):
        return f"{self.family},{self.m},{self.n},{self.p}"


TE011 = EmModeIndex("TE", 0, 1, 1)


def em_eigenvalue(idx):
    """alpha'_mn (zero of J'_m, excluding 0) for TE; alpha_mn (zero of J_m) for TM."""
    if idx.family == "TE":
        if idx.m == 0:
            return bessel_jprime_roots(0, idx.n + 1)[idx.n]
        return bessel_jprime_roots(idx.m, idx.n)[idx.n - 1]
    return bessel_j_roots(idx.m, idx.n)[idx.n - 1]


def em_frequency(geom, eps_R, idx, consts=CONSTANTS):
    """Resonance in Hz for a uniform dielectric fill of relative permittivity eps_R."""
    chi = em_eigenvalue(idx)
    kz = idx.p * math.pi / geom.length
    return consts.c_light / (2 * math.pi * math.sqrt(eps_R)) * math.hypot(chi / geom.radius, kz)


@dataclass(frozen=True)
class EmMode:
    index: EmModeIndex
    geometry: object
    frequency: float
    eigenvalue: float

    @property
    def omega(self):
        return 2 * math.pi * self.frequency

    @cached_property
    def peak(self):
        # J_1 peaks at the first zero of J'_1.
        return float(bessel_j(1, bessel_jprime_roots(1, 1)[0])) ** 2

    def intensity(self, r, z):
        """Unit-peak |E(r, z)|^2 of the TE_0np field."""
        u = np.asarray(r, dtype=float) / self.geometry.radius
        s = np.sin(self.index.p * math.pi * np.asarray(z, dtype=float) / self.geometry.length)
        return bessel_j(1, self.eigenvalue * u) ** 2 * s**2 / self.peak


def te0np_intensity(geom, idx, eps_R=1.0, consts=CONSTANTS):
    """TE_0np mode carrying its normalised intensity profile."""
    if idx.family != "TE" or idx.m != 0:
        raise UnsupportedModeError(
            f"field profiles are implemented for TE_0np only, not {idx.family}_{idx.m}{idx.n}{idx.p}"
        )
    return EmMode(idx, geom, em_frequency(geom, eps_R, idx, consts), em_eigenvalue(idx))


def enumerate_em_modes(geom, eps_R, f_max, consts=CONSTANTS):
    """TE and TM modes up to ``f_max`` Hz, ascending in frequency."""
    omega_scale = 2 * math.pi * f_max * math.sqrt(eps_R) / consts.c_light
    chi_max = omega_scale * geom.radius
    p_max = int(math.floor(omega_scale * geom.length / math.pi))
    m_max = int(math.floor(chi_max))
    if m_max > MAX_ORDER:
        raise DomainError(f"f_max {f_max} Hz needs azimuthal orders up to {m_max}; supported maximum is {MAX_ORDER}")
    rows = []
    for family in FAMILIES:
        for m in range(m_max + 1):
            n = 1
            while True:
                probe = EmModeIndex(family, m, n, 1 if family == "TE" else 0)
                if em_eigenvalue(probe) > chi_max:
                    break
                for p in range(0 if family == "TM" else 1, p_max + 1):
                    idx = EmModeIndex(family, m, n, p)
                    f = em_frequency(geom, eps_R, idx, consts)
                    if f <= f_max:
                        rows.append((f, idx))
                n += 1
    rows.sort()
    return rows


EM_CSV_COLUMNS = ("family", "m", "n", "p", "frequency_hz")


def em_modes_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EM_CSV_COLUMNS)
    for f, idx in rows:
        writer.writerow([idx.family, idx.m, idx.n, idx.p, repr(f)])
    return buf.getvalue()
