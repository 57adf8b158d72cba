"""Bessel functions of the first kind, their zeros, and quadrature.

``bessel_j`` uses the ascending series for x <= 2 and Miller's backward
recurrence, normalised with J0 + 2*sum(J_2k) = 1, above that. Both paths
are vectorised over x. Quadrature is composite Gauss-Legendre with global
panel doubling, so results depend only on the inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, QuadratureError, ValidationError

MAX_ORDER = 20
SERIES_CROSSOVER = 2.0
_RESCALE_AT = 1e200
_GL_POINTS = 10
_SCAN_STEP = 1e-2
_BISECT_TOL = 1e-12


def _series(m, x):
    half = 0.5 * x
    term = half**m / math.factorial(m)
    total = term.copy()
    q = -(half * half)
    for k in range(1, 40):
        term = term * q / (k * (k + m))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


_MILLER_BUCKET = 8.0


def _miller(m, x):
    # The start order depends on each x only through its bucket, so a value
    # never changes with the other entries of the array.
    buckets = np.ceil(x / _MILLER_BUCKET)
    if buckets.size > 1 and np.any(buckets != buckets[0]):
        out = np.empty_like(x)
        for b in np.unique(buckets):
            sel = buckets == b
            out[sel] = _miller(m, x[sel])
        return out
    xmax = float(buckets[0]) * _MILLER_BUCKET
    start = int(max(m, xmax) + 30 + 12 * xmax ** (1 / 3))
    start += start % 2
    tox = 2.0 / x
    bjp = np.zeros_like(x)
    bj = np.ones_like(x)
    ans = np.zeros_like(x)
    even_sum = np.zeros_like(x)
    for j in range(start, 0, -1):
        bjm = j * tox * bj - bjp
        bjp, bj = bj, bjm
        big = np.abs(bj) > _RESCALE_AT
        if big.any():
            scale = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            bj = bj * scale
            bjp = bjp * scale
            ans = ans * scale
            even_sum = even_sum * scale
        if j % 2 == 1:
            # bj now holds the unnormalised J_{j-1}, an even order.
            if j > 1:
                even_sum = even_sum + bj
        if j - 1 == m:
            ans = bj.copy()
    norm = bj + 2.0 * even_sum
    return ans / norm


def _bessel_j(m, x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat_x = x.reshape(-1)
    flat = out.reshape(-1)
    small = flat_x <= SERIES_CROSSOVER
    if small.any():
        flat[small] = _series(m, flat_x[small])
    if (~small).any():
        flat[~small] = _miller(m, flat_x[~small])
    return out if out.ndim else out[()]


def _check_order(m, limit=MAX_ORDER):
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise DomainError(f"Bessel order must be a non-negative integer, got {m!r}")
    if m > limit:
        raise DomainError(f"Bessel order {m} above supported maximum {limit}")
    return int(m)


def _check_argument(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise DomainError("Bessel argument must be finite and non-negative")
    return x


def bessel_j(m, x):
    """J_m(x) for integer 0 <= m <= 20 and x >= 0 (scalar or array)."""
    m = _check_order(m)
    return _bessel_j(m, _check_argument(x))


def bessel_jprime(m, x):
    """Derivative J'_m(x), from J'_0 = -J_1 and J'_m = (J_{m-1} - J_{m+1})/2."""
    m = _check_order(m)
    x = _check_argument(x)
    if m == 0:
        return -_bessel_j(1, x)
    return 0.5 * (_bessel_j(m - 1, x) - _bessel_j(m + 1, x))


@dataclass(frozen=True)
class BesselRootTable:
    """Ascending zeros of J_m (``kind="j"``) or J'_m (``kind="jprime"``).

    For ``kind="jprime"`` and m = 0 the trivial zero x = 0 is stored as
    root index 0 and ``includes_zero`` is set.
    """

    order: int
    roots: tuple
    kind: str = "jprime"
    includes_zero: bool = False

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.roots, self.roots[1:])):
            raise ValidationError("roots", "must be strictly ascending")

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, n):
        return self.roots[n]


def _bisect(func, lo, hi):
    flo = float(func(lo))
    if flo == 0.0:
        return lo
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        fmid = float(func(mid))
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_roots(func, count=None, xmax=None):
    """Sign-change scan on a fixed grid from 0 followed by bisection."""
    roots = []
    x0 = 0.0
    chunk = 2000
    while True:
        grid = x0 + _SCAN_STEP * np.arange(1, chunk + 1)
        values = func(grid)
        prev_x, prev_v = x0, (float(func(x0)) if x0 > 0 else None)
        for xi, vi in zip(grid, values):
            xi = float(xi)
            vi = float(vi)
            if xmax is not None and prev_x >= xmax:
                return roots
            if prev_v is not None and prev_x > 0 and (vi == 0.0 or (vi > 0) != (prev_v > 0)):
                root = _bisect(func, prev_x, xi)
                if xmax is not None and root > xmax:
                    return roots
                if not roots or root - roots[-1] > 10 * _BISECT_TOL:
                    roots.append(root)
                if count is not None and len(roots) >= count:
                    return roots
            prev_x, prev_v = xi, vi
        x0 = float(grid[-1])


@lru_cache(maxsize=None)
def bessel_jprime_roots(m, count):
    """First ``count`` zeros of J'_m, with x = 0 as index 0 when m = 0.

    >>> [round(r, 4) for r in bessel_jprime_roots(0, 2).roots]
    [0.0, 3.8317]
    """
    m = _check_order(m)
    if count < 1:
        raise ValidationError("count", "must be >= 1")
    if m == 0:
        rest = _scan_roots(lambda x: bessel_jprime(0, x), count=count - 1) if count > 1 else []
        return BesselRootTable(0, (0.0, *rest), "jprime", includes_zero=True)
    roots = _scan_roots(lambda x: bessel_jprime(m, x), count=count)
    return BesselRootTable(m, tuple(roots), "jprime")


@lru_cache(maxsize=None)
def bessel_j_roots(m, count):
    """First ``count`` positive zeros of J_m (x = 0 is never listed)."""
    m = _check_order(m)
    if count < 1:
        raise ValidationError("count", "must be >= 1")
    roots = _scan_roots(lambda x: bessel_j(m, x), count=count)
    return BesselRootTable(m, tuple(roots), "j")


@lru_cache(maxsize=None)
def jprime_roots_below(m, xmax):
    """All zeros of J'_m in [0, xmax], same indexing convention as the table."""
    m = _check_order(m)
    roots = _scan_roots(lambda x: bessel_jprime(m, x), xmax=xmax)
    if m == 0:
        return (0.0, *roots)
    return tuple(roots)


@dataclass(frozen=True)
class QuadratureSpec:
    """Convergence target and cap for the composite Gauss-Legendre rules.

    ``max_level`` bounds the number of panel doublings; level L uses 2**L
    panels per axis with ten nodes each.
    """

    rtol: float = 1e-9
    max_level: int = 12

    def __post_init__(self):
        if not (0 < self.rtol <= 1e-2):
            raise ValidationError("rtol", "must lie in (0, 1e-2]")
        if int(self.max_level) != self.max_level or self.max_level < 1:
            raise ValidationError("max_level", "must be an integer >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()

# The (r, z) grid is dense, so cap it at 2560 x 2560 nodes (about 50 MB).
MAX_LEVEL_2D = 8


@lru_cache(maxsize=None)
def _composite_rule(a, b, level):
    nodes, weights = np.polynomial.legendre.leggauss(_GL_POINTS)
    panels = 2**level
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _converged(fine, coarse, scale, rtol):
    return abs(fine - coarse) <= rtol * max(abs(fine), scale)


def integrate_1d(f, a, b, spec=DEFAULT_QUADRATURE):
    """Integrate a vectorised ``f`` over [a, b].

    Convergence is declared when successive panel doublings agree to
    ``spec.rtol`` relative to max(|I|, integral of |f|), so integrals that
    cancel to zero still terminate.
    """
    a = float(a)
    b = float(b)
    if not a <= b:
        raise ValidationError("b", "upper limit must be >= lower limit")
    if a == b:
        return 0.0
    previous = None
    for level in range(0, spec.max_level + 1):
        x, w = _composite_rule(a, b, level)
        values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
        if not np.all(np.isfinite(values)):
            raise QuadratureError("integrand not finite", previous, math.inf)
        estimate = float(np.dot(w, values))
        scale = float(np.dot(w, np.abs(values)))
        if previous is not None and _converged(estimate, previous, scale, spec.rtol):
            return estimate
        last, previous = previous, estimate
    raise QuadratureError(
        f"no convergence after {spec.max_level} doublings", estimate, abs(estimate - last)
    )


def integrate_cylinder(g, geom, spec=DEFAULT_QUADRATURE):
    """2*pi * double integral of g(r, z) * r over the cylinder interior.

    ``g`` receives broadcast arrays ``r`` (column) and ``z`` (row). For
    integrands carrying cos(m*theta) with m != 0 the caller supplies the
    azimuthal factor.
    """
    previous = None
    estimate = None
    levels = min(spec.max_level, MAX_LEVEL_2D)
    for level in range(0, levels + 1):
        r, wr = _composite_rule(0.0, geom.radius, level)
        z, wz = _composite_rule(0.0, geom.length, level)
        values = np.broadcast_to(np.asarray(g(r[:, None], z[None, :]), dtype=float), (r.size, z.size))
        if not np.all(np.isfinite(values)):
            raise QuadratureError("integrand not finite", previous, math.inf)
        weights_r = wr * r
        estimate = 2 * math.pi * float(weights_r @ values @ wz)
        scale = 2 * math.pi * float(weights_r @ np.abs(values) @ wz)
        if previous is not None and _converged(estimate, previous, scale, spec.rtol):
            return estimate
        last, previous = previous, estimate
    raise QuadratureError(
        f"no convergence after {levels} doublings per axis", estimate, abs(estimate - last)
    )
