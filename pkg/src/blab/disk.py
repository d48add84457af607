"""Geometry of the open unit disk.

Pseudo-hyperbolic distance, the Cayley map onto the right half-plane based at
a boundary point, disk automorphisms and the principal argument.

Functions accept plain Python/numpy complex values as well as ``DiskPoint``
and ``BoundaryPoint``; the point classes are where validation happens.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _dd, kernels
from .errors import DomainError

#: points with modulus at or above this are refused
DISK_LIMIT = 1.0 - 1e-15
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"non-finite disk point ({self.re}, {self.im})")
        if math.hypot(self.re, self.im) >= DISK_LIMIT:
            raise DomainError(
                f"|z| = {math.hypot(self.re, self.im)!r} is not strictly inside the disk"
            )

    @classmethod
    def of(cls, z) -> "DiskPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.re, self.im)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the unit circle, renormalized to exact unit modulus."""

    re: float
    im: float

    def __post_init__(self):
        r = math.hypot(self.re, self.im)
        if not math.isfinite(r) or abs(r * r - 1.0) > BOUNDARY_TOL:
            raise DomainError(f"({self.re}, {self.im}) is not on the unit circle")
        object.__setattr__(self, "re", self.re / r)
        object.__setattr__(self, "im", self.im / r)

    @classmethod
    def of(cls, z) -> "BoundaryPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @classmethod
    def from_angle(cls, angle: float) -> "BoundaryPoint":
        return cls(math.cos(angle), math.sin(angle))

    def __complex__(self):
        return complex(self.re, self.im)


def as_disk_array(z) -> np.ndarray:
    """Complex array of points, rejecting anything not strictly inside the disk."""
    arr = np.asarray(_to_complex_array(z))
    if arr.size and not np.all(np.abs(arr) < DISK_LIMIT):
        bad = np.flatnonzero(~(np.abs(arr.ravel()) < DISK_LIMIT))[0]
        raise DomainError(f"point {arr.ravel()[bad]!r} is not strictly inside the disk")
    return arr


def _to_complex_array(z):
    if isinstance(z, (DiskPoint, BoundaryPoint)):
        return complex(z)
    if isinstance(z, (list, tuple)):
        return np.array([complex(v) for v in z], dtype=complex)
    return np.asarray(z, dtype=complex)


def pseudo_hyperbolic_distance(z, w):
    """|z - w| / |1 - conj(z) w|.

    Evaluated as ``|z - w| / |(1 - |z|^2) + conj(z)(z - w)|`` which keeps full
    relative accuracy when both points crowd the boundary. Works elementwise
    on arrays; returns a float for scalar input.
    """
    out = kernels.rho(as_disk_array(z), as_disk_array(w))
    return float(out) if np.ndim(out) == 0 else out


rho = pseudo_hyperbolic_distance


def automorphism(a, z):
    """The involution z -> (a - z)/(1 - conj(a) z) swapping a and 0.

    Numerator and denominator are formed in compensated arithmetic and the
    quotient gets one residual correction, so the image is accurate to about
    an ulp even where it crowds against the circle. ``a`` may be an array
    broadcasting against ``z``.
    """
    a, z = np.broadcast_arrays(np.asarray(_to_complex_array(a), dtype=complex), _to_complex_array(z))
    ar, ai = a.real.copy(), a.imag.copy()
    zr, zi = z.real.copy(), z.imag.copy()
    nr, nr_lo = _dd.sum2([ar, -zr])
    ni, ni_lo = _dd.sum2([ai, -zi])
    # 1 - conj(a) z = (1 - ar zr - ai zi) + i (ai zr - ar zi)
    dr, dr_lo = _dd.sum2([np.ones(z.shape)] + _dd.neg(_dd.products(ar, zr)) + _dd.neg(_dd.products(ai, zi)))
    di, di_lo = _dd.sum2(_dd.products(ai, zr) + _dd.neg(_dd.products(ar, zi)))
    den = dr + 1j * di
    q = (nr + 1j * ni) / den
    qr, qi = q.real, q.imag
    # residual n - q d, then q += residual / d
    rr = _dd.sum2([nr, nr_lo] + _dd.neg(_dd.products(qr, dr)) + _dd.products(qi, di) + [-qr * dr_lo, qi * di_lo])
    ri = _dd.sum2([ni, ni_lo] + _dd.neg(_dd.products(qr, di)) + _dd.neg(_dd.products(qi, dr)) + [-qr * di_lo, -qi * dr_lo])
    return q + (rr[0] + 1j * ri[0]) / den


@dataclass(frozen=True)
class CayleyMap:
    """phi(z) = (xi + z)/(xi - z), the disk onto the right half-plane."""

    base: BoundaryPoint = BoundaryPoint(1.0, 0.0)

    @property
    def xi(self) -> complex:
        return complex(self.base)

    def forward(self, z):
        xi = self.xi
        z = as_disk_array(z)
        out = (xi + z) / (xi - z)
        return complex(out) if np.ndim(out) == 0 else out

    def inverse(self, w):
        w = _to_complex_array(w)
        if np.any(~(np.real(w) > 0)):
            raise DomainError("Cayley inverse needs Re w > 0")
        # 1 - 2/(w + 1) keeps the distance to xi accurate for large |w|
        out = self.xi * (1.0 - 2.0 / (w + 1.0))
        return complex(out) if np.ndim(out) == 0 else out


def cayley_forward(cmap: CayleyMap, z):
    return cmap.forward(z)


def cayley_inverse(cmap: CayleyMap, w):
    return cmap.inverse(w)


def principal_arg(z) -> float:
    """Argument in (-pi, pi]; raises on zero."""
    z = complex(z)
    if z == 0:
        raise DomainError("argument of zero is undefined")
    a = cmath.phase(z)
    # phase(-1 - 0j) is -pi; fold onto the closed end of the range
    return math.pi if a == -math.pi else a
