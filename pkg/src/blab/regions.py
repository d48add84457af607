"""Strip cones in the disk and their images under the Cayley map.

A strip cone ``SC(xi, theta, t1, t2)`` is bounded by two circular arcs
through ``xi``. The Cayley map based at ``xi`` sends it to the part of the
right half-plane between two parallel lines ``y = cot(theta) x + c``; the
intercepts ``c`` are what the rest of the package works with.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .disk import BoundaryPoint, CayleyMap, _to_complex_array
from .errors import DegenerateRegionError, DomainError

#: slack toward inclusion on the two bounding lines
BOUNDARY_SLACK = 1e-12


def cot(theta: float) -> float:
    # snap the float nearest pi/2, whose cosine is 6e-17 rather than 0
    if abs(theta - math.pi / 2) <= 4e-16:
        return 0.0
    return math.cos(theta) / math.sin(theta)


def _parse_t(value) -> float:
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("inf", "+inf", "infinity"):
            return math.inf
        if v in ("-inf", "-infinity"):
            return -math.inf
    return float(value)


@dataclass(frozen=True)
class StripCone:
    xi: BoundaryPoint
    theta: float
    t1: float
    t2: float

    def __post_init__(self):
        if not isinstance(self.xi, BoundaryPoint):
            object.__setattr__(self, "xi", BoundaryPoint.of(self.xi))
        object.__setattr__(self, "t1", _parse_t(self.t1))
        object.__setattr__(self, "t2", _parse_t(self.t2))
        if not (0.0 < self.theta < math.pi):
            raise DomainError(f"theta={self.theta!r} must lie in (0, pi)")
        for name in ("t1", "t2"):
            t = getattr(self, name)
            if t == 0 or math.isnan(t):
                raise DomainError(f"{name} must be a nonzero real or +-inf")

    @property
    def cayley(self) -> CayleyMap:
        return CayleyMap(self.xi)

    def to_dict(self):
        def enc(t):
            return "inf" if t == math.inf else "-inf" if t == -math.inf else t

        return {
            "xi": [self.xi.re, self.xi.im],
            "theta": self.theta,
            "t1": enc(self.t1),
            "t2": enc(self.t2),
        }

    @classmethod
    def from_dict(cls, d) -> "StripCone":
        xi = d["xi"]
        if isinstance(xi, (list, tuple)):
            xi = complex(float(xi[0]), float(xi[1]))
        return cls(BoundaryPoint.of(xi), float(d["theta"]), d["t1"], d["t2"])


@dataclass(frozen=True)
class StripRegion:
    """Strip between ``y = tan(slope_angle) x + c1`` and ``... + c2``, c1 <= c2.

    ``swapped`` records whether the cone listed its arcs in the opposite
    order of the intercepts.
    """

    slope_angle: float
    c1: float
    c2: float
    theta: float
    swapped: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def slope(self) -> float:
        return cot(self.theta)

    @property
    def width(self) -> float:
        return self.c2 - self.c1

    @property
    def degenerate(self) -> bool:
        return self.c1 == self.c2

    def offset(self, w):
        """Intercept of the line of slope ``cot(theta)`` through ``w``."""
        w = _to_complex_array(w)
        return np.imag(w) - self.slope * np.real(w)

    def contains(self, w):
        v = self.offset(w)
        return (np.real(w) > 0) & (v > self.c1 - BOUNDARY_SLACK) & (v < self.c2 + BOUNDARY_SLACK)

    def shifted(self, dx: float = 1.0) -> "StripRegion":
        """Smallest strip holding both this strip and its translate by ``dx``."""
        moved = (self.c1 - self.slope * dx, self.c2 - self.slope * dx)
        lo = min(self.c1, *moved)
        hi = max(self.c2, *moved)
        return StripRegion(self.slope_angle, lo, hi, self.theta, self.swapped, {"shift": dx})

    def to_dict(self):
        return {
            "slope_angle": self.slope_angle,
            "c1": self.c1,
            "c2": self.c2,
            "theta": self.theta,
            "swapped": self.swapped,
        }


def _intercept(theta: float, t: float) -> float:
    if math.isinf(t):
        # diameter-like limit of the arc
        return cot(theta)
    # image of the point 1 - 2 t e^{i theta} diametrically opposite 1 on the arc
    w = complex(math.cos(theta) / t - 1.0, -math.sin(theta) / t)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DegenerateRegionError(f"arc with t={t!r} has no finite image line")
    return w.imag - cot(theta) * w.real


def cone_to_strip(cone: StripCone) -> StripRegion:
    a = _intercept(cone.theta, cone.t1)
    b = _intercept(cone.theta, cone.t2)
    return StripRegion(
        slope_angle=math.pi / 2 - cone.theta,
        c1=min(a, b),
        c2=max(a, b),
        theta=cone.theta,
        swapped=a > b,
        meta={"t_order": [cone.to_dict()["t1"], cone.to_dict()["t2"]]},
    )


def cone_contains(cone: StripCone, z):
    """Strip membership of ``phi_xi(z)``; elementwise on arrays."""
    z = _to_complex_array(z)
    w = cone.cayley.forward(z)
    out = cone_to_strip(cone).contains(w)
    return bool(out) if np.ndim(out) == 0 else out


def stolz_contains(xi, big_c: float, z):
    if big_c < 1:
        raise DomainError("Stolz aperture constant must be >= 1")
    xi = complex(xi)
    z = _to_complex_array(z)
    out = np.abs(1.0 - np.conj(xi) * z) <= big_c * (1.0 - np.abs(z))
    return bool(out) if np.ndim(out) == 0 else out


def cone_tail_stolz_constant(cone: StripCone):
    """Stolz constant ``C`` and radius ``h`` for the part of a cone near ``xi``.

    Every cone point with ``|xi - z| < h`` satisfies
    ``|1 - conj(xi) z| <= C (1 - |z|)``. In half-plane coordinates
    ``w = x + i(cot(theta) x + v)`` one has
    ``|1 - z|/(1 - |z|) <= |w + 1| / x``, which is at most
    ``sqrt((1 + 1/X)^2 + (|cot| + V/X)^2)`` once ``x >= X``, with ``V`` the
    largest intercept magnitude. ``|w + 1| <= (x + 1) M`` for
    ``M = sqrt(1 + (|cot| + V)^2)`` converts the ``x`` threshold into ``h``.
    """
    strip = cone_to_strip(cone)
    k = abs(strip.slope)
    v = max(abs(strip.c1), abs(strip.c2))
    x_min = 4.0 * max(1.0, v)
    big_c = math.hypot(1.0 + 1.0 / x_min, k + v / x_min)
    m = math.sqrt(1.0 + (k + v) ** 2)
    h = 2.0 / ((x_min + 1.0) * m)
    return max(big_c, 1.0), h
