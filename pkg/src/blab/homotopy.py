"""The path B_t from a tail product to the next one, and its continuity.

For zeros ``z_1, ..., z_L`` and a start index ``N`` the n-th zero of
``B_t`` is ``alpha_n(t)``, whose Cayley image moves on the segment from
``phi(z_n)`` to ``phi(z_{n+1})``. On a truncation the factors run over
``n = N, ..., L - 1``, so ``B_0`` is the product over ``z_N .. z_{L-1}`` and
``B_1`` the product over ``z_{N+1} .. z_L``; the dropped factor is what the
tail bound accounts for.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from ._search import golden_max
from .blaschke import BlaschkeProduct, ZeroSequence, evaluate, sup_norm_distance
from .disk import BoundaryPoint, CayleyMap
from .errors import CertificateError, DomainError
from .regions import StripRegion
from .sequences import FineCertificate, WINDOW_SLACK

HALF_PI = math.pi / 2
K2_RULE = "K2 is the larger of its two case expressions (small and large |y|)"


@dataclass(frozen=True, eq=False)
class HomotopyPath:
    base: BlaschkeProduct
    start_n: int
    xi: BoundaryPoint = BoundaryPoint(1.0, 0.0)

    def __post_init__(self):
        if not isinstance(self.xi, BoundaryPoint):
            object.__setattr__(self, "xi", BoundaryPoint.of(self.xi))
        if not 1 <= self.start_n < len(self.base):
            raise DomainError(f"start_n must lie in [1, {len(self.base) - 1}]")

    @property
    def zeros(self) -> np.ndarray:
        return self.base.zeros.zeros

    @property
    def last_n(self) -> int:
        """Largest n carrying a factor of B_t."""
        return len(self.base) - 1

    @property
    def count(self) -> int:
        return self.last_n - self.start_n + 1

    @property
    def cayley(self) -> CayleyMap:
        return CayleyMap(self.xi)

    def images(self) -> np.ndarray:
        """phi(z_n) for all listed zeros."""
        return self.cayley.forward(self.zeros)


def _check_t(t):
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")


def alphas(path: HomotopyPath, t: float) -> np.ndarray:
    """alpha_n(t) for n = start_n .. last_n."""
    _check_t(t)
    lo, hi = path.start_n - 1, path.last_n
    z = path.zeros
    if t == 0.0:
        return z[lo:hi].copy()
    if t == 1.0:
        return z[lo + 1:hi + 1].copy()
    w = path.images()
    return path.cayley.inverse((1.0 - t) * w[lo:hi] + t * w[lo + 1:hi + 1])


def alpha(path: HomotopyPath, n: int, t: float) -> complex:
    if not path.start_n <= n <= path.last_n:
        raise DomainError(f"n must lie in [{path.start_n}, {path.last_n}]")
    return complex(alphas(path, t)[n - path.start_n])


def path_product(path: HomotopyPath, t: float) -> BlaschkeProduct:
    return BlaschkeProduct(zeros=ZeroSequence(alphas(path, t)))


def tail_product(path: HomotopyPath, first: int) -> BlaschkeProduct:
    """Product over ``path.count`` consecutive zeros starting at ``first``."""
    lo = first - 1
    if lo < 0 or lo + path.count > len(path.base):
        raise DomainError("tail runs past the truncation")
    return BlaschkeProduct(zeros=ZeroSequence(path.zeros[lo:lo + path.count]))


# -- Nestoridis bound ------------------------------------------------------


@dataclass
class NestoridisBreakdown:
    term_arg_ratio: float
    term_one_minus: float
    term_iy: float
    y_star: float
    total: float
    max_summand: float = 0.0

    def to_dict(self):
        return {
            "term_arg_ratio": self.term_arg_ratio,
            "term_one_minus": self.term_one_minus,
            "term_iy": self.term_iy,
            "y_star": self.y_star,
            "total": self.total,
            "max_summand": self.max_summand,
        }


@dataclass(frozen=True)
class YSearch:
    """Scan of y: 0 and +-geomspace(min|phi|/low_div, high_mult max|phi|), then refinement."""

    per_decade: int = 48
    low_div: float = 100.0
    high_mult: float = 10.0
    n_refine: int = 4


def _positive_at_zero(b: BlaschkeProduct, name: str):
    v = evaluate(b, 0.0)
    if not (v.real > 0 and abs(v.imag) <= 1e-12 * max(1.0, abs(v))):
        raise DomainError(f"{name}(0) = {v!r} must be real and positive")


def _y_grid(mags: np.ndarray, cfg: YSearch) -> np.ndarray:
    lo = float(mags.min()) / cfg.low_div
    hi = float(mags.max()) * cfg.high_mult
    num = max(16, int(math.ceil(cfg.per_decade * math.log10(hi / lo))) + 1)
    pos = np.geomspace(lo, hi, num)
    return np.concatenate((-pos[::-1], [0.0], pos))


def nestoridis_bound(left: BlaschkeProduct, right: BlaschkeProduct, y_search: Optional[YSearch] = None,
                     xi=1.0) -> NestoridisBreakdown:
    """Three-sum bound on ``||left - right||`` for zero lists matched in order.

    With ``xi`` other than 1 both products are first rotated so that ``xi``
    goes to 1; sup norms do not change under rotation.
    """
    cfg = y_search or YSearch()
    if len(left) != len(right):
        raise DomainError("products must have the same number of zeros")
    _positive_at_zero(left, "left")
    _positive_at_zero(right, "right")
    if left.order_m != right.order_m:
        raise DomainError("products must have the same order at the origin")
    rot = np.conj(complex(BoundaryPoint.of(xi)))
    a = rot * left.zeros.zeros
    b = rot * right.zeros.zeros
    if a.size == 0:
        return NestoridisBreakdown(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    zero = np.zeros(1)
    s1, m1 = kernels.arg_sums(a, b, zero)
    s2, m2 = kernels.arg_sums(1.0 - a, 1.0 - b, zero)
    wa = (1.0 + a) / (1.0 - a)
    wb = (1.0 + b) / (1.0 - b)
    ys = _y_grid(np.abs(np.concatenate((wa, wb))), cfg)
    sums, maxes = kernels.arg_sums(wa, wb, ys)
    best = int(np.argmax(sums))
    y_star, s3 = float(ys[best]), float(sums[best])
    max_summand = max(float(m1[0]), float(m2[0]), float(maxes.max()))
    if cfg.n_refine:
        inner = np.arange(1, ys.size - 1)
        peaks = inner[(sums[inner] >= sums[inner - 1]) & (sums[inner] >= sums[inner + 1])]
        top = peaks[np.argsort(sums[peaks])[::-1][:cfg.n_refine]]
        if top.size:

            def f(y):
                return kernels.arg_sums(wa, wb, y)[0]

            yr, fr = golden_max(f, ys[top - 1], ys[top + 1])
            j = int(np.argmax(fr))
            if fr[j] > s3:
                y_star, s3 = float(yr[j]), float(fr[j])
                max_summand = max(max_summand, float(kernels.arg_sums(wa, wb, yr[j:j + 1])[1][0]))
    if max_summand >= HALF_PI:
        raise CertificateError("an argument summand reaches pi/2", witness=max_summand)
    t1, t2, t3 = float(s1[0]), 2.0 * float(s2[0]), 2.0 * s3
    return NestoridisBreakdown(t1, t2, t3, y_star, t1 + t2 + t3, max_summand)


# -- the constants ---------------------------------------------------------


def _sum_from(cert: FineCertificate, k: int) -> float:
    """Bound on sum_{n >= k} |xi - z_n| from the certificate."""
    dist = np.abs(complex(cert.xi) - cert.zeros.zeros)
    if k >= cert.start_n:
        return float(dist[k - 1]) / (1.0 - cert.c2) if k <= dist.size else 0.0
    return float(np.sum(dist[k - 1:cert.start_n - 1])) + cert.tail_sum_bound


def _need_pass(cert: FineCertificate):
    if not cert.passed:
        raise CertificateError("constants need a passing fine certificate")


T_SAMPLES = 32


def k1_constant(path: HomotopyPath, cert: FineCertificate, r: float, big_r1: float) -> float:
    """R1^2 pi / (r^2 C1) times the certified bound on sum |xi - z_n|.

    ``r`` and ``big_r1`` are checked on 32 values of t per factor:
    ``|alpha_n(t)| >= r`` and ``|phi(alpha_n(t)) + 1| >= |phi(z_n) + 1| / R1``.
    """
    _need_pass(cert)
    if not 0 < r < 1:
        raise DomainError("r must lie in (0, 1)")
    if big_r1 < 1:
        raise DomainError("R1 must be at least 1")
    if path.start_n < cert.start_n:
        raise CertificateError("path starts before the ratio bounds hold", witness=path.start_n)
    w = path.images()
    lo, hi = path.start_n - 1, path.last_n
    floor = np.abs(w[lo:hi] + 1.0) / big_r1
    for t in np.linspace(0.0, 1.0, T_SAMPLES):
        a = alphas(path, float(t))
        bad = np.flatnonzero(np.abs(a) < r)
        if bad.size:
            raise CertificateError("|alpha_n(t)| < r", witness=(int(bad[0]) + path.start_n, float(t)))
        wa = (1.0 - t) * w[lo:hi] + t * w[lo + 1:hi + 1]
        bad = np.flatnonzero(np.abs(wa + 1.0) < floor * (1.0 - 1e-12))
        if bad.size:
            raise CertificateError("R1 too small", witness=(int(bad[0]) + path.start_n, float(t)))
    return big_r1**2 * math.pi / (r * r * cert.c1) * cert.sum_bound


def auto_r1(path: HomotopyPath) -> float:
    """Smallest R1 passing the k1 sample check, nudged up by 1e-9 relative."""
    w = path.images()
    lo, hi = path.start_n - 1, path.last_n
    base = np.abs(w[lo:hi] + 1.0)
    worst = 1.0
    for t in np.linspace(0.0, 1.0, T_SAMPLES):
        wa = (1.0 - t) * w[lo:hi] + t * w[lo + 1:hi + 1]
        worst = max(worst, float(np.max(base / np.abs(wa + 1.0))))
    return worst * (1.0 + 1e-9)


@dataclass
class K2Detail:
    value: float
    branch_small_y: float
    branch_large_y: float
    ctilde1: float
    ctilde2: float
    width: float
    sum_bound: float
    eps_geom: float
    from_n: int

    def to_dict(self):
        return dict(self.__dict__)


def _check_angles(w: np.ndarray, theta: float, eps_geom: float, from_n: int):
    """(1 - eps) sin(theta) <= sin(angle to the imaginary axis) <= (1 + eps) sin(theta)."""
    d = w[from_n:] - w[from_n - 1:-1]
    s = np.abs(d.real) / np.abs(d)
    st = math.sin(theta)
    bad = np.flatnonzero((s < (1 - eps_geom) * st) | (s > (1 + eps_geom) * st))
    if bad.size:
        raise CertificateError("segment direction outside the eps_geom window",
                               witness=int(bad[0]) + from_n)


def _k2_formula(ct1, ct2, width, theta, eps, total) -> tuple:
    s = math.sin(theta)
    b1 = math.pi * (1 + eps) * (1 - ct1) * width / (ct1 * (1 - eps) ** 2 * s) * total
    b2 = 2 * math.pi * (1 + eps) / ((1 - eps) * ct1 * s * s) + math.pi * (1 + eps) * (1 - ct1) / (
        ct1 * (1 - eps) * (1 - ct2)
    )
    return max(b1, b2), b1, b2


def k2_detail(cert: FineCertificate, strip: StripRegion, eps_geom: float = 0.2,
              from_n: Optional[int] = None) -> K2Detail:
    _need_pass(cert)
    if not 0 < eps_geom < 1:
        raise DomainError("eps_geom must lie in (0, 1)")
    from_n = cert.start_n if from_n is None else int(from_n)
    w = CayleyMap(cert.xi).forward(cert.zeros.zeros)
    _check_angles(w, strip.theta, eps_geom, from_n)
    total = _sum_from(cert, from_n)
    val, b1, b2 = _k2_formula(cert.ctilde1, cert.ctilde2, strip.width, strip.theta, eps_geom, total)
    return K2Detail(val, b1, b2, cert.ctilde1, cert.ctilde2, strip.width, total, eps_geom, from_n)


def k2_constant(cert: FineCertificate, strip: StripRegion, eps_geom: float = 0.2,
                from_n: Optional[int] = None) -> float:
    """Bound on sup_y sum_n |arg((phi(alpha_n(t)) - iy)/(phi(alpha_n(t + dt)) - iy))| / dt."""
    return k2_detail(cert, strip, eps_geom, from_n).value


def k3_detail(path: HomotopyPath, cert: FineCertificate, strip: StripRegion, eps_geom: float = 0.2,
              from_n: Optional[int] = None) -> K2Detail:
    """The K2 bound for the images shifted by +1 inside the widened strip."""
    _need_pass(cert)
    if not 0 < eps_geom < 1:
        raise DomainError("eps_geom must lie in (0, 1)")
    from_n = path.start_n if from_n is None else int(from_n)
    shifted = path.images() + 1.0
    _check_angles(shifted, strip.theta, eps_geom, from_n)
    re = shifted.real
    if not np.all(re[1:] > re[:-1]):
        raise CertificateError("shifted real parts are not increasing")
    ratios = re[:-1] / re[1:]
    d1 = float(ratios.min()) - WINDOW_SLACK
    d2 = float(ratios.max()) + WINDOW_SLACK
    wide = strip.shifted(1.0)
    # |1 - zhat| = 2/|phi(z) + 2| <= |1 - z|, so the original sum bound carries over
    total = _sum_from(cert, from_n)
    val, b1, b2 = _k2_formula(d1, d2, wide.width, strip.theta, eps_geom, total)
    return K2Detail(val, b1, b2, d1, d2, wide.width, total, eps_geom, from_n)


def k3_constant(path: HomotopyPath, cert: FineCertificate, strip: StripRegion, eps_geom: float = 0.2,
                from_n: Optional[int] = None) -> float:
    return k3_detail(path, cert, strip, eps_geom, from_n).value


# -- continuity ------------------------------------------------------------


def step_terms(path: HomotopyPath, t: float, dt: float, y_search: Optional[YSearch] = None) -> NestoridisBreakdown:
    """Nestoridis breakdown for the step from B_t to B_{t+dt}."""
    return nestoridis_bound(path_product(path, t), path_product(path, t + dt), y_search, path.xi)


@dataclass
class ContinuityCertificate:
    k1: float
    k2: float
    k3: float
    lipschitz: float
    dt_grid: list
    measured_increments: list
    passed: bool
    rows: list = field(default_factory=list, repr=False)
    slope: float = math.nan
    k2_detail: Optional[K2Detail] = field(default=None, repr=False)
    k3_detail: Optional[K2Detail] = field(default=None, repr=False)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "k1": self.k1,
            "k2": self.k2,
            "k3": self.k3,
            "lipschitz": self.lipschitz,
            "dt_grid": list(self.dt_grid),
            "max_measured_per_dt": list(self.measured_increments),
            "slope": self.slope,
            "pass": self.passed,
            "k2_detail": None if self.k2_detail is None else self.k2_detail.to_dict(),
            "k3_detail": None if self.k3_detail is None else self.k3_detail.to_dict(),
            "notes": list(self.notes),
        }

    def write_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "dt", "measured", "bound"])
        for t, dt, measured, bound, _nest in self.rows:
            w.writerow([repr(t), repr(dt), repr(measured), repr(bound)])


def continuity_certificate(path: HomotopyPath, cert: FineCertificate, strip: StripRegion,
                           dt_list=(0.1, 0.01, 0.001), samples: int = 4096, r: float = 0.5,
                           big_r1: float = 1.0, eps_geom: float = 0.2,
                           y_search: Optional[YSearch] = None) -> ContinuityCertificate:
    """Measure ||B_t - B_{t+dt}|| on t-grids and compare with the bounds.

    Each step must satisfy ``measured <= min(L dt, nestoridis) + 1e-8`` where
    ``L = K1 + 2 K3 + 2 K2``.
    """
    dts = [float(d) for d in dt_list]
    if not dts or any(not 0 < d <= 0.1 for d in dts):
        raise DomainError("every dt must lie in (0, 0.1]")
    k1 = k1_constant(path, cert, r, big_r1)
    start = max(path.start_n, cert.start_n)
    d2 = k2_detail(cert, strip, eps_geom, start)
    d3 = k3_detail(path, cert, strip, eps_geom, start)
    lip = k1 + 2.0 * d3.value + 2.0 * d2.value
    notes = [K2_RULE, "sup norms are truncation sups on the unit circle"]
    if start > path.start_n:
        notes.append(f"K2 and K3 verified from n={start}; earlier factors are not covered")
    rows, per_dt = [], []
    ok = True
    for dt in dts:
        steps = int(round(1.0 / dt))
        worst = 0.0
        for k in range(steps):
            t = k * dt
            t2 = min(1.0, (k + 1) * dt)
            left, right = path_product(path, t), path_product(path, t2)
            measured = sup_norm_distance(left, right, samples)
            nest = nestoridis_bound(left, right, y_search, path.xi).total
            bound = lip * (t2 - t)
            rows.append((t, dt, measured, bound, nest))
            worst = max(worst, measured)
            if measured > min(bound, nest) + 1e-8:
                ok = False
        per_dt.append(worst)
    x = np.array([r_[1] for r_ in rows])
    y = np.array([r_[2] for r_ in rows])
    slope = float(np.dot(x, y) / np.dot(x, x))
    return ContinuityCertificate(k1, d2.value, d3.value, lip, dts, per_dt, ok, rows, slope, d2, d3, notes)
