"""Zero sequences in strip cones: generators, admission, fine subsequences.

Indices in every public result are 1-based, matching the way sequences are
written ``z_1, z_2, ...``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .blaschke import ZeroSequence, one_minus_modulus
from .disk import BoundaryPoint, CayleyMap
from .errors import CertificateError, DomainError
from .regions import StripCone, cone_contains, cone_to_strip

#: relative slack for "nonincreasing" comparisons
MONOTONE_SLACK = 1e-14
#: slack on the consecutive-rho window and on empirical ratio constants
WINDOW_SLACK = 1e-12


def consecutive_rho(zs) -> np.ndarray:
    z = zs.zeros if isinstance(zs, ZeroSequence) else np.asarray(zs, dtype=complex)
    return kernels.rho(z[:-1], z[1:]) if z.size > 1 else np.zeros(0)


def boundary_distances(zs: ZeroSequence, xi) -> np.ndarray:
    return np.abs(complex(xi) - zs.zeros)


def halfplane_images(zs: ZeroSequence, xi) -> np.ndarray:
    return CayleyMap(BoundaryPoint.of(xi)).forward(zs.zeros)


def _first_true(mask) -> Optional[int]:
    idx = np.flatnonzero(mask)
    return int(idx[0]) if idx.size else None


# -- generators ------------------------------------------------------------


def generate_halfplane_geometric(cone: StripCone, w0: complex, ratio: float, count: int) -> ZeroSequence:
    """Zeros whose Cayley images march along the strip direction.

    ``phi(z_n) = w0 + (g^n - 1) Re(w0) (1 + i cot(theta))``, so
    ``Re phi(z_n) = Re(w0) g^n`` and every image keeps the intercept of
    ``w0``. For an axis-parallel strip and real ``w0`` this is ``w0 g^n``.
    """
    if not ratio > 1:
        raise DomainError("ratio must exceed 1")
    if count < 0:
        raise DomainError("count must be nonnegative")
    w0 = complex(w0)
    if not w0.real > 0:
        raise DomainError("w0 must lie in the right half-plane")
    strip = cone_to_strip(cone)
    n = np.arange(1, count + 1, dtype=float)
    direction = complex(1.0, strip.slope)
    w = w0 + (ratio**n - 1.0) * w0.real * direction
    inside = strip.contains(w) if count else np.zeros(0, bool)
    bad = _first_true(~inside)
    if bad is not None:
        raise DomainError(f"ray leaves the strip at n={bad + 1}")
    zeros = cone.cayley.inverse(w) if count else np.zeros(0, complex)
    meta = {
        "family": "halfplane",
        "w0": [w0.real, w0.imag],
        "re_w0": w0.real,
        "ratio": float(ratio),
        "xi": [cone.xi.re, cone.xi.im],
        "cone": cone.to_dict(),
        "first_n": 1,
    }
    return ZeroSequence(zeros, meta)


def generate_radial_geometric(xi, q: float, count: int, scale: float = 1.0, first_n: int = 1) -> ZeroSequence:
    """z_n = xi (1 - scale q^n) for n = first_n, first_n + 1, ..."""
    if not 0 < q < 1:
        raise DomainError("q must lie in (0, 1)")
    if not 0 < scale * q**first_n < 1:
        raise DomainError("scale q^first_n must lie in (0, 1)")
    xi = BoundaryPoint.of(xi)
    n = np.arange(first_n, first_n + count, dtype=float)
    zeros = complex(xi) * (1.0 - scale * q**n)
    meta = {"family": "radial", "q": float(q), "scale": float(scale), "first_n": int(first_n), "xi": [xi.re, xi.im]}
    return ZeroSequence(zeros, meta)


def generate_random_hsc(cone: StripCone, count: int, rng, ratio_min: float = 1.2,
                        ratio_max: float = 1.8, x_start: float = 1.0) -> ZeroSequence:
    """Random strip-cone sequence with geometric growth of Re phi.

    Each step multiplies ``Re phi`` by a uniform ratio in
    ``[ratio_min, ratio_max]`` and draws a fresh intercept inside the strip;
    a step that would move the point away from ``xi`` is redrawn.
    """
    if not 1 < ratio_min <= ratio_max:
        raise DomainError("need 1 < ratio_min <= ratio_max")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = np.random.default_rng(rng)
    strip = cone_to_strip(cone)
    lo, hi = strip.c1, strip.c2
    k = strip.slope
    ws = []
    x = x_start * rng.uniform(1.0, 2.0)
    prev_dist = math.inf
    for _ in range(count):
        for _attempt in range(1000):
            v = lo if strip.degenerate else rng.uniform(lo, hi)
            w = complex(x, k * x + v)
            dist = 2.0 / abs(w + 1.0)  # |xi - z|
            if dist <= prev_dist:
                break
            x *= rng.uniform(ratio_min, ratio_max)
        else:  # pragma: no cover - growth of x makes this unreachable
            raise CertificateError("could not keep |xi - z_n| nonincreasing")
        ws.append(w)
        prev_dist = dist
        x *= rng.uniform(ratio_min, ratio_max)
    zeros = cone.cayley.inverse(np.array(ws, dtype=complex)) if ws else np.zeros(0, complex)
    meta = {
        "family": "random_hsc",
        "ratio_min": float(ratio_min),
        "ratio_max": float(ratio_max),
        "xi": [cone.xi.re, cone.xi.im],
        "cone": cone.to_dict(),
        "seed": None if seed is None else int(seed),
    }
    return ZeroSequence(zeros, meta)


# -- admission -------------------------------------------------------------


@dataclass
class HscAdmission:
    cone: StripCone
    delta: float
    verdicts: dict
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self):
        return {
            "cone": self.cone.to_dict(),
            "delta": self.delta,
            "verdicts": dict(self.verdicts),
            "witnesses": dict(self.witnesses),
            "notes": list(self.notes),
            "pass": self.passed,
        }


def _monotone_violation(dist) -> Optional[int]:
    """1-based n with |xi - z_{n+1}| > |xi - z_n|, if any."""
    bad = _first_true(dist[1:] > dist[:-1] * (1.0 + MONOTONE_SLACK))
    return None if bad is None else bad + 1


def divergence_hint(zs: ZeroSequence) -> bool:
    """Heuristic: the second half of the truncation still carries a large share of sum(1 - |z|)."""
    d = one_minus_modulus(zs.zeros)
    half = d.size // 2
    if half == 0:
        return False
    return float(np.sum(d[half:])) >= 0.25 * float(np.sum(d[:half]))


def admit_hsc(zs: ZeroSequence, cone: StripCone, delta: Optional[float] = None) -> HscAdmission:
    """Check the three strip-cone class conditions on a truncation.

    (i) every zero lies in the cone; (ii) ``|xi - z_n|`` is nonincreasing and
    ends below where it started; (iii) consecutive pseudo-hyperbolic
    distances stay below ``delta`` (the measured maximum when not given),
    which must be < 1.
    """
    if len(zs) < 2:
        raise DomainError("admission needs at least two zeros")
    verdicts, witnesses, notes = {}, {}, []
    inside = np.atleast_1d(cone_contains(cone, zs.zeros))
    bad = _first_true(~inside)
    verdicts["cone"] = bad is None
    if bad is not None:
        witnesses["cone"] = bad + 1
    dist = boundary_distances(zs, cone.xi)
    bad = _monotone_violation(dist)
    verdicts["monotone"] = bool(bad is None and dist[-1] < dist[0])
    if bad is not None:
        witnesses["monotone"] = bad
    elif not dist[-1] < dist[0]:
        notes.append("|xi - z_n| does not decrease over the truncation")
    rho = consecutive_rho(zs)
    measured = float(rho.max())
    limit = measured if delta is None else float(delta)
    bad = _first_true(rho > limit)
    verdicts["rho_step"] = measured < 1.0 and bad is None
    if bad is not None:
        witnesses["rho_step"] = bad + 1
    if divergence_hint(zs):
        notes.append("sum(1 - |z_n|) shows no convergence at truncation scale")
    return HscAdmission(cone, measured, verdicts, witnesses, notes)


# -- selection and ratio lemmas -------------------------------------------


def mediant_monotone(a: float, a2: float, b: float, b2: float):
    """((a + b)/(1 + ab), (a' + b')/(1 + a'b')) for 0 <= a <= a' < 1, 0 <= b <= b' < 1."""
    if not (0 <= a <= a2 < 1 and 0 <= b <= b2 < 1):
        raise DomainError("need 0 <= a <= a' < 1 and 0 <= b <= b' < 1")
    return (a + b) / (1 + a * b), (a2 + b2) / (1 + a2 * b2)


def greedy_fine_subsequence(zs: ZeroSequence, epsilon: float) -> list:
    """n_1 = 1 and n_{k+1} = min{i > n_k : rho(z_{n_k}, z_i) >= epsilon}."""
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    z = zs.zeros
    if z.size == 0:
        return []
    picked = [0]
    k = 0
    while k + 1 < z.size:
        far = kernels.rho(np.full(z.size - k - 1, z[k]), z[k + 1:]) >= epsilon
        nxt = _first_true(far)
        if nxt is None:
            break
        k = k + 1 + nxt
        picked.append(k)
    return [i + 1 for i in picked]


def window_upper(epsilon: float, delta: float) -> float:
    return (epsilon + delta) / (1 + epsilon * delta)


def lemma_ab_c1(cap_c: float, tau: float, delta: float) -> float:
    c, t, d2 = cap_c, tau, delta * delta
    a1 = (c - t) / (c + t) + (2 * d2 - 2 * math.sqrt(d2 * d2 + d2 * (c * c - t * t) * (1 - d2))) / (
        (c + t) ** 2 * (1 - d2)
    )
    return (c - t) / (c + t) * a1


def lemma_ab_c2(cap_c: float, tau: float, epsilon: float, eta: float) -> float:
    c, t, e2, k = cap_c, tau, epsilon * epsilon, 2 - eta
    big_a1 = (c + t) / (c - t) + (k * e2 - math.sqrt(k * k * e2 * e2 + 2 * e2 * k * (c * c - t * t) * (1 - e2))) / (
        (c - t) ** 2 * (1 - e2)
    )
    return (c + t) / (c - t) * big_a1


def tau_cap(cap_c: float, epsilon: float) -> float:
    c2, e2 = cap_c * cap_c, epsilon * epsilon
    return math.sqrt(3 * c2 * e2 / (16 * c2 * (1 - e2) + 3 * e2))


def _decompose(z: complex):
    """z = s + i(1 - s) cot(theta)."""
    s = z.real
    return s, z.imag / (1.0 - s)


@dataclass(frozen=True)
class LemmaAbParams:
    alpha: complex
    beta: complex
    epsilon: float
    delta: float
    theta0: float
    cap_c: float
    tau: float
    eta: float
    s1: float
    s2: float
    cot1: float
    cot2: float

    @classmethod
    def from_pair(cls, alpha, beta, epsilon, delta, theta0, tau, eta) -> "LemmaAbParams":
        alpha, beta = complex(alpha), complex(beta)
        s1, k1 = _decompose(alpha)
        s2, k2 = _decompose(beta)
        cap_c = abs(complex(1.0, -1.0 / math.tan(theta0))) if theta0 != math.pi / 2 else 1.0
        return cls(alpha, beta, float(epsilon), float(delta), float(theta0), cap_c, float(tau), float(eta), s1, s2, k1, k2)

    @property
    def w_product(self) -> float:
        w1 = 1 + self.s1 - (1 - self.s1) * self.cot1**2
        w2 = 1 + self.s2 - (1 - self.s2) * self.cot2**2
        return w1 * w2

    def failed_conditions(self) -> list:
        """Names of the violated hypotheses, in order."""
        out = []
        a, b = self.alpha, self.beta
        if not (abs(a) < 1 and abs(b) < 1 and abs(1 - a) < abs(1 - b)):
            out.append("(0) need alpha, beta in the disk with |1 - alpha| < |1 - beta|")
            return out
        r = float(kernels.rho(a, b))
        if not (0 < self.epsilon <= r <= self.delta < 1):
            out.append(f"(1) need 0 < epsilon <= rho(alpha, beta) = {r!r} <= delta < 1")
        if not 0 < self.theta0 < math.pi:
            out.append("(2) theta0 must lie in (0, pi)")
        cot0 = math.cos(self.theta0) / math.sin(self.theta0)
        if abs(self.theta0 - math.pi / 2) <= 4e-16:
            cot0 = 0.0
        cap = tau_cap(self.cap_c, self.epsilon) if 0 < self.epsilon < 1 else 0.0
        if not (max(abs(self.cot1 - cot0), abs(self.cot2 - cot0)) < self.tau < cap):
            out.append(f"(3) need |cot(theta_i) - cot(theta0)| < tau < {cap!r}")
        wp = self.w_product
        if not (3 <= 4 - 2 * self.eta <= wp <= 4):
            out.append(f"(4) need 3 <= 4 - 2 eta <= W1 W2 = {wp!r} <= 4")
        return out


def lemma_ab_bounds(params: LemmaAbParams):
    """Closed-form (C1, C2) bracketing |1 - alpha| / |1 - beta|."""
    failed = params.failed_conditions()
    if failed:
        raise DomainError("; ".join(failed))
    c1 = lemma_ab_c1(params.cap_c, params.tau, params.delta)
    c2 = lemma_ab_c2(params.cap_c, params.tau, params.epsilon, params.eta)
    return c1, c2


# -- fine certification ----------------------------------------------------


@dataclass
class FineCertificate:
    epsilon: float
    delta: float
    start_n: int
    c1: float
    c2: float
    ctilde1: float
    ctilde2: float
    tail_sum_bound: float
    head_sum: float
    verdicts: dict
    witnesses: dict = field(default_factory=dict)
    xi: BoundaryPoint = BoundaryPoint(1.0, 0.0)
    zeros: Optional[ZeroSequence] = field(default=None, repr=False)
    cone: Optional[StripCone] = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    @property
    def sum_bound(self) -> float:
        """Bound on sum_n |xi - z_n| over the whole sequence."""
        return self.head_sum + self.tail_sum_bound

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "start_n": self.start_n,
            "c1": self.c1,
            "c2": self.c2,
            "ctilde1": self.ctilde1,
            "ctilde2": self.ctilde2,
            "tail_sum_bound": self.tail_sum_bound,
            "head_sum": self.head_sum,
            "verdicts": dict(self.verdicts),
            "witnesses": dict(self.witnesses),
            "pass": self.passed,
        }


def certify_fine(zs: ZeroSequence, cone: StripCone, epsilon: float, delta: float) -> FineCertificate:
    """Check the four fine-sequence conditions on a truncation.

    The ratio constants are the extreme ratios the truncation exhibits from
    the first index after which ``|xi - z_{n+1}| / |xi - z_n|`` stays below 1,
    widened by 1e-12.
    """
    if not 0 < epsilon <= delta < 1:
        raise DomainError("need 0 < epsilon <= delta < 1")
    if len(zs) < 2:
        raise DomainError("certification needs at least two zeros")
    verdicts, witnesses = {}, {}
    xi = cone.xi
    inside = np.atleast_1d(cone_contains(cone, zs.zeros))
    bad = _first_true(~inside)
    verdicts["cone"] = bad is None
    if bad is not None:
        witnesses["cone"] = bad + 1

    dist = boundary_distances(zs, xi)
    bad = _monotone_violation(dist)
    verdicts["monotone"] = bad is None
    if bad is not None:
        witnesses["monotone"] = bad

    rho = consecutive_rho(zs)
    outside = (rho < epsilon - WINDOW_SLACK) | (rho > delta + WINDOW_SLACK)
    bad = _first_true(outside)
    verdicts["rho_window"] = bad is None
    if bad is not None:
        witnesses["rho_window"] = bad + 1

    ratios = dist[1:] / dist[:-1]
    not_below = np.flatnonzero(ratios >= 1.0)
    start0 = int(not_below[-1]) + 1 if not_below.size else 0  # 0-based
    if start0 < ratios.size:
        tail = ratios[start0:]
        c1 = float(tail.min()) - WINDOW_SLACK
        c2 = float(tail.max()) + WINDOW_SLACK
        verdicts["ratio"] = 0 < c1 <= c2 < 1
    else:
        c1, c2 = math.nan, math.nan
        verdicts["ratio"] = False
        witnesses["ratio"] = "no index after which the ratios stay below 1"

    re_phi = np.real(halfplane_images(zs, xi))
    growth = re_phi[:-1] / re_phi[1:]
    bad = _first_true(~(re_phi[1:] > re_phi[:-1]))
    ct1 = float(growth.min()) - WINDOW_SLACK
    ct2 = float(growth.max()) + WINDOW_SLACK
    verdicts["re_phi"] = bad is None and 0 < ct1 <= ct2 < 1
    if bad is not None:
        witnesses["re_phi"] = bad + 1

    if verdicts["ratio"]:
        tail_bound = float(dist[start0]) / (1.0 - c2)
    else:
        tail_bound = math.inf
    head = float(np.sum(dist[:start0]))
    return FineCertificate(
        float(epsilon), float(delta), start0 + 1, c1, c2, ct1, ct2, tail_bound, head,
        verdicts, witnesses, xi, zs, cone,
    )


def shift_ratio_floor(zs: ZeroSequence, xi=1.0) -> float:
    """Smallest ``|phi(z_{n+1})| - |phi(z_n)| + 2`` along the truncation.

    Nonnegative whenever ``|xi - z_n|`` is nonincreasing, since
    ``2/|xi - z| - 1 <= |phi(z)| <= 2/|xi - z| + 1``.
    """
    xi = BoundaryPoint.of(xi)
    if len(zs) < 2:
        raise DomainError("need at least two zeros")
    bad = _monotone_violation(boundary_distances(zs, xi))
    if bad is not None:
        raise DomainError(f"|xi - z_n| increases at n={bad}")
    mod = np.abs(halfplane_images(zs, xi))
    slack = float(np.min(mod[1:] - mod[:-1] + 2.0))
    if slack < -1e-12:
        raise CertificateError("shift chain violated", witness=int(np.argmin(mod[1:] - mod[:-1])) + 1)
    return slack
