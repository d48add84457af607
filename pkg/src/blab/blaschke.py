"""Truncated Blaschke products.

Construction and evaluation, truncation-error certificates, the sup-norm
distance on the circle, and the separation / Carleson measures of a zero
list. Zeros at the origin are carried by ``order_m`` and never appear in the
zero list, so the normalization ``|a|/a`` is always defined.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from ._search import golden_max
from .disk import BOUNDARY_TOL, DISK_LIMIT, BoundaryPoint, _to_complex_array
from .errors import DomainError


@dataclass(frozen=True, eq=False)
class ZeroSequence:
    """A finite truncation of a zero sequence, in listed order.

    ``meta`` optionally describes the generator the zeros came from; when it
    does, tails beyond the listing can be bounded analytically.
    """

    zeros: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.array(_to_complex_array(self.zeros), dtype=complex).ravel()
        if np.any(arr == 0):
            raise DomainError("zeros at the origin belong in order_m, not the zero list")
        if arr.size and not np.all(np.abs(arr) < DISK_LIMIT):
            bad = int(np.flatnonzero(~(np.abs(arr) < DISK_LIMIT))[0])
            raise DomainError(f"zero #{bad + 1} = {arr[bad]!r} is not inside the disk")
        arr.setflags(write=False)
        object.__setattr__(self, "zeros", arr)
        object.__setattr__(self, "meta", dict(self.meta or {}))

    def __len__(self):
        return self.zeros.size

    def __iter__(self):
        return iter(self.zeros)

    def subsequence(self, indices) -> "ZeroSequence":
        """Keep the zeros at the given 1-based positions."""
        idx = [int(i) for i in indices]
        meta = {"family": "subsequence", "indices": idx, "parent": self.meta, "parent_count": len(self)}
        return ZeroSequence(self.zeros[np.asarray(idx, dtype=int) - 1], meta)

    def head(self, count: int) -> "ZeroSequence":
        return ZeroSequence(self.zeros[:count], self.meta)

    def to_dict(self):
        return {"zeros": [[z.real, z.imag] for z in self.zeros.tolist()], "meta": self.meta}

    @classmethod
    def from_dict(cls, d) -> "ZeroSequence":
        zs = [complex(float(p[0]), float(p[1])) for p in d.get("zeros", [])]
        return cls(np.array(zs, dtype=complex), d.get("meta") or {})


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    order_m: int = 0
    lam: BoundaryPoint = BoundaryPoint(1.0, 0.0)
    zeros: ZeroSequence = field(default_factory=lambda: ZeroSequence(np.zeros(0, complex)))

    def __post_init__(self):
        if int(self.order_m) != self.order_m or self.order_m < 0:
            raise DomainError("order_m must be a nonnegative integer")
        if not isinstance(self.lam, BoundaryPoint):
            object.__setattr__(self, "lam", BoundaryPoint.of(self.lam))
        if not isinstance(self.zeros, ZeroSequence):
            object.__setattr__(self, "zeros", ZeroSequence(self.zeros))

    @classmethod
    def from_zeros(cls, zeros, lam=1.0, order_m=0, meta=None) -> "BlaschkeProduct":
        return cls(order_m, BoundaryPoint.of(lam), ZeroSequence(zeros, meta or {}))

    def __len__(self):
        return len(self.zeros)

    def __call__(self, z):
        return evaluate(self, z)

    def to_dict(self):
        return {
            "m": int(self.order_m),
            "lambda": [self.lam.re, self.lam.im],
            "zeros": self.zeros.to_dict()["zeros"],
            "meta": self.zeros.meta,
        }

    @classmethod
    def from_dict(cls, d) -> "BlaschkeProduct":
        lam = d.get("lambda", [1.0, 0.0])
        return cls(
            int(d.get("m", 0)),
            BoundaryPoint(float(lam[0]), float(lam[1])),
            ZeroSequence.from_dict(d),
        )


def evaluate(b: BlaschkeProduct, z):
    """lambda z^m prod (|a|/a)(a - z)/(1 - conj(a) z), factors in listed order.

    Points with modulus in [1 - 1e-15, 1 + 1e-12] are evaluated as boundary points.
    """
    if isinstance(z, BoundaryPoint):
        return complex(evaluate_on_circle(b, math.atan2(z.im, z.re)))
    pts = _to_complex_array(z)
    val = kernels.blaschke_eval(b.zeros.zeros, pts)
    if b.order_m:
        val = val * pts**b.order_m
    val = complex(b.lam) * val
    # points too close to the circle to be disk points get the unimodular circle form
    mod = np.abs(pts)
    on_circle = (mod >= DISK_LIMIT) & (mod <= 1.0 + BOUNDARY_TOL)
    if np.any(on_circle):
        circ = evaluate_on_circle(b, np.angle(pts[on_circle]) if np.ndim(pts) else np.angle(pts))
        if np.ndim(val) == 0:
            val = circ
        else:
            val[on_circle] = circ
    return complex(val) if np.ndim(val) == 0 else val


def evaluate_on_circle(b: BlaschkeProduct, theta):
    """B(e^{i theta}), using a factor form that is unimodular by construction."""
    th = np.asarray(theta, dtype=float)
    val = kernels.blaschke_eval_circle(b.zeros.zeros, th)
    if b.order_m:
        val = val * (np.cos(b.order_m * th) + 1j * np.sin(b.order_m * th))
    val = complex(b.lam) * val
    return complex(val) if np.ndim(val) == 0 else val


def one_minus_modulus(zeros) -> np.ndarray:
    zeros = np.asarray(zeros, dtype=complex)
    return kernels.one_minus_abs2(zeros) / (1.0 + np.abs(zeros))


# -- tails -----------------------------------------------------------------


def _halfplane_re(z, xi) -> float:
    xi = complex(xi)
    return float(np.real((xi + z) / (xi - z)))


def generator_tail(meta: dict, index: int, listed: Optional[np.ndarray] = None) -> Optional[float]:
    """Upper bound on sum_{n > index} (1 - |z_n|) over the generator's full sequence.

    ``listed`` holds the zeros that were actually materialized; their exact
    contribution is used and only the unlisted part is bounded analytically.
    Returns None when ``meta`` describes no known generator.
    """
    listed = np.zeros(0, complex) if listed is None else np.asarray(listed, dtype=complex)
    count = listed.size
    exact = float(np.sum(one_minus_modulus(listed[index:]))) if index < count else 0.0
    beyond = max(index, count)
    rest = _unlisted_tail(meta, beyond, listed)
    return None if rest is None else exact + rest


def _unlisted_tail(meta, beyond, listed):
    family = (meta or {}).get("family")
    if family == "radial":
        # z_n = xi (1 - scale q^n), n = first_n, first_n + 1, ...
        q, scale, first = meta["q"], meta["scale"], meta.get("first_n", 1)
        return scale * q ** (first + beyond) / (1.0 - q)
    if family == "halfplane":
        # Re phi(z_n) = re_w0 g^n and 1 - |z| <= 4 / Re phi(z)
        g, re0 = meta["ratio"], meta["re_w0"]
        return 4.0 / re0 * g ** (-beyond) / (g - 1.0)
    if family == "random_hsc":
        # Re phi grows by at least ratio_min per step past the listing
        g = meta["ratio_min"]
        if listed.size == 0:
            return None
        last = _halfplane_re(listed[-1], complex(*meta["xi"]))
        return 4.0 / (last * g ** (beyond - listed.size) * (g - 1.0))
    if family == "subsequence":
        parent = meta.get("parent") or {}
        if parent.get("family") not in ("radial", "halfplane"):
            return None
        # past its listing a subsequence only uses the parent's unlisted zeros,
        # and its k-th unlisted zero sits at least k places into them
        skip = max(0, beyond - len(meta["indices"]))
        return _unlisted_tail(parent, meta["parent_count"] + skip, None)
    return None


@dataclass(frozen=True)
class TailBound:
    radius_r: float
    truncation_index: int
    bound: float
    partial: bool = False

    def to_dict(self):
        return {
            "radius_r": self.radius_r,
            "truncation_index": self.truncation_index,
            "bound": self.bound,
            "partial": self.partial,
        }


def tail_bound(b: BlaschkeProduct, r: float, index: int) -> TailBound:
    """Bound on ``sup_{|z| <= r} |B_full(z) - B_index(z)|``.

    Uses ``|1 - b_a(z)| <= 2 (1 - |a|)/(1 - |z|)`` for each dropped factor.
    Without generator metadata only the listed zeros past ``index`` count, and
    the result is flagged partial.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("radius must lie in (0, 1)")
    if index < 0:
        raise DomainError("truncation index must be nonnegative")
    zeros = b.zeros.zeros
    tail = generator_tail(b.zeros.meta, index, zeros)
    partial = tail is None
    if partial:
        tail = float(np.sum(one_minus_modulus(zeros[index:])))
    return TailBound(r, int(index), 2.0 / (1.0 - r) * tail, partial)


def blaschke_sum(zs: ZeroSequence, include_tail: bool = False) -> float:
    """sum (1 - |z_n|) over the listed zeros, plus the generator tail if asked."""
    total = float(np.sum(one_minus_modulus(zs.zeros)))
    if include_tail:
        rest = _unlisted_tail(zs.meta, len(zs), zs.zeros)
        if rest is not None:
            total += rest
    return total


# -- sup norm on the circle ------------------------------------------------

_ADAPT_OFFSETS = np.concatenate(([0.0], np.geomspace(1 / 64, 64, 25), -np.geomspace(1 / 64, 64, 25)))


def _circle_nodes(samples: int, zero_lists) -> np.ndarray:
    base = np.arange(samples) * (2 * math.pi / samples)
    extra = []
    for zeros in zero_lists:
        if len(zeros) == 0:
            continue
        d = one_minus_modulus(zeros)
        psi = np.angle(zeros)
        off = np.clip(np.outer(d, _ADAPT_OFFSETS), -math.pi, math.pi)
        extra.append((psi[:, None] + off).ravel())
    nodes = np.concatenate([base] + extra)
    return np.unique(np.mod(nodes, 2 * math.pi))


def _diff_on_circle(f, g):
    def h(theta):
        return np.abs(evaluate_on_circle(f, theta) - evaluate_on_circle(g, theta))

    return h


def sup_norm_distance(f: BlaschkeProduct, g: BlaschkeProduct, samples: int = 4096,
                      n_refine: int = 8, return_argmax: bool = False):
    """Truncation sup of ``|f - g|`` over the unit circle.

    Samples ``samples`` equispaced angles plus a cluster of angles around the
    argument of every zero (at multiples of ``1 - |a|``, where the factors
    vary fastest), then golden-section refines the largest local maxima.
    By the maximum principle this is the sup over the closed disk.
    """
    if samples < 256:
        raise DomainError("need at least 256 circle samples")
    h = _diff_on_circle(f, g)
    nodes = _circle_nodes(samples, [f.zeros.zeros, g.zeros.zeros])
    vals = h(nodes)
    k = nodes.size
    prev = np.roll(vals, 1)
    nxt = np.roll(vals, -1)
    peaks = np.flatnonzero((vals >= prev) & (vals >= nxt))
    best = int(np.argmax(vals))
    best_val, best_theta = float(vals[best]), float(nodes[best])
    if peaks.size and n_refine > 0:
        top = peaks[np.argsort(vals[peaks])[::-1][:n_refine]]
        lo = nodes[(top - 1) % k]
        hi = nodes[(top + 1) % k]
        lo = np.where(top == 0, lo - 2 * math.pi, lo)
        hi = np.where(top == k - 1, hi + 2 * math.pi, hi)
        xs, fx = golden_max(h, lo, hi)
        j = int(np.argmax(fx))
        if fx[j] > best_val:
            best_val, best_theta = float(fx[j]), float(np.mod(xs[j], 2 * math.pi))
    return (best_val, best_theta) if return_argmax else best_val


def boundary_samples(b: BlaschkeProduct, samples: int = 1024):
    theta = np.arange(samples) * (2 * math.pi / samples)
    return theta, evaluate_on_circle(b, theta)


def write_boundary_csv(b: BlaschkeProduct, fh, samples: int = 1024):
    theta, vals = boundary_samples(b, samples)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["theta", "re", "im", "modulus"])
    for t, v in zip(theta.tolist(), vals.tolist()):
        w.writerow([repr(t), repr(v.real), repr(v.imag), repr(abs(v))])


# -- separation measures ---------------------------------------------------


class SeparationWitness(NamedTuple):
    value: float
    i: int  # 1-based
    j: int


class CarlesonReport(NamedTuple):
    value: float
    argmin: int  # 1-based index attaining the minimum
    count: int  # truncation size


def _need_two(zs: ZeroSequence):
    if len(zs) < 2:
        raise DomainError("need at least two zeros")


def separation_witness(zs: ZeroSequence) -> SeparationWitness:
    _need_two(zs)
    mat = kernels.rho_matrix(zs.zeros)
    n = len(zs)
    iu, ju = np.triu_indices(n, k=1)
    vals = mat[iu, ju]
    k = int(np.argmin(vals))
    return SeparationWitness(float(vals[k]), int(iu[k]) + 1, int(ju[k]) + 1)


def separation(zs: ZeroSequence) -> float:
    """min over pairs of the pseudo-hyperbolic distance (brute force)."""
    return separation_witness(zs).value


def thinness_profile(zs: ZeroSequence) -> np.ndarray:
    """prod_{k != n} rho(z_k, z_n) for every n."""
    _need_two(zs)
    mat = kernels.rho_matrix(zs.zeros)
    np.fill_diagonal(mat, 1.0)
    return np.prod(mat, axis=0)


def carleson_inf_product(zs: ZeroSequence) -> CarlesonReport:
    prof = thinness_profile(zs)
    k = int(np.argmin(prof))
    return CarlesonReport(float(prof[k]), k + 1, len(zs))
