"""Interpolating verdicts, the separation floor and level-set connectivity.

Everything here is a statement about a truncation; reports say so.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .blaschke import BlaschkeProduct, ZeroSequence, evaluate, separation, separation_witness
from .errors import CertificateError, DomainError
from .regions import StripCone, cone_contains, cone_tail_stolz_constant, stolz_contains
from .sequences import (
    FineCertificate,
    admit_hsc,
    certify_fine,
    divergence_hint,
    greedy_fine_subsequence,
    window_upper,
)

DEFAULT_ETAS = (0.5, 0.7, 0.9)
#: a separation that drops below this share of the half-truncation value is read as decay
TREND_FACTOR = 0.75
SCALE_NOTE = "at truncation scale"


@dataclass
class InterpolatingVerdict:
    status: str  # "interpolating", "not_interpolating" or "inconclusive"
    separation: float
    pair: tuple
    stolz_c: float
    stolz_h: float
    notes: list = field(default_factory=list)

    @property
    def interpolating(self) -> Optional[bool]:
        if self.status == "inconclusive":
            return None
        return self.status == "interpolating"

    def __bool__(self):
        return self.status == "interpolating"

    def to_dict(self):
        return {
            "status": self.status,
            "interpolating": self.interpolating,
            "separation": self.separation,
            "pair": list(self.pair),
            "stolz_c": self.stolz_c,
            "stolz_h": self.stolz_h,
            "notes": list(self.notes),
        }


def interpolating_verdict(zs: ZeroSequence, cone: StripCone) -> InterpolatingVerdict:
    """Separation test, valid once the tail sits in a Stolz domain.

    The tail is the set of zeros within the radius returned by
    ``cone_tail_stolz_constant``. A zero separation is a definite failure;
    a separation that keeps shrinking between the first half and the whole
    truncation is reported as not separated at truncation scale.
    """
    big_c, h = cone_tail_stolz_constant(cone)
    notes = []
    dist = np.abs(complex(cone.xi) - zs.zeros)
    tail = zs.zeros[dist < h]
    if tail.size == 0:
        return InterpolatingVerdict("inconclusive", math.nan, (), big_c, h,
                                    ["no zero lies close enough to xi to place the tail in a Stolz domain"])
    in_cone = np.atleast_1d(cone_contains(cone, tail))
    in_stolz = np.atleast_1d(stolz_contains(cone.xi, big_c, tail))
    if not (np.all(in_cone) and np.all(in_stolz)):
        return InterpolatingVerdict("inconclusive", math.nan, (), big_c, h,
                                    ["tail is not contained in a Stolz domain; separation criterion does not apply"])
    sep = separation_witness(zs)
    pair = (sep.i, sep.j)
    if divergence_hint(zs):
        notes.append("sum(1 - |z_n|) looks divergent, so the full sequence may not be a Blaschke sequence")
    if sep.value <= 0.0:
        notes.append(f"repeated zero at positions {sep.i} and {sep.j}")
        return InterpolatingVerdict("not_interpolating", sep.value, pair, big_c, h, notes)
    half = len(zs) // 2
    if half >= 2:
        early = separation(zs.head(half))
        if sep.value < TREND_FACTOR * early:
            notes.append(f"separation decays from {early:.6g} to {sep.value:.6g}: not separated {SCALE_NOTE}")
            return InterpolatingVerdict("not_interpolating", sep.value, pair, big_c, h, notes)
    notes.append(f"separated {SCALE_NOTE}")
    return InterpolatingVerdict("interpolating", sep.value, pair, big_c, h, notes)


def separation_floor(cert: FineCertificate) -> float:
    """(1 - C2)/(3 + C2), the separation every fine sequence has."""
    if not cert.passed or not 0 < cert.c2 < 1:
        raise CertificateError("separation floor needs a passing fine certificate")
    return (1.0 - cert.c2) / (3.0 + cert.c2)


# -- level sets ------------------------------------------------------------


@dataclass
class LevelSetReport:
    eta: float
    grid: int
    component_count: int
    covered_cells: int
    boundary_margin: float
    connectivity: int = 4
    warnings: list = field(default_factory=list)
    labels: Optional[np.ndarray] = field(default=None, repr=False)
    modulus: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self):
        return {
            "eta": self.eta,
            "grid": self.grid,
            "component_count": self.component_count,
            "covered_cells": self.covered_cells,
            "boundary_margin": self.boundary_margin,
            "connectivity": self.connectivity,
            "warnings": list(self.warnings),
        }

    def write_cells_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "modulus", "component_id"])
        if self.labels is None:
            return
        centers = _cell_centers(self.grid)
        rows, cols = np.nonzero(self.labels)
        for r, c in zip(rows.tolist(), cols.tolist()):
            w.writerow([repr(float(centers[c])), repr(float(centers[r])), repr(float(self.modulus[r, c])),
                        int(self.labels[r, c])])


def _cell_centers(grid: int) -> np.ndarray:
    return -1.0 + (np.arange(grid) + 0.5) * (2.0 / grid)


def modulus_grid(b: BlaschkeProduct, grid: int, margin: float):
    """|B| at cell centers of a grid over [-1, 1]^2; NaN outside |z| < 1 - margin."""
    c = _cell_centers(grid)
    z = c[None, :] + 1j * c[:, None]  # row index is y
    keep = np.abs(z) < 1.0 - margin
    mod = np.full(z.shape, np.nan)
    mod[keep] = np.abs(evaluate(b, z[keep]))
    return mod


def level_set_components(b: BlaschkeProduct, eta: float, grid: int = 512, margin: float = 0.02,
                         modulus: Optional[np.ndarray] = None) -> LevelSetReport:
    """Count 4-connected components of ``{|B| < eta}`` on a raster of the disk.

    ``modulus`` may carry a precomputed ``modulus_grid`` for sweeps over eta.
    """
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    if grid < 128:
        raise DomainError("grid must be at least 128")
    if not 0 < margin < 0.5:
        raise DomainError("margin must lie in (0, 0.5)")
    mod = modulus_grid(b, grid, margin) if modulus is None else modulus
    mask = np.nan_to_num(mod, nan=np.inf) < eta
    labels, count = kernels.label_components4(mask)
    covered = int(mask.sum())
    warnings = []
    if covered == 0:
        warnings.append("no covered cells: eta lies below the modulus everywhere on the grid")
    return LevelSetReport(float(eta), int(grid), int(count), covered, float(margin), 4, warnings, labels, mod)


def level_set_sweep(b: BlaschkeProduct, etas=DEFAULT_ETAS, grid: int = 512, margin: float = 0.02) -> list:
    if grid < 128:
        raise DomainError("grid must be at least 128")
    mod = modulus_grid(b, grid, margin)
    return [level_set_components(b, e, grid, margin, modulus=mod) for e in etas]


# -- the full chain --------------------------------------------------------


@dataclass
class FactorVerdict:
    interpolating: Optional[bool]
    separated_inf: float
    separation_floor: float
    one_component_eta: Optional[float]
    notes: list = field(default_factory=list)
    status: str = "pass"  # "pass", "fail" or "inconclusive"
    stage: Optional[str] = None
    epsilon: Optional[float] = None
    admission: Optional[object] = field(default=None, repr=False)
    selected: list = field(default_factory=list)
    certificate: Optional[FineCertificate] = field(default=None, repr=False)
    interpolating_detail: Optional[InterpolatingVerdict] = field(default=None, repr=False)
    level_sets: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def fine_zeros(self) -> Optional[ZeroSequence]:
        return None if self.certificate is None else self.certificate.zeros

    def to_dict(self):
        return {
            "status": self.status,
            "stage": self.stage,
            "interpolating": self.interpolating,
            "separated_inf": self.separated_inf,
            "separation_floor": self.separation_floor,
            "one_component_eta": self.one_component_eta,
            "epsilon": self.epsilon,
            "selected": list(self.selected),
            "admission": None if self.admission is None else self.admission.to_dict(),
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "interpolating_detail": None if self.interpolating_detail is None else self.interpolating_detail.to_dict(),
            "level_sets": [r.to_dict() for r in self.level_sets],
            "notes": list(self.notes),
        }


def default_epsilon(delta: float) -> float:
    return min(max(0.5, delta), 0.9)


def _certify_tail(sub: ZeroSequence, cone: StripCone, epsilon: float, delta: float, notes: list):
    """Certify ``sub``, dropping leading points if only a tail is fine."""
    cert = certify_fine(sub, cone, epsilon, delta)
    k0 = 1
    while not cert.passed and len(sub) - k0 >= 3:
        k0 += 1
        trial = ZeroSequence(sub.zeros[k0 - 1:], sub.meta)
        trial_cert = certify_fine(trial, cone, epsilon, delta)
        if trial_cert.passed:
            notes.append(f"first {k0 - 1} selected points dropped; the rest is fine")
            return trial_cert, k0
    return cert, 1


def theorem_2_9_pipeline(zs: ZeroSequence, cone: StripCone, epsilon: Optional[float] = None,
                         etas=DEFAULT_ETAS, grid: int = 512, margin: float = 0.02) -> FactorVerdict:
    """Select, certify and check the interpolating and one-component factor.

    Stages: admission, greedy selection, fine certification (trimming a
    head if needed), separation against the floor, level-set sweep.
    """
    nan = math.nan
    notes = [f"all verdicts hold {SCALE_NOTE}"]
    if len(zs) < 2:
        return FactorVerdict(None, nan, nan, None, notes + ["truncation too short"], "inconclusive", "admit")
    adm = admit_hsc(zs, cone)
    if not adm.passed:
        failed = [f"{k} (n={adm.witnesses.get(k)})" for k, ok in adm.verdicts.items() if not ok]
        return FactorVerdict(None, nan, nan, None, notes + ["admission failed: " + ", ".join(failed)],
                             "fail", "admit", admission=adm)
    eps = default_epsilon(adm.delta) if epsilon is None else float(epsilon)
    selected = greedy_fine_subsequence(zs, eps)
    if len(selected) < 3:
        return FactorVerdict(None, nan, nan, None, notes + ["truncation too short"], "inconclusive", "select",
                             eps, adm, selected)
    sub = zs.subsequence(selected)
    cert, k0 = _certify_tail(sub, cone, eps, window_upper(eps, adm.delta), notes)
    selected = selected[k0 - 1:]
    base = FactorVerdict(None, nan, nan, None, notes, "fail", "certify", eps, adm, selected, cert)
    if not cert.passed:
        failed = [k for k, ok in cert.verdicts.items() if not ok]
        notes.append("fine certification failed: " + ", ".join(failed))
        return base
    fine = cert.zeros
    floor = separation_floor(cert)
    iv = interpolating_verdict(fine, cone)
    base.interpolating = iv.interpolating
    base.interpolating_detail = iv
    base.separated_inf = iv.separation
    base.separation_floor = floor
    if iv.status == "inconclusive":
        base.status, base.stage = "inconclusive", "interpolating"
        notes.extend(iv.notes)
        return base
    if not iv.interpolating:
        base.stage = "interpolating"
        notes.extend(iv.notes)
        return base
    if iv.separation < floor - 1e-9:
        base.stage = "separation_floor"
        notes.append(f"separation {iv.separation!r} below floor {floor!r}")
        return base
    product = BlaschkeProduct(zeros=fine)
    reports = level_set_sweep(product, etas, grid, margin)
    base.level_sets = reports
    single = [r.eta for r in reports if r.component_count == 1]
    base.one_component_eta = single[0] if single else None
    if not single:
        base.stage = "level_set"
        notes.append("no swept eta gives a single component")
        return base
    base.status, base.stage = "pass", None
    return base
