"""Truncated Blaschke products on strip-cone zero sequences.

Disk geometry, strip cones, fine-subsequence selection, interpolating and
level-set checks, and continuity certificates for the homotopy between a
Blaschke product and its shift.
"""
from .disk import (
    BoundaryPoint,
    CayleyMap,
    DiskPoint,
    automorphism,
    cayley_forward,
    cayley_inverse,
    principal_arg,
    pseudo_hyperbolic_distance,
)
from .errors import BlabError, CertificateError, DegenerateRegionError, DomainError
from .kernels import BACKEND
from .regions import (
    StripCone,
    StripRegion,
    cone_contains,
    cone_tail_stolz_constant,
    cone_to_strip,
    stolz_contains,
)
from .blaschke import (
    BlaschkeProduct,
    TailBound,
    ZeroSequence,
    blaschke_sum,
    carleson_inf_product,
    evaluate,
    separation,
    sup_norm_distance,
    tail_bound,
    thinness_profile,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlabError",
    "BlaschkeProduct",
    "BoundaryPoint",
    "CayleyMap",
    "CertificateError",
    "DegenerateRegionError",
    "DiskPoint",
    "DomainError",
    "StripCone",
    "StripRegion",
    "TailBound",
    "ZeroSequence",
    "automorphism",
    "blaschke_sum",
    "carleson_inf_product",
    "cayley_forward",
    "cayley_inverse",
    "cone_contains",
    "cone_tail_stolz_constant",
    "cone_to_strip",
    "evaluate",
    "principal_arg",
    "pseudo_hyperbolic_distance",
    "separation",
    "stolz_contains",
    "sup_norm_distance",
    "tail_bound",
    "thinness_profile",
]
