"""Error-free transformations for compensated evaluation of small formulas."""
import numpy as np

_SPLIT = 134217729.0  # 2^27 + 1


def two_sum(a, b):
    """s, e with s + e == a + b exactly."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def two_prod(a, b):
    """p, e with p + e == a * b exactly (Dekker's splitting, no FMA needed)."""
    ca = _SPLIT * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLIT * b
    bh = cb - (cb - b)
    bl = b - bh
    p = a * b
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def sum2(terms):
    """Cascaded summation: as accurate as summing in twice the working precision.

    Returns the rounded sum and the residual left over, so ``hi + lo`` carries
    about 106 bits.
    """
    s = terms[0]
    c = np.zeros_like(s)
    for t in terms[1:]:
        s, e = two_sum(s, t)
        c = c + e
    return two_sum(s, c)


def products(a, b):
    p, e = two_prod(a, b)
    return [p, e]


def neg(terms):
    return [-t for t in terms]
