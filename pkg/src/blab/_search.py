"""Vectorized golden-section maximization on many brackets at once."""
import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi


def golden_max(f, a, b, rel_tol=1e-10):
    """Maximize ``f`` on each bracket ``[a_i, b_i]``.

    ``f`` takes and returns 1-d arrays. Each bracket is assumed unimodal;
    otherwise a local maximum is returned. Stops once every bracket has
    shrunk by ``rel_tol`` relative to its initial width.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float)).copy()
    b = np.atleast_1d(np.asarray(b, dtype=float)).copy()
    if a.size == 0:
        return a, a
    n_iter = int(math.ceil(math.log(rel_tol) / math.log(INV_PHI)))
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(n_iter):
        left = fc >= fd  # maximum lies in [a, d]
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        new_c = np.where(left, b - INV_PHI * (b - a), d)
        new_d = np.where(left, c, a + INV_PHI * (b - a))
        x = np.where(left, new_c, new_d)
        fx = f(x)
        fc, fd = np.where(left, fx, fd), np.where(left, fc, fx)
        c, d = new_c, new_d
    pick = fc >= fd
    return np.where(pick, c, d), np.where(pick, fc, fd)
