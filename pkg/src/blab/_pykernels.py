"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` operation for operation and are used when the
compiled extension is missing or ``BLAB_PURE_PYTHON`` is set.
"""
from collections import deque

import numpy as np


_SPLIT = 134217729.0  # 2^27 + 1


def _exact_square(x):
    """p, e with p + e == x*x exactly (Dekker's splitting)."""
    c = _SPLIT * x
    hi = c - (c - x)
    lo = x - hi
    p = x * x
    return p, ((hi * hi - p) + 2.0 * hi * lo) + lo * lo


def one_minus_abs2(z):
    """1 - |z|^2 to full relative accuracy, also for off-axis points near the circle.

    Both squares are formed exactly; subtracting the larger from 1 and then
    the smaller is exact when cancellation occurs, leaving only the rounding
    residues to add back.
    """
    z = np.asarray(z, dtype=complex)
    ax = np.abs(z.real)
    ay = np.abs(z.imag)
    pb, eb = _exact_square(np.maximum(ax, ay))
    ps, es = _exact_square(np.minimum(ax, ay))
    return ((1.0 - pb) - ps) - (eb + es)


def _canonical_pair(z, w):
    # order each pair by (|.|^2, re, im) so rho(z, w) == rho(w, z) bitwise
    a2 = z.real * z.real + z.imag * z.imag
    b2 = w.real * w.real + w.imag * w.imag
    swap = (a2 > b2) | (
        (a2 == b2) & ((z.real > w.real) | ((z.real == w.real) & (z.imag > w.imag)))
    )
    return np.where(swap, w, z), np.where(swap, z, w)


def rho(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    a, b = _canonical_pair(z, w)
    diff = a - b
    den = one_minus_abs2(a) + np.conj(a) * diff
    return np.abs(diff) / np.abs(den)


def rho_matrix(zeros, num_threads=0):
    zeros = np.asarray(zeros, dtype=complex)
    n = zeros.size
    out = np.zeros((n, n))
    iu, ju = np.triu_indices(n, k=1)
    vals = rho(zeros[iu], zeros[ju])
    out[iu, ju] = vals
    out[ju, iu] = vals
    return out


def blaschke_eval(zeros, points, num_threads=0):
    """Product of normalized factors (|a|/a)(a - z)/(1 - conj(a) z)."""
    zeros = np.asarray(zeros, dtype=complex)
    points = np.asarray(points, dtype=complex)
    shape = points.shape
    pts = points.ravel()
    out = np.ones(pts.shape, dtype=complex)
    for a in zeros:
        om = float(one_minus_abs2(a))
        unit = np.conj(a) / abs(a)
        diff = a - pts
        out *= unit * diff / (om + np.conj(a) * diff)
    return out.reshape(shape)


def blaschke_eval_circle(zeros, thetas, num_threads=0):
    """The same product at z = e^{i theta}.

    On the circle 1 - conj(a) z = z conj(z - a), so each factor is
    -(conj(a)/|a|) conj(z) (z - a)/conj(z - a): unimodular by construction
    even when ``a`` sits within 1e-9 of the circle.
    """
    zeros = np.asarray(zeros, dtype=complex)
    thetas = np.asarray(thetas, dtype=float)
    shape = thetas.shape
    th = thetas.ravel()
    zr = np.cos(th)
    zi = np.sin(th)
    out = np.ones(th.shape, dtype=complex)
    for a in zeros:
        unit = -np.conj(a) / abs(a)
        ur = zr - a.real
        ui = zi - a.imag
        out *= unit * ((ur * ur - ui * ui) + 2j * ur * ui) / (ur * ur + ui * ui)
    m = zeros.size
    out *= np.cos(m * th) - 1j * np.sin(m * th)
    return out.reshape(shape)


def arg_sums(wa, wb, ys, num_threads=0):
    """For each y: sum_n |arg((wa_n - iy)/(wb_n - iy))| and the largest summand."""
    wa = np.asarray(wa, dtype=complex)
    wb = np.asarray(wb, dtype=complex)
    ys = np.asarray(ys, dtype=float)
    sums = np.zeros(ys.shape)
    maxes = np.zeros(ys.shape)
    diff = wa - wb
    for d_n, b in zip(diff, wb):
        d = d_n / (b - 1j * ys)
        ang = np.abs(np.arctan2(d.imag, 1.0 + d.real))
        sums += ang
        np.maximum(maxes, ang, out=maxes)
    return sums, maxes


def label_components4(mask):
    """4-connected labelling by row runs and union-find.

    Labels are numbered 1..k in raster order of each component's first cell;
    0 marks background.
    """
    mask = np.asarray(mask, dtype=bool)
    rows, cols = mask.shape
    labels = np.zeros((rows, cols), dtype=np.int32)
    parent = []

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    run_rows = []
    prev = []  # (start, stop, run_id) for the previous row
    for r in range(rows):
        line = mask[r]
        if not line.any():
            prev = []
            continue
        padded = np.concatenate(([False], line, [False]))
        edges = np.flatnonzero(padded[1:] != padded[:-1])
        starts, stops = edges[0::2], edges[1::2]
        cur = []
        j = 0
        for s, e in zip(starts.tolist(), stops.tolist()):
            rid = len(parent)
            parent.append(rid)
            # runs of the previous row overlapping columns [s, e)
            while j < len(prev) and prev[j][1] <= s:
                j += 1
            k = j
            while k < len(prev) and prev[k][0] < e:
                ra, rb = find(prev[k][2]), find(rid)
                if ra != rb:
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
                k += 1
            cur.append((s, e, rid))
            run_rows.append((r, s, e, rid))
        prev = cur

    ids = {}
    for r, s, e, rid in run_rows:
        root = find(rid)
        if root not in ids:
            ids[root] = len(ids) + 1
        labels[r, s:e] = ids[root]
    # runs are created in raster order, so first-seen roots already follow the
    # raster order of the first cell of each component
    return labels, len(ids)


def label_components4_bfs(mask):
    """Plain breadth-first flood fill; slow, kept as a cross-check."""
    mask = np.asarray(mask, dtype=bool)
    rows, cols = mask.shape
    labels = np.zeros((rows, cols), dtype=np.int32)
    count = 0
    for r0, c0 in zip(*np.nonzero(mask)):
        if labels[r0, c0]:
            continue
        count += 1
        labels[r0, c0] = count
        queue = deque([(r0, c0)])
        while queue:
            r, c = queue.popleft()
            for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if 0 <= rr < rows and 0 <= cc < cols and mask[rr, cc] and not labels[rr, cc]:
                    labels[rr, cc] = count
                    queue.append((rr, cc))
    return labels, count
