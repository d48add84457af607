# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Same contracts as ``blab._pykernels``."""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport fabs, sqrt, atan2, cos, sin

cimport openmp

cnp.import_array()


cdef inline double _sq_err(double x, double p) noexcept nogil:
    # x*x - p exactly, by splitting x into 26-bit halves
    cdef double c = 134217729.0 * x
    cdef double hi = c - (c - x)
    cdef double lo = x - hi
    return ((hi * hi - p) + 2.0 * hi * lo) + lo * lo


cdef inline double _one_minus_abs2(double x, double y) noexcept nogil:
    cdef double big = fabs(x)
    cdef double small = fabs(y)
    cdef double t
    if small > big:
        t = big; big = small; small = t
    cdef double pb = big * big
    cdef double ps = small * small
    return ((1.0 - pb) - ps) - (_sq_err(big, pb) + _sq_err(small, ps))


cdef inline double _rho(double x1, double y1, double x2, double y2) noexcept nogil:
    cdef double a2 = x1 * x1 + y1 * y1
    cdef double b2 = x2 * x2 + y2 * y2
    cdef double t
    if a2 > b2 or (a2 == b2 and (x1 > x2 or (x1 == x2 and y1 > y2))):
        t = x1; x1 = x2; x2 = t
        t = y1; y1 = y2; y2 = t
    cdef double dr = x1 - x2
    cdef double di = y1 - y2
    # (1 - |a|^2) + conj(a) * (a - b)
    cdef double er = _one_minus_abs2(x1, y1) + x1 * dr + y1 * di
    cdef double ei = x1 * di - y1 * dr
    return sqrt(dr * dr + di * di) / sqrt(er * er + ei * ei)


cdef int _threads(int num_threads) noexcept:
    if num_threads <= 0:
        return openmp.omp_get_max_threads()
    return num_threads


def one_minus_abs2(z):
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    cdef const double[::1] zr = np.ascontiguousarray(z.real, dtype=float).ravel()
    cdef const double[::1] zi = np.ascontiguousarray(z.imag, dtype=float).ravel()
    cdef Py_ssize_t n = zr.shape[0], k
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for k in range(n):
            o[k] = _one_minus_abs2(zr[k], zi[k])
    return out.reshape(shape)


def rho(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    shape = z.shape
    cdef const double[::1] zr = np.ascontiguousarray(z.real, dtype=float).ravel()
    cdef const double[::1] zi = np.ascontiguousarray(z.imag, dtype=float).ravel()
    cdef const double[::1] wr = np.ascontiguousarray(w.real, dtype=float).ravel()
    cdef const double[::1] wi = np.ascontiguousarray(w.imag, dtype=float).ravel()
    cdef Py_ssize_t n = zr.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = _rho(zr[i], zi[i], wr[i], wi[i])
    return out.reshape(shape)


def rho_matrix(zeros, int num_threads=0):
    zeros = np.asarray(zeros, dtype=complex).ravel()
    cdef const double[::1] xr = np.ascontiguousarray(zeros.real)
    cdef const double[::1] xi = np.ascontiguousarray(zeros.imag)
    cdef Py_ssize_t n = xr.shape[0]
    out = np.zeros((n, n))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef double v
    cdef int nt = _threads(num_threads)
    for i in prange(n, nogil=True, num_threads=nt, schedule="dynamic"):
        for j in range(i + 1, n):
            v = _rho(xr[i], xi[i], xr[j], xi[j])
            o[i, j] = v
            o[j, i] = v
    return out


def blaschke_eval(zeros, points, int num_threads=0):
    zeros = np.asarray(zeros, dtype=complex).ravel()
    points = np.asarray(points, dtype=complex)
    shape = points.shape
    pts = points.ravel()
    cdef Py_ssize_t m = zeros.shape[0]
    cdef Py_ssize_t n = pts.shape[0]
    cdef const double[::1] ar = np.ascontiguousarray(zeros.real)
    cdef const double[::1] ai = np.ascontiguousarray(zeros.imag)
    om_arr = one_minus_abs2(zeros) if m else np.zeros(0)
    mod = np.abs(zeros)
    cdef const double[::1] om = np.ascontiguousarray(om_arr, dtype=float)
    cdef const double[::1] ur = np.ascontiguousarray(zeros.real / mod) if m else np.zeros(0)
    cdef const double[::1] ui = np.ascontiguousarray(-zeros.imag / mod) if m else np.zeros(0)
    cdef const double[::1] zr = np.ascontiguousarray(pts.real)
    cdef const double[::1] zi = np.ascontiguousarray(pts.imag)
    out_r = np.empty(n)
    out_i = np.empty(n)
    cdef double[::1] orr = out_r
    cdef double[::1] oi = out_i
    cdef Py_ssize_t i, k
    cdef double pr, pim, nr, ni, er, ei, qr, qi, den, fr, fi, t
    cdef int nt = _threads(num_threads)
    for i in prange(n, nogil=True, num_threads=nt, schedule="static"):
        pr = 1.0
        pim = 0.0
        for k in range(m):
            nr = ar[k] - zr[i]
            ni = ai[k] - zi[i]
            er = om[k] + ar[k] * nr + ai[k] * ni
            ei = ar[k] * ni - ai[k] * nr
            den = er * er + ei * ei
            qr = (nr * er + ni * ei) / den
            qi = (ni * er - nr * ei) / den
            fr = ur[k] * qr - ui[k] * qi
            fi = ur[k] * qi + ui[k] * qr
            t = pr * fr - pim * fi
            pim = pr * fi + pim * fr
            pr = t
        orr[i] = pr
        oi[i] = pim
    return (out_r + 1j * out_i).reshape(shape)


def blaschke_eval_circle(zeros, thetas, int num_threads=0):
    zeros = np.asarray(zeros, dtype=complex).ravel()
    thetas = np.asarray(thetas, dtype=float)
    shape = thetas.shape
    cdef const double[::1] th = np.ascontiguousarray(thetas.ravel())
    cdef Py_ssize_t m = zeros.shape[0]
    cdef Py_ssize_t n = th.shape[0]
    cdef const double[::1] ar = np.ascontiguousarray(zeros.real)
    cdef const double[::1] ai = np.ascontiguousarray(zeros.imag)
    mod = np.abs(zeros)
    cdef const double[::1] vr = np.ascontiguousarray(-zeros.real / mod) if m else np.zeros(0)
    cdef const double[::1] vi = np.ascontiguousarray(zeros.imag / mod) if m else np.zeros(0)
    out_r = np.empty(n)
    out_i = np.empty(n)
    cdef double[::1] orr = out_r
    cdef double[::1] oi = out_i
    cdef Py_ssize_t i, k
    cdef double pr, pim, zr, zi, ur, ui, den, qr, qi, fr, fi, t, cm, sm
    cdef int nt = _threads(num_threads)
    for i in prange(n, nogil=True, num_threads=nt, schedule="static"):
        zr = cos(th[i])
        zi = sin(th[i])
        pr = 1.0
        pim = 0.0
        for k in range(m):
            ur = zr - ar[k]
            ui = zi - ai[k]
            den = ur * ur + ui * ui
            qr = (ur * ur - ui * ui) / den
            qi = 2.0 * ur * ui / den
            fr = vr[k] * qr - vi[k] * qi
            fi = vr[k] * qi + vi[k] * qr
            t = pr * fr - pim * fi
            pim = pr * fi + pim * fr
            pr = t
        # remaining conj(z)^m
        cm = cos(m * th[i])
        sm = -sin(m * th[i])
        orr[i] = pr * cm - pim * sm
        oi[i] = pr * sm + pim * cm
    return (out_r + 1j * out_i).reshape(shape)


def arg_sums(wa, wb, ys, int num_threads=0):
    wa = np.asarray(wa, dtype=complex).ravel()
    wb = np.asarray(wb, dtype=complex).ravel()
    ys = np.asarray(ys, dtype=float)
    shape = ys.shape
    cdef const double[::1] y = np.ascontiguousarray(ys.ravel())
    cdef const double[::1] dr = np.ascontiguousarray((wa - wb).real)
    cdef const double[::1] di = np.ascontiguousarray((wa - wb).imag)
    cdef const double[::1] br = np.ascontiguousarray(wb.real)
    cdef const double[::1] bi = np.ascontiguousarray(wb.imag)
    cdef Py_ssize_t m = dr.shape[0]
    cdef Py_ssize_t n = y.shape[0]
    sums = np.zeros(n)
    maxes = np.zeros(n)
    cdef double[::1] s = sums
    cdef double[::1] mx = maxes
    cdef Py_ssize_t i, k
    cdef double qr, qi, q2, xr, xi, ang, acc, top
    cdef int nt = _threads(num_threads)
    for i in prange(n, nogil=True, num_threads=nt, schedule="static"):
        acc = 0.0
        top = 0.0
        for k in range(m):
            qr = br[k]
            qi = bi[k] - y[i]
            q2 = qr * qr + qi * qi
            xr = (dr[k] * qr + di[k] * qi) / q2
            xi = (di[k] * qr - dr[k] * qi) / q2
            ang = fabs(atan2(xi, 1.0 + xr))
            acc = acc + ang
            if ang > top:
                top = ang
        s[i] = acc
        mx[i] = top
    return sums.reshape(shape), maxes.reshape(shape)


def label_components4(mask):
    cdef cnp.uint8_t[:, ::1] mk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t rows = mk.shape[0]
    cdef Py_ssize_t cols = mk.shape[1]
    labels = np.zeros((rows, cols), dtype=np.int32)
    cdef int[:, ::1] lab = labels
    stack_arr = np.empty(max(rows * cols, 1), dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    cdef Py_ssize_t top, cell, r, c, r0, c0
    cdef int count = 0
    for r0 in range(rows):
        for c0 in range(cols):
            if mk[r0, c0] == 0 or lab[r0, c0] != 0:
                continue
            count += 1
            lab[r0, c0] = count
            top = 0
            stack[top] = r0 * cols + c0
            top += 1
            while top > 0:
                top -= 1
                cell = stack[top]
                r = cell // cols
                c = cell - r * cols
                if r > 0 and mk[r - 1, c] and lab[r - 1, c] == 0:
                    lab[r - 1, c] = count
                    stack[top] = cell - cols
                    top += 1
                if r + 1 < rows and mk[r + 1, c] and lab[r + 1, c] == 0:
                    lab[r + 1, c] = count
                    stack[top] = cell + cols
                    top += 1
                if c > 0 and mk[r, c - 1] and lab[r, c - 1] == 0:
                    lab[r, c - 1] = count
                    stack[top] = cell - 1
                    top += 1
                if c + 1 < cols and mk[r, c + 1] and lab[r, c + 1] == 0:
                    lab[r, c + 1] = count
                    stack[top] = cell + 1
                    top += 1
    return labels, count
