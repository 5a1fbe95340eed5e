# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels; behaviourally identical to the numpy versions in _ref."""
import numpy as np

from libc.math cimport hypot, atan2, acos, fmod, fabs
from libc.stdlib cimport malloc, free, qsort

BACKEND = "cython"

cdef double TWO_PI = 6.283185307179586476925287

cdef struct Event:
    double ang
    int delta

cdef int _cmp_event(const void* a, const void* b) noexcept nogil:
    cdef double d = (<const Event*>a).ang - (<const Event*>b).ang
    if d < 0:
        return -1
    if d > 0:
        return 1
    return (<const Event*>a).delta - (<const Event*>b).delta


cdef int _sweep(const double* cx, const double* cy, const double* rad, Py_ssize_t n,
                double atol, int early_stop, Py_ssize_t* best_i, double* best_ang,
                Event* ev) nogil:
    cdef Py_ssize_t i, j, k, ne
    cdef int base, run, best_run, depth, best
    cdef double ri, rj, dx, dy, D, phi0, ch, half, s, e, nxt, cand_ang
    best = 0
    best_i[0] = -1
    best_ang[0] = 0.0
    for i in range(n):
        ri = rad[i]
        if ri <= 0.0:
            continue
        base = 0
        ne = 0
        for j in range(n):
            if j == i:
                continue
            rj = rad[j]
            if rj <= 0.0:
                continue
            dx = cx[j] - cx[i]
            dy = cy[j] - cy[i]
            D = hypot(dx, dy)
            if D + ri <= rj + atol:
                base += 1
                continue
            if D + rj <= ri + atol or D >= ri + rj - atol or D <= 0.0:
                continue
            phi0 = atan2(dy, dx)
            ch = (D * D + ri * ri - rj * rj) / (2.0 * D * ri)
            if ch > 1.0:
                ch = 1.0
            elif ch < -1.0:
                ch = -1.0
            half = acos(ch)
            s = fmod(phi0 - half, TWO_PI)
            if s < 0.0:
                s += TWO_PI
            e = fmod(phi0 + half, TWO_PI)
            if e < 0.0:
                e += TWO_PI
            if s > e:
                base += 1  # wrapping arc covers angle 0
            ev[ne].ang = s
            ev[ne].delta = 1
            ne += 1
            ev[ne].ang = e
            ev[ne].delta = -1
            ne += 1
        cand_ang = 0.0
        best_run = base
        if ne > 0:
            qsort(ev, ne, sizeof(Event), _cmp_event)
            if ev[0].ang > 0.0:
                cand_ang = 0.5 * ev[0].ang
            run = base
            for k in range(ne):
                run += ev[k].delta
                if k + 1 < ne:
                    nxt = ev[k + 1].ang
                else:
                    nxt = ev[0].ang + TWO_PI
                if nxt > ev[k].ang and run > best_run:
                    best_run = run
                    cand_ang = fmod(0.5 * (ev[k].ang + nxt), TWO_PI)
        depth = 1 + best_run
        if depth > best:
            best = depth
            best_i[0] = i
            best_ang[0] = cand_ang
            if early_stop > 0 and 2 * best > early_stop:
                break
    return best


def depth_sweep(cx, cy, rad, double tol=1e-12):
    """Maximum open-cell depth of the disk arrangement; see _ref.depth_sweep."""
    cdef const double[::1] cxv = np.ascontiguousarray(cx, dtype=np.float64)
    cdef const double[::1] cyv = np.ascontiguousarray(cy, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(rad, dtype=np.float64)
    cdef Py_ssize_t n = rv.shape[0]
    if n == 0:
        return 0, -1, 0.0
    cdef double rmax = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        if rv[i] > rmax:
            rmax = rv[i]
    cdef double atol = tol * (rmax if rmax > 1.0 else 1.0)
    cdef Event* ev = <Event*> malloc(2 * n * sizeof(Event))
    if ev == NULL:
        raise MemoryError()
    cdef Py_ssize_t bi = -1
    cdef double bang = 0.0
    cdef int depth
    try:
        depth = _sweep(&cxv[0], &cyv[0], &rv[0], n, atol, 0, &bi, &bang, ev)
    finally:
        free(ev)
    return depth, bi, bang


def decide_many(vx, vy, px, py, double beta, double tol=1e-12):
    """Exact planar decisions for many candidate points; see _ref.decide_many."""
    cdef const double[::1] vxv = np.ascontiguousarray(vx, dtype=np.float64)
    cdef const double[::1] vyv = np.ascontiguousarray(vy, dtype=np.float64)
    cdef const double[::1] pxv = np.ascontiguousarray(np.atleast_1d(px), dtype=np.float64)
    cdef const double[::1] pyv = np.ascontiguousarray(np.atleast_1d(py), dtype=np.float64)
    cdef Py_ssize_t n = vxv.shape[0]
    cdef Py_ssize_t m = pxv.shape[0]
    out_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef double* dvv = <double*> malloc(n * n * sizeof(double))
    cdef double* rad = <double*> malloc(n * sizeof(double))
    cdef Event* ev = <Event*> malloc(2 * n * sizeof(Event))
    if dvv == NULL or rad == NULL or ev == NULL:
        free(dvv); free(rad); free(ev)
        raise MemoryError()
    cdef Py_ssize_t i, j, k, bi
    cdef int wins, depth, bad
    cdef double rmax, atol, bang
    try:
        for i in range(n):
            for j in range(n):
                dvv[i * n + j] = hypot(vxv[i] - vxv[j], vyv[i] - vyv[j])
        for k in range(m):
            rmax = 0.0
            for i in range(n):
                rad[i] = beta * hypot(vxv[i] - pxv[k], vyv[i] - pyv[k])
                if rad[i] > rmax:
                    rmax = rad[i]
            atol = tol * (rmax if rmax > 1.0 else 1.0)
            bad = 0
            for j in range(n):
                wins = 0
                for i in range(n):
                    if dvv[j * n + i] < rad[i] - atol:
                        wins += 1
                if 2 * wins - <int> n >= 1:
                    bad = 1
                    break
            if bad:
                out[k] = 0
                continue
            depth = _sweep(&vxv[0], &vyv[0], rad, n, atol, <int> n, &bi, &bang, ev)
            out[k] = 1 if 2 * depth <= <int> n else 0
    finally:
        free(dvv)
        free(rad)
        free(ev)
    return out_arr


def max_advantage_points(cx, cy, rad, qx, qy, double rtol=1e-12):
    """Best competitor among candidate points; see _ref.max_advantage_points."""
    cdef const double[::1] cxv = np.ascontiguousarray(cx, dtype=np.float64)
    cdef const double[::1] cyv = np.ascontiguousarray(cy, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(rad, dtype=np.float64)
    cdef const double[::1] qxv = np.ascontiguousarray(np.atleast_1d(qx), dtype=np.float64)
    cdef const double[::1] qyv = np.ascontiguousarray(np.atleast_1d(qy), dtype=np.float64)
    cdef Py_ssize_t n = cxv.shape[0]
    cdef Py_ssize_t m = qxv.shape[0]
    cdef Py_ssize_t i, k, best_idx = -1
    cdef int ins, outs, adv, best_adv
    cdef double d, r, mx
    best_adv = -(<int> n + 1)
    for k in range(m):
        ins = 0
        outs = 0
        for i in range(n):
            d = hypot(qxv[k] - cxv[i], qyv[k] - cyv[i])
            r = rv[i]
            mx = r if r > d else d
            if fabs(d - r) <= rtol * mx:
                continue
            if d < r:
                ins += 1
            else:
                outs += 1
        adv = ins - outs
        if adv > best_adv:
            best_adv = adv
            best_idx = k
    return best_adv, best_idx
