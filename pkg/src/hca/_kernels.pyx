# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``_kernels_py`` operation for operation."""
import numpy as np

from libc.math cimport exp, log, fabs, isfinite

BACKEND = "cython"


def class_counts(const long long[::1] indptr, const long long[::1] indices,
                 const double[::1] values, const long long[::1] labels,
                 Py_ssize_t m, Py_ssize_t V):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    counts_arr = np.zeros((m, V), dtype=np.float64)
    docs_arr = np.zeros(m, dtype=np.int64)
    cdef double[:, ::1] counts = counts_arr
    cdef long long[::1] docs = docs_arr
    cdef Py_ssize_t j, k, c
    for j in range(n):
        c = labels[j]
        docs[c] += 1
        for k in range(indptr[j], indptr[j + 1]):
            counts[c, indices[k]] += values[k]
    return counts_arr, docs_arr


def linear_scores(const double[:, ::1] W, const double[::1] b,
                  const long long[::1] indptr, const long long[::1] indices,
                  const double[::1] values):
    cdef Py_ssize_t m = W.shape[0]
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t j, c, k, lo, hi
    cdef double s
    for j in range(n):
        lo = indptr[j]
        hi = indptr[j + 1]
        for c in range(m):
            s = b[c]
            for k in range(lo, hi):
                s += W[c, indices[k]] * values[k]
            out[j, c] = s
    return out_arr


def maxent_loss_grad(const double[:, ::1] W, const double[::1] b,
                     const long long[::1] indptr, const long long[::1] indices,
                     const double[::1] values, const long long[::1] labels,
                     double l2):
    cdef Py_ssize_t m = W.shape[0]
    cdef Py_ssize_t V = W.shape[1]
    cdef Py_ssize_t n = indptr.shape[0] - 1
    gW_arr = np.zeros((m, V), dtype=np.float64)
    gb_arr = np.zeros(m, dtype=np.float64)
    s_arr = np.zeros(m, dtype=np.float64)
    cdef double[:, ::1] accW = gW_arr
    cdef double[::1] accb = gb_arr
    cdef double[::1] s = s_arr
    cdef Py_ssize_t j, c, k, i, lo, hi
    cdef long long y
    cdef double t, mx, z, lse, coef, loglik = 0.0, reg = 0.0, objective, two_l2
    for j in range(n):
        lo = indptr[j]
        hi = indptr[j + 1]
        for c in range(m):
            t = b[c]
            for k in range(lo, hi):
                t += W[c, indices[k]] * values[k]
            s[c] = t
        mx = s[0]
        for c in range(1, m):
            if s[c] > mx:
                mx = s[c]
        z = 0.0
        for c in range(m):
            z += exp(s[c] - mx)
        lse = mx + log(z)
        y = labels[j]
        loglik += s[y] - lse
        for c in range(m):
            coef = (1.0 if c == y else 0.0) - exp(s[c] - lse)
            accb[c] += coef
            for k in range(lo, hi):
                accW[c, indices[k]] += coef * values[k]
    for c in range(m):
        for i in range(V):
            reg += W[c, i] * W[c, i]
    objective = loglik / n - l2 * reg
    two_l2 = 2.0 * l2
    for c in range(m):
        for i in range(V):
            accW[c, i] = accW[c, i] / n - two_l2 * W[c, i]
        accb[c] = accb[c] / n
    return objective, gW_arr, gb_arr


cdef double _hinge_pass(double[::1] w, double b, const long long[::1] ip,
                        const long long[::1] ix, const double[::1] vx,
                        const double[::1] yl, Py_ssize_t n, Py_ssize_t V,
                        double l2, double[::1] accw, double[::1] margins,
                        double* accb_out) noexcept nogil:
    cdef double hinge = 0.0, accb = 0.0, t, zj, yj, sq = 0.0
    cdef Py_ssize_t i, j, k, lo, hi
    for i in range(V):
        accw[i] = 0.0
    for j in range(n):
        lo = ip[j]
        hi = ip[j + 1]
        t = b
        for k in range(lo, hi):
            t += w[ix[k]] * vx[k]
        zj = yl[j] * t
        margins[j] = zj
        if zj < 1.0:
            hinge += 1.0 - zj
            yj = yl[j]
            accb += yj
            for k in range(lo, hi):
                accw[ix[k]] += yj * vx[k]
    for i in range(V):
        sq += w[i] * w[i]
    accb_out[0] = accb
    return 0.5 * l2 * sq + hinge / n


def svm_train_binary(const long long[::1] indptr, const long long[::1] indices,
                     const double[::1] values, const double[::1] y,
                     Py_ssize_t V, double l2, double lr, long epochs, double tol):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    w_arr = np.zeros(V, dtype=np.float64)
    accw_arr = np.zeros(V, dtype=np.float64)
    margins_arr = np.zeros(n, dtype=np.float64)
    hist_arr = np.zeros(epochs + 1, dtype=np.float64)
    cdef double[::1] w = w_arr
    cdef double[::1] accw = accw_arr
    cdef double[::1] margins = margins_arr
    cdef double[::1] hist = hist_arr
    cdef double b = 0.0, obj, accb = 0.0, gb, gnorm, g, eta
    cdef long t, epochs_run = 0, diverged = -1, n_hist = 0
    cdef Py_ssize_t i
    cdef bint broke = False
    with nogil:
        for t in range(epochs):
            obj = _hinge_pass(w, b, indptr, indices, values, y, n, V, l2, accw, margins, &accb)
            hist[n_hist] = obj
            n_hist += 1
            if not isfinite(obj):
                diverged = t
                broke = True
                break
            gb = -accb / n
            gnorm = fabs(gb)
            for i in range(V):
                g = l2 * w[i] - accw[i] / n
                accw[i] = g
                if fabs(g) > gnorm:
                    gnorm = fabs(g)
            if gnorm < tol:
                broke = True
                break
            eta = lr / (1.0 + t)
            for i in range(V):
                w[i] -= eta * accw[i]
            b -= eta * gb
            epochs_run = t + 1
        if not broke:
            obj = _hinge_pass(w, b, indptr, indices, values, y, n, V, l2, accw, margins, &accb)
            hist[n_hist] = obj
            n_hist += 1
            if not isfinite(obj):
                diverged = epochs
    return w_arr, b, hist_arr[:n_hist].copy(), epochs_run, diverged
