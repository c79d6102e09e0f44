"""Pure-Python kernels; reference semantics for the compiled ``_kernels`` module.

Every loop here fixes its accumulation order, and ``_kernels.pyx`` repeats
the same order operation for operation, so both backends return
bit-identical floats.
"""
import math

import numpy as np

BACKEND = "python"


def class_counts(indptr, indices, values, labels, m, V):
    """Per-class summed feature counts (m x V) and per-class document counts."""
    ip = indptr.tolist()
    ix = indices.tolist()
    vx = values.tolist()
    lab = labels.tolist()
    counts = [[0.0] * V for _ in range(m)]
    docs = [0] * m
    for j, c in enumerate(lab):
        docs[c] += 1
        row = counts[c]
        for k in range(ip[j], ip[j + 1]):
            row[ix[k]] += vx[k]
    return np.array(counts, dtype=np.float64).reshape(m, V), np.array(docs, dtype=np.int64)


def linear_scores(W, b, indptr, indices, values):
    """scores[j, c] = b[c] + sum_k W[c, idx_k] * val_k, summed in CSR order."""
    m = W.shape[0]
    n = indptr.shape[0] - 1
    Wl = W.tolist()
    bl = b.tolist()
    ip = indptr.tolist()
    ix = indices.tolist()
    vx = values.tolist()
    out = []
    for j in range(n):
        lo, hi = ip[j], ip[j + 1]
        row = []
        for c in range(m):
            wc = Wl[c]
            s = bl[c]
            for k in range(lo, hi):
                s += wc[ix[k]] * vx[k]
            row.append(s)
        out.append(row)
    return np.array(out, dtype=np.float64).reshape(n, m)


def maxent_loss_grad(W, b, indptr, indices, values, labels, l2):
    """Mean conditional log-likelihood minus l2 * ||W||^2, and its gradient.

    Returns (objective, grad_W, grad_b).
    """
    m, V = W.shape
    n = indptr.shape[0] - 1
    Wl = W.tolist()
    bl = b.tolist()
    ip = indptr.tolist()
    ix = indices.tolist()
    vx = values.tolist()
    lab = labels.tolist()
    accW = [[0.0] * V for _ in range(m)]
    accb = [0.0] * m
    loglik = 0.0
    s = [0.0] * m
    for j in range(n):
        lo, hi = ip[j], ip[j + 1]
        for c in range(m):
            wc = Wl[c]
            t = bl[c]
            for k in range(lo, hi):
                t += wc[ix[k]] * vx[k]
            s[c] = t
        mx = s[0]
        for c in range(1, m):
            if s[c] > mx:
                mx = s[c]
        z = 0.0
        for c in range(m):
            z += math.exp(s[c] - mx)
        lse = mx + math.log(z)
        y = lab[j]
        loglik += s[y] - lse
        for c in range(m):
            coef = (1.0 if c == y else 0.0) - math.exp(s[c] - lse)
            accb[c] += coef
            row = accW[c]
            for k in range(lo, hi):
                row[ix[k]] += coef * vx[k]
    reg = 0.0
    for c in range(m):
        wc = Wl[c]
        for i in range(V):
            reg += wc[i] * wc[i]
    objective = loglik / n - l2 * reg
    two_l2 = 2.0 * l2
    gW = [[accW[c][i] / n - two_l2 * Wl[c][i] for i in range(V)] for c in range(m)]
    gb = [accb[c] / n for c in range(m)]
    return (
        objective,
        np.array(gW, dtype=np.float64).reshape(m, V),
        np.array(gb, dtype=np.float64),
    )


def _hinge_pass(w, b, ip, ix, vx, yl, n, V, l2, accw, margins):
    """Fill margins, return (objective, acc_b); accw gets sum of y_j x_j over active points."""
    hinge = 0.0
    accb = 0.0
    for i in range(V):
        accw[i] = 0.0
    for j in range(n):
        lo, hi = ip[j], ip[j + 1]
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
    sq = 0.0
    for i in range(V):
        sq += w[i] * w[i]
    return 0.5 * l2 * sq + hinge / n, accb


def svm_train_binary(indptr, indices, values, y, V, l2, lr, epochs, tol):
    """Full-batch subgradient descent on (l2/2)||w||^2 + mean hinge.

    Step size lr / (1 + epoch). Stops early once the subgradient's
    infinity norm drops below `tol`.

    Returns (w, b, history, epochs_run, diverged_epoch); history[k] is the
    objective after k epochs and diverged_epoch is -1 unless the objective
    became non-finite.
    """
    n = indptr.shape[0] - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    vx = values.tolist()
    yl = y.tolist()
    w = [0.0] * V
    b = 0.0
    accw = [0.0] * V
    margins = [0.0] * n
    history = []
    epochs_run = 0
    diverged = -1
    for t in range(epochs):
        obj, accb = _hinge_pass(w, b, ip, ix, vx, yl, n, V, l2, accw, margins)
        history.append(obj)
        if not math.isfinite(obj):
            diverged = t
            break
        gb = -accb / n
        gnorm = abs(gb)
        for i in range(V):
            g = l2 * w[i] - accw[i] / n
            accw[i] = g
            if abs(g) > gnorm:
                gnorm = abs(g)
        if gnorm < tol:
            break
        eta = lr / (1.0 + t)
        for i in range(V):
            w[i] -= eta * accw[i]
        b -= eta * gb
        epochs_run = t + 1
    else:
        obj, _ = _hinge_pass(w, b, ip, ix, vx, yl, n, V, l2, accw, margins)
        history.append(obj)
        if not math.isfinite(obj):
            diverged = epochs
    return np.array(w, dtype=np.float64), b, np.array(history, dtype=np.float64), epochs_run, diverged
