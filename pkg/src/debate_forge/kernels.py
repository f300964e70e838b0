"""Hot numeric loops: weighted PageRank, embedding-classifier SGD
epochs, and hinge-loss SGD for the TF-IDF baseline.

Each kernel exists as a plain Python/numpy function (``*_py``); the public
name is the numba-compiled version when that backend is active (see
``_accel``). The SGD epoch and the hinge epoch have two bodies each: an
explicit loop that numba compiles well, and a vectorized numpy body used by
the fallback backend.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit


def pagerank_py(trans, damping, epsilon, max_iterations):
    """Chebyshev-accelerated iteration of ``s = (1 - d) + d * trans @ s``
    from all-ones.

    ``trans[i, j]`` is the weight of edge (j, i) divided by the total weight
    leaving j. For an undirected graph ``trans`` is similar to a symmetric
    matrix, so the spectrum of ``d * trans`` lies in ``[-d, d]`` and the
    Chebyshev recurrence for that interval applies. It contracts by roughly
    ``(1 - sqrt(1 - d^2)) / d`` per step (about 0.56 at d = 0.85) where the
    plain iteration manages only ``d``, and unlike in-place sweeps it does
    not depend on node order. Stops when the largest per-node change in a
    step drops below epsilon. Returns ``(scores, iterations)``.
    """
    n = trans.shape[0]
    rho2 = damping * damping
    prev = np.ones(n)
    cur = (1.0 - damping) + damping * (trans @ prev)
    iterations = 1
    delta = np.max(np.abs(cur - prev))
    omega = 1.0
    while delta >= epsilon and iterations < max_iterations:
        if iterations == 1:
            omega = 1.0 / (1.0 - 0.5 * rho2)
        else:
            omega = 1.0 / (1.0 - 0.25 * rho2 * omega)
        nxt = omega * ((1.0 - damping) + damping * (trans @ cur) - prev) + prev
        delta = np.max(np.abs(nxt - cur))
        prev = cur
        cur = nxt
        iterations += 1
    return cur, iterations


def sgd_epoch_loop_py(emb, out, doc_ptr, doc_rows, targets, order, lr0, processed, total,
                      use_hs, path_ptr, path_nodes, path_codes):
    """One SGD pass over ``order``; mutates ``emb`` and ``out`` in place.

    Returns ``(loss_sum, n_docs_seen, processed)``. The learning rate decays
    linearly with the number of feature tokens processed out of ``total``.
    """
    dim = emb.shape[1]
    n_out = out.shape[0]
    hidden = np.zeros(dim)
    grad = np.zeros(dim)
    logits = np.zeros(n_out)
    loss = 0.0
    seen = 0
    for k in range(order.shape[0]):
        d = order[k]
        s = doc_ptr[d]
        e = doc_ptr[d + 1]
        n = e - s
        lr = lr0 * (1.0 - processed / total)
        processed += n
        if n == 0:
            continue
        seen += 1
        for j in range(dim):
            hidden[j] = 0.0
            grad[j] = 0.0
        for t in range(s, e):
            r = doc_rows[t]
            for j in range(dim):
                hidden[j] += emb[r, j]
        for j in range(dim):
            hidden[j] /= n
        y = targets[d]
        if use_hs:
            for q in range(path_ptr[y], path_ptr[y + 1]):
                node = path_nodes[q]
                code = path_codes[q]
                dot = 0.0
                for j in range(dim):
                    dot += out[node, j] * hidden[j]
                f = 1.0 / (1.0 + math.exp(-dot))
                alpha = lr * (code - f)
                for j in range(dim):
                    grad[j] += alpha * out[node, j]
                    out[node, j] += alpha * hidden[j]
                if code == 1:
                    loss -= math.log(max(f, 1e-300))
                else:
                    loss -= math.log(max(1.0 - f, 1e-300))
        else:
            top = -np.inf
            for i in range(n_out):
                dot = 0.0
                for j in range(dim):
                    dot += out[i, j] * hidden[j]
                logits[i] = dot
                if dot > top:
                    top = dot
            z = 0.0
            for i in range(n_out):
                logits[i] = math.exp(logits[i] - top)
                z += logits[i]
            for i in range(n_out):
                p = logits[i] / z
                label = 1.0 if i == y else 0.0
                alpha = lr * (label - p)
                for j in range(dim):
                    grad[j] += alpha * out[i, j]
                    out[i, j] += alpha * hidden[j]
                if i == y:
                    loss -= math.log(max(p, 1e-300))
        for t in range(s, e):
            r = doc_rows[t]
            for j in range(dim):
                emb[r, j] += grad[j] / n
    return loss, seen, processed


def sgd_epoch_vec(emb, out, doc_ptr, doc_rows, targets, order, lr0, processed, total,
                  use_hs, path_ptr, path_nodes, path_codes):
    """Vectorized numpy twin of :func:`sgd_epoch_loop_py`."""
    loss = 0.0
    seen = 0
    n_out = out.shape[0]
    for d in order:
        s, e = doc_ptr[d], doc_ptr[d + 1]
        n = e - s
        lr = lr0 * (1.0 - processed / total)
        processed += n
        if n == 0:
            continue
        seen += 1
        rows = doc_rows[s:e]
        hidden = emb[rows].sum(axis=0) / n
        y = targets[d]
        if use_hs:
            nodes = path_nodes[path_ptr[y]:path_ptr[y + 1]]
            codes = path_codes[path_ptr[y]:path_ptr[y + 1]]
            w = out[nodes]
            f = 1.0 / (1.0 + np.exp(-(w @ hidden)))
            alpha = lr * (codes - f)
            grad = alpha @ w
            out[nodes] += np.outer(alpha, hidden)
            picked = np.where(codes == 1, f, 1.0 - f)
            loss -= float(np.sum(np.log(np.maximum(picked, 1e-300))))
        else:
            logits = out @ hidden
            p = np.exp(logits - logits.max())
            p /= p.sum()
            onehot = np.zeros(n_out)
            onehot[y] = 1.0
            alpha = lr * (onehot - p)
            grad = alpha @ out
            out += np.outer(alpha, hidden)
            loss -= math.log(max(p[y], 1e-300))
        np.add.at(emb, rows, grad / n)
    return loss, seen, processed


def hinge_sgd_py(indptr, indices, data, y, order, w, bias, alpha, t0, t):
    """One epoch of L2-regularized hinge-loss SGD on CSR rows.

    Step size ``1 / (alpha * (t0 + t))``. The weight decay is kept as a
    scalar multiplier on ``w`` so each step costs O(nnz) rather than O(dim).
    Returns ``(bias, t)``; ``w`` is updated in place.
    """
    scale = 1.0
    for k in range(order.shape[0]):
        i = order[k]
        s = indptr[i]
        e = indptr[i + 1]
        eta = 1.0 / (alpha * (t0 + t))
        dot = 0.0
        for q in range(s, e):
            dot += w[indices[q]] * data[q]
        margin = y[i] * (scale * dot + bias)
        scale *= 1.0 - eta * alpha
        if margin < 1.0:
            step = eta * y[i] / scale
            for q in range(s, e):
                w[indices[q]] += step * data[q]
            # damped intercept step, as usual for sparse inputs
            bias += eta * y[i] * 0.01
        if scale < 1e-9:
            w *= scale
            scale = 1.0
        t += 1
    w *= scale
    return bias, t


def hinge_sgd_vec(indptr, indices, data, y, order, w, bias, alpha, t0, t):
    """Slice-based numpy twin of :func:`hinge_sgd_py`."""
    scale = 1.0
    for i in order:
        idx = indices[indptr[i]:indptr[i + 1]]
        val = data[indptr[i]:indptr[i + 1]]
        eta = 1.0 / (alpha * (t0 + t))
        margin = y[i] * (scale * float(w[idx] @ val) + bias)
        scale *= 1.0 - eta * alpha
        if margin < 1.0:
            w[idx] += (eta * y[i] / scale) * val
            bias += eta * y[i] * 0.01
        if scale < 1e-9:
            w *= scale
            scale = 1.0
        t += 1
    w *= scale
    return bias, t


pagerank = njit(pagerank_py)
hinge_sgd = njit(hinge_sgd_py) if USE_NUMBA else hinge_sgd_vec
sgd_epoch = njit(sgd_epoch_loop_py) if USE_NUMBA else sgd_epoch_vec
