"""Time each hot kernel under numba and under the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--tsv]

Compilation happens once before timing; reported numbers are the best of
``--repeat`` runs, in milliseconds.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from debate_forge import kernels
from debate_forge._accel import compile_now
from debate_forge.reports import Table


def pagerank_case(n=1000, seed=0):
    rng = np.random.default_rng(seed)
    w = np.triu(rng.random((n, n)) * (rng.random((n, n)) < 0.05), 1)
    w = w + w.T
    out = w.sum(axis=0)
    out[out == 0] = 1.0
    trans = np.ascontiguousarray(w / out)

    def run(fn):
        return lambda: fn(trans, 0.85, 1e-9, 100)

    return run


def sgd_case(n_docs=2000, n_rows=20000, dim=100, n_labels=2, seed=0):
    rng = np.random.default_rng(seed)
    lengths = rng.integers(20, 60, n_docs)
    doc_ptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    doc_rows = rng.integers(0, n_rows, doc_ptr[-1]).astype(np.int64)
    targets = rng.integers(0, n_labels, n_docs).astype(np.int64)
    order = rng.permutation(n_docs).astype(np.int64)
    emb0 = rng.normal(scale=0.01, size=(n_rows, dim))
    out0 = np.zeros((n_labels, dim))
    empty_i, empty_f = np.zeros(1, dtype=np.int64), np.zeros(0)

    def run(fn):
        def go():
            fn(emb0.copy(), out0.copy(), doc_ptr, doc_rows, targets, order, 0.8, 0.0,
               float(doc_ptr[-1]), False, empty_i, empty_i[:0], empty_f)
        return go

    return run


def hinge_case(n=5000, f=20000, nnz=40, seed=0):
    rng = np.random.default_rng(seed)
    indptr = np.arange(0, (n + 1) * nnz, nnz, dtype=np.int64)
    indices = np.sort(rng.integers(0, f, (n, nnz)), axis=1).ravel().astype(np.int64)
    data = rng.random(n * nnz)
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    order = rng.permutation(n).astype(np.int64)

    def run(fn):
        return lambda: fn(indptr, indices, data, y, order, np.zeros(f), 0.0, 1e-4, 1e4, 1.0)

    return run


CASES = [
    ("pagerank (1000 nodes)", pagerank_case, kernels.pagerank_py, compile_now(kernels.pagerank_py)),
    ("sgd epoch (2000 docs, dim 100)", sgd_case, kernels.sgd_epoch_vec, compile_now(kernels.sgd_epoch_loop_py)),
    ("hinge epoch (5000 rows)", hinge_case, kernels.hinge_sgd_vec, compile_now(kernels.hinge_sgd_py)),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--tsv", action="store_true")
    args = ap.parse_args()
    rows = []
    for name, make, numpy_fn, numba_fn in CASES:
        run = make()
        numba_fn_call = run(numba_fn)
        numba_fn_call()  # compile
        t_np = min(timeit.repeat(run(numpy_fn), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(numba_fn_call, number=1, repeat=args.repeat)) * 1e3
        rows.append([name, f"{t_np:.2f}", f"{t_nb:.2f}", f"{t_np / t_nb:.1f}x"])
    print(Table("Kernel timings (ms, best of repeats)", ["Kernel", "numpy", "numba", "speedup"], rows).render(args.tsv), end="")


if __name__ == "__main__":
    main()
