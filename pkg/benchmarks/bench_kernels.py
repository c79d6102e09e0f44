"""Compare the compiled and pure-Python kernel backends.

Inputs are the planted corpus (6 categories x 200 posts by default),
vectorized the same way the pipeline does it. Each kernel runs on both
backends; outputs are checked for bit equality before timings are printed.

    python benchmarks/bench_kernels.py [--per-category N] [--repeat R]
"""
import argparse
import sys
import timeit

import numpy as np

from hca import kernels
from hca.features import fit_vocabulary, to_csr, vectorize
from hca.ingest import make_record
from hca.lexicon import build_corpus, weak_label
from hca.normalize import load_config, normalize
from hca.synth import generate


def planted_matrix(per_category):
    planted = generate(n_per_category=per_category)
    cfg = load_config()
    docs = [normalize(make_record(r["id"], r["text"], label=r["label"]), cfg) for r in planted.records]
    corpus = build_corpus(planted.specs, planted.graph, 2)
    order = [s.name for s in planted.specs]
    labels = [weak_label(d, corpus, order).category for d in docs]
    kept = [(d, order.index(c)) for d, c in zip(docs, labels) if c is not None]
    vocab = fit_vocabulary([d for d, _ in kept])
    csr = to_csr([vectorize(d, vocab) for d, _ in kept])
    return csr, np.array([c for _, c in kept], dtype=np.int64), len(order), len(vocab)


def cases(csr, y, m, V):
    rng = np.random.default_rng(0)
    W, b = rng.normal(size=(m, V)), rng.normal(size=m)
    binary = np.where(y == 0, 1.0, -1.0)
    return {
        "class_counts": lambda k: k.class_counts(*csr, y, m, V),
        "linear_scores": lambda k: k.linear_scores(W, b, *csr),
        "maxent_loss_grad": lambda k: k.maxent_loss_grad(W, b, *csr, y, 1e-3),
        "svm_train_binary (300 epochs)": lambda k: k.svm_train_binary(*csr, binary, V, 1e-3, 0.5, 300, 0.0),
    }


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, z) for x, z in zip(a, b))
    if isinstance(a, (list, np.ndarray)):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-category", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    names = kernels.available_backends()
    if "cython" not in names:
        print("compiled backend not built; run `pip install -e . --no-build-isolation` first")
        return 1
    backends = {n: kernels.load_backend(n) for n in names}
    csr, y, m, V = planted_matrix(args.per_category)
    print(f"docs={len(y)} nnz={len(csr[1])} m={m} V={V} repeat={args.repeat} (best of)")
    print(f"{'kernel':<32}{'cython ms':>12}{'python ms':>12}{'speedup':>10}  identical")
    for label, fn in cases(csr, y, m, V).items():
        results = {n: fn(k) for n, k in backends.items()}
        times = {
            n: min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=args.repeat)) * 1e3
            for n, k in backends.items()
        }
        print(f"{label:<32}{times['cython']:>12.3f}{times['python']:>12.3f}"
              f"{times['python'] / times['cython']:>9.1f}x  {same(results['cython'], results['python'])}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
