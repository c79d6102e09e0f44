"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module. Set ``HCA_PURE_PYTHON=1`` to force the
fallback. Both backends produce bit-identical results.
"""
import importlib
import os

from . import _kernels_py


def load_backend(name: str = "auto"):
    """Return a kernel module: "cython", "python", or "auto" (cython if built)."""
    if name == "python":
        return _kernels_py
    if name in ("cython", "auto"):
        try:
            return importlib.import_module("hca._kernels")
        except ImportError:
            if name == "cython":
                raise
            return _kernels_py
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        importlib.import_module("hca._kernels")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


_impl = load_backend("python" if os.environ.get("HCA_PURE_PYTHON") else "auto")

BACKEND = _impl.BACKEND
class_counts = _impl.class_counts
linear_scores = _impl.linear_scores
maxent_loss_grad = _impl.maxent_loss_grad
svm_train_binary = _impl.svm_train_binary
