"""Robust orthogonal NMF clustering.

Thin wrapper over the compiled `_ronmf` extension: semi-supervised
noise-robust NMF with non-convex reconstruction losses, plus baselines,
clustering metrics and noise injection.
"""

import importlib

try:  # installed layout: extension lives inside the package
    _core = importlib.import_module("._ronmf", __name__)
except ImportError:  # build-tree layout: extension on sys.path
    _core = importlib.import_module("_ronmf")

_EXPORTS = [
    "ContractViolation",
    "DataError",
    "NumericalAbort",
    "accuracy",
    "evaluate",
    "fit",
    "gaussian_corrupt",
    "generate_synthetic",
    "kmeans",
    "knn_graph",
    "laplacian",
    "load_matrix",
    "nmf",
    "nmi",
    "pairwise_f1",
    "phi_value",
    "poisson_corrupt",
    "prox_row",
    "prox_scalar",
    "purity",
    "salt_pepper_corrupt",
    "save_matrix",
]

__version__ = _core.__version__
for _name in _EXPORTS:
    globals()[_name] = getattr(_core, _name)

__all__ = ["__version__", *_EXPORTS]
