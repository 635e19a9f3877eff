"""numpy/scipy backend for the dense kernels (used when the compiled core is absent)."""
from __future__ import annotations

import numpy as np
import scipy.linalg

BACKEND = "python"


def eigvalsh(a: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix."""
    return np.linalg.eigvalsh(a)


def slogdet_minpivot(a: np.ndarray) -> tuple[float, float, float]:
    """(sign, log|det|, min |pivot|) of a square matrix via partial-pivot LU."""
    n = a.shape[0]
    if n == 0:
        return 1.0, 0.0, np.inf
    lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    diag = np.diagonal(lu)
    if np.any(diag == 0.0):
        return 0.0, -np.inf, 0.0
    sign = 1.0 if np.count_nonzero(piv != np.arange(n)) % 2 == 0 else -1.0
    sign *= np.prod(np.sign(diag))
    logabs = float(np.sum(np.log(np.abs(diag))))
    return float(sign), logabs, float(np.min(np.abs(diag)))
