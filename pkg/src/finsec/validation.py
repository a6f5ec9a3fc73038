"""Input validation helpers shared by the generators, kernels and classifiers."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .exceptions import NotNormal, NotSelfAdjoint

DEFAULT_MAX_N = 4096


def check_square(M, name: str = "M") -> np.ndarray:
    """Return ``M`` as a 2-d square ndarray or raise ``ValueError``."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {M.shape}")
    if not np.issubdtype(M.dtype, np.number):
        raise ValueError(f"{name} must be numeric, got dtype {M.dtype}")
    return M


def hermitian_residual(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T), initial=0.0))


def check_self_adjoint(M, tol: float = 1e-10, name: str = "M") -> np.ndarray:
    M = check_square(M, name)
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    res = hermitian_residual(M)
    if res > tol * scale:
        raise NotSelfAdjoint(f"{name} is not self-adjoint: max|M - M*| = {res:.3g}")
    return M


def check_normal(M, tol: float = 1e-10, name: str = "M") -> np.ndarray:
    M = check_square(M, name)
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0))) ** 2
    res = float(np.max(np.abs(M @ M.conj().T - M.conj().T @ M), initial=0.0))
    if res > tol * scale:
        raise NotNormal(f"{name} is not normal: max|MM* - M*M| = {res:.3g}")
    return M


def check_horizon(horizon, max_n: int = DEFAULT_MAX_N) -> list[int]:
    """Expand a horizon into a sorted list of sizes.

    ``horizon`` is either ``(n_min, n_max, step)`` (inclusive of ``n_max``
    when it lies on the grid) or an explicit iterable of sizes.
    """
    if isinstance(horizon, tuple) and len(horizon) == 3 and all(
        isinstance(v, (int, np.integer)) for v in horizon
    ):
        n_min, n_max, step = (int(v) for v in horizon)
        if step < 1:
            raise ValueError(f"horizon step must be positive, got {step}")
        sizes = list(range(n_min, n_max + 1, step))
    else:
        sizes = sorted({int(n) for n in horizon})
    if not sizes:
        raise ValueError(f"horizon {horizon!r} is empty")
    if sizes[0] < 1:
        raise ValueError(f"horizon sizes must be positive, got {sizes[0]}")
    if sizes[-1] > max_n:
        raise ValueError(f"horizon size {sizes[-1]} exceeds the cap max_n={max_n}")
    return sizes


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_fraction(value: float, name: str = "tail") -> float:
    value = float(value)
    if not 0 < value <= 1:
        raise ValueError(f"{name} must lie in (0, 1], got {value}")
    return value


def tail_slice(length: int, fraction: float, minimum: int = 1) -> slice:
    """Slice selecting the last ``ceil(fraction * length)`` entries (at least ``minimum``)."""
    count = max(minimum, int(np.ceil(fraction * length)))
    return slice(max(0, length - count), length)


def is_sorted(values: Sequence[float], tol: float = 0.0) -> bool:
    return all(values[i] <= values[i + 1] + tol for i in range(len(values) - 1))
