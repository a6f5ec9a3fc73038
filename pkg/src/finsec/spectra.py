"""Dense spectral kernels and finite-horizon limiting sets."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .exceptions import EmptySet, NumericalBreakdown
from .validation import check_fraction, check_positive, check_self_adjoint, check_square, tail_slice

ENDPOINT_SNAP = 1e-10


def singular_values(M) -> np.ndarray:
    """All singular values of ``M`` in nondecreasing order."""
    M = check_square(M)
    if M.shape[0] == 0:
        return np.zeros(0)
    try:
        s = np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdown(f"SVD failed for a {M.shape[0]}x{M.shape[0]} matrix: {exc}") from exc
    return s[::-1].copy()


def sym_eigenvalues(M, tol: float = 1e-10) -> np.ndarray:
    """Eigenvalues of a self-adjoint matrix, nondecreasing, with multiplicity.

    Raises ``NotSelfAdjoint`` if ``max|M - M*|`` exceeds ``tol`` (relative
    to ``max(1, max|M|)``).
    """
    M = check_self_adjoint(M, tol)
    try:
        return np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdown(f"eigvalsh failed for a {M.shape[0]}x{M.shape[0]} matrix: {exc}") from exc


def normal_eigenvalues(M) -> np.ndarray:
    """Eigenvalues of a normal matrix; real-sorted when ``M`` is self-adjoint."""
    M = check_square(M)
    if np.allclose(M, M.conj().T, rtol=0, atol=1e-12):
        return np.linalg.eigvalsh(M)
    return np.linalg.eigvals(M)


def count_in_interval(eigs, lo: float, hi: float, snap: float = ENDPOINT_SNAP) -> int:
    """Number of values strictly inside ``(lo, hi)``.

    Values within ``snap`` of an endpoint are treated as lying on it and
    therefore excluded.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    e = np.asarray(eigs, dtype=float)
    return int(np.count_nonzero((e > lo + snap) & (e < hi - snap)))


def _directed(L: np.ndarray, M: np.ndarray) -> float:
    """``max_{l in L} dist(l, M)``."""
    if np.isrealobj(L) and np.isrealobj(M):
        Ms = np.sort(M)
        if Ms.size == 1:
            return float(np.max(np.abs(L - Ms[0])))
        pos = np.clip(np.searchsorted(Ms, L), 1, Ms.size - 1)
        return float(np.max(np.minimum(np.abs(L - Ms[pos - 1]), np.abs(L - Ms[pos]))))
    best = 0.0
    for chunk in np.array_split(L, max(1, L.size // 512)):
        best = max(best, float(np.max(np.min(np.abs(chunk[:, None] - M[None, :]), axis=1))))
    return best


def hausdorff(L, M) -> float:
    """Hausdorff distance between two finite point sets in the plane (or line)."""
    L = np.ravel(np.asarray(L))
    M = np.ravel(np.asarray(M))
    if L.size == 0 or M.size == 0:
        raise EmptySet("Hausdorff distance needs two nonempty sets")
    if np.iscomplexobj(L) or np.iscomplexobj(M):
        L, M = L.astype(complex), M.astype(complex)
    return max(_directed(L, M), _directed(M, L))


def _neighbour_counts(points: np.ndarray, sets: Sequence[np.ndarray], eps: float) -> np.ndarray:
    """For each point, the number of sets having a member within ``eps``."""
    hits = np.zeros(points.size, dtype=int)
    for S in sets:
        S = np.ravel(np.asarray(S))
        if S.size == 0:
            continue
        if np.isrealobj(points) and np.isrealobj(S):
            Ss = np.sort(S)
            lo = np.searchsorted(Ss, points - eps, side="left")
            hi = np.searchsorted(Ss, points + eps, side="right")
            hits += hi > lo
        else:
            near = np.zeros(points.size, dtype=bool)
            for chunk_idx in np.array_split(np.arange(points.size), max(1, points.size // 512)):
                d = np.abs(points[chunk_idx, None] - S[None, :])
                near[chunk_idx] = np.any(d <= eps, axis=1)
            hits += near
    return hits


def limiting_sets(sets: Mapping[int, np.ndarray] | Sequence[np.ndarray], eps: float, tail: float = 0.25):
    """Finite-horizon estimates of ``limsup`` and ``liminf`` of a set sequence.

    A point of the tail window belongs to the ``limsup`` estimate when at
    least two distinct indices of the window have a member within ``eps`` of
    it, and to the ``liminf`` estimate when every index does.

    Parameters
    ----------
    sets : mapping n -> points, or a list ordered by n
    eps : float
        Neighbourhood radius.
    tail : float
        Fraction of the (ordered) indices forming the tail window.

    Returns
    -------
    limsup_est, liminf_est : ndarray
        Sorted unique points (possibly empty).
    """
    eps = check_positive(eps, "eps")
    tail = check_fraction(tail)
    if isinstance(sets, Mapping):
        ordered = [np.ravel(np.asarray(sets[n])) for n in sorted(sets)]
    else:
        ordered = [np.ravel(np.asarray(s)) for s in sets]
    if not ordered:
        return np.zeros(0), np.zeros(0)
    window = ordered[tail_slice(len(ordered), tail, minimum=min(4, len(ordered)))]
    pooled = np.concatenate(window)
    if pooled.size == 0:
        return pooled, pooled
    if np.iscomplexobj(pooled):
        window = [w.astype(complex) for w in window]
    hits = _neighbour_counts(pooled, window, eps)
    need_sup = min(2, len(window))
    sup = _unique(pooled[hits >= need_sup])
    inf = _unique(pooled[hits >= len(window)])
    return sup, inf


def _unique(points: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(points):
        return np.unique(np.round(points, 14))
    return np.unique(points)


def eps_covers(points, lo: float, hi: float, eps: float, grid: int = 2001) -> bool:
    """True when every point of a uniform grid on ``[lo, hi]`` is within ``eps`` of ``points``."""
    pts = np.sort(np.asarray(points, dtype=float))
    if pts.size == 0:
        return False
    g = np.linspace(lo, hi, grid)
    return _directed(g, pts) <= eps
