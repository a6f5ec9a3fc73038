"""Exact matrix identities that hold at every finite size.

Each check returns an :class:`IdentityReport` holding the per-size
residuals (spectral norm of ``lhs - rhs``) and the bound they are held to.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .matgen import cuntz_difference, cuntz_isometry, cuntz_word, hankel, reflect_conjugate, toeplitz
from .spectra import singular_values
from .symbols import FourierSymbol, flip, multiply, sup_norm
from .validation import DEFAULT_MAX_N, check_horizon

WIDOM_RTOL = 1e-12
EXACT_TOL = 1e-14
NORM_TOL = 1e-2


@dataclass(frozen=True)
class IdentityReport:
    name: str
    n_range: list
    residuals: dict  # n -> residual
    bound: float
    details: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.bound

    def rows(self):
        """``(name, n, residual, pass)`` per size, ordered by ``n``."""
        for n in sorted(self.residuals):
            r = self.residuals[n]
            yield self.name, n, r, r <= self.bound


def _norm(M: np.ndarray) -> float:
    if M.size == 0 or not np.any(M):
        return 0.0
    return float(singular_values(M)[-1])


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return int(n)


def hankel_product(a: FourierSymbol, b: FourierSymbol, n: int) -> np.ndarray:
    """``P_n H(a) H(b) P_n``, exact for trig polynomials.

    ``H(a)`` vanishes outside its leading ``max_frequency`` corner, so the
    infinite inner sum is finite and both factors can be cut at
    ``m = max(n, bandwidth)``.
    """
    m = max(n, a.max_frequency, b.max_frequency, 1)
    return (hankel(a, m) @ hankel(b, m))[:n, :n]


def widom_terms(a: FourierSymbol, b: FourierSymbol, n: int) -> dict[str, np.ndarray]:
    """Both sides of ``T_n(ab) = T_n(a)T_n(b) + P_nH(a)H(b~)P_n + R_nH(a~)H(b)R_n``."""
    n = _check_n(n)
    lhs = toeplitz(multiply(a, b), n)
    prod = toeplitz(a, n) @ toeplitz(b, n)
    left = hankel_product(a, flip(b), n)
    right = reflect_conjugate(hankel_product(flip(a), b, n))
    return {"lhs": lhs, "product": prod, "hankel_left": left, "hankel_right": right,
            "rhs": prod + left + right}


def widom_check(a: FourierSymbol, b: FourierSymbol, n: int, rtol: float = WIDOM_RTOL) -> IdentityReport:
    """Residual of the Toeplitz product identity at size ``n``.

    The bound is ``rtol * (1 + |a|_inf |b|_inf)``.
    """
    t = widom_terms(a, b, n)
    scale = 1.0 + sup_norm(a) * sup_norm(b)
    res = _norm(t["lhs"] - t["rhs"])
    return IdentityReport("widom", [n], {n: res}, rtol * scale, {"scale": scale})


def reflection_check(a: FourierSymbol, n: int, tol: float = EXACT_TOL) -> IdentityReport:
    """``R_n T_n(a) R_n = T_n(a~)``."""
    n = _check_n(n)
    res = _norm(reflect_conjugate(toeplitz(a, n)) - toeplitz(flip(a), n))
    return IdentityReport("reflection", [n], {n: res}, tol)


def cuntz_relations_check(N: int, n: int, tol: float = EXACT_TOL) -> IdentityReport:
    """Orthogonality, completeness and partial-isometry residuals of truncated Cuntz isometries.

    The reported residual at ``n`` is the largest of the three; the
    individual values are in ``details``.
    """
    n = _check_n(n)
    S = [cuntz_isometry(N, i, n) for i in range(N)]
    ortho = max((_norm(S[i].T @ S[j]) for i in range(N) for j in range(N) if i != j), default=0.0)
    complete = _norm(sum(Si @ Si.T for Si in S) - np.eye(n))
    partial = max(_norm(Si @ Si.T @ Si - Si) for Si in S)
    details = {"orthogonality": ortho, "completeness": complete, "partial_isometry": partial}
    return IdentityReport(f"cuntz_relations(N={N})", [n], {n: max(ortho, complete, partial)}, tol, details)


def word_offset(N: int, word: Sequence[int]) -> int:
    """``v = i_1 + i_2 N + ... + i_k N^(k-1)``."""
    return sum(int(i) * N ** p for p, i in enumerate(word))


def projection_size(N: int, word: Sequence[int], n: int) -> int:
    """``ceil((n - v) / N^k)`` clamped to ``[0, n]``."""
    v, q = word_offset(N, word), N ** len(word)
    return min(n, max(0, -((v - n) // q)))


def cuntz_projection_check(N: int, word: Sequence[int], n: int, tol: float = EXACT_TOL) -> IdentityReport:
    """Compare ``T^* T`` for the truncated word product ``T`` with ``P_m``.

    Sizes with ``n = v (mod N^k)`` are where the ceiling could be off by
    one; they are flagged in ``details["boundary"]`` but not normalized.
    """
    n = _check_n(n)
    word = tuple(int(i) for i in word)
    if not word:
        raise ValueError("word must contain at least one letter")
    if any(not 0 <= i < N for i in word):
        raise ValueError(f"word {word} has letters outside [0, {N})")
    T = cuntz_word(N, word, n)
    m = projection_size(N, word, n)
    P = np.zeros((n, n))
    P[:m, :m] = np.eye(m)
    res = _norm(T.T @ T - P)
    boundary = (n - word_offset(N, word)) % N ** len(word) == 0
    details = {"m": m, "boundary": boundary, "boundary_mismatch": boundary and res > tol}
    name = f"cuntz_projection(N={N},word={''.join(map(str, word))})"
    return IdentityReport(name, [n], {n: res}, tol, details)


def norm_formula_check(a: FourierSymbol, horizon, bound: float = NORM_TOL,
                       max_n: int = DEFAULT_MAX_N) -> IdentityReport:
    """Largest singular value of ``T_n(a)`` against ``|a|_inf``.

    The residual per size is ``|Sigma_1(T_n(a)) - |a|_inf|``; only the
    largest size is held to ``bound``.  ``details["monotone"]`` records
    whether ``Sigma_1`` is nondecreasing along the horizon.
    """
    sizes = check_horizon(horizon, max_n)
    target = sup_norm(a)
    norms = {n: _norm(toeplitz(a, n)) for n in sizes}
    residuals = {n: abs(v - target) for n, v in norms.items()}
    seq = [norms[n] for n in sizes]
    monotone = all(x <= y + 1e-12 * max(1.0, target) for x, y in zip(seq, seq[1:]))
    last = sizes[-1]
    details = {"sup_norm": target, "norms": norms, "monotone": monotone, "all_residuals": residuals}
    return IdentityReport("norm_formula", sizes, {last: residuals[last]}, bound, details)


def cuntz_difference_nonzero(N: int, n: int) -> bool:
    return bool(np.any(cuntz_difference(N, n)))


__all__ = [
    "IdentityReport", "widom_check", "widom_terms", "hankel_product", "reflection_check",
    "cuntz_relations_check", "cuntz_projection_check", "norm_formula_check", "word_offset",
    "projection_size", "cuntz_difference_nonzero",
]
