"""Finite sections of structured operators on l^2.

All generators are closed-form per entry and bit-reproducible.  Sizes are
``n x n`` leading blocks ``P_n A P_n`` of an infinite matrix indexed from 0
(except the Arveson permutation, whose combinatorics are stated 1-based).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .exceptions import NegativeSquare, NotInterlacing, SpectrumMismatch
from .symbols import FourierSymbol
from .validation import check_self_adjoint, check_square


def _identity(n: int) -> int:
    return n


@dataclass(frozen=True)
class MatrixSequence:
    """A sequence ``n -> A_n`` of ``dimension(n) x dimension(n)`` matrices."""

    generate: Callable[[int], np.ndarray]
    label: str = ""
    dimension: Callable[[int], int] = _identity

    def __call__(self, n: int) -> np.ndarray:
        M = np.asarray(self.generate(n))
        d = self.dimension(n)
        if M.shape != (d, d):
            raise ValueError(f"{self.label or 'sequence'}: generate({n}) has shape {M.shape}, expected {(d, d)}")
        return M

    def restrict(self, eta: Callable[[int], int], label: str | None = None) -> "MatrixSequence":
        """Subsequence ``n -> A_{eta(n)}``."""
        gen, dim = self.generate, self.dimension
        return MatrixSequence(
            generate=lambda n: gen(eta(n)),
            dimension=lambda n: dim(eta(n)),
            label=label or f"{self.label}[restricted]",
        )

    def map(self, fn: Callable[[np.ndarray, int], np.ndarray], label: str | None = None) -> "MatrixSequence":
        gen = self.generate
        return MatrixSequence(generate=lambda n: fn(gen(n), n), dimension=self.dimension,
                              label=label or self.label)


# ---------------------------------------------------------------------------
# Toeplitz / Hankel

def _dtype_for(a: FourierSymbol):
    return float if a.is_real_coefficients else complex


def toeplitz(a: FourierSymbol, n: int) -> np.ndarray:
    """``P_n T(a) P_n``: entry ``(i, j) = a_{i-j}``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    M = np.zeros((n, n), dtype=_dtype_for(a))
    for k, v in a.coeffs.items():
        if abs(k) < n:
            idx = np.arange(n - abs(k))
            if k >= 0:
                M[idx + k, idx] = v.real if M.dtype == float else v
            else:
                M[idx, idx - k] = v.real if M.dtype == float else v
    return M


def hankel(a: FourierSymbol, n: int) -> np.ndarray:
    """``P_n H(a) P_n``: entry ``(i, j) = a_{i+j+1}``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    M = np.zeros((n, n), dtype=_dtype_for(a))
    i, j = np.indices((n, n))
    s = i + j + 1
    for k, v in a.coeffs.items():
        if k >= 1:
            M[s == k] = v.real if M.dtype == float else v
    return M


def reflect_conjugate(M) -> np.ndarray:
    """``R_n M R_n``: entry ``(i, j) = M[n-1-i, n-1-j]``."""
    M = check_square(M)
    return M[::-1, ::-1].copy()


def finite_rank(vectors: Sequence[tuple[np.ndarray, np.ndarray]], n: int) -> np.ndarray:
    """Leading ``n x n`` block of ``sum_i left_i right_i^*``.

    Vectors shorter than ``n`` are zero-padded, longer ones truncated.
    """
    M = np.zeros((n, n), dtype=complex)
    for left, right in vectors:
        u = _fit(np.asarray(left, dtype=complex), n)
        v = _fit(np.asarray(right, dtype=complex), n)
        M += np.outer(u, v.conj())
    if not np.any(M.imag):
        return M.real.copy()
    return M


def _fit(v: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=v.dtype)
    m = min(n, v.size)
    out[:m] = v[:m]
    return out


def embed(block, n: int) -> np.ndarray:
    """``P_n K P_n`` for an operator ``K`` supported on a finite leading block."""
    block = check_square(block, "block")
    m = min(n, block.shape[0])
    M = np.zeros((n, n), dtype=block.dtype)
    M[:m, :m] = block[:m, :m]
    return M


# ---------------------------------------------------------------------------
# Cuntz isometries

def cuntz_isometry(N: int, i: int, n: int) -> np.ndarray:
    """``P_n S_i P_n`` where ``S_i e_r = e_{rN+i}``."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if not 0 <= i < N:
        raise ValueError(f"letter i={i} outside [0, {N})")
    M = np.zeros((n, n))
    r = np.arange(n)
    k = r * N + i
    keep = k < n
    M[k[keep], r[keep]] = 1.0
    return M


def cuntz_word(N: int, word: Sequence[int], n: int) -> np.ndarray:
    """Product of truncated factors ``P_n S_{i_1} P_n ... P_n S_{i_k} P_n``."""
    M = np.eye(n)
    for i in word:
        M = M @ cuntz_isometry(N, i, n)
    return M


def cuntz_difference(N: int, n: int) -> np.ndarray:
    """``P_n S_0^* P_n S_0 P_n - P_n S_1^* P_n S_1 P_n``."""
    S0, S1 = cuntz_isometry(N, 0, n), cuntz_isometry(N, 1, n)
    return S0.T @ S0 - S1.T @ S1


# ---------------------------------------------------------------------------
# Arveson's permutation

def _o1_count_upto(c: int) -> int:
    """Number of ``16 j^2 + 1 <= c`` with ``j >= 1`` (the odd set f(E_1))."""
    if c < 17:
        return 0
    return math.isqrt((c - 1) // 16)


def _o2_element(m: int) -> int:
    """0-based ``m``-th element of the odd numbers outside ``f(E_1)``."""
    c = 2 * m + 1
    while True:
        nxt = 2 * (m + _o1_count_upto(c)) + 1
        if nxt == c:
            return c
        c = nxt


def arveson_pi(k: int) -> int:
    """Involution of ``{1, 2, ...}`` pairing evens with odds.

    ``4j <-> 16 j^2 + 1``; the remaining evens ``2, 6, 10, ...`` are matched
    in increasing order with the remaining odds ``1, 3, 5, ..., 15, 19, ...``.
    """
    if k < 1:
        raise ValueError(f"index must be >= 1, got {k}")
    if k % 4 == 0:
        return k * k + 1
    if k % 2 == 0:
        return _o2_element((k - 2) // 4)
    q, rem = divmod(k - 1, 16)
    if rem == 0 and q > 0:
        j = math.isqrt(q)
        if j * j == q:
            return 4 * j
    m = (k - 1) // 2 - _o1_count_upto(k - 1)
    return 4 * m + 2


def arveson_permutation(n: int) -> np.ndarray:
    """``P_n A P_n`` with ``A e_k = e_{pi(k)}`` (1-based ``k``)."""
    M = np.zeros((n, n))
    for k in range(1, n + 1):
        p = arveson_pi(k)
        if p <= n:
            M[p - 1, k - 1] = 1.0
    return M


# ---------------------------------------------------------------------------
# Block flip (non-fractal band operator)

def block_flip(n: int) -> np.ndarray:
    """Leading block of ``diag([[0,1],[1,0]], [[0,1],[1,0]], ...)``."""
    M = np.zeros((n, n))
    idx = np.arange(0, n - 1, 2)
    M[idx, idx + 1] = 1.0
    M[idx + 1, idx] = 1.0
    return M


# ---------------------------------------------------------------------------
# Interlacing synthesis

@dataclass
class InterlaceChain:
    """Ordered tuples ``alpha^(1), ..., alpha^(N)`` with ``len(alpha^(n)) == n``."""

    tuples: list[np.ndarray]
    bound: float = field(default=None)

    def __post_init__(self):
        self.tuples = [np.asarray(t, dtype=float) for t in self.tuples]
        if self.bound is None:
            self.bound = max((float(np.max(np.abs(t))) for t in self.tuples if t.size), default=0.0)

    def __len__(self):
        return len(self.tuples)

    def validate(self, tol: float = 0.0) -> None:
        """Raise ``NotInterlacing`` unless every invariant of the chain holds."""
        for n, t in enumerate(self.tuples, start=1):
            if t.size != n:
                raise NotInterlacing(f"level {n}: tuple has length {t.size}")
            if np.any(np.diff(t) < -tol):
                raise NotInterlacing(f"level {n}: tuple is not nondecreasing")
            if np.any(np.abs(t) > self.bound + tol):
                raise NotInterlacing(f"level {n}: entries exceed bound {self.bound}")
            if n > 1:
                check_interlacing(self.tuples[n - 2], t, tol, level=n)


def check_interlacing(alpha, beta, tol: float = 0.0, level: int | None = None) -> None:
    """Check ``beta_1 <= alpha_1 <= beta_2 <= ... <= alpha_n <= beta_{n+1}``."""
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    where = f" at level {level}" if level is not None else ""
    if beta.size != alpha.size + 1:
        raise NotInterlacing(f"sizes {alpha.size} and {beta.size} cannot interlace{where}")
    if np.any(beta[:-1] > alpha + tol) or np.any(alpha > beta[1:] + tol):
        raise NotInterlacing(f"tuples do not interlace{where}")


def _cluster(values: np.ndarray, tol: float) -> list[tuple[float, list[int]]]:
    """Group sorted values into runs whose consecutive gaps are <= tol."""
    groups: list[list[int]] = []
    for j, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] <= tol:
            groups[-1].append(j)
        else:
            groups.append([j])
    return [(float(np.mean(values[g])), g) for g in groups]


def _border(alpha: np.ndarray, beta: np.ndarray, tol: float) -> np.ndarray:
    """Nonnegative border ``z`` such that ``[[diag(alpha), z], [z^T, c]]`` has eigenvalues ``beta``."""
    clusters = _cluster(alpha, tol)
    gammas = np.array([g for g, _ in clusters])
    remaining = list(beta)
    for gamma, members in clusters:
        for _ in range(len(members) - 1):
            j = int(np.argmin([abs(b - gamma) for b in remaining]))
            if abs(remaining[j] - gamma) > tol:
                raise NotInterlacing(f"beta lacks a repeated copy of eigenvalue {gamma:.17g}")
            remaining.pop(j)
    delta = np.array(remaining)
    scale = max(1.0, float(np.max(np.abs(beta))), float(np.max(np.abs(alpha))))
    z = np.zeros(alpha.size)
    for i0, (gamma, members) in enumerate(clusters):
        others = np.delete(gammas, i0) - gamma
        # -k * x^2 * prod_{j != i0}(gamma_j - gamma_i0) = prod_i(delta_i - gamma_i0)
        denom = -len(members) * np.prod(others)
        x2 = np.prod(delta - gamma) / denom
        if x2 < 0:
            if x2 < -tol * scale:
                raise NegativeSquare(f"x^2 = {x2:.3g} < 0 at eigenvalue {gamma:.17g}")
            x2 = 0.0
        z[members] = math.sqrt(x2)
    return z


def interlace_extend(A, alpha, beta, tol: float | None = None, check_tol: float | None = None) -> np.ndarray:
    """Border a self-adjoint ``A`` to a matrix with prescribed spectrum.

    Parameters
    ----------
    A : (n, n) array
        Self-adjoint matrix with ordered eigenvalues ``alpha``.
    alpha : (n,) array
        Ordered eigenvalues of ``A``.
    beta : (n + 1,) array
        Ordered target eigenvalues, interlacing ``alpha``.
    tol : float, optional
        Grouping tolerance for equal eigenvalues; defaults to
        ``1e-8 * max(1, max|beta|)``.
    check_tol : float, optional
        Allowed deviation of ``eig(A)`` from ``alpha``; defaults to
        ``1e-6 * max(1, max|beta|)``.

    Returns
    -------
    B : (n + 1, n + 1) array
        Self-adjoint, ``B[:n, :n]`` is exactly ``A`` and ``eig(B) = beta``.

    Raises
    ------
    NotInterlacing, SpectrumMismatch, NegativeSquare
    """
    A = check_self_adjoint(A, name="A")
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    n = A.shape[0]
    if alpha.size != n:
        raise SpectrumMismatch(f"alpha has length {alpha.size}, A has size {n}")
    bound = max(1.0, float(np.max(np.abs(beta))), float(np.max(np.abs(alpha), initial=0.0)))
    tol = 1e-8 * bound if tol is None else tol
    check_tol = 1e-6 * bound if check_tol is None else check_tol
    if np.any(np.diff(alpha) < -tol) or np.any(np.diff(beta) < -tol):
        raise NotInterlacing("alpha and beta must be nondecreasing")
    check_interlacing(alpha, beta, tol)

    w, U = np.linalg.eigh(A)
    err = float(np.max(np.abs(w - alpha)))
    if err > check_tol:
        raise SpectrumMismatch(f"eig(A) differs from alpha by {err:.3g}")

    z = _border(alpha, beta, tol)
    B = np.zeros((n + 1, n + 1), dtype=np.result_type(A.dtype, float))
    B[:n, :n] = A
    col = U @ z
    B[:n, n] = col
    B[n, :n] = col.conj()
    B[n, n] = float(np.sum(beta) - np.sum(alpha))
    return B


def interlace_chain(chain: InterlaceChain, tol: float | None = None) -> MatrixSequence:
    """Nested self-adjoint matrices ``A_n`` with ``eig(A_n) = alpha^(n)``.

    ``A_n`` is the leading block of ``A_{n+1}``; the whole chain is built
    once and every ``generate(n)`` slices the final matrix.
    """
    chain.validate(tol=1e-8 * max(1.0, chain.bound))
    A = np.array([[chain.tuples[0][0]]])
    for level in range(1, len(chain)):
        try:
            A = interlace_extend(A, chain.tuples[level - 1], chain.tuples[level], tol=tol)
        except (NotInterlacing, SpectrumMismatch, NegativeSquare) as exc:
            raise type(exc)(f"level {level + 1}: {exc}") from exc
    final = A
    size = final.shape[0]

    def generate(n: int) -> np.ndarray:
        if not 1 <= n <= size:
            raise ValueError(f"interlace chain defined for 1 <= n <= {size}, got {n}")
        return final[:n, :n].copy()

    return MatrixSequence(generate=generate, label="interlace_chain")


def exf340_tuples(N: int) -> InterlaceChain:
    """Chain whose even sections have spectrum {0,1,3} and odd ones {0,2,3}."""
    if N < 4:
        raise ValueError(f"N must be >= 4, got {N}")
    tuples = [np.array([1.0]), np.array([0.0, 2.0]), np.array([0.0, 1.0, 3.0])]
    for n in range(4, N + 1):
        k, odd = divmod(n, 2)
        if odd:
            t = [0.0] * (k + 1) + [2.0] + [3.0] * (n - k - 2)
        else:
            t = [0.0] * k + [1.0] + [3.0] * (n - k - 1)
        tuples.append(np.array(t))
    return InterlaceChain(tuples, bound=3.0)


def random_interlace_chain(length: int, bound: float, rng: np.random.Generator) -> InterlaceChain:
    """Random bounded chain from the leading blocks of a random symmetric matrix.

    Drawing values uniformly inside interlacing cells squeezes neighbours
    together geometrically; spectra of nested sections of a Gaussian
    symmetric matrix (scaled to norm ``0.9 * bound``) keep them separated.
    """
    G = rng.standard_normal((length, length))
    G = (G + G.T) / 2
    G *= 0.9 * bound / np.linalg.norm(G, 2)
    tuples = [np.linalg.eigvalsh(G[:n, :n]) for n in range(1, length + 1)]
    return InterlaceChain(tuples, bound=bound)


# ---------------------------------------------------------------------------
# Ready-made sequences

def toeplitz_sequence(a: FourierSymbol) -> MatrixSequence:
    return MatrixSequence(generate=lambda n: toeplitz(a, n), label=f"toeplitz{a!r}")


def compact_sequence(block) -> MatrixSequence:
    """``(P_n K P_n)`` for ``K`` supported on a finite leading block."""
    block = np.array(block)
    return MatrixSequence(generate=lambda n: embed(block, n), label="compact")


def zero_sequence() -> MatrixSequence:
    return MatrixSequence(generate=lambda n: np.zeros((n, n)), label="zero")


def identity_sequence() -> MatrixSequence:
    return MatrixSequence(generate=lambda n: np.eye(n), label="identity")


def geometric_diagonal_sequence(ratio: float = 0.5) -> MatrixSequence:
    """``diag(1, r, r^2, ...)`` truncations."""
    return MatrixSequence(generate=lambda n: np.diag(ratio ** np.arange(n, dtype=float)),
                          label=f"diag({ratio}^j)")


def alternating_diagonal(n: int) -> np.ndarray:
    """``diag(0, ..., 0, 1)`` for even ``n``; ``diag(0, 1, ..., 1)`` for odd ``n``."""
    d = np.zeros(n)
    if n % 2 == 0:
        d[-1] = 1.0
    else:
        d[1:] = 1.0
    return np.diag(d)


def weighted_compact(block, n: int) -> np.ndarray:
    """``I_n + P_n K P_n`` (odd ``n``) or ``I_n + P_n K P_n + R_n K R_n`` (even ``n``)."""
    M = np.eye(n) + embed(block, n)
    if n % 2 == 0:
        M = M + reflect_conjugate(embed(block, n))
    return M


SEQUENCES: dict[str, Callable[..., MatrixSequence]] = {
    "toeplitz": toeplitz_sequence,
    "hankel": lambda a: MatrixSequence(generate=lambda n: hankel(a, n), label=f"hankel{a!r}"),
    "block_flip": lambda: MatrixSequence(generate=block_flip, label="block_flip"),
    "arveson": lambda: MatrixSequence(generate=arveson_permutation, label="arveson"),
    "cuntz_difference": lambda N=2: MatrixSequence(generate=lambda n: cuntz_difference(N, n),
                                                   label=f"cuntz_difference(N={N})"),
    "alternating_diag": lambda: MatrixSequence(generate=alternating_diagonal, label="alternating_diag"),
    "diag_geometric": geometric_diagonal_sequence,
    "zero": zero_sequence,
    "identity": identity_sequence,
}


@lru_cache(maxsize=8)
def _exf340_sequence(N: int) -> MatrixSequence:
    return interlace_chain(exf340_tuples(N))


def exf340_sequence(N: int) -> MatrixSequence:
    """Cached nested matrices for the {0,1,3}/{0,2,3} chain of length ``N``."""
    return _exf340_sequence(int(N))
