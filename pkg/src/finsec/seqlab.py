"""Classification of matrix sequences from finite-horizon spectral data.

Every detector works on a finite window of sizes and returns a verdict that
carries the thresholds and numeric evidence it was based on.  Asymptotic
conditions (``liminf > 0``, ``lim = 0``, ``lim N = inf``) are replaced by
tail statistics and log-log trend slopes; ``Inconclusive`` is returned
whenever the data do not support a definite answer.
"""
from __future__ import annotations

import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .exceptions import NumericalBreakdown, TooFewIndices
from .matgen import MatrixSequence, weighted_compact
from .spectra import count_in_interval, hausdorff, singular_values, sym_eigenvalues
from .validation import (
    DEFAULT_MAX_N,
    check_fraction,
    check_horizon,
    check_normal,
    check_positive,
    check_square,
    tail_slice,
)

TAU_ZERO = 1e-6
TAU_GAP = 1e-3
TAU_STAB = 1e-6
TAU_COMPACT = 1e-2
TAIL = 0.25
PROBE_DEPTH = 8
SLOPE_TO_ZERO = -0.5
GROWTH_MIN = 4

STABLE = "Stable"
NOT_STABLE = "NotStable"
FREDHOLM = "Fredholm"
COMPACT = "Compact"
NOT_COMPACT = "NotCompact"
NOT_NORMALLY_SOLVABLE = "NotNormallySolvable"
FRACTAL = "Fractal"
NOT_FRACTAL = "NotFractal"
INCONCLUSIVE = "Inconclusive"

ESSENTIAL = "Essential"
TRANSIENT = "Transient"
MIXED = "Mixed"


# ---------------------------------------------------------------------------
# Data containers

@dataclass
class SingularProfile:
    """Nondecreasing singular values ``sigma_1 <= ... <= sigma_d`` per size."""

    sizes: list[int]
    sv: dict[int, np.ndarray]
    label: str = ""

    def __post_init__(self):
        self.sizes = sorted(int(n) for n in self.sizes)
        missing = [n for n in self.sizes if n not in self.sv]
        if missing:
            raise ValueError(f"profile lacks singular values for sizes {missing}")

    def __len__(self):
        return len(self.sizes)

    def sigma(self, k: int, sizes: Sequence[int] | None = None) -> np.ndarray:
        """``sigma_k`` (k-th smallest, 1-based) per size; NaN where ``k > d(n)``."""
        sizes = self.sizes if sizes is None else sizes
        return np.array([self.sv[n][k - 1] if k <= len(self.sv[n]) else np.nan for n in sizes])

    def Sigma(self, k: int, sizes: Sequence[int] | None = None) -> np.ndarray:
        """``Sigma_k`` (k-th largest, 1-based) per size; NaN where ``k > d(n)``."""
        sizes = self.sizes if sizes is None else sizes
        return np.array([self.sv[n][-k] if k <= len(self.sv[n]) else np.nan for n in sizes])

    def tail_sizes(self, fraction: float = TAIL, minimum: int = 1) -> list[int]:
        return self.sizes[tail_slice(len(self.sizes), fraction, minimum)]

    def restrict(self, sizes: Iterable[int]) -> "SingularProfile":
        sizes = sorted(set(int(n) for n in sizes))
        return SingularProfile(sizes, {n: self.sv[n] for n in sizes}, label=f"{self.label}[restricted]")

    def horizon(self) -> tuple[int, int, int]:
        return _horizon_of(self.sizes)

    def rows(self):
        """``(n, k, sigma_k)`` triples ordered by ``(n, k)``."""
        for n in self.sizes:
            for k, s in enumerate(self.sv[n], start=1):
                yield n, k, float(s)


def _horizon_of(sizes: Sequence[int]) -> tuple[int, int, int]:
    steps = set(np.diff(sizes).tolist())
    step = steps.pop() if len(steps) == 1 else 0
    return (int(sizes[0]), int(sizes[-1]), int(step) if len(sizes) > 1 else 1)


@dataclass(frozen=True)
class Verdict:
    """Classification outcome with the evidence and thresholds behind it."""

    classification: str
    evidence: dict = field(default_factory=dict)
    horizon: tuple = ()
    thresholds: dict = field(default_factory=dict)
    alpha: int | None = None
    ess_rank: int | float | None = None
    witness: tuple | None = None

    @property
    def label(self) -> str:
        if self.classification == FREDHOLM:
            return f"{FREDHOLM}({self.alpha})"
        if self.classification == COMPACT:
            r = "inf" if self.ess_rank == math.inf else self.ess_rank
            return f"{COMPACT}({r})"
        return self.classification

    @property
    def is_stable(self) -> bool:
        return self.classification == STABLE

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class PointClass:
    """Essential/transient classification of one real point."""

    lam: float
    cls: str
    counts: dict  # eps -> {n: N(A_n, (lam - eps, lam + eps))}
    witnesses: dict = field(default_factory=dict)  # group name -> class
    thresholds: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DichotomyReport:
    points: list[PointClass]

    @property
    def violations(self) -> list[PointClass]:
        return [p for p in self.points if p.cls in (MIXED, INCONCLUSIVE)]

    @property
    def holds(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class AlphaParityReport:
    kernel_dim: int
    counts: dict  # n -> number of singular values below tau_zero
    odd_counts: tuple
    even_counts: tuple
    tau_zero: float

    @property
    def passed(self) -> bool:
        d = self.kernel_dim
        return set(self.odd_counts) <= {d} and set(self.even_counts) <= {2 * d}


# ---------------------------------------------------------------------------
# Profiles and trends

def profile(seq: MatrixSequence, horizon, max_n: int = DEFAULT_MAX_N, threads: int = 1) -> SingularProfile:
    """Singular values of ``seq(n)`` for every size of the horizon."""
    sizes = check_horizon(horizon, max_n)

    def one(n):
        try:
            return singular_values(seq(n))
        except NumericalBreakdown as exc:
            raise NumericalBreakdown(f"n={n}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            values = list(pool.map(one, sizes))
    else:
        values = [one(n) for n in sizes]
    return SingularProfile(sizes, dict(zip(sizes, values)), label=seq.label)


def loglog_slope(sizes: Sequence[int], values: Sequence[float], floor: float = 0.0) -> float:
    """Least-squares slope of ``log value`` against ``log n``.

    Points with ``value <= floor`` (exact or numerical zeros) or NaN are
    ignored; NaN is returned when fewer than two points remain.
    """
    n = np.asarray(sizes, dtype=float)
    v = np.asarray(values, dtype=float)
    keep = np.isfinite(v) & (v > floor)
    if np.count_nonzero(keep) < 2:
        return float("nan")
    return float(np.polyfit(np.log(n[keep]), np.log(v[keep]), 1)[0])


def _tends_to_zero(sizes, values, tail_len, tau_zero, slope_max=SLOPE_TO_ZERO) -> tuple[bool, float, float]:
    """``(tends_to_zero, tail_max, slope)`` for one singular value series.

    The tail maximum uses the last ``tail_len`` points; the log-log slope is
    fitted over the whole series, because parity effects make short tail
    fits unreliable.
    """
    vals = np.asarray(values, dtype=float)
    tail_vals = vals[-tail_len:]
    tail_max = float(np.nanmax(tail_vals)) if np.any(np.isfinite(tail_vals)) else float("nan")
    if tail_max < tau_zero:
        return True, tail_max, float("nan")
    slope = loglog_slope(sizes, vals, floor=tau_zero)
    return bool(slope <= slope_max), tail_max, slope


def _thresholds(**kw) -> dict:
    return {k: v for k, v in kw.items()}


# ---------------------------------------------------------------------------
# Stability, Fredholm property, compactness

def classify_stability(p: SingularProfile, tau: float = TAU_STAB, tail: float = TAIL) -> Verdict:
    """``Stable`` iff ``sigma_1`` stays above ``tau`` on the tail without decaying.

    A tail minimum above ``tau`` is not enough on its own: a log-log slope
    of ``sigma_1`` at or below ``SLOPE_TO_ZERO`` marks the sequence unstable.
    """
    check_positive(tau, "tau")
    check_fraction(tail)
    if len(p) < 10:
        raise ValueError(f"stability needs a profile with >= 10 sizes, got {len(p)}")
    tail_n = p.tail_sizes(tail, minimum=3)
    s1 = p.sigma(1, tail_n)
    tail_min = float(np.min(s1))
    decaying, _, slope = _tends_to_zero(p.sizes, p.sigma(1), len(tail_n), tau)
    cls = STABLE if tail_min >= tau and not decaying else NOT_STABLE
    evidence = {"tail_min_sigma_1": tail_min, "slope_sigma_1": slope, "tail_sizes": len(tail_n)}
    return Verdict(cls, evidence, p.horizon(),
                   _thresholds(tau_stab=tau, tail=tail, slope_to_zero=SLOPE_TO_ZERO))


def classify_fredholm(p: SingularProfile, tau_zero: float = TAU_ZERO, tau_gap: float = TAU_GAP,
                      probe_depth: int = PROBE_DEPTH, tail: float = TAIL) -> Verdict:
    """Fredholm property and alpha-number from the smallest singular values.

    ``Fredholm(alpha)`` for the smallest ``alpha <= probe_depth`` such that
    ``sigma_1 .. sigma_alpha`` stay below ``tau_zero`` on the tail while
    ``sigma_{alpha+1}`` stays above ``tau_gap``.  Otherwise
    ``NotNormallySolvable`` when every ``sigma_k`` (``k <= probe_depth``)
    trends to zero, else ``Inconclusive``.
    """
    check_positive(tau_zero, "tau_zero")
    check_positive(tau_gap, "tau_gap")
    check_fraction(tail)
    if len(p) < 20:
        raise ValueError(f"Fredholm detection needs a profile with >= 20 sizes, got {len(p)}")
    tail_n = p.tail_sizes(tail, minimum=3)
    thresholds = _thresholds(tau_zero=tau_zero, tau_gap=tau_gap, probe_depth=probe_depth, tail=tail,
                             slope_to_zero=SLOPE_TO_ZERO)
    evidence: dict = {}
    to_zero = []
    for k in range(1, probe_depth + 2):
        vals = p.sigma(k)
        evidence[f"tail_max_sigma_{k}"] = float(np.nanmax(vals[-len(tail_n):]))
        evidence[f"tail_min_sigma_{k}"] = float(np.nanmin(vals[-len(tail_n):]))
        z, _, slope = _tends_to_zero(p.sizes, vals, len(tail_n), tau_zero)
        evidence[f"slope_sigma_{k}"] = slope
        to_zero.append(z)

    for alpha in range(0, probe_depth + 1):
        vanishing = all(evidence[f"tail_max_sigma_{j}"] < tau_zero for j in range(1, alpha + 1))
        if not vanishing:
            break
        if evidence[f"tail_min_sigma_{alpha + 1}"] >= tau_gap and not to_zero[alpha]:
            return Verdict(FREDHOLM, evidence, p.horizon(), thresholds, alpha=alpha)

    if all(to_zero[:probe_depth]):
        return Verdict(NOT_NORMALLY_SOLVABLE, evidence, p.horizon(), thresholds)
    return Verdict(INCONCLUSIVE, evidence, p.horizon(), thresholds)


def uniform_tail_sup(p: SingularProfile, k: int) -> float:
    """``sup_{n >= k} Sigma_k(A_n)`` over the sizes of the profile."""
    sizes = [n for n in p.sizes if n >= k]
    if not sizes:
        return float("nan")
    return float(np.nanmax(p.Sigma(k, sizes)))


def classify_compact(p: SingularProfile, tau: float = TAU_COMPACT, probe_depth: int = PROBE_DEPTH,
                     tau_zero: float = TAU_ZERO, tail: float = TAIL) -> Verdict:
    """Compactness and essential rank from the largest singular values.

    The essential rank is the smallest ``r < probe_depth`` for which
    ``Sigma_{r+1}(A_n)`` tends to 0 in ``n``.  The sequence is ``Compact``
    when such an ``r`` exists or when ``k -> sup_{n>=k} Sigma_k`` drops below
    ``tau`` within the probe depth; in the latter case without a finite ``r``
    the essential rank is reported as infinite.
    """
    check_positive(tau, "tau")
    check_fraction(tail)
    tail_n = p.tail_sizes(tail, minimum=3)
    thresholds = _thresholds(tau_compact=tau, probe_depth=probe_depth, tau_zero=tau_zero, tail=tail,
                             slope_to_zero=SLOPE_TO_ZERO)
    evidence: dict = {}
    ess_rank = None
    for k in range(1, probe_depth + 1):
        z, tail_max, slope = _tends_to_zero(p.sizes, p.Sigma(k), len(tail_n), tau_zero)
        evidence[f"tail_max_Sigma_{k}"] = tail_max
        evidence[f"slope_Sigma_{k}"] = slope
        evidence[f"sup_Sigma_{k}"] = uniform_tail_sup(p, k)
        if z and ess_rank is None:
            ess_rank = k - 1
    drops = [k for k in range(1, probe_depth + 1) if evidence[f"sup_Sigma_{k}"] < tau]
    evidence["sup_drop_k"] = drops[0] if drops else None
    if ess_rank is not None:
        return Verdict(COMPACT, evidence, p.horizon(), thresholds, ess_rank=ess_rank)
    if drops:
        return Verdict(COMPACT, evidence, p.horizon(), thresholds, ess_rank=math.inf)
    return Verdict(NOT_COMPACT, evidence, p.horizon(), thresholds)


# ---------------------------------------------------------------------------
# Fractality of normal sequences

def normal_spectra(seq: MatrixSequence, horizon, tol: float = 1e-10,
                   max_n: int = DEFAULT_MAX_N) -> dict[int, np.ndarray]:
    """Eigenvalues of ``seq(n)`` per size after checking each matrix is normal."""
    out = {}
    for n in check_horizon(horizon, max_n):
        M = check_normal(seq(n), tol, name=f"A_{n}")
        if np.allclose(M, M.conj().T, rtol=0, atol=tol):
            out[n] = np.linalg.eigvalsh(M)
        else:
            out[n] = np.linalg.eigvals(M)
    return out


def classify_fractal_normal(spectra: Mapping[int, np.ndarray], eps: float, tail: float = TAIL) -> Verdict:
    """Fractal iff all spectra of the tail window are pairwise ``eps``-close (Hausdorff)."""
    check_positive(eps, "eps")
    sizes = sorted(spectra)
    tail_n = sizes[tail_slice(len(sizes), tail, minimum=min(4, len(sizes)))]
    worst, witness = 0.0, None
    for i, n in enumerate(tail_n):
        for m in tail_n[i + 1:]:
            d = hausdorff(spectra[n], spectra[m])
            if d > worst:
                worst, witness = d, (n, m)
    evidence = {"max_pair_hausdorff": worst, "tail_sizes": len(tail_n)}
    thresholds = _thresholds(eps=eps, tail=tail)
    horizon = _horizon_of(sizes)
    if worst <= eps:
        return Verdict(FRACTAL, evidence, horizon, thresholds)
    return Verdict(NOT_FRACTAL, evidence, horizon, thresholds, witness=witness)


def norm_is_cauchy(p: SingularProfile, tol: float, tail: float = TAIL) -> bool:
    """Whether ``||A_n|| = Sigma_1(A_n)`` varies by at most ``tol`` over the tail."""
    vals = p.Sigma(1, p.tail_sizes(tail, minimum=2))
    return float(np.ptp(vals)) <= tol


def large_sv_clusters(p: SingularProfile, k: int, eps: float, tail: float = TAIL) -> int:
    """Number of ``eps``-clusters formed by ``Sigma_1..Sigma_k`` over the tail."""
    pts = np.sort(np.concatenate([p.Sigma(j, p.tail_sizes(tail)) for j in range(1, k + 1)]))
    pts = pts[np.isfinite(pts)]
    if pts.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(pts) > eps))


# ---------------------------------------------------------------------------
# Essential and transient points

def _series_class(sizes: Sequence[int], counts_by_eps: Mapping[float, Sequence[int]],
                  growth_min: int, tail: float) -> str | None:
    """``Essential``/``Transient`` for one index set, ``None`` if undecided."""
    if len(sizes) < 3:
        return None
    sl = tail_slice(len(sizes), tail, minimum=3)
    ns = np.asarray(sizes, dtype=float)[sl]
    essential = True
    for eps, counts in counts_by_eps.items():
        c = np.asarray(counts, dtype=float)[sl]
        slope = float(np.polyfit(ns, c, 1)[0]) if np.ptp(ns) > 0 else 0.0
        if not (slope > 0 and c.min() >= growth_min):
            essential = False
            break
    if essential:
        return ESSENTIAL
    for eps, counts in counts_by_eps.items():
        c = np.asarray(counts)[sl]
        if c.max() == c.min():
            return TRANSIENT
    return None


def parity_split(n: int) -> str:
    return "even" if n % 2 == 0 else "odd"


def sym_spectra(seq: MatrixSequence, horizon, max_n: int = DEFAULT_MAX_N) -> dict[int, np.ndarray]:
    return {n: sym_eigenvalues(seq(n)) for n in check_horizon(horizon, max_n)}


def classify_point(seq: MatrixSequence | None, lam: float, eps_grid: Sequence[float], horizon=None, *,
                   spectra: Mapping[int, np.ndarray] | None = None, growth_min: int = GROWTH_MIN,
                   tail: float = TAIL, split: Callable[[int], str] = parity_split,
                   max_n: int = DEFAULT_MAX_N) -> PointClass:
    """Classify ``lam`` as essential, transient or mixed for a self-adjoint sequence.

    Counts ``c_n(eps) = N(A_n, (lam - eps, lam + eps))`` are computed for
    each ``eps``.  The full series is ``Essential`` if for every ``eps`` the
    tail counts have positive slope and never drop below ``growth_min``;
    ``Transient`` if for some ``eps`` they are constant on the tail.
    Otherwise the sizes are split into groups by ``split`` (parity by
    default) and classified per group: all-transient groups give
    ``Transient``, all-essential groups ``Essential``, a mix of both
    ``Mixed``; anything else is ``Inconclusive``.
    """
    if spectra is None:
        if seq is None:
            raise ValueError("need either seq or spectra")
        spectra = sym_spectra(seq, horizon, max_n)
    if not eps_grid:
        raise ValueError("eps_grid must not be empty")
    sizes = sorted(spectra)
    counts = {float(e): {n: count_in_interval(spectra[n], lam - e, lam + e) for n in sizes} for e in eps_grid}
    thresholds = _thresholds(eps_grid=tuple(float(e) for e in eps_grid), growth_min=growth_min, tail=tail)

    def cls_of(ns):
        return _series_class(ns, {e: [c[n] for n in ns] for e, c in counts.items()}, growth_min, tail)

    groups: dict[str, list[int]] = {}
    for n in sizes:
        groups.setdefault(split(n), []).append(n)
    witnesses = {g: (cls_of(ns) or INCONCLUSIVE) for g, ns in groups.items()}

    full = cls_of(sizes)
    if full is None:
        kinds = set(witnesses.values())
        if kinds == {TRANSIENT}:
            full = TRANSIENT
        elif kinds == {ESSENTIAL}:
            full = ESSENTIAL
        elif kinds == {ESSENTIAL, TRANSIENT}:
            full = MIXED
        else:
            full = INCONCLUSIVE
    return PointClass(float(lam), full, counts, witnesses, thresholds)


def dichotomy_scan(seq: MatrixSequence | None, lam_grid: Sequence[float], eps_grid: Sequence[float],
                   horizon=None, *, spectra: Mapping[int, np.ndarray] | None = None,
                   **kwargs) -> DichotomyReport:
    """Classify every point of ``lam_grid``; Mixed/Inconclusive points are dichotomy violations."""
    if spectra is None:
        spectra = sym_spectra(seq, horizon, kwargs.pop("max_n", DEFAULT_MAX_N))
    return DichotomyReport([classify_point(None, lam, eps_grid, spectra=spectra, **kwargs) for lam in lam_grid])


# ---------------------------------------------------------------------------
# Restriction, stabilization, weights

def extract_fractal_subsequence(p: SingularProfile, probe_depth: int = PROBE_DEPTH, tol: float = 1e-6,
                                tail: float = TAIL) -> list[int]:
    """Sizes on which the ``probe_depth`` smallest and largest singular values settle.

    Diagonal refinement: for ``k = 1 .. probe_depth`` and for each of
    ``sigma_k`` and ``Sigma_k`` in turn, keep the sizes whose value lies
    within ``tol`` of the lower median of the current tail.
    """
    kept = list(p.sizes)
    for k in range(1, probe_depth + 1):
        for series in (p.sigma, p.Sigma):
            vals = series(k, kept)
            tail_vals = vals[tail_slice(len(kept), tail, minimum=1)]
            tail_vals = tail_vals[np.isfinite(tail_vals)]
            if tail_vals.size == 0:
                continue
            ref = statistics.median_low(tail_vals.tolist())
            kept = [n for n, v in zip(kept, vals) if not np.isfinite(v) or abs(v - ref) <= tol]
            if len(kept) < 3:
                raise TooFewIndices(f"only {len(kept)} sizes survive at k={k}")
    return kept


def stabilizing_perturbation(M, alpha: int) -> np.ndarray:
    """Rank-``alpha`` matrix lifting the ``alpha`` smallest singular values to ``sigma_{alpha+1}``."""
    M = check_square(M)
    if alpha == 0:
        return np.zeros_like(M)
    n = M.shape[0]
    if alpha >= n:
        raise ValueError(f"alpha={alpha} must be smaller than the size {n}")
    U, s, Vh = np.linalg.svd(M)
    low = s[n - alpha:]  # descending order: the alpha smallest
    lift = s[n - alpha - 1] - low
    return (U[:, n - alpha:] * lift) @ Vh[n - alpha:, :]


def stabilize(seq: MatrixSequence, alpha: int) -> MatrixSequence:
    """``A_n + K_n`` with ``K_n`` from :func:`stabilizing_perturbation`."""
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    return seq.map(lambda M, n: M + stabilizing_perturbation(M, alpha), label=f"{seq.label}+K(alpha={alpha})")


def alpha_parity_check(block, horizon, tau_zero: float = TAU_ZERO, tail: float = TAIL,
                       max_n: int = DEFAULT_MAX_N) -> AlphaParityReport:
    """Vanishing singular values of ``I + P_n K P_n (+ R_n K R_n for even n)``.

    ``K`` is given by its finite leading block.  The kernel dimension of
    ``I + K`` is computed from the block itself.
    """
    block = check_square(np.asarray(block), "block")
    m = block.shape[0]
    d = int(np.count_nonzero(singular_values(np.eye(m) + block) < tau_zero))
    sizes = check_horizon(horizon, max_n)
    counts = {n: int(np.count_nonzero(singular_values(weighted_compact(block, n)) < tau_zero)) for n in sizes}
    tail_n = sizes[tail_slice(len(sizes), tail, minimum=min(4, len(sizes)))]
    odd = tuple(sorted({counts[n] for n in tail_n if n % 2}))
    even = tuple(sorted({counts[n] for n in tail_n if n % 2 == 0}))
    return AlphaParityReport(d, counts, odd, even, tau_zero)
