"""scikit-learn style wrappers around the sequence classifiers.

Samples are matrix sequences (or precomputed singular value profiles), so
``X`` is a list of :class:`MatrixSequence` / :class:`SingularProfile`
objects rather than a numeric array.  ``fit`` only validates the
parameters; every classifier is rule based and learns nothing from data.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import seqlab
from .matgen import MatrixSequence
from .validation import DEFAULT_MAX_N, check_fraction, check_horizon, check_positive


def _as_list(X) -> list:
    if isinstance(X, (MatrixSequence, seqlab.SingularProfile)):
        return [X]
    items = list(X)
    for i, x in enumerate(items):
        if not isinstance(x, (MatrixSequence, seqlab.SingularProfile)):
            raise TypeError(f"sample {i} is a {type(x).__name__}, expected MatrixSequence or SingularProfile")
    return items


class SingularProfiler(TransformerMixin, BaseEstimator):
    """Map each sequence to its singular value profile over ``horizon``."""

    def __init__(self, horizon=(32, 1024, 32), max_n: int = DEFAULT_MAX_N, threads: int = 1):
        self.horizon = horizon
        self.max_n = max_n
        self.threads = threads

    def fit(self, X=None, y=None):
        self.sizes_ = check_horizon(self.horizon, self.max_n)
        return self

    def transform(self, X) -> list:
        check_is_fitted(self, "sizes_")
        out = []
        for x in _as_list(X):
            if isinstance(x, seqlab.SingularProfile):
                out.append(x.restrict(n for n in self.sizes_ if n in x.sv))
            else:
                out.append(seqlab.profile(x, self.sizes_, self.max_n, self.threads))
        return out


class _ProfileClassifier(ClassifierMixin, BaseEstimator):
    """Shared plumbing: profile the samples, classify each, keep the verdicts."""

    def _validate(self):
        check_horizon(self.horizon, self.max_n)
        check_fraction(self.tail)

    def fit(self, X=None, y=None):
        self._validate()
        self.thresholds_ = {k: v for k, v in self.get_params().items() if k not in ("horizon", "max_n", "threads")}
        return self

    def _profiles(self, X) -> list:
        return SingularProfiler(self.horizon, self.max_n, getattr(self, "threads", 1)).fit().transform(X)

    def verdicts(self, X) -> list:
        check_is_fitted(self, "thresholds_")
        return [self._classify(p) for p in self._profiles(X)]

    def predict(self, X) -> np.ndarray:
        self.verdicts_ = self.verdicts(X)
        return np.array([v.label for v in self.verdicts_], dtype=object)


class StabilityClassifier(_ProfileClassifier):
    def __init__(self, horizon=(32, 1024, 32), tau: float = seqlab.TAU_STAB, tail: float = seqlab.TAIL,
                 max_n: int = DEFAULT_MAX_N, threads: int = 1):
        self.horizon = horizon
        self.tau = tau
        self.tail = tail
        self.max_n = max_n
        self.threads = threads

    def _validate(self):
        super()._validate()
        check_positive(self.tau, "tau")

    def _classify(self, p):
        return seqlab.classify_stability(p, self.tau, self.tail)


class FredholmClassifier(_ProfileClassifier):
    """Labels ``Fredholm(alpha)``, ``NotNormallySolvable`` or ``Inconclusive``."""

    def __init__(self, horizon=(32, 1024, 32), tau_zero: float = seqlab.TAU_ZERO, tau_gap: float = seqlab.TAU_GAP,
                 probe_depth: int = seqlab.PROBE_DEPTH, tail: float = seqlab.TAIL,
                 max_n: int = DEFAULT_MAX_N, threads: int = 1):
        self.horizon = horizon
        self.tau_zero = tau_zero
        self.tau_gap = tau_gap
        self.probe_depth = probe_depth
        self.tail = tail
        self.max_n = max_n
        self.threads = threads

    def _validate(self):
        super()._validate()
        check_positive(self.tau_zero, "tau_zero")
        check_positive(self.tau_gap, "tau_gap")
        check_positive(self.probe_depth, "probe_depth")

    def _classify(self, p):
        return seqlab.classify_fredholm(p, self.tau_zero, self.tau_gap, self.probe_depth, self.tail)

    def alpha(self, X) -> np.ndarray:
        """``alpha`` per sample, ``-1`` where the sample is not Fredholm."""
        return np.array([-1 if v.alpha is None else v.alpha for v in self.verdicts(X)])


class CompactnessClassifier(_ProfileClassifier):
    def __init__(self, horizon=(32, 1024, 32), tau: float = seqlab.TAU_COMPACT, probe_depth: int = seqlab.PROBE_DEPTH,
                 tau_zero: float = seqlab.TAU_ZERO, tail: float = seqlab.TAIL,
                 max_n: int = DEFAULT_MAX_N, threads: int = 1):
        self.horizon = horizon
        self.tau = tau
        self.probe_depth = probe_depth
        self.tau_zero = tau_zero
        self.tail = tail
        self.max_n = max_n
        self.threads = threads

    def _validate(self):
        super()._validate()
        check_positive(self.tau, "tau")
        check_positive(self.tau_zero, "tau_zero")

    def _classify(self, p):
        return seqlab.classify_compact(p, self.tau, self.probe_depth, self.tau_zero, self.tail)


class FractalSubsequenceSelector(TransformerMixin, BaseEstimator):
    """Learn the sizes on which the extreme singular values settle; restrict profiles to them."""

    def __init__(self, probe_depth: int = seqlab.PROBE_DEPTH, tol: float = 1e-6, tail: float = seqlab.TAIL):
        self.probe_depth = probe_depth
        self.tol = tol
        self.tail = tail

    def fit(self, X, y=None):
        profiles = _as_list(X)
        if len(profiles) != 1 or not isinstance(profiles[0], seqlab.SingularProfile):
            raise TypeError("fit expects exactly one SingularProfile")
        check_positive(self.tol, "tol")
        self.support_ = seqlab.extract_fractal_subsequence(profiles[0], self.probe_depth, self.tol, self.tail)
        return self

    def transform(self, X) -> list:
        check_is_fitted(self, "support_")
        return [p.restrict(n for n in self.support_ if n in p.sv) for p in _as_list(X)]


class PointClassifier(ClassifierMixin, BaseEstimator):
    """Essential/transient labels for real points of one self-adjoint sequence.

    ``fit`` computes the spectra of the sequence over ``horizon``;
    ``predict`` takes the points ``lambda`` as ``X``.
    """

    def __init__(self, horizon=(100, 1000, 50), eps_grid=(0.05, 0.1, 0.2), growth_min: int = seqlab.GROWTH_MIN,
                 tail: float = seqlab.TAIL, max_n: int = DEFAULT_MAX_N):
        self.horizon = horizon
        self.eps_grid = eps_grid
        self.growth_min = growth_min
        self.tail = tail
        self.max_n = max_n

    def fit(self, X, y=None):
        if not isinstance(X, MatrixSequence):
            raise TypeError("fit expects a MatrixSequence")
        for e in self.eps_grid:
            check_positive(e, "eps")
        self.spectra_ = seqlab.sym_spectra(X, self.horizon, self.max_n)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "spectra_")
        lams = np.ravel(np.asarray(X, dtype=float))
        self.points_ = [seqlab.classify_point(None, lam, self.eps_grid, spectra=self.spectra_,
                                              growth_min=self.growth_min, tail=self.tail) for lam in lams]
        return np.array([p.cls for p in self.points_], dtype=object)
