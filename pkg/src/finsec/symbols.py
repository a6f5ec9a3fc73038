"""Trigonometric polynomial symbols on the unit circle.

A symbol is stored by its Fourier coefficients ``{k: a_k}`` with finite
support, so that ``a(e^{i theta}) = sum_k a_k e^{i k theta}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .exceptions import ZeroOnCircle

DEFAULT_SAMPLES = 4096
ZERO_TOL = 1e-9


def _canonical(coeffs: Mapping[int, complex]) -> dict[int, complex]:
    out = {}
    for k, v in coeffs.items():
        v = complex(v)
        if v != 0:
            out[int(k)] = v
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class FourierSymbol:
    """Finitely supported map from integer frequency to complex coefficient.

    Zero coefficients are dropped on construction, so two symbols compare
    equal exactly when their coefficient maps agree.
    """

    coeffs: dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _canonical(self.coeffs))

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, float, float]]) -> "FourierSymbol":
        """Build from ``(k, re, im)`` triples; repeated frequencies add up."""
        acc: dict[int, complex] = {}
        for k, re, im in triples:
            acc[int(k)] = acc.get(int(k), 0) + complex(float(re), float(im))
        return cls(acc)

    def to_triples(self) -> list[tuple[int, float, float]]:
        return [(k, v.real, v.imag) for k, v in self.coeffs.items()]

    def __getitem__(self, k: int) -> complex:
        return self.coeffs.get(k, 0j)

    def __eq__(self, other):
        if not isinstance(other, FourierSymbol):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        body = ", ".join(f"{k}: {_fmt(v)}" for k, v in self.coeffs.items())
        return f"FourierSymbol({{{body}}})"

    @property
    def max_frequency(self) -> int:
        """Largest ``|k|`` in the support (0 for the zero symbol)."""
        return max((abs(k) for k in self.coeffs), default=0)

    @property
    def is_real_coefficients(self) -> bool:
        return all(v.imag == 0 for v in self.coeffs.values())

    def scale(self, c: complex) -> "FourierSymbol":
        return FourierSymbol({k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, FourierSymbol):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__


def _fmt(v: complex):
    return v.real if v.imag == 0 else v


def evaluate(a: FourierSymbol, theta):
    """Value of ``a`` at ``e^{i theta}``; ``theta`` may be a scalar or an array."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape, dtype=complex)
    for k, v in a.coeffs.items():
        out += v * np.exp(1j * k * theta)
    return out[()] if out.ndim == 0 else out


def flip(a: FourierSymbol) -> FourierSymbol:
    """Symbol ``t -> a(1/t)``: coefficient at ``k`` becomes coefficient at ``-k``."""
    return FourierSymbol({-k: v for k, v in a.coeffs.items()})


def conj_flip(a: FourierSymbol) -> FourierSymbol:
    """Symbol of the adjoint Toeplitz operator, ``k -> conj(a_{-k})``."""
    return FourierSymbol({-k: v.conjugate() for k, v in a.coeffs.items()})


def multiply(a: FourierSymbol, b: FourierSymbol) -> FourierSymbol:
    """Pointwise product, i.e. convolution of the coefficient maps."""
    out: dict[int, complex] = {}
    for k, u in a.coeffs.items():
        for j, v in b.coeffs.items():
            out[k + j] = out.get(k + j, 0) + u * v
    return FourierSymbol(out)


def _grid(samples: int) -> np.ndarray:
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    return 2 * np.pi * np.arange(samples) / samples


def winding_number(a: FourierSymbol, samples: int = DEFAULT_SAMPLES, tol: float = ZERO_TOL) -> int:
    """Winding number of ``a`` around 0 by phase unwrapping on a uniform grid.

    Raises
    ------
    ZeroOnCircle
        If ``|a|`` drops below ``tol`` at some grid point.
    """
    vals = evaluate(a, _grid(samples))
    if np.min(np.abs(vals)) < tol:
        raise ZeroOnCircle(f"symbol {a!r} vanishes on the unit circle (|a| < {tol})")
    phase = np.unwrap(np.angle(np.append(vals, vals[0])))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))


def sup_norm(a: FourierSymbol, samples: int = DEFAULT_SAMPLES) -> float:
    """Max of ``|a|`` over the sample grid (a lower bound on the true sup norm)."""
    if samples < 2 * a.max_frequency + 1:
        raise ValueError(
            f"samples={samples} too small for frequency {a.max_frequency}; "
            f"need at least {2 * a.max_frequency + 1}"
        )
    if not a.coeffs:
        return 0.0
    return float(np.max(np.abs(evaluate(a, _grid(samples)))))


def random_symbol(rng: np.random.Generator, degree: int, complex_coeffs: bool = True) -> FourierSymbol:
    """Random trig polynomial with frequencies in ``[-degree, degree]``."""
    ks = np.arange(-degree, degree + 1)
    re = rng.standard_normal(ks.size)
    im = rng.standard_normal(ks.size) if complex_coeffs else np.zeros(ks.size)
    return FourierSymbol({int(k): complex(x, y) for k, x, y in zip(ks, re, im)})
