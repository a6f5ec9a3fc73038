import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsec.exceptions import ZeroOnCircle
from finsec.symbols import (
    FourierSymbol, conj_flip, evaluate, flip, multiply, random_symbol, sup_norm, winding_number,
)

coeff = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
symbols = st.dictionaries(st.integers(-6, 6), coeff, max_size=6).map(FourierSymbol)


def roots_winding(a: FourierSymbol) -> int:
    """Argument principle: zeros of z^m a(z) inside the disc, minus the pole order m."""
    m = max(0, -min(a.coeffs))
    top = max(a.coeffs) + m
    poly = [a[k - m] for k in range(top, -1, -1)]
    roots = np.roots(poly)
    return int(np.sum(np.abs(roots) < 1)) - m


class TestConstruction:
    def test_zero_coefficients_dropped(self):
        a = FourierSymbol({0: 2, 1: 0, -3: 0j})
        assert a.coeffs == {0: 2}

    def test_equality_is_map_equality(self):
        assert FourierSymbol({1: 1, 2: 0}) == FourierSymbol({1: 1.0 + 0j})
        assert FourierSymbol({1: 1}) != FourierSymbol({1: 2})

    def test_triples_accumulate(self):
        a = FourierSymbol.from_triples([(0, 1, 0), (0, 1, 0), (2, 0, -1)])
        assert a.coeffs == {0: 2, 2: -1j}
        assert FourierSymbol.from_triples(a.to_triples()) == a

    def test_max_frequency(self):
        assert FourierSymbol({-4: 1, 2: 1}).max_frequency == 4
        assert FourierSymbol().max_frequency == 0


class TestEvaluate:
    def test_monomial_at_zero(self):
        assert evaluate(FourierSymbol({1: 1}), 0.0) == 1

    def test_cosine(self):
        assert evaluate(FourierSymbol({1: 1, -1: 1}), math.pi / 3) == pytest.approx(1.0, abs=1e-15)

    def test_two_plus_t_at_pi(self):
        assert evaluate(FourierSymbol({0: 2, 1: 1}), math.pi) == pytest.approx(1.0, abs=1e-15)

    def test_vectorized(self):
        theta = np.linspace(0, 1, 7)
        a = FourierSymbol({2: 1j})
        assert np.allclose(evaluate(a, theta), [1j * cmath.exp(2j * t) for t in theta])

    @given(symbols, st.floats(-10, 10))
    def test_flip_reverses_argument(self, a, theta):
        assert abs(evaluate(flip(a), theta) - evaluate(a, -theta)) <= 1e-12 * (1 + sum(map(abs, a.coeffs.values())))


class TestFlipMultiply:
    def test_flip_monomial(self):
        assert flip(FourierSymbol({1: 1})) == FourierSymbol({-1: 1})
        assert flip(FourierSymbol({0: 2, 1: 1})) == FourierSymbol({0: 2, -1: 1})

    @given(symbols)
    def test_flip_involution(self, a):
        assert flip(flip(a)) == a

    def test_conj_flip(self):
        assert conj_flip(FourierSymbol({1: 1j, 0: 2})) == FourierSymbol({-1: -1j, 0: 2})

    def test_products(self):
        assert multiply(FourierSymbol({1: 1}), FourierSymbol({-1: 1})) == FourierSymbol({0: 1})
        lhs = multiply(FourierSymbol({0: 2, 1: 1}), FourierSymbol({0: 2, -1: 1}))
        assert lhs == FourierSymbol({0: 5, 1: 2, -1: 2})

    @given(symbols)
    def test_unit(self, a):
        assert multiply(a, FourierSymbol({0: 1})) == a

    @given(symbols, symbols, st.floats(0, 2 * math.pi))
    def test_multiply_is_pointwise(self, a, b, theta):
        lhs = evaluate(multiply(a, b), theta)
        rhs = evaluate(a, theta) * evaluate(b, theta)
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))

    def test_operator_sugar(self):
        a = FourierSymbol({1: 2})
        assert a * FourierSymbol({1: 1}) == FourierSymbol({2: 2})
        assert 3 * a == FourierSymbol({1: 6})


class TestWinding:
    @pytest.mark.parametrize("coeffs, w", [({1: 1}, 1), ({0: 2, 1: 1}, 0), ({-2: 1}, -2), ({3: 1, 0: 0.5}, 3)])
    def test_examples(self, coeffs, w):
        assert winding_number(FourierSymbol(coeffs)) == w

    def test_zero_on_circle(self):
        with pytest.raises(ZeroOnCircle):
            winding_number(FourierSymbol({1: 1, -1: 1}))

    def test_against_argument_principle(self):
        rng = np.random.default_rng(11)
        checked = 0
        for _ in range(40):
            a = random_symbol(rng, 4)
            theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
            if np.min(np.abs(evaluate(a, theta))) < 1e-2:
                continue
            assert winding_number(a) == roots_winding(a)
            checked += 1
        assert checked > 20

    def test_additive(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a, b = random_symbol(rng, 3), random_symbol(rng, 3)
            try:
                wa, wb, wab = winding_number(a), winding_number(b), winding_number(multiply(a, b))
            except ZeroOnCircle:
                continue
            assert wab == wa + wb


class TestSupNorm:
    def test_examples(self):
        assert sup_norm(FourierSymbol({0: 2, 1: 1})) == pytest.approx(3, abs=1e-6)
        assert sup_norm(FourierSymbol({1: 1, -1: 1})) == pytest.approx(2, abs=1e-12)
        assert sup_norm(FourierSymbol({0: -3 + 4j})) == pytest.approx(5)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            sup_norm(FourierSymbol({10: 1}), samples=20)

    @settings(max_examples=50)
    @given(symbols)
    def test_flip_isometry(self, a):
        assert sup_norm(flip(a)) == pytest.approx(sup_norm(a), rel=1e-12, abs=1e-12)

    def test_fine_grid_oracle(self):
        rng = np.random.default_rng(2)
        a = random_symbol(rng, 5)
        fine = np.max(np.abs(evaluate(a, np.linspace(0, 2 * np.pi, 200001))))
        assert sup_norm(a) <= fine + 1e-12
        assert sup_norm(a) == pytest.approx(fine, rel=1e-4)
