import numpy as np
import pytest

from finsec.exceptions import NotNormal, NotSelfAdjoint
from finsec.validation import (
    check_fraction, check_horizon, check_normal, check_positive, check_self_adjoint, check_square, is_sorted,
    tail_slice,
)


def test_check_square():
    assert check_square(np.eye(2)).shape == (2, 2)
    with pytest.raises(ValueError):
        check_square(np.zeros(3))
    with pytest.raises(ValueError):
        check_square(np.array([["a"]]))


def test_self_adjoint_relative_tolerance():
    M = 1e6 * np.array([[1.0, 1.0], [1.0 + 1e-12, 1.0]])
    check_self_adjoint(M)
    with pytest.raises(NotSelfAdjoint):
        check_self_adjoint(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_normal():
    check_normal(np.array([[0.0, -1.0], [1.0, 0.0]]))
    with pytest.raises(NotNormal):
        check_normal(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_horizon():
    assert check_horizon((32, 128, 32)) == [32, 64, 96, 128]
    assert check_horizon([5, 3, 3, 9]) == [3, 5, 9]
    for bad in [(10, 5, 1), (0, 4, 1), (1, 10, 0), []]:
        with pytest.raises(ValueError):
            check_horizon(bad)
    with pytest.raises(ValueError, match="cap"):
        check_horizon((1, 5000, 1))


def test_scalars():
    assert check_positive(2, "x") == 2.0
    with pytest.raises(ValueError):
        check_positive(0, "x")
    assert check_fraction(1.0) == 1.0
    with pytest.raises(ValueError):
        check_fraction(1.5)


def test_tail_slice():
    assert list(range(8))[tail_slice(8, 0.25)] == [6, 7]
    assert list(range(8))[tail_slice(8, 0.25, minimum=4)] == [4, 5, 6, 7]
    assert list(range(3))[tail_slice(3, 0.1, minimum=5)] == [0, 1, 2]


def test_is_sorted():
    assert is_sorted([1, 2, 2, 3])
    assert not is_sorted([2, 1])
    assert is_sorted([1.0, 1.0 - 1e-12], tol=1e-9)
