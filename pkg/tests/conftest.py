"""Shared, session-scoped profiles (each costs a few seconds of SVDs)."""
import numpy as np
import pytest

from finsec import matgen, seqlab
from finsec.symbols import FourierSymbol

HORIZON = (32, 1024, 32)
EVEN_HORIZON = (100, 1000, 40)

SYMBOLS = {
    "t": FourierSymbol({1: 1}),
    "t2": FourierSymbol({2: 1}),
    "t3": FourierSymbol({3: 1}),
    "2+t": FourierSymbol({0: 2, 1: 1}),
    "t+1/t": FourierSymbol({1: 1, -1: 1}),
}


@pytest.fixture(scope="session")
def toeplitz_profiles():
    cache = {}

    def get(name, horizon=HORIZON):
        key = (name, horizon)
        if key not in cache:
            cache[key] = seqlab.profile(matgen.toeplitz_sequence(SYMBOLS[name]), horizon)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def rank3_block():
    rng = np.random.default_rng(3)
    U, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    V, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    return U @ np.diag([3.0, 2.0, 1.0, 0.0, 0.0]) @ V.T


@pytest.fixture(scope="session")
def exf340_spectra():
    seq = matgen.exf340_sequence(200)
    return seqlab.sym_spectra(seq, (20, 200, 5))
