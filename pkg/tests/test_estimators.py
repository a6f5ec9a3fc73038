import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from finsec import matgen
from finsec.estimators import (
    CompactnessClassifier, FractalSubsequenceSelector, FredholmClassifier, PointClassifier, SingularProfiler,
    StabilityClassifier,
)
from finsec.symbols import FourierSymbol

H = (20, 400, 20)


@pytest.fixture(scope="module")
def sequences():
    return [
        matgen.toeplitz_sequence(FourierSymbol({0: 2, 1: 1})),
        matgen.toeplitz_sequence(FourierSymbol({2: 1})),
        matgen.zero_sequence(),
    ]


def test_get_params_and_clone():
    est = FredholmClassifier(horizon=H, tau_zero=1e-7)
    params = est.get_params()
    assert params["tau_zero"] == 1e-7 and params["horizon"] == H
    assert clone(est).get_params() == params
    est.set_params(tau_gap=0.01)
    assert est.tau_gap == 0.01


def test_not_fitted(sequences):
    with pytest.raises(NotFittedError):
        StabilityClassifier(horizon=H).predict(sequences)


def test_bad_threshold():
    with pytest.raises(ValueError):
        StabilityClassifier(horizon=H, tau=-1).fit()


def test_predictions(sequences):
    profiles = SingularProfiler(horizon=H).fit().transform(sequences)
    assert StabilityClassifier(horizon=H).fit().predict(profiles).tolist() == ["Stable", "NotStable", "NotStable"]
    fred = FredholmClassifier(horizon=H).fit()
    assert fred.predict(profiles).tolist()[:2] == ["Fredholm(0)", "Fredholm(2)"]
    assert fred.alpha(profiles)[:2].tolist() == [0, 2]
    assert CompactnessClassifier(horizon=H).fit().predict(profiles).tolist() == [
        "NotCompact", "NotCompact", "Compact(0)"]


def test_profiler_on_sequences_and_profiles(sequences):
    prof = SingularProfiler(horizon=(10, 50, 10)).fit()
    out = prof.transform(sequences[0])
    assert out[0].sizes == [10, 20, 30, 40, 50]
    again = SingularProfiler(horizon=(20, 40, 10)).fit().transform(out)
    assert again[0].sizes == [20, 30, 40]


def test_rejects_wrong_input():
    with pytest.raises(TypeError):
        SingularProfiler(horizon=H).fit().transform([np.eye(3)])


def test_fractal_selector():
    p = SingularProfiler(horizon=(10, 200, 1)).fit().transform(matgen.MatrixSequence(matgen.block_flip))
    sel = FractalSubsequenceSelector().fit(p)
    assert len({n % 2 for n in sel.support_}) == 1
    assert sel.transform(p)[0].sizes == sel.support_


def test_point_classifier():
    seq = matgen.toeplitz_sequence(FourierSymbol({1: 1, -1: 1}))
    pc = PointClassifier(horizon=(100, 1000, 50)).fit(seq)
    assert pc.predict([0.0, 2.5]).tolist() == ["Essential", "Transient"]
