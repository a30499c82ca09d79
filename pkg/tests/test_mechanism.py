import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gradual_privacy import (
    BridgeUnsupported,
    ChainFormatError,
    GradualLaplaceMechanism,
    LaplaceTightener,
    LevelOrderError,
    Response,
    dp_to_lipschitz,
    lipschitz_to_dp,
    naive_composition_release,
    tighten_for_third_party,
)

N = 300_000
KS_1 = 1.95 / math.sqrt(N)


def test_unit_conversion():
    assert dp_to_lipschitz(2.0, 4.0) == 0.5
    assert lipschitz_to_dp(0.5, 4.0) == 2.0


def test_sklearn_params_and_clone():
    mech = GradualLaplaceMechanism(epsilon=0.5, alpha=2.0, random_state=3)
    assert mech.get_params() == {"epsilon": 0.5, "alpha": 2.0, "random_state": 3}
    fresh = clone(mech)
    assert fresh.get_params() == mech.get_params()
    assert not hasattr(fresh, "data_")


def test_release_before_fit():
    with pytest.raises(NotFittedError):
        GradualLaplaceMechanism().release(1.0)


@pytest.mark.parametrize("bad", [[], [1.0, np.nan], [np.inf]])
def test_fit_rejects_bad_data(bad):
    with pytest.raises(ValueError):
        GradualLaplaceMechanism().fit(np.array(bad))


@pytest.mark.parametrize("eps", [0.0, -1.0, np.nan])
def test_release_rejects_bad_level(eps):
    mech = GradualLaplaceMechanism(random_state=0).fit([1.0])
    with pytest.raises(ValueError):
        mech.release(eps)


def test_release_is_data_plus_noise():
    data = np.array([3.0, -1.0, 10.0])
    mech = GradualLaplaceMechanism(random_state=1).fit(data)
    r = mech.release(1.0)
    assert r.values.shape == (3,)
    np.testing.assert_array_equal(r.values, data + mech.noise_[0])


def test_repeat_release_is_identical():
    mech = GradualLaplaceMechanism(random_state=1).fit([0.0, 1.0])
    a = mech.release(2.0).values
    mech.release(0.5)
    assert np.array_equal(mech.release(2.0).values, a)
    assert mech.released_levels_ == [2.0, 0.5]


def test_bridge_release_reports_dp_levels():
    mech = GradualLaplaceMechanism(alpha=2.0, random_state=1).fit([0.0])
    mech.release(1.0)
    mech.release(3.0)
    with pytest.raises(BridgeUnsupported) as info:
        mech.release(2.0)
    assert (info.value.eps, info.value.lower, info.value.upper) == (2.0, 1.0, 3.0)
    assert mech.released_levels_ == [1.0, 3.0]


def test_transform_requires_fitted_data():
    data = np.arange(4.0)
    mech = GradualLaplaceMechanism(epsilon=2.0, random_state=1).fit(data)
    out = mech.transform(data)
    assert np.array_equal(out, mech.release(2.0).values)
    with pytest.raises(ValueError):
        mech.transform(data + 1)


def test_fit_transform_two_dimensional():
    X = np.zeros((5, 2))
    mech = GradualLaplaceMechanism(random_state=4)
    out = mech.fit_transform(X)
    assert out.shape == (5, 2) and mech.n_features_in_ == 2


def test_unseeded_fit_records_its_seed():
    mech = GradualLaplaceMechanism().fit([0.0])
    replay = GradualLaplaceMechanism(random_state=mech.seed_).fit([0.0])
    assert np.array_equal(mech.release(1.0).values, replay.release(1.0).values)


def test_same_seed_same_responses():
    a = GradualLaplaceMechanism(random_state=12).fit(np.zeros(3))
    b = GradualLaplaceMechanism(random_state=12).fit(np.zeros(3))
    for eps in (1.0, 4.0, 0.2):
        assert np.array_equal(a.release(eps).values, b.release(eps).values)


def test_dp_level_scales_with_alpha():
    # eps_dp = 2 under radius 2 is Lipschitz level 1: noise ~ Laplace(scale 1)
    mech = GradualLaplaceMechanism(epsilon=2.0, alpha=2.0, random_state=5).fit(np.zeros(N))
    r = mech.release()
    assert r.eps_lipschitz == 1.0
    assert stats.kstest(r.values, stats.laplace(scale=1.0).cdf).statistic < KS_1


def test_accuracy_improves_with_each_relaxation():
    mech = GradualLaplaceMechanism(random_state=6).fit(np.zeros(N))
    errs = [np.mean(mech.release(eps).values ** 2) for eps in (0.5, 1.0, 2.0, 4.0)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    np.testing.assert_allclose(errs, [2 / e**2 for e in (0.5, 1.0, 2.0, 4.0)], rtol=0.03)


def test_entries_receive_independent_noise():
    mech = GradualLaplaceMechanism(random_state=7).fit(np.zeros((N, 2)))
    v = mech.release(1.0).values
    assert abs(np.corrcoef(v[:, 0], v[:, 1])[0, 1]) < 0.01


def test_noise_does_not_depend_on_data():
    a = GradualLaplaceMechanism(random_state=8).fit([0.0, 0.0])
    b = GradualLaplaceMechanism(random_state=8).fit([5.0, -2.0])
    for eps in (1.0, 3.0):
        np.testing.assert_allclose(a.release(eps).values, b.release(eps).values - [5.0, -2.0], atol=1e-12)


# -- persistence -------------------------------------------------------------


def test_state_roundtrip_is_byte_identical():
    mech = GradualLaplaceMechanism(alpha=0.5, random_state=9).fit([[1.0, 2.0], [3.0, 4.0]])
    mech.release(1.0)
    mech.release(0.25)
    text = mech.dumps()
    copy = GradualLaplaceMechanism.loads(text)
    assert copy.dumps() == text
    assert np.array_equal(copy.release(5.0).values, mech.release(5.0).values)


def test_unreleased_state_roundtrip():
    mech = GradualLaplaceMechanism(random_state=9).fit([1.0])
    copy = GradualLaplaceMechanism.loads(mech.dumps())
    assert copy.chain_ is None
    assert copy.release(1.0).values == mech.release(1.0).values


def test_state_rejects_tampering():
    mech = GradualLaplaceMechanism(random_state=9).fit([1.0, 2.0])
    mech.release(1.0)
    record = json.loads(mech.dumps())
    with pytest.raises(ChainFormatError):
        GradualLaplaceMechanism.loads("{")
    with pytest.raises(ChainFormatError):
        GradualLaplaceMechanism.loads(json.dumps({**record, "version": 2}))
    with pytest.raises(ChainFormatError):
        GradualLaplaceMechanism.loads(json.dumps({**record, "n": 3}))
    record["chain"]["shape"] = [5]
    with pytest.raises(ChainFormatError):
        GradualLaplaceMechanism.loads(json.dumps(record))


@settings(max_examples=30, deadline=None)
@given(values=st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=4), eps=st.floats(0.01, 100))
def test_response_record_roundtrip(values, eps):
    r = Response(eps_dp=eps, eps_lipschitz=eps / 3.0, values=np.array(values))
    back = Response.from_record(json.loads(json.dumps(r.to_record())))
    assert back.eps_dp == r.eps_dp and back.eps_lipschitz == r.eps_lipschitz
    assert np.array_equal(back.values, r.values)


# -- third-party tightening --------------------------------------------------


def test_tighten_matches_fresh_release_in_law():
    data = np.full(N, 4.0)
    mech = GradualLaplaceMechanism(random_state=10).fit(data)
    loose = mech.release(2.0)
    tight = tighten_for_third_party(loose, 1.0, 1.0, np.random.default_rng(0))
    assert tight.eps_dp == 1.0
    assert stats.kstest(tight.values - 4.0, stats.laplace(scale=1.0).cdf).statistic < KS_1


def test_tighten_refuses_looser_target():
    r = Response(eps_dp=1.0, eps_lipschitz=1.0, values=np.zeros(2))
    with pytest.raises(LevelOrderError):
        tighten_for_third_party(r, 2.0, 1.0, np.random.default_rng(0))


def test_tightener_transformer():
    tightener = LaplaceTightener(epsilon_from=4.0, epsilon_to=1.0, random_state=0)
    out = tightener.fit().transform(np.zeros(N))
    # starting from the exact value, the output is pure increment: mass 1/16
    # stays put and the rest is Laplace at the target level
    assert abs(np.mean(out == 0.0) - 1.0 / 16.0) < 0.005
    moved = out[out != 0.0]
    assert stats.kstest(moved, stats.laplace(scale=1.0).cdf).statistic < 1.95 / math.sqrt(moved.size)
    with pytest.raises(LevelOrderError):
        LaplaceTightener(epsilon_from=1.0, epsilon_to=2.0).fit()


# -- naive baseline ----------------------------------------------------------


def test_naive_composition_levels_and_errors():
    data = np.zeros(N)
    first, second = naive_composition_release(data, 1.0, 2.0, seed=3)
    assert (first.eps_dp, second.eps_dp) == (1.0, 1.0)
    assert abs(np.mean(second.values**2) / 2.0 - 1.0) < 0.03
    assert abs(np.corrcoef(first.values, second.values)[0, 1]) < 0.01
    with pytest.raises(LevelOrderError):
        naive_composition_release(data, 2.0, 2.0)
