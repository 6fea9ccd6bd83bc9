import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvlink.gaussian import DomainError
from cvlink.protocols import ChannelParams, analytic_asymmetric_covariance
from cvlink.teleport import (
    adjudicate,
    asymptotic_fidelity,
    channel_variances,
    clone_bound,
    fidelity_bk,
    fidelity_candidate,
    fidelity_report,
    fidelity_symmetric,
    optimize_local_squeezing,
)

from conftest import squeezings

positive = st.floats(1e-4, 1e3)


def _channel(eps, r, kt):
    return channel_variances(analytic_asymmetric_covariance(ChannelParams(eps, r), kt).gamma12)


def test_symmetric_fidelity_examples():
    assert fidelity_symmetric(1.0) == 0.5
    assert fidelity_symmetric(0.3) == pytest.approx(1 / 1.3)
    assert fidelity_symmetric(1e-12) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        fidelity_symmetric(0.0)


@given(positive, positive)
def test_symmetric_fidelity_decreasing(a, b):
    if a != b:
        assert (fidelity_symmetric(a) > fidelity_symmetric(b)) == (a < b)


def test_bk_examples():
    assert fidelity_bk(0.5, 0.5) == pytest.approx(0.5)
    assert fidelity_bk(1e-9, 1e-9) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(DomainError):
        fidelity_bk(0.0, 0.5)


def test_local_squeezing_examples():
    assert optimize_local_squeezing(0.3, 0.3) == pytest.approx((1.0, fidelity_bk(0.3, 0.3)))
    s, f = optimize_local_squeezing(0.1, 0.4)
    assert s == pytest.approx(2.0)
    assert f == pytest.approx(1 / 1.4)
    with pytest.raises(DomainError):
        optimize_local_squeezing(-1.0, 0.4)


@given(positive, positive)
def test_local_squeezing_is_optimal(vp, vx):
    s_opt, f_opt = optimize_local_squeezing(vp, vx)
    assert f_opt >= fidelity_bk(vp, vx) * (1 - 1e-12)
    assert f_opt == pytest.approx(1 / (1 + 2 * math.sqrt(vp * vx)))
    for s in s_opt * np.geomspace(0.2, 5, 21):
        assert fidelity_bk(s * vp, vx / s) <= f_opt * (1 + 1e-12)


def test_clone_bound():
    assert clone_bound(1) == 1.0
    assert clone_bound(2) == pytest.approx(2 / 3)
    assert clone_bound(2) == pytest.approx(1 / (1 + 0.5))
    assert clone_bound(math.inf) == 0.5
    with pytest.raises(DomainError):
        clone_bound(0.5)


def test_channel_variances_vacuum():
    assert channel_variances(np.eye(4)) == (0.5, 0.5)


@pytest.mark.parametrize("eps", [0.2, 0.5, 0.8])
def test_asymptotic_optimum_matches_one_over_one_plus_eps(eps):
    r = (1 - eps) / eps
    _, f = optimize_local_squeezing(*_channel(eps, r, 1e7))
    assert f == pytest.approx(1 / (1 + eps), rel=1e-5)
    assert abs(f - 1 / (1 + 2 * eps)) > 0.05
    assert asymptotic_fidelity(eps, r) == pytest.approx(1 / (1 + eps), rel=1e-12)


@given(st.floats(0.0, 0.95), squeezings, st.floats(0.0, 100.0))
def test_one_way_fidelity_bounded(eps, r, kt):
    _, f = optimize_local_squeezing(*_channel(eps, r, kt))
    assert f <= 1 / (1 + eps) + 1e-6


@given(st.integers(2, 20), squeezings, st.floats(0.0, 100.0))
def test_one_way_fidelity_below_cloning_bound(m, r, kt):
    _, f = optimize_local_squeezing(*_channel(1 - 1 / m, r, kt))
    assert f <= clone_bound(m) + 1e-6


@given(st.floats(0.0, 0.95), squeezings, st.floats(0.0, 100.0))
def test_prefactor_one_matches_channel(eps, r, kt):
    _, f = optimize_local_squeezing(*_channel(eps, r, kt))
    assert f == pytest.approx(fidelity_candidate(eps, r, kt, 1.0), rel=1e-9)


def test_report():
    rep = fidelity_report(analytic_asymmetric_covariance(ChannelParams(0.3, 2.0), 1.0).gamma12, m_clones=2)
    assert rep.bound_clone == pytest.approx(2 / 3)
    assert rep.F == pytest.approx(1 / (1 + 2 * math.sqrt(rep.var_p_plus * rep.var_x_minus)))


def test_adjudication_verdicts():
    alpha, pref = adjudicate([(0.3, 2.0), (0.7, 0.5), (0.3, 1.0)], taus=(1e-3,))
    assert [a.verdict for a in alpha] == ["alpha formula", "alpha formula", "both"]
    assert {p.verdict for p in pref} == {"prefactor 1"}
