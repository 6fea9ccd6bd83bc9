import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvlink.entanglement import TwoModeSummary, epr_uncertainty, is_symmetric_form, log_negativity, negativity, partial_transpose
from cvlink.gaussian import DomainError, symmetric_form, two_mode_squeezed_state

from conftest import random_symplectic, squeezings


def test_partial_transpose_examples():
    assert np.array_equal(partial_transpose(np.eye(4)), np.eye(4))
    g = symmetric_form(1.2, 0.5)
    pt = partial_transpose(g)
    assert pt[1, 3] == -g[1, 3]
    assert pt[0, 2] == g[0, 2]
    np.testing.assert_array_equal(partial_transpose(pt), g)


def test_negativity_of_vacua():
    n, ln = negativity(np.eye(4))
    assert n == pytest.approx(1.0)
    assert ln == 0.0


def test_negativity_two_mode_squeezed():
    n, ln = negativity(two_mode_squeezed_state(4.0).gamma)
    assert n == pytest.approx(0.25)
    assert ln == pytest.approx(2.0)


def test_symmetric_form_values():
    g = symmetric_form(1.2, 0.5)
    assert negativity(g)[0] == pytest.approx(0.7)
    d, dx, dp = epr_uncertainty(g)
    assert (d, dx, dp) == pytest.approx((0.7, 0.7, 0.7))
    assert is_symmetric_form(g)
    assert log_negativity(g) == pytest.approx(-np.log2(0.7))


def test_vacuum_epr_uncertainty():
    assert epr_uncertainty(np.eye(4))[0] == 1.0


def test_unphysical_rejected():
    with pytest.raises(DomainError):
        negativity(symmetric_form(1.0, 0.5))
    with pytest.raises(ValueError):
        negativity(np.eye(2))


@given(squeezings)
def test_negativity_equals_delta_for_symmetric_form(r):
    g = two_mode_squeezed_state(r).gamma
    n, _ = negativity(g)
    # r < 1 correlates x and anticorrelates p, which is equally entangled
    assert n == pytest.approx(min(r, 1 / r), rel=1e-9)


@given(st.integers(0, 2**32 - 1), st.floats(1.0, 8.0))
def test_negativity_local_invariance(seed, r):
    rng = np.random.default_rng(seed)
    g = two_mode_squeezed_state(r).gamma
    local = np.zeros((4, 4))
    local[:2, :2] = random_symplectic(rng, 1)
    local[2:, 2:] = random_symplectic(rng, 1)
    g2 = local @ g @ local.T
    assert negativity(g2)[0] == pytest.approx(negativity(g)[0], abs=1e-9)


def test_summary_fields():
    vals = dict(v_x1=2.16, v_p1=27 / 41, v_x2=2.19, v_p2=27 / 41, c_x=0.98, c_p=-14 / 41)
    s = TwoModeSummary.from_entries(**vals)
    assert s.entries() == vals
    assert s.delta_x == pytest.approx((2.16 + 2.19 - 1.96) / 2)
    assert s.delta_p == pytest.approx((54 - 28) / 41 / 2)
    assert s.delta == pytest.approx((s.delta_x + s.delta_p) / 2)
    assert not s.symmetric
    with pytest.raises(ValueError):
        s.gamma12[0, 0] = 0
