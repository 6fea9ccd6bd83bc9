import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvlink.gaussian import (
    ATOM1,
    ATOM2,
    LIGHT,
    VACUUM,
    DomainError,
    GaussianState,
    SymplecticMap,
    apply_symplectic,
    attach,
    aux,
    beam_splitter_map,
    discard,
    homodyne_update,
    loss_channel,
    reorder,
    squeezed_light_state,
    squeezer_map,
    symmetric_form,
    symplectic_eigenvalues,
    two_mode_squeezed_state,
    vacuum_state,
)

from conftest import losses, random_symplectic, squeezings


@pytest.mark.parametrize("n", [1, 2, 3])
def test_vacuum_is_identity(n):
    assert np.array_equal(vacuum_state(n).gamma, np.eye(2 * n))


def test_vacuum_needs_a_mode():
    with pytest.raises(ValueError):
        vacuum_state(0)


@pytest.mark.parametrize("r, diag", [(1, [1, 1]), (10, [0.1, 10]), (0.1, [10, 0.1])])
def test_squeezed_light(r, diag):
    np.testing.assert_allclose(squeezed_light_state(r).gamma, np.diag(diag))


@pytest.mark.parametrize("r", [0, -1, np.inf])
def test_squeezed_light_rejects_bad_r(r):
    with pytest.raises(DomainError):
        squeezed_light_state(r)


def test_state_validation():
    with pytest.raises(ValueError):
        GaussianState((ATOM1,), np.eye(4))
    with pytest.raises(ValueError):
        GaussianState((ATOM1, ATOM1), np.eye(4))
    st_ = GaussianState((ATOM1,), [[1.0, 0.2], [0.0, 1.0]])
    assert st_.gamma[0, 1] == st_.gamma[1, 0] == pytest.approx(0.1)
    with pytest.raises(ValueError):
        st_.gamma[0, 0] = 2.0


def test_squeezer_on_vacuum():
    out = apply_symplectic(vacuum_state(1, (LIGHT,)), squeezer_map(4.0))
    np.testing.assert_allclose(out.gamma, np.diag([0.25, 4.0]))


def test_identity_map():
    out = apply_symplectic(vacuum_state(2), SymplecticMap(vacuum_state(2).modes, np.eye(4)))
    assert np.array_equal(out.gamma, np.eye(4))


def test_beam_splitter_zero_loss_is_identity():
    assert np.array_equal(beam_splitter_map(0.0).matrix, np.eye(4))


@given(losses)
def test_beam_splitter_keeps_vacuum(eps):
    out = apply_symplectic(vacuum_state(2, (LIGHT, VACUUM)), beam_splitter_map(eps))
    np.testing.assert_allclose(out.gamma, np.eye(4), atol=1e-14)


def test_beam_splitter_correlation_example():
    eps, r = 0.36, 10.0
    state = attach(squeezed_light_state(r), vacuum_state(1, (VACUUM,)))
    out = apply_symplectic(state, beam_splitter_map(eps))
    # ports correlate as sqrt(eps (1 - eps)) (1 - 1/r) in x
    assert abs(out.gamma[0, 2]) == pytest.approx(0.432, abs=1e-12)
    assert out.gamma[0, 2] == pytest.approx(0.432)


@pytest.mark.parametrize("eps", [-0.1, 1.0, 1.5])
def test_beam_splitter_domain(eps):
    with pytest.raises(DomainError):
        beam_splitter_map(eps)


@given(losses)
def test_beam_splitter_symplectic(eps):
    assert beam_splitter_map(eps).symplectic_error() <= 1e-12


def test_loss_limits():
    tms = two_mode_squeezed_state(3.0)
    assert np.array_equal(loss_channel(tms, ATOM2, 0.0).gamma, tms.gamma)
    full = loss_channel(tms, ATOM2, 1.0).gamma
    np.testing.assert_allclose(full[2:, 2:], np.eye(2))
    np.testing.assert_allclose(full[:2, 2:], 0.0)


@given(st.floats(0.0, 0.999), squeezings)
def test_loss_channel_matches_beam_splitter(eps, r):
    tms = two_mode_squeezed_state(r)
    direct = loss_channel(tms, ATOM2, eps)
    via = apply_symplectic(attach(tms, vacuum_state(1, (VACUUM,))), beam_splitter_map(eps, (ATOM2, VACUUM)))
    via = discard(via, [VACUUM])
    np.testing.assert_allclose(direct.gamma, via.gamma, atol=1e-12 * max(1, r, 1 / r))


def test_attach_and_discard_round_trip():
    r = 3.0
    both = attach(squeezed_light_state(r), vacuum_state(1, (VACUUM,)))
    np.testing.assert_allclose(both.gamma, np.diag([1 / r, r, 1, 1]))
    back = discard(both, [VACUUM])
    np.testing.assert_allclose(back.gamma, squeezed_light_state(r).gamma)
    with pytest.raises(ValueError):
        discard(both, [LIGHT, VACUUM])
    with pytest.raises(KeyError):
        discard(both, [ATOM1])


def test_discard_after_vacuum_splitter():
    out = apply_symplectic(vacuum_state(2, (LIGHT, VACUUM)), beam_splitter_map(0.4))
    np.testing.assert_allclose(discard(out, [VACUUM]).gamma, np.eye(2), atol=1e-15)


def test_reduced_two_mode_squeezed_state():
    r = 4.0
    one = discard(two_mode_squeezed_state(r), [ATOM2]).gamma
    np.testing.assert_allclose(one, np.eye(2) * (r + 1 / r) / 2)


def test_reorder_permutes_blocks():
    g = symmetric_form(1.2, 0.5) + np.diag([0.1, 0, 0, 0])
    s = GaussianState((ATOM1, ATOM2), g)
    out = reorder(s, (ATOM2, ATOM1))
    np.testing.assert_allclose(out.block(ATOM1), s.block(ATOM1))
    with pytest.raises(ValueError):
        reorder(s, (ATOM1,))


def test_homodyne_uncorrelated_mode_is_inert():
    s = attach(two_mode_squeezed_state(2.0), squeezed_light_state(5.0))
    out = homodyne_update(s, LIGHT, "x")
    np.testing.assert_allclose(out.gamma, two_mode_squeezed_state(2.0).gamma)
    assert out.modes == (ATOM1, ATOM2)


def test_homodyne_schur_example():
    g = np.eye(4)
    g[0, 0] = g[2, 2] = 2.0
    g[0, 2] = g[2, 0] = 1.0
    out = homodyne_update(GaussianState((ATOM1, ATOM2), g), ATOM2, "x")
    assert out.gamma[0, 0] == pytest.approx(1.5)
    assert out.gamma[1, 1] == pytest.approx(1.0)


def test_homodyne_p_quadrature_and_errors():
    g = np.eye(4)
    g[1, 1] = g[3, 3] = 2.0
    g[1, 3] = g[3, 1] = -1.0
    s = GaussianState((ATOM1, ATOM2), g)
    assert homodyne_update(s, ATOM2, "p").gamma[1, 1] == pytest.approx(1.5)
    assert homodyne_update(s, ATOM2, "x").gamma[1, 1] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        homodyne_update(s, ATOM2, "q")
    with pytest.raises(ValueError):
        homodyne_update(vacuum_state(1), aux(1))


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_symplectic_maps_preserve_physicality(seed, n):
    rng = np.random.default_rng(seed)
    modes = tuple(aux(i + 1) for i in range(n))
    s = random_symplectic(rng, n)
    smap = SymplecticMap(modes, s)
    assert smap.symplectic_error() <= 1e-12 * max(1.0, np.max(np.abs(s))) ** 2
    out = apply_symplectic(vacuum_state(n, modes), smap)
    assert out.is_physical()
    np.testing.assert_allclose(symplectic_eigenvalues(out.gamma), 1.0, rtol=1e-8)


@given(st.integers(0, 2**32 - 1), st.sampled_from(["x", "p"]))
def test_homodyne_keeps_physicality(seed, quad):
    rng = np.random.default_rng(seed)
    modes = (ATOM1, ATOM2, LIGHT)
    thermal = np.diag(np.repeat(rng.uniform(1, 3, 3), 2))
    s = random_symplectic(rng, 3)
    state = GaussianState(modes, s @ thermal @ s.T)
    assert homodyne_update(state, LIGHT, quad).is_physical()


def test_inverse_map():
    bs = beam_splitter_map(0.3)
    np.testing.assert_allclose(bs.inverse().matrix @ bs.matrix, np.eye(4), atol=1e-15)
