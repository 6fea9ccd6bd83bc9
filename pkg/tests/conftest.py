import numpy as np
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

losses = st.floats(0.0, 0.95)
squeezings = st.floats(0.05, 20.0)


def random_symplectic(rng: np.random.Generator, n_modes: int) -> np.ndarray:
    """Product of random local squeezers/rotations and random two-mode beam splitters."""
    from cvlink.gaussian import commutator_matrix

    s = np.eye(2 * n_modes)
    for _ in range(3):
        for i in range(n_modes):
            th, r = rng.uniform(0, 2 * np.pi), np.exp(rng.uniform(-1, 1))
            loc = np.diag([r, 1 / r]) @ np.array([[np.cos(th), np.sin(th)], [-np.sin(th), np.cos(th)]])
            m = np.eye(2 * n_modes)
            m[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = loc
            s = m @ s
        if n_modes > 1:
            i, j = rng.choice(n_modes, 2, replace=False)
            phi = rng.uniform(0, np.pi)
            c, sn = np.cos(phi), np.sin(phi)
            m = np.eye(2 * n_modes)
            for q in range(2):
                a, b = 2 * i + q, 2 * j + q
                m[a, a], m[a, b], m[b, a], m[b, b] = c, sn, -sn, c
            s = m @ s
    sig = commutator_matrix(n_modes)
    assert np.allclose(s @ sig @ s.T, sig)
    return s
