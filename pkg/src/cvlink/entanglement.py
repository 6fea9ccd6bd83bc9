"""Entanglement of two-mode Gaussian states from their 4x4 covariance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gaussian import TOL_UNCERTAINTY, DomainError, commutator_matrix, symplectic_eigenvalues, uncertainty_ok

PAIR_TOL = 1e-9
SYMMETRIC_FORM_TOL = 1e-9

_FLIP_P1 = np.diag([1.0, -1.0, 1.0, 1.0])


def _as_4x4(gamma12) -> np.ndarray:
    g = np.asarray(gamma12, dtype=float)
    if g.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance, got shape {g.shape}")
    return g


def partial_transpose(gamma12) -> np.ndarray:
    """Flip the sign of every entry coupling ``p1`` to another quadrature."""
    g = _as_4x4(gamma12)
    return _FLIP_P1 @ g @ _FLIP_P1


def _paired_moduli(m: np.ndarray) -> np.ndarray:
    """Eigenvalue moduli of ``sigma^-1 m`` sorted and checked to come in equal pairs."""
    sig_inv = -commutator_matrix(2)
    mods = np.sort(np.abs(np.linalg.eigvals(sig_inv @ m)))
    for lo, hi in ((0, 1), (2, 3)):
        if abs(mods[lo] - mods[hi]) > PAIR_TOL * max(1.0, mods[hi]):
            raise ArithmeticError(f"eigenvalue moduli do not pair up: {mods}")
    return mods


def negativity(gamma12, tol: float = TOL_UNCERTAINTY) -> tuple[float, float]:
    """Return ``(N, log_negativity)`` with ``N`` the smaller partially-transposed symplectic eigenvalue capped at 1."""
    g = _as_4x4(gamma12)
    if not uncertainty_ok(g, tol):
        nu = symplectic_eigenvalues(g)
        raise DomainError(f"covariance violates the uncertainty principle (min symplectic eigenvalue {nu[0]:.6g})")
    mods = _paired_moduli(partial_transpose(g))
    n = min(1.0, float(mods[0]))
    return n, max(0.0, float(-np.log2(n)))


def log_negativity(gamma12) -> float:
    return negativity(gamma12)[1]


def epr_uncertainty(gamma12) -> tuple[float, float, float]:
    """EPR uncertainty ``(delta, var(x1 - x2), var(p1 + p2))``.

    ``delta`` is the mean of the two halves; for the symmetric form both
    halves equal ``n - k``.
    """
    g = _as_4x4(gamma12)
    dx = 0.5 * (g[0, 0] + g[2, 2] - 2.0 * g[0, 2])
    dp = 0.5 * (g[1, 1] + g[3, 3] + 2.0 * g[1, 3])
    return 0.5 * (dx + dp), float(dx), float(dp)


def is_symmetric_form(gamma12, tol: float = SYMMETRIC_FORM_TOL) -> bool:
    """True if the covariance has the form with ``v = n`` on the diagonal and ``c_x = -c_p = k``."""
    g = _as_4x4(gamma12)
    n = g[0, 0]
    k = g[0, 2]
    ref = np.array([[n, 0, k, 0], [0, n, 0, -k], [k, 0, n, 0], [0, -k, 0, n]])
    return bool(np.max(np.abs(g - ref)) <= tol * max(1.0, abs(n)))


@dataclass(frozen=True)
class TwoModeSummary:
    """A two-mode covariance in (x1, p1, x2, p2) order with its derived figures of merit."""

    gamma12: np.ndarray = field(repr=False)
    v_x1: float
    v_p1: float
    v_x2: float
    v_p2: float
    c_x: float
    c_p: float
    N: float
    log_negativity: float
    delta: float
    delta_x: float
    delta_p: float
    symmetric: bool

    @classmethod
    def from_gamma(cls, gamma12) -> "TwoModeSummary":
        g = np.array(_as_4x4(gamma12))
        g.setflags(write=False)
        n, ln = negativity(g)
        d, dx, dp = epr_uncertainty(g)
        return cls(
            gamma12=g,
            v_x1=float(g[0, 0]),
            v_p1=float(g[1, 1]),
            v_x2=float(g[2, 2]),
            v_p2=float(g[3, 3]),
            c_x=float(g[0, 2]),
            c_p=float(g[1, 3]),
            N=n,
            log_negativity=ln,
            delta=d,
            delta_x=dx,
            delta_p=dp,
            symmetric=is_symmetric_form(g),
        )

    @classmethod
    def from_entries(cls, v_x1, v_p1, v_x2, v_p2, c_x, c_p) -> "TwoModeSummary":
        g = np.array(
            [
                [v_x1, 0, c_x, 0],
                [0, v_p1, 0, c_p],
                [c_x, 0, v_x2, 0],
                [0, c_p, 0, v_p2],
            ],
            dtype=float,
        )
        return cls.from_gamma(g)

    def entries(self) -> dict[str, float]:
        return {
            "v_x1": self.v_x1,
            "v_p1": self.v_p1,
            "v_x2": self.v_x2,
            "v_p2": self.v_p2,
            "c_x": self.c_x,
            "c_p": self.c_p,
        }
