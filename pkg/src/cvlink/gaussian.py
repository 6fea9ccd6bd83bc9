"""Covariance-matrix representation of mean-free multimode Gaussian states.

Conventions
-----------
* Quadratures are ordered ``(x, p)`` per mode, modes concatenated.
* ``gamma_ij = 2 Re <dy_i dy_j>`` so the vacuum is the identity matrix.
* ``[x, p] = i`` (hbar = 1).

First moments are never tracked: every quantity computed downstream depends
only on the covariance, and the conditional covariance after a homodyne
measurement does not depend on the measurement record.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: relative cut-off below which singular values are dropped by the pseudoinverse
PINV_RCOND = 1e-12
#: slack for the uncertainty principle check (eigenvalue moduli of i sigma^-1 gamma)
TOL_UNCERTAINTY = 1e-9


class DomainError(ValueError):
    """Raised when an argument lies outside the physical domain of an operation."""


class ModeKind(enum.Enum):
    ATOM1 = "atom1"
    ATOM2 = "atom2"
    LIGHT_SIGNAL = "light"
    LIGHT_VACUUM = "vacuum"
    ATOM_AUX = "aux"


@dataclass(frozen=True)
class ModeLabel:
    kind: ModeKind
    index: int = 0

    def __str__(self) -> str:
        if self.index:
            return f"{self.kind.value}[{self.index}]"
        return self.kind.value


ATOM1 = ModeLabel(ModeKind.ATOM1)
ATOM2 = ModeLabel(ModeKind.ATOM2)
LIGHT = ModeLabel(ModeKind.LIGHT_SIGNAL)
VACUUM = ModeLabel(ModeKind.LIGHT_VACUUM)


def aux(index: int) -> ModeLabel:
    return ModeLabel(ModeKind.ATOM_AUX, index)


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class GaussianState:
    """Ordered mode register plus its ``2n x 2n`` covariance matrix."""

    modes: tuple[ModeLabel, ...]
    gamma: np.ndarray = field(repr=False)

    def __post_init__(self):
        modes = tuple(self.modes)
        gamma = np.array(self.gamma, dtype=float)
        n = 2 * len(modes)
        if gamma.shape != (n, n):
            raise ValueError(f"gamma has shape {gamma.shape}, expected {(n, n)} for {len(modes)} modes")
        if len(set(modes)) != len(modes):
            raise ValueError(f"duplicate mode labels in {modes}")
        gamma = _symmetrize(gamma)
        gamma.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "gamma", gamma)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def index(self, mode: ModeLabel) -> int:
        """Position of ``mode`` in the register (raises ``KeyError`` if absent)."""
        try:
            return self.modes.index(mode)
        except ValueError:
            raise KeyError(f"mode {mode} not in state {tuple(map(str, self.modes))}") from None

    def quadrature_indices(self, modes: Iterable[ModeLabel]) -> list[int]:
        out = []
        for m in modes:
            i = self.index(m)
            out += [2 * i, 2 * i + 1]
        return out

    def block(self, *modes: ModeLabel) -> np.ndarray:
        """Covariance sub-matrix of the listed modes, in the order given."""
        idx = self.quadrature_indices(modes)
        return self.gamma[np.ix_(idx, idx)].copy()

    def is_physical(self, tol: float = TOL_UNCERTAINTY) -> bool:
        return uncertainty_ok(self.gamma, tol)


@dataclass(frozen=True)
class SymplecticMap:
    """Linear map ``y -> S y`` on the quadratures of ``modes``."""

    modes: tuple[ModeLabel, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        modes = tuple(self.modes)
        matrix = np.array(self.matrix, dtype=float)
        if matrix.shape != (2 * len(modes),) * 2:
            raise ValueError(f"matrix shape {matrix.shape} does not match {len(modes)} modes")
        matrix.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "matrix", matrix)

    def symplectic_error(self) -> float:
        """Largest entry of ``|S sigma S^T - sigma|``."""
        sig = commutator_matrix(len(self.modes))
        s = self.matrix
        return float(np.max(np.abs(s @ sig @ s.T - sig)))

    def inverse(self) -> "SymplecticMap":
        return SymplecticMap(self.modes, np.linalg.inv(self.matrix))


def commutator_matrix(n_modes: int) -> np.ndarray:
    """Block-diagonal ``sigma`` with per-mode block ``[[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Sorted moduli of the eigenvalues of ``i sigma^-1 gamma``, one per mode.

    The eigenvalues come in ``+-nu`` pairs; each pair is reported once.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = gamma.shape[0] // 2
    sig_inv = -commutator_matrix(n)  # sigma^-1 = -sigma
    mods = np.sort(np.abs(np.linalg.eigvals(sig_inv @ gamma)))
    return mods[::2]


def uncertainty_ok(gamma: np.ndarray, tol: float = TOL_UNCERTAINTY) -> bool:
    """Smallest symplectic eigenvalue at least ``1 - tol``, with ``tol`` scaled by the largest entry.

    Eigenvalues of strongly squeezed states carry rounding error of order
    ``machine eps * |gamma|**2``; the scaling keeps such states admissible.
    """
    g = np.asarray(gamma, dtype=float)
    scale = max(1.0, float(np.max(np.abs(g)))) ** 2
    return bool(np.min(symplectic_eigenvalues(g)) >= 1.0 - tol * scale)


def vacuum_state(n_modes: int, modes: Sequence[ModeLabel] | None = None) -> GaussianState:
    if n_modes < 1:
        raise ValueError("need at least one mode")
    if modes is None:
        modes = [aux(i + 1) for i in range(n_modes)]
    if len(modes) != n_modes:
        raise ValueError("len(modes) must equal n_modes")
    return GaussianState(tuple(modes), np.eye(2 * n_modes))


def squeezed_light_state(r: float, mode: ModeLabel = LIGHT) -> GaussianState:
    """Single-mode light with covariance ``diag(1/r, r)``.

    ``r > 1`` is squeezed in x, ``r < 1`` anti-squeezed, ``r = 1`` coherent.
    """
    if not np.isfinite(r) or r <= 0:
        raise DomainError(f"squeezing parameter must be positive and finite, got {r}")
    return GaussianState((mode,), np.diag([1.0 / r, r]))


def squeezer_map(r: float, mode: ModeLabel = LIGHT) -> SymplecticMap:
    """Single-mode squeezer ``diag(1/sqrt(r), sqrt(r))`` (maps vacuum to diag(1/r, r))."""
    if r <= 0:
        raise DomainError(f"squeezing parameter must be positive, got {r}")
    return SymplecticMap((mode,), np.diag([r**-0.5, r**0.5]))


def two_mode_squeezed_state(r: float, modes: tuple[ModeLabel, ModeLabel] = (ATOM1, ATOM2)) -> GaussianState:
    """Pure symmetric two-mode state with EPR uncertainty ``1/r``.

    Uses ``n = (r + 1/r)/2`` and ``k = (r - 1/r)/2`` in the symmetric form, so
    that ``n - k = 1/r`` and ``n^2 - k^2 = 1``.
    """
    if r <= 0:
        raise DomainError(f"squeezing parameter must be positive, got {r}")
    n = 0.5 * (r + 1.0 / r)
    k = 0.5 * (r - 1.0 / r)
    return GaussianState(modes, symmetric_form(n, k))


def symmetric_form(n: float, k: float) -> np.ndarray:
    return np.array(
        [
            [n, 0, k, 0],
            [0, n, 0, -k],
            [k, 0, n, 0],
            [0, -k, 0, n],
        ],
        dtype=float,
    )


def embed(smap: SymplecticMap, modes: Sequence[ModeLabel]) -> np.ndarray:
    """Full ``2n x 2n`` matrix of ``smap`` acting on a register ``modes`` (identity elsewhere)."""
    modes = tuple(modes)
    if smap.modes == modes:
        return np.array(smap.matrix)
    pos = []
    for m in smap.modes:
        if m not in modes:
            raise KeyError(f"map acts on {m}, which is not in the state")
        i = modes.index(m)
        pos += [2 * i, 2 * i + 1]
    full = np.eye(2 * len(modes))
    full[np.ix_(pos, pos)] = smap.matrix
    return full


def apply_symplectic(state: GaussianState, smap: SymplecticMap) -> GaussianState:
    """``gamma -> S gamma S^T``; ``smap`` may act on any subset of the register."""
    if len(smap.modes) > state.n_modes:
        raise ValueError("symplectic map acts on more modes than the state holds")
    s = embed(smap, state.modes)
    return GaussianState(state.modes, _symmetrize(s @ state.gamma @ s.T))


def beam_splitter_map(epsilon: float, modes: tuple[ModeLabel, ModeLabel] = (LIGHT, VACUUM)) -> SymplecticMap:
    """Lossy-line beam splitter with intensity transmission ``1 - epsilon``.

    Outputs in terms of inputs, applied identically to x and p::

        q'   = sqrt(1-eps) q   + sqrt(eps) q_v
        q'_v = -sqrt(eps) q    + sqrt(1-eps) q_v

    The first entry of ``modes`` is the signal port, the second the vacuum port.
    """
    if not 0.0 <= epsilon < 1.0:
        raise DomainError(f"loss must lie in [0, 1), got {epsilon}")
    t = np.sqrt(1.0 - epsilon)
    s = np.sqrt(epsilon)
    rot = np.array([[t, s], [-s, t]])
    return SymplecticMap(tuple(modes), np.kron(rot, np.eye(2)))


def loss_channel(state: GaussianState, mode: ModeLabel, epsilon: float) -> GaussianState:
    """Mix ``mode`` with vacuum at intensity loss ``epsilon`` and drop the vacuum port."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"loss must lie in [0, 1], got {epsilon}")
    idx = state.quadrature_indices([mode])
    scale = np.ones(2 * state.n_modes)
    scale[idx] = np.sqrt(1.0 - epsilon)
    gamma = state.gamma * np.outer(scale, scale)
    gamma[np.ix_(idx, idx)] += epsilon * np.eye(2)
    return GaussianState(state.modes, gamma)


def attach(state: GaussianState, other: GaussianState) -> GaussianState:
    """Tensor product: block-diagonal concatenation of the covariances."""
    n1 = 2 * state.n_modes
    n2 = 2 * other.n_modes
    gamma = np.zeros((n1 + n2, n1 + n2))
    gamma[:n1, :n1] = state.gamma
    gamma[n1:, n1:] = other.gamma
    return GaussianState(state.modes + other.modes, gamma)


def discard(state: GaussianState, modes: Iterable[ModeLabel]) -> GaussianState:
    """Partial trace: delete the rows and columns of ``modes``."""
    drop = set(modes)
    for m in drop:
        state.index(m)
    keep = [m for m in state.modes if m not in drop]
    if not keep:
        raise ValueError("cannot discard every mode")
    return GaussianState(tuple(keep), state.block(*keep))


def reorder(state: GaussianState, modes: Sequence[ModeLabel]) -> GaussianState:
    if set(modes) != set(state.modes) or len(modes) != state.n_modes:
        raise ValueError("reorder needs a permutation of the register")
    return GaussianState(tuple(modes), state.block(*modes))


def homodyne_update(state: GaussianState, mode: ModeLabel, quadrature: str = "x") -> GaussianState:
    """Condition on a homodyne measurement of one quadrature of ``mode``.

    The remaining covariance ``A`` becomes ``A - C (pi B pi)^- C^T`` where
    ``B`` is the measured mode's block, ``C`` the cross block and ``pi``
    projects on the measured quadrature. The measured mode is removed.
    """
    if quadrature not in ("x", "p"):
        raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    rest = [m for m in state.modes if m != mode]
    state.index(mode)
    if not rest:
        raise ValueError("cannot measure the only mode of a state")
    ia = state.quadrature_indices(rest)
    ib = state.quadrature_indices([mode])
    g = state.gamma
    a = g[np.ix_(ia, ia)]
    b = g[np.ix_(ib, ib)]
    c = g[np.ix_(ia, ib)]
    proj = np.diag([1.0, 0.0]) if quadrature == "x" else np.diag([0.0, 1.0])
    a_new = a - c @ np.linalg.pinv(proj @ b @ proj, rcond=PINV_RCOND) @ c.T
    return GaussianState(tuple(rest), a_new)
