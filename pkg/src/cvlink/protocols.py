"""Entanglement generation between two atomic gases over a lossy optical line.

Three schemes are provided, each as a stepped covariance simulation and,
where available, in closed form:

* asymmetric probing: light passes gas 1, a line of intensity loss
  ``epsilon``, gas 2, and its x quadrature is detected;
* symmetric probing: four passes per time step (both directions, both
  quadratures), driving the EPR uncertainty along a Riccati equation;
* an EPR light source in the middle of the line (reference scheme).

``run_polygamy`` replaces the line by a lossless M-port splitter feeding M
receiver gases.

Port orientation
----------------
The light entering the interaction is described in the output ports of the
loss beam splitter. The 2x2 rotation relating ports,

    (q, q_v) = [[sqrt(1-eps), -sqrt(eps)], [sqrt(eps), sqrt(1-eps)]] (q', q'_v),

can be used in two ways when the output-port covariance of the incoming
light is built:

``"direct"``
    the rotation is applied to the input ports to obtain the output ports.
    This reproduces the closed forms of ``analytic_asymmetric_covariance``
    (with their N = 1/3 plateau) and is the default.
``"inverse"``
    the rotation is inverted, which makes gas 1 couple to the undamped input
    light only (``x1 += kappa_tau * p``). Closed forms for this case are
    provided too; the x-quadrature entries for gas 1 differ.

Both give identical EPR variances ``var(x1 - x2)`` and ``var(p1 + p2)`` and
therefore identical teleportation fidelities.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize

from .entanglement import TwoModeSummary
from .gaussian import (
    ATOM1,
    ATOM2,
    LIGHT,
    PINV_RCOND,
    VACUUM,
    DomainError,
    GaussianState,
    ModeKind,
    ModeLabel,
    SymplecticMap,
    apply_symplectic,
    attach,
    aux,
    beam_splitter_map,
    discard,
    embed,
    homodyne_update,
    loss_channel,
    squeezed_light_state,
    two_mode_squeezed_state,
    vacuum_state,
)

ORIENTATIONS = ("direct", "inverse")
ATOMS = (ATOM1, ATOM2)
PORTS = (VACUUM, LIGHT)

Term = tuple[float, tuple[ModeLabel, str], tuple[ModeLabel, str]]


@dataclass(frozen=True)
class ChannelParams:
    """Loss, squeezing, coupling rate, step and duration of a probing run.

    ``kappa2`` is the continuous coupling rate; one step of length ``tau``
    carries ``kappa_tau**2 = kappa2 * tau``.
    """

    epsilon: float
    r: float
    kappa2: float = 1.0
    tau: float = 1e-4
    t_final: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise DomainError(f"r must be positive and finite, got {self.r}")
        if not self.kappa2 > 0:
            raise DomainError(f"kappa2 must be positive, got {self.kappa2}")
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        if not self.t_final >= 0:
            raise DomainError(f"t_final must be non-negative, got {self.t_final}")

    @property
    def kappa_tau(self) -> float:
        return math.sqrt(self.kappa2 * self.tau)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.tau))

    def replace(self, **changes) -> "ChannelParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class RiccatiCoeffs:
    a: float  # noise growth rate
    b: float  # entanglement drive rate


@dataclass
class Trajectory:
    times: np.ndarray
    summaries: list[TwoModeSummary]

    def __len__(self):
        return len(self.summaries)

    @property
    def final(self) -> TwoModeSummary:
        return self.summaries[-1]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.summaries])


def _check_orientation(orientation: str):
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}, got {orientation!r}")


# -- maps -------------------------------------------------------------------


def interaction_map(modes: Sequence[ModeLabel], terms: Iterable[Term]) -> SymplecticMap:
    """Exact one-step map of ``H = sum g * q_a * q_b`` from Heisenberg's equation.

    Every mode may couple through one quadrature only, so all coupled
    quadratures are conserved and the conjugates move linearly:
    a coupled ``p`` pushes its ``x`` by ``+g * partner``, a coupled ``x``
    pushes its ``p`` by ``-g * partner``.
    """
    modes = tuple(modes)
    used: dict[ModeLabel, str] = {}
    s = np.eye(2 * len(modes))
    qoff = {"x": 0, "p": 1}

    def idx(mode, quad):
        return 2 * modes.index(mode) + qoff[quad]

    for g, (ma, qa), (mb, qb) in terms:
        for m, q in ((ma, qa), (mb, qb)):
            if used.setdefault(m, q) != q:
                raise ValueError(f"mode {m} couples through both quadratures")
        for (m, q), (mo, qo) in (((ma, qa), (mb, qb)), ((mb, qb), (ma, qa))):
            if q == "p":
                s[idx(m, "x"), idx(mo, qo)] += g
            else:
                s[idx(m, "p"), idx(mo, qo)] -= g
    return SymplecticMap(modes, s)


def asymmetric_terms(kappa_tau: float, epsilon: float) -> list[Term]:
    t = math.sqrt(1.0 - epsilon)
    s = math.sqrt(epsilon)
    return [
        (kappa_tau * t, (ATOM1, "p"), (LIGHT, "p")),
        (kappa_tau * t, (ATOM2, "p"), (LIGHT, "p")),
        (-kappa_tau * s, (ATOM1, "p"), (VACUUM, "p")),
    ]


def asymmetric_step_map(params: ChannelParams) -> SymplecticMap:
    """One step on ``(x1, p1, x2, p2, x'_v, p'_v, x', p')``."""
    return interaction_map(ATOMS + PORTS, asymmetric_terms(params.kappa_tau, params.epsilon))


def symmetric_terms(kappa_tau: float, epsilon: float, last_noise_sign: float = 1.0) -> list[tuple[list[Term], str]]:
    """The four passes of one symmetric step, each with the quadrature detected afterwards."""
    t = kappa_tau * math.sqrt(1.0 - epsilon)
    s = kappa_tau * math.sqrt(epsilon)
    return [
        ([(t, (ATOM1, "p"), (LIGHT, "p")), (t, (ATOM2, "p"), (LIGHT, "p")), (-s, (ATOM1, "p"), (VACUUM, "p"))], "x"),
        ([(t, (ATOM1, "p"), (LIGHT, "p")), (t, (ATOM2, "p"), (LIGHT, "p")), (-s, (ATOM2, "p"), (VACUUM, "p"))], "x"),
        ([(t, (ATOM1, "x"), (LIGHT, "x")), (-t, (ATOM2, "x"), (LIGHT, "x")), (-s, (ATOM1, "x"), (VACUUM, "x"))], "p"),
        (
            [
                (t, (ATOM1, "x"), (LIGHT, "x")),
                (-t, (ATOM2, "x"), (LIGHT, "x")),
                (last_noise_sign * s, (ATOM2, "x"), (VACUUM, "x")),
            ],
            "p",
        ),
    ]


def light_ports(epsilon: float, r: float, orientation: str = "direct", measured: str = "x") -> GaussianState:
    """Output-port covariance on ``(VACUUM, LIGHT)`` of squeezed light mixed with vacuum.

    The input light is ``diag(1/r, r)`` when x is to be detected and
    ``diag(r, 1/r)`` when p is.
    """
    _check_orientation(orientation)
    rr = r if measured == "x" else 1.0 / r
    state = attach(vacuum_state(1, [VACUUM]), squeezed_light_state(rr, LIGHT))
    bs = beam_splitter_map(epsilon, (LIGHT, VACUUM))
    if orientation == "direct":
        bs = bs.inverse()
    return apply_symplectic(state, bs)


# -- generic stepping ----------------------------------------------------------


def probe_step(
    atoms: GaussianState,
    smap: SymplecticMap,
    light: GaussianState,
    measured: Sequence[tuple[ModeLabel, str]],
) -> GaussianState:
    """Attach fresh light, interact, detect, and trace out the remaining light."""
    state = apply_symplectic(attach(atoms, light), smap)
    for mode, quad in measured:
        state = homodyne_update(state, mode, quad)
    leftover = [m for m in state.modes if m not in atoms.modes]
    return discard(state, leftover) if leftover else state


class CompiledStep:
    """``probe_step`` reduced to a fixed map on the atomic covariance.

    With atoms ``A`` and fresh light ``L`` uncorrelated, the rows kept after
    the interaction are ``S_a A S_a^T + S_l L S_l^T``; the detected rows are
    then eliminated by a Schur complement.
    """

    def __init__(self, atom_modes, smap: SymplecticMap, light: GaussianState, measured):
        atom_modes = tuple(atom_modes)
        modes = atom_modes + light.modes
        s = embed(smap, modes)
        na = 2 * len(atom_modes)
        rows = list(range(na))
        for mode, quad in measured:
            rows.append(2 * modes.index(mode) + (0 if quad == "x" else 1))
        sr = s[rows]
        self.na = na
        self.sa = np.ascontiguousarray(sr[:, :na])
        self.sat = np.ascontiguousarray(self.sa.T)
        sl = sr[:, na:]
        self.q = sl @ light.gamma @ sl.T
        self.single = len(rows) == na + 1

    def __call__(self, a: np.ndarray) -> np.ndarray:
        na = self.na
        m = self.sa @ a @ self.sat
        m += self.q
        if self.single:
            b = m[na, na]
            out = m[:na, :na]
            if b != 0.0:
                c = m[:na, na]
                out -= np.outer(c, c) / b
        else:
            c = m[:na, na:]
            out = m[:na, :na] - c @ np.linalg.pinv(m[na:, na:], rcond=PINV_RCOND) @ c.T
        return 0.5 * (out + out.T)


def _sample_steps(params: ChannelParams, times: Sequence[float] | None, n_samples: int) -> tuple[np.ndarray, np.ndarray]:
    n = params.n_steps
    if times is None:
        steps = np.unique(np.linspace(0, n, min(n, n_samples - 1) + 1).round().astype(int))
    else:
        steps = np.array([int(round(t / params.tau)) for t in times])
        if np.any(steps < 0) or np.any(steps > n):
            raise ValueError("sampling times must lie in [0, t_final]")
        if np.any(np.diff(steps) < 0):
            raise ValueError("sampling times must be non-decreasing")
    return steps, steps * params.tau


def evolve(
    a0: np.ndarray,
    substeps: Sequence[Callable[[np.ndarray], np.ndarray]],
    sample_steps: Sequence[int],
    backend: str = "auto",
) -> list[np.ndarray]:
    """Apply ``substeps`` in order once per step, recording ``a`` after each requested step count.

    ``backend="auto"`` runs single-quadrature ``CompiledStep`` passes through
    the compiled loop and anything else through plain numpy.
    """
    want = [int(k) for k in sample_steps]
    if any(b < a for a, b in zip(want, want[1:])) or (want and want[0] < 0):
        raise ValueError("sample steps must be non-negative and non-decreasing")
    compiled = backend != "numpy" and all(isinstance(f, CompiledStep) and f.single for f in substeps)
    if backend == "compiled" and not compiled:
        raise ValueError("compiled backend needs single-quadrature CompiledStep passes")
    a = np.array(a0, dtype=float)
    if compiled and substeps:
        from ._kernel import run_passes

        sa = np.ascontiguousarray(np.stack([f.sa for f in substeps]))
        q = np.ascontiguousarray(np.stack([f.q for f in substeps]))

        def advance(a, n):
            return run_passes(a, sa, q, n)

    else:

        def advance(a, n):
            for _ in range(n):
                for f in substeps:
                    a = f(a)
            return a

    out = []
    done = 0
    for k in want:
        if k > done:
            a = advance(a, k - done)
            done = k
        out.append(a.copy())
    return out


# -- asymmetric probing -----------------------------------------------------------


def asymmetric_step(atoms: GaussianState, params: ChannelParams, orientation: str = "direct") -> GaussianState:
    """One asymmetric step built from the state primitives (reference path)."""
    return probe_step(
        atoms,
        asymmetric_step_map(params),
        light_ports(params.epsilon, params.r, orientation),
        [(LIGHT, "x")],
    )


def _asymmetric_kernel(params: ChannelParams, orientation: str) -> CompiledStep:
    return CompiledStep(
        ATOMS, asymmetric_step_map(params), light_ports(params.epsilon, params.r, orientation), [(LIGHT, "x")]
    )


def run_asymmetric(
    params: ChannelParams,
    orientation: str = "direct",
    times: Sequence[float] | None = None,
    n_samples: int = 101,
    backend: str = "auto",
) -> Trajectory:
    """Stepped one-way probing from two vacuum gases; summaries at the sampled times."""
    _check_orientation(orientation)
    steps, ts = _sample_steps(params, times, n_samples)
    mats = evolve(np.eye(4), [_asymmetric_kernel(params, orientation)], steps, backend)
    return Trajectory(ts, [TwoModeSummary.from_gamma(m) for m in mats])


def _asymmetric_x_coeffs(epsilon: float, r: float, orientation: str) -> tuple[float, float, float]:
    """Growth rates (per kappa2 * t) of ``v_x1``, ``v_x2`` and ``c_x``."""
    e = epsilon
    vx2 = (1 - e) * (1 + (r - 1) * (1 - e))
    if orientation == "direct":
        vx1 = r + 4 * e * (1 - r) + 4 * e * e * (r - 1)
        cx = (1 - e) * (r + 2 * e * (1 - r))
    else:
        vx1 = r
        cx = (1 - e) * r
    return vx1, vx2, cx


def analytic_asymmetric_entries(epsilon: float, r: float, kt: float, orientation: str = "direct") -> dict[str, float]:
    """Closed-form covariance entries at ``kt = kappa2 * t``."""
    _check_orientation(orientation)
    e = epsilon
    ax1, ax2, acx = _asymmetric_x_coeffs(e, r, orientation)
    c0 = (1 - r) * (1 - e) + r
    k = kt * r * (1 - e)
    den = 2 * k + c0
    return {
        "v_x1": 1 + kt * ax1,
        "v_p1": (k + c0) / den,
        "v_x2": 1 + kt * ax2,
        "v_p2": (k + c0) / den,
        "c_x": kt * acx,
        "c_p": -k / den,
    }


def analytic_asymmetric_covariance(params: ChannelParams, t: float | None = None, orientation: str = "direct") -> TwoModeSummary:
    t = params.t_final if t is None else t
    if t < 0:
        raise DomainError("t must be non-negative")
    return TwoModeSummary.from_entries(**analytic_asymmetric_entries(params.epsilon, params.r, params.kappa2 * t, orientation))


def asymptotic_negativity(epsilon: float, r: float, orientation: str = "direct") -> float:
    """Long-time limit of ``N`` for asymmetric probing.

    As ``t -> inf`` the smaller symplectic eigenvalue of the partial transpose
    tends to ``sqrt(g_minus * c0 / g_plus)`` where ``g_minus = eps * c0`` and
    ``g_plus`` are the growth rates of ``gamma(x1 - x2)`` and ``gamma(x1 + x2)``
    and ``c0 = 1 - eps + r eps``.
    """
    _check_orientation(orientation)
    if not 0.0 <= epsilon < 1.0:
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon}")
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    e = epsilon
    c0 = 1 - e + r * e
    ax1, ax2, acx = _asymmetric_x_coeffs(e, r, orientation)
    g_plus = ax1 + ax2 + 2 * acx
    return min(1.0, math.sqrt(e * c0 / g_plus))


# -- symmetric probing ------------------------------------------------------------


def riccati_coeffs(params: ChannelParams) -> RiccatiCoeffs:
    e, r, k2 = params.epsilon, params.r, params.kappa2
    c0 = 1 - e + r * e
    return RiccatiCoeffs(a=k2 * e * c0, b=4 * k2 * r * (1 - e) / c0)


def delta_closed_form(coeffs: RiccatiCoeffs, t):
    """Solution of ``dD/dt = a - b D^2`` with ``D(0) = 1``."""
    a, b = coeffs.a, coeffs.b
    t = np.asarray(t, dtype=float)
    q = math.sqrt(a) / math.sqrt(b)
    if q == 0.0:
        out = 1.0 / (1.0 + b * t)
    else:
        # rate sqrt(a b) written as q b so tiny a rounds consistently
        th = np.tanh(q * b * t)
        out = q * (1.0 + q * th) / (q + th)
    return float(out) if out.ndim == 0 else out


def delta_steady_state(params: ChannelParams) -> float:
    e, r = params.epsilon, params.r
    if e >= 1.0:
        raise DomainError("no steady state for total loss")
    return 0.5 * (1 - e + r * e) * math.sqrt(e / (r * (1 - e)))


def steady_state_delta(epsilon: float, r: float) -> float:
    return delta_steady_state(ChannelParams(epsilon, r))


def optimal_r(epsilon: float) -> float:
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return (1 - epsilon) / epsilon


def min_delta(epsilon: float) -> float:
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return epsilon


def numeric_optimal_r(epsilon: float) -> tuple[float, float]:
    """Golden-section minimisation of the steady-state EPR uncertainty over ``log r``."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    res = optimize.minimize_scalar(
        lambda u: steady_state_delta(epsilon, math.exp(u)),
        bracket=(-12.0, 0.0, 12.0),
        method="golden",
        tol=1e-12,
    )
    return math.exp(res.x), float(res.fun)


ORDERINGS = ("palindromic", "sequential")


def symmetric_passes(params: ChannelParams, ordering: str = "palindromic", last_noise_sign: float = 1.0):
    """Interaction maps and detected quadratures of one full symmetric step, in application order.

    ``sequential`` runs the four passes once each over the full step.
    ``palindromic`` runs them forward then backward over half steps, which
    keeps the x and p blocks in step and the covariance in the symmetric form
    to second order in ``tau``.
    """
    if ordering not in ORDERINGS:
        raise ValueError(f"ordering must be one of {ORDERINGS}, got {ordering!r}")
    if ordering == "sequential":
        passes = symmetric_terms(params.kappa_tau, params.epsilon, last_noise_sign)
    else:
        half = symmetric_terms(math.sqrt(params.kappa2 * params.tau / 2), params.epsilon, last_noise_sign)
        passes = half + half[::-1]
    return [(interaction_map(ATOMS + PORTS, terms), quad) for terms, quad in passes]


def symmetric_kernels(
    params: ChannelParams,
    orientation: str = "direct",
    ordering: str = "palindromic",
    last_noise_sign: float = 1.0,
) -> list[CompiledStep]:
    _check_orientation(orientation)
    return [
        CompiledStep(ATOMS, smap, light_ports(params.epsilon, params.r, orientation, measured=quad), [(LIGHT, quad)])
        for smap, quad in symmetric_passes(params, ordering, last_noise_sign)
    ]


def symmetric_step(
    atoms: GaussianState,
    params: ChannelParams,
    orientation: str = "direct",
    ordering: str = "palindromic",
    last_noise_sign: float = 1.0,
) -> GaussianState:
    """One full symmetric step through the state primitives (reference path)."""
    for smap, quad in symmetric_passes(params, ordering, last_noise_sign):
        atoms = probe_step(atoms, smap, light_ports(params.epsilon, params.r, orientation, quad), [(LIGHT, quad)])
    return atoms


def run_symmetric(
    params: ChannelParams,
    orientation: str = "direct",
    times: Sequence[float] | None = None,
    n_samples: int = 101,
    ordering: str = "palindromic",
    last_noise_sign: float = 1.0,
    backend: str = "auto",
) -> Trajectory:
    """Stepped two-way probing; ``summary.delta`` is the EPR uncertainty trajectory."""
    steps, ts = _sample_steps(params, times, n_samples)
    kernels = symmetric_kernels(params, orientation, ordering, last_noise_sign)
    mats = evolve(np.eye(4), kernels, steps, backend)
    return Trajectory(ts, [TwoModeSummary.from_gamma(m) for m in mats])


# -- EPR source -------------------------------------------------------------------


def epr_source_delta(epsilon: float, r: float) -> tuple[float, float]:
    """EPR uncertainty of a centred source after loss, and its infinite-squeezing bound."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon}")
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    t = math.sqrt(1 - epsilon)
    return 1 + t * (1 / r - 1), 1 - t


def epr_source_state(epsilon: float, r: float) -> GaussianState:
    """Two-mode squeezed pair with EPR uncertainty ``1/r``, each arm losing ``1 - sqrt(1 - eps)``."""
    arm = 1 - math.sqrt(1 - epsilon)
    state = two_mode_squeezed_state(r, ATOMS)
    for m in ATOMS:
        state = loss_channel(state, m, arm)
    return state


# -- richardson ---------------------------------------------------------------------


def richardson(run: Callable[..., Trajectory], params: ChannelParams, times: Sequence[float], **kw) -> list[np.ndarray]:
    """First-order Richardson extrapolation ``2 A(tau/2) - A(tau)`` of the atomic covariances."""
    coarse = run(params, times=times, **kw)
    fine = run(params.replace(tau=params.tau / 2), times=times, **kw)
    return [2 * f.gamma12 - c.gamma12 for f, c in zip(fine.summaries, coarse.summaries)]


# -- polygamy -----------------------------------------------------------------------


def splitter_ports(m_sites: int) -> tuple[ModeLabel, ...]:
    """Output ports of the M-way splitter; port ``j`` feeds receiver ``aux(j + 1)``."""
    return (LIGHT,) + tuple(ModeLabel(ModeKind.LIGHT_VACUUM, j) for j in range(1, m_sites))


def splitter_map(m_sites: int) -> SymplecticMap:
    """Lossless chain of beam splitters sending ``1/M`` of the light on port 0 to every port.

    Port phases are fixed so that every port carries ``+1/sqrt(M)`` of the input.
    """
    if m_sites < 1:
        raise ValueError("need at least one port")
    ports = splitter_ports(m_sites)
    s = np.eye(2 * m_sites)
    for j in range(m_sites - 1):
        eps_j = (m_sites - j - 1) / (m_sites - j)
        stage = beam_splitter_map(eps_j, (ports[j], ports[j + 1]))
        s = embed(stage, ports) @ s
    signs = np.sign(s[0::2, 0])
    s = np.diag(np.repeat(signs, 2)) @ s
    return SymplecticMap(ports, s)


def polygamy_terms(kappa_tau: float, m_sites: int) -> list[Term]:
    ports = splitter_ports(m_sites)
    g = kappa_tau / math.sqrt(m_sites)
    terms: list[Term] = []
    for j, port in enumerate(ports):
        terms.append((g, (ATOM1, "p"), (port, "p")))
        terms.append((g, (aux(j + 1), "p"), (port, "p")))
    return terms


def run_polygamy(
    m_sites: int,
    r: float,
    kappa2: float = 1.0,
    tau: float = 1e-4,
    t_final: float = 1.0,
    detect: str = "own",
) -> list[TwoModeSummary]:
    """Gas 1 shares the probe with ``m_sites`` receivers behind a lossless splitter.

    Returns the reduced (gas 1, receiver i) summaries at ``t_final``, one per
    receiver. With ``detect="own"`` the pair (1, i) is conditioned on the
    record of port i only, the other ports being unavailable to that pair;
    ``detect="all"`` conditions every pair on all M records.
    """
    if m_sites < 2:
        raise ValueError(f"need at least 2 receiver sites, got {m_sites}")
    if detect not in ("own", "all"):
        raise ValueError("detect must be 'own' or 'all'")
    params = ChannelParams(epsilon=0.0, r=r, kappa2=kappa2, tau=tau, t_final=t_final)
    receivers = tuple(aux(i + 1) for i in range(m_sites))
    atoms = (ATOM1,) + receivers
    ports = splitter_ports(m_sites)
    light = attach(squeezed_light_state(r, LIGHT), vacuum_state(m_sites - 1, ports[1:]))
    light = apply_symplectic(light, splitter_map(m_sites))
    smap = interaction_map(atoms + ports, polygamy_terms(params.kappa_tau, m_sites))
    a0 = np.eye(2 * len(atoms))

    def pair(a, i):
        idx = [0, 1, 2 * (i + 1), 2 * (i + 1) + 1]
        return TwoModeSummary.from_gamma(a[np.ix_(idx, idx)])

    steps = [params.n_steps]
    if detect == "all":
        kernel = CompiledStep(atoms, smap, light, [(p, "x") for p in ports])
        a = evolve(a0, [kernel], steps)[-1]
        return [pair(a, i) for i in range(m_sites)]
    out = []
    for i, port in enumerate(ports):
        kernel = CompiledStep(atoms, smap, light, [(port, "x")])
        a = evolve(a0, [kernel], steps)[-1]
        out.append(pair(a, i))
    return out
