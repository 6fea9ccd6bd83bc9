"""Acceptance checks shared by ``cvlink verify`` and the test suite.

Every check returns rows of ``(name, expected, got, tol, passed)``. Checks
are keyed by a short slug so subsets can be selected by substring.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .entanglement import TwoModeSummary
from .gaussian import (
    LIGHT,
    VACUUM,
    apply_symplectic,
    attach,
    beam_splitter_map,
    discard,
    loss_channel,
    reorder,
    symplectic_eigenvalues,
    two_mode_squeezed_state,
    vacuum_state,
)
from .protocols import (
    ATOM2,
    ATOMS,
    ChannelParams,
    analytic_asymmetric_covariance,
    asymmetric_step_map,
    asymptotic_negativity,
    delta_closed_form,
    epr_source_delta,
    epr_source_state,
    numeric_optimal_r,
    riccati_coeffs,
    run_asymmetric,
    run_polygamy,
    run_symmetric,
    splitter_map,
    steady_state_delta,
    symmetric_passes,
)
from .sweep import emit_csv, parse_csv, sweep
from .teleport import adjudicate, channel_variances, clone_bound, fidelity_symmetric, optimize_local_squeezing

TEST_EPS = (0.0, 0.3, 0.7)
TEST_R = (0.5, 1.0, 2.0, 10.0)
TAU = 1e-4
ENTRY_NAMES = ("v_x1", "v_p1", "v_x2", "v_p2", "c_x", "c_p")


@dataclass(frozen=True)
class Row:
    name: str
    expected: float | str
    got: float | str
    tol: float | str
    passed: bool

    def cells(self) -> list[str]:
        def f(v):
            return v if isinstance(v, str) else f"{v:.10g}"

        return [self.name, f(self.expected), f(self.got), f(self.tol), "PASS" if self.passed else "FAIL"]


def _close(name, expected, got, tol, rel=False) -> Row:
    scale = abs(expected) if rel else 1.0
    return Row(name, expected, got, tol, bool(abs(got - expected) <= tol * scale))


def _worst_rel(sim: dict[str, float], ref: dict[str, float]) -> float:
    worst = 0.0
    for k in ENTRY_NAMES:
        d = abs(sim[k] - ref[k])
        worst = max(worst, d / abs(ref[k]) if abs(ref[k]) > 1e-9 else d)
    return worst


@lru_cache(maxsize=None)
def _asym_run(eps: float, r: float, orientation: str = "direct"):
    return run_asymmetric(ChannelParams(eps, r, 1.0, TAU, 5.0), orientation, times=(0.5, 1.0, 5.0))


# -- criteria ------------------------------------------------------------------------


def check_closed_form_asymmetric() -> list[Row]:
    rows = []
    for eps, r in itertools.product(TEST_EPS, TEST_R):
        traj = _asym_run(eps, r)
        worst = 0.0
        for t, s in zip(traj.times, traj.summaries):
            ref = analytic_asymmetric_covariance(ChannelParams(eps, r), t)
            worst = max(worst, _worst_rel(s.entries(), ref.entries()))
        rows.append(Row(f"eps={eps} r={r} max entry rel err, kt in (0.5, 1, 5)", 0.0, worst, 1e-3, worst <= 1e-3))
    return rows


def check_riccati_symmetric() -> list[Row]:
    rows = []
    times = np.linspace(0.0, 5.0, 51)
    for eps, r in itertools.product(TEST_EPS, TEST_R):
        params = ChannelParams(eps, r, 1.0, TAU, 5.0)
        sim = run_symmetric(params, times=times).column("delta")
        ref = delta_closed_form(riccati_coeffs(params), times)
        err = float(np.max(np.abs(sim - ref) / ref))
        rows.append(Row(f"eps={eps} r={r} Delta(t) max rel err on [0, 5]", 0.0, err, 1e-3, err <= 1e-3))
    # a = 0 at eps = 0, where Delta decays algebraically to 0; the steady state is checked for eps > 0
    for eps, r in itertools.product(TEST_EPS[1:], TEST_R):
        t_end = 15.0
        params = ChannelParams(eps, r, 1.0, TAU, t_end)
        got = run_symmetric(params, times=(t_end,)).final.delta
        c = riccati_coeffs(params)
        rows.append(_close(f"eps={eps} r={r} Delta(kt={t_end:g}) vs sqrt(a/b)", math.sqrt(c.a / c.b), got, 1e-3, rel=True))
    return rows


def check_optimal_squeezing() -> list[Row]:
    rows = []
    for eps in (0.1, 0.3, 0.5, 0.8):
        r_num, d_num = numeric_optimal_r(eps)
        rows.append(_close(f"eps={eps} argmin_r Delta_ss", (1 - eps) / eps, r_num, 1e-6, rel=True))
        rows.append(_close(f"eps={eps} min_r Delta_ss", eps, d_num, 1e-6, rel=True))
        if eps > 0.5:
            rows.append(Row(f"eps={eps} optimum antisqueezed (r_opt < 1)", "< 1", r_num, "-", r_num < 1))
    return rows


def check_negativity_plateau() -> list[Row]:
    rows = []
    for r in (0.1, 1.0, 10.0):
        rows.append(_close(f"eps=1/3 r={r} N_inf", 1 / 3, asymptotic_negativity(1 / 3, r), 1e-6))
    rows.append(_close("eps=0.2 r=1e4 N_inf vs eps/(2-3 eps)", 0.2 / (2 - 0.6), asymptotic_negativity(0.2, 1e4), 1e-3))
    for eps in (0.5, 0.9, 0.99):
        rows.append(_close(f"eps={eps} r=1e-3 N_inf", 1 / 3, asymptotic_negativity(eps, 1e-3), 1e-2))
    return rows


def check_coherent_threshold() -> list[Row]:
    lo, hi = steady_state_delta(0.79, 1.0), steady_state_delta(0.81, 1.0)
    return [
        Row("r=1 eps=0.79 Delta_ss < 1", "< 1", lo, "-", lo < 1),
        Row("r=1 eps=0.81 Delta_ss >= 1", ">= 1", hi, "-", hi >= 1),
        _close("r=1 Delta_ss at eps=4/5", 1.0, steady_state_delta(0.8, 1.0), 1e-12),
    ]


def check_epr_reference() -> list[Row]:
    rows = [
        _close("eps=0.36 r=10 Delta", 0.28, epr_source_delta(0.36, 10.0)[0], 1e-12),
        _close("eps=0 r=10 Delta = 1/r", 0.1, epr_source_delta(0.0, 10.0)[0], 1e-12),
        _close("eps=1 Delta = 1", 1.0, epr_source_delta(1.0, 10.0)[0], 1e-12),
    ]
    worst_state = 0.0
    margin = math.inf
    for eps in np.linspace(0.0, 0.99, 23):
        for r in np.geomspace(0.1, 1e4, 29):
            d, bound = epr_source_delta(eps, r)
            g = epr_source_state(eps, r).gamma
            # entries grow like r while delta stays O(1): compare in units of the largest entry
            worst_state = max(worst_state, abs(TwoModeSummary.from_gamma(g).delta - d) / float(np.max(np.abs(g))))
            margin = min(margin, d - bound)
    rows.append(_close("state-based Delta vs closed form, err / max|gamma|", 0.0, worst_state, 1e-12))
    rows.append(Row("min over grid of Delta - (1 - sqrt(1-eps))", ">= 0", margin, "-", margin >= 0.0))
    return rows


def check_fidelity() -> list[Row]:
    rows = [
        _close("F(Delta=eps=0.3)", 1 / 1.3, fidelity_symmetric(0.3), 1e-12),
        _close("F(Delta=1)", 0.5, fidelity_symmetric(1.0), 1e-12),
    ]
    excess = -math.inf
    for eps, r in itertools.product(TEST_EPS, TEST_R):
        for s in _asym_run(eps, r).summaries:
            _, f = optimize_local_squeezing(*channel_variances(s.gamma12))
            excess = max(excess, f - 1 / (1 + eps))
    rows.append(Row("simulated max F_opt - 1/(1+eps), test grid", "<= 0", excess, 1e-6, excess <= 1e-6))
    env = sweep("asymmetric", np.linspace(0.01, 0.99, 50), np.geomspace(0.1, 10, 50))
    excess = max(rec.F_bk_opt - 1 / (1 + rec.epsilon) for rec in env)
    rows.append(Row("asymptotic max F_opt - 1/(1+eps), 50x50 grid", "<= 0", excess, 1e-6, excess <= 1e-6))
    return rows


def check_polygamy() -> list[Row]:
    rows = []
    for m in (2, 3, 5):
        eps = 1 - 1 / m
        for r in (0.5, 2.0):
            pairs = run_polygamy(m, r, 1.0, TAU, 1.0)
            ref = run_asymmetric(ChannelParams(eps, r, 1.0, TAU, 1.0), "inverse", times=(1.0,)).final.gamma12
            err = max(float(np.max(np.abs(p.gamma12 - ref))) for p in pairs)
            rows.append(_close(f"M={m} r={r} max |gamma_pair - gamma_two_gas|", 0.0, err, 1e-6))
            f = max(optimize_local_squeezing(*channel_variances(p.gamma12))[1] for p in pairs)
            rows.append(Row(f"M={m} r={r} max pair F_opt <= M/(2M-1)", clone_bound(m), f, 1e-6, f <= clone_bound(m) + 1e-6))
    return rows


def _local_symplectic(rng_angles, sq) -> np.ndarray:
    blocks = []
    for th, s in zip(rng_angles, sq):
        c, si = math.cos(th), math.sin(th)
        blocks.append(np.diag([s, 1 / s]) @ np.array([[c, si], [-si, c]]))
    out = np.zeros((4, 4))
    out[:2, :2], out[2:, 2:] = blocks
    return out


def check_properties() -> list[Row]:
    rows = []
    p = ChannelParams(0.3, 2.0, 1.0, TAU, 1.0)
    maps = {"asymmetric step": asymmetric_step_map(p), "splitter M=5": splitter_map(5), "beam splitter eps=0.4": beam_splitter_map(0.4, (LIGHT, VACUUM))}
    for i, (smap, _) in enumerate(symmetric_passes(p)):
        maps[f"symmetric pass {i}"] = smap
    worst = max(m.symplectic_error() for m in maps.values())
    rows.append(_close("max symplectic-condition error over step maps", 0.0, worst, 1e-12))

    nu_min = math.inf
    for eps, r in itertools.product(TEST_EPS, TEST_R):
        for s in _asym_run(eps, r).summaries:
            nu_min = min(nu_min, float(symplectic_eigenvalues(s.gamma12)[0]))
    rows.append(Row("min symplectic eigenvalue along simulated runs", ">= 1 - 1e-9", nu_min, 1e-9, nu_min >= 1 - 1e-9))

    g = _asym_run(0.3, 2.0).final.gamma12
    n0 = TwoModeSummary.from_gamma(g).N
    worst = 0.0
    for th1, th2, s1, s2 in ((0.3, -1.1, 2.0, 0.7), (1.4, 0.2, 0.3, 5.0), (-2.0, 2.5, 1.0, 1.5)):
        sl = _local_symplectic((th1, th2), (s1, s2))
        worst = max(worst, abs(TwoModeSummary.from_gamma(sl @ g @ sl.T).N - n0))
    rows.append(_close("local-symplectic invariance of N", 0.0, worst, 1e-9))

    tms = two_mode_squeezed_state(3.0, ATOMS)
    lossy = loss_channel(tms, ATOM2, 0.35)
    via_bs = attach(tms, vacuum_state(1, (VACUUM,)))
    via_bs = apply_symplectic(via_bs, beam_splitter_map(0.35, (ATOM2, VACUUM)))
    via_bs = reorder(discard(via_bs, [VACUUM]), ATOMS)
    err = float(np.max(np.abs(lossy.gamma - via_bs.gamma)))
    rows.append(_close("loss_channel vs beam splitter + discard", 0.0, err, 1e-12))

    ref = delta_closed_form(riccati_coeffs(p), 1.0)
    errs = [abs(run_symmetric(p.replace(tau=tau), times=(1.0,)).final.delta - ref) for tau in (4e-4, 2e-4, 1e-4)]
    rows.append(Row("symmetric Delta(1) error strictly decreases as tau halves", "decreasing", ", ".join(f"{e:.3g}" for e in errs), "-", errs[0] > errs[1] > errs[2]))
    ana = analytic_asymmetric_covariance(p, 1.0).entries()
    err = max(_worst_rel(run_asymmetric(p.replace(tau=tau), times=(1.0,)).final.entries(), ana) for tau in (4e-4, 2e-4, 1e-4))
    rows.append(_close("asymmetric recursion exact at every tau", 0.0, err, 1e-10))

    recs = sweep("asymmetric", np.linspace(0.01, 0.99, 7), np.geomspace(0.1, 10, 7))
    a, b = emit_csv(recs), emit_csv(sweep("asymmetric", np.linspace(0.01, 0.99, 7), np.geomspace(0.1, 10, 7)))
    rows.append(Row("sweep CSV byte-identical across runs", "identical", "identical" if a == b else "differs", "-", a == b))
    rt = parse_csv(a) == recs
    rows.append(Row("CSV round trip parse(emit(records)) == records", "equal", "equal" if rt else "differs", "-", rt))
    return rows


def check_adjudication() -> list[Row]:
    alpha_rows, pref_rows = adjudicate(itertools.product(TEST_EPS, TEST_R))
    rows = []
    for label, table in (("alpha", alpha_rows), ("fidelity prefactor", pref_rows)):
        verdicts = {row.verdict for row in table}
        decisive = verdicts - {"both"}
        stable = len(decisive) == 1 and "neither" not in decisive
        got = ", ".join(sorted(verdicts))
        rows.append(Row(f"{label} verdict stable over tau and grid", "single verdict", got, "rtol 1e-6", stable))
    return rows


CHECKS: dict[str, tuple[str, Callable[[], list[Row]]]] = {
    "closed-form-asymmetric": ("1. asymmetric stepping vs closed form", check_closed_form_asymmetric),
    "riccati-symmetric": ("2. symmetric stepping vs Riccati solution", check_riccati_symmetric),
    "optimal-squeezing": ("3. optimal squeezing", check_optimal_squeezing),
    "negativity-plateau": ("4. asymptotic negativity plateau", check_negativity_plateau),
    "coherent-threshold": ("5. coherent-light threshold", check_coherent_threshold),
    "epr-reference": ("6. EPR source reference", check_epr_reference),
    "fidelity": ("7. teleportation fidelities", check_fidelity),
    "polygamy": ("8. polygamy equivalence", check_polygamy),
    "properties": ("9. property suite", check_properties),
    "adjudication": ("10. adjudication stability", check_adjudication),
}


def select(only: str | None = None) -> list[str]:
    keys = [k for k in CHECKS if only is None or only in k]
    if not keys:
        raise KeyError(f"no check matches {only!r}; choose from {', '.join(CHECKS)}")
    return keys


def run_checks(only: str | None = None) -> dict[str, list[Row]]:
    return {k: CHECKS[k][1]() for k in select(only)}


def format_report(results: dict[str, list[Row]]) -> str:
    header = ["check", "expected", "got", "tol", "result"]
    lines = []
    for key, rows in results.items():
        lines.append(f"[{key}] {CHECKS[key][0]}")
        cells = [header] + [r.cells() for r in rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
        for c in cells:
            lines.append("  " + "  ".join(s.ljust(w) for s, w in zip(c, widths)).rstrip())
    n_fail = sum(not r.passed for rows in results.values() for r in rows)
    n_all = sum(len(rows) for rows in results.values())
    lines.append(f"{n_all - n_fail}/{n_all} checks passed")
    return "\n".join(lines)
