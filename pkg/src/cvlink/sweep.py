"""Grid sweeps over loss and squeezing, serialised as deterministic CSV.

Each grid point becomes one ``SweepRecord``. ``F_symmetric`` is always
``1/(1 + delta)``; it is the channel fidelity only when the covariance has
the symmetric form, otherwise ``F_bk_opt`` is the relevant figure. Floats are stored rounded to
12 significant digits so that a CSV round trip reproduces the records
exactly.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

from .entanglement import TwoModeSummary
from .protocols import (
    ChannelParams,
    analytic_asymmetric_entries,
    asymptotic_negativity,
    delta_closed_form,
    epr_source_delta,
    riccati_coeffs,
    steady_state_delta,
)
from .teleport import asymptotic_fidelity, channel_variances, fidelity_symmetric, optimize_local_squeezing

SCHEMES = ("asymmetric", "symmetric", "epr", "polygamy")
ASYMPTOTIC = "asymptotic"
SIG_DIGITS = 12


def _fmt(x: float) -> str:
    return format(x, f".{SIG_DIGITS}g")


def _round(x: float) -> float:
    return float(_fmt(float(x)))


@dataclass(frozen=True)
class SweepRecord:
    scheme: str
    epsilon: float
    r: float
    t: float | str
    N: float
    log_negativity: float
    delta: float
    F_symmetric: float
    F_bk_opt: float

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "scheme" or (f.name == "t" and v == ASYMPTOTIC):
                continue
            object.__setattr__(self, f.name, _round(v))

    def row(self) -> list[str]:
        return [v if isinstance(v, str) else _fmt(v) for v in astuple(self)]


HEADER = [f.name for f in fields(SweepRecord)]


def emit_csv(records: Iterable[SweepRecord], out=None) -> str | None:
    """Write records with a header; returns the text when ``out`` is None."""
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for rec in records:
        w.writerow(rec.row())
    return buf.getvalue() if out is None else None


def parse_csv(text: str) -> list[SweepRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != HEADER:
        raise ValueError("not a sweep CSV: header mismatch")
    out = []
    for row in rows[1:]:
        d = dict(zip(HEADER, row))
        vals = {k: (v if k == "scheme" or (k == "t" and v == ASYMPTOTIC) else float(v)) for k, v in d.items()}
        out.append(SweepRecord(**vals))
    return out


def parse_range(spec: str, log: bool = False) -> np.ndarray:
    """``"lo:hi:n"`` to ``n`` points, linear or log-spaced; ``"x"`` to a single point."""
    parts = spec.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"range must be lo:hi:n, got {spec!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or hi < lo:
        raise ValueError(f"bad range {spec!r}")
    if log:
        if lo <= 0:
            raise ValueError("log-spaced range needs a positive lower bound")
        return np.geomspace(lo, hi, n) if n > 1 else np.array([lo])
    return np.linspace(lo, hi, n) if n > 1 else np.array([lo])


# -- point evaluation ----------------------------------------------------------------


def _log_neg(n: float) -> float:
    return max(0.0, -math.log2(n)) if n > 0 else math.inf


def point(scheme: str, epsilon: float, r: float, kt: float | None = None) -> SweepRecord:
    """Observables at one grid point; ``kt=None`` means the long-time limit."""
    t_col: float | str = ASYMPTOTIC if kt is None else kt
    if scheme in ("asymmetric", "polygamy"):
        orientation = "direct" if scheme == "asymmetric" else "inverse"
        if kt is None:
            n = asymptotic_negativity(epsilon, r, orientation)
            # var(x_-) grows without bound, so delta diverges
            return SweepRecord(scheme, epsilon, r, t_col, n, _log_neg(n), math.inf, 0.0, asymptotic_fidelity(epsilon, r))
        s = TwoModeSummary.from_entries(**analytic_asymmetric_entries(epsilon, r, kt, orientation))
        _, f = optimize_local_squeezing(*channel_variances(s.gamma12))
        return SweepRecord(scheme, epsilon, r, t_col, s.N, s.log_negativity, s.delta, fidelity_symmetric(s.delta), f)
    if scheme == "symmetric":
        if kt is None:
            d = steady_state_delta(epsilon, r)
        else:
            d = delta_closed_form(riccati_coeffs(ChannelParams(epsilon, r)), kt)
    elif scheme == "epr":
        d, _ = epr_source_delta(epsilon, r)
        t_col = ASYMPTOTIC
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    n = min(1.0, d)
    f = fidelity_symmetric(d)
    return SweepRecord(scheme, epsilon, r, t_col, n, _log_neg(n), d, f, f)


def _best_r(scheme: str, epsilon: float, r_grid: np.ndarray, kt: float | None) -> float:
    lo, hi = float(r_grid[0]), float(r_grid[-1])
    if scheme == "epr":
        return hi
    if scheme == "symmetric" and kt is None:
        return min(hi, max(lo, (1 - epsilon) / epsilon)) if epsilon > 0 else hi
    vals = [point(scheme, epsilon, r, kt).N for r in r_grid]
    k = int(np.argmin(vals))
    if len(r_grid) < 3:
        return float(r_grid[k])
    a = math.log(r_grid[max(k - 1, 0)])
    b = math.log(r_grid[min(k + 1, len(r_grid) - 1)])
    res = optimize.minimize_scalar(lambda u: point(scheme, epsilon, math.exp(u), kt).N, bounds=(a, b), method="bounded", options={"xatol": 1e-10})
    return math.exp(res.x) if res.fun <= vals[k] else float(r_grid[k])


def _row(args) -> list[SweepRecord]:
    scheme, epsilon, r_grid, kt, envelope = args
    if envelope:
        return [point(scheme, epsilon, _best_r(scheme, epsilon, r_grid, kt), kt)]
    return [point(scheme, epsilon, r, kt) for r in r_grid]


def sweep(
    scheme: str,
    eps_grid: Sequence[float],
    r_grid: Sequence[float],
    kt: float | None = None,
    envelope: bool = False,
    workers: int = 1,
    m_sites: int | None = None,
) -> list[SweepRecord]:
    """Row-major (epsilon outer, r inner) grid of records, or the per-epsilon optimum over r.

    For ``polygamy`` the loss is fixed by the site count, ``eps = 1 - 1/M``.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    r_grid = np.asarray(r_grid, dtype=float)
    if scheme == "polygamy":
        if not m_sites or m_sites < 2:
            raise ValueError("polygamy sweep needs m_sites >= 2")
        eps_grid = [1 - 1 / m_sites]
    jobs = [(scheme, float(e), r_grid, kt, envelope) for e in eps_grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_row, jobs))
    else:
        rows = [_row(j) for j in jobs]
    return [rec for row in rows for rec in row]
