"""``cvlink`` command line: single runs, grid sweeps and the acceptance suite.

Exit codes: 0 success, 1 failed verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Any, Callable

from . import acceptance
from .entanglement import TwoModeSummary
from .gaussian import DomainError
from .protocols import ORDERINGS, ORIENTATIONS, ChannelParams, epr_source_delta, run_asymmetric, run_polygamy, run_symmetric
from .sweep import ASYMPTOTIC, SCHEMES, emit_csv, parse_range, sweep
from .teleport import adjudicate, channel_variances, fidelity_symmetric, optimize_local_squeezing

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    def __init__(self, flag: str, msg: str):
        super().__init__(f"{flag}: {msg}")
        self.flag = flag


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise ValueError
    return v


# name -> (type, default); None defaults mean "not applicable unless given"
SETTINGS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "epsilon": (float, 0.3),
    "r": (float, 2.0),
    "kappa2": (float, 1.0),
    "tau": (float, 1e-4),
    "t": (float, 1.0),
    "out": (str, "stdout"),
    "grid_eps": (str, "0.01:0.99:50"),
    "grid_r": (str, "0.1:10:50"),
    "m_sites": (_positive_int, 3),
    "orientation": (str, "direct"),
    "ordering": (str, "palindromic"),
    "detect": (str, "own"),
    "samples": (_positive_int, 101),
    "workers": (_positive_int, 1),
    "asymptotic_time": (float, None),
}


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def read_config(path: str) -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys use flag names with ``-`` or ``_``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError("--config", f"cannot read {path}: {exc.strerror}") from None
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("--config", f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in SETTINGS:
            raise UsageError("--config", f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, val, f"--config ({key})")
    return out


def _convert(key: str, val: str, where: str) -> Any:
    conv = SETTINGS[key][0]
    try:
        return conv(val)
    except ValueError:
        raise UsageError(where, f"invalid value {val!r}") from None


def resolve(ns: argparse.Namespace) -> dict[str, Any]:
    """Merge flags over the config file over built-in defaults."""
    cfg = read_config(ns.config) if getattr(ns, "config", None) else {}
    out = {}
    for key, (_, default) in SETTINGS.items():
        flag_val = getattr(ns, key, None)
        out[key] = flag_val if flag_val is not None else cfg.get(key, default)
    return out


def _check_choice(opts, key, choices):
    if opts[key] not in choices:
        raise UsageError(_flag(key), f"must be one of {', '.join(choices)}, got {opts[key]!r}")


def _params(opts) -> ChannelParams:
    for key, ok, what in (
        ("epsilon", lambda v: 0 <= v < 1, "must lie in [0, 1)"),
        ("r", lambda v: 0 < v < math.inf, "must be positive"),
        ("kappa2", lambda v: v > 0, "must be positive"),
        ("tau", lambda v: v > 0, "must be positive"),
        ("t", lambda v: v >= 0, "must be non-negative"),
    ):
        if not ok(opts[key]):
            raise UsageError(_flag(key), f"{what}, got {opts[key]}")
    if opts["tau"] > opts["t"] > 0:
        raise UsageError("--tau", f"step {opts['tau']} exceeds the duration --t {opts['t']}")
    return ChannelParams(opts["epsilon"], opts["r"], opts["kappa2"], opts["tau"], opts["t"])


# -- output ------------------------------------------------------------------------


TRAJ_HEADER = ["t", "v_x1", "v_p1", "v_x2", "v_p2", "c_x", "c_p", "N", "log_negativity", "delta", "delta_x", "delta_p", "F_bk_opt"]


def _g(x) -> str:
    return x if isinstance(x, str) else format(x, ".12g")


def _summary_row(t, s: TwoModeSummary) -> list[str]:
    _, f = optimize_local_squeezing(*channel_variances(s.gamma12))
    vals = [t, s.v_x1, s.v_p1, s.v_x2, s.v_p2, s.c_x, s.c_p, s.N, s.log_negativity, s.delta, s.delta_x, s.delta_p, f]
    return [_g(v) for v in vals]


def _write(text: str, out: str):
    if out in ("-", "stdout"):
        sys.stdout.write(text)
    else:
        try:
            with open(out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError("--out", f"cannot write {out}: {exc.strerror}") from None


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands ----------------------------------------------------------------------


def _scheme(ns) -> str:
    pos, flag = getattr(ns, "scheme_pos", None), getattr(ns, "scheme", None)
    if pos and flag and pos != flag:
        raise UsageError("--scheme", f"conflicts with positional scheme {pos!r}")
    scheme = pos or flag or "asymmetric"
    if scheme not in SCHEMES:
        raise UsageError("--scheme", f"must be one of {', '.join(SCHEMES)}, got {scheme!r}")
    return scheme


def cmd_run(ns) -> int:
    opts = resolve(ns)
    scheme = _scheme(ns)
    _check_choice(opts, "orientation", ORIENTATIONS)
    _check_choice(opts, "ordering", ORDERINGS)
    _check_choice(opts, "detect", ("own", "all"))
    params = _params(opts)
    if scheme == "epr":
        d, bound = epr_source_delta(opts["epsilon"], opts["r"])
        text = _csv(["t", "delta", "delta_bound", "N", "F_symmetric"], [[ASYMPTOTIC, _g(d), _g(bound), _g(min(1.0, d)), _g(fidelity_symmetric(d))]])
    elif scheme == "polygamy":
        if opts["m_sites"] < 2:
            raise UsageError("--m-sites", "needs at least 2 receivers")
        pairs = run_polygamy(opts["m_sites"], params.r, params.kappa2, params.tau, params.t_final, opts["detect"])
        rows = [[str(i + 1)] + _summary_row(params.t_final, s) for i, s in enumerate(pairs)]
        text = _csv(["pair"] + TRAJ_HEADER, rows)
    else:
        if scheme == "asymmetric":
            traj = run_asymmetric(params, opts["orientation"], n_samples=opts["samples"])
        else:
            traj = run_symmetric(params, opts["orientation"], n_samples=opts["samples"], ordering=opts["ordering"])
        text = _csv(TRAJ_HEADER, [_summary_row(t, s) for t, s in zip(traj.times, traj.summaries)])
    _write(text, opts["out"])
    return EXIT_OK


def cmd_sweep(ns) -> int:
    opts = resolve(ns)
    scheme = _scheme(ns)
    grids = {}
    for key, log in (("grid_eps", False), ("grid_r", True)):
        try:
            grids[key] = parse_range(opts[key], log=log)
        except ValueError as exc:
            raise UsageError(_flag(key), str(exc)) from None
    if not all(0 <= e < 1 for e in grids["grid_eps"]):
        raise UsageError("--grid-eps", "loss values must lie in [0, 1)")
    kt = opts["asymptotic_time"]
    if kt is not None and not kt >= 0:
        raise UsageError("--asymptotic-time", "must be non-negative")
    if scheme == "polygamy" and opts["m_sites"] < 2:
        raise UsageError("--m-sites", "needs at least 2 receivers")
    recs = sweep(scheme, grids["grid_eps"], grids["grid_r"], kt=kt, envelope=ns.envelope, workers=opts["workers"], m_sites=opts["m_sites"])
    _write(emit_csv(recs), opts["out"])
    return EXIT_OK


def cmd_verify(ns) -> int:
    try:
        keys = acceptance.select(ns.only)
    except KeyError as exc:
        raise UsageError("--only", exc.args[0]) from None
    results = {k: acceptance.CHECKS[k][1]() for k in keys}
    print(acceptance.format_report(results))
    if ns.adjudicate:
        alpha_rows, pref_rows = adjudicate([(e, r) for e in acceptance.TEST_EPS for r in acceptance.TEST_R])
        print()
        print(_csv(["epsilon", "r", "tau", "alpha_sim", "alpha_formula", "alpha_sign_variant", "verdict"],
                   [[_g(a.epsilon), _g(a.r), _g(a.tau), _g(a.alpha_sim), _g(a.alpha_formula), _g(a.alpha_sign_variant), a.verdict] for a in alpha_rows]), end="")
        print()
        print(_csv(["epsilon", "r", "tau", "F_sim", "F_prefactor_1", "F_prefactor_2", "verdict"],
                   [[_g(p.epsilon), _g(p.r), _g(p.tau), _g(p.F_sim), _g(p.F_prefactor_1), _g(p.F_prefactor_2), p.verdict] for p in pref_rows]), end="")
    ok = all(r.passed for rows in results.values() for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------------


def _add_shared(p: argparse.ArgumentParser):
    # defaults stay None so that config-file values can fill the gaps
    for key, (conv, _) in SETTINGS.items():
        p.add_argument(_flag(key), dest=key, type=conv, default=None, metavar=key.split("_")[-1].upper())
    p.add_argument("--scheme", choices=SCHEMES, default=None)
    p.add_argument("--config", default=None, help="file of key = value lines (flags take precedence)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvlink", description="Entanglement of two atomic gases via lossy light probing.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="simulate one scheme and print its trajectory as CSV")
    run.add_argument("scheme_pos", nargs="?", choices=SCHEMES, metavar="scheme")
    _add_shared(run)
    run.set_defaults(func=cmd_run)
    sw = sub.add_parser("sweep", help="closed-form asymptotics over an (epsilon, r) grid as CSV")
    sw.add_argument("scheme_pos", nargs="?", choices=SCHEMES, metavar="scheme")
    _add_shared(sw)
    sw.add_argument("--envelope", action="store_true", help="one row per epsilon at the r minimising N")
    sw.set_defaults(func=cmd_sweep)
    ver = sub.add_parser("verify", help="run the acceptance checks")
    ver.add_argument("--only", default=None, help="substring selecting a subset of checks")
    ver.add_argument("--adjudicate", action="store_true", help="also print the alpha and fidelity-prefactor tables")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cvlink: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"cvlink: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
