import csv
import io

import numpy as np
import pytest

from cvlink.cli import main
from cvlink.protocols import ChannelParams, analytic_asymmetric_covariance, delta_closed_form, riccati_coeffs


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_asymmetric(capsys):
    code, out, _ = _run(capsys, "run", "asymmetric", "--epsilon", "0.3", "--r", "2", "--kappa2", "1", "--t", "1", "--tau", "1e-4")
    assert code == 0
    final = _rows(out)[-1]
    ref = analytic_asymmetric_covariance(ChannelParams(0.3, 2.0), 1.0)
    assert float(final["t"]) == 1.0
    assert float(final["N"]) == pytest.approx(ref.N, rel=1e-3)


def test_run_symmetric(capsys):
    code, out, _ = _run(capsys, "run", "--scheme", "symmetric", "--epsilon", "0.4", "--r", "3", "--t", "2", "--samples", "11")
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 11
    t = np.array([float(r["t"]) for r in rows])
    d = np.array([float(r["delta"]) for r in rows])
    np.testing.assert_allclose(d, delta_closed_form(riccati_coeffs(ChannelParams(0.4, 3.0)), t), rtol=1e-3)


def test_run_epr(capsys):
    code, out, _ = _run(capsys, "run", "epr", "--epsilon", "0.36", "--r", "10")
    assert code == 0
    assert float(_rows(out)[0]["delta"]) == pytest.approx(0.28, abs=1e-12)


def test_run_polygamy(capsys):
    code, out, _ = _run(capsys, "run", "polygamy", "--m-sites", "4", "--r", "2", "--t", "0.2", "--tau", "1e-3")
    assert code == 0
    rows = _rows(out)
    assert [r["pair"] for r in rows] == ["1", "2", "3", "4"]


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["run", "--epsilon", "1.5"], "--epsilon"),
        (["run", "--r", "-2"], "--r"),
        (["run", "--tau", "0"], "--tau"),
        (["run", "--orientation", "sideways"], "--orientation"),
        (["run", "asymmetric", "--scheme", "symmetric"], "--scheme"),
        (["sweep", "--grid-r", "0:1:3"], "--grid-r"),
        (["sweep", "--grid-eps", "0.5:1.5:3"], "--grid-eps"),
        (["sweep", "--config", "/nonexistent/cvlink.cfg"], "--config"),
        (["verify", "--only", "nope"], "--only"),
    ],
)
def test_usage_errors_name_the_flag(capsys, argv, flag):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert flag in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--epsilon", "abc"])
    assert exc.value.code == 2
    assert "--epsilon" in capsys.readouterr().err


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# grid\ngrid-eps = 0.2:0.4:2\ngrid_r = 1\n")
    code, out, _ = _run(capsys, "sweep", "asymmetric", "--config", str(cfg))
    assert code == 0
    assert [(r["epsilon"], r["r"]) for r in _rows(out)] == [("0.2", "1"), ("0.4", "1")]
    code, out, _ = _run(capsys, "sweep", "asymmetric", "--config", str(cfg), "--grid-eps", "0.5")
    assert [r["epsilon"] for r in _rows(out)] == ["0.5"]


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = _run(capsys, "sweep", "--config", str(cfg))
    assert code == 2 and "unknown key" in err
    cfg.write_text("epsilon = lots\n")
    code, _, err = _run(capsys, "run", "--config", str(cfg))
    assert code == 2 and "epsilon" in err


def test_sweep_defaults_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--out", str(a)]) == 0
    assert main(["sweep", "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1 + 50 * 50


def test_sweep_envelopes(capsys):
    code, out, _ = _run(capsys, "sweep", "symmetric", "--envelope", "--grid-eps", "0.1:0.9:5")
    assert code == 0
    np.testing.assert_allclose([float(r["N"]) for r in _rows(out)], [0.1, 0.3, 0.5, 0.7, 0.9], atol=1e-9)


def test_sweep_asymptotic_time(capsys):
    code, out, _ = _run(capsys, "sweep", "symmetric", "--grid-eps", "0.4", "--grid-r", "3", "--asymptotic-time", "2")
    row = _rows(out)[0]
    assert row["t"] == "2"
    assert float(row["delta"]) == pytest.approx(delta_closed_form(riccati_coeffs(ChannelParams(0.4, 3.0)), 2.0), rel=1e-11)


def test_verify_subset_passes(capsys):
    code, out, _ = _run(capsys, "verify", "--only", "riccati")
    assert code == 0
    assert "riccati-symmetric" in out and "closed-form-asymmetric" not in out


def test_verify_reports_failure(capsys):
    # the eps = 0.99 antisqueezed plateau row does not reach 1/3 within 1e-2
    code, out, _ = _run(capsys, "verify", "--only", "plateau")
    assert code == 1
    assert "FAIL" in out


def test_verify_adjudicate(capsys):
    code, out, _ = _run(capsys, "verify", "--only", "coherent", "--adjudicate")
    assert code == 0
    assert "alpha_sim" in out and "F_prefactor_2" in out and "prefactor 1" in out
