import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeromode_sumrules import cli
from zeromode_sumrules.records import (
    CSV_HEADER,
    ResultRecord,
    RunConfig,
    from_csv,
    from_json_lines,
    to_csv,
    to_json_lines,
)


def run(argv, capsys):
    status = cli.main(argv)
    out = capsys.readouterr().out
    return status, out


def records(text):
    return [json.loads(line) for line in text.splitlines()]


class TestSumrule:
    def test_perturbative(self, capsys):
        status, out = run(["sumrule", "--s", "1.5", "--kappa", "0.1", "--route", "perturbative"], capsys)
        [rec] = records(out)
        assert status == 0
        assert rec["value"] == pytest.approx(0.0387338, abs=1e-7)
        assert rec["orders"][1] == 0.0
        assert rec["tail_estimate"] >= 0.0
        assert rec["config"]["kappa"] == 0.1 and rec["version"]

    def test_exact(self, capsys):
        status, out = run(["sumrule", "--s", "1", "--kappa", "0.5", "--route", "exact"], capsys)
        assert status == 0
        assert records(out)[0]["value"] == pytest.approx(1 / 6 - 0.25 / 120, abs=1e-14)

    def test_trace(self, capsys):
        status, out = run(["sumrule", "--s", "1.5", "--kappa", "0.2", "--route", "trace", "--truncation", "200"],
                          capsys)
        assert status == 0
        assert records(out)[0]["value"] == pytest.approx(0.03876817960 - 0.00343517 * 0.04, abs=1e-7)

    def test_numerical(self, capsys):
        status, out = run(["sumrule", "--s", "1.5", "--route", "numerical", "--basis-size", "401"], capsys)
        assert status == 0
        assert records(out)[0]["value"] == pytest.approx(0.03876817960, abs=1e-9)

    @pytest.mark.parametrize(
        "argv",
        [
            ["sumrule", "--s", "3"],
            ["sumrule", "--s", "1.5", "--kappa", "2.5"],
            ["sumrule", "--s", "1.25", "--route", "trace"],
            ["sumrule", "--s", "1.5", "--route", "exact"],
            ["sumrule", "--s", "1.5", "--gamma-sequence", "1e-4,1e-3"],
            ["sumrule", "--s", "1.5", "--n-max", "300", "--basis-size", "301"],
            ["sumrule"],
            ["nonsense"],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 1
        assert "error" in capsys.readouterr().err

    def test_override_exponent(self, capsys):
        status, out = run(["sumrule", "--s", "2", "--allow-any-s", "--truncation", "500"], capsys)
        assert status == 0
        assert records(out)[0]["value"] == pytest.approx(1 / 90, rel=1e-9)


def test_spectrum(capsys):
    status, out = run(["spectrum", "--kappa", "0.3", "--levels", "4", "--basis-size", "101", "--n-max", "50"], capsys)
    recs = records(out)
    assert status == 0
    assert [r["extra"]["level"] for r in recs] == [0, 1, 2, 3]
    assert abs(recs[0]["value"]) < 1e-10
    assert all(r["tail_estimate"] >= 0 for r in recs)


def test_sweep_fit(capsys):
    status, out = run(["sweep-fit", "--kappa-grid", "0.05:0.2:4", "--degree", "2", "--n-max", "50",
                       "--basis-size", "201", "--format", "csv"], capsys)
    rows = from_csv(out)
    assert status == 0
    assert [r["route"] for r in rows] == ["numerical_spectrum"] * 4 + ["fit_c0", "fit_c1", "fit_c2"]
    assert rows[4]["value"] == pytest.approx(0.0387682, abs=1e-6)


def test_worker_environment_default(monkeypatch):
    monkeypatch.setenv(cli.WORKERS_ENV, "3")
    args = cli.build_parser().parse_args(["sweep-fit"])
    assert args.workers == 3


class TestVerify:
    def test_quick_homogeneous(self, capsys):
        status, out = run(["verify", "--quick"], capsys)
        recs = records(out)
        assert status == 0
        assert recs and all(r["extra"]["passed"] for r in recs)

    def test_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "verification_checks", lambda *a, **k: iter([("broken", 1.0, 1e-8)]))
        status, out = run(["verify", "--quick"], capsys)
        assert status == 2
        assert records(out)[0]["extra"]["passed"] is False

    def test_numeric_failure_record(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise ArithmeticError("mass matrix lost definiteness")

        monkeypatch.setattr(cli, "solve", boom)
        status, out = run(["spectrum", "--basis-size", "20", "--n-max", "5"], capsys)
        [rec] = records(out)
        assert status == 2
        assert rec["route"] == "failure" and rec["extra"]["stage"] == "spectrum"


def test_byte_identical_output(tmp_path):
    paths = [tmp_path / f"run{i}.csv" for i in range(2)]
    for p in paths:
        subprocess.run([sys.executable, "-m", "zeromode_sumrules", "sumrule", "--s", "1.5", "--kappa", "0.3",
                        "--format", "csv", "--output", str(p)], check=True)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_text().splitlines()[0] == ",".join(CSV_HEADER)


def test_timing_is_opt_in(capsys):
    _, out = run(["sumrule", "--s", "1.5", "--truncation", "100"], capsys)
    assert records(out)[0]["wall_time"] is None
    _, out = run(["sumrule", "--s", "1.5", "--truncation", "100", "--timing"], capsys)
    assert records(out)[0]["wall_time"] > 0


finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(value=finite, tail=finite.map(abs), kappa=st.floats(-1.99, 1.99), orders=st.lists(finite, min_size=3, max_size=3))
def test_record_round_trip(value, tail, kappa, orders):
    cfg = {"command": "sumrule", "n_max": 200, "basis_size": 2001, "gamma_sequence": [1e-3, 1e-4]}
    rec = ResultRecord(config=cfg, route="perturbative", value=value, tail_estimate=tail, s=1.5, kappa=kappa,
                       orders=orders, version="0.1.0")
    assert from_json_lines(to_json_lines([rec])) == [rec]
    [row] = from_csv(to_csv([rec]))
    assert row["value"] == value and row["kappa"] == kappa and row["tail_estimate"] == tail
    assert [row["order0"], row["order1"], row["order2"]] == orders
    assert row["n_max"] == 200 and row["basis_size"] == 2001


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("sumrule", kappa_grid=(0.1, 2.5))
    with pytest.raises(ValueError):
        RunConfig("sumrule", workers=0)
    assert RunConfig("verify").gamma_sequence == (1e-3, 1e-4, 1e-5, 1e-6)


def test_grid_syntax():
    assert cli._grid("0.01:0.20:20")[-1] == pytest.approx(0.2)
    assert len(cli._grid("0.01:0.20:20")) == 20
    assert cli._grid("0.1,0.2") == (0.1, 0.2)
    assert all(math.isfinite(k) for k in cli._grid("-0.5:0.5:11"))
