import math

import pytest

from streamrisk.cli import main
from streamrisk.tables import read_csv, render_csv

GOLDEN_CFG = """\
# golden small config
dist = uniform lo=0 hi=1
alpha = 0.5
a1 = 1.0
a = 0.6666666666666666
b1 = 1.0
b = 1.0
n_grid = 10,100
replicates = 2
master_seed = 555
warm_start = false
"""

RATES_SLOW_CFG = """\
dist = exponential rate=1.0
alpha = 0.9
a1 = 1.0
a = 0.6
b1 = 1.0
b = 0.75
n_grid = 50,200,800
replicates = 40
master_seed = 99
warm_start = false
"""

CLT_FAST_CFG = """\
dist = uniform lo=0 hi=1
alpha = 0.5
a1 = 1.0
a = 0.6666666666666666
b1 = 1.0
b = 1.0
n_grid = 400
replicates = 60
master_seed = 7
warm_start = true
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestOracleCommand:
    def test_uniform_row_and_agreement(self, tmp_path, capsys):
        code = main(["oracle", "--dist", "uniform:0,1", "--alpha", "0.5", "--out", str(tmp_path)])
        assert code == 0
        comments, header, rows = read_csv(tmp_path / "oracle.csv")
        assert header[0] == "source"
        closed = dict(zip(header[1:], map(float, rows[0][1:])))
        assert closed["theta_alpha"] == 0.5
        assert closed["vartheta_alpha"] == 0.75
        assert closed["density_at_quantile"] == 1.0
        assert closed["v_alpha"] == pytest.approx(0.1510417, abs=5e-8)
        discrepancy = [float(v) for v in rows[2][1:]]
        assert all(d < 1e-8 for d in discrepancy)
        assert any("alpha = 0.5" in c for c in comments)

    def test_invalid_alpha_exits_2(self, capsys):
        code = main(["oracle", "--dist", "uniform:0,1", "--alpha", "1.5"])
        assert code == 2
        assert "alpha must lie in (0,1)" in capsys.readouterr().err

    def test_pareto_ratio_column(self, tmp_path):
        code = main(["oracle", "--dist", "pareto:1,3", "--alpha", "0.9", "--out", str(tmp_path)])
        assert code == 0
        _, header, rows = read_csv(tmp_path / "oracle.csv")
        idx = header.index("vartheta_over_theta")
        assert float(rows[0][idx]) == pytest.approx(1.5, rel=1e-12)

    def test_unknown_distribution_exits_2(self, capsys):
        assert main(["oracle", "--dist", "cauchy:0,1", "--alpha", "0.5"]) == 2


class TestRatesCommand:
    def test_missing_config_exits_2(self, tmp_path):
        assert main(["rates", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)]) == 2

    def test_golden_config_byte_identical_reruns(self, tmp_path):
        cfg = _write(tmp_path, "golden.cfg", GOLDEN_CFG)
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["rates", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["rates", "--config", str(cfg), "--out", str(out2)]) == 0
        assert (out1 / "mse.csv").read_bytes() == (out2 / "mse.csv").read_bytes()
        assert (out1 / "ratefit.csv").read_bytes() == (out2 / "ratefit.csv").read_bytes()
        assert (out1 / "rates.svg").read_bytes() == (out2 / "rates.svg").read_bytes()

    def test_thread_count_does_not_change_bytes(self, tmp_path):
        cfg = _write(tmp_path, "golden.cfg", GOLDEN_CFG)
        out1, out8 = tmp_path / "t1", tmp_path / "t8"
        assert main(["rates", "--config", str(cfg), "--out", str(out1), "--threads", "1"]) == 0
        assert main(["rates", "--config", str(cfg), "--out", str(out8), "--threads", "8"]) == 0
        assert (out1 / "mse.csv").read_bytes() == (out8 / "mse.csv").read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        cfg = _write(tmp_path, "golden.cfg", GOLDEN_CFG)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["rates", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["rates", "--config", str(cfg), "--out", str(out2), "--seed", "556"]) == 0
        assert (out1 / "mse.csv").read_bytes() != (out2 / "mse.csv").read_bytes()
        comments, _, _ = read_csv(out2 / "mse.csv")
        assert any("master_seed = 556" in c for c in comments)

    def test_theory_slope_column_matches_slow_exponent(self, tmp_path):
        cfg = _write(tmp_path, "slow.cfg", RATES_SLOW_CFG)
        out = tmp_path / "out"
        assert main(["rates", "--config", str(cfg), "--out", str(out)]) == 0
        _, header, rows = read_csv(out / "ratefit.csv")
        slope_idx = header.index("theory_slope")
        for row in rows:
            if row[0] == "embedded":
                assert float(row[slope_idx]) == -0.75
            if row[0] == "theta_bar":
                assert float(row[slope_idx]) == -1.0

    def test_mse_theory_column_positive_and_decreasing(self, tmp_path):
        cfg = _write(tmp_path, "slow.cfg", RATES_SLOW_CFG)
        out = tmp_path / "out"
        assert main(["rates", "--config", str(cfg), "--out", str(out)]) == 0
        _, header, rows = read_csv(out / "mse.csv")
        t_idx, n_idx = header.index("theory_first_order"), header.index("n")
        emb = [(int(r[n_idx]), float(r[t_idx])) for r in rows if r[0] == "embedded"]
        assert all(x[1] > y[1] for x, y in zip(emb, emb[1:]))


class TestCltCommand:
    def test_fast_regime_theory_columns(self, tmp_path):
        cfg = _write(tmp_path, "clt.cfg", CLT_FAST_CFG)
        out = tmp_path / "out"
        assert main(["clt", "--config", str(cfg), "--out", str(out)]) == 0
        _, header, rows = read_csv(out / "clt.csv")
        row = rows[0]
        assert float(row[header.index("s11_theory")]) == pytest.approx(0.25, rel=1e-12)
        assert float(row[header.index("s12_theory")]) == pytest.approx(0.125, rel=1e-12)
        assert float(row[header.index("s22_theory")]) == pytest.approx(0.3541667, abs=5e-8)
        assert (out / "clt.svg").exists()

    def test_slow_regime_marks_cross_covariance_na(self, tmp_path):
        text = CLT_FAST_CFG.replace("b = 1.0", "b = 0.75").replace(
            "a = 0.6666666666666666", "a = 0.6"
        )
        cfg = _write(tmp_path, "clt_slow.cfg", text)
        out = tmp_path / "out"
        assert main(["clt", "--config", str(cfg), "--out", str(out)]) == 0
        _, header, rows = read_csv(out / "clt.csv")
        assert rows[0][header.index("s12_theory")] == "n/a"

    def test_too_few_replicates_exit_2(self, tmp_path, capsys):
        text = CLT_FAST_CFG.replace("replicates = 60", "replicates = 4")
        cfg = _write(tmp_path, "clt_small.cfg", text)
        assert main(["clt", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "replicates >= 30" in capsys.readouterr().err

    def test_single_replicate_rejected_at_config_level(self, tmp_path, capsys):
        text = CLT_FAST_CFG.replace("replicates = 60", "replicates = 1")
        cfg = _write(tmp_path, "clt_one.cfg", text)
        assert main(["clt", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "replicates" in capsys.readouterr().err


class TestCompareCommand:
    def test_compare_writes_rows_with_verdict(self, tmp_path):
        cfg = _write(tmp_path, "cmp.cfg", GOLDEN_CFG)
        out = tmp_path / "out"
        assert main(["compare", "--config", str(cfg), "--out", str(out)]) == 0
        _, header, rows = read_csv(out / "compare.csv")
        assert header == ["n", "pair", "mse_ratio", "ci_low", "ci_high", "theory_verdict"]
        verdicts = {r[1]: r[5] for r in rows}
        assert verdicts["embedded/classical"] == "boundary"
        assert verdicts["classical/bardou"] == "tie"

    def test_single_variant_config_rejected(self, tmp_path, capsys):
        text = GOLDEN_CFG + "variants = embedded\n"
        cfg = _write(tmp_path, "one.cfg", text)
        assert main(["compare", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


class TestAsymptoticsCommand:
    def test_prints_constants(self, capsys):
        code = main(
            ["asymptotics", "--dist", "uniform:0,1", "--alpha", "0.5",
             "--a", "0.6666666666666666", "--b", "1.0"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "quantile_clt_var = 0.25" in out
        assert "s2_22 = 0.3541666" in out
        assert "b1_threshold = 0.5" in out

    def test_writes_csv(self, tmp_path):
        code = main(
            ["asymptotics", "--dist", "exponential:1.0", "--alpha", "0.9",
             "--a", "0.6", "--b", "0.75", "--out", str(tmp_path)]
        )
        assert code == 0
        _, header, rows = read_csv(tmp_path / "asymptotics.csv")
        val = float(rows[0][header.index("sq_var_slow")])
        assert val == pytest.approx(54.0818, rel=1e-4)


class TestCsvRoundTrip:
    def test_floats_round_trip_exactly(self, tmp_path):
        rows = [["a", 1, 0.1, 1 / 3, 1e-17, 123456.789012345]]
        text = render_csv(["name", "i", "x", "y", "z", "w"], rows)
        p = tmp_path / "t.csv"
        p.write_text(text)
        _, header, parsed = read_csv(p)
        assert parsed[0][0] == "a"
        assert int(parsed[0][1]) == 1
        for got, want in zip(parsed[0][2:], rows[0][2:]):
            assert float(got) == want

    def test_comment_lines_preserved(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text(render_csv(["x"], [[1.0]], comments=["hello world"]))
        comments, _, _ = read_csv(p)
        assert comments == ["hello world"]


class TestThreadsEnv:
    def test_env_variable_used_as_default(self, tmp_path, monkeypatch):
        cfg = _write(tmp_path, "golden.cfg", GOLDEN_CFG)
        monkeypatch.setenv("STREAMRISK_THREADS", "2")
        out_env = tmp_path / "env"
        assert main(["rates", "--config", str(cfg), "--out", str(out_env)]) == 0
        monkeypatch.setenv("STREAMRISK_THREADS", "not-a-number")
        assert main(["rates", "--config", str(cfg), "--out", str(tmp_path / "bad")]) == 2


def test_usage_error_exits_2():
    assert main(["rates"]) == 2


def test_unknown_command_exits_2():
    assert main(["frobnicate"]) == 2
