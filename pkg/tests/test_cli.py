"""End-to-end tests of the command-line interface."""

import math

import pytest

from fdivrisk.cli import (
    CSV_HEADER,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    RiskCurve,
    RiskCurveRow,
    main,
    risk_curve_csv,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBoundCommand:
    def test_bernoulli_hellinger_n1(self, capsys):
        code, out, _ = run(
            capsys, "bound", "--model", "bernoulli", "--n", "1", "--family", "hellinger", "--p", "2"
        )
        assert code == EXIT_OK
        # 2/27 divided by the scaled chi-squared value 4/3.
        value = float(out.splitlines()[0].split()[-1])
        assert value == pytest.approx(1.0 / 18.0, rel=1e-12)
        assert "rho_star" in out
        assert "hellinger(p=2)" in out

    def test_gaussian_hellinger_meets_closed_form_floor(self, capsys):
        code, out, _ = run(
            capsys,
            "bound",
            *["--model", "gaussian", "--n", "2", "--sigma-w-sq", "1", "--sigma-sq", "2"],
            *["--family", "hellinger", "--p", "1.5"],
        )
        assert code == EXIT_OK
        value = float(out.splitlines()[0].split()[-1])
        floor = 81.0 * math.sqrt(2.0 * math.pi) / 2048.0 * math.sqrt(1.0 / (1.0 + 2.0 * 0.5))
        assert value >= floor

    def test_bad_order_is_usage_error(self, capsys):
        code, _, err = run(capsys, "bound", "--family", "hellinger", "--p", "0.5")
        assert code == EXIT_USAGE
        assert "p must exceed 1" in err

    def test_hockey_stick_bound(self, capsys):
        code, out, _ = run(
            capsys,
            "bound",
            *["--model", "bernoulli", "--n", "1", "--family", "hockey-stick"],
        )
        assert code == EXIT_OK
        value = float(out.splitlines()[0].split()[-1])
        assert value == pytest.approx(5.0 * 0.75**2 / 66.0, rel=1e-10)

    def test_missing_n_is_usage_error(self, capsys):
        code, _, err = run(capsys, "bound", "--model", "bernoulli")
        assert code == EXIT_USAGE
        assert "--n" in err

    def test_csv_row_emission(self, capsys, tmp_path):
        path = tmp_path / "one.csv"
        code, _, _ = run(
            capsys,
            "bound",
            *["--model", "bernoulli", "--n", "1", "--family", "hellinger", "--csv", str(path)],
        )
        assert code == EXIT_OK
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[1].startswith("1,")


class TestSweepCommand:
    def test_stdout_csv_schema(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep",
            *["--model", "bernoulli", "--n-range", "1..3", "--family", "hellinger"],
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 4
        # hellinger only: hockey-stick and oracle cells stay empty
        assert lines[1].split(",")[2] == ""
        assert lines[1].split(",")[3] == ""

    def test_fixed_parameter_values_match_engine(self, capsys):
        from fdivrisk.bounds import hellinger_bound, hockey_stick_bound
        from fdivrisk.divergences import chi_squared_bernoulli, e_beta_gamma_numeric
        from fdivrisk.models import BernoulliModel

        code, out, _ = run(capsys, "sweep", "--model", "bernoulli", "--n-range", "2..2")
        assert code == EXIT_OK
        cells = out.splitlines()[1].split(",")
        model = BernoulliModel(2)
        expected_h = hellinger_bound(2.0, chi_squared_bernoulli(model), 2.0).value
        expected_hs = hockey_stick_bound(
            0.75, 2.2, e_beta_gamma_numeric(model, 0.75, 2.2), 2.0
        ).value
        assert float(cells[1]) == pytest.approx(expected_h, rel=1e-15)
        assert float(cells[2]) == pytest.approx(expected_hs, rel=1e-15)

    def test_deterministic_with_oracle(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "sweep",
            *["--model", "bernoulli", "--n-range", "1..4", "--oracle"],
            *["--samples", "20000", "--seed", "99"],
        ]
        assert main(args + ["--csv", str(a)]) == EXIT_OK
        assert main(args + ["--csv", str(b)]) == EXIT_OK
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        # and a different seed changes the oracle column
        c = tmp_path / "c.csv"
        assert main(args[:-2] + ["--seed", "100", "--csv", str(c)]) == EXIT_OK
        assert a.read_bytes() != c.read_bytes()

    def test_svg_written_and_csv_unaffected(self, capsys, tmp_path):
        csv_a = tmp_path / "a.csv"
        csv_b = tmp_path / "b.csv"
        svg = tmp_path / "plot.svg"
        base = ["sweep", "--model", "bernoulli", "--n-range", "1..3"]
        assert main(base + ["--csv", str(csv_a)]) == EXIT_OK
        assert main(base + ["--csv", str(csv_b), "--svg", str(svg)]) == EXIT_OK
        capsys.readouterr()
        assert csv_a.read_bytes() == csv_b.read_bytes()
        content = svg.read_text()
        assert content.startswith("<svg")
        assert "polyline" in content

    def test_gaussian_sweep(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep",
            *["--model", "gaussian", "--n-range", "1..2", "--sigma-w-sq", "1", "--sigma-sq", "2"],
            *["--oracle"],
        )
        assert code == EXIT_OK
        rows = out.splitlines()[1:]
        # exact oracle: stderr column is zero
        assert float(rows[0].split(",")[4]) == 0.0

    def test_unwritable_path_is_io_error(self, capsys):
        code, _, err = run(
            capsys,
            "sweep",
            *["--model", "bernoulli", "--n-range", "1..2", "--csv", "/nonexistent/dir/x.csv"],
        )
        assert code == EXIT_IO
        assert "i/o error" in err

    def test_bad_range_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "sweep", "--model", "bernoulli", "--n-range", "5")
        assert code == EXIT_USAGE
        code, _, _ = run(capsys, "sweep", "--model", "bernoulli", "--n-range", "5..2")
        assert code == EXIT_USAGE

    def test_compare_fills_both_families(self, capsys):
        code, out, _ = run(capsys, "compare", "--model", "bernoulli", "--n-range", "1..2")
        assert code == EXIT_OK
        cells = out.splitlines()[1].split(",")
        assert cells[1] != "" and cells[2] != ""


class TestConfigFile:
    def test_config_supplies_values_and_flags_override(self, capsys, tmp_path):
        config = tmp_path / "sweep.cfg"
        config.write_text(
            "# sweep configuration\n"
            "model = bernoulli\n"
            "n-range = 1..2\n"
            "family = hellinger\n"
            "seed = 7\n"
        )
        code_a, out_a, _ = run(capsys, "sweep", "--config", str(config))
        assert code_a == EXIT_OK
        assert len(out_a.splitlines()) == 3

        code_b, out_b, _ = run(capsys, "sweep", "--config", str(config), "--n-range", "1..4")
        assert code_b == EXIT_OK
        assert len(out_b.splitlines()) == 5

    def test_unknown_config_key_rejected(self, capsys, tmp_path):
        config = tmp_path / "bad.cfg"
        config.write_text("modle = bernoulli\n")
        code, _, err = run(capsys, "sweep", "--config", str(config))
        assert code == EXIT_USAGE
        assert "unknown config key" in err

    def test_missing_config_file_is_io_error(self, capsys):
        code, _, _ = run(capsys, "sweep", "--config", "/nonexistent/file.cfg")
        assert code == EXIT_IO


class TestValidateCommand:
    def test_bernoulli_validate_passes(self, capsys):
        code, out, _ = run(
            capsys,
            "validate",
            *["--model", "bernoulli", "--n-range", "1..4", "--samples", "200000"],
        )
        assert code == EXIT_OK
        assert "PASS" in out
        assert "FAIL" not in out

    def test_gaussian_validate_passes(self, capsys):
        code, out, _ = run(
            capsys,
            "validate",
            *["--model", "gaussian", "--n-range", "1..4", "--samples", "100000"],
        )
        assert code == EXIT_OK
        assert "FAIL" not in out

    def test_self_test_negate_fails(self, capsys):
        code, out, _ = run(
            capsys,
            "validate",
            *["--model", "bernoulli", "--n-range", "1..2", "--samples", "50000"],
            "--self-test-negate",
        )
        assert code == EXIT_VALIDATION
        assert "FAIL" in out
        assert "negated for self-test" in out

    def test_repeat_runs_share_exit_code(self, capsys):
        args = ["validate", "--model", "bernoulli", "--n-range", "1..2", "--samples", "50000"]
        first = main(list(args))
        second = main(list(args))
        capsys.readouterr()
        assert first == second == EXIT_OK


class TestRiskCurveType:
    def test_rows_must_be_sorted(self):
        rows = (
            RiskCurveRow(2, 0.1, None, None, None),
            RiskCurveRow(1, 0.2, None, None, None),
        )
        with pytest.raises(ValueError):
            RiskCurve(rows)

    def test_bounds_must_be_non_negative(self):
        with pytest.raises(ValueError):
            RiskCurve((RiskCurveRow(1, -0.5, None, None, None),))

    def test_csv_formatting_17_digits(self):
        curve = RiskCurve((RiskCurveRow(1, 1.0 / 3.0, None, None, None),))
        text = risk_curve_csv(curve)
        assert "0.33333333333333331" in text
