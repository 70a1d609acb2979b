import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from rxent import ExpFamilyDistribution, cross_entropy_closed
from rxent.cli import (
    Command,
    OutputFormat,
    UsageError,
    _parse_alpha_grid,
    main,
    parse_args,
)

E = ExpFamilyDistribution


@pytest.fixture
def chain_files(tmp_path):
    p = tmp_path / "P.csv"
    q = tmp_path / "Q.csv"
    p.write_text("0.9,0.1\n0.2,0.8\n")
    q.write_text("0.7,0.3\n0.4,0.6\n")
    return str(p), str(q)


@pytest.fixture
def mass_files(tmp_path):
    p = tmp_path / "p.csv"
    q = tmp_path / "q.csv"
    p.write_text("0.5,0.3,0.2\n")
    q.write_text("0.4,0.4,0.2\n")
    return str(p), str(q)


class TestParsing:
    def test_expfam_job(self):
        job = parse_args(
            "xent expfam --family gaussian --p mu=0,var=1 --q mu=1,var=2 "
            "--alpha 2".split()
        )
        assert job.command is Command.XENT_EXPFAM
        assert len(job.alphas) == 1 and job.alphas[0].value == 2.0
        assert not job.sweep and not job.oracle_check and not job.bits
        assert job.output_format is OutputFormat.PLAIN
        assert job.options["family"] == "gaussian"
        assert job.options["method"] == "closed"

    def test_markov_job_with_oracle(self):
        job = parse_args(
            "rate markov --p P.csv --q Q.csv --alpha 2 --finite-n 4000 "
            "--oracle".split()
        )
        assert job.command is Command.RATE_MARKOV
        assert job.oracle_check
        assert job.options["finite_n"] == 4000

    def test_sweep_job(self):
        job = parse_args(
            "sweep expfam --family exponential --p lambda=1 --q lambda=2 "
            "--alphas 0.5:5:0.5 --format csv".split()
        )
        assert job.sweep and len(job.alphas) == 10
        assert job.output_format is OutputFormat.CSV
        assert job.alphas[1].is_one  # the grid point at 1 takes the limit

    def test_sweep_default_format_is_csv(self):
        job = parse_args(
            "sweep expfam --family exponential --p lambda=1 --q lambda=2 "
            "--alphas 2:3:1".split()
        )
        assert job.output_format is OutputFormat.CSV

    def test_sweep_rejects_oracle(self):
        with pytest.raises(UsageError):
            parse_args(
                "sweep expfam --family exponential --p lambda=1 --q lambda=2 "
                "--alphas 2:3:1 --oracle".split()
            )

    def test_alpha_markers(self):
        job = parse_args("xent discrete --p a --q b --alpha 1".split())
        assert job.alphas[0].is_one
        job = parse_args("xent discrete --p a --q b --alpha inf".split())
        assert job.alphas[0].is_inf

    def test_bad_alpha(self):
        with pytest.raises(UsageError):
            parse_args("xent discrete --p a --q b --alpha zero".split())
        with pytest.raises(UsageError):
            parse_args("xent discrete --p a --q b --alpha -2".split())

    def test_missing_required(self):
        with pytest.raises(UsageError):
            parse_args("xent expfam --family gaussian --p mu=0,var=1".split())

    def test_grid_parsing(self):
        grid = _parse_alpha_grid("0.5:5:0.5")
        assert len(grid) == 10
        assert [a.value for a in grid[2:]] == pytest.approx(
            [1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0]
        )
        with pytest.raises(UsageError):
            _parse_alpha_grid("2:1:0.5")
        with pytest.raises(UsageError):
            _parse_alpha_grid("1:2")
        with pytest.raises(UsageError):
            _parse_alpha_grid("a:b:c")


class TestExpfamCommand:
    def test_spec_pair_prints_closed_form(self, capsys):
        code = main(
            "xent expfam --family gaussian --p mu=0,var=1 --q mu=1,var=2 "
            "--alpha 2".split()
        )
        assert code == 0
        printed = capsys.readouterr().out.strip()
        expected = cross_entropy_closed(E.gaussian(0, 1), E.gaussian(1, 2), 2.0)
        assert printed == format(expected.value, ".12g")

    def test_self_pair_value(self, capsys):
        code = main(
            "xent expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 "
            "--alpha 2".split()
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "1.26551212348"

    def test_oracle_gap(self, capsys):
        code = main(
            "xent expfam --family exponential --p lambda=2 --q lambda=3 "
            "--alpha 2 --oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == format(math.log(5 / 6), ".12g")
        assert lines[1].startswith("oracle ")
        assert lines[2].startswith("gap ")
        assert float(lines[2].split()[1]) < 1e-8

    def test_natural_method_agrees(self, capsys):
        args = "xent expfam --family gamma --p k=2.5,theta=1.2 --q k=1.5,theta=2 --alpha 3"
        main(args.split())
        closed = capsys.readouterr().out.strip()
        main((args + " --method natural").split())
        natural = capsys.readouterr().out.strip()
        assert closed == natural

    def test_family_aliases(self, capsys):
        main("xent expfam --family normal --p mu=0,var=1 --q mu=0,var=1 --alpha 2".split())
        first = capsys.readouterr().out
        main("xent expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 --alpha 2".split())
        assert capsys.readouterr().out == first
        main("xent expfam --family exp --p rate=2 --q rate=3 --alpha 2".split())
        assert capsys.readouterr().out.strip() == format(math.log(5 / 6), ".12g")

    def test_divergence_exits_two(self, capsys):
        code = main(
            "xent expfam --family gaussian --p mu=0,var=4 --q mu=0,var=1 "
            "--alpha 0.5".split()
        )
        assert code == 2
        assert capsys.readouterr().out.strip() == "inf"

    def test_bits(self, capsys):
        main("xent expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 --alpha 2".split())
        nats = float(capsys.readouterr().out)
        main("xent expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 --alpha 2 --bits".split())
        bits = float(capsys.readouterr().out)
        # 12 printed digits bound the round-trip precision
        assert_allclose(bits, nats / math.log(2), rtol=1e-10)

    def test_bad_parameter_name(self, capsys):
        code = main("xent expfam --family gaussian --p mu=0,sigma=1 --q mu=0,var=1 --alpha 2".split())
        assert code == 1
        assert "usage error" in capsys.readouterr().err

    def test_invalid_parameter_value(self, capsys):
        code = main("xent expfam --family gaussian --p mu=0,var=-1 --q mu=0,var=1 --alpha 2".split())
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_mv_gaussian(self, tmp_path, capsys):
        c1 = tmp_path / "c1.csv"
        c2 = tmp_path / "c2.csv"
        c1.write_text("2.0,0.6\n0.6,1.0\n")
        c2.write_text("1.5,-0.3\n-0.3,2.5\n")
        code = main(
            f"xent expfam --family mvgauss --p {c1} --q {c2} --alpha 2 --oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[2].split()[1]) < 1e-4


class TestDiscreteCommand:
    def test_known_value(self, mass_files, capsys):
        p, q = mass_files
        code = main(f"xent discrete --p {p} --q {q} --alpha 2".split())
        assert code == 0
        assert_allclose(float(capsys.readouterr().out), -math.log(0.36), rtol=1e-10)

    def test_alpha_inf(self, mass_files, capsys):
        p, q = mass_files
        code = main(f"xent discrete --p {p} --q {q} --alpha inf".split())
        assert code == 0
        assert_allclose(float(capsys.readouterr().out), -math.log(0.4), rtol=1e-12)

    def test_alternate_definition(self, mass_files, capsys):
        p, q = mass_files
        main(f"xent discrete --p {p} --q {q} --alpha 2".split())
        standard = float(capsys.readouterr().out)
        main(f"xent discrete --p {p} --q {q} --alpha 2 --definition alternate".split())
        alternate = float(capsys.readouterr().out)
        assert abs(standard - alternate) > 1e-4

    def test_oracle_gap(self, mass_files, capsys):
        p, q = mass_files
        code = main(f"xent discrete --p {p} --q {q} --alpha 2 --oracle".split())
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[2].split()[1]) < 1e-12

    def test_missing_file_exits_one(self, tmp_path, capsys):
        code = main(f"xent discrete --p {tmp_path}/no.csv --q {tmp_path}/no.csv --alpha 2".split())
        assert code == 1
        err = capsys.readouterr().err
        assert "error" in err


class TestSpecialCommand:
    def test_q_uniform(self, capsys):
        code = main("xent special q-uniform --lower -1 --upper 1 --alpha 2".split())
        assert code == 0
        assert_allclose(float(capsys.readouterr().out), math.log(2.0), rtol=1e-12)

    def test_p_uniform(self, capsys):
        code = main("xent special p-uniform --q a=2,b=2 --alpha 3 --oracle".split())
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert_allclose(float(lines[0]), -0.5 * math.log(1.2), rtol=1e-10)
        assert float(lines[2].split()[1]) < 1e-8

    def test_q_exponential(self, capsys):
        code = main(
            "xent special q-exponential --p-family exponential --p rate=2 "
            "--rate 1 --alpha 2 --oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert_allclose(float(lines[0]), math.log(1.5), rtol=1e-10)
        assert float(lines[2].split()[1]) < 1e-8

    def test_q_gaussian(self, capsys):
        code = main(
            "xent special q-gaussian --p-family laplace --p mu=0,b=1 "
            "--mean 0 --var 1 --alpha 2 --oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert_allclose(float(lines[0]), 1.3410216450092634, rtol=1e-9)
        assert float(lines[2].split()[1]) < 1e-6

    def test_q_half_normal(self, capsys):
        code = main(
            "xent special q-half-normal --p-family exponential --p rate=1 "
            "--var 1 --alpha 2 --oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert_allclose(float(lines[0]), 0.6478744644493184, rtol=1e-9)
        assert float(lines[2].split()[1]) < 1e-6

    def test_support_mismatch_rejected(self, capsys):
        code = main(
            "xent special q-exponential --p-family gaussian --p mu=0,var=1 "
            "--rate 1 --alpha 2".split()
        )
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_missing_variant_option(self, capsys):
        code = main("xent special q-exponential --p-family exponential --p rate=2 --alpha 2".split())
        assert code == 1


class TestMarkovCommand:
    def test_spec_example(self, chain_files, capsys):
        p, q = chain_files
        code = main(f"rate markov --p {p} --q {q} --alpha 2 --finite-n 4000 --oracle".split())
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[2].split()[1]) < 5e-3

    def test_start_distribution_option(self, chain_files, tmp_path, capsys):
        p, q = chain_files
        init = tmp_path / "init.csv"
        init.write_text("1.0,0.0\n")
        code = main(f"rate markov --p {p} --q {q} --p-init {init} --alpha 2".split())
        assert code == 0

    def test_shannon_marker(self, chain_files, capsys):
        p, q = chain_files
        code = main(f"rate markov --p {p} --q {q} --alpha 1 --oracle".split())
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[2].split()[1]) < 1e-9


class TestGaussCommand:
    def test_white_noise_pair(self, capsys):
        code = main("rate gauss --x white:4 --y white:1 --alpha 2".split())
        assert code == 0
        assert_allclose(float(capsys.readouterr().out), 0.5 * math.log(10 * math.pi),
                        rtol=1e-10)

    def test_ar1_with_oracle(self, capsys):
        code = main(
            "rate gauss --x ar1:0.6 --y ar1:0.3,1.5 --alpha 2 --finite-n 512 "
            "--oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[2].split()[1]) < 1e-3

    def test_autocov_file(self, tmp_path, capsys):
        seq = tmp_path / "r.csv"
        seq.write_text("\n".join(str(v) for v in 0.6 ** np.arange(100)))
        code = main(f"rate gauss --x {seq} --y white:1 --alpha 2".split())
        assert code == 0
        main("rate gauss --x ar1:0.6 --y white:1 --alpha 2".split())
        # truncated-series and closed-psd routes agree to printed precision
        out = capsys.readouterr().out.strip().splitlines()
        assert out[0][:10] == out[1][:10]

    def test_divergence_exits_two(self, capsys):
        code = main("rate gauss --x ar1:0.6 --y ar1:-0.3,2 --alpha 0.5".split())
        assert code == 2
        assert capsys.readouterr().out.strip() == "inf"

    def test_shannon_marker_rejected(self, capsys):
        code = main("rate gauss --x white:1 --y white:2 --alpha 1".split())
        assert code == 1


class TestOutputFormats:
    def test_json_single(self, capsys):
        main(
            "xent expfam --family exponential --p lambda=2 --q lambda=3 "
            "--alpha 2 --oracle --format json".split()
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["command"] == "xent expfam"
        assert payload["alpha"] == 2.0
        assert_allclose(payload["value"], math.log(5 / 6), rtol=1e-12)
        assert payload["gap"] < 1e-8

    def test_json_infinity_is_string(self, capsys):
        main(
            "xent expfam --family gaussian --p mu=0,var=4 --q mu=0,var=1 "
            "--alpha 0.5 --format json".split()
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == "inf"

    def test_csv_single_with_oracle(self, capsys):
        main(
            "xent expfam --family exponential --p lambda=2 --q lambda=3 "
            "--alpha 2 --oracle --format csv".split()
        )
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "alpha,value,oracle,gap"
        assert lines[1].startswith("2,")

    def test_sweep_csv(self, capsys):
        code = main(
            "sweep expfam --family exponential --p lambda=1 --q lambda=2 "
            "--alphas 0.5:5:0.5 --format csv".split()
        )
        # the alpha = 0.5 row diverges (lambda_h = 0), so the exit code
        # signals an infinity in the output
        assert code == 2
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "alpha,value"
        assert len(lines) == 11
        assert lines[1] == "0.5,inf"
        assert lines[2].startswith("1,")  # the grid point at 1, Shannon limit
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert values == sorted(values, reverse=True)

    def test_sweep_matches_closed_form_column(self, capsys):
        main(
            "sweep expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 "
            "--alphas 2:5:1.5 --format csv".split()
        )
        lines = capsys.readouterr().out.strip().splitlines()[1:]
        for line in lines:
            a_text, v_text = line.split(",")
            a = float(a_text)
            expected = 0.5 * (math.log(2 * math.pi) + math.log(a) / (a - 1.0))
            assert_allclose(float(v_text), expected, rtol=1e-10)

    def test_sweep_json(self, capsys):
        main(
            "sweep expfam --family exponential --p lambda=1 --q lambda=2 "
            "--alphas 2:3:0.5 --format json".split()
        )
        payload = json.loads(capsys.readouterr().out)
        assert [row["alpha"] for row in payload] == [2.0, 2.5, 3.0]
        assert all(row["command"] == "xent expfam" for row in payload)

    def test_sweep_plain(self, capsys):
        main(
            "sweep expfam --family exponential --p lambda=1 --q lambda=2 "
            "--alphas 2:3:1 --format plain".split()
        )
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2 and all(" " in line for line in lines)

    def test_monotonicity_warning(self, capsys, monkeypatch):
        from rxent import cli

        calls = iter([1.0, 2.0])

        def fake(opts, alpha, want_oracle, settings):
            return next(calls), None

        monkeypatch.setitem(cli._EVALUATORS, Command.XENT_DISCRETE, fake)
        job = parse_args("sweep discrete --p a --q b --alphas 2:3:1".split())
        code, text = cli.run(job)
        assert code == 0
        assert "not non-increasing" in capsys.readouterr().err


class TestEnvironment:
    def test_quad_tol_override(self, monkeypatch, capsys):
        monkeypatch.setenv("XENT_QUAD_TOL", "1e-6")
        code = main(
            "xent expfam --family exponential --p lambda=2 --q lambda=3 "
            "--alpha 2 --oracle".split()
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[2].split()[1]) < 1e-4

    def test_invalid_quad_tol(self, monkeypatch, capsys):
        monkeypatch.setenv("XENT_QUAD_TOL", "fast")
        code = main(
            "xent expfam --family exponential --p lambda=2 --q lambda=3 "
            "--alpha 2 --oracle".split()
        )
        assert code == 1
        assert "XENT_QUAD_TOL" in capsys.readouterr().err

    def test_module_entry_point(self):
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "rxent", "xent", "expfam", "--family",
             "gaussian", "--p", "mu=0,var=1", "--q", "mu=0,var=1", "--alpha", "2"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "1.26551212348"
