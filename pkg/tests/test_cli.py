"""End-to-end CLI behavior through main(argv)."""

import pytest

from tunable_lsh import read_trace
from tunable_lsh.bench import LSH_BENCH_HEADER, STORE_BENCH_HEADER
from tunable_lsh.cli import main
from tunable_lsh.core_model import OracleCheck

GEN_ARGS = [
    "generate",
    "--record-count", "200",
    "--records-per-query", "10",
    "--num-queries", "40",
    "--uniqueness-100", "5",
    "--seed", "3",
]

STORE_ARGS = [
    "store-bench",
    "--record-count", "240",
    "--records-per-query", "10",
    "--num-queries", "20",
    "--record-size", "16",
    "--uniqueness-100", "10",
    "--page-size", "256",
    "--k", "16",
    "--b", "4",
    "--values", "5,10",
    "--reps", "1",
]

LSH_ARGS = [
    "lsh-bench",
    "--record-count", "300",
    "--records-per-query", "10",
    "--num-queries", "50",
    "--k", "16",
    "--b", "4",
    "--epsilon", "512",
    "--values", "1,25",
    "--reps", "2",
    "--warmup", "8",
    "--pairs-per-query", "8",
]


class TestGenerate:
    def test_writes_a_readable_trace(self, tmp_path, capsys):
        out = tmp_path / "trace.txt"
        assert main(GEN_ARGS + ["--out", str(out)]) == 0
        trace = read_trace(out)
        assert len(trace) == 40
        assert all(len(q.positions) == 10 for q in trace)
        assert trace.meta["record_count"] == "200"
        assert trace.meta["uniqueness_100"] == "5"
        assert str(out) in capsys.readouterr().out

    def test_out_is_required(self, tmp_path):
        with pytest.raises(SystemExit):
            main(GEN_ARGS)


class TestStoreBench:
    def test_untimed_output_is_byte_stable(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            code = main(
                STORE_ARGS + ["--clock", "off", "--no-figure", "--out", str(out)]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert lines[0] == ",".join(STORE_BENCH_HEADER)
        assert len(lines) == 1 + 2 * 3  # two values x three store kinds
        first = lines[1].split(",")
        assert first[5] == first[6] == first[7] == ""  # clock off

    def test_figure_rendered_next_to_csv(self, tmp_path):
        out = tmp_path / "bench.csv"
        args = [a for a in STORE_ARGS]
        args[args.index("--values") + 1] = "5"
        assert main(args + ["--stores", "static", "--out", str(out)]) == 0
        png = tmp_path / "bench.png"
        assert png.exists()
        assert png.read_bytes()[:4] == b"\x89PNG"

    def test_bad_values_list_rejected(self, tmp_path):
        with pytest.raises(SystemExit):
            main(STORE_ARGS + ["--values", "5,x", "--out", str(tmp_path / "o.csv")])


class TestLshBench:
    def test_deterministic_csv_and_figure(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(LSH_ARGS + ["--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert lines[0] == ",".join(LSH_BENCH_HEADER)
        assert len(lines) == 1 + 2 * 4  # two values x four hashers
        for line in lines[1:]:
            cells = line.split(",")
            assert 0.0 <= float(cells[5]) <= 1.0
        assert (tmp_path / "a.png").read_bytes()[:4] == b"\x89PNG"

    def test_b_sweep_through_the_cli(self, tmp_path):
        out = tmp_path / "b.csv"
        args = list(LSH_ARGS)
        args[args.index("--values") + 1] = "2,8"
        code = main(
            args
            + ["--sweep", "b", "--hashers", "tunable", "--no-figure", "--out", str(out)]
        )
        assert code == 0
        values = [line.split(",")[1] for line in out.read_text().splitlines()[1:]]
        assert values == ["2", "8"]  # one row per swept b for the one hasher


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text(
            "# comment line\n"
            "num-queries = 25\n"
            "records_per_query=15\n"
            "seed=9\n"
        )
        out = tmp_path / "t.txt"
        main(
            [
                "generate",
                "--config", str(cfg),
                "--record-count", "200",
                "--uniqueness-100", "5",
                "--records-per-query", "20",
                "--out", str(out),
            ]
        )
        trace = read_trace(out)
        assert len(trace) == 25  # from the config file
        assert all(len(q.positions) == 20 for q in trace)  # flag wins
        assert trace.meta["seed"] == "9"

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("fizz=1\n")
        with pytest.raises(SystemExit, match="unknown config keys: fizz"):
            main(["generate", "--config", str(cfg), "--out", str(tmp_path / "t")])

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("num-queries=soon\n")
        with pytest.raises(SystemExit, match="bad value for num_queries"):
            main(["generate", "--config", str(cfg), "--out", str(tmp_path / "t")])

    def test_boolean_coercion(self, tmp_path):
        cfg = tmp_path / "fig.cfg"
        cfg.write_text("figure=off\n")
        out = tmp_path / "s.csv"
        args = [a for a in STORE_ARGS]
        args[args.index("--values") + 1] = "5"
        code = main(
            args + ["--config", str(cfg), "--stores", "static", "--clock", "off",
                    "--out", str(out)]
        )
        assert code == 0
        assert not (tmp_path / "s.png").exists()

        cfg.write_text("figure=maybe\n")
        with pytest.raises(SystemExit, match="bad boolean"):
            main(args + ["--config", str(cfg), "--out", str(out)])

    def test_malformed_line_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just a sentence\n")
        with pytest.raises(SystemExit, match="expected key=value"):
            main(["generate", "--config", str(cfg), "--out", str(tmp_path / "t")])

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(SystemExit, match="cannot read config file"):
            main(
                [
                    "generate",
                    "--config", str(tmp_path / "absent.cfg"),
                    "--out", str(tmp_path / "t"),
                ]
            )

    def test_dangling_config_flag(self):
        with pytest.raises(SystemExit, match="--config needs a path"):
            main(["generate", "--config"])


class TestOracle:
    def test_smoke_tier_reports_and_exits_zero(self, capsys):
        assert main(["oracle"]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[-1] == "oracle-suite: PASS"
        assert len(lines) == 6
        for line in lines[:-1]:
            assert " cases=" in line
            assert line.endswith("status=PASS")

    def test_failures_flip_the_exit_code(self, capsys, monkeypatch):
        import tunable_lsh.cli as cli

        broken = [OracleCheck("stub-check", 10, 2, "x=3 theta=1")]
        monkeypatch.setattr(cli, "run_oracle_suite", lambda full=False: broken)
        assert main(["oracle"]) == 1
        out = capsys.readouterr().out
        assert "stub-check cases=10 failures=2 status=FAIL detail=x=3 theta=1" in out
        assert "oracle-suite: FAIL" in out
