import json
import subprocess
import sys

import pytest

from infoseg.cli import main
from infoseg.io import parse_personhood_table


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_valid_fixtures(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys,
            "validate",
            fixtures_dir / "tiny_log.csv",
            fixtures_dir / "tiny_union_twin.json",
            fixtures_dir / "exact_counts.json",
            fixtures_dir / "sources.csv",
            "--unit-space",
            fixtures_dir / "political_space.json",
        )
        assert code == 0
        assert out.count("OK") == 5

    def test_missing_subset_names_it(self, capsys, tmp_path):
        bad = tmp_path / "partial.json"
        bad.write_text(
            json.dumps(
                {
                    "kind": "union-observations",
                    "units": ["a", "b"],
                    "records": [{"group": "g", "units": ["a"], "reach": 1}],
                }
            )
        )
        code, out, _ = run(capsys, "validate", bad)
        assert code == 1
        assert "incomplete observation table" in out and "'b'" in out

    def test_asymmetric_distances(self, capsys, tmp_path):
        bad = tmp_path / "space.json"
        bad.write_text(json.dumps({"units": ["a", "b"], "distances": [[0, 1], [2, 0]]}))
        code, out, _ = run(capsys, "validate", "--unit-space", bad)
        assert code == 1
        assert "symmetric" in out

    def test_unit_space_as_positional_dataset(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "validate", fixtures_dir / "political_space.json")
        assert code == 0
        assert "OK unit-space" in out


class TestPersonhood:
    def test_three_person_table(self, capsys, fixtures_dir, tmp_path):
        out_file = tmp_path / "table.json"
        code, _, _ = run(capsys, "personhood", fixtures_dir / "tiny_log.csv", "--out", out_file)
        assert code == 0
        table = parse_personhood_table(out_file.read_text())
        assert dict(zip(table.unit_ids, table.personhoods[0])) == {"unit_i": 1.5, "unit_j": 1.5}

    def test_union_twin_matches_membership_log(self, capsys, fixtures_dir, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(capsys, "personhood", fixtures_dir / "tiny_log.csv", "--out", a)[0] == 0
        assert run(capsys, "personhood", fixtures_dir / "tiny_union_twin.json", "--out", b)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_population_override(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "personhood", fixtures_dir / "tiny_log.csv", "--population", 50)
        assert code == 0
        assert json.loads(out)["population"] == 50.0

    def test_source_compositions_have_no_personhoods(self, capsys, fixtures_dir):
        code, _, err = run(capsys, "personhood", fixtures_dir / "sources.csv")
        assert code == 1
        assert "personhood" in err

    def test_unit_space_has_no_personhoods(self, capsys, fixtures_dir):
        code, _, err = run(capsys, "personhood", fixtures_dir / "political_space.json")
        assert code == 1
        assert "personhood" in err


class TestMeasure:
    def test_report_composability(self, capsys, fixtures_dir, tmp_path):
        table_file = tmp_path / "table.json"
        run(capsys, "personhood", fixtures_dir / "exact_counts.json", "--out", table_file)
        args = ("--unit-space", fixtures_dir / "political_space.json", "--variants", "both", "--format", "tsv")
        code1, direct, _ = run(capsys, "measure", fixtures_dir / "exact_counts.json", *args)
        code2, via_table, _ = run(capsys, "measure", table_file, *args)
        assert code1 == code2 == 0
        assert direct == via_table

    def test_row_error_without_center(self, capsys, fixtures_dir, tmp_path):
        space = tmp_path / "nocenter.json"
        space.write_text(json.dumps({"units": ["VC", "C", "M", "L", "VL"]}))
        code, out, _ = run(
            capsys,
            "measure",
            fixtures_dir / "exact_counts.json",
            "--unit-space",
            space,
            "--measures",
            "centralization",
            "--format",
            "tsv",
        )
        assert code == 0  # row-level degeneracy is report content
        assert "center" in out

    def test_explicit_pairs(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys,
            "measure",
            fixtures_dir / "exact_counts.json",
            "--unit-space",
            fixtures_dir / "political_space.json",
            "--measures",
            "joint-exposure",
            "--pairs",
            "right:left",
        )
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [tuple(r["groups"]) for r in rows] == [("right", "left")]

    def test_bad_pair_spec(self, capsys, fixtures_dir):
        code, _, err = run(
            capsys, "measure", fixtures_dir / "exact_counts.json", "--pairs", "oops"
        )
        assert code == 1
        assert "GROUP:GROUP" in err

    def test_plot_output(self, capsys, fixtures_dir, tmp_path):
        plot = tmp_path / "plot.csv"
        code, _, _ = run(
            capsys,
            "measure",
            fixtures_dir / "exact_counts.json",
            "--unit-space",
            fixtures_dir / "political_space.json",
            "--plot",
            "evenness-by-group",
            "--plot-out",
            plot,
            "--out",
            tmp_path / "report.json",
        )
        assert code == 0
        lines = plot.read_text().strip().splitlines()
        assert lines[0] == "label,value"
        assert len(lines) == 3

    def test_unknown_plot_kind(self, capsys, fixtures_dir):
        code, _, err = run(
            capsys, "measure", fixtures_dir / "exact_counts.json", "--plot", "pie"
        )
        assert code == 1
        assert "plot kind" in err

    def test_flag_config_file_and_precedence(self, capsys, fixtures_dir, tmp_path):
        flag_config = tmp_path / "flags.json"
        flag_config.write_text(json.dumps({"format": "tsv", "measures": "evenness"}))
        code, out, _ = run(
            capsys, "measure", fixtures_dir / "exact_counts.json", "--config", flag_config
        )
        assert code == 0 and out.startswith("measure\t")  # config supplied tsv
        code, out, _ = run(
            capsys,
            "measure",
            fixtures_dir / "exact_counts.json",
            "--config",
            flag_config,
            "--format",
            "json",
        )
        assert code == 0 and out.startswith("{")  # explicit flag wins


class TestClassify:
    def test_mapping(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "classify", fixtures_dir / "sources.csv")
        sources = json.loads(out)["sources"]
        assert code == 0
        assert sources["daily_far_right"] == "VC"
        assert sources["left_ledger"] == "VL"
        assert sources["edge_case"] == "L"  # score exactly 0.5

    def test_mirrored_pair_mirrors(self, capsys, fixtures_dir):
        _, out, _ = run(capsys, "classify", fixtures_dir / "sources.csv")
        sources = json.loads(out)["sources"]
        assert (sources["daily_far_right"], sources["left_ledger"]) == ("VC", "VL")

    def test_summary(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "classify", fixtures_dir / "sources.csv", "--summary")
        counts = json.loads(out)["topic_counts"]
        assert code == 0
        assert counts == {"VC": 1, "C": 0, "M": 1, "L": 1, "VL": 2}

    def test_threshold_override(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys, "classify", fixtures_dir / "sources.csv", "--thresholds=-0.9,-0.8,0.8,0.9"
        )
        assert code == 0
        assert json.loads(out)["sources"]["daily_far_right"] == "M"

    def test_bad_thresholds(self, capsys, fixtures_dir):
        code, _, err = run(capsys, "classify", fixtures_dir / "sources.csv", "--thresholds", "1,2")
        assert code == 1
        assert "thresholds" in err

    def test_wrong_dataset_kind(self, capsys, fixtures_dir):
        code, _, err = run(capsys, "classify", fixtures_dir / "tiny_log.csv")
        assert code == 1
        assert "source compositions" in err


class TestGenerate:
    def test_deterministic_and_seed_override(self, capsys, configs_dir, tmp_path):
        cfg = configs_dir / "peaked_profiles.json"
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        assert run(capsys, "generate", cfg, "--out", a)[0] == 0
        assert run(capsys, "generate", cfg, "--out", b)[0] == 0
        assert run(capsys, "generate", cfg, "--out", c, "--seed", 99)[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_generated_log_flows_into_measure(self, capsys, configs_dir, fixtures_dir, tmp_path):
        log = tmp_path / "log.csv"
        run(capsys, "generate", configs_dir / "peaked_profiles.json", "--out", log)
        code, out, _ = run(
            capsys,
            "measure",
            log,
            "--unit-space",
            fixtures_dir / "political_space.json",
            "--measures",
            "evenness",
        )
        assert code == 0
        assert len(json.loads(out)["rows"]) == 4


class TestExitCodes:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "measure", "no_such_file.csv")
        assert code == 1
        assert "cannot read" in err

    def test_unknown_subcommand_is_input_error(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 1

    def test_internal_failure_is_exit_2(self, capsys, fixtures_dir, monkeypatch):
        def boom(*args, **kwargs):
            raise RuntimeError("synthetic crash")

        monkeypatch.setattr("infoseg.cli.measure_all", boom)
        code, _, err = run(capsys, "measure", fixtures_dir / "exact_counts.json")
        assert code == 2
        assert "internal error" in err

    def test_module_entry_point(self, fixtures_dir):
        result = subprocess.run(
            [sys.executable, "-m", "infoseg", "classify", str(fixtures_dir / "sources.csv")],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "daily_far_right" in result.stdout
