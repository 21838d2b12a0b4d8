import json
import math

import pytest

from meanwidth.cli import EXIT_OK, EXIT_USAGE, main
from meanwidth.polytopes import width_moment_cube


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [ln for ln in text.strip().splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    return header, rows


class TestUsageErrors:
    def test_mc_without_seed(self, capsys):
        code, _, err = run_cli(
            capsys, ["moments", "--family", "cube", "--n", "3", "--k", "1", "--route", "mc"]
        )
        assert code == EXIT_USAGE
        assert "--seed" in err

    def test_closed_route_for_non_cube(self, capsys):
        code, _, err = run_cli(
            capsys, ["moments", "--family", "cross", "--n", "3", "--k", "1", "--route", "closed"]
        )
        assert code == EXIT_USAGE
        assert "cube" in err

    def test_rejects_zero_restarts(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["search", "--n", "3", "--restarts", "0", "--seed", "1"])
        assert exc.value.code == 2

    def test_rejects_unknown_family(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["moments", "--family", "octahedron", "--n", "3", "--k", "1", "--route", "mc"])
        assert exc.value.code == 2

    def test_domain_error_maps_to_usage(self, capsys):
        # k = 5 has no cube closed form
        code, _, err = run_cli(
            capsys, ["moments", "--family", "cube", "--n", "3", "--k", "5", "--route", "closed"]
        )
        assert code == EXIT_USAGE


class TestMomentsOutput:
    def test_closed_csv_values(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["moments", "--family", "cube", "--n", "2,3", "--k", "1,2", "--route", "closed"],
        )
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["family", "n", "k", "value", "route", "error", "v1"]
        assert len(rows) == 4
        lookup = {(int(r["n"]), int(r["k"])): r for r in rows}
        assert float(lookup[(2, 2)]["value"]) == pytest.approx(1.0 + 2.0 / math.pi, rel=1e-15)
        # v1 echo column only for k = 1
        assert lookup[(3, 1)]["v1"] != ""
        assert float(lookup[(3, 1)]["v1"]) == pytest.approx(3.0, rel=1e-12)
        assert lookup[(3, 2)]["v1"] == ""

    def test_json_matches_csv_numerically(self, capsys):
        argv = ["moments", "--family", "cube", "--n", "4", "--k", "1,3", "--route", "closed"]
        _, csv_out, _ = run_cli(capsys, argv + ["--format", "csv"])
        _, json_out, _ = run_cli(capsys, argv + ["--format", "json"])
        _, csv_rows = parse_csv(csv_out)
        payload = json.loads(json_out)
        assert payload["manifest"]["command"] == "moments"
        assert payload["manifest"]["started_at"] is None
        for c_row, j_row in zip(csv_rows, payload["rows"]):
            assert float(c_row["value"]) == j_row["value"]
            if c_row["v1"] == "":
                assert j_row["v1"] is None
            else:
                assert float(c_row["v1"]) == j_row["v1"]

    def test_mc_route_is_byte_identical(self, capsys):
        argv = [
            "moments", "--family", "simplex-t", "--n", "4", "--k", "1,2",
            "--route", "mc", "--samples", "20000", "--seed", "7",
        ]
        _, first, _ = run_cli(capsys, argv + ["--threads", "1"])
        _, second, _ = run_cli(capsys, argv + ["--threads", "8"])
        assert first == second

    def test_mc_agrees_with_closed(self, capsys):
        _, out, _ = run_cli(
            capsys,
            [
                "moments", "--family", "cube", "--n", "3", "--k", "2",
                "--route", "mc", "--samples", "200000", "--seed", "3",
            ],
        )
        _, rows = parse_csv(out)
        value, error = float(rows[0]["value"]), float(rows[0]["error"])
        assert abs(value - width_moment_cube(3, 2).value) < 4.0 * error


class TestExtremesOutput:
    def test_table(self, capsys):
        code, out, _ = run_cli(capsys, ["extremes", "--n", "1,10,100"])
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        assert [r["slepian_ok"] for r in rows] == ["true"] * 3
        assert [r["upper_ok"] for r in rows] == ["true"] * 3
        assert rows[0]["gap_normalized"] == ""  # undefined at n = 1
        assert float(rows[2]["gap_normalized"]) > 1.0


class TestLimitsOutput:
    def test_cube_fit(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["limits", "--family", "cube", "--n", "500", "--samples", "20000", "--seed", "42"],
        )
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        row = rows[0]
        assert row["law"] == "normal"
        assert float(row["ks_distance"]) < 0.1


class TestSearchOutput:
    def test_no_finding_at_n3(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["search", "--n", "3", "--restarts", "2", "--samples", "20000", "--seed", "5"],
        )
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        row = rows[0]
        assert float(row["gap"]) <= 5.0 * float(row["best_stderr"])


class TestFileOutput:
    def test_out_relative_to_env_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MEANWIDTH_OUTPUT_DIR", str(tmp_path))
        code, out, _ = run_cli(
            capsys,
            [
                "moments", "--family", "cube", "--n", "2", "--k", "1",
                "--route", "closed", "--out", "table.csv",
            ],
        )
        assert code == EXIT_OK
        assert out == ""
        text = (tmp_path / "table.csv").read_text()
        _, rows = parse_csv(text)
        assert rows[0]["family"] == "cube"
