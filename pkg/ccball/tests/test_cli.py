import csv
import io
import json
import math

import pytest

from ccball.cli.output import Emitter, format_number, normalize, parse_floats
from ccball.core.exceptions import InvalidArgument
from ccball.main import create_main_parser, format_error, join_negative_values, main

FAST = ["--strategy", "single_circle", "--mc-samples", "0"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def disc_config(tmp_path):
    path = tmp_path / "discs.json"
    path.write_text(json.dumps({"potential": {"kind": "disc_array"}, "eval_budget": 20000}))
    return str(path)


class TestOutput:
    def test_format_number(self):
        assert format_number(True) == "true"
        assert format_number(3) == "3"
        assert format_number(1.0 / 3.0) == "0.333333333333"
        assert format_number(float("inf")) == "inf"
        assert format_number(float("nan")) == "nan"

    def test_normalize(self):
        assert normalize({"z": 1 + 2j, "v": [0.1 + 0.2]}) == {"z": [1.0, 2.0], "v": [0.3]}

    def test_table_formats(self):
        header, data = ["a[1]", "b[1]"], [(1.0, True)]
        assert Emitter("csv").render_table(header, data) == "a[1],b[1]\n1,true\n"
        assert json.loads(Emitter("json").render_table(header, data)) == [{"a[1]": 1.0, "b[1]": True}]
        with pytest.raises(InvalidArgument):
            Emitter("xml")

    def test_parse_floats(self):
        assert parse_floats("1, 2.5") == [1.0, 2.5]
        with pytest.raises(InvalidArgument):
            parse_floats("1,2", 3)
        with pytest.raises(InvalidArgument):
            parse_floats("1,x")
        with pytest.raises(InvalidArgument):
            parse_floats("1,inf")


class TestMain:
    def test_every_command_is_registered(self):
        help_text = create_main_parser().format_help()
        for name in ("lambda", "stockyard", "twist", "decompose", "ugs-check", "dist", "cyl", "volume", "healthcheck"):
            assert name in help_text

    def test_no_command(self, capsys):
        code, out, err = run(capsys)
        assert code == 2
        assert out == ""
        assert "usage" in err

    def test_error_line(self):
        line = format_error(InvalidArgument('bad "quote"\nnext'))
        assert line == 'error kind=InvalidArgument exit=2 message="bad \\"quote\\" next"'

    def test_bad_argument_exit_code(self, capsys):
        code, out, err = run(capsys, "lambda", "--z0", "abc", "--deltas", "1")
        assert code == 2
        assert out == ""
        assert err.strip().splitlines()[-1].startswith("error kind=InvalidArgument exit=2")

    def test_usage_error_line(self, capsys):
        code, out, err = run(capsys, "cyl", "--delta", "2")
        assert code == 2
        assert out == ""
        last = err.strip().splitlines()[-1]
        assert last.startswith("error kind=InvalidArgument exit=2")
        assert "--p0" in last
        code, _, err = run(capsys, "lambda", "--z0", "0,0", "--deltas", "1", "--strategy", "annealing")
        assert code == 2
        assert "kind=InvalidArgument" in err

    def test_negative_values_are_joined(self):
        assert join_negative_values(["ugs-check", "--window", "-1,-1,1,1", "--grid-n", "2"]) == [
            "ugs-check", "--window=-1,-1,1,1", "--grid-n", "2"]
        assert join_negative_values(["twist", "--t0", "-2.5", "-v"]) == ["twist", "--t0=-2.5", "-v"]
        assert join_negative_values(["dist", "--p0=-1,0,0"]) == ["dist", "--p0=-1,0,0"]

    def test_unknown_config_key(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"potential": {"kind": "quadratic", "radius": 2}}))
        code, _, err = run(capsys, "dist", "--config", str(path), "--p0", "0,0,0", "--p1", "0,0,1")
        assert code == 2
        assert "kind=UnknownConfigKey" in err
        assert "'radius'" in err

    def test_numerical_failure_exit_code(self, capsys, disc_config):
        code, _, err = run(capsys, "dist", "--config", disc_config, "--p0", "0,0,0", "--p1", "1,0,1", "--sqrt", *FAST)
        assert code == 3
        assert "kind=HessianUnbounded exit=3" in err


class TestCommands:
    def test_lambda_csv(self, capsys):
        code, out, _ = run(capsys, "lambda", "--z0", "0,0", "--deltas", "2,1", "--c2", "4", *FAST)
        assert code == 0
        assert out.splitlines()[0] == "delta[z],lower[t],upper[t],c2[1]"
        table = rows(out)
        assert [float(r["delta[z]"]) for r in table] == [1.0, 2.0]
        assert float(table[1]["lower[t]"]) == pytest.approx(4.0 / math.pi, rel=1e-11)
        assert float(table[1]["upper[t]"]) == pytest.approx(24.0)

    def test_lambda_is_deterministic(self, capsys):
        argv = ["lambda", "--z0", "0.5,-0.5", "--deltas", "1,2", "--c2", "4",
                "--strategy", "single_circle", "--mc-samples", "4", "--seed", "11"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_lambda_to_file(self, capsys, tmp_path):
        target = tmp_path / "lambda.json"
        code, out, _ = run(capsys, "lambda", "--z0", "0,0", "--deltas", "1", "--c2", "4",
                           "--format", "json", "-o", str(target), *FAST)
        assert code == 0
        assert out == ""
        records = json.loads(target.read_text())
        assert records[0]["delta[z]"] == 1.0

    def test_twist_circle(self, capsys):
        code, out, _ = run(capsys, "twist", "--delta", str(2 * math.pi), "--circle", "256")
        assert code == 0
        row = rows(out)[0]
        assert float(row["twist[t]"]) == pytest.approx(4 * math.pi, rel=1e-3)
        assert float(row["x_end[z]"]) == pytest.approx(0.0, abs=1e-9)
        assert row["mean_zero[1]"] == "true"

    def test_twist_control_file(self, capsys, tmp_path):
        control = tmp_path / "u.json"
        control.write_text(json.dumps([[0.0, 0.8, 0.0]]))
        code, out, _ = run(capsys, "twist", "--z0", "0,1", "--t0", "2", "--delta", "1", "--control", str(control))
        assert code == 0
        row = rows(out)[0]
        assert float(row["x_end[z]"]) == pytest.approx(0.8)
        assert float(row["t_end[t]"]) == pytest.approx(3.6)
        assert row["mean_zero[1]"] == "false"

    def test_decompose_bowtie(self, capsys, tmp_path):
        loop = tmp_path / "bowtie.json"
        loop.write_text(json.dumps([[-1, 1], [1, -1], [1, 1], [-1, -1]]))
        code, out, _ = run(capsys, "decompose", "--loop", str(loop))
        assert code == 0
        document = json.loads(out)
        assert len(document["cycles"]) == 2
        assert document["loop_integral"] == pytest.approx(0.0, abs=1e-9)
        assert document["mass_sum"] == pytest.approx(0.0, abs=1e-9)
        assert document["upper_witness"] == pytest.approx(4.0)

    def test_stockyard_document(self, capsys, disc_config):
        code, out, _ = run(capsys, "stockyard", "--config", disc_config, "--z0", "0,0", "--delta", "30",
                           "--strategy", "disc_chain", "--mc-samples", "0")
        assert code == 0
        document = json.loads(out)
        assert document["value"] >= 4.0
        assert document["fencing"] <= 30.0 * (1 + 1e-12)
        assert document["bounds"]["lower"] >= document["value"]
        assert document["bounds"]["lower"] <= document["bounds"]["upper"]

    def test_dist(self, capsys):
        code, out, _ = run(capsys, "dist", "--p0", "0,0,0", "--p1", f"0,0,{4 * math.pi}", *FAST)
        assert code == 0
        assert float(rows(out)[0]["distance[z]"]) == pytest.approx(2 * math.pi, rel=1e-8)
        code, out, _ = run(capsys, "dist", "--p0", "0,0,0", "--p1", "4,0,16", "--sqrt", *FAST)
        assert float(rows(out)[0]["distance[z]"]) == pytest.approx(8.0)
        assert rows(out)[0]["formula[1]"] == "sqrt"

    def test_cyl_points_are_reached(self, capsys):
        code, out, err = run(capsys, "cyl", "--p0", "0,0,0", "--delta", "2", "--samples", "5", *FAST)
        assert code == 0
        table = rows(out)
        assert len(table) == 5
        assert all(r["reached[1]"] == "true" for r in table)
        assert "Warning" not in err

    def test_cyl_ratio(self, capsys):
        code, _, err = run(capsys, "cyl", "--p0", "0,0,0", "--delta", "2", "--ratio", "1.5")
        assert code == 2
        assert "--ratio" in err

    def test_negative_base_point(self, capsys):
        code, out, _ = run(capsys, "lambda", "--z0", "-1,0", "--deltas", "2", "--c2", "4", *FAST)
        assert code == 0
        assert float(rows(out)[0]["lower[t]"]) == pytest.approx(4.0 / math.pi, rel=1e-11)
        code, out, _ = run(capsys, "dist", "--p0", "-1,-1,0", "--p1", "-1,-1,0.5", *FAST)
        assert code == 0
        assert float(rows(out)[0]["distance[z]"]) > 0.0

    def test_volume(self, capsys):
        code, out, _ = run(capsys, "volume", "--z0", "0,0", "--deltas", "2", "--c2", "4", *FAST)
        assert code == 0
        row = rows(out)[0]
        assert float(row["volume_lower[z^2*t]"]) == pytest.approx(16.0 / math.pi)
        assert float(row["volume_upper[z^2*t]"]) == pytest.approx(96.0)

    def test_ugs_check(self, capsys, tmp_path):
        table = tmp_path / "f.csv"
        code, out, _ = run(capsys, "ugs-check", "--window", "-1,-1,1,1", "--grid-n", "2", "--z0-samples", "1",
                           "--format", "json", "--table", str(table), *FAST)
        assert code == 0
        report = json.loads(out)
        assert report["verdict"] == "ugs_quadratic"
        assert report["exponent"] == pytest.approx(2.0, abs=1e-6)
        assert [r[0] for r in report["f_table"]] == [1.0, 2.0, 4.0, 8.0, 16.0]
        assert len(rows(table.read_text())) == 5


class TestHealthcheck:
    def test_single_check_as_json(self, capsys):
        code, out, _ = run(capsys, "healthcheck", "--json", "--check", "quadratic_lambda")
        assert code == 0
        results = json.loads(out)
        assert results["overall_status"] != "error"
        assert list(results["checks"]) == ["quadratic_lambda"]

    def test_unknown_check(self, capsys):
        code, _, err = run(capsys, "healthcheck", "--check", "nothing")
        assert code == 2
        assert "kind=InvalidArgument" in err

    @pytest.mark.slow
    def test_all_checks(self, capsys):
        code, out, _ = run(capsys, "healthcheck", "--json")
        assert code == 0
        assert json.loads(out)["summary"]["errors"] == 0
