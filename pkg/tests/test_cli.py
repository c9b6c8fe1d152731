import io
import json
import subprocess
import sys

import pytest

from conftest import CORPUS, CORPUS_FILES, CORPUS_PROFILE
from hcdfg_metrics import __version__
from hcdfg_metrics.cli import main
from hcdfg_metrics.errors import FormatError
from hcdfg_metrics.report import FunctionReport, Report, emit_report, to_json, to_table

TWO_FUNCS = """
int add2(int a, int b)
{
    return a + b;
}

void scale(int x[4], int y[4])
{
    int i;
    for (i = 0; i < 4; i++) {
        y[i] = x[i] * 3 + 1;
    }
}
"""


def run(*args):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in args], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def clean(tmp_path):
    p = tmp_path / "two.c"
    p.write_text(TWO_FUNCS)
    return p


@pytest.fixture
def pointer(tmp_path):
    p = tmp_path / "bad.c"
    p.write_text("int g(int *p)\n{\n    return 0;\n}\n")
    return p


def test_clean_file_table(clean):
    code, out, err = run(clean)
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0].split() == ["function", "gamma", "MOM", "COM", "class"]
    assert sorted(l.split()[0] for l in lines[1:]) == ["add2", "scale"]


def test_explicit_analyze_subcommand_matches_default(clean):
    assert run("analyze", clean) == run(clean)


def test_pointer_is_reported_with_position_and_partial_results(clean, pointer):
    code, out, err = run(clean, pointer)
    assert code == 1
    assert f"{pointer}:1:11" in err and "unsupported construct" in err and "pointer" in err
    assert "add2" in out and "scale" in out


def test_missing_trip_count_fails_only_that_function():
    code, out, err = run(CORPUS / "camera.c")
    assert code == 1
    assert "first_edge" in err and "trip count" in err
    assert "threshold" in out and "first_edge" not in out


def test_missing_input_file_is_an_analysis_failure(clean, tmp_path):
    code, out, err = run(clean, tmp_path / "absent.c")
    assert code == 1 and "absent.c" in err and "add2" in out


def test_projection_with_five_points(clean):
    code, out, _ = run(clean, "--projection", "scale", "--points", "5", "--format", "csv")
    assert code == 0
    curve = out.split("\n\n")[1].splitlines()
    assert curve[0] == "budget,alu,mul,memport,speedup,feasible"
    assert len(curve) == 6


def test_projection_of_unknown_function_is_a_usage_error(clean):
    code, _, err = run(clean, "--projection", "nope")
    assert code == 2 and "nope" in err


@pytest.mark.parametrize("args", [
    ["--format", "xml"],
    ["--jobs", "0"],
    ["--points", "1"],
    ["--profile", "/nonexistent.toml"],
])
def test_usage_and_config_errors(clean, args):
    assert run(clean, *args)[0] == 2


def test_malformed_thresholds(clean, tmp_path):
    p = tmp_path / "t.toml"
    p.write_text("gamma_low = 9\n")
    code, _, err = run(clean, "--thresholds", p)
    assert code == 2 and "gamma_low" in err


def test_bad_profile_probability(clean, tmp_path):
    p = tmp_path / "p.toml"
    p.write_text('[branch_probabilities]\n"x/if@1" = 2.0\n')
    assert run(clean, "--profile", p)[0] == 2


def test_no_arguments():
    assert run()[0] == 2


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_empty_input_gives_header_only(tmp_path):
    p = tmp_path / "empty.c"
    p.write_text("int table[4];\n")
    code, out, _ = run(p)
    assert code == 0
    assert [l.split() for l in out.splitlines()] == [["function", "gamma", "MOM", "COM", "class"]]


def test_json_report_round_trips(clean):
    code, out, _ = run(clean, "--format", "json", "--levels", "3")
    assert code == 0
    report = Report.from_dict(json.loads(out))
    assert to_json(report) == out
    assert report.config["levels"] == 3
    scale = next(f for f in report.functions if f.name == "scale")
    assert any(l.level == "CDFG" and "max_unroll" in l.metrics for l in scale.levels)


def test_levels_in_table_and_csv(clean):
    _, table, _ = run(clean, "--levels", "2")
    assert "unroll 4" in table
    _, csv_text, _ = run(clean, "--levels", "2", "--format", "csv")
    header, *rows = csv_text.splitlines()
    assert header.startswith("name,path,level,gamma")
    assert len(rows) > 2


def test_table_rounds_to_two_decimals():
    report = Report(__version__, {}, (FunctionReport("tg", "x.c", {"gamma": 43.879, "mom": 0.78, "com": 0.22},
                                                     "hw-candidate", "r", True),), ("tg",))
    row = to_table(report).splitlines()[1].split()
    assert row[:5] == ["tg", "43.88", "0.78", "0.22", "hw-candidate"]
    assert "[memory pressure]" in to_table(report)


def test_unknown_report_format():
    with pytest.raises(FormatError):
        emit_report(Report(__version__, {}, (), ()), "xml")


def test_output_file_and_dot_dir(clean, tmp_path):
    out_file, dots = tmp_path / "r.json", tmp_path / "dots"
    code, out, _ = run(clean, "--format", "json", "-o", out_file, "--dot-dir", dots)
    assert code == 0 and out == ""
    assert json.loads(out_file.read_text())["ranking"]
    assert sorted(p.name for p in dots.iterdir()) == ["add2.dot", "scale.dot"]


def test_graph_subcommand(clean, tmp_path):
    code, out, _ = run("graph", clean)
    assert code == 0 and out.count("digraph") == 2
    code, out, _ = run("graph", clean, "--format", "json", "--dot-dir", tmp_path / "g")
    assert code == 0 and len(list((tmp_path / "g").iterdir())) == 2


def test_project_subcommand(clean):
    code, out, _ = run("project", clean, "--function", "scale", "--points", "3")
    assert code == 0 and out.splitlines()[0] == "budget,alu,mul,memport,speedup,feasible"
    code, out, _ = run("project", clean, "--function", "scale", "--format", "gnuplot")
    assert code == 0 and "EOD" in out
    code, out, _ = run("project", clean, "--function", "scale", "--format", "json")
    assert code == 0 and json.loads(out)["function"] == "scale"
    assert run("project", clean, "--function", "missing")[0] == 2


def test_project_reports_missing_trip_count():
    code, _, err = run("project", CORPUS / "camera.c", "--function", "first_edge")
    assert code == 1 and "trip count" in err


def test_output_is_identical_across_runs_and_workers():
    args = CORPUS_FILES + ["--profile", CORPUS_PROFILE, "--levels", "2", "--format", "json"]
    first = run(*args)
    assert first[0] == 0
    for jobs in ("1", "3", "6"):
        assert run(*args, "--jobs", jobs) == first


def test_module_entry_point(clean):
    proc = subprocess.run([sys.executable, "-m", "hcdfg_metrics.cli", str(clean)], capture_output=True, text=True)
    assert proc.returncode == 0 and "scale" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "hcdfg_metrics.cli", str(clean), "--format", "bad"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
