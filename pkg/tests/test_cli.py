import json

import numpy as np
import pytest

from zdip import load_default_table, load_table, save_table
from zdip.cli import main, read_values


@pytest.fixture
def table_file(small_table, tmp_path):
    path = tmp_path / "table.csv"
    save_table(small_table, path)
    return str(path)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_read_values_skips_blank_and_comments(tmp_path):
    path = _write(tmp_path, "x.txt", "# header\n1.5\n\n  2\n# note\n-3e-1\n")
    assert read_values(path).tolist() == [1.5, 2.0, -0.3]


def test_read_values_column(tmp_path):
    path = _write(tmp_path, "x.csv", "a;1\nb;2.5\n")
    assert read_values(path, column=1, delimiter=";").tolist() == [1.0, 2.5]


def test_test_command_json(tmp_path, table_file, capsys):
    x = np.random.default_rng(0).normal(size=150)
    path = _write(tmp_path, "x.txt", "\n".join(str(float(v)) for v in x))
    assert main(["test", path, "--table", table_file, "--pvalue", "199", "--seed", "4"]) == 0
    out, err = capsys.readouterr()
    report = json.loads(out)
    for key in ("n", "dip", "mu", "sigma", "z", "p_value", "threshold", "is_multimodal", "extrapolated", "iterations", "per_iteration_z"):
        assert key in report
    assert report["n"] == 150 and 0 < report["p_value"] <= 1
    assert report["manifest"]["parameters"]["seed"] == 4
    assert "multimodal" in err


def test_test_command_downsample(tmp_path, table_file, capsys):
    x = np.random.default_rng(1).random(1000)
    path = _write(tmp_path, "x.txt", "\n".join(str(float(v)) for v in x))
    assert main(["test", path, "--table", table_file, "--downsample", "50", "5", "--seed", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["iterations"] == 5 and report["subsample_size"] == 50


def test_random_seed_is_printed(tmp_path, table_file, capsys):
    path = _write(tmp_path, "x.txt", "\n".join(map(str, range(30))))
    assert main(["test", path, "--table", table_file, "--pvalue", "50"]) == 0
    assert "using random seed" in capsys.readouterr().err


def test_parse_error_reports_line(tmp_path, table_file, capsys):
    path = _write(tmp_path, "bad.txt", "1\n2\nthree\n4\n")
    assert main(["test", path, "--table", table_file]) == 2
    assert "line 3" in capsys.readouterr().err


def test_too_small_exit_code(tmp_path, table_file):
    assert main(["test", _write(tmp_path, "x.txt", "1\n2\n3\n"), "--table", table_file]) == 2


def test_bad_table_exit_code(tmp_path):
    data = _write(tmp_path, "x.txt", "\n".join(map(str, range(30))))
    table = _write(tmp_path, "t.csv", "# zdip-null-table v1\nn,mu,sigma\n")
    assert main(["test", data, "--table", table]) == 3


def test_unknown_flag_fails_fast(capsys):
    with pytest.raises(SystemExit) as err:
        main(["test", "x.txt", "--no-such-flag"])
    assert err.value.code == 2


def test_tablegen_reproduces_bundled_rows(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["tablegen", "--grid", "4,5,6,50", "--replicates", "9999", "--seed", "1985", "-o", str(out), "-q"]) == 0
    bundled = {e.n: e for e in load_default_table().entries}
    for e in load_table(out).entries:
        assert e == bundled[e.n]
    manifest = json.loads((tmp_path / "t.csv.manifest.json").read_text())
    assert manifest["command"] == "tablegen" and manifest["parameters"]["seed"] == 1985


def test_tablegen_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["tablegen", "--grid", "4,10,20", "--replicates", "100", "--seed", "5", "-o", str(p), "-q"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_command(tmp_path):
    out = tmp_path / "s.txt"
    assert main(["sample", "--preset", "trimodal", "--n", "40", "--seed", "1", "-o", str(out)]) == 0
    assert len(read_values(out)) == 40


def test_calibrate_command_deterministic(tmp_path, table_file):
    outs = []
    for name in ("a.csv", "b.csv"):
        p = tmp_path / name
        args = ["calibrate", "--table", table_file, "--n", "20,50", "--ensemble", "200", "--bootstrap", "100", "--seed", "3", "-o", str(p)]
        assert main(args) == 0
        outs.append(p.read_text())
    assert outs[0] == outs[1]
    assert outs[0].splitlines()[0] == "n,z_at_p05,ci_low,ci_high,ensemble_size,bootstrap_rounds,seed"
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert "universal_cutoff" in manifest["results"]


def test_calibrate_requires_seed(table_file):
    with pytest.raises(SystemExit):
        main(["calibrate", "--table", table_file])


def test_validate_synthetic_layout(tmp_path, table_file):
    out = tmp_path / "v.csv"
    assert main(["validate-synthetic", "--table", table_file, "--replications", "5", "--p-replicates", "49", "--seed", "1", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("configuration,preset,n,mean_z")
    assert len(lines) == 1 + 23
    assert lines[1].startswith("Unimodal,unimodal,50,")


def test_stability_and_scaling(tmp_path, table_file):
    s = tmp_path / "s.csv"
    assert main(["stability", "--table", table_file, "--n-min", "150", "--n-max", "400", "--count", "3", "--iterations", "3", "--seed", "1", "-o", str(s)]) == 0
    assert len(s.read_text().splitlines()) == 1 + 3 * 3
    c = tmp_path / "c.csv"
    assert main(["scaling", "--table", table_file, "--n", "50,100,200", "--replications", "5", "--seed", "1", "-o", str(c)]) == 0
    fit = json.loads((tmp_path / "c.csv.manifest.json").read_text())["results"]["fit"]
    assert fit["ok"] and fit["alpha"] > 0


def test_null_figure(tmp_path, table_file):
    out = tmp_path / "fig"
    assert main(["null-figure", "--table", table_file, "--n", "20,50", "--size", "100", "--p-replicates", "99", "--seed", "1", "--output-dir", str(out)]) == 0
    assert (out / "null_z_density.csv").exists() and (out / "null_scatter.csv").exists()
    results = json.loads((out / "null_figure.manifest.json").read_text())["results"]
    assert results["spearman_z_p"] < 0


def test_large_sample(tmp_path, table_file, capsys):
    assert main(["large-sample", "--table", table_file, "--sizes", "300,3000", "--seed", "1"]) == 0
    res = json.loads(capsys.readouterr().out)["results"]
    assert [r["n"] for r in res] == [300, 3000]
    assert res[1]["plain"]["extrapolated"]
