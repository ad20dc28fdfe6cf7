import json

import numpy as np
import pytest

from centralspin.cli import ValidationError, fmt, main, parse_grid, parse_list


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    header = lines[1].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[2:]]
    return meta, header, rows


def test_parse_grid_inclusive():
    np.testing.assert_allclose(parse_grid("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_allclose(parse_grid("2.5"), [2.5])


@pytest.mark.parametrize("text", ["0:1:1", "1:0:5", "0:1", "a:b:c", "0:1:2.5", "1:1:3"])
def test_parse_grid_rejects(text):
    with pytest.raises(ValidationError):
        parse_grid(text)


def test_parse_list():
    assert parse_list("750,1000", int) == [750, 1000]
    assert parse_list("1e3,1e4") == [1e3, 1e4]
    for bad in ("", ",", "1.5,2"):
        with pytest.raises(ValidationError):
            parse_list(bad, int)


def test_fmt():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(None) == "" and fmt(float("nan")) == ""
    assert fmt(np.int64(7)) == "7"


def test_ground_csv(capsys):
    code, out, _ = run(capsys, "ground", "--N", "20", "--g", "0.5:2.5:5", "--eta", "1e4")
    assert code == 0
    meta, header, rows = read_csv(out)
    assert meta["command"] == "ground" and meta["N"] == 20
    assert header[:3] == ["g_tilde", "xi_s2_numeric", "xi_r2_numeric"]
    assert len(rows) == 5
    # isotropic normal phase: the vacuum is unsqueezed
    assert float(rows[0]["xi_s2_numeric"]) == pytest.approx(1.0)
    for r in rows:
        assert float(r["xi_s2_numeric"]) == pytest.approx(float(r["xi_s2_analytic"]), rel=0.05)


def test_ground_json_matches_csv(capsys):
    argv = ["ground", "--N", "12", "--g", "0.5:1.5:3", "--lambda", "0.5", "--model", "lmg"]
    _, csv_out, _ = run(capsys, *argv)
    code, js, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    body = json.loads(js)
    _, header, rows = read_csv(csv_out)
    assert body["columns"] == header
    for jrow, crow in zip(body["rows"], rows):
        for v, c in zip(jrow, header):
            if v is not None:
                assert float(crow[c]) == pytest.approx(v, rel=1e-11)


def test_output_is_deterministic(capsys, tmp_path):
    outs = []
    for threads in ("1", "4", "4"):
        path = tmp_path / f"run{len(outs)}.csv"
        assert main(["qfi", "--N", "30,40", "--g", "0.7:1.5:9", "--model", "lmg",
                     "--threads", threads, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_dynamics_summary(capsys):
    code, out, _ = run(capsys, "dynamics", "--N", "50", "--method", "analytic", "--format", "json")
    assert code == 0
    body = json.loads(out)
    s = body["summary"]
    assert s["xi_min2"] < 1 and s["t_min"] > 0
    assert s["predicted_t_min"] > 0
    assert body["metadata"]["points"] == len(body["rows"]) == 2000


@pytest.mark.parametrize("argv", [
    ["dynamics", "--N", "10", "--method", "analytic", "--lambda", "0.3"],
    ["dynamics", "--N", "10", "--t", "0:1:1"],
    ["dynamics", "--N", "10", "--method", "analytic", "--model", "lmg"],
    ["qfi", "--N", ","],
    ["qfi", "--N", "0,10,20"],
    ["ground", "--N", "-3", "--g", "0:1:3"],
    ["ground", "--N", "10", "--g", "0:1:3", "--eta", "-5"],
    ["ground", "--N", "10", "--g", "0:1:3", "--threads", "0"],
    ["swcheck", "--N", "500"],
    ["swcheck", "--N", "10", "--eta", "1e3,abc"],
    ["bogus"],
    ["ground", "--N", "10"],
])
def test_invalid_input_exit_code(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_numerical_failure_exit_code(capsys):
    # the QFI maximum lies outside this grid
    code, out, err = run(capsys, "qfi", "--N", "40", "--g", "0.3:0.6:4", "--model", "lmg")
    assert code == 3
    assert out == "" and "numerical failure" in err


def test_qfi_exponent_summary(capsys):
    code, out, _ = run(capsys, "qfi", "--N", "40,80,160", "--g", "0.8:1.4:13", "--model", "lmg",
                       "--exponent", "--format", "json")
    assert code == 0
    s = json.loads(out)["summary"]
    assert len(s["peaks"]) == 3
    assert s["scaling_fit"]["exponent"] > 0
    assert len(s["window_exponents"]) == 2


def test_swcheck_rows(capsys):
    code, out, _ = run(capsys, "swcheck", "--N", "10", "--eta", "1e2,1e3,1e4")
    assert code == 0
    meta, header, rows = read_csv(out)
    assert header == ["eta", "residual_offdiag", "block_error"]
    errs = [float(r["block_error"]) for r in rows]
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("argv", [
    ["ground", "--N", "10", "--g", "0.5:1.5:3"],
    ["swcheck", "--N", "6", "--eta", "1e2,1e3"],
])
def test_figure_written(capsys, tmp_path, argv):
    fig = tmp_path / "fig.png"
    assert run(capsys, *argv, "--figure", str(fig))[0] == 0
    assert fig.stat().st_size > 0
