import json

import numpy as np
import pytest

from tiecopula.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, InputError, load_csv, main
from tiecopula.copulas import CopulaSpec


@pytest.fixture
def csv_file(tmp_path):
    rng = np.random.default_rng(8)
    pairs = CopulaSpec.from_tau("gumbel", 0.5).sample(60, rng)
    path = tmp_path / "data.csv"
    lines = ["loss,expense"] + [f"{round(100 * a, 0)},{b:.6f}" for a, b in pairs]
    path.write_text("\n".join(lines) + "\n")
    return path


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if code == EXIT_OK else out.err)


def test_two_row_file(tmp_path):
    path = tmp_path / "two.csv"
    path.write_text("1.0,2.0\n1.0,3.0\n")
    ds = load_csv(path, min_rows=2)
    assert ds.n_rows == 2 and ds.distinct == (1, 2)
    with pytest.raises(InputError):
        load_csv(path)


def test_named_and_positional_columns_agree(csv_file):
    by_name = load_csv(csv_file, "expense", "loss", has_header=True)
    by_pos = load_csv(csv_file, 1, 0, has_header=True)
    np.testing.assert_array_equal(by_name.sample.x, by_pos.sample.x)
    np.testing.assert_array_equal(by_name.sample.y, by_pos.sample.y)
    assert by_name.columns == ("expense", "loss")


def test_bad_inputs(tmp_path, csv_file):
    with pytest.raises(InputError, match="no such file"):
        load_csv(tmp_path / "missing.csv")
    with pytest.raises(InputError, match="not found"):
        load_csv(csv_file, "premium", "loss", has_header=True)
    with pytest.raises(InputError, match="no header"):
        load_csv(csv_file, "loss", "expense")
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n" * 11 + "3,abc\n")
    with pytest.raises(InputError, match="row 12"):
        load_csv(bad)
    nan = tmp_path / "nan.csv"
    nan.write_text("1,2\n" * 11 + "nan,1\n")
    with pytest.raises(InputError, match="non-finite"):
        load_csv(nan)


def test_fit_report(capsys, csv_file):
    code, rep = _run(capsys, "fit", csv_file, "--header", "--family", "gumbel,clayton")
    assert code == EXIT_OK
    assert rep["schema"] == "tiecopula.report/1" and rep["dataset"]["n"] == 60
    fits = rep["result"]["fits"]
    assert set(fits) == {"gumbel", "clayton"}
    assert 0.2 < fits["gumbel"]["tau"] < 0.8
    assert -1 <= rep["result"]["kendall_tau_b"] <= 1


def test_reports_are_reproducible(capsys, tmp_path, csv_file):
    texts = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["ci", str(csv_file), "--header", "--B", "100", "--threads", "1",
                     "--seed", "5", "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        rep.pop("timing")
        texts.append(json.dumps(rep, sort_keys=True))
    assert texts[0] == texts[1]
    ci = json.loads(texts[0])["result"]["intervals"]["gumbel"]["ci_theta"]
    assert ci[0] < ci[1]


def test_gof_report(capsys, csv_file):
    code, rep = _run(capsys, "gof", csv_file, "--header", "--B", "100", "--threads", "1",
                     "--family", "gumbel", "--plus-one")
    assert code == EXIT_OK
    p = rep["result"]["tests"]["gumbel"]["p_value"]
    assert 1 / 101 <= p <= 1


def test_exit_codes(capsys, tmp_path, csv_file):
    code, err = _run(capsys, "fit", tmp_path / "missing.csv")
    assert code == EXIT_INPUT and "no such file" in err
    code, _ = _run(capsys, "fit", csv_file, "--header", "--family", "frank")
    assert code == EXIT_INPUT
    const = tmp_path / "const.csv"
    const.write_text("".join(f"1,{i}\n" for i in range(12)))
    code, _ = _run(capsys, "fit", const)
    assert code == EXIT_INPUT
    # strongly negative dependence pins a positive-only family to its bound
    neg = tmp_path / "neg.csv"
    neg.write_text("".join(f"{i},{-i}\n" for i in range(30)))
    code, err = _run(capsys, "fit", neg, "--family", "clayton")
    assert code == EXIT_NUMERICAL and "boundary" in err


def test_simulate(capsys, tmp_path):
    scen = tmp_path / "s.ini"
    scen.write_text("family = clayton\ntau = 0.5\nn = 30\nreplicates = 3\nm = 3\n")
    records = tmp_path / "rec.csv"
    code, rep = _run(capsys, "simulate", "--scenario", scen, "--threads", "1", "--records", records)
    assert code == EXIT_OK
    assert rep["result"]["reports"][0]["study"] == "point"
    assert records.read_text().startswith("replicate,")
    scen.write_text("family = clayton\n")
    code, _ = _run(capsys, "simulate", "--scenario", scen)
    assert code == EXIT_INPUT
