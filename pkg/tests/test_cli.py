import csv
import io
import json
import math

import pytest

from qmonogamy.cli import main
from qmonogamy.states import basis_state, save_state

SQRT2 = math.sqrt(2)


@pytest.fixture(autouse=True)
def pinned_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    monkeypatch.setenv("QMONO_WORKERS", "1")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def data_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_eval_w3_eof(capsys):
    code, out, _ = run(capsys, "eval", "w3", "--measures", "eof")
    doc = json.loads(out)
    assert code == 0
    assert doc["measures"]["eof"]["focus_split"] == pytest.approx(0.918296, abs=1e-6)
    assert doc["manifest"]["seed"] == 0
    assert {r["theorem_id"] for r in doc["results"]} >= {"t1", "t2", "t4", "ckw", "dual_ckw"}


def test_eval_ghz_tangle(capsys):
    code, out, _ = run(capsys, "eval", "ghz3", "--measures", "tangle")
    assert code == 0
    assert json.loads(out)["measures"]["tangle"] == pytest.approx(1, abs=1e-12)


def test_eval_product_file(tmp_path, capsys):
    path = tmp_path / "prod.json"
    save_state(basis_state("010"), path)
    code, out, _ = run(capsys, "eval", str(path))
    assert code == 0
    doc = json.loads(out)

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from walk(v)
        elif isinstance(x, list):
            for v in x:
                yield from walk(v)
        elif isinstance(x, float):
            yield x

    assert all(abs(v) < 1e-12 for v in walk(doc["measures"]))


def test_eval_optional_theorems(capsys):
    code, out, _ = run(
        capsys, "eval", "ghz_minus_w", "--theorems", "t5,t6", "--alpha", "sqrt2,3", "--roof-restarts", "2"
    )
    assert code == 0
    ids = [r["theorem_id"] for r in json.loads(out)["results"]]
    assert "t5" in ids and "t6.ii" in ids and "t6.i.displayed" in ids


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "no-such-state"],
        ["eval", "w3", "--focus", "5"],
        ["eval", "w3", "--measures", "negativity"],
        ["fuzz", "--count", "0"],
        ["fuzz", "--qubits", "7"],
        ["fuzz", "--theorems", "t9"],
        ["figure", "--which", "eoa-bound", "--alpha-min", "1"],
        ["classify", "w3", "--alpha-grid", "3,4"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    assert main(argv) == 1


def test_schema_error_mentions_field(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n_qubits": 2, "amplitudes": [[1, 0]]}')
    code, _, err = run(capsys, "eval", str(path))
    assert code == 1
    assert "amplitudes" in err and str(path) in err


def test_fuzz_byte_identical(tmp_path, capsys):
    out = tmp_path / "run.csv"
    base = ["fuzz", "--qubits", "3", "--count", "30", "--seed", "7", "--theorems", "t1,t2,ckw"]
    assert main(base + ["--out", str(out)]) == 0
    first = out.read_bytes()
    assert main(base + ["--out", str(out)]) == 0
    assert out.read_bytes() == first
    # a parallel run differs only in the manifest's record of argv
    assert main(base + ["--out", str(out), "--workers", "2"]) == 0
    assert data_rows(out.read_text()) == data_rows(first.decode())
    rows = data_rows(first.decode())
    assert min(float(r["margin"]) for r in rows if r["theorem"] == "t1") >= -1e-9
    out = capsys.readouterr().out
    assert "t1: checked=30" in out


def test_fuzz_stdout_csv(capsys):
    code, out, err = run(capsys, "fuzz", "--count", "5", "--seed", "1")
    assert code == 0
    assert out.startswith("#")
    assert "min_margin" in err
    assert len(data_rows(out)) == 5 * 4


def test_figure_w_residuals(capsys):
    code, out, _ = run(capsys, "figure", "--which", "w-residuals")
    rows = {float(r["alpha"]): r for r in data_rows(out)}
    assert code == 0
    assert float(rows[2.0]["tau_concurrence"]) == pytest.approx(0, abs=1e-12)
    assert float(rows[6.0]["tau_concurrence"]) == pytest.approx(64 / 27 * (8 / 27 - 2 / 27), abs=1e-10)
    assert rows[min(rows)]["tau_concurrence"] == ""
    assert min(rows) == pytest.approx(SQRT2)


def test_figure_eoa_bound(capsys):
    code, out, _ = run(capsys, "figure", "--which", "eoa-bound")
    rows = data_rows(out)
    assert code == 0 and len(rows) == 101
    assert float(rows[0]["alpha"]) == pytest.approx(SQRT2)
    assert float(rows[0]["eoa_lower_bound"]) == pytest.approx(0.623, abs=2e-3)
    vals = [float(r["eoa_lower_bound"]) for r in rows]
    assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))


def test_figure_out_file_is_reproducible(tmp_path):
    out = tmp_path / "fig.csv"
    argv = ["figure", "--which", "w-residuals", "--out", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "w3")
    assert code == 0 and out.startswith("label: genuine (detected at alpha>2)")
    code, out, _ = run(capsys, "classify", "ghz3", "--json")
    assert json.loads(out)["label"] == "genuine"


def test_classify_product_file(tmp_path, capsys):
    path = tmp_path / "p.json"
    save_state(basis_state("000"), path)
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0 and out.startswith("label: fully_product")
