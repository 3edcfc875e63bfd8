import io
import json
import subprocess
import sys

import pytest

from wernerwolf.cli import RunConfig, _parser, main, run


def invoke(argv, payload=None):
    """Run ``main`` in-process; returns (code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    if payload is not None:
        # hand a parsed payload straight to run()
        a = _parser().parse_args(argv)
        cfg = RunConfig(a.command, a.n, a.seed, a.samples or 1000, a.restarts, a.tol, a.workers, a.out,
                        a.format, a.grid)
        return run(cfg, payload, out, err), out.getvalue(), err.getvalue()
    old = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        code = main(argv)
    finally:
        sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


CHSH = {"schema": 1, "n": 2, "signs": [1, 1, 1, -1]}


def test_transform_constant():
    code, out, _ = invoke(["transform", "--hex", "ff", "--n", "3"])
    assert code == 0
    art = json.loads(out)
    assert art["numerators"] == [8, 0, 0, 0, 0, 0, 0, 0]
    assert art["denominator"] == 8
    assert art["beta"][0] == 1.0


def test_transform_chsh_payload():
    code, out, err = invoke(["transform"], CHSH)
    assert code == 0
    assert json.loads(out)["beta"] == [0.5, 0.5, 0.5, -0.5]
    assert "sum_beta2=1" in err


def test_optimize_chsh():
    code, out, _ = invoke(["optimize", "--hex", "7", "--n", "2"])
    assert code == 0
    art = json.loads(out)
    assert art["best_norm"] == pytest.approx(2**0.5, abs=1e-12)
    assert art["f_hex"] == "7"


def test_spectrum_needs_angles():
    assert invoke(["spectrum"], CHSH)[0] == 2
    code, out, _ = invoke(["spectrum"], {"f": CHSH, "angles": [[0, 1.5707963267948966], [-0.7853981633974483,
                                                                                        0.7853981633974483]]})
    assert code == 0
    assert json.loads(out)["norm"] == pytest.approx(2**0.5, abs=1e-12)


def test_oracle_check():
    code, out, _ = invoke(["oracle-check", "--hex", "7", "--n", "2", "--samples", "2000", "--seed", "1"])
    assert code == 0
    art = json.loads(out)
    assert art["passed"] and art["is_witness"]
    assert art["separable_max_expectation"] <= 1 + 1e-9


def test_polytope_check():
    r = 2**-0.5
    code, out, err = invoke(["polytope-check"], {"q": [r, r, r, -r]})
    assert code == 0 and json.loads(out)["violated_facet"] == "7" and err.strip() == "7"
    code, out, err = invoke(["polytope-check"], {"q": [0, 0, 0, 0]})
    assert json.loads(out)["inside"] and err.strip() == "inside"
    assert invoke(["polytope-check"], {"q": ["a", 0, 0, 0]})[0] == 2
    assert invoke(["polytope-check"], {"p": []})[0] == 2


def test_mk_n5():
    code, out, _ = invoke(["mk", "--n", "5"])
    assert code == 0
    art = json.loads(out)
    assert art["certified_norm"] == pytest.approx(4.0, abs=1e-6)
    assert art["f_hex"] == "e8818117"


def test_sample_csv_header(tmp_path):
    dest = tmp_path / "s.csv"
    code, out, _ = invoke(["sample", "--n", "3", "--seed", "0", "--samples", "4", "--restarts", "4",
                           "--format", "csv", "--out", str(dest)])
    assert code == 0
    assert dest.read_text().splitlines()[0] == "sample_index,f_hex,norm,sweeps,restarts_used,converged"
    assert "median=" in out


def test_sample_json_with_grid():
    code, out, _ = invoke(["sample", "--n", "2", "--seed", "3", "--samples", "5", "--restarts", "4",
                           "--grid", "1.2"])
    art = json.loads(out)
    assert code == 0 and art["schema"] == 1
    assert len(art["samples"]) == 5 and len(art["exceedance"]) == 1


def test_prop2_and_szk():
    code, out, _ = invoke(["prop2", "--n", "6", "--seed", "0", "--samples", "2000"])
    assert code == 0
    assert [r["bound"] for r in json.loads(out)["reports"]] == [0.25, 1 / 9, 0.04]
    code, out, _ = invoke(["szk", "--n", "3", "--seed", "0", "--samples", "5", "--restarts", "4"])
    assert code == 0
    assert "note" in json.loads(out)


@pytest.mark.parametrize("argv", [
    ["sample", "--n", "3"],  # missing seed
    ["prop2", "--seed", "1"],  # missing n
    ["optimize"],  # no payload
    ["transform", "--hex", "7"],  # hex without n
    ["transform", "--hex", "1ff", "--n", "3"],  # too many bits
    ["optimize", "--hex", "zz", "--n", "2"],
    ["transform", "--format", "csv", "--hex", "7", "--n", "2"],
    ["sample", "--n", "2", "--seed", "-1"],
    ["sample", "--n", "2", "--seed", "1", "--samples", "0"],
    ["transform", "--input", "/nonexistent/file.json"],
])
def test_input_errors(argv):
    code, out, err = invoke(argv)
    assert code == 2
    assert out == "" and err.startswith("error:")


def test_bad_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert invoke(["transform", "--input", str(p)])[0] == 2
    p.write_text("[1, 2]")
    assert invoke(["transform", "--input", str(p)])[0] == 2


def test_budget_exit():
    assert invoke(["oracle-check", "--hex", "f" * 1024, "--n", "12", "--seed", "0"])[0] == 4


def test_numeric_exit(monkeypatch):
    import wernerwolf.oracle as oracle_mod
    from wernerwolf.errors import NumericalFailure

    def broken(*a, **k):
        raise NumericalFailure("forced")

    monkeypatch.setattr(oracle_mod, "eigen_magnitudes", broken)
    assert invoke(["oracle-check", "--hex", "7", "--n", "2", "--seed", "0", "--samples", "10"])[0] == 3


def test_byte_identical_repeats_and_workers(tmp_path):
    outputs = []
    for workers in ("1", "2", "1"):
        dest = tmp_path / f"w{workers}_{len(outputs)}.json"
        code, _, _ = invoke(["sample", "--n", "4", "--seed", "11", "--samples", "8", "--restarts", "4",
                             "--workers", workers, "--out", str(dest)])
        assert code == 0
        outputs.append(dest.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_console_module():
    proc = subprocess.run([sys.executable, "-m", "wernerwolf", "transform", "--hex", "7", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["f_hex"] == "7"


def test_stdin_input():
    proc = subprocess.run([sys.executable, "-m", "wernerwolf", "transform", "--input", "-"],
                          input=json.dumps(CHSH), capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["numerators"] == [2, 2, 2, -2]
