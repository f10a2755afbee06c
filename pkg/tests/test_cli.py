import io as stdio
import json
import subprocess
import sys

import numpy as np
import pytest

from quncertainty import io
from quncertainty.cli import run
from quncertainty.quantum import random_density_matrix


def call(*argv):
    out = stdio.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    assert code == 0, text
    return json.loads(text)


def test_compare_example():
    assert call_json("compare", "--a", "0.5,0.5", "--b", "1,0")["order"] == "StrictlyBelow"
    assert call_json("compare", "--a", "[0.6,0.4,0]", "--b", "0.4,0.6")["order"] == "Equivalent"


def test_inf_and_sup():
    out = call_json("inf", "--vectors", "0.6,0.2,0.2;0.5,0.5")
    np.testing.assert_allclose(out["infimum"], [0.5, 0.3, 0.2])
    out = call_json("sup", "--vectors", "[[0.6,0.2,0.2],[0.5,0.5]]")
    np.testing.assert_allclose(out["supremum"], [0.6, 0.4, 0.0])


def test_reproduce_mub3():
    out = call_json("reproduce", "mub3", "--restarts", "16")
    rows = {r["quantity"]: r for r in out["rows"]}
    bound = [rows[f"sup bound[{k}]"]["computed"] for k in range(1, 9)]
    np.testing.assert_allclose(bound, [0.491, 0.238, 0.136, 0.136, 0, 0, 0, 0], atol=1e-3)
    entropic = next(r for r in out["rows"] if r["quantity"].startswith("entropic"))
    assert entropic["computed"] == pytest.approx(1.23, abs=0.01)
    for r in out["rows"]:
        if r["reference"] is not None:
            assert r["deviation"] == pytest.approx(abs(r["reference"] - r["computed"]), abs=1e-6)


@pytest.mark.parametrize("scenario", ["conjugate-small-s", "theorem2-demo", "mub2"])
def test_other_scenarios_run(scenario):
    out = call_json("reproduce", scenario, "--restarts", "8")
    assert out["scenario"] == scenario and out["rows"]


def test_conjugate_example():
    out = call_json("conjugate", "--s", "0.01")
    assert out["s"] == 0.01
    assert out["leading_joint_probability"] == pytest.approx(0.3025, abs=1e-4)
    assert out["asymptote"] == pytest.approx(0.30)
    assert sum(out["mu2"]) == pytest.approx(0.01, abs=1e-8)


def test_conjugate_from_bin_widths_and_samples(tmp_path):
    samples = tmp_path / "f.csv"
    out = call_json("conjugate", "--delta-x", "1", "--delta-p", str(2 * np.pi), "--samples", str(samples))
    assert out["s"] == pytest.approx(1.0)
    lines = samples.read_text().splitlines()
    assert lines[0] == "node,eigenfunction" and len(lines) == 129


def test_bound_preset_and_axes():
    out = call_json("bound", "--preset", "mub2", "--restarts", "8")
    np.testing.assert_allclose(out["bound"], [0.728553, 0.271447, 0, 0], atol=1e-6)
    assert out["common_eigenstate"] is None
    out = call_json("bound", "--axes", "xx", "--restarts", "8")
    np.testing.assert_allclose(out["bound"], [1, 0, 0, 0], atol=1e-9)
    assert out["common_eigenstate"]["dim"] == 2


def test_bound_infimum_pure_only():
    out = call_json("bound", "--preset", "mub2", "--kind", "inf", "--pure-only", "--restarts", "8")
    assert out["pure_only"] is True
    np.testing.assert_allclose(out["bound"], [0.25] * 4, atol=1e-6)


def test_entropic_bound():
    out = call_json("entropic-bound", "--preset", "mub2", "--restarts", "8")
    assert out["value"] == pytest.approx(0.584692, abs=1e-6)
    out = call_json("entropic-bound", "--preset", "xx", "--measure", "tsallis", "--q", "0.5", "--restarts", "8")
    assert out["value"] == pytest.approx(0, abs=1e-9)


def test_least_uncertain(tmp_path, rng):
    rho = random_density_matrix(3, rng)
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(io.density_to_json(rho)))
    out = call_json("least-uncertain", "--state", str(path))
    np.testing.assert_allclose(out["spectrum"], np.sort(np.linalg.eigvalsh(rho))[::-1], atol=1e-10)


def test_csv_output():
    code, text = call("compare", "--a", "0.5,0.5", "--b", "1,0", "--format", "csv")
    assert code == 0
    assert "order,StrictlyBelow" in text.splitlines()
    code, text = call("reproduce", "mub2", "--restarts", "8", "--format", "csv")
    assert text.splitlines()[0] == "quantity,reference,computed,deviation"


def test_exit_codes(tmp_path):
    assert call("compare", "--a", "0.5,0.6", "--b", "1,0")[0] == 1
    assert call("compare", "--a=-0.5,1.5", "--b", "1,0")[0] == 1
    assert call("conjugate", "--s", "-1")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}))
    assert call("least-uncertain", "--state", str(bad))[0] == 1
    assert call("frobnicate")[0] == 2
    assert call("compare", "--a", "0.5,0.5")[0] == 2
    assert call("compare", "--a", "x,y", "--b", "1")[0] == 2
    assert call("least-uncertain", "--state", str(tmp_path / "missing.json"))[0] == 2
    assert call("reproduce", "--format", "xml")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["compare", "--a", "0.5,0.5", "--b", "1,0"],
        ["inf", "--vectors", "0.6,0.2,0.2;0.5,0.5"],
        ["sup", "--vectors", "0.6,0.2,0.2;0.5,0.5"],
        ["bound", "--preset", "mub2", "--kind", "inf", "--restarts", "4", "--seed", "3"],
        ["entropic-bound", "--preset", "mub2", "--measure", "tsallis", "--q", "2", "--restarts", "4"],
        ["conjugate", "--s", "0.05", "--quad-order", "64"],
        ["reproduce", "mub2", "--restarts", "4"],
    ],
)
def test_input_round_trip(argv, tmp_path):
    code, first = call(*argv)
    assert code == 0
    path = tmp_path / "out.json"
    path.write_text(first)
    # a previous output is enough to reproduce it
    code, second = call(argv[0], "--input", str(path))
    assert code == 0
    assert json.loads(second) == json.loads(first)


def test_least_uncertain_round_trip(tmp_path):
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(io.density_to_json(np.diag([0.2, 0.8]))))
    first = call("least-uncertain", "--state", str(path))[1]
    (tmp_path / "out.json").write_text(first)
    assert call("least-uncertain", "--input", str(tmp_path / "out.json"))[1] == first


def test_measurements_file_round_trip(tmp_path):
    out = call_json("bound", "--preset", "mub2", "--restarts", "4")
    path = tmp_path / "ms.json"
    path.write_text(json.dumps(out["measurements"]))
    again = call_json("bound", "--measurements", str(path), "--restarts", "4")
    assert again["bound"] == out["bound"]


def test_determinism_byte_identical():
    argv = ["bound", "--preset", "mub3", "--restarts", "8", "--seed", "11"]
    assert call(*argv)[1] == call(*argv)[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quncertainty", "compare", "--a", "0.5,0.5", "--b", "1,0"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["order"] == "StrictlyBelow"
