import io
import json
import subprocess
import sys

import pytest

from diagmult import Group, GroupSpec, build_layer, export_weights
from diagmult.bench import strip_timing
from diagmult.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(map(str, argv)), stdout=buf)
    return code, json.loads(buf.getvalue())


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def files(tmp_path):
    return {
        "id11": write(tmp_path, "id11.json", {"l": 1, "k": 1, "blocks": [[1, 2]]}),
        "v": write(tmp_path, "v.json", {"n": 2, "order": 1, "coeffs": [3, 7]}),
        "capcup": write(tmp_path, "capcup.json", {"l": 2, "k": 2, "blocks": [[1, 2], [3, 4]]}),
        "v4": write(tmp_path, "v4.json", {"n": 2, "order": 2, "coeffs": [1, 2, 3, 4]}),
    }


def test_mult_identity(files):
    code, out = call("mult", "--group", "O", "--n", 2, "--diagram", files["id11"], "--vector", files["v"])
    assert code == 0
    assert out == {"n": 2, "order": 1, "coeffs": [3, 7]}


def test_mult_with_oracle_and_counts(files):
    code, out = call(
        "mult", "--group", "O", "--n", 2, "--diagram", files["capcup"], "--vector", files["v4"],
        "--check-oracle", "--count-ops",
    )
    assert code == 0
    assert out["coeffs"] == [5, 0, 0, 5]
    assert out["oracle_match"] is True
    assert out["ops"]["total"]["additions"] == 1


def test_mult_weighted_list(tmp_path, files):
    diagrams = write(tmp_path, "all.json", [{"l": 2, "k": 2, "blocks": b} for b in ([[1, 2], [3, 4]], [[1, 3], [2, 4]])])
    weights = write(tmp_path, "w.json", [2, -1])
    code, out = call(
        "mult", "--group", "O", "--n", 2, "--diagram", diagrams, "--vector", files["v4"],
        "--weights", weights, "--check-oracle",
    )
    assert code == 0
    assert out["coeffs"] == [9, -2, -3, 6]
    assert out["oracle_match"] is True


def test_mult_with_layer_weight_file(tmp_path, files):
    layer = build_layer(GroupSpec(Group.ORTHOGONAL, 2), 1, 1, [4])
    weights = tmp_path / "layer.json"
    export_weights(layer, weights)
    code, out = call("mult", "--group", "O", "--n", 2, "--diagram", files["id11"], "--vector", files["v"], "--weights", weights)
    assert code == 0 and out["coeffs"] == [12, 28]


def test_enumerate(files):
    code, out = call("enumerate", "--group", "O", "--k", 2, "--l", 2)
    assert code == 0
    assert out["count"] == 3
    assert [d["blocks"] for d in out["diagrams"]] == [[[1, 2], [3, 4]], [[1, 3], [2, 4]], [[1, 4], [2, 3]]]


def test_enumerate_needs_n_for_so():
    code, out = call("enumerate", "--group", "SO", "--k", 2, "--l", 2)
    assert code != 0 and out["error"]["code"] == "BadArguments"


def test_factor(tmp_path):
    beta = write(tmp_path, "beta.json", {"l": 5, "k": 5, "blocks": [[2, 4], [6, 7], [5, 8], [3, 9], [1, 10]]})
    code, out = call("factor", "--group", "O", "--n", 3, "--diagram", beta)
    assert code == 0
    assert out["sigma_k"] == [5, 4, 3, 1, 2]
    assert out["sigma_l"] == [3, 1, 4, 2, 5]
    assert [a["kind"] for a in out["atoms"]] == ["top", "cross", "bottom"]


def test_oracle_inline_and_csv(tmp_path):
    cup = write(tmp_path, "cup.json", {"l": 0, "k": 2, "blocks": [[1, 2]]})
    code, out = call("oracle", "--group", "Sp", "--n", 2, "--diagram", cup)
    assert code == 0 and out["entries"] == [[0, 1, -1, 0]]
    csv_path = tmp_path / "m.csv"
    code, out = call("oracle", "--group", "Sp", "--n", 2, "--diagram", cup, "--out-csv", csv_path)
    assert code == 0 and out["rows"] == 1 and out["cols"] == 4
    assert csv_path.read_text().strip() == "0,1,-1,0"


def test_bench_report(tmp_path):
    args = ("bench", "--group", "O", "--k", 3, "--l", 3, "--n-list", "2,4,6,8", "--seed", 7, "--check-oracle", "--repeats", 1)
    code, first = call(*args)
    assert code == 0
    assert first["all_oracle_match"] is True
    assert all(c["oracle_match"] for c in first["cases"])
    slopes = {s["diagram"]: s for s in first["slopes"]}
    assert slopes
    for s in slopes.values():
        assert abs(s["naive_multiplications"] - 6) < 1e-9
    _, second = call(*args)
    assert json.dumps(strip_timing(first), sort_keys=True) == json.dumps(strip_timing(second), sort_keys=True)


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("mult", "--group", "O", "--diagram", "missing.json", "--vector", "missing.json"), "FileNotFound"),
        (("mult", "--group", "U", "--n", 2, "--diagram", "x", "--vector", "y"), "BadArguments"),
        (("frobnicate",), "BadArguments"),
        (("bench", "--group", "O", "--k", 1, "--l", 1, "--n-list", "a,b"), "BadArguments"),
    ],
)
def test_errors_are_structured(argv, expected):
    code, out = call(*argv)
    assert code != 0
    assert out["error"]["code"] == expected


def test_module_errors_keep_their_code(tmp_path, files):
    odd = write(tmp_path, "odd.json", {"l": 1, "k": 1, "blocks": [[1], [2]]})
    code, out = call("mult", "--group", "O", "--n", 2, "--diagram", odd, "--vector", files["v"])
    assert code != 0 and out["error"]["code"] == "KindMismatch"
    code, out = call("enumerate", "--group", "Sp", "--n", 3, "--k", 1, "--l", 1)
    assert out["error"]["code"] == "ParityError"


def test_console_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "diagmult.cli", "mult", "--group", "O", "--n", "2",
         "--diagram", str(files["id11"]), "--vector", str(files["v"])],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coeffs"] == [3, 7]
