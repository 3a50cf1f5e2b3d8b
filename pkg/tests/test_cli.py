import json
import pathlib
import subprocess
import sys

import pytest

from corpus import SS_TORIC, SSS, two_maxima
from ssposets.cli import main
from ssposets.layers import Arrangement


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_layers_json_and_dot(tmp_path, capsys):
    src = write(tmp_path, "ss_toric.json", SS_TORIC.to_json())
    code, out, _ = run(capsys, "layers", src)
    assert code == 0
    data = json.loads(out)
    assert len(data["elements"]) == 6
    code, out, _ = run(capsys, "layers", src, "--dot")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 8


def test_layers_to_file(tmp_path, capsys):
    src = write(tmp_path, "ss_toric.json", SS_TORIC.to_json())
    dest = tmp_path / "out.json"
    assert run(capsys, "layers", src, "--out", str(dest))[1] == ""
    assert len(json.loads(dest.read_text())["elements"]) == 6


def test_ssolve_on_poset_file(tmp_path, capsys):
    src = write(tmp_path, "two_maxima.json", two_maxima().to_json())
    code, out, _ = run(capsys, "ssolve", src)
    cert = json.loads(out)
    assert code == 0 and cert["strict"] is False
    assert cert["labels"][1] == ["1"]


def test_ssolve_reports_failure(tmp_path, capsys):
    generic = Arrangement.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], d=0, v=2)
    src = write(tmp_path, "generic.json", generic.to_json())
    code, out, _ = run(capsys, "ssolve", src)
    assert code == 0 and json.loads(out)["supersolvable"] is False


def test_ssolve_then_verify(tmp_path, capsys):
    src = write(tmp_path, "sss.json", SSS.to_json())
    _, out, _ = run(capsys, "ssolve", src)
    cert = write(tmp_path, "cert.json", out)
    code, out, _ = run(capsys, "verify", cert, src)
    assert code == 0 and out.startswith("ok")
    data = json.loads((tmp_path / "cert.json").read_text())
    data["chain"][1], data["chain"][2] = data["chain"][2], data["chain"][1]
    bad = write(tmp_path, "bad.json", data)
    code, out, _ = run(capsys, "verify", bad, src)
    assert code == 1 and out.startswith("invalid")
    data = json.loads((tmp_path / "cert.json").read_text())
    data["a"] = [1, 3]
    code, _, _ = run(capsys, "verify", write(tmp_path, "bad_a.json", data), src)
    assert code == 1


def test_invariants_sss(tmp_path, capsys):
    src = write(tmp_path, "sss.json", SSS.to_json())
    code, out, _ = run(capsys, "invariants", src, "--jmax", "3")
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["chi"] == "t^2 - 4t + 4"
    assert lines["a"] == "[2, 2]"
    assert lines["poincare_coefficients"] == "[1, 6, 9]"
    assert lines["lcs"] == "[6, 6, 16]"


def test_invariants_without_poincare(tmp_path, capsys):
    src = write(tmp_path, "v0.json", Arrangement.of(SSS.vectors, d=2, v=0).to_json())
    code, out, _ = run(capsys, "invariants", src)
    assert code == 0 and "poincare: unavailable (requires v > 0)" in out
    code, _, err = run(capsys, "invariants", src, "--jmax", "2")
    assert code == 2 and "hypothesis" in err


def test_invariants_ss_toric_not_strict(tmp_path, capsys):
    src = write(tmp_path, "ss_toric.json", SS_TORIC.to_json())
    code, out, _ = run(capsys, "invariants", src)
    assert code == 0 and "chi: t^2 - 3t + 3" in out and "a: [1, 2]" in out
    assert run(capsys, "invariants", src, "--jmax", "2")[0] == 2


def test_input_errors(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", "{not json")
    code, _, err = run(capsys, "layers", bad)
    assert code == 2 and "malformed JSON" in err
    code, _, err = run(capsys, "layers", str(tmp_path / "missing.json"))
    assert code == 2
    other = write(tmp_path, "other.json", {"format": 1, "stuff": []})
    assert run(capsys, "ssolve", other)[0] == 2
    future = write(tmp_path, "future.json", {"format": 2, "vectors": [[1]]})
    assert run(capsys, "layers", future)[0] == 2
    zero = write(tmp_path, "zero.json", {"vectors": [[0, 0]]})
    assert run(capsys, "layers", zero)[0] == 2
    good = write(tmp_path, "ss_toric.json", SS_TORIC.to_json())
    assert run(capsys, "--workers", "0", "layers", good)[0] == 2


@pytest.mark.parametrize("argv,key,size", [
    (["graphic", "--n", "4"], "vectors", 6),
    (["graphic", "--n", "4", "--edges", "0-1,1-2,2-3"], "vectors", 3),
    (["graphic", "--n", "4", "--shape", "cycle", "--d", "0", "--v", "2"], "vectors", 4),
    (["dowling", "--n", "2", "--group-order", "2", "--s", "1"], "elements", 6),
    (["dowling", "--n", "2", "--group-order", "2", "--s", "regular"], "elements", None),
    (["partition", "--n", "4"], "elements", 15),
    (["boolean", "--n", "3"], "elements", 8),
    (["affine", "--n", "2", "--hyperplanes", "1,0:0;0,1:0;1,1:1"], "hyperplanes", 3),
])
def test_gen(capsys, argv, key, size):
    code, out, _ = run(capsys, "gen", *argv)
    data = json.loads(out)
    assert code == 0 and key in data
    if size is not None:
        assert len(data[key]) == size


def test_gen_then_pipeline(tmp_path, capsys):
    _, out, _ = run(capsys, "gen", "affine", "--n", "2", "--hyperplanes", "1,0:0;0,1:0;1,1:1")
    src = write(tmp_path, "triangle.json", out)
    code, out, _ = run(capsys, "affine-check", src)
    assert code == 0 and json.loads(out) == {"ss": False, "cone_ss_through_H0": False}
    _, out, _ = run(capsys, "gen", "graphic", "--n", "4", "--shape", "cycle")
    src = write(tmp_path, "c4.json", out)
    code, out, _ = run(capsys, "tower", src)
    assert code == 0 and "fiber-type: no" in out
    assert run(capsys, "gen", "affine", "--n", "2")[0] == 2


def test_quotient_check(tmp_path, capsys):
    src = write(tmp_path, "a.json", Arrangement.of([(2, 0), (0, 2), (1, 1)]).to_json())
    sub = write(tmp_path, "sub.json", {"basis": [[1, 1], [1, -1]]})
    code, out, _ = run(capsys, "quotient-check", src, sub)
    assert code == 0
    assert "rewritten vectors: [[1, 1], [1, -1], [1, 0]]" in out
    assert "equivalence holds: True" in out
    nosub = write(tmp_path, "nosub.json", {"rows": []})
    assert run(capsys, "quotient-check", src, nosub)[0] == 2


def test_tower_text(tmp_path, capsys):
    src = write(tmp_path, "ss_toric.json", SS_TORIC.to_json())
    code, out, _ = run(capsys, "tower", src)
    assert code == 0 and "fiber-type: yes" in out and "G minus 3 points" in out


@pytest.mark.parametrize("command", ["tower", "ssolve"])
def test_output_independent_of_workers(tmp_path, capsys, command):
    k4 = Arrangement.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 1, -1), (1, 0, -1)])
    src = write(tmp_path, "k4.json", k4.to_json())
    outs = {run(capsys, "--workers", w, command, src)[1] for w in ("1", "2", "8")}
    assert len(outs) == 1


def test_module_entry_point(tmp_path):
    src = write(tmp_path, "ss_toric.json", SS_TORIC.to_json())
    res = subprocess.run([sys.executable, "-m", "ssposets", "ssolve", src],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["strict"] is False


FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "docs" / "fixtures"


@pytest.mark.parametrize("argv,expected", [
    (["layers", "ss_toric.json"], "ss_toric_layers.json"),
    (["layers", "ss_toric.json", "--dot"], "ss_toric_layers.dot"),
    (["ssolve", "sss.json"], "sss_certificate.json"),
    (["ssolve", "two_maxima_poset.json"], "two_maxima_certificate.json"),
    (["tower", "ss_toric.json"], "ss_toric_tower.txt"),
    (["invariants", "sss.json", "--jmax", "3"], "sss_invariants.txt"),
    (["quotient-check", "even.json", "even_sublattice.json"], "even_quotient.txt"),
    (["affine-check", "triangle_affine.json"], "triangle_affine_check.json"),
])
def test_documented_fixtures_are_current(capsys, argv, expected):
    args = [str(FIXTURES / a) if a.endswith(".json") else a for a in argv]
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert out == (FIXTURES / expected).read_text()
