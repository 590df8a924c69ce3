import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from plankcert.cli import main
from plankcert.configurations import Scene, random_peelable_scene
from plankcert.documents import emit_scene
from plankcert.geometry import ConvexBody
from plankcert.planks import Plank

GOLDEN = Path(__file__).parent / "golden"


def _scene_file(tmp_path, body_vertices, planks, name="scene.json"):
    doc = {
        "version": 1,
        "dim": 2,
        "body": {"vertices": body_vertices},
        "planks": [{"normal": n, "lo": lo, "hi": hi} for n, lo, hi in planks],
    }
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]


@pytest.fixture
def slab_pair(tmp_path):
    return _scene_file(tmp_path, SQUARE, [([1, 0], 0, 0.5), ([1, 0], 0.5, 1)])


@pytest.fixture
def hunter(tmp_path):
    path = tmp_path / "hunter.json"
    assert main(["generate", "hunter", "--backend", "rational", "-o", str(path)]) == 0
    return str(path)


def test_check_covered_and_uncovered(tmp_path, hunter, capsys):
    assert main(["check", hunter, "--backend", "rational"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("covered") and out.count("cell ") == 8

    gapped = _scene_file(tmp_path, SQUARE, [([1, 0], 0, 0.4), ([1, 0], 0.5, 1)], "gap.json")
    assert main(["check", gapped]) == 1
    out = capsys.readouterr().out
    assert "uncovered" in out
    x, y = map(float, re.search(r"witness: (\S+) (\S+)", out).groups())
    assert x == pytest.approx(0.45, abs=1e-9) and 0 <= y <= 1


def test_check_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["check", str(bad)]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.json")]) == 2


def test_check_cell_budget(slab_pair, capsys):
    assert main(["check", slab_pair, "--cell-budget", "2"]) == 2
    assert "budget" in capsys.readouterr().err


def test_sum_reports(hunter, slab_pair, tmp_path, capsys):
    assert main(["sum", hunter, "--backend", "rational"]) == 0
    out = capsys.readouterr().out
    assert out.count("ratio=1/3") == 3 and "bang_sum: 1/1" in out

    assert main(["sum", slab_pair]) == 0
    out = capsys.readouterr().out
    assert out.count("ratio=0.5") == 2 and "bang_sum: 1.0" in out

    flat = _scene_file(tmp_path, [[0, 0], [1, 0]], [([0, 1], -1, 1), ([1, 0], 0, 1)], "flat.json")
    assert main(["sum", flat]) == 0
    out = capsys.readouterr().out
    assert "ratio=inf" in out and "bang_sum: inf" in out


def test_certify_and_verify(slab_pair, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert main(["certify", slab_pair, "-o", str(cert)]) == 0
    out = capsys.readouterr().out
    assert "chain_bound: 1.0" in out and "verified" in out
    assert main(["verify", slab_pair, str(cert)]) == 0
    assert capsys.readouterr().out.strip() == "verified"

    doc = json.loads(cert.read_text())
    doc["steps"][0]["rho"] = 0.9
    cert.write_text(json.dumps(doc))
    assert main(["verify", slab_pair, str(cert)]) == 1
    assert "shrink[step=0" in capsys.readouterr().out


def test_certify_hunter_has_no_order(hunter, capsys):
    assert main(["certify", hunter, "--backend", "rational"]) == 1
    assert "no peeling order" in capsys.readouterr().out


def test_certify_explicit_orders(tmp_path, capsys):
    three = _scene_file(tmp_path, SQUARE, [([1, 0], 0, 0.3), ([1, 0], 0.3, 0.6), ([1, 0], 0.6, 1)])
    assert main(["certify", three, "--order", "1,0,2"]) == 2
    assert "step 1" in capsys.readouterr().err
    assert main(["certify", three, "--order", "2,1,0", "-o", str(tmp_path / "c.json")]) == 0
    assert main(["certify", three, "--order", "0,0,1"]) == 2
    assert main(["certify", three, "--order", "a,b"]) == 2


def test_certify_uncovered_and_budget(tmp_path, capsys):
    gapped = _scene_file(tmp_path, SQUARE, [([1, 0], 0, 0.4), ([1, 0], 0.5, 1)], "gap.json")
    assert main(["certify", gapped]) == 2
    assert "not covered" in capsys.readouterr().err
    three = _scene_file(tmp_path, SQUARE, [([1, 0], 0.3, 0.6), ([1, 0], 0, 0.3), ([1, 0], 0.6, 1)])
    assert main(["certify", three, "--search-budget", "1"]) == 1
    assert "budget" in capsys.readouterr().out


def test_generate_is_deterministic(tmp_path, capsys):
    assert main(["generate", "hunter", "--backend", "rational", "-o", str(tmp_path / "h.json")]) == 0
    assert (tmp_path / "h.json").read_text() == (GOLDEN / "hunter_rational.json").read_text()
    assert main(["generate", "hunter", "-o", str(tmp_path / "hf.json")]) == 0
    assert (tmp_path / "hf.json").read_text() == (GOLDEN / "hunter_float.json").read_text()

    assert main(["generate", "random", "--seed", "42", "--dim", "2", "--planks", "4"]) == 0
    first = capsys.readouterr().out
    assert main(["generate", "random", "--seed", "42", "--dim", "2", "--planks", "4"]) == 0
    assert capsys.readouterr().out == first == emit_scene(random_peelable_scene(42, dim=2, k=4))

    assert main(["generate", "slabs", "--k", "3", "--cuts", "0.25,0.5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [(p["lo"], p["hi"]) for p in doc["planks"]] == [(0.0, 0.25), (0.25, 0.5), (0.5, 1.0)]


def test_generate_rejects_bad_parameters(capsys):
    assert main(["generate", "slabs", "--k", "3", "--cuts", "0.5"]) == 2
    assert main(["generate", "slabs", "--direction", "1,1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["generate", "nonsense"])
    assert info.value.code == 2


def test_render_outputs(tmp_path, hunter, slab_pair, capsys):
    out = tmp_path / "h.svg"
    assert main(["render", hunter, "--backend", "rational", "-o", str(out)]) == 0
    image = out.read_text()
    assert image.startswith("<?xml") and image.count("<polygon") >= 4

    cert = tmp_path / "cert.json"
    overlap = _scene_file(tmp_path, SQUARE, [([1, 0], 0, 0.4), ([1, 0], 0.3, 1)], "overlap.json")
    assert main(["certify", overlap, "-o", str(cert)]) == 0
    step_svg = tmp_path / "step.svg"
    assert main(["render", overlap, "--certificate", str(cert), "--step", "0", "-o", str(step_svg)]) == 0
    assert "stroke-dasharray" in step_svg.read_text()
    assert main(["render", overlap, "--certificate", str(cert), "--step", "7"]) == 2

    cube = tmp_path / "cube.json"
    body = ConvexBody.box((0, 0, 0), (1, 1, 1))
    cube.write_text(emit_scene(Scene(body, [Plank((1.0, 0.0, 0.0), -1, 2)], "cube")))
    assert main(["render", str(cube)]) == 2


def test_module_entry_point(slab_pair):
    proc = subprocess.run([sys.executable, "-m", "plankcert", "check", slab_pair], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().endswith("covered")
