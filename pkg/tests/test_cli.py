import json
import math
import subprocess
import sys

import pytest

from epv import acceptance, bounds, cli, geometry as geo
from epv.graphcore import cycle, write_graph
from epv.spectral import graph_energy_per_vertex


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, (json.loads(out) if out else None), err


def outputs(doc):
    return {row["name"]: row for row in doc["outputs"]}


def test_construct_pg2(tmp_path, capsys):
    out = tmp_path / "h.el"
    code, doc, _ = run_json(capsys, "construct", "--family", "pg", "--q", "2", "--out", str(out))
    assert code == 0
    rows = outputs(doc)
    assert rows["vertices"]["value"] == 14 and rows["edges"]["value"] == 21 and rows["girth"]["value"] == 6
    assert out.read_text().startswith("14 21\n")


def test_construct_truncated(tmp_path, capsys):
    code, doc, _ = run_json(capsys, "construct", "--family", "truncated", "--q", "7", "--ell", "1",
                            "--out", str(tmp_path / "g.el"))
    assert code == 0
    rows = outputs(doc)
    assert rows["vertices"]["value"] == 84 and rows["regular_degree"]["value"] == 6


def test_construct_failures(tmp_path, capsys):
    code, out, err = run(capsys, "construct", "--family", "pg", "--q", "6", "--out", str(tmp_path / "x.el"))
    assert code == 3 and "NotPrimePower" in err and out == ""
    code, _, err = run(capsys, "construct", "--family", "truncated", "--q", "7", "--ell", "9",
                       "--out", str(tmp_path / "x.el"))
    assert code == 3 and "BadEll" in err
    with pytest.raises(SystemExit) as info:
        cli.main(["construct", "--family", "klein", "--q", "7", "--out", "x"])
    assert info.value.code == 2


def test_construct_affine_plane_not_regular(tmp_path, capsys):
    code, doc, _ = run_json(capsys, "construct", "--family", "ag", "--q", "3", "--out", str(tmp_path / "a.el"))
    assert code == 0 and outputs(doc)["regular_degree"]["value"] == "none"


def test_energy_of_graph_files(tmp_path, capsys):
    h = tmp_path / "h.el"
    run(capsys, "construct", "--family", "pg", "--q", "2", "--out", str(h))
    code, doc, _ = run_json(capsys, "energy", "--graph", str(h))
    assert code == 0
    e = outputs(doc)["energy_per_vertex"]
    assert e["value"] == pytest.approx((3 + 6 * math.sqrt(2)) / 7, abs=1e-12)
    assert e["value"] == pytest.approx(1.640751, abs=5e-6)
    assert e["provenance"] == "computed"
    hexa = tmp_path / "c6.el"
    write_graph(cycle(6), hexa)
    _, doc, _ = run_json(capsys, "energy", "--graph", str(hexa))
    assert outputs(doc)["energy_per_vertex"]["value"] == pytest.approx(4 / 3, abs=1e-12)


def test_energy_of_cage_spectrum(tmp_path, capsys):
    f = tmp_path / "cage.json"
    f.write_text(json.dumps({"eigenvalues": list(acceptance.cage_spectrum().values)}))
    code, doc, _ = run_json(capsys, "energy", "--spectrum", str(f))
    assert code == 0
    assert outputs(doc)["energy_per_vertex"]["value"] == pytest.approx(2.5416, abs=5e-5)


def test_energy_errors(tmp_path, capsys):
    bad = tmp_path / "bad.el"
    bad.write_text("a b c\n")
    code, _, err = run(capsys, "energy", "--graph", str(bad))
    assert code == 4 and "line 1" in err
    code, _, _ = run(capsys, "energy", "--graph", str(tmp_path / "missing.el"))
    assert code == 4
    for argv in (["energy"], ["energy", "--graph", "a", "--spectrum", "b"]):
        with pytest.raises(SystemExit) as info:
            cli.main(argv)
        assert info.value.code == 2


def test_round_trip_to_printed_digits(tmp_path, capsys):
    f = tmp_path / "t.el"
    run(capsys, "construct", "--family", "truncated", "--q", "5", "--ell", "1", "--out", str(f))
    _, out, _ = run(capsys, "energy", "--graph", str(f))
    line = next(l for l in out.splitlines() if l.startswith("energy_per_vertex"))
    in_memory = graph_energy_per_vertex(geo.incidence_graph(geo.construct(geo.TRUNCATED, 5, 1)))
    assert line.split()[1] == f"{in_memory:.10g}"


@pytest.mark.parametrize("k, thm1, thm2", [(7, 2.5553, 2.4965), (11, 3.2329, None), (2, 4 / 3, None)])
def test_bound(capsys, k, thm1, thm2):
    code, doc, _ = run_json(capsys, "bound", "--k", str(k))
    assert code == 0
    rows = outputs(doc)
    assert rows["thm1_upper"]["value"] == pytest.approx(thm1, abs=5e-5)
    assert rows["thm1_upper"]["provenance"] == "closed_form"
    if thm2 is not None:
        assert rows["thm2_lower"]["value"] == pytest.approx(thm2, abs=5e-5)
        assert (rows["thm2_q"]["value"], rows["thm2_ell"]["value"]) == (7, 0)
    assert all("provenance" in r for r in doc["outputs"])


def test_bound_text_has_ten_digits(capsys):
    code, out, _ = run(capsys, "bound", "--k", "2")
    assert code == 0
    assert "thm1_upper" in out and "1.333333333" in out and "[closed_form]" in out


def test_bound_with_m_and_errors(capsys):
    _, doc, _ = run_json(capsys, "bound", "--k", "3", "--m", "7")
    assert outputs(doc)["cs_upper"]["value"] == pytest.approx(bounds.thm1_upper(3), abs=1e-12)
    code, _, _ = run(capsys, "bound", "--k", "1")
    assert code == 2
    code, _, _ = run(capsys, "bound", "--k", "5", "--m", "3")
    assert code == 2


def test_optimize(capsys):
    code, doc, _ = run_json(capsys, "optimize", "--k", "2", "--t", "1")
    assert code == 0
    rows = outputs(doc)
    assert abs(rows["gap"]["value"]) <= 1e-5 and rows["kkt_residual"]["value"] <= 1e-6
    code, doc, _ = run_json(capsys, "optimize", "--k", "3", "--t", "1")
    assert outputs(doc)["numeric_objective"]["value"] == pytest.approx(11.48528, abs=5e-6)


def test_optimize_limits(capsys):
    code, _, err = run(capsys, "optimize", "--k", "3", "--t", "2")
    assert code == 2 and "14" in err and "12" in err
    code, _, _ = run(capsys, "optimize", "--k", "1", "--t", "1")
    assert code == 2


def test_optimize_infeasible_exit(monkeypatch, capsys):
    from epv import optimizer
    from epv.errors import NoFeasiblePoint

    def fail(*a, **kw):
        raise NoFeasiblePoint("nothing")

    monkeypatch.setattr(optimizer, "numeric_optimum", fail)
    code, _, _ = run(capsys, "optimize", "--k", "2", "--t", "1")
    assert code == 5


def test_srg(capsys):
    code, doc, _ = run_json(capsys, "srg", "--v", "50", "--k", "7", "--lambda", "0", "--mu", "1")
    assert code == 0 and outputs(doc)["energy_per_vertex"]["value"] == 2.52
    _, doc, _ = run_json(capsys, "srg", "--v", "5", "--k", "2", "--lambda", "0", "--mu", "1")
    assert outputs(doc)["energy_per_vertex"]["value"] == pytest.approx(graph_energy_per_vertex(cycle(5)), abs=1e-12)
    _, doc, _ = run_json(capsys, "srg", "--v", "6", "--k", "3", "--lambda", "0", "--mu", "3")
    assert outputs(doc)["spectrum"]["value"] == [[3.0, 1], [0.0, 4], [-3.0, 1]]
    code, _, err = run(capsys, "srg", "--v", "6", "--k", "3", "--lambda", "0", "--mu", "2")
    assert code == 6 and "Infeasible" in err


def test_verify_passes(capsys):
    code, doc, _ = run_json(capsys, "verify")
    assert code == 0
    ids = [c["id"] for c in doc["checks"]]
    assert ids == [1, 2, 3, 4, 5, 6, 8]
    assert all(c["passed"] for c in doc["checks"])


def test_verify_detects_corrupted_bound(monkeypatch, capsys):
    monkeypatch.setattr(bounds, "thm1_upper", lambda k: (k + (k * k - k) * math.sqrt(k)) / (k * k - k + 1))
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert "FAIL" in out


def test_verify_full_includes_sweep(monkeypatch, capsys):
    def fake_sweep():
        return acceptance.CheckResult(7, "random regular property sweep", True, "stub")

    patched = [(fake_sweep if fn is acceptance.check_random_sweep else fn, slow) for fn, slow in acceptance.CHECKS]
    monkeypatch.setattr(acceptance, "CHECKS", patched)
    code, doc, _ = run_json(capsys, "verify", "--full")
    assert code == 0 and 7 in [c["id"] for c in doc["checks"]]


def test_crashing_check_is_reported(monkeypatch, capsys):
    def boom():
        raise RuntimeError("bad")

    monkeypatch.setattr(acceptance, "CHECKS", [(boom, False)])
    code, out, _ = run(capsys, "verify")
    assert code == 1 and "RuntimeError" in out


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "epv", "bound", "--k", "11"], capture_output=True, text=True)
    assert res.returncode == 0 and "3.232" in res.stdout
