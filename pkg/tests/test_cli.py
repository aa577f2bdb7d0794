import json

import pytest

from zcc.cli import run


def run_json(capsys, argv):
    rc = run(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out) if out else None


def test_count_example(capsys):
    rc, payload = run_json(capsys, ["count", "--d", "2", "--n", "2", "--q", "3"])
    assert rc == 0
    assert payload["point_count"] == 6
    assert payload["total"] == "6"


def test_count_modes_agree(capsys):
    results = {}
    for mode in ("ordered", "unordered", "burnside"):
        rc, payload = run_json(capsys, ["count", "--d", "2,1", "--n", "1",
                                        "--q", "3", "--mode", mode])
        assert rc == 0
        results[mode] = payload["point_count"]
    assert results["unordered"] == results["burnside"] == 18
    assert results["ordered"] == 12  # the ordered space is a different count


def test_weighted(capsys):
    rc, payload = run_json(capsys, ["weighted", "--d", "2", "--n", "2",
                                    "--q", "3", "--poly", "X[1,2]"])
    assert rc == 0
    assert payload["total"] == "3"


def test_weighted_rejects_ordered(capsys):
    rc = run(["weighted", "--d", "2", "--n", "2", "--q", "3",
              "--poly", "X[1,1]", "--mode", "ordered"])
    assert rc == 1


def test_prime_power_field(capsys):
    rc, payload = run_json(capsys, ["count", "--d", "2", "--n", "2", "--q", "2^2"])
    assert rc == 0
    assert payload["q"] == 4
    rc, payload2 = run_json(capsys, ["count", "--d", "2", "--n", "2", "--q", "4"])
    assert rc == 0
    assert payload2 == payload
    assert run(["count", "--d", "2", "--n", "2", "--q", "6"]) == 1


def test_lattice_example(capsys):
    rc, payload = run_json(capsys, ["lattice", "--d", "3", "--n", "2"])
    assert rc == 0
    assert payload["num_elements"] == 5
    assert payload["mobius_top"] == 2
    assert payload["edge_counts"] == {
        "block_creation": 3, "singleton_adding": 3, "block_merging": 0}
    assert payload["point_count_coefficients"] == [0, 2, -3, 1]


def test_betti(capsys):
    rc, payload = run_json(capsys, ["betti", "--d", "3", "--n", "2"])
    assert rc == 0
    assert payload["betti"] == [1, 3, 2]
    assert all(set(c) == {"element", "blocks", "codimension", "by_degree"}
               for c in payload["contributions"])


def test_interpolate_inconsistency_exit_code(capsys):
    rc = run(["interpolate", "--samples", "2=2,3=6,5=21", "--expected-degree", "2"])
    assert rc == 2
    rc, payload = run_json(capsys, ["interpolate", "--samples", "2=2,3=6,5=20",
                                    "--expected-degree", "2", "--topdim", "2"])
    assert rc == 0
    assert payload["coefficients"] == ["0", "-1", "1"]
    assert payload["normalized"] == ["1", "-1", "0"]


def test_guard_exit_code(capsys):
    rc = run(["count", "--d", "12", "--n", "2", "--q", "5", "--mode", "unordered"])
    assert rc == 2


def test_unknown_flag_exit_code():
    assert run(["count", "--bogus"]) == 1
    assert run(["nonsense"]) == 1


def test_verify_grid(capsys, tmp_path):
    out1 = tmp_path / "v1.json"
    out2 = tmp_path / "v2.json"
    assert run(["verify", "--output", str(out1)]) == 0
    assert run(["verify", "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["all_pass"] is True
    assert len(payload["checks"]) > 40
    table = capsys.readouterr().err
    assert "PASS" in table and "FAIL" not in table


def test_census_byte_determinism(capsys):
    outs = []
    for _ in range(2):
        rc = run(["weighted", "--d", "2,2", "--n", "1", "--q", "3",
                  "--poly", "X[1,1]*X[2,1]"])
        assert rc == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert "e-" not in outs[0] and "E-" not in outs[0]  # no floats anywhere


def test_csv_projection(capsys):
    rc = run(["count", "--d", "2", "--n", "2", "--q", "3", "--format", "csv"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    header = lines[0].split(",")
    row = lines[1].split(",")
    assert dict(zip(header, row))["point_count"] == "6"


def test_report_config_file(capsys, tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({
        "m": 2, "n": 1, "d_list": [1, 2], "q_list": [2, 3, 5, 7, 11],
        "polys": ["1"],
    }))
    rc, payload = run_json(capsys, ["report", "--config", str(cfg)])
    assert rc == 0
    rep = payload["reports"]["1"]
    assert rep["stabilization"]["onset_d"] == 1
    assert rep["points"][0]["normalized"] == ["1", "-1", "0"]


def test_report_inline_flags(capsys):
    rc, payload = run_json(capsys, [
        "report", "--m", "1", "--n", "2", "--d-list", "1,2",
        "--q-list", "2,3,5", "--polys", "1"])
    assert rc == 0
    assert payload["reports"]["1"]["series_note"].startswith("not computed")
    assert run(["report", "--m", "1", "--n", "2"]) == 1  # missing lists


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("ZCC_THREADS", "2")
    rc, payload = run_json(capsys, ["count", "--d", "2,1", "--n", "1", "--q", "3"])
    assert rc == 0
    assert payload["point_count"] == 18
    monkeypatch.setenv("ZCC_THREADS", "zzz")
    assert run(["count", "--d", "2", "--n", "2", "--q", "3"]) == 1
