import json
import subprocess
import sys

import pytest

from spectrum import cli
from spectrum import graph as gr


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out else None), err


def strip_timestamp(report):
    report = dict(report)
    report.pop("timestamp")
    return report


def test_param_theta_on_graph6(capsys):
    code, rep, _ = run_json(capsys, "param", "--graph", "g6:DUW", "--param", "theta")
    assert code == 0
    G = gr.from_graph6("DUW")
    from spectrum.sdp import weighted_theta

    assert rep["result"]["value"]["float"] == pytest.approx(weighted_theta(G.adjacency).value, abs=1e-6)
    assert rep["result"]["value"]["provenance"] == "computed"
    assert rep["command"] == ["spectrum", "param", "--graph", "g6:DUW", "--param", "theta"]
    assert {"version", "seed", "tolerances", "timestamp"} <= set(rep)


def test_param_on_graph6_null_and_single_vertex(capsys):
    _, rep, _ = run_json(capsys, "param", "--graph", "g6:?", "--param", "alpha")
    assert rep["result"]["value"]["value"] == "0"
    _, rep, _ = run_json(capsys, "param", "--graph", "g6:@", "--param", "alpha")
    assert rep["result"]["vertices"] == 1 and rep["result"]["value"]["value"] == "1"


def test_param_fixture_and_lambda(capsys):
    code, rep, _ = run_json(capsys, "param", "--graph", "C5", "--param", "theta", "--param", "haemersF2",
                            "--lambda", "1/2")
    assert code == 0
    assert rep["result"]["values"]["theta"]["provenance"] == "fixture"
    assert rep["result"]["values"]["theta"]["value"] == "sqrt(5)"
    combined = rep["result"]["combined"]["value"]
    assert combined["kind"] == "float" and combined["provenance"] == "fixture"
    assert combined["float"] == pytest.approx((5**0.5 * 2.5) ** 0.5, abs=1e-12)


def test_param_multiple_exact(capsys):
    _, rep, _ = run_json(capsys, "param", "--graph", "Petersen", "--param", "alpha", "--param", "chi_bar_f",
                         "--param", "chromatic")
    vals = {k: v["value"] for k, v in rep["result"]["values"].items()}
    assert vals == {"alpha": "4", "chi_bar_f": "5", "chromatic": "3"}


def test_repro_example(capsys):
    code, out, _ = run(capsys, "repro-example")
    assert code == 0
    for text in ("2600/11", "15625/64", "625*sqrt(5)/8"):
        assert text in out


def test_product_round_trip(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "product", "--graph", "C5", "--graph", "K2", "--op", "strong")
    assert code == 0
    G = gr.from_json_dict(rep["result"]["graph"])
    assert G == gr.strong_product(gr.cycle(5), gr.complete(2))
    path = tmp_path / "g.json"
    path.write_text(json.dumps(rep["result"]["graph"]))
    _, rep2, _ = run_json(capsys, "param", "--graph", str(path), "--param", "alpha")
    assert rep2["result"]["value"]["value"] == "2"
    _, rep3, _ = run_json(capsys, "product", "--graph", "C5", "--op", "power", "--k-max", "2")
    assert rep3["result"]["vertices"] == 25


def test_refine_report(capsys, tmp_path):
    dist = tmp_path / "dist.json"
    dist.write_text(json.dumps({"labels": [0, 1], "weights": ["1/2", "1/2"]}))
    code, rep, _ = run_json(capsys, "refine", "--graph", "Kbar2", "--dist", str(dist), "--param", "chi_bar_f",
                            "--k-max", "3")
    assert code == 0
    r = rep["result"]["refinements"]["chi_bar_f"]
    assert r["fekete"]["certified_direction"] == "lower"
    assert len(r["fekete"]["trace"]) == 3
    assert all(r["comparisons"].values())
    assert r["corner"]["value"]["value"] == pytest.approx(1.0, abs=1e-7)


def test_corner_report(capsys):
    code, rep, _ = run_json(capsys, "corner", "--graph", "C5", "--op", "vertex_packing", "--dist", "uniform")
    assert code == 0
    ent = rep["result"]["entropy"]
    assert ent["duality_holds"]
    assert ent["H_A"]["value"] + ent["H_A*"]["value"] == pytest.approx(ent["H"]["value"], abs=1e-6)
    from spectrum.corners import GeneratorCorner, vertex_packing

    back = GeneratorCorner.from_json_dict(rep["result"]["corner"])
    assert back.same_generators(vertex_packing(gr.cycle(5)))


def test_determinism_modulo_timestamp(capsys):
    argv = ["refine", "--graph", "C5", "--param", "chi_bar_f", "--dist", "1/2,1/4,1/8,1/16,1/16"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert json.dumps(strip_timestamp(json.loads(a))) == json.dumps(strip_timestamp(json.loads(b)))


@pytest.mark.parametrize("fmt,marker", [("csv", "key,value"), ("text", "result.value.value: 2")])
def test_output_formats(capsys, fmt, marker):
    code, out, _ = run(capsys, "param", "--graph", "C5", "--param", "alpha", "--format", fmt)
    assert code == 0 and marker in out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "repro-example", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["result"]["checks"]


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "param", "--graph", "C5", "--bogus")[0] == 2
    assert run(capsys, "param", "--graph", "nope")[0] == 2
    assert run(capsys, "nosuch")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3,\n "edges": [[0, 1],]}')
    code, _, err = run(capsys, "param", "--graph", str(bad))
    assert code == 2 and f"{bad}:2:" in err
    code, _, err = run(capsys, "refine", "--graph", "C5", "--dist", "1/2,1/2")
    assert code == 2 and "weights" in err


def test_help_documents_every_flag(capsys):
    flags = ["--graph", "--dist", "--param", "--k-max", "--lambda", "--out", "--format", "--seed", "--cap"]
    seen = ""
    for sub in ("param", "product", "refine", "corner", "verify", "repro-example"):
        with pytest.raises(SystemExit):
            cli.build_parser().parse_args([sub, "--help"])
        seen += capsys.readouterr().out
    for flag in flags + ["--suite"]:
        assert flag in seen


def test_interrupt_flushes_partial_report(capsys, monkeypatch):
    def boom(args, out):
        out["result"] = {"partial": True}
        raise KeyboardInterrupt

    monkeypatch.setitem(cli.COMMANDS, "repro-example", boom)
    code, rep, _ = run_json(capsys, "repro-example")
    assert code == 130 and rep["interrupted"] and rep["result"] == {"partial": True}


def test_verify_example_suite_exit_code(capsys):
    code, rep, _ = run_json(capsys, "verify", "--suite", "example")
    assert code == 0 and rep["result"]["summary"]["ok"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spectrum.cli", "param", "--graph", "K3", "--param", "alpha"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"]["value"] == "1"
