import json
import subprocess
import sys

import pytest

from liecoh.cli import main, report_render, run


def doc_of(argv):
    code, report = run(argv)
    return code, (report.to_json() if report is not None else None)


def test_catalog_a2():
    code, doc = doc_of(["catalog", "A2"])
    assert code == 0
    assert doc["invariant_orders"] == [2, 3]
    assert doc["cocycle_orders"] == [3, 5]
    assert doc["schema"] == 1


def test_cohomology_su2_betti():
    code, doc = doc_of(["cohomology", "--algebra", "A1", "--max-degree", "3"])
    assert code == 0 and doc["betti"] == [1, 0, 0, 1]
    assert doc["provenance"] == "exact"


def test_multibracket_su2_empty_note():
    code, doc = doc_of(["multibracket", "--algebra", "A1", "--order", "4"])
    assert code == 0
    assert "empty" in doc["note"]


def test_su3_suite_all_zero():
    for argv in (["algebra", "-a", "A2"], ["cocycle", "-a", "A2", "--order", "5"],
                 ["multibracket", "-a", "A2", "--order", "4"]):
        code, doc = doc_of(argv)
        assert code == 0, argv
        assert set(doc["verdicts"].values()) <= {"zero", "pass"}


@pytest.mark.parametrize("argv", [
    ["algebra", "-a", "A2", "--mutate", "C:0,1,2:+1"],
    ["cohomology", "-a", "A1", "--mutate", "C:0,1,0:+1"],
    ["cocycle", "-a", "A2", "--order", "5", "--mutate", "Omega:0,1,2,3,4:+1"],
    ["cocycle", "-a", "A2", "--order", "7", "--source", "dd", "--mutate", "Omega:0,1,2,3,4,5,6:+1"],
    ["poisson", "-a", "A1", "--mutate", "C:0,1,0:+1"],
])
def test_mutation_exits_one_with_witness(argv):
    code, doc = doc_of(argv)
    assert code == 1
    assert doc["status"] == "falsified"
    assert doc["witnesses"]
    for name, w in doc["witnesses"].items():
        assert doc["verdicts"][name] in ("nonzero", "fail")
        text = json.dumps(w)
        assert "value" in text or "residual" in text


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["algebra"],
    ["algebra", "-a", "Q7"],
    ["algebra", "-a", "A2", "--mutate", "C:0,1:+1"],
    ["cocycle", "-a", "A2", "--order", "4"],
    ["poisson", "-a", "A1", "--source", "nope"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, report = run(argv)
    assert code == 2 and report is None
    assert capsys.readouterr().err


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("LIECOH_THREADS", "many")
    assert run(["catalog", "A1"])[0] == 2


def test_np_is_informational_unless_required():
    code, doc = doc_of(["poisson", "-a", "A2", "--source", "cocycle:5", "--check", "gps,np,fi"])
    assert code == 0
    assert doc["gps_residual"] == "0"
    assert doc["np_algebraic_at_sample"] == "nonzero"
    assert doc["decomposable_hint"] is False
    assert doc["fi_witness"]["residual"] != "0"
    code, doc = doc_of(["poisson", "-a", "A2", "--source", "cocycle:5", "--require-np"])
    assert code == 1 and "np_algebraic" in doc["witnesses"]


def test_decomposable_const_source():
    code, doc = doc_of(["poisson", "-a", "A2", "--source", "const:0,1,2", "--require-np"])
    assert code == 0
    assert doc["np_differential"] == "0" and doc["decomposable_hint"] is True


def _cli(args, env=None):
    import os

    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "liecoh"] + args, capture_output=True, env=e, check=False)


def test_byte_identical_across_runs_and_threads():
    args = ["cohomology", "-a", "A1", "--rep", "defining", "--whitehead", "--max-degree", "3"]
    outs = [_cli(args, {"LIECOH_THREADS": t}) for t in ("1", "1", "4")]
    assert all(o.returncode == 0 for o in outs)
    assert outs[0].stdout == outs[1].stdout == outs[2].stdout


def test_exit_code_from_module_entry():
    assert _cli(["algebra", "-a", "A2", "--mutate", "C:0,1,2:+1"]).returncode == 1
    assert _cli([]).returncode == 2


def test_text_format_and_output_file(tmp_path):
    out = tmp_path / "r.txt"
    assert main(["algebra", "-a", "A1", "--format", "text", "--output", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("liecoh algebra: pass")
    assert "jacobi: zero" in text


def test_render_json_is_sorted():
    _, report = run(["catalog", "B2"])
    text = report_render(report)
    assert json.loads(text)["invariant_orders"] == [2, 4]
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"
