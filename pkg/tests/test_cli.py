import io
import json
import subprocess
import sys

from brim.cli import corpus_files, main

X2 = "ring { vars x }\nmodule { rank 1 ; columns [x^2] }\n"
EMBEDDED = "ring { vars x, y ; relations x^2, x*y }\nmodule { rank 1 ; columns [y] }\n"


def run(tmp_path, capsys, text, *argv):
    path = tmp_path / "p.br"
    path.write_text(text)
    code = main([*argv, "--input", str(path)])
    return code, capsys.readouterr()


def structured(tmp_path, capsys, text, *argv):
    code, out = run(tmp_path, capsys, text, *argv, "--format", "structured")
    return code, json.loads(out.out)


def test_verify_principal(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, X2, "verify")
    assert code == 0
    (v,) = rep["verdicts"]
    assert v["lambda"] == v["bound"] == ["2", "4", "6", "8", "10", "12"]
    assert all(v["inequality_ok"]) and v["consistent"]
    assert rep["cohen_macaulay"]["cm"] is True
    assert rep["consistent"] is True and rep["schema_version"] == "1"


def test_verify_embedded_point(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, EMBEDDED, "verify")
    assert code == 0
    (v,) = rep["verdicts"]
    assert v["equality_at"] == [] and all(v["inequality_ok"])
    assert rep["cohen_macaulay"]["cm"] is False
    assert rep["coefficients"]["e"] == ["1", "-1"]
    assert rep["eagon_northcott"]["homology_lengths"] == ["2", "1"]


def test_validate_infinite_colength(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, "ring { vars x, y }\nmodule { columns [x], [x^2] }", "validate")
    assert code == 1
    assert rep["error"]["type"] == "InfiniteColength"
    assert rep["validation"]["valid"] is False


def test_syntax_error_exit_code(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "ring { vars x }\nmodule { columns [2x] }", "verify")
    assert code == 1 and "line 2" in out.err


def test_missing_input(capsys):
    assert main(["verify"]) == 1


def test_metadata_mismatch_is_a_theorem_signal(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, X2 + "meta { e0 3 }", "verify")
    assert code == 2 and rep["consistent"] is False


def test_determinism(tmp_path, capsys):
    _, a = structured(tmp_path, capsys, EMBEDDED, "verify", "--t", "0,1,2")
    _, b = structured(tmp_path, capsys, EMBEDDED, "verify", "--t", "0,1,2")
    assert a["digest"] == b["digest"]
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_out_file_and_stdin(tmp_path, capsys, monkeypatch):
    out = tmp_path / "report.json"
    monkeypatch.setattr(sys, "stdin", io.StringIO(X2))
    assert main(["coefficients", "--input", "-", "--format", "structured", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["coefficients"]["e"] == ["2", "0"]


def test_field_override_and_environment(tmp_path, capsys, monkeypatch):
    _, rep = structured(tmp_path, capsys, X2, "validate", "--field", "QQ")
    assert rep["input"]["field"] == "QQ"
    monkeypatch.setenv("BRIM_FIELD", "GF(101)")
    _, rep = structured(tmp_path, capsys, X2, "validate")
    assert rep["input"]["field"] == "GF(101)"
    _, rep = structured(tmp_path, capsys, "ring { field GF(7) ; vars x }\nmodule { columns [x] }", "validate")
    assert rep["input"]["field"] == "GF(7)"


def test_table_command(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, X2, "table", "--t", "0,1,2", "--nu-max", "3")
    assert code == 0
    assert rep["tables"] == {"0": ["2", "4", "6", "8"], "1": ["2", "4", "6", "8"], "2": ["2", "4", "6", "8"]}


def test_en_dump_and_multiplicity(tmp_path, capsys):
    text = "ring { vars x, y }\nmodule { rank 2 ; columns [x, 0], [y, x], [0, y] }"
    code, rep = structured(tmp_path, capsys, text, "en", "--dump-en")
    assert code == 0
    en = rep["eagon_northcott"]
    assert en["ranks"] == ["1", "3", "2"] and len(en["differentials"]) == 2
    code, rep = structured(tmp_path, capsys, text, "multiplicity")
    assert rep["multiplicity"] == "3"


def test_length_command(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, "ring { vars x }\nmodule { rank 2 ; columns [x, 0], [0, x] }", "length")
    assert rep["length"] == {"colength": "2", "fitting_colength": "2", "fitting_ideal": ["x^2"]}


def test_remarks_command(tmp_path, capsys):
    text = "ring { vars x }\nmodule { rank 2 ; columns [x, 0], [0, x] }"
    code, rep = structured(tmp_path, capsys, text, "remarks")
    assert code == 0
    assert rep["remarks"]["above_d"][0] == {"nu": "0", "lambda": "3", "bound": "2", "strict": True}
    code, rep = structured(tmp_path, capsys, EMBEDDED, "remarks")
    assert code == 1


def test_budget_exhaustion(tmp_path, capsys):
    code, rep = structured(tmp_path, capsys, X2, "table", "--budget", "0")
    assert code == 1 and rep["error"]["type"] == "BudgetExceeded"


def test_table_rendering(tmp_path, capsys):
    code, out = run(tmp_path, capsys, EMBEDDED, "verify")
    assert code == 0
    assert "Cohen-Macaulay: no" in out.out and "consistent: yes" in out.out


def test_corpus_command(capsys):
    assert main(["corpus"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(corpus_files()) >= 8
    assert all(line.endswith(" ok") for line in lines)


def test_corpus_parallel(capsys):
    assert main(["corpus", "--jobs", "2", "--format", "structured"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep["exit_codes"].values()) == {"0"}


def test_module_entry_point(tmp_path):
    path = tmp_path / "p.br"
    path.write_text(EMBEDDED)
    proc = subprocess.run([sys.executable, "-m", "brim", "coefficients", "-i", str(path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "e1 = -1" in proc.stdout
