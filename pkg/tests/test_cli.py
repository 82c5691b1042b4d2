import io
import subprocess
import sys

import pytest

from doublechain.certificate import Certificate
from doublechain.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_info():
    code, text = call("info", "Q + D3 * D3 + D3")
    assert code == 0
    assert "size=21 L=11 b=15 e=15" in text


def test_info_accepts_unicode_operators():
    code, text = call("info", "S' ⊗ D3 ⊕ B ⊕ B")
    assert code == 0 and "size=19 L=9 b=13 e=13" in text


def test_la_and_report(tmp_path):
    report = tmp_path / "la.txt"
    code, text = call("la", "B", "--n", "3", "--report", str(report))
    assert code == 0 and "= 6 (exact" in text
    cert = Certificate.from_text(report.read_text())
    assert cert.value == "6" and len(cert.witness) == 6


def test_la_budget_is_inconclusive():
    code, text = call("la", "B", "--n", "5", "--budget", "30")
    assert code == 2 and "inconclusive" in text


def test_verify_pass(tmp_path):
    report = tmp_path / "v.txt"
    code, text = call("verify", "B", "--n", "4", "--report", str(report))
    assert code == 0 and "value=10" in text
    cert = Certificate.from_text(report.read_text())
    assert cert.verdict == "pass" and cert.expected == "10"


def test_verify_property_mode():
    code, text = call("verify", "B + B", "--n", "6")
    assert code == 0 and text.startswith("property-pass")


def test_verify_precondition_is_usage_error():
    assert call("verify", "B", "--n", "2")[0] == 3


def test_audit():
    code, text = call("audit-double-chains", "--n", "4")
    assert code == 0 and "16/16 subsets match closed form" in text
    assert call("audit-double-chains", "--n", "1")[0] == 3


def test_window_check():
    code, text = call("window-check", "B")
    assert code == 0
    code, text = call("window-check", "B", "--m", "3/2")
    assert code == 1 and "M0 M1 M2 M3" in text
    code, _ = call("window-check", "D3", "--full")
    assert code == 0
    code, _ = call("window-check", "R", "--max-configs", "5")
    assert code == 2


def test_window_check_rejects_third():
    with pytest.raises(SystemExit) as exc:
        call("window-check", "B", "--m", "1/3")
    assert exc.value.code == 3


def test_e_scan(tmp_path):
    report = tmp_path / "e.txt"
    code, text = call("e-scan", "B", "--n-max", "5", "--report", str(report))
    assert code == 0
    assert "e < 3" in text
    assert report.read_text().count("claim=") == 2
    code, _ = call("e-scan", "B", "--m", "3", "--n-max", "4")
    assert code == 1


def test_free_check(tmp_path):
    fam = tmp_path / "f.txt"
    fam.write_text("family 4\n{1}\n{2}\n{1,2}\n{3,4}\n")
    code, text = call("free-check", "B", str(fam))
    assert code == 0 and "free" in text
    fam.write_text("family 3\n{}\n{1}\n{2}\n{1,2}\n{1,3}\n{2,3}\n")
    code, text = call("free-check", "B", str(fam))
    assert code == 1 and "->" in text
    assert call("free-check", "B", str(tmp_path / "missing.txt"))[0] == 3
    fam.write_text("family 2\n{5}\n")
    assert call("free-check", "B", str(fam))[0] == 3


def test_custom_poset_file(tmp_path):
    vee = tmp_path / "vee.txt"
    vee.write_text("poset 3\n0 < 1\n0 < 2\n")
    code, text = call("info", f"@{vee}")
    assert code == 0 and "b=3/2 e=n/a" in text and "coarse" in text
    code, _ = call("window-check", f"@{vee}", "--m", "3/2")
    assert code == 0


@pytest.mark.parametrize("expr", ["B * B", "X", "B +", "(B"])
def test_bad_expressions_are_usage_errors(expr, capsys):
    code, _ = call("info", expr)
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_missing_arguments_exit_3():
    with pytest.raises(SystemExit) as exc:
        call("la", "B")
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        call()
    assert exc.value.code == 3


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("DOUBLECHAIN_JOBS", "2")
    assert call("window-check", "D3")[0] == 0
    monkeypatch.setenv("DOUBLECHAIN_JOBS", "many")
    assert call("window-check", "D3")[0] == 3
    assert call("window-check", "D3", "--jobs", "0")[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "doublechain", "info", "B"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "b=2" in proc.stdout
