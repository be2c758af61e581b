import json

import pytest

from berndt_forge.cli import main
from berndt_forge.closedform import ClosedForm


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_coeffs_text(capsys):
    code, out = run(capsys, "coeffs", "S", "4", "--format", "text")
    assert code == 0
    assert out.out.splitlines() == ["S_0 = 1", "S_2 = 1 - x", "S_4 = 1 - 6*x + 5*x^2"]
    code, out = run(capsys, "coeffs", "A", "0")
    assert out.out.strip() == "A_0 = 1"


def test_coeffs_R_json(capsys):
    code, out = run(capsys, "coeffs", "R", "3", "--format", "json")
    data = json.loads(out.out)
    assert code == 0 and data["schema"] == "berndt-forge/1"
    assert data["entries"] == [{"index": 2, "coefficients": ["1"]}]


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "coeffs", "Z", "3")[0] == 2
    assert run(capsys, "coeffs", "P", "0")[0] == 3
    assert run(capsys, "series", "G", "3", "2", "abc")[0] == 2
    assert run(capsys, "verify", "tables", "--prec-bits", "64")[0] == 2
    assert run(capsys, "report", str(tmp_path / "missing" / "r.json"), "--prec-bits", "128")[0] == 5
    with pytest.raises(SystemExit) as exc:
        main(["nosuch"])
    assert exc.value.code == 2


def test_series_and_closed_form(capsys):
    code, out = run(capsys, "series", "Gprime", "3", "2", "pi", "--prec-bits", "128", "--format", "json")
    # frozen from a direct mpmath.nsum of the defining series at 40 digits
    assert code == 0
    assert abs(float(json.loads(out.out)["value"]) + 0.068966056765837151634814280142431116) < 1e-15
    assert json.loads(out.out)["value"].startswith("-0.0689660567658371516348142801424311")
    code, out = run(capsys, "closed-form", "berndt", "1", "--format", "json")
    terms = json.loads(out.out)["terms"]
    assert ClosedForm.from_dicts(terms) == ClosedForm.from_json(json.dumps(terms))
    code, out = run(capsys, "closed-form", "berndt", "1", "--format", "latex")
    assert out.out.startswith(r"\frac{\Gamma^{12}}{16384 \pi^{5}}")


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "residues", "--seed", "3", "--format", "json")
    b = run(capsys, "verify", "residues", "--seed", "3", "--format", "json")
    assert a[0] == 0 and a[1].out == b[1].out
    report = json.loads(a[1].out)
    assert report["schema"] == "berndt-forge/1"
    assert all(item["status"] == "pass" for item in report["items"])
    # theta = 0 rows are exact zeros
    zero_rows = [i for i in report["items"] if i["parameters"]["theta"] == "0"]
    assert zero_rows and zero_rows[0]["abs_residual"] == "0.0"


def test_integral_command(capsys):
    code, out = run(capsys, "integral", "3", "--prec-bits", "160", "--format", "json")
    data = json.loads(out.out)
    assert code == 0 and float(data["rel_residual"]) < 1e-40


def test_report_json_round_trip(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, _ = run(capsys, "report", str(path), "--prec-bits", "128", "--format", "json")
    assert code == 0
    rep = json.loads(path.read_text())
    names = {e["example"]: e for e in rep["examples"]}
    assert names["integral.m1"]["printed_matches"] is True
    assert names["integral.m2"]["printed_matches"] is False
    assert "resolved exponent 12" in names["integral.m2"]["note"]
    assert "factor 4 is confirmed" in names["zeta4.m1"]["note"]
    for e in rep["examples"]:
        assert ClosedForm.from_dicts(e["closed_form"]).to_dicts() == e["closed_form"]


def test_report_latex(capsys, tmp_path):
    path = tmp_path / "report.tex"
    assert run(capsys, "report", str(path), "--prec-bits", "128", "--format", "latex")[0] == 0
    text = path.read_text()
    assert r"\frac{\Gamma^{12}}{16384 \pi^{5}} - \frac{\Gamma^{10}}{4096 \sqrt{2} \pi^{7/2}}" in text
