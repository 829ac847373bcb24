import json

import pytest

from acs import catalog
from acs.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def js(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--json")
    data = json.loads(out)
    assert data["schema_version"] == "1"
    return code, data


def test_classify_neqs3(capsys):
    code, out, _ = call(capsys, "classify", "models:neqs3")
    assert code == 0
    assert out.splitlines()[0] == "NDG(3)-candidate, rImage=3"


def test_liealg_su21_json(capsys):
    code, d = js(capsys, "liealg", "--case", "su21", "--k", "2")
    assert code == 0 and d["pass"] is False
    assert any("∂z3" in str(f) for f in d["complex_failures"])


def test_symbol_dg2_2(capsys):
    code, d = js(capsys, "symbol", "models:dg2_2", "--max-order", "3")
    assert code == 0 and len(d["gamma_dims"]) == 3


def test_chart_with_point(capsys):
    code, out, _ = call(capsys, "nijenhuis", "models:submax", "--point", "z=0.1+0.2i,w=-0.5")
    assert code == 0 and "X" in out
    code, d = js(capsys, "classify", "models:submax", "--point", "w=1")
    assert d["type_label"] == "DIM4_NONZERO"


def test_realize(capsys):
    code, d = js(capsys, "realize", "--A", "2*w_+w_^2", "--B", "w")
    assert code == 0 and d["alpha_exact"] == "(-4/3*i)"


def test_realize_precondition_exit_2(capsys):
    code, _, err = call(capsys, "realize", "--A", "2*w_", "--B", "w")
    assert code == 2 and "precondition" in err


def test_estructure(capsys):
    code, d = js(capsys, "estructure", "models:generic4", "--point", "z=0.3-0.2i,w=0.1+0.15i")
    assert code == 0 and len(d["frame"]) == 4
    code, _, _ = call(capsys, "estructure", "models:submax")
    assert code == 2


def test_obstruct(capsys):
    code, d = js(capsys, "obstruct", "dim4", "--chi", "24", "--tau", "-16")
    assert d["verdict"] == "EXCLUDED"
    code, d = js(capsys, "obstruct", "cp3", "--r", "0")
    assert d["verdict"] == "ADMITS" and "UNDETERMINED-ADMITS" in d["note"]
    code, d = js(capsys, "obstruct", "dim8", "--mode", "strong", "--c4", "720")
    assert d["verdict"] == "EXCLUDED"


def test_cp2sum_short_flags(capsys):
    # --s must not be read as a prefix of --strict/--samples/--seed
    code, d = js(capsys, "obstruct", "cp2sum", "--r", "1", "--s", "20")
    assert code == 0 and d["verdict"] == "EXCLUDED"
    code, d = js(capsys, "obstruct", "cp2sum", "--r", "1", "--s", "21")
    assert d["verdict"] == "ADMITS"


def test_hermitian_and_models(capsys):
    code, d = js(capsys, "hermitian", "models:neqs2")
    assert d["signature"] == [4, 2]
    code, d = js(capsys, "models", "--self-test")
    assert code == 0 and d["self_test"] == [] and "neqs3" in d["tensors"]


def test_nofor_residual(capsys):
    code, d = js(capsys, "nofor-residual", "--Z", "z", "--Xi", "zeta", "--W", "w + z^2*zeta")
    assert d["symmetry"] is True
    code, d = js(capsys, "nofor-residual", "--Z", "z^2", "--Xi", "zeta", "--W", "w")
    assert d["symmetry"] is False


def test_usage_errors_exit_1(capsys):
    assert call(capsys, "classify")[0] == 1
    assert call(capsys, "frobnicate")[0] == 1
    assert call(capsys, "classify", "models:nope")[0] == 1
    assert call(capsys, "nijenhuis", "models:submax", "--point", "q=1")[0] == 1
    assert call(capsys, "nofor-residual", "--Z", "z +", "--Xi", "zeta", "--W", "w")[0] == 1


def test_file_inputs(tmp_path, capsys):
    c = tmp_path / "chart.json"
    c.write_text(json.dumps(catalog.chart("submax").to_json()))
    t = tmp_path / "tensor.json"
    t.write_text(json.dumps(catalog.point_tensor("ndg4").to_json()))
    assert call(capsys, "classify", str(c), "--point", "w=1")[1].startswith("DIM4_NONZERO")
    assert call(capsys, "classify", str(t))[1].startswith("NDG(4)-candidate")


def test_strict_exit_3(capsys, monkeypatch):
    from acs import cli
    from acs.nijenhuis import LOW_CONFIDENCE, classify

    def shaky(N, tol=1e-9):
        rep = classify(N, tol)
        rep.flags.append(LOW_CONFIDENCE)
        return rep

    monkeypatch.setattr(cli, "classify", shaky)
    assert call(capsys, "classify", "models:ndg1")[0] == 0
    assert call(capsys, "classify", "models:ndg1", "--strict")[0] == 3


@pytest.mark.parametrize("cmd", [["validate", "models:torus"], ["charvar", "models:dg2_2"]])
def test_json_roundtrips(capsys, cmd):
    code, d = js(capsys, *cmd)
    assert code == 0
    assert json.loads(json.dumps(d)) == d
