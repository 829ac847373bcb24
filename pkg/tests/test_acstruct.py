import numpy as np
import pytest

from acs import catalog
from acs.acstruct import (
    ChartStructure,
    Lemma1Structure,
    VectorField,
    lie_bracket,
    parse_point,
    point_to_real,
    validate,
)
from acs.clinalg import standard_j


def test_flat_is_valid_and_has_zero_jet():
    S = ChartStructure.flat(2)
    assert validate(S) == []
    j = S.jet(np.zeros(4))
    assert np.allclose(j.J, standard_j(2))
    assert np.abs(j.dJ).max() == 0


def test_a_nonzero_violates_j_squared():
    # J dz = i dz + dw + w dwbar is not an almost complex structure
    T = ChartStructure.from_rows(["z", "w"], {"z": {"dz": "i", "dw": "1", "dw_": "w"}, "w": {"dw": "i"}})
    v = validate(T)
    assert v and all("J^2+1" in s for s in v)


@pytest.mark.parametrize("alpha,beta", [("w_", "z"), ("2*w_+w_^2", "w"), ("z*z_", "exp(i*w)")])
def test_lemma1_form_is_valid(alpha, beta):
    assert validate(Lemma1Structure.from_exprs(alpha, beta), samples=30) == []


def test_every_catalog_chart_validates():
    for name in catalog.model_names()["charts"]:
        assert validate(catalog.chart(name), samples=10) == [], name


def test_submax_jet_has_single_w_block():
    S = catalog.chart("submax")
    j = S.jet(np.zeros(4))
    nz = [m for m in range(4) if np.abs(j.dJ[m]).max() > 0]
    assert nz == [2, 3]  # x_w, y_w


def test_lie_bracket_and_nijenhuis_field():
    S = catalog.chart("submax")
    X = VectorField.from_strings(S.vars, {"z": "w"})
    Y = VectorField.from_strings(S.vars, {"w": "1"})
    assert lie_bracket(X, Y) == -lie_bracket(Y, X)
    # N(dz, dw) = -2i b_w dwbar with b = w
    N = S.nijenhuis_field(S.frame(0), S.frame(1))
    assert N == VectorField.from_strings(S.vars, {"w_": "-2*i"})


def test_parse_point_shorthand():
    vt = catalog.chart("submax").vars
    p = parse_point("z=0.1+0.2i,w=-0.3i", vt)
    assert p[0] == pytest.approx(0.1 + 0.2j) and p[1] == pytest.approx(-0.3j)
    assert np.allclose(point_to_real(vt, p), [0.1, 0.2, 0, -0.3])
    assert parse_point(None, vt) == {0: 0, 1: 0}


def test_json_roundtrip():
    S = catalog.chart("torus")
    S2 = ChartStructure.from_json(S.to_json())
    q = np.array([0.1, -0.2, 0.3, 0.05])
    assert np.allclose(S.j_real(q), S2.j_real(q))
