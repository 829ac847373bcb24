from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acs import catalog
from acs.acstruct import ChartStructure, Lemma1Structure, point_to_real
from acs.clinalg import RealSubspace, complex_image, principal_angle
from acs.expr import GaussRat
from acs.nijenhuis import (
    PointTensor,
    PreconditionError,
    classify,
    complexified_components,
    generator_plane,
    lemma2_generator,
    newton_fixed_points,
    nijenhuis_at,
    nijenhuis_fd,
    phi_maps,
    plucker_counts,
    realize_dim4,
    transversal_check,
)


def at(S, **coords):
    pt = {S.vars.var_id(k): v for k, v in coords.items()}
    return nijenhuis_at(S.jet(point_to_real(S.vars, pt)))


def test_flat_is_exactly_zero():
    for n in (2, 3):
        N = nijenhuis_at(ChartStructure.flat(n).jet(np.zeros(2 * n)))
        assert np.abs(N.values).max() == 0


def test_submax_component():
    S = catalog.chart("submax")
    for p in ({"z": 0, "w": 0}, {"z": 0.5j, "w": -1 + 0.2j}):
        K = complexified_components(at(S, **p))
        assert K[0, 1, 3] == pytest.approx(-2j)
        assert np.abs(K[0, 1, :3]).max() < 1e-12


def test_nofor_components():
    S = catalog.chart("nofor")  # coords z, zeta, w
    K = complexified_components(at(S, z=0.1, zeta=0.3j, w=-0.2))
    assert K[0, 1, 5] == pytest.approx(-2j)
    assert np.abs(K[0, 1, :5]).max() < 1e-12
    assert np.abs(K[0, 2]).max() < 1e-12
    assert np.abs(K[1, 2]).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(catalog.model_names()["charts"]), st.integers(0, 2**31))
def test_nijenhuis_matches_fd_oracle(name, seed):
    S = catalog.chart(name)
    q = np.random.default_rng(seed).uniform(-0.5, 0.5, 2 * S.n)
    A = nijenhuis_at(S.jet(q))
    B = nijenhuis_fd(S, q)
    assert np.abs(A.values - B.values).max() < 1e-4
    res = A.residuals()
    assert max(res.values()) < 1e-9


@pytest.mark.parametrize(
    "name,label",
    [
        ("neqs3", "NDG(3)-candidate"),
        ("dg2_2", "DG2(2)"),
        ("n4_m1_transversal", "GENERAL(m=1, W∩Z=0)"),
        ("n4_m1_contained", "GENERAL(m=1, W⊂Z)"),
        ("zero3", "INTEGRABLE"),
    ],
)
def test_classify_examples(name, label):
    rep = classify(catalog.point_tensor(name))
    assert rep.type_label == label
    if name == "neqs3":
        assert rep.r_image == 3
    if name == "dg2_2":
        assert rep.image_in_kernel


@pytest.mark.parametrize("name", sorted(catalog.TENSOR_LABELS))
def test_catalog_labels(name):
    assert classify(catalog.point_tensor(name)).type_label == catalog.TENSOR_LABELS[name]


@pytest.mark.parametrize("name", sorted(catalog.FIXED_POINT_COUNTS))
def test_fixed_point_counts(name):
    fps, flags = phi_maps(catalog.point_tensor(name))
    pts = [f for f in fps if f.kind == "point"]
    t = sum(1 for f in pts if f.transversal)
    i = sum(1 for f in pts if f.incident)
    assert (t, i) == catalog.FIXED_POINT_COUNTS[name]
    assert "LOW_CONFIDENCE" not in flags


def _same_line(x, y) -> bool:
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    return abs(abs(np.vdot(x, y)) - np.linalg.norm(x) * np.linalg.norm(y)) < 1e-6


@pytest.mark.parametrize("name", ["ndg1", "ndg3"])
def test_newton_cross_check_on_simple_points(name):
    # transversal fixed points are simple roots, so Newton finds each of them
    pt = catalog.point_tensor(name)
    found, _ = newton_fixed_points(pt)
    fps, _ = phi_maps(pt)
    for f in fps:
        if f.transversal:
            v = [complex(*c) for c in f.vector]
            assert any(_same_line(v, x) for x in found)


def test_fixed_points_need_nondegenerate_tensor():
    with pytest.raises(PreconditionError):
        phi_maps(catalog.point_tensor("dg2_2"))


def test_basis_change_preserves_label():
    rng = np.random.default_rng(3)
    for name in ("ndg2", "neqs1", "dg1"):
        pt = catalog.point_tensor(name)
        g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert classify(pt.change_basis(g)).type_label == catalog.TENSOR_LABELS[name]


def test_point_tensor_json_roundtrip():
    pt = catalog.point_tensor("ndg1")
    assert np.allclose(PointTensor.from_json(pt.to_json()).c, pt.c)


# --- realization --------------------------------------------------------------


def test_realize_example_exact():
    r = realize_dim4("2*w_+w_^2", "w")
    assert r.alpha_exact == GaussRat(0, Fraction(-4, 3))
    assert r.beta_exact == GaussRat(0, 0)
    assert r.angle < 1e-6


def test_realize_preconditions():
    with pytest.raises(PreconditionError, match="B_w"):
        realize_dim4("2*w_", "z")
    with pytest.raises(PreconditionError):
        realize_dim4("2*w_", "w")


# --- Lemma 2 -------------------------------------------------------------------


def _generator_vs_image(S, point):
    v = lemma2_generator(S, point)
    q = point_to_real(S.vars, {S.vars.var_id(k): x for k, x in point.items()})
    W = complex_image(nijenhuis_at(S.jet(q)))
    return v, principal_angle(generator_plane(v), W)


def test_lemma2_alpha_zero_submax():
    S = Lemma1Structure.from_exprs("0", "w")
    v, ang = _generator_vs_image(S, {"z": 0.2, "w": 0.1j})
    assert ang < 1e-9
    assert abs(v[0]) + abs(v[1]) + abs(v[2]) < 1e-12 and abs(v[3]) > 0


def test_lemma2_alpha_zero_torus():
    S = Lemma1Structure.from_exprs("0", "exp(pi*i*(w+w_))")
    v, ang = _generator_vs_image(S, {"z": 0, "w": 0.3})
    assert ang < 1e-9
    beta = np.exp(np.pi * 1j * 0.6)
    assert v[3] == pytest.approx(-2j * np.pi * 1j * beta)


def test_lemma2_generic_matches_image():
    r = realize_dim4("2*w_+w_^2", "w")
    for p in ({"z": 0, "w": 0}, {"z": 0.1, "w": 0.05 - 0.02j}):
        _, ang = _generator_vs_image(r.structure, p)
        assert ang < 1e-6


# --- dimension 8 -----------------------------------------------------------------


def test_strong_normal_form_is_strongly_nondegenerate():
    P1, P2 = catalog.strong_splitting()
    rep = transversal_check(catalog.point_tensor("strong4"), P1, P2)
    assert rep.transversally_nondegenerate
    assert rep.strongly_nondegenerate
    assert rep.pairing_real_rank == 8


def test_zero_pairing():
    P1, P2 = catalog.strong_splitting()
    rep = transversal_check(PointTensor(4, np.zeros((4, 4, 4), complex)), P1, P2)
    assert rep.pairing_real_rank == 0
    assert not rep.anti_isomorphism


def test_non_invariant_plane_rejected():
    _, P2 = catalog.strong_splitting()
    e = np.eye(8)
    bad = RealSubspace.span([e[0], e[3], e[4], e[7]], 8)  # x1, y2, x3, y4
    with pytest.raises(PreconditionError):
        transversal_check(catalog.point_tensor("strong4"), bad, P2)


def test_plucker_counts():
    c4 = plucker_counts(4)
    assert c4["d"] == 2 and c4["dim_sigma"] == 0 and c4["deg_sigma"] == 2
    assert plucker_counts(5)["deg_sigma"] == 5
    with pytest.raises(PreconditionError):
        plucker_counts(3)
