import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from acs import catalog
from acs.acstruct import parse_point, point_to_real
from acs.clinalg import (
    AntilinearMap2,
    CpxStructuredSpace,
    RealSubspace,
    c2r,
    complex_image,
    perp_set,
    r2c,
    rank_and_kernel,
    standard_j,
)
from acs.nijenhuis import nijenhuis_at


def test_rank_and_kernel_trivial():
    r, K = rank_and_kernel(np.eye(4))
    assert r == 4 and K.dim == 0
    r, K = rank_and_kernel(np.zeros((4, 4)))
    assert r == 0 and K.dim == 4


def test_neqs3_pair_map_rank():
    # Λ²T -> T has full rank 6 and complex kernel of dimension n²/2 - 3n/2 = 0 (n = 3)
    N = catalog.point_tensor("neqs3").to_map()
    M = N.pair_matrix()
    r, _ = rank_and_kernel(M)
    assert r == 6
    # on the complex exterior square (3 complex pairs) the map is injective
    pt = catalog.point_tensor("neqs3")
    assert np.linalg.matrix_rank(pt.image_matrix()) == 3


def test_complex_image_examples():
    z = AntilinearMap2(CpxStructuredSpace.standard(2), np.zeros((4, 4, 4)))
    assert complex_image(z).dim == 0
    S = catalog.chart("submax")
    for text in ("z=0,w=0.3", "z=1-i,w=-0.2i"):
        N = nijenhuis_at(S.jet(point_to_real(S.vars, parse_point(text, S.vars))))
        W = complex_image(N)
        assert W.dim == 2
        # the line of d/dwbar: real directions (x_w, y_w)
        assert W.contains(np.array([0, 0, 1, 0.0])) and W.contains(np.array([0, 0, 0, 1.0]))
    assert complex_image(catalog.point_tensor("neqs3").to_map()).dim == 6


def test_perp_set_examples():
    N = catalog.point_tensor("neqs3").to_map()
    assert perp_set(N, RealSubspace.zero(6)).dim == 6
    assert perp_set(N, RealSubspace.full(6)).dim == 0
    N = catalog.point_tensor("dg2_2").to_map()
    W = complex_image(N)
    assert perp_set(N, W).contains_subspace(W)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(catalog._REL)), st.integers(0, 10_000))
def test_outputs_are_j_invariant(name, seed):
    pt = catalog.point_tensor(name)
    N = pt.to_map()
    J0 = N.space.J0
    rng = np.random.default_rng(seed)
    W = complex_image(N)
    assert W.is_invariant(J0)
    S = RealSubspace.span(rng.normal(size=(2, N.space.real_dim)), N.space.real_dim)
    P = perp_set(N, S)
    Pm = P.projector()
    assert np.linalg.norm((np.eye(len(Pm)) - Pm) @ J0 @ Pm) < 1e-9


def test_rank_stable_under_tolerance():
    for name in catalog._REL:
        M = catalog.point_tensor(name).to_map().pair_matrix()
        ranks = {rank_and_kernel(M, tol)[0] for tol in (1e-10, 1e-9, 1e-8, 1e-7)}
        assert len(ranks) == 1, name


def test_c2r_roundtrip_and_standard_j():
    v = np.array([1 + 2j, -0.5j])
    assert np.allclose(r2c(c2r(v)), v)
    J = standard_j(2)
    assert np.allclose(J @ J, -np.eye(4))
    assert np.allclose(r2c(J @ c2r(v)), 1j * v)


def test_antilinearity_of_catalog_maps():
    for name in catalog._REL:
        res = catalog.point_tensor(name).to_map().residuals()
        assert max(res.values()) < 1e-12, name
