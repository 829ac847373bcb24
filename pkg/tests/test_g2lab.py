from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acs import catalog
from acs.g2lab import (
    ComplexBracket,
    abelian_algebra,
    build_algebra,
    complex_jacobi,
    dz,
    hermitian_data,
    jacobi_check,
    killing_form,
    pattern_triples,
    real_basis,
    solve_k,
)
from acs.expr import GaussRat
from acs.nijenhuis import PointTensor


@pytest.fixture(scope="module")
def su3():
    return build_algebra("su3")


def test_su3_jacobi_exact(su3):
    rep = jacobi_check(su3)
    assert rep.checked == 364 and rep.passed


def test_su3_trace_zero_identity():
    br = ComplexBracket("su3", GaussRat(3))
    s = br(dz(0), br(dz(1), dz(2))) + br(dz(1), br(dz(2), dz(0))) + br(dz(2), br(dz(0), dz(1)))
    assert s.is_zero()


def test_su3_killing(su3):
    K = killing_form(su3)
    assert K.negative_definite and K.rank == 14 and K.signature == (0, 14)
    assert K.h_signature == (0, 8) and K.h_rank == 8


def test_constants_antisymmetric(su3):
    n = su3.dim
    for i in range(n):
        for j in range(n):
            assert su3.consts[i][j] == [-x for x in su3.consts[j][i]]
            assert all(isinstance(x, Fraction) for x in su3.consts[i][j])


@pytest.mark.parametrize("case", ["su3", "su21"])
def test_h_block_matches_matrix_commutators(case):
    basis, _ = real_basis(case)
    br = ComplexBracket(case, GaussRat(3 if case == "su3" else 2))
    h = basis[:8]

    def mat(x):
        return np.array([[complex(c) for c in row] for row in x.A])

    for x in h:
        for y in h:
            A, B = mat(x), mat(y)
            assert np.array_equal(mat(br(x, y)), A @ B - B @ A)


def test_su21_k_solver():
    assert solve_k("su21", pattern_triples(1, 2)) == {"all": False, "values": [Fraction(2)]}
    assert solve_k("su21") == {"all": False, "values": []}
    assert solve_k("su3")["all"]


def test_su21_contradiction_triple():
    r = complex_jacobi("su21", 2, (("zb", 0), ("z", 0), ("z", 2)))
    assert r == dz(2).scale(GaussRat(-4))


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=50))
def test_su21_never_a_lie_algebra(k):
    rep = jacobi_check(build_algebra("su21", k))
    assert not rep.passed


def test_abelian():
    A = abelian_algebra()
    assert jacobi_check(A).passed
    K = killing_form(A, force=True)
    assert K.rank == 0 and all(x == 0 for row in K.matrix for x in row)


def test_hermitian_signatures():
    H = hermitian_data(catalog.point_tensor("neqs3"))
    assert H.signature == (6, 0)
    assert np.allclose(H.h, np.eye(6))
    assert H.omega_vol == pytest.approx(2) and H.identity_residual < 1e-12
    assert hermitian_data(catalog.point_tensor("neqs2")).signature == (4, 2)


@pytest.mark.parametrize("name", ["neqs1", "neqs2", "neqs3", "ndg1", "ndg3"])
def test_h_is_hermitian(name):
    H = hermitian_data(catalog.point_tensor(name))
    J = np.kron(np.eye(3), np.array([[0, -1], [1, 0]]))
    assert np.abs(J.T @ H.h @ J - H.h).max() < 1e-12
    assert np.abs(H.h - H.h.T).max() < 1e-12


def test_hermitian_of_zero():
    H = hermitian_data(PointTensor(3, np.zeros((3, 3, 3), complex)))
    assert np.abs(H.h).max() == 0 and H.signature == (0, 0)
