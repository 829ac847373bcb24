import numpy as np
import pytest

from acs import catalog
from acs.nijenhuis import PointTensor
from acs.symbol import (
    SizeGuardError,
    char_variety,
    containment_residual,
    flat_symbol_dim,
    gamma1,
    gamma2,
    gamma_k,
    njj_residual,
    submaximal_bound,
    symbol_tower,
)


def zero(n):
    return PointTensor(n, np.zeros((n, n, n), complex))


@pytest.mark.parametrize("n", [2, 3])
def test_zero_tensor_gives_everything(n):
    assert gamma1(zero(n)).dim == 2 * n * n
    for k in (2, 3):
        assert gamma_k(zero(n), k).dim == flat_symbol_dim(n, k)


def test_neqs3_is_su3():
    g = gamma1(catalog.point_tensor("neqs3"))
    assert g.dim == 8
    mats = list(g.basis)
    # closed under commutators
    for A in mats:
        for B in mats:
            assert g.contains(A @ B - B @ A)
    # trace form Re tr(AB) is negative definite: compact real form
    K = np.array([[np.trace(A @ B).real for B in mats] for A in mats])
    assert np.all(np.linalg.eigvalsh(K) < 0)


def test_dg2_2_gamma1_contents():
    pt = catalog.point_tensor("dg2_2")
    g = gamma1(pt)
    E = lambda i, j: np.outer(np.eye(3)[i], np.eye(3)[j]).astype(complex)  # noqa: E731
    # sl2(C) on <X1, X2> and maps Pi -> <X3>
    sl2 = [E(0, 1), E(1, 0), E(0, 0) - E(1, 1)]
    pi_to_x3 = [E(2, 0), E(2, 1)]
    for b in sl2 + pi_to_x3:
        assert g.contains(b) and g.contains(1j * b)
    # two further real directions: gl2 trace part coupled to the X3 weight
    assert g.contains(np.diag([1, 1, 2]).astype(complex))
    assert g.contains(np.diag([1j, 1j, -2j]))
    assert not g.contains(np.diag([1j, 1j, 2j]))
    assert g.dim == 12
    assert not g.is_complex()


def test_gamma2_examples():
    assert gamma2(catalog.point_tensor("neqs3")).dim == 0
    assert gamma2(catalog.point_tensor("dim4")).dim == 2


def test_gamma2_satisfies_njj_and_containment():
    for name in ("dim4", "dg2_1", "dg2_2", "dg1"):
        pt = catalog.point_tensor(name)
        g = gamma2(pt)
        for H in g.basis:
            assert njj_residual(pt, H) < 1e-9
            assert containment_residual(pt, H) < 1e-9


def test_towers():
    t = symbol_tower(catalog.point_tensor("dim4"), 5)
    assert t.dims[1:] == [2, 2, 2, 2]
    t = symbol_tower(catalog.point_tensor("neqs3"), 3)
    assert t.finite_type and t.dims == [8, 0]  # stops at the first zero
    t = symbol_tower(zero(2), 4)
    assert t.dims == [flat_symbol_dim(2, k) for k in range(1, 5)]
    assert t.checks["prolongation"] and t.checks["njj"] < 1e-9


def test_size_guard():
    with pytest.raises(SizeGuardError):
        gamma_k(catalog.point_tensor("dim4"), 7)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flat_char_variety(n):
    r = char_variety(zero(n), samples=5)
    assert (r.p_complex, r.zeta_real) == (n, 2 * n)


@pytest.mark.parametrize(
    "name,p,k",
    [("dg2_2", 2, 2), ("dim4", 1, 1), ("dg2_1", 2, 1)],
)
def test_char_variety_examples(name, p, k):
    r = char_variety(catalog.point_tensor(name), samples=10)
    assert (r.p_complex, r.kernel_rank_complex) == (p, k)
    assert r.phrase == f"{k} complex functions of {p} arguments"


def test_finite_type_has_no_char_variety():
    r = char_variety(catalog.point_tensor("neqs3"), samples=5)
    assert r.p_complex is None and r.kernel_rank_complex == 0


def test_submaximal_bound_table():
    assert [submaximal_bound(n) for n in range(2, 7)] == [(1, 1), (2, 2), (3, 2), (4, 3), (5, 4)]
