import random

import numpy as np
import pytest

from acs import catalog
from acs.involutive import ResidualCase, is_symmetry, nofor_residual
from acs.nijenhuis import classify, nijenhuis_at


def test_self_test_clean():
    assert catalog.self_test() == []


def test_resolve_prefix():
    assert catalog.resolve("models:neqs3") is catalog.point_tensor("neqs3")
    with pytest.raises(KeyError):
        catalog.resolve("models:nope")


@pytest.mark.parametrize("name", ["submax", "torus", "onfor", "nofor", "m1", "m2", "generic4"])
def test_chart_labels_at_a_point(name):
    S = catalog.chart(name)
    q = np.full(2 * S.n, 0.2)
    assert classify(nijenhuis_at(S.jet(q))).type_label == catalog.CHART_LABELS[name]


def test_flat_charts_are_integrable():
    for name in ("flat2", "flat3", "flat4"):
        S = catalog.chart(name)
        assert classify(nijenhuis_at(S.jet(np.zeros(2 * S.n)))).type_label == "INTEGRABLE"


# --- (nofor) symmetry residuals ------------------------------------------------


def test_identity_is_symmetry():
    assert is_symmetry(ResidualCase.from_strings("z", "zeta", "w"))


@pytest.mark.parametrize("psi", ["z^2*zeta", "3*z - i*zeta^3", "exp(2*z + zeta)"])
def test_shift_family(psi):
    assert is_symmetry(ResidualCase.from_strings("z", "zeta", f"w + {psi}"))


def test_z_squared_fails():
    res = dict(nofor_residual(ResidualCase.from_strings("z^2", "zeta", "w")))
    assert not res["Z_z Ξ_ζ - Z_ζ Ξ_z - c"].is_zero()


def test_random_non_symmetries_fail():
    rng = random.Random(0)
    for _ in range(10):
        a = rng.randint(2, 5)
        Z = rng.choice(["z", f"z + {a}*zeta_", f"{a}*z", "z + zeta^2"])
        W = rng.choice([f"w + {a}*w_", f"{a}*w", "w + z_"])
        case = ResidualCase.from_strings(Z, "zeta", W)
        assert not is_symmetry(case)
        assert any(not e.is_zero() for _, e in nofor_residual(case))
