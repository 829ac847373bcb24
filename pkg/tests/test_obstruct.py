import pytest
from hypothesis import given
from hypothesis import strategies as st

from acs.obstruct import (
    ADMITS,
    EXCLUDED,
    UNDETERMINED,
    cp2sum_check,
    cp3_check,
    dim4_check,
    dim6_check,
    dim8_check,
    typeii_check,
)


@pytest.mark.parametrize(
    "chi,tau,verdict",
    [(24, -16, EXCLUDED), (12, -8, EXCLUDED), (0, 0, ADMITS)],
)
def test_dim4(chi, tau, verdict):
    assert dim4_check(chi, tau).verdict == verdict


def test_dim4_reports_wu_as_info_only():
    rep = dim4_check(0, 0)
    assert rep.info["c1^2 (Wu: 2χ+3τ)"] == 0
    assert all("Wu" not in c.name for c in rep.checks)


@pytest.mark.parametrize("r,s,verdict", [(1, 21, ADMITS), (1, 20, EXCLUDED), (3, 43, ADMITS), (2, 32, EXCLUDED)])
def test_cp2sum(r, s, verdict):
    assert cp2sum_check(r, s).verdict == verdict


@given(st.integers(0, 200), st.integers(0, 2000))
def test_dim4_and_cp2sum_agree(r, s):
    assert dim4_check(2 + r + s, r - s).admits == cp2sum_check(r, s).admits


@pytest.mark.parametrize("m,n,verdict", [(3, 5, ADMITS), (3, 4, EXCLUDED), (7, 10, ADMITS)])
def test_typeii(m, n, verdict):
    assert typeii_check(m, n).verdict == verdict


def test_dim6():
    assert dim6_check(True, True, 0).admits
    assert dim6_check(True, True, 24).verdict == EXCLUDED


def test_cp3_family():
    assert [r for r in range(-5, 6) if cp3_check(r).admits] == [0]
    assert cp3_check(2).verdict == EXCLUDED and cp3_check(-1).verdict == EXCLUDED
    assert cp3_check(0).note.startswith("UNDETERMINED-ADMITS")


def test_dim8_strong():
    assert dim8_check(0, 0, 0, 0, 0, "strong").admits
    rep = dim8_check(0, 0, 0, 0, 720, "strong")
    st_ = {c.name: c.status for c in rep.checks}
    assert st_["c4 ≡ 0 mod 720"] == "pass"
    assert st_["torsion-free: all Chern numbers vanish"] == "fail"
    assert rep.verdict == EXCLUDED
    rep = dim8_check(0, 0, 0, 0, 0, "strong", torsion_free=False)
    assert rep.verdict == UNDETERMINED


def test_dim8_transversal():
    assert dim8_check(0, 0, 0, 0, 2, "transversal").verdict == EXCLUDED
    assert dim8_check(0, 0, 0, 0, 0, "transversal").verdict == UNDETERMINED
    assert dim8_check(0, 0, 0, 0, 0, "transversal", q4=0).verdict == ADMITS


def test_bad_inputs():
    with pytest.raises(ValueError):
        dim8_check(0, 0, 0, 0, 0, "weird")
    with pytest.raises(ValueError):
        cp2sum_check(-1, 0)


def test_deterministic_reports():
    assert dim4_check(24, -16).to_json() == dim4_check(24, -16).to_json()
