import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acs.expr import (
    CoeffExpr,
    EvalError,
    ExprSyntaxError,
    GaussRat,
    NonAffineExp,
    UnknownIdentifier,
    VarTable,
    parse,
    parse_constant,
)

VT = VarTable(("z", "w"))
NAMES = ["z", "w", "z_", "w_"]


def test_monomial():
    e = parse("w", VT)
    assert len(e.terms) == 1
    assert e.evaluate({1: 1 + 1j}) == 1 + 1j


def test_torus_exponential_single_term():
    e = parse("exp(pi*i*(w + w_))", VT)
    assert len(e.terms) == 1
    (mono, lam), c = next(iter(e.terms.items()))
    assert mono == ()
    assert dict(lam) == pytest.approx({1: math.pi * 1j, 3: math.pi * 1j})
    assert complex(c) == 1
    assert e.evaluate({1: 0.5}) == pytest.approx(-1)


def test_polynomial_literal():
    e = parse("2*w_ + w_^2", VT)
    assert len(e.terms) == 2
    assert e.evaluate({1: 0}) == 0


def test_diff_examples():
    w = parse("w", VT)
    assert parse("w^2", VT).diff("w") == parse("2*w", VT)
    E = parse("exp(pi*i*(w + w_))", VT)
    assert E.diff("w") == CoeffExpr.const(VT, math.pi * 1j) * E
    assert parse("z*w_", VT).diff("w").is_zero()
    assert w.diff("w_").is_zero()


def test_exact_constants():
    e = parse("(1/3)*i*w - 2/5", VT)
    assert e.is_exact()
    v = e.evaluate_exact({1: GaussRat(3, 0)})
    assert v == GaussRat(Fraction(-2, 5), 1)


def test_errors():
    with pytest.raises(ExprSyntaxError):
        parse("w +* z", VT)
    with pytest.raises(UnknownIdentifier):
        parse("q", VT)
    with pytest.raises(NonAffineExp):
        parse("exp(w^2)", VT)
    with pytest.raises(EvalError):
        parse("w", VT).evaluate({1: 1, 3: 2})
    assert parse_constant("i/2") == GaussRat(0, Fraction(1, 2))


# --- generated expressions -------------------------------------------------

coeffs = st.sampled_from(["1", "2", "-3", "(1/2)", "i", "(2-i)", "pi"])
monos = st.lists(st.sampled_from(NAMES + ["w^2", "z_^3"]), min_size=0, max_size=3)


@st.composite
def exprs(draw):
    terms = []
    for _ in range(draw(st.integers(1, 4))):
        c = draw(coeffs)
        m = draw(monos)
        t = "*".join([c] + m)
        if draw(st.booleans()):
            a, b = draw(st.sampled_from(NAMES)), draw(st.sampled_from(NAMES))
            t += f"*exp((1/2)*{a} - i*{b})"
        terms.append(t)
    return parse(" + ".join(terms), VT)


points = st.tuples(*[st.floats(-1, 1) for _ in range(4)]).map(lambda t: {0: complex(t[0], t[1]), 1: complex(t[2], t[3])})


@settings(max_examples=100, deadline=None)
@given(exprs())
def test_print_parse_roundtrip(e):
    assert parse(str(e), VT) == e


@settings(max_examples=60, deadline=None)
@given(exprs(), st.sampled_from(NAMES), st.sampled_from(NAMES))
def test_mixed_partials_commute(e, u, v):
    assert e.diff(u).diff(v) == e.diff(v).diff(u)


@settings(max_examples=60, deadline=None)
@given(exprs(), st.sampled_from(NAMES))
def test_conjugation(e, v):
    assert e.conj().conj() == e
    vb = VT.conj(VT.var_id(v))
    assert e.conj().diff(v) == e.diff(vb).conj()


@settings(max_examples=120, deadline=None)
@given(exprs(), points, st.sampled_from(["z", "w"]))
def test_wirtinger_derivative_matches_finite_differences(e, p, v):
    # d/dx = ∂_v + ∂_vbar, d/dy = i(∂_v - ∂_vbar)
    vid = VT.var_id(v)
    h = 1e-5
    f = lambda dz: e.evaluate({**p, vid: p[vid] + dz})  # noqa: E731
    dx = (f(h) - f(-h)) / (2 * h)
    dy = (f(1j * h) - f(-1j * h)) / (2 * h)
    dv = e.diff(vid).evaluate(p)
    dvb = e.diff(VT.conj(vid)).evaluate(p)
    scale = max(1.0, abs(dx), abs(dy))
    assert abs(dx - (dv + dvb)) <= 1e-6 * scale
    assert abs(dy - 1j * (dv - dvb)) <= 1e-6 * scale


def test_evaluate_is_consistent_with_cmath():
    e = parse("exp(z - 2*i*z_)", VT)
    z = 0.3 - 0.4j
    assert e.evaluate({0: z}) == pytest.approx(cmath.exp(z - 2j * z.conjugate()))
