"""Four-dimensional almost complex structures.

Vector fields here are numerical: callables ``q -> R^4`` on real coordinates
``(x_z, y_z, x_w, y_w)``.  Brackets and directional derivatives use a
fourth-order central stencil.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .acstruct import ChartStructure, StructureError, point_to_real
from .expr import CoeffExpr, GaussRat, VarTable, parse
from .nijenhuis import PreconditionError, nijenhuis_at

FD_STEP = 2e-4

Field = Callable[[np.ndarray], np.ndarray]


def _as_q(S, point) -> np.ndarray:
    if isinstance(point, Mapping):
        pt = {S.vars.var_id(k) if isinstance(k, str) else k: v for k, v in point.items()}
        return point_to_real(S.vars, pt)
    return np.asarray(point, float)


def directional(f: Callable, q: np.ndarray, u: np.ndarray, h: float = FD_STEP):
    """D f(q)[u], fourth-order central differences."""
    return (-f(q + 2 * h * u) + 8 * f(q + h * u) - 8 * f(q - h * u) + f(q - 2 * h * u)) / (12 * h)


def bracket(X: Field, Y: Field, h: float = FD_STEP) -> Field:
    return lambda q: directional(Y, q, X(q), h) - directional(X, q, Y(q), h)


def n_map(S, q):
    return nijenhuis_at(S.jet(q), check=False)


def _pick_pair(S, q) -> tuple[int, int]:
    N = n_map(S, q)
    best, pair = -1.0, (0, 1)
    for a in range(4):
        for b in range(a + 1, 4):
            v = np.linalg.norm(N.values[:, a, b])
            if v > best:
                best, pair = v, (a, b)
    if best < 1e-12:
        raise PreconditionError("N = 0 at the point")
    return pair


def section_fields(S, q0, seed: int | None = None) -> tuple[Field, Field]:
    """s = g0 * N(e_a, e_b) and J s, with g0 a unit complex constant picked by seed."""
    a, b = _pick_pair(S, q0)
    if seed is None:
        g0 = 1.0 + 0j
    else:
        rng = np.random.default_rng(seed)
        g0 = complex(rng.normal(), rng.normal())
        g0 /= abs(g0)
    E = np.eye(4)

    def s(q):
        base = n_map(S, q).values[:, a, b]
        return g0.real * base + g0.imag * (S.j_real(q) @ base)

    def js(q):
        return S.j_real(q) @ s(q)

    return s, js


@dataclass
class DerivedDistribution:
    rank3: bool
    basis: np.ndarray  # rows s, Js, [s, Js]
    margin: float

    def to_json(self) -> dict:
        return {"rank3": self.rank3, "basis": self.basis.tolist(), "margin": self.margin}


def derived_distribution(S, point, tol: float = 1e-6) -> DerivedDistribution:
    q = _as_q(S, point)
    s, js = section_fields(S, q)
    c = bracket(s, js)(q)
    B = np.array([s(q), js(q), c])
    sv = np.linalg.svd(B, compute_uv=False)
    ratio = float(sv[2] / sv[0])
    return DerivedDistribution(ratio > tol, B, ratio)


@dataclass
class EStructure:
    point: np.ndarray
    frame: np.ndarray  # rows xi_1 .. xi_4
    sign_ambiguity: bool = True
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "point": self.point.tolist(),
            "frame": self.frame.tolist(),
            "sign_ambiguity": self.sign_ambiguity,
            "residuals": self.residuals,
        }


def _sign_fix(v: np.ndarray) -> float:
    for x in v:
        if abs(x) > 1e-12:
            return 1.0 if x > 0 else -1.0
    return 1.0


def e_structure(S, point, seed: int | None = None, h: float = FD_STEP) -> EStructure:
    q0 = _as_q(S, point)
    if not derived_distribution(S, q0).rank3:
        raise PreconditionError("Π integrable: derived distribution has rank 2, no e-structure")
    s, js = section_fields(S, q0, seed)
    cfield = bracket(s, js, h)

    def mu(q):
        # N(s, c) = mu s, with complex numbers acting through J
        v = n_map(S, q).apply(s(q), cfield(q))
        B = np.array([s(q), js(q)]).T
        coef, *_ = np.linalg.lstsq(B, v, rcond=None)
        return complex(coef[0], coef[1])

    mu0 = mu(q0)
    theta0 = np.angle(mu0) / 2

    def g(q):
        m = mu(q)
        th = theta0 + np.angle(m / mu0) / 2
        return abs(m) ** -0.5 * np.exp(1j * th)

    sign = 1.0
    g0 = g(q0)
    x1_0 = g0.real * s(q0) + g0.imag * js(q0)
    sign = _sign_fix(x1_0)

    def a_f(q):
        return sign * g(q).real

    def b_f(q):
        return sign * g(q).imag

    def xi1(q):
        return a_f(q) * s(q) + b_f(q) * js(q)

    def xi2(q):
        return S.j_real(q) @ xi1(q)

    sq, jsq, cq = s(q0), js(q0), cfield(q0)
    a, b = a_f(q0), b_f(q0)
    sa, sb = directional(a_f, q0, sq, h), directional(b_f, q0, sq, h)
    ja, jb = directional(a_f, q0, jsq, h), directional(b_f, q0, jsq, h)
    x3 = (a * a + b * b) * cq + (a * sa + b * sb) * jsq - (a * ja + b * jb) * sq + (b * sa - a * sb) * sq + (b * ja - a * jb) * jsq
    J0 = S.j_real(q0)
    x1 = xi1(q0)
    frame = np.array([x1, J0 @ x1, x3, J0 @ x3])
    N0 = n_map(S, q0)
    res = {
        "N(xi1,xi3)-xi1": float(np.linalg.norm(N0.apply(x1, x3) - x1)),
        "[xi1,xi2]-xi3": float(np.linalg.norm(bracket(xi1, xi2, h)(q0) - x3)),
        "det": float(np.linalg.det(frame)),
    }
    return EStructure(q0, frame, True, res)


def quotient_circle(S, point, v) -> float:
    """|det N(v, .)|_Π| as an endomorphism of Π."""
    q = _as_q(S, point)
    N = n_map(S, q)
    s, js = section_fields(S, q)
    B = np.array([s(q), js(q)]).T
    v = np.asarray(v, float)
    coef, *_ = np.linalg.lstsq(B, v, rcond=None)
    if np.linalg.norm(B @ coef - v) <= 1e-9 * max(1.0, np.linalg.norm(v)):
        raise PreconditionError("v lies in Π")
    M = np.array([np.linalg.lstsq(B, N.apply(v, B[:, k]), rcond=None)[0] for k in range(2)]).T
    return float(abs(np.linalg.det(M)))


# ---------------------------------------------------------------------
# adapted form  J∂z = i∂z + b∂wbar, J∂w = i∂w
# ---------------------------------------------------------------------


def adapted_b(S: ChartStructure) -> CoeffExpr:
    if S.n != 2:
        raise StructureError("adapted form needs complex dimension 2")
    i_ = CoeffExpr.const(S.vars, 1j)
    zero = CoeffExpr.zero(S.vars)
    a, b = S.a, S.b
    ok = a[0][0] == i_ and a[0][1] == zero and a[1][0] == zero and a[1][1] == i_
    ok = ok and b[0][0] == zero and b[1][0] == zero and b[1][1] == zero
    if not ok:
        raise StructureError("structure is not in the adapted form J∂z = i∂z + b∂wbar, J∂w = i∂w")
    return b[0][1]


@dataclass
class ProjectibilityReport:
    j_residual: list
    n_residual: list

    @property
    def j_projectible(self) -> bool:
        return all(e.is_zero() for e in self.j_residual)

    @property
    def n_projectible(self) -> bool:
        return all(e.is_zero() for e in self.n_residual)

    def to_json(self) -> dict:
        return {
            "j_residual": [str(e) for e in self.j_residual],
            "n_residual": [str(e) for e in self.n_residual],
            "j_projectible": self.j_projectible,
            "n_projectible": self.n_projectible,
        }


def projectibility_residual(S: ChartStructure) -> ProjectibilityReport:
    bexp = adapted_b(S)
    w, wb = 1, 3
    block = [S.a[0][0], S.b[0][0]]
    jres = [e.diff(v) for e in block for v in (w, wb)]
    bw = bexp.diff(w)
    return ProjectibilityReport(jres, [bw.diff(w), bw.diff(wb)])


def symmetry_residual(S: ChartStructure, f: CoeffExpr | str) -> tuple[CoeffExpr, CoeffExpr]:
    bexp = adapted_b(S)
    vt = S.vars
    f = parse(f, vt) if isinstance(f, str) else f
    z, w, zb, wb = 0, 1, 2, 3
    psi = CoeffExpr.const(vt, GaussRat(0, Fraction(1, 2))) * bexp.conj()
    r0 = f.diff(wb)
    r1 = f.diff(zb) + psi * f.diff(w) - f * psi.diff(w) - f.conj() * psi.diff(wb)
    return r0, r1


@dataclass
class GaugeInvariants:
    lambda_num: CoeffExpr  # λ_{z zbar} λ - λ_z λ_zbar
    lambda_den: CoeffExpr  # λ^2
    q: CoeffExpr  # λ^2 conj(λ)^2

    def lambda_at(self, point) -> complex:
        d = self.lambda_den.evaluate(point)
        if abs(d) == 0:
            raise PreconditionError("λ = 0 at the sample point")
        return self.lambda_num.evaluate(point) / d

    def to_json(self) -> dict:
        return {"lambda_num": str(self.lambda_num), "lambda_den": str(self.lambda_den), "Q": str(self.q)}


def gauge_invariants(lam: CoeffExpr | str, vars: VarTable | None = None) -> GaugeInvariants:
    vars = vars or VarTable(("z",))
    lam = parse(lam, vars) if isinstance(lam, str) else lam
    z = vars.var_id("z")
    zb = vars.conj(z)
    num = lam.diff(z).diff(zb) * lam - lam.diff(z) * lam.diff(zb)
    return GaugeInvariants(num, lam * lam, lam * lam * lam.conj() * lam.conj())


def gauge_invariants_numeric(lam: Callable[[complex], complex], z: complex, h: float = 1e-3) -> tuple[complex, float]:
    """(∂z∂zbar log λ, |λ|^4) at z for a callable λ, by finite differences of log λ."""

    def L(p):
        return np.log(lam(p))

    lap = (
        -L(z + 2 * h) + 16 * L(z + h) - 30 * L(z) + 16 * L(z - h) - L(z - 2 * h)
        - L(z + 2j * h) + 16 * L(z + 1j * h) - 30 * L(z) + 16 * L(z - 1j * h) - L(z - 2j * h)
    ) / (12 * h * h)
    return complex(lap / 4), float(abs(lam(z)) ** 4)
