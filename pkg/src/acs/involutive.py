"""Residuals of the involutive system for symmetries of the DG2(2) model
``J∂z = i∂z + ζ∂wbar, J∂ζ = i∂ζ, J∂w = i∂w`` (coordinates z, ζ, w)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import CoeffExpr, GaussRat, VarTable, parse, parse_constant

NOFOR_VARS = VarTable(("z", "zeta", "w"))


@dataclass
class ResidualCase:
    Z: CoeffExpr
    Xi: CoeffExpr
    W: CoeffExpr
    c: CoeffExpr

    @classmethod
    def from_strings(cls, Z: str, Xi: str, W: str, c: str = "1") -> "ResidualCase":
        vt = NOFOR_VARS
        const = parse_constant(c)
        return cls(parse(Z, vt), parse(Xi, vt), parse(W, vt), CoeffExpr.const(vt, const))


def nofor_residual(case: ResidualCase) -> list[tuple[str, CoeffExpr]]:
    """Five equations of the system and the components of dΩ; all vanish iff symmetric."""
    z, zeta, w = 0, 1, 2
    zb, zetab, wb = 3, 4, 5
    Z, Xi, W, c = case.Z, case.Xi, case.W, case.c
    vt = Z.vars
    half_i = CoeffExpr.const(vt, GaussRat(0, Fraction(1, 2)))
    zeta_e = CoeffExpr.var(vt, zeta)
    cb = c.conj()
    out = [
        ("Z_z Ξ_ζ - Z_ζ Ξ_z - c", Z.diff(z) * Xi.diff(zeta) - Z.diff(zeta) * Xi.diff(z) - c),
        ("W_w - conj(c)", W.diff(w) - cb),
        ("W_wbar", W.diff(wb)),
        ("W_zbar - (i/2)(conj(Z_z) conj(Ξ) - conj(c) zetabar)", W.diff(zb) - half_i * (Z.diff(z).conj() * Xi.conj() - cb * zeta_e.conj())),
        ("W_zetabar - (i/2) conj(Z_ζ) conj(Ξ)", W.diff(zetab) - half_i * Z.diff(zeta).conj() * Xi.conj()),
    ]
    P = Z.diff(z) * Xi - c * zeta_e
    Q = Z.diff(zeta) * Xi
    out.append(("dΩ[dz∧dζ]", Q.diff(z) - P.diff(zeta)))
    for v, name in ((zb, "zbar"), (zetab, "zetabar"), (w, "w"), (wb, "wbar")):
        out.append((f"dΩ[d{name}∧dz]", P.diff(v)))
        out.append((f"dΩ[d{name}∧dζ]", Q.diff(v)))
    return out


def is_symmetry(case: ResidualCase) -> bool:
    return all(e.is_zero() for _, e in nofor_residual(case))
