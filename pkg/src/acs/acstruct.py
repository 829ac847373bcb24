"""Almost complex structures given in a complex coordinate chart.

``J dz_i = sum_j a_ij dz_j + b_ij dzbar_j`` (written with ``d`` for the frame
vector ``∂``) and the action on ``∂zbar_i`` is the conjugate row.  In the
complexified frame ``(∂z_1..∂z_n, ∂zbar_1..∂zbar_n)`` this is the matrix ``Jc``
whose i-th column is ``(a_i., b_i.)``.  Real coordinates are ordered
``(x1, y1, x2, y2, ...)``.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .clinalg import AntilinearMap2, CpxStructuredSpace
from .expr import CoeffExpr, GaussRat, VarTable, parse

__all__ = [
    "ChartStructure",
    "VectorField",
    "PointJet",
    "Jet1",
    "Lemma1Structure",
    "StructureError",
    "complex_to_real_matrix",
    "point_to_real",
    "real_to_point",
    "lie_bracket",
    "jet_at",
    "validate",
]


class StructureError(ValueError):
    pass


def _p_matrix(n: int) -> np.ndarray:
    """P with ``c = P r``: real coords to complexified frame components."""
    P = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        P[j, 2 * j] = 1
        P[j, 2 * j + 1] = 1j
        P[n + j, 2 * j] = 1
        P[n + j, 2 * j + 1] = -1j
    return P


def complex_to_real_matrix(Mc: np.ndarray) -> np.ndarray:
    n = Mc.shape[0] // 2
    P = _p_matrix(n)
    R = np.linalg.solve(P, Mc @ P)
    return R.real


def real_vec_to_complex(r) -> np.ndarray:
    """Complexified components ``(c, conj c)`` of a real vector."""
    r = np.asarray(r, dtype=float)
    c = r[0::2] + 1j * r[1::2]
    return np.concatenate([c, c.conj()])


def complex_vec_real_parts(u) -> tuple[np.ndarray, np.ndarray]:
    """Real vectors Re(u) and Im(u) of a complexified vector u."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0] // 2
    p, q = u[:n], u[n:]
    re_c = (p + q.conj()) / 2
    im_c = (p - q.conj()) / (2j)
    def rv(c):
        r = np.empty(2 * n)
        r[0::2] = c.real
        r[1::2] = c.imag
        return r
    return rv(re_c), rv(im_c)


def point_to_real(vars: VarTable, point: Mapping) -> np.ndarray:
    q = np.zeros(2 * vars.n)
    for key, val in point.items():
        vid = vars.var_id(key)
        val = complex(val)
        if vid >= vars.n:
            vid -= vars.n
            val = val.conjugate()
        q[2 * vid] = val.real
        q[2 * vid + 1] = val.imag
    return q


def real_to_point(vars: VarTable, q) -> dict[int, complex]:
    return {k: complex(q[2 * k], q[2 * k + 1]) for k in range(vars.n)}


def parse_point(text: str | None, vars: VarTable) -> dict[int, complex]:
    """Parse ``"z=0.1+0.2i,w=0"``; unspecified coordinates default to 0."""
    out = {k: 0j for k in range(vars.n)}
    if not text:
        return out
    from .expr import parse_constant

    for item in text.split(","):
        if not item.strip():
            continue
        name, _, val = item.partition("=")
        vid = vars.lookup(name.strip())
        v = complex(parse_constant(_imag_suffix(val.strip())))
        if vid >= vars.n:
            vid, v = vid - vars.n, v.conjugate()
        out[vid] = v
    return out


def _imag_suffix(text: str) -> str:
    # allow "0.2i" as shorthand for "0.2*i"
    import re

    return re.sub(r"(\d)i\b", r"\1*i", text)


# ---------------------------------------------------------------------
# point jets
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class PointJet:
    """Realified J and its first partials ``dJ[m] = ∂J/∂r_m`` at a point."""

    point: np.ndarray
    J: np.ndarray = field(repr=False)
    dJ: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = self.J.shape[0]
        if np.linalg.norm(self.J @ self.J + np.eye(d)) > 1e-9 * max(1.0, np.linalg.norm(self.J)) ** 2:
            raise StructureError("jet J does not square to -1")

    @property
    def n(self) -> int:
        return self.J.shape[0] // 2

    def space(self) -> CpxStructuredSpace:
        return CpxStructuredSpace(2 * self.n, self.J)

    def directional(self, u) -> np.ndarray:
        """∂_u J."""
        return np.einsum("m,mij->ij", np.asarray(u, float), self.dJ)


def jet_from_complex(q, Jc: np.ndarray, dJc_complex: np.ndarray) -> PointJet:
    """Build a jet from Jc and its Wirtinger derivatives ``dJc[v]`` (v over 2n var ids)."""
    n = Jc.shape[0] // 2
    P = _p_matrix(n)
    Pinv = np.linalg.inv(P)
    J = (Pinv @ Jc @ P).real
    dJ = np.zeros((2 * n, 2 * n, 2 * n))
    for j in range(n):
        dx = dJc_complex[j] + dJc_complex[n + j]
        dy = 1j * (dJc_complex[j] - dJc_complex[n + j])
        dJ[2 * j] = (Pinv @ dx @ P).real
        dJ[2 * j + 1] = (Pinv @ dy @ P).real
    return PointJet(np.asarray(q, float), J, dJ)


# ---------------------------------------------------------------------
# chart structures
# ---------------------------------------------------------------------


class ChartStructure:
    """J given by expression rows over a :class:`VarTable`."""

    def __init__(self, vars: VarTable, a: Sequence[Sequence[CoeffExpr]], b: Sequence[Sequence[CoeffExpr]], name: str = ""):
        n = vars.n
        if len(a) != n or len(b) != n or any(len(r) != n for r in a) or any(len(r) != n for r in b):
            raise StructureError("row shape mismatch")
        self.vars = vars
        self.name = name
        self.a = [list(r) for r in a]
        self.b = [list(r) for r in b]
        self._jc = None
        self._djc = None

    @property
    def n(self) -> int:
        return self.vars.n

    # construction ----------------------------------------------------
    @classmethod
    def from_rows(cls, coords: Sequence[str], rows: Mapping[str, Mapping[str, str]], name: str = "") -> "ChartStructure":
        vt = VarTable(tuple(coords))
        n = vt.n
        zero = CoeffExpr.zero(vt)
        a = [[zero] * n for _ in range(n)]
        b = [[zero] * n for _ in range(n)]
        for ci, row in rows.items():
            i = vt.lookup(ci)
            if i >= n:
                raise StructureError(f"row key {ci!r} must be an unbarred coordinate")
            for key, text in row.items():
                if not key.startswith("d"):
                    raise StructureError(f"bad frame key {key!r}")
                j = vt.lookup(key[1:])
                e = parse(str(text), vt)
                if j < n:
                    a[i][j] = e
                else:
                    b[i][j - n] = e
        return cls(vt, a, b, name)

    @classmethod
    def from_json(cls, data: "Mapping | str | Path") -> "ChartStructure":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        coords = data["coords"]
        if "complex_dim" in data and int(data["complex_dim"]) != len(coords):
            raise StructureError("complex_dim does not match coords")
        return cls.from_rows(coords, data["J"], data.get("name", ""))

    @classmethod
    def flat(cls, n: int) -> "ChartStructure":
        coords = [f"z{k + 1}" for k in range(n)]
        return cls.from_rows(coords, {c: {f"d{c}": "i"} for c in coords}, f"flat{n}")

    def to_json(self) -> dict:
        rows = {}
        for i, ci in enumerate(self.vars.names):
            row = {}
            for j, cj in enumerate(self.vars.names):
                if not self.a[i][j].is_zero():
                    row[f"d{cj}"] = str(self.a[i][j])
                if not self.b[i][j].is_zero():
                    row[f"d{cj}_"] = str(self.b[i][j])
            rows[ci] = row
        return {"name": self.name, "complex_dim": self.n, "coords": list(self.vars.names), "J": rows}

    # symbolic matrix -------------------------------------------------
    def jc(self) -> list[list[CoeffExpr]]:
        """Symbolic 2n x 2n matrix in the complexified frame."""
        if self._jc is None:
            n = self.n
            M = [[None] * (2 * n) for _ in range(2 * n)]
            for i in range(n):
                for j in range(n):
                    M[j][i] = self.a[i][j]
                    M[n + j][i] = self.b[i][j]
                    M[j][n + i] = self.b[i][j].conj()
                    M[n + j][n + i] = self.a[i][j].conj()
            self._jc = M
        return self._jc

    def jc_at(self, point: Mapping) -> np.ndarray:
        M = self.jc()
        return np.array([[e.evaluate(point) for e in row] for row in M])

    def j_real(self, q) -> np.ndarray:
        return complex_to_real_matrix(self.jc_at(real_to_point(self.vars, q)))

    def jet(self, q) -> PointJet:
        q = np.asarray(q, float)
        pt = real_to_point(self.vars, q)
        if self._djc is None:
            M = self.jc()
            self._djc = [[[e.diff(v) for e in row] for row in M] for v in range(2 * self.n)]
        Jc = self.jc_at(pt)
        dJc = np.array([[[e.evaluate(pt) for e in row] for row in Dv] for Dv in self._djc])
        return jet_from_complex(q, Jc, dJc)

    def apply(self, X: "VectorField") -> "VectorField":
        M = self.jc()
        d = 2 * self.n
        comps = []
        for k in range(d):
            acc = CoeffExpr.zero(self.vars)
            for m in range(d):
                if not M[k][m].is_zero() and not X.components[m].is_zero():
                    acc = acc + M[k][m] * X.components[m]
            comps.append(acc)
        return VectorField(self.vars, tuple(comps))

    def frame(self, i: int) -> "VectorField":
        return VectorField.basis(self.vars, i)

    def nijenhuis_field(self, X: "VectorField", Y: "VectorField") -> "VectorField":
        JX, JY = self.apply(X), self.apply(Y)
        t1 = lie_bracket(JX, JY)
        t2 = self.apply(lie_bracket(X, JY))
        t3 = self.apply(lie_bracket(JX, Y))
        t4 = lie_bracket(X, Y)
        return t1 - t2 - t3 - t4

    def __repr__(self):
        return f"ChartStructure({self.name or self.vars.names})"


def validate(S: ChartStructure, samples: int = 100, seed: int = 0, tol: float = 1e-9) -> list[str]:
    """Entries of Jc^2 + 1 that fail to vanish (empty list means valid).

    Structures without expression rows (e.g. :class:`Lemma1Structure`) are
    checked numerically at sampled points only.
    """
    if not hasattr(S, "jc"):
        return _validate_sampled(S, samples, seed, tol)
    M = S.jc()
    d = 2 * S.n
    out = []
    for r in range(d):
        for c in range(d):
            acc = CoeffExpr.const(S.vars, 1 if r == c else 0)
            for m in range(d):
                if not M[r][m].is_zero() and not M[m][c].is_zero():
                    acc = acc + M[r][m] * M[m][c]
            if acc.is_zero():
                continue
            if acc.is_exact():
                out.append(f"(J^2+1)[{r},{c}] = {acc}")
                continue
            # floating coefficients: decide by sampling in the unit polydisc
            rng = np.random.default_rng(seed)
            worst = 0.0
            for _ in range(samples):
                z = rng.uniform(-1, 1, S.n) + 1j * rng.uniform(-1, 1, S.n)
                z = z / np.maximum(1.0, np.abs(z))
                worst = max(worst, abs(acc.evaluate(dict(enumerate(z)))))
            if worst > tol:
                out.append(f"(J^2+1)[{r},{c}] sampled residual {worst:.3e}")
    return out


def _validate_sampled(S, samples: int, seed: int, tol: float) -> list[str]:
    rng = np.random.default_rng(seed)
    d = 2 * S.n
    worst = 0.0
    for _ in range(samples):
        J = S.j_real(rng.uniform(-1, 1, d))
        worst = max(worst, float(np.abs(J @ J + np.eye(d)).max()))
    return [] if worst <= tol else [f"J^2+1 sampled residual {worst:.3e}"]


def jet_at(S, point) -> PointJet:
    """Jet at ``point`` (a coordinate mapping or a real vector)."""
    if isinstance(point, Mapping):
        point = point_to_real(S.vars, point)
    return S.jet(point)


# ---------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    """Components along ``(∂z_1..∂z_n, ∂zbar_1..∂zbar_n)``."""

    vars: VarTable
    components: tuple

    @classmethod
    def basis(cls, vars: VarTable, i: int) -> "VectorField":
        d = 2 * vars.n
        return cls(vars, tuple(CoeffExpr.const(vars, 1 if k == i else 0) for k in range(d)))

    @classmethod
    def from_strings(cls, vars: VarTable, comps: Mapping[str, str]) -> "VectorField":
        d = 2 * vars.n
        out = [CoeffExpr.zero(vars)] * d
        for key, text in comps.items():
            out[vars.lookup(key.removeprefix("d"))] = parse(text, vars)
        return cls(vars, tuple(out))

    def __add__(self, other):
        return VectorField(self.vars, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return VectorField(self.vars, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(self.vars, tuple(-a for a in self.components))

    def scale(self, f) -> "VectorField":
        return VectorField(self.vars, tuple(f * a for a in self.components))

    def conj(self) -> "VectorField":
        n = self.vars.n
        c = [e.conj() for e in self.components]
        return VectorField(self.vars, tuple(c[n:] + c[:n]))

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.components)

    def is_real(self) -> bool:
        return self.conj() == self

    def real_part(self) -> "VectorField":
        return (self + self.conj()).scale(GaussRat(1, 2))

    def imag_part(self) -> "VectorField":
        return (self - self.conj()).scale(GaussRat(0, -1) / 2)

    def at(self, point: Mapping) -> np.ndarray:
        return np.array([e.evaluate(point) for e in self.components])

    def real_at(self, point: Mapping) -> np.ndarray:
        """Real coordinate vector of a real field at a point."""
        c = self.at(point)[: self.vars.n]
        r = np.empty(2 * self.vars.n)
        r[0::2] = c.real
        r[1::2] = c.imag
        return r

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.vars == other.vars and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        parts = []
        for m, e in enumerate(self.components):
            if not e.is_zero():
                parts.append(f"({e})*d{self.vars.name(m)}")
        return " + ".join(parts) or "0"


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    if X.vars != Y.vars:
        raise StructureError("vector fields over different charts")
    d = len(X.components)
    out = []
    for k in range(d):
        acc = CoeffExpr.zero(X.vars)
        for m in range(d):
            xm, ym = X.components[m], Y.components[m]
            if not xm.is_zero():
                dy = Y.components[k].diff(m)
                if not dy.is_zero():
                    acc = acc + xm * dy
            if not ym.is_zero():
                dx = X.components[k].diff(m)
                if not dx.is_zero():
                    acc = acc - ym * dx
        out.append(acc)
    return VectorField(X.vars, tuple(out))


# ---------------------------------------------------------------------
# forward-mode first jets of complex functions
# ---------------------------------------------------------------------


class Jet1:
    """Value and Wirtinger gradient (over 2n variable ids) of a complex function."""

    __slots__ = ("v", "g")

    def __init__(self, v, g):
        self.v = complex(v)
        self.g = np.asarray(g, dtype=complex)

    @classmethod
    def const(cls, c, nvars: int) -> "Jet1":
        return cls(c, np.zeros(nvars, complex))

    @classmethod
    def of(cls, e: CoeffExpr, point: Mapping) -> "Jet1":
        d = 2 * e.vars.n
        return cls(e.evaluate(point), [e.diff(v).evaluate(point) for v in range(d)])

    def _c(self, o):
        return o if isinstance(o, Jet1) else Jet1.const(o, self.g.size)

    def __add__(self, o):
        o = self._c(o)
        return Jet1(self.v + o.v, self.g + o.g)

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.v, -self.g)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        return Jet1(self.v * o.v, self.v * o.g + o.v * self.g)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        return Jet1(self.v / o.v, (self.g * o.v - self.v * o.g) / (o.v * o.v))

    def __rtruediv__(self, o):
        return self._c(o) / self

    def conj(self) -> "Jet1":
        n = self.g.size // 2
        g = self.g.conj()
        return Jet1(self.v.conjugate(), np.concatenate([g[n:], g[:n]]))

    def sqrt(self) -> "Jet1":
        r = cmath.sqrt(self.v)
        return Jet1(r, self.g / (2 * r))

    def real_sqrt(self) -> "Jet1":
        """Positive square root of a real-valued function."""
        r = np.sqrt(self.v.real)
        return Jet1(r, self.g / (2 * r))

    def d(self, vid: int) -> complex:
        return complex(self.g[vid])

    def __repr__(self):
        return f"Jet1({self.v}, {self.g})"


class Lemma1Structure:
    """Four-dimensional J in the form

    ``J∂z = ik∂z + α∂zbar + iαβbar/(1+k) ∂w + β∂wbar``, ``J∂w = i∂w``,
    ``k = sqrt(1+|α|^2)``, with α, β supplied as point -> Jet1 callables.
    Coordinates are ``(z, w)``.
    """

    def __init__(self, alpha: Callable[[dict], Jet1], beta: Callable[[dict], Jet1], name: str = "lemma1"):
        self.vars = VarTable(("z", "w"))
        self.alpha = alpha
        self.beta = beta
        self.name = name

    n = 2

    @classmethod
    def from_exprs(cls, alpha: str | CoeffExpr, beta: str | CoeffExpr, name: str = "lemma1") -> "Lemma1Structure":
        vt = VarTable(("z", "w"))
        a = parse(alpha, vt) if isinstance(alpha, str) else alpha
        b = parse(beta, vt) if isinstance(beta, str) else beta
        return cls(lambda p: Jet1.of(a, p), lambda p: Jet1.of(b, p), name)

    def entries(self, point: Mapping) -> tuple[Jet1, Jet1, Jet1, Jet1]:
        """(a, α, c, β): coefficients of ∂z, ∂zbar, ∂w, ∂wbar in J∂z."""
        al = self.alpha(point)
        be = self.beta(point)
        k = (1 + al * al.conj()).real_sqrt()
        a = k * 1j
        c = al * be.conj() * 1j / (1 + k)
        return a, al, c, be

    def jc_jets(self, point: Mapping) -> list[list[Jet1]]:
        a, al, c, be = self.entries(point)
        nv = 4
        zero = Jet1.const(0, nv)
        iw = Jet1.const(1j, nv)
        # column order: ∂z, ∂w, ∂zbar, ∂wbar
        cols = [
            [a, c, al, be],
            [zero, iw, zero, zero],
        ]
        cols += [[x.conj() for x in col[2:] + col[:2]] for col in cols]
        return [[cols[c][r] for c in range(4)] for r in range(4)]

    def j_real(self, q) -> np.ndarray:
        pt = real_to_point(self.vars, q)
        M = self.jc_jets(pt)
        return complex_to_real_matrix(np.array([[x.v for x in row] for row in M]))

    def jet(self, q) -> PointJet:
        pt = real_to_point(self.vars, q)
        M = self.jc_jets(pt)
        Jc = np.array([[x.v for x in row] for row in M])
        dJc = np.array([[[x.d(v) for x in row] for row in M] for v in range(4)])
        return jet_from_complex(q, Jc, dJc)
