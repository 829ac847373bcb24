"""Nijenhuis tensors: evaluation, pointwise classification and realization.

Point tensors use the antilinear convention
``N(x, y) = sum_ij conj(x_i) conj(y_j) c[i, j, :]`` on ``C^n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .acstruct import (
    ChartStructure,
    Jet1,
    Lemma1Structure,
    PointJet,
    StructureError,
    complex_vec_real_parts,
    point_to_real,
    real_to_point,
)
from .clinalg import (
    DEFAULT_TOL,
    AntilinearMap2,
    CpxStructuredSpace,
    RealSubspace,
    c2r,
    complex_basis,
    complex_image,
    complex_rank_and_kernel,
    principal_angle,
    r2c,
    singular_margin,
    standard_j,
)
from .expr import CoeffExpr, GaussRat, VarTable, parse, parse_constant

LOW_CONFIDENCE = "LOW_CONFIDENCE"


class PreconditionError(ValueError):
    """Input violates an operation's stated precondition."""


# ---------------------------------------------------------------------
# point tensors
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class PointTensor:
    n: int
    c: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if c.shape != (self.n,) * 3:
            raise ValueError(f"structure constants must have shape {(self.n,) * 3}")
        if np.linalg.norm(c + c.transpose(1, 0, 2)) > 1e-12 * max(1.0, np.linalg.norm(c)):
            raise ValueError("structure constants are not skew in (i, j)")
        object.__setattr__(self, "c", c)

    # construction ----------------------------------------------------
    @classmethod
    def from_relations(cls, n: int, rels: Sequence[tuple[int, int, int, complex]], name: str = "") -> "PointTensor":
        """Relations ``(i, j, k, value)`` with 1-based indices: N(X_i, X_j) += value X_k."""
        c = np.zeros((n, n, n), complex)
        for i, j, k, val in rels:
            if i == j:
                raise ValueError("N(X_i, X_i) is zero by skew-symmetry")
            c[i - 1, j - 1, k - 1] += val
            c[j - 1, i - 1, k - 1] -= val
        return cls(n, c, name)

    @classmethod
    def from_json(cls, data: "Mapping | str | Path") -> "PointTensor":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        n = int(data["complex_dim"])
        rels = []
        for item in data["N"]:
            rels.append((int(item["i"]), int(item["j"]), int(item["k"]), complex(parse_constant(str(item["c"])))))
        return cls.from_relations(n, rels, data.get("name", ""))

    def to_json(self) -> dict:
        rels = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                for k in range(self.n):
                    v = self.c[i, j, k]
                    if abs(v) > 0:
                        rels.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": _fmt_c(v)})
        return {"name": self.name, "complex_dim": self.n, "N": rels}

    @classmethod
    def from_map(cls, N: AntilinearMap2, name: str = "") -> "PointTensor":
        """Constants in a complex basis adapted to the map's complex structure."""
        J0 = N.space.J0
        d = N.space.real_dim
        n = d // 2
        if np.allclose(J0, standard_j(n), atol=1e-12):
            B = np.eye(d)
        else:
            b = complex_basis(RealSubspace.full(d), J0)
            B = np.zeros((d, d))
            for k in range(n):
                B[:, 2 * k] = b[k]
                B[:, 2 * k + 1] = J0 @ b[k]
        Binv = np.linalg.inv(B)
        A = np.einsum("lk,kuv,ua,vb->lab", Binv, N.values, B, B)
        c = np.zeros((n, n, n), complex)
        for i in range(n):
            for j in range(n):
                c[i, j] = r2c(A[:, 2 * i, 2 * j])
        return cls(n, c, name)

    # evaluation ------------------------------------------------------
    def apply(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.conj(x), np.conj(y), self.c)

    def to_map(self) -> AntilinearMap2:
        n = self.n
        d = 2 * n
        E = np.eye(d)
        A = np.zeros((d, d, d))
        for u in range(d):
            x = r2c(E[u])
            for v in range(d):
                A[:, u, v] = c2r(self.apply(x, r2c(E[v])))
        return AntilinearMap2(CpxStructuredSpace.standard(n), A)

    def change_basis(self, g) -> "PointTensor":
        """Constants in the basis ``Y_a = sum_i g[i, a] X_i``."""
        g = np.asarray(g, complex)
        gi = np.linalg.inv(g)
        c2 = np.einsum("ia,jb,ijk,lk->abl", g.conj(), g.conj(), self.c, gi)
        return PointTensor(self.n, c2, self.name)

    def is_zero(self, tol: float = 1e-14) -> bool:
        return float(np.linalg.norm(self.c)) <= tol

    def image_matrix(self) -> np.ndarray:
        """n x n^2 matrix of the vectors c[i, j, :]."""
        return self.c.reshape(self.n * self.n, self.n).T

    def image_basis(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        U, s, _ = np.linalg.svd(self.image_matrix())
        if s.size == 0 or s[0] == 0:
            return np.zeros((self.n, 0), complex)
        r = int(np.sum(s > tol * s[0]))
        return U[:, :r]

    def kernel_basis(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Ker N = {v : N(v, .) = 0}, columns."""
        n = self.n
        M = self.c.transpose(1, 2, 0).reshape(n * n, n)  # rows (j,k), cols i
        if np.linalg.norm(M) == 0:
            return np.eye(n, dtype=complex)
        _, K = complex_rank_and_kernel(M, tol)
        return K.conj()

    def left_matrix(self, x) -> np.ndarray:
        """M_x with N(x, y) = M_x conj(y)."""
        return np.einsum("i,ijk->kj", np.conj(x), self.c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.c))


def _fmt_c(v: complex) -> str:
    v = complex(v)
    if v.imag == 0:
        return repr(v.real)
    return f"({v.real!r} + {v.imag!r}*i)"


def as_point_tensor(N) -> PointTensor:
    if isinstance(N, PointTensor):
        return N
    if isinstance(N, AntilinearMap2):
        return PointTensor.from_map(N)
    raise TypeError(f"expected PointTensor or AntilinearMap2, got {type(N).__name__}")


# ---------------------------------------------------------------------
# Nijenhuis tensor of a jet and its finite-difference oracle
# ---------------------------------------------------------------------


def nijenhuis_at(jet: PointJet, check: bool = True) -> AntilinearMap2:
    """N(u, v) = (∂_{Ju}J)v - (∂_{Jv}J)u - J(∂_uJ)v + J(∂_vJ)u on constant frames."""
    J, dJ = jet.J, jet.dJ
    # D[m] acting: (∂_u J) v = sum_m u_m dJ[m] v
    # T1[k,u,v] = sum_m (J e_u)_m dJ[m][k, v]
    DJv = np.einsum("mkv->kmv", dJ)  # [k, m, v]: (∂_m J)_{kv}
    T1 = np.einsum("kmv,mu->kuv", DJv, J)
    T3 = np.einsum("lk,kuv->luv", J, DJv)
    A = T1 - T1.transpose(0, 2, 1) - T3 + T3.transpose(0, 2, 1)
    N = AntilinearMap2(jet.space(), A)
    if check:
        N.check(1e-8)
    return N


def nijenhuis_fd(structure, q, h: float = 1e-5) -> AntilinearMap2:
    """Oracle: evaluate the four brackets of N on constant frame fields by central differences."""
    q = np.asarray(q, float)
    d = q.size
    Jq = structure.j_real(q)

    def dirderiv(f, u):
        return (f(q + h * u) - f(q - h * u)) / (2 * h)

    E = np.eye(d)
    A = np.zeros((d, d, d))
    for a in range(d):
        for b in range(a + 1, d):
            X, Y = E[a], E[b]
            JX = lambda p: structure.j_real(p) @ X
            JY = lambda p: structure.j_real(p) @ Y
            # [U, V] = DV.U - DU.V
            br_JX_JY = dirderiv(JY, Jq @ X) - dirderiv(JX, Jq @ Y)
            br_X_JY = dirderiv(JY, X)
            br_JX_Y = -dirderiv(JX, Y)
            val = br_JX_JY - Jq @ br_X_JY - Jq @ br_JX_Y
            A[:, a, b] = val
            A[:, b, a] = -val
    return AntilinearMap2(CpxStructuredSpace(d, Jq), A)


def nijenhuis_point(structure, point) -> AntilinearMap2:
    if isinstance(point, Mapping):
        point = point_to_real(structure.vars, point)
    return nijenhuis_at(structure.jet(np.asarray(point, float)))


def complexified_components(N: AntilinearMap2) -> np.ndarray:
    """``K[i, j, :]``: N(∂z_i, ∂z_j) in the coordinate frame (∂z_1..∂z_n, ∂zbar_1..∂zbar_n).

    Coordinate vectors are ``∂z = (∂x - i∂y)/2``; valid at any point, J need not be standard there.
    """
    n = N.space.n
    A = N.values
    D = np.zeros((2 * n, n), complex)
    for k in range(n):
        D[2 * k, k] = 0.5
        D[2 * k + 1, k] = -0.5j
    V = np.einsum("luv,ui,vj->ijl", A.astype(complex), D, D)
    out = np.zeros((n, n, 2 * n), complex)
    # ∂x = ∂z + ∂zbar, ∂y = i(∂z - ∂zbar)
    out[:, :, :n] = V[:, :, 0::2] + 1j * V[:, :, 1::2]
    out[:, :, n:] = V[:, :, 0::2] - 1j * V[:, :, 1::2]
    return out


@dataclass
class FixedPoint:
    kind: str  # "point" | "line" | "plane"
    vector: list  # representative (complex, as [re, im] pairs)
    incident: bool | None
    transversal: bool | None
    eigenvalue: complex | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vector": self.vector,
            "incident": self.incident,
            "transversal": self.transversal,
            "eigenvalue": None if self.eigenvalue is None else [self.eigenvalue.real, self.eigenvalue.imag],
        }


@dataclass
class ClassificationReport:
    n: int
    r_image: int
    image_in_kernel: bool
    type_label: str
    kernel_dim: int
    fixed_points: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def low_confidence(self) -> bool:
        return LOW_CONFIDENCE in self.flags

    def summary(self) -> str:
        return f"{self.type_label}, rImage={self.r_image}"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r_image": self.r_image,
            "image_in_kernel": self.image_in_kernel,
            "kernel_dim": self.kernel_dim,
            "type_label": self.type_label,
            "fixed_points": [f.to_json() for f in self.fixed_points],
            "flags": list(self.flags),
            "notes": list(self.notes),
        }


def _rank(M: np.ndarray, tol: float) -> tuple[int, bool]:
    """Complex rank and whether the decision is fragile (margin < 10)."""
    if M.size == 0 or np.linalg.norm(M) == 0:
        return 0, False
    s = np.linalg.svd(M, compute_uv=False)
    r = int(np.sum(s > tol * s[0]))
    thr = tol * s[0]
    fragile = any(0 < x and max(x / thr, thr / x) < 10 for x in s)
    return r, fragile


def _subspace_contains(B: np.ndarray, v: np.ndarray, tol: float = 1e-8) -> bool:
    if B.shape[1] == 0:
        return np.linalg.norm(v) == 0
    Q, _ = np.linalg.qr(B)
    return np.linalg.norm(v - Q @ (Q.conj().T @ v)) <= tol * max(1.0, np.linalg.norm(v))


def classify(N, tol: float = DEFAULT_TOL) -> ClassificationReport:
    pt = as_point_tensor(N)
    n = pt.n
    flags: list[str] = []
    notes: list[str] = []
    r_image, fragile = _rank(pt.image_matrix(), tol)
    if fragile:
        flags.append(LOW_CONFIDENCE)
    Wb = pt.image_basis(tol)
    Kb = pt.kernel_basis(tol)
    in_ker = all(_subspace_contains(Kb, Wb[:, j]) for j in range(Wb.shape[1])) if r_image else True
    fps: list[FixedPoint] = []

    if r_image == 0:
        label = "INTEGRABLE"
    elif n == 2:
        label = "DIM4_NONZERO"
    elif n == 3:
        if r_image == 3:
            fps, fl = phi_maps(pt, tol=tol)
            flags += fl
            label = _ndg_label(fps)
        elif r_image == 2:
            label = "DG1"
        else:
            label = "DG2(2)" if in_ker else "DG2(1)"
    else:
        if r_image == 1:
            w = Wb[:, 0]
            # N(x, y) = omega(conj x, conj y) w
            coef = np.einsum("ijk,k->ij", pt.c, w.conj()) / np.vdot(w, w)
            rank_om, fr = _rank(coef, tol)
            if fr:
                flags.append(LOW_CONFIDENCE)
            m = rank_om // 2
            branch = "W⊂Z" if in_ker else "W∩Z=0"
            label = f"GENERAL(m={m}, {branch})"
        else:
            label = f"GENERAL(rImage={r_image})"
            notes.append("rank/branch analysis is implemented for dim Im(N) = 1 only")
    return ClassificationReport(n, r_image, bool(in_ker), label, Kb.shape[1], fps, sorted(set(flags)), notes)


def _ndg_label(fps: list[FixedPoint]) -> str:
    if any(f.kind == "plane" for f in fps):
        return "NDG(3)-candidate"
    if any(f.kind == "line" for f in fps):
        return "NDG(exceptional)-candidate"
    t = sum(1 for f in fps if f.transversal)
    i = sum(1 for f in fps if f.incident)
    table = {(3, 0): "NDG(3)", (1, 2): "NDG(1)", (1, 1): "NDG(2)", (0, 1): "NDG(4)"}
    base = table.get((t, i))
    return f"{base}-candidate" if base else "NDG(exceptional)-candidate"


# ---------------------------------------------------------------------
# the maps Phi_1 : CP^2 -> Gr_2(C^3), Phi_2 : Gr_2(C^3) -> CP^2
# ---------------------------------------------------------------------


def phi1(pt: PointTensor, x) -> np.ndarray:
    """Orthonormal basis (columns) of Im N(x, .)."""
    U, s, _ = np.linalg.svd(pt.left_matrix(x))
    return U[:, :2]


def phi2(pt: PointTensor, P: np.ndarray) -> np.ndarray:
    return pt.apply(P[:, 0], P[:, 1])


def phi_composite(pt: PointTensor, x) -> np.ndarray:
    return phi2(pt, phi1(pt, x))


def _adj3(M: np.ndarray) -> np.ndarray:
    """Adjugate of a 3x3 matrix via cofactors."""
    C = np.empty((3, 3), dtype=M.dtype)
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(M, i, 0), j, 1)
            C[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return C.T


def phi_linear_map(pt: PointTensor) -> np.ndarray:
    """Matrix T with Phi_2(Phi_1([x])) = [T x].

    The adjugate of M_x factors as conj(x) l(x)^T with l linear in conj(x), and
    Phi_2(Phi_1(x)) is the contraction of conj(l(x)) with (c_23, c_31, c_12).
    """
    if pt.n != 3:
        raise PreconditionError("Phi maps are defined for n = 3")
    L = np.zeros((3, 3), complex)
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1
        L[:, i] = _adj3(pt.left_matrix(e))[i, :]
    Cp = np.array([pt.c[1, 2], pt.c[2, 0], pt.c[0, 1]])  # rows m
    return np.einsum("mk,mi->ki", Cp, L.conj())


def _proj_dist(x, y) -> float:
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return float(np.sqrt(max(0.0, 1 - abs(np.vdot(x, y)) ** 2)))


def _incidence(pt: PointTensor, x, flags: list) -> tuple[bool, bool]:
    P = phi1(pt, x)
    xn = x / np.linalg.norm(x)
    dist = np.linalg.norm(xn - P @ (P.conj().T @ xn))
    if dist < 1e-8:
        return True, False
    if dist > 1e-6:
        return False, True
    flags.append(LOW_CONFIDENCE)
    return dist < 1e-7, dist >= 1e-7


def phi_maps(N, tol: float = DEFAULT_TOL, rng_seed: int = 0) -> tuple[list[FixedPoint], list[str]]:
    """Fixed points of Phi_2 o Phi_1 by eigen-analysis of its linear representative."""
    pt = as_point_tensor(N)
    flags: list[str] = []
    if pt.n != 3:
        raise PreconditionError("phi_maps requires n = 3")
    if _rank(pt.image_matrix(), tol)[0] != 3:
        raise PreconditionError("phi_maps requires rImage = 3")
    T = phi_linear_map(pt)
    scale = np.linalg.norm(T)
    if scale == 0:
        flags.append(LOW_CONFIDENCE)
        return [], flags
    # sanity: the geometric composite agrees with T projectively
    rng = np.random.default_rng(rng_seed)
    for _ in range(5):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        if _proj_dist(phi_composite(pt, x), T @ x) > 1e-7:
            flags.append(LOW_CONFIDENCE)
            break
    Tn = T / scale
    ev = np.linalg.eigvals(Tn)
    clusters: list[list[complex]] = []
    for lam in ev:
        for cl in clusters:
            if abs(lam - np.mean(cl)) < 1e-4:
                cl.append(lam)
                break
        else:
            clusters.append([lam])
    means = [complex(np.mean(cl)) for cl in clusters]
    for a in range(len(means)):
        for b in range(a + 1, len(means)):
            if abs(means[a] - means[b]) < 1e-3:
                flags.append(LOW_CONFIDENCE)
    out: list[FixedPoint] = []
    for mu in means:
        _, sv, Vh = np.linalg.svd(Tn - mu * np.eye(3))
        V = Vh.conj().T[:, sv < 1e-8]
        k = V.shape[1]
        if k == 0:
            flags.append(LOW_CONFIDENCE)
            continue
        if k == 1:
            x = V[:, 0]
            inc, tr = _incidence(pt, x, flags)
            out.append(FixedPoint("point", _cvec(x), inc, tr, mu * scale))
        elif k == 2:
            out.append(FixedPoint("line", _cvec(V[:, 0]) + _cvec(V[:, 1]), None, None, mu * scale))
        else:
            out.append(FixedPoint("plane", [], None, None, mu * scale))
    return out, sorted(set(flags))


def _cvec(x) -> list:
    x = np.asarray(x, complex)
    k = int(np.argmax(np.abs(x)))
    x = x / x[k]
    return [[float(v.real), float(v.imag)] for v in x]


def newton_fixed_points(
    N,
    seeds_per_chart: int = 50,
    iters: int = 40,
    conv: float = 1e-10,
    dedup: float = 1e-6,
    seed: int = 0,
) -> tuple[list[np.ndarray], bool]:
    """Independent search: Newton on the three affine charts of CP^2.

    Returns the deduplicated fixed points and whether every seed converged.
    """
    pt = as_point_tensor(N)
    rng = np.random.default_rng(seed)
    found: list[np.ndarray] = []
    any_conv = False
    h = 1e-7
    for chart in range(3):
        free = [i for i in range(3) if i != chart]

        def lift(y):
            x = np.ones(3, complex)
            x[free] = y
            return x

        def G(y):
            F = phi_composite(pt, lift(y))
            if abs(F[chart]) < 1e-300:
                return np.full(2, np.inf + 0j)
            return F[free] / F[chart] - y

        for _ in range(seeds_per_chart):
            y = (rng.uniform(-2, 2, 2) + 1j * rng.uniform(-2, 2, 2))
            ok = False
            for _ in range(iters):
                g = G(y)
                if not np.all(np.isfinite(g)):
                    break
                if np.linalg.norm(g) < conv:
                    ok = True
                    break
                Jm = np.empty((2, 2), complex)
                for j in range(2):
                    e = np.zeros(2, complex)
                    e[j] = h
                    Jm[:, j] = (G(y + e) - G(y - e)) / (2 * h)
                try:
                    step = np.linalg.solve(Jm, -g)
                except np.linalg.LinAlgError:
                    break
                y = y + step
                if np.linalg.norm(step) < conv:
                    ok = np.linalg.norm(G(y)) < 1e-8
                    break
            if ok:
                any_conv = True
                x = lift(y)
                if all(_proj_dist(x, f) > dedup for f in found):
                    found.append(x / np.linalg.norm(x))
    return found, any_conv


# ---------------------------------------------------------------------
# realization of a rank-2 distribution in dimension 4
# ---------------------------------------------------------------------


@dataclass
class RealizationResult:
    alpha: complex
    beta: complex
    alpha_exact: GaussRat | None
    beta_exact: GaussRat | None
    structure: Lemma1Structure
    jet: PointJet
    pi: RealSubspace
    image: RealSubspace
    angle: float

    def to_json(self) -> dict:
        def ex(v):
            return None if v is None else str(v)

        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "alpha_exact": ex(self.alpha_exact),
            "beta_exact": ex(self.beta_exact),
            "principal_angle": self.angle,
        }


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def realize_dim4(A: CoeffExpr | str, B: CoeffExpr | str, point: Mapping | None = None) -> RealizationResult:
    """Lemma-1 structure whose Nijenhuis image is ⟨∂z - A∂w - B∂wbar⟩ (real span) at the point."""
    vt = VarTable(("z", "w"))
    A = parse(A, vt) if isinstance(A, str) else A
    B = parse(B, vt) if isinstance(B, str) else B
    point = dict(point or {0: 0, 1: 0})
    pt = {vt.var_id(k): v for k, v in point.items()}
    z, w, zb, wb = 0, 1, 2, 3
    A_wb, B_w = A.diff(wb), B.diff(w)
    Ab = A.conj()
    a_wb = A_wb.evaluate(pt)
    b_w = B_w.evaluate(pt)
    problems = []
    if not abs(a_wb) > abs(b_w):
        problems.append(f"|A_wbar| > |B_w| fails: |A_wbar|={abs(a_wb):.6g}, |B_w|={abs(b_w):.6g}")
    if not abs(b_w) > 0:
        problems.append("|B_w| > 0 fails: B_w = 0")
    deg = Ab.diff(w).evaluate(pt) * B.diff(w).diff(w).evaluate(pt) - Ab.diff(w).diff(w).evaluate(pt) * b_w
    if abs(deg) < 1e-12:
        problems.append("non-degeneracy fails: conj(A)_w B_ww - conj(A)_ww B_w = 0")
    if problems:
        raise PreconditionError("; ".join(problems))

    def alpha_fn(p):
        aw = Jet1.of(A_wb, p)
        bw = Jet1.of(B_w, p)
        return (-2j) * aw * bw / (aw * aw.conj() - bw * bw.conj())

    def beta_fn(p):
        al = alpha_fn(p)
        k = (1 + al * al.conj()).real_sqrt()
        return -1 * al * Jet1.of(Ab, p) - 1j * (1 + k) * Jet1.of(B, p)

    S = Lemma1Structure(alpha_fn, beta_fn, name="realized")
    alpha = alpha_fn(pt).v
    beta = beta_fn(pt).v

    # exact values when everything is Gaussian-rational
    alpha_x = beta_x = None
    vals = [e.evaluate_exact({k: _as_gauss(v) for k, v in pt.items()}) if _as_gauss_ok(pt) else None for e in (A_wb, B_w, Ab, B)]
    if all(v is not None for v in vals):
        aw, bw, ab, bb = vals
        den = aw * aw.conjugate() - bw * bw.conjugate()
        alpha_x = GaussRat(0, -2) * aw * bw / den
        kk = _exact_sqrt((GaussRat(1) + alpha_x * alpha_x.conjugate()).re)
        if kk is not None:
            beta_x = -(alpha_x * ab) - GaussRat(0, 1) * (GaussRat(1) + kk) * bb

    q = point_to_real(vt, pt)
    jet = S.jet(q)
    Nmap = nijenhuis_at(jet)
    image = complex_image(Nmap)
    u = np.array([1, -A.evaluate(pt), 0, -B.evaluate(pt)], complex)
    re, im = complex_vec_real_parts(u)
    pi = RealSubspace.span([re, im], 4)
    return RealizationResult(alpha, beta, alpha_x, beta_x, S, jet, pi, image, principal_angle(pi, image))


def _as_gauss_ok(pt: Mapping) -> bool:
    for v in pt.values():
        v = complex(v)
        for part in (v.real, v.imag):
            if not float(part).is_integer() and Fraction(part).denominator > 2**20:
                return False
    return True


def _as_gauss(v) -> GaussRat:
    v = complex(v)
    return GaussRat(Fraction(v.real), Fraction(v.imag))


def lemma2_generator(S: Lemma1Structure, point: Mapping) -> np.ndarray:
    """Complexified generator v of Im(N) over (∂z, ∂w, ∂zbar, ∂wbar)."""
    pt = {S.vars.var_id(k): v for k, v in point.items()}
    al = S.alpha(pt)
    be = S.beta(pt)
    z, w, zb, wb = 0, 1, 2, 3
    a, a_w = al.v, al.d(w)
    abar, abar_w = a.conjugate(), al.conj().d(w)
    b, b_w = be.v, be.d(w)
    if abs(a) < 1e-14:
        if abs(a_w) < 1e-300 and abs(b_w) < 1e-300:
            raise PreconditionError("singular distribution: generator vanishes")
        # limit of the general formula as alpha -> 0 (coefficient -2i on ∂zbar)
        return np.array([0, b.conjugate() * a_w, -2j * a_w, -2j * b_w], complex)
    k = np.sqrt(1 + abs(a) ** 2)
    xi_p = (a_w * abar + a * abar_w) / (2 * k) + (a_w * abar - a * abar_w) / 2
    xi_m = (a_w * abar + a * abar_w) / (2 * k) - (a_w * abar - a * abar_w) / 2
    if abs(xi_p) < 1e-12:
        raise PreconditionError("singular distribution: Xi_+ = 0")
    xi = np.array(
        [
            1,
            b.conjugate() / abar,
            -1j * (1 + k) / abar,
            1j * b / (1 + k) * xi_m / xi_p - 2j * b_w / xi_p,
        ],
        complex,
    )
    return xi_p * xi


def generator_plane(v: np.ndarray) -> RealSubspace:
    re, im = complex_vec_real_parts(v)
    return RealSubspace.span([re, im], v.size)


# ---------------------------------------------------------------------
# dimension 8: transversal and strong non-degeneracy
# ---------------------------------------------------------------------


@dataclass
class TransversalReport:
    n_vanishes_on_p1: bool
    n_vanishes_on_p2: bool
    pairing_real_rank: int
    anti_isomorphism: bool
    lines: dict = field(default_factory=dict)
    splittings: dict = field(default_factory=dict)
    strongly_nondegenerate: bool = False
    notes: list = field(default_factory=list)

    @property
    def transversally_nondegenerate(self) -> bool:
        return self.n_vanishes_on_p1 and self.n_vanishes_on_p2 and self.anti_isomorphism

    def to_json(self) -> dict:
        return {
            "n_vanishes_on_p1": self.n_vanishes_on_p1,
            "n_vanishes_on_p2": self.n_vanishes_on_p2,
            "pairing_real_rank": self.pairing_real_rank,
            "anti_isomorphism": self.anti_isomorphism,
            "transversally_nondegenerate": self.transversally_nondegenerate,
            "strongly_nondegenerate": self.strongly_nondegenerate,
            "lines": {k: _cvec(v) for k, v in self.lines.items()},
            "notes": self.notes,
        }


def _cplx_basis_of(P: RealSubspace) -> np.ndarray:
    """Two complex vectors (columns) spanning a J-invariant real 4-plane of C^4."""
    J0 = standard_j(P.ambient_dim // 2)
    b = complex_basis(P, J0)
    return np.array([r2c(v) for v in b]).T


def transversal_check(N, P1: RealSubspace, P2: RealSubspace, tol: float = 1e-9) -> TransversalReport:
    pt = as_point_tensor(N)
    if pt.n != 4:
        raise PreconditionError("transversal check needs n = 4")
    J0 = standard_j(4)
    for name, P in (("P1", P1), ("P2", P2)):
        if not P.is_invariant(J0, 1e-8):
            raise PreconditionError(f"{name} is not J-invariant")
        if P.dim != 4:
            raise PreconditionError(f"{name} must have complex dimension 2")
    if P1.sum(P2).dim != 8:
        raise PreconditionError("P1 and P2 are not transversal")
    b1, b2 = _cplx_basis_of(P1), _cplx_basis_of(P2)
    scale = max(pt.norm(), 1.0)
    van1 = np.linalg.norm(pt.apply(b1[:, 0], b1[:, 1])) <= 1e-9 * scale
    van2 = np.linalg.norm(pt.apply(b2[:, 0], b2[:, 1])) <= 1e-9 * scale
    nm = pt.to_map()
    cols = [nm.apply(u, v) for u in P1.basis for v in P2.basis]
    rk = int(np.linalg.matrix_rank(np.array(cols).T, tol=tol * max(1.0, np.abs(cols).max())))
    rep = TransversalReport(bool(van1), bool(van2), rk, rk == 8)
    if not rep.transversally_nondegenerate:
        return rep
    # n_ab = N(b1_a, b2_b); the P_s-component of N(xi, eta) vanishing cuts out the lines
    nab = np.array([[pt.apply(b1[:, a], b2[:, b]) for b in range(2)] for a in range(2)])  # [a,b,:]
    Bfull = np.hstack([b1, b2])
    coords = np.linalg.solve(Bfull, nab.reshape(4, 4).T).T.reshape(2, 2, 4)  # coordinates in (b1, b2)
    V = {}
    for s in (1, 2):
        # image lies in P_s iff the other block vanishes
        other = slice(2, 4) if s == 1 else slice(0, 2)
        Q = coords[:, :, other]  # [a, b, r]
        # for conj(x): M(x)[r, b] = sum_a xbar_a Q[a, b, r]; det M = 0 is quadratic in xbar
        roots = _quadratic_det_roots(Q)
        for j, xbar in enumerate(roots, start=1):
            M = np.einsum("a,abr->rb", xbar, Q)
            _, ker = complex_rank_and_kernel(M, 1e-8)
            ybar = ker[:, 0]
            xi = b1 @ xbar.conj()
            eta = b2 @ ybar.conj()
            img = pt.apply(xi, eta)
            rep.lines[f"L_{s}^{j}"] = img
            V[(1, j, s)] = xi
            V[(2, j, s)] = eta
    rep.splittings = {f"V_{i}^{j}{s}": v for (i, j, s), v in V.items()}
    strong = True
    for i in (1, 2):
        ok_any = False
        for j0 in (1, 2):
            L = rep.lines.get(f"L_{i}^{j0}")
            if L is None:
                continue
            if all(_proj_dist(V[(i, j, s)], L) > 1e-6 for j in (1, 2) for s in (1, 2)):
                ok_any = True
        strong = strong and ok_any
    rep.strongly_nondegenerate = bool(strong and len(rep.lines) == 4)
    if len(rep.lines) < 4:
        rep.notes.append("fewer than two distinct lines found in some P_s")
    return rep


def _quadratic_det_roots(Q: np.ndarray) -> list[np.ndarray]:
    """Roots [t0 : t1] of det(sum_a t_a Q[a, :, :]^T) = 0 on P^1."""
    M0 = Q[0].T
    M1 = Q[1].T
    # det(M0 t0 + M1 t1) = c0 t0^2 + c1 t0 t1 + c2 t1^2
    def det(t0, t1):
        M = t0 * M0 + t1 * M1
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]

    c0 = det(1, 0)
    c2 = det(0, 1)
    c1 = det(1, 1) - c0 - c2
    out = []
    if abs(c0) > 1e-12:
        for r in np.roots([c0, c1, c2]):  # t0/t1 = r
            out.append(np.array([r, 1], complex))
    else:
        out.append(np.array([1, 0], complex))
        if abs(c1) > 1e-12:
            out.append(np.array([-c2 / c1, 1], complex))
    return out


def strong_normal_form(lam: Mapping[tuple[int, int, int], complex]) -> PointTensor:
    """n = 4 tensor with N(e_1^1 + l_1^{js} e_1^2, e_2^1 + l_2^{js} e_2^2) = e_s^j.

    Basis order: X1 = e_1^1, X2 = e_1^2, X3 = e_2^1, X4 = e_2^2; keys of ``lam``
    are (i, j, s).
    """
    e = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    combos = [(j, s) for j in (1, 2) for s in (1, 2)]
    K = np.zeros((4, 4), complex)
    rhs = np.zeros((4, 4), complex)
    for r, (j, s) in enumerate(combos):
        u = np.array([1, lam[(1, j, s)]])
        v = np.array([1, lam[(2, j, s)]])
        for a in range(2):
            for b in range(2):
                K[r, 2 * a + b] = np.conj(u[a]) * np.conj(v[b])
        rhs[r, e[(s, j)]] = 1
    nab = np.linalg.solve(K, rhs)  # rows (a, b)
    c = np.zeros((4, 4, 4), complex)
    for a in range(2):
        for b in range(2):
            c[a, 2 + b] = nab[2 * a + b]
            c[2 + b, a] = -nab[2 * a + b]
    return PointTensor(4, c, "strong-normal-form")


def plucker_counts(n: int) -> dict:
    if n < 4:
        raise PreconditionError("pluckerCounts requires n >= 4")
    d2 = n * n - 3 * n  # 2d
    d = Fraction(d2, 2)
    codim = d + 3 - n
    return {
        "d": int(d) if d.denominator == 1 else str(d),
        "codim": int(codim) if codim.denominator == 1 else str(codim),
        "dim_sigma": n - 4,
        "deg_sigma": math.comb(2 * n - 4, n - 2) // (n - 1),
    }
