"""Invariant Hermitian data of a six-dimensional N, and the 14-dimensional
algebras g = h + m with h = su(3) or su(2,1) acting on m = C^3.

Algebra computations are exact (Gaussian rationals).  An element of the
complexified algebra is stored as ``(A, D, u, v)``: ``A`` and ``D`` are the
actions of the h-part on the (1,0) and (0,1) halves of m, ``u`` and ``v`` the
∂z- and ∂zbar-coefficients of the m-part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .clinalg import standard_j
from .expr import GaussRat
from .nijenhuis import PointTensor, PreconditionError

ZERO = GaussRat(0)
ONE = GaussRat(1)
I_ = GaussRat(0, 1)

CASES = ("su3", "su21")


# ---------------------------------------------------------------------
# small exact matrix helpers
# ---------------------------------------------------------------------


def _zeros():
    return [[ZERO] * 3 for _ in range(3)]


def _E(a, b, s=ONE):
    M = _zeros()
    M[a][b] = GaussRat.coerce(s)
    return M


def _madd(*Ms):
    out = _zeros()
    for M in Ms:
        for i in range(3):
            for j in range(3):
                out[i][j] = out[i][j] + M[i][j]
    return out


def _mscale(s, M):
    return [[s * x for x in row] for row in M]


def _mmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(3)), ZERO) for j in range(3)] for i in range(3)]


def _comm(A, B):
    return _madd(_mmul(A, B), _mscale(GaussRat(-1), _mmul(B, A)))


def _mv(A, u):
    return [sum((A[i][k] * u[k] for k in range(3)), ZERO) for i in range(3)]


def _cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def _vadd(*vs):
    return [sum((v[i] for v in vs), ZERO) for i in range(3)]


def _vscale(s, v):
    return [s * x for x in v]


def _mconj(M):
    return [[x.conjugate() for x in row] for row in M]


def _vconj(v):
    return [x.conjugate() for x in v]


# ---------------------------------------------------------------------
# complexified algebra
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class CElem:
    A: tuple
    D: tuple
    u: tuple
    v: tuple

    @staticmethod
    def make(A=None, D=None, u=None, v=None) -> "CElem":
        A = A or _zeros()
        D = D or _zeros()
        u = u or [ZERO] * 3
        v = v or [ZERO] * 3
        return CElem(tuple(map(tuple, A)), tuple(map(tuple, D)), tuple(u), tuple(v))

    def __add__(self, o):
        return CElem.make(_madd(self.A, o.A), _madd(self.D, o.D), _vadd(self.u, o.u), _vadd(self.v, o.v))

    def scale(self, s):
        s = GaussRat.coerce(s)
        return CElem.make(_mscale(s, self.A), _mscale(s, self.D), _vscale(s, self.u), _vscale(s, self.v))

    def __neg__(self):
        return self.scale(GaussRat(-1))

    def __sub__(self, o):
        return self + (-o)

    def is_zero(self) -> bool:
        return not any(x for row in self.A + self.D for x in row) and not any(self.u) and not any(self.v)

    def conj(self) -> "CElem":
        """Real structure of the complexification."""
        return CElem.make(_mconj(self.D), _mconj(self.A), _vconj(self.v), _vconj(self.u))

    def m_part_str(self) -> str:
        terms = []
        for k in range(3):
            if self.u[k]:
                terms.append(f"{self.u[k]}*∂z{k + 1}")
            if self.v[k]:
                terms.append(f"{self.v[k]}*∂zbar{k + 1}")
        h = any(x for row in self.A + self.D for x in row)
        if h:
            terms.append("(h-part)")
        return " + ".join(terms) if terms else "0"


def dz(k: int) -> CElem:
    u = [ZERO] * 3
    u[k] = ONE
    return CElem.make(u=u)


def dzbar(k: int) -> CElem:
    v = [ZERO] * 3
    v[k] = ONE
    return CElem.make(v=v)


def _t_table(case: str, k) -> dict:
    """h-component of [∂z_a, ∂zbar_b] as (A, D)."""
    k = GaussRat.coerce(k)
    T = {}
    if case == "su3":
        c = GaussRat(3)
        Id = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
        for a in range(3):
            A = _madd(Id, _E(a, a, -c))
            T[(a, a)] = (A, _mscale(GaussRat(-1), A))
        for a, b in itertools.permutations(range(3), 2):
            T[(a, b)] = (_E(a, b, -c), _E(b, a, c))
        return T
    if case != "su21":
        raise ValueError(f"unknown case {case!r}")
    A11 = _mscale(k, _madd(_E(1, 1), _E(2, 2, -1)))
    A22 = _mscale(k, _madd(_E(0, 0), _E(2, 2, -1)))
    A33 = _mscale(-k, _madd(_E(0, 0), _E(1, 1), _E(2, 2, -2)))
    for a, A in enumerate((A11, A22, A33)):
        T[(a, a)] = (A, _mscale(GaussRat(-1), A))
    m = -k
    T[(0, 1)] = (_E(0, 1, m), _E(1, 0, k))
    T[(0, 2)] = (_E(0, 2, k), _E(2, 0, k))
    T[(1, 0)] = (_E(1, 0, m), _E(0, 1, k))
    T[(1, 2)] = (_E(1, 2, k), _E(2, 1, k))
    T[(2, 0)] = (_E(2, 0, m), _E(0, 2, m))
    T[(2, 1)] = (_E(2, 1, m), _E(1, 2, m))
    return T


class ComplexBracket:
    def __init__(self, case: str, k=3):
        self.case = case
        self.k = GaussRat.coerce(k)
        self.T = _t_table(case, self.k)

    def __call__(self, x: CElem, y: CElem) -> CElem:
        A = _comm(x.A, y.A)
        D = _comm(x.D, y.D)
        for a in range(3):
            for b in range(3):
                coef = x.u[a] * y.v[b] - y.u[a] * x.v[b]
                if coef:
                    TA, TD = self.T[(a, b)]
                    A = _madd(A, _mscale(coef, TA))
                    D = _madd(D, _mscale(coef, TD))
        u = _vadd(_mv(x.A, y.u), _vscale(GaussRat(-1), _mv(y.A, x.u)), _vscale(GaussRat(2), _cross(x.v, y.v)))
        v = _vadd(_mv(x.D, y.v), _vscale(GaussRat(-1), _mv(y.D, x.v)), _vscale(GaussRat(2), _cross(x.u, y.u)))
        return CElem.make(A, D, u, v)

    def jacobi(self, x, y, z) -> CElem:
        br = self
        return br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))


# ---------------------------------------------------------------------
# real basis and structure constants
# ---------------------------------------------------------------------


def _h_generators(case: str) -> list:
    g = []
    g.append(_madd(_E(0, 0, I_), _E(1, 1, -I_)))
    g.append(_madd(_E(1, 1, I_), _E(2, 2, -I_)))
    for a, b in ((0, 1), (0, 2), (1, 2)):
        if case == "su21" and b == 2:
            g.append(_madd(_E(a, b), _E(b, a)))
            g.append(_madd(_E(a, b, I_), _E(b, a, -I_)))
        else:
            g.append(_madd(_E(a, b), _E(b, a, -1)))
            g.append(_madd(_E(a, b, I_), _E(b, a, I_)))
    return g


def _h_labels(case: str) -> list:
    labs = ["i(E11-E22)", "i(E22-E33)"]
    for a, b in ((1, 2), (1, 3), (2, 3)):
        if case == "su21" and b == 3:
            labs += [f"E{a}{b}+E{b}{a}", f"i(E{a}{b}-E{b}{a})"]
        else:
            labs += [f"E{a}{b}-E{b}{a}", f"i(E{a}{b}+E{b}{a})"]
    return labs


def real_basis(case: str) -> tuple[list, list]:
    basis, labels = [], []
    for X, lab in zip(_h_generators(case), _h_labels(case)):
        basis.append(CElem.make(A=X, D=_mconj(X)))
        labels.append(lab)
    for k in range(3):
        e = [ZERO] * 3
        e[k] = ONE
        basis.append(CElem.make(u=e, v=e))
        labels.append(f"∂x{k + 1}")
        ie = [ZERO] * 3
        ie[k] = I_
        mie = [ZERO] * 3
        mie[k] = -I_
        basis.append(CElem.make(u=ie, v=mie))
        labels.append(f"∂y{k + 1}")
    return basis, labels


def _real_coords(x: CElem) -> list:
    out = []
    for row in x.A:
        for e in row:
            out += [e.re, e.im]
    for e in x.u:
        out += [e.re, e.im]
    return out


class NotRealError(ValueError):
    pass


def _solve_exact(B: list, y: list) -> list:
    """Solve sum_j c_j B[j] = y over Q (B: list of coordinate rows)."""
    m = len(B)
    rows = len(y)
    M = [[B[j][r] for j in range(m)] + [y[r]] for r in range(rows)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if M[i][m] != 0:
            raise NotRealError("element is outside the real span of the basis")
    sol = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        sol[c] = M[i][m]
    return sol


@dataclass
class Algebra14:
    case: str
    k: Fraction
    labels: list
    consts: list  # consts[i][j][l] Fraction: [e_i, e_j] = sum_l c e_l
    basis: list = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_vec(self, x: list, y: list) -> list:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                s = x[i] * y[j]
                row = self.consts[i][j]
                for l in range(n):
                    if row[l]:
                        out[l] += s * row[l]
        return out

    def ad(self, i: int) -> list:
        n = self.dim
        return [[self.consts[i][j][l] for j in range(n)] for l in range(n)]


def build_algebra(case: str, k=None) -> Algebra14:
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}")
    if k is None:
        k = 3 if case == "su3" else 2
    k = Fraction(k)
    if case == "su3" and k != 3:
        raise ValueError("su3 uses the fixed coefficient 3")
    br = ComplexBracket(case, GaussRat(k))
    basis, labels = real_basis(case)
    coords = [_real_coords(b) for b in basis]
    n = len(basis)
    consts = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            z = br(basis[i], basis[j])
            if z != z.conj():
                raise NotRealError(f"bracket of {labels[i]}, {labels[j]} is not real")
            c = _solve_exact(coords, _real_coords(z))
            consts[i][j] = c
            consts[j][i] = [-x for x in c]
    return Algebra14(case, k, labels, consts, basis)


def abelian_algebra(n: int = 14) -> Algebra14:
    consts = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    return Algebra14("abelian", Fraction(0), [f"e{i + 1}" for i in range(n)], consts, [])


@dataclass
class JacobiReport:
    case: str
    k: Fraction
    checked: int
    failures: list  # (triple, residual vector)
    complex_failures: list = field(default_factory=list)  # (label, residual string)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "k": str(self.k),
            "pass": self.passed,
            "checked": self.checked,
            "failures": [{"triple": list(t), "residual": [str(x) for x in r]} for t, r in self.failures],
            "complex_failures": [{"triple": t, "residual": r} for t, r in self.complex_failures],
        }


def jacobi_check(A: Algebra14) -> JacobiReport:
    n = A.dim
    E = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    failures = []
    count = 0
    for i, j, l in itertools.combinations(range(n), 3):
        count += 1
        r1 = A.bracket_vec(E[i], A.consts[j][l])
        r2 = A.bracket_vec(E[j], A.consts[l][i])
        r3 = A.bracket_vec(E[l], A.consts[i][j])
        r = [a + b + c for a, b, c in zip(r1, r2, r3)]
        if any(r):
            failures.append(((i + 1, j + 1, l + 1), r))
    rep = JacobiReport(A.case, A.k, count, failures)
    if A.case in CASES:
        rep.complex_failures = complex_jacobi_failures(A.case, A.k)
    return rep


def _cname(kind: str, a: int) -> str:
    return f"∂z{a + 1}" if kind == "z" else f"∂zbar{a + 1}"


def complex_triples() -> list:
    """Triples of complex m-basis vectors (up to conjugation) with labels."""
    out = []
    zs = [("z", a) for a in range(3)]
    zbs = [("zb", a) for a in range(3)]
    out.append((zs[0], zs[1], zs[2]))
    for b in range(3):
        others = [a for a in range(3) if a != b]
        out.append((zbs[b], zs[others[0]], zs[others[1]]))
    for a in range(3):
        for b in range(3):
            if a != b:
                out.append((zbs[a], zs[a], zs[b]))
    return out


def _elem(kind, a):
    return dz(a) if kind == "z" else dzbar(a)


def complex_jacobi(case: str, k, triple) -> CElem:
    br = ComplexBracket(case, GaussRat.coerce(Fraction(k)) if not isinstance(k, GaussRat) else k)
    x, y, z = (_elem(*t) for t in triple)
    return br.jacobi(x, y, z)


def complex_jacobi_failures(case: str, k) -> list:
    out = []
    for t in complex_triples():
        r = complex_jacobi(case, k, t)
        if not r.is_zero():
            label = "(" + ", ".join(_cname(*x) for x in t) + ")"
            out.append((label, r.m_part_str()))
    return out


def _flat(x: CElem) -> list:
    vals = [e for row in x.A for e in row] + [e for row in x.D for e in row] + list(x.u) + list(x.v)
    return vals


def solve_k(case: str, triples=None) -> dict:
    """Set of k for which the given complex Jacobi triples vanish.

    Residuals are affine in k; returns {"all": bool, "values": [Fraction]}.
    """
    triples = triples if triples is not None else complex_triples()
    allowed: set | None = None  # None means every k
    for t in triples:
        r0 = _flat(complex_jacobi(case, 0, t))
        r1 = [b - a for a, b in zip(r0, _flat(complex_jacobi(case, 1, t)))]
        sol: set | None = None
        for a, b in zip(r0, r1):
            if not b:
                if a:
                    sol = set()
                    break
                continue
            kk = -a / b
            if not kk.is_real():
                sol = set()
                break
            cand = {kk.re}
            sol = cand if sol is None else sol & cand
            if not sol:
                break
        if sol is None:
            continue
        allowed = sol if allowed is None else allowed & sol
    if allowed is None:
        return {"all": True, "values": []}
    return {"all": False, "values": sorted(allowed)}


def pattern_triples(a: int, b: int) -> list:
    """The (a, a, b) triple (∂zbar_a, ∂z_a, ∂z_b), 1-based indices."""
    return [(("zb", a - 1), ("z", a - 1), ("z", b - 1))]


# ---------------------------------------------------------------------
# Killing form
# ---------------------------------------------------------------------


def _exact_rank(M: list) -> int:
    M = [list(r) for r in M]
    rows, cols = len(M), len(M[0]) if M else 0
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, rows):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def _inertia(M: list) -> tuple[int, int]:
    """(positive, negative) index of a rational symmetric matrix, exactly."""
    n = len(M)
    M = [list(r) for r in M]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if M[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and M[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j to create a nonzero diagonal entry
            for t in range(n):
                M[i][t] += M[j][t]
            for t in range(n):
                M[t][i] += M[t][j]
            piv = i
        d = M[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = M[i][piv] / d
            if f:
                for t in active:
                    M[i][t] -= f * M[piv][t]
        for i in active:
            M[i][piv] = M[piv][i] = Fraction(0)
    return pos, neg


@dataclass
class KillingReport:
    matrix: list
    signature: tuple
    rank: int
    h_signature: tuple
    h_rank: int

    @property
    def negative_definite(self) -> bool:
        return self.signature == (0, len(self.matrix))

    def to_json(self) -> dict:
        return {
            "signature": list(self.signature),
            "rank": self.rank,
            "negative_definite": self.negative_definite,
            "h_signature": list(self.h_signature),
            "h_rank": self.h_rank,
        }


def killing_form(A: Algebra14, force: bool = False) -> KillingReport:
    if not force and not jacobi_check(A).passed:
        raise PreconditionError("Killing form refused: bracket fails the Jacobi identity")
    n = A.dim
    ads = [A.ad(i) for i in range(n)]
    K = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            X, Y = ads[i], ads[j]
            t = sum(X[a][b] * Y[b][a] for a in range(n) for b in range(n) if X[a][b] and Y[b][a])
            K[i][j] = K[j][i] = Fraction(t)
    hsub = [row[:8] for row in K[:8]] if n == 14 else K
    return KillingReport(K, _inertia(K), _exact_rank(K), _inertia(hsub), _exact_rank(hsub))


# ---------------------------------------------------------------------
# Hermitian data of a six-dimensional point tensor
# ---------------------------------------------------------------------


def _wedge(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Wedge of alternating tensors, (p+q)!/(p!q!) Alt(alpha ⊗ beta)."""
    p, q = alpha.ndim, beta.ndim
    t = np.multiply.outer(alpha, beta)
    total = np.zeros_like(t)
    for perm in itertools.permutations(range(p + q)):
        sgn = _perm_sign(perm)
        total = total + sgn * np.transpose(t, perm)
    from math import factorial

    return total / (factorial(p) * factorial(q))


def _perm_sign(perm) -> int:
    perm = list(perm)
    s = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


def _alt(T: np.ndarray) -> np.ndarray:
    k = T.ndim
    out = np.zeros_like(T)
    for perm in itertools.permutations(range(k)):
        out = out + _perm_sign(perm) * np.transpose(T, perm)
    from math import factorial

    return out / factorial(k)


def _top(T: np.ndarray) -> complex:
    return complex(T[tuple(range(T.ndim))])


@dataclass
class HermitianData:
    h_raw: np.ndarray
    h: np.ndarray
    scale: float
    omega: np.ndarray
    signature: tuple
    varsigma: np.ndarray
    sigma: np.ndarray | None
    omega_vol: float  # ω^3/3 as multiple of dx1^dy1^...^dy3
    sigma_vol: complex | None  # (i/4) σ∧σbar as the same multiple
    flags: list = field(default_factory=list)

    @property
    def identity_residual(self) -> float | None:
        if self.sigma_vol is None:
            return None
        return abs(self.sigma_vol - self.omega_vol)

    def to_json(self) -> dict:
        return {
            "h_raw": self.h_raw.tolist(),
            "h": self.h.tolist(),
            "scale": self.scale,
            "signature": list(self.signature),
            "omega_vol": self.omega_vol,
            "sigma_vol": None if self.sigma_vol is None else [self.sigma_vol.real, self.sigma_vol.imag],
            "identity_residual": self.identity_residual,
            "flags": self.flags,
        }


def _raw_h(pt: PointTensor) -> np.ndarray:
    N = pt.to_map().values  # [k, u, v]
    # Tr_v N(a, N(b, v)) = sum_{v,m} N[v, a, m] N[m, b, v]
    t = np.einsum("vam,mbv->ab", N, N)
    return t + t.T


def _hermitian_core(pt: PointTensor) -> tuple:
    if pt.n != 3:
        raise PreconditionError("Hermitian data is defined for n = 3")
    J = standard_j(3)
    raw = _raw_h(pt)
    ev = np.linalg.eigvalsh(raw)
    scale_ref = max(1.0, float(np.abs(raw).max()))
    pos = int(np.sum(ev > 1e-9 * scale_ref))
    neg = int(np.sum(ev < -1e-9 * scale_ref))
    flags = []
    sgn = 1.0 if pos >= neg else -1.0
    d = abs(raw[0, 0])
    if d < 1e-12:
        d = float(np.abs(raw).max()) if np.abs(raw).max() > 0 else 1.0
        flags.append("h(e1,e1) = 0: scale fixed by max entry")
    scale = sgn * d
    h = raw / scale
    if sgn < 0:
        pos, neg = neg, pos
    omega = J.T @ h  # ω(ξ,η) = h(Jξ, η)
    N = pt.to_map().values
    hN = np.einsum("kxy,kz->xyz", N, h)  # h(N(X,Y), Z)
    hNJ = np.einsum("xyk,kz->xyz", hN, J)  # h(N(X,Y), J Z)
    varsigma = hN - 1j * hNJ
    return raw, h, scale, omega, (pos, neg), varsigma, flags


def _omega_vol(omega: np.ndarray) -> float:
    w3 = _wedge(_wedge(omega, omega), omega)
    return float(_top(w3).real / 3)


def _sigma_vol(sigma: np.ndarray) -> complex:
    return 0.25j * _top(_wedge(sigma, sigma.conj()))


@lru_cache(maxsize=1)
def sigma_constant() -> float:
    """Normalization of Alt(ς) fixed on the NeqS3 tensor."""
    from .catalog import point_tensor

    _, _, _, omega, _, vs, _ = _hermitian_core(point_tensor("neqs3"))
    base = _sigma_vol(_alt(vs))
    target = _omega_vol(omega)
    ratio = target / base
    if abs(ratio.imag) > 1e-9 * abs(ratio) or ratio.real <= 0:
        raise RuntimeError("σ normalization on the reference tensor is not a positive real")
    return float(np.sqrt(ratio.real))


def hermitian_data(N) -> HermitianData:
    pt = N if isinstance(N, PointTensor) else PointTensor.from_map(N)
    raw, h, scale, omega, sig, vs, flags = _hermitian_core(pt)
    ov = _omega_vol(omega)
    if sig[0] + sig[1] < 6:
        flags.append("degenerate h: σ normalization skipped")
        return HermitianData(raw, h, scale, omega, sig, vs, None, ov, None, flags)
    sigma = sigma_constant() * _alt(vs)
    return HermitianData(raw, h, scale, omega, sig, vs, sigma, ov, _sigma_vol(sigma), flags)


def volume_forms_reference() -> dict:
    """Top coefficients of ω0^3/3 and dz1∧dz2∧dz3∧conj(...) for the standard ω0."""
    J = standard_j(3)
    omega0 = J.T @ np.eye(6)
    dzs = []
    for k in range(3):
        f = np.zeros(6, complex)
        f[2 * k] = 1
        f[2 * k + 1] = 1j
        dzs.append(f)
    d3z = _wedge(_wedge(dzs[0], dzs[1]), dzs[2])
    return {"omega3_over_3": _omega_vol(omega0), "d3z_wedge_d3zbar": _top(_wedge(d3z, d3z.conj()))}
