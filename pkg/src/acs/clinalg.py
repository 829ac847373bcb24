"""Real linear algebra for spaces carrying a complex structure.

Vectors of ``C^n`` are realified as ``(x1, y1, x2, y2, ...)``.  Complex-linear
objects are handled through their realifications; complex dimensions are
reported as half of a verified J-invariant real dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import subspace_angles

DEFAULT_TOL = 1e-9


class LinalgError(ValueError):
    pass


def standard_j(n: int) -> np.ndarray:
    """Realified multiplication by i on ``C^n``."""
    J = np.zeros((2 * n, 2 * n))
    for k in range(n):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def c2r(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def r2c(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return r[..., 0::2] + 1j * r[..., 1::2]


def realify_linear(M) -> np.ndarray:
    """Real 2n x 2n matrix of the complex-linear map ``z -> M z``."""
    M = np.asarray(M, dtype=complex)
    n, m = M.shape
    R = np.zeros((2 * n, 2 * m))
    R[0::2, 0::2] = M.real
    R[0::2, 1::2] = -M.imag
    R[1::2, 0::2] = M.imag
    R[1::2, 1::2] = M.real
    return R


def realify_antilinear(M) -> np.ndarray:
    """Real matrix of ``z -> M conj(z)``."""
    M = np.asarray(M, dtype=complex)
    n, m = M.shape
    R = np.zeros((2 * n, 2 * m))
    R[0::2, 0::2] = M.real
    R[0::2, 1::2] = M.imag
    R[1::2, 0::2] = M.imag
    R[1::2, 1::2] = -M.real
    return R


@dataclass(frozen=True)
class CpxStructuredSpace:
    real_dim: int
    J0: np.ndarray = field(repr=False)

    def __post_init__(self):
        J0 = np.asarray(self.J0, dtype=float)
        if J0.shape != (self.real_dim, self.real_dim) or self.real_dim % 2:
            raise LinalgError("J0 must be square of even size")
        if np.linalg.norm(J0 @ J0 + np.eye(self.real_dim)) > 1e-9 * max(1.0, np.linalg.norm(J0)) ** 2:
            raise LinalgError("J0^2 != -1")
        object.__setattr__(self, "J0", J0)

    @classmethod
    def standard(cls, n: int) -> "CpxStructuredSpace":
        return cls(2 * n, standard_j(n))

    @property
    def n(self) -> int:
        return self.real_dim // 2


@dataclass(frozen=True)
class RealSubspace:
    """Subspace of ``R^ambient_dim`` with an orthonormal basis (rows)."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        object.__setattr__(self, "basis", B)

    @classmethod
    def span(cls, vectors, ambient_dim: int, tol: float = DEFAULT_TOL) -> "RealSubspace":
        V = np.asarray(vectors, dtype=float).reshape(-1, ambient_dim)
        if V.size == 0:
            return cls.zero(ambient_dim)
        U, s, Vt = np.linalg.svd(V, full_matrices=False)
        smax = s[0] if s.size else 0.0
        if smax == 0.0:
            return cls.zero(ambient_dim)
        r = int(np.sum(s > tol * smax))
        return cls(ambient_dim, Vt[:r])

    @classmethod
    def zero(cls, ambient_dim: int) -> "RealSubspace":
        return cls(ambient_dim, np.zeros((0, ambient_dim)))

    @classmethod
    def full(cls, ambient_dim: int) -> "RealSubspace":
        return cls(ambient_dim, np.eye(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def contains(self, v, tol: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0:
            return True
        return np.linalg.norm(v - self.projector() @ v) <= tol * nv

    def contains_subspace(self, other: "RealSubspace", tol: float = 1e-8) -> bool:
        return all(self.contains(b, tol) for b in other.basis)

    def is_invariant(self, J0: np.ndarray, tol: float = 1e-9) -> bool:
        P = self.projector()
        return np.linalg.norm((np.eye(self.ambient_dim) - P) @ J0 @ P) < tol

    def complex_dim(self, J0: np.ndarray) -> int:
        if not self.is_invariant(J0, 1e-7):
            raise LinalgError("subspace is not J-invariant")
        return self.dim // 2

    def intersect(self, other: "RealSubspace", tol: float = 1e-8) -> "RealSubspace":
        if self.dim == 0 or other.dim == 0:
            return RealSubspace.zero(self.ambient_dim)
        M = np.hstack([self.basis.T, -other.basis.T])
        _, K = rank_and_kernel(M, tol)
        vecs = K.basis[:, : self.dim] @ self.basis
        return RealSubspace.span(vecs, self.ambient_dim, tol)

    def sum(self, other: "RealSubspace", tol: float = 1e-9) -> "RealSubspace":
        return RealSubspace.span(np.vstack([self.basis, other.basis]), self.ambient_dim, tol)

    def orth_complement(self) -> "RealSubspace":
        if self.dim == 0:
            return RealSubspace.full(self.ambient_dim)
        _, K = rank_and_kernel(self.basis, 1e-9)
        return K


def rank_and_kernel(M, tol: float = DEFAULT_TOL) -> tuple[int, RealSubspace]:
    """Numerical rank (relative to the largest singular value) and right kernel."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[1] == 0:
        raise LinalgError("empty matrix")
    if not 0 < tol < 1:
        raise LinalgError("tol must lie in (0, 1)")
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return 0, RealSubspace.full(ncols)
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = 0 if smax == 0.0 else int(np.sum(s > tol * smax))
    return r, RealSubspace(ncols, Vt[r:])


def singular_margin(M, tol: float = DEFAULT_TOL) -> float:
    """Smallest factor separating a singular value from the rank threshold.

    Values below 10 mean the rank decision is fragile.
    """
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return np.inf
    thr = tol * s[0]
    nz = s[s > 0]
    ratios = [max(x / thr, thr / x) for x in nz]
    return float(min(ratios)) if ratios else np.inf


def complex_rank_and_kernel(M, tol: float = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Rank and kernel (columns) of a complex matrix."""
    M = np.asarray(M, dtype=complex)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return 0, np.eye(ncols, dtype=complex)
    _, s, Vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    r = 0 if smax == 0 else int(np.sum(s > tol * smax))
    return r, Vh[r:].conj().T


@dataclass(frozen=True)
class AntilinearMap2:
    """Skew, C-antilinear bilinear map ``A[:, u, v] = N(e_u, e_v)`` on a realified space."""

    space: CpxStructuredSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        A = np.asarray(self.values, dtype=float)
        d = self.space.real_dim
        if A.shape != (d, d, d):
            raise LinalgError(f"values must have shape {(d, d, d)}")
        object.__setattr__(self, "values", A)

    def residuals(self) -> dict[str, float]:
        A = self.values
        J = self.space.J0
        skew = np.linalg.norm(A + A.transpose(0, 2, 1))
        # N(J u, v) = -J N(u, v)
        NJ = np.einsum("kuv,uw->kwv", A, J)
        JN = np.einsum("lk,kuv->luv", J, A)
        anti = np.linalg.norm(NJ + JN)
        return {"skew": float(skew), "antilinear": float(anti)}

    def check(self, tol: float = 1e-9) -> None:
        scale = max(1.0, float(np.linalg.norm(self.values)))
        res = self.residuals()
        bad = {k: v for k, v in res.items() if v > tol * scale}
        if bad:
            raise LinalgError(f"not a skew antilinear map: residuals {bad}")

    @property
    def n(self) -> int:
        return self.space.n

    def apply(self, u, v) -> np.ndarray:
        return np.einsum("kuv,u,v->k", self.values, np.asarray(u, float), np.asarray(v, float))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def pair_matrix(self) -> np.ndarray:
        """Columns N(e_u, e_v) for u < v (realified Lambda^2 -> T)."""
        d = self.space.real_dim
        cols = [self.values[:, u, v] for u in range(d) for v in range(u + 1, d)]
        return np.array(cols).T

    def left_matrix(self, u) -> np.ndarray:
        """Real matrix of v -> N(u, v)."""
        return np.einsum("kuv,u->kv", self.values, np.asarray(u, float))


def complex_image(N: AntilinearMap2, tol: float = DEFAULT_TOL) -> RealSubspace:
    """Smallest J-invariant subspace containing every N(e_u, e_v)."""
    d = N.space.real_dim
    cols = N.pair_matrix()
    if cols.size == 0 or np.linalg.norm(cols) == 0:
        return RealSubspace.zero(d)
    both = np.hstack([cols, N.space.J0 @ cols])
    return _image_of(both, d, tol)


def _image_of(cols: np.ndarray, d: int, tol: float) -> RealSubspace:
    U, s, _ = np.linalg.svd(cols, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return RealSubspace.zero(d)
    r = int(np.sum(s > tol * s[0]))
    return RealSubspace(d, U[:, :r].T)


def image_rank(N: AntilinearMap2, tol: float = DEFAULT_TOL) -> tuple[int, float]:
    """Complex rank of Im(N) together with the singular-value margin."""
    cols = N.pair_matrix()
    if np.linalg.norm(cols) == 0:
        return 0, np.inf
    both = np.hstack([cols, N.space.J0 @ cols])
    return _image_of(both, N.space.real_dim, tol).dim // 2, singular_margin(both, tol)


def perp_set(N: AntilinearMap2, S: RealSubspace, tol: float = DEFAULT_TOL) -> RealSubspace:
    """``{v : N(v, s) = 0 for every s in S}``."""
    d = N.space.real_dim
    if S.dim == 0:
        return RealSubspace.full(d)
    rows = [np.einsum("kuv,v->ku", N.values, s) for s in S.basis]
    M = np.vstack(rows)
    if np.linalg.norm(M) == 0:
        return RealSubspace.full(d)
    return rank_and_kernel(M, tol)[1]


def kernel_of(N: AntilinearMap2, tol: float = DEFAULT_TOL) -> RealSubspace:
    """Ker(N) = {v : N(v, .) = 0}."""
    return perp_set(N, RealSubspace.full(N.space.real_dim), tol)


def principal_angle(A: RealSubspace, B: RealSubspace) -> float:
    """Largest principal angle between equal-dimensional subspaces."""
    if A.dim != B.dim:
        return float(np.pi / 2)
    if A.dim == 0:
        return 0.0
    return float(np.max(subspace_angles(A.basis.T, B.basis.T)))


def complex_span_real(vectors_c, n: int) -> RealSubspace:
    """Realification of the complex span of vectors of ``C^n``."""
    V = np.atleast_2d(np.asarray(vectors_c, dtype=complex))
    rows = np.vstack([c2r(V), c2r(1j * V)])
    return RealSubspace.span(rows, 2 * n)


def complex_basis(S: RealSubspace, J0: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Pick real vectors b_1..b_k with S = span(b_j, J b_j) (rows)."""
    picked: list[np.ndarray] = []
    cur = RealSubspace.zero(S.ambient_dim)
    for b in S.basis:
        if cur.contains(b, tol):
            continue
        picked.append(b)
        cur = cur.sum(RealSubspace.span([b, J0 @ b], S.ambient_dim))
    return np.array(picked).reshape(-1, S.ambient_dim)
