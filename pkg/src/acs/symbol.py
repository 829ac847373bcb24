"""Symbols of the symmetry equation of (J, N) and their prolongations.

Everything is computed at a point from the structure constants of N in a
complex basis.  An element of ``S^k T* (x)_C T`` is stored as a complex array
``H[out, i_1, ..., i_k]`` symmetric in the lower indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .clinalg import DEFAULT_TOL, AntilinearMap2
from .nijenhuis import LOW_CONFIDENCE, PointTensor, PreconditionError, as_point_tensor

MAX_ORDER = 6


class SizeGuardError(PreconditionError):
    pass


@dataclass
class SymbolSpace:
    """Real subspace of ``S^k T* (x)_C T`` given by a real basis of complex tensors."""

    n: int
    order: int
    basis: np.ndarray  # shape (dim, n, n, ..., n) with order+1 tensor slots

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def _real_rows(self) -> np.ndarray:
        flat = self.basis.reshape(self.dim, -1)
        return np.hstack([flat.real, flat.imag])

    def contains(self, h, tol: float = 1e-8) -> bool:
        h = np.asarray(h, complex).reshape(-1)
        v = np.concatenate([h.real, h.imag])
        if self.dim == 0:
            return float(np.linalg.norm(v)) <= tol
        R = self._real_rows()
        coef, *_ = np.linalg.lstsq(R.T, v, rcond=None)
        return float(np.linalg.norm(R.T @ coef - v)) <= tol * max(1.0, float(np.linalg.norm(v)))

    def is_complex(self, tol: float = 1e-8) -> bool:
        return all(self.contains(1j * b, tol) for b in self.basis)


def _gamma1_operator(pt: PointTensor) -> tuple[np.ndarray, np.ndarray]:
    """Complex matrices A, B with L(f) = A conj(vec f) + B vec f.

    L(f)[a, b, k] = sum_i conj(f_ia) c_ibk + sum_j conj(f_jb) c_ajk - sum_l f_kl c_abl,
    vec f indexes (row, col) as row * n + col.
    """
    n, c = pt.n, pt.c
    A = np.zeros((n, n, n, n, n), complex)  # [a, b, k, row, col]
    B = np.zeros((n, n, n, n, n), complex)
    for a in range(n):
        for b in range(n):
            for i in range(n):
                A[a, b, :, i, a] += c[i, b, :]
                A[a, b, :, i, b] += c[a, i, :]
            for k in range(n):
                B[a, b, k, k, :] -= c[a, b, :]
    return A.reshape(n**3, n * n), B.reshape(n**3, n * n)


def _real_system(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Real matrix of h -> P conj(h) + Q h acting on (Re h, Im h)."""
    M1 = P + Q
    M2 = 1j * (Q - P)
    return np.vstack([np.hstack([M1.real, M2.real]), np.hstack([M1.imag, M2.imag])])


def _real_kernel(M: np.ndarray, tol: float) -> np.ndarray:
    if M.shape[0] == 0:
        return np.eye(M.shape[1])
    _, s, Vt = np.linalg.svd(M)
    scale = max(float(s[0]) if s.size else 0.0, 1.0)
    r = int(np.sum(s > tol * scale))
    return Vt[r:]


def _multisets(n: int, k: int):
    return list(itertools.combinations_with_replacement(range(n), k))


def gamma_k(N, k: int, tol: float = DEFAULT_TOL) -> SymbolSpace:
    """``g_1`` for k = 1, its k-th prolongation otherwise."""
    pt = as_point_tensor(N)
    n = pt.n
    if k < 1:
        raise ValueError("order must be >= 1")
    if k > MAX_ORDER:
        raise SizeGuardError(f"order {k} exceeds the size guard {MAX_ORDER}")
    A, B = _gamma1_operator(pt)
    ms = _multisets(n, k)
    index = {m: t for t, m in enumerate(ms)}
    nun = n * len(ms)  # complex unknowns H[out, multiset]

    def unk(out, m):
        return out * len(ms) + index[tuple(sorted(m))]

    blocks = []
    for I in _multisets(n, k - 1):
        S = np.zeros((n * n, nun))
        for row in range(n):
            for col in range(n):
                S[row * n + col, unk(row, I + (col,))] = 1.0
        P, Q = A @ S, B @ S
        blocks.append(_real_system(P, Q))
        if k > 1:
            blocks.append(_real_system(-1j * P, 1j * Q))
    K = _real_kernel(np.vstack(blocks), tol)
    basis = np.zeros((K.shape[0],) + (n,) * (k + 1), complex)
    for t, v in enumerate(K):
        h = v[:nun] + 1j * v[nun:]
        H = basis[t]
        for out in range(n):
            for m in ms:
                val = h[unk(out, m)]
                for perm in set(itertools.permutations(m)):
                    H[(out,) + perm] = val
    return SymbolSpace(n, k, basis)


def gamma1(N, tol: float = DEFAULT_TOL) -> SymbolSpace:
    return gamma_k(N, 1, tol)


def gamma2(N, tol: float = DEFAULT_TOL) -> SymbolSpace:
    return gamma_k(N, 2, tol)


# checks on reported bases ------------------------------------------------


def apply_h(H: np.ndarray, *args) -> np.ndarray:
    out = H
    for x in reversed(args):
        out = out @ x
    return out


def njj_residual(pt: PointTensor, H: np.ndarray) -> float:
    """max over basis triples of |N(h(x,y),z) - N(h(x,z),y)|."""
    n = pt.n
    E = np.eye(n)
    worst = 0.0
    for a, b, c in itertools.product(range(n), repeat=3):
        r = pt.apply(apply_h(H, E[a], E[b]), E[c]) - pt.apply(apply_h(H, E[a], E[c]), E[b])
        worst = max(worst, float(np.linalg.norm(r)))
    return worst


def image_and_perp(pt: PointTensor, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of W = Im N and W^perp = {v : N(v, W) = 0}."""
    W = pt.image_basis(tol)
    n = pt.n
    if W.shape[1] == 0:
        return W, np.eye(n, dtype=complex)
    # N(v, w) = sum_i conj(v_i) (sum_j conj(w_j) c_ij.)
    M = np.vstack([np.einsum("j,ijk->ki", W[:, t].conj(), pt.c) for t in range(W.shape[1])])
    _, s, Vh = np.linalg.svd(M)
    r = int(np.sum(s > tol * max(s[0], 1e-300))) if s.size else 0
    perp = Vh[r:].T  # kernel in conj(v)
    return W, perp.conj()


def containment_residual(pt: PointTensor, H: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """How far H is from ``S^k Ann(W) (x) W^perp``."""
    W, P = image_and_perp(pt, tol)
    k = H.ndim - 1
    n = pt.n
    worst = 0.0
    for t in range(W.shape[1]):
        args = [W[:, t]] + [None] * (k - 1)
        for rest in itertools.product(range(n), repeat=k - 1):
            vecs = [W[:, t]] + [np.eye(n)[r] for r in rest]
            worst = max(worst, float(np.linalg.norm(apply_h(H, *vecs))))
    proj = P @ P.conj().T if P.shape[1] else np.zeros((n, n))
    flat = H.reshape(n, -1)
    worst = max(worst, float(np.linalg.norm(flat - proj @ flat)))
    return worst


@dataclass
class SymbolTower:
    dims: list
    spaces: list = field(repr=False)
    finite_type: bool
    stabilized_at: int | None
    checks: dict = field(default_factory=dict)

    @property
    def hilbert(self) -> list:
        """Partial sums of dims starting at order 1."""
        return list(itertools.accumulate(self.dims))

    def to_json(self) -> dict:
        return {
            "gamma_dims": list(self.dims),
            "hilbert": self.hilbert,
            "finite_type": self.finite_type,
            "stabilized_at": self.stabilized_at,
            "checks": self.checks,
        }


def symbol_tower(N, k_max: int = 4, tol: float = DEFAULT_TOL) -> SymbolTower:
    pt = as_point_tensor(N)
    if k_max > MAX_ORDER:
        raise SizeGuardError(f"max order {k_max} exceeds {MAX_ORDER}")
    if pt.n > 5 and k_max > 4:
        raise SizeGuardError("n > 5 with max order > 4 is refused (dimension explosion)")
    spaces = []
    finite = False
    for k in range(1, k_max + 1):
        sp = gamma_k(pt, k, tol)
        spaces.append(sp)
        if sp.dim == 0:
            finite = True
            break
    dims = [s.dim for s in spaces]
    stab = None
    for t in range(1, len(dims)):
        if dims[t] == dims[t - 1] and stab is None:
            stab = t + 1
        elif dims[t] != dims[t - 1]:
            stab = None
    checks = {"prolongation": True, "njj": 0.0, "containment": 0.0}
    for t in range(1, len(spaces)):
        lower = spaces[t - 1]
        for H in spaces[t].basis:
            for a in range(pt.n):
                if not lower.contains(H[..., a]):
                    checks["prolongation"] = False
            if t == 1:
                checks["njj"] = max(checks["njj"], njj_residual(pt, H))
            checks["containment"] = max(checks["containment"], containment_residual(pt, H, tol))
    return SymbolTower(dims, spaces, finite, stab, checks)


# characteristic variety ------------------------------------------------------


@dataclass
class CharVarietyReport:
    p_complex: int | None  # None: finite type, no characteristic covectors
    components: int
    kernel_rank_complex: int
    zeta_real: int
    samples: int
    flags: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def phrase(self) -> str:
        if self.p_complex is None:
            return "finite type: no characteristic covectors"
        return f"{self.kernel_rank_complex} complex functions of {self.p_complex} arguments"

    def to_json(self) -> dict:
        return {
            "p_complex": self.p_complex,
            "components": self.components,
            "kernel_rank_complex": self.kernel_rank_complex,
            "zeta_real": self.zeta_real,
            "samples": self.samples,
            "phrase": self.phrase,
            "flags": self.flags,
            "notes": self.notes,
        }


def kernel_space(pt: PointTensor, rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """K_rho = {v : N(v, ker rho) = 0} (columns)."""
    n = pt.n
    _, s, Vh = np.linalg.svd(rho.reshape(1, n))
    hyper = Vh[1:].T  # ker rho
    if pt.is_zero():
        return np.eye(n, dtype=complex)
    M = np.vstack([np.einsum("j,ijk->ki", hyper[:, t].conj(), pt.c) for t in range(hyper.shape[1])])
    _, s, Vh = np.linalg.svd(M)
    r = int(np.sum(s > tol * max(s[0], 1e-300)))
    return Vh[r:].T.conj()


def char_variety(N, samples: int = 20, seed: int = 0, tol: float = DEFAULT_TOL) -> CharVarietyReport:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pt = as_point_tensor(N)
    n = pt.n
    rng = np.random.default_rng(seed)
    W = pt.image_basis(tol)
    # Ann(W) as row covectors
    if W.shape[1] == 0:
        ann = np.eye(n, dtype=complex)
    else:
        _, s, Vh = np.linalg.svd(W.T)
        ann = Vh[W.shape[1]:].conj()
    ann_dim = ann.shape[0]
    if ann_dim == 0:
        return CharVarietyReport(None, 0, 0, 0, samples, [], ["Im N = T: finite type"])
    ranks = []
    for _ in range(samples):
        coef = rng.normal(size=ann_dim) + 1j * rng.normal(size=ann_dim)
        rho = coef @ ann
        ranks.append(kernel_space(pt, rho).shape[1])
    values, counts = np.unique(ranks, return_counts=True)
    k = int(values[np.argmax(counts)])
    flags = []
    if counts.max() < 0.9 * samples:
        flags.append(LOW_CONFIDENCE)
    notes = []
    if k == 0:
        notes.append("generic K_rho = 0 on Ann(W); no characteristic stratum of full dimension found")
        return CharVarietyReport(None, 0, 0, 0, samples, flags, notes)
    comps = 2
    return CharVarietyReport(ann_dim, comps, k, comps * k, samples, flags, notes)


def submaximal_bound(n: int) -> tuple[int, int]:
    if n < 2:
        raise ValueError("n must be >= 2")
    return n - 1, (n - 1 if n <= 3 else n - 2)


def flat_symbol_dim(n: int, k: int) -> int:
    """Real dimension of S^k(C^n)* (x) C^n."""
    return 2 * n * math.comb(n + k - 1, k)
