"""Dense complex linear algebra substrate.

Conventions: the inner product ``inner(x, y) = sum(x * conj(y))`` is linear
in the FIRST argument, so ``rank_one(v, w) @ x == inner(x, w) * v``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NormTooLarge, NotHermitian, NotUnitary, ZeroVector

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
PHASE_PIVOT_TOL = 1e-12


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch("expected a nonempty 1-d vector", shape=list(arr.shape))
    return arr


def as_square(A) -> np.ndarray:
    arr = np.asarray(A, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch("expected a square matrix", shape=list(arr.shape))
    return arr


def check_same_dim(*vectors) -> int:
    dims = {np.shape(v)[0] for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatch("vectors have different dimensions", dims=sorted(dims))
    return dims.pop()


def inner(x, y) -> complex:
    """<x, y>, linear in x and conjugate-linear in y."""
    x, y = as_vector(x), as_vector(y)
    check_same_dim(x, y)
    return complex(np.vdot(y, x))


def norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    return (A + dagger(A)) / 2


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def hermiticity_residual(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - dagger(A)), initial=0.0))


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_residual(as_square(A)) <= tol


def as_hermitian(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate hermiticity entrywise and return the exactly symmetrized matrix."""
    A = as_square(A)
    res = hermiticity_residual(A)
    if res > tol:
        raise NotHermitian("matrix is not hermitian", residual=res)
    return hermitian_part(A)


def unitarity_residual(U: np.ndarray) -> float:
    U = as_square(U)
    return float(np.max(np.abs(U @ dagger(U) - np.eye(U.shape[0])), initial=0.0))


def is_unitary(U, tol: float = UNITARY_TOL) -> bool:
    return unitarity_residual(U) <= tol


def as_unitary(U, tol: float = UNITARY_TOL) -> np.ndarray:
    U = as_square(U)
    res = unitarity_residual(U)
    if res > tol:
        raise NotUnitary("matrix is not unitary", residual=res)
    return U


def rank_one(v, w) -> np.ndarray:
    """Matrix of x -> <x, w> v, i.e. entries v[i] * conj(w[j])."""
    v, w = as_vector(v), as_vector(w)
    check_same_dim(v, w)
    return np.outer(v, np.conj(w))


def projector(v) -> np.ndarray:
    return rank_one(v, v)


def trace_norm(A) -> float:
    """Sum of singular values."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch("trace norm needs a square matrix", shape=list(A.shape))
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def operator_norm(A) -> float:
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns, orthonormal


def hermitian_eigen(A, tol: float = HERMITIAN_TOL) -> EigenSystem:
    H = as_hermitian(A, tol)
    w, V = np.linalg.eigh(H)
    return EigenSystem(w, V)


def hermitian_function(H: np.ndarray, f) -> np.ndarray:
    """Apply a scalar function through the spectral decomposition of H."""
    w, V = np.linalg.eigh(hermitian_part(H))
    return (V * f(w)) @ dagger(V)


def unitary_group(H, t: float) -> np.ndarray:
    """exp(i t H) for hermitian H."""
    return hermitian_function(H, lambda w: np.exp(1j * t * w))


def null_space(M: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel of M.

    Singular values below ``rtol * s_max`` count as zero.
    """
    M = np.atleast_2d(M)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=M.dtype)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(ncols, dtype=M.dtype)
    rank = int(np.sum(s > rtol * smax))
    return dagger(vh[rank:])


def matrix_rank(M: np.ndarray, rtol: float = 1e-9) -> int:
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def orthonormal_basis(vectors: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal columns for the span of the given columns (Gram-Schmidt, two passes)."""
    vectors = np.asarray(vectors, dtype=complex)
    n, k = vectors.shape
    scale = max((np.linalg.norm(vectors[:, j]) for j in range(k)), default=0.0)
    basis: list[np.ndarray] = []
    for j in range(k):
        u = vectors[:, j].copy()
        for _ in range(2):
            for b in basis:
                u -= np.vdot(b, u) * b
        nu = np.linalg.norm(u)
        if nu > rtol * scale and nu > 0:
            basis.append(u / nu)
    if not basis:
        return np.zeros((n, 0), dtype=complex)
    return np.stack(basis, axis=1)


# --- real coordinates on the space of hermitian matrices ----------------

def herm_to_coords(A: np.ndarray) -> np.ndarray:
    """Orthonormal real coordinates of a hermitian n x n matrix (length n^2).

    The coordinates are isometric for the real Hilbert-Schmidt product
    Re tr(A B^*), so ``herm_to_coords(A) @ herm_to_coords(B) == tr(A B)``.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[-1]
    iu = np.triu_indices(n, 1)
    diag = np.real(np.diagonal(A, axis1=-2, axis2=-1))
    off = A[..., iu[0], iu[1]]
    return np.concatenate([diag, np.sqrt(2) * off.real, np.sqrt(2) * off.imag], axis=-1)


def coords_to_herm(c: np.ndarray, n: int) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != n * n:
        raise DimensionMismatch("coordinate vector has wrong length", expected=n * n, got=c.shape[-1])
    iu = np.triu_indices(n, 1)
    m = len(iu[0])
    A = np.zeros((n, n), dtype=complex)
    A[np.diag_indices(n)] = c[:n]
    off = (c[n:n + m] + 1j * c[n + m:]) / np.sqrt(2)
    A[iu] = off
    A[(iu[1], iu[0])] = np.conj(off)
    return A


# --- rays -----------------------------------------------------------------

def _canonical_phase(v: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > PHASE_PIVOT_TOL)
    if idx.size == 0:
        return v
    p = v[idx[0]]
    r = abs(p)
    c, d = p.real / r, -p.imag / r
    # real arithmetic keeps the result bit-identical under v -> i^k v
    out = (v.real * c - v.imag * d) + 1j * (v.real * d + v.imag * c)
    out[idx[0]] = r
    return out


class Ray:
    """A point [v] of projective space, stored by a canonical unit representative.

    The representative has norm one and its first entry of modulus above
    1e-12 is real and positive.
    """

    __slots__ = ("_rep",)

    def __init__(self, v):
        v = as_vector(v)
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            raise ZeroVector("a ray needs a nonzero vector")
        rep = _canonical_phase(v / nv)
        rep.setflags(write=False)
        self._rep = rep

    @property
    def rep(self) -> np.ndarray:
        return self._rep

    @property
    def dim(self) -> int:
        return self._rep.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self._rep, np.conj(self._rep))

    def transform(self, U: np.ndarray) -> "Ray":
        return Ray(np.asarray(U) @ self._rep)

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return self._rep.shape == other._rep.shape and bool(np.array_equal(self._rep, other._rep))

    def __hash__(self):
        return hash(self._rep.tobytes())

    def __repr__(self):
        return f"Ray({np.array2string(self._rep, precision=6)})"


class BallPoint:
    """A point of the closed unit ball modulo phase (zero allowed)."""

    __slots__ = ("_rep",)

    def __init__(self, v, tol: float = 1e-12):
        v = as_vector(v)
        nv = np.linalg.norm(v)
        if nv > 1 + tol:
            raise NormTooLarge("ball point must have norm <= 1", norm=float(nv))
        rep = _canonical_phase(v.copy())
        rep.setflags(write=False)
        self._rep = rep

    @property
    def rep(self) -> np.ndarray:
        return self._rep

    @property
    def dim(self) -> int:
        return self._rep.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self._rep))

    def projector(self) -> np.ndarray:
        return np.outer(self._rep, np.conj(self._rep))

    def __repr__(self):
        return f"BallPoint({np.array2string(self._rep, precision=6)})"


def same_ray(x: Ray, y: Ray, tol: float = 1e-12) -> bool:
    return x.dim == y.dim and float(np.max(np.abs(x.rep - y.rep))) <= tol


# --- unitary hull ---------------------------------------------------------

def unitary_from_hermitian_contraction(H: np.ndarray) -> np.ndarray:
    """U = H + i sqrt(1 - H^2) for hermitian H with ||H|| <= 1; then (U + U^*)/2 = H."""
    H = hermitian_part(H)
    w, V = np.linalg.eigh(H)
    if np.max(np.abs(w), initial=0.0) > 1 + 1e-12:
        raise NormTooLarge("hermitian part must have norm <= 1", norm=float(np.max(np.abs(w))))
    root = np.sqrt(np.clip(1.0 - w**2, 0.0, None))
    return (V * (w + 1j * root)) @ dagger(V)


def unitary_hull_decompose(C) -> list[tuple[complex, np.ndarray]]:
    """Write C (with ||C|| < 1/2) as an absolutely convex combination of unitaries.

    C = H1 - i H2 with H1 = (C + C^*)/2 and H2 = i(C - C^*)/2 hermitian.  The
    weights p, q >= 0, p + q = 1, are proportional to ||H1||, ||H2||, so that
    K1 = H1/p and K2 = H2/q have norm ||H1|| + ||H2|| < 1.  Each Kj is the
    real part of the unitary Uj = Kj + i sqrt(1 - Kj^2), giving

        C = p/2 U1 + p/2 U1^* - i q/2 U2 - i q/2 U2^*,

    whose coefficient moduli sum to p + q = 1.  Zero parts are dropped.
    """
    C = as_square(C)
    nc = operator_norm(C)
    if not nc < 0.5:
        raise NormTooLarge("operator norm must be < 1/2", norm=nc)
    h1 = (C + dagger(C)) / 2
    h2 = 1j * (C - dagger(C)) / 2
    n1, n2 = operator_norm(h1), operator_norm(h2)
    total = n1 + n2
    if total == 0.0:
        return []
    out: list[tuple[complex, np.ndarray]] = []
    for part, nrm, phase in ((h1, n1, 1.0), (h2, n2, -1j)):
        if nrm == 0.0:
            continue
        weight = nrm / total
        U = unitary_from_hermitian_contraction(part / weight)
        out.append((phase * weight / 2, U))
        out.append((phase * weight / 2, dagger(U)))
    return out
