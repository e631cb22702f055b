"""Point separation by magnitude measurements |<v, x>|, v in a frame E.

In dimension n the functionals A -> <A v, v> (v in E) separate hermitian
operators exactly when the projectors P_v span the n^2-dimensional real
space of hermitian matrices.  When they do not, a nonzero hermitian
``certificate`` A with <A v, v> = 0 for all v exists; if A has rank two and
is indefinite it splits as P_w2 - P_w1, and the ball points w1, w2 are not
told apart by any |<v, .>|.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, NoWitnessFound, ZeroVector
from .geometry import ball_distance
from .linalg import BallPoint, coords_to_herm, herm_to_coords, matrix_rank, orthonormal_basis
from .sampling import rng_from

log = logging.getLogger(__name__)

RANK_RTOL = 1e-9
INDEFINITE_RTOL = 1e-8
WITNESS_TOL = 1e-9
DISTINCT_TOL = 1e-6


@dataclass(frozen=True)
class Frame:
    vectors: np.ndarray  # shape (k, n)

    def __post_init__(self):
        vecs = [np.asarray(v, dtype=complex) for v in self.vectors]
        if not vecs:
            raise DimensionMismatch("a frame needs at least one vector")
        dims = {v.shape for v in vecs}
        if len(dims) != 1 or vecs[0].ndim != 1 or vecs[0].size == 0:
            raise DimensionMismatch("frame vectors must be 1-d with equal dimensions",
                                    shapes=sorted(str(d) for d in dims))
        arr = np.stack(vecs)
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return self.vectors.shape[0]

    def with_vector(self, v) -> "Frame":
        return Frame(list(self.vectors) + [np.asarray(v, dtype=complex)])

    def transformed(self, U) -> "Frame":
        return Frame(self.vectors @ np.asarray(U).T)


def as_frame(E) -> Frame:
    return E if isinstance(E, Frame) else Frame(list(E))


@dataclass(frozen=True)
class UnresolvedPair:
    w1: BallPoint
    w2: BallPoint
    certificate: np.ndarray  # P_w2 - P_w1

    def h_gap(self, E) -> float:
        """max over v in E of | |<w1, v>| - |<w2, v>| |."""
        V = as_frame(E).vectors
        h1 = np.abs(V.conj() @ self.w1.rep)
        h2 = np.abs(V.conj() @ self.w2.rep)
        return float(np.max(np.abs(h1 - h2)))

    @property
    def distance(self) -> float:
        return ball_distance(self.w1, self.w2)


@dataclass
class SeparationReport:
    projector_rank: int
    full_rank: int
    separates_ball: bool
    witness: UnresolvedPair | None = None
    certificate: np.ndarray | None = None
    status: str = "separates"
    details: dict = field(default_factory=dict)


def projector_coordinates(E) -> np.ndarray:
    """Rows are the real coordinates of P_v (unnormalized) for v in E."""
    V = as_frame(E).vectors
    P = V[:, :, None] * V.conj()[:, None, :]
    return herm_to_coords(P)


def projector_span_rank(E, rtol: float = RANK_RTOL) -> int:
    return matrix_rank(projector_coordinates(E), rtol)


def annihilator_basis(E, rtol: float = RANK_RTOL) -> list[np.ndarray]:
    """Hilbert-Schmidt orthonormal hermitian basis of {A : <A v, v> = 0 for v in E}."""
    frame = as_frame(E)
    n = frame.n
    coords = projector_coordinates(frame)
    _, s, vh = np.linalg.svd(coords, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > rtol * s[0]))
    return [coords_to_herm(row, n) for row in vh[rank:]]


def _is_total(V: np.ndarray) -> bool:
    return matrix_rank(V, RANK_RTOL) == V.shape[1]


def _orthogonal_complement_pair(V: np.ndarray) -> UnresolvedPair:
    """Frame not total: mix a vector with +-u, u orthogonal to every frame vector."""
    n = V.shape[1]
    span = orthonormal_basis(V.T) if np.any(V) else np.zeros((n, 0), dtype=complex)
    full = orthonormal_basis(np.concatenate([span, np.eye(n, dtype=complex)], axis=1))
    comp = full[:, span.shape[1]:]
    u = comp[:, 0]
    if n == 1:
        w1, w2 = BallPoint(np.zeros(1)), BallPoint(u)
    else:
        x = span[:, 0] if span.shape[1] else comp[:, 1]
        w1 = BallPoint((x + u) / math.sqrt(2))
        w2 = BallPoint((x - u) / math.sqrt(2))
    return UnresolvedPair(w1, w2, w2.projector() - w1.projector())


def _is_indefinite(A: np.ndarray) -> bool:
    w = np.linalg.eigvalsh(A)
    scale = np.max(np.abs(w))
    return bool(scale > 0 and w[0] < -INDEFINITE_RTOL * scale and w[-1] > INDEFINITE_RTOL * scale)


def _indefinite_element(basis, rng, budget: int):
    for B in basis:
        if _is_indefinite(B):
            return B
    for _ in range(budget):
        c = rng.standard_normal(len(basis))
        A = sum(ci * B for ci, B in zip(c, basis))
        if _is_indefinite(A):
            return A
    return None


def _middle_ratio(A: np.ndarray) -> float:
    w = np.linalg.eigvalsh(A)
    scale = np.max(np.abs(w))
    if scale == 0.0 or w.size <= 2:
        return 0.0
    return float(np.max(np.abs(w[1:-1])) / scale)


def _rank_two_by_pencil(basis, rng, budget: int):
    """n = 3: det is odd on the circle cos(t) A0 + sin(t) A1, so it has a root."""
    grid = np.linspace(0.0, math.pi, 91)
    pairs = [(basis[i], basis[j]) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    for _ in range(budget):
        c0, c1 = rng.standard_normal((2, len(basis)))
        pairs.append((sum(a * B for a, B in zip(c0, basis)), sum(a * B for a, B in zip(c1, basis))))
    for A0, A1 in pairs:
        def f(t):
            return float(np.real(np.linalg.det(math.cos(t) * A0 + math.sin(t) * A1)))
        vals = [f(t) for t in grid]
        for k in range(len(grid) - 1):
            if vals[k] == 0.0:
                t = grid[k]
            elif vals[k] * vals[k + 1] < 0:
                t = brentq(f, grid[k], grid[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
            else:
                continue
            A = math.cos(t) * A0 + math.sin(t) * A1
            if _is_indefinite(A):
                return A
    return None


def _rank_two_by_gauss_newton(basis, rng, restarts: int, iters: int = 60):
    """Drive the compression of A(c) = sum c_i B_i to its middle eigenspace to zero."""
    d = len(basis)
    B = np.stack(basis)
    for _ in range(restarts):
        c = rng.standard_normal(d)
        for _ in range(iters):
            c /= np.linalg.norm(c)
            A = np.tensordot(c, B, axes=1)
            _, vecs = np.linalg.eigh(A)
            W = vecs[:, 1:-1]
            R = herm_to_coords(W.conj().T @ A @ W)
            if np.linalg.norm(R) < 1e-15:
                break
            J = herm_to_coords(np.einsum("ij,kjl,lm->kim", W.conj().T, B, W)).T
            # steps stay tangent to the unit sphere; delta = -c would be a trivial solution
            J = np.vstack([J, c])
            delta, *_ = np.linalg.lstsq(J, np.append(-R, 0.0), rcond=None)
            c = c + delta
        A = np.tensordot(c / np.linalg.norm(c), B, axes=1)
        if _middle_ratio(A) < 1e-12 and _is_indefinite(A):
            return A
    return None


def _pair_from_rank_two(A: np.ndarray) -> UnresolvedPair:
    """Split a (numerically) rank-two indefinite A as P_w2 - P_w1 after scaling."""
    w, V = np.linalg.eigh(A)
    if abs(w[-1]) > abs(w[0]):
        A = -A
        w, V = np.linalg.eigh(A)
    scale = max(abs(w[0]), abs(w[-1]))
    lam_min, lam_max = w[0] / scale, w[-1] / scale
    w1 = BallPoint(math.sqrt(max(0.0, -lam_min)) * V[:, 0])
    w2 = BallPoint(math.sqrt(max(0.0, lam_max)) * V[:, -1])
    return UnresolvedPair(w1, w2, A / scale)


def find_unresolved_pair(E, seed=0, search_budget: int = 200) -> UnresolvedPair | None:
    """Two distinct ball points with equal magnitudes against every frame vector.

    Returns None when the projectors span all hermitian matrices.  Raises
    :class:`NoWitnessFound` (carrying a certificate) when the annihilator is
    nonzero but no rank-two indefinite element was found.
    """
    frame = as_frame(E)
    n = frame.n
    basis = annihilator_basis(frame)
    if not basis:
        return None
    V = frame.vectors
    if not _is_total(V):
        return _orthogonal_complement_pair(V)

    rng = rng_from(seed)
    A = _indefinite_element(basis, rng, search_budget)
    if A is None:
        raise NoWitnessFound("no rank-one-resolvable witness found", certificate=basis[0],
                             reason="annihilator has no indefinite element")
    if _middle_ratio(A) >= 1e-12:
        if n == 3 and len(basis) >= 2:
            A2 = _rank_two_by_pencil(basis, rng, 8)
        elif n >= 4 and len(basis) >= 2:
            A2 = _rank_two_by_gauss_newton(basis, rng, restarts=max(5, search_budget // 10))
        else:
            A2 = None
        if A2 is None:
            raise NoWitnessFound("no rank-one-resolvable witness found", certificate=A,
                                 reason="no rank-two element in the annihilator",
                                 annihilator_dim=len(basis))
        A = A2
    pair = _pair_from_rank_two(A)
    gap, dist = pair.h_gap(frame), pair.distance
    if gap >= WITNESS_TOL or dist <= DISTINCT_TOL:
        raise NoWitnessFound("no rank-one-resolvable witness found", certificate=A,
                             reason="witness failed validation", h_gap=gap, distance=dist)
    return pair


def separates_ball(E, seed=0) -> SeparationReport:
    frame = as_frame(E)
    n = frame.n
    rank = projector_span_rank(frame)
    full = n * n
    if rank == full:
        return SeparationReport(rank, full, True)
    try:
        pair = find_unresolved_pair(frame, seed=seed)
    except NoWitnessFound as exc:
        log.info("rank %d < %d but no rank-two witness: %s", rank, full, exc.context)
        return SeparationReport(rank, full, False, None, exc.certificate,
                                status="certificate_without_rank_one_witness", details=exc.context)
    return SeparationReport(rank, full, False, pair, pair.certificate, status="witness")


# --- dimension two ---------------------------------------------------------

def bloch_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (2,):
        raise DimensionMismatch("Bloch vectors need a vector in C^2", shape=list(v.shape))
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ZeroVector("zero vector has no Bloch point")
    a, b = v / nv
    z = np.conj(a) * b
    return np.array([2 * z.real, 2 * z.imag, abs(a) ** 2 - abs(b) ** 2])


def from_bloch(b) -> np.ndarray:
    """Unit vector in C^2 whose Bloch point is the unit 3-vector b."""
    x, y, z = np.asarray(b, dtype=float) / np.linalg.norm(b)
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def great_circle_test(v1, v2, v3, tol: float = 1e-9) -> bool:
    """True iff the three Bloch points lie on one great circle (coplanar with the origin)."""
    M = np.stack([bloch_vector(v) for v in (v1, v2, v3)])
    return abs(np.linalg.det(M)) < tol


def bloch_mirror_pair(v1, v2, v3) -> tuple[np.ndarray, np.ndarray]:
    """Two distinct unit vectors with equal |<v_j, .>| when the Bloch points share a great circle.

    Uses |<v, x>|^2 = (1 + b_v . b_x) / 2: mirroring across the plane of the
    great circle preserves every b_vj . b_x.
    """
    M = np.stack([bloch_vector(v) for v in (v1, v2, v3)])
    _, _, vh = np.linalg.svd(M)
    normal = vh[-1]
    in_plane = vh[0]
    b = (normal + in_plane) / math.sqrt(2)
    b_mirror = b - 2 * np.dot(b, normal) * normal
    return from_bloch(b), from_bloch(b_mirror)
