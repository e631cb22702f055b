"""Covariant representations at matrix scale.

One-parameter groups are carried by their hermitian generator H
(U_t = exp(i t H)).  Algebras are complex spans of n x n matrices stored
with a basis orthonormal for the Hilbert-Schmidt product tr(Y^* X), which
makes the trace-preserving conditional expectation an explicit projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidAlgebra, NotInvariant, NotPositiveEnergy
from .linalg import as_hermitian, as_square, commutator, dagger, hermitian_part, unitary_group
from .sampling import complex_gaussian, random_unitary, rng_from

SPAN_RTOL = 1e-9
MEMBERSHIP_RTOL = 1e-8
INVARIANCE_TOL = 1e-9
SPLIT_TIMES = (0.1, 1.0, math.pi)


def _orthonormal_span(mats: np.ndarray, rtol: float = SPAN_RTOL) -> np.ndarray:
    """Hilbert-Schmidt orthonormal basis (k, n, n) of the complex span of mats."""
    mats = np.asarray(mats, dtype=complex)
    n = mats.shape[-1]
    rows = mats.reshape(len(mats), n * n)
    norms = np.linalg.norm(rows, axis=1)
    # rows at rounding level relative to the largest are noise, not directions
    keep = norms > rtol * norms.max(initial=0.0)
    rows = rows[keep] / norms[keep, None]
    if rows.shape[0] == 0:
        return np.zeros((0, n, n), dtype=complex)
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(s > rtol * s[0]))
    return vh[:rank].reshape(rank, n, n)


@dataclass(frozen=True)
class MatrixAlgebra:
    """A unital *-subalgebra of n x n matrices."""

    basis: np.ndarray  # (k, n, n), HS-orthonormal

    @classmethod
    def from_spanning_set(cls, mats, validate: bool = True) -> "MatrixAlgebra":
        mats = [as_square(m) for m in mats]
        if not mats:
            raise InvalidAlgebra("an algebra needs at least one matrix")
        if len({m.shape for m in mats}) != 1:
            raise DimensionMismatch("matrices have different shapes")
        alg = cls(_orthonormal_span(np.stack(mats)))
        if validate:
            res = alg.closure_residuals()
            worst = max(res.values())
            if worst > 1e-8:
                raise InvalidAlgebra("spanning set is not a unital *-algebra", **res)
        return alg

    @property
    def n(self) -> int:
        return self.basis.shape[-1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coefficients(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        return np.einsum("kij,ij->k", self.basis.conj(), X)

    def project(self, X) -> np.ndarray:
        return np.tensordot(self.coefficients(X), self.basis, axes=1)

    def residual(self, X, scale: float | None = None) -> float:
        """Distance of X from the algebra relative to max(|X|, scale) (Frobenius)."""
        X = np.asarray(X, dtype=complex)
        ref = max(float(np.linalg.norm(X)), scale or 0.0)
        if ref == 0.0:
            return 0.0
        return float(np.linalg.norm(X - self.project(X)) / ref)

    def contains(self, X, rtol: float = MEMBERSHIP_RTOL) -> bool:
        return self.residual(X) <= rtol

    def closure_residuals(self) -> dict:
        eye = np.eye(self.n)
        unit = self.residual(eye)
        adj = max((self.residual(dagger(b)) for b in self.basis), default=0.0)
        prods = self.basis[:, None] @ self.basis[None, :]
        prod = max((self.residual(p) for p in prods.reshape(-1, self.n, self.n)), default=0.0)
        return {"unit": unit, "adjoint": adj, "product": prod}

    def same_subspace(self, other: "MatrixAlgebra", rtol: float = 1e-8) -> bool:
        if self.dim != other.dim or self.n != other.n:
            return False
        return all(other.residual(b) <= rtol for b in self.basis) and all(
            self.residual(b) <= rtol for b in other.basis
        )


def generate_star_algebra(gens) -> MatrixAlgebra:
    """Smallest unital *-algebra containing gens (equal to the double commutant)."""
    gens = [as_square(g) for g in gens]
    if not gens:
        raise InvalidAlgebra("need at least one generator")
    n = gens[0].shape[0]
    if any(g.shape != (n, n) for g in gens):
        raise DimensionMismatch("generators have different shapes")
    words = gens + [dagger(g) for g in gens]
    basis = _orthonormal_span(np.eye(n, dtype=complex)[None])
    while True:
        cands = np.concatenate([basis] + [w @ basis for w in words])
        new = _orthonormal_span(cands)
        if new.shape[0] == basis.shape[0]:
            return MatrixAlgebra(new)
        basis = new


def _commutator_operator(M: np.ndarray) -> np.ndarray:
    """Row-major vec of X -> X M - M X."""
    n = M.shape[0]
    eye = np.eye(n)
    return np.kron(eye, M.T) - np.kron(M, eye)


def commutant_basis(mats, rtol: float = SPAN_RTOL) -> np.ndarray:
    """HS-orthonormal basis of {X : X M = M X for every M in mats}.

    The kernel is refined one matrix at a time, so the work stays small once
    the commutant has shrunk.
    """
    mats = [as_square(m) for m in mats]
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise DimensionMismatch("matrices have different shapes")
    kernel = np.eye(n * n, dtype=complex)
    for M in mats:
        scale = np.linalg.norm(M, 2)
        if scale == 0.0:
            continue
        K = _commutator_operator(M) @ kernel
        _, s, vh = np.linalg.svd(K, full_matrices=True)
        rank = int(np.sum(s > rtol * 2 * scale))
        kernel = kernel @ dagger(vh[rank:])
        if kernel.shape[1] == 0:
            break
    return kernel.T.reshape(-1, n, n)


def commutant(A) -> MatrixAlgebra:
    """Commutant of a MatrixAlgebra (or of a list of matrices closed under adjoint)."""
    mats = A.basis if isinstance(A, MatrixAlgebra) else list(A)
    return MatrixAlgebra(commutant_basis(mats))


def commutant_of_set(mats) -> MatrixAlgebra:
    """Commutant of the *-algebra generated by mats (adjoints included)."""
    mats = [as_square(m) for m in mats]
    return MatrixAlgebra(commutant_basis(mats + [dagger(m) for m in mats]))


def is_irreducible(gens) -> bool:
    return commutant_of_set(gens).dim == 1


def conditional_expectation(H, M: MatrixAlgebra) -> np.ndarray:
    """Trace-preserving conditional expectation onto M (HS orthogonal projection)."""
    H = as_square(H)
    if H.shape[0] != M.n:
        raise DimensionMismatch("operator and algebra dimensions differ", dims=[H.shape[0], M.n])
    return M.project(H)


def invariance_residual(H: np.ndarray, M: MatrixAlgebra) -> float:
    """max over basis m of the distance of [H, m] from M (basis is HS-normalized)."""
    worst = 0.0
    for m in M.basis:
        C = commutator(H, m)
        worst = max(worst, float(np.linalg.norm(C - M.project(C))))
    return worst


def minimal_energy_shift(H) -> tuple[float, np.ndarray]:
    """mu0 = -lambda_min(H) and H + mu0 * 1, whose spectrum starts at 0."""
    H = as_hermitian(H, 1e-9)
    mu0 = -float(np.linalg.eigvalsh(H)[0])
    return mu0, H + mu0 * np.eye(H.shape[0])


@dataclass
class SplitResult:
    A: np.ndarray  # in M, lambda_min(A) = 0
    B: np.ndarray  # in M'
    mu0: float  # shift moved from A to B

    def residuals(self, H, M: MatrixAlgebra, M_prime: MatrixAlgebra | None = None,
                  times=SPLIT_TIMES) -> dict:
        H = np.asarray(H, dtype=complex)
        A, B = self.A, self.B
        scale = float(np.linalg.norm(H))
        out = {
            "sum": float(np.max(np.abs(A + B - H))),
            "commutator_match": max(float(np.max(np.abs(commutator(A, m) - commutator(H, m))))
                                    for m in M.basis),
            "b_commutes_with_m": max(float(np.max(np.abs(commutator(B, m)))) for m in M.basis),
            "lambda_min_a": float(abs(np.linalg.eigvalsh(A)[0])),
            "a_b_commutator": float(np.max(np.abs(commutator(A, B)))),
            "exp_factorization": max(
                float(np.linalg.norm(unitary_group(H, t) - unitary_group(A, t) @ unitary_group(B, t), 2))
                for t in times
            ),
            "a_in_m": M.residual(A, scale),
        }
        if M_prime is not None:
            out["b_in_m_prime"] = M_prime.residual(B, scale)
        return out


def borchers_arveson_split(H, M: MatrixAlgebra, tol: float = INVARIANCE_TOL) -> SplitResult:
    """Factor exp(itH) = exp(itA) exp(itB) with A in M, B in M' and inf spec(A) = 0.

    Requires [H, M] inside M.  A0 = E_M(H) then satisfies [A0, m] = [H, m],
    so H - A0 commutes with M; the scalar gauge is fixed by shifting A0 to
    have lowest eigenvalue zero.
    """
    H = as_hermitian(H, 1e-9)
    if H.shape[0] != M.n:
        raise DimensionMismatch("operator and algebra dimensions differ", dims=[H.shape[0], M.n])
    res = invariance_residual(H, M)
    if res > tol * max(1.0, float(np.linalg.norm(H))):
        raise NotInvariant("algebra not invariant under the flow", residual=res)
    A0 = hermitian_part(M.project(H))
    lam = float(np.linalg.eigvalsh(A0)[0])
    eye = np.eye(M.n)
    A = A0 - lam * eye
    B = hermitian_part(H - A0) + lam * eye
    return SplitResult(A, B, -lam)


# --- covariant pairs -------------------------------------------------------

@dataclass
class CovariantPair:
    """Generators of pi(G), the generator H of U_t, and optionally the action alpha.

    ``alpha_table`` maps a time t to the matrices pi(alpha_t(g)) listed in
    generator order.  Without a table the relation is taken to be exact,
    pi(alpha_t g) := U_t pi(g) U_t^*, and only invariance of the generated
    algebra is left to check.
    """

    generators: list
    H: np.ndarray
    alpha_table: dict | None = None

    def __post_init__(self):
        self.generators = [as_square(g) for g in self.generators]
        self.H = as_hermitian(self.H, 1e-9)
        n = self.H.shape[0]
        if any(g.shape != (n, n) for g in self.generators):
            raise DimensionMismatch("generators and H have different dimensions")


def exact_alpha_table(generators, H, times) -> dict:
    return {float(t): [unitary_group(H, t) @ g @ dagger(unitary_group(H, t)) for g in generators]
            for t in times}


def verify_covariant_pair(p: CovariantPair, t_samples=None) -> dict:
    if t_samples is None:
        t_samples = sorted(p.alpha_table) if p.alpha_table else list(SPLIT_TIMES)
    worst = 0.0
    for t in t_samples:
        U = unitary_group(p.H, t)
        if p.alpha_table is None:
            continue
        images = p.alpha_table[t]
        for g, img in zip(p.generators, images):
            worst = max(worst, float(np.linalg.norm(U @ g @ dagger(U) - np.asarray(img), 2)))
    lam_min = float(np.linalg.eigvalsh(p.H)[0])
    algebra = generate_star_algebra(p.generators)
    return {
        "residual": worst,
        "invariance_residual": invariance_residual(p.H, algebra),
        "lambda_min": lam_min,
        "positive_energy": lam_min >= -1e-10,
        "t_samples": [float(t) for t in t_samples],
    }


def irreducibility_descent_check(p: CovariantPair) -> dict:
    """Compare the commutant with and without the one-parameter group.

    Positive energy is a hypothesis; with it, a trivial commutant of
    pi(G) together with H forces a trivial commutant of pi(G) alone.
    """
    lam_min = float(np.linalg.eigvalsh(p.H)[0])
    if lam_min < -1e-10:
        raise NotPositiveEnergy("generator has negative spectrum", lambda_min=lam_min)
    algebra = generate_star_algebra(p.generators)
    inv = invariance_residual(p.H, algebra)
    if inv > INVARIANCE_TOL * max(1.0, float(np.linalg.norm(p.H))):
        raise NotInvariant("generated algebra not invariant under the flow", residual=inv)
    dim_sharp = commutant_of_set(p.generators + [p.H]).dim
    dim_plain = commutant(algebra).dim
    return {
        "dim_commutant_sharp": dim_sharp,
        "dim_commutant": dim_plain,
        "sharp_irreducible": dim_sharp == 1,
        "irreducible": dim_plain == 1,
        "implication_holds": dim_sharp != 1 or dim_plain == 1,
        "lambda_min": lam_min,
    }


def _is_skew(X: np.ndarray, tol: float = 1e-10) -> bool:
    return float(np.max(np.abs(X + dagger(X)), initial=0.0)) <= tol


def spectral_rigidity_check(X, Y, tol_in: float = 1e-9, tol_out: float = 1e-7) -> dict:
    """If [X, [X, Y]] = 0 for skew-hermitian X, Y, then [X, Y] = 0.

    Conjugation by exp(sX) moves Y to Y + s[X, Y], so the spectrum of
    Y + s K (K = [X, Y]) does not depend on s; comparing second moments
    gives tr(K^2) = 0, and K skew-hermitian has tr(K^2) = -|K|_F^2.
    """
    X, Y = as_square(X), as_square(Y)
    if X.shape != Y.shape:
        raise DimensionMismatch("X and Y have different shapes")
    if not (_is_skew(X) and _is_skew(Y)):
        raise InvalidAlgebra("X and Y must be skew-hermitian")
    K = commutator(X, Y)
    dd = float(np.linalg.norm(commutator(X, K)))
    report = {"double_commutator_norm": dd, "hypothesis_holds": dd <= tol_in}
    if not report["hypothesis_holds"]:
        report["claim"] = "hypothesis fails"
        return report
    base = np.linalg.eigvalsh(hermitian_part(-1j * Y))
    drift = max(
        float(np.max(np.abs(np.linalg.eigvalsh(hermitian_part(-1j * (Y + s * K))) - base)))
        for s in (0.5, 1.0, 2.0)
    )
    knorm = float(np.linalg.norm(K, 2))
    report.update({
        "trace_k_squared": float(np.real(np.trace(K @ K))),
        "spectral_drift": drift,
        "commutator_norm": knorm,
        "claim_holds": knorm <= tol_out,
        "claim": "commutator vanishes" if knorm <= tol_out else "commutator does not vanish",
    })
    return report


# --- random instances ------------------------------------------------------

@dataclass
class BlockAlgebra:
    """M = W (sum_k M_{d_k} (x) 1_{m_k}) W^* together with its commutant."""

    blocks: list  # (d, m) pairs
    W: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        self.n = sum(d * m for d, m in self.blocks)

    def _embed(self, parts) -> np.ndarray:
        X = np.zeros((self.n, self.n), dtype=complex)
        o = 0
        for (d, m), P in zip(self.blocks, parts):
            X[o:o + d * m, o:o + d * m] = P
            o += d * m
        return self.W @ X @ dagger(self.W)

    def algebra_basis(self, prime: bool = False) -> list:
        out = []
        for k, (d, m) in enumerate(self.blocks):
            a, b = (m, d) if prime else (d, m)
            for i in range(a):
                for j in range(a):
                    E = np.zeros((a, a))
                    E[i, j] = 1.0
                    local = np.kron(np.eye(b), E) if prime else np.kron(E, np.eye(b))
                    parts = [np.zeros((dd * mm, dd * mm)) for dd, mm in self.blocks]
                    parts[k] = local / math.sqrt(b)
                    out.append(self._embed(parts))
        return out

    def algebra(self, prime: bool = False) -> MatrixAlgebra:
        return MatrixAlgebra(np.stack(self.algebra_basis(prime)))

    def random_element(self, rng, prime: bool = False, hermitian: bool = True) -> np.ndarray:
        parts = []
        for d, m in self.blocks:
            a, b = (m, d) if prime else (d, m)
            Z = complex_gaussian(rng, a, a)
            if hermitian:
                Z = (Z + dagger(Z)) / 2
            parts.append(np.kron(np.eye(b), Z) if prime else np.kron(Z, np.eye(b)))
        return self._embed(parts)

    def random_unitary(self, rng, prime: bool = False) -> np.ndarray:
        parts = []
        for d, m in self.blocks:
            a, b = (m, d) if prime else (d, m)
            U = random_unitary(rng, a)
            parts.append(np.kron(np.eye(b), U) if prime else np.kron(U, np.eye(b)))
        return self._embed(parts)


def random_block_algebra(seed, n_max: int = 12, max_blocks: int = 4) -> BlockAlgebra:
    rng = rng_from(seed)
    blocks: list[tuple[int, int]] = []
    remaining = n_max
    for _ in range(int(rng.integers(1, max_blocks + 1))):
        d, m = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        if d * m > remaining:
            break
        blocks.append((d, m))
        remaining -= d * m
    if not blocks:
        blocks = [(int(rng.integers(1, 4)), 1)]
    n = sum(d * m for d, m in blocks)
    return BlockAlgebra(blocks, random_unitary(rng, n))


def random_split_instance(seed, n_max: int = 12):
    """(H, M, M', A_true, B_true) with H = A_true + B_true, A_true in M, B_true in M'."""
    rng = rng_from(seed)
    ba = random_block_algebra(rng, n_max)
    A_true = ba.random_element(rng)
    B_true = ba.random_element(rng, prime=True)
    return hermitian_part(A_true + B_true), ba.algebra(), ba.algebra(prime=True), A_true, B_true


def random_covariant_instance(seed, n_max: int = 8, irreducible_fraction: float = 0.3) -> CovariantPair:
    """Positive-energy covariant pair whose flow preserves the generated algebra.

    pi(G) is generated by random unitaries inside a block algebra; H is a
    hermitian element of the generated algebra N plus one of N', shifted to
    have nonnegative spectrum.  A fraction of instances uses a single full
    matrix block so that the pair is irreducible.
    """
    rng = rng_from(seed)
    if rng.random() < irreducible_fraction:
        n = int(rng.integers(2, n_max + 1))
        ba = BlockAlgebra([(n, 1)], random_unitary(rng, n))
        ngens = 2
    else:
        ba = random_block_algebra(rng, n_max)
        ngens = int(rng.integers(1, 3))
    gens = [ba.random_unitary(rng) for _ in range(ngens)]
    N = generate_star_algebra(gens)
    Np = commutant(N)
    a = hermitian_part(np.tensordot(complex_gaussian(rng, N.dim), N.basis, axes=1))
    b = hermitian_part(np.tensordot(complex_gaussian(rng, Np.dim), Np.basis, axes=1))
    H = a + b
    H = H - (np.linalg.eigvalsh(H)[0] - rng.random()) * np.eye(ba.n)
    return CovariantPair(gens, hermitian_part(H))


def random_rigidity_instance(seed, n_max: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Skew-hermitian X, Y with [X, [X, Y]] = 0: Y commutes with X blockwise.

    X has integer eigenvalues with repeats, so its eigenspaces (and hence
    the kernel of ad_X) are separated by gaps of at least one.
    """
    rng = rng_from(seed)
    n = int(rng.integers(2, n_max + 1))
    levels = rng.integers(-3, 4, size=n).astype(float)
    U = random_unitary(rng, n)
    X = U @ np.diag(1j * levels) @ dagger(U)
    Z = np.zeros((n, n), dtype=complex)
    for lev in np.unique(levels):
        idx = np.flatnonzero(levels == lev)
        G = complex_gaussian(rng, len(idx), len(idx))
        Z[np.ix_(idx, idx)] = (G - dagger(G)) / 2
    Y = U @ Z @ dagger(U)
    return (X - dagger(X)) / 2, (Y - dagger(Y)) / 2
