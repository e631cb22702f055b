import math

import numpy as np
import pytest
from hypothesis import given, settings

from helpers import X, Z, seeds
from projray.covariance import (
    CovariantPair,
    MatrixAlgebra,
    borchers_arveson_split,
    commutant,
    commutant_of_set,
    conditional_expectation,
    exact_alpha_table,
    generate_star_algebra,
    irreducibility_descent_check,
    is_irreducible,
    minimal_energy_shift,
    random_block_algebra,
    random_covariant_instance,
    random_rigidity_instance,
    random_split_instance,
    spectral_rigidity_check,
    verify_covariant_pair,
)
from projray.errors import InvalidAlgebra, NotInvariant, NotPositiveEnergy
from projray.linalg import unitary_group
from projray.sampling import random_hermitian, rng_from

I2 = np.eye(2)
DIAG = np.diag([1.0, 2.0])


def full_algebra(n):
    return generate_star_algebra([np.eye(n, k=1), np.eye(n, k=-1), np.diag(np.arange(n))])


def m2_tensor_one():
    return MatrixAlgebra.from_spanning_set(
        [np.kron(np.outer(I2[i], I2[j]), I2) for i in range(2) for j in range(2)])


def test_generate_examples():
    assert generate_star_algebra([I2]).dim == 1
    assert generate_star_algebra([X, Z]).dim == 4
    D = generate_star_algebra([DIAG])
    assert D.dim == 2
    assert D.contains(np.diag([5.0, -3.0])) and not D.contains(X)
    for r in D.closure_residuals().values():
        assert r < 1e-12


def test_generate_ignores_rounding_level_products():
    e = np.eye(2)
    units = [np.kron(np.outer(e[i], e[j]), e) for i in range(2) for j in range(2)]
    M = generate_star_algebra(units)
    assert M.dim == 4 and M.same_subspace(m2_tensor_one())


def test_from_spanning_set_rejects_non_algebras():
    with pytest.raises(InvalidAlgebra):
        MatrixAlgebra.from_spanning_set([X])


def test_commutant_examples():
    assert commutant(generate_star_algebra([X, Z])).dim == 1
    assert commutant(generate_star_algebra([I2])).dim == 4
    D = generate_star_algebra([DIAG])
    assert commutant(D).same_subspace(D)


def test_irreducibility_examples():
    assert is_irreducible([X, Z])
    assert not is_irreducible([DIAG])
    w = np.exp(2j * math.pi / 3)
    clock = np.diag([1, w, w * w])
    shift = np.roll(np.eye(3), 1, axis=0)
    assert is_irreducible([clock, shift])


def test_conditional_expectation_examples():
    H = random_hermitian(rng_from(0), 3)
    np.testing.assert_allclose(conditional_expectation(H, generate_star_algebra([np.eye(3)])),
                               np.trace(H) / 3 * np.eye(3), atol=1e-12)
    np.testing.assert_allclose(conditional_expectation(H, full_algebra(3)), H, atol=1e-12)
    rng = rng_from(1)
    A0, B0 = random_hermitian(rng, 2), random_hermitian(rng, 2)
    H = np.kron(A0, I2) + np.kron(I2, B0)
    np.testing.assert_allclose(conditional_expectation(H, m2_tensor_one()),
                               np.kron(A0, I2) + np.trace(B0) / 2 * np.eye(4), atol=1e-12)


def test_split_tensor_example():
    M = m2_tensor_one()
    H = np.kron(np.diag([0.0, 1.0]), I2) + np.kron(I2, np.diag([1.0, 3.0]))
    res = borchers_arveson_split(H, M)
    np.testing.assert_allclose(res.A, np.kron(np.diag([0.0, 1.0]), I2), atol=1e-12)
    np.testing.assert_allclose(res.B, np.kron(I2, np.diag([1.0, 3.0])), atol=1e-12)
    assert res.mu0 == pytest.approx(-2.0)
    r = res.residuals(H, M, commutant(M))
    assert max(r.values()) < 1e-9


def test_split_extreme_algebras():
    H = random_hermitian(rng_from(2), 3)
    lam = np.linalg.eigvalsh(H)[0]
    res = borchers_arveson_split(H, full_algebra(3))
    np.testing.assert_allclose(res.A, H - lam * np.eye(3), atol=1e-12)
    np.testing.assert_allclose(res.B, lam * np.eye(3), atol=1e-12)
    res = borchers_arveson_split(H, generate_star_algebra([np.eye(3)]))
    np.testing.assert_allclose(res.A, 0, atol=1e-12)
    np.testing.assert_allclose(res.B, H, atol=1e-12)


def test_split_requires_invariance():
    with pytest.raises(NotInvariant) as exc:
        borchers_arveson_split(X, generate_star_algebra([DIAG]))
    assert exc.value.context["residual"] > 0.1


def test_min_energy_examples():
    U = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    mu0, H0 = minimal_energy_shift(U @ np.diag([-1.0, 2.0]) @ U.T)
    assert mu0 == pytest.approx(1.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(H0), [0, 3], atol=1e-12)
    mu0, H0 = minimal_energy_shift(np.diag([0.5, 4.0]))
    assert mu0 <= 0 and np.linalg.eigvalsh(H0)[0] == pytest.approx(0.0)
    assert minimal_energy_shift(np.zeros((2, 2)))[0] == 0.0


def test_verify_covariant_pair_examples():
    trivial = CovariantPair([DIAG], np.diag([0.0, 3.0]), exact_alpha_table([DIAG], np.zeros((2, 2)), [1.0]))
    assert verify_covariant_pair(trivial)["residual"] == pytest.approx(0.0, abs=1e-15)
    H = Z + I2
    table = {t: [unitary_group(Z, t) @ g @ unitary_group(Z, -t) for g in (X, Z)] for t in (0.1, 1.0)}
    assert verify_covariant_pair(CovariantPair([X, Z], H, table))["residual"] < 1e-10
    table[1.0][0] = X
    assert verify_covariant_pair(CovariantPair([X, Z], H, table))["residual"] > 0.1


def test_descent_examples():
    r = irreducibility_descent_check(CovariantPair([X, Z], I2))
    assert r["dim_commutant_sharp"] == 1 and r["dim_commutant"] == 1 and r["implication_holds"]
    G = np.diag([1, 1, -1]).astype(complex)
    r = irreducibility_descent_check(CovariantPair([G], np.diag([0.0, 1.0, 2.0])))
    assert r["dim_commutant_sharp"] > 1 and r["implication_holds"]
    with pytest.raises(NotPositiveEnergy):
        irreducibility_descent_check(CovariantPair([X, Z], -I2))
    with pytest.raises(NotInvariant):
        irreducibility_descent_check(CovariantPair([np.diag([1, -1, 1j])], np.ones((3, 3))))


def test_rigidity_examples():
    r = spectral_rigidity_check(1j * np.diag([1.0, 2.0]), 1j * np.diag([3.0, -1.0]))
    assert r["hypothesis_holds"] and r["commutator_norm"] == 0.0
    r = spectral_rigidity_check(1j * np.diag([1.0, 2.0]), 1j * X)
    assert not r["hypothesis_holds"] and "commutator_norm" not in r
    with pytest.raises(InvalidAlgebra):
        spectral_rigidity_check(X, X)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_double_commutant(seed):
    ba = random_block_algebra(seed, n_max=8)
    rng = rng_from(seed)
    N = generate_star_algebra([ba.random_unitary(rng) for _ in range(2)])
    assert commutant(commutant(N)).same_subspace(N)
    assert commutant_of_set(list(N.basis)).same_subspace(commutant(N))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_split_exactness(seed):
    H, M, Mp, _, _ = random_split_instance(seed, n_max=8)
    r = borchers_arveson_split(H, M).residuals(H, M, Mp)
    assert r["sum"] < 1e-9 and r["commutator_match"] < 1e-9 and r["b_commutes_with_m"] < 1e-9
    assert r["lambda_min_a"] < 1e-9 and r["a_b_commutator"] < 1e-9
    assert r["exp_factorization"] < 1e-8 and r["a_in_m"] < 1e-8 and r["b_in_m_prime"] < 1e-8


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_descent_never_violated(seed):
    assert irreducibility_descent_check(random_covariant_instance(seed, n_max=6))["implication_holds"]


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_rigidity_instances(seed):
    r = spectral_rigidity_check(*random_rigidity_instance(seed))
    assert r["hypothesis_holds"] and r["claim_holds"]
    assert r["spectral_drift"] < 1e-9
