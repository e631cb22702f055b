import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import E1, E2, PLUS, PLUS_I, gaussian, seeds
from projray.errors import DimensionMismatch, NoWitnessFound
from projray.geometry import ball_distance
from projray.linalg import BallPoint, projector
from projray.sampling import random_unitary, rng_from
from projray.separation import (
    DISTINCT_TOL,
    WITNESS_TOL,
    Frame,
    annihilator_basis,
    bloch_mirror_pair,
    bloch_vector,
    find_unresolved_pair,
    great_circle_test,
    projector_span_rank,
    separates_ball,
)

TETRA = [E1, E2, PLUS, PLUS_I]
TRIPLE = [E1, PLUS, PLUS_I]


def assert_valid_witness(pair, E):
    assert pair.h_gap(E) < WITNESS_TOL
    assert pair.distance > DISTINCT_TOL
    for v in np.atleast_2d(E):
        assert abs(np.vdot(v, pair.certificate @ v)) < 1e-9
    np.testing.assert_allclose(pair.certificate, pair.w2.projector() - pair.w1.projector(), atol=1e-12)


@pytest.mark.parametrize("E, rank", [([E1, E2], 2), (TETRA, 4), (TRIPLE, 3)])
def test_rank_examples(E, rank):
    assert projector_span_rank(E) == rank


def test_rank_oracle_gram_determinant():
    # explicit real 4x4 Gram matrix of the four projectors is nonsingular
    P = [projector(v) for v in TETRA]
    G = np.array([[np.trace(a @ b).real for b in P] for a in P])
    assert abs(np.linalg.det(G)) > 1e-3


def test_frame_validation():
    with pytest.raises(DimensionMismatch):
        Frame([E1, np.ones(3)])
    with pytest.raises(ValueError):
        Frame([])


def test_orthonormal_basis_is_not_separating():
    rep = separates_ball([E1, E2])
    assert rep.projector_rank == 2 and not rep.separates_ball
    assert rep.status == "witness"
    assert_valid_witness(rep.witness, [E1, E2])


def test_tetrahedral_frame_separates():
    rep = separates_ball(TETRA)
    assert rep.separates_ball and rep.witness is None and rep.full_rank == 4
    assert find_unresolved_pair(TETRA) is None


def test_one_dimensional_frame_separates():
    rep = separates_ball([np.array([1.0])])
    assert rep.separates_ball and rep.projector_rank == 1


def test_three_vector_example_witness():
    pair = find_unresolved_pair(TRIPLE)
    assert_valid_witness(pair, TRIPLE)
    s3 = math.sqrt(3)
    A = pair.certificate
    # certificate is proportional to [[0, 1-i], [1+i, -2]]
    ref = np.array([[0, 1 - 1j], [1 + 1j, -2]])
    k = np.vdot(ref, A) / np.vdot(ref, ref)
    np.testing.assert_allclose(A, k * ref, atol=1e-12)
    assert abs(k) * (1 + s3) == pytest.approx(1.0, abs=1e-12)
    norms = sorted([pair.w1.norm, pair.w2.norm])
    assert norms[1] == pytest.approx(1.0, abs=1e-12)
    assert norms[0] ** 2 == pytest.approx((s3 - 1) / (s3 + 1), abs=1e-12)


def test_annihilator_of_orthonormal_basis():
    basis = annihilator_basis([E1, E2])
    assert len(basis) == 2
    for A in basis:
        assert abs(A[0, 0]) < 1e-12 and abs(A[1, 1]) < 1e-12


def test_non_total_frame_pair_lies_off_the_span():
    E = [np.array([1, 0, 0]), np.array([1, 1, 0])]
    pair = find_unresolved_pair(E)
    assert_valid_witness(pair, E)


def test_certificate_only_fallback_is_flagged():
    # in C^3, nine generic vectors leave a one-dimensional annihilator,
    # which generically holds no rank-two element
    flagged = 0
    for seed in range(20):
        E = gaussian(seed, 8, 3)
        rep = separates_ball(E, seed=seed)
        assert not rep.separates_ball
        if rep.witness is None:
            flagged += 1
            assert rep.status == "certificate_without_rank_one_witness"
            C = rep.certificate
            for v in E:
                assert abs(np.vdot(v, C @ v)) < 1e-9 * np.linalg.norm(C)
        else:
            assert_valid_witness(rep.witness, E)
    assert flagged > 0
    with pytest.raises(NoWitnessFound) as exc:
        for seed in range(20):
            find_unresolved_pair(gaussian(seed, 8, 3), seed=seed)
    assert exc.value.certificate is not None
    assert exc.value.code == "certificate_without_rank_one_witness"


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 5))
def test_rank_monotone_and_unitarily_covariant(seed, k):
    rng = rng_from(seed)
    E = gaussian(seed, k, 3)
    r = projector_span_rank(E)
    assert projector_span_rank(np.vstack([E, gaussian(seed + 1, 1, 3)])) >= r
    U = random_unitary(rng, 3)
    assert projector_span_rank(E @ U.T) == r


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_witness_validity(seed, n):
    rng = rng_from(seed)
    k = int(rng.integers(1, n * n + 1))
    E = gaussian(seed, k, n)
    try:
        pair = find_unresolved_pair(E, seed=seed)
    except NoWitnessFound:
        return
    if projector_span_rank(E) == n * n:
        assert pair is None
    else:
        assert_valid_witness(pair, E)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_three_vectors_in_c2_always_have_a_witness(seed):
    E = gaussian(seed, 3, 2)
    rep = separates_ball(E, seed=seed)
    assert not rep.separates_ball and rep.witness is not None
    assert_valid_witness(rep.witness, E)


def test_bloch_examples():
    np.testing.assert_allclose(bloch_vector(E1), [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(bloch_vector(PLUS), [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(bloch_vector(PLUS_I), [0, 1, 0], atol=1e-15)
    assert not great_circle_test(E1, PLUS, PLUS_I)
    assert great_circle_test(E1, E2, PLUS)
    assert great_circle_test(PLUS, PLUS, E1)


def test_bloch_overlap_identity():
    v, x = gaussian(3, 2), gaussian(4, 2)
    v, x = v / np.linalg.norm(v), x / np.linalg.norm(x)
    assert abs(np.vdot(x, v)) ** 2 == pytest.approx((1 + bloch_vector(v) @ bloch_vector(x)) / 2)


def test_mirror_pair_on_great_circle():
    E = [E1, E2, PLUS]
    w1, w2 = bloch_mirror_pair(*E)
    h1 = [abs(np.vdot(w1, v)) for v in E]
    h2 = [abs(np.vdot(w2, v)) for v in E]
    np.testing.assert_allclose(h1, h2, atol=1e-12)
    assert ball_distance(BallPoint(w1), BallPoint(w2)) > 1e-6
