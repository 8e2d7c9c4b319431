import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosscov.covariance import LatentParams, reconstruct, validate, singular_value_ratio
from crosscov.errors import NotPSD, NotSymmetric, RankTooHigh, WrongDimensions
from crosscov.parameterization import alpha_bounds, decompose, single_latent_params

from conftest import EQ10, random_latent_params


def test_validate_eq10_is_rank_one():
    cov = validate(EQ10, 3, 2, strict_rank=True)
    assert cov.sv_ratio < 1e-12
    np.testing.assert_array_equal(cov.xy, [[1, 0.5], [2, 1], [3, 1.5]])
    np.testing.assert_array_equal(cov.yx, cov.xy.T)


def test_identity_is_psd_but_not_rank_one():
    cov = validate(np.eye(4), 2, 2)
    assert np.isnan(cov.sv_ratio)
    with pytest.raises(RankTooHigh):
        validate(np.eye(4), 2, 2, strict_rank=True)


def test_full_rank_cross_block_rejected_in_strict_mode():
    s = np.eye(4) * 3
    s[0, 2] = s[2, 0] = 1.0
    s[1, 3] = s[3, 1] = 0.5
    assert validate(s, 2, 2).sv_ratio == pytest.approx(0.5)
    with pytest.raises(RankTooHigh):
        validate(s, 2, 2, strict_rank=True)


def test_antisymmetric_entry():
    s = np.eye(2) * 10
    s[0, 1], s[1, 0] = 5, -5
    with pytest.raises(NotSymmetric):
        validate(s, 1, 1)


def test_indefinite():
    with pytest.raises(NotPSD):
        validate([[1, 2], [2, 1]], 1, 1)


@pytest.mark.parametrize("p,q", [(2, 2), (3, 3), (0, 3)])
def test_wrong_dimensions(p, q):
    with pytest.raises(WrongDimensions):
        validate(EQ10, p, q)


def test_stored_matrix_is_immutable():
    cov = validate(EQ10, 3, 2)
    with pytest.raises(ValueError):
        cov.sigma[0, 0] = 1.0


def test_reconstruct_scalar_hand_computation():
    # rho a b = 0.8 * 0.9 * (0.5 / 0.72) = 0.5; a^2 + 0.19 = 1; b^2 + (1 - b^2) = 1
    b = 0.5 / 0.72
    params = LatentParams([0.9], [b], 0.8, [[0.19]], [[1 - b * b]])
    cov, parts = reconstruct(params)
    np.testing.assert_allclose(cov.sigma, [[1, 0.5], [0.5, 1]], atol=1e-15)
    np.testing.assert_allclose(parts.Q + parts.E, cov.sigma, atol=1e-15)
    np.testing.assert_allclose(parts.w, [0.9, b])


def test_reconstruct_zero_saliences():
    params = LatentParams(np.zeros(3), np.zeros(2), 1.0, np.eye(3), np.eye(2))
    cov, parts = reconstruct(params, 3, 2)
    np.testing.assert_array_equal(cov.sigma, np.eye(5))
    np.testing.assert_array_equal(parts.E, np.eye(5))


def test_reconstruct_single_latent_recovers_eq10(eq10):
    params = single_latent_params(eq10, decompose(eq10), 2.0)
    cov, _ = reconstruct(params)
    np.testing.assert_allclose(cov.xy, [[1, 0.5], [2, 1], [3, 1.5]], atol=1e-12)
    np.testing.assert_allclose(cov.sigma, EQ10, atol=1e-12)


def test_latent_params_rejects_bad_values():
    with pytest.raises(ValueError):
        LatentParams([1.0], [1.0], 1.5, [[1.0]], [[1.0]])
    with pytest.raises(NotPSD):
        LatentParams([1.0], [1.0], 0.5, [[-1.0]], [[1.0]])


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 6), q=st.integers(1, 6))
def test_reconstruction_is_valid_and_rank_one(seed, p, q):
    rng = np.random.default_rng(seed)
    params = random_latent_params(rng, p, q, singular=bool(seed % 2))
    cov, parts = reconstruct(params)
    assert np.allclose(parts.E[:p, p:], 0) and np.allclose(parts.Q + parts.E, cov.sigma)
    s = np.linalg.svd(cov.xy, compute_uv=False)
    assert s.size == 1 or s[1] <= 1e-8 * s[0]


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 5), q=st.integers(1, 5))
def test_validate_then_reconstruct_is_idempotent_on_cross_block(seed, p, q):
    rng = np.random.default_rng(seed)
    cov, _ = reconstruct(random_latent_params(rng, p, q))
    cov = validate(cov.sigma, p, q)
    factors = decompose(cov)
    again, _ = reconstruct(single_latent_params(cov, factors, _mid(cov, factors)))
    assert np.max(np.abs(again.xy - cov.xy)) <= 1e-9 * max(1.0, cov.scale)


def _mid(cov, factors):
    b = alpha_bounds(cov, factors)
    return 0.5 * (b.alpha_min + b.alpha_max)


def test_singular_value_ratio_vector_block():
    assert singular_value_ratio(np.array([[1.0], [2.0]])) == 0.0
