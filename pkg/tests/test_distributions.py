import numpy as np
import pytest

from agdiv import distributions as D
from agdiv.exceptions import NegativeWeight, NotNormalized, SupportMismatch, ZeroTotal


@pytest.mark.parametrize(
    "weights, expected",
    [([2, 2], [0.5, 0.5]), ([1, 3], [0.25, 0.75]), ([0, 5], [0.0, 1.0])],
)
def test_make_distribution(weights, expected):
    p = D.make_distribution(weights)
    np.testing.assert_allclose(p, expected, rtol=0, atol=1e-15)
    assert abs(p.sum() - 1) <= 1e-12
    assert not p.flags.writeable


def test_make_distribution_errors():
    with pytest.raises(ZeroTotal):
        D.make_distribution([0, 0])
    with pytest.raises(NegativeWeight):
        D.make_distribution([1, -0.5])


def test_check_distribution_renormalizes_noise_only():
    p = D.check_distribution([0.5 + 1e-9, 0.5])
    assert abs(p.sum() - 1) <= 1e-12
    with pytest.raises(NotNormalized):
        D.check_distribution([0.6, 0.5])


def test_mixture():
    np.testing.assert_allclose(D.mixture([0.5, 0.5], [0.25, 0.75]), [0.375, 0.625])
    p = D.make_distribution([1, 2, 3])
    np.testing.assert_array_equal(D.mixture(p, p), p)
    np.testing.assert_allclose(D.mixture([1, 0], [0, 1]), [0.5, 0.5])
    with pytest.raises(SupportMismatch):
        D.mixture([1.0], [0.5, 0.5])


def test_apply_channel_examples():
    p = D.make_distribution([1, 2, 5])
    np.testing.assert_allclose(D.apply_channel(D.identity_channel(3), p), p, atol=1e-16)
    w = [0.2, 0.8]
    np.testing.assert_allclose(D.apply_channel(D.constant_channel(3, w), p), w, atol=1e-15)
    # by hand: 0.5*[0.5, 0.5] + 0.5*[0.25, 0.75]
    g = D.apply_channel([[0.5, 0.5], [0.25, 0.75]], [0.5, 0.5])
    np.testing.assert_allclose(g, [0.375, 0.625], atol=1e-15)
    with pytest.raises(SupportMismatch):
        D.apply_channel(D.identity_channel(2), p)


def test_random_channel():
    np.testing.assert_array_equal(D.random_channel(1, 1, 3), [[1.0]])
    np.testing.assert_array_equal(D.random_channel(3, 4, 7), D.random_channel(3, 4, 7))
    h = D.random_channel(2, 3, 7)
    assert h.shape == (2, 3)
    assert np.all(np.abs(h.sum(axis=1) - 1) <= 1e-12)


def test_channel_properties(rng):
    for _ in range(200):
        nx, ny, nz = rng.integers(1, 7, size=3)
        h1 = D.random_channel(nx, ny, rng)
        h2 = D.random_channel(ny, nz, rng)
        p = D.make_distribution(rng.random(nx))
        q = D.make_distribution(rng.random(nx))
        g = D.apply_channel(h1, p)
        assert abs(g.sum() - 1) <= 1e-12
        # affine in the input
        lhs = D.apply_channel(h1, D.mixture(p, q))
        rhs = D.mixture(g, D.apply_channel(h1, q))
        np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-14)
        # composition matches sequential application
        np.testing.assert_allclose(
            D.apply_channel(D.compose_channels(h1, h2), p),
            D.apply_channel(h2, g),
            rtol=0,
            atol=1e-12,
        )


def test_random_positive_distribution_is_positive(rng):
    for _ in range(100):
        p = D.random_positive_distribution(rng, 16)
        assert p.min() >= 1e-6 / 16 * 0.999
        assert abs(p.sum() - 1) <= 1e-12
