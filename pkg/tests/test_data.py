"""Samplers, target functions, and noise models."""

import math

import numpy as np
import pytest

from tksgd.data import (
    NoiseModel,
    RngSpec,
    Sample,
    TargetFunction,
    angle_of,
    bernoulli_b2,
    bernoulli_b4,
    draw_noise,
    make_target,
    s2poly_coeffs,
    sample_uniform_sphere,
    sample_uniform_sphere_batch,
    stream_samples,
)


def test_rng_spec_reproducible():
    a = RngSpec(123, "train").generator().normal(size=8)
    b = RngSpec(123, "train").generator().normal(size=8)
    assert np.array_equal(a, b)


def test_rng_streams_distinct():
    a = RngSpec(123, "train").generator().normal(size=8)
    b = RngSpec(123, "noise").generator().normal(size=8)
    assert not np.array_equal(a, b)


def test_sphere_samples_are_unit():
    rng = np.random.default_rng(0)
    for d in (2, 3, 5):
        X = sample_uniform_sphere_batch(rng, d, 10_000)
        assert np.max(np.abs(np.linalg.norm(X, axis=1) - 1.0)) < 1e-12


def test_sphere_sampler_moments():
    rng = np.random.default_rng(1)
    X = sample_uniform_sphere_batch(rng, 2, 100_000)
    assert abs(np.mean(X[:, 0])) < 0.02  # CLT bound ~3/sqrt(n)
    assert abs(np.mean(X[:, 0] ** 2) - 0.5) < 0.01


def test_scalar_and_batch_agree_in_law():
    rng = np.random.default_rng(2)
    x = sample_uniform_sphere(rng, 3)
    assert x.shape == (3,)
    assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)


def test_angle_convention():
    assert angle_of(np.array([1.0, 0.0])) == pytest.approx(0.0)
    assert angle_of(np.array([0.0, 1.0])) == pytest.approx(math.pi / 2)
    # below the axis maps into [0, 2pi), not (-pi, 0)
    assert angle_of(np.array([0.0, -1.0])) == pytest.approx(3 * math.pi / 2)
    assert 0.0 <= angle_of(np.array([-1.0, -1e-9])) < 2 * math.pi


def test_bernoulli_polynomials():
    assert bernoulli_b2(0.0) == pytest.approx(1.0 / 6.0)
    assert bernoulli_b2(0.5) == pytest.approx(-1.0 / 12.0)
    # B4(1/2) = (2^-3 - 1) B4 = 7/240
    assert bernoulli_b4(0.5) == pytest.approx(7.0 / 240.0)
    assert bernoulli_b4(0.0) == pytest.approx(-1.0 / 30.0)


def test_target_b2_value():
    t = make_target("bernoulli_b2", 2)
    assert t(np.array([1.0, 0.0])) == pytest.approx(1.0 / 6.0)


def test_target_b4_value():
    t = make_target("bernoulli_b4", 2)
    assert t(np.array([-1.0, 0.0])) == pytest.approx(7.0 / 240.0)


def test_target_s2poly_value():
    t = make_target("s2poly", 3)
    expected = sum((k + 1) ** -1.5 for k in range(11))
    assert t(np.array([1.0, 0.0, 0.0])) == pytest.approx(expected)
    assert expected == pytest.approx(2.022746, abs=1e-6)


def test_s2poly_coefficients():
    p = s2poly_coeffs()
    assert p.max_degree == 10
    for m, c in zip(p.basis.indices, p.coeffs):
        assert c == pytest.approx((m.degree + 1) ** -1.5)


def test_target_dimension_validation():
    with pytest.raises(ValueError):
        make_target("bernoulli_b2", 3)
    with pytest.raises(ValueError):
        make_target("s2poly", 2)


def test_target_batch_matches_scalar():
    rng = np.random.default_rng(3)
    for name, d in (("bernoulli_b2", 2), ("bernoulli_b4", 2), ("s2poly", 3)):
        t = make_target(name, d)
        X = sample_uniform_sphere_batch(rng, d, 32)
        assert np.allclose(t.eval_batch(X), [t(x) for x in X], atol=1e-12)


def test_noise_none():
    rng = np.random.default_rng(4)
    model = NoiseModel("none")
    assert all(draw_noise(model, rng) == 0.0 for _ in range(10))


def test_noise_uniform():
    rng = np.random.default_rng(5)
    model = NoiseModel("uniform", half_width=0.2)
    draws = np.array([model.draw(rng) for _ in range(100_000)])
    assert np.all(np.abs(draws) <= 0.2)
    assert abs(np.mean(draws)) < 0.005


def test_noise_normal_variance():
    rng = np.random.default_rng(6)
    model = NoiseModel("normal", variance=0.5)
    draws = np.array([model.draw(rng) for _ in range(100_000)])
    assert 0.48 < np.var(draws) < 0.52


def test_noise_validation():
    with pytest.raises(ValueError):
        NoiseModel("uniform", half_width=0.0)
    with pytest.raises(ValueError):
        NoiseModel("normal", variance=-1.0)
    with pytest.raises(ValueError):
        NoiseModel("cauchy")


def test_stream_noiseless_constant():
    from tksgd.poly import PolyCoeffs

    const = PolyCoeffs(2, 0, np.array([2.5]))
    target = make_target("custom_poly", 2, poly=const)
    for s in stream_samples(11, target, NoiseModel("none"), 15):
        assert s.y == pytest.approx(2.5)


def test_stream_determinism():
    target = make_target("bernoulli_b2", 2)
    noise = NoiseModel("uniform", half_width=0.2)
    a = list(stream_samples(99, target, noise, 20))
    b = list(stream_samples(99, target, noise, 20))
    for sa, sb in zip(a, b):
        assert np.array_equal(sa.x, sb.x)
        assert sa.y == sb.y


def test_noise_stream_independence():
    target = make_target("bernoulli_b2", 2)
    noise = NoiseModel("uniform", half_width=0.2)
    a = list(stream_samples(99, target, noise, 20, noise_seed=1))
    b = list(stream_samples(99, target, noise, 20, noise_seed=2))
    for sa, sb in zip(a, b):
        assert np.array_equal(sa.x, sb.x)  # X stream untouched by noise seed
    assert any(sa.y != sb.y for sa, sb in zip(a, b))


def test_stream_matches_model():
    target = make_target("bernoulli_b2", 2)
    samples = list(stream_samples(7, target, NoiseModel("none"), 10))
    for s in samples:
        assert isinstance(s, Sample)
        assert s.y == pytest.approx(target(s.x), abs=1e-14)
