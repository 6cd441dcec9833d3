"""Reproducible sample generation: sphere sampler, targets, noise models.

All randomness flows through PCG64 generators keyed by (seed, stream), so a
full experiment is a pure function of its config and seeds.  Input points and
noise live on separate streams.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .poly import PolyCoeffs, eval_poly, eval_poly_batch

STREAMS = {"train": 0, "noise": 1, "test": 2}


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream: str

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(STREAMS[self.stream],))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class Sample:
    x: np.ndarray
    y: float


def sample_uniform_sphere(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    norm = np.linalg.norm(v)
    while norm == 0.0:
        v = rng.standard_normal(d)
        norm = np.linalg.norm(v)
    return v / norm


def sample_uniform_sphere_batch(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    V = rng.standard_normal((n, d))
    norms = np.linalg.norm(V, axis=1)
    bad = norms == 0.0
    while np.any(bad):
        V[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(V, axis=1)
        bad = norms == 0.0
    return V / norms[:, None]


def angle_of(x) -> float:
    """Polar angle of a point on the circle, mapped to [0, 2 pi)."""
    theta = math.atan2(x[1], x[0])
    return theta % (2.0 * math.pi)


def bernoulli_b2(u: float) -> float:
    return u * u - u + 1.0 / 6.0


def bernoulli_b4(u: float) -> float:
    return u**4 - 2.0 * u**3 + u * u - 1.0 / 30.0


def s2poly_coeffs() -> PolyCoeffs:
    """Degree-10 polynomial on S^2 with degree-k coefficients (k+1)^{-3/2}."""
    p = PolyCoeffs(3, 10)
    for i, ix in enumerate(p.basis.indices):
        p.coeffs[i] = (ix.degree + 1.0) ** -1.5
    return p


@dataclass(frozen=True)
class TargetFunction:
    variant: str  # bernoulli_b2 | bernoulli_b4 | s2poly | custom_poly
    d: int
    poly: Optional[PolyCoeffs] = None

    def __post_init__(self):
        if self.variant in ("bernoulli_b2", "bernoulli_b4") and self.d != 2:
            raise ValueError(f"{self.variant} requires d = 2")
        if self.variant == "s2poly" and self.d != 3:
            raise ValueError("s2poly requires d = 3")
        if self.variant == "custom_poly" and self.poly is None:
            raise ValueError("custom_poly needs a coefficient vector")

    def _polynomial(self) -> PolyCoeffs:
        if self.variant == "s2poly":
            return s2poly_coeffs()
        return self.poly

    def __call__(self, x) -> float:
        if self.variant == "bernoulli_b2":
            return bernoulli_b2(angle_of(x) / (2.0 * math.pi))
        if self.variant == "bernoulli_b4":
            return bernoulli_b4(angle_of(x) / (2.0 * math.pi))
        return eval_poly(self._polynomial(), x)

    def eval_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.variant in ("bernoulli_b2", "bernoulli_b4"):
            theta = np.arctan2(X[:, 1], X[:, 0]) % (2.0 * math.pi)
            u = theta / (2.0 * math.pi)
            if self.variant == "bernoulli_b2":
                return u * u - u + 1.0 / 6.0
            return u**4 - 2.0 * u**3 + u * u - 1.0 / 30.0
        return eval_poly_batch(self._polynomial(), X)


def make_target(variant: str, d: int, poly: Optional[PolyCoeffs] = None) -> TargetFunction:
    return TargetFunction(variant, d, poly)


@dataclass(frozen=True)
class NoiseModel:
    kind: str  # none | uniform | normal
    half_width: float = 0.0  # uniform on [-half_width, half_width]
    variance: float = 0.0

    def __post_init__(self):
        if self.kind == "uniform" and self.half_width <= 0:
            raise ValueError("uniform noise needs half_width > 0")
        if self.kind == "normal" and self.variance <= 0:
            raise ValueError("normal noise needs variance > 0")
        if self.kind not in ("none", "uniform", "normal"):
            raise ValueError(f"unknown noise kind {self.kind!r}")

    def draw(self, rng: np.random.Generator) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "uniform":
            return float(rng.uniform(-self.half_width, self.half_width))
        return float(rng.normal(0.0, math.sqrt(self.variance)))


def draw_noise(model: NoiseModel, rng: np.random.Generator) -> float:
    return model.draw(rng)


def stream_samples(
    seed: int, target: TargetFunction, noise: NoiseModel, n: int, noise_seed: int = None
) -> Iterator[Sample]:
    """Yields n samples (X, f*(X) + eps), one at a time."""
    rng_x = RngSpec(seed, "train").generator()
    rng_eps = RngSpec(seed if noise_seed is None else noise_seed, "noise").generator()
    for _ in range(n):
        x = sample_uniform_sphere(rng_x, target.d)
        yield Sample(x, target(x) + noise.draw(rng_eps))
