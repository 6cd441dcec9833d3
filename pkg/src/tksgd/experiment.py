"""Experiment configs, presets, and the streaming run loop."""

import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .baseline import KernelSGD, ksgd_step_exponent
from .data import (
    NoiseModel,
    RngSpec,
    make_target,
    s2poly_coeffs,
    sample_uniform_sphere_batch,
    stream_samples,
)
from .kernels import KernelFamily, Variant
from .poly import PolyCoeffs
from .risk import (
    RiskCurve,
    checkpoint_grid,
    circle_poly_fourier,
    exact_risk_poly,
    excess_risk_exact_circle,
    excess_risk_mc,
    fit_slope,
)
from .tsgd import StepSchedule, TruncationSchedule, make_engine

FOURIER_CUTOFF = 2048  # circle Parseval cutoff; target tail beyond it ~ 1e-13


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "custom"
    d: int = 2
    kernel_variant: str = "circle"  # circle | general
    s: float = 1.0
    r: float = None  # documentation-only; derives schedule defaults
    theta: float = 0.25
    gamma0: float = 0.2
    t: float = 0.0
    n_max: int = 100_000
    algorithm: str = "tkernel_alg2"  # tkernel_alg2 | tkernel_alg1 | ksgd
    target: str = "bernoulli_b2"
    noise_kind: str = "uniform"
    noise_half_width: float = 0.2
    noise_variance: float = 0.0
    seed_train: int = 20240
    seed_noise: int = 20241
    seed_test: int = 20242
    mc_test_size: int = 100_000
    risk_method: str = "exact"  # exact | mc
    slope_n_min: float = 1000.0
    slope_n_max: float = None

    def noise_model(self) -> NoiseModel:
        return NoiseModel(self.noise_kind, self.noise_half_width, self.noise_variance)

    def family(self) -> KernelFamily:
        variant = Variant.CIRCLE_BERNOULLI if self.kernel_variant == "circle" else Variant.GENERAL_SERIES
        return KernelFamily(self.d, self.s, variant)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**doc)


# Table-driven presets; the baseline step exponents follow the polynomial
# schedule gamma0 * n^{-1 + 2s/(4sr+1)}.
PRESETS: dict = {
    "example1": dict(
        name="example1", d=2, kernel_variant="circle", s=1.0, r=0.75, theta=0.25,
        gamma0=0.2, t=0.0, n_max=100_000, algorithm="tkernel_alg2",
        target="bernoulli_b2", noise_kind="uniform", noise_half_width=0.2,
    ),
    "example2": dict(
        name="example2", d=2, kernel_variant="circle", s=1.0, r=1.75, theta=0.125,
        gamma0=0.2, t=0.0, n_max=100_000, algorithm="tkernel_alg2",
        target="bernoulli_b4", noise_kind="normal", noise_variance=0.5,
        noise_half_width=0.0,
    ),
    "example2_ksgd_s1": dict(
        name="example2_ksgd_s1", d=2, kernel_variant="circle", s=1.0, r=1.75,
        gamma0=0.2, t=ksgd_step_exponent(1.0, 1.75), n_max=30_000, algorithm="ksgd",
        target="bernoulli_b4", noise_kind="normal", noise_variance=0.5,
        noise_half_width=0.0,
    ),
    "example2_ksgd_s2": dict(
        name="example2_ksgd_s2", d=2, kernel_variant="circle", s=2.0, r=0.875,
        gamma0=0.2, t=ksgd_step_exponent(2.0, 0.875), n_max=30_000, algorithm="ksgd",
        target="bernoulli_b4", noise_kind="normal", noise_variance=0.5,
        noise_half_width=0.0,
    ),
    "example3": dict(
        name="example3", d=3, kernel_variant="general", s=1.0, theta=1.0 / 3.0,
        gamma0=0.5, t=1.0 / 3.0, n_max=100_000, algorithm="tkernel_alg2",
        target="s2poly", noise_kind="normal", noise_variance=1.0,
        noise_half_width=0.0,
    ),
    "example4": dict(
        name="example4", d=3, kernel_variant="general", s=1.0, theta=1.0 / 3.0,
        gamma0=0.5, t=1.0 / 3.0, n_max=100_000, algorithm="tkernel_alg2",
        target="s2poly", noise_kind="uniform", noise_half_width=0.3,
    ),
    "example5": dict(
        name="example5", d=3, kernel_variant="general", s=1.0, theta=0.4,
        gamma0=0.5, t=1.0 / 6.0, n_max=100_000, algorithm="tkernel_alg2",
        target="s2poly", noise_kind="normal", noise_variance=1.0,
        noise_half_width=0.0,
    ),
    "example6": dict(
        name="example6", d=3, kernel_variant="general", s=1.0, theta=0.5,
        gamma0=0.5, t=0.25, n_max=100_000, algorithm="tkernel_alg2",
        target="s2poly", noise_kind="normal", noise_variance=1.0,
        noise_half_width=0.0,
    ),
}

# the "&"-separated columns of the settings tables, exposed to `sweep`
PRESET_SWEEPS: dict = {
    "example2": {"theta": [0.125]},
    "example3": {"theta": [0.1, 1.0 / 3.0, 0.45]},
    "example4": {"t": [0.0, 1.0 / 3.0, 0.5]},
    "example5": {"t": [0.0, 1.0 / 6.0, 1.0 / 3.0]},
    "example6": {"t": [0.0, 0.25, 1.0 / 3.0]},
}


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; valid presets: {', '.join(sorted(PRESETS))}")
    return ExperimentConfig.from_dict(PRESETS[name])


@dataclass
class RunRecord:
    config: ExperimentConfig
    curve: RiskCurve
    slope: object  # SlopeFit or None
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "curve": [
                {"n": n, "error": err, "cum_work": w, "storage": s}
                for (n, err, w, s) in self.curve.checkpoints
            ],
            "slope": None if self.slope is None else asdict(self.slope),
            "wall_time_s": self.wall_time_s,
        }


class _RiskEvaluator:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.target = make_target(cfg.target, cfg.d)
        self._test_points = None
        if cfg.risk_method == "mc":
            rng = RngSpec(cfg.seed_test, "test").generator()
            self._test_points = sample_uniform_sphere_batch(rng, cfg.d, cfg.mc_test_size)
        self._target_poly = s2poly_coeffs() if cfg.target == "s2poly" else None
        self._target_l = {"bernoulli_b2": 1, "bernoulli_b4": 2}.get(cfg.target)

    def __call__(self, engine) -> float:
        cfg = self.cfg
        if cfg.risk_method == "mc":
            if hasattr(engine, "predict_batch"):
                predict = lambda X: engine.predict_batch(X)
            else:
                predict = lambda X: np.array([engine.predict(x) for x in X])
            return excess_risk_mc(predict, self.target, self._test_points)
        if cfg.algorithm == "ksgd":
            a, b = engine.fourier_coeffs(FOURIER_CUTOFF)
            return excess_risk_exact_circle(a, b, self._target_l, FOURIER_CUTOFF)
        if cfg.kernel_variant == "circle":
            p = PolyCoeffs(2, engine.L, engine.fbar)
            a, b = circle_poly_fourier(p, FOURIER_CUTOFF)
            return excess_risk_exact_circle(a, b, self._target_l, FOURIER_CUTOFF)
        p = PolyCoeffs(cfg.d, engine.L, engine.fbar)
        return exact_risk_poly(p, self._target_poly)


def _counters(cfg, engine):
    if cfg.algorithm == "ksgd":
        return engine.kernel_evals, engine.n
    if cfg.algorithm == "tkernel_alg1":
        return engine.kernel_evals, len(engine.xs)
    return engine.work, engine.storage


def build_engine(cfg: ExperimentConfig):
    if cfg.algorithm == "ksgd":
        return KernelSGD(int(cfg.s), StepSchedule(cfg.gamma0, cfg.t))
    return make_engine(
        cfg.algorithm, cfg.family(), TruncationSchedule(cfg.theta), StepSchedule(cfg.gamma0, cfg.t)
    )


def run_experiment(cfg: ExperimentConfig) -> RunRecord:
    start = time.perf_counter()
    engine = build_engine(cfg)
    evaluate = _RiskEvaluator(cfg)
    grid = checkpoint_grid(cfg.n_max)
    grid_iter = iter(grid)
    next_cp = next(grid_iter, None)
    rows = []
    samples = stream_samples(
        cfg.seed_train, evaluate.target, cfg.noise_model(), cfg.n_max,
        noise_seed=cfg.seed_noise,
    )
    for i, sample in enumerate(samples, start=1):
        engine.step(sample.x, sample.y)
        if next_cp is not None and i == next_cp:
            work, storage = _counters(cfg, engine)
            rows.append((i, evaluate(engine), work, storage))
            next_cp = next(grid_iter, None)
    curve = RiskCurve(rows)
    slope = None
    if len(rows) >= 2:
        n_max = cfg.slope_n_max if cfg.slope_n_max is not None else cfg.n_max
        n_min = min(cfg.slope_n_min, rows[-1][0])
        try:
            slope = fit_slope(curve, n_min, n_max)
        except ValueError:
            slope = None
    return RunRecord(cfg, curve, slope, time.perf_counter() - start)
