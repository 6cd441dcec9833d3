"""Truncated-kernel SGD engines.

Two equivalent implementations: a coefficient-space engine (the production
path, per-step cost proportional to the polynomial basis size) and a dual
engine that stores samples (the quadratic-cost reference used for
cross-checking).  Both grow the truncation level with the sample count and
maintain a running Polyak average.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import dim_Pi_ambient, dim_Pi_sphere
from .kernels import KernelFamily, Variant, eval_truncated_kernel
from .poly import KernelCoeffTable, monomial_values, shared_basis

UNIT_NORM_TOL = 1e-9

# float guard: n^theta evaluated in double precision can land a hair below an
# exact integer threshold
_LEVEL_EPS = 1e-12


@dataclass(frozen=True)
class TruncationSchedule:
    theta: float

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")


@dataclass(frozen=True)
class StepSchedule:
    gamma0: float
    t: float = 0.0

    def __post_init__(self):
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be positive")
        if self.t < 0:
            raise ValueError("t must be >= 0")

    def gamma(self, n: int) -> float:
        return self.gamma0 * float(n) ** (-self.t)


def default_theta(s: float, r: float = None) -> float:
    """Recommended truncation parameter: 1/(4sr+1), or 1/(2s+1) without r."""
    if r is not None:
        return 1.0 / (4.0 * s * r + 1.0)
    return 1.0 / (2.0 * s + 1.0)


def truncation_level(theta: float, n: int, d: int) -> int:
    """Smallest degree whose sphere-polynomial dimension reaches n^theta."""
    target = float(n) ** theta * (1.0 - _LEVEL_EPS)
    k = 0
    while dim_Pi_sphere(d, k) < target:
        k += 1
    return k


def step_size(sched: StepSchedule, n: int) -> float:
    return sched.gamma(n)


def _check_unit(x, d):
    x = np.asarray(x, dtype=float)
    if x.shape != (d,):
        raise ValueError(f"sample dimension {x.shape} != ({d},)")
    if abs(float(np.linalg.norm(x)) - 1.0) > UNIT_NORM_TOL:
        raise ValueError("sample point is not on the unit sphere")
    return x


class TKernelSGD:
    """Coefficient-space engine (equivalent polynomial form)."""

    def __init__(self, family: KernelFamily, trunc: TruncationSchedule, steps: StepSchedule):
        self.family = family
        self.trunc = trunc
        self.steps = steps
        self.n = 0
        self.L = 0
        self.table = KernelCoeffTable(family)
        self.fhat = np.zeros(1)
        self.fbar = np.zeros(1)
        self.work = 0  # flop-equivalent coefficient updates
        self._basis = shared_basis(family.d, 0)

    @property
    def storage(self) -> int:
        return dim_Pi_ambient(self.family.d, self.L)

    def _grow_to(self, L_new: int) -> None:
        while self.L < L_new:
            self.table.increment_L()
            self.L += 1
            self._basis = shared_basis(self.family.d, self.L)
            size = len(self._basis)
            fhat = np.zeros(size)
            fhat[: len(self.fhat)] = self.fhat
            fbar = np.zeros(size)
            fbar[: len(self.fbar)] = self.fbar
            self.fhat, self.fbar = fhat, fbar
            self.work += size

    def step(self, x, y: float) -> None:
        x = _check_unit(x, self.family.d)
        self.n += 1
        n = self.n
        self._grow_to(truncation_level(self.trunc.theta, n, self.family.d))
        mono = monomial_values(self._basis, x)
        residual = y - float(self.fhat @ mono)
        gamma = self.steps.gamma(n)
        self.fhat += gamma * residual * (self.table.values * mono)
        self.fbar += (self.fhat - self.fbar) / (n + 1.0)
        self.work += 3 * len(self._basis)

    def predict(self, x, which: str = "averaged") -> float:
        x = _check_unit(x, self.family.d)
        coeffs = self.fbar if which == "averaged" else self.fhat
        return float(coeffs @ monomial_values(self._basis, x))

    def predict_batch(self, X, which: str = "averaged") -> np.ndarray:
        from .poly import monomial_values_batch

        coeffs = self.fbar if which == "averaged" else self.fhat
        return monomial_values_batch(self._basis, np.asarray(X, dtype=float)) @ coeffs

    # -- snapshot -----------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "d": self.family.d,
            "s": self.family.s,
            "variant": self.family.variant.value,
            "theta": self.trunc.theta,
            "gamma0": self.steps.gamma0,
            "t": self.steps.t,
            "n": self.n,
            "L": self.L,
            "work": self.work,
            "fhat": list(self.fhat),
            "fbar": list(self.fbar),
        }

    def dump(self) -> str:
        return json.dumps(self.snapshot())

    @classmethod
    def restore(cls, doc) -> "TKernelSGD":
        if isinstance(doc, str):
            doc = json.loads(doc)
        fam = KernelFamily(doc["d"], doc["s"], Variant(doc["variant"]))
        est = cls(fam, TruncationSchedule(doc["theta"]), StepSchedule(doc["gamma0"], doc["t"]))
        est.n = doc["n"]
        est._grow_to(doc["L"])
        est.fhat = np.array(doc["fhat"], dtype=float)
        est.fbar = np.array(doc["fbar"], dtype=float)
        est.work = doc["work"]
        return est


class TKernelSGDDual:
    """Sample-storing reference engine (quadratic cost, correctness oracle)."""

    def __init__(
        self,
        family: KernelFamily,
        trunc: TruncationSchedule,
        steps: StepSchedule,
        sample_budget: int = 100_000,
    ):
        self.family = family
        self.trunc = trunc
        self.steps = steps
        self.sample_budget = sample_budget
        self.n = 0
        self.L = 0
        self.xs: list[np.ndarray] = []
        self.levels: list[int] = []
        self.a: list[float] = []  # per-sample scalar coefficients
        self.abar: list[float] = []  # averaged dual coefficients
        self.kernel_evals = 0

    def _dual_eval(self, x, coeffs, count: bool = False) -> float:
        if not self.xs:
            return 0.0
        X = np.asarray(self.xs)
        t = X @ np.asarray(x, dtype=float)
        out = 0.0
        levels = np.asarray(self.levels)
        c = np.asarray(coeffs)
        for L in np.unique(levels):
            mask = levels == L
            out += float(c[mask] @ eval_truncated_kernel(self.family, int(L), t[mask]))
        if count:
            self.kernel_evals += len(self.xs)
        return out

    def step(self, x, y: float) -> None:
        if len(self.xs) >= self.sample_budget:
            raise RuntimeError(f"sample budget {self.sample_budget} exceeded")
        x = _check_unit(x, self.family.d)
        self.n += 1
        n = self.n
        self.L = truncation_level(self.trunc.theta, n, self.family.d)
        pred = self._dual_eval(x, self.a, count=True)
        a_n = self.steps.gamma(n) * (y - pred)
        # fbar_n = n/(n+1) fbar_{n-1} + 1/(n+1) fhat_n, applied per coefficient
        scale = n / (n + 1.0)
        self.abar = [scale * ab + ai / (n + 1.0) for ab, ai in zip(self.abar, self.a)]
        self.xs.append(x)
        self.levels.append(self.L)
        self.a.append(a_n)
        self.abar.append(a_n / (n + 1.0))

    def predict(self, x, which: str = "averaged") -> float:
        x = _check_unit(x, self.family.d)
        coeffs = self.abar if which == "averaged" else self.a
        return self._dual_eval(x, coeffs)


def make_engine(algorithm: str, family, trunc, steps):
    if algorithm == "tkernel_alg2":
        return TKernelSGD(family, trunc, steps)
    if algorithm == "tkernel_alg1":
        return TKernelSGDDual(family, trunc, steps)
    raise ValueError(f"unknown algorithm {algorithm!r}")
