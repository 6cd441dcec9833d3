"""Classical (untruncated) kernel SGD on the circle, with Polyak averaging.

The baseline only supports the closed-form circle kernels (s in {1, 2});
it is the saturation comparison, not a production path.  Iterates are kept
in dual form, so the n-th step costs n - 1 kernel evaluations.
"""

import math

import numpy as np

from .data import angle_of
from .kernels import eval_circle_full_kernel
from .tsgd import StepSchedule, _check_unit


class KernelSGD:
    def __init__(self, s: int, steps: StepSchedule, sample_budget: int = 100_000):
        if s not in (1, 2):
            raise ValueError("baseline kernel SGD needs a closed-form kernel (s in {1, 2})")
        self.s = s
        self.steps = steps
        self.sample_budget = sample_budget
        self.n = 0
        self.thetas = np.zeros(0)
        self.a = np.zeros(0)
        self.abar = np.zeros(0)
        self.kernel_evals = 0

    def _predict_angles(self, theta: float, coeffs: np.ndarray, count: bool = False) -> float:
        if len(coeffs) == 0:
            return 0.0
        if count:
            self.kernel_evals += len(coeffs)
        return float(coeffs @ eval_circle_full_kernel(self.s, theta - self.thetas))

    def step(self, x, y: float) -> None:
        if self.n >= self.sample_budget:
            raise RuntimeError(f"sample budget {self.sample_budget} exceeded")
        x = _check_unit(x, 2)
        self.n += 1
        n = self.n
        theta = angle_of(x)
        pred = self._predict_angles(theta, self.a, count=True)
        a_n = self.steps.gamma(n) * (y - pred)
        self.abar = self.abar * (n / (n + 1.0)) + self.a / (n + 1.0)
        self.thetas = np.append(self.thetas, theta)
        self.a = np.append(self.a, a_n)
        self.abar = np.append(self.abar, a_n / (n + 1.0))

    def predict(self, x, which: str = "averaged") -> float:
        x = _check_unit(x, 2)
        coeffs = self.abar if which == "averaged" else self.a
        return self._predict_angles(angle_of(x), coeffs)

    def fourier_coeffs(self, M: int, which: str = "averaged", chunk: int = 128):
        """Cosine/sine coefficients of the predictor up to harmonic M.

        The dual sum over stored samples gives a_k = w_k sum_i c_i cos(k t_i)
        (and the sine analogue) with w_k the series weight (2k)^{-2s}; the
        constant kernel contributes a_0 = sum_i c_i.
        """
        coeffs = self.abar if which == "averaged" else self.a
        a = np.zeros(M + 1)
        b = np.zeros(M + 1)
        a[0] = float(np.sum(coeffs))
        ks = np.arange(1, M + 1)
        w = (2.0 * ks) ** (-2.0 * self.s)
        for lo in range(1, M + 1, chunk):
            hi = min(lo + chunk, M + 1)
            kt = np.outer(np.arange(lo, hi), self.thetas)
            a[lo:hi] = w[lo - 1 : hi - 1] * (np.cos(kt) @ coeffs)
            b[lo:hi] = w[lo - 1 : hi - 1] * (np.sin(kt) @ coeffs)
        return a, b


def ksgd_step_exponent(s: float, r: float) -> float:
    """Decay exponent t of the baseline's polynomial step size gamma0 * n^-t."""
    return 1.0 - 2.0 * s / (4.0 * s * r + 1.0)
