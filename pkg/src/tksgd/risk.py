"""Excess-risk evaluation and log-log slope fitting.

Under the uniform input law the risk is a squared L2 norm: on the circle it
is evaluated exactly through Fourier coefficients (trig polynomials are
recovered exactly by FFT on a fine grid; the Bernoulli targets have explicit
series), on S^2 through closed-form sphere moments of monomials, and by Monte
Carlo on a fixed seeded test set as the generic fallback.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, zeta

from .combinatorics import MultiIndex
from .poly import PolyCoeffs, eval_poly_batch, monomial_values_batch, shared_basis


@dataclass
class RiskCurve:
    checkpoints: list  # of (n, err, cum_work, storage)

    def ns(self):
        return np.array([c[0] for c in self.checkpoints], dtype=float)

    def errs(self):
        return np.array([c[1] for c in self.checkpoints], dtype=float)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    n_min: float
    n_max: float
    residual: float


def checkpoint_grid(n_max: int) -> list:
    """Geometric grid ceil(10^(j/8)) intersected with [1, n_max]."""
    out = []
    j = 0
    while True:
        n = math.ceil(10.0 ** (j / 8.0))
        if n > n_max:
            break
        if not out or n != out[-1]:
            out.append(n)
        j += 1
    return out


def excess_risk_mc(predict_batch, target, test_points) -> float:
    """Mean squared gap between predictor and target over a fixed MC set."""
    X = np.asarray(test_points, dtype=float)
    if X.size == 0:
        raise ValueError("empty test set")
    resid = np.asarray(predict_batch(X), dtype=float) - target.eval_batch(X)
    return float(np.mean(resid**2))


# -- circle (Parseval) path -------------------------------------------------


def bernoulli_target_fourier(l: int, M: int):
    """Cosine coefficients (k = 0..M) of B_{2l}(theta / 2 pi); sines vanish."""
    ks = np.arange(1, M + 1, dtype=float)
    a = np.zeros(M + 1)
    if l == 1:
        a[1:] = 1.0 / (math.pi**2 * ks**2)
    elif l == 2:
        a[1:] = -3.0 / (math.pi**4 * ks**4)
    else:
        raise ValueError("only B2 and B4 targets have wired series")
    return a


def bernoulli_tail(l: int, M: int) -> float:
    """Sum over k > M of half the squared cosine coefficient."""
    if l == 1:
        c, p = 1.0 / math.pi**2, 4
    elif l == 2:
        c, p = 3.0 / math.pi**4, 8
    else:
        raise ValueError("only B2 and B4 targets have wired series")
    return 0.5 * c * c * float(zeta(p, M + 1))


def circle_poly_fourier(p: PolyCoeffs, M: int):
    """Fourier coefficients of a bivariate polynomial restricted to S^1.

    The restriction is a trig polynomial of degree <= max_degree, so sampling
    on a uniform grid of more than 2 * max_degree points recovers it exactly.
    """
    L = p.max_degree
    N = 1
    while N < max(2 * L + 2, 16):
        N *= 2
    theta = 2.0 * math.pi * np.arange(N) / N
    X = np.column_stack([np.cos(theta), np.sin(theta)])
    vals = eval_poly_batch(p, X)
    c = np.fft.rfft(vals) / N
    a = np.zeros(M + 1)
    b = np.zeros(M + 1)
    top = min(M, N // 2)
    a[0] = c[0].real
    a[1 : top + 1] = 2.0 * c[1 : top + 1].real
    b[1 : top + 1] = -2.0 * c[1 : top + 1].imag
    return a, b


def excess_risk_exact_circle(pred_a, pred_b, target_l: int, M: int) -> float:
    """Squared L2 gap via Parseval, target tail beyond M added in closed form.

    ``pred_a``/``pred_b`` are the predictor's cosine/sine coefficients up to
    M; the predictor must carry no harmonics beyond M.
    """
    ta = bernoulli_target_fourier(target_l, M)
    da = np.asarray(pred_a, dtype=float) - ta
    db = np.asarray(pred_b, dtype=float)
    err = da[0] ** 2 + 0.5 * float(da[1:] @ da[1:] + db[1:] @ db[1:])
    return err + bernoulli_tail(target_l, M)


# -- sphere moment path -----------------------------------------------------


@lru_cache(maxsize=None)
def _moment_from_exponents(d: int, exps: tuple) -> float:
    if any(e % 2 for e in exps):
        return 0.0
    total = sum(exps)
    log_m = (
        sum(gammaln((e + 1) / 2.0) for e in exps)
        + gammaln(d / 2.0)
        - gammaln((total + d) / 2.0)
        - (d / 2.0) * math.log(math.pi)
    )
    return math.exp(log_m)


def sphere_monomial_moment(d: int, alpha) -> float:
    """Average of x^alpha over the unit sphere in R^d."""
    if isinstance(alpha, MultiIndex):
        alpha = alpha.exponents
    return _moment_from_exponents(d, tuple(alpha))


@lru_cache(maxsize=None)
def moment_matrix(d: int, L: int) -> np.ndarray:
    """Gram matrix of the monomial basis under the uniform sphere measure."""
    basis = shared_basis(d, L)
    n = len(basis)
    M = np.empty((n, n))
    for i, ix in enumerate(basis.indices):
        for j in range(i, n):
            m = _moment_from_exponents(
                d, tuple(a + b for a, b in zip(ix.exponents, basis.indices[j].exponents))
            )
            M[i, j] = M[j, i] = m
    return M


def exact_risk_poly(p: PolyCoeffs, q: PolyCoeffs) -> float:
    """Exact squared L2 distance between two polynomials on the sphere."""
    if p.d != q.d:
        raise ValueError("dimension mismatch")
    L = max(p.max_degree, q.max_degree)
    diff = np.zeros(len(shared_basis(p.d, L)))
    diff[: len(p.coeffs)] = p.coeffs
    diff[: len(q.coeffs)] -= q.coeffs
    M = moment_matrix(p.d, L)
    return float(diff @ M @ diff)


# -- slope fitting ----------------------------------------------------------


def fit_slope(curve: RiskCurve, n_min: float = None, n_max: float = None) -> SlopeFit:
    ns = curve.ns()
    errs = curve.errs()
    if n_min is None:
        n_min = ns[0]
    if n_max is None:
        n_max = ns[-1]
    mask = (ns >= n_min) & (ns <= n_max) & (errs > 0)
    if mask.sum() < 2:
        raise ValueError("need at least two checkpoints in the fit range")
    lx = np.log10(ns[mask])
    ly = np.log10(errs[mask])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        n_min=float(n_min),
        n_max=float(n_max),
        residual=float(np.sqrt(np.mean(resid**2))),
    )
