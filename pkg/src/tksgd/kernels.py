"""Harmonic component kernels on the sphere and their truncated sums.

The degree-k component kernel is evaluated through its expansion in powers of
the inner product t = <x, x'>.  On the circle (d = 2) the components are
normalized so that the degree-k kernel equals cos(k * angle difference),
matching the Bernoulli-spline closed forms used by the circle family.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .combinatorics import dim_Pi_sphere

MAX_COMPONENT_DEGREE = 200

T_CLAMP_TOL = 1e-12


class DegreeLimitError(ValueError):
    pass


class UnsupportedClosedFormError(ValueError):
    pass


class Variant(Enum):
    GENERAL_SERIES = "general"
    CIRCLE_BERNOULLI = "circle"


@dataclass(frozen=True)
class KernelFamily:
    d: int
    s: float
    variant: Variant = Variant.GENERAL_SERIES

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"need d >= 2, got {self.d}")
        if self.s <= 0.5:
            raise ValueError(f"need s > 1/2, got {self.s}")
        if self.variant is Variant.CIRCLE_BERNOULLI and self.d != 2:
            raise ValueError("circle family requires d = 2")

    def weight(self, k: int) -> float:
        """Component coefficient multiplying the degree-k kernel."""
        if self.variant is Variant.CIRCLE_BERNOULLI:
            return 1.0 if k == 0 else (2.0 * k) ** (-2.0 * self.s)
        return float(dim_Pi_sphere(self.d, k)) ** (-2.0 * self.s)


def clamp_inner_product(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + T_CLAMP_TOL):
        raise ValueError("inner product outside [-1, 1] beyond tolerance")
    return np.clip(t, -1.0, 1.0)


@lru_cache(maxsize=None)
def Kk_gegenbauer_coeffs(d: int, k: int) -> dict:
    """Coefficients {power m: c} with K_k(x,x') = sum_m c * <x,x'>^m.

    Computed by a multiplicative recurrence over the expansion index to avoid
    factorial overflow.  For d = 2 the coefficients are halved (k >= 1) to the
    cosine normalization cos(k * angle).
    """
    if d < 2 or k < 0:
        raise ValueError(f"invalid (d, k) = ({d}, {k})")
    if k > MAX_COMPONENT_DEGREE:
        raise DegreeLimitError(f"component degree {k} exceeds {MAX_COMPONENT_DEGREE}")
    if k == 0:
        return {0: 1.0}
    # leading coefficient: (d/2)_k 2^k / k!
    c = 1.0
    for i in range(k):
        c *= (d / 2.0 + i) * 2.0 / (i + 1.0)
    coeffs = {k: c}
    for j in range(k // 2):
        m = k - 2 * j
        c *= m * (m - 1) / (4.0 * (j + 1.0) * (2.0 - k - d / 2.0 + j))
        coeffs[m - 2] = c
    if d == 2:
        coeffs = {m: v / 2.0 for m, v in coeffs.items()}
    return coeffs


def eval_Kk_from_coeffs(d: int, k: int, t):
    """K_k summed from its inner-product-power coefficients.

    Loses ~2^k * eps near |t| = 1; fine for the weighted table degrees, not
    for bare high-degree evaluation.  Kept as the cross-check path.
    """
    t = clamp_inner_product(t)
    coeffs = Kk_gegenbauer_coeffs(d, k)
    out = np.zeros_like(t)
    for m, c in coeffs.items():
        out = out + c * t**m
    return out if out.ndim else float(out)


def eval_Kk(d: int, k: int, t):
    """The degree-k component kernel as a function of t = <x, x'>.

    Evaluated by the stable three-term recurrence: Chebyshev for d = 2,
    Gegenbauer with index (d-2)/2 scaled by (2k+d-2)/(d-2) for d >= 3.
    """
    if d < 2 or k < 0:
        raise ValueError(f"invalid (d, k) = ({d}, {k})")
    if k > MAX_COMPONENT_DEGREE:
        raise DegreeLimitError(f"component degree {k} exceeds {MAX_COMPONENT_DEGREE}")
    t = clamp_inner_product(t)
    if k == 0:
        out = np.ones_like(t)
        return out if out.ndim else float(out)
    if d == 2:
        prev, cur = np.ones_like(t), t
        for _ in range(k - 1):
            prev, cur = cur, 2.0 * t * cur - prev
        return cur if cur.ndim else float(cur)
    lam = (d - 2) / 2.0
    prev, cur = np.ones_like(t), 2.0 * lam * t
    for j in range(1, k):
        prev, cur = cur, (2.0 * (j + lam) * t * cur - (j + 2.0 * lam - 1.0) * prev) / (j + 1.0)
    out = (2.0 * k + d - 2.0) / (d - 2.0) * cur
    return out if out.ndim else float(out)


def eval_truncated_kernel(fam: KernelFamily, L: int, t):
    """Partial sum of the weighted component kernels up to degree L."""
    if L < 0:
        raise ValueError(f"need L >= 0, got {L}")
    t = clamp_inner_product(t)
    out = np.zeros_like(t)
    for k in range(L + 1):
        out = out + fam.weight(k) * eval_Kk(fam.d, k, t)
    return out if out.ndim else float(out)


def eval_circle_closed_form(s: int, delta):
    """Closed form of the circle series kernel (the k >= 1 part only).

    The constant degree-0 kernel is added separately by callers.  ``delta``
    is the angle difference; the Bernoulli polynomial is evaluated at the
    fractional part of delta / (2 pi).
    """
    u = np.asarray(delta, dtype=float) / (2.0 * math.pi)
    u = u - np.floor(u)
    if s == 1:
        out = (math.pi**2 / 4.0) * (u**2 - u + 1.0 / 6.0)
    elif s == 2:
        out = -(math.pi**4 / 48.0) * (u**4 - 2.0 * u**3 + u**2 - 1.0 / 30.0)
    else:
        raise UnsupportedClosedFormError(f"no closed form for s = {s}")
    return out if out.ndim else float(out)


def eval_circle_full_kernel(s: int, delta):
    """Full circle kernel 1 + (Bernoulli part); the baseline SGD kernel."""
    return 1.0 + eval_circle_closed_form(s, delta)
