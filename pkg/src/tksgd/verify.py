"""Self-contained property checks behind the CLI `verify` subcommand.

These mirror the invariants exercised by the test suite; they run without any
experiment and report one pass/fail line per property.
"""

import math

import numpy as np

from .combinatorics import dim_H, dim_P, dim_Pi_ambient, dim_Pi_sphere
from .data import sample_uniform_sphere_batch
from .kernels import (
    KernelFamily,
    Variant,
    eval_circle_closed_form,
    eval_Kk,
    eval_truncated_kernel,
)
from .poly import build_kernel_table, eval_poly, inner_power_expansion, kernel_slice_at


def _circle_series(s, deltas, K):
    out = np.zeros_like(deltas)
    ks = np.arange(1, K + 1, dtype=float)
    w = (2.0 * ks) ** (-2.0 * s)
    for lo in range(0, K, 20_000):
        hi = min(lo + 20_000, K)
        out += np.cos(np.outer(deltas, ks[lo:hi])) @ w[lo:hi]
    return out


def check_dimension_recurrences():
    for d in range(2, 7):
        for k in range(0, 31):
            if dim_H(d, k) != dim_P(d, k) - (dim_P(d, k - 2) if k >= 2 else 0):
                return False, f"harmonic dimension recurrence fails at d={d}, k={k}"
            if dim_Pi_sphere(d, k + 1) > 2 * d * dim_Pi_sphere(d, k):
                return False, f"growth inequality fails at d={d}, k={k}"
            if k >= 1:
                bound = (1 + d / k) * dim_Pi_sphere(d, k) ** (d / (d - 1))
                if dim_Pi_ambient(d, k) > bound * (1 + 1e-12):
                    return False, f"ambient/sphere inequality fails at d={d}, k={k}"
    return True, "d in [2,6], k in [0,30]"


def check_component_diagonal():
    for d in (3, 4, 5):
        for k in range(21):
            if abs(eval_Kk(d, k, 1.0) - dim_H(d, k)) > 1e-6 * dim_H(d, k):
                return False, f"K_k(1) != dim H at d={d}, k={k}"
    return True, "K_k(x,x) = dim H_k^d for d in {3,4,5}, k <= 20"


def check_norm_bound():
    for d in (2, 3, 4):
        for s in (0.75, 1.0, 2.0):
            fam = KernelFamily(d, s, Variant.GENERAL_SERIES)
            for L in range(0, 12):
                if eval_truncated_kernel(fam, L, 1.0) > 2 * s / (2 * s - 1) + 1e-12:
                    return False, f"norm bound fails at d={d}, s={s}, L={L}"
    return True, "K^T_L(x,x) <= 2s/(2s-1)"


def check_closed_form_vs_series():
    rng = np.random.default_rng(7)
    deltas = rng.uniform(0, 2 * math.pi, 200)
    for s, K in ((1, 1_000_000), (2, 1_000)):
        gap = np.max(np.abs(eval_circle_closed_form(s, deltas) - _circle_series(s, deltas, K)))
        if gap > 1e-6:
            return False, f"closed form vs series gap {gap:.2e} at s={s}"
    return True, "closed form matches truncated series to 1e-6"


def check_reproducing_circle(s=1.0, L=6):
    """f = cos(m theta): contracting against the kernel section recovers f(x).

    The section's cos/sin coefficients come from the coefficient table via
    the trig-polynomial FFT, so this exercises the table end to end.
    """
    from .risk import circle_poly_fourier

    fam = KernelFamily(2, s, Variant.CIRCLE_BERNOULLI)
    tbl = build_kernel_table(fam, L)
    for theta_x in (0.3, 1.1, 4.0):
        x = np.array([math.cos(theta_x), math.sin(theta_x)])
        a, _b = circle_poly_fourier(kernel_slice_at(tbl, x), L)
        for m in range(0, L + 1):
            weight = 1.0 if m == 0 else (2.0 * m) ** (2.0 * s)
            got = weight * a[m]  # <cos(m .), section>_K
            if abs(got - math.cos(m * theta_x)) > 1e-10:
                return False, f"reproducing property fails at m={m}"
    return True, "S^1 reproducing property to 1e-10"


def check_table_contraction():
    rng = np.random.default_rng(11)
    for d, variant in ((2, Variant.CIRCLE_BERNOULLI), (2, Variant.GENERAL_SERIES), (3, Variant.GENERAL_SERIES)):
        for s in (1.0, 2.0):
            fam = KernelFamily(d, s, variant)
            tbl = build_kernel_table(fam, 6)
            for _ in range(20):
                x, y = sample_uniform_sphere_batch(rng, d, 2)
                want = eval_truncated_kernel(fam, 6, float(x @ y))
                got = eval_poly(kernel_slice_at(tbl, x), y)
                if abs(got - want) > 1e-9:
                    return False, f"contraction gap {abs(got - want):.2e} at d={d}, s={s}"
    return True, "kernel-table contraction to 1e-9"


def check_multinomial_identity():
    rng = np.random.default_rng(3)
    for d in (2, 3, 4):
        x = sample_uniform_sphere_batch(rng, d, 1)[0]
        for m in range(0, 8):
            total = sum(
                c * float(np.prod(x ** np.array(a))) ** 2
                for a, c in inner_power_expansion(d, m).items()
            )
            if abs(total - 1.0) > 1e-12:
                return False, f"multinomial sphere identity fails at d={d}, m={m}"
    return True, "sum of multinomial terms equals 1 on the sphere"


def check_d2_cosine():
    for k in range(31):
        for delta in (0.0, 0.4, 1.7, 3.0):
            if abs(eval_Kk(2, k, math.cos(delta)) - math.cos(k * delta)) > 1e-10:
                return False, f"cosine consistency fails at k={k}"
    return True, "d=2 component kernel equals cos(k delta)"


ALL_CHECKS = [
    ("dimension recurrences and growth inequalities", check_dimension_recurrences),
    ("component kernel diagonal", check_component_diagonal),
    ("truncated kernel norm bound", check_norm_bound),
    ("circle closed form vs series", check_closed_form_vs_series),
    ("circle reproducing property", check_reproducing_circle),
    ("kernel coefficient table contraction", check_table_contraction),
    ("multinomial sphere identity", check_multinomial_identity),
    ("d=2 cosine consistency", check_d2_cosine),
]


def run_all(report=print) -> bool:
    ok_all = True
    for name, fn in ALL_CHECKS:
        ok, detail = fn()
        ok_all &= ok
        report(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok_all
