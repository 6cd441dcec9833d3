"""Dense polynomial coefficient algebra over graded monomial bases.

Monomials are evaluated by dynamic programming along the graded order: every
degree-k monomial is a degree-(k-1) monomial times one coordinate, so one
multiply per basis element (vectorized per degree).
"""

import math
from functools import lru_cache

import numpy as np

from .combinatorics import MonomialBasis, dim_Pi_ambient
from .kernels import KernelFamily, Kk_gegenbauer_coeffs


@lru_cache(maxsize=None)
def shared_basis(d: int, L: int) -> MonomialBasis:
    return MonomialBasis(d, L)


@lru_cache(maxsize=None)
def _eval_plan(d: int, L: int):
    """Per-basis (parent position, coordinate) arrays for monomial evaluation."""
    basis = shared_basis(d, L)
    parent = np.zeros(len(basis), dtype=np.int64)
    var = np.zeros(len(basis), dtype=np.int64)
    for i, ix in enumerate(basis.indices):
        if ix.degree == 0:
            continue
        j = next(p for p, e in enumerate(ix.exponents) if e > 0)
        lower = list(ix.exponents)
        lower[j] -= 1
        parent[i] = basis.position(lower)
        var[i] = j
    return parent, var


def monomial_values(basis: MonomialBasis, x: np.ndarray) -> np.ndarray:
    """All basis monomials evaluated at one point x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.d,):
        raise ValueError(f"point dimension {x.shape} != ({basis.d},)")
    parent, var = _eval_plan(basis.d, basis.max_degree)
    vals = np.empty(len(basis))
    vals[0] = 1.0
    for k in range(1, basis.max_degree + 1):
        sl = basis.degree_slice(k)
        vals[sl] = vals[parent[sl]] * x[var[sl]]
    return vals


def monomial_values_batch(basis: MonomialBasis, X: np.ndarray) -> np.ndarray:
    """All basis monomials at each row of X; returns (len(X), len(basis))."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != basis.d:
        raise ValueError(f"points shape {X.shape} incompatible with d = {basis.d}")
    parent, var = _eval_plan(basis.d, basis.max_degree)
    vals = np.empty((X.shape[0], len(basis)))
    vals[:, 0] = 1.0
    for k in range(1, basis.max_degree + 1):
        sl = basis.degree_slice(k)
        vals[:, sl] = vals[:, parent[sl]] * X[:, var[sl]]
    return vals


class PolyCoeffs:
    """Coefficient vector over a graded monomial basis."""

    def __init__(self, d: int, max_degree: int, coeffs=None):
        self.basis = shared_basis(d, max_degree)
        if coeffs is None:
            self.coeffs = np.zeros(len(self.basis))
        else:
            self.coeffs = np.asarray(coeffs, dtype=float).copy()
            if self.coeffs.shape != (len(self.basis),):
                raise ValueError("coefficient length does not match basis size")

    @property
    def d(self) -> int:
        return self.basis.d

    @property
    def max_degree(self) -> int:
        return self.basis.max_degree

    def copy(self) -> "PolyCoeffs":
        return PolyCoeffs(self.d, self.max_degree, self.coeffs)

    def grow(self, new_degree: int) -> "PolyCoeffs":
        """Extend the basis, zero-filling the new positions (prefix-stable)."""
        if new_degree < self.max_degree:
            raise ValueError("cannot shrink a polynomial basis")
        if new_degree == self.max_degree:
            return self
        out = PolyCoeffs(self.d, new_degree)
        out.coeffs[: len(self.coeffs)] = self.coeffs
        return out

    def __call__(self, x) -> float:
        return eval_poly(self, x)


def eval_poly(p: PolyCoeffs, x) -> float:
    return float(p.coeffs @ monomial_values(p.basis, np.asarray(x, dtype=float)))


def eval_poly_batch(p: PolyCoeffs, X) -> np.ndarray:
    return monomial_values_batch(p.basis, np.asarray(X, dtype=float)) @ p.coeffs


def axpy(p: PolyCoeffs, scale: float, q: PolyCoeffs) -> PolyCoeffs:
    """p + scale * q, growing p's basis if q's is larger."""
    if p.d != q.d:
        raise ValueError(f"dimension mismatch: {p.d} vs {q.d}")
    L = max(p.max_degree, q.max_degree)
    out = p.grow(L).copy() if p.max_degree < L else p.copy()
    out.coeffs[: len(q.coeffs)] += scale * q.coeffs
    return out


@lru_cache(maxsize=None)
def _inner_power_rows(d: int, m: int):
    basis = shared_basis(d, m)
    sl = basis.degree_slice(m)
    positions = np.arange(sl.start, sl.stop)
    m_fact = math.factorial(m)
    vals = np.array(
        [
            m_fact / math.prod(math.factorial(e) for e in ix.exponents)
            for ix in basis.indices[sl]
        ],
        dtype=float,
    )
    return positions, vals


def inner_power_expansion(d: int, m: int) -> dict:
    """Multinomial coefficients of <x, x'>^m over the degree-m monomials."""
    basis = shared_basis(d, m)
    positions, vals = _inner_power_rows(d, m)
    return {basis.indices[p].exponents: v for p, v in zip(positions, vals)}


class KernelCoeffTable:
    """Per-monomial coefficients of the truncated kernel as a bivariate poly.

    ``values[i]`` is the coefficient of x^alpha_i (x')^alpha_i in the level-L
    truncated kernel.
    """

    def __init__(self, family: KernelFamily):
        self.family = family
        self.L = 0
        self.basis = shared_basis(family.d, 0)
        self.values = np.array([family.weight(0) * Kk_gegenbauer_coeffs(family.d, 0)[0]])

    def increment_L(self) -> None:
        """Fold the next weighted component kernel into the table."""
        d = self.family.d
        new_L = self.L + 1
        new_basis = shared_basis(d, new_L)
        new_values = np.zeros(len(new_basis))
        new_values[: len(self.values)] = self.values
        w = self.family.weight(new_L)
        for m, c in Kk_gegenbauer_coeffs(d, new_L).items():
            positions, multinomial = _inner_power_rows(d, m)
            new_values[positions] += w * c * multinomial
        self.L = new_L
        self.basis = new_basis
        self.values = new_values

    def slice_at(self, x) -> PolyCoeffs:
        """The polynomial y -> K^T_L(x, y)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.family.d,):
            raise ValueError("point dimension does not match kernel table")
        return PolyCoeffs(
            self.family.d, self.L, self.values * monomial_values(self.basis, x)
        )


def kernel_table_increment(tbl: KernelCoeffTable) -> KernelCoeffTable:
    out = KernelCoeffTable(tbl.family)
    out.L = tbl.L
    out.basis = tbl.basis
    out.values = tbl.values.copy()
    out.increment_L()
    return out


def kernel_slice_at(tbl: KernelCoeffTable, x) -> PolyCoeffs:
    return tbl.slice_at(x)


def build_kernel_table(family: KernelFamily, L: int) -> KernelCoeffTable:
    tbl = KernelCoeffTable(family)
    for _ in range(L):
        tbl.increment_L()
    return tbl
