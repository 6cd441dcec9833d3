"""Dimension formulas for spherical polynomial spaces and graded monomial bases.

All dimension counts use checked integer arithmetic (Python ints are exact;
the overflow guard rejects values that no longer fit in signed 64 bits so
downstream array code never wraps).
"""

from dataclasses import dataclass, field
from math import comb

_INT64_MAX = 2**63 - 1


class DimensionOverflowError(OverflowError):
    pass


def _checked(value: int) -> int:
    if value > _INT64_MAX:
        raise DimensionOverflowError(f"dimension {value} exceeds 64-bit range")
    return value


def dim_P(d: int, k: int) -> int:
    """Dimension of the homogeneous polynomials of degree k on the sphere."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    return _checked(comb(k + d - 1, d - 1))


def dim_P_safe(d: int, k: int) -> int:
    """dim_P with the convention that negative degrees have dimension 0."""
    if k < 0:
        return 0
    return dim_P(d, k)


def dim_H(d: int, k: int) -> int:
    """Dimension of the degree-k spherical harmonics."""
    return dim_P(d, k) - dim_P_safe(d, k - 2)


def dim_Pi_sphere(d: int, k: int) -> int:
    """Dimension of polynomials of total degree <= k restricted to the sphere."""
    return _checked(dim_P(d, k) + dim_P_safe(d, k - 1))


def dim_Pi_ambient(d: int, k: int) -> int:
    """Dimension of polynomials of total degree <= k on R^d."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    return _checked(comb(k + d, d))


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector alpha of a monomial x^alpha."""

    exponents: tuple
    degree: int = field(init=False)

    def __post_init__(self):
        if len(self.exponents) < 2:
            raise ValueError("ambient dimension must be >= 2")
        if any(e < 0 for e in self.exponents):
            raise ValueError(f"negative exponent in {self.exponents}")
        object.__setattr__(self, "degree", sum(self.exponents))

    @property
    def d(self) -> int:
        return len(self.exponents)


def _homogeneous_indices(d: int, k: int):
    # lexicographic in (alpha_1, ..., alpha_d), largest alpha_1 first
    if d == 1:
        yield (k,)
        return
    for a in range(k, -1, -1):
        for rest in _homogeneous_indices(d - 1, k - a):
            yield (a,) + rest


class MonomialBasis:
    """Graded-lex ordered monomial basis of polynomials of degree <= L on R^d.

    The ordering is degree-ascending so that raising ``max_degree`` only
    appends entries; positions of existing monomials never change.
    """

    def __init__(self, d: int, max_degree: int):
        if d < 2:
            raise ValueError(f"need d >= 2, got {d}")
        if max_degree < 0:
            raise ValueError(f"need max_degree >= 0, got {max_degree}")
        self.d = d
        self.max_degree = max_degree
        self.indices: list[MultiIndex] = []
        self.degree_offset: dict[int, int] = {}
        for k in range(max_degree + 1):
            self.degree_offset[k] = len(self.indices)
            for exps in _homogeneous_indices(d, k):
                self.indices.append(MultiIndex(exps))
        assert len(self.indices) == dim_Pi_ambient(d, max_degree)
        self._position = {ix.exponents: i for i, ix in enumerate(self.indices)}

    def __len__(self) -> int:
        return len(self.indices)

    def position(self, exponents) -> int:
        return self._position[tuple(exponents)]

    def degree_slice(self, k: int) -> slice:
        """Positions of the degree-k monomials."""
        start = self.degree_offset[k]
        stop = self.degree_offset.get(k + 1, len(self.indices))
        return slice(start, stop)


def enumerate_basis(d: int, L: int) -> MonomialBasis:
    return MonomialBasis(d, L)
