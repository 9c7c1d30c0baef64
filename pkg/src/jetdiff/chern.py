"""Chern classes and intersection numbers of smooth hypersurfaces in P^3 / P^4.

For a smooth degree-d hypersurface X in P^n the tangent classes come from
the adjunction quotient

    c(T_X) = (1 + h)^(n+1) / (1 + d h)    truncated at degree n - 1,

with h the hyperplane class, and the single intersection rule
h^(n-1) |-> d.  For n = 3 this gives c_1 = (4 - d) h and
c_2 = (d^2 - 4d + 6) h^2, so the intersection numbers are
c_1^2 = d (d - 4)^2 and c_2 = d (d^2 - 4d + 6).  (The d(d-4)^2 value is the
adjunction one; see README for the discrepancy with a commonly printed
d(d-4).)  The canonical class resolves to O(d - 4) on surfaces and
O(d - 5) on 3-folds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .poly import SparsePoly, VarTable


class UnsupportedAmbient(Exception):
    pass


D_TABLE = VarTable(("d",))


@dataclass(frozen=True)
class ChernData:
    """Chern classes of T_X for X a degree-d hypersurface in P^n.

    ``classes[i]`` is the coefficient of h^(i+1) in c_{i+1}(T_X), a
    polynomial in the degree symbol d; ``degree`` is None when d stays
    symbolic.  Intersection numbers multiply the class coefficients and
    apply h^(n-1) |-> d.
    """

    ambient: int
    degree: int | None
    classes: tuple[SparsePoly, ...]

    @property
    def dim(self) -> int:
        return self.ambient - 1

    def chern_class(self, i: int) -> SparsePoly:
        """Coefficient polynomial (in d) of h^i inside c_i(T_X)."""
        if not (1 <= i <= self.dim):
            raise ValueError(f"c_{i} out of range for dimension {self.dim}")
        return self.classes[i - 1]

    def canonical_twist(self) -> SparsePoly:
        """K_X = O(k) with k = d - (n+1); returns k as a polynomial in d."""
        d = SparsePoly.var(D_TABLE, "d")
        return d - (self.ambient + 1)

    def integral(self, monomial: Mapping[int, int]) -> SparsePoly:
        """Intersection number of prod_i c_i^{monomial[i]} as a polynomial in d.

        The total degree sum(i * e_i) must equal n - 1.
        """
        total = sum(i * e for i, e in monomial.items())
        if total != self.dim:
            raise ValueError(f"monomial degree {total} != variety dimension {self.dim}")
        result = SparsePoly.var(D_TABLE, "d")  # the h^(n-1) |-> d rule
        for i, e in monomial.items():
            result = result * self.chern_class(i) ** e
        return result

    def integral_at(self, monomial: Mapping[int, int], d: int | None = None) -> Fraction:
        """Intersection number evaluated at a concrete degree."""
        if d is None:
            d = self.degree
        if d is None:
            raise ValueError("no concrete degree available")
        return self.integral(monomial).evaluate({"d": d})


def hypersurface_chern(n: int, d: int | None = None) -> ChernData:
    """Chern data of a smooth degree-d hypersurface of P^n, n in {3, 4}."""
    if n not in (3, 4):
        raise UnsupportedAmbient(f"ambient P^{n} not supported")
    table = VarTable(("d", "h"))
    h = SparsePoly.var(table, "h")
    dsym = SparsePoly.var(table, "d")
    dim = n - 1
    total = SparsePoly.const(table, 1)
    hpow = SparsePoly.const(table, 1)
    for i in range(1, dim + 1):
        hpow = hpow * h
        total = total + Fraction(_binom(n + 1, i)) * hpow
    inverse = SparsePoly.const(table, 1)
    minus_dh = -(dsym * h)
    power = SparsePoly.const(table, 1)
    for _ in range(dim):
        power = power * minus_dh
        inverse = inverse + power
    product = total * inverse
    classes = []
    for i in range(1, dim + 1):
        ci = product.coefficient_of("h", i)
        ci = SparsePoly(ci.table, {e: c for e, c in ci.terms.items()
                                   if e[table.index("h")] == 0})
        classes.append(ci.project(D_TABLE))
    data = ChernData(ambient=n, degree=d, classes=tuple(classes))
    if d is not None and d < 1:
        raise ValueError("degree must be >= 1")
    return data


def _binom(n: int, k: int) -> int:
    from math import comb
    return comb(n, k)
