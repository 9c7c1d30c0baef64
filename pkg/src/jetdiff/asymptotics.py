"""Leading-coefficient extraction and the h^2 summation bound.

The weight-m quantities here (Euler characteristics of jet bundles, the
h^2 majorant sum) are quasi-polynomials in m: polynomial on each residue
class of some period dividing lcm(1..6) = 60.  Two independent extraction
routes are provided for their top coefficients:

* ``leading_coeff``: exact Newton interpolation through degree+1 values at
  m = m0 + P, m0 + 2P, .. with two held-out validation points; the period
  is escalated through 60, 420, 2520 until validation passes.
* ``stratum_volume_leading``: the top coefficient of a lattice sum equals
  the integral of the summand's top-degree form over the normalized
  stratum region {g >= 0, l3 >= 0, l2 >= l3 + g, 1 - g - 2 l2 - 3 l3 >=
  l2 + g}; iterated exact integration gives it in closed form (symbolic in
  the degree d when desired).

The h^2 majorant for a strict partition is
g(lambda) = (3 |lambda|^3 / 2) prod_{i<j} (lambda_i - lambda_j); summed
over the filtration strata it grows like a degree-9 quasi-polynomial whose
top coefficient both routes put at 49403 / (252 * 10^7).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable

from .chi import ChiPolynomial, chi_closed_form, sum_over_strata
from .poly import SparsePoly, VarTable, integrate

PERIOD_LADDER = (60, 420, 2520)
OFFSET_LADDER = (60, 120)

CHI3_LEADING_DENOM = 81648 * 10 ** 6
H2_LEADING_CONSTANT = Fraction(49403, 252 * 10 ** 7)

D_TABLE = VarTable(("d",))


class PeriodUndetermined(Exception):
    """Every (period, offset) escalation failed held-out validation."""


@dataclass(frozen=True)
class LeadingCoefficient:
    """Validated top coefficient of a degree-``degree`` quasi-polynomial."""

    degree: int
    value: Fraction
    period: int
    offset: int
    evidence: tuple[tuple[int, Fraction], ...] = field(default=())


def _newton_forward(values: list[Fraction]) -> list[Fraction]:
    """Leading forward differences Delta^k v_0 for k = 0..len-1."""
    diffs = list(values)
    out = [diffs[0]]
    for _ in range(1, len(values)):
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        out.append(diffs[0])
    return out


def leading_coeff(evaluator: Callable[[int], Fraction], degree: int,
                  period_hint: int = 60) -> LeadingCoefficient:
    """Exact top coefficient of the polynomial interpolating the series.

    Samples degree+1 points m0 + P, .., m0 + (degree+1) P, checks the
    interpolating polynomial against two further points, and escalates the
    period through the ladder (hint first) on mismatch.
    """
    periods = [period_hint] + [p for p in PERIOD_LADDER if p != period_hint]
    for period in periods:
        for offset in OFFSET_LADDER:
            points = [offset + i * period for i in range(1, degree + 4)]
            values = [evaluator(m) for m in points]
            newton = _newton_forward(values[:degree + 1])
            ok = True
            for idx in (degree + 1, degree + 2):
                predicted = sum(newton[k] * comb(idx, k) for k in range(degree + 1))
                if predicted != values[idx]:
                    ok = False
                    break
            if ok:
                value = newton[degree] / (Fraction(period) ** degree * factorial(degree))
                return LeadingCoefficient(
                    degree=degree, value=value, period=period, offset=offset,
                    evidence=tuple(zip(points, values)))
    raise PeriodUndetermined(f"no (period, offset) in {periods} x {OFFSET_LADDER} validated")


# -- the h^2 majorant ----------------------------------------------------------

LAM_TABLE = VarTable(("lam1", "lam2", "lam3"))


def h2_summand() -> SparsePoly:
    """g(lambda) = (3/2) (l1+l2+l3)^3 (l1-l2)(l1-l3)(l2-l3)."""
    l1, l2, l3 = (SparsePoly.var(LAM_TABLE, n) for n in LAM_TABLE)
    return Fraction(3, 2) * (l1 + l2 + l3) ** 3 * (l1 - l2) * (l1 - l3) * (l2 - l3)


def h2_g(lam: tuple[int, int, int]) -> Fraction:
    """g at one partition (zero unless strictly decreasing)."""
    l1, l2, l3 = lam
    return Fraction(3, 2) * (l1 + l2 + l3) ** 3 * (l1 - l2) * (l1 - l3) * (l2 - l3)


def h2_sum(m: int, workers: int = 1) -> Fraction:
    """Sum of g over the dim-3 strata of weight m.

    Strata with gamma >= 1 are strict automatically; the gamma = 0 stratum
    is restricted to strictly decreasing partitions (on which g would vanish
    anyway), keeping the majorant valid at every m.
    """
    return sum_over_strata(h2_summand(), ("lam1", "lam2", "lam3"), m,
                           gamma0_gap=1, workers=workers)


def h2_bound(m: int, d: int, workers: int = 1) -> Fraction:
    """The h^2 majorant d (d + 13) * h2_sum(m)."""
    return Fraction(d * (d + 13)) * h2_sum(m, workers=workers)


# -- volume route ----------------------------------------------------------------


def stratum_volume_leading(summand_top: SparsePoly, extra_vars: tuple[str, ...] = ()) -> SparsePoly:
    """Integral of a degree-6 form over the normalized stratum region.

    ``summand_top`` must live over (lam1, lam2, lam3) plus ``extra_vars``
    (parameters that ride along, e.g. d).  Returns the exact integral over
    {g in [0, 1/5], l3 in [0, (1-5g)/6], l2 in [l3+g, (1-2g-3l3)/3]} with
    lam1 = 1 - g - 2 l2 - 3 l3, as a polynomial in the extra variables:
    the m^9 coefficient of the corresponding lattice sum.
    """
    table = VarTable(("g", "l2", "l3") + extra_vars)
    g = SparsePoly.var(table, "g")
    l2 = SparsePoly.var(table, "l2")
    l3 = SparsePoly.var(table, "l3")
    l1 = 1 - g - 2 * l2 - 3 * l3
    mapping = {"lam1": l1, "lam2": l2, "lam3": l3}
    for name in extra_vars:
        mapping[name] = SparsePoly.var(table, name)
    integrand = summand_top.substitute(mapping, target=table)
    inner = integrate(integrand, "l2", l3 + g, (1 - 2 * g - 3 * l3) * Fraction(1, 3))
    mid = integrate(inner, "l3", 0, (1 - 5 * g) * Fraction(1, 6))
    outer = integrate(mid, "g", 0, Fraction(1, 5))
    if extra_vars:
        return outer.project(VarTable(extra_vars))
    return outer.project(VarTable(("g",)))  # constant; keep a 1-var table


def _chi3_top_part(twist_image: SparsePoly | int, extra_vars: tuple[str, ...],
                   cache=None) -> SparsePoly:
    """Joint degree-6 part of the schur3 closed form in (lam, t), t substituted."""
    form = chi_closed_form("schur3", cache).poly
    idx = [form.table.index(n) for n in ("lam1", "lam2", "lam3", "t")]
    top = SparsePoly(form.table, {e: c for e, c in form.terms.items()
                                  if sum(e[i] for i in idx) == 6})
    target = VarTable(("lam1", "lam2", "lam3") + extra_vars)
    mapping: dict[str, SparsePoly | int] = {"t": twist_image}
    for name in ("lam1", "lam2", "lam3"):
        mapping[name] = SparsePoly.var(target, name)
    for name in extra_vars:
        if name in form.table:
            mapping[name] = SparsePoly.var(target, name)
    return top.substitute(mapping, target=target)


def chi3_leading_poly(cache=None) -> SparsePoly:
    """m^9 coefficient of chi_E(3, 3, m, d) as an exact polynomial in d.

    Derived by the volume route from the closed form (nothing hard-coded);
    cross-checked against interpolation in the test suite.  Cached on disk
    as a one-variable closed form.
    """
    if cache is not None:
        stored = cache.get_chi("chi3-leading")
        if stored is not None:
            return stored.poly
    top = _chi3_top_part(0, ("d",), cache)
    alpha = stratum_volume_leading(top, ("d",))
    if cache is not None:
        cache.put_chi("chi3-leading", ChiPolynomial("chi3-leading", alpha))
    return alpha


def chi3_leading_reference() -> SparsePoly:
    """The published closed form d(389 d^3 - 20739 d^2 + 185559 d - 358873) / 81648e6."""
    d = SparsePoly.var(D_TABLE, "d")
    return (389 * d ** 4 - 20739 * d ** 3 + 185559 * d ** 2 - 358873 * d) \
        * Fraction(1, CHI3_LEADING_DENOM)


def h2_leading_volume() -> Fraction:
    """The h^2-sum top coefficient by exact integration."""
    value = stratum_volume_leading(h2_summand())
    return value.constant_term()


def twisted_chi3_leading_poly(cache=None) -> SparsePoly:
    """m^9 coefficient of chi(E_{3,m} (x) K^(-delta m)) as a polynomial in (d, delta).

    The twist enters as t = -delta (d - 5) m, i.e. t/m = -delta (d - 5) in
    the normalized region.
    """
    target = VarTable(("lam1", "lam2", "lam3", "d", "delta"))
    tau = -SparsePoly.var(target, "delta") * (SparsePoly.var(target, "d") - 5)
    top = _chi3_top_part(tau, ("d", "delta"), cache)
    return stratum_volume_leading(top, ("d", "delta"))
