"""Degree thresholds and feasibility windows, with machine-checkable certificates.

Each criterion is an exact polynomial (or rational combination) in the
degree d, built from the hypersurface Chern data or from the engine's own
asymptotic coefficients, never from pasted-in numbers:

  jets1-surface   (c1^2 - c2) / 6            never eventually positive
  jets2-surface   (13 c1^2 - 9 c2) / 648     positive from d = 15 on
  chi3-positive   the m^9 coefficient of chi(E_{3,m}) on 3-folds   d >= 43
  h0-minus-h2     chi3 coefficient minus C d (d + 13)              d >= 97

A certificate records the sign flip: the exact value at d_min - 1 (<= 0)
and at d_min (> 0), with positivity re-checked on the following 50 degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .asymptotics import H2_LEADING_CONSTANT, chi3_leading_poly
from .chern import hypersurface_chern
from .poly import SparsePoly, VarTable

D_TABLE = VarTable(("d",))

CRITERIA = ("jets1-surface", "jets2-surface", "chi3-positive", "h0-minus-h2")
REGIONS = ("twisted-surface", "twisted-threefold", "deg-condition")


class ThresholdError(Exception):
    pass


class NoThresholdFound(ThresholdError):
    """No persistent sign change below the scan cap."""


class MissingParam(ThresholdError):
    pass


@dataclass(frozen=True)
class Criterion:
    id: str
    expression: SparsePoly
    note: str = ""

    def value(self, d: int | Fraction) -> Fraction:
        return self.expression.evaluate({"d": d})


@dataclass(frozen=True)
class ThresholdCertificate:
    criterion_id: str
    d_min: int
    value_below: Fraction   # at d_min - 1, <= 0
    value_at: Fraction      # at d_min, > 0

    def to_payload(self) -> dict:
        return {
            "criterion": self.criterion_id,
            "d_min": self.d_min,
            "value_at_dmin_minus_1": str(self.value_below),
            "value_at_dmin": str(self.value_at),
        }


def build_criterion(criterion_id: str, cache=None,
                    h2_constant: Fraction | None = None) -> Criterion:
    """Assemble a criterion expression from Chern data / engine coefficients."""
    chern = hypersurface_chern(3)
    c1sq = chern.integral({1: 2}).project(D_TABLE)
    c2 = chern.integral({2: 1}).project(D_TABLE)
    if criterion_id == "jets1-surface":
        return Criterion(criterion_id, (c1sq - c2) * Fraction(1, 6),
                         "m^3 coefficient for order-1 jets on surfaces")
    if criterion_id == "jets2-surface":
        return Criterion(criterion_id, (13 * c1sq - 9 * c2) * Fraction(1, 648),
                         "m^4 coefficient for order-2 jets on surfaces")
    if criterion_id == "chi3-positive":
        return Criterion(criterion_id, chi3_leading_poly(cache),
                         "m^9 coefficient for order-3 jets on 3-folds")
    if criterion_id == "h0-minus-h2":
        constant = H2_LEADING_CONSTANT if h2_constant is None else h2_constant
        d = SparsePoly.var(D_TABLE, "d")
        return Criterion(criterion_id,
                         chi3_leading_poly(cache) - constant * d * (d + 13),
                         "chi leading coefficient minus the h^2 leading bound")
    raise ThresholdError(f"unknown criterion {criterion_id!r}")


def minimal_degree(criterion: Criterion, scan_from: int = 2, scan_cap: int = 10_000,
                   persistence: int = 50) -> ThresholdCertificate:
    """Smallest d with a persistent positive value, plus the sign certificate.

    Isolated positive degrees whose following ``persistence`` degrees dip
    back below zero are skipped (the order-2 surface coefficient is positive
    at d = 2 but negative on 3..14, for example).
    """
    expr = criterion.expression
    d = scan_from
    while d <= scan_cap:
        value = expr.evaluate({"d": d})
        if value > 0:
            if all(expr.evaluate({"d": e}) > 0 for e in range(d, d + persistence + 1)):
                below = expr.evaluate({"d": d - 1})
                if below > 0:
                    raise ThresholdError(
                        f"sign certificate broken at d={d}: positive on both sides")
                return ThresholdCertificate(criterion.id, d, below, value)
        d += 1
    raise NoThresholdFound(f"{criterion.id}: no persistent positivity for d <= {scan_cap}")


@dataclass(frozen=True)
class FeasibilityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    strict: bool

    @property
    def holds(self) -> bool:
        return self.lhs > self.rhs if self.strict else self.lhs >= self.rhs

    def to_payload(self) -> dict:
        op = ">" if self.strict else ">="
        return {"name": self.name, "lhs": str(self.lhs), "op": op,
                "rhs": str(self.rhs), "holds": self.holds}


@dataclass(frozen=True)
class FeasibilityResult:
    region: str
    feasible: bool
    checks: tuple[FeasibilityCheck, ...]

    def to_payload(self) -> dict:
        return {"region": self.region, "feasible": self.feasible,
                "checks": [c.to_payload() for c in self.checks]}


def _need(params: dict, names: tuple[str, ...]) -> list[Fraction]:
    values = []
    for name in names:
        if name not in params:
            raise MissingParam(f"region needs parameter {name!r}")
        values.append(Fraction(params[name]))
    return values


def feasibility(region_id: str, params: dict) -> FeasibilityResult:
    """Exact truth value of a region's inequality system, with all sides shown.

    Checks run in order; once one fails, later checks that would need
    missing parameters are skipped (so the open delta-window verdict at
    delta = 1/18 needs no degree).
    """
    checks: list[FeasibilityCheck] = []

    def run(specs) -> bool:
        verdict = True
        for name, needs, make in specs:
            missing = [p for p in needs if p not in params]
            if missing:
                if not verdict:
                    break
                raise MissingParam(f"region {region_id!r} needs parameter {missing[0]!r}")
            checks.append(make(*[Fraction(params[p]) for p in needs]))
            verdict = verdict and checks[-1].holds
        return verdict

    chern = hypersurface_chern(3)
    if region_id == "twisted-surface":
        def coeff_check(delta: Fraction, d: Fraction) -> FeasibilityCheck:
            c1sq = chern.integral({1: 2}).evaluate({"d": d})
            c2 = chern.integral({2: 1}).evaluate({"d": d})
            lhs = (18 * delta ** 2 - 10 * delta + Fraction(13, 3)) * c1sq - 3 * c2
            return FeasibilityCheck("twist-coefficient-positive", lhs, Fraction(0), True)

        feasible = run([
            ("delta-positive", ("delta",),
             lambda delta: FeasibilityCheck("delta-positive", delta, Fraction(0), True)),
            ("delta-window", ("delta",),
             lambda delta: FeasibilityCheck("delta-below-1/3", Fraction(1, 3), delta, True)),
            ("coeff", ("delta", "d"), coeff_check),
            ("poles", ("delta", "d"),
             lambda delta, d: FeasibilityCheck("pole-condition delta(d-4) > 7",
                                               delta * (d - 4), Fraction(7), True)),
        ])
        return FeasibilityResult(region_id, feasible, tuple(checks))
    if region_id == "twisted-threefold":
        feasible = run([
            ("delta-positive", ("delta",),
             lambda delta: FeasibilityCheck("delta-positive", delta, Fraction(0), True)),
            ("delta-window", ("delta",),
             lambda delta: FeasibilityCheck("delta-below-1/18", Fraction(1, 18), delta, True)),
            ("poles", ("delta", "d"),
             lambda delta, d: FeasibilityCheck("pole-condition delta(d-5) > 12",
                                               delta * (d - 5), Fraction(12), True)),
        ])
        return FeasibilityResult(region_id, feasible, tuple(checks))
    if region_id == "deg-condition":
        def deg_check(m: Fraction, t: Fraction, d: Fraction) -> FeasibilityCheck:
            c1sq = chern.integral({1: 2}).evaluate({"d": d})
            c2 = chern.integral({2: 1}).evaluate({"d": d})
            return FeasibilityCheck("m(13c1^2 - 9c2) > 12 t c1^2",
                                    m * (13 * c1sq - 9 * c2), 12 * t * c1sq, True)

        feasible = run([("deg", ("m", "t", "d"), deg_check)])
        return FeasibilityResult(region_id, feasible, tuple(checks))
    raise ThresholdError(f"unknown region {region_id!r}")


def twisted_threefold_report(cache=None, scan_cap: int = 1000) -> dict:
    """Informational minimal degree for the twisted 3-fold positivity study.

    Models the twisted coefficient by evaluating the (d, delta) leading
    polynomial at the pole-condition boundary delta = 12/(d - 5) and asking
    for positivity together with the open window 12/(d - 5) < 1/18.  The
    commonly cited degree for this argument is 593; the derived value is
    reported next to it, not asserted equal.
    """
    from .asymptotics import twisted_chi3_leading_poly
    poly = twisted_chi3_leading_poly(cache)
    found = None
    for d in range(222, scan_cap + 1):  # window needs d - 5 > 216
        delta = Fraction(12, d - 5)
        if not delta < Fraction(1, 18):
            continue
        value = poly.evaluate({"d": d, "delta": delta}) \
            - H2_LEADING_CONSTANT * d * (d + 13)
        if value > 0:
            found = (d, value)
            break
    return {
        "derived_d_min": None if found is None else found[0],
        "value_at_derived_d_min": None if found is None else str(found[1]),
        "cited_degree": 593,
        "delta_rule": "delta = 12/(d-5), window delta < 1/18",
    }
