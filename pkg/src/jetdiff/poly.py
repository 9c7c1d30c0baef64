"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is stored as a dictionary mapping dense exponent tuples to
nonzero ``Fraction`` coefficients.  The exponent tuple is keyed against a
shared :class:`VarTable`, an ordered list of variable names fixed once and
for all; two polynomials can be combined only when they reference the same
table.

  SparsePoly.terms = {(2, 1): Fraction(1), (0, 0): Fraction(3)}
      over VarTable(("x", "y"))  means  x^2*y + 3

The zero polynomial has an empty term dict.  Zero coefficients are never
stored, so structural equality of the term dicts is polynomial equality.

All arithmetic here is exact.  Floating point never appears; callers that
want a human-readable approximation convert at the boundary.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Union

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


class PolyError(Exception):
    """Base class for polynomial-arithmetic failures."""


class MismatchedTables(PolyError):
    """Two operands do not share a variable table."""


class NotDivisible(PolyError):
    """Exact division was requested but no exact quotient exists."""


class NonNilpotentArgument(PolyError):
    """truncated_exp needs an argument without constant term."""


class NotSymmetric(PolyError):
    """symmetric_to_elementary got a polynomial that is not symmetric."""


def rat_to_str(value: Fraction) -> str:
    """Lowest-terms string form: "p/q", "-p/q", or "p" when integral ("0" for zero)."""
    return str(value)


def rat_from_str(text: str) -> Fraction:
    """Inverse of :func:`rat_to_str`; accepts "p", "p/q" and unicode minus."""
    return Fraction(text.replace("−", "-").strip())


class VarTable:
    """Ordered, immutable table of distinct variable names.

    The index of a name is stable for the lifetime of the table; exponent
    vectors of every polynomial over the table have exactly one slot per
    name, in table order.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} (table {self.names})") from None

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarTable{self.names}"


def _as_fraction(value: Scalar) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


class SparsePoly:
    """Sparse polynomial over a :class:`VarTable` with Fraction coefficients.

    Instances are immutable by convention: no method mutates ``terms`` after
    construction, so values are safe to share across threads.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[Exponents, Scalar] | None = None):
        self.table = table
        clean: dict[Exponents, Fraction] = {}
        if terms:
            width = len(table)
            for exps, coeff in terms.items():
                if len(exps) != width:
                    raise ValueError(f"exponent vector {exps} does not match table width {width}")
                coeff = _as_fraction(coeff)
                if coeff:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "SparsePoly":
        return cls(table)

    @classmethod
    def const(cls, table: VarTable, value: Scalar) -> "SparsePoly":
        return cls(table, {(0,) * len(table): _as_fraction(value)})

    @classmethod
    def var(cls, table: VarTable, name: str, power: int = 1) -> "SparsePoly":
        exps = [0] * len(table)
        exps[table.index(name)] = power
        return cls(table, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, table: VarTable, powers: Mapping[str, int], coeff: Scalar = 1) -> "SparsePoly":
        exps = [0] * len(table)
        for name, power in powers.items():
            exps[table.index(name)] = power
        return cls(table, {tuple(exps): _as_fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.table.names == other.table.names and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * len(self.table): other}
        return NotImplemented

    def __hash__(self):
        return hash((self.table.names, frozenset(self.terms.items())))

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.table.index(name)
        return max(exps[i] for exps in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.table), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms sorted lexicographically by exponent vector (serialization order)."""
        return sorted(self.terms.items())

    # -- ring operations ---------------------------------------------------

    def _check_table(self, other: "SparsePoly") -> None:
        if self.table.names != other.table.names:
            raise MismatchedTables(f"{self.table} vs {other.table}")

    def __add__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(self.table, other)
        self._check_table(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps)
            if acc is None:
                terms[exps] = coeff
            else:
                acc = acc + coeff
                if acc:
                    terms[exps] = acc
                else:
                    del terms[exps]
        out = SparsePoly.__new__(SparsePoly)
        out.table = self.table
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        out = SparsePoly.__new__(SparsePoly)
        out.table = self.table
        out.terms = {exps: -coeff for exps, coeff in self.terms.items()}
        return out

    def __sub__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(self.table, other)
        return self + (-other)

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            scalar = _as_fraction(other)
            out = SparsePoly.__new__(SparsePoly)
            out.table = self.table
            out.terms = {} if not scalar else {e: c * scalar for e, c in self.terms.items()}
            return out
        self._check_table(other)
        terms: dict[Exponents, Fraction] = {}
        get = terms.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = get(exps)
                prod = c1 * c2
                if acc is None:
                    terms[exps] = prod
                else:
                    acc = acc + prod
                    if acc:
                        terms[exps] = acc
                    else:
                        del terms[exps]
        out = SparsePoly.__new__(SparsePoly)
        out.table = self.table
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "SparsePoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = SparsePoly.const(self.table, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus and substitution ------------------------------------------

    def diff(self, name: str) -> "SparsePoly":
        """Formal partial derivative with respect to one variable."""
        i = self.table.index(name)
        terms: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e:
                new = list(exps)
                new[i] = e - 1
                key = tuple(new)
                terms[key] = terms.get(key, Fraction(0)) + coeff * e
        return SparsePoly(self.table, terms)

    def antiderivative(self, name: str) -> "SparsePoly":
        """Formal antiderivative in one variable (constant of integration 0)."""
        i = self.table.index(name)
        terms: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            new = list(exps)
            new[i] = exps[i] + 1
            terms[tuple(new)] = coeff / (exps[i] + 1)
        return SparsePoly(self.table, terms)

    def substitute(self, mapping: Mapping[str, "SparsePoly | Scalar"],
                   target: VarTable | None = None) -> "SparsePoly":
        """Apply the ring homomorphism sending each mapped variable to its image.

        Variables absent from ``mapping`` are sent to the variable of the same
        name in the target table (which defaults to the current table).
        """
        target = target or self.table
        images: dict[int, SparsePoly] = {}
        for i, name in enumerate(self.table.names):
            if name in mapping:
                img = mapping[name]
                if isinstance(img, (int, Fraction)):
                    img = SparsePoly.const(target, img)
                elif img.table.names != target.names:
                    raise MismatchedTables("substitution image not over target table")
                images[i] = img
            else:
                images[i] = SparsePoly.var(target, name)
        power_cache: dict[tuple[int, int], SparsePoly] = {}
        result = SparsePoly.zero(target)
        for exps, coeff in self.terms.items():
            term = SparsePoly.const(target, coeff)
            for i, e in enumerate(exps):
                if not e:
                    continue
                key = (i, e)
                cached = power_cache.get(key)
                if cached is None:
                    cached = images[i] ** e
                    power_cache[key] = cached
                term = term * cached
            result = result + term
        return result

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a full rational assignment of every variable."""
        values = [_as_fraction(assignment[name]) for name in self.table.names]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            value = coeff
            for v, e in zip(values, exps):
                if e:
                    value *= v ** e
            total += value
        return total

    def coefficient_of(self, name: str, power: int) -> "SparsePoly":
        """Coefficient of name**power, as a polynomial with that variable set aside."""
        i = self.table.index(name)
        terms: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            if exps[i] == power:
                new = list(exps)
                new[i] = 0
                terms[tuple(new)] = coeff
        return SparsePoly(self.table, terms)

    def project(self, target: VarTable) -> "SparsePoly":
        """Re-express over a table whose names are a superset or subset.

        Dropping a variable is allowed only if it does not occur.
        """
        positions: list[int | None] = []
        for name in self.table.names:
            positions.append(target._index.get(name))
        terms: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            new = [0] * len(target)
            for pos, e in zip(positions, exps):
                if e:
                    if pos is None:
                        raise ValueError(f"cannot drop occurring variable while projecting")
                    new[pos] = e
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return SparsePoly(target, terms)

    # -- serialization -------------------------------------------------------

    def to_payload(self) -> dict:
        """JSON-ready payload: variable names plus the sorted term list."""
        return {
            "vars": list(self.table.names),
            "terms": [[list(exps), rat_to_str(coeff)] for exps, coeff in self.sorted_terms()],
        }

    @classmethod
    def from_payload(cls, payload: Mapping) -> "SparsePoly":
        table = VarTable(payload["vars"])
        terms = {tuple(exps): rat_from_str(coeff) for exps, coeff in payload["terms"]}
        return cls(table, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SparsePoly":
        return cls.from_payload(json.loads(text))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            factors = [rat_to_str(coeff)] if coeff != 1 or not any(exps) else []
            for name, e in zip(self.table.names, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


# -- the spec'd operation surface ------------------------------------------


def arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    """Exact add/sub/mul on polynomials sharing a table."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def exact_div(num: SparsePoly, den: SparsePoly) -> SparsePoly:
    """Exact quotient q with q*den == num; raises NotDivisible otherwise.

    Single-divisor long division under the lexicographic term order.  When an
    exact quotient exists the remainder produced by this division is zero, so
    the first non-cancellable leading term proves indivisibility.
    """
    num._check_table(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead_exps = max(den.terms)
    lead_coeff = den.terms[lead_exps]
    rest = {e: c for e, c in den.terms.items() if e != lead_exps}
    remainder = dict(num.terms)
    quotient: dict[Exponents, Fraction] = {}
    while remainder:
        exps = max(remainder)
        if any(e < le for e, le in zip(exps, lead_exps)):
            raise NotDivisible("no exact quotient")
        qexps = tuple(e - le for e, le in zip(exps, lead_exps))
        qcoeff = remainder.pop(exps) / lead_coeff
        quotient[qexps] = qcoeff
        for dexps, dcoeff in rest.items():
            key = tuple(a + b for a, b in zip(qexps, dexps))
            acc = remainder.get(key, Fraction(0)) - qcoeff * dcoeff
            if acc:
                remainder[key] = acc
            else:
                remainder.pop(key, None)
    return SparsePoly(num.table, quotient)


class TruncationContext:
    """Weighted total-degree truncation.

    ``weights`` assigns a positive integer weight to each variable that
    counts toward the degree bound; variables missing from the mapping are
    parameters of weight zero and never truncate.
    """

    __slots__ = ("weights", "bound", "_vector_cache")

    def __init__(self, weights: Mapping[str, int], bound: int):
        if bound < 0:
            raise ValueError("bound must be >= 0")
        for name, w in weights.items():
            if w < 1:
                raise ValueError(f"weight of {name!r} must be >= 1")
        self.weights = dict(weights)
        self.bound = bound
        self._vector_cache: dict[tuple[str, ...], tuple[int, ...]] = {}

    def weight_vector(self, table: VarTable) -> tuple[int, ...]:
        cached = self._vector_cache.get(table.names)
        if cached is None:
            cached = tuple(self.weights.get(name, 0) for name in table.names)
            self._vector_cache[table.names] = cached
        return cached

    def term_weight(self, table: VarTable, exps: Exponents) -> int:
        wv = self.weight_vector(table)
        return sum(w * e for w, e in zip(wv, exps) if e)


def truncate(p: SparsePoly, ctx: TruncationContext) -> SparsePoly:
    """Discard every term of weighted degree above the bound."""
    wv = ctx.weight_vector(p.table)
    bound = ctx.bound
    terms = {exps: coeff for exps, coeff in p.terms.items()
             if sum(w * e for w, e in zip(wv, exps) if e) <= bound}
    if len(terms) == len(p.terms):
        return p
    out = SparsePoly.__new__(SparsePoly)
    out.table = p.table
    out.terms = terms
    return out


def min_weight(p: SparsePoly, ctx: TruncationContext) -> int:
    wv = ctx.weight_vector(p.table)
    return min(sum(w * e for w, e in zip(wv, exps) if e) for exps in p.terms)


def truncated_exp(p: SparsePoly, ctx: TruncationContext) -> SparsePoly:
    """exp(p) truncated at the context bound.

    Requires every term of p to carry positive weight, so the series
    terminates after at most ``bound`` products.
    """
    if p.is_zero():
        return SparsePoly.const(p.table, 1)
    if min_weight(p, ctx) < 1:
        raise NonNilpotentArgument("argument has a constant term under the context weights")
    result = SparsePoly.const(p.table, 1)
    term = SparsePoly.const(p.table, 1)
    q = 0
    while True:
        q += 1
        term = truncate(term * p, ctx) * Fraction(1, q)
        if term.is_zero():
            break
        result = result + term
    return result


def series_inverse(p: SparsePoly, ctx: TruncationContext) -> SparsePoly:
    """Multiplicative inverse of a unit series (constant term 1) up to the bound."""
    if p.constant_term() != 1:
        raise ValueError("series_inverse needs constant term exactly 1")
    eps = SparsePoly.const(p.table, 1) - p
    result = SparsePoly.const(p.table, 1)
    term = SparsePoly.const(p.table, 1)
    while True:
        term = truncate(term * eps, ctx)
        if term.is_zero():
            break
        result = result + term
    return result


def elementary_symmetric(table: VarTable, roots: list[str], i: int) -> SparsePoly:
    """The elementary symmetric polynomial e_i of the listed root variables."""
    from itertools import combinations

    result = SparsePoly.zero(table)
    for subset in combinations(roots, i):
        result = result + SparsePoly.monomial(table, {name: 1 for name in subset})
    return result


def _swap_exps(exps: Exponents, i: int, j: int) -> Exponents:
    new = list(exps)
    new[i], new[j] = new[j], new[i]
    return tuple(new)


def symmetric_to_elementary(p: SparsePoly, roots: list[str],
                            elem_names: list[str] | None = None) -> SparsePoly:
    """Rewrite a polynomial symmetric in ``roots`` in elementary symmetric terms.

    Non-root variables ride along as coefficients.  The output lives over a
    fresh table (e_1..e_r followed by the surviving non-root variables) and
    substituting e_i -> i-th elementary symmetric polynomial reproduces the
    input exactly.  Classical leading-term elimination: the lexicographically
    largest root exponent pattern (a_1 >= ... >= a_r by symmetry) is killed by
    e_1^(a_1-a_2) * e_2^(a_2-a_3) * ... * e_r^(a_r).
    """
    r = len(roots)
    root_pos = [p.table.index(name) for name in roots]
    for a, b in zip(root_pos, root_pos[1:]):
        swapped = SparsePoly(p.table, {_swap_exps(e, a, b): c for e, c in p.terms.items()})
        if swapped != p:
            raise NotSymmetric(f"not symmetric under swapping {roots}")
    other_names = [name for name in p.table.names if name not in set(roots)]
    if elem_names is None:
        elem_names = [f"e{i}" for i in range(1, r + 1)]
    out_table = VarTable(tuple(elem_names) + tuple(other_names))
    other_pos = [p.table.index(name) for name in other_names]

    elems = [elementary_symmetric(p.table, roots, i) for i in range(1, r + 1)]
    elem_cache: dict[tuple[int, ...], SparsePoly] = {}

    def elem_product(powers: tuple[int, ...]) -> SparsePoly:
        cached = elem_cache.get(powers)
        if cached is None:
            cached = SparsePoly.const(p.table, 1)
            for e_i, power in zip(elems, powers):
                if power:
                    cached = cached * e_i ** power
            elem_cache[powers] = cached
        return cached

    residue = p
    out_terms: dict[Exponents, Fraction] = {}
    while residue.terms:
        lead = max(residue.terms, key=lambda exps: tuple(exps[i] for i in root_pos))
        a = [lead[i] for i in root_pos]
        if any(a[i] < a[i + 1] for i in range(r - 1)):
            raise NotSymmetric("leading root pattern not weakly decreasing")
        powers = tuple(a[i] - a[i + 1] for i in range(r - 1)) + (a[-1],)
        # full coefficient (in the non-root variables) attached to this root pattern
        coeff_terms: dict[Exponents, Fraction] = {}
        for exps, coeff in residue.terms.items():
            if all(exps[i] == ai for i, ai in zip(root_pos, a)):
                key = [0] * len(p.table)
                for i in other_pos:
                    key[i] = exps[i]
                coeff_terms[tuple(key)] = coeff
        coeff_poly = SparsePoly(p.table, coeff_terms)
        residue = residue - coeff_poly * elem_product(powers)
        for exps, coeff in coeff_poly.terms.items():
            out = list(powers) + [exps[i] for i in other_pos]
            key = tuple(out)
            acc = out_terms.get(key, Fraction(0)) + coeff
            if acc:
                out_terms[key] = acc
            else:
                out_terms.pop(key, None)
    return SparsePoly(out_table, out_terms)


# -- closed-form power sums --------------------------------------------------

_POWER_SUM_CACHE: dict[int, list[Fraction]] = {}


def power_sum_coeffs(i: int) -> list[Fraction]:
    """Coefficients (ascending) of S_i(N) = sum_{k=0}^N k^i as a polynomial in N.

    Built from the classical recurrence
    (i+1) S_i(N) = (N+1)^{i+1} - 1 - sum_{j<i} C(i+1, j) S_j(N),
    with S_i including the k=0 term (so S_0(N) = N + 1).
    """
    if i in _POWER_SUM_CACHE:
        return _POWER_SUM_CACHE[i]
    if i == 0:
        coeffs = [Fraction(1), Fraction(1)]
    else:
        acc = [Fraction(0)] * (i + 2)
        for k in range(i + 2):
            acc[k] += Fraction(comb(i + 1, k))
        acc[0] -= 1
        for j in range(i):
            sj = power_sum_coeffs(j)
            c = Fraction(comb(i + 1, j))
            for k, v in enumerate(sj):
                acc[k] -= c * v
        coeffs = [v / (i + 1) for v in acc]
    _POWER_SUM_CACHE[i] = coeffs
    return coeffs


def definite_power_sum(p: SparsePoly, var: str, lo: SparsePoly | Scalar,
                       hi: SparsePoly | Scalar) -> SparsePoly:
    """Closed form of sum_{var=lo}^{hi} p, valid whenever hi >= lo - 1.

    ``p`` must be polynomial in ``var`` with coefficients free of it.  The
    bounds are affine (or any polynomial) expressions over the same table,
    and the result is the Faulhaber closed form P(hi) - P(lo-1) with
    P(N) = sum_i [coeff_i] S_i(N).  Empty ranges (hi == lo-1) give zero by
    construction; ranges with hi < lo-1 are a caller error surfaced only at
    concrete evaluation time.
    """
    table = p.table
    if isinstance(lo, (int, Fraction)):
        lo = SparsePoly.const(table, lo)
    if isinstance(hi, (int, Fraction)):
        hi = SparsePoly.const(table, hi)
    deg = p.degree_in(var)
    lo_minus_1 = lo - 1

    def antideriv_at(point: SparsePoly) -> SparsePoly:
        total = SparsePoly.zero(table)
        point_pow: dict[int, SparsePoly] = {}

        def ppow(k: int) -> SparsePoly:
            if k not in point_pow:
                point_pow[k] = point ** k
            return point_pow[k]

        for i in range(max(deg, 0) + 1):
            ci = p.coefficient_of(var, i)
            if ci.is_zero():
                continue
            s_i = power_sum_coeffs(i)
            for k, c in enumerate(s_i):
                if c:
                    total = total + ci * (ppow(k) * c)
        return total

    return antideriv_at(hi) - antideriv_at(lo_minus_1)


def integrate(p: SparsePoly, var: str, lo: SparsePoly | Scalar,
              hi: SparsePoly | Scalar) -> SparsePoly:
    """Definite integral of p in one variable between polynomial bounds."""
    table = p.table
    if isinstance(lo, (int, Fraction)):
        lo = SparsePoly.const(table, lo)
    if isinstance(hi, (int, Fraction)):
        hi = SparsePoly.const(table, hi)
    anti = p.antiderivative(var)
    return anti.substitute({var: hi}) - anti.substitute({var: lo})
