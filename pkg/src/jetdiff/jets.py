"""The algebra of reparametrization-invariant jet polynomials at a point.

A k-jet of a germ of curve in dimension n is the tuple of Taylor
coefficients (f_1', .., f_n', f_1'', .., f_n^(k)).  We name the symbol for
the j-th derivative of the i-th component ``f{i}_{j}``, and grade it with
weight j, so a polynomial Q is weighted-homogeneous of weight m exactly when
Q(t f', t^2 f'', ..) = t^m Q.

Reparametrizations phi(t) = b_1 t + b_2 t^2 + ... act by the chain rule;
the subgroup tangent to the identity (b_1 = 1) acts unipotently and its
invariants are generated, in low dimension, by

    f_i'
    w_ij    = f_i' f_j'' - f_i'' f_j'                (weight 3)
    w_ij^k  = f_k'(f_i' f_j''' - f_i''' f_j') - 3 f_k''(f_i' f_j'' - f_i'' f_j')
                                                     (weight 5)
    W       = det of the 3x3 matrix of jets          (weight 6, n = 3)

subject to the quadratic relation 3 w_ij^2 = f_j' w_ij^i - f_i' w_ij^j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .poly import SparsePoly, TruncationContext, VarTable, truncate

MAX_ORDER = 3


class JetError(Exception):
    pass


class UnsupportedOrder(JetError):
    pass


class BadIndex(JetError):
    pass


class NotHomogeneous(JetError):
    pass


def jet_name(i: int, j: int) -> str:
    """Symbol name for the j-th derivative of component i."""
    return f"f{i}_{j}"


def jet_table(n: int, k: int, extra: tuple[str, ...] = ()) -> VarTable:
    """Table of all jet symbols up to order k in dimension n, plus extras."""
    names = [jet_name(i, j) for j in range(1, k + 1) for i in range(1, n + 1)]
    return VarTable(tuple(names) + tuple(extra))


def jet_weights(table: VarTable) -> dict[str, int]:
    """weight(f^{(j)}) = j for every jet symbol in the table."""
    weights = {}
    for name in table.names:
        if name.startswith("f") and "_" in name:
            weights[name] = int(name.rsplit("_", 1)[1])
    return weights


@dataclass(frozen=True)
class ReparamMap:
    """Substitution sending each jet symbol to the jets of f o phi at 0.

    The coefficients of phi are the formal symbols ``prefix1..prefixk``;
    setting prefix1 = 1 and the rest to 0 is the identity substitution.
    """

    order: int
    dim: int
    coeff_names: tuple[str, ...]
    table: VarTable                       # jet symbols plus coefficient symbols
    substitution: dict[str, SparsePoly]   # jet symbol -> image

    def apply(self, p: SparsePoly) -> SparsePoly:
        """Push a jet polynomial through the substitution (into self.table)."""
        return p.substitute(self.substitution, target=self.table)


def reparam_jets(k: int, n: int, prefix: str = "b") -> ReparamMap:
    """Jets of f o phi for phi(t) = b_1 t + ... + b_k t^k, exactly.

    Computed by composing the truncated Taylor series f(u) = sum f^(s) u^s/s!
    with u = phi(t) and reading off coefficients: (f o phi)^(j) = j! [t^j].
    Validated for k <= 3; higher orders are out of the supported range.
    """
    if k < 1 or k > MAX_ORDER:
        raise UnsupportedOrder(f"order {k} outside supported range 1..{MAX_ORDER}")
    if n < 1:
        raise BadIndex("dimension must be >= 1")
    coeff_names = tuple(f"{prefix}{j}" for j in range(1, k + 1))
    table = jet_table(n, k, extra=coeff_names)
    work = VarTable(table.names + ("_t",))
    ctx = TruncationContext({"_t": 1}, k)
    phi = SparsePoly.zero(work)
    for j, name in enumerate(coeff_names, start=1):
        phi = phi + SparsePoly.monomial(work, {name: 1, "_t": j})
    substitution: dict[str, SparsePoly] = {}
    for i in range(1, n + 1):
        series = SparsePoly.zero(work)
        phi_pow = SparsePoly.const(work, 1)
        for s in range(1, k + 1):
            phi_pow = truncate(phi_pow * phi, ctx)
            series = series + phi_pow * Fraction(1, factorial(s)) * SparsePoly.var(work, jet_name(i, s))
        for j in range(1, k + 1):
            coeff = series.coefficient_of("_t", j) * factorial(j)
            substitution[jet_name(i, j)] = coeff.project(table)
    return ReparamMap(order=k, dim=n, coeff_names=coeff_names,
                      table=table, substitution=substitution)


def compose_phi(outer: tuple[str, ...], inner: tuple[str, ...], k: int,
                table: VarTable) -> list[SparsePoly]:
    """Coefficients of phi_outer o phi_inner up to degree k, over ``table``."""
    work = VarTable(table.names + ("_t",))
    ctx = TruncationContext({"_t": 1}, k)
    phi_in = SparsePoly.zero(work)
    for j, name in enumerate(inner, start=1):
        phi_in = phi_in + SparsePoly.monomial(work, {name: 1, "_t": j})
    composed = SparsePoly.zero(work)
    power = SparsePoly.const(work, 1)
    for j, name in enumerate(outer, start=1):
        power = truncate(power * phi_in, ctx)
        composed = composed + power * SparsePoly.var(work, name)
    return [composed.coefficient_of("_t", j).project(table) for j in range(1, k + 1)]


@dataclass(frozen=True)
class WeightedInvariant:
    """A jet polynomial together with its weight under t -> lambda t."""

    poly: SparsePoly
    weight: int


# -- generators ---------------------------------------------------------------


def _check_range(n: int, *indices: int) -> None:
    for i in indices:
        if i < 1 or i > n:
            raise BadIndex(f"index {i} outside 1..{n}")


def fprime(i: int, n: int, table: VarTable | None = None) -> WeightedInvariant:
    table = table or jet_table(n, 3)
    _check_range(n, i)
    return WeightedInvariant(SparsePoly.var(table, jet_name(i, 1)), 1)


def wronskian2(i: int, j: int, n: int, table: VarTable | None = None) -> WeightedInvariant:
    """w_ij = f_i' f_j'' - f_i'' f_j', weight 3."""
    table = table or jet_table(n, 3)
    _check_range(n, i, j)
    v = lambda a, b: SparsePoly.var(table, jet_name(a, b))
    return WeightedInvariant(v(i, 1) * v(j, 2) - v(i, 2) * v(j, 1), 3)


def wronskian_slot(i: int, j: int, k: int, n: int,
                   table: VarTable | None = None) -> WeightedInvariant:
    """w_ij^k = f_k'(f_i' f_j''' - f_i''' f_j') - 3 f_k''(f_i' f_j'' - f_i'' f_j'), weight 5."""
    table = table or jet_table(n, 3)
    _check_range(n, i, j, k)
    v = lambda a, b: SparsePoly.var(table, jet_name(a, b))
    third = v(i, 1) * v(j, 3) - v(i, 3) * v(j, 1)
    second = v(i, 1) * v(j, 2) - v(i, 2) * v(j, 1)
    return WeightedInvariant(v(k, 1) * third - 3 * v(k, 2) * second, 5)


def jet_determinant(n: int, table: VarTable | None = None) -> WeightedInvariant:
    """W = det [ f_i^(j) ]_{j,i}, the full 3x3 jet determinant (weight 6)."""
    if n != 3:
        raise BadIndex("the jet determinant needs dimension exactly 3")
    table = table or jet_table(3, 3)
    v = lambda a, b: SparsePoly.var(table, jet_name(a, b))
    total = SparsePoly.zero(table)
    perms = [((1, 2, 3), 1), ((2, 3, 1), 1), ((3, 1, 2), 1),
             ((1, 3, 2), -1), ((2, 1, 3), -1), ((3, 2, 1), -1)]
    for (a, b, c), sign in perms:
        total = total + sign * (v(a, 1) * v(b, 2) * v(c, 3))
    return WeightedInvariant(total, 6)


def generator(kind: str, n: int, indices: tuple[int, ...] = (),
              table: VarTable | None = None) -> WeightedInvariant:
    """Dispatch on generator kind: 'fprime', 'w', 'wk' or 'W'."""
    if kind == "fprime":
        return fprime(indices[0], n, table)
    if kind == "w":
        return wronskian2(indices[0], indices[1], n, table)
    if kind == "wk":
        return wronskian_slot(indices[0], indices[1], indices[2], n, table)
    if kind == "W":
        return jet_determinant(n, table)
    raise BadIndex(f"unknown generator kind {kind!r}")


# -- weights and invariance ----------------------------------------------------


def weight_of(p: SparsePoly) -> int:
    """Weight of a weighted-homogeneous jet polynomial; NotHomogeneous otherwise."""
    if p.is_zero():
        raise NotHomogeneous("zero polynomial has no weight")
    weights = jet_weights(p.table)
    wv = [weights.get(name, 0) for name in p.table.names]
    seen = {sum(w * e for w, e in zip(wv, exps)) for exps in p.terms}
    if len(seen) != 1:
        raise NotHomogeneous(f"mixed weights {sorted(seen)}")
    return seen.pop()


def check_invariance(p: SparsePoly, k: int, n: int) -> int | None:
    """Weight m if p is invariant up to phi'(0)^m under reparametrization, else None.

    The test is an exact polynomial identity in the formal coefficients
    b_1..b_k: the substituted polynomial must equal b_1^m p.
    """
    rmap = reparam_jets(k, n)
    substituted = rmap.apply(p)
    try:
        m = weight_of(p)
    except NotHomogeneous:
        return None
    expected = p.project(rmap.table) * SparsePoly.var(rmap.table, rmap.coeff_names[0], m)
    return m if substituted == expected else None


def verify_relation_R(n: int, i: int, j: int) -> bool:
    """Check 3 w_ij^2 == f_j' w_ij^i - f_i' w_ij^j as an exact identity."""
    if not (1 <= i < j <= n):
        raise BadIndex(f"need 1 <= i < j <= n, got ({i}, {j}) with n={n}")
    table = jet_table(n, 3)
    w = wronskian2(i, j, n, table).poly
    wi = wronskian_slot(i, j, i, n, table).poly
    wj = wronskian_slot(i, j, j, n, table).poly
    fi = SparsePoly.var(table, jet_name(i, 1))
    fj = SparsePoly.var(table, jet_name(j, 1))
    return (3 * w * w - (fj * wi - fi * wj)).is_zero()


# -- highest-weight monomials and graded dimensions ---------------------------


def hwv_enumerate(m: int, dim: int) -> list[tuple[int, ...]]:
    """Exponents of the highest-weight monomials of weight m.

    dim 3: all (alpha, beta, gamma, delta) >= 0 with
    alpha + 3 beta + 5 gamma + 6 delta = m (monomials
    f_1'^alpha w_12^beta (w_12^1)^gamma W^delta); dim 2 drops delta.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    out: list[tuple[int, ...]] = []
    if dim == 3:
        for delta in range(m // 6 + 1):
            for gamma in range((m - 6 * delta) // 5 + 1):
                for beta in range((m - 6 * delta - 5 * gamma) // 3 + 1):
                    alpha = m - 6 * delta - 5 * gamma - 3 * beta
                    out.append((alpha, beta, gamma, delta))
    elif dim == 2:
        for gamma in range(m // 5 + 1):
            for beta in range((m - 5 * gamma) // 3 + 1):
                alpha = m - 5 * gamma - 3 * beta
                out.append((alpha, beta, gamma))
    else:
        raise ValueError("dim must be 2 or 3")
    return out


def a3_graded_dim_dim2(m: int) -> int:
    """Monomial-basis count of the weight-m part of the order-3 algebra, dim 2.

    Counts (a, b, c, d, e) >= 0 with a + b + 5c + 5d + 3e = m and e in {0, 1}:
    the generators f_1', f_2', w_12^1, w_12^2 are free and w_12 is quadratic
    over them.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    count = 0
    for e in (0, 1):
        rem_e = m - 3 * e
        if rem_e < 0:
            break
        for c in range(rem_e // 5 + 1):
            for d in range((rem_e - 5 * c) // 5 + 1):
                count += rem_e - 5 * c - 5 * d + 1
    return count


def unipotent_substitution(lam_name: str, n: int, k: int) -> dict[str, SparsePoly]:
    """f_2^(j) -> lam f_1^(j) + f_2^(j) for every order j, other symbols fixed."""
    table = jet_table(n, k, extra=(lam_name,))
    lam = SparsePoly.var(table, lam_name)
    mapping = {}
    for j in range(1, k + 1):
        mapping[jet_name(2, j)] = lam * SparsePoly.var(table, jet_name(1, j)) \
            + SparsePoly.var(table, jet_name(2, j))
    return mapping
