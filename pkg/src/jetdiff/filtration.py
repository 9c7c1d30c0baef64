"""Filtration index sets of the graded jet bundles and Weyl dimensions.

The graded bundle of order-3 invariant jet differentials decomposes into
Schur bundles indexed by a pair (gamma, lambda):

  dim 3:  lambda_1 + 2 lambda_2 + 3 lambda_3 = m - gamma,
          lambda_i - lambda_j >= gamma for i < j, lambda_3 >= 0,
          0 <= gamma <= m/5;
  dim 2:  lambda_1 + 2 lambda_2 = m - gamma, lambda_1 - lambda_2 >= gamma,
          lambda_2 >= gamma, 0 <= gamma <= m/5.

Order-2 jets on surfaces filter as sym powers twisted by the canonical
bundle, S^(m-3j) T* (x) K^j for 0 <= j <= m/3, and the full (non-invariant)
operator bundles of order k filter by tuples (l_1..l_k) with
sum i l_i = m.

The index sets biject with the highest-weight monomials through
alpha = lambda_1 - lambda_2 - gamma, beta = lambda_2 - lambda_3 - gamma,
delta = lambda_3 (dim 2: drop delta, beta = lambda_2 - gamma).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

FAMILIES = ("k2dim2", "k3dim2", "k3dim3", "gg1", "gg2", "gg3", "gg4")


class FiltrationError(Exception):
    pass


class BadPartition(FiltrationError):
    pass


class ConstraintViolation(FiltrationError):
    pass


@dataclass(frozen=True)
class FiltrationIndex:
    """One Schur (or sym-power) summand of a graded jet bundle.

    For the gamma-families ``lam`` is the partition and ``gamma`` the strand
    index.  For k2dim2, ``lam`` is the single sym power (m - 3j) and
    ``twist`` the canonical-bundle exponent j.  For the ggK families ``lam``
    holds the tuple (l_1..l_K) and gamma/twist are None.
    """

    family: str
    lam: tuple[int, ...]
    gamma: int | None = None
    twist: int | None = None


def is_partition(lam: tuple[int, ...]) -> bool:
    return all(a >= b for a, b in zip(lam, lam[1:])) and (not lam or lam[-1] >= 0)


def schur_dim(lam: tuple[int, ...], r: int) -> int:
    """Weyl dimension of the Schur functor of a rank-r space, r in {2, 3}."""
    if len(lam) != r or not is_partition(lam):
        raise BadPartition(f"{lam} is not a partition with {r} parts")
    if r == 2:
        return lam[0] - lam[1] + 1
    if r == 3:
        l1, l2, l3 = lam
        return (l1 - l2 + 1) * (l2 - l3 + 1) * (l1 - l3 + 2) // 2
    raise BadPartition("rank must be 2 or 3")


def sym_dim(l: int, r: int) -> int:
    """dim S^l of a rank-r space."""
    return comb(l + r - 1, r - 1)


def filtration_indices(family: str, m: int) -> list[FiltrationIndex]:
    """Complete, duplicate-free index list in deterministic order.

    Gamma-families are ordered by gamma ascending then lambda lexicographic
    descending; k2dim2 by twist ascending; gg families by tuple lexicographic
    descending.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    out: list[FiltrationIndex] = []
    if family == "k3dim3":
        for gamma in range(m // 5 + 1):
            block = []
            rest = m - gamma
            # l2 in [l3+gamma, (rest-3*l3-gamma)//3] makes both gap constraints hold;
            # l1 - l3 >= gamma follows from the other two.
            for l3 in range((rest - 4 * gamma) // 6 + 1):
                for l2 in range(l3 + gamma, (rest - 3 * l3 - gamma) // 3 + 1):
                    block.append((rest - 2 * l2 - 3 * l3, l2, l3))
            block.sort(reverse=True)
            out.extend(FiltrationIndex(family, lam, gamma=gamma) for lam in block)
    elif family == "k3dim2":
        for gamma in range(m // 5 + 1):
            block = []
            rest = m - gamma
            for l2 in range(gamma, (rest - gamma) // 3 + 1):
                block.append((rest - 2 * l2, l2))
            block.sort(reverse=True)
            out.extend(FiltrationIndex(family, lam, gamma=gamma) for lam in block)
    elif family == "k2dim2":
        for j in range(m // 3 + 1):
            out.append(FiltrationIndex(family, (m - 3 * j,), twist=j))
    elif family.startswith("gg"):
        k = int(family[2:])
        tuples: list[tuple[int, ...]] = []

        def fill(prefix: list[int], i: int, rest: int) -> None:
            if i == k:
                if rest == 0:
                    tuples.append(tuple(prefix))
                return
            weight = i + 1
            if i == k - 1:
                if rest % weight == 0:
                    tuples.append(tuple(prefix + [rest // weight]))
                return
            for li in range(rest // weight + 1):
                fill(prefix + [li], i + 1, rest - weight * li)

        fill([], 0, m)
        tuples.sort(reverse=True)
        out.extend(FiltrationIndex(family, lam) for lam in tuples)
    else:
        raise ValueError(f"unknown family {family!r}")
    return out


def hwv_bijection(index: FiltrationIndex, m: int) -> tuple[int, ...]:
    """Highest-weight exponents of one filtration index.

    dim 3: (alpha, beta, gamma, delta) = (l1-l2-g, l2-l3-g, g, l3);
    dim 2: (alpha, beta, gamma) = (l1-l2-g, l2-g, g).
    """
    g = index.gamma
    if index.family == "k3dim3":
        l1, l2, l3 = index.lam
        if g is None or not (0 <= 5 * g <= m) or l1 + 2 * l2 + 3 * l3 != m - g \
                or l1 - l2 < g or l2 - l3 < g or l3 < 0:
            raise ConstraintViolation(f"invalid index {index} for weight {m}")
        return (l1 - l2 - g, l2 - l3 - g, g, l3)
    if index.family == "k3dim2":
        l1, l2 = index.lam
        if g is None or not (0 <= 5 * g <= m) or l1 + 2 * l2 != m - g \
                or l1 - l2 < g or l2 < g:
            raise ConstraintViolation(f"invalid index {index} for weight {m}")
        return (l1 - l2 - g, l2 - g, g)
    raise ConstraintViolation(f"no bijection for family {index.family}")


def hwv_bijection_inverse(exps: tuple[int, ...], m: int, dim: int) -> FiltrationIndex:
    """Inverse of :func:`hwv_bijection`: exponents back to (gamma, lambda)."""
    if any(e < 0 for e in exps):
        raise ConstraintViolation(f"negative exponents {exps}")
    if dim == 3:
        alpha, beta, gamma, delta = exps
        if alpha + 3 * beta + 5 * gamma + 6 * delta != m:
            raise ConstraintViolation(f"{exps} has weight != {m}")
        l3 = delta
        l2 = beta + gamma + delta
        l1 = alpha + beta + 2 * gamma + delta
        return FiltrationIndex("k3dim3", (l1, l2, l3), gamma=gamma)
    if dim == 2:
        alpha, beta, gamma = exps
        if alpha + 3 * beta + 5 * gamma != m:
            raise ConstraintViolation(f"{exps} has weight != {m}")
        l2 = beta + gamma
        l1 = alpha + beta + 2 * gamma
        return FiltrationIndex("k3dim2", (l1, l2), gamma=gamma)
    raise ConstraintViolation("dim must be 2 or 3")


def graded_dim_E(family: str, m: int, r: int) -> int:
    """Sum of fiber dimensions over the filtration of the weight-m graded bundle."""
    total = 0
    if family.startswith("gg"):
        for index in filtration_indices(family, m):
            prod = 1
            for l in index.lam:
                prod *= sym_dim(l, r)
            total += prod
        return total
    if family == "k2dim2":
        return sum(index.lam[0] + 1 for index in filtration_indices(family, m))
    for index in filtration_indices(family, m):
        total += schur_dim(index.lam, r)
    return total


def tower_dims(n: int, r: int, k: int) -> tuple[int, int]:
    """(dimension, fiber rank) of the k-th stage of the projectivized jet tower."""
    if not (n >= r >= 1) or k < 0:
        raise ValueError("need n >= r >= 1 and k >= 0")
    return (n + k * (r - 1), r)
