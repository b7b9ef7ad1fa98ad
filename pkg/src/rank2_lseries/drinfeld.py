"""Rank-2 Drinfeld modules ``phi_theta = theta + a tau + b tau^2``.

Logarithm coefficients ``gamma_n`` have a closed form as a sum over shadowed
partitions; the recursion coming from ``theta log = log phi_theta`` is kept
alongside as an independent oracle.  Both are computed in the bracket ring
(see :mod:`rank2_lseries.brackets`) and converted to exact fractions or to
u-series only at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from .brackets import BracketAlgebra, BracketLaurent
from .fields import field
from .laurent import LaurentSeries
from .poly import Frac, PolyA


class DrinfeldRank2:
    """``phi_theta = theta + a tau + b tau^2`` over ``F_q``, with ``b != 0``."""

    def __init__(self, a: PolyA | int, b: PolyA | int, q: int | None = None):
        if not isinstance(a, PolyA):
            a = PolyA.const(a, q)
        if not isinstance(b, PolyA):
            b = PolyA.const(b, a.p)
        if a.p != b.p:
            raise ValueError("coefficients live over different fields")
        if b.is_zero():
            raise ValueError("b must be nonzero for a rank-2 module")
        self.a = a
        self.b = b
        self.q = a.p
        self.algebra = BracketAlgebra(self.q, a, b)

    @classmethod
    def parse(cls, q: int, a: str, b: str) -> "DrinfeldRank2":
        return cls(PolyA.parse(a, q), PolyA.parse(b, q))

    def is_constant(self) -> bool:
        return self.a.is_constant() and self.b.is_constant()

    def __eq__(self, other) -> bool:
        return isinstance(other, DrinfeldRank2) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"DrinfeldRank2(q={self.q}, a={self.a}, b={self.b})"


def twist_scalar(phi: DrinfeldRank2) -> int:
    """``c = -1/b``, the (q-1)-st power of the twisting constant."""
    if not phi.is_constant():
        raise ValueError("the twist needs constant coefficients")
    F = field(phi.q)
    return (-F.inv(phi.b.constant_value())) % phi.q


def twist(phi: DrinfeldRank2) -> DrinfeldRank2:
    """The twist with coefficients ``a c`` and ``b c^(q+1)`` where ``c = -1/b``."""
    c = twist_scalar(phi)
    q = phi.q
    a = phi.a.constant_value() * c % q
    b = phi.b.constant_value() * pow(c, q + 1, q) % q
    return DrinfeldRank2(PolyA.const(a, q), PolyA.const(b, q))


# shadowed partitions

@dataclass(frozen=True)
class ShadowedPartition:
    """``(S1, S2)`` with ``S1``, ``S2`` and ``S2 + 1`` tiling ``{0, ..., n-1}``.

    Subsets are stored as bitmasks.
    """

    n: int
    s1: int
    s2: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        shadow = self.s2 << 1
        if self.s1 & self.s2 or self.s1 & shadow or self.s2 & shadow:
            raise ValueError("parts overlap")
        if (self.s1 | self.s2 | shadow) != full:
            raise ValueError("parts do not cover the level")

    @property
    def first(self) -> frozenset:
        return frozenset(_bits(self.s1))

    @property
    def second(self) -> frozenset:
        return frozenset(_bits(self.s2))

    def starts_in_first(self) -> bool:
        """Membership in the subfamily with ``0 in S1``."""
        return bool(self.s1 & 1)

    def __str__(self) -> str:
        fmt = lambda s: "{" + ",".join(map(str, sorted(s))) + "}" if s else "{}"
        return f"({fmt(self.first)}, {fmt(self.second)})"


def _bits(mask: int) -> List[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@lru_cache(maxsize=None)
def _partition_masks(n: int) -> Tuple[Tuple[int, int], ...]:
    if n < 0:
        return ()
    if n == 0:
        return ((0, 0),)
    top = 1 << (n - 1)
    out = [(s1 | top, s2) for s1, s2 in _partition_masks(n - 1)]
    if n >= 2:
        out += [(s1, s2 | (1 << (n - 2))) for s1, s2 in _partition_masks(n - 2)]
    return tuple(out)


def shadowed_partitions(n: int) -> List[ShadowedPartition]:
    """All shadowed partitions of level ``n``: first those with ``n-1`` in
    ``S1``, then those with ``n-2`` in ``S2``, recursively."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    return [ShadowedPartition(n, s1, s2) for s1, s2 in _partition_masks(n)]


def weight1(subset, q: int) -> int:
    return sum(q**i for i in subset)


def weight2(subset, q: int) -> int:
    if 0 not in subset:
        raise ValueError("weight2 needs 0 in the subset")
    return sum(q**i for i in subset if i != 0)


# closed form for the logarithm coefficients

def component_formal(U: ShadowedPartition, phi: DrinfeldRank2) -> BracketLaurent:
    alg = phi.algebra
    out = alg.const(1)
    for i in _bits(U.s1):
        if i != 0 or not U.starts_in_first():
            out = out * alg.a_pow(i)
        out = out * alg.bracket(i + 1, -1) * -1
    for i in _bits(U.s2):
        out = out * alg.b_pow(i) * alg.bracket(i + 2, -1) * -1
    return out


def component(U: ShadowedPartition, phi: DrinfeldRank2) -> Frac:
    """``a^w b^(w1(S2)) / (prod_{S1} -[i+1] prod_{S2} -[i+2])``."""
    return phi.algebra.to_frac(component_formal(U, phi))


def ft_gamma_formal(phi: DrinfeldRank2, n: int) -> Tuple[BracketLaurent, BracketLaurent, BracketLaurent]:
    alg = phi.algebra
    F = alg.const(0)
    T = alg.const(0)
    for U in shadowed_partitions(n):
        c = component_formal(U, phi)
        if U.starts_in_first():
            F = F + c
        else:
            T = T + c
    return F, T, alg.a_pow(0) * F + T


def ft_gamma(phi: DrinfeldRank2, n: int) -> Tuple[Frac, Frac, Frac]:
    """``(F_n, T_n, gamma_n)`` from the shadowed-partition sum."""
    return tuple(phi.algebra.to_frac(x) for x in ft_gamma_formal(phi, n))


def gamma_formal_table(phi: DrinfeldRank2, n: int) -> List[BracketLaurent]:
    """``gamma_0 .. gamma_n`` from the functional-equation recursion."""
    alg = phi.algebra
    out = [alg.const(1)]
    prev = alg.const(0)
    for i in range(1, n + 1):
        nxt = (alg.a_pow(i - 1) * out[-1] + alg.b_pow(i - 2) * prev if i >= 2 else alg.a_pow(0) * out[-1])
        nxt = nxt * alg.bracket(i, -1) * -1
        prev = out[-1]
        out.append(nxt)
    return out


def f_formal_table(phi: DrinfeldRank2, n: int) -> List[BracketLaurent]:
    """``F_0 .. F_n`` from the recursion ``F_i = -(b^(q^(i-2)) F_(i-2) + a^(q^(i-1)) F_(i-1)) / [i]``."""
    alg = phi.algebra
    out = [alg.const(0), alg.bracket(1, -1) * -1]
    for i in range(2, n + 1):
        nxt = alg.b_pow(i - 2) * out[i - 2] + alg.a_pow(i - 1) * out[i - 1]
        out.append(nxt * alg.bracket(i, -1) * -1)
    return out[: n + 1]


def gamma_recursive(phi: DrinfeldRank2, n: int) -> Frac:
    return phi.algebra.to_frac(gamma_formal_table(phi, n)[n])


def f_recursive(phi: DrinfeldRank2, n: int) -> Frac:
    return phi.algebra.to_frac(f_formal_table(phi, n)[n])


# exponential coefficients

def exp_coeffs(phi: DrinfeldRank2, upto: int) -> List[Frac]:
    """``xi_0 .. xi_upto`` with ``xi_i = (a xi_(i-1)^q + b xi_(i-2)^(q^2)) / [i]``.

    Frobenius does not act monomially on brackets, so this stays in ``K``.
    """
    q = phi.q
    a, b = Frac(phi.a), Frac(phi.b)
    out = [Frac.from_int(1, q)]
    for i in range(1, upto + 1):
        acc = a * out[i - 1].frobenius(1)
        if i >= 2:
            acc = acc + b * out[i - 2].frobenius(2)
        out.append(acc / Frac(PolyA.monomial(q**i, q) - PolyA.theta(q)))
    return out


def formal_inverse_residual(phi: DrinfeldRank2, i: int) -> Frac:
    """``sum_{j+k=i} gamma_j xi_k^(q^j)``, zero for ``i >= 1``."""
    gammas = gamma_formal_table(phi, i)
    xis = exp_coeffs(phi, i)
    acc = Frac.from_int(0, phi.q)
    for j in range(i + 1):
        acc = acc + phi.algebra.to_frac(gammas[j]) * xis[i - j].frobenius(j)
    return acc


# evaluation

def gamma_valuation_bounds(phi: DrinfeldRank2, upto: int) -> List[float]:
    """Lower bounds for ``v_inf(gamma_i)`` when ``a``, ``b`` are constants:
    ``v_i >= q^i + min(v_(i-1), v_(i-2))``."""
    q = phi.q
    out: List[float] = [0]
    for i in range(1, upto + 1):
        prev2 = out[i - 2] if i >= 2 else float("inf")
        out.append(q**i + min(out[i - 1], prev2))
    return out


def drinfeld_log_eval(phi: DrinfeldRank2, z: LaurentSeries, prec: int, max_terms: int = 40) -> LaurentSeries:
    """``log_phi(z) = sum_i gamma_i z^(q^i)`` modulo ``u^prec``."""
    if not phi.is_constant():
        raise ValueError("logarithm evaluation needs constant coefficients")
    q = phi.q
    if z.is_zero():
        return LaurentSeries.zero(q, prec)
    v = z.lead
    bounds = gamma_valuation_bounds(phi, max_terms)
    stop = None
    for i in range(max_terms + 1):
        if q**i * v + bounds[i] >= prec and all(
            q**j * v + bounds[j] >= prec for j in range(i, max_terms + 1)
        ):
            stop = i
            break
    if stop is None:
        raise ValueError("logarithm series does not reach the requested precision")
    gammas = gamma_formal_table(phi, max(stop - 1, 0))
    total = LaurentSeries.zero(q, prec)
    for i in range(stop):
        zi = z.frobenius(i)
        g = phi.algebra.to_laurent(gammas[i], prec - q**i * v)
        total = total + (g * zi).with_prec(prec)
    return total
