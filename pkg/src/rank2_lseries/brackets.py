"""Exact elements of K written as Laurent polynomials in the Carlitz brackets.

Every coefficient that the logarithm of a rank-2 Drinfeld module (or of the
t-modules built from it) produces is a polynomial in ``a^(q^k)``, ``b^(q^k)``
and the inverses of brackets ``[k] = theta^(q^k) - theta``.  Treating the
brackets as independent variables gives the ring

    F_p[a_0, a_1, ..., b_0, b_1, ...][y_1^(+-1), y_2^(+-1), ...]

and the evaluation ``y_k -> [k]``, ``a_k -> a^(q^k)``, ``b_k -> b^(q^k)`` is a
ring map onto the relevant subring of K.  An identity that holds in this ring
therefore holds in K.  The payoff is size: ``[6]`` over F_7 has degree
117649 as a polynomial in theta but is a single variable here.

When ``a`` or ``b`` is a constant of F_p it is folded into the coefficients;
otherwise it stays symbolic, which makes the checked identity valid for every
choice of that coefficient at once.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from .fields import field, lucas_binomial
from .laurent import LaurentSeries
from .poly import Frac, PolyA

Monomial = Tuple[Tuple[int, int], ...]

_BRACKET, _A, _B = 0, 1, 2


def _var(kind: int, k: int) -> int:
    return 3 * k + kind


def _kind(var: int) -> Tuple[int, int]:
    k, kind = divmod(var, 3)
    return kind, k


@lru_cache(maxsize=1 << 16)
def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        ne = d.get(v, 0) + e
        if ne:
            d[v] = ne
        else:
            del d[v]
    return tuple(sorted(d.items()))


class BracketLaurent:
    """Laurent polynomial over F_p in brackets and Frobenius twists of a, b."""

    __slots__ = ("p", "terms")

    def __init__(self, terms: Dict[Monomial, int], p: int):
        self.p = p
        self.terms = {m: c % p for m, c in terms.items() if c % p}

    # constructors
    @classmethod
    def const(cls, c: int, p: int) -> "BracketLaurent":
        return cls({(): c}, p)

    @classmethod
    def bracket(cls, k: int, p: int, e: int = 1) -> "BracketLaurent":
        """``[k]^e``; ``[0] = 1``."""
        if k == 0 or e == 0:
            return cls.const(1, p)
        return cls({((_var(_BRACKET, k), e),): 1}, p)

    @classmethod
    def a_twist(cls, k: int, p: int) -> "BracketLaurent":
        return cls({((_var(_A, k), 1),): 1}, p)

    @classmethod
    def b_twist(cls, k: int, p: int) -> "BracketLaurent":
        return cls({((_var(_B, k), 1),): 1}, p)

    def zero(self) -> "BracketLaurent":
        return BracketLaurent({}, self.p)

    def one(self) -> "BracketLaurent":
        return BracketLaurent.const(1, self.p)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    # arithmetic
    def _coerce(self, other) -> "BracketLaurent":
        if isinstance(other, BracketLaurent):
            return other
        if isinstance(other, (int, np.integer)):
            return BracketLaurent.const(int(other), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return BracketLaurent(out, self.p)

    __radd__ = __add__

    def __neg__(self) -> "BracketLaurent":
        return BracketLaurent({m: -c for m, c in self.terms.items()}, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return BracketLaurent({m: c * int(other) for m, c in self.terms.items()}, self.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return BracketLaurent(out, p)

    __rmul__ = __mul__

    def inverse(self) -> "BracketLaurent":
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials in the brackets are invertible")
        (m, c), = self.terms.items()
        for v, e in m:
            if _kind(v)[0] != _BRACKET:
                raise ZeroDivisionError("twists of a and b are not inverted symbolically")
        inv_m = tuple((v, -e) for v, e in m)
        return BracketLaurent({inv_m: field(self.p).inv(c)}, self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e: int) -> "BracketLaurent":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self.terms.items())))

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def has_symbols(self) -> bool:
        return any(_kind(v)[0] != _BRACKET for v in self.variables())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = {_BRACKET: "[{}]", _A: "a^(q^{})", _B: "b^(q^{})"}
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            factors = []
            for v, e in m:
                kind, k = _kind(v)
                base = names[kind].format(k)
                factors.append(base if e == 1 else f"{base}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            else:
                parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"BracketLaurent({self}, p={self.p})"


def bracket_series(k: int, e: int, prec: int, p: int) -> LaurentSeries:
    """``[k]^e`` modulo ``u^prec``: ``u^(-e q^k) (1 - u^(q^k - 1))^e``."""
    qk = p**k
    lead = -e * qk
    n = prec - lead
    if n <= 0:
        return LaurentSeries.zero(p, prec)
    m = qk - 1
    body = np.zeros(n, dtype=np.int64)
    for j in range(0, (n - 1) // m + 1):
        c = lucas_binomial(e, j, p)
        if c:
            body[j * m] = c * (-1) ** j
    return LaurentSeries(lead, body, prec, p)


class BracketAlgebra:
    """Maps bracket-ring elements into K or K_inf for a given pair ``(a, b)``.

    ``a`` or ``b`` equal to ``None`` keeps that coefficient fully generic (no
    evaluation possible, but identities still checkable).
    """

    def __init__(self, p: int, a: Optional[PolyA], b: Optional[PolyA]):
        self.p = p
        self.a = a
        self.b = b

    def _twist(self, which: str, k: int) -> BracketLaurent:
        c = self.a if which == "a" else self.b
        if c is not None and c.is_constant():
            return BracketLaurent.const(c.constant_value(), self.p)
        return (BracketLaurent.a_twist if which == "a" else BracketLaurent.b_twist)(k, self.p)

    def a_pow(self, k: int) -> BracketLaurent:
        """``a^(q^k)``."""
        return self._twist("a", k)

    def b_pow(self, k: int) -> BracketLaurent:
        """``b^(q^k)``."""
        return self._twist("b", k)

    def bracket(self, k: int, e: int = 1) -> BracketLaurent:
        return BracketLaurent.bracket(k, self.p, e)

    def const(self, c: int) -> BracketLaurent:
        return BracketLaurent.const(c, self.p)

    def _value(self, kind: int, k: int) -> PolyA:
        if kind == _BRACKET:
            return PolyA.monomial(self.p**k, self.p) - PolyA.theta(self.p)
        c = self.a if kind == _A else self.b
        if c is None:
            raise ValueError("generic coefficient has no value")
        return c.frobenius(k)

    def to_frac(self, x: BracketLaurent) -> Frac:
        """Exact value in K, summed over a common denominator."""
        p = self.p
        den_exp: Dict[int, int] = {}
        for m in x.terms:
            for v, e in m:
                if e < 0:
                    den_exp[v] = max(den_exp.get(v, 0), -e)
        cache: Dict[Tuple[int, int], PolyA] = {}

        def power(v: int, e: int) -> PolyA:
            if (v, e) not in cache:
                cache[(v, e)] = self._value(*_kind(v)) ** e
            return cache[(v, e)]

        num = PolyA.zero(p)
        for m, c in x.terms.items():
            exps = dict(den_exp)
            for v, e in m:
                exps[v] = exps.get(v, 0) + e
            term = PolyA.const(c, p)
            for v, e in sorted(exps.items()):
                if e:
                    term = term * power(v, e)
            num = num + term
        den = PolyA.one(p)
        for v, e in sorted(den_exp.items()):
            den = den * power(v, e)
        return Frac(num, den)

    def monomial_valuation(self, m: Monomial) -> int:
        v = 0
        for var, e in m:
            kind, k = _kind(var)
            if kind == _BRACKET:
                v -= e * self.p**k
            else:
                c = self.a if kind == _A else self.b
                if c is None:
                    raise ValueError("generic coefficient has no valuation")
                v -= e * self.p**k * c.degree
        return v

    def min_valuation(self, x: BracketLaurent) -> float:
        """Lower bound for ``v_inf(x)``: the smallest monomial valuation."""
        if x.is_zero():
            return float("inf")
        return min(self.monomial_valuation(m) for m in x.terms)

    def to_laurent(self, x: BracketLaurent, prec: int) -> LaurentSeries:
        """``x`` in K_inf modulo ``u^prec`` (exact below ``prec``)."""
        p = self.p
        total = LaurentSeries.zero(p, prec)
        for m, c in x.terms.items():
            v = self.monomial_valuation(m)
            if v >= prec:
                continue
            term = LaurentSeries(0, [c], None, p)
            for var, e in m:
                kind, k = _kind(var)
                if kind == _BRACKET:
                    # each factor needs prec minus the valuation of the others
                    own = -e * p**k
                    term = term * bracket_series(k, e, prec - v + own, p)
                else:
                    term = term * LaurentSeries.from_poly(self._value(kind, k)) ** e
            total = total + term.with_prec(prec)
        return total
