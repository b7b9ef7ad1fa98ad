"""Truncated expansions in powers of ``s = t - theta``.

The Taylor coefficient of ``s^j`` of a function ``f(t)`` is the value of the
``j``-th hyperderivative ``d_t^j f`` at ``t = theta``.  Coefficients can come
from any exact ring that provides ``zero()``, ``one()``, ``is_zero()`` and
``inverse()`` (for the constant term only): :class:`~rank2_lseries.poly.Frac`
or :class:`~rank2_lseries.brackets.BracketLaurent`.
"""

from __future__ import annotations

from typing import Any, Sequence

from .fields import lucas_binomial
from .poly import Frac, PolyA


class ThetaTaylor:
    """``sum_{j<=order} coeffs[j] (t - theta)^j + O((t - theta)^(order+1))``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[Any], order: int):
        if not coeffs:
            raise ValueError("need at least one coefficient to fix the ring")
        zero = coeffs[0].zero()
        cs = list(coeffs[: order + 1])
        cs += [zero] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, c: Any, order: int) -> "ThetaTaylor":
        return cls([c], order)

    @classmethod
    def linear(cls, c0: Any, c1: Any, order: int) -> "ThetaTaylor":
        """``c0 + c1 (t - theta)``."""
        return cls([c0, c1], order)

    @classmethod
    def from_poly_in_theta(cls, f: PolyA, order: int) -> "ThetaTaylor":
        """Expansion of ``f(t)`` for ``f`` in ``A``: coefficients ``d_theta^j f``."""
        return cls([Frac(f.hyperderiv(j)) for j in range(order + 1)], order)

    def _zero(self):
        return self.coeffs[0].zero()

    def __getitem__(self, j: int):
        return self.coeffs[j]

    def _check(self, other: "ThetaTaylor") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "ThetaTaylor") -> "ThetaTaylor":
        m = self._check(other)
        return ThetaTaylor([self.coeffs[j] + other.coeffs[j] for j in range(m + 1)], m)

    def __neg__(self) -> "ThetaTaylor":
        return ThetaTaylor([-c for c in self.coeffs], self.order)

    def __sub__(self, other: "ThetaTaylor") -> "ThetaTaylor":
        return self + (-other)

    def scale(self, c: Any) -> "ThetaTaylor":
        return ThetaTaylor([x * c for x in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, ThetaTaylor):
            return self.scale(other)
        m = self._check(other)
        out = []
        for k in range(m + 1):
            acc = self._zero()
            for j in range(k + 1):
                a, b = self.coeffs[j], other.coeffs[k - j]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            out.append(acc)
        return ThetaTaylor(out, m)

    def inverse(self) -> "ThetaTaylor":
        a0 = self.coeffs[0]
        if a0.is_zero():
            raise ZeroDivisionError("non-unit denominator: value at t = theta is zero")
        inv0 = a0.inverse()
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = self._zero()
            for j in range(1, k + 1):
                a = self.coeffs[j]
                if a.is_zero():
                    continue
                acc = acc + a * out[k - j]
            out.append(-(acc * inv0))
        return ThetaTaylor(out, self.order)

    def __truediv__(self, other: "ThetaTaylor") -> "ThetaTaylor":
        return self * other.inverse()

    def __pow__(self, e: int) -> "ThetaTaylor":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = ThetaTaylor.constant(self.coeffs[0].one(), self.order)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, ThetaTaylor) and self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"ThetaTaylor({[str(c) for c in self.coeffs]}, order={self.order})"


class TPoly:
    """Polynomial in ``t`` with coefficients in ``K`` (lowest degree first)."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Sequence[Frac | PolyA | int], p: int):
        cs = []
        for c in coeffs:
            if isinstance(c, Frac):
                cs.append(c)
            elif isinstance(c, PolyA):
                cs.append(Frac(c))
            else:
                cs.append(Frac.from_int(c, p))
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.p = p

    @classmethod
    def t_minus(cls, c: Frac | PolyA | int, p: int) -> "TPoly":
        """``t - c``."""
        neg = -(c if isinstance(c, Frac) else Frac(c) if isinstance(c, PolyA) else Frac.from_int(c, p))
        return cls([neg, 1], p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        zero = Frac.from_int(0, self.p)
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return TPoly([x + y for x, y in zip(a, b)], self.p)

    def __neg__(self) -> "TPoly":
        return TPoly([-c for c in self.coeffs], self.p)

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TPoly):
            c = other if isinstance(other, Frac) else Frac(other) if isinstance(other, PolyA) else Frac.from_int(other, self.p)
            return TPoly([x * c for x in self.coeffs], self.p)
        if self.is_zero() or other.is_zero():
            return TPoly([], self.p)
        out = [Frac.from_int(0, self.p)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return TPoly(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TPoly":
        result = TPoly([1], self.p)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def taylor(self, order: int) -> ThetaTaylor:
        """Coefficients of ``f(theta + s)``: ``sum_m c_m binom(m, j) theta^(m-j)``."""
        p = self.p
        theta = PolyA.theta(p)
        out = []
        for j in range(order + 1):
            acc = Frac.from_int(0, p)
            for m in range(j, len(self.coeffs)):
                b = lucas_binomial(m, j, p)
                if b and not self.coeffs[m].is_zero():
                    acc = acc + self.coeffs[m] * Frac(theta ** (m - j)) * b
            out.append(acc)
        if not out:
            out = [Frac.from_int(0, p)]
        return ThetaTaylor(out, order)

    def __repr__(self) -> str:
        return "TPoly(" + ", ".join(str(c) for c in self.coeffs) + ")"


def taylor_of_fraction(num: TPoly, den: TPoly, order: int) -> ThetaTaylor:
    """Taylor coefficients of ``num/den`` around ``t = theta`` up to ``order``."""
    d = den.taylor(order)
    if d.coeffs[0].is_zero():
        raise ZeroDivisionError("non-unit denominator: den(theta) = 0")
    return num.taylor(order) * d.inverse()
