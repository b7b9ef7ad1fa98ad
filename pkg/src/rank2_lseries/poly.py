"""Dense polynomials in A = F_p[theta] and exact fractions in K = F_p(theta).

Coefficients live in a read-only ``int64`` numpy array, lowest degree first.
Multiplication switches to a shift-and-add loop when one factor is sparse,
which is the common case for Carlitz brackets ``theta^(q^i) - theta``.
"""

from __future__ import annotations

import re
from typing import Iterable, Union

import numpy as np

from .fields import field, lucas_binomial

_SPARSE_LIMIT = 8


def _trim(arr: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return arr[:0]
    return arr[: nz[-1] + 1]


class PolyA:
    """Element of ``F_p[theta]``.  Immutable; ``degree`` of zero is -1."""

    __slots__ = ("p", "c", "_hash")

    def __init__(self, coeffs: Union[Iterable[int], np.ndarray], p: int):
        arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.int64)
        arr = _trim(np.mod(arr, p))
        arr.setflags(write=False)
        self.p = p
        self.c = arr
        self._hash = None

    @classmethod
    def _raw(cls, arr: np.ndarray, p: int) -> "PolyA":
        # arr must already be reduced mod p
        obj = cls.__new__(cls)
        arr = _trim(arr)
        arr.setflags(write=False)
        obj.p = p
        obj.c = arr
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, p: int) -> "PolyA":
        return cls((), p)

    @classmethod
    def one(cls, p: int) -> "PolyA":
        return cls((1,), p)

    @classmethod
    def const(cls, c: int, p: int) -> "PolyA":
        return cls((c,), p)

    @classmethod
    def theta(cls, p: int) -> "PolyA":
        return cls((0, 1), p)

    @classmethod
    def monomial(cls, k: int, p: int, c: int = 1) -> "PolyA":
        arr = np.zeros(k + 1, dtype=np.int64)
        arr[k] = c % p
        return cls._raw(arr, p)

    @classmethod
    def parse(cls, text: str, p: int) -> "PolyA":
        """Read the canonical text form, e.g. ``T^3+2*T+1``; also accepts
        plain integers and ``-`` signs."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial string")
        if not re.fullmatch(r"[0-9T^*+\-]+", s):
            raise ValueError(f"cannot parse polynomial {text!r}")
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"[+-][^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        coeffs: dict[int, int] = {}
        for term in terms:
            sign = -1 if term[0] == "-" else 1
            body = term[1:]
            m = re.fullmatch(r"(?:(\d+)\*?)?(T(?:\^(\d+))?)?", body)
            if m is None or (m.group(1) is None and m.group(2) is None):
                raise ValueError(f"cannot parse term {term!r} in {text!r}")
            c = int(m.group(1)) if m.group(1) is not None else 1
            k = 0
            if m.group(2) is not None:
                k = int(m.group(3)) if m.group(3) is not None else 1
            coeffs[k] = coeffs.get(k, 0) + sign * c
        top = max(coeffs)
        arr = [0] * (top + 1)
        for k, c in coeffs.items():
            arr[k] = c
        return cls(arr, p)

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def constant_value(self) -> int:
        if len(self.c) > 1:
            raise ValueError("not a constant polynomial")
        return int(self.c[0]) if len(self.c) else 0

    @property
    def lead(self) -> int:
        return int(self.c[-1]) if len(self.c) else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def monic(self) -> "PolyA":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic associate")
        return self.scale(field(self.p).inv(self.lead))

    def coeffs(self) -> list[int]:
        return [int(x) for x in self.c]

    def coeff(self, k: int) -> int:
        return int(self.c[k]) if 0 <= k < len(self.c) else 0

    def nnz(self) -> int:
        return int(np.count_nonzero(self.c))

    # ring operations
    def _coerce(self, other) -> "PolyA":
        if isinstance(other, PolyA):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, (int, np.integer)):
            return PolyA.const(int(other), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return PolyA._raw(out % self.p, self.p)

    __radd__ = __add__

    def __neg__(self) -> "PolyA":
        return PolyA._raw((-self.c) % self.p, self.p)

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

    def scale(self, c: int) -> "PolyA":
        return PolyA._raw((self.c * (c % self.p)) % self.p, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) == 0 or len(b) == 0:
            return PolyA.zero(self.p)
        if len(a) == 1:
            return other.scale(int(a[0]))
        if len(b) == 1:
            return self.scale(int(b[0]))
        p = self.p
        nza, nzb = np.flatnonzero(a), np.flatnonzero(b)
        if len(nzb) > len(nza):
            a, b, nza, nzb = b, a, nzb, nza
        if len(nzb) <= _SPARSE_LIMIT:
            out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
            for k in nzb:
                out[k : k + len(a)] += a * b[k]
            return PolyA._raw(out % p, p)
        return PolyA._raw(np.convolve(a, b) % p, p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyA":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = PolyA.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "PolyA"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        if self.degree < other.degree:
            return PolyA.zero(p), self
        inv_lead = field(p).inv(other.lead)
        r = self.c.copy()
        b = other.c
        m = len(b) - 1
        quo = np.zeros(len(r) - m, dtype=np.int64)
        nzb = np.flatnonzero(b[:m])
        sparse = len(nzb) <= _SPARSE_LIMIT
        for k in range(len(r) - 1, m - 1, -1):
            t = r[k] % p
            if t == 0:
                continue
            f = (t * inv_lead) % p
            quo[k - m] = f
            if sparse:
                for j in nzb:
                    r[k - m + j] -= f * b[j]
            else:
                r[k - m : k] -= f * b[:m]
                if (k & 63) == 0:
                    r %= p
            r[k] = 0
        return PolyA._raw(quo % p, p), PolyA._raw(r[:m] % p, p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "PolyA") -> "PolyA":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = PolyA.const(int(other), self.p)
        if not isinstance(other, PolyA):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.c, other.c)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.c.tobytes()))
        return self._hash

    # structure
    def frobenius(self, k: int = 1) -> "PolyA":
        """``f^(p^k)``; over a prime field this is ``f(theta^(p^k))``."""
        if k == 0 or len(self.c) <= 1:
            return self
        step = self.p**k
        out = np.zeros((len(self.c) - 1) * step + 1, dtype=np.int64)
        out[::step] = self.c
        return PolyA._raw(out, self.p)

    def frobenius_root(self) -> "PolyA":
        """Inverse of :meth:`frobenius` for polynomials in ``theta^p``."""
        p = self.p
        if len(self.c) and np.any(self.c[np.arange(len(self.c)) % p != 0]):
            raise ValueError("polynomial is not a p-th power")
        return PolyA._raw(self.c[::p].copy(), p)

    def hyperderiv(self, j: int) -> "PolyA":
        """``sum c_k binom(k, j) theta^(k-j)``."""
        if j == 0:
            return self
        n = len(self.c)
        if n <= j:
            return PolyA.zero(self.p)
        p = self.p
        binoms = np.array([lucas_binomial(k, j, p) for k in range(j, n)], dtype=np.int64)
        return PolyA._raw((self.c[j:] * binoms) % p, p)

    def __call__(self, x: int) -> int:
        acc = 0
        for ck in reversed(self.coeffs()):
            acc = (acc * x + ck) % self.p
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            ck = int(self.c[k])
            if ck == 0:
                continue
            if k == 0:
                parts.append(str(ck))
            else:
                mono = "T" if k == 1 else f"T^{k}"
                parts.append(mono if ck == 1 else f"{ck}*{mono}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"PolyA({self}, p={self.p})"


def poly_gcd(f: PolyA, g: PolyA) -> PolyA:
    """Monic gcd (zero only if both inputs are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f if f.is_zero() else f.monic()


def hyperderiv_poly(f: PolyA, j: int) -> PolyA:
    return f.hyperderiv(j)


class Frac:
    """Exact element of ``K = F_p(theta)``: reduced, with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[PolyA, int], den: Union[PolyA, int, None] = None, p: int | None = None,
                 _reduced: bool = False):
        if not isinstance(num, PolyA):
            num = PolyA.const(num, p if p is not None else den.p)
        if den is None:
            den = PolyA.one(num.p)
        elif not isinstance(den, PolyA):
            den = PolyA.const(den, num.p)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = PolyA.one(num.p)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num // g
                    den = den // g
                inv = field(num.p).inv(den.lead)
                if inv != 1:
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def p(self) -> int:
        return self.num.p

    @classmethod
    def from_int(cls, c: int, p: int) -> "Frac":
        return cls(PolyA.const(c, p), PolyA.one(p), _reduced=True)

    def zero(self) -> "Frac":
        return Frac.from_int(0, self.p)

    def one(self) -> "Frac":
        return Frac.from_int(1, self.p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other) -> "Frac":
        if isinstance(other, Frac):
            return other
        if isinstance(other, PolyA):
            return Frac(other, PolyA.one(other.p), _reduced=True)
        if isinstance(other, (int, np.integer)):
            return Frac.from_int(int(other), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den, _reduced=True)

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
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.zero()
        # cross-cancel before multiplying to keep sizes down
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = self.num // g1, other.den // g1
        n2, d1 = other.num // g2, self.den // g2
        return Frac(n1 * n2, d1 * d2, _reduced=True)._normalize_sign()

    __rmul__ = __mul__

    def _normalize_sign(self) -> "Frac":
        inv = field(self.p).inv(self.den.lead)
        if inv == 1:
            return self
        return Frac(self.num.scale(inv), self.den.scale(inv), _reduced=True)

    def inverse(self) -> "Frac":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Frac(self.den, self.num, _reduced=True)._normalize_sign()

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> "Frac":
        if e < 0:
            return self.inverse() ** (-e)
        return Frac(self.num**e, self.den**e, _reduced=True)

    def frobenius(self, k: int = 1) -> "Frac":
        return Frac(self.num.frobenius(k), self.den.frobenius(k), _reduced=True)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def valuation(self) -> float:
        """``v_inf``: degree of the denominator minus degree of the numerator."""
        if self.is_zero():
            return float("inf")
        return self.den.degree - self.num.degree

    def hyperderiv(self, j: int) -> "Frac":
        """``d_theta^j`` of a fraction, read off as a Taylor coefficient."""
        from .taylor import ThetaTaylor

        if self.den.degree == 0:
            return Frac(self.num.hyperderiv(j), self.den, _reduced=True)._normalize_sign()
        num = ThetaTaylor.from_poly_in_theta(self.num, j)
        den = ThetaTaylor.from_poly_in_theta(self.den, j)
        return (num * den.inverse()).coeffs[j]

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"Frac({self}, p={self.p})"
