"""Truncated Laurent series in ``u = 1/theta`` (elements of ``K_inf``).

Precision is absolute: a series with ``prec = P`` is known modulo ``u^P``.
``prec = None`` marks an exact series with finitely many terms (the image of
a polynomial, or of a fraction whose denominator is a monomial).

Precision rules:

* sum: minimum of the operand precisions;
* product: ``min(P_f + v(g), P_g + v(f))``;
* inverse of ``f`` with valuation ``v``: ``P_f - 2v`` (so a unit keeps ``P_f``);
* ``d_theta^j``: the coefficient of ``theta^(k-j)`` is known exactly when the
  coefficient of ``theta^k`` was stored, so ``P`` becomes ``P + j``.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .fields import field, lucas_binomial
from .poly import Frac, PolyA


def _series_inverse(c: np.ndarray, n: int, p: int) -> np.ndarray:
    """First ``n`` coefficients of ``1/c`` for a power series with ``c[0] != 0``."""
    inv0 = field(p).inv(int(c[0]))
    out = np.zeros(n, dtype=np.int64)
    if n == 0:
        return out
    out[0] = inv0
    m = min(len(c), n)
    tail = c[1:m]
    nz = np.flatnonzero(tail)
    if len(nz) <= 8:
        # sparse recurrence: out[k] = -inv0 * sum_j c[j] out[k-j]
        idx = nz + 1
        vals = tail[nz]
        for k in range(1, n):
            s = 0
            for j, cj in zip(idx, vals):
                if j > k:
                    break
                s += int(cj) * int(out[k - j])
            out[k] = (-s * inv0) % p
        return out
    for k in range(1, n):
        hi = min(k, m - 1)
        s = int(np.dot(c[1 : hi + 1], out[k - hi : k][::-1]))
        out[k] = (-s * inv0) % p
    return out


class LaurentSeries:
    """``sum_{e >= lead} c_e u^e + O(u^prec)``."""

    __slots__ = ("p", "lead", "c", "prec")

    def __init__(self, lead: int, coeffs: Sequence[int] | np.ndarray, prec: Optional[int], p: int):
        arr = np.mod(np.asarray(coeffs, dtype=np.int64), p)
        if prec is not None:
            arr = arr[: max(0, prec - lead)]
        nz = np.flatnonzero(arr)
        if nz.size == 0:
            arr = arr[:0]
            lead = prec if prec is not None else 0
        else:
            arr = arr[nz[0] : nz[-1] + 1] if prec is None else arr[nz[0] :]
            lead = lead + int(nz[0])
        if prec is not None and lead > prec:
            lead = prec
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.p = p
        self.lead = lead
        self.c = arr
        self.prec = prec

    # constructors
    @classmethod
    def zero(cls, p: int, prec: Optional[int] = None) -> "LaurentSeries":
        return cls(0, [], prec, p)

    @classmethod
    def one(cls, p: int, prec: Optional[int] = None) -> "LaurentSeries":
        return cls(0, [1], prec, p)

    @classmethod
    def from_poly(cls, f: PolyA, prec: Optional[int] = None) -> "LaurentSeries":
        """Image of ``f`` in ``K_inf``; ``theta^k = u^(-k)``."""
        if f.is_zero():
            return cls.zero(f.p, prec)
        return cls(-f.degree, f.c[::-1], prec, f.p)

    @classmethod
    def from_fraction(cls, num: PolyA, den: PolyA, prec: int) -> "LaurentSeries":
        return laurent_from_fraction(num, den, prec)

    # structure
    @property
    def q(self) -> int:
        return self.p

    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def valuation(self) -> float:
        """``v_inf``; for a series that vanishes to its precision this is ``prec``
        (or infinity when exact)."""
        if self.is_zero():
            return float("inf") if self.prec is None else self.prec
        return self.lead

    def coeff(self, e: int) -> int:
        if self.prec is not None and e >= self.prec:
            raise ValueError(f"coefficient of u^{e} is beyond precision {self.prec}")
        k = e - self.lead
        return int(self.c[k]) if 0 <= k < len(self.c) else 0

    def coeff_window(self, start: int, stop: int) -> np.ndarray:
        """Coefficients of ``u^start .. u^(stop-1)`` (zeros outside storage)."""
        out = np.zeros(max(0, stop - start), dtype=np.int64)
        if len(self.c) == 0 or stop <= start:
            return out
        lo = max(start, self.lead)
        hi = min(stop, self.lead + len(self.c))
        if hi > lo:
            out[lo - start : hi - start] = self.c[lo - self.lead : hi - self.lead]
        return out

    def with_prec(self, prec: int) -> "LaurentSeries":
        """Truncate to ``prec`` (never raises precision)."""
        if self.prec is not None:
            prec = min(prec, self.prec)
        return LaurentSeries(self.lead, self.c, prec, self.p)

    def _prec_bound(self) -> int:
        if self.prec is not None:
            return self.prec
        return self.lead + len(self.c)

    # arithmetic
    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentSeries(0, [int(other)], None, self.p)
        if isinstance(other, PolyA):
            return LaurentSeries.from_poly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        precs = [x for x in (self.prec, other.prec) if x is not None]
        prec = min(precs) if precs else None
        if self.is_zero() and other.is_zero():
            return LaurentSeries.zero(self.p, prec)
        parts = [s for s in (self, other) if not s.is_zero()]
        lo = min(s.lead for s in parts)
        hi = max(s.lead + len(s.c) for s in parts)
        if prec is not None:
            hi = min(hi, prec)
        if hi <= lo:
            return LaurentSeries.zero(self.p, prec)
        acc = self.coeff_window(lo, hi) + other.coeff_window(lo, hi)
        return LaurentSeries(lo, acc, prec, self.p)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lead, -self.c, self.prec, self.p)

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

    def scale(self, c: int) -> "LaurentSeries":
        return LaurentSeries(self.lead, self.c * (c % self.p), self.prec, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        vf = self.valuation()
        vg = other.valuation()
        cands = []
        if self.prec is not None:
            cands.append(self.prec + vg)
        if other.prec is not None:
            cands.append(other.prec + vf)
        cands = [c for c in cands if c != float("inf")]
        prec = int(min(cands)) if cands else None
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(p, prec)
        lead = self.lead + other.lead
        a, b = self.c, other.c
        if prec is not None:
            n = prec - lead
            if n <= 0:
                return LaurentSeries.zero(p, prec)
            a, b = a[:n], b[:n]
        prod = _poly_mul_mod(a, b, p)
        return LaurentSeries(lead, prod, prec, p)

    __rmul__ = __mul__

    def inverse(self, prec: Optional[int] = None) -> "LaurentSeries":
        """``1/f``.  An exact non-monomial input needs an explicit ``prec``."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of a series that vanishes to its precision")
        v = self.lead
        if self.prec is None:
            if len(self.c) == 1:
                return LaurentSeries(-v, [field(self.p).inv(int(self.c[0]))], None, self.p)
            if prec is None:
                raise ValueError("inverting an exact series needs a target precision")
            out_prec = prec
        else:
            out_prec = self.prec - 2 * v
            if prec is not None:
                out_prec = min(out_prec, prec)
        n = out_prec + v
        if n <= 0:
            return LaurentSeries.zero(self.p, out_prec)
        inv = _series_inverse(self.c[:n], n, self.p)
        return LaurentSeries(-v, inv, out_prec, self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.prec is None and len(other.c) != 1:
            if self.prec is None:
                raise ValueError("exact division by a non-monomial needs a precision")
            if self.is_zero():
                return LaurentSeries.zero(self.p, self.prec - other.lead)
            return self * other.inverse(prec=self.prec - other.lead - self.lead)
        return self * other.inverse()

    def __pow__(self, e: int) -> "LaurentSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, k: int = 1) -> "LaurentSeries":
        """``f^(p^k)``: over ``F_p`` this substitutes ``u -> u^(p^k)``."""
        if k == 0:
            return self
        step = self.p**k
        prec = None if self.prec is None else self.prec * step
        if self.is_zero():
            return LaurentSeries.zero(self.p, prec)
        out = np.zeros((len(self.c) - 1) * step + 1, dtype=np.int64)
        out[::step] = self.c
        return LaurentSeries(self.lead * step, out, prec, self.p)

    def hyperderiv(self, j: int) -> "LaurentSeries":
        """``d_theta^j``: the term ``c u^e = c theta^(-e)`` maps to
        ``c binom(-e, j) u^(e + j)``."""
        if j == 0:
            return self
        prec = None if self.prec is None else self.prec + j
        if self.is_zero():
            return LaurentSeries.zero(self.p, prec)
        exps = range(self.lead, self.lead + len(self.c))
        b = np.array([lucas_binomial(-e, j, self.p) for e in exps], dtype=np.int64)
        return LaurentSeries(self.lead + j, self.c * b, prec, self.p)

    # comparison and output
    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return (self.p == other.p and self.prec == other.prec and self.lead == other.lead
                and np.array_equal(self.c, other.c))

    def __hash__(self) -> int:
        return hash((self.p, self.prec, self.lead, self.c.tobytes()))

    def agrees_with(self, other: "LaurentSeries", upto: int) -> bool:
        """True when both series have the same coefficients below ``u^upto``."""
        return agreement_order(self, other, start=min(self.lead, other.lead)) >= upto

    def to_json(self) -> dict:
        return {"lead": self.lead, "coeffs": [int(x) for x in self.c], "prec": self.prec, "q": self.p}

    @classmethod
    def from_json(cls, data: dict) -> "LaurentSeries":
        return cls(data["lead"], data["coeffs"], data["prec"], data["q"])

    def format(self, max_terms: Optional[int] = None) -> str:
        F = field(self.p)
        pieces = []
        count = 0
        for k, ck in enumerate(self.c):
            ck = F.signed(int(ck))
            if ck == 0:
                continue
            if max_terms is not None and count >= max_terms:
                break
            count += 1
            e = self.lead + k
            mag = abs(ck)
            if e == 0:
                body = str(mag)
            else:
                mono = "u" if e == 1 else f"u^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            pieces.append(("-" if ck < 0 else "+", body))
        if self.prec is not None:
            pieces.append(("+", f"O(u^{self.prec})"))
        if not pieces:
            return "0"
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentSeries({self.format()}, p={self.p})"


def _poly_mul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    nza = np.flatnonzero(a)
    nzb = np.flatnonzero(b)
    if len(nzb) > len(nza):
        a, b, nza, nzb = b, a, nzb, nza
    if len(nzb) <= 8:
        out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for k in nzb:
            out[k : k + len(a)] += a * b[k]
        return out % p
    return np.convolve(a, b) % p


def laurent_from_fraction(num: PolyA, den: PolyA, prec: int) -> LaurentSeries:
    """u-expansion of ``num/den`` modulo ``u^prec``; exact when ``den`` is a
    constant times a power of ``theta``."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    p = num.p
    if num.is_zero():
        return LaurentSeries.zero(p, prec)
    nz = np.flatnonzero(den.c)
    if len(nz) == 1:
        k = int(nz[0])
        inv = field(p).inv(den.lead)
        return LaurentSeries(den.degree - num.degree, num.c[::-1] * inv, None, p)
    lead = den.degree - num.degree
    n = prec - lead
    if n <= 0:
        return LaurentSeries.zero(p, prec)
    rev_den = den.c[::-1]
    inv = _series_inverse(rev_den[:n], n, p)
    body = _poly_mul_mod(num.c[::-1][:n], inv, p)[:n]
    return LaurentSeries(lead, body, prec, p)


def laurent_from_frac(x: Frac, prec: int) -> LaurentSeries:
    return laurent_from_fraction(x.num, x.den, prec)


def agreement_order(f: LaurentSeries, g: LaurentSeries, start: int = 0) -> int:
    """First exponent ``e >= start`` where ``f`` and ``g`` differ, capped by the
    smaller precision.  With ``start = 0`` and unit series this is the number
    of matched leading coefficients."""
    bounds = [s.prec for s in (f, g) if s.prec is not None]
    stop = min(bounds) if bounds else max(f._prec_bound(), g._prec_bound())
    if stop <= start:
        return stop
    diff = (f.coeff_window(start, stop) - g.coeff_window(start, stop)) % f.p
    nz = np.flatnonzero(diff)
    return start + int(nz[0]) if nz.size else stop


def hyperderiv_laurent(f: LaurentSeries, j: int) -> LaurentSeries:
    return f.hyperderiv(j)


# batched power series (rows are independent series in u, all of length n)

def batch_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[1]
    out = np.zeros_like(a)
    for k in range(n):
        if not b[:, k].any():
            continue
        out[:, k:] += a[:, : n - k] * b[:, k : k + 1]
        if k % 32 == 31:
            out %= p
    return out % p


def batch_inverse(a: np.ndarray, p: int) -> np.ndarray:
    """Row-wise inverse of power series with ``a[:, 0] == 1``."""
    B, n = a.shape
    out = np.zeros_like(a)
    out[:, 0] = 1
    for k in range(1, n):
        s = np.einsum("ij,ij->i", a[:, 1 : k + 1], out[:, k - 1 :: -1][:, :k])
        out[:, k] = (-s) % p
    return out


def batch_product(rows: np.ndarray, p: int) -> np.ndarray:
    """Product of all rows (each a power series of length n) modulo ``u^n``."""
    if rows.shape[0] == 0:
        out = np.zeros(rows.shape[1], dtype=np.int64)
        out[0] = 1
        return out
    while rows.shape[0] > 1:
        if rows.shape[0] % 2:
            pad = np.zeros((1, rows.shape[1]), dtype=np.int64)
            pad[0, 0] = 1
            rows = np.vstack([rows, pad])
        rows = batch_mul(rows[0::2], rows[1::2], p)
    return rows[0]
