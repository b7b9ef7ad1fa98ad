"""Carlitz brackets, factorial towers, polylogarithms and truncated zeta sums.

``L_i`` carries the sign ``(-1)^i`` everywhere in this package, so
``log_C(z) = sum z^(q^i) / L_i`` and ``sum_{deg a = d} 1/a = 1/L_d``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .brackets import BracketLaurent, bracket_series
from .laurent import LaurentSeries, batch_inverse, batch_mul
from .poly import PolyA
from .residue import all_monic


@lru_cache(maxsize=None)
def bracket(i: int, q: int) -> PolyA:
    """``[i] = theta^(q^i) - theta`` for ``i >= 1`` and ``[0] = 1``."""
    if i < 0:
        raise ValueError("bracket index must be nonnegative")
    if i == 0:
        return PolyA.one(q)
    return PolyA.monomial(q**i, q) - PolyA.theta(q)


@lru_cache(maxsize=None)
def carlitz_D(i: int, q: int) -> PolyA:
    if i == 0:
        return PolyA.one(q)
    return bracket(i, q) * carlitz_D(i - 1, q) ** q


@lru_cache(maxsize=None)
def carlitz_L(i: int, q: int) -> PolyA:
    """Signed ``L_i = (-1)^i [i][i-1]...[1]``."""
    if i == 0:
        return PolyA.one(q)
    return -(bracket(i, q) * carlitz_L(i - 1, q))


def deg_L(i: int, q: int) -> int:
    return (q ** (i + 1) - q) // (q - 1)


def carlitz_gamma(n: int, q: int) -> PolyA:
    """``Gamma_(n+1) = prod_j D_j^(n_j)`` over the base-q digits of ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    out = PolyA.one(q)
    j = 0
    while n:
        n, digit = divmod(n, q)
        if digit:
            out = out * carlitz_D(j, q) ** digit
        j += 1
    return out


def inv_L_bracket(i: int, q: int, power: int = 1) -> BracketLaurent:
    """``L_i^(-power)`` in the bracket ring."""
    out = BracketLaurent.const((-1) ** (i * power), q)
    for k in range(1, i + 1):
        out = out * BracketLaurent.bracket(k, q, -power)
    return out


@lru_cache(maxsize=4096)
def inv_L_series(i: int, power: int, prec: int, q: int) -> LaurentSeries:
    """``L_i^(-power)`` modulo ``u^prec``, built from sparse bracket factors."""
    v = power * deg_L(i, q)
    if v >= prec:
        return LaurentSeries.zero(q, prec)
    out = LaurentSeries(0, [(-1) ** (i * power)], None, q)
    for k in range(1, i + 1):
        own = power * q**k
        out = out * bracket_series(k, -power, prec - v + own, q)
    return out.with_prec(prec)


def polylog_eval(n: int, z: LaurentSeries, prec: int) -> LaurentSeries:
    """``log_n(z) = sum_i z^(q^i) / L_i^n`` modulo ``u^prec``."""
    q = z.p
    if n < 1:
        raise ValueError("polylogarithm index must be positive")
    if z.is_zero():
        return LaurentSeries.zero(q, prec)
    v = z.lead
    # term valuations q^i (v + nq/(q-1)) - nq/(q-1) must increase
    if v * (q - 1) <= -n * q:
        raise ValueError(f"polylogarithm diverges: v(z) = {v} <= -{n}q/(q-1)")
    total = LaurentSeries.zero(q, prec)
    i = 0
    while True:
        term_val = q**i * v + n * deg_L(i, q)
        if term_val >= prec:
            break
        zi = z.frobenius(i)
        inv = inv_L_series(i, n, prec - q**i * v, q)
        total = total + (zi * inv).with_prec(prec)
        i += 1
    return total


def _degree_block(s: int, d: int, prec: int, q: int) -> np.ndarray:
    """Coefficients of ``sum_{deg a = d, monic} a^(-s)`` at ``u^0 .. u^(prec-1)``."""
    out = np.zeros(max(prec, 0), dtype=np.int64)
    shift = d * s
    n = prec - shift
    if n <= 0:
        return out
    # a = theta^d (1 + c_(d-1) u + ... + c_0 u^d), reversed rows start with 1
    W = all_monic(q, d)
    rows = np.zeros((W.shape[0], n), dtype=np.int64)
    rows[:, 0] = 1
    for k in range(1, min(d, n - 1) + 1):
        rows[:, k] = W[:, d - k]
    inv = batch_inverse(rows, q)
    acc = inv
    for _ in range(s - 1):
        acc = batch_mul(acc, inv, q)
    out[shift:] = acc.sum(axis=0) % q
    return out


def zeta_block(s: int, d: int, prec: int, q: int) -> LaurentSeries:
    """``sum_{deg a = d} a^(-s)`` over monic ``a``, modulo ``u^prec``."""
    return LaurentSeries(0, _degree_block(s, d, prec, q), prec, q)


def zeta_truncated(s: int, maxdeg: int, prec: int, q: int) -> LaurentSeries:
    """``sum_{a monic, deg a <= maxdeg} a^(-s)`` modulo ``u^prec``."""
    if s < 1:
        raise ValueError("s must be positive")
    acc = np.zeros(prec, dtype=np.int64)
    for d in range(0, maxdeg + 1):
        acc += _degree_block(s, d, prec, q)
    return LaurentSeries(0, acc % q, prec, q)
