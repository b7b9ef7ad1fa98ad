"""Residue fields ``A/wA`` and the enumeration of monic irreducibles.

Residues are coefficient vectors in the basis ``1, theta, ..., theta^(d-1)``.
The batched helpers work on a stack of moduli of one degree ``d``: ``W`` has
shape ``(B, d)`` and holds the non-leading coefficients of each monic ``w``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .linalg import batch_nonsingular
from .poly import PolyA

_CHUNK = 1 << 15


def all_monic(q: int, d: int) -> np.ndarray:
    """Non-leading coefficients of every monic polynomial of degree ``d``,
    shape ``(q^d, d)``, in lexicographic order with the constant coefficient
    varying fastest."""
    idx = np.arange(q**d, dtype=np.int64)
    return np.stack([(idx // q**k) % q for k in range(d)], axis=1) if d else np.zeros((1, 0), dtype=np.int64)


def batch_reduce(prod: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    """Reduce polynomials of length ``L`` modulo the monic moduli ``W``."""
    d = W.shape[1]
    prod = prod.copy()
    for k in range(prod.shape[1] - 1, d - 1, -1):
        c = prod[:, k] % p
        if c.any():
            prod[:, k - d : k] -= c[:, None] * W
        prod[:, k] = 0
        if k % 16 == 0:
            prod %= p
    return prod[:, :d] % p


def batch_mulmod(x: np.ndarray, y: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    d = W.shape[1]
    B = W.shape[0]
    prod = np.zeros((B, 2 * d - 1), dtype=np.int64)
    for j in range(d):
        yj = y[:, j]
        if yj.any():
            prod[:, j : j + d] += x * yj[:, None]
    return batch_reduce(prod % p, W, p)


def batch_powmod(x: np.ndarray, e: int, W: np.ndarray, p: int) -> np.ndarray:
    B, d = W.shape
    result = np.zeros((B, d), dtype=np.int64)
    result[:, 0] = 1
    base = x
    while e:
        if e & 1:
            result = batch_mulmod(result, base, W, p)
        e >>= 1
        if e:
            base = batch_mulmod(base, base, W, p)
    return result


def batch_theta(W: np.ndarray, p: int) -> np.ndarray:
    """The class of theta modulo each ``w``."""
    B, d = W.shape
    if d == 1:
        return (-W) % p
    out = np.zeros((B, d), dtype=np.int64)
    out[:, 1] = 1
    return out


def batch_mul_matrix(g: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    """Matrices (columns ``g theta^j mod w``) of multiplication by ``g``."""
    B, d = W.shape
    cols = [g % p]
    for _ in range(1, d):
        prev = cols[-1]
        shifted = np.zeros((B, d + 1), dtype=np.int64)
        shifted[:, 1:] = prev
        cols.append(batch_reduce(shifted, W, p))
    return np.stack(cols, axis=2)


def batch_companion(W: np.ndarray, p: int) -> np.ndarray:
    """Matrix of multiplication by theta on ``A/wA``."""
    B, d = W.shape
    C = np.zeros((B, d, d), dtype=np.int64)
    for j in range(d - 1):
        C[:, j + 1, j] = 1
    C[:, :, d - 1] = (-W) % p
    return C


def batch_frobenius(W: np.ndarray, p: int) -> np.ndarray:
    """Matrix of ``x -> x^p`` on ``A/wA`` (columns ``theta^(jp) mod w``)."""
    B, d = W.shape
    t = batch_theta(W, p)
    tp = batch_powmod(t, p, W, p)
    cols = [np.zeros((B, d), dtype=np.int64)]
    cols[0][:, 0] = 1
    for _ in range(1, d):
        cols.append(batch_mulmod(cols[-1], tp, W, p))
    return np.stack(cols, axis=2)


def _prime_divisors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _irreducible_mask(W: np.ndarray, p: int) -> np.ndarray:
    """Distinct-degree test: ``w | theta^(p^d) - theta`` and
    ``gcd(w, theta^(p^(d/l)) - theta) = 1`` for every prime ``l | d``.
    The gcd condition is checked as invertibility of multiplication by
    ``theta^(p^(d/l)) - theta`` on ``A/wA``."""
    B, d = W.shape
    t = batch_theta(W, p)
    powers = {0: t}
    x = t
    for k in range(1, d + 1):
        x = batch_powmod(x, p, W, p)
        powers[k] = x
    mask = np.all(powers[d] == t, axis=1)
    for ell in _prime_divisors(d):
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            break
        g = (powers[d // ell][idx] - t[idx]) % p
        ok = batch_nonsingular(batch_mul_matrix(g, W[idx], p), p)
        mask[idx[~ok]] = False
    return mask


def _reducible_sieve(q: int, d: int) -> np.ndarray:
    marked = np.zeros(q**d, dtype=bool)
    weights = q ** np.arange(d, dtype=np.int64)
    for k in range(1, d // 2 + 1):
        G = all_monic(q, d - k)
        G = np.concatenate([G, np.ones((G.shape[0], 1), dtype=np.int64)], axis=1)
        for f in irreducible_table(q, k):
            f = list(f) + [1]
            prod = np.zeros((G.shape[0], d + 1), dtype=np.int64)
            for i, fi in enumerate(f):
                if fi:
                    prod[:, i : i + d - k + 1] += fi * G
            marked[(prod[:, :d] % q) @ weights] = True
    return marked


@lru_cache(maxsize=None)
def irreducible_table(q: int, d: int) -> np.ndarray:
    """Non-leading coefficients of the monic irreducibles of degree ``d``,
    one row each, in the canonical order."""
    if d < 1:
        raise ValueError("degree must be positive")
    cands = all_monic(q, d)
    if d == 1:
        out = cands
    else:
        # sieve out products with a factor of degree <= d/2, then certify
        cands = cands[~_reducible_sieve(q, d)]
        keep = []
        for start in range(0, cands.shape[0], _CHUNK):
            block = cands[start : start + _CHUNK]
            keep.append(block[_irreducible_mask(block, q)])
        out = np.concatenate(keep, axis=0)
    out = np.ascontiguousarray(out)
    out.setflags(write=False)
    return out


def monic_irreducibles(q: int, d: int) -> list[PolyA]:
    """All monic irreducibles of degree ``d`` over F_q, lexicographic with the
    constant coefficient varying fastest."""
    return [PolyA(list(row) + [1], q) for row in irreducible_table(q, d)]


class ResidueField:
    """``A/wA`` for one monic irreducible ``w``."""

    def __init__(self, w: PolyA):
        if not w.is_monic() or w.degree < 1:
            raise ValueError("modulus must be monic of positive degree")
        self.w = w
        self.p = w.p
        self.d = w.degree
        W = np.asarray(w.c[:-1], dtype=np.int64)[None, :]
        self._W = W
        self.companion = batch_companion(W, self.p)[0]
        self.frobenius_matrix = batch_frobenius(W, self.p)[0]

    def reduce(self, f: PolyA) -> np.ndarray:
        r = f % self.w
        out = np.zeros(self.d, dtype=np.int64)
        out[: len(r.c)] = r.c
        return out

    def lift(self, x: np.ndarray) -> PolyA:
        return PolyA(x, self.p)

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return batch_mulmod(x[None, :], y[None, :], self._W, self.p)[0]

    def frob(self, x: np.ndarray, k: int = 1) -> np.ndarray:
        for _ in range(k):
            x = (self.frobenius_matrix @ x) % self.p
        return x
