"""Linear algebra over F_p on stacks of small matrices.

Every routine takes an array of shape ``(B, N, N)`` and treats the ``B``
matrices independently, so one numpy call handles a whole degree's worth of
primes at once.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fields import field
from .poly import PolyA


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """``table[x] = x^-1 mod p`` with ``table[0] = 0``."""
    F = field(p)
    t = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        t[x] = F.inv(x)
    t.setflags(write=False)
    return t


def _swap_rows_cols(H: np.ndarray, a: int, piv: np.ndarray) -> None:
    b = np.arange(H.shape[0])
    ra = H[b, a, :].copy()
    H[b, a, :] = H[b, piv, :]
    H[b, piv, :] = ra
    ca = H[b, :, a].copy()
    H[b, :, a] = H[b, :, piv]
    H[b, :, piv] = ca


def batch_hessenberg(M: np.ndarray, p: int) -> np.ndarray:
    """Upper Hessenberg forms similar to each input matrix."""
    H = np.array(M, dtype=np.int64) % p
    B, N, _ = H.shape
    inv = inverse_table(p)
    for k in range(N - 2):
        nz = H[:, k + 1 :, k] != 0
        piv = np.argmax(nz, axis=1) + k + 1
        _swap_rows_cols(H, k + 1, piv)
        f = (H[:, k + 2 :, k] * inv[H[:, k + 1, k]][:, None]) % p
        if not f.any():
            continue
        H[:, k + 2 :, :] = (H[:, k + 2 :, :] - f[:, :, None] * H[:, k + 1, None, :]) % p
        H[:, :, k + 1] = (H[:, :, k + 1] + np.einsum("bij,bj->bi", H[:, :, k + 2 :], f)) % p
    return H


def batch_charpoly(M: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomials ``det(X - M)``, coefficients lowest first.

    Returns shape ``(B, N+1)``; every row is monic of degree ``N``.
    """
    M = np.asarray(M, dtype=np.int64)
    B, N, _ = M.shape
    H = batch_hessenberg(M, p)
    polys = np.zeros((B, N + 1, N + 1), dtype=np.int64)
    polys[:, 0, 0] = 1
    for m in range(1, N + 1):
        prev = polys[:, m - 1, :]
        cur = np.zeros((B, N + 1), dtype=np.int64)
        cur[:, 1:] = prev[:, :-1]
        cur -= H[:, m - 1, m - 1][:, None] * prev
        prod = np.ones(B, dtype=np.int64)
        for i in range(m - 1, 0, -1):
            prod = (prod * H[:, i, i - 1]) % p
            coef = (H[:, i - 1, m - 1] * prod) % p
            if coef.any():
                cur -= coef[:, None] * polys[:, i - 1, :]
        polys[:, m, :] = cur % p
    return polys[:, N, :]


def batch_nonsingular(M: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask: which matrices in the stack are invertible."""
    A = np.array(M, dtype=np.int64) % p
    B, N, _ = A.shape
    inv = inverse_table(p)
    ok = np.ones(B, dtype=bool)
    b = np.arange(B)
    for k in range(N):
        nz = A[:, k:, k] != 0
        has = nz.any(axis=1)
        ok &= has
        piv = np.argmax(nz, axis=1) + k
        rk = A[b, k, :].copy()
        A[b, k, :] = A[b, piv, :]
        A[b, piv, :] = rk
        f = (A[:, k + 1 :, k] * inv[A[:, k, k]][:, None]) % p
        A[:, k + 1 :, :] = (A[:, k + 1 :, :] - f[:, :, None] * A[:, k, None, :]) % p
    return ok


def charpoly(T, p: int) -> PolyA:
    """Characteristic polynomial of one matrix, as an element of ``A``
    (the variable renamed to theta)."""
    T = np.asarray(T, dtype=np.int64)
    if T.size == 0:
        return PolyA.one(p)
    return PolyA(batch_charpoly(T[None, :, :], p)[0], p)


def fitting_generator(T, p: int) -> PolyA:
    """``|M|_A`` for the F_p-space ``M`` on which theta acts through ``T``."""
    return charpoly(T, p)
