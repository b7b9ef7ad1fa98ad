"""Euler products over the monic irreducibles of ``A``.

A point module describes the theta-action on ``G(A/wA)`` for a t-module
whose structure matrices are constant: coordinate ``r`` carries the residue
``theta-bar`` plus a nilpotent shift plus Frobenius terms.  Its Fitting
generator ``|G(A/wA)|_A`` is a characteristic polynomial, and the local
factor is ``|Lie|_A / |G(A/wA)|_A``.  Every degree is handled as one numpy
batch; batches can run on a thread pool and are combined in a fixed order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .drinfeld import DrinfeldRank2, twist_scalar
from .fields import field
from .laurent import LaurentSeries, agreement_order, batch_inverse, batch_mul, batch_product
from .linalg import batch_charpoly
from .poly import PolyA
from .residue import batch_companion, batch_frobenius, batch_mulmod, irreducible_table
from .tmodule import TensorModule

_CHUNK = 4096


# point modules

@dataclass(frozen=True)
class PointModule:
    """``theta . x = theta-bar x + N x + sum_k E_k x^(q^k)`` on ``(A/wA)^dim``."""

    name: str
    q: int
    dim: int
    nilpotent: Tuple[Tuple[int, ...], ...]
    frobenius_terms: Tuple[Tuple[int, Tuple[Tuple[int, ...], ...]], ...]

    @staticmethod
    def _freeze(M) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in row) for row in M)


def carlitz_point_module(q: int) -> PointModule:
    return PointModule("carlitz", q, 1, ((0,),), ((1, ((1,),)),))


def carlitz_tensor_point_module(q: int, s: int) -> PointModule:
    """``C^(tensor s)``: superdiagonal shift and ``E`` with a single 1 at
    the bottom-left corner."""
    N = [[1 if c == r + 1 else 0 for c in range(s)] for r in range(s)]
    E = [[0] * s for _ in range(s)]
    E[s - 1][0] = 1
    return PointModule(f"carlitz^{s}", q, s, PointModule._freeze(N), ((1, PointModule._freeze(E)),))


def drinfeld_point_module(phi: DrinfeldRank2) -> PointModule:
    if not phi.is_constant():
        raise ValueError("point counts need constant coefficients")
    a, b = phi.a.constant_value(), phi.b.constant_value()
    return PointModule(f"drinfeld(a={a},b={b})", phi.q, 1, ((0,),), ((1, ((a,),)), (2, ((b,),))))


def tensor_point_module(G: TensorModule) -> PointModule:
    if not G.phi.is_constant():
        raise ValueError("point counts need constant coefficients")
    tag = "twisted " if G.twisted else ""
    name = f"{tag}G_{G.n}(a={G.phi.a},b={G.phi.b})"
    return PointModule(name, G.q, G.dim, PointModule._freeze(G.nilpotent()),
                       ((1, PointModule._freeze(G.e_constant())),))


def as_point_module(G) -> PointModule:
    if isinstance(G, PointModule):
        return G
    if isinstance(G, TensorModule):
        return tensor_point_module(G)
    if isinstance(G, DrinfeldRank2):
        return drinfeld_point_module(G)
    raise TypeError(f"no point module for {G!r}")


def batch_action_matrices(module: PointModule, W: np.ndarray) -> np.ndarray:
    """Matrices of the theta-action on ``(A/wA)^dim`` for a stack of moduli.

    Coordinate ``r`` occupies rows ``r d .. r d + d - 1``.
    """
    p = module.q
    B, d = W.shape
    dim = module.dim
    C = batch_companion(W, p)
    Fr = batch_frobenius(W, p)
    powers = {0: None, 1: Fr}
    max_k = max((k for k, _ in module.frobenius_terms), default=0)
    for k in range(2, max_k + 1):
        powers[k] = np.einsum("bij,bjk->bik", powers[k - 1], Fr) % p
    eye = np.eye(d, dtype=np.int64)
    T = np.zeros((B, dim * d, dim * d), dtype=np.int64)
    for r in range(dim):
        T[:, r * d:(r + 1) * d, r * d:(r + 1) * d] += C
        for c in range(dim):
            if module.nilpotent[r][c]:
                T[:, r * d:(r + 1) * d, c * d:(c + 1) * d] += module.nilpotent[r][c] * eye
    for k, E in module.frobenius_terms:
        for r in range(dim):
            for c in range(dim):
                if E[r][c]:
                    T[:, r * d:(r + 1) * d, c * d:(c + 1) * d] += E[r][c] * powers[k]
    return T % p


def batch_lie_matrices(module: PointModule, W: np.ndarray) -> np.ndarray:
    stripped = PointModule(module.name, module.q, module.dim, module.nilpotent, ())
    return batch_action_matrices(stripped, W)


def point_modules(G, w: PolyA) -> Tuple[np.ndarray, np.ndarray]:
    """``(T_lie, T_g)`` over ``F_q`` for one prime ``w``."""
    module = as_point_module(G)
    W = np.asarray(w.c[:-1], dtype=np.int64)[None, :]
    return batch_lie_matrices(module, W)[0], batch_action_matrices(module, W)[0]


# local factors as power series in u

def _reversed_series(rows: np.ndarray, length: int, p: int) -> np.ndarray:
    """Monic polynomials (lowest coefficient first) of a common degree as
    series ``u^deg f(1/u)``, truncated to ``length``."""
    rev = rows[:, ::-1]
    out = np.zeros((rows.shape[0], length), dtype=np.int64)
    m = min(length, rev.shape[1])
    out[:, :m] = rev[:, :m]
    return out % p


def _series_power(S: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.zeros_like(S)
    out[:, 0] = 1
    base = S
    while e:
        if e & 1:
            out = batch_mul(out, base, p)
        e >>= 1
        if e:
            base = batch_mul(base, base, p)
    return out


def _monic_rows(W: np.ndarray) -> np.ndarray:
    return np.concatenate([W, np.ones((W.shape[0], 1), dtype=np.int64)], axis=1)


def taelman_factor_rows(module: PointModule, W: np.ndarray, prec: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fitting generators of ``Lie`` and ``G`` and the factor series, per row."""
    p = module.q
    lie = batch_charpoly(batch_lie_matrices(module, W), p)
    pts = batch_charpoly(batch_action_matrices(module, W), p)
    length = max(prec, 1)
    num = _reversed_series(lie, length, p)
    den = _reversed_series(pts, length, p)
    return lie, pts, batch_mul(num, batch_inverse(den, p), p)


def taelman_factor(G, w: PolyA, prec: int) -> Tuple[PolyA, PolyA, LaurentSeries]:
    """``(|Lie(G)(A/wA)|_A, |G(A/wA)|_A, ratio)`` for one prime."""
    module = as_point_module(G)
    W = np.asarray(w.c[:-1], dtype=np.int64)[None, :]
    lie, pts, f = taelman_factor_rows(module, W, prec)
    p = module.q
    return PolyA(lie[0], p), PolyA(pts[0], p), LaurentSeries(0, f[0], prec, p)


# Euler products

@dataclass
class EulerReport:
    """Partial Euler products by maximal prime degree."""

    label: str
    q: int
    max_prime_degree: int
    prec: int
    value: LaurentSeries
    partials: List[LaurentSeries]
    prime_counts: List[int]
    heuristic_precision: Optional[int] = None
    factors: List[Tuple[PolyA, LaurentSeries]] = dc_field(default_factory=list)

    @property
    def stabilization(self) -> int:
        """Matched coefficients between the products up to ``D-1`` and ``D``."""
        if len(self.partials) < 2:
            return 0
        return agreement_order(self.partials[-2], self.partials[-1])

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "q": self.q,
            "max_prime_degree": self.max_prime_degree,
            "prec": self.prec,
            "value": self.value.to_json(),
            "prime_counts": self.prime_counts,
            "heuristic_precision": self.heuristic_precision,
            "stabilization": self.stabilization,
        }


def _degree_chunks(q: int, D: int) -> List[Tuple[int, np.ndarray]]:
    out = []
    for d in range(1, D + 1):
        table = irreducible_table(q, d)
        for start in range(0, table.shape[0], _CHUNK):
            out.append((d, table[start:start + _CHUNK]))
    return out


def _run_chunks(fn, chunks, threads: int):
    if threads <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


def euler_product(factor_rows, q: int, D: int, prec: int, threads: int = 1, label: str = "",
                  keep_factors: bool = False) -> EulerReport:
    """Multiply ``factor_rows(d, W)`` over all primes of degree ``<= D``.

    ``factor_rows`` returns one unit power series (length ``prec``) per row of
    ``W``.  Chunks are combined in the canonical prime order.
    """
    length = max(prec, 1)
    chunks = _degree_chunks(q, D)

    def work(chunk):
        d, W = chunk
        rows = factor_rows(d, W)
        return d, W, rows, batch_product(rows, q)

    results = _run_chunks(work, chunks, threads)
    one = np.zeros(length, dtype=np.int64)
    one[0] = 1
    acc = one
    partials = [LaurentSeries(0, acc, prec, q)]
    counts = [0]
    factors = []
    for d in range(1, D + 1):
        count = 0
        for dd, W, rows, prod in results:
            if dd != d:
                continue
            acc = batch_mul(acc[None, :], prod[None, :], q)[0]
            count += W.shape[0]
            if keep_factors:
                for wrow, frow in zip(W, rows):
                    factors.append((PolyA(list(wrow) + [1], q), LaurentSeries(0, frow, prec, q)))
        partials.append(LaurentSeries(0, acc, prec, q))
        counts.append(count)
    return EulerReport(label, q, D, prec, partials[-1], partials, counts, factors=factors)


def taelman_l_value(G, D: int, prec: int, threads: int = 1, keep_factors: bool = False,
                    heuristic: Optional[int] = None) -> EulerReport:
    """``prod_w |Lie(G)(A/wA)|_A / |G(A/wA)|_A`` over primes of degree ``<= D``."""
    module = as_point_module(G)
    if heuristic is None:
        heuristic = heuristic_precision(G, D)

    def rows(d, W):
        return taelman_factor_rows(module, W, prec)[2]

    report = euler_product(rows, module.q, D, prec, threads, module.name, keep_factors)
    report.heuristic_precision = heuristic
    return report


def heuristic_precision(G, D: int) -> Optional[int]:
    """``ceil((D+1)(n + 1/2))`` for ``G_n``; ``ceil((D+1)/2)`` for a Drinfeld
    module.  Rests on a Weil-type bound for the traces."""
    if isinstance(G, TensorModule):
        return math.ceil((D + 1) * (G.n + 0.5))
    if isinstance(G, DrinfeldRank2):
        return math.ceil((D + 1) / 2)
    return None


def trivial_l_value(s: int, q: int, D: int, prec: int, threads: int = 1) -> EulerReport:
    """``prod_w (1 - w^(-s))^(-1)``, i.e. ``w^s / (w^s - 1)`` per prime."""
    length = max(prec, 1)

    def rows(d, W):
        ws = _series_power(_reversed_series(_monic_rows(W), length, q), s, q)
        den = ws.copy()
        if d * s < length:
            den[:, d * s] = (den[:, d * s] - 1) % q
        return batch_mul(ws, batch_inverse(den, q), q)

    report = euler_product(rows, q, D, prec, threads, f"trivial(s={s})")
    report.heuristic_precision = s * (D + 1)
    return report


# Goss factors from the motive Frobenius

def batch_motive_trace(a: int, b: int, W: np.ndarray, p: int, order: str = "forward") -> np.ndarray:
    """Trace of ``Theta_0 ... Theta_(d-1)`` (or the reversed product), with
    ``Theta_i = [[0, (t - theta-bar^(q^i))/b], [1, -a/b]]`` over ``(A/wA)[t]``.

    Returns the coefficients (lowest first, length ``d+1``) of the trace as a
    polynomial in ``t`` over ``F_q``; raises if it fails to descend.
    """
    B, d = W.shape
    L = d + 1
    binv = field(p).inv(b)
    y = (-a * binv) % p
    Fr = batch_frobenius(W, p)
    root = np.zeros((B, d), dtype=np.int64)
    if d == 1:
        root[:, 0] = (-W[:, 0]) % p
    else:
        root[:, 1] = 1
    roots = [root]
    for _ in range(1, d):
        roots.append(np.einsum("bij,bj->bi", Fr, roots[-1]) % p)

    def zero():
        return np.zeros((B, L, d), dtype=np.int64)

    def times_x(e, r):
        """``e (t - r) / b``."""
        out = zero()
        out[:, 1:, :] = e[:, :-1, :]
        for j in range(L):
            if e[:, j, :].any():
                out[:, j, :] -= batch_mulmod(e[:, j, :], r, W, p)
        return (out * binv) % p

    one = zero()
    one[:, 0, 0] = 1
    P = [[one, zero()], [zero(), one.copy()]]
    idx = range(d) if order == "forward" else range(d - 1, -1, -1)
    for i in idx:
        r = roots[i]
        if order == "forward":
            # P . Theta = [[p01, p00 x + p01 y], [p11, p10 x + p11 y]]
            P = [[P[0][1], (times_x(P[0][0], r) + y * P[0][1]) % p],
                 [P[1][1], (times_x(P[1][0], r) + y * P[1][1]) % p]]
        else:
            # Theta . P = [[x p10, x p11], [p00 + y p10, p01 + y p11]]
            P = [[times_x(P[1][0], r), times_x(P[1][1], r)],
                 [(P[0][0] + y * P[1][0]) % p, (P[0][1] + y * P[1][1]) % p]]
    tr = (P[0][0] + P[1][1]) % p
    if tr[:, :, 1:].any():
        raise ArithmeticError("motive trace does not descend to F_q[t]")
    return tr[:, :, 0]


# calibrated convention: characteristic polynomial 1 - tr X + eps w X^2 of the
# forward product; see calibrate_goss_convention
GOSS_ORDER = "forward"


def _batch_polymul(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    B = x.shape[0]
    out = np.zeros((B, x.shape[1] + y.shape[1] - 1), dtype=np.int64)
    for j in range(y.shape[1]):
        if y[:, j].any():
            out[:, j:j + x.shape[1]] += x * y[:, j:j + 1]
    return out % p


def goss_polynomial_rows(phi: DrinfeldRank2, W: np.ndarray, order: str = GOSS_ORDER) -> Tuple[np.ndarray, int]:
    """Per prime: the trace polynomial in theta and ``eps = (-1/b)^d``, so
    that ``P_w(X) = 1 - tr X + eps w X^2``."""
    q = phi.q
    a, b = phi.a.constant_value(), phi.b.constant_value()
    d = W.shape[1]
    tr = batch_motive_trace(a, b, W, q, order)
    eps = pow((-field(q).inv(b)) % q, d, q)
    return tr, eps


def goss_factor_motive(phi: DrinfeldRank2, w: PolyA, order: str = GOSS_ORDER) -> Tuple[PolyA, PolyA, PolyA]:
    """Coefficients ``(1, -tr, eps w)`` of ``P_w(X)`` as elements of ``A``."""
    if not phi.is_constant():
        raise ValueError("the motive factor needs constant coefficients")
    q = phi.q
    W = np.asarray(w.c[:-1], dtype=np.int64)[None, :]
    tr, eps = goss_polynomial_rows(phi, W, order)
    return PolyA.one(q), -PolyA(tr[0], q), w.scale(eps)


def goss_point_count(phi: DrinfeldRank2, w: PolyA, order: str = GOSS_ORDER) -> PolyA:
    """Monic normalization of ``P_w(1)``."""
    c0, c1, c2 = goss_factor_motive(phi, w, order)
    return (c0 + c1 + c2).monic()


def _goss_factor_rows(phi: DrinfeldRank2, s: int, W: np.ndarray, prec: int, order: str) -> np.ndarray:
    """``P_w(w^(-s))^(-1) = w^(2s) / (w^(2s) - tr w^s + eps w)`` as series."""
    q = phi.q
    d = W.shape[1]
    length = max(prec, 1)
    tr, eps = goss_polynomial_rows(phi, W, order)
    wm = _monic_rows(W)
    ws = np.zeros((W.shape[0], 1), dtype=np.int64)
    ws[:, 0] = 1
    for _ in range(s):
        ws = _batch_polymul(ws, wm, q)
    w2s = _batch_polymul(ws, ws, q)
    top = 2 * s * d
    num = w2s.copy()
    tw = _batch_polymul(tr, ws, q)
    num[:, : tw.shape[1]] = (num[:, : tw.shape[1]] - tw) % q
    num[:, : wm.shape[1]] = (num[:, : wm.shape[1]] + eps * wm) % q
    rev_w2s = _reversed_series(w2s, length, q)
    rev_num = np.zeros((W.shape[0], length), dtype=np.int64)
    m = min(length, top + 1)
    rev_num[:, :m] = num[:, ::-1][:, :m]
    lead = rev_num[:, 0]
    if not lead.all():
        raise ArithmeticError("Goss factor has a non-unit leading term")
    inv = np.array([field(q).inv(int(x)) for x in lead], dtype=np.int64)
    rev_num = (rev_num * inv[:, None]) % q
    return (batch_mul(rev_w2s, batch_inverse(rev_num, q), q) * inv[:, None]) % q


def goss_factor_series(phi: DrinfeldRank2, s: int, w: PolyA, prec: int, order: str = GOSS_ORDER) -> LaurentSeries:
    W = np.asarray(w.c[:-1], dtype=np.int64)[None, :]
    return LaurentSeries(0, _goss_factor_rows(phi, s, W, prec, order)[0], prec, phi.q)


def goss_l_value(phi: DrinfeldRank2, s: int, D: int, prec: int, threads: int = 1,
                 order: str = GOSS_ORDER) -> EulerReport:
    """``prod_w P_w(w^(-s))^(-1)`` over primes of degree ``<= D``."""
    if s < 1:
        raise ValueError("s must be positive")
    if not phi.is_constant():
        raise ValueError("the motive factor needs constant coefficients")

    def rows(d, W):
        return _goss_factor_rows(phi, s, W, prec, order)

    return euler_product(rows, phi.q, D, prec, threads, f"goss(s={s})")


def calibrate_goss_convention(q: int, max_degree: int = 2) -> str:
    """Pick the product order whose ``P_w(1)`` reproduces the point count of
    ``phi`` for every constant ``phi`` and every prime of degree ``<= max_degree``."""
    from .residue import monic_irreducibles

    for order in ("forward", "reverse"):
        ok = True
        for a in range(q):
            for b in range(1, q):
                phi = DrinfeldRank2(a, b, q)
                for d in range(1, max_degree + 1):
                    for w in monic_irreducibles(q, d):
                        if goss_point_count(phi, w, order) != taelman_factor(phi, w, 1)[1]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return order
    raise ArithmeticError("no Goss convention matches the point counts")
