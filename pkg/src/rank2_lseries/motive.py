"""The dual t-motive of ``G_n`` and its coordinate map.

``H_n`` is free on ``h1, h2`` over ``K[t]`` with

    sigma h1 = lam (t - theta)^n / b * h2
    sigma h2 = lam ((t - theta)^(n+1) h1 - a (t - theta)^n / b * h2)

where ``lam = 1`` for ``G_n`` and ``lam = -b`` for its twist.  Modulo
``(sigma - 1) H_n`` an element reduces to ``f1 h1 + f2 h2`` with
``deg f1 <= n`` and ``deg f2 <= n - 1`` in ``t - theta``; the coordinate map
reads off the hyperderivatives of ``f1``, ``f2`` at ``t = theta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import List, Sequence

from .drinfeld import DrinfeldRank2, twist_scalar
from .fields import field
from .poly import Frac, PolyA
from .taylor import ThetaTaylor, TPoly
from .tmodule import TensorModule, d_matrix

Column = List[Frac]


@dataclass(frozen=True)
class MotiveElement:
    """``f1 h1 + f2 h2`` with ``f1``, ``f2`` in ``K[t]``."""

    f1: TPoly
    f2: TPoly


@dataclass
class DualMotive:
    phi: DrinfeldRank2
    n: int
    twisted: bool = False
    basis: tuple = dc_field(default=("h1", "h2"))

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("level must be positive")
        if not self.phi.is_constant():
            raise ValueError("the motive is implemented for constant coefficients")

    @property
    def p(self) -> int:
        return self.phi.q

    @property
    def a(self) -> int:
        return self.phi.a.constant_value()

    @property
    def b(self) -> int:
        return self.phi.b.constant_value()

    @property
    def sigma_scale(self) -> int:
        return (-self.b) % self.p if self.twisted else 1

    def sigma_matrix(self) -> List[List[TPoly]]:
        """Column ``j`` holds the coordinates of ``sigma h_j``."""
        p, n = self.p, self.n
        F = field(p)
        lam, a, binv = self.sigma_scale, self.a, F.inv(self.b)
        s = TPoly.t_minus(PolyA.theta(p), p)
        return [
            [TPoly([], p), s ** (n + 1) * lam],
            [s**n * (lam * binv % p), s**n * (-lam * a * binv % p)],
        ]

    def module(self) -> TensorModule:
        return TensorModule(self.phi, self.n, twisted=self.twisted)


def _column(t1: ThetaTaylor, t2: ThetaTaylor, n: int) -> Column:
    out: Column = []
    for k in range(n, -1, -1):
        out.append(t1[k])
        if k:
            out.append(t2[k - 1])
    return out


def delta0_iota(elem: MotiveElement, n: int) -> Column:
    """``[d^n f1, d^(n-1) f2, d^(n-1) f1, ..., d f1, f2, f1]`` at ``t = theta``."""
    return _column(elem.f1.taylor(n), elem.f2.taylor(n), n)


def inverse_frob_taylor(n: int, q: int) -> ThetaTaylor:
    """Expansion of ``(t - theta^q)^(-(n+1))`` around ``t = theta`` to order ``n``."""
    lin = TPoly.t_minus(PolyA.monomial(q, q), q)
    return (lin.taylor(n) ** (n + 1)).inverse()


def inverse_frob_poly(n: int, q: int, j: int = 1) -> TPoly:
    """The canonical ``p_1``: the truncated Taylor inverse of ``(t - theta^q)^(n+1)``."""
    if j != 1:
        raise ValueError("only the first inverse Frobenius is implemented")
    coeffs = inverse_frob_taylor(n, q).coeffs
    s = TPoly.t_minus(PolyA.theta(q), q)
    out = TPoly([], q)
    for k, c in enumerate(coeffs):
        out = out + s**k * c
    return out


def congruence_residual(n: int, q: int) -> ThetaTaylor:
    """``p_1 (t - theta^q)^(n+1) - 1`` modulo ``(t - theta)^(n+1)``; zero when correct."""
    lin = TPoly.t_minus(PolyA.monomial(q, q), q)
    prod = inverse_frob_poly(n, q) * lin ** (n + 1)
    one = ThetaTaylor.constant(Frac.from_int(1, q), n)
    return prod.taylor(n) - one


def phi1_vectors(motive: DualMotive) -> tuple:
    """``(phi_1(h1), phi_1(h2))`` as coordinate columns."""
    n, q = motive.n, motive.p
    inv = inverse_frob_taylor(n, q)
    lin = TPoly.t_minus(PolyA.monomial(q, q), q).taylor(n)
    inv_n = inv * lin
    zero = ThetaTaylor.constant(Frac.from_int(0, q), n)
    scale = Frac.from_int(twist_scalar(motive.phi), q) if motive.twisted else Frac.from_int(1, q)
    v1 = _column(inv.scale(Frac.from_int(motive.a, q)), inv, n)
    v2 = _column(inv_n.scale(Frac.from_int(motive.b, q)), zero, n)
    return [x * scale for x in v1], [x * scale for x in v2]


def _apply(M, v: Column) -> Column:
    out = []
    for row in M:
        acc = Frac.from_int(0, v[0].p)
        for m, x in zip(row, v):
            if not m.is_zero() and not x.is_zero():
                acc = acc + Frac(m) * x
        out.append(acc)
    return out


def _unit(dim: int, k: int, q: int) -> Column:
    return [Frac.from_int(1 if r == k else 0, q) for r in range(dim)]


@dataclass
class BasisCheck:
    witnesses: dict
    lhs_top: Column
    lhs_second: Column
    holds_top: bool
    holds_second: bool

    @property
    def holds(self) -> bool:
        return self.holds_top and self.holds_second


def w_basis_check(motive: DualMotive) -> BasisCheck:
    """Check that explicit multipliers send ``phi_1(h2)`` to the last basis
    vector and a combination of both to the second to last."""
    n, q = motive.n, motive.p
    F = field(q)
    a, b = motive.a, motive.b
    binv = F.inv(b)
    base = PolyA.theta(q) - PolyA.monomial(q, q)
    scale = (-b) % q if motive.twisted else 1
    c12 = base**n * (binv * scale % q)
    c21 = base ** (n + 1) * scale
    c22 = base**n * (-a * binv * scale % q)
    v1, v2 = phi1_vectors(motive)
    dim = 2 * n + 1
    top = _apply(d_matrix(c12, n), v2)
    second = [x + y for x, y in zip(_apply(d_matrix(c21, n), v1), _apply(d_matrix(c22, n), v2))]
    return BasisCheck(
        witnesses={"c12": c12, "c21": c21, "c22": c22},
        lhs_top=top,
        lhs_second=second,
        holds_top=top == _unit(dim, dim - 1, q),
        holds_second=second == _unit(dim, dim - 2, q),
    )


def t_action_column(motive: DualMotive, f1: Sequence[Frac], f2: Sequence[Frac]) -> Column:
    """Coordinates of ``t * (f1 h1 + f2 h2)`` for reduced representatives.

    ``f1``, ``f2`` list coefficients of powers of ``t - theta`` (lengths
    ``n + 1`` and ``n``).  Overflow terms are folded back with

        x (t-theta)^n h2     ~ (b/lam) x^q h1
        x (t-theta)^(n+1) h1 ~ (1/lam) x^q h2 + (a/lam) x^q h1
    """
    n, q = motive.n, motive.p
    F = field(q)
    lam_inv = F.inv(motive.sigma_scale)
    theta = Frac(PolyA.theta(q))
    g1 = [x * theta for x in f1] + [Frac.from_int(0, q)]
    g2 = [x * theta for x in f2] + [Frac.from_int(0, q)]
    for k, x in enumerate(f1):
        g1[k + 1] = g1[k + 1] + x
    for k, x in enumerate(f2):
        g2[k + 1] = g2[k + 1] + x
    top1, top2 = g1.pop(), g2.pop()
    t1q, t2q = top1.frobenius(1), top2.frobenius(1)
    g2[0] = g2[0] + t1q * lam_inv
    g1[0] = g1[0] + t1q * (motive.a * lam_inv % q) + t2q * (motive.b * lam_inv % q)
    zero = Frac.from_int(0, q)
    t1 = ThetaTaylor(g1, n)
    t2 = ThetaTaylor(g2 or [zero], n)
    return _column(t1, t2, n)


def t_action_residual(motive: DualMotive, f1: Sequence[Frac], f2: Sequence[Frac]) -> Column:
    """``t * col - phi_n(theta) col``; all zero when the motive matches ``G_n``."""
    n, q = motive.n, motive.p
    zero = Frac.from_int(0, q)
    t1 = ThetaTaylor(list(f1), n)
    t2 = ThetaTaylor(list(f2) or [zero], n)
    col = _column(t1, t2, n)
    G = motive.module()
    N, E = G.nilpotent(), G.e_constant()
    theta = Frac(PolyA.theta(q))
    frob = [x.frobenius(1) for x in col]
    expected = []
    for r in range(G.dim):
        acc = col[r] * theta
        for c in range(G.dim):
            if N[r][c]:
                acc = acc + col[c]
            if E[r][c]:
                acc = acc + frob[c] * E[r][c]
        expected.append(acc)
    got = t_action_column(motive, f1, f2)
    return [x - y for x, y in zip(got, expected)]
