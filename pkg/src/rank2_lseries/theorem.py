"""The closed-form side of the main identity and the verification engine.

The right-hand side is a 2x2 determinant of four series built from
``gamma_i``, ``F_i`` and ``1/L_i^n``, each weighted by ``c^i`` where
``c = -1/b``.  The left-hand side is the Euler product of the twisted
t-module; the regulator and the bottom-right minor of its log matrix are
reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .brackets import BracketLaurent
from .carlitz import deg_L, inv_L_bracket
from .drinfeld import (DrinfeldRank2, drinfeld_log_eval, f_formal_table, gamma_formal_table,
                       gamma_valuation_bounds, twist, twist_scalar)
from .euler import EulerReport, heuristic_precision, taelman_l_value
from .laurent import LaurentSeries, agreement_order
from .tmodule import TensorModule


class PreconditionError(ValueError):
    """Inputs outside the range where the identity is claimed."""


def rhs_terms(phi: DrinfeldRank2, n: int, prec: int) -> int:
    """Number of indices ``i`` needed so that every omitted term vanishes
    modulo ``u^prec``."""
    bounds = gamma_valuation_bounds(phi, 64)
    for i in range(1, 64):
        if n * deg_L(i, phi.q) + bounds[i - 1] >= prec:
            return i
    raise ValueError("precision out of reach")


def rhs_series(phi: DrinfeldRank2, n: int, prec: int, terms: Optional[int] = None) -> dict:
    """The four sums entering the determinant, as u-series."""
    if not phi.is_constant():
        raise PreconditionError("the closed form needs constant coefficients")
    alg = phi.algebra
    c = alg.const(twist_scalar(phi))
    if terms is None:
        terms = rhs_terms(phi, n, prec)
    gam = gamma_formal_table(phi, terms)
    fs = f_formal_table(phi, terms)
    b = alg.b_pow(0)
    zero = alg.const(0)
    sums = {"gamma": zero, "gamma_prev": zero, "f": zero, "f_prev": zero}
    for i in range(terms):
        w = c**i * inv_L_bracket(i, phi.q, n)
        sums["gamma"] = sums["gamma"] + w * gam[i]
        sums["f"] = sums["f"] + w * fs[i]
        if i >= 1:
            sums["gamma_prev"] = sums["gamma_prev"] + w * b * gam[i - 1]
            sums["f_prev"] = sums["f_prev"] + w * b * fs[i - 1]
    sums["f_prev"] = sums["f_prev"] + alg.const(1)
    return {k: alg.to_laurent(v, prec) for k, v in sums.items()}


def rhs_theorem(phi: DrinfeldRank2, n: int, prec: int, terms: Optional[int] = None) -> LaurentSeries:
    """``(sum c^i gamma_i/L_i^n)(1 + sum c^i b F_(i-1)/L_i^n)
    - (sum c^i b gamma_(i-1)/L_i^n)(sum c^i F_i/L_i^n)``."""
    s = rhs_series(phi, n, prec, terms)
    return (s["gamma"] * s["f_prev"] - s["gamma_prev"] * s["f"]).with_prec(prec)


@dataclass
class VerificationReport:
    q: int
    n: int
    a: str
    b: str
    max_prime_degree: int
    prec: int
    lhs: LaurentSeries
    rhs: LaurentSeries
    regulator: LaurentSeries
    minor2x2: LaurentSeries
    matched_coefficients: int
    heuristic_precision: int
    stabilization: int
    euler: EulerReport

    @property
    def required(self) -> int:
        return min(self.heuristic_precision, self.stabilization)

    @property
    def verified(self) -> bool:
        return self.matched_coefficients >= self.required

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "max_prime_degree": self.max_prime_degree,
            "prec": self.prec,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "regulator": self.regulator.to_json(),
            "minor2x2": self.minor2x2.to_json(),
            "matched_coefficients": self.matched_coefficients,
            "heuristic_precision": self.heuristic_precision,
            "stabilization": self.stabilization,
            "verified": self.verified,
        }


def check_theorem_range(phi: DrinfeldRank2, n: int) -> None:
    if n < 1:
        raise PreconditionError("n must be positive")
    if 2 * n + 1 > phi.q:
        raise PreconditionError(f"need 2n+1 <= q, got n={n}, q={phi.q}")
    if not phi.is_constant():
        raise PreconditionError("a and b must be constants")


def verify_theorem(phi: DrinfeldRank2, n: int, D: int, prec: int, threads: int = 1,
                   terms: Optional[int] = None) -> VerificationReport:
    """Compare the Euler product of the twisted ``G_n`` with the closed form."""
    check_theorem_range(phi, n)
    G = TensorModule(phi, n, twisted=True)
    euler = taelman_l_value(G, D, prec, threads=threads)
    rhs = rhs_theorem(phi, n, prec, terms)
    reg = G.regulator(prec)
    minor = G.minor2x2(prec)
    matched = agreement_order(euler.value, rhs)
    return VerificationReport(
        q=phi.q, n=n, a=str(phi.a), b=str(phi.b), max_prime_degree=D, prec=prec,
        lhs=euler.value, rhs=rhs, regulator=reg, minor2x2=minor,
        matched_coefficients=matched, heuristic_precision=heuristic_precision(G, D),
        stabilization=euler.stabilization, euler=euler,
    )


@dataclass
class LogComparison:
    """Euler product of the twisted Drinfeld module against its logarithm at 1."""

    q: int
    a: str
    b: str
    max_prime_degree: int
    prec: int
    l_value: LaurentSeries
    log_value: LaurentSeries
    matched_coefficients: int
    heuristic_precision: int
    stabilization: int

    @property
    def verified(self) -> bool:
        return self.matched_coefficients >= min(self.heuristic_precision, self.stabilization)


def log_eval_drinfeld_check(phi: DrinfeldRank2, D: int, prec: int,
                            threads: int = 1) -> LogComparison:
    """``L(phi-tilde/A)`` from its Euler product versus ``log_(phi-tilde)(1)``."""
    pt = twist(phi)
    euler = taelman_l_value(pt, D, prec, threads=threads)
    log1 = drinfeld_log_eval(pt, LaurentSeries.one(phi.q), prec)
    return LogComparison(
        q=phi.q, a=str(phi.a), b=str(phi.b), max_prime_degree=D, prec=prec,
        l_value=euler.value, log_value=log1,
        matched_coefficients=agreement_order(euler.value, log1),
        heuristic_precision=heuristic_precision(pt, D), stabilization=euler.stabilization,
    )
