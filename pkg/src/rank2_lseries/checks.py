"""Exact identity suites shared by ``selftest`` and ``verify --checks``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, List, Tuple

from .drinfeld import (DrinfeldRank2, exp_coeffs, f_formal_table, formal_inverse_residual,
                       ft_gamma_formal, gamma_formal_table)
from .motive import DualMotive, congruence_residual, w_basis_check
from .tmodule import TensorModule, mat_is_zero


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f" ({self.detail})" if self.detail else "")


def _first_failure(cases: Iterable[Tuple[str, Callable[[], bool]]]) -> str:
    for label, fn in cases:
        if not fn():
            return label
    return ""


def _constant_pairs(q: int):
    return [(a, b) for a in range(q) for b in range(1, q)]


def check_partition_sums(q: int, level: int) -> CheckResult:
    """Shadowed-partition sums against the recursions for gamma and F."""
    def case(a, b, k):
        phi = DrinfeldRank2(a, b, q)
        F, _, g = ft_gamma_formal(phi, k)
        return g == gamma_formal_table(phi, k)[k] and F == f_formal_table(phi, k)[k]

    cases = ((f"a={a} b={b} level={k}", lambda a=a, b=b, k=k: case(a, b, k))
             for a, b in _constant_pairs(q) for k in range(level + 1))
    bad = _first_failure(cases)
    return CheckResult(f"partition sums q={q}", not bad, bad)


def check_drinfeld_inverse(q: int, upto: int) -> CheckResult:
    """``log`` composed with ``exp`` is the identity for the Drinfeld module."""
    cases = ((f"a={a} b={b} i={i}",
              lambda a=a, b=b, i=i: formal_inverse_residual(DrinfeldRank2(a, b, q), i).is_zero())
             for a, b in _constant_pairs(q) for i in range(1, upto + 1))
    bad = _first_failure(cases)
    return CheckResult(f"drinfeld log/exp q={q}", not bad, bad)


def check_log_matrices(q: int, n: int, upto: int) -> CheckResult:
    """Functional equation, closed bottom rows and deformation route agree."""
    def case(a, b):
        G = TensorModule(DrinfeldRank2(a, b, q), n)
        P = G.log_coeffs(upto)
        for i in range(1, upto + 1):
            if not mat_is_zero(G.functional_residual(P[i], P[i - 1], i)):
                return False
            row_f, row_g = G.log_rows_closed(i)
            if P[i][2 * n - 1] != row_f or P[i][2 * n] != row_g:
                return False
            if G.deformation_matrix(i) != P[i]:
                return False
        return True

    cases = ((f"a={a} b={b}", lambda a=a, b=b: case(a, b)) for a, b in _constant_pairs(q))
    bad = _first_failure(cases)
    return CheckResult(f"log matrices q={q} n={n}", not bad, bad)


def check_tensor_inverse(q: int, n: int, upto: int) -> CheckResult:
    """``log`` composed with ``exp`` is the identity for ``G_n``."""
    G = TensorModule(DrinfeldRank2(1, q - 1, q), n)
    bad = _first_failure((f"i={i}", lambda i=i: mat_is_zero(G.formal_inverse_residual(i)))
                         for i in range(1, upto + 1))
    return CheckResult(f"tensor log/exp q={q} n={n}", not bad, bad)


def check_motive(q: int, n: int) -> CheckResult:
    """Basis witnesses for both motives and the inverse-Frobenius congruence."""
    def case(a, b, tw):
        return w_basis_check(DualMotive(DrinfeldRank2(a, b, q), n, tw)).holds

    cases = [(f"congruence n={n}", lambda: all(c.is_zero() for c in congruence_residual(n, q).coeffs))]
    cases += [(f"a={a} b={b} twisted={tw}", lambda a=a, b=b, tw=tw: case(a, b, tw))
              for a, b in _constant_pairs(q) for tw in (False, True)]
    bad = _first_failure(cases)
    return CheckResult(f"motive basis q={q} n={n}", not bad, bad)


def motive_suite() -> List[CheckResult]:
    return [check_motive(3, 1), check_motive(5, 2)]


def selftest_suite() -> List[CheckResult]:
    """Small, exact, a few seconds in total."""
    out = [check_partition_sums(q, 8) for q in (3, 5)]
    out.append(check_drinfeld_inverse(3, 4))
    out += [check_log_matrices(3, 1, 4), check_log_matrices(5, 2, 3)]
    out.append(check_tensor_inverse(3, 1, 3))
    out += motive_suite()
    return out
