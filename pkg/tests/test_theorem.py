import pytest
from hypothesis import given, settings

from conftest import constant_pairs
from oracles import bracket_poly, f_table, frac_expansion, gamma_table, series_dict, series_mul, series_sum
from rank2_lseries.drinfeld import DrinfeldRank2
from rank2_lseries.laurent import agreement_order
from rank2_lseries.poly import Frac, PolyA
from rank2_lseries.theorem import (PreconditionError, log_eval_drinfeld_check, rhs_series, rhs_terms,
                                   rhs_theorem, verify_theorem)
from rank2_lseries.tmodule import TensorModule


def rhs_oracle(a: int, b: int, q: int, n: int, prec: int, terms: int):
    """Same determinant evaluated in the fraction field, then expanded."""
    A, B = PolyA.const(a, q), PolyA.const(b, q)
    gam, fs = gamma_table(A, B, terms), f_table(A, B, terms)
    c = Frac.from_int(-pow(b, q - 2, q) % q, q)
    bb = Frac(B)
    L = Frac(PolyA.one(q))
    s = {"g": [], "gp": [], "f": [], "fp": [frac_expansion(Frac(PolyA.one(q)), prec)]}
    for i in range(terms):
        if i:
            L = -(L * Frac(bracket_poly(i, q)))
        w = c**i / L**n
        s["g"].append(frac_expansion(w * gam[i], prec))
        s["f"].append(frac_expansion(w * fs[i], prec))
        if i:
            s["gp"].append(frac_expansion(w * bb * gam[i - 1], prec))
            s["fp"].append(frac_expansion(w * bb * fs[i - 1], prec))
    t = {k: series_sum(v, q) for k, v in s.items()}
    left = series_mul(t["g"], t["fp"], prec, q)
    right = series_mul(t["gp"], t["f"], prec, q)
    return series_sum([left, {e: -x % q for e, x in right.items()}], q)


class TestRHS:
    def test_frozen_value(self):
        # [DERIVED] matches the Frac oracle below
        assert rhs_theorem(DrinfeldRank2(0, 2, 3), 1, 24).format() == \
            "1 - u^9 - u^17 + u^21 + u^23 + O(u^24)"

    @settings(max_examples=8)
    @given(constant_pairs(q=3))
    def test_against_field_oracle_q3(self, qab):
        q, a, b = qab
        phi = DrinfeldRank2(a, b, q)
        terms = rhs_terms(phi, 1, 24)
        assert series_dict(rhs_theorem(phi, 1, 24)) == rhs_oracle(a, b, q, 1, 24, terms)

    @pytest.mark.parametrize("a,b", [(0, 1), (1, 4), (3, 2)])
    def test_against_field_oracle_q5(self, a, b):
        phi = DrinfeldRank2(a, b, 5)
        terms = rhs_terms(phi, 2, 20)
        assert series_dict(rhs_theorem(phi, 2, 20)) == rhs_oracle(a, b, 5, 2, 20, terms)

    def test_extra_terms_change_nothing(self):
        phi = DrinfeldRank2(1, 2, 3)
        k = rhs_terms(phi, 1, 30)
        assert rhs_theorem(phi, 1, 30) == rhs_theorem(phi, 1, 30, terms=k + 2)

    @given(constant_pairs())
    def test_leading_coefficient(self, qab):
        q, a, b = qab
        n = (q - 1) // 2
        s = rhs_theorem(DrinfeldRank2(a, b, q), n, 12)
        assert s.valuation() == 0 and s.coeff(0) == 1

    def test_pieces(self):
        s = rhs_series(DrinfeldRank2(0, 1, 3), 1, 10)
        assert s["gamma"].coeff(0) == 1 and s["f_prev"].coeff(0) == 1
        assert s["gamma_prev"].valuation() >= 1

    @pytest.mark.parametrize("q,n,a,b", [(3, 1, 0, 2), (3, 1, 2, 1), (5, 1, 1, 1), (5, 2, 3, 4), (7, 3, 2, 5)])
    def test_equals_bottom_minor(self, q, n, a, b):
        phi = DrinfeldRank2(a, b, q)
        G = TensorModule(phi, n, twisted=True)
        assert rhs_theorem(phi, n, 20) == G.minor2x2(20) == G.regulator(20)

    def test_nonconstant_rejected(self):
        with pytest.raises(PreconditionError):
            rhs_theorem(DrinfeldRank2.parse(3, "T", "1"), 1, 10)


class TestVerify:
    def test_level_one(self):
        r = verify_theorem(DrinfeldRank2(0, 2, 3), 1, 8, 24)
        assert r.verified and r.matched_coefficients >= 12
        assert r.regulator == r.rhs == r.minor2x2

    def test_level_two(self):
        r = verify_theorem(DrinfeldRank2(1, 4, 5), 2, 5, 20)
        assert r.verified and r.matched_coefficients >= r.heuristic_precision

    def test_json_shape(self):
        j = verify_theorem(DrinfeldRank2(1, 1, 3), 1, 4, 12).to_json()
        assert set(j) == {"q", "n", "a", "b", "max_prime_degree", "prec", "lhs", "rhs", "regulator",
                          "minor2x2", "matched_coefficients", "heuristic_precision", "stabilization",
                          "verified"}
        assert j["a"] == "1" and j["verified"] is True

    @pytest.mark.parametrize("q,n", [(3, 2), (5, 3), (3, 0)])
    def test_out_of_range(self, q, n):
        with pytest.raises(PreconditionError):
            verify_theorem(DrinfeldRank2(1, 1, q), n, 2, 10)

    def test_symbolic_rejected(self):
        with pytest.raises(PreconditionError):
            verify_theorem(DrinfeldRank2.parse(3, "0", "T"), 1, 2, 10)


class TestLogComparison:
    @pytest.mark.parametrize("a,b,expected", [(0, 1, 12), (0, 2, 12), (1, 1, 15), (1, 2, 15), (2, 1, 9)])
    def test_matched_at_eight(self, a, b, expected):
        # [DERIVED] frozen
        r = log_eval_drinfeld_check(DrinfeldRank2(a, b, 3), 8, 20)
        assert r.matched_coefficients == expected and r.verified

    @pytest.mark.parametrize("a,b", [(0, 1), (1, 2), (2, 2)])
    def test_grows_with_degree(self, a, b):
        phi = DrinfeldRank2(a, b, 3)
        at = lambda D: log_eval_drinfeld_check(phi, D, 20).matched_coefficients  # noqa: E731
        assert at(8) > at(6)

    def test_both_sides_start_at_one(self):
        r = log_eval_drinfeld_check(DrinfeldRank2(1, 1, 3), 4, 10)
        assert r.l_value.coeff(0) == r.log_value.coeff(0) == 1
        assert agreement_order(r.l_value, r.log_value) == r.matched_coefficients
