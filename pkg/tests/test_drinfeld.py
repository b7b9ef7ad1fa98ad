import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import constant_pairs, polys
from oracles import brute_shadowed, f_table, frac_expansion, gamma_table, series_dict, series_sum
from rank2_lseries.carlitz import bracket, carlitz_L
from rank2_lseries.drinfeld import (DrinfeldRank2, ShadowedPartition, component, drinfeld_log_eval,
                                    exp_coeffs, f_recursive, formal_inverse_residual, ft_gamma,
                                    ft_gamma_formal, f_formal_table, gamma_formal_table, gamma_recursive,
                                    shadowed_partitions, twist, weight1, weight2)
from rank2_lseries.laurent import LaurentSeries
from rank2_lseries.poly import Frac, PolyA


def B(i, q):
    return Frac(bracket(i, q))


class TestShadowedPartitions:
    def test_level_zero(self):
        parts = shadowed_partitions(0)
        assert len(parts) == 1 and parts[0].first == frozenset() and parts[0].second == frozenset()

    def test_level_two(self):
        got = [(set(U.first), set(U.second)) for U in shadowed_partitions(2)]
        assert got == [({0, 1}, set()), (set(), {0})]

    def test_level_three(self):
        parts = shadowed_partitions(3)
        assert len(parts) == 3
        assert sum(U.starts_in_first() for U in parts) == 2

    @pytest.mark.parametrize("n", range(0, 9))
    def test_matches_exhaustive_search(self, n):
        ours = {(U.first, U.second) for U in shadowed_partitions(n)}
        assert ours == set(brute_shadowed(n))
        assert len(ours) == len(shadowed_partitions(n))

    def test_fibonacci_counts(self):
        sizes = [len(shadowed_partitions(n)) for n in range(15)]
        firsts = [sum(U.starts_in_first() for U in shadowed_partitions(n)) for n in range(15)]
        assert all(sizes[n] == sizes[n - 1] + sizes[n - 2] for n in range(2, 15))
        assert all(firsts[n] == firsts[n - 1] + firsts[n - 2] for n in range(3, 15))

    def test_invalid_rejected(self):
        with pytest.raises(ValueError):
            ShadowedPartition(2, 0b01, 0b01)
        with pytest.raises(ValueError):
            ShadowedPartition(3, 0b001, 0)

    def test_weights(self):
        assert weight1(set(), 3) == 0
        assert weight1({0, 2}, 3) == 10
        assert weight2({0, 1}, 3) == 3
        assert weight2({0}, 5) == 0
        with pytest.raises(ValueError):
            weight2({1}, 3)


class TestComponents:
    phi = DrinfeldRank2.parse(5, "T+2", "3*T^2+1")

    def test_level_one(self):
        U = ShadowedPartition(1, 1, 0)
        assert component(U, self.phi) == -(B(1, 5).inverse())

    def test_level_two_second(self):
        U = ShadowedPartition(2, 0, 1)
        assert component(U, self.phi) == -(Frac(self.phi.b) / B(2, 5))

    def test_empty(self):
        assert component(ShadowedPartition(0, 0, 0), self.phi) == Frac.from_int(1, 5)


class TestGammaClosedForm:
    def test_level_zero(self):
        phi = DrinfeldRank2(2, 1, 3)
        F, Tn, g = ft_gamma(phi, 0)
        assert (F, Tn, g) == (Frac.from_int(0, 3), Frac.from_int(1, 3), Frac.from_int(1, 3))

    def test_level_one(self):
        phi = DrinfeldRank2.parse(3, "T+1", "2")
        L1 = Frac(carlitz_L(1, 3))
        F, Tn, g = ft_gamma(phi, 1)
        assert F == L1.inverse() and Tn.is_zero() and g == Frac(phi.a) / L1

    def test_level_two(self):
        phi = DrinfeldRank2.parse(5, "T", "T+3")
        a, b = Frac(phi.a), Frac(phi.b)
        F, Tn, g = ft_gamma(phi, 2)
        assert F == a**5 / (B(1, 5) * B(2, 5))
        assert Tn == -(b / B(2, 5))
        assert g == a**6 / Frac(carlitz_L(2, 5)) - b / B(2, 5)
        assert g == (a**6 - b * B(1, 5)) / Frac(carlitz_L(2, 5))

    @given(polys(max_degree=2), polys(max_degree=2, nonzero=True), st.integers(0, 4))
    def test_against_independent_recursion(self, a, b, n):
        b = PolyA(b.coeffs(), a.p)
        if b.is_zero():
            b = PolyA.one(a.p)
        if a.p == 7 and n > 3:
            n = 3
        phi = DrinfeldRank2(a, b)
        F, _, g = ft_gamma(phi, n)
        assert g == gamma_table(a, b, n)[n]
        assert F == f_table(a, b, n)[n]

    @pytest.mark.parametrize("q", [3, 5, 7])
    def test_formal_identity_generic(self, q):
        # non-constant a and b stay symbolic, so this is the identity for all a, b
        phi = DrinfeldRank2.parse(q, "T^2+1", "T+1")
        assert phi.algebra.a is not None
        gam, fs = gamma_formal_table(phi, 10), f_formal_table(phi, 10)
        for n in range(11):
            F, _, g = ft_gamma_formal(phi, n)
            assert F == fs[n] and g == gam[n]
        assert gam[4].has_symbols()

    @given(constant_pairs())
    def test_constant_coefficients_exact(self, qab):
        q, a, b = qab
        phi = DrinfeldRank2(a, b, q)
        for n in range(5 if q < 7 else 4):
            assert ft_gamma(phi, n)[2] == gamma_recursive(phi, n)
            assert ft_gamma(phi, n)[0] == f_recursive(phi, n)

    @pytest.mark.parametrize("q", [3, 5])
    def test_positive_valuation(self, q):
        for a in range(q):
            for b in range(1, q):
                phi = DrinfeldRank2(a, b, q)
                for i, g in enumerate(gamma_formal_table(phi, 12)):
                    if i and not g.is_zero():
                        assert phi.algebra.min_valuation(g) > 0

    def test_a_zero_kills_odd(self):
        phi = DrinfeldRank2(0, 1, 3)
        gam = gamma_formal_table(phi, 7)
        assert all(gam[i].is_zero() for i in (1, 3, 5, 7))


class TestExponential:
    def test_first_coefficients(self):
        phi = DrinfeldRank2.parse(3, "T", "2")
        xi = exp_coeffs(phi, 3)
        assert xi[0] == Frac.from_int(1, 3)
        assert xi[1] == Frac(phi.a) / B(1, 3)

    @pytest.mark.parametrize("a,b", [("1", "2"), ("T", "1"), ("0", "T+1")])
    def test_formal_inverse(self, a, b):
        phi = DrinfeldRank2.parse(3, a, b)
        for i in range(1, 5):
            assert formal_inverse_residual(phi, i).is_zero()

    def test_formal_inverse_q5(self):
        phi = DrinfeldRank2(2, 3, 5)
        for i in range(1, 5):
            assert formal_inverse_residual(phi, i).is_zero()


class TestTwist:
    def test_minus_one_is_fixed(self):
        phi = DrinfeldRank2(1, 2, 3)
        assert twist(phi) == phi

    def test_example(self):
        t = twist(DrinfeldRank2(1, 1, 3))
        assert (t.a.constant_value(), t.b.constant_value()) == (2, 1)

    @given(constant_pairs())
    def test_involution(self, qab):
        q, a, b = qab
        phi = DrinfeldRank2(a, b, q)
        assert twist(twist(phi)) == phi

    def test_needs_constants(self):
        with pytest.raises(ValueError):
            twist(DrinfeldRank2.parse(3, "T", "1"))

    def test_rank_two_required(self):
        with pytest.raises(ValueError):
            DrinfeldRank2(1, 0, 3)


class TestLogEvaluation:
    def test_zero(self):
        assert drinfeld_log_eval(DrinfeldRank2(0, 1, 3), LaurentSeries.zero(3), 10).is_zero()

    @pytest.mark.parametrize("q,a,b", [(3, 0, 1), (3, 1, 2), (5, 2, 3)])
    def test_against_exact_sum(self, q, a, b):
        prec = 40
        gam = gamma_table(PolyA.const(a, q), PolyA.const(b, q), 6)
        oracle = series_sum([frac_expansion(g, prec) for g in gam], q)
        got = drinfeld_log_eval(DrinfeldRank2(a, b, q), LaurentSeries.one(q), prec)
        assert series_dict(got) == oracle

    def test_partial_sums_stable(self):
        phi = DrinfeldRank2(1, 1, 3)
        x = drinfeld_log_eval(phi, LaurentSeries.one(3), 30)
        y = drinfeld_log_eval(phi, LaurentSeries.one(3), 50).with_prec(30)
        assert x == y

    def test_divergent(self):
        with pytest.raises(ValueError):
            drinfeld_log_eval(DrinfeldRank2(1, 1, 3), LaurentSeries.from_poly(PolyA.theta(3) ** 3), 10)
