import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from arithvol.errors import PrecisionError
from arithvol.lfun import (
    clear_caches, dedekind_zeta, dirichlet_L, euler_product, euler_star_product,
    hurwitz_zeta, local_data, prime_tail, relative_L, riemann_zeta,
)

from conftest import PROPERTY_TRIALS

ZETA_K0_2 = 2 * math.pi ** 4 / (75 * math.sqrt(5))


class TestHurwitz:
    def test_classical(self):
        assert hurwitz_zeta(2, 1).contains(math.pi ** 2 / 6)
        assert hurwitz_zeta(2, Fraction(1, 2)).contains(math.pi ** 2 / 2)

    def test_direct_sum(self):
        n = np.arange(10 ** 7, dtype=np.float64) + 0.2
        head = math.fsum((n ** -3)[::-1])
        y = 10 ** 7 + 0.2
        oracle = head + y ** -2 / 2 + y ** -3 / 2
        assert hurwitz_zeta(3, Fraction(1, 5)).value == pytest.approx(oracle, rel=1e-12)

    @pytest.mark.parametrize("s", [2, 3, 5, 8, 13])
    @pytest.mark.parametrize("x", [Fraction(1, 7), Fraction(1, 2), Fraction(5, 6), 1])
    def test_mpmath(self, s, x):
        x = Fraction(x)
        oracle = float(mpmath.zeta(s, mpmath.mpf(x.numerator) / x.denominator))
        assert hurwitz_zeta(s, x).contains(oracle)

    def test_unreachable_tolerance(self):
        with pytest.raises(PrecisionError) as info:
            hurwitz_zeta(3, Fraction(1, 3), 1e-18)
        assert info.value.achievable > 1e-18

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            hurwitz_zeta(1, 1)
        with pytest.raises(ValueError):
            hurwitz_zeta(2, 0)


class TestDirichlet:
    def test_chi5(self):
        v = dirichlet_L(5, 2)
        assert v.contains(4 * math.pi ** 2 / (25 * math.sqrt(5)))
        assert v.value == pytest.approx(0.70621, abs=1e-5)

    def test_trivial_character(self):
        assert dirichlet_L(1, 3).log_value == riemann_zeta(3).log_value

    @pytest.mark.parametrize("D", [-3, -4, 8, -8, 12, -23, 29])
    @pytest.mark.parametrize("s", [2, 3, 6])
    def test_mpmath(self, D, s):
        chi = [int(sympy.functions.combinatorial.numbers.kronecker_symbol(D, a))
               for a in range(abs(D))]
        oracle = float(mpmath.dirichlet(s, chi))
        assert dirichlet_L(D, s).contains(oracle)

    def test_errors(self):
        with pytest.raises(ValueError):
            dirichlet_L(9, 2)
        with pytest.raises(ValueError):
            dirichlet_L(5, 1)


class TestDedekind:
    def test_rational(self, table):
        assert dedekind_zeta(table["Q"], 2).contains(math.pi ** 2 / 6)

    def test_k0_closed_form(self, table):
        v = dedekind_zeta(table["k0"], 2)
        assert v.contains(ZETA_K0_2)
        assert v.value == pytest.approx(1.1616712, abs=1e-7)

    def test_k0_strategies_agree(self, table):
        k0 = table["k0"]
        e = euler_product(k0, 2, 1e-8)
        c = dedekind_zeta(k0, 2, strategy="character")
        assert e.agrees_with(c)
        assert e.rel_err <= 1e-8
        assert dedekind_zeta(k0, 2, 1e-12, cross_check=True).contains(ZETA_K0_2)

    def test_l0_against_independent_product(self, table):
        # local factors from sympy's factorization mod p
        l0 = table["l0"]
        x = sympy.symbols("x")
        f = x ** 4 - x ** 3 + 2 * x - 1
        P = 3000
        log_partial = 0.0
        for p in sympy.primerange(2, P + 1):
            _, facs = sympy.factor_list(f, modulus=p)
            for g, _e in facs:
                log_partial -= math.log1p(-float(p) ** (-3 * sympy.degree(g, x)))
        v = dedekind_zeta(l0, 3, 1e-8)
        lo, hi = log_partial, log_partial + 4 * prime_tail(3, P)
        assert lo - v.abs_err_log <= v.log_value <= hi + v.abs_err_log
        assert v.rel_err <= 1e-8

    def test_precision_cap(self, table):
        with pytest.raises(PrecisionError) as info:
            dedekind_zeta(table["l0"], 2, 1e-12, prime_limit_cap=10 ** 5)
        assert info.value.achievable > 1e-12

    @pytest.mark.parametrize("label", ["Q", "k0", "Qs-3", "l0", "c49", "q725"])
    def test_decreasing_above_one(self, table, label):
        F = table[label]
        # a loose tolerance keeps the quartic products short; the gaps are wide
        vals = [dedekind_zeta(F, s, 1e-5).interval() for s in range(2, 9)]
        assert all(lo > 1 for lo, _ in vals)
        assert all(a[0] > b[1] for a, b in zip(vals, vals[1:]))

    def test_deterministic(self, table):
        a = dedekind_zeta(table["l0"], 3, 1e-9)
        b = euler_star_product(table.pair("k0", "l0"), 5)
        clear_caches()
        assert dedekind_zeta(table["l0"], 3, 1e-9) == a
        assert euler_star_product(table.pair("k0", "l0"), 5) == b


class TestRelative:
    def test_inner_is_one(self, table):
        assert relative_L(table.pair("Q", "Q"), 5).value == 1.0

    @pytest.mark.parametrize("s", [2, 3, 4, 7])
    def test_euler_matches_dirichlet(self, table, s):
        pair = table.pair("Q", "Qs-3")
        e = relative_L(pair, s, 1e-7, strategy="euler")
        assert e.agrees_with(dirichlet_L(-3, s))

    def test_k0_l0_at_3(self, table):
        v = relative_L(table.pair("k0", "l0"), 3)
        assert 0 < v.value < riemann_zeta(3).value
        # equals zeta_l0 / zeta_k0 computed separately
        ratio = dedekind_zeta(table["l0"], 3, 1e-10) / dedekind_zeta(table["k0"], 3)
        assert v.agrees_with(ratio)


class TestStarProduct:
    def test_rational_inner(self, table):
        v = euler_star_product(table.pair("Q", "Q"), 3)
        assert v.contains(math.pi ** 2 / 6 * math.pi ** 4 / 90)
        assert v.value == pytest.approx(1.78036, abs=1e-5)

    def test_compact_candidate_bounds(self, table):
        pair = table.pair("k0", "l0")
        for r in range(3, 31):
            lo, hi = euler_star_product(pair, r).interval()
            assert hi < 2
            if r <= 16:
                assert 1 < lo and hi <= 1.17


_QUADRATIC = ["k0", "Qs2", "Qs3", "Qs13", "Qs29", "Qs-3", "Qi", "Qs-7", "Qs-15", "Qs-23"]


@pytest.mark.property
@given(label=st.sampled_from(_QUADRATIC), s=st.integers(2, 8),
       tol=st.sampled_from([1e-6, 1e-7, 1e-8]))
@settings(max_examples=PROPERTY_TRIALS)
def test_strategy_agreement(table, label, s, tol):
    F = table[label]
    e = euler_product(F, s, tol)
    c = dedekind_zeta(F, s, strategy="character")
    assert e.agrees_with(c)


_TAIL_FIELDS = ["Q", "k0", "Qs-3", "Qs-15", "l0", "l400", "c49", "q725", "p14641"]


@pytest.mark.property
@given(label=st.sampled_from(_TAIL_FIELDS), s=st.integers(2, 8),
       P=st.integers(50, 20_000))
@settings(max_examples=PROPERTY_TRIALS)
def test_tail_bound_soundness(table, label, s, P):
    F = table[label]
    ld = local_data(F)
    a, ra = ld.log_partial(s, P)
    b, rb = ld.log_partial(s, 2 * P)
    bound = F.degree * prime_tail(s, P)
    assert -ra - rb <= b - a <= bound + ra + rb
