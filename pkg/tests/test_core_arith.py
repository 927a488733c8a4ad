import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol as sp_kronecker

from arithvol.core_arith import (
    PolyZ, SplittingType, bernoulli, binomial_rows, character_table,
    distinct_degree_factorization, factorize, is_fundamental_discriminant, is_prime,
    kronecker, kronecker_symbol, poly_splitting_mod_p, resultant, riemann_zeta_even,
    sieve_primes, sqrt_mod, squarefree_decomposition,
)
from arithvol.errors import ResourceError


class TestSieve:
    def test_small(self):
        assert sieve_primes(10).tolist() == [2, 3, 5, 7]
        assert sieve_primes(2).tolist() == [2]
        assert len(sieve_primes(100)) == 25

    def test_against_sympy(self):
        assert sieve_primes(100_000).tolist() == list(sympy.primerange(2, 100_001))

    def test_limits(self):
        with pytest.raises(ValueError):
            sieve_primes(1)
        with pytest.raises(ResourceError):
            sieve_primes(10 ** 12)

    def test_dtype(self):
        assert sieve_primes(50).dtype == np.int64


@given(st.integers(min_value=-10, max_value=10 ** 12))
@settings(max_examples=300)
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(min_value=1, max_value=10 ** 10))
@settings(max_examples=200)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p ** e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


class TestKronecker:
    def test_examples(self):
        assert kronecker(5, 11) == 1
        assert kronecker(5, 2) == -1
        assert kronecker(5, 5) == 0

    def test_rejects_non_fundamental(self):
        with pytest.raises(ValueError):
            kronecker(12 * 4, 5)
        with pytest.raises(ValueError):
            kronecker(5, 9)

    @given(st.integers(-2000, 2000), st.integers(-2000, 2000))
    @settings(max_examples=500)
    def test_symbol_matches_sympy(self, a, n):
        assert kronecker_symbol(a, n) == sp_kronecker(a, n)

    def test_fundamental_discriminants(self):
        fund = [D for D in range(-60, 61) if is_fundamental_discriminant(D)]
        assert {-3, -4, -7, -8, 1, 5, 8, 12, 13}.issubset(fund)
        assert not any(is_fundamental_discriminant(D) for D in (0, 4, 9, 16, -12, 20 * 4))

    @pytest.mark.parametrize("D", [5, -3, -4, 8, -8, 12, 13, -15, 24, -23, 29])
    def test_matches_splitting_of_quadratic(self, D):
        # x^2 - D/4 or x^2 - x + (1 - D)/4, generating the same field
        poly = PolyZ((-(D // 4), 0, 1)) if D % 4 == 0 else PolyZ(((1 - D) // 4, -1, 1))
        for p in sieve_primes(10_000).tolist():
            st_ = poly_splitting_mod_p(poly, p)
            chi = kronecker(D, p)
            if chi == 1:
                assert st_.factors == ((1, 1), (1, 1))
            elif chi == -1:
                assert st_.factors == ((2, 1),)
            else:
                assert any(e == 2 for _, e in st_.factors)

    def test_character_table_periodic(self):
        tab = character_table(-3)
        assert tab.tolist() == [0, 1, -1]
        tab5 = character_table(5)
        assert tab5.tolist() == [0, 1, -1, -1, 1]

    @pytest.mark.parametrize("p", [3, 5, 7, 13, 17, 10007])
    def test_sqrt_mod(self, p):
        for a in range(1, min(p, 200)):
            if pow(a, (p - 1) // 2, p) == 1:
                x = sqrt_mod(a, p)
                assert x * x % p == a


class TestPoly:
    def test_discriminants(self):
        assert PolyZ((-5, 0, 1)).discriminant() == 20
        assert PolyZ((-1, 2, 0, -1, 1)).discriminant() == -275

    @given(st.lists(st.integers(-20, 20), min_size=2, max_size=6))
    @settings(max_examples=200)
    def test_discriminant_matches_sympy(self, coeffs):
        f = PolyZ(tuple(coeffs) + (1,))
        x = sympy.symbols("x")
        expr = sum(c * x ** i for i, c in enumerate(f.coeffs))
        assert f.discriminant() == sympy.discriminant(expr, x)

    def test_resultant(self):
        # res(x^2 - 2, x - 1) = 1 - 2
        assert resultant([-2, 0, 1], [-1, 1]) == -1

    def test_from_string_and_roots(self):
        f = PolyZ.from_string("-5,0,1")
        roots = f.real_roots()
        assert roots == pytest.approx([-math.sqrt(5), math.sqrt(5)], abs=1e-12)
        assert PolyZ((3, 0, 1)).real_roots() == []
        assert len(PolyZ((-1, 2, 0, -1, 1)).real_roots()) == 2


class TestSplitting:
    def test_examples(self):
        f = PolyZ((-5, 0, 1))
        assert poly_splitting_mod_p(f, 11).factors == ((1, 1), (1, 1))
        assert poly_splitting_mod_p(f, 5).factors == ((1, 2),)
        assert poly_splitting_mod_p(PolyZ((-1, 2, 0, -1, 1)), 2).degree == 4

    def test_parse(self):
        st_ = SplittingType.parse("2^1*1^2")
        assert st_.factors == ((1, 2), (2, 1))
        assert st_.degree == 4 and not st_.unramified
        assert st_.norms(3) == [3, 9]

    @given(st.lists(st.integers(-30, 30), min_size=1, max_size=7),
           st.sampled_from([2, 3, 5, 7, 11, 13, 101]))
    @settings(max_examples=300)
    def test_pattern_matches_sympy_factorization(self, coeffs, p):
        f = PolyZ(tuple(coeffs) + (1,))
        x = sympy.symbols("x")
        expr = sum(c * x ** i for i, c in enumerate(f.coeffs))
        _, facs = sympy.factor_list(expr, modulus=p)
        expected = sorted((sympy.degree(g, x), e) for g, e in facs)
        assert list(poly_splitting_mod_p(f, p).factors) == expected

    @given(st.lists(st.integers(-30, 30), min_size=1, max_size=7),
           st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23]))
    @settings(max_examples=300)
    def test_unramified_when_p_does_not_divide_disc(self, coeffs, p):
        f = PolyZ(tuple(coeffs) + (1,))
        D = f.discriminant()
        if D == 0 or D % p == 0:
            return
        st_ = poly_splitting_mod_p(f, p)
        assert st_.unramified and sum(fd for fd, _ in st_.factors) == f.degree

    def test_ddf_and_squarefree(self):
        # (x^2 + 1)(x + 1)^2 over F_3: x^2 + 1 is irreducible there
        g = [1, 2, 2, 2, 1]
        parts = squarefree_decomposition(g, 3)
        assert sorted(e for _, e in parts) == [1, 2]
        assert distinct_degree_factorization([1, 0, 1], 3) == [2]
        assert distinct_degree_factorization([-1, 0, 1], 5) == [1, 1]


def _bernoulli_akiyama_tanigawa(n):
    # second, independent recurrence; gives B_1 = +1/2
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


class TestBernoulli:
    def test_examples(self):
        assert bernoulli(0) == 1
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(12) == Fraction(-691, 2730)
        assert bernoulli(13) == 0

    def test_second_recurrence(self):
        at = _bernoulli_akiyama_tanigawa(40)
        for m in range(2, 41):
            assert bernoulli(m) == at[m]

    def test_sympy(self):
        for m in range(2, 65):
            assert bernoulli(m) == Fraction(str(sympy.bernoulli(m)))

    def test_convolution_identity(self):
        rows = list(binomial_rows(65))
        for m in range(1, 65):
            row = rows[m + 1]
            assert sum(row[j] * bernoulli(j) for j in range(m + 1)) == 0

    def test_range(self):
        with pytest.raises(ValueError):
            bernoulli(-1)
        with pytest.raises(ValueError):
            bernoulli(66)


class TestZetaEven:
    def test_classical(self):
        assert riemann_zeta_even(1).value == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
        assert riemann_zeta_even(2).value == pytest.approx(math.pi ** 4 / 90, rel=1e-15)

    @pytest.mark.parametrize("i", range(1, 11))
    def test_direct_sum_oracle(self, i):
        # direct summation plus Euler-Maclaurin tail, 30 digits
        mpmath.mp.dps = 30
        s = 2 * i
        N = 10 ** 4
        head = mpmath.fsum(mpmath.mpf(n) ** -s for n in range(1, N))
        tail = mpmath.mpf(N) ** (1 - s) / (s - 1) + mpmath.mpf(N) ** -s / 2 \
            + s * mpmath.mpf(N) ** (-s - 1) / 12
        oracle = float(head + tail)
        assert abs(riemann_zeta_even(i).value - oracle) < 1e-12

    def test_mpmath(self):
        for i in range(1, 33):
            assert riemann_zeta_even(i).contains(float(mpmath.zeta(2 * i)))

    def test_decreasing_to_one(self):
        vals = [riemann_zeta_even(i).value for i in range(1, 33)]
        # 2^-2i drops below double resolution past i = 26
        assert all(a > b for a, b in zip(vals[:26], vals[1:26]))
        assert all(a >= b >= 1.0 for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.0, abs=1e-15)
