"""Exact arithmetic substrate: primes, quadratic symbols, polynomials mod p,
Bernoulli numbers and zeta at even integers.

Rationals are :class:`fractions.Fraction` throughout (always reduced, positive
denominator).  Polynomials are stored constant term first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errbounded import EPS, ErrBounded
from .errors import ResourceError, ValidationError

BigRat = Fraction

# largest sieve limit accepted (bytes of the odd-only bitmap ~ limit / 2)
SIEVE_LIMIT_BUDGET = 2 * 10 ** 9

_PI_50 = Decimal("3.14159265358979323846264338327950288419716939937510")


# --------------------------------------------------------------------------
# primes


def sieve_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` in ascending order as an int64 array."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit > SIEVE_LIMIT_BUDGET:
        raise ResourceError(
            f"sieve limit {limit} exceeds the budget of {SIEVE_LIMIT_BUDGET}")
    # index i of the odd-only table represents 2*i + 1
    size = (limit - 1) // 2 + 1
    odd = np.ones(size, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2::p] = False
    primes = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate(([2], primes)).astype(np.int64)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; intended for the small integers seen here."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# --------------------------------------------------------------------------
# quadratic symbols


def is_fundamental_discriminant(D: int) -> bool:
    """True for 1 and for discriminants of quadratic fields."""
    if D == 1:
        return True
    if D == 0:
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def kronecker_symbol(a: int, n: int) -> int:
    """The Kronecker symbol (a/n) for arbitrary integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, p: int) -> int:
    """Splitting of the prime ``p`` in the quadratic field of discriminant ``D``.

    +1 split, -1 inert, 0 ramified.
    """
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return kronecker_symbol(D, p)


def character_table(D: int) -> np.ndarray:
    """Values of the primitive character chi_D on residues 0 .. |D|-1."""
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    m = abs(D)
    return np.array([kronecker_symbol(D, a) for a in range(m)], dtype=np.int64)


def sqrt_mod(a: int, p: int) -> int:
    """A square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# --------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class PolyZ:
    """Integer polynomial, coefficients constant term first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c:
            c = (0,)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_string(cls, text: str) -> "PolyZ":
        return cls(tuple(int(t) for t in text.split(",")))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs != (0,) else -1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "PolyZ":
        return PolyZ(tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,))

    def discriminant(self) -> int:
        """Polynomial discriminant via the Sylvester resultant, exact."""
        n = self.degree
        if n < 1:
            raise ValueError("discriminant needs degree >= 1")
        res = resultant(self.coeffs, self.derivative().coeffs)
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * res // self.coeffs[-1]

    def real_roots(self, tol: float = 1e-12) -> list[float]:
        """Real roots, ascending; see :func:`real_roots`."""
        return real_roots(self.coeffs, tol)

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
            else:
                coef = f"{c:+d}"
            terms.append(f"{coef}{mono}")
        return "".join(terms).lstrip("+") or "0"


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of two integer polynomials (constant first) by Bareiss elimination."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr, gr = list(reversed(f)), list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _bareiss_det(a: list[list[int]]) -> int:
    a = [row[:] for row in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def real_roots(coeffs: Sequence[int], tol: float = 1e-12) -> list[float]:
    """Real roots of a square-free integer polynomial.

    Sturm sequences in exact rationals isolate the roots; each isolating
    interval is then bisected down to width ``tol``.
    """
    f = [Fraction(c) for c in coeffs]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    if len(f) < 2:
        return []
    sturm = _sturm_chain(f)
    bound = 1 + max(abs(c / f[-1]) for c in f[:-1])

    def count(x: Fraction) -> int:
        vals = [_eval_q(s, x) for s in sturm]
        signs = [v > 0 for v in vals if v != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    roots: list[float] = []
    stack = [(-bound, bound, count(-bound), count(bound))]
    tol_q = Fraction(tol)
    while stack:
        lo, hi, clo, chi = stack.pop()
        n = clo - chi
        if n == 0:
            continue
        if n == 1 and (hi - lo) <= tol_q:
            roots.append(float((lo + hi) / 2))
            continue
        mid = (lo + hi) / 2
        if n == 1 and _eval_q(f, mid) == 0:
            roots.append(float(mid))
            continue
        cmid = count(mid)
        if _eval_q(f, mid) == 0:
            # shift the split point off the root; roots are isolated
            mid = mid + (hi - lo) / 7
            cmid = count(mid)
        stack.append((lo, mid, clo, cmid))
        stack.append((mid, hi, cmid, chi))
    return sorted(roots)


def _eval_q(f, x):
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _sturm_chain(f: list[Fraction]) -> list[list[Fraction]]:
    df = [i * c for i, c in enumerate(f)][1:]
    chain = [f, df]
    while True:
        _, r = _divmod_q(chain[-2], chain[-1])
        if not r or all(c == 0 for c in r):
            break
        chain.append([-c for c in r])
    return chain


def _divmod_q(a, b):
    a = list(a)
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


# --------------------------------------------------------------------------
# polynomials over F_p (lists of ints, constant first, no trailing zeros)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
           for i in range(n)]
    return _trim(out)


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - c * bc) % p
        _trim(a)
    return _trim(q), a


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pmonic(a, p):
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return _pmonic(a, p) if a else []


def _pderiv(a, p):
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def _ppowmod(base, e, mod, p):
    result, b = [1], _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), mod, p)
        e >>= 1
        if e:
            b = _pmod(_pmul(b, b, p), mod, p)
    return result


def _pth_root(a, p):
    # a(x) = b(x^p) over F_p; the coefficient-wise p-th root is the identity
    return [a[i] for i in range(0, len(a), p)]


def squarefree_decomposition(f: Sequence[int], p: int) -> list[tuple[list[int], int]]:
    """Yun-style square-free factorization of a monic polynomial over F_p.

    Returns ``[(g, e), ...]`` with ``f = prod g**e`` and each ``g`` square-free,
    monic and of positive degree.
    """
    f = _pmonic(_trim([c % p for c in f]), p)
    out: list[tuple[list[int], int]] = []
    _sqf(f, p, 1, out)
    merged: dict[int, list[int]] = {}
    for g, e in out:
        merged[e] = _pmul(merged[e], g, p) if e in merged else g
    return sorted(((g, e) for e, g in merged.items()), key=lambda t: t[1])


def _sqf(f, p, mult, out):
    if len(f) <= 1:
        return
    df = _pderiv(f, p)
    if not df:
        _sqf(_pth_root(f, p), p, mult * p, out)
        return
    c = _pgcd(f, df, p)
    w = _pdivmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _pgcd(w, c, p)
        z = _pdivmod(w, y, p)[0]
        if len(z) > 1:
            out.append((_pmonic(z, p), i * mult))
        w = y
        c = _pdivmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        _sqf(_pth_root(c, p), p, mult * p, out)


def distinct_degree_factorization(g: Sequence[int], p: int) -> list[int]:
    """Degrees of the irreducible factors of a square-free monic ``g`` over F_p.

    Repeated gcd with ``x^(p^i) - x``; returns a sorted multiset of degrees.
    """
    g = _pmonic(_trim(list(g)), p)
    degrees: list[int] = []
    h = [0, 1]  # x
    i = 0
    while len(g) - 1 >= 2 * (i + 1):
        i += 1
        h = _ppowmod(h, p, g, p)
        d = _pgcd(g, _psub(h, [0, 1], p), p)
        if len(d) > 1:
            degrees.extend([i] * ((len(d) - 1) // i))
            g = _pdivmod(g, d, p)[0]
            h = _pmod(h, g, p)
    if len(g) > 1:
        degrees.append(len(g) - 1)
    return sorted(degrees)


@dataclass(frozen=True)
class SplittingType:
    """Multiset of ``(f, e)``: residue degree and ramification multiplicity."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for f, e in self.factors:
            if f < 1 or e < 1:
                raise ValueError(f"invalid factor (f={f}, e={e})")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def degree(self) -> int:
        return sum(f * e for f, e in self.factors)

    @property
    def unramified(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def norms(self, p: int) -> list[int]:
        """Norms ``p**f`` of the primes above ``p``."""
        return [p ** f for f, _ in self.factors]

    @classmethod
    def parse(cls, text: str) -> "SplittingType":
        """Parse ``"f^e*f^e..."`` e.g. ``"1^2*2^1"``."""
        parts = []
        for tok in text.split("*"):
            f, _, e = tok.partition("^")
            parts.append((int(f), int(e or 1)))
        return cls(tuple(parts))

    def __str__(self) -> str:
        return "*".join(f"{f}^{e}" for f, e in self.factors)


def poly_splitting_mod_p(f: PolyZ, p: int) -> SplittingType:
    """Factorization pattern of the monic polynomial ``f`` modulo ``p``."""
    if not f.is_monic:
        raise ValueError("polynomial must be monic")
    if f.coeffs[-1] % p == 0:  # unreachable for monic input
        raise ArithmeticError(f"p={p} divides the leading coefficient")
    factors = []
    for g, e in squarefree_decomposition(f.coeffs, p):
        for deg in distinct_degree_factorization(g, p):
            factors.append((deg, e))
    return SplittingType(tuple(factors))


# --------------------------------------------------------------------------
# Bernoulli numbers and zeta(2i)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0, with B_1 = -1/2
    B = [Fraction(1)]
    for m in range(1, n + 1):
        if m > 1 and m % 2:
            B.append(Fraction(0))
            continue
        s = sum(comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number ``B_m`` (``B_1 = -1/2``; odd ``m > 1`` give 0)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m > 1 and m % 2:
        return Fraction(0)
    if m > 64:
        raise ValueError("bernoulli is limited to m <= 64")
    return _bernoulli_table(max(m, 64))[m]


def riemann_zeta_even(i: int) -> ErrBounded:
    """zeta(2i) = (-1)^(i+1) B_2i (2 pi)^2i / (2 (2i)!), for 1 <= i <= 32.

    The rational part is exact and pi^2i is formed in 50-digit decimal
    arithmetic, so the only error is the final conversion to a double.
    """
    if not 1 <= i <= 32:
        raise ValueError("i must be in [1, 32]")
    q = abs(bernoulli(2 * i)) * 2 ** (2 * i - 1) / math.factorial(2 * i)
    with localcontext() as ctx:
        ctx.prec = 50
        val = Decimal(q.numerator) / Decimal(q.denominator) * _PI_50 ** (2 * i)
        value = float(val)
    # one rounding to double plus one in log(); log(zeta) is tiny
    return ErrBounded(math.log(value), 3 * EPS)


def binomial_rows(n: int) -> Iterable[list[int]]:
    """Rows of Pascal's triangle up to ``n`` (used by the Bernoulli checks)."""
    row = [1]
    for _ in range(n + 1):
        yield row
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
