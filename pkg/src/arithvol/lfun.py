"""Zeta and L-values at integers s >= 2, each with a rigorous error bound.

Three routes are available:

* even integers: exact Bernoulli numbers (``riemann_zeta_even``);
* Dirichlet L-functions of quadratic characters: finite sums of Hurwitz
  zeta values, which are evaluated by Euler-Maclaurin;
* Euler products over primes up to ``P`` with an explicit tail bound.

Tails use the Rosser-Schoenfeld estimate pi(x) < 1.25506 x / log x, which
gives ``sum_{p > P} p^-s <= 1.25506 s / ((s-1) log P) * P^(1-s)``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .core_arith import (bernoulli, character_table, is_fundamental_discriminant,
                         kronecker_symbol, riemann_zeta_even, sieve_primes, sqrt_mod)
from .errbounded import EPS, ErrBounded
from .errors import PrecisionError, ValidationError
from .fields import FieldPair, NumberField

DEFAULT_TOL = 1e-12
PRIME_LIMIT_CAP = 10 ** 8
ROSSER_SCHOENFELD = 1.25506


# ---------------------------------------------------------------------------
# Hurwitz zeta and Dirichlet L


def _rising(s: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= s + i
    return out


@lru_cache(maxsize=4096)
def hurwitz_zeta(s: int, x, tol: float = DEFAULT_TOL) -> ErrBounded:
    """zeta(s, x) = sum_{n >= 0} (n + x)^-s for integer s >= 2 and 0 < x <= 1.

    Euler-Maclaurin after ``N`` explicit terms.  The integrand is completely
    monotone, so the remainder is bounded by the first omitted correction.
    ``tol`` is relative.
    """
    if int(s) != s or s < 2:
        raise ValueError("s must be an integer >= 2")
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    xf = float(x)
    N = 12 + s
    terms = [(n + xf) ** -s for n in range(N)]
    y = N + xf
    terms.append(y ** (1 - s) / (s - 1))
    terms.append(0.5 * y ** -s)
    head = math.fsum(terms)
    remainder = None
    for j in range(1, 33):
        t = float(bernoulli(2 * j) / math.factorial(2 * j) * _rising(s, 2 * j - 1)) \
            * y ** (-s - 2 * j + 1)
        if abs(t) <= 0.01 * tol * head or j == 32:
            remainder = abs(t)
            break
        terms.append(t)
    value = math.fsum(terms)
    rounding = (s + 6) * EPS * math.fsum(abs(t) for t in terms)
    abs_err = remainder + rounding
    if abs_err > tol * value:
        raise PrecisionError(
            f"hurwitz_zeta({s}, {x}) reaches only {abs_err / value:.2e} relative",
            achievable=abs_err / value)
    return ErrBounded.from_value(value, abs_err)


def riemann_zeta(s: int, tol: float = DEFAULT_TOL) -> ErrBounded:
    """zeta(s): exact Bernoulli route for even s, Hurwitz otherwise."""
    if s % 2 == 0 and s <= 64:
        return riemann_zeta_even(s // 2)
    return hurwitz_zeta(s, Fraction(1), tol)


@lru_cache(maxsize=1024)
def dirichlet_L(D: int, s: int, tol: float = DEFAULT_TOL) -> ErrBounded:
    """L(s, chi_D) = |D|^-s sum_a chi_D(a) zeta(s, a/|D|) for a fundamental D."""
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if s < 2:
        raise ValueError("s must be >= 2")
    if D == 1:
        return riemann_zeta(s, tol)
    m = abs(D)
    chi = character_table(D)
    parts, bound = [], []
    inner_tol = tol / 8
    for a in range(1, m):
        c = int(chi[a])
        if c == 0:
            continue
        h = hurwitz_zeta(s, Fraction(a, m), inner_tol)
        v = h.value
        parts.append(c * v)
        bound.append(v * h.rel_err)
    total = math.fsum(parts)
    abs_sum = math.fsum(abs(p) for p in parts)
    err = math.fsum(bound) + 4 * EPS * abs_sum
    if total <= 0 or err > tol * total:
        raise PrecisionError(f"L({s}, chi_{D}) reaches only {err / total:.2e}",
                             achievable=err / abs(total))
    scale = m ** -s
    return ErrBounded.from_value(total * scale, err * scale)


# ---------------------------------------------------------------------------
# local data for Euler products


def prime_tail(s: int, P: int) -> float:
    """Upper bound for sum_{p > P} -log(1 - p^-s)."""
    S = ROSSER_SCHOENFELD * s / ((s - 1) * math.log(P)) * P ** (1.0 - s)
    return S / (1.0 - P ** -float(s))


def prime_limit_for(s: int, per_prime: float, tol: float) -> int:
    """Smallest power-of-two-ish P with ``per_prime * prime_tail(s, P) <= tol``."""
    P = 64
    while per_prime * prime_tail(s, P) > tol:
        P = int(P * 1.25) + 1
    return P


class LocalData:
    """Residue degrees of the primes above each rational prime ``p <= P``.

    ``counts[i, f - 1]`` is the number of primes of residue degree ``f`` above
    ``primes[i]``.  Built once per field and extended on demand.
    """

    def __init__(self, field: NumberField):
        self.field = field
        self.limit = 1
        self.primes = np.zeros(0, dtype=np.int64)
        self.counts = np.zeros((0, field.degree), dtype=np.int64)

    def ensure(self, P: int):
        if P <= self.limit:
            return
        P = max(P, 2 * self.limit)
        primes = sieve_primes(P)
        new = primes[primes > self.limit]
        rows = _local_counts(self.field, new)
        self.primes = np.concatenate([self.primes, new])
        self.counts = np.concatenate([self.counts, rows])
        self.limit = P

    def log_partial(self, s: int, P: int) -> tuple[float, float]:
        """``sum_{p <= P} log(local factor)`` and a bound on its rounding error."""
        self.ensure(P)
        n = int(np.searchsorted(self.primes, P, side="right"))
        p = self.primes[:n].astype(np.float64)
        total = np.zeros(n)
        for f in range(1, self.field.degree + 1):
            c = self.counts[:n, f - 1]
            if c.any():
                total -= c * np.log1p(-(p ** (-f * s)))
        value = float(np.sum(total))
        return value, 8 * EPS * (float(np.sum(np.abs(total))) + abs(value))


def _local_counts(F: NumberField, primes: np.ndarray) -> np.ndarray:
    d = F.degree
    out = np.zeros((len(primes), d), dtype=np.int64)
    if d == 1:
        out[:, 0] = 1
        return out
    if d == 2:
        # the character decides splitting exactly; overrides are not needed
        chi = character_table(F.quadratic_disc)
        v = chi[primes % F.disc]
        out[:, 0] = np.where(v == 1, 2, 1)
        out[v == -1, 0] = 0
        out[:, 1] = (v == -1).astype(np.int64)
        return out
    for i, p in enumerate(primes.tolist()):
        fs = _tower_degrees(F, p) if F.tower is not None else None
        if fs is None:
            fs = [f for f, _ in F.splitting(p).factors]
        for f in fs:
            out[i, f - 1] += 1
    return out


def _half_mod(q: Fraction, p: int) -> int:
    return q.numerator * pow(q.denominator, -1, p) % p


def _tower_degrees(F: NumberField, p: int) -> Optional[list[int]]:
    """Residue degrees in ``k(sqrt alpha)`` from quadratic symbols, or None.

    Valid when p is odd, unramified in ``k`` and alpha is a unit at every
    prime above p; otherwise the caller falls back to factoring.
    """
    t = F.tower
    if p == 2 or t.base_is_q or p in F.split_override:
        return None
    a, b = t.alpha
    if a.denominator % p == 0 or b.denominator % p == 0:
        return None
    m = t.m
    Dk = m if m % 4 == 1 else 4 * m
    split_k = kronecker_symbol(Dk, p)
    if split_k == 0:
        return None
    am, bm = _half_mod(a, p), _half_mod(b, p)
    if split_k == 1:
        r = sqrt_mod(m, p)
        out = []
        for root in (r, p - r):
            leg = kronecker_symbol((am + bm * root) % p, p)
            if leg == 0:
                return None
            out.extend([1, 1] if leg == 1 else [2])
        return out
    norm = (am * am - m * bm * bm) % p
    leg = kronecker_symbol(norm, p)
    if leg == 0:
        return None
    return [2, 2] if leg == 1 else [4]


_LOCAL: dict = {}


def local_data(F: NumberField) -> LocalData:
    key = (F.label, F.disc, F.poly)
    if key not in _LOCAL:
        _LOCAL[key] = LocalData(F)
    return _LOCAL[key]


# ---------------------------------------------------------------------------
# Dedekind zeta and relative L


def euler_product(F: NumberField, s: int, tol: float = DEFAULT_TOL,
                  prime_limit_cap: int = PRIME_LIMIT_CAP) -> ErrBounded:
    """zeta_F(s) as a truncated Euler product.

    The tail of ``log zeta_F`` lies in ``[0, d * tail(P)]``; the result is
    centred in that interval.
    """
    if s < 2:
        raise ValueError("s must be >= 2")
    d = F.degree
    # half-width d*tail/2 must stay below tol; leave room for rounding
    P = prime_limit_for(s, d / 2, 0.9 * tol)
    if P > prime_limit_cap:
        achievable = d / 2 * prime_tail(s, prime_limit_cap)
        raise PrecisionError(
            f"zeta_{F.label}({s}) to {tol:.1e} needs primes up to {P}, "
            f"above the cap {prime_limit_cap}; achievable {achievable:.2e}",
            achievable=achievable)
    partial, rnd = local_data(F).log_partial(s, P)
    tail = d * prime_tail(s, P)
    return ErrBounded(partial + tail / 2, tail / 2 + rnd)


@lru_cache(maxsize=1024)
def dedekind_zeta(F: NumberField, s: int, tol: float = DEFAULT_TOL,
                  prime_limit_cap: int = PRIME_LIMIT_CAP,
                  strategy: str = "auto", cross_check: bool = False) -> ErrBounded:
    """zeta_F(s) for integer s >= 2.

    ``strategy``: ``"auto"`` picks Bernoulli/character sums for Q and quadratic
    fields and the Euler product otherwise; ``"euler"`` forces the product.
    With ``cross_check`` a quadratic field is evaluated both ways and the two
    enclosures must overlap.
    """
    if s < 2 or int(s) != s:
        raise ValueError("s must be an integer >= 2")
    if strategy not in ("auto", "euler", "character"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if F.degree == 1 and strategy != "euler":
        return riemann_zeta(s, tol)
    if F.degree == 2 and strategy != "euler":
        val = riemann_zeta(s, tol / 2) * dirichlet_L(F.quadratic_disc, s, tol / 2)
        if cross_check:
            check_tol = max(tol, 1e-8)
            other = euler_product(F, s, check_tol, prime_limit_cap)
            if not val.agrees_with(other):
                raise ArithmeticError(
                    f"zeta_{F.label}({s}): character sum {val} and Euler product "
                    f"{other} disagree")
        return val
    if strategy == "character":
        raise ValueError("character-sum route needs a field of degree <= 2")
    return euler_product(F, s, tol, prime_limit_cap)


def relative_euler_product(pair: FieldPair, s: int, tol: float = DEFAULT_TOL,
                           prime_limit_cap: int = PRIME_LIMIT_CAP) -> ErrBounded:
    """zeta_l(s) / zeta_k(s) as one Euler product of local ratios.

    Every prime of ``k`` contributes a ratio within ``(1 +- q^-s)^-1``, so the
    tail of the log is at most ``[k:Q] * tail(P)`` in absolute value.
    """
    dk = pair.k.degree
    P = prime_limit_for(s, dk, 0.9 * tol)
    if P > prime_limit_cap:
        achievable = dk * prime_tail(s, prime_limit_cap)
        raise PrecisionError(
            f"L_{pair}({s}) to {tol:.1e} needs primes up to {P}; cap {prime_limit_cap}",
            achievable=achievable)
    lp, re = local_data(pair.ell).log_partial(s, P)
    kp, rk = local_data(pair.k).log_partial(s, P)
    return ErrBounded(lp - kp, dk * prime_tail(s, P) + re + rk + 4 * EPS * abs(lp - kp))


@lru_cache(maxsize=1024)
def relative_L(pair: FieldPair, s: int, tol: float = DEFAULT_TOL,
               prime_limit_cap: int = PRIME_LIMIT_CAP,
               strategy: str = "auto") -> ErrBounded:
    """L_{l|k}(s) = zeta_l(s) / zeta_k(s).

    Inner pairs give 1.  A quadratic ``l`` over Q is a Dirichlet L-value;
    any other quadratic tower goes through the Euler product of ratios.
    """
    if pair.form_kind == "inner":
        return ErrBounded.one()
    if pair.rel_degree == 3:
        raise ValueError("relative L-values of cubic extensions are not supported")
    if s < 2:
        raise ValueError("s must be >= 2")
    if pair.k.degree == 1 and strategy != "euler":
        return dirichlet_L(pair.ell.quadratic_disc, s, tol)
    return relative_euler_product(pair, s, tol, prime_limit_cap)


def euler_star_product(pair: FieldPair, r: int, tol: float = DEFAULT_TOL) -> ErrBounded:
    """zeta_k(2) zeta_k(4) ... zeta_k(2r-2) * L_{l|k}(r).

    ``tol`` applies to each factor; the product carries the summed error.
    """
    if r < 2:
        raise ValueError("rank must be >= 2")
    factors = [dedekind_zeta(pair.k, 2 * i, tol) for i in range(1, r)]
    factors.append(relative_L(pair, r, tol))
    return ErrBounded.product(factors)


def clear_caches():
    """Drop memoised values (mainly for tests that time evaluations)."""
    _LOCAL.clear()
    for fn in (hurwitz_zeta, dirichlet_L, dedekind_zeta, relative_L):
        fn.cache_clear()


def check_pair_for_L(pair: FieldPair):
    if pair.rel_degree == 2 and pair.k.degree > 1 and pair.tower is None:
        raise ValidationError(f"{pair}: tower data needed for the relative L-value")
