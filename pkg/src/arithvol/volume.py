"""Covolumes of principal arithmetic subgroups of Spin(n, 1), n = 2r - 1 odd.

``prasad_covolume`` evaluates the general formula

    mu = D_k^((2r^2 - r)/2) * (D_l / D_k^[l:k])^((2r-1)/2) * C(r)^d * E

for user supplied local data; the two ``vol_*_minimal`` functions evaluate the
closed forms for the smallest compact and non-compact orbifolds directly, so
the two can be checked against each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .errbounded import EPS, ErrBounded, log_exact
from .errors import ValidationError
from .fields import FieldPair, builtin_table, unit_image_order
from .lfun import DEFAULT_TOL, dedekind_zeta, euler_star_product, relative_L, riemann_zeta

LOG_2PI = math.log(2 * math.pi)
LOG_PI = math.log(math.pi)

# labels of the candidate fields in the builtin table
COMPACT_K, COMPACT_L = "k0", "l0"
NONCOMPACT_K, NONCOMPACT_L_EVEN = "Q", "Qs-3"

# tolerance of each zeta or L value; the propagated total is carried by the result
VOLUME_TOL = 1e-12



@dataclass(frozen=True)
class RankDim:
    r: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"rank must be >= 2, got {self.r}")

    @property
    def n(self) -> int:
        return 2 * self.r - 1

    @classmethod
    def from_n(cls, n: int) -> "RankDim":
        if n % 2 == 0 or n < 3:
            raise ValueError(f"dimension must be odd and >= 3, got {n}")
        return cls((n + 1) // 2)


def _rd(x) -> RankDim:
    return x if isinstance(x, RankDim) else RankDim(int(x))


@lru_cache(maxsize=None)
def constant_C(r: int) -> ErrBounded:
    """C(r) = (r-1)!/(2 pi)^r * prod_{i<r} (2i-1)!/(2 pi)^(2i), in log space."""
    if not 2 <= r <= 64:
        raise ValueError("r must lie in [2, 64]")
    # (2 pi) carries total exponent r + r(r-1) = r^2
    logs = [log_exact(math.factorial(r - 1)), -r * r * LOG_2PI]
    logs += [log_exact(math.factorial(2 * i - 1)) for i in range(1, r)]
    return ErrBounded.from_logs(logs)


def lambda_special(p: int, r: int) -> Fraction:
    """(p^r - 1)(p^(r-1) - 1)/(p + 1), the factor of a special parahoric at p."""
    if r < 2:
        raise ValueError("r must be >= 2")
    return Fraction((p ** r - 1) * (p ** (r - 1) - 1), p + 1)


def lambda_lower_bound(q: int, r_v: int) -> Fraction:
    """(2/3) (3q/4)^r_v, valid for every non-trivial lambda factor."""
    if q < 2 or r_v < 1:
        raise ValueError("need q >= 2 and r_v >= 1")
    return Fraction(2, 3) * Fraction(3 * q, 4) ** r_v


@dataclass(frozen=True)
class LocalFactor:
    place: str
    q: int
    r_v: int
    lam: Union[Fraction, ErrBounded]

    def as_err(self) -> ErrBounded:
        return self.lam if isinstance(self.lam, ErrBounded) else ErrBounded.exact(self.lam)


@dataclass(frozen=True)
class LocalFactorProfile:
    entries: tuple[LocalFactor, ...] = ()
    T: frozenset = frozenset()
    T1: frozenset = frozenset()
    R: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "T", frozenset(self.T))
        object.__setattr__(self, "T1", frozenset(self.T1))
        object.__setattr__(self, "R", frozenset(self.R))
        if not self.T1 <= self.T:
            raise ValidationError("T1 must be contained in T")
        for e in self.entries:
            lo = e.lam.interval()[1] if isinstance(e.lam, ErrBounded) else e.lam
            if lo < 1:
                raise ValidationError(f"lambda factor at {e.place} is below 1")

    def lambda_product(self) -> ErrBounded:
        return ErrBounded.product(e.as_err() for e in self.entries)


def _check_admissible(pair: FieldPair, r: int):
    k, ell = pair.k, pair.ell
    if k.s2 != 0:
        raise ValidationError(f"{k.label} is not totally real")
    d = k.degree
    if pair.form_kind == "outer-quadratic":
        want = (2, d - 1) if r % 2 else (2 * d - 2, 1)
        if ell.signature != want:
            raise ValidationError(
                f"{ell.label}: signature {ell.signature}, rank {r} needs {want}")
    elif pair.form_kind == "triality":
        if r != 4:
            raise ValidationError("triality forms have rank 4")
        if ell.s1 == 0:
            raise ValidationError(f"{ell.label}: needs a real place")
    elif r % 2 == 0 or d != 1:
        raise ValidationError("inner forms occur only for k = Q and odd rank")


def prasad_covolume(pair: FieldPair, rd, profile: Optional[LocalFactorProfile] = None,
                    tol: float = DEFAULT_TOL) -> ErrBounded:
    """Covolume mu of the principal arithmetic subgroup with the given local data."""
    rd = _rd(rd)
    r = rd.r
    _check_admissible(pair, r)
    profile = profile or LocalFactorProfile()
    k, ell = pair.k, pair.ell
    d = k.degree
    parts = [
        ErrBounded.exact(k.disc) ** Fraction(2 * r * r - r, 2),
        ErrBounded.exact(Fraction(ell.disc, k.disc ** pair.rel_degree)) ** Fraction(2 * r - 1, 2),
        constant_C(r) ** d,
        euler_star_product(pair, r, tol),
    ]
    if pair.form_kind == "inner":
        # for inner forms the last local exponent contributes zeta_k(r)
        parts.append(dedekind_zeta(k, r, tol))
    parts.append(profile.lambda_product())
    return ErrBounded.product(parts)


def mu_to_hyperbolic(mu: ErrBounded, n: int) -> ErrBounded:
    """Hyperbolic volume from mu: multiply by 4 pi^((n+1)/2) / ((n-1)/2)!."""
    if n % 2 == 0:
        raise ValueError("n must be odd")
    if not isinstance(mu, ErrBounded):
        raise ValueError("mu must be a positive ErrBounded")
    h = (n + 1) // 2
    factor = ErrBounded.from_logs([log_exact(4), h * LOG_PI,
                                   -log_exact(math.factorial(h - 1))])
    return mu * factor


# ---------------------------------------------------------------------------
# index constants


@dataclass(frozen=True)
class IndexProfile:
    nc: int
    epsilon: int
    q: int
    q_prime: int
    unit_image: int
    triality: bool = False

    @property
    def index(self) -> Fraction:
        val = Fraction(self.q, self.q_prime) * self.unit_image
        return 2 * val if self.triality else val


def candidate_pair(case: str) -> FieldPair:
    """The pair (k, l) carrying the minimal lattice; non-compact depends on r."""
    t = builtin_table()
    if case == "compact":
        return t.pair(COMPACT_K, COMPACT_L)
    raise ValueError(f"unknown case {case!r}")


def noncompact_pair(r: int) -> FieldPair:
    t = builtin_table()
    if r % 2:
        return t.pair(NONCOMPACT_K, NONCOMPACT_K)
    return t.pair(NONCOMPACT_K, NONCOMPACT_L_EVEN)


def minimal_index_constants(rd, case: str) -> IndexProfile:
    """[Gamma : Lambda] for the minimal lattice, with its ingredients.

    The unit image is computed from the field data; q and q' come from the
    local analysis at the ramified place (compact) or at 2 (non-compact).
    """
    r = _rd(rd).r
    if case == "compact":
        pair = candidate_pair("compact")
        if r % 2:
            u = unit_image_order(pair, 4, "odd-rank-compact")
            return IndexProfile(nc=4, epsilon=1, q=1, q_prime=2, unit_image=u)
        u = unit_image_order(pair, 2, "even-rank-compact")
        return IndexProfile(nc=2, epsilon=2, q=2, q_prime=2, unit_image=u)
    if case == "noncompact":
        pair = noncompact_pair(r)
        if r % 2:
            u = unit_image_order(pair, 4, "noncompact-inner")
            m = (r - 1) // 2
            if m % 2 == 0:
                return IndexProfile(nc=4, epsilon=1, q=1, q_prime=1, unit_image=u)
            return IndexProfile(nc=4, epsilon=1, q=4, q_prime=2, unit_image=u)
        u = unit_image_order(pair, 2, "noncompact-even")
        return IndexProfile(nc=2, epsilon=2, q=2, q_prime=2, unit_image=u)
    raise ValueError(f"unknown case {case!r}")


def candidate_profile(rd, case: str) -> LocalFactorProfile:
    """Local data of the minimal principal arithmetic subgroup."""
    r = _rd(rd).r
    if case == "compact":
        return LocalFactorProfile()
    if case == "noncompact":
        if r % 4 == 3:
            lam = lambda_special(2, r)
            return LocalFactorProfile((LocalFactor("(2)", 2, r - 1, lam),), T={"(2)"})
        return LocalFactorProfile()
    raise ValueError(f"unknown case {case!r}")


def minimal_covolume_mu(rd, case: str, tol: float = VOLUME_TOL) -> ErrBounded:
    """mu(H / Gamma) for the minimal lattice along the general formula."""
    rd = _rd(rd)
    pair = candidate_pair(case) if case == "compact" else noncompact_pair(rd.r)
    mu_lambda = prasad_covolume(pair, rd, candidate_profile(rd, case), tol)
    index = minimal_index_constants(rd, case).index
    return mu_lambda / ErrBounded.exact(index)


def pipeline_volume(rd, case: str, tol: float = VOLUME_TOL) -> ErrBounded:
    rd = _rd(rd)
    return mu_to_hyperbolic(minimal_covolume_mu(rd, case, tol), rd.n)


# ---------------------------------------------------------------------------
# closed forms




def _check_n(rd) -> RankDim:
    rd = _rd(rd)
    if rd.r < 3:
        raise ValueError("closed forms need n >= 5")
    return rd


def _zeta_gamma_product(k, r: int, tol: float, square: bool) -> list[ErrBounded]:
    """prod_{i<r} ((2i-1)!^e / (2 pi)^(2ie)) zeta_k(2i), e = 2 if square else 1."""
    e = 2 if square else 1
    out = []
    for i in range(1, r):
        z = dedekind_zeta(k, 2 * i, tol)
        g = ErrBounded.from_logs([e * log_exact(math.factorial(2 * i - 1)),
                                  -2 * i * e * LOG_2PI])
        out.extend([z, g])
    return out


def vol_compact_minimal(rd, tol: float = VOLUME_TOL) -> ErrBounded:
    """Hyperbolic volume of the smallest compact arithmetic orbifold of odd dimension."""
    rd = _check_n(rd)
    r = rd.r
    pair = candidate_pair("compact")
    head = ErrBounded.from_logs([(r * r - r / 2) * math.log(5), (r - 0.5) * math.log(11),
                                 log_exact(math.factorial(r - 1)),
                                 -(2 * r - 1) * math.log(2), -r * LOG_PI])
    parts = [head, relative_L(pair, r, tol)]
    parts += _zeta_gamma_product(pair.k, r, tol, square=True)
    return ErrBounded.product(parts)


def vol_noncompact_minimal(rd, tol: float = VOLUME_TOL) -> ErrBounded:
    """Hyperbolic volume of the smallest non-compact arithmetic orbifold."""
    rd = _check_n(rd)
    r = rd.r
    pair = noncompact_pair(r)
    if r % 4 == 1:
        head = ErrBounded.exact(Fraction(1, 2 ** (r - 2)))
        last = riemann_zeta(r, tol)
    elif r % 4 == 3:
        head = ErrBounded.exact(Fraction((2 ** r - 1) * (2 ** (r - 1) - 1), 3 * 2 ** (r - 1)))
        last = riemann_zeta(r, tol)
    else:
        head = ErrBounded.from_logs([(r - 0.5) * math.log(3), -(r - 1) * math.log(2)])
        last = relative_L(pair, r, tol)
    parts = [head, last] + _zeta_gamma_product(pair.k, r, tol, square=False)
    return ErrBounded.product(parts)


def vol_minimal(rd, case: str, tol: float = VOLUME_TOL) -> ErrBounded:
    if case == "compact":
        return vol_compact_minimal(rd, tol)
    if case == "noncompact":
        return vol_noncompact_minimal(rd, tol)
    raise ValueError(f"unknown case {case!r}")


def formula_case(rd, case: str) -> str:
    """Short tag naming the branch of the closed form used for this rank."""
    r = _rd(rd).r
    if case == "compact":
        return "compact"
    return {1: "r=1 mod 4", 3: "r=3 mod 4"}.get(r % 4, "r even")
