"""Inequalities that rule out candidate field pairs.

Every lattice of small covolume is defined over a totally real field k with a
splitting field l.  The covolume of the maximal lattice is bounded below by a
power of the discriminants divided by a bound on the normalizer index; the
class number entering that index is itself bounded through Brauer-Siegel.
Comparing with the covolume of the known candidate (the *target*) gives
discriminant cutoffs.  All quantities are in the normalization mu of the
covolume formula, where the hyperbolic factor cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errbounded import ErrBounded
from .errors import ArithVolError, ValidationError
from .volume import RankDim, constant_C, minimal_covolume_mu, vol_compact_minimal, \
    vol_noncompact_minimal

LOG_PI_OVER_12 = math.log(math.pi / 12)


class CaseKind(str, Enum):
    COMPACT_ODD = "compact-odd"
    COMPACT_EVEN = "compact-even"
    TRIALITY = "triality"
    NONCOMPACT_INNER = "noncompact-inner"
    NONCOMPACT_OUTER_ODD = "noncompact-outer-odd"
    NONCOMPACT_EVEN = "noncompact-even"

    @classmethod
    def parse(cls, name) -> "CaseKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        key = key.replace("-rank", "")
        for c in cls:
            if c.value == key:
                return c
        raise ValueError(f"unknown case {name!r}; expected one of "
                         + ", ".join(c.value for c in cls))

    @property
    def compact(self) -> bool:
        return self in (CaseKind.COMPACT_ODD, CaseKind.COMPACT_EVEN, CaseKind.TRIALITY)

    @property
    def rel_degree(self) -> int:
        if self is CaseKind.NONCOMPACT_INNER:
            return 1
        return 3 if self is CaseKind.TRIALITY else 2

    @property
    def uses_ramified(self) -> bool:
        """Whether 2^#R appears in the index bound."""
        return self in (CaseKind.COMPACT_EVEN, CaseKind.TRIALITY, CaseKind.NONCOMPACT_EVEN)

    @property
    def unit_condition(self) -> Optional[tuple[int, str]]:
        """(nc, condition name) for the unit-image refinement."""
        return {
            CaseKind.COMPACT_ODD: (4, "odd-rank-compact"),
            CaseKind.COMPACT_EVEN: (2, "even-rank-compact"),
            CaseKind.NONCOMPACT_OUTER_ODD: (4, "noncompact-outer-odd"),
            CaseKind.NONCOMPACT_EVEN: (2, "noncompact-even"),
        }.get(self)

    def check_rank(self, r: int) -> None:
        if self is CaseKind.TRIALITY:
            if r != 4:
                raise ValueError("triality forms have rank 4")
            return
        odd = self in (CaseKind.COMPACT_ODD, CaseKind.NONCOMPACT_INNER,
                       CaseKind.NONCOMPACT_OUTER_ODD)
        if odd and (r < 3 or r % 2 == 0):
            raise ValueError(f"{self.value} needs odd r >= 3")
        if not odd and (r < 4 or r % 2):
            raise ValueError(f"{self.value} needs even r >= 4")
        if r > 64:
            raise ValueError("r must be at most 64")

    def admissible_signature(self, d: int, sig: tuple[int, int]) -> bool:
        """Signature constraint on l of degree rel_degree * d."""
        s1, s2 = sig
        if s1 + 2 * s2 != self.rel_degree * d:
            return False
        if self is CaseKind.COMPACT_ODD:
            return sig == (2, d - 1)
        if self is CaseKind.COMPACT_EVEN:
            return sig == (2 * d - 2, 1)
        if self is CaseKind.TRIALITY:
            return s1 >= 1
        if self is CaseKind.NONCOMPACT_OUTER_ODD:
            return s2 == 0
        if self is CaseKind.NONCOMPACT_EVEN:
            return s1 == 0
        return True


# ---------------------------------------------------------------------------
# external facts, stored rather than recomputed


@dataclass(frozen=True)
class DiscriminantFloor:
    """D > base**degree for every totally real field of degree >= min_degree."""
    min_degree: int
    base: float
    source: str


# unconditional bounds for totally real fields
ODLYZKO_TOTALLY_REAL = (
    DiscriminantFloor(5, 6.5, "Odlyzko, unconditional table of discriminant bounds"),
    DiscriminantFloor(7, 9.3, "Odlyzko, unconditional table of discriminant bounds"),
)

# degree of l -> lower bound on D_l (fields with at least one real place)
ODLYZKO_ELL = {9: 6.1 ** 9}


@dataclass(frozen=True)
class ClassNumberFact:
    """Every field of the given degree and signature with D <= d_max has h <= h_max."""
    degree: int
    signatures: tuple[tuple[int, int], ...]
    d_max: int
    h_max: int
    source: str


CLASS_NUMBER_FACTS = (
    ClassNumberFact(4, ((2, 1),), 5893, 1, "tables of quartic fields (Bordeaux)"),
    ClassNumberFact(4, ((2, 1),), 28662, 3, "tables of quartic fields (QaoS)"),
    ClassNumberFact(6, ((2, 2),), 409830, 1, "tables of sextic fields (Bordeaux, QaoS)"),
    ClassNumberFact(6, ((2, 2), (4, 1), (6, 0)), 445619, 1, "tables of sextic fields (QaoS)"),
)


def odlyzko_floor(d: int) -> Optional[float]:
    """Best stored lower bound for the discriminant of a totally real field of degree d."""
    best = None
    for f in ODLYZKO_TOTALLY_REAL:
        if d >= f.min_degree:
            v = f.base ** d
            best = v if best is None else max(best, v)
    return best


def class_number_cap(degree: int, sig: Optional[tuple[int, int]], d_ell: float,
                     signatures=None) -> Optional[int]:
    """Smallest h_max over stored facts covering every admissible l with D_l <= d_ell."""
    best = None
    for f in CLASS_NUMBER_FACTS:
        if f.degree != degree or d_ell > f.d_max:
            continue
        need = set(signatures) if signatures is not None else {sig}
        if not need <= set(f.signatures):
            continue
        best = f.h_max if best is None else min(best, f.h_max)
    return best


# ---------------------------------------------------------------------------
# class number and index


def h_ell_bound(D_ell: float, d: int, rel_degree: int = 2) -> float:
    """Brauer-Siegel at s = 2 with regulator >= 1/4: h <= 16 (pi/12)^(deg l) D_l."""
    if D_ell < 1 or d < 1:
        raise ValueError("need D_ell >= 1 and d >= 1")
    return 16 * math.exp(rel_degree * d * LOG_PI_OVER_12) * D_ell


def brauer_siegel_bound(s: float, d: int, D_ell: float, R_lb: float = 0.25) -> float:
    """Upper bound for h_l when l has degree 2d and signature (2, d - 1)."""
    if s <= 1:
        raise ValueError("s must exceed 1")
    if d < 1 or D_ell < 1 or R_lb <= 0:
        raise ValueError("need d >= 1, D_ell >= 1 and a positive regulator bound")
    from .lfun import riemann_zeta
    zeta_s = riemann_zeta(int(s)).value if float(s).is_integer() and s >= 2 \
        else _zeta_real(s)
    log_b = (math.log(2 * s * (s - 1)) - 2 * math.log(2)
             + 2 * math.lgamma(s / 2) + (d - 1) * math.lgamma(s)
             + s / 2 * ((2 - 2 * d) * math.log(2) - 2 * d * math.log(math.pi)
                        + math.log(D_ell))
             + 2 * d * math.log(zeta_s))
    return math.exp(log_b) / R_lb


def _zeta_real(s: float) -> float:
    # zeta(s) for real s > 1 by Euler-Maclaurin; only used off the integers
    N = 20
    head = math.fsum(n ** -s for n in range(1, N))
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** -s + s * N ** (-s - 1) / 12
    return head + tail


def index_upper_bound(case, d: int, cardR: int, cardT1: int, h_ell: int) -> Fraction:
    """Upper bound for [Gamma : Lambda] from the structure of the normalizer."""
    case = CaseKind.parse(case)
    if min(d, cardR, cardT1, h_ell) < 0 or d < 1 or h_ell < 1:
        raise ValueError("parameters must be non-negative, d and h_ell positive")
    if case.compact and d < 2:
        raise ValueError(f"{case.value} requires k != Q (d >= 2)")
    if not case.compact and d != 1:
        raise ValueError(f"{case.value} requires k = Q (d = 1)")
    t1 = 4 ** cardT1
    table = {
        CaseKind.COMPACT_ODD: 2 ** (d + 1) * t1 * h_ell,
        CaseKind.COMPACT_EVEN: 2 ** (2 * d - 1) * 2 ** cardR * t1 * h_ell,
        CaseKind.TRIALITY: 2 ** (3 * d + 1) * 2 ** cardR * t1 * h_ell,
        CaseKind.NONCOMPACT_INNER: t1,
        CaseKind.NONCOMPACT_OUTER_ODD: 8 * t1 * h_ell,
        CaseKind.NONCOMPACT_EVEN: 4 * 2 ** cardR * t1 * h_ell,
    }
    return Fraction(table[case])


def _unit_part(case: CaseKind, d: int, unit_image: Optional[int]) -> int:
    """Factor of the index bound coming from units (and the 2 of triality)."""
    if unit_image is None:
        return {
            CaseKind.COMPACT_ODD: 2 ** (d + 1),
            CaseKind.COMPACT_EVEN: 2 ** (2 * d - 1),
            CaseKind.TRIALITY: 2 ** (3 * d + 1),
            CaseKind.NONCOMPACT_INNER: 1,
            CaseKind.NONCOMPACT_OUTER_ODD: 8,
            CaseKind.NONCOMPACT_EVEN: 4,
        }[case]
    if unit_image < 1:
        raise ValueError("unit_image must be positive")
    if case is CaseKind.NONCOMPACT_OUTER_ODD:
        return 2 * unit_image
    if case is CaseKind.TRIALITY:
        return 2 * unit_image
    return unit_image


# ---------------------------------------------------------------------------
# covolume lower bound


def covolume_lower_bound(case, r: int, d: int, D_k: float, D_ell: Optional[float] = None,
                         *, h: Optional[int] = None, card_R: Optional[int] = None,
                         unit_image: Optional[int] = None,
                         literal_single_ramified: bool = False,
                         _extrapolate: bool = False) -> ErrBounded:
    """Lower bound for mu(H/Gamma) over pairs with the given discriminants.

    Unknown data is replaced by its bound: ``h`` by Brauer-Siegel, ``2^#R``
    by ``D_l / D_k^[l:k]``, ``D_l`` (when omitted) by its minimum
    ``D_k^[l:k]``.  The bound is increasing in whichever discriminant is free.
    ``literal_single_ramified`` drops one factor 2 from ``2^#R`` when
    ``#R = 1``, matching a looser variant of the bound.
    """
    case = CaseKind.parse(case)
    case.check_rank(r)
    if case.compact:
        if d < 2:
            raise ValueError(f"{case.value} requires d >= 2")
        if D_k < 1:
            raise ValueError("D_k must be >= 1")
    else:
        if d != 1 or D_k != 1:
            raise ValueError(f"{case.value} requires k = Q (d = 1, D_k = 1)")
    C = constant_C(r) ** d
    if case is CaseKind.NONCOMPACT_INNER:
        # the Euler product and lambda factors only increase mu
        return C
    t = case.rel_degree
    if D_ell is None:
        if not case.compact:
            raise ValueError("D_ell is required when k = Q")
        D_ell = D_k ** t
    if D_ell < D_k ** t * (1 - 1e-12) and not _extrapolate:
        raise ValidationError(f"D_ell = {D_ell} is below D_k^{t} = {D_k ** t}")
    log_dk = math.log(D_k)
    log_rel = math.log(D_ell) - t * log_dk
    logs = [(r * r - r / 2) * log_dk, (r - 0.5) * log_rel]
    logs.append(-math.log(_unit_part(case, d, unit_image)))
    if case.uses_ramified:
        if card_R is None:
            logs.append(-log_rel)
        else:
            eff = card_R - 1 if literal_single_ramified and card_R == 1 else card_R
            logs.append(-eff * math.log(2))
    if h is None:
        logs.append(-math.log(h_ell_bound(D_ell, d, t)))
    else:
        if h < 1:
            raise ValueError("h must be positive")
        logs.append(-math.log(h))
    return ErrBounded.from_logs(logs) * C


# ---------------------------------------------------------------------------
# targets


TARGET_MODES = ("exact", "parity")


def parity_star_bound(r: int) -> float:
    """Rounded upper bound for the Euler product of the compact candidate."""
    return 1.17 if r <= 16 else 2.0


def target(case, r: int, mode: str = "exact") -> ErrBounded:
    """Upper bound on the minimal covolume mu for the case at rank r.

    ``exact`` evaluates the candidate's covolume; ``parity`` uses looser
    rounded reference bounds.
    """
    case = CaseKind.parse(case)
    case.check_rank(r)
    if mode not in TARGET_MODES:
        raise ValueError(f"mode must be one of {TARGET_MODES}")
    rd = RankDim(r)
    if mode == "exact":
        return minimal_covolume_mu(rd, "compact" if case.compact else "noncompact")
    C = constant_C(r)
    if case.compact:
        head = ErrBounded.from_logs([math.log(parity_star_bound(r) / 2),
                                     (r * r - r / 2) * math.log(5),
                                     (r - 0.5) * math.log(11)])
        return head * C ** 2
    if r % 2 == 0:
        return ErrBounded.from_logs([(r - 0.5) * math.log(3)]) * C
    if r % 4 == 1:
        return ErrBounded.exact(2) * C
    if r < 7:
        raise ValueError("the reference non-compact bound for r = 3 mod 4 needs r >= 7")
    return ErrBounded.from_logs([(r - 0.5) * math.log(4), -math.log(3)]) * C


# ---------------------------------------------------------------------------
# cutoffs


@dataclass(frozen=True)
class Cutoff:
    """Largest free discriminant whose lower bound does not exceed the target."""
    real: float
    integer: int

    @property
    def rounded(self) -> float:
        return round(self.real, 2)


def exceeds(lb: ErrBounded, tgt: ErrBounded) -> bool:
    """True when lb > tgt holds rigorously."""
    return lb.log_value - lb.abs_err_log > tgt.log_value + tgt.abs_err_log


def log_margin(lb: ErrBounded, tgt: ErrBounded) -> float:
    """log10(lb / tgt); positive means the pair is ruled out."""
    return (lb.log_value - tgt.log_value) / math.log(10)


def discriminant_cutoff(case, r: int, d: int, tgt: ErrBounded, which: str = "D_k",
                        D_k: Optional[float] = None, *, h: Optional[int] = None,
                        card_R: Optional[int] = None, unit_image: Optional[int] = None,
                        literal_single_ramified: bool = False) -> Cutoff:
    """Cutoff for D_k (D_k-only bound) or for D_l at a fixed D_k."""
    case = CaseKind.parse(case)
    if which not in ("D_k", "D_ell"):
        raise ValueError("which must be 'D_k' or 'D_ell'")
    if which == "D_k" and not case.compact:
        raise ValueError("D_k is fixed to 1 when k = Q")
    if which == "D_ell" and D_k is None:
        D_k = 1 if not case.compact else None
        if D_k is None:
            raise ValueError("D_k is required for a D_ell cutoff")
    kw = dict(h=h, card_R=card_R, unit_image=unit_image,
              literal_single_ramified=literal_single_ramified, _extrapolate=True)

    # below D_k^[l:k] the bound is extended as the same power law, so the
    # real threshold stays meaningful when no admissible D_l exists
    if which == "D_k":
        def lb(x):
            return covolume_lower_bound(case, r, d, x, None, **kw)
    else:
        def lb(x):
            return covolume_lower_bound(case, r, d, D_k, x, **kw)
    lo = 1.0

    def f(x):
        return lb(x).log_value

    # grow an upper bracket; the bound is a positive power of x
    hi = max(2 * lo, 2.0)
    while f(hi) <= tgt.log_value:
        hi *= 2
        if hi > 1e300:
            raise ArithVolError("no cutoff: lower bound does not grow")
    _check_monotone(f, lo, hi)
    if f(lo) > tgt.log_value:
        real = lo
    else:
        a, b = math.log(lo), math.log(hi)
        for _ in range(200):
            m = (a + b) / 2
            if f(math.exp(m)) <= tgt.log_value:
                a = m
            else:
                b = m
        real = math.exp(a)
    # integers: keep every value not rigorously excluded
    n = max(int(math.floor(real)) + 2, 1)
    while n >= 1 and exceeds(lb(n), tgt):
        n -= 1
    return Cutoff(real, n)


def _check_monotone(f, lo: float, hi: float, samples: int = 16) -> None:
    xs = [lo * (hi / lo) ** (i / samples) for i in range(samples + 1)]
    vals = [f(x) for x in xs]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ArithVolError("lower bound is not increasing in the free discriminant")


# ---------------------------------------------------------------------------
# growth


def growth_ratio(n: int) -> ErrBounded:
    """vol(compact minimum) / vol(non-compact minimum) in dimension n."""
    if n < 5 or n % 2 == 0:
        raise ValueError("n must be odd and >= 5")
    rd = RankDim.from_n(n)
    return vol_compact_minimal(rd) / vol_noncompact_minimal(rd)
