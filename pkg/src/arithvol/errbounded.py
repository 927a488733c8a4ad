"""Positive reals carried in log space together with a rigorous error bound.

Every analytic quantity in the package (zeta values, Euler products,
covolumes spanning 1e-18 .. 1e163) is an :class:`ErrBounded`.  The true value
``v`` satisfies ``|log v - log_value| <= abs_err_log``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

EPS = 2.0 ** -52
# exp() overflows just above 709.78; stay well clear of it
MAX_EXP_LOG = 700.0


def rounding(*terms: float) -> float:
    """Bound on the rounding error of summing ``terms`` in double precision."""
    return 2 * EPS * (len(terms) + 1) * math.fsum(abs(t) for t in terms)


def log_exact(q) -> float:
    """Natural log of a positive int or Fraction, accurate to a few ulps.

    ``math.log`` accepts arbitrarily large integers, so numerator and
    denominator are never rounded to floats first.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"log of non-positive value {q}")
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class ErrBounded:
    log_value: float
    abs_err_log: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.log_value):
            raise ValueError(f"log_value must be finite, got {self.log_value}")
        if not (self.abs_err_log >= 0 and math.isfinite(self.abs_err_log)):
            raise ValueError(f"abs_err_log must be finite and >= 0, got {self.abs_err_log}")

    # constructors -------------------------------------------------------

    @classmethod
    def from_value(cls, value: float, abs_err: float = 0.0) -> "ErrBounded":
        """Wrap a positive float known to within ``abs_err`` (absolute)."""
        if not value > 0:
            raise ValueError(f"value must be positive, got {value}")
        if abs_err >= value:
            raise ValueError("absolute error swamps the value; sign undetermined")
        lv = math.log(value)
        err = -math.log1p(-abs_err / value) + rounding(lv)
        return cls(lv, err)

    @classmethod
    def exact(cls, q) -> "ErrBounded":
        """An exact positive rational; only the log rounding is charged."""
        lv = log_exact(q)
        return cls(lv, 4 * EPS * (abs(lv) + 1.0))

    @classmethod
    def one(cls) -> "ErrBounded":
        return cls(0.0, 0.0)

    @classmethod
    def from_logs(cls, terms) -> "ErrBounded":
        """Sum of logs that were each computed to within a few ulps."""
        terms = list(terms)
        lv = math.fsum(terms)
        return cls(lv, 8 * EPS * (math.fsum(abs(t) for t in terms) + 1.0))

    @classmethod
    def product(cls, factors) -> "ErrBounded":
        """Product of many factors with a compensated log sum."""
        factors = list(factors)
        if not factors:
            return cls.one()
        logs = [f.log_value for f in factors]
        lv = math.fsum(logs)
        err = math.fsum(f.abs_err_log for f in factors) + 2 * EPS * abs(lv)
        return cls(lv, err)

    # arithmetic ---------------------------------------------------------

    def __mul__(self, other: "ErrBounded") -> "ErrBounded":
        if not isinstance(other, ErrBounded):
            return NotImplemented
        lv = self.log_value + other.log_value
        return ErrBounded(lv, self.abs_err_log + other.abs_err_log + rounding(lv))

    def __truediv__(self, other: "ErrBounded") -> "ErrBounded":
        if not isinstance(other, ErrBounded):
            return NotImplemented
        lv = self.log_value - other.log_value
        return ErrBounded(lv, self.abs_err_log + other.abs_err_log
                          + rounding(self.log_value, other.log_value))

    def __pow__(self, k) -> "ErrBounded":
        """Raise to an exact rational power (ints, Fractions, or halves as floats)."""
        kf = float(k)
        lv = self.log_value * kf
        return ErrBounded(lv, abs(kf) * self.abs_err_log + rounding(lv))

    def scale(self, q) -> "ErrBounded":
        """Multiply by an exact positive rational."""
        return self * ErrBounded.exact(q)

    # inspection ---------------------------------------------------------

    @property
    def value(self) -> float:
        if self.log_value > MAX_EXP_LOG:
            raise OverflowError(
                f"value exp({self.log_value:.3f}) overflows a float; stay in log space")
        return math.exp(self.log_value)

    @property
    def rel_err(self) -> float:
        """Bound on ``|v_true / value - 1|``."""
        return math.expm1(self.abs_err_log)

    @property
    def log10(self) -> float:
        return self.log_value / math.log(10)

    def interval(self) -> tuple[float, float]:
        return (math.exp(self.log_value - self.abs_err_log),
                math.exp(self.log_value + self.abs_err_log))

    def contains(self, x: float) -> bool:
        return abs(math.log(x) - self.log_value) <= self.abs_err_log

    def agrees_with(self, other: "ErrBounded", slack: float = 0.0) -> bool:
        """True when the two enclosures overlap (optionally widened by ``slack``)."""
        return (abs(self.log_value - other.log_value)
                <= self.abs_err_log + other.abs_err_log + slack)

    def mantissa_exponent(self) -> tuple[float, int]:
        l10 = self.log10
        e = math.floor(l10)
        m = 10.0 ** (l10 - e)
        if m >= 10.0 - 1e-12:
            m, e = m / 10.0, e + 1
        return m, e

    def format(self, digits: int = 6) -> str:
        """Scientific notation with exactly ``digits`` significant digits."""
        if digits < 1:
            raise ValueError("digits must be >= 1")
        m, e = self.mantissa_exponent()
        text = f"{m:.{digits - 1}f}"
        if float(text) >= 10.0:  # rounding carried into a new digit
            e += 1
            text = f"{m / 10.0:.{digits - 1}f}"
        return f"{text}e{e:+d}"

    def __str__(self) -> str:
        return f"{self.format()} (rel err <= {self.rel_err:.1e})"
