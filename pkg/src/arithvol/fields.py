"""Number fields, quadratic towers ``l = k(sqrt(alpha))`` and their unit groups.

Fields are ingested from a small tab-separated table (see ``parse_field_table``).
Towers are restricted to a base ``k`` that is Q or real quadratic, which is all
the volume search ever needs.  Arithmetic in a tower is exact over
:class:`fractions.Fraction`; signs at real embeddings are decided exactly too,
so no unit computation depends on floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from typing import Iterable, Optional

from .core_arith import PolyZ, SplittingType, factorize, is_prime
from .errors import ParseError, ValidationError

Q0 = Fraction(0)
Q1 = Fraction(1)

# ---------------------------------------------------------------------------
# exact arithmetic in Q(sqrt m) and Q(sqrt m)(sqrt alpha)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class Tower:
    """``l = k(sqrt(alpha))`` with ``k = Q(sqrt m)``; ``m = 1`` encodes ``k = Q``.

    ``alpha = a + b*sqrt(m)`` is stored as the pair ``(a, b)``.
    """

    m: int
    alpha: tuple[Fraction, Fraction]

    def __post_init__(self):
        a, b = (Fraction(x) for x in self.alpha)
        object.__setattr__(self, "alpha", (a, b))
        if self.m == 1 and b != 0:
            raise ValidationError("base Q (m=1) needs alpha with zero sqrt(m) part")
        if self.m != 1 and (self.m <= 1 or any(e > 1 for e in factorize(self.m).values())):
            raise ValidationError(f"base radicand m={self.m} must be 1 or a squarefree integer > 1")

    # base field helpers; elements of k are pairs (a, b) = a + b sqrt(m)

    def kmul(self, x, y):
        return (x[0] * y[0] + self.m * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def kadd(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def kconj(self, x):
        return (x[0], -x[1])

    def ksign(self, x, s_m: int = 1) -> int:
        """Exact sign of ``x`` at the embedding ``sqrt(m) -> s_m*sqrt(m)``."""
        a, b = x[0], s_m * x[1]
        if self.m == 1:
            return _sign(a + b)
        sa, sb = _sign(a), _sign(b)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        return sa if a * a > b * b * self.m else sb

    def kfloat(self, x, s_m: int = 1) -> float:
        return float(x[0]) + s_m * float(x[1]) * math.sqrt(self.m)

    @property
    def base_is_q(self) -> bool:
        return self.m == 1

    def base_embeddings(self) -> list[int]:
        return [1] if self.m == 1 else [1, -1]

    def real_places(self) -> list[tuple[int, int]]:
        """Real embeddings of ``l`` as sign pairs ``(s_m, s_alpha)``.

        Ordered by the image of ``sqrt(alpha)``, ascending.  An embedding of
        ``k`` extends to two real ones exactly when alpha is positive there.
        """
        out = []
        for s_m in self.base_embeddings():
            if self.ksign(self.alpha, s_m) > 0:
                root = math.sqrt(self.kfloat(self.alpha, s_m))
                out.extend([(-root, s_m, -1), (root, s_m, 1)])
        out.sort()
        return [(s_m, s_a) for _, s_m, s_a in out]

    def element(self, a=0, b=0, c=0, d=0) -> "TowerElement":
        return TowerElement(self, (Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))

    def one(self) -> "TowerElement":
        return self.element(1)


@dataclass(frozen=True)
class TowerElement:
    """``(a + b sqrt m) + (c + d sqrt m) sqrt(alpha)``, exact."""

    tower: Tower
    base_part: tuple[Fraction, Fraction]
    radical_part: tuple[Fraction, Fraction] = (Q0, Q0)

    def __post_init__(self):
        object.__setattr__(self, "base_part", tuple(Fraction(x) for x in self.base_part))
        object.__setattr__(self, "radical_part", tuple(Fraction(x) for x in self.radical_part))

    def _check(self, other):
        if other.tower != self.tower:
            raise ValueError("elements live in different towers")

    def __add__(self, other: "TowerElement") -> "TowerElement":
        self._check(other)
        t = self.tower
        return TowerElement(t, t.kadd(self.base_part, other.base_part),
                            t.kadd(self.radical_part, other.radical_part))

    def __neg__(self) -> "TowerElement":
        return TowerElement(self.tower, tuple(-x for x in self.base_part),
                            tuple(-x for x in self.radical_part))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TowerElement") -> "TowerElement":
        self._check(other)
        t = self.tower
        x1, y1, x2, y2 = self.base_part, self.radical_part, other.base_part, other.radical_part
        base = t.kadd(t.kmul(x1, x2), t.kmul(t.kmul(y1, y2), t.alpha))
        rad = t.kadd(t.kmul(x1, y2), t.kmul(x2, y1))
        return TowerElement(t, base, rad)

    def __pow__(self, e: int) -> "TowerElement":
        if e < 0:
            return self.inverse() ** (-e)
        result, b = self.tower.one(), self
        while e:
            if e & 1:
                result = result * b
            e >>= 1
            if e:
                b = b * b
        return result

    def conj(self) -> "TowerElement":
        """The k-automorphism ``sqrt(alpha) -> -sqrt(alpha)``."""
        return TowerElement(self.tower, self.base_part, tuple(-x for x in self.radical_part))

    def inverse(self) -> "TowerElement":
        n = tower_norm(self)
        t = self.tower
        den = n[0] * n[0] - t.m * n[1] * n[1] if t.m != 1 else n[0] + n[1]
        if den == 0:
            raise ZeroDivisionError("element is zero")
        ninv = (n[0] / den, -n[1] / den) if t.m != 1 else (1 / den, Q0)
        c = self.conj()
        return TowerElement(t, t.kmul(c.base_part, ninv), t.kmul(c.radical_part, ninv))

    @property
    def in_base(self) -> bool:
        return self.radical_part == (Q0, Q0)

    def sign_at(self, s_m: int, s_a: int) -> int:
        """Exact sign at the real embedding given by the sign pair."""
        t = self.tower
        if t.ksign(t.alpha, s_m) <= 0:
            raise ValueError("not a real embedding: alpha is negative there")
        x, y = self.base_part, self.radical_part
        sx = t.ksign(x, s_m)
        sy = s_a * t.ksign(y, s_m)
        if sy == 0 or sx == sy:
            return sx or sy
        if sx == 0:
            return sy
        # |x| versus |y| sqrt(alpha): compare x^2 with y^2 alpha inside k
        diff = t.kadd(t.kmul(x, x), tuple(-v for v in t.kmul(t.kmul(y, y), t.alpha)))
        return sx if t.ksign(diff, s_m) > 0 else sy

    def to_float(self, s_m: int, s_a: int) -> float:
        t = self.tower
        return (t.kfloat(self.base_part, s_m)
                + s_a * t.kfloat(self.radical_part, s_m) * math.sqrt(t.kfloat(t.alpha, s_m)))

    def is_one(self) -> bool:
        return self.base_part == (Q1, Q0) and self.in_base

    def __str__(self) -> str:
        a, b = self.base_part
        c, d = self.radical_part
        return f"({a}+{b}*s) + ({c}+{d}*s)*r"


def tower_norm(x: TowerElement) -> tuple[Fraction, Fraction]:
    """Relative norm ``x * conj(x)`` as an element ``(a, b)`` of the base field."""
    p = x * x.conj()
    assert p.in_base
    return p.base_part


def _as_base(t: Tower, u) -> tuple[Fraction, Fraction]:
    if isinstance(u, TowerElement):
        if not u.in_base:
            raise ValueError("element is not in the base field")
        return u.base_part
    return (Fraction(u[0]), Fraction(u[1]))


def is_unit_nc_power(u, eps, nc: int, tower: Optional[Tower] = None,
                     max_exp: int = 200) -> bool:
    """True iff the base-field unit ``u`` equals ``+eps**(nc*j)`` for some ``j``.

    ``u`` and ``eps`` are TowerElements lying in the base field (or pairs, with
    ``tower`` given).  ``eps=None`` means the base is Q, whose units are +-1.
    """
    if nc not in (2, 4):
        raise ValueError("nc must be 2 or 4")
    t = tower or (u.tower if isinstance(u, TowerElement) else None)
    if t is None:
        raise ValueError("tower needed to interpret pairs")
    uu = _as_base(t, u)
    if eps is None:
        if uu in ((Q1, Q0), (-Q1, Q0)):
            return uu == (Q1, Q0)
        raise ValueError(f"{uu} is not a unit of Q")
    ee = _as_base(t, eps)
    # locate the exponent numerically, then confirm exactly
    lu = math.log(abs(t.kfloat(uu)))
    le = math.log(abs(t.kfloat(ee)))
    e = round(lu / le)
    if abs(e) > max_exp:
        raise ValueError(f"exponent {e} exceeds the bound {max_exp}")
    power = _kpow(t, ee, e)
    if power == uu:
        return e % nc == 0
    if power == (-uu[0], -uu[1]):
        return False
    raise ValueError(f"{uu} is not of the form +-eps^t")


def _kpow(t: Tower, x, e: int):
    if e < 0:
        den = x[0] * x[0] - t.m * x[1] * x[1]
        x = (x[0] / den, -x[1] / den)
        e = -e
    out = (Q1, Q0)
    for _ in range(e):
        out = t.kmul(out, x)
    return out


# ---------------------------------------------------------------------------
# number fields


@dataclass(frozen=True)
class NumberField:
    label: str
    degree: int
    s1: int
    s2: int
    disc: int
    poly: PolyZ
    class_number: Optional[int] = None
    regulator_lb: Fraction = Fraction(1, 4)
    tower: Optional[Tower] = None
    fund_units: tuple[TowerElement, ...] = ()
    sigma0: Optional[int] = None
    split_override: dict = field(default_factory=dict, compare=False, hash=False)
    base: Optional[str] = None
    ellmin: Optional[int] = None
    ramified: Optional[int] = None

    @property
    def signature(self) -> tuple[int, int]:
        return (self.s1, self.s2)

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def poly_index(self) -> int:
        """``[O_F : Z[theta]]``, from ``disc(poly) = index^2 * disc(F)``."""
        q, r = divmod(abs(self.poly.discriminant()), self.disc)
        root = math.isqrt(q)
        if r or root * root != q:
            raise ValidationError(
                f"{self.label}: polynomial discriminant is not a square multiple of {self.disc}")
        return root

    def splitting(self, p: int) -> SplittingType:
        """Decomposition of ``p`` in the ring of integers."""
        from .core_arith import poly_splitting_mod_p
        if p in self.split_override:
            return self.split_override[p]
        if self.poly_index % p == 0:
            raise ValidationError(
                f"{self.label}: polynomial not p-maximal at {p}; add a split-override")
        return poly_splitting_mod_p(self.poly, p)

    @property
    def quadratic_disc(self) -> int:
        """Signed fundamental discriminant of a quadratic field."""
        if self.degree != 2:
            raise ValueError(f"{self.label} is not quadratic")
        return self.disc if self.s2 == 0 else -self.disc

    @property
    def roots_of_unity(self) -> int:
        if self.s1 > 0:
            return 2
        if self.degree == 2 and self.disc == 4:
            return 4
        if self.degree == 2 and self.disc == 3:
            return 6
        if self.degree == 2:
            return 2
        raise ValueError(f"torsion of {self.label} is not tabulated")


def real_embeddings(F: NumberField, tol: float = 1e-12) -> list[float]:
    """Real roots of the defining polynomial, ascending; exactly ``s1`` of them."""
    roots = F.poly.real_roots(tol)
    if len(roots) != F.s1:
        raise ValidationError(
            f"{F.label}: polynomial has {len(roots)} real roots, signature says {F.s1}")
    return roots


# ---------------------------------------------------------------------------
# pairs


FORM_KINDS = ("inner", "outer-quadratic", "triality")


@dataclass(frozen=True)
class FieldPair:
    k: NumberField
    ell: NumberField
    form_kind: str

    def __post_init__(self):
        if self.form_kind not in FORM_KINDS:
            raise ValidationError(f"unknown form kind {self.form_kind!r}")
        if self.ell.degree % self.k.degree:
            raise ValidationError("degree of l is not a multiple of the degree of k")
        rel = self.rel_degree
        if (rel == 1) != (self.form_kind == "inner"):
            raise ValidationError("relative degree 1 goes with inner forms only")
        if (rel == 3) != (self.form_kind == "triality"):
            raise ValidationError("relative degree 3 goes with triality only")
        if rel > 3:
            raise ValidationError(f"relative degree {rel} is not allowed")
        if rel > 1 and self.ell.disc < self.k.disc ** rel:
            raise ValidationError(
                f"{self.ell.label}: disc {self.ell.disc} < {self.k.disc}^{rel}")

    @property
    def rel_degree(self) -> int:
        return self.ell.degree // self.k.degree

    @property
    def tower(self) -> Optional[Tower]:
        return self.ell.tower

    @classmethod
    def of(cls, k: NumberField, ell: NumberField) -> "FieldPair":
        rel = ell.degree // k.degree
        kind = {1: "inner", 2: "outer-quadratic", 3: "triality"}.get(rel, "?")
        return cls(k, ell, kind)

    def __str__(self) -> str:
        return f"({self.k.label}, {self.ell.label})"


UNIT_CONDITIONS = ("odd-rank-compact", "even-rank-compact", "noncompact-even",
                   "imaginary-square", "noncompact-inner", "noncompact-outer-odd")


def unit_representatives(pair: FieldPair, nc: int) -> list[TowerElement]:
    """The ``2 * nc**rank`` cosets ``+-tau_1^i tau_2^j ...`` of ``U / U^nc``."""
    units = pair.ell.fund_units
    t = pair.tower
    reps = []
    for exps in product(range(nc), repeat=len(units)):
        x = t.one()
        for u, e in zip(units, exps):
            x = x * u ** e
        reps.extend([x, -x])
    return reps


def unit_condition(pair: FieldPair, x: TowerElement, nc: int, condition: str) -> bool:
    """Membership test of a unit of ``l`` in the group counted by ``unit_image_order``."""
    t = pair.tower
    places = t.real_places()
    if condition == "even-rank-compact":
        return all(x.sign_at(*pl) > 0 for pl in places)
    if condition in ("odd-rank-compact", "noncompact-outer-odd"):
        if pair.ell.sigma0 is None:
            raise ValueError(f"{pair.ell.label}: sigma0 marker needed")
        eps = base_unit(pair)
        if not is_unit_nc_power(tower_norm(x), eps, nc, tower=t):
            return False
        return x.sign_at(*places[pair.ell.sigma0]) > 0
    raise ValueError(f"condition {condition!r} is not decided by signs")


def base_unit(pair: FieldPair):
    """Fundamental unit of ``k`` written in the base field of ``l``'s tower.

    ``k = Q(sqrt m)`` is itself stored as the tower ``Q(sqrt(m))`` over Q, so
    its unit ``a + c sqrt(m)`` becomes the base element ``(a, c)``.
    """
    if pair.k.is_rational:
        return None
    if not pair.k.fund_units or pair.k.tower is None:
        raise ValueError(f"{pair.k.label}: fundamental unit missing")
    kt = pair.k.tower
    if kt.alpha[1] != 0 or kt.alpha[0] != pair.tower.m:
        raise ValueError(f"{pair.k.label}: tower of k does not match the base of {pair.ell.label}")
    u = pair.k.fund_units[0]
    return (u.base_part[0], u.radical_part[0])


def unit_image_order(pair: FieldPair, nc: int, condition: str) -> int:
    """Order of the image of the unit group in ``A_l / (l^*)^nc``.

    Rank 0 cases (``l`` imaginary quadratic over Q, or ``l = k = Q``) are read
    off the torsion; otherwise the coset representatives are enumerated and
    tested exactly.
    """
    if nc not in (2, 4):
        raise ValueError("nc must be 2 or 4")
    if condition not in UNIT_CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}")
    ell = pair.ell
    if condition == "noncompact-inner":
        # positive rationals among +-1
        return 1
    if condition in ("imaginary-square", "noncompact-even") and ell.s1 == 0 \
            and ell.degree == 2:
        return math.gcd(ell.roots_of_unity, nc)
    if pair.tower is None:
        raise ValueError(f"{ell.label}: tower data needed")
    rank = ell.s1 + ell.s2 - 1
    if len(ell.fund_units) != rank:
        raise ValueError(
            f"{ell.label}: {len(ell.fund_units)} fundamental units given, rank is {rank}")
    reps = unit_representatives(pair, nc)
    # -1 must not be an nc-th power; with a real place the torsion is +-1
    if ell.s1 == 0:
        raise ValueError("tower without real places is not supported")
    hits = [x for x in reps if unit_condition(pair, x, nc, condition)]
    return len(hits)


# ---------------------------------------------------------------------------
# table format


def _frac(tok: str) -> Fraction:
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {tok!r}") from exc


def _parse_tags(tags: list[str], lineno: int) -> dict:
    out: dict = {}
    for tag in tags:
        key, sep, val = tag.partition(":")
        if not sep:
            raise ParseError(f"tag {tag!r} lacks ':'", lineno)
        key = key.strip()
        try:
            if key == "tower":
                m, a, b = val.split(",")
                out["tower"] = (int(m), _frac(a), _frac(b))
            elif key == "units":
                out["units"] = [tuple(_frac(x) for x in u.split(","))
                                for u in val.split(";") if u.strip()]
                if any(len(u) != 4 for u in out["units"]):
                    raise ValueError("each unit needs four rationals a,b,c,d")
            elif key == "sigma0":
                out["sigma0"] = int(val)
            elif key == "split-override":
                ov = {}
                for item in val.split(","):
                    p, _, pattern = item.partition("=")
                    p = int(p)
                    if not is_prime(p):
                        raise ValueError(f"{p} is not prime")
                    ov[p] = SplittingType.parse(pattern)
                out["split_override"] = ov
            elif key in ("base",):
                out[key] = val.strip()
            elif key in ("ellmin", "ramified"):
                out[key] = int(val)
            elif key == "reglb":
                out["regulator_lb"] = _frac(val)
            else:
                raise ValueError(f"unknown tag {key!r}")
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    return out


def parse_field_record(line: str, lineno: Optional[int] = None) -> NumberField:
    cols = line.rstrip("\r\n").split("\t")
    if len(cols) < 7:
        raise ParseError(f"expected at least 7 tab-separated columns, got {len(cols)}", lineno)
    label = cols[0].strip()
    try:
        degree, s1, s2, disc = (int(c) for c in cols[1:5])
        h = None if cols[5].strip() == "?" else int(cols[5])
        poly = PolyZ(tuple(int(c) for c in cols[6].split(",")))
    except ValueError as exc:
        raise ParseError(f"{label}: {exc}", lineno) from exc
    tags = _parse_tags(cols[7:], lineno)
    tower = None
    units: tuple = ()
    if "tower" in tags:
        m, a, b = tags["tower"]
        try:
            tower = Tower(m, (a, b))
        except ValidationError as exc:
            raise ValidationError(f"{label}: {exc}") from exc
        units = tuple(TowerElement(tower, u[:2], u[2:]) for u in tags.get("units", ()))
    elif "units" in tags:
        raise ParseError(f"{label}: units given without tower data", lineno)
    F = NumberField(label=label, degree=degree, s1=s1, s2=s2, disc=disc, poly=poly,
                    class_number=h, tower=tower, fund_units=units,
                    sigma0=tags.get("sigma0"),
                    split_override=tags.get("split_override", {}),
                    base=tags.get("base"), ellmin=tags.get("ellmin"),
                    ramified=tags.get("ramified"),
                    regulator_lb=tags.get("regulator_lb", Fraction(1, 4)))
    validate_field(F)
    return F


def validate_field(F: NumberField) -> None:
    def bad(msg):
        raise ValidationError(f"{F.label}: {msg}")

    if F.degree < 1 or F.s1 < 0 or F.s2 < 0:
        bad("degree and signature must be non-negative")
    if F.s1 + 2 * F.s2 != F.degree:
        bad(f"s1 + 2 s2 = {F.s1 + 2 * F.s2} differs from degree {F.degree}")
    if F.poly.degree != F.degree:
        bad(f"polynomial degree {F.poly.degree} differs from {F.degree}")
    if not F.poly.is_monic:
        bad("defining polynomial must be monic")
    if F.disc < 1:
        bad("discriminant must be positive")
    if F.class_number is not None and F.class_number < 1:
        bad("class number must be positive")
    if F.degree > 1:
        pd = F.poly.discriminant()
        if pd == 0:
            bad("polynomial is not square-free")
        if (pd < 0) != (F.s2 % 2 == 1):
            bad("sign of the polynomial discriminant contradicts the signature")
        F.poly_index  # raises if not a square multiple
    elif F.disc != 1:
        bad("the rational field has discriminant 1")
    real_embeddings(F)
    for p, st in F.split_override.items():
        if st.degree != F.degree:
            bad(f"split-override at {p} has total degree {st.degree}")
    if F.tower is not None:
        t = F.tower
        if F.degree != (2 if t.base_is_q else 4):
            bad("tower degree does not match")
        if len(t.real_places()) != F.s1:
            bad(f"tower has {len(t.real_places())} real places, signature says {F.s1}")
        if F.sigma0 is not None and not 0 <= F.sigma0 < max(F.s1, 1):
            bad(f"sigma0={F.sigma0} out of range")
        for u in F.fund_units:
            n = tower_norm(u)
            norm_q = n[0] * n[0] - t.m * n[1] * n[1] if not t.base_is_q else n[0]
            if abs(norm_q) != 1:
                bad(f"fundamental unit {u} has norm {norm_q}")


def parse_field_table(text) -> list[NumberField]:
    """Parse a field table (``str`` or ``bytes``); '#' starts a comment."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    fields = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        F = parse_field_record(body, lineno)
        if F.label in seen:
            raise ParseError(f"duplicate label {F.label!r}", lineno)
        seen.add(F.label)
        fields.append(F)
    return fields


class FieldTable:
    """Parsed table with lookup by label and the ``base`` relation resolved."""

    def __init__(self, fields: Iterable[NumberField]):
        self.fields = list(fields)
        self.by_label = {F.label: F for F in self.fields}
        for F in self.fields:
            if F.base is not None and F.base not in self.by_label:
                raise ValidationError(f"{F.label}: unknown base field {F.base!r}")

    def __getitem__(self, label: str) -> NumberField:
        try:
            return self.by_label[label]
        except KeyError:
            raise KeyError(f"unknown field {label!r}; available: "
                           + ", ".join(sorted(self.by_label))) from None

    def __iter__(self):
        return iter(self.fields)

    def __len__(self):
        return len(self.fields)

    def totally_real(self, degree: int) -> list[NumberField]:
        return sorted((F for F in self.fields if F.degree == degree and F.s2 == 0),
                      key=lambda F: (F.disc, F.label))

    def extensions_of(self, k: NumberField, rel_degree: int = 2) -> list[NumberField]:
        return sorted((F for F in self.fields
                       if F.base == k.label and F.degree == rel_degree * k.degree),
                      key=lambda F: (F.disc, F.label))

    def pair(self, k_label: str, ell_label: str) -> FieldPair:
        return FieldPair.of(self[k_label], self[ell_label])

    @classmethod
    def from_path(cls, path) -> "FieldTable":
        with open(path, "rb") as fh:
            return cls(parse_field_table(fh.read()))


def builtin_table() -> FieldTable:
    """The curated table shipped with the package."""
    return _builtin()


_BUILTIN: Optional[FieldTable] = None


def _builtin() -> FieldTable:
    global _BUILTIN
    if _BUILTIN is None:
        raw = resources.files("arithvol").joinpath("data/fields.tsv").read_bytes()
        _BUILTIN = FieldTable(parse_field_table(raw))
    return _BUILTIN
