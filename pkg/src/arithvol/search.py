"""Elimination of candidate field pairs by comparing covolume bounds with a target.

The field table is taken as the universe: a field that is not listed is
assumed not to exist below the cutoffs where the search needs it.  Facts the
table cannot carry (discriminant floors, class numbers of whole ranges) come
from the constants in ``bounds``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .bounds import (CaseKind, Cutoff, ODLYZKO_ELL, class_number_cap, covolume_lower_bound,
                     discriminant_cutoff, exceeds, log_margin, odlyzko_floor, target)
from .errbounded import ErrBounded
from .fields import FieldPair, FieldTable, NumberField, builtin_table, unit_image_order

# degrees of k examined before the discriminant floor takes over
MAX_DEGREE = 12

# number of admissible k at r = 3 in the compact odd case, as counted in the literature
EXPECTED_K_COUNT = {("compact-odd", 3): 14}

STAGES = ("D_l-cutoff", "class-number", "ramified-places", "unit-image")


@dataclass(frozen=True)
class Elimination:
    subject: str
    stage: str
    inequality: str
    margin: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {"subject": self.subject, "stage": self.stage, "inequality": self.inequality,
                "margin": _num(self.margin), "detail": self.detail}


@dataclass
class DegreeCutoff:
    degree: int
    cutoff: Optional[Cutoff]
    fields: list[str]
    excluded_by: Optional[str] = None

    def as_dict(self) -> dict:
        c = self.cutoff
        return {"degree": self.degree,
                "cutoff_real": None if c is None else round(c.real, 2),
                "cutoff_int": None if c is None else c.integer,
                "fields": self.fields, "excluded_by": self.excluded_by}


@dataclass
class FieldCutoff:
    k: str
    D_k: int
    steps: list[tuple[str, Optional[int], float]] = field(default_factory=list)

    @property
    def final(self) -> float:
        return self.steps[-1][2]

    def as_dict(self) -> dict:
        return {"k": self.k, "D_k": self.D_k,
                "steps": [{"h": h, "basis": basis, "cutoff_real": round(c, 2)}
                          for basis, h, c in self.steps]}


@dataclass
class EliminationReport:
    case: str
    r: int
    mode: str
    target: ErrBounded
    degree_cutoffs: list[DegreeCutoff] = field(default_factory=list)
    field_cutoffs: list[FieldCutoff] = field(default_factory=list)
    stage_survivors: dict[str, list[str]] = field(default_factory=dict)
    eliminated: list[Elimination] = field(default_factory=list)
    survivors: list[FieldPair] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def target_log(self) -> ErrBounded:
        return self.target

    def survivor_labels(self) -> list[tuple[str, str]]:
        return [(p.k.label, p.ell.label) for p in self.survivors]

    def survivors_before(self, stage: str) -> list[str]:
        """Pairs alive when ``stage`` starts."""
        i = STAGES.index(stage)
        for prev in reversed(STAGES[:i]):
            if prev in self.stage_survivors:
                return self.stage_survivors[prev]
        return []

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "r": self.r,
            "n": 2 * self.r - 1,
            "mode": self.mode,
            "target": {"log": _num(self.target.log_value),
                       "abs_err_log": _num(self.target.abs_err_log),
                       "value": self.target.format(10)},
            "degree_cutoffs": [c.as_dict() for c in self.degree_cutoffs],
            "field_cutoffs": [c.as_dict() for c in self.field_cutoffs],
            "stage_survivors": {s: self.stage_survivors[s] for s in STAGES
                                if s in self.stage_survivors},
            "eliminated": [e.as_dict() for e in self.eliminated],
            "survivors": [str(p) for p in self.survivors],
            "warnings": self.warnings,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        out = [f"case {self.case}, r = {self.r} (n = {2 * self.r - 1}), target {self.mode}:"
               f" mu <= {self.target.format(8)}"]
        for c in self.degree_cutoffs:
            if c.excluded_by:
                out.append(f"  degree {c.degree}: excluded ({c.excluded_by})")
            else:
                out.append(f"  degree {c.degree}: D_k <= {c.cutoff.integer}"
                           f" ({c.cutoff.real:.2f}); fields {', '.join(c.fields) or '-'}")
        for fc in self.field_cutoffs:
            steps = ", ".join(f"{b}: {c:.1f}" for b, h, c in fc.steps)
            out.append(f"  {fc.k} (D_k = {fc.D_k}): D_l <= {steps}")
        for s in STAGES:
            if s in self.stage_survivors:
                out.append(f"  after {s}: {', '.join(self.stage_survivors[s]) or '-'}")
        for e in self.eliminated:
            out.append(f"  x {e.subject} [{e.stage}] {e.inequality}, margin {e.margin:.3g}"
                       + (f"; {e.detail}" if e.detail else ""))
        out.append("survivors: " + (", ".join(str(p) for p in self.survivors) or "none"))
        out += [f"warning: {w}" for w in self.warnings]
        out += [f"note: {n}" for n in self.notes]
        return "\n".join(out) + "\n"


def _num(x: float):
    return None if x is None or not math.isfinite(x) else float(f"{x:.12g}")


def _pair_key(p: FieldPair):
    return (p.ell.degree, p.ell.disc, p.k.label, p.ell.label)


# ---------------------------------------------------------------------------


@dataclass
class Options:
    mode: str = "exact"
    class_numbers: bool = True
    ramified: bool = True
    units: bool = True
    max_degree: int = MAX_DEGREE


def eliminate(case, r: int, table: Optional[FieldTable] = None,
              options: Optional[Options] = None) -> EliminationReport:
    """Run the elimination for one case and rank; see the module docstring."""
    case = CaseKind.parse(case)
    case.check_rank(r)
    table = table or builtin_table()
    opt = options or Options()
    tgt = target(case, r, opt.mode)
    rep = EliminationReport(case.value, r, opt.mode, tgt)
    literal = opt.mode == "parity"

    if case.compact:
        ks = _degree_stage(case, r, table, tgt, opt, rep)
        pairs = []
        for k in ks:
            pairs += _field_stage(case, r, k, table, tgt, rep)
    else:
        pairs = _rational_stage(case, r, table, tgt, rep)
    pairs.sort(key=_pair_key)
    rep.stage_survivors["D_l-cutoff"] = [str(p) for p in pairs]

    if opt.class_numbers:
        pairs = _pair_filter(case, r, pairs, tgt, rep, "class-number",
                             lambda p: dict(h=p.ell.class_number))
    if opt.ramified and case.uses_ramified:
        def kw(p):
            if p.ell.ramified is None:
                rep.warnings.append(f"{p}: number of ramified places unknown; "
                                    "ramified-places refinement skipped")
                return None
            return dict(h=p.ell.class_number, card_R=p.ell.ramified,
                        literal_single_ramified=literal)
        pairs = _pair_filter(case, r, pairs, tgt, rep, "ramified-places", kw)
    if opt.units and case.unit_condition is not None:
        nc, cond = case.unit_condition

        def kw(p):
            try:
                u = unit_image_order(p, nc, cond) if p.ell.degree > 1 else 1
            except ValueError as exc:
                rep.warnings.append(f"{p}: unit-image refinement skipped ({exc})")
                return None
            out = dict(h=p.ell.class_number, unit_image=u)
            if case.uses_ramified:
                if p.ell.ramified is None:
                    return None
                out.update(card_R=p.ell.ramified, literal_single_ramified=literal)
            return out
        pairs = _pair_filter(case, r, pairs, tgt, rep, "unit-image", kw)
    rep.survivors = pairs
    return rep


def _degree_stage(case, r, table, tgt, opt, rep) -> list[NumberField]:
    ks = []
    for d in range(2, opt.max_degree + 1):
        floor = odlyzko_floor(d)
        if floor is not None and _floor_excludes_tail(case, r, d, floor, tgt):
            rep.degree_cutoffs.append(DegreeCutoff(d, None, [], "discriminant floor"))
            rep.notes.append(f"degrees >= {d} excluded by the discriminant floor")
            break
        cut = discriminant_cutoff(case, r, d, tgt, "D_k")
        fields = table.totally_real(d)
        keep = [k for k in fields if k.disc <= cut.integer]
        for k in fields:
            if k.disc > cut.integer:
                rep.eliminated.append(Elimination(
                    k.label, "D_k-cutoff", "D_k-only covolume bound",
                    k.disc - cut.real, f"D_k = {k.disc} > {cut.real:.2f}"))
        if not fields:
            rep.notes.append(f"degree {d}: no field in table (vacuously eliminated)")
        rep.degree_cutoffs.append(DegreeCutoff(d, cut, [k.label for k in keep]))
        ks += keep
    else:
        rep.warnings.append(f"degrees above {opt.max_degree} were not examined")
    expected = EXPECTED_K_COUNT.get((case.value, r))
    if expected is not None and len(ks) != expected:
        rep.warnings.append(f"{len(ks)} fields k pass the D_k cutoffs; expected {expected}")
    rep.notes.append(f"{len(ks)} fields k pass the D_k cutoffs")
    return ks


def _floor_excludes_tail(case, r, d, floor, tgt) -> bool:
    """The floor rules out degree d and, by growth in d, every larger degree."""
    if not exceeds(covolume_lower_bound(case, r, d, floor), tgt):
        return False
    # the D_k-only bound at D_k = base^d is geometric in d
    base = floor ** (1 / d)
    step = covolume_lower_bound(case, r, d + 1, base ** (d + 1)).log_value \
        - covolume_lower_bound(case, r, d, floor).log_value
    return step > 0


def _ell_cutoff_chain(case, r, k, tgt, fc: FieldCutoff, h: Optional[int]) -> float:
    d = k.degree
    cut = discriminant_cutoff(case, r, d, tgt, "D_ell", k.disc, h=h)
    fc.steps.append(("Brauer-Siegel" if h is None else f"h <= {h}", h, cut.real))
    return cut.real


def _field_stage(case, r, k, table, tgt, rep) -> list[FieldPair]:
    d, t = k.degree, case.rel_degree
    fc = FieldCutoff(k.label, k.disc)
    rep.field_cutoffs.append(fc)
    L = _ell_cutoff_chain(case, r, k, tgt, fc, None)
    ell_deg = t * d
    sigs = [(s1, (ell_deg - s1) // 2) for s1 in range(ell_deg, -1, -2)
            if case.admissible_signature(d, (s1, (ell_deg - s1) // 2))]
    h_used = None
    while True:
        cap = class_number_cap(ell_deg, None, L, signatures=sigs)
        if cap is None or (h_used is not None and cap >= h_used):
            break
        h_used = cap
        L = _ell_cutoff_chain(case, r, k, tgt, fc, h_used)

    def drop(ineq, margin, detail):
        rep.eliminated.append(Elimination(k.label, "D_l-cutoff", ineq, margin, detail))
        return []

    if L < k.disc ** t:
        return drop("D_l >= D_k^[l:k]", k.disc ** t - L,
                    f"cutoff {L:.1f} < D_k^{t} = {k.disc ** t}")
    if k.ellmin is not None and k.ellmin > L:
        return drop("minimal extension discriminant", k.ellmin - L,
                    f"cutoff {L:.1f} < {k.ellmin}")
    floor = ODLYZKO_ELL.get(ell_deg)
    if floor is not None and floor > L:
        return drop("discriminant floor for l", floor - L,
                    f"cutoff {L:.1f} < {floor:.4g}")
    pairs = []
    for ell in table.extensions_of(k, t):
        if not case.admissible_signature(d, ell.signature):
            continue
        p = FieldPair.of(k, ell)
        if ell.disc > L:
            rep.eliminated.append(Elimination(str(p), "D_l-cutoff", "D_l cutoff",
                                              ell.disc - L, f"D_l = {ell.disc} > {L:.1f}"))
        else:
            pairs.append(p)
    if not pairs:
        return drop("no listed extension", 0.0, f"no admissible l with D_l <= {L:.1f} in table")
    return pairs


def _rational_stage(case, r, table, tgt, rep) -> list[FieldPair]:
    Q = next((F for F in table if F.is_rational), None)
    if Q is None:
        raise ValueError("table has no entry for Q")
    if case is CaseKind.NONCOMPACT_INNER:
        return [FieldPair.of(Q, Q)]
    fc = FieldCutoff(Q.label, 1)
    rep.field_cutoffs.append(fc)
    L = discriminant_cutoff(case, r, 1, tgt, "D_ell", 1).real
    fc.steps.append(("Brauer-Siegel", None, L))
    cands = [F for F in table.extensions_of(Q, 2)
             if case.admissible_signature(1, F.signature)]
    pairs = []
    if case is CaseKind.NONCOMPACT_OUTER_ODD:
        # D_l = 1 stands for the inner form, which the bound also covers
        pairs.append(FieldPair.of(Q, Q))
    for ell in cands:
        p = FieldPair.of(Q, ell)
        if ell.disc > L:
            rep.eliminated.append(Elimination(str(p), "D_l-cutoff", "D_l cutoff",
                                              ell.disc - L, f"D_l = {ell.disc} > {L:.2f}"))
        else:
            pairs.append(p)
    return pairs


def _pair_filter(case, r, pairs, tgt, rep, stage, kwargs_for) -> list[FieldPair]:
    out = []
    for p in pairs:
        if p.ell.disc == 1:
            out.append(p)
            continue
        kw = kwargs_for(p)
        if kw is None:
            out.append(p)
            continue
        lb = covolume_lower_bound(case, r, p.k.degree, p.k.disc, p.ell.disc, **kw)
        if exceeds(lb, tgt):
            desc = ", ".join(f"{k}={v}" for k, v in kw.items()
                             if k != "literal_single_ramified")
            rep.eliminated.append(Elimination(str(p), stage, "covolume lower bound",
                                              log_margin(lb, tgt), desc))
        else:
            out.append(p)
    rep.stage_survivors[stage] = [str(p) for p in out]
    return out
