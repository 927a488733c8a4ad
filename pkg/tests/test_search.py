import json
import re
from importlib import resources

import pytest

from arithvol.fields import FieldTable, parse_field_table
from arithvol.search import STAGES, Options, eliminate


def _labels(rep):
    return rep.survivor_labels()


def _builtin_text():
    return resources.files("arithvol").joinpath("data/fields.tsv").read_text()


@pytest.fixture(scope="module")
def odd3():
    return eliminate("compact-odd", 3)


class TestCompactOdd:
    def test_survivor(self, odd3):
        assert _labels(odd3) == [("k0", "l0")]

    def test_before_unit_stage(self, odd3):
        before = odd3.survivors_before("unit-image")
        assert before == ["(k0, l0)", "(k0, l400)", "(k0, l475)"]

    def test_first_field_stage(self, odd3):
        assert odd3.stage_survivors["D_l-cutoff"] == [
            "(k0, l0)", "(k0, l400)", "(k0, l475)", "(q725, o5781875)", "(q725, o9986875)"]

    def test_degree_cutoffs(self, odd3):
        ints = {c.degree: c.cutoff.integer for c in odd3.degree_cutoffs if c.cutoff}
        assert ints == {2: 21, 3: 197, 4: 1770, 5: 15886, 6: 142566}
        assert sum(len(c.fields) for c in odd3.degree_cutoffs) == 14

    def test_parity_same_outcome(self):
        rep = eliminate("compact-odd", 3, options=Options(mode="parity"))
        assert _labels(rep) == [("k0", "l0")]
        assert rep.survivors_before("unit-image") == ["(k0, l0)", "(k0, l400)", "(k0, l475)"]

    @pytest.mark.parametrize("r", [5, 15])
    def test_higher_rank_direct(self, r):
        rep = eliminate("compact-odd", r)
        assert _labels(rep) == [("k0", "l0")]
        assert rep.survivors_before("class-number") == ["(k0, l0)"]

    def test_without_units(self):
        rep = eliminate("compact-odd", 3, options=Options(units=False))
        assert _labels(rep) == [("k0", "l0"), ("k0", "l400"), ("k0", "l475")]


class TestOtherCases:
    def test_compact_even(self):
        rep = eliminate("compact-even", 4)
        assert _labels(rep) == [("k0", "l0")]
        stages = {e.subject: e.stage for e in rep.eliminated}
        assert stages["(k0, l775)"] == "ramified-places"
        assert stages["(k0, l400)"] == "unit-image"

    def test_triality_empty(self):
        rep = eliminate("triality", 4)
        assert rep.survivors == []
        assert {"c49", "c81"} <= {e.subject for e in rep.eliminated}

    @pytest.mark.parametrize("r", [5, 7])
    def test_noncompact_outer_odd(self, r):
        assert _labels(eliminate("noncompact-outer-odd", r)) == [("Q", "Q")]

    @pytest.mark.parametrize("r", [6, 8, 10])
    def test_noncompact_even(self, r):
        rep = eliminate("noncompact-even", r)
        assert _labels(rep) == [("Q", "Qs-3")]

    def test_noncompact_even_stages(self):
        rep = eliminate("noncompact-even", 6)
        stages = {e.subject: e.stage for e in rep.eliminated}
        assert stages["(Q, Qs-7)"] == "class-number"
        assert stages["(Q, Qs-2)"] == "class-number"
        assert stages["(Q, Qi)"] == "unit-image"

    def test_noncompact_inner(self):
        assert _labels(eliminate("noncompact-inner", 5)) == [("Q", "Q")]

    def test_bad_rank(self):
        with pytest.raises(ValueError):
            eliminate("triality", 5)


@pytest.mark.parametrize("case,r", [("compact-odd", 3), ("compact-even", 4), ("triality", 4),
                                    ("noncompact-even", 6), ("noncompact-outer-odd", 7)])
def test_stages_never_grow(case, r):
    rep = eliminate(case, r)
    seen = [rep.stage_survivors[s] for s in STAGES if s in rep.stage_survivors]
    for a, b in zip(seen, seen[1:]):
        assert set(b) <= set(a)
    final = {f"({k}, {l})" for k, l in _labels(rep)}
    assert final <= set(seen[-1]) if seen else not final


def test_json_deterministic():
    a = eliminate("compact-odd", 3).to_json()
    b = eliminate("compact-odd", 3).to_json()
    assert a == b
    d = json.loads(a)
    assert d["n"] == 5 and d["survivors"] == ["(k0, l0)"]


def test_canonical_order():
    rep = eliminate("compact-odd", 3, options=Options(units=False))
    discs = [p.ell.disc for p in rep.survivors]
    assert discs == sorted(discs)


def test_missing_units_warns():
    text = re.sub(r"(?m)^(l0\t.*?)\tunits:[^\t]*", r"\1", _builtin_text())
    table = FieldTable(parse_field_table(text))
    rep = eliminate("compact-odd", 3, table)
    assert any("l0" in w for w in rep.warnings)
    assert ("k0", "l0") in _labels(rep)
    assert ("k0", "l400") not in _labels(rep)


def test_small_table_vacuous_degrees():
    text = "\n".join(line for line in _builtin_text().splitlines()
                     if line.split("\t")[0] in ("Q", "k0", "l0"))
    rep = eliminate("compact-odd", 3, FieldTable(parse_field_table(text)))
    assert _labels(rep) == [("k0", "l0")]
    assert any(c.fields == [] for c in rep.degree_cutoffs)


def test_text_report(odd3):
    text = odd3.to_text()
    assert "survivors: (k0, l0)" in text
    assert "after unit-image: (k0, l0)" in text
