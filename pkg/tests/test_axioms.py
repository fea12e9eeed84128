import json
from fractions import Fraction

import pytest

from lambdabuildings import axioms, constructions, spaces
from lambdabuildings.axioms import BOUNDED, FAIL, PASS, VACUOUS, ProbeSet, check, check_all


@pytest.fixture(scope="module")
def tri():
    return spaces.tripod()


@pytest.fixture(scope="module")
def tri_report(tri):
    return check_all(tri, label="tripod")


@pytest.fixture(scope="module")
def triangle():
    return constructions.triangle_counterexample("A1", (10, 2, 2))


@pytest.fixture(scope="module")
def triangle_report(triangle):
    return check_all(triangle, label="triangle")


def test_single_apartment_all_clean():
    for name in ("A1", "A2"):
        report = check_all(spaces.single_apartment(name), label=name)
        for cid, rep in report.conditions.items():
            assert rep.verdict in (PASS, BOUNDED, VACUOUS), (name, cid, rep.witnesses)
        assert report.audit_clean
        assert report.exit_code == 0


def test_single_apartment_exchange_vacuous():
    report = check_all(spaces.single_apartment("B2"))
    for cid in ("A6", "EC", "SC"):
        assert report.conditions[cid].verdict == VACUOUS


def test_tripod_all_conditions_pass(tri_report):
    for cid, rep in tri_report.conditions.items():
        assert rep.verdict in (PASS, BOUNDED, VACUOUS), (cid, rep.witnesses)
    assert tri_report.exit_code == 0
    assert tri_report.audit_clean


def test_tripod_exchange_conditions_not_vacuous(tri_report):
    for cid in ("A6", "EC", "SC"):
        assert tri_report.conditions[cid].verdict == BOUNDED
    assert tri_report.conditions["A6"].inventory["triples"] == 1


def test_tripod_probe_inventory(tri_report):
    assert tri_report.conditions["A3"].inventory["pairs"] == 6
    assert tri_report.conditions["GG"].inventory["same_base_pairs"] == 3
    assert tri_report.conditions["CO"].inventory["opposite_pairs"] == 3


def test_triangle_verdicts(triangle_report):
    conds = triangle_report.conditions
    for cid in ("A1", "A2", "A3", "A4"):
        assert conds[cid].verdict == BOUNDED, (cid, conds[cid].witnesses)
    assert conds["A6"].verdict == VACUOUS
    assert conds["TI"].verdict == FAIL
    assert conds["A5"].verdict == FAIL
    assert triangle_report.exit_code == 1


def test_triangle_ti_witness_replays(triangle, triangle_report):
    witnesses = triangle_report.conditions["TI"].witnesses
    assert witnesses
    w = witnesses[0]
    assert w["via_sum"] == ["4/1"]
    assert w["direct"] == ["10/1"]
    # replay: the two distances through public operations
    x = triangle.xpoint(w["ends"][0]["chart"], _coords(triangle, w["ends"][0]))
    y = triangle.xpoint(w["ends"][1]["chart"], _coords(triangle, w["ends"][1]))
    z = triangle.xpoint(w["middle"]["chart"], _coords(triangle, w["middle"]))
    direct = triangle.distance_between(x, y)
    via = triangle.distance_between(x, z) + triangle.distance_between(z, y)
    assert via < direct


def _coords(space, payload):
    from lambdabuildings.scalars import LexScalar

    return tuple(LexScalar.from_strings(c) for c in payload["coords"])


def test_triangle_a5_witness_kinds(triangle_report):
    kinds = {w["kind"] for w in triangle_report.conditions["A5"].witnesses}
    assert "undefined" in kinds
    assert "forced" in kinds


def test_triangle_audit_clean_ti_a5_joint(triangle_report):
    assert triangle_report.audit_clean
    assert triangle_report.conditions["TI"].verdict == FAIL
    assert triangle_report.conditions["A5"].verdict == FAIL


def test_audit_flags_ti_without_a5():
    # construct a fake verdict table to exercise the audit rules
    reports = {
        cid: axioms.ConditionReport(cid, BOUNDED) for cid in axioms.CONDITIONS
    }
    reports["TI"] = axioms.ConditionReport("TI", FAIL)
    flags = axioms.implication_audit(reports)
    assert any(f["rule"] == "a5-implies-ti" for f in flags)
    reports["A5"] = axioms.ConditionReport("A5", FAIL)
    assert not axioms.implication_audit(reports)


def test_audit_flags_exchange_disagreement():
    reports = {
        cid: axioms.ConditionReport(cid, BOUNDED) for cid in axioms.CONDITIONS
    }
    reports["EC"] = axioms.ConditionReport("EC", FAIL)
    flags = axioms.implication_audit(reports)
    rules = {f["rule"] for f in flags}
    assert "exchange-coherence" in rules
    assert "gg-co-implies-ec" in rules


def test_check_single_condition(tri):
    rep = check(tri, "TI")
    assert rep.verdict == BOUNDED
    with pytest.raises(ValueError):
        check(tri, "XX")


def test_verdict_monotone_under_probe_growth(triangle):
    # removing marked points can only lose witnesses, never gain them
    full = check_all(triangle).conditions["TI"]
    assert full.verdict == FAIL
    fewer = ProbeSet.build(triangle)
    fewer.triples = []
    rep = axioms.check_ti(triangle, fewer, Fraction(1))
    assert rep.verdict == BOUNDED  # bounded pass on no probes, not PASS


def test_metric_scale_does_not_change_verdicts(tri, triangle):
    for space, label in ((tri, "tripod"), (triangle, "triangle")):
        base = check_all(space, label=label)
        scaled = check_all(space, label=label, scale=Fraction(3, 2))
        d1, d2 = base.to_dict(), scaled.to_dict()
        assert d1["config"]["metric_scale"] == "1/1"
        assert d2["config"]["metric_scale"] == "3/2"
        d1["config"].pop("metric_scale")
        d2["config"].pop("metric_scale")
        assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)


def test_reports_are_deterministic(tri):
    a = check_all(tri, seed=5, label="tripod").dumps()
    b = check_all(tri, seed=5, label="tripod").dumps()
    assert a == b


def test_probe_budget_truncation(tri):
    probes = ProbeSet.build(tri, budget=2, seed=1)
    assert len(probes.pairs) == 2
    assert probes.truncated
    again = ProbeSet.build(tri, budget=2, seed=1)
    assert probes.pairs == again.pairs
    other = ProbeSet.build(tri, budget=2, seed=2)
    assert len(other.pairs) == 2


def test_render_text(tri_report):
    text = tri_report.render_text()
    assert "A6" in text and "audit: clean" in text
