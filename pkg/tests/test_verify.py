import json

import pytest

from spectrum import graph as gr
from spectrum import verify


@pytest.fixture(scope="module")
def tiny_corpus():
    return gr.small_graph_corpus(3)


@pytest.fixture(scope="module")
def quick_ledger(tiny_corpus):
    led = verify.Ledger()
    led.extend(verify.run_axiom_suite("fractional_clique_cover", tiny_corpus))
    led.extend(verify.run_alpha_control([gr.cycle(5), gr.complete(1)]))
    led.extend(verify.run_refinement_suite(points=("fractional_clique_cover",), corpus=tiny_corpus, samples=1))
    led.extend(verify.run_structure_suite(cover_runs=3))
    led.extend(verify.run_corner_suite(corpus=tiny_corpus, samples=2, theta_graphs=1))
    led.extend(verify.run_worked_example())
    return led


def test_every_check_has_a_registered_anchor(quick_ledger):
    assert {c.anchor for c in quick_ledger.checks} <= set(verify.ANCHORS)


def test_every_anchor_is_exercised(quick_ledger):
    assert set(verify.ANCHORS) == {c.anchor for c in quick_ledger.checks}


def test_quick_ledger_passes(quick_ledger):
    failing = [c.id for c in quick_ledger.checks if not c.passed and not c.negative_control]
    assert failing == []
    assert all(c.instances > 0 for c in quick_ledger.checks)


def test_alpha_negative_control_reports_c5(quick_ledger):
    s2 = quick_ledger.by_id("S2:alpha")
    assert s2.negative_control and not s2.passed
    assert s2.witness["f(GxH)"] == "5" and s2.witness["f(G)f(H)"] == "4"
    assert s2.witness["G"] == s2.witness["H"] == gr.to_graph6(gr.cycle(5))
    assert quick_ledger.by_id("S1:alpha").passed and not quick_ledger.by_id("S1:alpha").negative_control
    assert quick_ledger.controls_ok and quick_ledger.ok


def test_ledger_json_is_deterministic(quick_ledger):
    a = json.dumps(quick_ledger.to_json_dict(), sort_keys=True, default=str)
    ids = [c["id"] for c in quick_ledger.to_json_dict()["checks"]]
    assert ids == sorted(ids)
    again = verify.run_worked_example().to_json_dict()
    assert json.dumps(again, sort_keys=True) == json.dumps(verify.run_worked_example().to_json_dict(), sort_keys=True)
    assert json.loads(a)["summary"]["ok"]


def test_failures_keep_the_first_witness():
    c = verify.PropertyCheck("S1:demo", "demo", 0.0)
    c.record(True)
    c.record(False, {"n": 1})
    c.record(False, lambda: {"n": 2})
    assert not c.passed and c.failures == 2 and c.instances == 3 and c.witness == {"n": 1}


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("nope")


def test_typeclass_bound_is_tight_for_a_point_type():
    from spectrum.prob_types import NType

    assert verify._typeclass_bounds_hold(NType((0, 1), (3, 0)), 1)
    assert verify._typeclass_bounds_hold(NType((0, 1), (1, 1)), 2)
    assert not verify._typeclass_bounds_hold(NType((0, 1), (1, 1)), 5)
