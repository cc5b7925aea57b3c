import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resilife.numerics import QuadratureError
from resilife.verify import (
    CATALOG,
    CheckResult,
    Report,
    Scenario,
    Settings,
    UnknownScenarioError,
    catalog,
    reports_from_csv,
    reports_to_csv,
    run_scenario,
    scenario_seed,
)
from resilife.verify import catalog as catalog_module


def test_catalog_is_large_with_unique_ids():
    ids = [s.id for s in catalog()]
    assert len(ids) >= 20
    assert len(set(ids)) == len(ids)
    kinds = {s.kind for s in catalog()}
    assert {"theorem", "counterexample", "remark", "monte-carlo"} <= kinds


def test_unknown_scenario():
    with pytest.raises(UnknownScenarioError):
        run_scenario("nope")


def test_scenario_seeds_are_stable_and_distinct():
    assert scenario_seed(1, "T4.1i") == scenario_seed(1, "T4.1i")
    assert scenario_seed(1, "T4.1i") != scenario_seed(2, "T4.1i")
    assert scenario_seed(1, "T4.1i") != scenario_seed(1, "T4.1ii")


def test_rerun_gives_identical_verdicts():
    a = run_scenario("CE4.2")
    b = run_scenario("CE4.2")
    assert a.verdicts() == b.verdicts()


def test_monte_carlo_verdicts_depend_only_on_the_seed():
    s = Settings(mc_count=5_000)
    a = run_scenario("MC-koutn-exp", s)
    b = run_scenario("MC-koutn-exp", s)
    assert a.verdicts() == b.verdicts()
    c = run_scenario("MC-koutn-exp", s, seed=99)
    assert c.diagnostics != a.diagnostics


def test_report_json_round_trip():
    r = run_scenario("CE4.1")
    back = Report.from_json(r.to_json())
    assert back.verdicts() == json.loads(json.dumps(r.verdicts(), default=list))
    assert back.overall == r.overall


def test_report_csv_round_trip():
    reports = [run_scenario("R4.2"), run_scenario("CE4.1")]
    back = reports_from_csv(reports_to_csv(reports))
    for a, b in zip(reports, back):
        assert a.scenario_id == b.scenario_id and a.overall == b.overall
        assert [c.to_dict() for c in a.premises + a.conclusions] == [c.to_dict() for c in b.premises + b.conclusions]


def test_numeric_failure_gives_inconclusive(monkeypatch):
    def body(ctx):
        ctx.flag("never reached", True)
        raise QuadratureError("budget exhausted")

    monkeypatch.setitem(CATALOG, "broken", Scenario("broken", "remark", "always breaks", body))
    r = run_scenario("broken")
    assert r.overall == "inconclusive" and "QuadratureError" in r.error
    assert "inconclusive" in r.to_text().lower() or "INCONCLUSIVE" in r.to_text()


def test_expected_failure_needs_a_witness():
    assert not CheckResult("c", "fails", "fails").met
    assert CheckResult("c", "fails", "fails", witness=1.0).met
    assert CheckResult("c", "holds", "holds").met
    with pytest.raises(ValueError):
        CheckResult("c", "maybe", "holds")


def test_overall_rules():
    ok = CheckResult("a", "holds", "holds")
    bad = CheckResult("b", "holds", "fails", witness=0.5)
    unsure = CheckResult("c", "holds", "inconclusive")
    assert Report("x", "", "", [ok], [ok]).overall == "pass"
    assert Report("x", "", "", [ok], [bad]).overall == "fail"
    assert Report("x", "", "", [ok], [bad, unsure]).overall == "inconclusive"


@given(
    st.lists(
        st.tuples(
            st.sampled_from(["holds", "fails"]),
            st.sampled_from(["holds", "fails", "inconclusive"]),
            st.one_of(st.none(), st.floats(0, 10), st.tuples(st.floats(0, 10), st.floats(0, 10))),
            st.one_of(st.none(), st.floats(0, 1)),
        ),
        max_size=6,
    )
)
def test_csv_round_trip_property(rows):
    checks = [CheckResult(f"c{i}", e, s, w, mv, 1e-9) for i, (e, s, w, mv) in enumerate(rows)]
    r = Report("S", "", "", checks[:2], checks[2:])
    (back,) = reports_from_csv(reports_to_csv([r]))
    assert back.overall == r.overall
    assert [c.to_dict() for c in back.premises + back.conclusions] == [c.to_dict() for c in checks]


@pytest.mark.parametrize("sid", ["T4.2ii", "T5.2", "T6.1i", "R4.1", "CE5.1"])
def test_selected_scenarios_pass(sid):
    assert run_scenario(sid).overall == "pass"


def test_grid_setting_reaches_one_dimensional_checks():
    from resilife.numerics import Grid

    r = run_scenario("T4.2ii", grid=Grid(0.0, 3.0, 31))
    assert r.diagnostics["settings"]["grid"]["points"] == 31
    assert r.overall == "pass"
