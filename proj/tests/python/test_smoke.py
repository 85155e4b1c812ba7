import math
import os
from pathlib import Path

import pytest

import cgtc

SCENARIOS = Path(os.environ.get("CGTC_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))

TABLE = [(-35, -89.2433), (-29, -80.761), (-23, -69.3535), (-17, -54.8467), (-11, -37.0651), (-5, -17.0874),
         (1, 3.8501), (7, 26.1262), (13, 46.9387), (19, 64.3923), (25, 78.3661), (31, 89.3798)]


def test_pearson_and_cubic():
    xs, ys = zip(*TABLE)
    assert cgtc.pearson(list(xs), list(ys)) == pytest.approx(0.9957, abs=5e-4)
    fit = cgtc.fit_poly(list(xs), list(ys), 3)
    assert len(fit.coefficients) == 4
    assert fit(31.0) == pytest.approx(89.38, abs=2.0)


def test_zero_variance_raises_with_code():
    with pytest.raises(cgtc.CgtcError) as info:
        cgtc.pearson([1.0, 2.0, 3.0], [4.0, 4.0, 4.0])
    assert info.value.code == "ZeroVariance"
    assert isinstance(info.value, ValueError)


def test_step_and_turn():
    params = cgtc.ShipParams()
    s = cgtc.step(cgtc.trimmed_state(params), params, 0.0, 1.0)
    assert (s.x_m, s.y_m) == pytest.approx((0.0, 7.7))
    track = cgtc.simulate_turn(params, 35.0, 60.0, 0.5)
    assert len(track) == 121
    assert track[-1].heading_deg > 0.0


def test_cells_and_relation():
    params = cgtc.ShipParams()
    radius = cgtc.ship_domain_radius(params, 6.0)
    cell = cgtc.generate_cell(params, 45.0, radius)
    assert cell.heading_change_deg == pytest.approx(45.0, abs=0.2)
    assert math.hypot(*cell.end_offset) == pytest.approx(radius, rel=5e-3)
    assert cgtc.rules_hold(cell, params)
    cells = cgtc.build_cell_set(params, radius, 15.0)
    assert len(cells.cells) == 13
    assert cells.relation.invert(cells.relation.heading_change(10.0)) == pytest.approx(10.0, abs=1e-5)


def test_tangents_and_encounter():
    left, right = cgtc.tangent_angles((0.0, 0.0), (0.0, 1000.0), 500.0)
    assert (left, right) == pytest.approx((330.0, 30.0))
    c = cgtc.classify_encounter((0, 0), 0.0, 10.0, (-2000, 2000), 90.0, 10.0, 600.0, 900.0)
    assert c["kind"] == "MustSteer"
    assert c["v_lo_mps"] == pytest.approx(2.5)
    assert c["v_hi_mps"] == pytest.approx(40.0)


def test_plan_and_compare():
    scenario = cgtc.load_scenario(str(SCENARIOS / "fig25_analog.json"))
    report = cgtc.compare_planners(scenario)
    assert report["length_ratio"] <= 1.0
    assert report["steering_ratio"] <= 0.6
    plan = cgtc.plan_scenario(scenario)
    assert plan.reached and cgtc.plan_is_safe(scenario, plan)


def test_dynamic_scenario_and_files(tmp_path):
    code, files = cgtc.run_scenario(str(SCENARIOS / "dynamic_situation3.json"), str(tmp_path))
    assert code == 0
    names = {Path(f).name for f in files}
    assert {"trajectory.csv", "commands.csv", "metrics.json", "separation.csv"} <= names


def test_parse_error_names_field():
    with pytest.raises(cgtc.CgtcError) as info:
        cgtc.parse_scenario('{"name": "x", "mode": "free", "start": {"x_m": 0, "y_m": 0, "heading_deg": "n"},'
                            ' "destination": {"x_m": 0, "y_m": 100}}')
    assert info.value.code == "ParseError"
    assert "start.heading_deg" in str(info.value)
