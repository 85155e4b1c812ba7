"""Circle-grid trajectory-cell motion planning for surface vessels."""

from ._cgtc import (
    CellSet,
    CgtcError,
    CubicRelation,
    PlanResult,
    PolyFit,
    Scenario,
    ShipParams,
    ShipState,
    TrajectoryCell,
    build_cell_set,
    classify_encounter,
    compare_planners,
    fit_poly,
    generate_cell,
    grid_baseline_plan,
    load_scenario,
    online_generate,
    parse_scenario,
    pearson,
    plan_is_safe,
    plan_scenario,
    rules_hold,
    run_scenario,
    ship_domain_radius,
    simulate_turn,
    step,
    tangent_angles,
    trimmed_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
