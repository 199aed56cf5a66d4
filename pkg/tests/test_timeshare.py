import dataclasses

import pytest

from zicdgr.closedform import hk_diversity, mixed_upper_bounds
from zicdgr.model import OperatingPoint, SplitParams, b_max
from zicdgr.oracle import OracleConfig, diversity_pair
from zicdgr.regions import TimeShareHK, TimeShareParams
from zicdgr.timeshare import (
    LAM_RANGE,
    InfeasibleRateError,
    draw_mixed,
    draw_timeshare,
    timeshare_equivalent_split,
    verify_mixed_dominance,
    verify_timeshare_dominance,
)
from zicdgr.tradeoff import Envelope

OP = OperatingPoint(0.2, 0.3, 0.6)


@pytest.mark.parametrize("tsp, want", [
    (TimeShareParams(0.5, 0.2, 0.6, 0.4), (0.2, 0.4)),
    (TimeShareParams(1.0, 0.2, 0.6, 0.25), (0.25, 0.2)),
    (TimeShareParams(0.0, 0.2, 0.6, 0.4), (0.0, 0.6)),
])
def test_equivalent_split(tsp, want):
    sp = timeshare_equivalent_split(tsp, OP)
    assert (sp.t2, sp.b) == pytest.approx(want, abs=1e-12)


def test_infeasible_common_rate():
    with pytest.raises(InfeasibleRateError):
        timeshare_equivalent_split(TimeShareParams(0.5, 0.2, 0.6, 0.7), OP)


def test_two_slot_pair_equals_single_split():
    tsp = TimeShareParams(0.5, 0.2, 0.6, 0.4)
    hk = hk_diversity(OP, SplitParams(OP, 0.2, 0.4))
    oracle = diversity_pair(OP, TimeShareHK(tsp), OracleConfig.for_point(OP))
    assert oracle.as_tuple() == pytest.approx((hk.d1, hk.d2), abs=3e-3)


def test_draws_are_per_index():
    fwd = [draw_timeshare(OP, 11, i) for i in range(20)]
    assert [draw_timeshare(OP, 11, i) for i in reversed(range(20))] == fwd[::-1]
    assert draw_timeshare(OP, 12, 0) != fwd[0]
    assert draw_mixed(OP, 5, 3) == draw_mixed(OP, 5, 3)


def test_draws_in_box():
    for i in range(200):
        t = draw_timeshare(OP, 1, i)
        assert LAM_RANGE[0] <= t.lam <= LAM_RANGE[1]
        assert 0 <= t.b1 <= b_max(OP) and 0 <= t.b2 <= b_max(OP)
        assert t.t_c <= OP.r2 + 1e-12 and 0 <= t.t22 <= OP.r2
        assert t.scenario in (1, 2, 3)
        m = draw_mixed(OP, 1, i)
        assert LAM_RANGE[0] <= m.lam <= LAM_RANGE[1]
        assert m.lam * m.t21 <= OP.r2 + 1e-12 and 0 <= m.t22 <= OP.r2


def test_mixed_example_is_dominated():
    op = OperatingPoint(0.2, 0.3, 0.4)
    mp = draw_mixed(op, 0, 0)
    mp = dataclasses.replace(mp, lam=0.5, b=0.4, t21=0.0, t22=0.1)
    ub = mixed_upper_bounds(op, mp)
    assert ub.extra["d11"] == pytest.approx(0.8, abs=1e-12)
    assert Envelope(op).dominates(ub.d1, ub.d2, 3e-3)


def test_mixed_bound_above_oracle():
    for i in range(30):
        mp = draw_mixed(OP, 3, i)
        from zicdgr.regions import MixedCmoHk

        ub = mixed_upper_bounds(OP, mp)
        pair = diversity_pair(OP, MixedCmoHk(mp), OracleConfig.for_point(OP))
        assert pair.d1 <= ub.d1 + 3e-3 and pair.d2 <= ub.d2 + 3e-3


@pytest.mark.parametrize("op", [(0.2, 0.3, 0.9), (0.2, 0.3, 0.6), (0.3, 0.4, 0.2)])
def test_timeshare_small_run(op):
    rep = verify_timeshare_dominance(OperatingPoint(*op), 150, seed=4)
    assert rep.passed, rep.as_dict()
    assert rep.as_dict()["passed"] is True


def test_mixed_small_run_reports():
    rep = verify_mixed_dominance(OperatingPoint(0.2, 0.3, 0.4), 150, seed=4)
    d = rep.as_dict()
    assert d["kind"] == "mixed" and d["samples"] == 150
    assert not rep.mismatches


def test_report_is_deterministic():
    a = verify_mixed_dominance(OP, 40, seed=9).as_dict()
    b = verify_mixed_dominance(OP, 40, seed=9).as_dict()
    assert a == b
