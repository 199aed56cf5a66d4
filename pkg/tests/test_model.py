import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zicdgr.model import (
    DiversityPair,
    GammaTriple,
    OperatingPoint,
    ParameterError,
    SplitParams,
    b_max,
    exponent_weight,
    plus,
)


@pytest.mark.parametrize("x, want", [(0.4, 0.4), (-0.3, 0.0), (0.0, 0.0)])
def test_plus_scalar(x, want):
    assert plus(x) == want


def test_plus_array():
    np.testing.assert_array_equal(plus(np.array([-1.0, 0.0, 2.5])), [0.0, 0.0, 2.5])


@pytest.mark.parametrize(
    "g, want", [((0, 0, 0), 0.0), ((0.8, 0, 0), 0.8), ((0.7, 0.1, 0.3), 1.1)]
)
def test_exponent_weight(g, want):
    assert exponent_weight(GammaTriple(*g)) == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize(
    "args", [(-0.1, 0.3, 0.5), (0.2, 1.1, 0.5), (0.2, 0.3, -0.5), (math.nan, 0.3, 0.5), (0.2, 0.3, math.inf)]
)
def test_operating_point_rejects(args):
    with pytest.raises(ParameterError):
        OperatingPoint(*args)


def test_split_params_range():
    op = OperatingPoint(0.2, 0.3, 0.4)
    with pytest.raises(ParameterError):
        SplitParams(op, 0.31, 0.5)
    with pytest.raises(ParameterError):
        SplitParams(op, 0.1, -0.2)
    sp = SplitParams(op, 0.1, 0.5)
    assert sp.s2 == pytest.approx(0.2)


def test_split_params_clamps_round_off():
    op = OperatingPoint(0.2, 0.3, 0.4)
    sp = SplitParams(op, 0.3 + 1e-14, -1e-14)
    assert (sp.t2, sp.b, sp.s2) == (0.3, 0.0, 0.0)


def test_gamma_rejects_negative():
    with pytest.raises(ParameterError):
        GammaTriple(0.1, -0.01, 0.0)


def test_diversity_pair_bounds():
    with pytest.raises(ParameterError):
        DiversityPair(0.5, 1.2)
    assert DiversityPair(1.4, 1.0).as_tuple() == (1.4, 1.0)
    assert DiversityPair(math.inf, math.inf).d2 == math.inf


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 3))
def test_b_max_exceeds_beta(r1, r2, beta):
    assert b_max(OperatingPoint(r1, r2, beta)) >= beta + 1.0
