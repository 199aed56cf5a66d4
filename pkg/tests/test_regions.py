import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from zicdgr.model import GammaTriple, OperatingPoint, ParameterError, SplitParams
from zicdgr.regions import (
    CMO,
    HK,
    TIAN,
    HighSnrRegion,
    MixedCmoHk,
    MixedParams,
    TimeShareHK,
    TimeShareParams,
    cmo_highsnr_outage,
    finite_constants,
    finite_snr_outage,
    hk_highsnr_outage,
    mixed_highsnr_outage,
    parse_scheme,
    tian_highsnr_outage,
    timeshare_highsnr_outage,
)

unit = st.floats(0.0, 1.0)
gam = st.floats(0.0, 2.5)


@st.composite
def op_split(draw, beta_max=1.0):
    op = OperatingPoint(draw(unit), draw(unit), draw(st.floats(0.0, beta_max)))
    sp = SplitParams(op, draw(st.floats(0.0, 1.0)) * op.r2, draw(st.floats(0.0, 3.0)))
    return op, sp


# --- high-SNR examples -------------------------------------------------------


def test_hk_rx1_direct_link_event():
    op = OperatingPoint(0.2, 0.3, 0.4)
    sp = SplitParams(op, 0.1, 0.5)
    assert hk_highsnr_outage(GammaTriple(0.85, 0, 0), op, sp, 1)
    assert not hk_highsnr_outage(GammaTriple(0.75, 0, 0), op, sp, 1)


def test_hk_rx2_private_event():
    op = OperatingPoint(0.2, 0.3, 0.4)
    sp = SplitParams(op, 0.1, 0.5)
    # private event needs g22 > 1 - b - s2 = 0.3
    assert hk_highsnr_outage(GammaTriple(0, 0, 0.35), op, sp, 2)
    assert not hk_highsnr_outage(GammaTriple(0, 0, 0.25), op, sp, 2)


@given(unit, unit, st.floats(0, 1), st.floats(0, 1), st.floats(0, 3), st.integers(1, 2))
def test_origin_never_in_outage(r1, r2, beta, tfrac, b, rx):
    # holds while rates plus the residual interference fit in one degree of
    # freedom and the private message keeps a positive exponent
    op = OperatingPoint(r1, r2, beta)
    sp = SplitParams(op, tfrac * r2, b)
    assume(r1 + r2 + max(beta - b, 0.0) <= 1.0)
    assume(sp.s2 == 0.0 or sp.b + sp.s2 <= 1.0)
    g = GammaTriple(0, 0, 0)
    assert not hk_highsnr_outage(g, op, sp, rx)
    assert not cmo_highsnr_outage(g, op, rx)


def test_origin_in_outage_outside_those_limits():
    op = OperatingPoint(0.6, 0.5, 0.3)
    assert cmo_highsnr_outage(GammaTriple(0, 0, 0), op, 1)
    op = OperatingPoint(0.2, 0.3, 0.4)
    assert hk_highsnr_outage(GammaTriple(0, 0, 0), op, SplitParams(op, 0.1, 0.9), 2)


def test_cmo_examples():
    op = OperatingPoint(0.2, 0.3, 0.9)
    assert cmo_highsnr_outage(GammaTriple(0.85, 0, 0), op, 1)
    assert cmo_highsnr_outage(GammaTriple(0.6, 0.5, 0), op, 1)
    assert not cmo_highsnr_outage(GammaTriple(0, 0, 0.5), op, 2)
    assert cmo_highsnr_outage(GammaTriple(0, 0, 0.75), op, 2)


def test_tian_examples():
    op = OperatingPoint(0.2, 0.3, 0.5)
    assert tian_highsnr_outage(GammaTriple(0.35, 0, 0), op, 1)
    assert not tian_highsnr_outage(GammaTriple(0.2, 0.5, 0), op, 1)


def test_timeshare_split_values():
    tsp = TimeShareParams(0.5, 0.2, 0.6, 0.4)
    assert tsp.b_c == pytest.approx(0.4)
    assert tsp.t_c == pytest.approx(0.2)
    one = TimeShareParams(1.0, 0.3, 0.9, 0.25)
    assert (one.b_c, one.t_c) == (0.3, 0.25)


@given(gam, gam, gam, st.integers(1, 2))
def test_timeshare_matches_equivalent_split(g11, g21, g22, rx):
    op = OperatingPoint(0.2, 0.3, 0.4)
    tsp = TimeShareParams(0.5, 0.2, 0.6, 0.4)
    g = GammaTriple(g11, g21, g22)
    assert timeshare_highsnr_outage(g, op, tsp, rx) == hk_highsnr_outage(
        g, op, SplitParams(op, 0.2, 0.4), rx
    )


def test_timeshare_rx2_example():
    op = OperatingPoint(0.2, 0.3, 0.4)
    tsp = TimeShareParams(0.5, 0.2, 0.6, 0.4)
    g = GammaTriple(0, 0, 0.35)
    assert timeshare_highsnr_outage(g, op, tsp, 2) == hk_highsnr_outage(
        g, op, SplitParams(op, 0.2, 0.4), 2
    )


def test_mixed_rx1_example():
    op = OperatingPoint(0.2, 0.3, 0.4)
    mp = MixedParams(0.5, 0.4, 0.2, 0.1)
    assert mixed_highsnr_outage(GammaTriple(1.1, 0, 0), op, mp, 1)


@given(gam, gam, gam, st.floats(0, 1.5), st.floats(0.2, 0.4))
def test_mixed_without_cmo_slot_is_hk(g11, g21, g22, b, t22):
    # the third RX1 event is void once t22 >= r1
    op = OperatingPoint(0.2, 0.3, 0.6)
    g = GammaTriple(g11, g21, g22)
    mp = MixedParams(0.0, b, 0.25, t22)
    hk = SplitParams(op, 0.0, b)
    for rx in (1, 2):
        assert mixed_highsnr_outage(g, op, mp, rx) == hk_highsnr_outage(g, op, hk, rx)


@given(gam, gam, gam, st.floats(0, 1.5), st.floats(0, 0.3))
def test_mixed_without_hk_slot_is_cmo(g11, g21, g22, b, t22):
    op = OperatingPoint(0.2, 0.3, 0.6)
    g = GammaTriple(g11, g21, g22)
    mp = MixedParams(1.0, b, op.r2, t22)
    for rx in (1, 2):
        assert mixed_highsnr_outage(g, op, mp, rx) == cmo_highsnr_outage(g, op, rx)


@given(op_split(), gam, gam, gam)
def test_tian_is_hk_without_split(opsp, g11, g21, g22):
    op, _ = opsp
    g = GammaTriple(g11, g21, g22)
    assert tian_highsnr_outage(g, op, 1) == hk_highsnr_outage(g, op, SplitParams(op, 0, 0), 1)


@given(op_split(beta_max=2.0), gam, gam, gam, st.floats(0, 1))
def test_monotone_in_direct_exponents(opsp, g11, g21, g22, step):
    op, sp = opsp
    for scheme in (HK(sp), CMO(), TIAN()):
        if HighSnrRegion(op, scheme, 1)(GammaTriple(g11, g21, g22)):
            assert HighSnrRegion(op, scheme, 1)(GammaTriple(g11 + step, g21, g22))
        if HighSnrRegion(op, scheme, 2)(GammaTriple(g11, g21, g22)):
            assert HighSnrRegion(op, scheme, 2)(GammaTriple(g11, g21, g22 + step))


@pytest.mark.parametrize("s2", [1e-3, 1e-6, 1e-9])
@pytest.mark.parametrize("b", [1.0, 2.0, 50.0])
def test_cmo_singularity_region_level(s2, b):
    # as t2 -> r2 with b >= 1 the HK private event covers every g22 > [1 - b]+,
    # while CMO needs g22 > 1 - r2: the HK regions do not approach CMO's
    op = OperatingPoint(0.2, 0.3, 0.6)
    sp = SplitParams(op, op.r2 - s2, b)
    for g22 in (1e-6, 0.1, 0.5, 0.69):
        g = GammaTriple(0, 0, g22)
        assert hk_highsnr_outage(g, op, sp, 2)
        assert not cmo_highsnr_outage(g, op, 2)
    assert cmo_highsnr_outage(GammaTriple(0, 0, 0.71), op, 2)


def test_zero_rate_private_message_has_no_event():
    # with s2 = 0 exactly the strict private event is empty and RX2 sees
    # only the full-rate event, so the set jumps back to CMO's
    op = OperatingPoint(0.2, 0.3, 0.6)
    sp = SplitParams(op, op.r2, 2.0)
    for g22 in (0.0, 0.3, 0.69, 0.71, 1.5):
        g = GammaTriple(0, 0, g22)
        assert hk_highsnr_outage(g, op, sp, 2) == cmo_highsnr_outage(g, op, 2)


def test_mask_matches_scalar_predicate():
    op = OperatingPoint(0.25, 0.35, 0.7)
    region = HighSnrRegion(op, MixedCmoHk(MixedParams(0.4, 0.5, 0.3, 0.1)), 1)
    rng = np.random.default_rng(3)
    g = rng.random((3, 400)) * 2
    m = region.mask(*g)
    assert m.dtype == bool
    assert [region(GammaTriple(*col)) for col in g.T] == m.tolist()


def test_g11_threshold_boundaries():
    op = OperatingPoint(0.2, 0.3, 0.4)
    region = HighSnrRegion(op, CMO(), 1)
    t = region.g11_threshold([0.0, 2.0], [0.0, 0.0], hi=2.5)
    assert t[0] == pytest.approx(0.5, abs=1e-12)
    # rx2 ray in g11 either starts inside or never enters
    r2 = HighSnrRegion(op, CMO(), 2)
    assert r2.g11_threshold(0.0, 0.9, 2.5) == 0.0
    assert math.isinf(r2.g11_threshold(0.0, 0.1, 2.5))


def test_relevant_axes():
    op = OperatingPoint(0.2, 0.3, 0.4)
    assert HighSnrRegion(op, CMO(), 1).relevant_axes == (True, False)
    assert HighSnrRegion(op, CMO(), 2).relevant_axes == (False, True)
    with pytest.raises(ParameterError):
        HighSnrRegion(op, CMO(), 3)


def test_parse_scheme():
    op = OperatingPoint(0.2, 0.3, 0.4)
    assert isinstance(parse_scheme("HK", op, t2=0.1, b=0.5), HK)
    assert isinstance(parse_scheme("timeshare", op, lam=0.5, b1=0.1, b2=0.2, t21=0.1), TimeShareHK)
    with pytest.raises(ParameterError):
        parse_scheme("foo", op)


# --- finite SNR --------------------------------------------------------------


def test_finite_cmo_rx2_threshold():
    op = OperatingPoint(0.2, 0.5, 0.4)
    assert finite_snr_outage((0.0098,), 40.0, op, CMO(), 2)
    assert not finite_snr_outage((0.0100,), 40.0, op, CMO(), 2)


@pytest.mark.parametrize("scheme", [
    CMO(), TIAN(), HK(SplitParams(OperatingPoint(0.2, 0.3, 0.4), 0.1, 0.5)),
    TimeShareHK(TimeShareParams(0.5, 0.2, 0.6, 0.4)),
    MixedCmoHk(MixedParams(0.5, 0.4, 0.2, 0.1)),
])
def test_finite_huge_direct_gain_never_outage(scheme):
    op = OperatingPoint(0.2, 0.3, 0.4)
    for snr in (10.0, 30.0, 60.0):
        assert not finite_snr_outage((1e30, 0.7), snr, op, scheme, 1)


def test_finite_hk_without_split_rx2():
    # b = 0 still halves the private power; the private event then needs
    # |h22|^2 < 2 (SNR^r2 - 1) / SNR, twice TIAN's single threshold
    op = OperatingPoint(0.2, 0.3, 0.4)
    snr_db = 30.0
    s = 10 ** (snr_db / 10)
    thr = (s ** 0.3 - 1) / s
    hk = HK(SplitParams(op, 0.0, 0.0))
    for x in (0.5 * thr, 1.5 * thr, 2.5 * thr):
        assert finite_snr_outage(x, snr_db, op, hk, 2) == (x < 2 * thr)
        assert finite_snr_outage(x, snr_db, op, TIAN(), 2) == (x < thr)


def test_finite_constants_reject_nonpositive_snr():
    op = OperatingPoint(0.2, 0.3, 0.4)
    with pytest.raises(ParameterError):
        finite_constants(op, CMO(), 0.0)


def test_finite_alpha_no_overflow():
    op = OperatingPoint(0.2, 0.3, 0.4)
    k = finite_constants(op, HK(SplitParams(op, 0.1, 400.0)), 60.0)
    assert np.all(np.isfinite(k))
    assert k[1] == 0.0 and k[6] == 0.0
