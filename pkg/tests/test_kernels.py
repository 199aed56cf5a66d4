import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zicdgr import events as ev
from zicdgr._backend import backend_name, compiled_available, load_backend
from zicdgr.model import OperatingPoint, SplitParams
from zicdgr.regions import (
    CMO,
    HK,
    TIAN,
    MixedCmoHk,
    MixedParams,
    TimeShareHK,
    TimeShareParams,
    finite_constants,
    kernel_params,
)

needs_compiled = pytest.mark.skipif(not compiled_available(), reason="compiled kernels not built")


@st.composite
def any_scheme(draw):
    op = OperatingPoint(draw(st.floats(0, 1)), draw(st.floats(0, 1)), draw(st.floats(0, 2)))
    u = [draw(st.floats(0, 1)) for _ in range(4)]
    kind = draw(st.sampled_from(["hk", "cmo", "tian", "ts", "mixed"]))
    if kind == "hk":
        return op, HK(SplitParams(op, u[0] * op.r2, 3 * u[1]))
    if kind == "cmo":
        return op, CMO()
    if kind == "tian":
        return op, TIAN()
    if kind == "ts":
        lam = 0.05 + 0.9 * u[0]
        return op, TimeShareHK(TimeShareParams(lam, 3 * u[1], 3 * u[2], u[3] * op.r2 / lam))
    return op, MixedCmoHk(MixedParams(0.05 + 0.9 * u[0], 3 * u[1], u[2] * op.r2, u[3] * op.r2))


@needs_compiled
@given(any_scheme(), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_highsnr_kernels_bitwise_equal(op_scheme, rx, seed):
    op, scheme = op_scheme
    code, p = ev.HK, kernel_params(op, scheme)
    code = {HK: ev.HK, CMO: ev.CMO, TIAN: ev.TIAN, TimeShareHK: ev.TIMESHARE, MixedCmoHk: ev.MIXED}[type(scheme)]
    g = np.random.default_rng(seed).random((3, 500)) * 2.5
    # include breakpoint-adjacent values where round-off matters most
    g[:, :3] = [[0.0, 1.0, op.beta], [op.beta, 0.0, 1.0], [1.0 - op.r2, op.r2, 0.0]]
    fast, slow = load_backend("compiled"), load_backend("python")
    np.testing.assert_array_equal(
        np.asarray(fast.highsnr_mask(code, p, rx, *g)), slow.highsnr_mask(code, p, rx, *g)
    )
    a = np.asarray(fast.g11_threshold(code, p, rx, g[1], g[2], 2.5, 52))
    b = slow.g11_threshold(code, p, rx, g[1], g[2], 2.5, 52)
    np.testing.assert_array_equal(a, b)


@needs_compiled
@given(any_scheme(), st.integers(1, 2), st.floats(1.0, 60.0), st.integers(0, 2**32 - 1))
def test_finite_kernels_agree(op_scheme, rx, snr_db, seed):
    op, scheme = op_scheme
    code = {HK: ev.HK, CMO: ev.CMO, TIAN: ev.TIAN, TimeShareHK: ev.TIMESHARE, MixedCmoHk: ev.MIXED}[type(scheme)]
    k = finite_constants(op, scheme, snr_db)
    x = np.random.default_rng(seed).standard_exponential((2000, 3))
    fast, slow = load_backend("compiled"), load_backend("python")
    np.testing.assert_array_equal(np.asarray(fast.finite_mask(code, k, rx, x)), slow.finite_mask(code, k, rx, x))
    assert fast.finite_count(code, k, rx, x) == slow.finite_count(code, k, rx, x)


def test_threshold_bisection_sentinels(each_backend):
    from zicdgr._backend import backend

    op = OperatingPoint(0.2, 0.3, 0.4)
    p = kernel_params(op, CMO())
    out = np.asarray(backend().g11_threshold(ev.CMO, p, 2, np.zeros(2), np.array([0.9, 0.1]), 2.5, 52))
    assert out[0] == 0.0 and np.isinf(out[1])


def test_env_var_forces_fallback():
    env = dict(os.environ, ZICDGR_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from zicdgr._backend import backend_name; print(backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_default_backend_prefers_compiled():
    if os.environ.get("ZICDGR_PURE_PYTHON", "") not in ("", "0"):
        pytest.skip("fallback forced by environment")
    assert backend_name() == ("compiled" if compiled_available() else "python")


def test_unknown_backend():
    with pytest.raises(ValueError):
        load_backend("fortran")
