import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from expolab.bessel import (
    MAX_TWO_NU,
    BesselOrder,
    ZeroTable,
    asymptotic_bound,
    build_zero_table,
    eval_bessel,
    jv,
    jv_asymptotic,
    jv_series,
    nearest_zero,
    zero_table_for,
)
from expolab.errors import BesselDomainError, OutOfRangeError, ZeroTableError

from oracles import series_zeros, tan_zeros

# j_{1,m} / (2 pi) and the tan x = x roots over 2 pi, frozen
J1_ZEROS = [0.6098349456209688, 1.1165652972180398, 1.6191577419]
J32_ZEROS = [0.7151483265621014, 1.2295120164783808, 1.7354448621735192]


@pytest.mark.parametrize("two_nu", range(1, MAX_TWO_NU + 1))
def test_jv_matches_scipy(two_nu):
    x = np.concatenate([np.linspace(0, 40, 801), np.geomspace(40, 1e4, 200)])
    ours = jv(two_nu, x)
    ref = sp.jv(two_nu / 2, x)
    scale = np.maximum(1.0, 1 / np.sqrt(np.maximum(x, 1)))
    assert np.max(np.abs(ours - ref) / scale) < 5e-13


@pytest.mark.parametrize("two_nu", [2, 4, 6, 8])
def test_series_and_hankel_agree_at_crossover(two_nu):
    order = BesselOrder(two_nu)
    x = np.linspace(order.crossover - 1, order.crossover + 1, 21)
    assert np.max(np.abs(jv_series(order, x) - jv_asymptotic(order, x))) < 1e-12


def test_half_integer_closed_forms():
    x = np.linspace(0.1, 30, 300)
    assert np.allclose(jv(1, x), np.sqrt(2 / (np.pi * x)) * np.sin(x), atol=1e-14)
    assert np.allclose(jv(3, x), np.sqrt(2 / (np.pi * x)) * (np.sin(x) / x - np.cos(x)), atol=1e-14)


def test_eval_bessel_scalar_and_zero():
    assert eval_bessel(2, 0.0) == 0.0
    assert isinstance(eval_bessel(3, 1.5), float)


@pytest.mark.parametrize("two_nu,x", [(MAX_TWO_NU + 1, 1.0), (-1, 1.0), (2, -1.0), (2, math.nan), (2, 1e7)])
def test_domain_errors(two_nu, x):
    with pytest.raises((BesselDomainError, ValueError)):
        eval_bessel(two_nu, x)


def test_order_helpers():
    o = BesselOrder.for_dimension(3)
    assert o.two_nu == 3 and o.nu == 1.5 and o.is_half_integer
    assert not BesselOrder.for_dimension(2).is_half_integer


@pytest.mark.parametrize("two_nu,expected", [(2, J1_ZEROS), (3, J32_ZEROS)])
def test_zero_table_frozen(two_nu, expected):
    t = build_zero_table(two_nu, 3)
    assert np.allclose(t.midpoints, expected, atol=1e-9)


def test_zero_table_against_series_oracle():
    t = build_zero_table(2, 8)
    assert np.allclose(t.midpoints, series_zeros(2, 8), atol=1e-9)


def test_tan_oracle_for_three_halves():
    t = build_zero_table(3, 30)
    assert np.allclose(t.midpoints, tan_zeros(30), atol=1e-9)


def test_half_order_zeros_are_half_integers():
    t = build_zero_table(1, 20, tolerance=1e-13)
    assert np.max(np.abs(t.midpoints - np.arange(1, 21) / 2)) < 1e-12


@pytest.mark.parametrize("two_nu", [2, 3, 5, 8, 12, 16])
def test_table_invariants(two_nu):
    t = build_zero_table(two_nu, 60)
    t.validate()
    assert np.all(np.diff(t.midpoints) > 0.4)
    assert np.all(t.hi - t.lo <= t.tolerance)
    dev = t.asymptotic_deviation()[4:]
    assert dev.max() < asymptotic_bound(two_nu)


def test_asymptotic_bound_is_one_for_small_dims():
    assert all(asymptotic_bound(d) == 1.0 for d in range(1, 12))
    assert asymptotic_bound(16) > 1.0


def test_json_round_trip_is_exact():
    t = build_zero_table(3, 10)
    back = ZeroTable.from_json(t.to_json())
    assert back == t
    assert back.to_json() == t.to_json()


def test_corrupted_table_rejected():
    t = build_zero_table(2, 5)
    rows = [list(z) for z in t.zeros]
    rows[2][1], rows[2][2] = rows[2][1] + 0.1, rows[2][2] + 0.1
    bad = ZeroTable(t.order, tuple(map(tuple, rows)), t.tolerance)
    with pytest.raises(ZeroTableError):
        bad.validate()
    with pytest.raises(ZeroTableError):
        ZeroTable.from_json(bad.to_json())


def test_bad_build_arguments():
    with pytest.raises(ValueError):
        build_zero_table(2, 0)
    with pytest.raises(ValueError):
        build_zero_table(2, 5, tolerance=0)


def test_nearest_zero_basics():
    t = build_zero_table(2, 10)
    m, dist = nearest_zero(t, J1_ZEROS[1] + 0.01)
    assert m == 2 and dist == pytest.approx(0.01, abs=1e-9)
    assert isinstance(dist, float)
    with pytest.raises(OutOfRangeError):
        nearest_zero(t, t.span + 0.01)
    with pytest.raises(OutOfRangeError):
        nearest_zero(t, -0.1)


def test_nearest_zero_tie_goes_to_smaller_index():
    t = build_zero_table(2, 5)
    mid = 0.5 * (t.midpoint(2) + t.midpoint(3))
    assert nearest_zero(t, mid)[0] == 2


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 20))
def test_nearest_zero_is_nearest(r):
    t = zero_table_for(2, 21)
    m, dist = nearest_zero(t, r)
    assert dist <= np.min(np.abs(t.midpoints - r)) + t.tolerance
    assert dist == pytest.approx(abs(r - t.midpoint(m)))


def test_zero_table_for_grows_and_caches():
    a = zero_table_for(5, 3)
    b = zero_table_for(5, 2)
    assert a is b
    c = zero_table_for(5, 40)
    assert c.span >= 40 and len(c) > len(a)
