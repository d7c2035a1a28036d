from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import schedules
from ferenczi import dimgroup as dg
from ferenczi import measure, presets, towers
from ferenczi.errors import FerencziError, RealizationError
from ferenczi.linalg import Interval
from ferenczi.params import alphabets, periodic


def test_chacon_descriptor():
    d = dg.dimension_group(presets.chacon())
    assert d.group_name() == "Z x Z[1/3]"
    assert d.cone_string() == "x + 2y > 0"
    assert d.B == (1,) and d.a_prime == 0
    assert d.z == {1: Fraction(1, 2), 0: 1}
    assert (d.u[1], d.u[0]) == (1, 1)
    assert d.rank == 2


def test_chacon_cone_membership():
    d = dg.dimension_group(presets.chacon())
    assert d.positive({1: 1, 0: 1})
    assert d.positive({1: 0, 0: 0})
    assert not d.positive({1: -2, 0: 1})
    assert d.positive({1: -1, 0: 1})
    assert not d.positive({1: 1, 0: -1})


def test_chacon_orbit_equivalence():
    oe = dg.orbit_equivalence(presets.chacon())
    assert oe.c == Fraction(2, 3)
    assert oe.z_tilde == {1: Fraction(1, 3), 0: Fraction(2, 3)}
    assert oe.to_json()["coset"] == "(2/3) * Z[1/3]"


def test_tail_ring():
    d = dg.dimension_group(presets.chacon())
    assert d.in_tail_ring(Fraction(5, 27))
    assert not d.in_tail_ring(Fraction(1, 2))
    four = dg.dimension_group(presets.four_letter())
    assert four.group_name() == "Z x Z x Z x Z[1/3]"


def test_valuation_profile():
    assert dg.valuation_profile(((2, 4), (3,)), 2) == dg.Valuation(3)
    assert dg.valuation_profile(((2, 4), (3,)), 3).infinite
    assert dg.valuation_profile(((), (6, 5)), 5).infinite
    assert dg.valuation_profile(((), (3,)), 7) == dg.Valuation(0)
    with pytest.raises(FerencziError):
        dg.valuation_profile(((), (3,)), 4)


def test_preperiod_limits_ring():
    # stage 0 has 3 copies, so Q_{0,n} carries exactly 2^2 beyond the period's 3s
    s = periodic([0, 1], preperiod=[[0, 1, 1]])
    d = dg.dimension_group(s)
    assert d.tail_base["preperiod"] == [4] and d.tail_base["period"] == [3]
    assert d.in_tail_ring(Fraction(1, 4))
    assert not d.in_tail_ring(Fraction(1, 8))


@given(schedules())
def test_descriptor_invariants(s):
    d = dg.dimension_group(s)
    tower = alphabets(s)
    assert d.rank == tower.d
    assert all(0 < d.z[b] < 1 for b in d.B)
    assert sum(d.z[b] for b in d.B) < 1
    # u . z is the normalizing constant of mu_{n0}
    v = measure.v_vector(s, tower.n0)
    h = towers.heights(s, tower.n0)
    assert sum(d.u[a] * d.z[a] for a in d.letters) == sum(h[a] * v[a] for a in v)
    assert d.positive(d.u)


@given(schedules())
def test_oe_matches_measure(s):
    oe = dg.orbit_equivalence(s)
    n0 = alphabets(s).n0
    mu = measure.measure_vector(s, n0).values
    d = dg.dimension_group(s)
    for b in d.B:
        assert oe.z_tilde[b] == mu[b]
    assert sum(d.u[a] * oe.z_tilde[a] for a in d.letters) == 1


def test_growth_descriptor():
    d = dg.dimension_group(presets.dwmu_one())
    assert not d.exact
    assert isinstance(d.z[2], Interval)
    assert d.group_name() == "Z x Z[(q_n+1)]"
    with pytest.raises(FerencziError):
        d.positive({1: 1, 2: 1})
    oe = dg.orbit_equivalence(presets.dwmu_one())
    assert oe.c.lo <= oe.c.hi and oe.rationally_independent is None


def test_realize_chacon():
    data = dg.FerencziTypeData((1,), ((), (2,)), {1: Fraction(1, 2)}, {1: 1}, 1)
    s = dg.realize(data)
    assert s == presets.chacon()
    d = dg.dimension_group(s)
    assert d.z[1] == Fraction(1, 2)
    assert (d.u[1], d.u[0]) == (1, 1)


def test_realize_with_contraction():
    data = dg.FerencziTypeData((1, 2), ((), (2,)), {1: Fraction(1, 2), 2: Fraction(1, 4)}, {1: 1, 2: 2}, 3)
    s = dg.realize(data)
    d = dg.dimension_group(s)
    assert d.tail_base["period"] == [9]
    assert d.ring_name() == "Z[1/3]"
    assert {b: d.z[b] for b in d.B} == {3: Fraction(1, 2), 4: Fraction(1, 4)}
    assert d.u[d.a_prime] == 3


def test_realize_terminating_expansion_fails():
    data = dg.FerencziTypeData((1,), ((), (2,)), {1: Fraction(1, 3)}, {1: 1}, 1)
    with pytest.raises(RealizationError, match="terminates"):
        dg.realize(data)


@pytest.mark.parametrize("kwargs", [
    dict(B=(1,), r=((), (1,)), z={1: Fraction(1, 2)}, v={1: 1}, w=1),
    dict(B=(1,), r=((), ()), z={1: Fraction(1, 2)}, v={1: 1}, w=1),
    dict(B=(1, 2), r=((), (2,)), z={1: Fraction(1, 2), 2: Fraction(1, 2)}, v={1: 1, 2: 2}, w=1),
    dict(B=(1, 2), r=((), (2,)), z={1: Fraction(1, 4), 2: Fraction(1, 4)}, v={1: 1, 2: 1}, w=1),
    dict(B=(1,), r=((), (2,)), z={1: Fraction(1, 2)}, v={1: 1}, w=0),
])
def test_data_validation(kwargs):
    with pytest.raises(FerencziError):
        dg.FerencziTypeData(**kwargs)


@st.composite
def ferenczi_data(draw):
    k = draw(st.integers(1, 3))
    B = tuple(range(k))
    period = tuple(draw(st.lists(st.integers(2, 4), min_size=1, max_size=2)))
    pre = tuple(draw(st.lists(st.integers(2, 4), max_size=1)))
    den = draw(st.integers(2, 40))
    nums = draw(st.lists(st.integers(1, den - 1), min_size=k, max_size=k))
    assume(sum(nums) < den)
    z = {b: Fraction(x, den) for b, x in zip(B, nums)}
    v = dict(zip(B, draw(st.lists(st.integers(1, 6), min_size=k, max_size=k, unique=True))))
    w = draw(st.integers(1, 4))
    return dg.FerencziTypeData(B, (pre, period), z, v, w)


@given(ferenczi_data())
def test_realization_round_trip(data):
    try:
        s = dg.realize(data)
    except RealizationError:
        assume(False)
    d = dg.dimension_group(s)
    a = data.w - 1
    assert d.a_prime == a and d.u[a] == data.w
    for b in data.B:
        letter = a + data.v[b]
        assert d.z[letter] == data.z[b]
        assert d.u[letter] == data.v[b]
    # contraction multiplies bases together, so the primes of the ring survive
    assert set(d.primes()) == {p for r in data.r[1] for p in dg.prime_factors(r + 1)}
    # realizing the schedule's own data gives the schedule back
    assert dg.realize(dg.data_from_schedule(s)) == s
