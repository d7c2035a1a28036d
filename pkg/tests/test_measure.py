from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import schedules
from oracles import naive_word
from ferenczi import measure, presets, towers, words
from ferenczi.errors import NotInLanguage, ScheduleError
from ferenczi.linalg import Interval, Vector
from ferenczi.params import alphabets, periodic, q_product, spacer_counts


def test_chacon_measure_values():
    s = presets.chacon()
    assert measure.measure_vector(s, 1).values == {0: Fraction(1, 3), 1: Fraction(1, 3)}
    assert measure.measure_vector(s, 2).values == {0: Fraction(1, 9), 1: Fraction(1, 9)}
    masses = measure.tower_masses(s, 2)
    assert masses == {0: Fraction(4, 9), 1: Fraction(5, 9)}
    assert sum(masses.values()) == 1
    assert measure.measure_vector(s, 0).values == {0: Fraction(2, 3), 1: Fraction(1, 3)}


@given(schedules(), st.integers(1, 5))
def test_v_vector_is_probability(s, m):
    m = max(m, alphabets(s).n0)
    v = measure.v_vector(s, m)
    assert sum(v.values()) == 1
    assert all(x > 0 for x in v.values())


@given(schedules(), st.integers(0, 6), st.integers(1, 6))
def test_invariance(s, m, span):
    n = min(m + span, 12)
    if n <= m:
        return
    mu_m = measure.measure_vector(s, m).vector()
    mu_n = measure.measure_vector(s, n).vector()
    assert towers.direct_product(s, m, n) @ mu_n == mu_m


@given(schedules(), st.integers(0, 8))
def test_total_mass_is_one(s, n):
    assert sum(measure.tower_masses(s, n).values()) == 1


@given(schedules(max_q=3, max_spacer=2, max_pre=1, max_period=1))
def test_frequency_of_zero(s):
    mu0 = measure.measure_vector(s, 0)[0]
    n = words.level_for_length(s, 20000)
    w = naive_word(s, n)
    # a loose tolerance: enough to catch a wrong formula, not a convergence rate
    assert abs(Fraction(w.count("0"), len(w)) - mu0) < Fraction(1, 50)


def test_series_matches_definition():
    s = periodic([0, 1, 1], [2, 0], preperiod=[[1, 3]])
    m = 2
    v = measure.v_vector(s, m)
    # partial sums of sum_k f_k / Q_{m-1,k} approach the closed form from below
    acc = Vector.zeros(v)
    for k in range(m, m + 30):
        f = spacer_counts(s, k)
        acc = acc + Vector({a: f[a] for a in v}).scale(Fraction(1, q_product(s, m - 1, k)))
    assert all(acc[a] <= v[a] for a in v)
    assert all(v[a] - acc[a] < Fraction(1, 10 ** 12) for a in v)


def test_below_stabilization_uses_push_forward():
    s = periodic([0, 1], preperiod=[[7, 7]])
    with pytest.raises(ScheduleError):
        measure.v_vector(s, 1)
    mu1 = measure.measure_vector(s, 1)
    assert set(mu1.values) == {0, 1, 7}
    assert sum(measure.tower_masses(s, 1).values()) == 1


@pytest.mark.parametrize("name", ["dwmu-one", "exact-not-lr", "non-exact-rank", "measurable-realization"])
def test_growth_intervals(name):
    s = presets.get(name)
    for m in (1, 2, 4):
        mv = measure.measure_vector(s, m)
        assert not mv.exact
        h = towers.heights(s, m)
        lo = sum(h[a] * x.lo for a, x in mv.values.items())
        hi = sum(h[a] * x.hi for a, x in mv.values.items())
        assert lo <= 1 <= hi
        assert all(x.width < Fraction(1, 10 ** 20) for x in mv.values.values())


@pytest.mark.parametrize("name", ["dwmu-one", "non-exact-rank"])
def test_mass_upper_bound_is_an_upper_bound(name):
    s = presets.get(name)
    for a in alphabets(s).stable:
        for n in range(1, 6):
            mass = measure.tower_masses(s, n)[a]
            assert mass.lo <= measure.mass_upper_bound(s, a, n)


def test_cylinder_zero():
    s = presets.chacon()
    n = words.level_for_length(s, 10 ** 5)
    br = measure.cylinder_measure(s, "0", level=n)
    assert Fraction(2, 3) in br
    assert br.width <= Fraction(1, 10 ** 4)


def test_cylinder_longer_word():
    s = presets.chacon()
    br = measure.cylinder_measure(s, "0010", width=Fraction(1, 1000))
    w = naive_word(s, 9)
    freq = Fraction(sum(1 for i in range(len(w) - 3) if w[i:i + 4] == "0010"), len(w))
    assert br.width <= Fraction(1, 1000)
    assert br.lo - Fraction(1, 100) <= freq <= br.hi + Fraction(1, 100)


def test_cylinder_rejects_non_factor():
    with pytest.raises(NotInLanguage):
        measure.cylinder_measure(presets.chacon(), "11")


def test_rank_periodic_exact():
    rep = measure.rank_report(presets.chacon())
    assert rep.exact_finite_rank is True
    assert rep.a_mu == {0, 1}
    for v in rep.letters.values():
        assert ">=" in v.evidence and v.bound > 0


@pytest.mark.parametrize("name, a_mu, exact", [
    ("exact-not-lr", {0, 1}, True),
    ("non-exact-rank", {0}, False),
    ("dwmu-one", {2}, False),
    ("measurable-realization", {2}, False),
])
def test_rank_growth(name, a_mu, exact):
    rep = measure.rank_report(presets.get(name))
    assert rep.a_mu == a_mu
    assert rep.exact_finite_rank is exact
    for v in rep.letters.values():
        assert v.verdict in ("in", "out")
        assert ("->" in v.evidence) and ("<=" in v.evidence or ">=" in v.evidence)


def test_non_exact_rank_letter_out():
    s = presets.non_exact_rank()
    a_star = dict(s.meta)["a_star"]
    rep = measure.rank_report(s)
    assert rep.letters[a_star].verdict == "out"
    bounds = [measure.mass_upper_bound(s, a_star, n) for n in range(2, 40, 6)]
    assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
    assert bounds[-1] < Fraction(1, 10)


def test_measure_json():
    mv = measure.measure_vector(presets.chacon(), 1)
    assert mv.to_json() == {"level": 1, "exact": True, "values": {"0": "1/3", "1": "1/3"}}
    g = measure.measure_vector(presets.dwmu_one(), 2).to_json()
    assert isinstance(g["values"]["2"], list)
    assert isinstance(Interval(1, 2).to_json(), list)
