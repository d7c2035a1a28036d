import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import schedules
from oracles import complex_sum, naive_telescope, naive_word, zeros_range
from ferenczi import presets, spectra, towers, words
from ferenczi.errors import FerencziError
from ferenczi.params import ParameterSchedule, Periodic, alphabets, periodic


def test_divisors():
    assert spectra.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert spectra.divisors(1) == [1]


def test_chacon_weakly_mixing():
    rep = spectra.continuous_eigenvalues(presets.chacon())
    assert rep.q_max == 1 and rep.weakly_mixing
    assert rep.to_json()["irrational_continuous"] is False
    assert spectra.max_equicontinuous_factor(presets.chacon())["factor"] == "Z/1Z"


def test_even_spacers_half():
    s = presets.even_spacers()
    rep = spectra.continuous_eigenvalues(s)
    assert rep.rational_denominators == [1, 2]
    n = rep.denominators[2]
    assert all(h % 2 == 0 for h in towers.heights(s, n + 1).values())


def _brute_denominators(s, horizon=40):
    stable = sorted(alphabets(s).stable)
    g = 0
    for b in stable:
        g = math.gcd(g, b - stable[0])
    out = set()
    for q in spectra.divisors(g):
        start = max(alphabets(s).n0 - 1, 0)
        ok = [all((words.word_length(s, n) + a) % q == 0 for a in stable) for n in range(start, horizon)]
        # once it holds it keeps holding; test the tail of the window
        if ok[-1]:
            out.add(q)
    return out


@st.composite
def congruent_schedules(draw):
    q = draw(st.integers(2, 4))
    r = draw(st.integers(0, q - 1))
    vals = [r, r + q, r + 2 * q]
    stage = st.lists(st.sampled_from(vals), min_size=2, max_size=3).map(tuple)
    period = draw(st.lists(stage, min_size=1, max_size=2))
    if len({v for s in period for v in s}) < 2:
        period[0] = (r, r + q)
    pre = draw(st.lists(stage, max_size=1))
    return ParameterSchedule(tuple(pre), Periodic(tuple(period)))


@given(st.one_of(schedules(), congruent_schedules()))
def test_eigenvalues_against_brute_force(s):
    rep = spectra.continuous_eigenvalues(s)
    assert set(rep.denominators) == _brute_denominators(s)
    for q, n in rep.denominators.items():
        assert all(h % q == 0 for h in towers.heights(s, n + 1).values())
        if n > max(alphabets(s).n0 - 1, 0):
            assert (words.word_length(s, n - 1) + min(alphabets(s).stable)) % q != 0


def test_growth_eigenvalues():
    # spacers 2 and 4 with a growing cut
    from ferenczi.params import Count, Growth
    s = ParameterSchedule((), Growth(Count(3, 1), (2, 4)))
    brute = _brute_denominators(s, horizon=25)
    assert set(spectra.continuous_eigenvalues(s).denominators) == brute


@given(schedules(max_q=3, max_spacer=3, max_pre=1, max_period=2))
def test_mixing_certificate_brute_force(s):
    cert = spectra.mixing_certificate(s, depth=3)
    assert cert.conclusion == "not topologically mixing"
    for k, n, a, b in cert.samples:
        deep = naive_word(s, words.level_for_length(s, n) + s.pre_len + s.period + 1)
        assert (a, b) == zeros_range(deep, n)
        assert b - a <= s.max_spacer()
    assert cert.holds


def test_veech_chacon_third():
    trace = spectra.veech_test(presets.chacon(), Fraction(1, 3))
    assert trace.verdict == "excluded"
    assert trace.witness["lower_bound"] == "1/3"
    assert "for every n" in trace.witness["claim"]
    for n, vals in trace.table:
        assert vals[0] == Fraction(1, 3)


def test_veech_continuous_eigenvalue_consistent():
    s = presets.even_spacers()
    rep = spectra.continuous_eigenvalues(s)
    trace = spectra.veech_test(s, Fraction(1, 2))
    assert trace.verdict == "consistent"
    start = trace.witness["from_level"]
    assert start <= rep.denominators[2] + 1
    for n, vals in trace.table:
        if n >= start:
            assert all(v == 0 for v in vals.values())


def test_veech_integer_and_float():
    assert spectra.veech_test(presets.chacon(), 0).verdict == "consistent"
    with pytest.raises(FerencziError):
        spectra.veech_test(presets.chacon(), 0.5)


def test_veech_irrational_pair():
    alpha = spectra.IrrationalAlpha(Fraction(41421, 100000), Fraction(1, 10 ** 6))
    trace = spectra.veech_test(presets.chacon(), alpha)
    assert trace.verdict == "excluded"
    assert trace.witness["kind"] == "pair"
    single = spectra.veech_test(presets.dwmu_one(), alpha)
    assert single.verdict == "inconclusive"


def test_dist_interval():
    d = spectra.dist_interval(Fraction(1, 10), Fraction(2, 10))
    assert d.lo == Fraction(1, 10) and d.hi == Fraction(2, 10)
    wrap = spectra.dist_interval(Fraction(9, 10), Fraction(11, 10))
    assert wrap.lo == 0
    assert spectra.dist_to_int(Fraction(7, 3)) == Fraction(1, 3)


def test_measurable_reports():
    dw = spectra.measurable_eigenvalue_report(presets.dwmu_one(), limit=12)
    assert dw["d_W_mu"] == 1 and dw["irrational"] == "undetermined"
    assert all(v["veech"] == "excluded" for v in dw["rational_candidates"].values())
    mr = spectra.measurable_eigenvalue_report(presets.measurable_realization(), limit=12)
    consistent = [q for q, v in mr["rational_candidates"].items() if v["veech"] == "consistent"]
    assert consistent == ["3"]
    assert not mr["rational_candidates"]["3"]["continuous"]
    assert mr["known_measurable"] == ["exp(2 pi i 1/3)"]
    ch = spectra.measurable_eigenvalue_report(presets.chacon())
    assert ch["measurable_equals_continuous"] is True


@given(schedules(), st.data())
def test_sufficiency_trivial_lambda(s, data):
    m = data.draw(st.integers(max(alphabets(s).n0, 1), 3))
    n = m + data.draw(st.integers(1, 2))
    letters = sorted(alphabets(s).stable)
    a = data.draw(st.sampled_from(letters))
    b = data.draw(st.sampled_from(letters))
    res = spectra.sufficiency_sum(s, m, n, a, b)
    if res.count:
        assert res.ratio == 1.0


def test_sufficiency_against_complex_oracle():
    s = presets.dwmu_one()
    for m in range(1, 8):
        h = {a: int(x) for a, x in towers.heights(s, m).items()}
        word = naive_telescope(s, m, m + 2)[2]
        for q in (2, 3, 5, 7):
            res = spectra.sufficiency_sum(s, m, m + 2, 2, 2, 1, q)
            direct = abs(complex_sum(word, h, 2, 1, q))
            assert abs(res.magnitude - direct) < 1e-9
            assert res.length == (2 * m + 1) * (2 * m + 3)


def test_suffix_phases():
    assert spectra.suffix_phases([1, 2, 1], {1: 1, 2: 5}, 1, 4) == [0, 1, 0, 1]
