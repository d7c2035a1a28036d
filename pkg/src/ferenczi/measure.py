"""The unique invariant probability measure.

For m >= n_0 the measure vector mu_m is proportional to

    v_m = sum_{k >= m} f_k / Q_{m-1,k},

and sum_a h_m(a) mu_m(a) = 1 fixes the scale.  The coordinates of v_m
always add up to 1 because |f_k| = q_{k-1} makes the series telescope.

Periodic tails give exact rationals (the series is geometric over one
period).  Growth tails are truncated and enclosed in rational intervals:
the discarded terms add up to exactly 1/Q_{m-1,K} over all letters, so that
is a rigorous per-letter upper bound for the tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import NotInLanguage, ScheduleError
from .linalg import Interval, Vector, fraction_str
from .morphisms import PROPER, as_binary, telescope
from .params import ParameterSchedule, alphabets, q_product, spacer_counts
from .towers import direct_product, heights

DEFAULT_TOLERANCE = Fraction(1, 10 ** 30)


def _series_block(schedule: ParameterSchedule, m: int, stop: int) -> Vector:
    """sum_{k=m}^{stop} f_k / Q_{m-1,k} over the stable alphabet."""
    stable = alphabets(schedule).stable
    out = Vector.zeros(stable)
    q = 1
    for k in range(m, stop + 1):
        q *= schedule.cut(k - 1) + 1
        f = spacer_counts(schedule, k)
        out = out + Vector({a: f[a] for a in stable}).scale(Fraction(1, q))
    return out


def _check_level(schedule: ParameterSchedule, m: int):
    n0 = alphabets(schedule).n0
    if m < n0:
        raise ScheduleError(f"level {m} is below n_0 = {n0}; push forward from n_0 instead")


@lru_cache(maxsize=512)
def v_vector(schedule: ParameterSchedule, m: int, tolerance: Fraction = DEFAULT_TOLERANCE) -> dict:
    """Letter -> Fraction (periodic tail) or Interval (growth tail)."""
    _check_level(schedule, m)
    pre = schedule.pre_len
    if schedule.periodic:
        if m - 1 >= pre:
            period = schedule.period
            block = _series_block(schedule, m, m + period - 1)
            big = q_product(schedule, m - 1, m - 1 + period)
            v = block.scale(Fraction(big, big - 1))
        else:
            head = _series_block(schedule, m, pre)
            rest = v_vector(schedule, pre + 1)
            scale = Fraction(1, q_product(schedule, m - 1, pre))
            v = head + Vector(rest).scale(scale)
        return dict(v.items())
    stop = m
    while Fraction(1, q_product(schedule, m - 1, stop)) > tolerance:
        stop += 1
    low = _series_block(schedule, m, stop)
    slack = Fraction(1, q_product(schedule, m - 1, stop))
    return {a: Interval(low[a], low[a] + slack) for a in low}


def _is_exact(values: dict) -> bool:
    return all(not isinstance(x, Interval) for x in values.values())


@dataclass(frozen=True)
class MeasureVector:
    level: int
    values: dict = field(hash=False)

    @property
    def exact(self) -> bool:
        return _is_exact(self.values)

    def vector(self) -> Vector:
        if not self.exact:
            raise ValueError("measure vector is only known up to intervals")
        return Vector(self.values)

    def __getitem__(self, a):
        return self.values[a]

    def to_json(self) -> dict:
        return {"level": self.level, "exact": self.exact,
                "values": {str(a): (x.to_json() if isinstance(x, Interval) else fraction_str(x))
                           for a, x in sorted(self.values.items())}}


def _normalize(v: dict, h: Vector) -> dict:
    if _is_exact(v):
        vec = Vector(v)
        return dict(vec.scale(1 / h.dot(vec)).items())
    lo = sum(h[a] * _lo(x) for a, x in v.items())
    hi = sum(h[a] * _hi(x) for a, x in v.items())
    return {a: Interval(_lo(x) / hi, _hi(x) / lo) for a, x in v.items()}


def _lo(x):
    return x.lo if isinstance(x, Interval) else x


def _hi(x):
    return x.hi if isinstance(x, Interval) else x


@lru_cache(maxsize=512)
def measure_vector(schedule: ParameterSchedule, m: int) -> MeasureVector:
    """mu_m(a) = mu(B_m(a)), the mass of the base of tower a at level m."""
    if m < 0:
        raise ScheduleError(f"negative level {m}")
    n0 = alphabets(schedule).n0
    if m >= n0:
        return MeasureVector(m, _normalize(v_vector(schedule, m), heights(schedule, m)))
    top = measure_vector(schedule, n0).values
    p = direct_product(schedule, m, n0)
    if _is_exact(top):
        return MeasureVector(m, dict((p @ Vector(top)).items()))
    # P has nonnegative entries, so endpoints push forward separately
    lo = p @ Vector({a: _lo(x) for a, x in top.items()})
    hi = p @ Vector({a: _hi(x) for a, x in top.items()})
    return MeasureVector(m, {a: Interval(lo[a], hi[a]) for a in p.rows})


def tower_masses(schedule: ParameterSchedule, n: int) -> dict:
    """mu(T_n(a)) = h_n(a) mu_n(a)."""
    mu = measure_vector(schedule, n)
    h = heights(schedule, n)
    return {a: x * h[a] for a, x in mu.values.items()}


def mass_upper_bound(schedule: ParameterSchedule, a, n: int) -> Fraction:
    """Upper bound for mu(T_n(a)) that only uses heights (n >= n_0).

    mu_n(a) = mu_{n+1}(a) + f_n(a) sum_b mu_{n+1}(b) and mu_{n+1}(b) <= 1/h_{n+1}(b).
    """
    _check_level(schedule, n)
    h, h1 = heights(schedule, n), heights(schedule, n + 1)
    f = spacer_counts(schedule, n)
    return h[a] * (Fraction(1, h1[a]) + Fraction(f[a], min(h1.values())))


def _occurrences(word: str, u: str) -> int:
    count, i = 0, word.find(u)
    while i != -1:
        count += 1
        i = word.find(u, i + 1)
    return count


def cylinder_bracket(schedule: ParameterSchedule, u: str, n: int) -> Interval:
    mu = measure_vector(schedule, n).values
    tau = telescope(schedule, PROPER, 0, n)
    lo = hi = Fraction(0)
    for a, x in mu.items():
        occ = _occurrences(as_binary(tau.image(a)), u)
        lo += occ * _lo(x)
        hi += (occ + len(u) - 1) * _hi(x)
    return Interval(lo, hi)


def cylinder_measure(schedule: ParameterSchedule, u: str, level: int | None = None,
                     width: Fraction | None = None, max_level: int = 64) -> Interval:
    """Bracket for mu([u]) counting occurrences inside the level-n tower images.

    Occurrences that straddle two images are unknown; there are at most
    |u| - 1 of them per tower column, which gives the upper end.
    """
    from .words import in_language

    if not in_language(schedule, u):
        raise NotInLanguage(f"{u!r} is not in the language")
    if not u:
        return Interval(1)
    if level is not None:
        return cylinder_bracket(schedule, u, level)
    width = Fraction(1, 10 ** 6) if width is None else Fraction(width)
    n = 0
    while True:
        br = cylinder_bracket(schedule, u, n)
        if br.width <= width or n >= max_level:
            return br
        n += 1


# exact finite rank


@dataclass
class LetterVerdict:
    letter: int
    verdict: str  # "in", "out" or "undetermined"
    evidence: str
    bound: Fraction | None = None

    def to_json(self) -> dict:
        out = {"letter": self.letter, "verdict": self.verdict, "evidence": self.evidence}
        if self.bound is not None:
            out["bound"] = fraction_str(self.bound)
        return out


@dataclass
class RankReport:
    letters: dict
    citations: list

    @property
    def a_mu(self) -> frozenset:
        return frozenset(a for a, v in self.letters.items() if v.verdict == "in")

    @property
    def d_mu(self) -> int:
        return len(self.a_mu)

    @property
    def exact_finite_rank(self) -> bool | None:
        verdicts = {v.verdict for v in self.letters.values()}
        if verdicts == {"in"}:
            return True
        if "out" in verdicts:
            return False
        return None

    def to_json(self) -> dict:
        return {
            "A_mu": sorted(self.a_mu),
            "d_W_mu": self.d_mu,
            "exact_finite_rank": self.exact_finite_rank,
            "letters": [self.letters[a].to_json() for a in sorted(self.letters)],
            "citations": self.citations,
        }


CITE_EXACT = "exact finite rank iff liminf_m sum_{k>=m} f_k(a)/Q_{m-1,k} > 0 for every letter"
CITE_OUT = "f_n(a)/q_{n-1} -> 0 with q_n -> infinity forces mu(T_n(a)) -> 0"


def rank_report(schedule: ParameterSchedule) -> RankReport:
    tower = alphabets(schedule)
    letters = {}
    if schedule.periodic:
        period = schedule.period
        qmax = max(len(s) for s in schedule.tail.stages)
        start = max(tower.n0, schedule.pre_len + 1)
        # v_m only depends on the phase of m once m - 1 is in the period
        phases = [v_vector(schedule, m) for m in range(start, start + period)]
        for a in sorted(tower.stable):
            liminf = min(v[a] for v in phases)
            crude = Fraction(1, (qmax + 1) ** period)
            letters[a] = LetterVerdict(
                a, "in",
                f"periodic tail: liminf_m sum_k f_k({a})/Q_(m-1,k) = {fraction_str(liminf)} "
                f">= 1/(q_max+1)^P = {fraction_str(crude)} > 0",
                liminf)
        return RankReport(letters, [CITE_EXACT])
    tail = schedule.tail
    for a in sorted(tower.stable):
        c = tail.share(a)
        if c > 0:
            letters[a] = LetterVerdict(
                a, "in",
                f"f_n({a})/q_(n-1) -> {fraction_str(c)}, so eventually f_m({a})/(q_(m-1)+1) >= "
                f"(c/2)(2/3) = {fraction_str(c / 3)}, bounding the series from m below",
                c / 3)
            continue
        fc = tail.share_count(a) if hasattr(tail, "share_count") else None
        if fc is not None and fc.is_constant:
            detail = f"f_n({a}) + 1 <= {fc.const + 1} for all large n while q_n -> infinity"
        else:
            detail = f"f_n({a})/q_(n-1) -> 0 while q_n -> infinity"
        n = max(tower.n0, schedule.pre_len + 1)
        samples = [(k, mass_upper_bound(schedule, a, k)) for k in range(n, n + 4)]
        trail = ", ".join(f"mu(T_{k}({a})) <= {float(b):.3g}" for k, b in samples)
        letters[a] = LetterVerdict(a, "out", f"{detail}; {trail}", samples[-1][1])
    return RankReport(letters, [CITE_EXACT, CITE_OUT])
