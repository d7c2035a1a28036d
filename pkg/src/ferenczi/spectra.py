"""Eigenvalues, mixing and the Veech criterion.

Continuous eigenvalues are all rational.  exp(2 pi i p/q) is one exactly
when, for some n, q divides |w_n| + a_{m,i} for every m >= n and every i.
Such a q divides every difference of stable letters, so the candidates are
the divisors of g = gcd{a - b : a, b in A_W}.  Past n_0 - 1 all spacers are
congruent to a' = min A_W mod q, and the condition becomes
|w_n| + a' = 0 mod q; once true it stays true, because then
|w_{n+1}| = (q_n + 1)|w_n| + q_n a' = -a' mod q.  The residues of |w_n| run
through a finite state space, so cycle detection decides the question.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import CapExceeded, FerencziError, ScheduleError
from .linalg import Interval, fraction_str
from .measure import rank_report
from .morphisms import PROPER, telescope
from .params import ParameterSchedule, alphabets
from .towers import heights
from .words import factor_stats, word_length

CITE_RATIONAL = "q is a continuous eigenvalue denominator iff q divides |w_n| + a_{m,i} for all m >= n, i"
CITE_NO_IRRATIONAL = "minimal Ferenczi subshifts have no continuous irrational eigenvalues"
CITE_FACTOR = "the maximal equicontinuous factor is the rotation on Z/q_max Z"
CITE_MIXING = "b(n_k) - a(n_k) <= max spacer along n_k = |w_k|, so the subshift is not topologically mixing"
CITE_VEECH = "measurable eigenvalue exp(2 pi i alpha) forces ||alpha h_n(a)|| -> 0 for a in A_mu"
CITE_EXACT = "exact finite rank: measurable eigenvalues are continuous"
CITE_DMU2 = "d_W_mu >= 2: no irrational measurable eigenvalues"
CITE_OPEN = "d_W_mu = 1: irrational measurable eigenvalues are an open question"


def divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _length_residues(schedule: ParameterSchedule, start: int, q: int):
    """Yield (n, |w_n| mod q, state) for n >= start; state is None in the preperiod."""
    n, r = start, word_length(schedule, start) % q
    while True:
        key = schedule.phase_key(n, q)
        yield n, r, (None if key is None else (r, key))
        cut, total = schedule.summary_mod(n, q)
        r = ((cut + 1) * r + total) % q
        n += 1


def eigen_witness(schedule: ParameterSchedule, q: int) -> int | None:
    """Smallest n >= max(n_0 - 1, 0) with q | |w_n| + a', or None if there is none."""
    tower = alphabets(schedule)
    stable = sorted(tower.stable)
    if any((b - stable[0]) % q for b in stable):
        return None
    a0 = stable[0]
    seen = set()
    for n, r, state in _length_residues(schedule, max(tower.n0 - 1, 0), q):
        if (r + a0) % q == 0:
            return n
        if state is not None:
            if state in seen:
                return None
            seen.add(state)


@dataclass
class EigenvalueReport:
    denominators: dict  # q -> witness level n
    g: int
    citations: list = field(default_factory=lambda: [CITE_RATIONAL, CITE_NO_IRRATIONAL])

    @property
    def rational_denominators(self) -> list[int]:
        return sorted(self.denominators)

    @property
    def q_max(self) -> int:
        return max(self.denominators)

    @property
    def weakly_mixing(self) -> bool:
        return self.q_max == 1

    irrational_continuous = False

    def to_json(self) -> dict:
        return {
            "rational_denominators": self.rational_denominators,
            "witness_levels": {str(q): n for q, n in sorted(self.denominators.items())},
            "gcd_of_differences": self.g,
            "q_max": self.q_max,
            "weakly_mixing": self.weakly_mixing,
            "irrational_continuous": False,
            "topologically_mixing": False,
            "citations": self.citations,
        }


def continuous_eigenvalues(schedule: ParameterSchedule) -> EigenvalueReport:
    stable = sorted(alphabets(schedule).stable)
    if len(stable) < 2:
        raise ScheduleError("d_W = 1: the subshift is periodic")
    g = reduce(math.gcd, (b - stable[0] for b in stable[1:]))
    found = {1: max(alphabets(schedule).n0 - 1, 0)}
    for q in divisors(g):
        if q == 1:
            continue
        n = eigen_witness(schedule, q)
        if n is not None:
            found[q] = n
    return EigenvalueReport(found, g)


def max_equicontinuous_factor(schedule: ParameterSchedule) -> dict:
    rep = continuous_eigenvalues(schedule)
    return {"q_max": rep.q_max, "factor": f"Z/{rep.q_max}Z", "citations": [CITE_FACTOR]}


@dataclass
class MixingCertificate:
    bound: int
    samples: list  # (k, |w_k|, a, b)
    truncated: bool
    conclusion: str = "not topologically mixing"

    def to_json(self) -> dict:
        return {"bound": self.bound, "samples": [
            {"k": k, "length": n, "a": a, "b": b, "gap": b - a} for k, n, a, b in self.samples],
            "truncated": self.truncated, "conclusion": self.conclusion, "citations": [CITE_MIXING]}

    @property
    def holds(self) -> bool:
        return all(b - a <= self.bound for _, _, a, b in self.samples)


def mixing_certificate(schedule: ParameterSchedule, depth: int = 3) -> MixingCertificate:
    bound = schedule.max_spacer()
    samples, truncated = [], False
    for k in range(depth + 1):
        n = word_length(schedule, k)
        try:
            a, b = factor_stats(schedule, n)
        except CapExceeded:
            truncated = True
            break
        samples.append((k, n, a, b))
    return MixingCertificate(bound, samples, truncated)


# Veech criterion


@dataclass(frozen=True)
class IrrationalAlpha:
    """An irrational alpha known to lie within ``radius`` of ``center``."""

    center: Fraction
    radius: Fraction

    def to_json(self) -> dict:
        return {"center": fraction_str(self.center), "radius": fraction_str(self.radius)}


def dist_to_int(x: Fraction) -> Fraction:
    f = x - math.floor(x)
    return min(f, 1 - f)


def dist_interval(lo: Fraction, hi: Fraction) -> Interval:
    """Enclosure of ||x|| for x in [lo, hi]."""
    if math.floor(hi) > math.floor(lo) or lo == math.floor(lo):
        low = Fraction(0)
    else:
        low = min(dist_to_int(lo), dist_to_int(hi))
    if hi - lo >= 1:
        return Interval(low, Fraction(1, 2))
    dl, dh = dist_to_int(lo), dist_to_int(hi)
    mid = math.floor(lo) + Fraction(1, 2)
    high = Fraction(1, 2) if lo <= mid <= hi or lo <= mid + 1 <= hi else max(dl, dh)
    return Interval(low, high)


@dataclass
class VeechTrace:
    alpha: object
    letters: list
    table: list
    verdict: str
    witness: dict | None
    warnings: list

    def to_json(self) -> dict:
        alpha = fraction_str(self.alpha) if isinstance(self.alpha, Fraction) else self.alpha.to_json()
        rows = []
        for n, vals in self.table:
            rows.append({"level": n, "values": {str(a): (v.to_json() if isinstance(v, Interval)
                                                         else fraction_str(v)) for a, v in vals.items()}})
        return {"alpha": alpha, "A_mu": self.letters, "table": rows, "verdict": self.verdict,
                "witness": self.witness, "warnings": self.warnings, "citations": [CITE_VEECH]}


def _pair_exclusion(alpha, letters):
    """Certified lower bound on ||alpha (a - b)|| for some pair, if any."""
    for i, a in enumerate(letters):
        for b in letters[i + 1:]:
            k = b - a
            if isinstance(alpha, Fraction):
                lo = hi = alpha * k
            else:
                lo, hi = (alpha.center - alpha.radius) * k, (alpha.center + alpha.radius) * k
            d = dist_interval(lo, hi).lo
            if d > 0:
                return {"kind": "pair", "letters": [a, b], "delta": fraction_str(d),
                        "claim": f"max(||alpha h_n({a})||, ||alpha h_n({b})||) >= {fraction_str(d / 2)} "
                                 f"for every n, since h_n({b}) - h_n({a}) = {k}"}
    return None


def veech_test(schedule: ParameterSchedule, alpha, max_level: int = 12) -> VeechTrace:
    if isinstance(alpha, (int, float)) and not isinstance(alpha, bool):
        if isinstance(alpha, float):
            raise FerencziError("floating alpha is not supported: pass a Fraction or an IrrationalAlpha")
        alpha = Fraction(alpha)
    if not isinstance(alpha, (Fraction, IrrationalAlpha)):
        raise FerencziError(f"unsupported alpha {alpha!r}")
    report = rank_report(schedule)
    warnings = []
    undetermined = [a for a, v in report.letters.items() if v.verdict == "undetermined"]
    if undetermined:
        warnings.append(f"letters {undetermined} have undetermined mass and are left out")
    letters = sorted(report.a_mu)
    n0 = alphabets(schedule).n0
    table = []
    for n in range(n0, max_level + 1):
        h = heights(schedule, n)
        if isinstance(alpha, Fraction):
            table.append((n, {a: dist_to_int(alpha * h[a]) for a in letters}))
        else:
            table.append((n, {a: dist_interval((alpha.center - alpha.radius) * h[a],
                                               (alpha.center + alpha.radius) * h[a]) for a in letters}))
    if isinstance(alpha, IrrationalAlpha):
        pair = _pair_exclusion(alpha, letters)
        if pair:
            return VeechTrace(alpha, letters, table, "excluded", pair, warnings)
        warnings.append("a single letter in A_mu gives no certified lower bound for irrational alpha")
        return VeechTrace(alpha, letters, table, "inconclusive", None, warnings)
    q = alpha.denominator
    if q == 1:
        return VeechTrace(alpha, letters, table, "consistent", {"kind": "integer"}, warnings)
    # residues of h_n(a) = a + |w_{n-1}| mod q run into a cycle
    seen, trail = {}, []
    for n1, r, state in _length_residues(schedule, max(n0 - 1, 0), q):
        if state is not None:
            if state in seen:
                cycle = trail[seen[state]:]
                break
            seen[state] = len(trail)
        trail.append((n1 + 1, r))
    enter = cycle[0][0]
    for a in letters:
        values = [(n, dist_to_int(alpha * (a + r))) for n, r in cycle]
        bad = [(n, v) for n, v in values if v > 0]
        if bad:
            every = len(bad) == len(values)
            low = min(v for _, v in bad)
            return VeechTrace(alpha, letters, table, "excluded", {
                "kind": "cycle", "letter": a, "level": bad[0][0], "value": fraction_str(bad[0][1]),
                "period": len(cycle), "lower_bound": fraction_str(low),
                "claim": (f"||alpha h_n({a})|| >= {fraction_str(low)} for every n >= {enter}" if every else
                          f"||alpha h_n({a})|| >= {fraction_str(low)} for infinitely many n "
                          f"(once per {len(cycle)} levels)")}, warnings)
    # every cycle state vanishes; find the first level after the last nonzero value
    for n, r in reversed(trail):
        if any(dist_to_int(alpha * (a + r)) for a in letters):
            zero_from = n + 1
            break
    else:
        zero_from = trail[0][0]
    return VeechTrace(alpha, letters, table, "consistent", {
        "kind": "zeros", "from_level": zero_from,
        "claim": f"||alpha h_n(a)|| = 0 for all a in A_mu and n >= {zero_from}"}, warnings)


def measurable_eigenvalue_report(schedule: ParameterSchedule, limit: int = 24) -> dict:
    rank = rank_report(schedule)
    cont = continuous_eigenvalues(schedule)
    out = {"continuous": cont.to_json(), "A_mu": sorted(rank.a_mu), "d_W_mu": rank.d_mu,
           "exact_finite_rank": rank.exact_finite_rank}
    known = [f"exp(2 pi i {p}/{q})" for key, (p, q) in
             [kv for kv in schedule.meta if kv[0] == "measurable_eigenvalue"]]
    if known:
        out["known_measurable"] = known
        out["known_source"] = "construction theorem attached to this preset"
    if rank.exact_finite_rank:
        out["measurable_equals_continuous"] = True
        out["irrational"] = "none"
        out["citations"] = [CITE_EXACT, CITE_VEECH]
        return out
    letters = sorted(rank.a_mu)
    if len(letters) >= 2:
        g = reduce(math.gcd, (b - letters[0] for b in letters[1:]))
        candidates = [q for q in divisors(g) if q > 1]
        out["irrational"] = "none"
        cites = [CITE_DMU2, CITE_VEECH]
    else:
        candidates = list(range(2, limit + 1))
        out["irrational"] = "undetermined"
        out["open_question"] = "we leave this as an open question"
        cites = [CITE_OPEN, CITE_VEECH]
    rational = {}
    for q in candidates:
        trace = veech_test(schedule, Fraction(1, q))
        rational[str(q)] = {"veech": trace.verdict, "continuous": q in cont.denominators}
    out["rational_candidates"] = rational
    out["citations"] = cites
    return out


# sufficiency sum


@dataclass
class SufficiencySum:
    coefficients: list  # c_r: number of suffixes with phase r mod q
    q: int
    p: int
    count: int  # |tau_{[m,n)}(b)|_a
    length: int  # |tau_{[m,n)}(b)|
    magnitude: float
    error: float

    @property
    def ratio(self) -> float:
        return self.magnitude / self.count if self.count else 0.0

    @property
    def ratio_length(self) -> float:
        return self.magnitude / self.length

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "coefficients": self.coefficients, "count": self.count,
                "length": self.length, "magnitude": self.magnitude, "error": self.error,
                "ratio": self.ratio, "ratio_length": self.ratio_length}


def suffix_phases(word, h: dict, a, q: int) -> list[int]:
    """Bucket the suffixes starting at each occurrence of a by <l(w), h> mod q."""
    buckets = [0] * q
    acc = 0
    for x in reversed(word):
        acc = (acc + h[x]) % q
        if x == a:
            buckets[acc] += 1
    return buckets


def sufficiency_sum(schedule: ParameterSchedule, m: int, n: int, a, b, p: int = 1, q: int = 1) -> SufficiencySum:
    """|sum over W_{m,n}(a,b) of lambda^{<l(w), h_m>}| with lambda = exp(2 pi i p/q)."""
    if q < 1:
        raise FerencziError("q must be positive")
    word = telescope(schedule, PROPER, m, n).image(b)
    h = dict(heights(schedule, m).items())
    h = {x: int(v) for x, v in h.items()}
    buckets = suffix_phases(word, h, a, q)
    total = complex(0)
    for r, c in enumerate(buckets):
        if c:
            total += c * cmath.exp(2j * math.pi * ((p * r) % q) / q)
    count = sum(buckets)
    # each term carries a few ulps of error in the root of unity
    err = 4 * sum(buckets) * 2.0 ** -52
    mag = abs(total)
    if q == 1 or p % q == 0:
        mag, err = float(count), 0.0
    return SufficiencySum(buckets, q, p, count, len(word), mag, err)
