"""Dimension group, orbit-equivalence data and the inverse realization.

With a' = min A_W and B_W = A_W \\ {a'}, the dimension group is

    G_W = Z^{B_W} x Z[(q_n + 1)_{n >= n_0 - 1}],

positive cone {x : x . z > 0} u {0} with z(b) = v_{n_0}(b) for b in B_W and
z(a') = 1, and order unit u(b) = b - a', u(a') = a' + |w_{n_0 - 1}|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import FerencziError, RealizationError
from .linalg import Interval, fraction_str
from .measure import measure_vector, v_vector
from .params import ParameterSchedule, Periodic, alphabets
from .words import word_length

CITE_DG = "G_W = Z^{B_W} x Z[(q_n + 1)_{n >= n_0 - 1}], cone x.z > 0, unit u_W"
CITE_RANK = "topological rank = d_W"
CITE_OE = "J_W = {x . z~ : x in G_W} with z~ the multiple of z normalized by u_W . z~ = 1"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % k for k in range(2, math.isqrt(p) + 1))


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    n = abs(int(n))
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Valuation:
    """Eventual p-adic valuation of the partial products; value None means infinite."""

    value: int | None

    @property
    def infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "Infinite" if self.infinite else f"Finite({self.value})"

    def to_json(self):
        return "infinite" if self.infinite else self.value


def valuation_profile(base: tuple, p: int) -> Valuation:
    """``base`` is (preperiod, period) of an eventually periodic integer sequence."""
    if not is_prime(p):
        raise FerencziError(f"{p} is not prime")
    pre, period = base
    if not period:
        raise FerencziError("the period of the base sequence is empty")
    if any(t % p == 0 for t in period):
        return Valuation(None)
    return Valuation(sum(valuation(t, p) for t in pre))


@dataclass
class DimensionGroupDescriptor:
    a_prime: int
    B: tuple
    tail_base: dict
    z: dict
    u: dict
    rank: int
    n0: int
    citations: list = field(default_factory=lambda: [CITE_DG, CITE_RANK])

    @property
    def exact(self) -> bool:
        return all(not isinstance(x, Interval) for x in self.z.values())

    @property
    def letters(self) -> tuple:
        return self.B + (self.a_prime,)

    def pairing(self, x: dict):
        if not self.exact:
            raise FerencziError("cone membership needs an exact z (periodic tail)")
        return sum((Fraction(x[a]) * self.z[a] for a in self.letters), Fraction(0))

    def positive(self, x: dict) -> bool:
        """Membership in the positive cone {x . z > 0} u {0}."""
        if all(x[a] == 0 for a in self.letters):
            return True
        return self.pairing(x) > 0

    def primes(self) -> list[int] | None:
        if "period" not in self.tail_base:
            return None
        return sorted({p for t in self.tail_base["period"] for p in prime_factors(t)})

    def in_tail_ring(self, x: Fraction) -> bool | None:
        """Is the rational x in Z[(q_n + 1)]?  None when the tail is not periodic."""
        if "period" not in self.tail_base:
            return None
        base = (tuple(self.tail_base["preperiod"]), tuple(self.tail_base["period"]))
        den = Fraction(x).denominator
        for p in prime_factors(den):
            prof = valuation_profile(base, p)
            if not prof.infinite and valuation(den, p) > prof.value:
                return False
        return True

    def ring_name(self) -> str:
        primes = self.primes()
        if primes is None:
            return "Z[(q_n+1)]"
        if not primes:
            return "Z"
        return f"Z[1/{reduce(lambda a, b: a * b, primes)}]"

    def group_name(self) -> str:
        free = " x ".join(["Z"] * len(self.B))
        return f"{free} x {self.ring_name()}" if free else self.ring_name()

    def _names(self) -> dict:
        if len(self.B) == 1:
            names = {self.B[0]: "x"}
        else:
            names = {b: f"x{b}" for b in self.B}
        names[self.a_prime] = "y"
        return names

    def cone_string(self) -> str:
        if not self.exact:
            return "x . z > 0 (z known up to intervals)"
        scale = reduce(lambda a, b: a * b // math.gcd(a, b), (self.z[a].denominator for a in self.letters), 1)
        names = self._names()
        terms = []
        for a in self.letters:
            c = self.z[a] * scale
            terms.append(names[a] if c == 1 else f"{fraction_str(c)}{names[a]}")
        return " + ".join(terms) + " > 0"

    def to_json(self) -> dict:
        zj = {str(a): (x.to_json() if isinstance(x, Interval) else fraction_str(x)) for a, x in self.z.items()}
        return {
            "group": self.group_name(),
            "B_W": list(self.B),
            "a_prime": self.a_prime,
            "tail_base": self.tail_base,
            "z": zj,
            "u": {str(a): self.u[a] for a in self.letters},
            "cone": self.cone_string(),
            "unit": [self.u[a] for a in self.letters],
            "coordinates": [str(a) for a in self.letters],
            "topological_rank": self.rank,
            "n0": self.n0,
            "citations": self.citations,
        }


def _tail_base(schedule: ParameterSchedule, start: int) -> dict:
    if schedule.periodic:
        pre = [schedule.cut(n) + 1 for n in range(start, schedule.pre_len)]
        period = [len(s) + 1 for s in schedule.tail.stages]
        return {"start": start, "preperiod": pre, "period": period}
    cut = schedule.tail.cut
    return {"start": start, "preperiod": [schedule.cut(n) + 1 for n in range(start, schedule.pre_len)],
            "rule": {"cut": cut.to_json(), "offset": schedule.tail.offset}}


def dimension_group(schedule: ParameterSchedule) -> DimensionGroupDescriptor:
    tower = alphabets(schedule)
    stable = sorted(tower.stable)
    a_prime, B = stable[0], tuple(stable[1:])
    v = v_vector(schedule, tower.n0)
    z = {b: v[b] for b in B}
    z[a_prime] = Fraction(1)
    u = {b: b - a_prime for b in B}
    u[a_prime] = a_prime + word_length(schedule, tower.n0 - 1)
    return DimensionGroupDescriptor(a_prime, B, _tail_base(schedule, tower.n0 - 1), z, u,
                                    tower.d, tower.n0)


@dataclass
class OrbitEquivalenceDescriptor:
    c: object
    z_tilde: dict
    generators: list
    coset: object
    ring: str
    rationally_independent: bool | None
    citations: list = field(default_factory=lambda: [CITE_OE])

    def to_json(self) -> dict:
        fmt = lambda x: x.to_json() if isinstance(x, Interval) else fraction_str(x)  # noqa: E731
        return {
            "c": fmt(self.c),
            "z_tilde": {str(a): fmt(x) for a, x in self.z_tilde.items()},
            "generators": [fmt(x) for x in self.generators],
            "coset": f"({fmt(self.coset)}) * {self.ring}",
            "unit": "1",
            "rationally_independent": self.rationally_independent,
            "citations": self.citations,
        }


def orbit_equivalence(schedule: ParameterSchedule) -> OrbitEquivalenceDescriptor:
    dg = dimension_group(schedule)
    letters = dg.letters
    if dg.exact:
        c = 1 / sum((dg.u[a] * dg.z[a] for a in letters), Fraction(0))
        zt = {a: c * dg.z[a] for a in letters}
        # all generators are rational: 1, z~(b) and z~(a') are linearly dependent over Q
        independent = False
    else:
        lo = sum(dg.u[a] * (dg.z[a].lo if isinstance(dg.z[a], Interval) else dg.z[a]) for a in letters)
        hi = sum(dg.u[a] * (dg.z[a].hi if isinstance(dg.z[a], Interval) else dg.z[a]) for a in letters)
        c = Interval(1 / hi, 1 / lo)
        zt = {}
        for a in letters:
            x = dg.z[a] if isinstance(dg.z[a], Interval) else Interval(dg.z[a])
            zt[a] = Interval(x.lo * c.lo, x.hi * c.hi)
        independent = None
    return OrbitEquivalenceDescriptor(c, zt, [zt[b] for b in dg.B], zt[dg.a_prime],
                                      dg.ring_name(), independent)


# realization


@dataclass(frozen=True)
class FerencziTypeData:
    """Z^B x Z[(r_n + 1)] with cone vector (z, 1) and unit (v, w)."""

    B: tuple
    r: tuple  # (preperiod, period), every term >= 2
    z: dict
    v: dict
    w: int

    def __post_init__(self):
        pre, period = self.r
        if not period:
            raise FerencziError("r must be eventually periodic with a nonempty period")
        if any(t < 2 for t in tuple(pre) + tuple(period)):
            raise FerencziError("every r_n must be >= 2")
        if set(self.z) != set(self.B) or set(self.v) != set(self.B):
            raise FerencziError("z and v must be indexed by B")
        if any(not 0 < Fraction(x) < 1 for x in self.z.values()) or sum(map(Fraction, self.z.values())) >= 1:
            raise FerencziError("z must have entries in (0, 1) with sum < 1")
        if any(x <= 0 for x in self.v.values()) or len(set(self.v.values())) != len(self.B):
            raise FerencziError("v must be positive and pairwise distinct")
        if self.w < 1:
            raise FerencziError("w must be a positive integer")

    def r_at(self, n: int) -> int:
        pre, period = self.r
        return pre[n] if n < len(pre) else period[(n - len(pre)) % len(period)]


def _digit_sequences(data: FerencziTypeData):
    """Greedy base-(r_k + 1) digits of every z(b) as one eventually periodic sequence.

    Returns (preperiod rows, period rows); row k maps b to the digit d_{k+1}(b).
    """
    pre, period = data.r
    x = {b: Fraction(data.z[b]) for b in data.B}
    rows, seen = [], {}
    k = 0
    while True:
        if k >= len(pre):
            state = ((k - len(pre)) % len(period), tuple(x[b] for b in data.B))
            if state in seen:
                i = seen[state]
                return rows[:i], rows[i:]
            seen[state] = k
        base = data.r_at(k) + 1
        row = {}
        for b in data.B:
            y = x[b] * base
            d = math.floor(y)
            row[b] = d
            x[b] = y - d
        rows.append(row)
        k += 1


def _feasible(rows: list, rs: list, cycle_rows: list, cycle_rs: list, letters) -> str | None:
    for k, (row, r) in enumerate(zip(rows + cycle_rows, rs + cycle_rs)):
        if sum(row.values()) > r:
            return f"digits at position {k + 1} need {sum(row.values())} > q = {r} spacer slots"
    for b in letters:
        if all(row[b] == 0 for row in cycle_rows):
            return f"letter for {b} has only finitely many nonzero digits"
    if all(sum(row.values()) == r for row, r in zip(cycle_rows, cycle_rs)):
        return "the minimum letter a' would occur only finitely often"
    return None


def _merge(rows: list, rs: list, data: FerencziTypeData):
    digits = {b: 0 for b in data.B}
    base = 1
    for row, r in zip(rows, rs):
        for b in data.B:
            digits[b] = digits[b] * (r + 1) + row[b]
        base *= r + 1
    return digits, base - 1


def _search(data: FerencziTypeData, max_span: int, max_stage: int):
    pre_rows, cyc_rows = _digit_sequences(data)
    n_pre, P = len(pre_rows), len(cyc_rows)
    cyc_rs = [data.r_at(n_pre + k) for k in range(P)]
    # merging never creates nonzero digits or slack, so these two are final
    for b in data.B:
        if all(row[b] == 0 for row in cyc_rows):
            raise RealizationError(f"the expansion of z({b}) terminates, so its letter would occur "
                                   f"only finitely often")
    if all(sum(row.values()) == r for row, r in zip(cyc_rows, cyc_rs)):
        raise RealizationError("the minimum letter a' would occur only finitely often")
    row_at = lambda k: pre_rows[k] if k < n_pre else cyc_rows[(k - n_pre) % P]  # noqa: E731
    reason = None
    for c in range(1, max_span + 1):
        if min(data.r_at(k) + 1 for k in range(n_pre + P)) ** c > max_stage + 1:
            break
        for s in range(0, n_pre + P):
            # groups [0, s) (when s > 0), then [s + jc, s + (j+1)c)
            groups = [(0, s)] if s else []
            j = 0
            seen, cycle_start = {}, None
            while True:
                lo = s + j * c
                if lo >= n_pre:
                    key = (lo - n_pre) % P
                    if key in seen:
                        cycle_start = seen[key]
                        break
                    seen[key] = len(groups)
                groups.append((lo, lo + c))
                j += 1
            merged = [_merge([row_at(k) for k in range(a, b)], [data.r_at(k) for k in range(a, b)], data)
                      for a, b in groups]
            rows = [m[0] for m in merged]
            rs = [m[1] for m in merged]
            if max(rs) > max_stage:
                reason = reason or f"merged stages would exceed {max_stage} copies"
                continue
            why = _feasible(rows[:cycle_start], rs[:cycle_start], rows[cycle_start:], rs[cycle_start:], data.B)
            if why is None:
                return groups, rows, rs, cycle_start
            reason = reason or why
    raise RealizationError(f"no admissible digit arrangement with merged stages of at most {max_stage} "
                           f"copies: {reason}")


def realize(data: FerencziTypeData, max_span: int = 64, max_stage: int = 4096) -> ParameterSchedule:
    """A schedule whose dimension group has cone vector (z, 1) and unit (v, w).

    Digits of a rational z(b) in a mixed base are forced except where an
    expansion terminates, and the terminating alternative (all maximal
    digits) can never coexist with another letter.  So infeasible digit
    budgets are repaired by contracting the base (merging consecutive
    positions), which keeps Z[(r_n + 1)] unchanged.
    """
    groups, rows, rs, cycle_start = _search(data, max_span, max_stage)
    a_prime = data.w - 1
    s = {b: a_prime + data.v[b] for b in data.B}
    stages = []
    for row, r in zip(rows, rs):
        used = sum(row.values())
        stage = [a_prime] * (r - used)
        for b in sorted(data.B, key=lambda b: s[b]):
            stage += [s[b]] * row[b]
        stages.append(tuple(stage))
    meta = (("realized_from", tuple(groups)),)
    return ParameterSchedule(tuple(stages[:cycle_start]), Periodic(tuple(stages[cycle_start:])),
                             name="realized", meta=meta)


def data_from_schedule(schedule: ParameterSchedule) -> FerencziTypeData:
    """Ferenczi-type data read off a periodic schedule with n_0 = 1."""
    dg = dimension_group(schedule)
    if not dg.exact:
        raise FerencziError("realization data needs an exact z")
    if dg.n0 != 1:
        raise FerencziError("realization data is only extracted for n_0 = 1")
    period = [len(st) for st in schedule.tail.stages]
    pre = [len(st) for st in schedule.preperiod]
    return FerencziTypeData(dg.B, (tuple(pre), tuple(period)), {b: dg.z[b] for b in dg.B},
                            {b: dg.u[b] for b in dg.B}, dg.u[dg.a_prime])
