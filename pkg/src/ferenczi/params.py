"""Cutting and spacer parameters of a Ferenczi subshift.

A schedule is a finitely described infinite sequence of stages.  Stage n is
the list of spacers (a_{n,0}, ..., a_{n,q_n-1}); its length is the cutting
parameter q_n.  Two tail classes are supported:

* ``Periodic``: a finite list of stages repeated forever;
* growth rules, where stage n is produced from n by integer expressions
  (``Growth`` draws spacers cyclically from a pattern, ``BlockGrowth``
  concatenates repeated blocks).

Growth rules take nonnegative coefficients only, so every count is
nondecreasing in n.  That keeps the set of eventual spacer values and the
stabilization level trivially computable.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import ScheduleError, check_cap
from .linalg import Vector


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class Count:
    """Integer expression const + slope*t + sum(coef * ratio**t)."""

    const: int = 0
    slope: int = 0
    exps: tuple = ()

    def __post_init__(self):
        for name in ("const", "slope"):
            v = getattr(self, name)
            if not _is_int(v) or v < 0:
                raise ScheduleError(f"count {name} must be a nonnegative integer, got {v!r}")
        merged: dict[int, int] = {}
        const = self.const
        for ratio, coef in self.exps:
            if not (_is_int(ratio) and _is_int(coef)) or ratio < 1 or coef < 0:
                raise ScheduleError(f"exponential term needs integer ratio >= 1 and coef >= 0, "
                                    f"got ({ratio!r}, {coef!r})")
            if coef == 0:
                continue
            if ratio == 1:
                const += coef
            else:
                merged[ratio] = merged.get(ratio, 0) + coef
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "exps", tuple(sorted(merged.items())))

    def __call__(self, t: int) -> int:
        return self.const + self.slope * t + sum(c * r ** t for r, c in self.exps)

    def residue(self, t: int, m: int) -> int:
        return (self.const + self.slope * t + sum(c * pow(r, t, m) for r, c in self.exps)) % m

    def phase_key(self, t: int, m: int) -> tuple:
        """State that determines residue(t + j, m) for every j >= 0."""
        return (t % m,) + tuple(pow(r, t, m) for r, _ in self.exps)

    def __add__(self, other: "Count") -> "Count":
        return Count(self.const + other.const, self.slope + other.slope, self.exps + other.exps)

    def times(self, k: int) -> "Count":
        return Count(self.const * k, self.slope * k, tuple((r, c * k) for r, c in self.exps))

    @property
    def is_constant(self) -> bool:
        return self.slope == 0 and not self.exps

    @property
    def is_zero(self) -> bool:
        return self.is_constant and self.const == 0

    def leading(self) -> tuple[tuple[int, int], int]:
        """Dominant term as (order key, coefficient); keys compare by growth."""
        if self.exps:
            r, c = self.exps[-1]
            return (2, r), c
        if self.slope:
            return (1, 0), self.slope
        return (0, 0), self.const

    def to_json(self):
        if self.is_constant:
            return self.const
        if not self.exps:
            return {"affine": {"base": self.const, "slope": self.slope}}
        if len(self.exps) == 1 and self.slope == 0:
            r, c = self.exps[0]
            out = {"scale": c, "ratio": r, "shift": 0}
            if self.const:
                out["base"] = self.const
            return {"exponential": out}
        terms = [self.const, {"affine": {"base": 0, "slope": self.slope}}]
        terms += [{"exponential": {"scale": c, "ratio": r, "shift": 0}} for r, c in self.exps]
        return {"sum": terms}

    @classmethod
    def from_json(cls, obj) -> "Count":
        if _is_int(obj):
            return cls(obj)
        if isinstance(obj, dict) and len(obj) == 1:
            (kind, body), = obj.items()
            if kind == "affine":
                return cls(body.get("base", 0), body.get("slope", 0))
            if kind == "exponential":
                scale, ratio, shift = body.get("scale", 1), body["ratio"], body.get("shift", 0)
                if not _is_int(shift) or shift < 0:
                    raise ScheduleError(f"exponential shift must be a nonnegative integer, got {shift!r}")
                return cls(body.get("base", 0), 0, ((ratio, scale * ratio ** shift),))
            if kind == "sum":
                out = cls()
                for term in body:
                    out = out + cls.from_json(term)
                return out
        raise ScheduleError(f"unrecognized count expression {obj!r}")


def _check_values(values: Iterable, where: str = "", stage: int | None = None):
    for v in values:
        if not _is_int(v) or v < 0:
            if stage is not None:
                raise ScheduleError(f"spacer {v!r} is not a nonnegative integer", stage=stage)
            raise ScheduleError(f"{where}: spacer {v!r} is not a nonnegative integer")


@dataclass(frozen=True)
class Periodic:
    stages: tuple

    def __post_init__(self):
        stages = tuple(tuple(s) for s in self.stages)
        if not stages:
            raise ScheduleError("periodic tail needs at least one stage")
        object.__setattr__(self, "stages", stages)

    def to_json(self) -> dict:
        return {"periodic": [list(s) for s in self.stages]}


@dataclass(frozen=True)
class Growth:
    """Stage n has cut(n + offset) spacers read cyclically from ``pattern``."""

    cut: Count
    pattern: tuple
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if not self.pattern:
            raise ScheduleError("growth spacer pattern is empty")
        _check_values(self.pattern, "growth pattern")

    def cut_at(self, t: int) -> int:
        return self.cut(t)

    def counts_at(self, t: int) -> Counter:
        q = self.cut(t)
        L = len(self.pattern)
        full, rem = divmod(q, L)
        out = Counter()
        for v, c in Counter(self.pattern).items():
            out[v] += full * c
        for v in self.pattern[:rem]:
            out[v] += 1
        return +out

    def stage_at(self, t: int) -> tuple:
        q = self.cut(t)
        check_cap(q, "stage")
        L = len(self.pattern)
        return tuple(self.pattern[i % L] for i in range(q))

    def summary_mod(self, t: int, m: int) -> tuple[int, int]:
        L = len(self.pattern)
        qr = self.cut.residue(t, L * m)
        rem = qr % L
        full = (qr - rem) // L
        s = full * sum(self.pattern) + sum(self.pattern[:rem])
        return qr % m, s % m

    def phase_key(self, t: int, m: int) -> tuple:
        return self.cut.phase_key(t, len(self.pattern) * m)

    def values(self) -> frozenset:
        return frozenset(self.pattern)

    def share(self, v) -> Fraction:
        return Fraction(self.pattern.count(v), len(self.pattern))

    def share_count(self, v) -> Count | None:
        return None

    @property
    def is_constant(self) -> bool:
        return self.cut.is_constant

    def shifted(self, k: int) -> "Growth":
        return Growth(self.cut, self.pattern, self.offset + k)

    def to_json(self) -> dict:
        body = {"cut": self.cut.to_json(), "spacer_pattern": list(self.pattern)}
        if self.offset:
            body["offset"] = self.offset
        return {"growth": body}


@dataclass(frozen=True)
class BlockGrowth:
    """Stage n is the concatenation of pattern_j repeated count_j(n + offset) times."""

    blocks: tuple
    offset: int = 0

    def __post_init__(self):
        blocks = tuple((tuple(p), c) for p, c in self.blocks)
        if not blocks:
            raise ScheduleError("block growth needs at least one block")
        for i, (p, c) in enumerate(blocks):
            if not p:
                raise ScheduleError(f"block {i} has an empty pattern")
            _check_values(p, f"block {i}")
            if not isinstance(c, Count):
                raise ScheduleError(f"block {i} count must be a Count")
            if c.is_zero:
                raise ScheduleError(f"block {i} has a count that is identically zero")
        object.__setattr__(self, "blocks", blocks)

    def cut_at(self, t: int) -> int:
        return sum(len(p) * c(t) for p, c in self.blocks)

    def counts_at(self, t: int) -> Counter:
        out = Counter()
        for p, c in self.blocks:
            k = c(t)
            for v, m in Counter(p).items():
                out[v] += m * k
        return +out

    def stage_at(self, t: int) -> tuple:
        check_cap(self.cut_at(t), "stage")
        out = []
        for p, c in self.blocks:
            out.extend(p * c(t))
        return tuple(out)

    def summary_mod(self, t: int, m: int) -> tuple[int, int]:
        q = s = 0
        for p, c in self.blocks:
            k = c.residue(t, m)
            q += len(p) * k
            s += sum(p) * k
        return q % m, s % m

    def phase_key(self, t: int, m: int) -> tuple:
        return tuple(c.phase_key(t, m) for _, c in self.blocks)

    def values(self) -> frozenset:
        return frozenset(v for p, _ in self.blocks for v in p)

    def cut_count(self) -> Count:
        out = Count()
        for p, c in self.blocks:
            out = out + c.times(len(p))
        return out

    def share_count(self, v) -> Count:
        out = Count()
        for p, c in self.blocks:
            if v in p:
                out = out + c.times(p.count(v))
        return out

    def share(self, v) -> Fraction:
        key_q, lead_q = self.cut_count().leading()
        key_f, lead_f = self.share_count(v).leading()
        if key_f < key_q:
            return Fraction(0)
        return Fraction(lead_f, lead_q)

    @property
    def cut(self) -> Count:
        return self.cut_count()

    @property
    def is_constant(self) -> bool:
        return all(c.is_constant for _, c in self.blocks)

    def shifted(self, k: int) -> "BlockGrowth":
        return BlockGrowth(self.blocks, self.offset + k)

    def to_json(self) -> dict:
        body = {"blocks": [{"pattern": list(p), "count": c.to_json()} for p, c in self.blocks]}
        if self.offset:
            body["offset"] = self.offset
        return {"block_growth": body}


Tail = Union[Periodic, Growth, BlockGrowth]


@dataclass(frozen=True)
class ParameterSchedule:
    preperiod: tuple = ()
    tail: Tail = field(default_factory=lambda: Periodic(((0, 1),)))
    name: str | None = field(default=None, compare=False)
    meta: tuple = field(default=(), compare=False)

    def __post_init__(self):
        pre = tuple(tuple(s) for s in self.preperiod)
        object.__setattr__(self, "preperiod", pre)
        for i, s in enumerate(pre):
            if not s:
                raise ScheduleError("empty stage (q_n = 0)", stage=i)
            _check_values(s, stage=i)
        tail = self.tail
        if isinstance(tail, Periodic):
            for j, s in enumerate(tail.stages):
                if not s:
                    raise ScheduleError("empty stage (q_n = 0)", stage=len(pre) + j)
                _check_values(s, stage=len(pre) + j)
        elif isinstance(tail, (Growth, BlockGrowth)):
            if tail.is_constant:
                # a growth rule that does not grow is just a periodic tail
                n = len(pre)
                tail = Periodic((tail.stage_at(n + tail.offset),))
                object.__setattr__(self, "tail", tail)
            elif tail.cut_at(len(pre) + tail.offset) < 1:
                raise ScheduleError("growth rule yields an empty stage", stage=len(pre))
        else:
            raise ScheduleError(f"unsupported tail {tail!r}")

    # stage access

    @property
    def pre_len(self) -> int:
        return len(self.preperiod)

    @property
    def periodic(self) -> bool:
        return isinstance(self.tail, Periodic)

    @property
    def period(self) -> int:
        return len(self.tail.stages) if self.periodic else 0

    def _tail_index(self, n: int):
        if n < 0:
            raise ScheduleError(f"negative stage index {n}")
        if n < self.pre_len:
            return None
        if self.periodic:
            return (n - self.pre_len) % self.period
        return n + self.tail.offset

    def stage(self, n: int) -> tuple:
        t = self._tail_index(n)
        if t is None:
            return self.preperiod[n]
        if self.periodic:
            return self.tail.stages[t]
        return self.tail.stage_at(t)

    def cut(self, n: int) -> int:
        t = self._tail_index(n)
        if t is None:
            return len(self.preperiod[n])
        if self.periodic:
            return len(self.tail.stages[t])
        return self.tail.cut_at(t)

    def counts(self, n: int) -> Counter:
        t = self._tail_index(n)
        if t is None:
            return Counter(self.preperiod[n])
        if self.periodic:
            return Counter(self.tail.stages[t])
        return self.tail.counts_at(t)

    def spacer_sum(self, n: int) -> int:
        return sum(v * c for v, c in self.counts(n).items())

    def summary_mod(self, n: int, m: int) -> tuple[int, int]:
        """(q_n mod m, sum of stage-n spacers mod m) without materializing the stage."""
        t = self._tail_index(n)
        if t is None or self.periodic:
            return self.cut(n) % m, self.spacer_sum(n) % m
        return self.tail.summary_mod(t, m)

    def phase_key(self, n: int, m: int):
        """Hashable state such that stage data mod m at n + j depends only on it and j.

        Returns None inside the preperiod, where no such state is claimed.
        """
        t = self._tail_index(n)
        if t is None:
            return None
        if self.periodic:
            return t
        return self.tail.phase_key(t, m)

    # value sets

    def tail_values(self) -> frozenset:
        if self.periodic:
            return frozenset(v for s in self.tail.stages for v in s)
        return self.tail.values()

    def values_from(self, n: int) -> frozenset:
        """All spacer values occurring at stages >= n."""
        out = set(self.tail_values())
        for i in range(max(n, 0), self.pre_len):
            out.update(self.preperiod[i])
        return frozenset(out)

    def max_spacer(self) -> int:
        return max(self.values_from(0))

    def min_spacer(self) -> int:
        return min(self.values_from(0))

    def is_standard(self) -> bool:
        if any(len(s) < 2 for s in self.preperiod):
            return False
        if self.periodic:
            return all(len(s) >= 2 for s in self.tail.stages)
        return self.cut(self.pre_len) >= 2

    def label(self) -> str:
        return self.name or "schedule"

    # serialization

    def to_json(self) -> dict:
        return {"preperiod": [list(s) for s in self.preperiod], "tail": self.tail.to_json()}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def tail_from_json(obj) -> Tail:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ScheduleError(f"tail must be a one-key object, got {obj!r}")
    (kind, body), = obj.items()
    if kind == "periodic":
        if not isinstance(body, list) or not all(isinstance(s, list) for s in body):
            raise ScheduleError("periodic tail must be a list of stages")
        return Periodic(tuple(tuple(s) for s in body))
    if kind == "growth":
        try:
            cut = Count.from_json(body["cut"])
            pattern = tuple(body["spacer_pattern"])
        except (KeyError, TypeError) as exc:
            raise ScheduleError(f"malformed growth tail: {exc}") from None
        return Growth(cut, pattern, body.get("offset", 0))
    if kind == "block_growth":
        try:
            blocks = tuple((tuple(b["pattern"]), Count.from_json(b["count"])) for b in body["blocks"])
        except (KeyError, TypeError) as exc:
            raise ScheduleError(f"malformed block_growth tail: {exc}") from None
        return BlockGrowth(blocks, body.get("offset", 0))
    raise ScheduleError(f"unknown tail kind {kind!r}")


def schedule_from_json(obj, name: str | None = None) -> ParameterSchedule:
    if not isinstance(obj, dict):
        raise ScheduleError("schedule must be a JSON object")
    pre = obj.get("preperiod", [])
    if not isinstance(pre, list):
        raise ScheduleError("preperiod must be a list of stages")
    for i, s in enumerate(pre):
        if not isinstance(s, list):
            raise ScheduleError("stage must be a list of spacers", stage=i)
    if "tail" not in obj:
        raise ScheduleError("schedule has no tail")
    sched = ParameterSchedule(tuple(tuple(s) for s in pre), tail_from_json(obj["tail"]),
                              name=name or obj.get("name"))
    bound = obj.get("max_spacer")
    if bound is not None and sched.max_spacer() > bound:
        n = next(i for i in range(sched.pre_len + max(sched.period, 1))
                 if max(sched.stage(i)) > bound) if sched.periodic else None
        raise ScheduleError(f"spacer {sched.max_spacer()} exceeds declared max_spacer {bound}", stage=n)
    return sched


def loads(text: str, name: str | None = None) -> ParameterSchedule:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScheduleError(f"schedule is not valid JSON: {exc}") from None
    return schedule_from_json(obj, name)


def load(path, name: str | None = None) -> ParameterSchedule:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), name)


def periodic(*stages, preperiod=(), name=None) -> ParameterSchedule:
    """Shorthand: ``periodic([0, 1])`` is the Chacon schedule."""
    return ParameterSchedule(tuple(map(tuple, preperiod)), Periodic(tuple(map(tuple, stages))), name=name)


# products of cutting parameters


def q_product(schedule: ParameterSchedule, m: int, n: int) -> int:
    """Q_{m,n}: product of (q_j + 1) for m <= j < n (empty product is 1)."""
    if m > n:
        raise ValueError(f"q_product needs m <= n, got {m} > {n}")
    out = 1
    for j in range(m, n):
        out *= schedule.cut(j) + 1
    return out


# contraction


class CutSequence:
    """Increasing cut points: an explicit prefix then a repeating step pattern."""

    def __init__(self, points, steps=None):
        points = list(points)
        if not points or points[0] != 0:
            raise ScheduleError("cut points must start at 0")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ScheduleError("cut points must be strictly increasing")
        if steps is None:
            steps = (points[-1] - points[-2],) if len(points) > 1 else (1,)
        steps = tuple(steps)
        if not steps or any(not _is_int(s) or s < 1 for s in steps):
            raise ScheduleError("cut steps must be positive integers")
        self.points = tuple(points)
        self.steps = steps

    def __getitem__(self, k: int) -> int:
        last = len(self.points) - 1
        if k <= last:
            return self.points[k]
        j = k - last
        full, rem = divmod(j, len(self.steps))
        return self.points[-1] + full * sum(self.steps) + sum(self.steps[:rem])

    def is_identity(self) -> bool:
        return self.points == tuple(range(len(self.points))) and set(self.steps) == {1}

    def compose(self, other: "CutSequence") -> "CutSequence":
        """Cuts of contracting by self and then by other: k -> self[other[k]]."""
        o_last, s_last = len(other.points) - 1, len(self.points) - 1
        seq, seen = [], {}
        k = 0
        while True:
            seq.append(self[other[k]])
            j = other[k]
            if k >= o_last and j >= s_last:
                state = ((k - o_last) % len(other.steps), (j - s_last) % len(self.steps))
                if state in seen:
                    i = seen[state]
                    steps = tuple(b - a for a, b in zip(seq[i:], seq[i + 1:]))
                    return CutSequence(seq[:i + 1], steps)
                seen[state] = k
            k += 1

    def __repr__(self) -> str:
        return f"CutSequence({list(self.points)}, steps={list(self.steps)})"


def merged_stage(schedule: ParameterSchedule, m: int, n: int) -> tuple:
    """Spacers of w_n read as w_m 1^{s_0} w_m ... w_m."""
    if n <= m:
        raise ScheduleError(f"cannot merge an empty stage range [{m}, {n})")
    check_cap(q_product(schedule, m, n) - 1, "merged stage")
    out = list(schedule.stage(m))
    for j in range(m + 1, n):
        block = out
        out = list(block)
        for a in schedule.stage(j):
            out.append(a)
            out.extend(block)
    return tuple(out)


def _roll(pre: list, period: list) -> tuple[tuple, tuple]:
    # absorb preperiod stages that merely repeat the end of the period
    pre, period = list(pre), list(period)
    while pre and pre[-1] == period[-1]:
        period = [pre.pop()] + period[:-1]
    return tuple(pre), tuple(period)


def contract(schedule: ParameterSchedule, cut_points, steps=None) -> ParameterSchedule:
    """Contraction along cut points; the points continue with ``steps`` (default: the last step)."""
    cuts = cut_points if isinstance(cut_points, CutSequence) else CutSequence(cut_points, steps)
    if cuts.is_identity():
        return schedule
    last = len(cuts.points) - 1
    pre = schedule.pre_len
    if schedule.periodic:
        groups, seen = [], {}
        k = 0
        while True:
            start = cuts[k]
            if k >= last and start >= pre:
                state = ((k - last) % len(cuts.steps), (start - pre) % schedule.period)
                if state in seen:
                    i = seen[state]
                    pre_part, per_part = _roll(groups[:i], groups[i:])
                    return ParameterSchedule(pre_part, Periodic(per_part),
                                             name=schedule.name, meta=schedule.meta)
                seen[state] = k
            groups.append(merged_stage(schedule, start, cuts[k + 1]))
            k += 1
    if cuts.steps != (1,):
        raise ScheduleError("growth tails can only be contracted with unit steps after the explicit cut points")
    c_last = cuts.points[-1]
    new_pre = [merged_stage(schedule, cuts[k], cuts[k + 1]) for k in range(last)]
    new_pre += [schedule.stage(j) for j in range(c_last, pre)]
    return ParameterSchedule(tuple(new_pre), schedule.tail.shifted(c_last - last),
                             name=schedule.name, meta=schedule.meta)


def standard_cuts(schedule: ParameterSchedule) -> CutSequence:
    """Cut points that merge every stage with q_n = 1 into its successor."""
    step = lambda n: 1 if schedule.cut(n) >= 2 else 2  # noqa: E731
    points = [0]
    if schedule.periodic:
        seen: dict[int, int] = {}
        while True:
            n = points[-1]
            if n >= schedule.pre_len:
                phase = (n - schedule.pre_len) % schedule.period
                if phase in seen:
                    i = seen[phase]
                    steps = tuple(b - a for a, b in zip(points[i:], points[i + 1:]))
                    return CutSequence(points[:i + 1], steps)
                seen[phase] = len(points) - 1
            points.append(n + step(n))
    while True:
        n = points[-1]
        if n >= schedule.pre_len and schedule.cut(n) >= 2:
            return CutSequence(points, (1,))
        points.append(n + step(n))


def standardize(schedule: ParameterSchedule) -> ParameterSchedule:
    """Equivalent schedule with q_n >= 2 everywhere.

    Merging a q = 1 stage with its successor always gives q >= 3, so the
    "no way to batch" failure cannot occur.
    """
    if schedule.is_standard():
        return schedule
    return contract(schedule, standard_cuts(schedule))


# alphabets


@dataclass(frozen=True)
class AlphabetTower:
    schedule: ParameterSchedule
    stable: frozenset
    n0: int

    @property
    def d(self) -> int:
        return len(self.stable)

    def level(self, n: int) -> frozenset:
        """A_n: {0, 1} at n = 0, otherwise the values used at stages >= n - 1."""
        if n == 0:
            return frozenset({0, 1})
        return self.schedule.values_from(n - 1)

    def to_json(self) -> dict:
        return {
            "A_W": sorted(self.stable),
            "d_W": self.d,
            "n0": self.n0,
            "levels": {str(n): sorted(self.level(n)) for n in range(self.n0 + 1)},
        }


@lru_cache(maxsize=256)
def alphabets(schedule: ParameterSchedule) -> AlphabetTower:
    stable = schedule.tail_values()
    last_bad = max((i for i, s in enumerate(schedule.preperiod) if not set(s) <= stable), default=None)
    n0 = 1 if last_bad is None else last_bad + 2
    return AlphabetTower(schedule, stable, n0)


def spacer_counts(schedule: ParameterSchedule, n: int) -> Vector:
    """f_n: multiplicity of each letter of A_n among the stage n - 1 spacers."""
    if n < 1:
        raise ScheduleError(f"spacer_counts is defined for n >= 1, got {n}")
    counts = schedule.counts(n - 1)
    return Vector({a: counts.get(a, 0) for a in alphabets(schedule).level(n)})
