"""Generating words, language, position decoding and the asymptotic tail.

w_0 = "0" and w_{n+1} = w_n 1^{a_{n,0}} w_n ... 1^{a_{n,q_n-1}} w_n.
Lengths are always computed by the recursion on big integers; words are
only materialized below the cap from ``errors.materialization_cap``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

from .errors import ScheduleError, check_cap
from .params import ParameterSchedule

_length_lock = threading.Lock()
_length_tables: dict = {}


def word_length(schedule: ParameterSchedule, n: int) -> int:
    """|w_n| via |w_{n+1}| = (q_n + 1)|w_n| + sum of stage-n spacers."""
    if n < 0:
        raise ScheduleError(f"negative level {n}")
    table = _length_tables.get(schedule)
    if table is None or len(table) <= n:
        with _length_lock:
            table = list(_length_tables.get(schedule, [1]))
            while len(table) <= n:
                k = len(table) - 1
                table.append((schedule.cut(k) + 1) * table[k] + schedule.spacer_sum(k))
            if len(_length_tables) > 512:
                _length_tables.clear()
            _length_tables[schedule] = table
    return table[n]


def level_for_length(schedule: ParameterSchedule, length: int) -> int:
    """Smallest N with |w_N| >= length."""
    n = 0
    while word_length(schedule, n) < length:
        n += 1
    return n


@lru_cache(maxsize=64)
def generating_word(schedule: ParameterSchedule, n: int) -> str:
    check_cap(word_length(schedule, n), f"w_{n}")
    w = "0"
    for k in range(n):
        w = w + "".join("1" * a + w for a in schedule.stage(k))
    return w


class GeneratingWordView:
    """Lazy handle on w_n: length and single letters without materializing."""

    def __init__(self, schedule: ParameterSchedule, n: int):
        self.schedule = schedule
        self.n = n

    def __len__(self) -> int:
        return word_length(self.schedule, self.n)

    @property
    def length(self) -> int:
        return word_length(self.schedule, self.n)

    def __getitem__(self, j: int) -> str:
        if not 0 <= j < self.length:
            raise IndexError(j)
        addrs = locate(self.schedule, j, 0, self.n) if self.n else []
        if addrs and addrs[-1].kind == "spacer":
            return "1"
        return "0"

    def word(self) -> str:
        return generating_word(self.schedule, self.n)

    def __str__(self) -> str:
        return self.word()


# language


@dataclass(frozen=True)
class FactorSet:
    length: int
    words: frozenset
    level: int
    spacers: frozenset

    def __contains__(self, u) -> bool:
        return u in self.words

    def __len__(self) -> int:
        return len(self.words)

    def sorted(self) -> list[str]:
        return sorted(self.words)

    def to_json(self) -> dict:
        return {"length": self.length, "words": self.sorted(), "level": self.level,
                "spacers": sorted(self.spacers)}


def factors(word: str, length: int) -> set[str]:
    return {word[i:i + length] for i in range(len(word) - length + 1)}


@lru_cache(maxsize=256)
def language(schedule: ParameterSchedule, length: int) -> FactorSet:
    """All words of the given length occurring in points of the subshift.

    With N minimal such that |w_N| >= length, every w_m (m > N) is a chain of
    w_N copies separated by 1-blocks taken from stages >= N.  A window of
    that length meets at most one separator, so the factors of
    w_N 1^alpha w_N over those separators are exactly the language.
    """
    if length < 1:
        raise ScheduleError(f"factor length must be positive, got {length}")
    n = level_for_length(schedule, length)
    w = generating_word(schedule, n)
    spacers = schedule.values_from(n)
    out: set[str] = set()
    for a in spacers:
        check_cap(2 * len(w) + a, "language window")
        out |= factors(w + "1" * a + w, length)
    return FactorSet(length, frozenset(out), n, spacers)


def in_language(schedule: ParameterSchedule, u: str) -> bool:
    if not u:
        return True
    if set(u) - {"0", "1"}:
        return False
    return u in language(schedule, len(u))


def factor_stats(schedule: ParameterSchedule, length: int) -> tuple[int, int]:
    """(min, max) number of zeros over the factors of the given length."""
    zeros = [u.count("0") for u in language(schedule, length).words]
    return min(zeros), max(zeros)


# recognizability at the word level


@dataclass(frozen=True)
class TowerAddress:
    """Where a position sits inside w_{level+1} = w_level 1^{a_0} w_level ... w_level.

    kind "copy": ``index`` is the copy number, ``offset`` the position in
    that copy of w_level.  kind "spacer": ``index`` is the gap number,
    ``offset`` the position in the 1-block and ``value`` its length.
    """

    level: int
    kind: str
    index: int
    offset: int
    value: int | None = None

    def to_json(self) -> dict:
        out = {"level": self.level, "kind": self.kind, "index": self.index, "offset": self.offset}
        if self.value is not None:
            out["value"] = self.value
        return out


def _split(schedule: ParameterSchedule, m: int, j: int) -> TowerAddress:
    size = word_length(schedule, m)
    pos = 0
    for i, a in enumerate(schedule.stage(m)):
        if j < pos + size:
            return TowerAddress(m, "copy", i, j - pos)
        pos += size
        if j < pos + a:
            return TowerAddress(m, "spacer", i, j - pos, a)
        pos += a
    return TowerAddress(m, "copy", schedule.cut(m), j - pos)


def locate(schedule: ParameterSchedule, j: int, n: int, top: int) -> list[TowerAddress]:
    """Addresses of position j of w_top at levels top-1 down to n.

    The recursion stops early if j falls inside a 1-block.
    """
    if not 0 <= n <= top:
        raise ScheduleError(f"need 0 <= n <= top, got n={n}, top={top}")
    if not 0 <= j < word_length(schedule, top):
        raise ScheduleError(f"position {j} outside w_{top} of length {word_length(schedule, top)}")
    out = []
    for m in range(top - 1, n - 1, -1):
        addr = _split(schedule, m, j)
        out.append(addr)
        if addr.kind == "spacer":
            break
        j = addr.offset
    return out


def encode(schedule: ParameterSchedule, addresses: list[TowerAddress], top: int) -> int:
    """Inverse of locate: the position in w_top described by the addresses."""
    j = 0
    expected = top - 1
    for k, addr in enumerate(addresses):
        if addr.level != expected:
            raise ScheduleError(f"address levels must descend from {top - 1}, got {addr.level}")
        expected -= 1
        m = addr.level
        size = word_length(schedule, m)
        stage = schedule.stage(m)
        before = sum(stage[:addr.index])
        last = k == len(addresses) - 1
        if addr.kind == "copy":
            if not 0 <= addr.offset < size:
                raise ScheduleError(f"copy offset {addr.offset} outside w_{m}")
            j += addr.index * size + before
            if last:
                j += addr.offset
        else:
            if addr.value != stage[addr.index] or not 0 <= addr.offset < addr.value:
                raise ScheduleError(f"bad spacer address {addr}")
            j += (addr.index + 1) * size + before + addr.offset
            if not last:
                raise ScheduleError("a spacer address must be the last one")
    return j


# asymptotic tail


def asymptotic_tail(schedule: ParameterSchedule, length: int) -> str:
    """First letters of the right tail u = lim tau_0(R_{1,n})."""
    from .morphisms import lr_words, tau0_image

    if length < 1:
        raise ScheduleError(f"length must be positive, got {length}")
    n = 1
    while True:
        _, right = lr_words(schedule, n)
        out = tau0_image(right)
        if len(out) >= length:
            return out[:length]
        n += 1
