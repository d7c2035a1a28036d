"""Free-monoid morphisms and the directive sequences of a Ferenczi subshift.

Letters are the spacer integers themselves; level 0 uses the letters 0 and 1
of the subshift.  Words are tuples of letters, and ``as_binary`` turns a
level-0 word into the usual '0'/'1' string.

For n >= 1, with stage n - 1 spacers (s_0, ..., s_{q-1}):

    tilde:   tau~_n(a) = s_0 s_1 ... s_{q-1} a      (right permutative)
    proper:  tau_n(a)  = s_1 ... s_{q-1} a s_0      (proper, constant length q + 1)

and tau_0(a) = 0 1^a in both cases.  The two are rotationally conjugate:
s_0 tau_n(a) = tau~_n(a) s_0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import AlphabetMismatch, NotInLanguage, ScheduleError, WindowTooShort, check_cap
from .linalg import Matrix
from .params import ParameterSchedule, alphabets

TILDE, PROPER, SHIFTED = "tilde", "proper", "shifted"
VARIANTS = (TILDE, PROPER, SHIFTED)


class Morphism:
    """Nonerasing map letter -> word between finite alphabets."""

    __slots__ = ("domain", "codomain", "images")

    def __init__(self, images: Mapping, codomain: Iterable | None = None):
        imgs = {a: tuple(w) for a, w in images.items()}
        if not imgs:
            raise AlphabetMismatch("a morphism needs a nonempty domain")
        used = {x for w in imgs.values() for x in w}
        cod = frozenset(used if codomain is None else codomain)
        for a, w in imgs.items():
            if not w:
                raise AlphabetMismatch(f"image of {a!r} is empty (erasing morphisms are not supported)")
        if not used <= cod:
            raise AlphabetMismatch(f"image letters {sorted(used - cod)} are outside the codomain")
        self.domain = tuple(sorted(imgs))
        self.codomain = tuple(sorted(cod))
        self.images = imgs

    @classmethod
    def identity(cls, alphabet: Iterable) -> "Morphism":
        alphabet = list(alphabet)
        return cls({a: (a,) for a in alphabet}, alphabet)

    def __call__(self, word) -> tuple:
        out = []
        for a in word:
            try:
                out.extend(self.images[a])
            except KeyError:
                raise AlphabetMismatch(f"letter {a!r} is not in the domain {self.domain}") from None
        return tuple(out)

    def image(self, a) -> tuple:
        return self.images[a]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Morphism) and self.images == other.images
                and self.codomain == other.codomain)

    def __hash__(self):
        return hash((tuple(sorted(self.images.items())), self.codomain))

    def __repr__(self) -> str:
        body = ", ".join(f"{a} -> {''.join(map(str, w)) if all(x in (0, 1) for x in w) else list(w)}"
                         for a, w in sorted(self.images.items()))
        return f"Morphism({body})"

    @property
    def max_length(self) -> int:
        return max(len(w) for w in self.images.values())

    @property
    def min_length(self) -> int:
        return min(len(w) for w in self.images.values())

    def image_length(self, word) -> int:
        return sum(len(self.images[a]) for a in word)

    def to_json(self) -> dict:
        return {"domain": list(self.domain), "codomain": list(self.codomain),
                "images": {str(a): list(w) for a, w in sorted(self.images.items())}}


def compose(sigma: Morphism, tau: Morphism) -> Morphism:
    """sigma o tau: apply tau first."""
    if tuple(tau.codomain) != tuple(sigma.domain):
        raise AlphabetMismatch(f"cannot compose: codomain {tau.codomain} != domain {sigma.domain}")
    total = sum(sigma.image_length(w) for w in tau.images.values())
    check_cap(total, "composed morphism")
    return Morphism({a: sigma(w) for a, w in tau.images.items()}, sigma.codomain)


def composition_matrix(tau: Morphism) -> Matrix:
    """M(b, a) = number of b in tau(a); rows = codomain, columns = domain."""
    entries = {}
    for a, w in tau.images.items():
        for b in w:
            entries[b, a] = entries.get((b, a), 0) + 1
    return Matrix(tau.codomain, tau.domain, entries)


def predicates(tau: Morphism) -> dict[str, bool]:
    imgs = list(tau.images.values())
    firsts = [w[0] for w in imgs]
    lasts = [w[-1] for w in imgs]
    m = composition_matrix(tau)
    return {
        "proper": len(set(firsts)) == 1 and len(set(lasts)) == 1,
        "constant_length": len({len(w) for w in imgs}) == 1,
        "left_permutative": len(set(firsts)) == len(imgs),
        "right_permutative": len(set(lasts)) == len(imgs),
        "positive": all(m[r, c] > 0 for r in m.rows for c in m.cols),
    }


@dataclass(frozen=True)
class RotationWitness:
    """``word`` with tau(a) w = w tau~(a) ("right") or w tau(a) = tau~(a) w ("left")."""

    word: tuple
    direction: str

    def to_json(self) -> dict:
        return {"word": list(self.word), "direction": self.direction}


def _prefix_cycle(w: tuple, k: int) -> tuple:
    return tuple(w[i % len(w)] for i in range(k))


def rotation_witness(tau: Morphism, tilde: Morphism) -> RotationWitness | None:
    """Shortest word conjugating tau to tilde, searched up to the longest image length."""
    if tau.domain != tilde.domain:
        return None
    if any(len(tau.image(a)) != len(tilde.image(a)) for a in tau.domain):
        return None
    a0 = tau.domain[0]
    for k in range(tau.max_length):
        # tau(a) w = w tilde(a) forces w to be a prefix of tau(a)^infinity
        w = _prefix_cycle(tau.image(a0), k)
        if all(tau.image(a) + w == w + tilde.image(a) for a in tau.domain):
            return RotationWitness(w, "right")
        w = _prefix_cycle(tilde.image(a0), k)
        if all(w + tau.image(a) == tilde.image(a) + w for a in tau.domain):
            return RotationWitness(w, "left")
    return None


def tau0_image(word) -> str:
    return "".join("0" + "1" * a for a in word)


def as_binary(word) -> str:
    return "".join(str(x) for x in word)


@lru_cache(maxsize=1024)
def build(schedule: ParameterSchedule, variant: str, n: int) -> Morphism:
    """The level-n morphism A_{n+1} -> A_n of the requested directive sequence."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == SHIFTED:
        return build(schedule, PROPER, n + 1)
    if n < 0:
        raise ScheduleError(f"negative level {n}")
    tower = alphabets(schedule)
    dom = tower.level(n + 1)
    if n == 0:
        return Morphism({a: (0,) + (1,) * a for a in dom}, (0, 1))
    stage = schedule.stage(n - 1)
    if variant == TILDE:
        return Morphism({a: stage + (a,) for a in dom}, tower.level(n))
    if len(stage) < 2:
        raise ScheduleError("the proper morphism needs q >= 2; standardize the schedule first", stage=n - 1)
    return Morphism({a: stage[1:] + (a, stage[0]) for a in dom}, tower.level(n))


def telescope(schedule: ParameterSchedule, variant: str, m: int, n: int) -> Morphism:
    """tau_{[m,n)} = tau_m o ... o tau_{n-1}; identity on A_m when m = n."""
    if m > n:
        raise ScheduleError(f"telescope needs m <= n, got {m} > {n}")
    tower = alphabets(schedule)
    if variant == SHIFTED:
        return telescope(schedule, PROPER, m + 1, n + 1)
    if m == n:
        return Morphism.identity(tower.level(m))
    out = build(schedule, variant, n - 1)
    for k in range(n - 2, m - 1, -1):
        out = compose(build(schedule, variant, k), out)
    return out


# asymptotic words


@lru_cache(maxsize=128)
def lr_words(schedule: ParameterSchedule, n: int) -> tuple[tuple, tuple]:
    """(L_{1,n}, R_{1,n}) with tau_{[1,n+1)}(a) = L_{1,n} a R_{1,n}."""
    if n < 1:
        raise ScheduleError(f"lr_words needs n >= 1, got {n}")
    stage = schedule.stage(0)
    left, right = stage[1:], stage[:1]
    images = None  # images of tau_{[1,k+1)} on A_{k+1}
    for k in range(1, n):
        tau = build(schedule, PROPER, k)
        images = tau if images is None else compose(images, tau)
        nxt = schedule.stage(k)
        left = images(nxt[1:]) + left
        right = right + images(nxt[:1])
        check_cap(len(left) + len(right), "asymptotic word")
    return left, right


def common_prefix(schedule: ParameterSchedule, n: int) -> tuple[str, dict]:
    """A common prefix p_n of all tau_{[0,n)}(a) with the certified length bound."""
    if n < 1:
        raise ScheduleError(f"common_prefix needs n >= 1, got {n}")
    a1 = alphabets(schedule).level(1)
    lo, hi = min(a1) + 1, max(a1) + 1
    if n == 1:
        p = "0" + "1" * (lo - 1)
    else:
        p = tau0_image(lr_words(schedule, n - 1)[0])
    from .towers import heights

    shortest = min(heights(schedule, n).values())
    bound = {"min_image_length": shortest, "factor": f"{lo}/{3 * hi}",
             "holds": 3 * hi * len(p) >= lo * shortest}
    return p, bound


def coincidence_indices(tau: Morphism) -> frozenset:
    if not predicates(tau)["constant_length"]:
        raise ScheduleError("coincidence indices need a constant-length morphism")
    imgs = list(tau.images.values())
    return frozenset(i for i in range(len(imgs[0])) if len({w[i] for w in imgs}) == 1)


# centered decoding


@dataclass(frozen=True)
class Decoded:
    """``offset``: window index where the first complete level-n image starts."""

    offset: int
    letters: tuple
    positions: tuple

    def to_json(self) -> dict:
        return {"offset": self.offset, "letters": list(self.letters), "positions": list(self.positions)}


def required_window(schedule: ParameterSchedule, n: int) -> int:
    from .towers import heights

    if n == 0:
        return 1
    p, _ = common_prefix(schedule, n)
    return len(p) + int(max(heights(schedule, n).values()))


def decode_centered(window: str, schedule: ParameterSchedule, n: int) -> Decoded:
    """Cut the window into level-n images tau_{[0,n)}(a).

    Level 0 -> 1 splits at every '0' (blocks 0 1^a); the last block is
    dropped because its 1-run may continue past the window.  Higher levels
    use the constant length of tau_k: the only free slot of
    s_1 ... s_{q-1} x s_0 is index q - 1, so the phase must be the unique
    one under which every other slot matches.
    """
    from .words import in_language

    if n < 0:
        raise ScheduleError(f"negative level {n}")
    if set(window) - {"0", "1"}:
        raise NotInLanguage("window must be a 0/1 word")
    if not in_language(schedule, window):
        raise NotInLanguage(f"{window!r} is not a factor of the subshift")
    need = required_window(schedule, n)
    if len(window) < need:
        raise WindowTooShort(need, len(window))
    if n == 0:
        return Decoded(0, tuple(int(c) for c in window), tuple(range(len(window))))
    tower = alphabets(schedule)
    starts = [i for i, c in enumerate(window) if c == "0"]
    letters, positions = [], []
    for s, e in zip(starts, starts[1:]):
        letters.append(e - s - 1)
        positions.append(s)
    if any(a not in tower.level(1) for a in letters):
        raise NotInLanguage("a 1-block length is not a level-1 letter")
    for k in range(1, n):
        stage = schedule.stage(k - 1)
        q = len(stage)
        pattern = stage[1:] + (None, stage[0])
        allowed = tower.level(k + 1)
        phases = []
        for r in range(q + 1):
            ok = True
            for i, a in enumerate(letters):
                slot = pattern[(i - r) % (q + 1)]
                if (slot is None and a not in allowed) or (slot is not None and a != slot):
                    ok = False
                    break
            if ok:
                phases.append(r)
        if not phases:
            raise NotInLanguage(f"no consistent cut at level {k + 1}")
        if len(phases) > 1:
            raise WindowTooShort(2 * need, len(window))
        r = phases[0]
        idx = range(r, len(letters) - q, q + 1)
        letters, positions = [letters[i + q - 1] for i in idx], [positions[i] for i in idx]
    if not letters:
        raise WindowTooShort(2 * need, len(window))
    return Decoded(positions[0], tuple(letters), tuple(positions))


def encode_window(schedule: ParameterSchedule, n: int, letters, offset: int) -> str:
    """Window made of the last ``offset`` letters of tau_{[0,n)}(letters[0])
    followed by the full images of letters[1:]."""
    tau = telescope(schedule, PROPER, 0, n)
    head = as_binary(tau.image(letters[0]))
    if not 0 <= offset <= len(head):
        raise ScheduleError(f"offset {offset} outside the first image")
    return head[len(head) - offset:] + as_binary(tau(letters[1:]))
