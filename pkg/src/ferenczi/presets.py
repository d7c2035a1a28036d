"""Named schedules for the worked examples."""

from __future__ import annotations

from .params import BlockGrowth, Count, ParameterSchedule, Periodic


def chacon() -> ParameterSchedule:
    """w_{n+1} = w_n w_n 1 w_n."""
    return ParameterSchedule((), Periodic(((0, 1),)), name="chacon")


def four_letter(a: int = 1, b: int = 2, c: int = 3, d: int = 4) -> ParameterSchedule:
    """Alternating w_{n+1} = w_n 1^a w_n 1^b w_n and w_n 1^c w_n 1^d w_n."""
    if not 0 < a < b < c < d:
        raise ValueError("need 0 < a < b < c < d")
    return ParameterSchedule((), Periodic(((a, b), (c, d))), name="four-letter")


def non_exact_rank() -> ParameterSchedule:
    """Stage k is 1 0^{k+1}: q_k = k + 2 -> infinity while the letter 1 is used once."""
    blocks = (((1,), Count(1)), ((0,), Count(1, 1)))
    return ParameterSchedule((), BlockGrowth(blocks), name="non-exact-rank",
                             meta=(("a_star", 1),))


def exact_not_lr(a: int = 0, b: int = 1) -> ParameterSchedule:
    """tau_n(x) = a^n b^{2n-1} x b, n >= 1: stage n-1 is b a^n b^{2n-1}."""
    blocks = (((b,), Count(1)), ((a,), Count(1, 1)), ((b,), Count(1, 2)))
    return ParameterSchedule((), BlockGrowth(blocks), name="exact-not-lr")


def dwmu_one(a: int = 2, b: int = 1) -> ParameterSchedule:
    """tau_n(a) = a^n b a^n and tau_n(b) = a^n b a^{n-2} b a for n >= 2.

    n = 1 would need a^{-1}; stage 0 is set to (a, b) instead, which keeps
    the schedule standard and changes nothing in the tail.
    """
    if not a > b > 0:
        raise ValueError("need a > b > 0")
    # stage k = n - 1 >= 1 is a^{n+1} b a^{n-2}; with t = k - 1 that is a^{t+3} b a^t
    blocks = (((a,), Count(3, 1)), ((b,), Count(1)), ((a,), Count(0, 1)))
    return ParameterSchedule(((a, b),), BlockGrowth(blocks, offset=-1), name="dwmu-one",
                             meta=(("a", a), ("b", b)))


def measurable_realization(p: int = 3, d: int = 3, d_prime: int = 1, g_ratio: int = 2) -> ParameterSchedule:
    """tau_n(x) = U^{p g(n)} W^p v^{p-1} x v with g(n) = g_ratio^n.

    Letters: a_i = i p - 1 for i <= d' (so p | a_i + 1), a_d = a_{d'} + 1,
    the remaining letters just above a_d, and v = a_d.
    """
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError("p must be prime")
    if not 1 <= d_prime < d:
        raise ValueError("need 1 <= d' < d")
    if g_ratio < 2:
        raise ValueError("g must grow (ratio >= 2)")
    low = [i * p - 1 for i in range(1, d_prime + 1)]
    v = low[-1] + 1
    mid = [v + j for j in range(1, d - d_prime)]
    # stage n - 1 uses g(n) = g_ratio^n, i.e. g_ratio * g_ratio^(stage)
    blocks = [((v,), Count(1)), (tuple(low), Count(0, 0, ((g_ratio, p * g_ratio),)))]
    if mid:
        blocks.append((tuple(mid), Count(p)))
    blocks.append(((v,), Count(p - 1)))
    return ParameterSchedule((), BlockGrowth(tuple(blocks)), name="measurable-realization",
                             meta=(("measurable_eigenvalue", (1, p)), ("p", p), ("d", d), ("d_prime", d_prime)))


def even_spacers() -> ParameterSchedule:
    """Spacers {2, 4} with q = 3: the rotation by 1/2 is a continuous eigenvalue."""
    return ParameterSchedule((), Periodic(((2, 4, 2),)), name="even-spacers")


PRESETS = {
    "chacon": chacon,
    "four-letter": four_letter,
    "non-exact-rank": non_exact_rank,
    "exact-not-lr": exact_not_lr,
    "dwmu-one": dwmu_one,
    "measurable-realization": measurable_realization,
    "even-spacers": even_spacers,
}


def presets() -> list[str]:
    return sorted(PRESETS)


def get(name: str, **params) -> ParameterSchedule:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(presets())}") from None
    return factory(**params)
