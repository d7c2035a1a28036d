"""Kakutani-Rokhlin tower data: heights, the vectors f_{m,n} and the closed
forms for products of composition matrices.

For n >= n_0 every M_{tau_n} is I + f_n u over the stable alphabet, with u
the all-ones row.  Products and inverses then have the closed forms

    M_{tau_m} ... M_{tau_{n-1}} = I + f_{m,n} u
    (M_{tau_m} ... M_{tau_{n-1}})^{-1} = I - f_{m,n} u / Q_{m-1,n-1}

with f_{m,n} = sum_{k=m}^{n-1} Q_{k,n-1} f_k.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ScheduleError
from .linalg import Matrix, Vector
from .morphisms import PROPER, build, composition_matrix
from .params import ParameterSchedule, alphabets, q_product, spacer_counts
from .words import word_length

__all__ = ["q_product", "heights", "heights_by_recursion", "level_matrix", "direct_product",
           "f_range", "product_closed_form", "inverse_closed_form", "unit_row"]


def heights(schedule: ParameterSchedule, n: int) -> Vector:
    """h_n(a) = |tau_{[0,n)}(a)|, which is a + |w_{n-1}| for n >= 1."""
    if n < 0:
        raise ScheduleError(f"negative level {n}")
    tower = alphabets(schedule)
    if n == 0:
        return Vector.ones(tower.level(0))
    base = word_length(schedule, n - 1)
    return Vector({a: a + base for a in tower.level(n)})


def level_matrix(schedule: ParameterSchedule, n: int) -> Matrix:
    return composition_matrix(build(schedule, PROPER, n))


def heights_by_recursion(schedule: ParameterSchedule, n: int) -> Vector:
    """h_n from h_0 = (1, 1) and h_{k+1} = h_k M_{tau_k}; an independent route."""
    h = Vector.ones((0, 1))
    for k in range(n):
        h = h @ level_matrix(schedule, k)
    return h


def direct_product(schedule: ParameterSchedule, m: int, n: int) -> Matrix:
    """P_{m,n} = M_{tau_m} ... M_{tau_{n-1}} by multiplication (any levels)."""
    if m > n:
        raise ScheduleError(f"need m <= n, got {m} > {n}")
    out = Matrix.identity(alphabets(schedule).level(m))
    for k in range(m, n):
        out = out @ level_matrix(schedule, k)
    return out


def _stable_range(schedule: ParameterSchedule, m: int, n: int):
    tower = alphabets(schedule)
    if m < tower.n0:
        raise ScheduleError(f"closed forms need m >= n_0 = {tower.n0}, got m = {m}; "
                            f"use direct_product below the stabilization level")
    if not m < n:
        raise ScheduleError(f"need m < n, got m = {m}, n = {n}")
    return tower


def unit_row(labels) -> Vector:
    return Vector.ones(labels)


def f_range(schedule: ParameterSchedule, m: int, n: int) -> Vector:
    tower = _stable_range(schedule, m, n)
    out = Vector.zeros(tower.stable)
    for k in range(m, n):
        out = out + spacer_counts(schedule, k).scale(q_product(schedule, k, n - 1))
    return out


def product_closed_form(schedule: ParameterSchedule, m: int, n: int) -> Matrix:
    tower = _stable_range(schedule, m, n)
    f = f_range(schedule, m, n)
    return Matrix.identity(tower.stable) + f.outer(unit_row(tower.stable))


def inverse_closed_form(schedule: ParameterSchedule, m: int, n: int) -> Matrix:
    tower = _stable_range(schedule, m, n)
    f = f_range(schedule, m, n)
    scale = Fraction(1, q_product(schedule, m - 1, n - 1))
    return Matrix.identity(tower.stable) - f.outer(unit_row(tower.stable)).scale(scale)
