"""Exact rational vectors and matrices indexed by alphabet symbols.

Positional indexing is deliberately absent from the public surface: every
entry is addressed by the letter labelling its row or column.  Labels are
kept sorted so that printing and serialization are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fraction_str(x: Fraction) -> str:
    x = _frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s))


class Vector(Mapping):
    """Immutable vector over Q with sorted letter labels."""

    __slots__ = ("_data", "_labels")

    def __init__(self, entries: Mapping[Hashable, object] | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data = {k: _frac(v) for k, v in items}
        self._labels = tuple(sorted(data))
        self._data = data

    @classmethod
    def zeros(cls, labels: Iterable) -> "Vector":
        return cls({a: 0 for a in labels})

    @classmethod
    def ones(cls, labels: Iterable) -> "Vector":
        return cls({a: 1 for a in labels})

    @property
    def labels(self) -> tuple:
        return self._labels

    def __getitem__(self, key) -> Fraction:
        return self._data[key]

    def __iter__(self) -> Iterator:
        return iter(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other) -> bool:
        if isinstance(other, Vector):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == {k: _frac(v) for k, v in other.items()}
        return NotImplemented

    def __hash__(self):
        return hash(tuple((a, self._data[a]) for a in self._labels))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}: {fraction_str(self._data[a])}" for a in self._labels)
        return f"Vector({{{body}}})"

    def _check(self, other: "Vector"):
        if self._labels != other._labels:
            raise ValueError(f"label mismatch: {self._labels} vs {other._labels}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector({a: self[a] + other[a] for a in self._labels})

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector({a: self[a] - other[a] for a in self._labels})

    def __neg__(self) -> "Vector":
        return Vector({a: -v for a, v in self._data.items()})

    def scale(self, c) -> "Vector":
        c = _frac(c)
        return Vector({a: c * v for a, v in self._data.items()})

    def __mul__(self, c) -> "Vector":
        return self.scale(c)

    __rmul__ = __mul__

    def dot(self, other: "Vector") -> Fraction:
        self._check(other)
        return sum((self[a] * other[a] for a in self._labels), Fraction(0))

    def total(self) -> Fraction:
        return sum(self._data.values(), Fraction(0))

    def outer(self, other: "Vector") -> "Matrix":
        return Matrix(self._labels, other._labels,
                      {(r, c): self[r] * other[c] for r in self._labels for c in other._labels})

    def __matmul__(self, m: "Matrix") -> "Vector":
        # row vector times matrix
        if self._labels != m.rows:
            raise ValueError(f"label mismatch: {self._labels} vs rows {m.rows}")
        return Vector({c: sum((self[r] * m[r, c] for r in m.rows), Fraction(0)) for c in m.cols})

    def to_json(self) -> dict:
        return {str(a): fraction_str(self._data[a]) for a in self._labels}


class Matrix:
    """Immutable matrix over Q with labelled rows and columns."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Iterable, cols: Iterable, entries: Mapping | None = None):
        self.rows = tuple(sorted(rows))
        self.cols = tuple(sorted(cols))
        entries = entries or {}
        self._data = {(r, c): _frac(entries.get((r, c), 0)) for r in self.rows for c in self.cols}
        extra = set(entries) - set(self._data)
        if extra:
            raise ValueError(f"entries outside the label grid: {sorted(extra)[:3]}")

    @classmethod
    def identity(cls, labels: Iterable) -> "Matrix":
        labels = list(labels)
        return cls(labels, labels, {(a, a): 1 for a in labels})

    @classmethod
    def from_rows(cls, rows: Iterable, cols: Iterable, table) -> "Matrix":
        rows, cols = sorted(rows), sorted(cols)
        return cls(rows, cols, {(r, c): table[i][j]
                                for i, r in enumerate(rows) for j, c in enumerate(cols)})

    def __getitem__(self, key) -> Fraction:
        return self._data[key]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self._data[k] for k in sorted(self._data))))

    def table(self) -> list[list[Fraction]]:
        return [[self._data[r, c] for c in self.cols] for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fraction_str(x) for x in row) for row in self.table())
        return f"Matrix(rows={self.rows}, cols={self.cols}, [{body}])"

    def _check_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape/label mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix(self.rows, self.cols, {k: v + other._data[k] for k, v in self._data.items()})

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix(self.rows, self.cols, {k: v - other._data[k] for k, v in self._data.items()})

    def scale(self, c) -> "Matrix":
        c = _frac(c)
        return Matrix(self.rows, self.cols, {k: c * v for k, v in self._data.items()})

    def __matmul__(self, other):
        if isinstance(other, Vector):
            if self.cols != other.labels:
                raise ValueError(f"label mismatch: cols {self.cols} vs {other.labels}")
            return Vector({r: sum((self[r, c] * other[c] for c in self.cols), Fraction(0))
                           for r in self.rows})
        if self.cols != other.rows:
            raise ValueError(f"label mismatch: cols {self.cols} vs rows {other.rows}")
        out = {}
        for r in self.rows:
            for c in other.cols:
                out[r, c] = sum((self[r, k] * other[k, c] for k in self.cols), Fraction(0))
        return Matrix(self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._data.items()})

    def row(self, r) -> Vector:
        return Vector({c: self[r, c] for c in self.cols})

    def col(self, c) -> Vector:
        return Vector({r: self[r, c] for r in self.rows})

    def is_square(self) -> bool:
        return self.rows == self.cols

    def inverse(self) -> "Matrix":
        """Gauss-Jordan elimination over Q."""
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        labels = self.rows
        n = len(labels)
        a = [[self[r, c] for c in labels] + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(labels)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            for i in range(n):
                if i != col and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return Matrix(labels, labels, {(r, c): a[i][n + j]
                                       for i, r in enumerate(labels) for j, c in enumerate(labels)})

    def determinant(self) -> Fraction:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        a = self.table()
        n = len(a)
        det = Fraction(1)
        for col in range(n):
            pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            for i in range(col + 1, n):
                f = a[i][col] / a[col][col]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return det

    def restrict(self, rows: Iterable, cols: Iterable) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(rows, cols, {(r, c): self[r, c] for r in rows for c in cols})

    def to_json(self) -> dict:
        return {
            "rows": [str(r) for r in self.rows],
            "cols": [str(c) for c in self.cols],
            "entries": [[fraction_str(x) for x in row] for row in self.table()],
        }


class Interval:
    """Closed rational interval; exact values are degenerate intervals."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = _frac(lo)
        hi = lo if hi is None else _frac(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= _frac(x) <= self.hi

    def __eq__(self, other) -> bool:
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        if isinstance(other, (int, Fraction)):
            return self.exact and self.lo == other
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __add__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __mul__(self, c) -> "Interval":
        # multiplication by a rational scalar
        c = _frac(c)
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __repr__(self) -> str:
        if self.exact:
            return f"Interval({fraction_str(self.lo)})"
        return f"Interval[{fraction_str(self.lo)}, {fraction_str(self.hi)}]"

    def to_json(self):
        if self.exact:
            return fraction_str(self.lo)
        return [fraction_str(self.lo), fraction_str(self.hi)]
