"""Exact rational matrices and fraction-free nullspace computation.

Rows are cleared of denominators and then reduced with Bareiss' one-step
fraction-free elimination, so every intermediate entry is an integer minor
of the input.  Rows are held as sparse dicts because derivation matrices
are mostly zeros; a row whose pivot-column entry is zero only needs the
exact rescaling ``piv * v // prev`` on its nonzero entries.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .polynomial import as_fraction


@dataclass(frozen=True)
class ExactMatrix:
    """Dense rectangular matrix of Fractions with optional row/column labels."""

    entries: tuple[tuple[Fraction, ...], ...]
    ncols: int
    row_labels: tuple | None = field(default=None, compare=False)
    col_labels: tuple | None = field(default=None, compare=False)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None, **labels) -> ExactMatrix:
        rows = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("matrix rows have unequal lengths")
        return cls(rows, ncols, **labels)

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, cells: dict[tuple[int, int], Fraction], **labels) -> ExactMatrix:
        dense = [[Fraction(0)] * ncols for _ in range(nrows)]
        for (r, c), v in cells.items():
            dense[r][c] = as_fraction(v)
        return cls(tuple(tuple(r) for r in dense), ncols, **labels)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        r, c = rc
        return self.entries[r][c]

    def column(self, c: int) -> tuple[Fraction, ...]:
        return tuple(r[c] for r in self.entries)

    def matvec(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length does not match column count")
        v = [as_fraction(x) for x in v]
        return tuple(sum((a * b for a, b in zip(r, v) if a), Fraction(0)) for r in self.entries)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(tuple(zip(*self.entries)) if self.entries else (), self.nrows)

    def stack(self, other: ExactMatrix) -> ExactMatrix:
        if other.ncols != self.ncols:
            raise ValueError("cannot stack matrices with different column counts")
        return ExactMatrix(self.entries + other.entries, self.ncols)


def _integer_rows(m: ExactMatrix) -> list[dict[int, int]]:
    return _clear_denominators({c: v for c, v in enumerate(r) if v} for r in m.entries)


def _clear_denominators(sparse_rows) -> list[dict[int, int]]:
    rows = []
    for nz in sparse_rows:
        nz = {c: as_fraction(v) for c, v in nz.items() if v}
        if not nz:
            continue
        scale = lcm(*(v.denominator for v in nz.values()))
        rows.append({c: int(v * scale) for c, v in nz.items()})
    return rows


def bareiss_echelon(m: ExactMatrix) -> tuple[list[dict[int, int]], list[int]]:
    """Row echelon form by fraction-free elimination.

    Returns the pivot rows (sparse integer dicts) and their pivot columns.
    """
    return _echelon(_integer_rows(m), m.ncols)


def _echelon(rows: list[dict[int, int]], ncols: int) -> tuple[list[dict[int, int]], list[int]]:
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, len(rows)):
            if rows[i].get(c):
                if best is None or len(rows[i]) < len(rows[best]):
                    best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        piv = prow[c]
        tail = [(k, v) for k, v in prow.items() if k > c]
        for i in range(r + 1, len(rows)):
            row = rows[i]
            f = row.pop(c, 0)
            if f:
                new = {k: piv * v for k, v in row.items()}
                for k, v in tail:
                    new[k] = new.get(k, 0) - f * v
                rows[i] = {k: v // prev for k, v in new.items() if v}
            elif piv != prev:
                rows[i] = {k: piv * v // prev for k, v in row.items()}
        prev = piv
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: ExactMatrix) -> int:
    return len(bareiss_echelon(m)[1])


def nullspace(m: ExactMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right nullspace, each vector scaled so its first nonzero entry is 1."""
    return _back_substitute(*bareiss_echelon(m), m.ncols)


def sparse_nullspace(rows, ncols: int) -> list[tuple[Fraction, ...]]:
    """nullspace() for a matrix given as an iterable of {column: value} rows."""
    return _back_substitute(*_echelon(_clear_denominators(rows), ncols), ncols)


def sparse_rank(rows, ncols: int) -> int:
    return len(_echelon(_clear_denominators(rows), ncols)[1])


def _back_substitute(echelon, pivots, ncols: int) -> list[tuple[Fraction, ...]]:
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        x: dict[int, Fraction] = {f: Fraction(1)}
        for row, pc in zip(reversed(echelon), reversed(pivots)):
            s = Fraction(0)
            for k, v in row.items():
                if k != pc and k in x:
                    s += v * x[k]
            if s:
                x[pc] = -s / row[pc]
        vec = [Fraction(0)] * ncols
        for k, v in x.items():
            vec[k] = v
        lead = next(v for v in vec if v)
        basis.append(tuple(v / lead for v in vec))
    return basis


def solve_in_span(columns: Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients expressing ``target`` as a combination of ``columns``, or None."""
    n = len(columns)
    if n == 0:
        return () if all(as_fraction(t) == 0 for t in target) else None
    rows = [list(col[i] for col in columns) + [-as_fraction(target[i])] for i in range(len(target))]
    aug = ExactMatrix.from_rows(rows, n + 1)
    for v in nullspace(aug):
        if v[n]:
            return tuple(x / v[n] for x in v[:n])
    return None
