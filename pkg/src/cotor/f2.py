"""Bit-packed dense linear algebra over the two-element field.

A vector is a Python int whose bit ``c`` is coordinate ``c``; a matrix
stores one such int per row.  Row operations are single XORs, so the
word-level parallelism of big ints does the work that numpy would
otherwise do.  Everything here is pure: inputs are never mutated and
equal inputs give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

__all__ = [
    "F2Matrix",
    "rank",
    "solve",
    "kernel_basis",
    "in_span",
    "Echelon",
    "ExpressSolver",
]


@dataclass(frozen=True)
class F2Matrix:
    """Dense GF(2) matrix with row-major bit storage.

    ``bits[r]`` holds row ``r``; bit ``c`` of that int is the entry in
    column ``c``.  Rows wider than ``cols`` are rejected so equality of
    dataclasses is equality of matrices.
    """

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.bits) != self.rows:
            raise ValueError("bits length does not match row count")
        mask = (1 << self.cols) - 1
        for row in self.bits:
            if row < 0 or row & ~mask:
                raise ValueError("row value exceeds column count")

    @staticmethod
    def zero(rows: int, cols: int) -> "F2Matrix":
        return F2Matrix(rows, cols, (0,) * rows)

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def from_rows(rows: Iterable[int], cols: int) -> "F2Matrix":
        rows = tuple(rows)
        return F2Matrix(len(rows), cols, rows)

    @staticmethod
    def from_entries(entries: Iterable[Iterable[int]], rows: int, cols: int) -> "F2Matrix":
        packed = []
        for r, row in enumerate(entries):
            val = 0
            for c, e in enumerate(row):
                if e & 1:
                    val |= 1 << c
            packed.append(val)
        if len(packed) != rows:
            raise ValueError("entry grid does not match row count")
        return F2Matrix(rows, cols, tuple(packed))

    def entry(self, r: int, c: int) -> int:
        return (self.bits[r] >> c) & 1

    def column(self, c: int) -> int:
        """Column ``c`` as a bit vector over rows."""
        v = 0
        for r, row in enumerate(self.bits):
            v |= ((row >> c) & 1) << r
        return v

    def columns(self) -> list[int]:
        return [self.column(c) for c in range(self.cols)]

    def matvec(self, x: int) -> int:
        """y = M x with x over columns and y over rows."""
        y = 0
        for r, row in enumerate(self.bits):
            y |= ((row & x).bit_count() & 1) << r
        return y

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        """Matrix product self @ other."""
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        out = []
        for row in self.bits:
            acc = 0
            rest = row
            while rest:
                j = (rest & -rest).bit_length() - 1
                acc ^= other.bits[j]
                rest &= rest - 1
            out.append(acc)
        return F2Matrix(self.rows, other.cols, tuple(out))

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.cols, self.rows, tuple(self.column(c) for c in range(self.cols)))

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        """Columns of self followed by columns of other."""
        if self.rows != other.rows:
            raise ValueError("row counts do not match")
        bits = tuple(a | (b << self.cols) for a, b in zip(self.bits, other.bits))
        return F2Matrix(self.rows, self.cols + other.cols, bits)

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.cols:
            raise ValueError("column counts do not match")
        return F2Matrix(self.rows + other.rows, self.cols, self.bits + other.bits)

    def add(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shapes do not match")
        return F2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def is_zero(self) -> bool:
        return all(row == 0 for row in self.bits)


def rank(matrix: F2Matrix) -> int:
    ech = Echelon()
    for row in matrix.bits:
        ech.add(row)
    return len(ech)


def solve(matrix: F2Matrix, rhs: int) -> Optional[int]:
    """One solution x of M x = rhs, or None if the system is inconsistent.

    ``rhs`` is a bit vector over rows, the result a bit vector over
    columns.  The returned solution is the deterministic one with zero
    free coordinates.
    """
    if rhs < 0 or rhs >> matrix.rows:
        raise ValueError("right-hand side exceeds row count")
    # Eliminate on (row | rhs-bit) pairs; track pivot columns.
    work: list[tuple[int, int]] = []  # (row bits, rhs bit)
    pivots: dict[int, tuple[int, int]] = {}
    for r in range(matrix.rows):
        row, b = matrix.bits[r], (rhs >> r) & 1
        while row:
            p = row.bit_length() - 1
            if p in pivots:
                prow, pb = pivots[p]
                row ^= prow
                b ^= pb
            else:
                pivots[p] = (row, b)
                break
        else:
            if b:
                return None
    x = 0
    # Back-substitute in increasing pivot order: each pivot row only
    # references columns below its pivot, which are already assigned.
    for p in sorted(pivots):
        row, b = pivots[p]
        acc = b ^ ((row & x).bit_count() & 1) ^ ((x >> p) & 1)
        if acc:
            x |= 1 << p
    return x


def kernel_basis(matrix: F2Matrix) -> list[int]:
    """Basis of {x : M x = 0}, one vector per free column, ascending."""
    # Reduced row echelon over the column space.
    rows = [r for r in matrix.bits if r]
    ech: list[int] = []
    for row in rows:
        for e in ech:
            if row & (1 << (e.bit_length() - 1)):
                row ^= e
        if row:
            ech.append(row)
            ech.sort(key=lambda v: -v.bit_length())
    # Full reduction so each pivot appears in exactly one row.
    for i in range(len(ech)):
        for j in range(len(ech)):
            if i != j and ech[i] & (1 << (ech[j].bit_length() - 1)):
                ech[i] ^= ech[j]
    pivot_of = {e.bit_length() - 1: e for e in ech}
    basis = []
    for c in range(matrix.cols):
        if c in pivot_of:
            continue
        v = 1 << c
        for p, e in pivot_of.items():
            if (e >> c) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def in_span(vector: int, basis: Iterable[int]) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add(b)
    return ech.contains(vector)


class Echelon:
    """Incremental row span with pivot bookkeeping."""

    def __init__(self) -> None:
        self._rows: dict[int, int] = {}  # pivot position -> row

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vector: int) -> int:
        while vector:
            p = vector.bit_length() - 1
            row = self._rows.get(p)
            if row is None:
                return vector
            vector ^= row
        return 0

    def add(self, vector: int) -> bool:
        """Insert; True if the span grew."""
        v = self.reduce(vector)
        if v == 0:
            return False
        self._rows[v.bit_length() - 1] = v
        return True

    def contains(self, vector: int) -> bool:
        return self.reduce(vector) == 0

    def reduce_full(self, vector: int) -> int:
        """Unique coset representative supported off the pivot positions.

        Unlike ``reduce``, which stops at the first non-pivot leading
        bit, this clears every pivot bit, so the result is linear in
        the input and projects onto the non-pivot coordinates.
        """
        v = vector
        bound = v.bit_length()
        while bound:
            scan = v & ((1 << bound) - 1)
            if not scan:
                break
            p = scan.bit_length() - 1
            row = self._rows.get(p)
            if row is not None:
                v ^= row
            bound = p
        return v

    def pivots(self) -> set[int]:
        return set(self._rows)

    def basis(self) -> list[int]:
        return [self._rows[p] for p in sorted(self._rows)]


class ExpressSolver:
    """Express vectors as combinations of a fixed generator list.

    Generators are taken in order; ``express(v)`` returns a combination
    bitmask over generator indices, or None when v lies outside their
    span.  Dependent generators are tolerated (they simply never carry
    a pivot).
    """

    def __init__(self, generators: list[int]) -> None:
        self._gens = list(generators)
        self._rows: dict[int, tuple[int, int]] = {}  # pivot -> (vector, combo)
        for i, g in enumerate(self._gens):
            self._insert(g, 1 << i)

    def _reduce(self, v: int, combo: int) -> tuple[int, int]:
        while v:
            p = v.bit_length() - 1
            got = self._rows.get(p)
            if got is None:
                break
            v ^= got[0]
            combo ^= got[1]
        return v, combo

    def _insert(self, v: int, combo: int) -> None:
        v, combo = self._reduce(v, combo)
        if v:
            self._rows[v.bit_length() - 1] = (v, combo)

    def express(self, vector: int) -> Optional[int]:
        v, combo = self._reduce(vector, 0)
        return None if v else combo
