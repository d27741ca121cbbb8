"""Exact axis-aligned squares in the unit square.

Every coordinate is a :class:`fractions.Fraction`; nothing in this module
touches floating point.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Mapping, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value: Rational | int | str) -> Fraction:
    """Coerce an exact value to a Fraction. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, (int, Rational, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class Square:
    """Square with lower-left corner (x, y) and side s."""

    x: Fraction
    y: Fraction
    s: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", as_fraction(self.x))
        object.__setattr__(self, "y", as_fraction(self.y))
        object.__setattr__(self, "s", as_fraction(self.s))
        if self.s <= 0:
            raise ValueError(f"square side must be positive, got {self.s}")

    @property
    def right(self) -> Fraction:
        return self.x + self.s

    @property
    def top(self) -> Fraction:
        return self.y + self.s

    def in_unit_square(self) -> bool:
        return self.x >= 0 and self.y >= 0 and self.right <= 1 and self.top <= 1


def squares_disjoint(a: Square, b: Square) -> bool:
    """True iff the interiors of ``a`` and ``b`` do not meet.

    Shared edges and corners count as disjoint.
    """
    return a.right <= b.x or b.right <= a.x or a.top <= b.y or b.top <= a.y


def total_side(squares: Iterable[Square]) -> Fraction:
    return sum((sq.s for sq in squares), ZERO)


@dataclass(frozen=True)
class Packing:
    """An ordered list of squares with its stored total and provenance.

    ``total`` defaults to the exact sum of sides.  A caller may pass a stored
    total (e.g. read from a file) so that :func:`verify` can flag a mismatch.
    ``provenance`` is a tuple of JSON-friendly dicts, one per derivation step.
    """

    squares: tuple[Square, ...]
    total: Fraction | None = None
    provenance: tuple[Mapping[str, Any], ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "squares", tuple(self.squares))
        object.__setattr__(self, "provenance", tuple(dict(r) for r in self.provenance))
        if self.total is None:
            object.__setattr__(self, "total", total_side(self.squares))
        else:
            object.__setattr__(self, "total", as_fraction(self.total))

    @property
    def n(self) -> int:
        return len(self.squares)

    def __len__(self) -> int:
        return len(self.squares)

    def with_provenance(self, *records: Mapping[str, Any]) -> "Packing":
        return Packing(self.squares, self.total, self.provenance + tuple(records))


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of :func:`verify`; lists every violation found."""

    n: int
    computed_total: Fraction
    stored_total: Fraction
    containment_violations: tuple[int, ...]
    overlapping_pairs: tuple[tuple[int, int], ...]

    @property
    def total_mismatch(self) -> bool:
        return self.computed_total != self.stored_total

    @property
    def valid(self) -> bool:
        return (
            not self.containment_violations
            and not self.overlapping_pairs
            and not self.total_mismatch
        )

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return f"valid packing: n={self.n}, total={self.computed_total}"
        parts = []
        if self.containment_violations:
            parts.append(
                "outside unit square: "
                + ", ".join(str(i) for i in self.containment_violations)
            )
        if self.overlapping_pairs:
            parts.append(
                "overlapping pairs: "
                + ", ".join(f"({i},{j})" for i, j in self.overlapping_pairs)
            )
        if self.total_mismatch:
            parts.append(
                f"stored total {self.stored_total} != recomputed {self.computed_total}"
            )
        return "invalid packing: " + "; ".join(parts)


def overlapping_pairs(squares: Sequence[Square]) -> list[tuple[int, int]]:
    """All index pairs (i < j) whose interiors intersect, sorted.

    Sweeps along x so that only squares with overlapping x-extents are
    compared; the result is the same as the all-pairs test.
    """
    edges = [(sq.x, sq.right, sq.y, sq.top) for sq in squares]
    order = sorted(range(len(squares)), key=lambda i: edges[i][0])
    active: list[int] = []
    pairs = []
    for i in order:
        x, _, y, top = edges[i]
        active = [j for j in active if edges[j][1] > x]
        # x-extents overlap for everything still active; test y only
        for j in active:
            if y < edges[j][3] and edges[j][2] < top:
                pairs.append((min(i, j), max(i, j)))
        active.append(i)
    pairs.sort()
    return pairs


def verify(packing: Packing) -> VerificationReport:
    squares = packing.squares
    outside = tuple(i for i, sq in enumerate(squares) if not sq.in_unit_square())
    return VerificationReport(
        n=len(squares),
        computed_total=total_side(squares),
        stored_total=packing.total,
        containment_violations=outside,
        overlapping_pairs=tuple(overlapping_pairs(squares)),
    )


def scale_translate(
    packing: Packing,
    factor: Rational | int | str,
    dx: Rational | int | str = 0,
    dy: Rational | int | str = 0,
) -> Packing:
    """Apply ``(x, y, s) -> (factor*x + dx, factor*y + dy, factor*s)``."""
    factor, dx, dy = as_fraction(factor), as_fraction(dx), as_fraction(dy)
    if factor <= 0:
        raise ValueError(f"scale factor must be positive, got {factor}")
    moved = tuple(
        Square(factor * sq.x + dx, factor * sq.y + dy, factor * sq.s)
        for sq in packing.squares
    )
    return Packing(moved, factor * packing.total, packing.provenance)


def cauchy_schwarz_ok(packing: Packing) -> bool:
    """Exact check that total**2 <= n, the bound every valid packing obeys."""
    total = total_side(packing.squares)
    return total * total <= packing.n


def digest(packing: Packing) -> str:
    """Stable SHA-256 over the squares only (order-sensitive)."""
    text = ";".join(f"{sq.x},{sq.y},{sq.s}" for sq in packing.squares)
    return hashlib.sha256(text.encode("ascii")).hexdigest()
