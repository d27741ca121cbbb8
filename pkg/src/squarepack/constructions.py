"""Grid packings and the two-corner subgrid substitution."""

from __future__ import annotations

from fractions import Fraction

from .geometry import Packing, Square, digest, scale_translate, verify


def grid(b: int) -> Packing:
    """The b x b tiling by squares of side 1/b, emitted row by row from the bottom."""
    if b < 1:
        raise ValueError(f"grid size must be >= 1, got {b}")
    side = Fraction(1, b)
    squares = [Square(i * side, j * side, side) for j in range(b) for i in range(b)]
    return Packing(tuple(squares), provenance=({"rule": "grid", "b": b},))


def _check_hypothesis(a1: int, a2: int, b: int) -> None:
    if a1 < 1 or a2 < 1:
        raise ValueError(f"block sizes must be >= 1, got a1={a1}, a2={a2}")
    if a1 + a2 > b:
        raise ValueError(f"need a1 + a2 <= b, got {a1} + {a2} > {b}")


def lemma_rhs(
    n1: int, t1: Fraction, n2: int, t2: Fraction, a1: int, a2: int, b: int
) -> tuple[int, Fraction]:
    """Square count and total produced by substituting two corner blocks.

    With packings of ``n1`` and ``n2`` squares and totals ``t1``, ``t2``
    placed into the a1- and a2-blocks of the b-grid, the result has
    ``b^2 - a1^2 - a2^2 + n1 + n2`` squares and total
    ``(a1*t1 + a2*t2 + b^2 - a1^2 - a2^2) / b``.
    """
    _check_hypothesis(a1, a2, b)
    kept = b * b - a1 * a1 - a2 * a2
    total = (a1 * Fraction(t1) + a2 * Fraction(t2) + kept) / b
    return kept + n1 + n2, total


def combine(p1: Packing, p2: Packing, a1: int, a2: int, b: int) -> Packing:
    """Replace the top-left a1-block and bottom-right a2-block of grid(b).

    ``p1`` is shrunk by a1/b into columns ``i < a1``, rows ``j >= b - a1``;
    ``p2`` is shrunk by a2/b into columns ``i >= b - a2``, rows ``j < a2``.
    Every other cell keeps its 1/b square.  Output order: p1's squares,
    p2's squares, then the kept cells row by row from the bottom.
    """
    _check_hypothesis(a1, a2, b)
    for label, p in (("p1", p1), ("p2", p2)):
        report = verify(p)
        if not report.valid:
            raise ValueError(f"{label} is not a valid packing: {report.describe()}")

    inner1 = scale_translate(p1, Fraction(a1, b), 0, Fraction(b - a1, b))
    inner2 = scale_translate(p2, Fraction(a2, b), Fraction(b - a2, b), 0)

    side = Fraction(1, b)
    kept = []
    for j in range(b):
        for i in range(b):
            if i < a1 and j >= b - a1:
                continue
            if i >= b - a2 and j < a2:
                continue
            kept.append(Square(i * side, j * side, side))

    record = {
        "rule": "combine",
        "a1": a1,
        "a2": a2,
        "b": b,
        "n1": p1.n,
        "n2": p2.n,
        "p1": digest(p1),
        "p2": digest(p2),
    }
    return Packing(inner1.squares + inner2.squares + tuple(kept), provenance=(record,))
