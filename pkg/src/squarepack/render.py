"""Deterministic SVG drawings of packings."""

from __future__ import annotations

from pathlib import Path

from .certificate import format_rational
from .geometry import Packing

SIZE = 512
MARGIN = 8


def _px(q) -> str:
    # fixed precision keeps the bytes identical across platforms
    return f"{float(q) * SIZE:.4f}"


def svg_text(packing: Packing) -> str:
    """SVG with y pointing up, as in the packing's own coordinates."""
    full = SIZE + 2 * MARGIN
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" '
        f'viewBox="{-MARGIN} {-MARGIN} {full} {full}">',
        f"<title>n={packing.n} total={format_rational(packing.total)}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="none" stroke="black" stroke-width="2"/>',
    ]
    for i, sq in enumerate(packing.squares):
        top = 1 - sq.top
        lines.append(
            f'<rect x="{_px(sq.x)}" y="{_px(top)}" width="{_px(sq.s)}" height="{_px(sq.s)}" '
            f'fill="#9ecae1" fill-opacity="0.7" stroke="#08519c" stroke-width="1">'
            f"<title>{i}: s={format_rational(sq.s)} ({float(sq.s):.6f})</title></rect>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(packing: Packing, path: str | Path) -> None:
    Path(path).write_text(svg_text(packing), encoding="utf-8")
