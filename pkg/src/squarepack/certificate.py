"""JSON certificate files: exact rationals as strings, re-verified on read."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .geometry import Packing, Square, VerificationReport, verify

SCHEMA = "squarepack.certificate/1"

_RATIONAL = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?")


class CertificateFormatError(ValueError):
    """The file is not a well-formed certificate."""


class CertificateVerificationError(ValueError):
    """The file parses but describes an invalid packing."""

    def __init__(self, report: VerificationReport):
        super().__init__(report.describe())
        self.report = report


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: Any) -> Fraction:
    """Parse "p" or "p/q" (q > 0, no spaces, no decimals)."""
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise CertificateFormatError(f"malformed rational {text!r}; expected 'p' or 'p/q'")
    return Fraction(text)


def to_dict(packing: Packing) -> dict:
    return {
        "schema": SCHEMA,
        "n": packing.n,
        "squares": [
            {"x": format_rational(sq.x), "y": format_rational(sq.y), "s": format_rational(sq.s)}
            for sq in packing.squares
        ],
        "total": format_rational(packing.total),
        "provenance": [dict(r) for r in packing.provenance],
    }


def from_dict(data: Any) -> Packing:
    """Parse without verifying geometry; the stored total is kept as-is."""
    if not isinstance(data, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise CertificateFormatError(f"unknown schema {data.get('schema')!r}, expected {SCHEMA!r}")
    missing = [k for k in ("n", "squares", "total") if k not in data]
    if missing:
        raise CertificateFormatError(f"missing fields: {', '.join(missing)}")
    rows = data["squares"]
    if not isinstance(rows, list):
        raise CertificateFormatError("'squares' must be a list")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n != len(rows):
        raise CertificateFormatError(f"'n' is {n!r} but {len(rows)} squares are listed")
    squares = []
    for i, row in enumerate(rows):
        if not isinstance(row, dict) or set(row) != {"x", "y", "s"}:
            raise CertificateFormatError(f"square {i} must have exactly the keys x, y, s")
        x, y, s = (parse_rational(row[k]) for k in ("x", "y", "s"))
        if s <= 0:
            raise CertificateFormatError(f"square {i} has non-positive side {s}")
        squares.append(Square(x, y, s))
    provenance = data.get("provenance", [])
    if not isinstance(provenance, list) or not all(isinstance(r, dict) for r in provenance):
        raise CertificateFormatError("'provenance' must be a list of objects")
    return Packing(tuple(squares), parse_rational(data["total"]), tuple(provenance))


def dumps(packing: Packing) -> str:
    return json.dumps(to_dict(packing), indent=2) + "\n"


def loads(text: str, check: bool = True) -> Packing:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from None
    packing = from_dict(data)
    if check:
        report = verify(packing)
        if not report.valid:
            raise CertificateVerificationError(report)
    return packing


def write_certificate(packing: Packing, path: str | Path) -> None:
    report = verify(packing)
    if not report.valid:
        raise CertificateVerificationError(report)
    Path(path).write_text(dumps(packing), encoding="utf-8")


def read_certificate(path: str | Path, check: bool = True) -> Packing:
    """Load a certificate; with ``check`` any geometric or total error raises."""
    return loads(Path(path).read_text(encoding="utf-8"), check=check)
