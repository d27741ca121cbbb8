"""Plain-text and JSON views of a bound ledger."""

from __future__ import annotations

import json
from math import isqrt

from .bounds import Ledger, epsilon_interval
from .certificate import format_rational

COLUMNS = ("n", "lb", "ub", "ub_decimal", "derivation", "trace")


def ledger_rows(ledger: Ledger) -> list[dict]:
    rows = []
    for n in range(1, ledger.max_n + 1):
        ub = ledger.ub(n)
        lbd = ledger.lower.get(n)
        rows.append(
            {
                "n": n,
                "lb": format_rational(lbd.value) if lbd else None,
                "ub": str(ub),
                "ub_decimal": f"{float(ub.value):.6f}",
                "derivation": str(lbd.derivation) if lbd else None,
                "trace": lbd.trace if lbd else None,
            }
        )
    return rows


def epsilon_rows(ledger: Ledger) -> list[dict]:
    rows = []
    # eps(k) needs f(k^2 + 1), so k^2 + 1 <= max_n
    for k in range(1, isqrt(ledger.max_n - 1) + 1):
        iv = epsilon_interval(ledger, k)
        rows.append(
            {
                "k": k,
                "interval": str(iv),
                "lb": format_rational(iv.lb),
                "ub": str(iv.ub),
                "ub_decimal": f"{float(iv.ub):.6g}",
            }
        )
    return rows


def ledger_table(ledger: Ledger, format: str = "table") -> str:
    if format == "json":
        payload = {"max_n": ledger.max_n, "entries": ledger_rows(ledger), "epsilon": epsilon_rows(ledger)}
        return json.dumps(payload, indent=2) + "\n"
    if format != "table":
        raise ValueError(f"unknown format {format!r}; use 'table' or 'json'")

    rows = [[("-" if r[c] is None else str(r[c])) for c in COLUMNS] for r in ledger_rows(ledger)]
    widths = [max(len(c), *(len(row[i]) for row in rows)) for i, c in enumerate(COLUMNS)]
    out = ["  ".join(c.ljust(w) for c, w in zip(COLUMNS, widths)).rstrip()]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in rows]
    eps = epsilon_rows(ledger)
    if eps:
        out.append("")
        out.append("k  eps(k) in")
        out += [f"{r['k']}  {r['interval']}" for r in eps]
    return "\n".join(out) + "\n"
