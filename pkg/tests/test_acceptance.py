"""The eight acceptance criteria, each at its stated tolerance and time limit.

Each test logs one PASS/FAIL line; the lines are collected into the
"acceptance criteria" section of the pytest summary.
"""

import random
import time
from fractions import Fraction as F

import pytest

from squarepack.bounds import (
    divergence_partial_sum,
    epsilon_interval,
    propagate,
    theorem1_implication,
    theorem2_epsilon_rule,
)
from squarepack.constructions import combine, grid, lemma_rhs
from squarepack.geometry import Packing, Square, verify
from squarepack.optimizer import SearchConfig, optimize


@pytest.fixture(scope="module")
def timed_ledger():
    started = time.perf_counter()
    ledger = propagate(2500)
    return ledger, time.perf_counter() - started


def test_1_grid_identity(timed_ledger, criterion):
    ledger, elapsed = timed_ledger
    exact = all(ledger.lb(m * m).value == m for m in range(1, 51))
    tight = all(ledger.ub(m * m).value.compare(ledger.lb(m * m).value) == 0 for m in range(1, 51))
    ok = exact and tight and elapsed < 5
    assert criterion(1, ok, f"LB(m^2) = m = UB for m <= 50: {exact and tight}; propagate(2500) {elapsed:.2f}s (< 5s)")


def test_2_lemma_construction(criterion):
    started = time.perf_counter()
    checked, failures = 0, []
    for b in range(2, 11):
        for a1 in range(1, b):
            for a2 in range(1, b - a1 + 1):
                out = combine(grid(a1), grid(a2), a1, a2, b)
                good = (
                    verify(out).valid
                    and (out.n, out.total) == lemma_rhs(a1 * a1, F(a1), a2 * a2, F(a2), a1, a2, b)
                    and out.total == b
                )
                checked += 1
                if not good:
                    failures.append((a1, a2, b))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 10
    assert criterion(2, ok, f"{checked} admissible triples with b <= 10, {len(failures)} failures; {elapsed:.2f}s (< 10s)")


def test_3_halasz_rule(timed_ledger, criterion):
    ledger, _ = timed_ledger
    lb7, lb14 = ledger.lb(7).value, ledger.lb(14).value
    ok = lb7 == F(5, 2) and lb14 >= F(11, 3) and lb7 * lb7 <= 7 and lb14 * lb14 <= 14
    assert criterion(3, ok, f"LB(7) = {lb7} via {ledger.lb(7).derivation}, LB(14) = {lb14} via {ledger.lb(14).derivation}")


def test_4_theorem1(criterion):
    started = time.perf_counter()
    bounds = [theorem1_implication(k, 2 * k).bound for k in range(1, 51)]
    elapsed = time.perf_counter() - started
    ok = bounds == list(range(1, 51)) and elapsed < 1
    assert criterion(4, ok, f"conditional bound == k for k <= 50 (n = 2k): {bounds == list(range(1, 51))}; {elapsed:.3f}s (< 1s)")


def test_5_theorem2_and_divergence(criterion):
    started = time.perf_counter()
    rule_ok = all(theorem2_epsilon_rule(2, F(1, 10), 1, k) == F(1, 5) / (k - 1) for k in range(4, 2001))
    total = divergence_partial_sum(F(1, 5), 4, 100000)
    elapsed = time.perf_counter() - started
    in_range = 2.10 <= total <= 2.13
    ok = rule_ok and in_range and elapsed < 1
    assert criterion(
        5,
        ok,
        f"eps(k) >= (1/5)/(k-1) for 4 <= k <= 2000: {rule_ok}; "
        f"divergence_partial_sum(1/5, 4, 100000) = {total:.6f}, required in [2.10, 2.13]; {elapsed:.3f}s (< 1s)",
    )


def test_6_epsilon_intervals(criterion):
    # k = 50 needs f(2501), one past the criterion-1 ledger
    built = time.perf_counter()
    ledger = propagate(50 * 50 + 1)
    built = time.perf_counter() - built
    started = time.perf_counter()
    bad = []
    for k in range(1, 51):
        iv = epsilon_interval(ledger, k)
        ub_form = iv.ub.radicand == k * k + 1 and iv.ub.shift == -k
        if not (iv.lb == 0 and ub_form and iv.consistent() and iv.ub_below_half_over_k()):
            bad.append(k)
    elapsed = time.perf_counter() - started
    ok = not bad and elapsed < 1
    assert criterion(
        6,
        ok,
        f"k <= 50: lb = 0, ub = sqrt(k^2+1)-k < 1/(2k), failures {bad}; "
        f"{elapsed:.3f}s (< 1s) after building the ledger in {built:.2f}s",
    )


def test_7_optimizer_regression(criterion):
    targets = {1: F(1), 2: F(1), 3: F(3, 2), 4: F(2), 9: F(3)}
    started = time.perf_counter()
    lines, ok = [], True
    for n, target in targets.items():
        best, packing = optimize(SearchConfig(n, restarts=1000, seed=42))
        reached = abs(packing.total - target) <= F(1, 10**6)
        valid = verify(packing).valid
        under_cs = packing.total * packing.total <= n
        ok &= reached and valid and under_cs
        lines.append(f"n={n}: {packing.total}")
    elapsed = time.perf_counter() - started
    ok &= elapsed < 60
    assert criterion(7, ok, f"{', '.join(lines)}; all verified and <= sqrt(n): {ok}; {elapsed:.2f}s (< 60s)")


# -- verifier fuzz -------------------------------------------------------------


def _base_packings():
    out = [grid(b) for b in range(1, 6)]
    six = combine(grid(1), grid(1), 1, 2, 3)
    out.append(six)
    out.append(combine(six, grid(2), 2, 2, 5))
    out.append(combine(grid(3), six, 3, 1, 4))
    out.append(Packing((Square(0, 0, F(1, 2)), Square(F(1, 2), 0, F(1, 2)), Square(0, F(1, 2), F(1, 2)))))
    return out


def _meets(a, b):
    # interval-overlap formulation, deliberately not the verifier's test
    return min(a.right, b.right) - max(a.x, b.x) > 0 and min(a.top, b.top) - max(a.y, b.y) > 0


def _replace(p, i, sq):
    squares = list(p.squares)
    squares[i] = sq
    return Packing(tuple(squares))


def _offset(rng, s):
    return s * F(rng.randint(-95, 95), 100)


def test_8_verifier_fuzz(criterion):
    rng = random.Random(20240601)
    bases = [p for p in _base_packings() if p.n >= 2]
    started = time.perf_counter()

    rejected_right = overlap_cases = 0
    while overlap_cases < 10_000:
        p = rng.choice(bases)
        i = rng.randrange(p.n)
        sq = p.squares[i]
        # mostly slide along one axis; tiled neighbours then give a single overlap
        dx, dy = _offset(rng, sq.s), _offset(rng, sq.s)
        axis = rng.random()
        if axis < 0.4:
            dy = 0
        elif axis < 0.8:
            dx = 0
        moved = Square(sq.x + dx, sq.y + dy, sq.s)
        if not moved.in_unit_square():
            continue
        hit = [j for j in range(p.n) if j != i and _meets(moved, p.squares[j])]
        if len(hit) != 1:
            continue
        overlap_cases += 1
        report = verify(_replace(p, i, moved))
        expected = (min(i, hit[0]), max(i, hit[0]))
        if report.overlapping_pairs == (expected,) and not report.containment_violations:
            rejected_right += 1

    accepted = 0
    for _ in range(10_000):
        p = rng.choice(bases)
        i = rng.randrange(p.n)
        sq = p.squares[i]
        # shrink, then slide anywhere inside the old footprint
        side = sq.s * F(rng.randint(1, 100), 100)
        room = sq.s - side
        moved = Square(sq.x + room * F(rng.randint(0, 100), 100), sq.y + room * F(rng.randint(0, 100), 100), side)
        if verify(_replace(p, i, moved)).valid:
            accepted += 1
    elapsed = time.perf_counter() - started

    ok = rejected_right == 10_000 and accepted == 10_000 and elapsed < 30
    assert criterion(
        8,
        ok,
        f"overlaps reported with the exact pair {rejected_right}/10000, "
        f"valid perturbations accepted {accepted}/10000; {elapsed:.2f}s (< 30s)",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
