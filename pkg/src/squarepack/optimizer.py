"""Multi-start search over separation assignments with an LP inner step.

Non-overlap of two axis-aligned squares is a disjunction of four linear
constraints.  Fixing one disjunct per pair (a separation assignment) leaves
a linear program in the corners and sides; the outer loop flips disjuncts.
This is the only module that uses floating point.  :func:`rationalize`
turns a float optimum into an exact packing that always verifies.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .geometry import Packing, Square, verify

log = logging.getLogger(__name__)


class Disjunct(IntEnum):
    I_LEFT_OF_J = 0
    J_LEFT_OF_I = 1
    I_BELOW_J = 2
    J_BELOW_I = 3


def pair_index(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


@dataclass(frozen=True)
class SeparationAssignment:
    """One disjunct per unordered pair, listed in ``pair_index(n)`` order."""

    n: int
    codes: tuple[int, ...]

    def __post_init__(self) -> None:
        codes = tuple(int(c) for c in self.codes)
        object.__setattr__(self, "codes", codes)
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        expected = self.n * (self.n - 1) // 2
        if len(codes) != expected:
            raise ValueError(f"need {expected} disjuncts for n={self.n}, got {len(codes)}")
        bad = [c for c in codes if c not in (0, 1, 2, 3)]
        if bad:
            raise ValueError(f"disjunct codes must be 0..3, got {bad[0]}")

    @classmethod
    def from_mapping(cls, n: int, choice: dict[tuple[int, int], Disjunct]) -> "SeparationAssignment":
        return cls(n, tuple(choice[p] for p in pair_index(n)))

    def flipped(self, pair: int, code: int) -> "SeparationAssignment":
        codes = list(self.codes)
        codes[pair] = code
        return SeparationAssignment(self.n, tuple(codes))

    def constraints(self):
        """Yield (lo, hi, axis): square ``lo`` ends before ``hi`` starts on ``axis`` (0=x, 1=y)."""
        for (i, j), c in zip(pair_index(self.n), self.codes):
            lo, hi = (i, j) if c in (Disjunct.I_LEFT_OF_J, Disjunct.I_BELOW_J) else (j, i)
            yield lo, hi, 0 if c < 2 else 1


@dataclass(frozen=True)
class SearchConfig:
    n: int
    restarts: int = 100
    seed: int = 42
    lp_tolerance: float = 1e-9
    denom_bound: int = 10**6
    time_budget: float | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.denom_bound < 2:
            raise ValueError(f"denom_bound must be >= 2, got {self.denom_bound}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Candidate:
    """Float LP optimum: ``squares`` is an (n, 3) array of (x, y, s) rows."""

    squares: np.ndarray = field(repr=False)
    objective: float
    assignment: SeparationAssignment


def _lp_matrix(assignment: SeparationAssignment) -> tuple[np.ndarray, np.ndarray]:
    # variable layout: x_0..x_{n-1}, y_0..y_{n-1}, s_0..s_{n-1}
    n = assignment.n
    rows = 2 * n + len(assignment.codes)
    A = np.zeros((rows, 3 * n))
    b = np.zeros(rows)
    idx = np.arange(n)
    A[idx, idx] = 1
    A[idx, 2 * n + idx] = 1
    A[n + idx, n + idx] = 1
    A[n + idx, 2 * n + idx] = 1
    b[: 2 * n] = 1
    for r, (lo, hi, axis) in enumerate(assignment.constraints(), start=2 * n):
        A[r, axis * n + lo] += 1
        A[r, 2 * n + lo] += 1
        A[r, axis * n + hi] -= 1
    return A, b


def solve_assignment(
    n: int, assignment: SeparationAssignment, tolerance: float = 1e-9
) -> Candidate | None:
    """Maximize the total side under the assignment's separations.

    Returns None if the solver reports anything but an optimum.  (With all
    variables at zero the system is always feasible, so in practice this
    only guards against solver failure.)
    """
    if assignment.n != n:
        raise ValueError(f"assignment is for n={assignment.n}, not {n}")
    A, b = _lp_matrix(assignment)
    cost = np.zeros(3 * n)
    cost[2 * n :] = -1.0
    res = linprog(
        cost,
        A_ub=A,
        b_ub=b,
        bounds=(0, None),
        method="highs-ds",
        options={"primal_feasibility_tolerance": tolerance, "dual_feasibility_tolerance": tolerance},
    )
    if res.status != 0:
        return None
    xs = np.clip(res.x, 0.0, None).reshape(3, n).T.copy()
    return Candidate(xs, float(xs[:, 2].sum()), assignment)


def _initial_assignment(n: int, rng: np.random.Generator) -> SeparationAssignment:
    # separate each pair along the axis where random points are farther apart
    pts = rng.random((n, 2))
    codes = []
    for i, j in pair_index(n):
        dx, dy = pts[j] - pts[i]
        if abs(dx) >= abs(dy):
            codes.append(Disjunct.I_LEFT_OF_J if dx > 0 else Disjunct.J_LEFT_OF_I)
        else:
            codes.append(Disjunct.I_BELOW_J if dy > 0 else Disjunct.J_BELOW_I)
    return SeparationAssignment(n, tuple(codes))


def search(config: SearchConfig) -> Candidate:
    """Multi-start local search; deterministic unless ``time_budget`` cuts it short.

    Restart r draws from Philox seeded with ``seed + r``.  A restart starts
    from a random assignment and tries single-pair flips in random order,
    keeping a flip only if it raises the LP optimum by more than the
    tolerance.  It ends after 50*n(n-1)/2 consecutive rejected flips, or
    earlier when every flip has been rejected (a strict local optimum).
    The search stops once an objective reaches sqrt(n).
    """
    n, tol = config.n, config.lp_tolerance
    n_pairs = n * (n - 1) // 2
    stagnation = 50 * n_pairs
    ceiling = math.sqrt(n) - tol
    started = time.monotonic()
    cache: dict[tuple[int, ...], Candidate | None] = {}

    def solve(assignment: SeparationAssignment) -> Candidate | None:
        if assignment.codes not in cache:
            cache[assignment.codes] = solve_assignment(n, assignment, tol)
        return cache[assignment.codes]

    best: Candidate | None = None
    for restart in range(config.restarts):
        if config.time_budget is not None and time.monotonic() - started > config.time_budget:
            log.info("time budget hit after %d restarts", restart)
            break
        rng = np.random.Generator(np.random.Philox((config.seed + restart) % 2**64))
        current = solve(_initial_assignment(n, rng))
        if current is None:
            continue
        moves = [(p, c) for p in range(n_pairs) for c in range(4)]
        rejected = 0
        while rejected < stagnation and current.objective < ceiling:
            improved = False
            for k in rng.permutation(len(moves)):
                pair, code = moves[k]
                if code == current.assignment.codes[pair]:
                    continue
                trial = solve(current.assignment.flipped(pair, code))
                if trial is not None and trial.objective > current.objective + tol:
                    current, improved, rejected = trial, True, 0
                    break
                rejected += 1
                if rejected >= stagnation:
                    break
            if not improved:
                break
        if best is None or current.objective > best.objective + tol:
            best = current
            log.debug("restart %d: objective %.12f", restart, best.objective)
        if best.objective >= ceiling:
            break

    if best is None:
        # every LP failed; fall back to the trivial single-square layout
        fallback = np.zeros((n, 3))
        fallback[0, 2] = 1.0
        best = Candidate(fallback, 1.0, SeparationAssignment(n, (0,) * n_pairs))
    return best


def rationalize(
    candidate: Candidate, denom_bound: int, extra_provenance: dict | None = None
) -> Packing:
    """Exact packing from a float candidate; the result always verifies.

    Coordinates and sides are rounded by continued fractions with
    denominator <= ``denom_bound``.  Each side is then cut down to the
    room its assignment leaves it (container walls and every separation
    where it is the lower/left square), so all separations hold exactly.
    Squares whose side ends up <= 0 are dropped and listed in provenance.
    """
    if denom_bound < 2:
        raise ValueError(f"denom_bound must be >= 2, got {denom_bound}")
    n = candidate.assignment.n

    def snap(v: float) -> Fraction:
        return min(max(Fraction(float(v)).limit_denominator(denom_bound), Fraction(0)), Fraction(1))

    xs = [snap(v) for v in candidate.squares[:, 0]]
    ys = [snap(v) for v in candidate.squares[:, 1]]
    ss = [snap(v) for v in candidate.squares[:, 2]]
    room = [min(ss[i], 1 - xs[i], 1 - ys[i]) for i in range(n)]
    for lo, hi, axis in candidate.assignment.constraints():
        pos = xs if axis == 0 else ys
        room[lo] = min(room[lo], pos[hi] - pos[lo])

    kept, dropped = [], []
    for i in range(n):
        if room[i] > 0:
            kept.append(Square(xs[i], ys[i], room[i]))
        else:
            dropped.append(i)
    record = {
        "rule": "optimize",
        "n_requested": n,
        "dropped": dropped,
        "denom_bound": denom_bound,
        "objective": repr(candidate.objective),
        "assignment": list(candidate.assignment.codes),
    }
    if extra_provenance:
        record.update(extra_provenance)
    packing = Packing(tuple(kept), provenance=(record,))
    report = verify(packing)
    if not report.valid:  # separations hold by construction
        raise AssertionError(report.describe())
    return packing


def optimize(config: SearchConfig) -> tuple[Candidate, Packing]:
    """search + rationalize, with the run parameters in provenance."""
    best = search(config)
    packing = rationalize(
        best,
        config.denom_bound,
        {"seed": config.seed, "restarts": config.restarts},
    )
    return best, packing
