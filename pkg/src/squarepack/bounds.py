"""Lower and upper bounds on f(n), closed under the known inequality rules.

f(n) is the largest total side length of n non-overlapping squares in the
unit square.  Lower bounds are exact rationals with a derivation record;
upper bounds are the surd sqrt(n), compared against rationals by squaring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping, Union

import numpy as np

from .constructions import lemma_rhs
from .geometry import Packing, as_fraction, digest, verify


# ---------------------------------------------------------------------------
# surds


@dataclass(frozen=True)
class Surd:
    """The real number ``sqrt(radicand) + shift`` with exact comparisons."""

    radicand: int
    shift: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.radicand < 0:
            raise ValueError("radicand must be non-negative")
        object.__setattr__(self, "shift", as_fraction(self.shift))

    def compare(self, r) -> int:
        """Sign of ``self - r`` for a rational ``r``."""
        t = as_fraction(r) - self.shift
        if t < 0:
            return 1
        sq = t * t
        return (self.radicand > sq) - (self.radicand < sq)

    def rational_value(self) -> Fraction | None:
        root = isqrt(self.radicand)
        if root * root == self.radicand:
            return root + self.shift
        return None

    def __lt__(self, r) -> bool:
        return self.compare(r) < 0

    def __le__(self, r) -> bool:
        return self.compare(r) <= 0

    def __gt__(self, r) -> bool:
        return self.compare(r) > 0

    def __ge__(self, r) -> bool:
        return self.compare(r) >= 0

    def __float__(self) -> float:
        return math.sqrt(self.radicand) + float(self.shift)

    def __str__(self) -> str:
        text = f"sqrt({self.radicand})"
        if self.shift > 0:
            text += f"+{self.shift}"
        elif self.shift < 0:
            text += f"-{-self.shift}"
        return text


# ---------------------------------------------------------------------------
# derivation records


@dataclass(frozen=True)
class Grid:
    m: int

    def __str__(self) -> str:
        return f"Grid({self.m})"


@dataclass(frozen=True)
class Halasz:
    k: int
    c: int

    def __str__(self) -> str:
        return f"Halasz({self.k},{self.c})"


@dataclass(frozen=True)
class Witness:
    digest: str

    def __str__(self) -> str:
        return f"Witness({self.digest[:12]})"


@dataclass(frozen=True)
class Monotone:
    source: int

    def __str__(self) -> str:
        return f"Monotone({self.source})"


@dataclass(frozen=True)
class Combine:
    a1: int
    a2: int
    b: int
    n1: int
    n2: int

    def __str__(self) -> str:
        return f"Combine({self.a1},{self.a2},{self.b},{self.n1},{self.n2})"


Derivation = Union[Grid, Halasz, Witness, Monotone, Combine]

# Preference among derivations of equal value and equal trace length.
RULE_ORDER = {Grid: 0, Halasz: 1, Witness: 2, Monotone: 3, Combine: 4}


def _params(d: Derivation) -> tuple:
    return tuple(getattr(d, f) for f in d.__dataclass_fields__)


@dataclass(frozen=True)
class LowerBound:
    """f(n) >= value.

    ``trace`` counts constructive steps (Grid, Halasz, Witness, Combine) in
    the derivation; Monotone steps are free.
    """

    n: int
    value: Fraction
    derivation: Derivation
    trace: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", as_fraction(self.value))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.value <= 0:
            raise ValueError(f"lower bound must be positive, got {self.value}")
        if self.value * self.value > self.n:
            raise ValueError(
                f"lower bound {self.value} for n={self.n} exceeds sqrt({self.n})"
            )

    def key(self) -> tuple:
        """Sort key: smaller is preferred."""
        d = self.derivation
        return (-self.value, self.trace, RULE_ORDER[type(d)], _params(d))

    def beats(self, other: "LowerBound | None") -> bool:
        return other is None or self.key() < other.key()


@dataclass(frozen=True)
class UpperBound:
    """f(n) <= sqrt(n)."""

    n: int

    @property
    def value(self) -> Surd:
        return Surd(self.n)

    def admits(self, r) -> bool:
        """True iff ``r <= sqrt(n)``."""
        return self.value >= r

    def __str__(self) -> str:
        return f"sqrt({self.n})"


@dataclass(frozen=True)
class EpsilonInterval:
    """Bracket ``lb <= f(k^2+1) - k <= sqrt(k^2+1) - k``."""

    k: int
    lb: Fraction

    @property
    def ub(self) -> Surd:
        return Surd(self.k * self.k + 1, Fraction(-self.k))

    def consistent(self) -> bool:
        return self.lb >= 0 and self.ub >= self.lb

    def ub_below_half_over_k(self) -> bool:
        return self.ub < Fraction(1, 2 * self.k)

    def __str__(self) -> str:
        return f"[{self.lb}, {self.ub}]"


# ---------------------------------------------------------------------------
# single rules


def ub_cauchy_schwarz(n: int) -> UpperBound:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return UpperBound(n)


def lb_grid(n: int) -> LowerBound:
    m = isqrt(n) if n >= 0 else -1
    if n < 1 or m * m != n:
        raise ValueError(f"{n} is not a positive perfect square")
    return LowerBound(n, Fraction(m), Grid(m))


def lb_halasz(k: int, c: int) -> LowerBound:
    """f(k^2 + 2c + 1) >= k + c/k.

    Only ``1 <= c <= k`` is accepted: for c > k the value would exceed
    sqrt(k^2 + 2c + 1).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if c > k:
        raise ValueError(
            f"c={c} > k={k}: k + c/k would exceed the sqrt upper bound"
        )
    return LowerBound(k * k + 2 * c + 1, k + Fraction(c, k), Halasz(k, c))


def lb_witness(packing: Packing) -> LowerBound:
    report = verify(packing)
    if not report.valid:
        raise ValueError(report.describe())
    if packing.n == 0:
        raise ValueError("an empty packing bounds nothing")
    return LowerBound(packing.n, report.computed_total, Witness(digest(packing)))


# ---------------------------------------------------------------------------
# the ledger


DEFAULT_RULES = frozenset({"grid", "halasz", "monotone", "combine"})


@dataclass(frozen=True)
class PropagateParams:
    b_cap: int = 32
    max_rounds: int = 100
    tolerance: float = 1e-9


@dataclass
class Ledger:
    max_n: int
    lower: dict[int, LowerBound] = field(default_factory=dict)

    def lb(self, n: int) -> LowerBound:
        try:
            return self.lower[n]
        except KeyError:
            raise KeyError(f"no lower bound recorded for n={n}") from None

    def ub(self, n: int) -> UpperBound:
        return ub_cauchy_schwarz(n)

    def entries(self) -> Iterable[tuple[int, LowerBound, UpperBound]]:
        for n in sorted(self.lower):
            yield n, self.lower[n], self.ub(n)

    def offer(self, cand: LowerBound) -> bool:
        if cand.n > self.max_n:
            return False
        if cand.beats(self.lower.get(cand.n)):
            self.lower[cand.n] = cand
            return True
        return False

    def copy(self) -> "Ledger":
        return Ledger(self.max_n, dict(self.lower))


def lb_monotone(ledger: Ledger, n: int) -> LowerBound:
    """f(n) >= f(n-1): a bound-only step, no packing is built."""
    if n < 2:
        raise ValueError(f"monotone step needs n >= 2, got {n}")
    prev = ledger.lb(n - 1)
    return LowerBound(n, prev.value, Monotone(n - 1), prev.trace)


def lb_combine(
    ledger: Ledger, a1: int, a2: int, b: int, n1: int, n2: int
) -> LowerBound:
    """Bound for the square count produced by :func:`combine` on the best known inputs."""
    l1, l2 = ledger.lb(n1), ledger.lb(n2)
    target, value = lemma_rhs(n1, l1.value, n2, l2.value, a1, a2, b)
    return LowerBound(target, value, Combine(a1, a2, b, n1, n2), 1 + l1.trace + l2.trace)


def _monotone_sweep(ledger: Ledger) -> bool:
    changed = False
    for n in range(2, ledger.max_n + 1):
        if n - 1 in ledger.lower and ledger.offer(lb_monotone(ledger, n)):
            changed = True
    return changed


def _plateau_starts(ledger: Ledger) -> np.ndarray:
    """Indices n whose bound is strictly above the bound at n - 1."""
    starts = []
    prev = None
    for n in range(1, ledger.max_n + 1):
        lbd = ledger.lower.get(n)
        if lbd is None:
            prev = None
            continue
        if prev is None or lbd.value > prev:
            starts.append(n)
        prev = lbd.value
    return np.array(starts, dtype=np.int64)


def _ramp(count: np.ndarray) -> np.ndarray:
    """0, 1, .., c-1 for each c in ``count``, concatenated."""
    total = int(count.sum())
    return np.arange(total) - np.repeat(np.cumsum(count) - count, count)


class _CombineRound:
    """One round of the Combine rule against a fixed snapshot of the ledger.

    Only candidates strictly above the current bound at their target are
    returned.  Every premise value obeys L(n) <= sqrt(n), and for blocks
    (a1, a2) in the b-grid with T = D + p + q squares, D = b^2 - a1^2 - a2^2,

        b*sqrt(T) - (a1*sqrt(p) + a2*sqrt(q) + D)
            = ((sqrt(T)*a1 - b*sqrt(p))^2 + (sqrt(T)*a2 - b*sqrt(q))^2
               + D*(sqrt(T) - b)^2) / (2*b*sqrt(T)).

    A candidate can only reach the current bound at T if the left side is
    at most b*(sqrt(T) - LB(T)), which confines T, p and q to narrow windows.
    Floats only prune (with slack); survivors are settled exactly.

    Premises range over plateau starts (n with LB(n) > LB(n-1)); a premise
    inside a plateau reaches the same value as its start at a larger target,
    which the monotone rule already covers.  If ``fresh`` is given, only
    premise pairs with at least one fresh member are examined.
    """

    def __init__(
        self,
        ledger: Ledger,
        params: PropagateParams,
        starts: np.ndarray,
        fresh: np.ndarray | None,
    ):
        self.ledger = ledger
        self.params = params
        N = self.N = ledger.max_n
        lf = np.full(N + 1, -np.inf)
        for n, lbd in ledger.lower.items():
            lf[n] = float(lbd.value)
        self.lf = lf
        self.starts = starts
        if fresh is None:
            self.fresh = None
        else:
            self.fresh = np.zeros(N + 1, dtype=bool)
            self.fresh[fresh] = True
        root = np.sqrt(np.arange(N + 1, dtype=float))
        gap = root - np.where(np.isfinite(lf), lf, 0.0)
        # slack covers rounding in every float quantity below
        self.gap = np.maximum(gap, 0.0) + params.tolerance + 1e-9
        # suffix maxima let a window start anywhere cheaply
        self.gap_suffix = np.maximum.accumulate(self.gap[::-1])[::-1]

    def _triples(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        rows = [
            (a1, a2, b)
            for b in range(2, self.params.b_cap + 1)
            for a1 in range(1, b)
            for a2 in range(1, b - a1 + 1)
            if b * b - a1 * a1 - a2 * a2 + 2 <= self.N
        ]
        if not rows:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty, empty
        a1, a2, b = np.array(rows, dtype=np.int64).T
        return a1, a2, b, b * b - a1 * a1 - a2 * a2

    def _range_max(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """max(gap[lo..hi]) per row via a sparse table."""
        table = [self.gap]
        width = 1
        while 2 * width <= len(self.gap):
            prev = table[-1]
            table.append(np.maximum(prev[:-width], prev[width:]))
            width *= 2
        level = np.floor(np.log2(hi - lo + 1)).astype(np.int64)
        out = np.empty(len(lo))
        for k in np.unique(level):
            m = level == k
            t = table[k]
            out[m] = np.maximum(t[lo[m]], t[hi[m] - (1 << k) + 1])
        return out

    @staticmethod
    def _t_window(b, D, G):
        # D*(s - b)^2 <= 2*b^2*s*G, as a quadratic in s = sqrt(T)
        beta = D * b + b * b * G
        disc = np.sqrt(np.maximum(beta * beta - (D * b) ** 2, 0.0))
        return (beta - disc) / D, (beta + disc) / D

    def _premise_window(self, a, b, s_lo, s_hi, G):
        radius = np.sqrt(2 * b * b * s_hi * G)
        lo = np.maximum((s_lo * a - radius) / b, 0.0)
        hi = (s_hi * a + radius) / b
        B = self.starts
        i = np.searchsorted(B, np.floor(lo * lo) - 1, side="left")
        j = np.searchsorted(B, np.ceil(hi * hi) + 1, side="right")
        return i, np.maximum(j, i)

    def run(self) -> list[LowerBound]:
        N, lf, tol = self.N, self.lf, self.params.tolerance
        B = self.starts
        if len(B) == 0:
            return []
        a1, a2, b, D = self._triples()
        if len(b) == 0:
            return []
        bf, Df = b.astype(float), D.astype(float)

        s_lo, s_hi = self._t_window(bf, Df, self.gap_suffix[D + 2])
        t_lo = np.maximum(D + 2, np.floor(s_lo * s_lo).astype(np.int64) - 1)
        t_hi = np.minimum(N, np.ceil(s_hi * s_hi).astype(np.int64) + 1)
        live = t_lo <= t_hi
        a1, a2, b, D, bf, Df = a1[live], a2[live], b[live], D[live], bf[live], Df[live]
        t_lo, t_hi = t_lo[live], t_hi[live]

        G = self._range_max(t_lo, t_hi)
        s_lo, s_hi = self._t_window(bf, Df, G)
        t_lo = np.maximum(t_lo, np.floor(s_lo * s_lo).astype(np.int64) - 1)
        t_hi = np.minimum(t_hi, np.ceil(s_hi * s_hi).astype(np.int64) + 1)
        s_lo, s_hi = np.sqrt(np.minimum(t_lo, t_hi)), np.sqrt(t_hi)

        i1, j1 = self._premise_window(a1, bf, s_lo, s_hi, G)
        i2, j2 = self._premise_window(a2, bf, s_lo, s_hi, G)
        count = (j1 - i1) * (t_lo <= t_hi) * (j2 > i2)
        row = np.repeat(np.arange(len(count)), count)
        P = B[i1[row] + _ramp(count)]
        if len(P) == 0:
            return []
        # q must land T = D + p + q inside [t_lo, t_hi]
        q_lo = np.searchsorted(B, t_lo[row] - D[row] - P, side="left")
        q_hi = np.searchsorted(B, t_hi[row] - D[row] - P, side="right")
        q_lo, q_hi = np.maximum(q_lo, i2[row]), np.minimum(q_hi, j2[row])
        parts = []
        if self.fresh is None:
            parts.append((row, P, B, q_lo, q_hi))
        else:
            hot = self.fresh[P]
            parts.append((row[hot], P[hot], B, q_lo[hot], q_hi[hot]))
            # stale p: only fresh q can give anything new
            cold = ~hot
            FB = B[self.fresh[B]]
            lo_v, hi_v = q_lo[cold], q_hi[cold]
            nonempty = hi_v > lo_v
            f_lo = np.searchsorted(FB, B[np.minimum(lo_v, len(B) - 1)], side="left")
            f_hi = np.searchsorted(FB, B[np.maximum(hi_v - 1, 0)], side="right")
            f_hi = np.where(nonempty, np.maximum(f_hi, f_lo), f_lo)
            parts.append((row[cold], P[cold], FB, f_lo, f_hi))
        rows, Ps, Qs = [], [], []
        for r, p, src, lo, hi in parts:
            n_q = np.maximum(hi - lo, 0)
            rows.append(np.repeat(r, n_q))
            Ps.append(np.repeat(p, n_q))
            Qs.append(src[np.repeat(lo, n_q) + _ramp(n_q)])
        row, P, Q = np.concatenate(rows), np.concatenate(Ps), np.concatenate(Qs)
        T = D[row] + P + Q
        fv = (a1[row] * lf[P] + a2[row] * lf[Q] + D[row]) / b[row]
        ok = fv >= lf[T] - tol
        row, P, Q, T, fv = row[ok], P[ok], Q[ok], T[ok], fv[ok]
        if len(T) == 0:
            return []

        top = np.full(N + 1, -np.inf)
        np.maximum.at(top, T, fv)
        ok = fv >= top[T] - tol
        hits = np.stack([a1[row], a2[row], b[row], P, Q, T])[:, ok]
        order = np.lexsort(hits[4::-1])  # by (a1, a2, b, n1, n2)
        return self._settle(hits[:, order].T.tolist())

    def _settle(self, hits) -> list[LowerBound]:
        """Exact pass over (a1, a2, b, n1, n2, target) tuples.

        Tuples arrive sorted by parameters, so among candidates of equal
        value and trace the first one seen is kept.
        """
        lower = self.ledger.lower
        best: dict[int, tuple] = {}
        for a1, a2, b, n1, n2, target in hits:
            l1, l2 = lower[n1], lower[n2]
            v1, v2 = l1.value, l2.value
            d1, d2 = v1.denominator, v2.denominator
            D = b * b - a1 * a1 - a2 * a2
            num = a1 * v1.numerator * d2 + a2 * v2.numerator * d1 + D * d1 * d2
            den = b * d1 * d2
            trace = 1 + l1.trace + l2.trace
            held = best.get(target)
            if held is None:
                cur = lower.get(target)
                if cur is not None and num * cur.value.denominator <= cur.value.numerator * den:
                    continue
            else:
                lhs, rhs = num * held[1], held[0] * den
                if lhs < rhs or (lhs == rhs and trace >= held[2]):
                    continue
            best[target] = (num, den, trace, (a1, a2, b, n1, n2))
        return [
            LowerBound(t, Fraction(num, den), Combine(*params), trace)
            for t, (num, den, trace, params) in sorted(best.items())
        ]


def propagate(
    max_n: int,
    rules: Iterable[str] = DEFAULT_RULES,
    params: PropagateParams | None = None,
    witnesses: Iterable[Packing] = (),
    initial: Ledger | None = None,
) -> Ledger:
    """Close the ledger for 1..max_n under the selected rules.

    ``rules`` is a subset of {"grid", "halasz", "monotone", "combine"}.
    Combine applications use ``b <= params.b_cap`` and only ever replace an
    entry with a strictly larger value.  Starting from ``initial`` (e.g. a
    previous result) is allowed; a closed ledger comes back unchanged.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    rules = frozenset(rules)
    unknown = rules - DEFAULT_RULES
    if unknown:
        raise ValueError(f"unknown rules: {sorted(unknown)}")
    params = params or PropagateParams()

    ledger = Ledger(max_n)
    if initial is not None:
        for n, lbd in initial.lower.items():
            if n <= max_n:
                ledger.lower[n] = lbd

    if "grid" in rules:
        for m in range(1, isqrt(max_n) + 1):
            ledger.offer(lb_grid(m * m))
    if "halasz" in rules:
        k = 1
        while k * k + 3 <= max_n:
            for c in range(1, min(k, (max_n - k * k - 1) // 2) + 1):
                ledger.offer(lb_halasz(k, c))
            k += 1
    for packing in witnesses:
        ledger.offer(lb_witness(packing))

    fresh: np.ndarray | None = None
    for _ in range(params.max_rounds):
        before = {n: lbd.value for n, lbd in ledger.lower.items()}
        if "monotone" in rules:
            _monotone_sweep(ledger)
        if "combine" not in rules:
            break
        if "monotone" in rules:
            starts = _plateau_starts(ledger)
        else:
            starts = np.array(sorted(ledger.lower), dtype=np.int64)
        found = _CombineRound(ledger, params, starts, fresh).run()
        for cand in found:
            ledger.lower[cand.n] = cand
        if "monotone" in rules:
            _monotone_sweep(ledger)
        changed = [
            n for n, lbd in ledger.lower.items() if before.get(n) != lbd.value
        ]
        if not found:
            break
        fresh = np.array(sorted(changed), dtype=np.int64)
    else:
        raise RuntimeError(f"no fixpoint after {params.max_rounds} rounds")
    return ledger


def epsilon_interval(ledger: Ledger, k: int) -> EpsilonInterval:
    n = k * k + 1
    if k < 1 or n > ledger.max_n:
        raise ValueError(f"k={k} needs n={n} within the ledger (max_n={ledger.max_n})")
    lbd = ledger.lower.get(n)
    lb = max(Fraction(0), lbd.value - k) if lbd is not None else Fraction(0)
    return EpsilonInterval(k, lb)


# ---------------------------------------------------------------------------
# theorem instantiations


@dataclass(frozen=True)
class ConditionalBound:
    """``f(k^2+1) <= bound`` under the hypothesis f(n^2+1) = n.

    The corner-substitution inequality is applied with blocks a1 = a2 = k
    in the n-grid, filled with k^2+1 and k^2 squares.  The intermediate
    quantities are kept for inspection.
    """

    k: int
    n: int
    target_index: int
    lemma_constant: Fraction
    known_term: Fraction
    bound_times_k: Fraction
    bound: Fraction
    conditional: bool = True

    @property
    def hypothesis(self) -> str:
        return f"f({self.n}^2+1) = {self.n}"

    @property
    def conclusion(self) -> str:
        return f"f({self.k * self.k + 1}) <= {self.bound}"

    def __str__(self) -> str:
        return f"if {self.hypothesis} then {self.conclusion}"


def theorem1_implication(k: int, n: int) -> ConditionalBound:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < 2 * k:
        raise ValueError(f"need n >= 2k, got n={n}, k={k}")
    target, _ = lemma_rhs(k * k + 1, 0, k * k, 0, k, k, n)
    if target != n * n + 1:
        raise ArithmeticError(f"index {target} does not cancel to {n * n + 1}")
    # k f(k^2+1) + k f(k^2) <= k^2 + k^2 - n^2 + n f(n^2+1), with f(n^2+1) = n
    lemma_constant = Fraction(2 * k * k - n * n + n * n)
    known_term = Fraction(k * k)  # k f(k^2) = k * k
    bound_times_k = lemma_constant - known_term
    return ConditionalBound(
        k=k,
        n=n,
        target_index=target,
        lemma_constant=lemma_constant,
        known_term=known_term,
        bound_times_k=bound_times_k,
        bound=bound_times_k / k,
    )


@dataclass(frozen=True)
class Theorem2Chain:
    """Every exact quantity in the what-if bound on eps(k).

    Hypothesis: f(N^2+1) = N + alpha with alpha > 0.  The corner-substitution
    inequality is applied with a1 = a, a2 = N, grid size b = k - 1, filled
    with a^2+2b+1 and N^2+1 squares; the first filling uses the Halasz bound
    f(a^2+2b+1) >= a + b/a.  ``halasz_in_range`` is False when b > a, where
    that bound exceeds sqrt(a^2+2b+1) and so cannot hold for f.
    """

    N: int
    alpha: Fraction
    a: int
    k: int
    b: int
    n1: int
    n2: int
    target_index: int
    lhs_lower: Fraction
    rhs_constant: Fraction
    rhs_eps_coeff: int
    eps_lower: Fraction
    halasz_in_range: bool
    conditional: bool = True

    def holds_for(self, eps) -> bool:
        """Whether a value of eps(k) satisfies lhs_lower <= rhs."""
        return self.lhs_lower <= self.rhs_constant + self.rhs_eps_coeff * as_fraction(eps)


def theorem2_chain(N: int, alpha, a: int, k: int) -> Theorem2Chain:
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if N < 1 or a < 1:
        raise ValueError("N and a must be positive")
    if k < a + N + 1:
        raise ValueError(f"need k >= a + N + 1 = {a + N + 1}, got {k}")
    b = k - 1
    n1 = a * a + 2 * b + 1
    n2 = N * N + 1
    target, _ = lemma_rhs(n1, 0, n2, 0, a, N, b)
    if target != (b + 1) ** 2 + 1:
        raise ArithmeticError(f"index {target} is not (b+1)^2+1")
    halasz_value = a + Fraction(b, a)
    lhs_lower = a * halasz_value + N * (N + alpha)
    # a^2 + N^2 - b^2 + b * f((b+1)^2+1), f((b+1)^2+1) = b + 1 + eps
    rhs_constant = Fraction(a * a + N * N - b * b + b * (b + 1))
    eps_lower = (lhs_lower - rhs_constant) / b
    return Theorem2Chain(
        N=N,
        alpha=alpha,
        a=a,
        k=k,
        b=b,
        n1=n1,
        n2=n2,
        target_index=target,
        lhs_lower=lhs_lower,
        rhs_constant=rhs_constant,
        rhs_eps_coeff=b,
        eps_lower=eps_lower,
        halasz_in_range=b <= a,
    )


def theorem2_epsilon_rule(N: int, alpha, a: int, k: int) -> Fraction:
    """Conditional lower bound N*alpha/(k-1) on eps(k)."""
    return theorem2_chain(N, alpha, a, k).eps_lower


def divergence_partial_sum(c, k0: int, K: int) -> float:
    """sum_{k=k0}^{K} c/k, correctly rounded via math.fsum."""
    if k0 < 1 or K < k0:
        raise ValueError(f"need 1 <= k0 <= K, got k0={k0}, K={K}")
    c = float(as_fraction(c))
    return math.fsum(c / k for k in range(k0, K + 1))
