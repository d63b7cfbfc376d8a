"""Empirical growth experiments around Pell-type equations.

The interesting constants in this area are provably existent but not
computable, so the experiments report exact integers plus measured
slopes: minimal solutions of |X**2 - D*Y**2| < C along a family D = f(n),
exact denominators of f(n)/b**n, and partial-quotient profiles of
sqrt(f(n)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import PowerSumForm, classify, eval_exact, eval_int
from .surd import (
    DEFAULT_DIGIT_BUDGET,
    PellSolution,
    is_perfect_square,
    isqrt,
    pell_value_stream,
)
from .expansion import HypothesisReport, decide_hypothesis


def _digit_budget_bits(digit_budget: int) -> int:
    return int(digit_budget * math.log2(10)) + 1


@dataclass(frozen=True)
class PellQuery:
    """Search box for |X**2 - D*Y**2| < C with Y bounded.

    ``y_limit`` of None means "bounded by the digit budget".  The scan is
    complete (provably finds every solution) only when C <= sqrt(D); for
    larger C the result still comes back but flagged incomplete.
    """

    D: int
    C: int
    y_limit: int | None = None
    digit_budget: int = DEFAULT_DIGIT_BUDGET

    def __post_init__(self) -> None:
        if self.C < 1:
            raise ValueError("C must be a positive integer")
        if self.y_limit is not None and self.y_limit < 1:
            raise ValueError("y_limit must be positive")

    @property
    def complete(self) -> bool:
        return self.C * self.C <= self.D


@dataclass(frozen=True)
class PellScan:
    query: PellQuery
    solutions: tuple[PellSolution, ...]
    complete: bool


def bounded_pell_solutions(query: PellQuery) -> PellScan:
    """All (X, Y) with |X**2 - D*Y**2| < C and Y within the search box.

    Solutions in lowest terms are convergents of sqrt(D) (classical, for
    C <= sqrt(D)); non-coprime solutions are integer multiples g*(p, q)
    of convergents with g**2 * |value| < C, so both kinds are emitted.
    Sorted by Y ascending.  Every returned solution is re-verified
    against its defining equation.
    """
    D, C = query.D, query.C
    y_max = query.y_limit
    bits_cap = _digit_budget_bits(query.digit_budget)

    def past_cap(y: int) -> bool:
        return (y_max is not None and y > y_max) or y.bit_length() > bits_cap

    out: list[PellSolution] = []
    for _, p, q, value in pell_value_stream(D):
        if past_cap(q):
            break
        g = 1
        while g * g * abs(value) <= C - 1 and not past_cap(g * q):
            X, Y, v = g * p, g * q, g * g * value
            if X * X - D * Y * Y != v:
                raise AssertionError("pell value identity violated")
            out.append(PellSolution(X, Y, v))
            g += 1
    out.sort(key=lambda s: s.Y)
    return PellScan(query, tuple(out), query.complete)


def brute_force_pell(D: int, C: int, y_limit: int) -> list[PellSolution]:
    """Independent oracle: direct enumeration over 1 <= Y <= y_limit."""
    out = []
    for Y in range(1, y_limit + 1):
        target = D * Y * Y
        lo = isqrt(max(target - C, 0))
        hi = isqrt(target + C) + 1
        for X in range(max(lo, 1), hi + 1):
            v = X * X - target
            if abs(v) < C:
                out.append(PellSolution(X, Y, v))
    out.sort(key=lambda s: (s.Y, s.X))
    return out


@dataclass(frozen=True)
class GrowthRecord:
    """One measured point: a log statistic backed by exact integers."""

    n: int
    statistic: float
    metadata: dict[str, int] = field(default_factory=dict)
    flagged: bool = False


def least_squares_slope(points: list[tuple[int, float]]) -> float | None:
    if len(points) < 2:
        return None
    xbar = sum(x for x, _ in points) / len(points)
    ybar = sum(y for _, y in points) / len(points)
    den = sum((x - xbar) ** 2 for x, _ in points)
    if den == 0:
        return None
    return sum((x - xbar) * (y - ybar) for x, y in points) / den


@dataclass(frozen=True)
class MinSolutionGrowth:
    records: tuple[GrowthRecord, ...]
    skipped: tuple[tuple[int, str], ...]
    slope: float | None
    hypothesis: HypothesisReport | None


def min_solution_growth(
    f: PowerSumForm,
    C: int,
    n_range: range,
    y_limit: int | None = None,
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
    check_hypothesis: bool = True,
) -> MinSolutionGrowth:
    """Least Y with |X**2 - f(n)*Y**2| < C, for each n in the range.

    Values of n where f(n) is a perfect square are skipped with a note
    (the square root is rational there, so there is nothing to measure).
    The least-squares slope of log(Y_min) over n is the empirical growth
    rate.  When the square-decomposition hypothesis fails for ``f`` the
    records are still reported; the attached report carries the flag.
    """
    report = decide_hypothesis(f) if check_hypothesis else None
    bits_cap = _digit_budget_bits(digit_budget)
    records: list[GrowthRecord] = []
    skipped: list[tuple[int, str]] = []
    for n in n_range:
        try:
            D = eval_int(f, n)
        except ValueError:
            skipped.append((n, "non-integer"))
            continue
        if D <= 0:
            skipped.append((n, "non-positive"))
            continue
        if is_perfect_square(D):
            skipped.append((n, "square"))
            continue
        best: PellSolution | None = None
        for _, p, q, value in pell_value_stream(D):
            if (y_limit is not None and q > y_limit) or q.bit_length() > bits_cap:
                break
            if abs(value) <= C - 1:
                # The least Y overall: multiples of earlier convergents
                # scale the value by g**2 >= 4, so the first convergent
                # hit really is minimal.
                if p * p - D * q * q != value:
                    raise AssertionError("pell value identity violated")
                best = PellSolution(p, q, value)
                break
        if best is None:
            skipped.append((n, "cap"))
            continue
        records.append(
            GrowthRecord(
                n,
                math.log(best.Y),
                {"D": D, "X": best.X, "Y": best.Y, "value": best.value},
            )
        )
    slope = least_squares_slope([(rec.n, rec.statistic) for rec in records])
    return MinSolutionGrowth(tuple(records), tuple(skipped), slope, report)


def denominator_growth(
    f: PowerSumForm, b: int, n_range: range
) -> list[GrowthRecord]:
    """Exact denominator of f(n)/b**n per n, in lowest terms.

    A record is flagged when the denominator is below exp(n*ln(2)/2);
    the comparison is done as ``denominator**2 < 2**n``, which is exact.
    Unless b divides every base of f, only finitely many n are flagged.
    """
    if not isinstance(b, int) or b < 2:
        raise ValueError(f"invalid b={b}: need an integer >= 2")
    if not classify(f).integral_coefficients:
        raise ValueError("denominator growth requires integer coefficients and bases")
    out = []
    for n in n_range:
        den = (eval_exact(f, n) / Fraction(b) ** n).denominator
        out.append(
            GrowthRecord(
                n,
                math.log(den),
                {"denominator": den},
                flagged=den * den < 2**n,
            )
        )
    return out


@dataclass(frozen=True)
class PartialQuotientProfile:
    """Observational profile of the first convergents of sqrt(f(n)).

    ``max_partial_quotient`` is the largest partial quotient consumed
    while convergent denominators stayed below exp(c*n);
    ``effective_exponents`` are the measured values of
    log(1/|sqrt(D) - p/q|)/log(q) over that prefix.
    """

    n: int
    D: int
    prefix_length: int
    max_partial_quotient: int
    effective_exponents: tuple[float, ...]


def partial_quotient_profile(
    f: PowerSumForm, n: int, c: float, max_steps: int = 10**6
) -> PartialQuotientProfile | None:
    """Profile sqrt(f(n)) while convergent denominators stay below exp(c*n).

    Returns None when f(n) is a perfect square (skipped).  Purely
    observational: the exponents are floats derived from exact integers,
    with |sqrt(D) - p/q| = |p**2 - D*q**2| / (q*(sqrt(D)*q + p)).
    """
    if not c > 0:
        raise ValueError(f"invalid c={c}: must be positive")
    D = eval_int(f, n)
    if D <= 0:
        raise ValueError(f"f({n}) = {D} is not positive")
    if is_perfect_square(D):
        return None
    bound = c * n
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    pm1, qm1 = 1, 0
    p, q = a0, 1
    steps = 0
    max_a = 0
    exponents: list[float] = []
    while steps < max_steps and math.log(q) < bound:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        max_a = max(max_a, a)
        if q > 1:
            err_log = math.log(d) - math.log(q) - math.log(a0 * q + p)
            exponents.append(-err_log / math.log(q))
        p, pm1 = a * p + pm1, p
        q, qm1 = a * q + qm1, q
        steps += 1
    return PartialQuotientProfile(n, D, steps, max_a, tuple(exponents))
