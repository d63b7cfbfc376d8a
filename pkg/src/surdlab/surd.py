"""Streaming continued fractions of sqrt(D) with exact integer arithmetic.

The classical surd recurrence
    m' = d*a - m,   d' = (D - m'*m')/d,   a' = (a0 + m')//d'
runs with O(1) retained state; the division is always exact.  For a
non-square D the expansion is [a0; {a1, ..., a_{r-1}, 2*a0}] and the
period ends at the first step with d == 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

DEFAULT_WORD_CAP = 10**6
DEFAULT_PERIOD_CAP = 10**5
DEFAULT_DIGIT_BUDGET = 10**5


class SquareInputError(ValueError):
    """The input D is a perfect square, so sqrt(D) has no period."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap (period length, digit budget) was hit."""


def isqrt(n: int) -> int:
    """Floor square root: the s with s*s <= n < (s+1)*(s+1)."""
    if n < 0:
        raise ValueError("isqrt of a negative integer")
    return math.isqrt(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


def _check_surd(D: int) -> int:
    if not isinstance(D, int) or isinstance(D, bool):
        raise TypeError("D must be an integer")
    if D <= 0:
        raise ValueError(f"invalid D={D}: must be positive")
    a0 = math.isqrt(D)
    if a0 * a0 == D:
        raise SquareInputError(f"D={D} is a perfect square")
    return a0


@dataclass(frozen=True)
class SurdState:
    """Surd recurrence state at step k: sqrt(D) ~ (m + sqrt(D))/d."""

    D: int
    m: int
    d: int
    a: int
    k: int


@dataclass(frozen=True)
class CFExpansion:
    """Expansion of sqrt(D): a0 plus the periodic word of length r.

    ``period`` is None when the word was elided by a cap; ``r`` is exact
    either way.
    """

    D: int
    a0: int
    period: tuple[int, ...] | None
    r: int


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    j: int


@dataclass(frozen=True)
class PellSolution:
    X: int
    Y: int
    value: int


def cf_stream(D: int) -> Iterator[tuple[int, SurdState]]:
    """Yield partial quotients of sqrt(D) (starting with a0) forever."""
    a0 = _check_surd(D)
    m, d, a, k = 0, 1, a0, 0
    while True:
        yield a, SurdState(D, m, d, a, k)
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        k += 1


def cf_sqrt(D: int, word_cap: int = DEFAULT_WORD_CAP) -> CFExpansion:
    """Expand sqrt(D) and detect the period (first step with d == 1).

    If the period exceeds ``word_cap`` the word is elided but r stays
    exact; that is not an error.
    """
    if word_cap < 1:
        raise ValueError("word_cap must be positive")
    a0 = _check_surd(D)
    m, d, a = 0, 1, a0
    word: list[int] = []
    r = 0
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        r += 1
        if r <= word_cap:
            word.append(a)
        if d == 1:
            break
    return CFExpansion(D, a0, tuple(word) if r <= word_cap else None, r)


def period_length(D: int) -> int:
    """Length r of the period of sqrt(D), with O(1) memory."""
    a0 = _check_surd(D)
    m, d, a = 0, 1, a0
    r = 0
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        r += 1
        if d == 1:
            return r


def period_bound_ratio(D: int, r: int | None = None) -> float:
    """Observed ratio r / (sqrt(D) * ln(D)) for growth reporting."""
    if r is None:
        r = period_length(D)
    return r / (math.sqrt(D) * math.log(D))


def is_palindromic_period(period: tuple[int, ...]) -> bool:
    """True when the word a_1..a_{r-1} before the closing 2*a0 reads both ways."""
    body = period[:-1]
    return body == body[::-1]


def convergents(D: int, count: int) -> list[Convergent]:
    """First ``count`` convergents p_j/q_j of sqrt(D)."""
    if count < 1:
        raise ValueError("count must be positive")
    out: list[Convergent] = []
    stream = cf_stream(D)
    pm1, qm1 = 1, 0
    pm2, qm2 = 0, 1
    for j in range(count):
        a, _ = next(stream)
        p = a * pm1 + pm2
        q = a * qm1 + qm2
        out.append(Convergent(p, q, j))
        pm2, qm2, pm1, qm1 = pm1, qm1, p, q
    return out


def pell_value_stream(D: int) -> Iterator[tuple[int, int, int, int]]:
    """Yield ``(j, p_j, q_j, p_j**2 - D*q_j**2)`` for j = 0, 1, 2, ...

    The value comes from the surd recurrence identity
    ``p_j**2 - D*q_j**2 = (-1)**(j+1) * d_{j+1}``, avoiding a large
    squaring per step.  Callers that return solutions re-verify them
    directly.
    """
    a0 = _check_surd(D)
    m, d, a = 0, 1, a0
    pm1, qm1 = 1, 0
    p, q = a0, 1
    j = 0
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        yield j, p, q, (d if j % 2 else -d)
        p, pm1 = a * p + pm1, p
        q, qm1 = a * q + qm1, q
        j += 1


def fundamental_pell(D: int, period_cap: int = DEFAULT_PERIOD_CAP) -> PellSolution:
    """Minimal solution of |X**2 - D*Y**2| = 1: the convergent at r-1.

    Refuses (``ResourceLimitError``) when the period exceeds
    ``period_cap``, since the solution then has on the order of
    ``period_cap`` digits.
    """
    for j, p, q, value in pell_value_stream(D):
        if abs(value) == 1:
            if p * p - D * q * q != value:
                raise AssertionError("pell value identity violated")
            return PellSolution(p, q, value)
        if j >= period_cap:
            raise ResourceLimitError(
                f"period of sqrt({D}) exceeds cap {period_cap}"
            )
    raise AssertionError("unreachable")
