"""Formal square roots of power-sum forms.

Two closely related procedures live here.

``sqrt_approximation`` truncates the binomial series of
``sqrt(a1*b1**n*(1 + tail(n)))`` to the finitely many terms that decay
slower than the guaranteed error rate ``(sqrt(b1)*beta)**-n`` (``beta``
the ratio of the two largest bases), producing an approximation
``sqrt(a1) * f1(n) / b1**((k - 1/2)*n)`` with ``f1`` an exact form with
integer bases.  The irrational scale is never materialized: everything
is certified through its square or through interval arithmetic.

``decide_hypothesis`` asks whether some parity ``j`` admits an exact
decomposition ``f(2n+j) = h(n)**2 + g(n)`` with ``h`` a form with
rational coefficients and integer bases and ``g`` growing slower than
``sqrt(f)``; it extracts the candidate ``h`` (the part of the formal
square root with bases >= 1) exactly and checks the remainder
structurally, so the verdict needs no floating point at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .forms import (
    PowerSumForm,
    ZERO,
    add,
    classify,
    compose_affine,
    dominant,
    dominant_ratio,
    eval_exact,
    monomial,
    mul,
    normalize,
    relative_tail,
    scale,
)
from .intervals import Interval, sqrt_interval
from .surd import ResourceLimitError

HOLDS = "holds"
FAILS = "fails"
HOLDS_TRIVIALLY = "holds-by-trivial-criterion"


def sqrt_rational(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    sp, sq = math.isqrt(p), math.isqrt(q)
    if sp * sp == p and sq * sq == q:
        return Fraction(sp, sq)
    return None


def is_square_rational(x: Fraction) -> bool:
    return sqrt_rational(x) is not None


def _floor_log_ratio(x: Fraction, base: Fraction) -> int:
    """Largest t >= 0 with base**t <= x, by exact comparison."""
    if base <= 1 or x < 1:
        raise ValueError("requires base > 1 and x >= 1")
    t, power = 0, Fraction(1)
    while power * base <= x:
        power *= base
        t += 1
    return t


def _prune(f: PowerSumForm, threshold: Fraction, keep_equal: bool) -> PowerSumForm:
    if keep_equal:
        kept = tuple(t for t in f.terms if t[1] >= threshold)
    else:
        kept = tuple(t for t in f.terms if t[1] > threshold)
    return PowerSumForm(kept)


def _binomial_sqrt_series(
    tail: PowerSumForm, limit: int, threshold: Fraction, keep_equal: bool
) -> PowerSumForm:
    """Sum_{i<=limit} C(1/2, i) * tail**i, pruned below ``threshold``.

    Pruning mid-product is sound: tail bases are < 1, so a dropped term
    can only ever produce bases at or below where it was dropped.
    """
    acc = normalize([(1, 1)])
    power = acc
    coef = Fraction(1)
    for i in range(1, limit + 1):
        coef *= (Fraction(1, 2) - (i - 1)) / i
        power = _prune(mul(power, tail), threshold, keep_equal)
        if power.is_zero:
            break
        acc = add(acc, scale(power, coef))
    return _prune(acc, threshold, keep_equal)


@dataclass(frozen=True)
class SqrtApprox:
    """Truncated square-root expansion of a power-sum form.

    The approximation of ``sqrt(source(n))`` is
    ``sqrt(lead_coefficient) * series_form(n) / lead_base**((depth-1/2)*n)``.
    ``series_form`` is the zero form for single-term sources (the root is
    then exactly ``sqrt(lead_coefficient * lead_base**n)``), and
    ``error_base`` is None in that case; otherwise the error at ``n`` is
    O(``error_base**-n``).
    """

    source: PowerSumForm
    lead_coefficient: Fraction
    series_form: PowerSumForm
    depth: int
    error_base: Fraction | None

    @property
    def lead_base(self) -> Fraction:
        return dominant(self.source)[1]

    @property
    def is_single_term(self) -> bool:
        return self.series_form.is_zero


def sqrt_approximation(
    f: PowerSumForm, j: int, depth_cap: int = 256
) -> SqrtApprox:
    """Build the truncated expansion of ``sqrt(f(2n+j))``.

    When ``j == 0`` and the leading base is already a perfect square the
    form is expanded in its own variable (composing would only square
    every scale); otherwise the form is composed with ``2n+j`` first so
    that the leading base becomes a square.
    """
    if j not in (0, 1):
        raise ValueError(f"invalid argument j={j}: must be 0 or 1")
    if f.is_zero:
        raise ValueError("cannot expand the zero form")
    if not classify(f).integral_bases:
        raise ValueError("square-root expansion requires integer bases")
    a1, b1 = dominant(f)
    if a1 <= 0:
        raise ValueError("leading coefficient must be positive")
    if j == 0 and is_square_rational(b1):
        source = f
    else:
        source = compose_affine(f, j)
    lead, base = dominant(source)
    root_base = sqrt_rational(base)
    if root_base is None:
        raise AssertionError("composed leading base must be a square")

    if len(source) == 1:
        return SqrtApprox(source, lead, ZERO, 1, None)

    ratio = dominant_ratio(source)
    depth = _floor_log_ratio(base, ratio) + 1
    if depth > depth_cap:
        raise ResourceLimitError(
            f"series depth {depth} exceeds cap {depth_cap} (base ratio too close to 1)"
        )
    threshold = 1 / (base * ratio)
    series = _binomial_sqrt_series(
        relative_tail(source), depth, threshold, keep_equal=False
    )
    scale_base = base**depth
    f1 = normalize([(c, u * scale_base) for c, u in series.terms])
    if dominant(f1)[1] != scale_base:
        raise AssertionError("series form lost its leading term")
    if classify(source).integral_bases and not classify(f1).integral_bases:
        raise AssertionError("series form must have integer bases")
    return SqrtApprox(source, lead, f1, depth, root_base * ratio)


def algebraic_residual(approx: SqrtApprox) -> PowerSumForm:
    """Exact defect ``lead_base**((2k-1)n) * source - lead * series**2``.

    Its dominant base is strictly below ``lead_base**(2k-1) * lead_base``,
    which is the exact-form counterpart of the squared error bound.
    """
    base = approx.lead_base
    k = approx.depth
    lhs = mul(monomial(1, base ** (2 * k - 1)), approx.source)
    rhs = scale(mul(approx.series_form, approx.series_form), approx.lead_coefficient)
    return add(lhs, scale(rhs, -1))


def approx_value_interval(approx: SqrtApprox, n: int, bits: int) -> Interval:
    """Certified enclosure of the approximation's value at ``n``."""
    lead, base = approx.lead_coefficient, approx.lead_base
    root = sqrt_interval(lead * base**n, bits)
    if approx.is_single_term:
        return root
    factor = eval_exact(approx.series_form, n) / base ** (approx.depth * n)
    return root.scale(factor)


def error_interval(approx: SqrtApprox, n: int, bits: int | None = None) -> Interval:
    """Certified enclosure of ``|sqrt(source(n)) - approximation(n)|``.

    For single-term sources the representation is exact, so the error is
    the zero interval.
    """
    if approx.is_single_term:
        return Interval(Fraction(0), Fraction(0))
    if bits is None:
        rate = float(approx.error_base) if approx.error_base else 2.0
        bits = max(96, int(n * math.log2(rate)) + 96)
    value = eval_exact(approx.source, n)
    if value < 0:
        raise ValueError(f"source({n}) = {value} is negative")
    return abs(sqrt_interval(value, bits) - approx_value_interval(approx, n, bits))


def error_table(
    approx: SqrtApprox, n_range: range
) -> list[tuple[int, Interval, Interval | None]]:
    """Rows ``(n, certified error, certified decay from previous n)``."""
    rows: list[tuple[int, Interval, Interval | None]] = []
    prev: Interval | None = None
    for n in n_range:
        err = error_interval(approx, n)
        decay = prev / err if prev is not None and err.lo > 0 else None
        rows.append((n, err, decay))
        prev = err
    return rows


# ---------------------------------------------------------------------------
# Square-decomposition hypothesis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisWitness:
    """An exact decomposition ``f(2n + parity) = root(n)**2 + remainder(n)``.

    ``remainder_exponent`` is the growth exponent of the remainder
    relative to the composed form (-inf for a zero remainder); a witness
    is only emitted when it is strictly below 1/2.
    """

    parity: int
    root: PowerSumForm
    remainder: PowerSumForm
    remainder_exponent: Fraction | float


@dataclass(frozen=True)
class HypothesisReport:
    verdict: str
    witnesses: tuple[HypothesisWitness, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict != FAILS


def trivial_criterion(f: PowerSumForm) -> bool:
    """Quick sufficient test: True when the hypothesis certainly holds.

    If neither the leading coefficient nor its product with the leading
    base is a rational square, no decomposition can even start (the
    formal root's first coefficient is irrational for both parities).
    """
    a1, b1 = dominant(f)
    if a1 <= 0:
        raise ValueError("leading coefficient must be positive")
    return not is_square_rational(a1) and not is_square_rational(a1 * b1)


def _extract_root(F: PowerSumForm) -> PowerSumForm | None:
    """Terms of the formal square root of ``F`` with base >= 1, or None.

    None means no candidate exists for this parity: either the leading
    coefficient of the root is irrational, or a kept term has a
    non-integer base (the root then falls outside the integral-base
    ring).
    """
    lead, base = dominant(F)
    root_lead = sqrt_rational(lead)
    if root_lead is None:
        return None
    root_base = sqrt_rational(base)
    if root_base is None:
        return None
    if len(F) == 1:
        series = normalize([(1, 1)])
    else:
        ratio = dominant_ratio(F)
        limit = _floor_log_ratio(root_base, ratio)
        series = _binomial_sqrt_series(
            relative_tail(F), limit, 1 / root_base, keep_equal=True
        )
    root = normalize([(root_lead * c, root_base * u) for c, u in series.terms])
    if any(b.denominator != 1 for _, b in root.terms):
        return None
    return root


def decide_hypothesis(f: PowerSumForm) -> HypothesisReport:
    """Decide the square-decomposition hypothesis for ``f`` exactly.

    "Growing slower than sqrt(f)" is read structurally: the remainder's
    dominant base must be strictly below the square root of the composed
    form's leading base.  For forms with a growing leading base this is
    equivalent to the asymptotic growth-exponent condition; for constant
    forms (leading base 1) the asymptotic reading degenerates and the
    structural one is the documented behaviour (only a zero remainder
    counts).

    For each parity the candidate root is unique (any other choice
    changes the remainder by a term growing at least like the root
    itself), so extracting it and checking the remainder's dominant base
    decides the question.
    """
    if dominant(f)[0] <= 0:
        raise ValueError("leading coefficient must be positive")
    if not classify(f).integral_bases:
        raise ValueError("hypothesis decision requires integer bases")

    witnesses: list[HypothesisWitness] = []
    warnings: list[str] = []
    for j in (0, 1):
        F = compose_affine(f, j)
        root = _extract_root(F)
        if root is None:
            continue
        remainder = add(F, scale(mul(root, root), -1))
        if remainder.is_zero:
            witnesses.append(
                HypothesisWitness(j, root, remainder, float("-inf"))
            )
            continue
        bound = sqrt_rational(dominant(F)[1])
        rem_base = dominant(remainder)[1]
        if rem_base < bound:
            witnesses.append(
                HypothesisWitness(j, root, remainder, growth_exponent(remainder, F))
            )
        elif rem_base == bound:
            # Exact tie at exponent 1/2: not a witness, but flag it
            # rather than silently calling the hypothesis satisfied.
            warnings.append(
                f"j={j}: remainder sits exactly at the 1/2 growth boundary"
            )

    if witnesses:
        return HypothesisReport(FAILS, tuple(witnesses), tuple(warnings))
    if trivial_criterion(f):
        return HypothesisReport(HOLDS_TRIVIALLY, (), tuple(warnings))
    return HypothesisReport(HOLDS, (), tuple(warnings))


# ---------------------------------------------------------------------------
# Growth exponents
# ---------------------------------------------------------------------------


def _factor(n: int, cap: int = 10**12) -> dict[int, int] | None:
    """Trial-division factorization; None when ``n`` exceeds the cap."""
    if n > cap:
        return None
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exponent_vector(x: Fraction) -> dict[int, int] | None:
    num = _factor(x.numerator)
    den = _factor(x.denominator)
    if num is None or den is None:
        return None
    for p, e in den.items():
        num[p] = num.get(p, 0) - e
    return {p: e for p, e in num.items() if e != 0}


def _log_ratio(u: Fraction, v: Fraction) -> Fraction | float:
    """log(u)/log(v) as an exact Fraction when multiplicatively dependent,
    else a float."""
    if u == 1:
        return Fraction(0)
    eu, ev = _exponent_vector(u), _exponent_vector(v)
    if eu is not None and ev is not None and ev:
        p0, e0 = next(iter(ev.items()))
        r = Fraction(eu.get(p0, 0), e0)
        if set(eu) <= set(ev) and all(eu.get(p, 0) == r * e for p, e in ev.items()):
            return r
    return math.log(u) / math.log(v)


def growth_exponent(
    g: PowerSumForm,
    f: PowerSumForm,
    n_range: range | None = None,
    tolerance: float = 0.1,
) -> Fraction | float:
    """Growth exponent of ``g`` relative to ``f``: log of dominant bases.

    Exact (a Fraction) when the two bases are multiplicatively
    dependent, a float otherwise; -inf for the zero form.  When
    ``n_range`` is given the structural value is cross-checked against
    the measured slope ``log|g(n)| / log f(n)`` at the top of the range.
    """
    if g.is_zero:
        return float("-inf")
    v = dominant(f)[1]
    if v <= 1:
        raise ValueError("reference form must have dominant base > 1")
    u = dominant(g)[1]
    exact = _log_ratio(u, v)
    if n_range is not None:
        n = max(n_range)
        gval, fval = abs(eval_exact(g, n)), abs(eval_exact(f, n))
        if gval > 0 and fval > 1:
            measured = math.log(gval) / math.log(fval)
            if abs(measured - float(exact)) > tolerance:
                raise ValueError(
                    f"measured slope {measured:.4f} disagrees with exact "
                    f"exponent {float(exact):.4f} at n={n}"
                )
    return exact
