"""Benchmark sample statistics and Welch's two-sample t-test.

The Student-t tail probability is computed in-repo from the regularized
incomplete beta function (Lentz continued fraction), so significance
reporting has no statistics-library dependency. Absolute p accuracy is
comfortably below 1e-10 for the degrees of freedom a benchmark produces.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

DEFAULT_ALPHA = 0.05

_MAX_ITER = 400
_EPS = 1e-16
_TINY = 1e-300


@dataclass(frozen=True)
class StatSummary:
    n: int
    mean: float
    std: float
    #: False when only one sample exists and std is reported as 0.
    std_defined: bool = True


@dataclass(frozen=True)
class WelchResult:
    t: float
    df: float
    p: float
    significant: bool
    alpha: float = DEFAULT_ALPHA


def _values(samples) -> list[float]:
    out = []
    for s in samples:
        out.append(float(getattr(s, "seconds", s)))
    return out


def summarize(samples: Sequence) -> StatSummary:
    """Mean and sample (n-1) standard deviation.

    Accepts TimingSample objects or bare numbers. A single sample yields
    std 0 with ``std_defined`` False; empty input is a domain error.
    """
    xs = _values(samples)
    n = len(xs)
    if n == 0:
        raise ValueError("cannot summarize zero samples")
    mean = math.fsum(xs) / n
    if n == 1:
        return StatSummary(1, mean, 0.0, std_defined=False)
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return StatSummary(n, mean, math.sqrt(var), std_defined=True)


def _beta_cont_fraction(a: float, b: float, x: float) -> float:
    """Lentz's algorithm for the incomplete beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_fraction(a, b, x) / a
    return 1.0 - front * _beta_cont_fraction(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df <= 0.0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return betainc_regularized(df / 2.0, 0.5, df / (df + t * t))


def welch_t_test(a: Sequence[float], b: Sequence[float],
                 alpha: float = DEFAULT_ALPHA) -> WelchResult:
    """Two-sided Welch's t-test (unequal variances).

    t = (m1 - m2) / sqrt(s1^2/n1 + s2^2/n2), degrees of freedom by
    Welch-Satterthwaite, p from the Student-t distribution. Two constant,
    equal samples give t = 0, p = 1 by convention; constant samples with
    different means are reported as infinitely significant.
    """
    xs = _values(a)
    ys = _values(b)
    n1, n2 = len(xs), len(ys)
    if n1 < 2 or n2 < 2:
        raise ValueError("welch_t_test needs at least 2 samples per side")
    m1 = math.fsum(xs) / n1
    m2 = math.fsum(ys) / n2
    v1 = math.fsum((x - m1) ** 2 for x in xs) / (n1 - 1)
    v2 = math.fsum((y - m2) ** 2 for y in ys) / (n2 - 1)
    se1 = v1 / n1
    se2 = v2 / n2
    pooled = se1 + se2
    if pooled == 0.0:
        t = 0.0 if m1 == m2 else math.copysign(math.inf, m1 - m2)
        df = float(n1 + n2 - 2)
        p = 1.0 if t == 0.0 else 0.0
        return WelchResult(t, df, p, significant=p < alpha, alpha=alpha)
    t = (m1 - m2) / math.sqrt(pooled)
    df = pooled * pooled / (se1 * se1 / (n1 - 1) + se2 * se2 / (n2 - 1))
    p = student_t_two_sided_p(t, df)
    return WelchResult(t, df, p, significant=p < alpha, alpha=alpha)
