"""Arbitrary-precision reference for the failure bound.

Terms use mpmath's 50-digit binomials, ratios are exact Fractions, and the
sum is a plain big-float sum, so nothing here shares code with the
double-precision lgamma/logsumexp version. ``log_term_exact`` uses exact
integer binomials and is kept as a cross-check for small n.
"""

from fractions import Fraction
from math import comb

import mpmath

mpmath.mp.dps = 50


def _log_ratio(i, n, delta):
    r = Fraction(3 * i - 2) / (Fraction(delta) * n - 12)
    return mpmath.log(r.numerator) - mpmath.log(r.denominator)


def log_term(i: int, n: int, delta) -> mpmath.mpf:
    return (
        mpmath.log(mpmath.binomial(n, i))
        + mpmath.log(mpmath.binomial(n - i, 2 * i - 1))
        + 6 * i * _log_ratio(i, n, delta)
    )


def log_term_exact(i: int, n: int, delta) -> mpmath.mpf:
    return mpmath.log(comb(n, i)) + mpmath.log(comb(n - i, 2 * i - 1)) + 6 * i * _log_ratio(i, n, delta)


def failure_bound(n: int, delta, k0: int) -> mpmath.mpf:
    return mpmath.log(mpmath.fsum(mpmath.exp(log_term(i, n, delta)) for i in range(5, k0 + 1)))


def g_term(i: int, n: int, delta) -> mpmath.mpf:
    d = Fraction(delta)
    delta = mpmath.mpf(d.numerator) / d.denominator
    base = mpmath.mpf(4) ** 5 * mpmath.e**3 * (mpmath.mpf(i) / n) ** 3 / delta**6
    return i * mpmath.log(base)
