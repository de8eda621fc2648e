"""Closed-form constants and the expander-failure probability bound, in log domain.

The asymptotic constants blow up at any computable n: epsilon < 1 needs
ln n > 30**4 = 810000, so the bias (1 - epsilon) n / ln n is nonpositive for
every machine-representable n. ``constants`` therefore takes ``ln_n``
directly, which lets the asymptotic regime be probed without forming n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

NEG_INF = float("-inf")

# ln n at which epsilon(n) = 30 / ln(n)^(1/4) drops to exactly 1
EPSILON_ONE_LN_N = 30.0**4


class ParameterDomain(ValueError):
    pass


@dataclass(frozen=True)
class Constants:
    ln_n: float
    delta0: float
    delta: float
    epsilon: float
    k0: float | None = None
    bias: float | None = None


def constants(n: float | None = None, ln_n: float | None = None) -> Constants:
    if ln_n is None:
        if n is None or n <= 1:
            raise ParameterDomain("need n > 1 or a positive ln_n")
        ln_n = math.log(n)
    if ln_n <= 0:
        raise ParameterDomain(f"ln n must be positive, got {ln_n}")
    delta0 = 6.0 / math.sqrt(ln_n)
    root4 = ln_n**0.25
    delta = 15.0 / root4
    epsilon = 30.0 / root4
    k0 = bias = None
    if n is not None:
        k0 = delta0 * n
        bias = (1.0 - epsilon) * n / ln_n
    return Constants(ln_n, delta0, delta, epsilon, k0, bias)


def log_comb(n: int, k: int) -> float:
    if k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_term(i: int, n: int, delta: float) -> float:
    """log of C(n,i) * C(n-i,2i-1) * ((3i-2)/(delta*n-12))**(6i)."""
    return log_comb(n, i) + log_comb(n - i, 2 * i - 1) + 6 * i * math.log((3 * i - 2) / (delta * n - 12))


def logsumexp(values) -> float:
    values = [v for v in values if v != NEG_INF]
    if not values:
        return NEG_INF
    top = max(values)
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def failure_bound(n: int, delta: float, k0: int) -> float:
    """Natural log of the summed union bound over violating sets of size 5..k0.

    Returns ``-inf`` for an empty range (k0 < 5).
    """
    k0 = int(k0)
    if k0 < 5:
        return NEG_INF
    if not 0 < delta:
        raise ParameterDomain("delta must be positive")
    if 3 * k0 > n:
        raise ParameterDomain(f"k0={k0} exceeds n/3")
    if not delta * n - 12 > 3 * k0 - 2:
        raise ParameterDomain("need delta*n - 12 > 3*k0 - 2 so every factor is below 1")
    return logsumexp(log_term(i, n, delta) for i in range(5, k0 + 1))


def g_term(i: int, n: int, delta: float) -> float:
    """log of [4^5 e^3 (i/n)^3 / delta^6]^i, the simplified i-th summand bound."""
    if i < 1 or n <= i or delta <= 0:
        raise ParameterDomain(f"need 1 <= i < n and delta > 0, got i={i}, n={n}, delta={delta}")
    return i * g_base_log(i, n, delta)


def g_base_log(i: int, n: int, delta: float) -> float:
    return 5 * math.log(4) + 3 + 3 * math.log(i / n) - 6 * math.log(delta)


def bound_table(ns, delta: float, k0_of_n) -> list[tuple[int, float, int, float]]:
    rows = []
    for n in ns:
        k0 = int(k0_of_n(n))
        rows.append((n, delta, k0, failure_bound(n, delta, k0)))
    return rows


def asymptotic_bias(n: float | None = None, ln_n: float | None = None) -> float:
    """Bias bound (1 - 30/ln^{1/4} n) n / ln n; needs n to be meaningful."""
    c = constants(n, ln_n)
    if c.bias is None:
        raise ParameterDomain("bias needs n")
    return c.bias
