import json
import math
from pathlib import Path

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamgame.theory import (
    EPSILON_ONE_LN_N,
    NEG_INF,
    ParameterDomain,
    constants,
    failure_bound,
    g_base_log,
    g_term,
    log_comb,
    log_term,
    logsumexp,
    asymptotic_bias,
)
from oracles import theory_oracle as oracle

PINS = json.loads((Path(__file__).parent / "fixtures" / "theory_pins.json").read_text())


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_single_term_matches_pin_and_exact_integers():
    p = PINS["single_term"]
    got = log_term(p["i"], p["n"], p["delta"])
    assert rel(got, float(p["log"])) < 1e-9
    exact = oracle.log_term_exact(p["i"], p["n"], p["delta"])
    assert abs(exact - mpmath.mpf(p["log"])) < mpmath.mpf(10) ** -15


@pytest.mark.parametrize("row", PINS["failure_bound_delta_half_k0_n_over_128"], ids=lambda r: str(r["n"]))
def test_failure_bound_pins(row):
    assert row["n"] // 128 == row["k0"]
    assert rel(failure_bound(row["n"], 0.5, row["k0"]), float(row["log"])) < 1e-9


def test_failure_bound_strictly_decreasing():
    vals = [failure_bound(r["n"], 0.5, r["n"] // 128) for r in PINS["failure_bound_delta_half_k0_n_over_128"]]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("row", PINS["g_term"], ids=lambda r: f'{r["i"]}-{r["n"]}-{r["delta"]}')
def test_g_term_pins(row):
    assert rel(g_term(row["i"], row["n"], row["delta"]), float(row["log"])) < 1e-12


def test_g_term_at_one_eighth():
    n = 1000
    direct = mpmath.log(mpmath.mpf(4) ** 5 * mpmath.e**3 * mpmath.mpf(64) / 512)
    assert rel(g_base_log(n // 8, n, 0.5), float(direct)) < 1e-12


def test_g_term_dominates_exact_terms_at_n_1000():
    n, delta = 1000, 0.5
    for i in range(5, n // 128 + 1):
        assert oracle.g_term(i, n, delta) >= oracle.log_term_exact(i, n, delta)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(200, 5000), delta=st.sampled_from([0.25, 0.5, 0.75, 0.9]), frac=st.integers(40, 200))
def test_failure_bound_matches_oracle(n, delta, frac):
    k0 = n // frac
    if k0 < 5 or delta * n - 12 <= 3 * k0 - 2:
        return
    assert rel(failure_bound(n, delta, k0), float(oracle.failure_bound(n, delta, k0))) < 1e-9


def test_failure_bound_domain():
    assert failure_bound(1000, 0.5, 4) == NEG_INF
    with pytest.raises(ParameterDomain):
        failure_bound(30, 0.5, 11)
    with pytest.raises(ParameterDomain):
        failure_bound(1000, 0.01, 20)
    with pytest.raises(ParameterDomain):
        g_term(0, 10, 0.5)


def test_numeric_helpers():
    assert log_comb(5, 7) == NEG_INF
    assert math.isclose(log_comb(10, 3), math.log(120))
    assert logsumexp([NEG_INF]) == NEG_INF
    assert math.isclose(logsumexp([math.log(2), math.log(3)]), math.log(5))
    assert logsumexp([1000.0, 1000.0]) == pytest.approx(1000 + math.log(2))


def test_constants_and_epsilon_threshold():
    c = constants(ln_n=EPSILON_ONE_LN_N)
    assert c.epsilon == pytest.approx(1.0)
    assert constants(ln_n=EPSILON_ONE_LN_N * 1.01).epsilon < 1
    c = constants(1e6)
    assert c.delta0 == pytest.approx(6 / math.sqrt(math.log(1e6)))
    assert c.k0 == pytest.approx(c.delta0 * 1e6)
    with pytest.raises(ParameterDomain):
        constants(1)


@pytest.mark.parametrize("n", [10, 1e3, 1e6, 1e12, 1e100, 1e300])
def test_asymptotic_bias_is_nonpositive_at_every_float_n(n):
    # epsilon < 1 needs ln n > 810000, far beyond the largest double (~709.8)
    assert asymptotic_bias(n) <= 0
