import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burgers_cm.series import (
    AMP,
    GAUSS,
    GaussianSeries,
    TermKey,
    Truncation,
    add,
    diff_amp,
    diff_theta,
    diff_zeta,
    evaluate,
    evaluate_grid,
    mul,
    scale,
)
from burgers_cm.surd import Surd, squarefree_split

# --- strategies -------------------------------------------------------------

coeffs = st.builds(
    lambda a, b, r: Surd.rational(Fraction(a, b)) if r == 1 else Surd.sqrt(r) * Fraction(a, b),
    st.integers(-9, 9).filter(bool),
    st.integers(1, 6),
    st.sampled_from([1, 1, 2, 3]),
)
keys = st.tuples(st.integers(0, 3), st.integers(0, 5), st.integers(0, 2), st.integers(0, 1))
series = st.dictionaries(keys, coeffs, max_size=4).map(GaussianSeries)
truncs = st.builds(Truncation, st.integers(1, 9), st.integers(1, 5), st.integers(1, 3))


def parity_series(par):
    k = st.tuples(st.integers(0, 3), st.integers(0, 3).map(lambda m: 2 * m + par), st.integers(0, 2), st.just(0))
    return st.dictionaries(k, coeffs, min_size=1, max_size=4).map(GaussianSeries)


# --- Surd --------------------------------------------------------------------

def test_squarefree_split():
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(50) == (5, 2)
    with pytest.raises(ValueError):
        squarefree_split(0)


def test_surd_products_stay_exact():
    s2, s3 = Surd.sqrt(2), Surd.sqrt(3)
    assert s2 * s3 == Surd.sqrt(6)
    assert s2 * s2 == 2
    assert Surd.sqrt(Fraction(2, 3)) == Surd.sqrt(6) / 3
    assert (s2 - s2).is_zero()
    assert abs(float(s2 + s3) - (math.sqrt(2) + math.sqrt(3))) < 1e-15
    assert (Surd.sqrt(2) * -1).sign() == -1


def test_surd_rejects_inexact_input():
    with pytest.raises(TypeError):
        Surd.coerce(0.5)
    with pytest.raises(ValueError):
        Surd.sqrt(-1)


@given(coeffs, coeffs, coeffs)
def test_surd_field_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert abs(float(a * b) - float(a) * float(b)) <= 1e-12 * (1 + abs(float(a) * float(b)))


# --- add / mul -----------------------------------------------------------------

AG = GaussianSeries.term(1, k=1, p=1)
HALF_Z2G = GaussianSeries.term(Fraction(1, 2), k=1, n=2)


def test_add_examples():
    assert add(AG, GaussianSeries.zero()) == AG
    assert add(HALF_Z2G, HALF_Z2G) == GaussianSeries.term(1, k=1, n=2)
    assert add(AG, scale(AG, -1)).is_zero()


def test_mul_examples():
    assert mul(GAUSS, GAUSS) == GaussianSeries.term(1, k=2)
    assert mul(AG, AG) == GaussianSeries.term(1, k=2, p=2)
    zg = GaussianSeries.term(1, k=1, n=1)
    z7g = GaussianSeries.term(1, k=1, n=7)
    assert mul(zg, z7g, Truncation(8, 6, 1)).is_zero()


def test_canonical_form():
    s = GaussianSeries([((1, 0, 1, 0), 2), ((1, 0, 1, 0), -2), ((0, 1, 0, 0), 3)])
    assert len(s) == 1 and (1, 0, 1, 0) not in s
    with pytest.raises(TypeError):
        GaussianSeries.term(0.5)
    with pytest.raises(ValueError):
        GaussianSeries.term(1, n=-1)


def test_truncation_validation():
    with pytest.raises(ValueError):
        Truncation(0, 6, 1)
    t = Truncation(8, 6, 2)
    assert t.keeps(TermKey(5, 7, 5, 1)) and not t.keeps(TermKey(1, 8, 0, 0))


@given(series, series)
def test_add_commutes(a, b):
    assert add(a, b) == add(b, a)


@given(series, series, series)
def test_add_associates(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))


@given(series, series, series, truncs)
@settings(max_examples=60)
def test_mul_distributes_under_shared_truncation(a, b, c, t):
    assert mul(a, add(b, c), t) == add(mul(a, b, t), mul(a, c, t))


@given(series, series)
def test_mul_commutes(a, b):
    assert mul(a, b) == mul(b, a)


# --- derivatives -----------------------------------------------------------------

def test_diff_zeta_examples():
    assert diff_zeta(GAUSS) == GaussianSeries.term(-1, k=1, n=1)
    zg = GaussianSeries.term(1, k=1, n=1)
    assert diff_zeta(zg) == add(GAUSS, GaussianSeries.term(-1, k=1, n=2))
    assert diff_zeta(GaussianSeries.term(Fraction(3, 7), p=1)).is_zero()


@given(series, series)
@settings(max_examples=60)
def test_product_rule(a, b):
    lhs = diff_zeta(mul(a, b))
    rhs = add(mul(diff_zeta(a), b), mul(a, diff_zeta(b)))
    assert lhs == rhs


@given(series, series, truncs)
@settings(max_examples=60)
def test_product_rule_truncated(a, b, t):
    guard = t.with_zeta(t.zeta_order + 1)
    lhs = diff_zeta(mul(a, b, guard)).truncate(t)
    rhs = add(mul(diff_zeta(a), b, t), mul(a, diff_zeta(b), t)).truncate(t)
    assert lhs == rhs


@given(st.sampled_from([0, 1]).flatmap(lambda par: st.tuples(st.just(par), parity_series(par))))
def test_diff_zeta_flips_parity(args):
    par, s = args
    assert all(key.n % 2 != par for key in diff_zeta(s).keys())


@given(series)
def test_diff_amp_theta(s):
    # d/dA (A * s) = s + A ds/dA
    assert diff_amp(mul(AMP, s)) == add(s, mul(AMP, diff_amp(s)))
    theta = GaussianSeries.term(1, q=1)
    assert diff_theta(mul(theta, s)) == add(s, mul(theta, diff_theta(s)))


# --- serialisation ------------------------------------------------------------------

@given(series)
def test_json_round_trip(s):
    assert GaussianSeries.from_json(s.to_json()) == s


def test_json_layout_is_deterministic():
    s = add(GaussianSeries.term(Fraction(-1, 6), k=2, n=3, p=2), AG)
    recs = json.loads(s.to_json())
    assert [(r["k"], r["p"], r["q"], r["n"]) for r in recs] == [(1, 1, 0, 0), (2, 2, 0, 3)]
    assert recs[1]["numerator"] == -1 and recs[1]["denominator"] == 6 and recs[1]["radicand"] == 1
    assert s.to_json() == GaussianSeries(dict(reversed(list(s.items())))).to_json()


# --- evaluation -------------------------------------------------------------------------

def test_evaluate_examples():
    assert evaluate(AG, 0.0, 1.0, 0.0) == 1.0
    assert evaluate(AG, 0.0, 0.3, 0.0) == 0.3


def _printed_one_mode_series():
    data = [
        (1, 0, 1, "1"),
        (2, 3, 2, "-0.1667"), (2, 5, 2, "-0.0833"), (2, 7, 2, "-0.0238"),
        (1, 0, 3, "-0.0090"), (1, 2, 3, "0.0321"), (1, 4, 3, "0.0053"), (1, 6, 3, "0.0007"),
        (3, 4, 3, "-0.0417"), (3, 6, 3, "-0.0278"),
        (2, 3, 4, "0.0137"), (2, 5, 4, "0.0036"), (2, 7, 4, "0.001"),
        (4, 5, 4, "-0.0083"), (4, 7, 4, "-0.0056"),
        (1, 0, 5, "0.004"), (1, 2, 5, "-0.0020"), (1, 4, 5, "0.0002"), (1, 6, 5, "0.0001"),
        (3, 4, 5, "0.0038"), (3, 6, 5, "0.0008"),
        (5, 6, 5, "-0.0014"),
    ]
    return GaussianSeries({(k, n, p, 0): Fraction(c) for k, n, p, c in data})


def test_evaluate_matches_direct_summation():
    z, A = 1.0, 0.5
    G = math.exp(-z * z / 2)
    direct = (
        G * A
        - G**2 * A**2 * (0.1667 * z**3 + 0.0833 * z**5 + 0.0238 * z**7)
        - G * A**3 * (0.0090 - 0.0321 * z**2 - 0.0053 * z**4 - 0.0007 * z**6)
        - G**3 * A**3 * (0.0417 * z**4 + 0.0278 * z**6)
        + G**2 * A**4 * (0.0137 * z**3 + 0.0036 * z**5 + 0.001 * z**7)
        - G**4 * A**4 * (0.0083 * z**5 + 0.0056 * z**7)
        + G * A**5 * (0.004 - 0.0020 * z**2 + 0.0002 * z**4 + 0.0001 * z**6)
        + G**3 * A**5 * (0.0038 * z**4 + 0.0008 * z**6)
        - 0.0014 * G**5 * A**5 * z**6
    )
    assert abs(evaluate(_printed_one_mode_series(), z, A, 0.0) - direct) <= 1e-12


@given(series, st.floats(-4, 4), st.floats(-1, 1), st.floats(-1, 1))
def test_evaluate_grid_agrees_with_scalar(s, z, A, th):
    import numpy as np

    got = evaluate_grid(s, np.array([z]), A, th)[0]
    assert math.isclose(got, evaluate(s, z, A, th), rel_tol=1e-12, abs_tol=1e-12)
