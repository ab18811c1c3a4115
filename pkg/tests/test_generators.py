"""Tests for the seeded code generators and named fixtures.

Fixture parameters ([[n,k,d]] tuples) were frozen from exhaustive
enumeration; statistical bounds use explicit Hoeffding-style tolerances.
"""

import math

import numpy as np
import pytest

from qweight.css import params, validate
from qweight.generators import hastings_sparse_x, random_dense_css, standard_code


def test_random_dense_css_frozen_example():
    code = random_dense_css(12, 3, 3, seed=42)
    assert validate(code).ok
    p = params(code, distance_budget=0)
    assert p.n == 12
    assert p.k == 6


def test_random_dense_css_full_x_side():
    code = random_dense_css(6, 6, 0, seed=1)
    assert validate(code).ok
    assert code.hz.rows == 0
    assert params(code, distance_budget=0).k == 0


def test_random_dense_css_seed_separation():
    a = random_dense_css(8, 2, 2, seed=1)
    b = random_dense_css(8, 2, 2, seed=2)
    assert validate(a).ok and validate(b).ok
    assert not np.array_equal(a.hx.to_dense(), b.hx.to_dense()) or not np.array_equal(
        a.hz.to_dense(), b.hz.to_dense()
    )


def test_random_dense_css_deterministic():
    a = random_dense_css(10, 3, 2, seed=7)
    b = random_dense_css(10, 3, 2, seed=7)
    assert np.array_equal(a.hx.to_dense(), b.hx.to_dense())
    assert np.array_equal(a.hz.to_dense(), b.hz.to_dense())


def test_random_dense_css_rank_identity_sweep():
    rng = np.random.default_rng(13)
    for _ in range(60):
        n = int(rng.integers(4, 16))
        mx = int(rng.integers(0, n // 2 + 1))
        mz = int(rng.integers(0, n - mx + 1))
        code = random_dense_css(n, mx, mz, seed=int(rng.integers(0, 1 << 30)))
        assert validate(code).ok
        assert params(code, distance_budget=0).k == n - mx - mz


def test_random_dense_css_infeasible():
    with pytest.raises(ValueError):
        random_dense_css(4, 3, 2, seed=0)


def test_hastings_validates_and_reports_weights():
    code = hastings_sparse_x(16, 1.0, seed=1)
    assert validate(code).ok
    assert code.hx.rows == 8
    assert code.hz.rows == 4
    p = params(code, distance_budget=0)
    assert p.w_x >= 0


def test_hastings_beta_zero():
    code = hastings_sparse_x(8, 0.0, seed=3)
    assert validate(code).ok
    assert int(code.hx.row_weights().sum()) == 0
    from qweight.gf2 import rank

    assert params(code, distance_budget=0).k == 8 - rank(code.hz)


def test_hastings_rejects_tiny_n():
    with pytest.raises(ValueError):
        hastings_sparse_x(4, 1.0, seed=0)


def test_hastings_mean_row_weight_within_three_sigma():
    # row weights are Binomial(n, delta/n); averaging over 100 seeds gives
    # a tight concentration window for the empirical mean
    n, beta = 32, 2.0
    delta = beta * math.log(n)
    weights = []
    for seed in range(100):
        code = hastings_sparse_x(n, beta, seed=seed)
        weights.extend(code.hx.row_weights().tolist())
    mean = float(np.mean(weights))
    sigma_mean = math.sqrt(delta * (1 - delta / n) / len(weights))
    assert abs(mean - delta) <= 3 * sigma_mean


def test_standard_steane():
    p = params(standard_code("steane"))
    assert (p.n, p.k, p.d) == (7, 1, 3)


def test_standard_four_qubit():
    p = params(standard_code("four_qubit"))
    assert (p.n, p.k, p.d) == (4, 2, 2)


def test_standard_toric():
    p2 = params(standard_code("toric(2)"))
    assert (p2.n, p2.k, p2.d) == (8, 2, 2)
    p3 = params(standard_code("toric(3)"))
    assert (p3.n, p3.k, p3.d) == (18, 2, 3)


def test_standard_repetition_product():
    p2 = params(standard_code("repetition_product(2)"))
    assert (p2.n, p2.k, p2.d) == (5, 1, 2)
    p3 = params(standard_code("repetition_product(3)"))
    assert (p3.n, p3.k, p3.d) == (13, 1, 3)


def test_standard_unknown_name():
    with pytest.raises(ValueError):
        standard_code("golay")
    with pytest.raises(ValueError):
        standard_code("toric(x)")


def test_generator_outputs_validate_many_seeds():
    for seed in range(100):
        assert validate(random_dense_css(10, 2, 3, seed=seed)).ok
    for seed in range(25):
        assert validate(hastings_sparse_x(12, 1.5, seed=seed)).ok
