import math

import numpy as np
import pytest

from betaedge import ensembles as es
from betaedge import rng
from betaedge.potential import quadratic, quartic


def test_spec_validation():
    with pytest.raises(ValueError):
        es.laguerre_spec(10, 5, 2.0)  # m < n
    with pytest.raises(ValueError):
        es.jacobi_spec(5, 20, 8, 11, 2.0)  # p+q != m
    with pytest.raises(ValueError):
        es.jacobi_spec(5, 10, 5, 5, 2.0)  # p < n+1
    with pytest.raises(ValueError):
        es.gaussian_spec(0, 2.0)
    with pytest.raises(ValueError):
        es.gaussian_spec(5, -1.0)


def test_gaussian_n1_variance():
    beta = 3.0
    s = rng.derive_stream(1, 0, "g1")
    draws = np.array([es.sample_gaussian_beta(1, beta, s).particles[0]
                      for _ in range(20000)])
    want = 2.0 / beta
    se = want * math.sqrt(2.0 / draws.size)
    assert abs(draws.var() - want) < 3 * se


def test_laguerre_n1_mean():
    m = 5
    s = rng.derive_stream(2, 0, "l1")
    draws = np.array([es.sample_laguerre_beta(1, m, 2.0, s).particles[0]
                      for _ in range(20000)])
    # n=1 law is Gamma(m, 1) in these units, sd = sqrt(m)
    se = math.sqrt(m / draws.size)
    assert abs(draws.mean() - m) < 3 * se


def test_gaussian_bulk_semicircle():
    n = 500
    s = rng.derive_stream(3, 0, "gb")
    x = np.concatenate([np.sort(es.sample_gaussian_beta(n, 2.0, s).particles)
                        for _ in range(3)])
    x = np.sort(x) / math.sqrt(n)
    emp = (np.arange(1, x.size + 1) - 0.5) / x.size
    assert np.abs(es.semicircle_cdf(x) - emp).max() <= 0.03


def test_laguerre_bulk_mp():
    n, m = 400, 800
    s = rng.derive_stream(4, 0, "lb")
    st = es.sample_laguerre_beta(n, m, 2.0, s)
    assert np.all(st.particles > 0)
    x = st.particles[::-1]
    emp = (np.arange(1, n + 1) - 0.5) / n
    assert np.abs(es.marchenko_pastur_cdf(x, n, m) - emp).max() <= 0.03


def test_jacobi_bulk_density():
    n, m, p, q = 200, 800, 400, 400
    s = rng.derive_stream(5, 0, "jb")
    st = es.sample_jacobi_beta(n, m, p, q, 2.0, s)
    assert np.all((st.particles > 0) & (st.particles < 1))
    x = st.particles[::-1]
    emp = (np.arange(1, n + 1) - 0.5) / n
    assert np.abs(es.jacobi_density_cdf(x, n, m, p, q) - emp).max() <= 0.04


def test_jacobi_n1_longrun_mean():
    m, p, q = 12, 5, 7
    vals = [es.sample_jacobi_beta(1, m, p, q, 2.0,
                                  rng.derive_stream(6, i, "wf")).particles[0]
            for i in range(300)]
    vals = np.array(vals)
    a, b = p, q  # beta=2: Beta(p, q)
    want = p / m
    sd = math.sqrt(a * b / ((a + b) ** 2 * (a + b + 1)))
    assert abs(vals.mean() - want) < 3 * sd / math.sqrt(vals.size)


def test_dbm_sampler_gaussian_cross_check():
    n = 200
    s = rng.derive_stream(7, 0, "dbm")
    st = es.sample_dbm_general_potential(n, quadratic(), 2.0, s)
    x = np.sort(st.particles) / math.sqrt(n)
    emp = (np.arange(1, n + 1) - 0.5) / n
    assert np.abs(es.semicircle_cdf(x) - emp).max() <= 0.03


def test_dbm_sampler_quartic_support():
    # symmetric quartic endpoint: B^2/4 + 3 t B^4 / 4 = 1
    t = 0.01
    b2 = (-0.25 + math.sqrt(0.0625 + 3 * t)) / (1.5 * t)
    B = math.sqrt(b2)
    n = 200
    s = rng.derive_stream(8, 0, "dbm4")
    st = es.sample_dbm_general_potential(n, quartic(t), 2.0, s)
    top = st.particles[0] / math.sqrt(n)
    bot = st.particles[-1] / math.sqrt(n)
    # the extreme particle sits ~n^(-2/3) inside the limiting endpoint
    assert B - 0.10 < top < B + 0.03
    assert -B - 0.03 < bot < -B + 0.10


def test_sampler_determinism():
    a = es.sample_gaussian_beta(50, 2.0, rng.derive_stream(9, 0, "d"))
    b = es.sample_gaussian_beta(50, 2.0, rng.derive_stream(9, 0, "d"))
    assert np.array_equal(a.particles, b.particles)


def test_ordering_invariant():
    for st in [es.sample_gaussian_beta(100, 1.0, rng.derive_stream(10, 0, "o")),
               es.sample_laguerre_beta(80, 120, 0.5, rng.derive_stream(10, 1, "o"))]:
        assert np.all(np.diff(st.particles) <= 0)


def test_edge_helper_matches_full_solver():
    s1 = rng.derive_stream(11, 0, "e")
    s2 = rng.derive_stream(11, 0, "e")
    full = es.sample_gaussian_beta(300, 2.0, s1).particles[:2]
    top = es.sample_gaussian_edge(300, 2.0, s2, k=2)
    assert np.allclose(full, top, atol=1e-10)


def test_gaussian_edge_tw_location_smoke():
    n = 500
    vals = [es.sample_gaussian_edge(n, 2.0, rng.derive_stream(12, i, "tw"))[0]
            for i in range(200)]
    scaled = (np.array(vals) - 2 * math.sqrt(n)) * n ** (1.0 / 6.0)
    assert abs(scaled.mean() + 1.77) < 0.2
