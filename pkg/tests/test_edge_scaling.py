import math

import numpy as np
import pytest
from scipy import integrate, optimize

from betaedge import airy, edge_scaling as esc, ensembles as es, rng
from betaedge.dynamics import TrajectoryRecord
from betaedge.potential import quadratic, quartic


def test_semicircle_equilibrium_closed_form():
    eq = esc.equilibrium_measure(quadratic())
    assert eq.A == pytest.approx(-2.0, abs=1e-10)
    assert eq.B == pytest.approx(2.0, abs=1e-10)
    assert eq.R_A == pytest.approx(1.0, abs=1e-10)
    assert eq.R_B == pytest.approx(1.0, abs=1e-10)
    xs = np.linspace(-1.9, 1.9, 17)
    assert np.allclose(eq.rho(xs), np.sqrt(4 - xs ** 2) / (2 * np.pi),
                       atol=1e-10)


def test_semicircle_stieltjes_closed_form():
    eq = esc.equilibrium_measure(quadratic())
    assert complex(eq.m(3.0)) == pytest.approx((-3 + math.sqrt(5)) / 2,
                                               abs=1e-10)
    z = 1.0 + 2.0j
    want = (-z + np.sqrt(z * z - 4)) / 2
    assert complex(eq.m(z)) == pytest.approx(want, abs=1e-10)


def test_quartic_endpoint_scalar_oracle():
    t = 0.01
    # symmetric one-cut endpoint: B^2/4 + 3 t B^4/4 = 1
    B = optimize.brentq(lambda b: b * b / 4 + 0.75 * t * b ** 4 - 1, 1.0, 2.0,
                        xtol=1e-14)
    eq = esc.equilibrium_measure(quartic(t))
    assert eq.B == pytest.approx(B, abs=1e-8)
    assert eq.A == pytest.approx(-B, abs=1e-8)


def test_density_normalization_and_edge_coefficient():
    eq = esc.equilibrium_measure(quartic(0.05))
    mass, _ = integrate.quad(lambda x: float(np.real(eq.rho(x))), eq.A, eq.B,
                             limit=200)
    assert mass == pytest.approx(1.0, abs=1e-8)
    # rho(B-x)/sqrt(x) -> R_B/pi, Richardson extrapolation in x
    f = [float(np.real(eq.rho(eq.B - x))) / math.sqrt(x)
         for x in (1e-3, 1e-4)]
    extrap = f[1] + (f[1] - f[0]) / 9  # leading correction is O(x)
    assert extrap == pytest.approx(eq.R_B / np.pi, rel=1e-3)


def test_stieltjes_matches_direct_quadrature():
    eq = esc.equilibrium_measure(quartic(0.05))
    for z in (3.0 + 0.0j, 0.5 + 1.0j, -4.0 + 0.0j):
        re, _ = integrate.quad(
            lambda x: float(np.real(eq.rho(x) / (x - z))), eq.A, eq.B,
            limit=400)
        im, _ = integrate.quad(
            lambda x: float(np.imag(eq.rho(x) / (x - z))), eq.A, eq.B,
            limit=400)
        assert complex(eq.m(z)) == pytest.approx(re + 1j * im, abs=1e-7)


def test_non_convex_rejected():
    from betaedge.potential import PotentialSpec
    flat = PotentialSpec(coeffs=(0.0,))
    with pytest.raises(esc.EquilibriumError):
        esc.equilibrium_measure(flat)


def test_gaussian_scaling_closed_form():
    n = 1000
    sc = esc.scaling_for(es.gaussian_spec(n, 2.0))
    assert sc.E == pytest.approx(2 * math.sqrt(n), abs=1e-8)
    assert sc.zeta == pytest.approx(n ** (-1 / 3), abs=1e-10)
    assert sc.chi == pytest.approx(n ** (-1 / 6), abs=1e-10)
    assert sc.stieltjes_shift == pytest.approx(math.sqrt(n), abs=1e-8)


def test_laguerre_scaling_frozen_values():
    sc = esc.scaling_for(es.laguerre_spec(100, 100, 2.0))
    assert sc.E == pytest.approx(400.0)
    assert sc.chi == pytest.approx(20 ** (4 / 3) * 10 ** (-2 / 3))
    assert sc.zeta == pytest.approx(0.5 * 20 ** (2 / 3) * 10 ** (-4 / 3))
    assert sc.stieltjes_shift == pytest.approx(0.5)


def test_jacobi_edge_location():
    n = 50
    sc = esc.scaling_for(es.jacobi_spec(n, 4 * n, 2 * n, 2 * n, 2.0))
    assert sc.E == pytest.approx((2 + math.sqrt(3)) / 4, abs=1e-12)


def test_dbm_scaling_uses_solver():
    n, t = 300, 0.01
    B = optimize.brentq(lambda b: b * b / 4 + 0.75 * t * b ** 4 - 1, 1.0, 2.0)
    sc = esc.scaling_for(es.dbm_spec(n, 2.0, quartic(t)))
    assert sc.E == pytest.approx(B * math.sqrt(n), abs=1e-6)
    assert sc.stieltjes_shift == pytest.approx(
        math.sqrt(n) * (B + 4 * t * B ** 3) / 2, abs=1e-6)


def test_rescale_roundtrip_identity():
    sc = esc.scaling_for(es.gaussian_spec(64, 2.0))
    times = np.linspace(0.0, 0.5, 6)
    vals = np.sort(np.random.default_rng(0).normal(16.0, 1.0, (6, 10)))[:, ::-1]
    traj = TrajectoryRecord(times=times, values=vals, events=[], n_steps=500)
    back = esc.unrescale(esc.rescale(traj, sc, top_k=10), sc)
    assert np.allclose(back.times, times, atol=1e-12)
    assert np.allclose(back.values, vals, atol=1e-12)


def test_rescale_affine_equivariance():
    sc = esc.scaling_for(es.gaussian_spec(64, 2.0))
    vals = np.linspace(18.0, 12.0, 8)[None, :]
    traj = TrajectoryRecord(times=np.array([0.0]), values=vals, events=[],
                            n_steps=0)
    c = 1.7
    shifted = TrajectoryRecord(times=traj.times, values=vals + c * sc.chi,
                               events=[], n_steps=0)
    a = esc.rescale(traj, sc, top_k=8).values
    b = esc.rescale(shifted, sc, top_k=8).values
    assert np.allclose(b - a, c, atol=1e-12)


def test_delta_two_code_paths_agree():
    n = 400
    stream = rng.derive_stream(21, 0, "delta")
    st = es.sample_gaussian_beta(n, 2.0, stream)
    sc = esc.scaling_for(es.gaussian_spec(n, 2.0))
    tilde = (st.particles - sc.E) / sc.chi
    for w in (1j, 2.0 + 0.5j, -1.0 + 3.0j):
        a = esc.delta_transform(st, sc, w)
        b = esc.delta_from_rescaled(tilde, sc, w)
        assert abs(a - b) < 1e-12 * max(1.0, abs(a))


def test_delta_is_herglotz_plus_root():
    n = 200
    st = es.sample_gaussian_beta(n, 1.0, rng.derive_stream(22, 0, "h"))
    sc = esc.scaling_for(es.gaussian_spec(n, 1.0))
    for w in (0.3j, 1.0 + 1j, -2.0 + 0.25j):
        val = esc.delta_transform(st, sc, w) + np.sqrt(complex(w))
        assert val.imag > 0


def test_delta_affine_in_shift():
    st = es.ParticleState(t=0.0, particles=np.array([5.0, 3.0, 1.0]))
    sc = esc.EdgeScaling(E=6.0, zeta=1.0, chi=0.5, stieltjes_shift=2.0)
    sc2 = esc.EdgeScaling(E=6.0, zeta=1.0, chi=0.5, stieltjes_shift=5.0)
    w = 1j
    d1 = esc.delta_transform(st, sc, w)
    d2 = esc.delta_transform(st, sc2, w)
    assert d2 - d1 == pytest.approx(sc.chi * 3.0, abs=1e-14)


def test_delta_of_airy_zero_configuration():
    # particles planted at E + chi * a_i reproduce the Airy logarithmic
    # derivative up to the truncated far tail
    n = 10000
    zeros = airy.airy_zeros(n).zeros
    chi, E = 0.01, 100.0
    w = 2j
    shift = (airy.airy_log_derivative(0.0).real - np.sum(1.0 / zeros)) / chi
    sc = esc.EdgeScaling(E=E, zeta=1.0, chi=chi, stieltjes_shift=float(shift))
    st = es.ParticleState(t=0.0, particles=E + chi * zeros)
    delta = esc.delta_transform(st, sc, w)
    want = airy.airy_log_derivative(w) - np.sqrt(complex(w))
    assert abs(delta - want) < 0.2


def test_delta_of_mp_quantile_configuration():
    n, m = 2000, 4000
    qs = (np.arange(1, n + 1) - 0.5) / n
    lo, hi = es.marchenko_pastur_edges(n, m)
    lam = np.array([optimize.brentq(
        lambda x, q=q: float(es.marchenko_pastur_cdf(x, n, m)[0]) - q,
        lo + 1e-12, hi - 1e-12) for q in qs])[::-1]
    st = es.ParticleState(t=0.0, particles=lam)
    sc = esc.scaling_for(es.laguerre_spec(n, m, 2.0))
    assert abs(esc.delta_transform(st, sc, 2j)) <= 0.2


def test_delta_requires_upper_half_plane():
    st = es.ParticleState(t=0.0, particles=np.array([1.0]))
    sc = esc.EdgeScaling(E=0.0, zeta=1.0, chi=1.0, stieltjes_shift=0.0)
    with pytest.raises(ValueError):
        esc.delta_transform(st, sc, 1.0 - 1j)
