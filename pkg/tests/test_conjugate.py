import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from quncertainty.conjugate import (
    PhaseSpaceParams,
    leading_joint_probability,
    limit_wavefunction_momentum,
    limit_wavefunction_position,
    sinc_kernel,
    small_s_asymptote,
    solve_spectrum,
)


def bin_probability(psi, width, norm):
    return quad(lambda u: psi(u) ** 2, -width / 2, width / 2, points=[0])[0] / norm


def limit_norm(s):
    # |box|^2 + |tail|^2 = 1, plus the overlap term
    return 1 + math.sqrt(s) * quad(lambda u: np.sinc(s * u), -0.5, 0.5)[0]


def test_kernel_examples():
    assert sinc_kernel(1.0, 0.0, 0.0) == pytest.approx(1.0)
    assert sinc_kernel(0.3, 0.2, 0.2) == pytest.approx(0.3)
    assert sinc_kernel(1.0, 0.5, 0.0) == pytest.approx(2 / math.pi)
    xi = np.linspace(-0.5, 0.5, 7)
    k = sinc_kernel(2.5, xi[:, None], xi[None, :])
    np.testing.assert_allclose(k, k.T)


def test_phase_space_params():
    p = PhaseSpaceParams(1.0, 2 * math.pi)
    assert p.s == pytest.approx(1.0)
    assert PhaseSpaceParams.from_s(0.25, hbar=2.0).s == pytest.approx(0.25)
    with pytest.raises(ValueError):
        PhaseSpaceParams(0.0, 1.0)
    with pytest.raises(ValueError):
        solve_spectrum(-1.0)
    with pytest.raises(ValueError):
        solve_spectrum(1.0, quad_order=4)


@pytest.mark.parametrize("s", [0.01, 0.1, 1.0, 4.0, 8.0])
def test_trace_identity(s):
    spec = solve_spectrum(s)
    assert abs(spec.eigenvalues.sum() - s) <= 1e-8
    assert np.all(np.diff(spec.eigenvalues) <= 0)
    assert 0 <= spec.eigenvalues[-1] and spec.eigenvalues[0] <= 1


@pytest.mark.parametrize("s", [0.01, 1.0, 8.0])
def test_quadrature_converged(s):
    assert solve_spectrum(s, 128).mu2_max == pytest.approx(solve_spectrum(s, 256).mu2_max, abs=1e-12)


def test_spectrum_limits():
    for s in (0.005, 0.01):
        assert abs(solve_spectrum(s).mu2_max / s - 1) <= 0.05
    assert solve_spectrum(8.0).mu2_max >= 0.99


def test_hbar_and_bin_shape_enter_only_through_s():
    a = solve_spectrum(PhaseSpaceParams(0.5, 0.4, hbar=1.0)).mu2_max
    b = solve_spectrum(PhaseSpaceParams(2.0, 0.2, hbar=2.0)).mu2_max
    assert a == pytest.approx(b, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.001, 6.0), st.floats(1.01, 2.0))
def test_mu2_increases_with_s(s, factor):
    assert solve_spectrum(s * factor).mu2_max >= solve_spectrum(s).mu2_max - 1e-12


def test_small_s_eigenfunction_is_flat():
    spec = solve_spectrum(0.001)
    np.testing.assert_allclose(spec.leading_eigenfunction, 1.0, atol=1e-5)


def test_asymptote_examples():
    assert small_s_asymptote(0.01) == pytest.approx(0.30)
    assert small_s_asymptote(0.0001) == pytest.approx(0.255)
    with pytest.raises(ValueError):
        small_s_asymptote(0.0)


@pytest.mark.parametrize("s", [0.0005, 0.001, 0.005, 0.01])
def test_leading_joint_probability_near_asymptote(s):
    ljp = leading_joint_probability(s)
    assert 0.25 < ljp < 1
    assert abs(ljp - small_s_asymptote(s)) <= s / 2


def test_leading_joint_probability_decreases_to_quarter():
    grid = [0.01, 0.003, 0.001, 3e-4, 1e-4, 3e-5]
    values = [leading_joint_probability(s) for s in grid]
    assert np.all(np.diff(values) < 0)
    assert all(v > 0.25 for v in values)
    assert values[-1] - 0.25 < 0.01


@pytest.mark.parametrize("s", [0.001, 0.005, 0.01])
def test_limit_wavefunction_attains_leading_probability(s):
    # independent of the eigen-solver: bin probabilities of the closed-form state
    pr = PhaseSpaceParams(math.sqrt(2 * math.pi * s) * 1.7, math.sqrt(2 * math.pi * s) / 1.7)
    norm = limit_norm(s)
    px = bin_probability(lambda x: limit_wavefunction_position(x, pr), pr.delta_x, norm)
    pp = bin_probability(lambda p: limit_wavefunction_momentum(p, pr), pr.delta_p, norm)
    assert px == pytest.approx(pp, abs=1e-10)
    assert px * pp == pytest.approx(leading_joint_probability(pr), abs=1e-8)


def test_limit_wavefunction_values_at_origin():
    pr = PhaseSpaceParams(0.2, 0.5, hbar=1.0)
    expected = 1 / math.sqrt(2 * 0.2) + math.sqrt(0.5 / (4 * math.pi))
    assert limit_wavefunction_position(0.0, pr) == pytest.approx(expected)
    edge = limit_wavefunction_position(0.1, pr) - math.sqrt(0.5 / (4 * math.pi)) * np.sinc(0.1 * 0.5 / (2 * math.pi))
    assert edge == pytest.approx(0.5 / math.sqrt(2 * 0.2))


def test_position_and_momentum_forms_swap_roles():
    a = PhaseSpaceParams(0.3, 0.8, hbar=1.5)
    b = PhaseSpaceParams(0.8, 0.3, hbar=1.5)
    u = np.linspace(-3, 3, 41)
    np.testing.assert_allclose(limit_wavefunction_position(u, a), limit_wavefunction_momentum(u, b))


def test_limit_wavefunctions_are_a_fourier_pair():
    # the box in one space transforms into the sinc tail of the other
    pr = PhaseSpaceParams(0.3, 0.8, hbar=1.5)
    hbar = pr.hbar
    height = 1 / math.sqrt(2 * pr.delta_x)
    x, w = np.polynomial.legendre.leggauss(400)
    x, w = x * pr.delta_x / 2, w * pr.delta_x / 2
    for p in (-7.0, -1.3, 0.0, 0.35, 5.0):
        ft = np.sum(w * height * np.exp(-1j * p * x / hbar)) / math.sqrt(2 * math.pi * hbar)
        tail = limit_wavefunction_momentum(p, pr) - (abs(p) < pr.delta_p / 2) / math.sqrt(2 * pr.delta_p)
        assert ft.real == pytest.approx(tail, abs=1e-12)
        assert abs(ft.imag) < 1e-12


def squared_norm(psi, width, period):
    # quad across the box, trapezoid over the smooth oscillating tail
    inner = quad(lambda u: psi(u) ** 2, -width, width, points=[-width / 2, width / 2])[0]
    u = np.linspace(width, 5000 * period, 2_000_001)
    return inner + 2 * np.trapezoid(psi(u) ** 2, u)


def test_parseval_norms_agree():
    pr = PhaseSpaceParams(0.3, 0.05, hbar=1.0)
    nx = squared_norm(lambda x: limit_wavefunction_position(x, pr), pr.delta_x, 2 * math.pi / pr.delta_p)
    np_ = squared_norm(lambda p: limit_wavefunction_momentum(p, pr), pr.delta_p, 2 * math.pi / pr.delta_x)
    assert nx == pytest.approx(np_, abs=2e-4)
    assert nx == pytest.approx(limit_norm(pr.s), abs=2e-4)
