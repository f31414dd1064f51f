import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy.integrate import quad

from nuspectra import nu
from nuspectra.closed_form import energy_combined, enumerate_bound_states
from nuspectra.errors import NoAdmissibleBranch, NonRealDelta, NoRealK, NoSignChange, UnsupportedSigma
from nuspectra.potential import PotentialParams
from nuspectra.special import jacobi_p

P = PotentialParams(V1=1.0, V2=0.5, V3=6.0, V4=0.5, V5=0.3, V6=2.0, q=1.3, alpha=0.9)


def printed_k_and_pi(p, energy, eta):
    """k and the decaying pi(z) from the printed branch formulas (with 2*delta)."""
    b1, b2, b3, b4, b5, b6 = p.beta
    q = p.q
    xi = -energy / (4 * p.alpha**2)
    d = math.sqrt(xi - b4)
    h = math.sqrt(4 * b2 / q**2 + 16 * (b3 + b6) / q + 12 * b5 + 1)
    k = 2 * q * (b4 - b5) - 4 * (b3 + b6) - b1 + eta * h * q * d
    return k, (d, -0.5 * q - 0.5 * (2 * d - eta * h) * q)


def test_make_ode_coefficients():
    ode = nu.make_ode(P, -3.7)
    b1, b2, b3, b4, b5, b6 = P.beta
    q, xi = P.q, 3.7 / (4 * P.alpha**2)
    expected = [b4 - xi, -b1 - 4 * (b3 + b6) - 2 * q * b5 + 2 * q * xi, b1 * q - b2 - q * q * (b4 + b5 + xi)]
    np.testing.assert_allclose(ode.sigma_tilde.coef, expected, rtol=1e-14)
    np.testing.assert_allclose(ode.sigma.coef, [0.0, 1.0, -q])
    np.testing.assert_allclose(ode.tau_tilde.coef, [1.0, -q])


@pytest.mark.parametrize("energy", [-3.7, -1.2, -8.0])
def test_pi_branches_reproduce_printed_k_and_pi(energy):
    branches = nu.pi_branches(nu.make_ode(P, energy))
    for eta in (1, -1):
        k, (pi0, pi1) = printed_k_and_pi(P, energy, eta)
        br = nu.branch_for_eta(branches, eta)
        assert br.k == pytest.approx(k, rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(br.pi.coef, [pi0, pi1], rtol=1e-12, atol=1e-12)


def test_radicand_is_perfect_square_on_every_branch():
    ode = nu.make_ode(P, -2.0)
    half = (ode.sigma.deriv() - ode.tau_tilde) / 2
    for br in nu.pi_branches(ode):
        radicand = half * half - ode.sigma_tilde + br.k * ode.sigma
        np.testing.assert_allclose((br.root * br.root).coef, radicand.trim().coef, atol=1e-12)


def test_select_branch_picks_negative_tau_slope_and_is_deterministic():
    ode = nu.make_ode(P, -3.7)
    branches = nu.pi_branches(ode)
    chosen = nu.select_branch(branches, ode.sigma)
    assert chosen.tau_slope < 0
    assert nu.select_branch(list(reversed(branches)), ode.sigma) == chosen
    w = nu.pearson_weight(chosen, ode.sigma)
    assert w.A > -1 and w.B > -1


def test_select_branch_without_negative_slope():
    br = nu.NUBranch(k=0.0, pi=nu.poly(0.0), tau=nu.poly(1.0, 2.0), sqrt_sign=1, root=nu.poly(0.0))
    with pytest.raises(NoAdmissibleBranch):
        nu.select_branch([br])
    with pytest.raises(ValueError):
        nu.select_branch([])


def test_lambda_n_matches_printed_quantization_form():
    energy = -3.7
    ode = nu.make_ode(P, energy)
    branches = nu.pi_branches(ode)
    q = P.q
    d = math.sqrt(-energy / (4 * P.alpha**2) - P.beta[3])
    h = math.sqrt(4 * P.beta[1] / q**2 + 16 * (P.beta[2] + P.beta[5]) / q + 12 * P.beta[4] + 1)
    for eta in (1, -1):
        br = nu.branch_for_eta(branches, eta)
        for n in range(5):
            assert nu.lambda_n(br, ode.sigma, n) == pytest.approx(n * q * ((n + 1) + 2 * d - eta * h), rel=1e-12, abs=1e-12)
    with pytest.raises(ValueError):
        nu.lambda_n(branches[0], ode.sigma, -1)


def test_no_real_k():
    # sigma = z, tau~ = 0, sigma~ = z^2: radicand 1/4 + k z - z^2 is never a perfect square
    ode = nu.HypergeometricODE(nu.poly(0.0, 1.0), nu.poly(0.0, 0.0, 1.0), nu.poly(0.0))
    with pytest.raises(NoRealK):
        nu.pi_branches(ode)


def test_ode_rejects_bad_degrees():
    with pytest.raises(ValueError):
        nu.HypergeometricODE(nu.poly(0.0, 0.0, 0.0, 1.0), nu.poly(1.0), nu.poly(1.0))
    with pytest.raises(ValueError):
        nu.HypergeometricODE(Polynomial([0.0]), nu.poly(1.0), nu.poly(1.0))


def test_pearson_weight_solves_pearson_equation():
    ode = nu.make_ode(P, -3.7)
    br = nu.select_branch(nu.pi_branches(ode), ode.sigma)
    w = nu.pearson_weight(br, ode.sigma)
    zs = np.linspace(0.05, 0.7, 9)
    h = 1e-6
    lhs = (ode.sigma(zs + h) * w(zs + h) - ode.sigma(zs - h) * w(zs - h)) / (2 * h)
    np.testing.assert_allclose(lhs, br.tau(zs) * w(zs), rtol=1e-7)


def test_phi_factor_log_derivative():
    ode = nu.make_ode(P, -3.7)
    br = nu.select_branch(nu.pi_branches(ode), ode.sigma)
    phi = nu.phi_factor(br, ode.sigma)
    zs = np.linspace(0.05, 0.7, 9)
    h = 1e-6
    dlog = (np.log(phi(zs + h)) - np.log(phi(zs - h))) / (2 * h)
    np.testing.assert_allclose(dlog, br.pi(zs) / ode.sigma(zs), rtol=1e-7)


def test_unsupported_sigma():
    br = nu.NUBranch(k=0.0, pi=nu.poly(0.0), tau=nu.poly(1.0, -1.0), sqrt_sign=1, root=nu.poly(0.0))
    with pytest.raises(UnsupportedSigma):
        nu.pearson_weight(br, nu.poly(1.0, 1.0))


def test_rodrigues_matches_jacobi():
    q = 1.5
    sigma = nu.poly(0.0, 1.0, -q)
    weight = nu.ExponentForm(nu.poly(1.0), 0.7, 1.8, q)
    zs = np.linspace(0.02, 0.6, 20)
    for n in range(1, 5):
        y = nu.rodrigues_polynomial(None, sigma, weight, n)
        assert y.degree() == n
        ref = np.array([jacobi_p(n, 0.7, 1.8, 1 - 2 * q * z) for z in zs])
        ratio = y(zs) / ref
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)


def test_rodrigues_orthogonality_under_weight():
    q = 1.5
    sigma = nu.poly(0.0, 1.0, -q)
    weight = nu.ExponentForm(nu.poly(1.0), 0.5, 1.2, q)
    ys = [nu.rodrigues_polynomial(None, sigma, weight, n) for n in range(6)]

    def inner(a, b):
        return quad(lambda z: weight(z) * a(z) * b(z), 0.0, 1.0 / q, limit=200)[0]

    norms = [math.sqrt(inner(y, y)) for y in ys]
    for m in range(6):
        for n in range(m + 1, 6):
            assert abs(inner(ys[m], ys[n])) <= 1e-8 * norms[m] * norms[n]


def test_weight_is_classical():
    assert nu.weight_is_classical(nu.ExponentForm(nu.poly(1.0), 0.0, 0.5, 1.0))
    assert not nu.weight_is_classical(nu.ExponentForm(nu.poly(1.0), -1.5, 0.5, 1.0))


def _draws(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = PotentialParams(
            V1=rng.uniform(-2, 2),
            V2=rng.uniform(0, 2),
            V3=rng.uniform(1, 12),
            V4=rng.uniform(-1, 1),
            V5=rng.uniform(0, 1),
            V6=rng.uniform(0, 4),
            q=rng.uniform(1, 3),
            alpha=rng.uniform(0.5, 1.5),
        )
        levels = enumerate_bound_states(p, "BOTH")
        if levels:
            out.append((p, levels[rng.integers(len(levels))]))
    return out


def quantization_bracket(p, energy):
    top = -p.V4
    return energy - 1.0 - abs(energy), energy + 0.5 * (top - energy)


@pytest.mark.parametrize("p, level", _draws(12, 3))
def test_quantization_solve_matches_closed_form(p, level):
    e = nu.quantization_solve(p, level.n, level.eta, quantization_bracket(p, level.E))
    assert e == pytest.approx(level.E, rel=1e-9)


def test_quantization_residual_vanishes_at_closed_form():
    level = energy_combined(P, 0, 1)
    assert abs(nu.quantization_residual(P, level.E, 0, 1)) < 1e-9


def test_quantization_errors():
    with pytest.raises(NonRealDelta):
        nu.quantization_solve(P, 0, 1, (-5.0, 0.0))
    with pytest.raises(NoSignChange):
        nu.quantization_solve(P, 0, 1, (-30.0, -25.0))
