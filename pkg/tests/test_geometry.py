import cmath
import math

import numpy as np
import pytest

from resunfold.algebra import BranchedLog
from resunfold.geometry import (
    REGION_INNER,
    REGION_INNER_P,
    REGION_OUTER,
    REGION_OUTER_P,
    DomainConfig,
    OnCut,
    PoleAtZero,
    RamifiedPoint,
    bifurcation_sets,
    chi,
    classify_regions,
    count_components,
    equilibria,
    stability_sweep,
    theta,
    theta_deriv,
    trace_trajectory,
    xi_theta_residuals,
)


def random_generic_point(rng, mu_scale=0.1, eps_scale=0.01):
    while True:
        mu = mu_scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        eps = eps_scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(eps) > 0.1 * eps_scale and abs(mu * mu - eps) > 0.1 * eps_scale:
            return mu, eps


# ---------------------------------------------------------------------------
# ramified points


def test_ramified_point_root_identities(rng):
    for _ in range(30):
        mu, eps = random_generic_point(rng)
        rp = RamifiedPoint.from_values(mu, eps)
        assert abs(rp.s1 ** 2 - (mu + rp.sqrt_eps)) < 1e-14
        assert abs(rp.s2 ** 2 - (mu - rp.sqrt_eps)) < 1e-14
        assert abs((rp.s1 * rp.s2) ** 2 - (mu * mu - eps)) < 1e-12


def test_ramified_point_standard_branch():
    rp = RamifiedPoint.from_values(0.3, 0.01)
    assert abs(rp.s1 - math.sqrt(0.4)) < 1e-15
    assert abs(rp.s2 - math.sqrt(0.2)) < 1e-15


def test_sigma_rho_actions(rng):
    mu, eps = random_generic_point(rng)
    rp = RamifiedPoint.from_values(mu, eps)
    sig = rp.sigma_image()
    assert sig.s1 == rp.s1 and abs(sig.s2 + rp.s2) == 0.0
    assert abs(cmath.exp(sig.log_a) - rp.b) < 1e-14 * max(1, abs(rp.b))
    assert abs(cmath.exp(sig.log_b) - rp.a) < 1e-14 * max(1, abs(rp.a))
    rho = rp.rho_image()
    assert abs(rho.s1 + rp.s2) == 0.0 and abs(rho.s2 + rp.s1) == 0.0
    assert abs(cmath.exp(rho.log_a) + rp.a) < 1e-14 * max(1, abs(rp.a))
    assert abs(cmath.exp(rho.log_b) - rp.b) < 1e-14 * max(1, abs(rp.b))
    # rho turns both parameter sheets by a full turn
    assert abs(rho.eps.arg - rp.eps.arg - 2 * math.pi) < 1e-14


# ---------------------------------------------------------------------------
# theta


def test_theta_simplest_case():
    assert abs(theta(1.0, 0.0, 0.0) + 2.0) < 1e-15
    assert abs(theta(2j, 0.0, 0.0) - (-2.0 / 2j)) < 1e-15


def test_theta_oddness(rng):
    for _ in range(40):
        mu, eps = random_generic_point(rng)
        rp = RamifiedPoint.from_values(mu, eps)
        s = 0.4 * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        try:
            t1 = theta(s, mu, eps, rp)
            t2 = theta(-s, mu, eps, rp)
        except OnCut:
            continue
        assert abs(t1 + t2) < 1e-12


def test_theta_derivative(rng):
    checked = 0
    while checked < 200:
        mu, eps = random_generic_point(rng)
        rp = RamifiedPoint.from_values(mu, eps)
        s = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        if abs(s) < 0.15:
            continue
        if min(abs(s - r) for r in rp.roots()) < 0.1:
            continue
        h = 1e-6
        try:
            fd = (theta(s + h, mu, eps, rp) - theta(s - h, mu, eps, rp)) / (2 * h)
        except OnCut:
            continue
        checked += 1
        ref = theta_deriv(s, mu, eps)
        assert abs(fd - ref) < 1e-6 * max(1.0, abs(ref))


def test_theta_on_cut_raises():
    rp = RamifiedPoint.from_values(0.09, 0.0)
    with pytest.raises(OnCut):
        theta(0.15, 0.09, 0.0, rp)  # on the segment [0, 0.3]


def test_theta_degenerate_limits():
    mu = 0.07 + 0.02j
    s = 0.31 + 0.12j
    lim = theta(s, mu, 1e-10, RamifiedPoint.from_values(mu, 1e-10))
    assert abs(lim - theta(s, mu, 0.0)) < 1e-4
    eps = mu * mu * (1 + 1e-8)
    lim2 = theta(s, mu, eps, RamifiedPoint.from_values(mu, eps))
    assert abs(lim2 - theta(s, mu, mu * mu)) < 1e-4


def test_theta_parameter_periodicity(rng):
    """theta is unchanged when mu or eps gains a full turn of argument,
    as long as the same root branch data is supplied."""
    mu, eps = random_generic_point(rng)
    rp = RamifiedPoint.from_values(mu, eps)
    s = 0.42
    base = theta(s, mu, eps, rp)
    turned = theta(s, BranchedLog.from_complex(mu, 1).project(),
                   BranchedLog.from_complex(eps, 1).project(), rp)
    assert abs(base - turned) < 1e-10


# ---------------------------------------------------------------------------
# chi


def test_chi_values_and_pole():
    assert abs(chi(2.0, 0.0, 0.0) - 1.0) < 1e-15
    with pytest.raises(PoleAtZero):
        chi(0.0, 0.1, 0.01)


def test_chi_zeros_are_roots(rng):
    mu, eps = random_generic_point(rng)
    rp = RamifiedPoint.from_values(mu, eps)
    for r in rp.roots():
        assert abs(chi(r, mu, eps)) < 1e-13


def test_chi_scaling_covariance(rng):
    for _ in range(20):
        omega = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        s = complex(rng.uniform(0.1, 0.5), rng.uniform(-0.3, 0.3))
        mu = 0.05 * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        eps = 0.003 * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        lhs = omega * chi(s, mu, eps)
        rhs = chi(omega * s, omega ** 2 * mu, omega ** 4 * eps) / omega
        assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(lhs))


# ---------------------------------------------------------------------------
# trajectories


def test_trajectory_explicit_flow_oracle():
    """mu = eps = 0: ds/dxi = s^2/4 integrates to s0/(1 - s0 xi / 4)."""
    cfg = DomainConfig(delta_s=2.0, trace_step=0.01, xi_max=50.0)
    rp = RamifiedPoint.from_values(0.0, 0.0)
    rec = trace_trajectory(0.3j, 1.0, rp, cfg)
    exact = 0.3j / (1.0 - 0.3j * rec.xi / 4.0)
    assert np.max(np.abs(rec.s - exact)) < 1e-12
    # stays bounded and heads for the origin inside the upper region
    assert np.all(np.abs(rec.s) <= 0.31)
    assert abs(rec.s[-1]) < abs(rec.s[0])


def test_trajectory_equilibrium_is_fixed():
    rp = RamifiedPoint.from_values(0.05, 0.0016)
    cfg = DomainConfig()
    rec = trace_trajectory(rp.s2, 1.0, rp, cfg, xi_max=5.0)
    assert np.max(np.abs(rec.s - rp.s2)) < 1e-12


def test_trajectory_convergence_tag():
    rp = RamifiedPoint.from_values(0.05, 0.0016)
    rec = trace_trajectory(0.2, 1.0, rp, DomainConfig())
    assert rec.terminal == "converged"
    assert abs(rec.target - rp.s2) < 1e-12
    assert abs(rec.s[-1] - rp.s2) < 1e-8


def test_xi_theta_duality():
    """omega * dxi == 2 dtheta along trajectories, at quadrature accuracy."""
    rp = RamifiedPoint.from_values(0.06, 0.001)
    for s0 in (0.25 + 0.08j, 0.2 - 0.1j):
        rec = trace_trajectory(s0, cmath.exp(0.2j), rp, DomainConfig(trace_step=0.01))
        res = xi_theta_residuals(rec)
        good = res[~np.isnan(res)]
        assert len(good) > 50
        assert float(np.max(good)) < 1e-6


def test_xi_theta_duality_imaginary_axis_seed():
    """Real eps > 0, mu = 0: centers surround the zeros; a trajectory
    seeded on the imaginary axis still satisfies the duality until it
    converges, exits, or times out."""
    rp = RamifiedPoint.from_values(0.0, 0.001)
    rec = trace_trajectory(0.3j, 1.0, rp, DomainConfig(trace_step=0.01),
                           xi_max=60.0)
    assert rec.terminal in ("converged", "left-annulus", "max-length")
    res = xi_theta_residuals(rec)
    good = res[~np.isnan(res)]
    assert len(good) > 20
    assert float(np.max(good)) < 1e-6


# ---------------------------------------------------------------------------
# regions


def test_classify_four_regions():
    rp = RamifiedPoint.from_values(0.06, 0.001)
    pts, labels = classify_regions(rp, 1.0, DomainConfig(), grid=(41, 41))
    counts = {k: int(np.sum(labels == k)) for k in
              (REGION_INNER, REGION_INNER_P, REGION_OUTER, REGION_OUTER_P)}
    assert all(v > 0 for v in counts.values())
    assert counts[REGION_INNER] == counts[REGION_INNER_P]
    assert counts[REGION_OUTER] == counts[REGION_OUTER_P]


def test_classify_inner_empty_at_ramification():
    rp = RamifiedPoint.from_values(0.1, 0.01)  # mu^2 = eps
    _, labels = classify_regions(rp, 1.0, DomainConfig(), grid=(41, 41))
    assert int(np.sum(labels == REGION_INNER)) == 0
    assert int(np.sum(labels == REGION_INNER_P)) == 0
    assert int(np.sum(labels == REGION_OUTER)) > 0


def test_classify_two_inner_components_at_eps_zero():
    rp = RamifiedPoint.from_values(0.04, 0.0)
    pts, labels = classify_regions(rp, 1.0, DomainConfig(), grid=(61, 61))
    assert int(np.sum(labels == REGION_INNER)) > 10
    n = count_components(pts, labels, REGION_INNER, 61, 61,
                         exclude=[rp.s1, -rp.s1], exclude_radius=0.045)
    assert n == 2


def test_classify_p_symmetry(rng):
    rp = RamifiedPoint.from_values(0.06, 0.001)
    cfg = DomainConfig()
    grid = (np.linspace(-0.45, 0.45, 31)[None, :]
            + 1j * np.linspace(-0.45, 0.45, 31)[:, None]).ravel()
    _, lab = classify_regions(rp, 1.0, cfg, grid=grid)
    _, lab_neg = classify_regions(rp, 1.0, cfg, grid=-grid)
    swap = {0: 0, REGION_INNER: REGION_INNER_P, REGION_INNER_P: REGION_INNER,
            REGION_OUTER: REGION_OUTER_P, REGION_OUTER_P: REGION_OUTER}
    assert all(swap[int(a)] == int(b) for a, b in zip(lab, lab_neg))


# ---------------------------------------------------------------------------
# bifurcations


def test_sigma_o_degenerates_at_eps_zero():
    curves = bifurcation_sets(0.0, 100)
    so = curves["sigma_O"]
    assert np.all(np.abs(so.imag) < 1e-15)
    assert np.all(so.real < 0)


def test_sigma_o_vertex_eps_one():
    so = bifurcation_sets(1.0, 801)["sigma_O"]
    vertex = so[np.argmin(np.abs(so))]
    assert abs(vertex - (-1.0)) < 1e-4


def test_sigma_i_rays_eps_one():
    curves = bifurcation_sets(1.0, 50)
    assert abs(curves["sigma_I_minus"][0] - (-1.0)) < 1e-14
    assert abs(curves["sigma_I_plus"][0] - 1.0) < 1e-14
    assert curves["sigma_I_minus"][-1].real < -1.0


def test_stability_flip_across_sigma_i():
    eps = 0.01
    mu_star = -cmath.sqrt(eps) - eps * 0.5
    path = [mu_star + 1j * u * eps for u in np.linspace(-1e-2, 1e-2, 100)]
    vals = stability_sweep(path, eps)
    flips = int(np.sum(np.abs(np.diff(np.sign(vals))) > 0))
    assert flips == 1


def test_multiplier_formula(rng):
    mu, eps = random_generic_point(rng)
    rp = RamifiedPoint.from_values(mu, eps)
    for e in equilibria(rp):
        # numerical derivative of chi at the equilibrium
        h = 1e-6
        num = (chi(e.s + h, mu, eps) - chi(e.s - h, mu, eps)) / (2 * h)
        assert abs(num - e.multiplier) < 1e-6 * max(1.0, abs(e.multiplier))
