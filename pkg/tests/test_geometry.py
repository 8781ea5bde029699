import numpy as np
import pytest

from kreintwist.clifford import Signature, build_gammas, build_structural
from kreintwist.geometry import (
    MetricField,
    NonDiagonalMetricError,
    OutOfDomainError,
    christoffel,
    christoffel_relation_check,
    dirac_apply_pseudo,
    dirac_decomposition_check,
    fd_convergence_ratio,
    metric_compatibility_residual,
    metric_family,
    plane_wave_spinor,
    poly_spinor,
    reflected_christoffel,
    reflection_isometry_residual,
    spin_connection_coeffs,
    trig_spinor,
    vielbein,
)

H = 1e-3


def test_flat_metric_christoffels_vanish():
    m = metric_family("flat4d")
    x = np.zeros(4)
    ch = christoffel(m, False, x, H)
    assert np.max(np.abs(ch.values)) <= 1e-13
    assert np.max(np.abs(reflected_christoffel(m, x, H).values)) <= 1e-13


def test_exp2d_closed_form():
    # g = diag(exp(2 x0), 1): Gamma^0_00 = d0 g00 / (2 g00) = 1 exactly
    m = metric_family("exp2d")
    for x in [np.array([0.1, -0.2]), np.array([-0.3, 0.4])]:
        ch = christoffel(m, False, x, H)
        assert abs(ch.values[0, 0, 0] - 1.0) <= 1e-6
        assert ch.symmetry_residual() <= 1e-12


def test_conformal_closed_form():
    amp = 0.1
    m = metric_family("conformal2d")
    x = np.array([0.15, -0.1])
    got = christoffel(m, False, x, H).values
    dphi = np.array([amp * np.cos(x[0] + 2 * x[1]), 2 * amp * np.cos(x[0] + 2 * x[1])])
    want = np.zeros((2, 2, 2))
    for l in range(2):
        for mm in range(2):
            for n in range(2):
                want[l, mm, n] = (
                    (l == mm) * dphi[n] + (l == n) * dphi[mm] - (mm == n) * dphi[l]
                )
    assert np.max(np.abs(got - want)) <= 1e-6


def test_out_of_domain_and_margin():
    m = metric_family("exp2d")
    with pytest.raises(OutOfDomainError):
        christoffel(m, False, np.array([0.6, 0.0]), H)
    with pytest.raises(OutOfDomainError):
        christoffel(m, False, np.array([0.5999, 0.0]), H)


def test_singular_metric_rejected():
    from kreintwist.geometry import SingularMetricError

    m = MetricField(2, lambda x: np.diag([x[0], 1.0]), np.array([1.0, 1.0]),
                    np.array([[-1, 1], [-1, 1]]), "degenerate")
    with pytest.raises(SingularMetricError):
        christoffel(m, False, np.array([0.0, 0.0]), H)
    # r that is not spacelike: g_R fails positivity
    bad_r = MetricField(2, lambda x: np.diag([1.0, -1.0]), np.array([1.0, 1.0]),
                        np.array([[-1, 1], [-1, 1]]), "bad-reflection")
    with pytest.raises(SingularMetricError):
        christoffel(bad_r, False, np.array([0.0, 0.0]), H)


def test_reflected_christoffel_sign_bookkeeping():
    m = metric_family("lorentz4d")
    x = np.array([0.1, -0.2, 0.3, 0.15])
    base = christoffel(m, False, x, H).values
    refl = reflected_christoffel(m, x, H).values
    s = m.r_signs
    # spot checks of Gamma^{r l}_{m r n} = s_l s_n Gamma^l_{mn}
    assert refl[1, 0, 1] == pytest.approx(s[1] * s[1] * base[1, 0, 1], abs=1e-15)
    assert refl[1, 0, 0] == pytest.approx(s[1] * s[0] * base[1, 0, 0], abs=1e-15)
    assert refl[0, 2, 3] == pytest.approx(s[0] * s[3] * base[0, 2, 3], abs=1e-15)
    # Euclidean reflection is the identity map on the coefficients
    e = metric_family("exp2d")
    xe = np.array([0.1, 0.1])
    assert np.array_equal(
        reflected_christoffel(e, xe, H).values, christoffel(e, False, xe, H).values
    )


def test_relat_christos_independent_pipelines():
    # left side at step h, right side rebuilt at step h/2: residual is pure
    # FD truncation, far below 1e-5 on the curved families
    for name in ("exp2d", "conformal2d", "lorentz2d", "lorentz4d"):
        m = metric_family(name)
        rng = np.random.default_rng(1)
        lo = m.domain[:, 0] + 4 * H
        hi = m.domain[:, 1] - 4 * H
        for _ in range(5):
            x = lo + (hi - lo) * rng.uniform(size=m.dim)
            lhs = reflected_christoffel(m, x, H).values
            gr = christoffel(m, True, x, H / 2).values
            grinv = np.linalg.inv(m.gR_at(x))
            s = m.r_signs
            dg = np.zeros((m.dim, m.dim, m.dim))
            dgr = np.zeros((m.dim, m.dim, m.dim))
            for k in range(m.dim):
                e = np.zeros(m.dim)
                e[k] = H / 2
                dg[k] = (m.g_at(x + e) - m.g_at(x - e)) / H
                dgr[k] = (m.gR_at(x + e) - m.gR_at(x - e)) / H
            corr = np.zeros_like(lhs)
            for l in range(m.dim):
                for mu in range(m.dim):
                    for n in range(m.dim):
                        corr[l, mu, n] = 0.5 * sum(
                            grinv[l, k] * (s[n] * dg[n][mu, k] - dgr[n][mu, k])
                            for k in range(m.dim)
                        )
            assert np.max(np.abs(lhs - (gr + corr))) <= 1e-5
            assert christoffel_relation_check(m, x, H).value <= 1e-5


def test_metric_compatibility():
    m = metric_family("lorentz4d")
    x = np.array([0.1, -0.2, 0.3, 0.15])
    assert metric_compatibility_residual(m, False, x, H) <= 1e-5
    assert metric_compatibility_residual(m, True, x, H) <= 1e-5


def test_reflection_isometry_exact():
    for name in ("flat2d", "lorentz2d", "lorentz4d"):
        m = metric_family(name)
        x = np.zeros(m.dim)
        assert reflection_isometry_residual(m, x) == 0.0


def test_vielbein_examples():
    flat = metric_family("flat2d", {"signs": (1.0, 1.0)})
    e, einv = vielbein(flat, False, np.zeros(2))
    assert np.array_equal(e, np.eye(2))
    m = MetricField(2, lambda x: np.diag([4.0, -9.0]), np.array([1.0, -1.0]),
                    np.array([[-1, 1], [-1, 1]]), "const")
    e, einv = vielbein(m, False, np.zeros(2))
    assert np.allclose(e, np.diag([0.5, 1.0 / 3.0]))
    assert np.allclose(einv, np.diag([2.0, 3.0]))


def test_vielbein_joint_orthonormality():
    m = metric_family("lorentz4d")
    rng = np.random.default_rng(4)
    for _ in range(5):
        x = -0.4 + 0.8 * rng.uniform(size=4)
        e, einv = vielbein(m, False, x)
        g = m.g_at(x)
        gr = m.gR_at(x)
        assert np.max(np.abs(e @ g @ e.T - np.diag(m.r_signs))) <= 1e-10
        assert np.max(np.abs(e @ gr @ e.T - np.eye(4))) <= 1e-10
        assert np.max(np.abs(e @ einv.T - np.eye(4))) <= 1e-12


def test_vielbein_rejects_nondiagonal():
    bad = MetricField(
        2,
        lambda x: np.array([[1.0, 0.3], [0.3, 1.0]]),
        np.array([1.0, 1.0]),
        np.array([[-1, 1], [-1, 1]]),
        "skew",
    )
    with pytest.raises(NonDiagonalMetricError):
        vielbein(bad, False, np.zeros(2))


def test_spin_connection_flat_vanishes():
    m = metric_family("flat4d")
    c = spin_connection_coeffs(m, np.zeros(4), H)
    for key in ("Gamma_b_mu_a", "GammaR_b_mu_a", "K_b_mu_a", "refl_frame_b_mu_a"):
        assert np.max(np.abs(c[key])) <= 1e-13


def test_spin_connection_euclidean_k_term_vanishes():
    # r = id makes d_ra = d_a and g = g_R: the bracket collapses to zero
    m = metric_family("conformal2d")
    c = spin_connection_coeffs(m, np.array([0.2, -0.1]), H)
    assert np.max(np.abs(c["K_b_mu_a"])) <= 1e-12


def test_frame_identities_on_curved_lorentz():
    m = metric_family("lorentz4d")
    rng = np.random.default_rng(6)
    s = m.r_signs
    for _ in range(3):
        x = -0.4 + 0.8 * rng.uniform(size=4)
        c = spin_connection_coeffs(m, x, H)
        tilde = s[:, None, None] * c["Gamma_b_mu_a"] * s[None, None, :]
        assert np.max(np.abs(c["refl_frame_b_mu_a"] - tilde)) <= 1e-5
        assert np.max(
            np.abs(c["refl_frame_b_mu_a"] - (c["GammaR_b_mu_a"] + c["K_b_mu_a"]))
        ) <= 1e-5


def test_dirac_flat_constant_spinor():
    m = metric_family("flat4d")
    rep = build_gammas(Signature(1, 3))
    psi0 = np.array([1.0, 2.0, -1j, 0.5])
    from kreintwist.geometry import SpinorField

    psi = SpinorField(lambda x: psi0)
    out = dirac_apply_pseudo(m, rep, psi, np.zeros(4), H)
    assert np.linalg.norm(out) <= 1e-13


def test_dirac_plane_wave():
    m = metric_family("flat4d")
    rep = build_gammas(Signature(1, 3))
    k = np.array([0.3, -0.2, 0.5, 0.1])
    psi0 = np.array([1.0, 0.5j, -0.25, 0.125 + 0.3j])
    psi = plane_wave_spinor(k, psi0)
    x = np.array([0.05, 0.1, -0.1, 0.2])
    got = dirac_apply_pseudo(m, rep, psi, x, H)
    want = -sum(k[a] * rep.gammas[a] for a in range(4)) @ psi(x)
    assert np.linalg.norm(got - want) <= 1e-6


def test_dirac_curved_against_analytic_assembly():
    # conformal 2d metric, polynomial spinor: oracle assembles the operator
    # from closed-form Christoffels and analytic spinor partials
    amp = 0.1
    m = metric_family("conformal2d")
    rep = build_gammas(Signature(2, 0))
    psi = poly_spinor(2, 2, seed=9)
    x = np.array([0.2, -0.15])
    got = dirac_apply_pseudo(m, rep, psi, x, H)

    dphi = np.array([amp * np.cos(x[0] + 2 * x[1]), 2 * amp * np.cos(x[0] + 2 * x[1])])
    gamma_coord = np.zeros((2, 2, 2))
    for l in range(2):
        for mm in range(2):
            for n in range(2):
                gamma_coord[l, mm, n] = (
                    (l == mm) * dphi[n] + (l == n) * dphi[mm] - (mm == n) * dphi[l]
                )
    phi_val = amp * np.sin(x[0] + 2 * x[1])
    e_diag = np.exp(-phi_val)  # e_a^mu = e^{-phi} delta
    # frame connection: e^b d_mu e_a + e^b Gamma e_a with analytic d e
    de = np.zeros((2, 2, 2))  # de[mu][a,lam]
    for mu in range(2):
        for a in range(2):
            de[mu][a, a] = -dphi[mu] * e_diag
    frame = np.zeros((2, 2, 2))
    for b in range(2):
        for mu in range(2):
            for a in range(2):
                frame[b, mu, a] = (1.0 / e_diag) * de[mu][a, b] + (
                    1.0 / e_diag
                ) * gamma_coord[b, mu, a] * e_diag
    psix = psi(x)
    oracle = np.zeros(2, dtype=complex)
    for mu in range(2):
        nabla = psi.grad(x, mu)
        for a in range(2):
            for b in range(2):
                nabla = nabla + 0.25 * frame[b, mu, a] * (
                    rep.gammas[a] @ rep.gammas[b] @ psix
                )
        oracle = oracle + 1j * e_diag * (rep.gammas[mu] @ nabla)
    assert np.linalg.norm(got - oracle) <= 1e-5

    # Richardson cross-check: halving the step reproduces the same value
    fine = dirac_apply_pseudo(m, rep, psi, x, H / 2)
    richardson = (4.0 * fine - got) / 3.0
    assert np.linalg.norm(richardson - fine) <= np.linalg.norm(got - fine) + 1e-12


def test_dirac_decomposition_flat():
    m = metric_family("flat4d")
    rep = build_gammas(Signature(1, 3))
    ops = build_structural(rep)
    psi = trig_spinor(4, 4, seed=5)
    res, sgn = dirac_decomposition_check(m, rep, ops, psi, np.zeros(4), H)
    assert res.value <= 1e-12
    assert sgn == -1


def test_dirac_decomposition_euclidean():
    m = metric_family("conformal2d")
    rep = build_gammas(Signature(2, 0))
    ops = build_structural(rep)
    psi = trig_spinor(2, 2, seed=8)
    res, sgn = dirac_decomposition_check(m, rep, ops, psi, np.array([0.1, 0.2]), H)
    assert res.value <= 1e-5
    assert sgn == -1


def test_dirac_decomposition_curved_lorentz():
    m = metric_family("lorentz4d")
    rep = build_gammas(Signature(1, 3))
    ops = build_structural(rep)
    psi = trig_spinor(4, 4, seed=5)
    signs = set()
    pts = [
        np.array([0.1, -0.2, 0.3, 0.15]),
        np.array([-0.3, 0.1, -0.1, 0.4]),
        np.array([0.25, 0.3, 0.2, -0.35]),
    ]
    for x in pts:
        res, sgn = dirac_decomposition_check(m, rep, ops, psi, x, H)
        assert res.value <= 1e-4
        signs.add(sgn)
    assert signs == {-1}


def test_fd_convergence_ratio_second_order():
    m = metric_family("exp2d")
    ratio = fd_convergence_ratio(m, np.array([0.1, -0.2]), H)
    assert 3.5 <= ratio <= 4.5
