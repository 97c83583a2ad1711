"""1D Fabry-Perot mode mixing: coefficients, tables, moments, measures."""

import io
import math

import numpy as np
import pytest

from cavent import measures
from cavent.cavity1d import (
    BogoliubovTable,
    InitialState,
    _integrate_table,
    p1_entanglement,
    p1_mean_photons,
    p1_rho1,
    p1_squeezed_correlations,
    p1_total_photons,
    p1_zeta,
    p2_entanglement,
    p2_moments_closed,
    p2_moments_ode,
    rho_closed_form,
    rho_coefficient,
    rho_elliptic,
    rho_ode_table,
    unitarity_residuals,
    zeta_sum_analytic,
)
from cavent.errors import DomainError
from cavent.gaussian import moments_to_covariance, symplectic_spectrum
from cavent.specfun import elliptic_ke


def kappa_tau(kappa: float, p: int = 2) -> float:
    return math.atanh(kappa) / p


class TestClosedFormCoefficients:
    def test_initial_conditions(self):
        for (j, m, n, p) in ((1, 0, 0, 2), (1, 2, 2, 2), (0, 3, 3, 1),
                             (1, 1, 3, 2), (0, 2, 5, 1)):
            want = 1.0 if m == n else 0.0
            assert rho_closed_form(j, m, n, p, 0.0) == want

    def test_first_column_elliptic_value(self):
        # rho_1^(1) = (2/pi) E(kappa)
        tau = kappa_tau(0.5)
        pair = elliptic_ke(1.0 / math.cosh(2.0 * tau))
        assert rho_coefficient(1, 1, 2, tau) == pytest.approx(
            2.0 * pair.e_big / math.pi, rel=1e-12)

    def test_large_time_asymptotics(self):
        # rho_{2m+1}^(1) -> 2 (-1)^m / (pi (2m+1)), and the negative-index
        # partners approach the same values
        for m in range(5):
            want = 2.0 * (-1) ** m / (math.pi * (2 * m + 1))
            assert rho_coefficient(2 * m + 1, 1, 2, 8.0) == pytest.approx(
                want, abs=1e-3)
            assert rho_coefficient(-(2 * m + 1), 1, 2, 8.0) == pytest.approx(
                want, abs=1e-3)

    def test_selection_rule(self):
        assert rho_coefficient(2, 3, 2, 0.7) == 0.0  # parity mismatch
        assert rho_coefficient(-4, 8, 2, 0.7) == 0.0  # j = 0, negative index
        assert rho_coefficient(-1, 2, 1, 0.7) == 0.0  # p = 1 negative index

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            rho_closed_form(1, 0, 0, 0, 0.5)
        with pytest.raises(DomainError):
            rho_closed_form(2, 0, 0, 2, 0.5)
        with pytest.raises(DomainError):
            rho_closed_form(0, 0, 0, 2, 0.5)  # upper index would be 0
        with pytest.raises(DomainError):
            rho_closed_form(1, 0, 0, 2, -0.1)


class TestEllipticCoefficients:
    def test_printed_forms_at_kappa_06(self):
        # independent transcription of the first-column elliptic forms
        tau = kappa_tau(0.6)
        kap, kt = 0.6, 0.8
        pair = elliptic_ke(kt)
        kk, ee = pair.k_big, pair.e_big
        # the negative-first coefficient: the 1/kappa prefactor follows from
        # the system's initial slope (d rho_-1/d tau = rho_1 = 1 at tau = 0)
        # and the tau -> infinity limit 2/pi; a complementary-modulus
        # denominator would violate both
        want_m1 = 2.0 / (math.pi * kap) * (ee - kt ** 2 * kk)
        assert rho_elliptic(-1, tau) == pytest.approx(want_m1, rel=1e-12)
        want_3 = 2.0 / (3.0 * math.pi * kap) * ((1 - 2 * kap ** 2) * ee - kt ** 2 * kk)
        assert rho_elliptic(3, tau) == pytest.approx(want_3, rel=1e-12)

    def test_cross_oracle_against_closed_form(self):
        for tau in (0.025, 0.3, 0.8, 1.4, kappa_tau(0.95)):
            for idx in (1, -1, 3, -3, 5, -5, 7, -7, 9, -9):
                a = rho_elliptic(idx, tau)
                b = rho_coefficient(idx, 1, 2, tau)
                assert a == pytest.approx(b, abs=1e-10), (idx, tau)

    def test_even_index_rejected(self):
        with pytest.raises(DomainError):
            rho_elliptic(2, 0.5)


class TestTableIntegration:
    def test_identity_at_zero(self):
        tab = rho_ode_table(2, 0.0, window=(12, 8))
        for n in range(1, 9):
            for m in range(-12, 13):
                want = 1.0 if m == n else 0.0
                assert tab.get(m, n) == want

    def test_against_closed_forms_at_tau_one(self):
        tab = rho_ode_table(2, 1.0, window=(60, 12), step=1e-3)
        worst = 0.0
        for n in range(1, 13):
            for m in range(-25, 26):
                if m == 0 or (m - n) % 2 != 0:
                    continue
                worst = max(worst, abs(tab.get(m, n)
                                       - rho_coefficient(m, n, 2, 1.0)))
        assert worst < 1e-7

    def test_p1_table_matches_secant_powers(self):
        tab = rho_ode_table(1, 0.8, window=(40, 6))
        c2 = 1.0 / math.cosh(0.8) ** 2
        t = math.tanh(0.8)
        for m in range(1, 25):
            assert tab.get(m, 1) == pytest.approx(t ** (m - 1) * c2, abs=1e-9)
        # negative lower indices stay exactly zero at p = 1
        neg = tab.data[:, :tab.m_max]
        assert np.abs(neg).max() == 0.0

    def test_parity_selection_exact(self):
        tab = rho_ode_table(2, 0.6, window=(30, 10))
        for n in range(1, 11):
            for m in range(-30, 31):
                if m != 0 and (m - n) % 2 != 0:
                    assert tab.get(m, n) == 0.0

    def test_upper_index_recurrences_by_finite_differences(self):
        # d rho_m^(n) / d tau = n sigma [rho_m^(n-p) - rho_m^(n+p)], n > p;
        # for n <= p the image index reflects: n = 1, p = 2 couples to the
        # negative-index partner of the first column
        d = 1e-4
        tabs = {t: rho_ode_table(2, 0.8 + t * d, window=(60, 16))
                for t in (-1, 0, 1)}
        worst = 0.0
        for n in range(3, 9):
            for m in (-5, -1, 1, 3, 7):
                lhs = (tabs[1].get(m, n) - tabs[-1].get(m, n)) / (2 * d)
                rhs = n * (tabs[0].get(m, n - 2) - tabs[0].get(m, n + 2))
                worst = max(worst, abs(lhs - rhs))
        for m in (-3, -1, 1, 3):
            lhs = (tabs[1].get(m, 1) - tabs[-1].get(m, 1)) / (2 * d)
            rhs = tabs[0].get(-m, 1) - tabs[0].get(m, 3)
            worst = max(worst, abs(lhs - rhs))
        assert worst < 1e-5

    def test_window_certification_failure(self):
        from cavent.errors import ConvergenceError

        with pytest.raises(ConvergenceError):
            rho_ode_table(2, 2.5, window=(10, 6))

    def test_step_guard(self):
        with pytest.raises(DomainError):
            rho_ode_table(2, 0.5, window=(20, 10), step=5e-3)

    def test_dump_round_trip(self):
        tab = rho_ode_table(2, 0.4, window=(8, 4))
        buf = io.StringIO()
        tab.dump(buf)
        lines = buf.getvalue().strip().splitlines()
        head = lines[0].split()
        assert head[0] == "2" and head[2] == "8" and head[3] == "4"
        assert len(lines) == 1 + 16 * 4
        m, n, v = lines[1].split()
        assert tab.get(int(m), int(n)) == float(v)


class TestUnitarity:
    def test_zero_time_table_is_exact(self):
        tab = rho_ode_table(2, 0.0, window=(20, 12))
        assert unitarity_residuals(tab, depth=10) == (0.0, 0.0, 0.0)

    def test_deep_interior_at_moderate_time(self):
        # at tau = 0.5 the sums tails die within ~40 indices, so an
        # integrated table verifies all three identities deeply
        tab = rho_ode_table(2, 0.5, window=(140, 140), step=1e-3)
        r81, r82, r83 = unitarity_residuals(tab, depth=24)
        assert r81 < 1e-7
        assert r82 < 1e-7
        assert r83 < 1e-8

    def test_closed_form_strips_at_tau_one(self):
        # identity sums at tau = 1 extend over ~1e3 indices (fat tails with
        # e-folding 2/|ln kappa| ~ 55); closed-form strips make the window
        # affordable
        wide = BogoliubovTable.from_closed_form(2, 1.0, (1300, 10))
        tall = BogoliubovTable.from_closed_form(2, 1.0, (10, 1500))
        r81 = unitarity_residuals(wide, depth=8)[0]
        _, r82, r83 = unitarity_residuals(tall, depth=8)
        assert r81 < 1e-9
        assert r82 < 1e-9
        assert r83 < 1e-12

    def test_truncated_window_negative_control(self):
        data = _integrate_table(2, 2.0, 5, 5, 1e-3)
        tab = BogoliubovTable(p=2, tau=2.0, kappa_time=math.tanh(4.0),
                              kappa_tilde=1.0 / math.cosh(4.0), data=data,
                              m_max=5, n_max=5)
        residuals = unitarity_residuals(tab, depth=4)
        assert max(residuals) > 1e-3


class TestPairMomentsP2:
    def test_zero_time(self):
        mom = p2_moments_ode(1, 3, 0.0).moments
        for field in ("a_rs", "adag_r_a_s", "n_r", "n_s", "a_rr", "a_ss"):
            assert getattr(mom, field) == 0.0

    def test_energy_closed_form_equal_modes(self):
        # E_1 = (2/pi^2) K (2E - kt^2 K)
        tau = kappa_tau(0.5)
        pair = elliptic_ke(1.0 / math.cosh(2 * tau))
        want = 2.0 / math.pi ** 2 * pair.k_big * (
            2.0 * pair.e_big - pair.kappa_tilde ** 2 * pair.k_big)
        got = p2_moments_ode(1, 1, tau).moments.n_r + 0.5
        assert got == pytest.approx(want, abs=1e-8)

    def test_cross_moment_closed_form(self):
        # <a_1 a_3> at kappa = 0.5 against the printed elliptic combination
        tau = kappa_tau(0.5)
        pair = elliptic_ke(1.0 / math.cosh(2 * tau))
        kk, ee, kt2 = pair.k_big, pair.e_big, pair.kappa_tilde ** 2
        kap = 0.5
        want = (-2.0 * math.sqrt(3.0) / (3.0 * math.pi ** 2 * kap ** 2)
                * (kt2 * kk ** 2 - 2.0 * ee * kk + (1.0 + kap ** 2) * ee ** 2))
        got = p2_moments_ode(1, 3, tau).moments.a_rs
        assert got == pytest.approx(want, abs=1e-8)

    @pytest.mark.parametrize("pair", [(1, 1), (3, 3), (5, 5), (1, 3), (1, 5), (3, 5)])
    def test_closed_vs_ode_all_pairs(self, pair):
        for kappa in (0.2, 0.6, 0.9):
            tau = kappa_tau(kappa)
            mo = p2_moments_ode(*pair, tau).moments
            mc = p2_moments_closed(*pair, tau).moments
            for field in ("a_rs", "adag_r_a_s", "n_r", "n_s"):
                a, b = getattr(mo, field), getattr(mc, field)
                assert a == pytest.approx(b, abs=1e-8), (pair, kappa, field)
            for field in ("a_rr", "a_ss"):
                a, b = getattr(mo, field), getattr(mc, field)
                if not math.isnan(b.real if isinstance(b, complex) else b):
                    assert a == pytest.approx(b, abs=1e-8), (pair, kappa, field)

    def test_vacuum_limit_of_closed_forms(self):
        mom = p2_moments_closed(1, 3, 0.0).moments
        assert mom.n_r == 0.0 and mom.a_rs == 0.0

    def test_unsupported_pair(self):
        with pytest.raises(DomainError):
            p2_moments_closed(1, 7, 0.5)

    def test_even_modes_rejected(self):
        with pytest.raises(DomainError):
            p2_moments_ode(2, 3, 0.5)

    def test_late_time_moment_growth(self):
        # <a_r^+ a_s> ~ -<a_r a_s> ~ (8 tau / pi^2 sqrt(r s)) (-1)^((r-s)/2)
        for (r, s) in ((1, 3), (3, 5)):
            m6 = p2_moments_ode(r, s, 6.0).moments
            m10 = p2_moments_ode(r, s, 10.0).moments
            slope = (m10.adag_r_a_s.real - m6.adag_r_a_s.real) / 4.0
            want = 8.0 / (math.pi ** 2 * math.sqrt(r * s)) * (-1) ** ((r - s) // 2)
            assert slope == pytest.approx(want, rel=0.05)
            assert m10.adag_r_a_s.real == pytest.approx(-m10.a_rs.real, rel=0.1)

    def test_quadrature_covariances_vanish(self):
        # all x-p covariances of the evolved pair are identically zero
        cov = moments_to_covariance(p2_moments_ode(1, 3, kappa_tau(0.6)).moments)
        assert cov.q[0, 1] == 0.0 and cov.q[2, 3] == 0.0
        assert cov.q[0, 3] == 0.0 and cov.q[1, 2] == 0.0


class TestP2Entanglement:
    def test_zero_time(self):
        ms = p2_entanglement(1, 3, 0.0)
        for v in (ms.y, ms.y_tilde, ms.l_tilde, ms.k2, ms.z, ms.i_c, ms.j_c):
            assert v == 0.0

    def test_monotone_growth_and_mode_ordering(self):
        kappas = np.linspace(0.05, 0.99, 25)
        y13 = [p2_entanglement(1, 3, kappa_tau(k)).y for k in kappas]
        y35 = [p2_entanglement(3, 5, kappa_tau(k)).y for k in kappas]
        assert all(b >= a - 1e-12 for a, b in zip(y13, y13[1:]))
        assert all(a > b for a, b in zip(y13, y35))
        assert y13[-1] > 0.9  # tends to unity as kappa -> 1

    def test_symplectic_pair_eigenvalues_match_printed_form(self):
        # the factorized forms for the joint spectrum against the generic
        # biquadratic machinery
        mom = p2_moments_ode(1, 3, kappa_tau(0.5)).moments
        cov = moments_to_covariance(mom)
        sxx_r, spp_r = cov.q[0, 0], cov.q[1, 1]
        sxx_s, spp_s = cov.q[2, 2], cov.q[3, 3]
        sxx_rs, spp_rs = cov.q[0, 2], cov.q[1, 3]
        a_sum = spp_r * sxx_r + spp_s * sxx_s + 2.0 * spp_rs * sxx_rs
        root = 2.0 * math.sqrt((spp_r * spp_s - spp_rs ** 2)
                               * (sxx_r * sxx_s - sxx_rs ** 2))
        f_plus = 0.5 * (math.sqrt(a_sum + root) + math.sqrt(a_sum - root))
        f_minus = 0.5 * (math.sqrt(a_sum + root) - math.sqrt(a_sum - root))
        spec = symplectic_spectrum(cov)
        assert spec.kappa1 == pytest.approx(f_plus, abs=1e-10)
        assert spec.kappa2 == pytest.approx(f_minus, abs=1e-10)

    def test_single_mode_entropy_number(self):
        # the reduced entropy is controlled by f_k = sqrt(sigma_pp sigma_xx)
        mom = p2_moments_ode(1, 3, kappa_tau(0.5)).moments
        cov = moments_to_covariance(mom)
        f_1 = math.sqrt(cov.q[0, 0] * cov.q[1, 1])
        s_1 = measures.single_mode_entropy(cov, 1)
        want = ((f_1 + 0.5) * math.log(f_1 + 0.5)
                - (f_1 - 0.5) * math.log(f_1 - 0.5))
        assert s_1 == pytest.approx(want, rel=1e-12)

    def test_late_time_decay_constants(self):
        # 1 - Ltilde ~ 0.88/sqrt(tau), 1 - Z ~ 1.19/sqrt(tau)
        ms = p2_entanglement(1, 3, 40.0)
        assert 1.0 - ms.l_tilde == pytest.approx(0.88 / math.sqrt(40.0), rel=0.15)
        assert 1.0 - ms.z == pytest.approx(1.19 / math.sqrt(40.0), rel=0.15)


class TestSemiResonance:
    def test_zeta_initial_values(self):
        assert p1_zeta(1, 0.0) == 1.0
        for m in range(2, 7):
            assert p1_zeta(m, 0.0) == 0.0

    def test_zeta_bounded_by_one(self):
        for m in (1, 2, 3, 5, 9, 17):
            for tau in np.linspace(0.0, 8.0, 40):
                assert p1_zeta(m, float(tau)) <= 1.0 + 1e-15

    def test_photon_number_conservation_analytic(self):
        # numeric window sum against the closed geometric partial sum, and
        # the untruncated sum is identically 1
        for tau in (0.3, 1.0, 2.5):
            q = math.tanh(tau) ** 2
            m_upto = 400
            numeric = sum(p1_zeta(m, tau) ** 2 for m in range(1, m_upto + 1))
            assert numeric == pytest.approx(zeta_sum_analytic(tau, m_upto), abs=1e-10)
        assert zeta_sum_analytic(1.0) == 1.0

    def test_total_photdone_conservation(self):
        for state in (InitialState.fock(3), InitialState.thermal(2.5),
                      InitialState.squeezed_vacuum(1.2),
                      InitialState.coherent(2.0)):
            for tau in (0.5, 2.0, 5.0):
                total = p1_total_photons(state, tau)
                assert total == pytest.approx(state.mean_photons, rel=1e-8)

    def test_mean_photpéons_fock_migration(self):
        state = InitialState.fock(1)
        assert p1_mean_photons(state, 1, 0.0) == 1.0
        for m in (2, 3, 5):
            assert p1_mean_photons(state, m, 0.0) == 0.0
        # photons migrate to ever-higher modes: every fixed mode empties
        for m in (1, 2, 5):
            assert p1_mean_photons(state, m, 20.0) < 1e-8

    def test_coherent_state_never_entangles(self):
        for tau in (0.2, 1.0, 3.0):
            ms = p1_entanglement(InitialState.coherent(1.7), 1, 2, tau)
            assert ms.y == 0.0 and ms.l_tilde == 0.0

    def test_fock_bound(self):
        # Y never exceeds 1/sqrt(2) for Fock input
        for n in (1, 50, 1000):
            state = InitialState.fock(n)
            for tau in np.linspace(0.0, 6.0, 61):
                ms = p1_entanglement(state, 1, 2, float(tau))
                assert ms.y <= 1.0 / math.sqrt(2.0) + 1e-10
                assert ms.gaussian_equivalent

    def test_squeezed_rise_and_fall(self):
        state = InitialState.squeezed_vacuum(math.asinh(math.sqrt(1000.0)))
        peak = max(p1_entanglement(state, 1, 2, t).y
                   for t in np.linspace(0.1, 3.0, 30))
        assert peak > 0.95
        assert p1_entanglement(state, 1, 2, 12.0).y < 0.05
        assert not p1_entanglement(state, 1, 2, 1.0).gaussian_equivalent

    def test_squeezed_correlation_coefficients_printed_form(self):
        squeeze = 0.9
        state = InitialState.squeezed_vacuum(squeeze)
        tau = 0.8
        r_x, r_p = p1_squeezed_correlations(squeeze, 1, 2, tau)
        mom = state.central_moments
        zr, zs = p1_zeta(1, tau), p1_zeta(2, tau)
        from cavent.gaussian import SecondMoments

        cov = moments_to_covariance(SecondMoments(
            a_rs=zr * zs * mom[0], adag_r_a_s=zr * zs * mom[1],
            n_r=zr ** 2 * mom[1], n_s=zs ** 2 * mom[1],
            a_rr=zr ** 2 * mom[0], a_ss=zs ** 2 * mom[0]))
        got_rx = cov.q[0, 2] / math.sqrt(cov.q[0, 0] * cov.q[2, 2])
        got_rp = cov.q[1, 3] / math.sqrt(cov.q[1, 1] * cov.q[3, 3])
        assert got_rx == pytest.approx(r_x, abs=1e-12)
        assert got_rp == pytest.approx(r_p, abs=1e-12)
        # and the factorized purity/distance forms agree with the generic ones
        ms = p1_entanglement(state, 1, 2, tau)
        one = (1 - r_x ** 2) * (1 - r_p ** 2)
        assert ms.l_tilde == pytest.approx(1.0 - math.sqrt(one), abs=1e-10)
        want_z = (1.0 + math.sqrt(one) - 2.0 * math.sqrt(
            one / ((1 - r_x ** 2 / 4) * (1 - r_p ** 2 / 4))))
        assert ms.z == pytest.approx(want_z, abs=1e-10)

    def test_even_odd_closed_form(self):
        # the trace coefficient from the exact eigenstate moments equals the
        # symmetric closed form with the conjugate-parity photon number; the
        # printed shorthand with |alpha|^2 in its place only holds when
        # tanh|alpha|^2 ~ 1
        tau = 0.7
        zr, zs = p1_zeta(1, tau), p1_zeta(2, tau)

        def shorthand(nbar, alpha2):
            den = math.sqrt(2 * (nbar * zr ** 2 + 0.5) * (nbar * zs ** 2 + 0.5))
            return zr * zs * math.sqrt(nbar * (nbar + alpha2)) / den

        big = InitialState.even_coherent(4.0)  # alpha^2 = 16, tanh ~ 1
        ms_big = p1_entanglement(big, 1, 2, tau)
        assert ms_big.y == pytest.approx(shorthand(big.mean_photons, 16.0), abs=1e-10)
        assert ms_big.gaussian_equivalent

        small = InitialState.even_coherent(1.0)  # alpha^2 = 1: shorthand off
        ms_small = p1_entanglement(small, 1, 2, tau)
        exact_num = math.sqrt(small.mean_photons ** 2 + 1.0)
        den = math.sqrt(2 * (small.mean_photons * zr ** 2 + 0.5)
                        * (small.mean_photons * zs ** 2 + 0.5))
        assert ms_small.y == pytest.approx(zr * zs * exact_num / den, abs=1e-12)
        assert abs(ms_small.y - shorthand(small.mean_photons, 1.0)) > 1e-3

    def test_odd_cat_small_alpha_is_single_photon(self):
        # odd cat at alpha -> 0 degenerates to the one-photon Fock state
        tau = 0.9
        ms_odd = p1_entanglement(InitialState.odd_coherent(1e-4), 1, 2, tau)
        ms_fock = p1_entanglement(InitialState.fock(1), 1, 2, tau)
        assert ms_odd.y == pytest.approx(ms_fock.y, rel=1e-4)

    def test_thermal_state_full_measures(self):
        ms = p1_entanglement(InitialState.thermal(50.0), 1, 2, 0.8)
        assert 0.0 < ms.y < 1.0 / math.sqrt(2.0) + 1e-10
        assert not ms.gaussian_equivalent
        assert ms.l_tilde > 0.0 and ms.z > 0.0

    def test_same_mode_rejected(self):
        with pytest.raises(DomainError):
            p1_entanglement(InitialState.fock(1), 2, 2, 0.5)
