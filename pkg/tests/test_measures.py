"""Entanglement measures: closed values, identities, invariances."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavent import measures
from cavent.errors import ApproximationDomainWarning, DomainError
from cavent.gaussian import TwoModeCovariance, purity, single_mode_purity
from cavent.measures import (
    compact_entropy,
    covariance_coefficients,
    distance_coefficient,
    gaussian_entropy_two_mode,
    group_correlation,
    index_of_correlation,
    k_tilde_squared,
    linear_entropy_measures,
    measure_set,
    purity_coefficient,
    single_mode_entropy,
    small_entanglement_approx,
)

from conftest import local_rotation, random_covariance, random_pure_covariance

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def two_mode_squeezed(r: float) -> TwoModeCovariance:
    """Two-mode squeezed vacuum: correlated pure state with mu_1 = 1/cosh 2r."""
    ch, sh = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    q = np.diag([ch, ch, ch, ch])
    q[0, 2] = q[2, 0] = sh
    q[1, 3] = q[3, 1] = -sh
    return TwoModeCovariance(q)


def correlated_zero_xp(rx: float, rp: float, var: float = 2.5) -> TwoModeCovariance:
    """Equal-variance state with given x-x and p-p correlation coefficients."""
    q = np.diag([var, var, var, var])
    q[0, 2] = q[2, 0] = rx * var
    q[1, 3] = q[3, 1] = rp * var
    return TwoModeCovariance(q)


class TestCovarianceCoefficients:
    def test_block_diagonal_is_zero(self):
        y, yt = covariance_coefficients(TwoModeCovariance.thermal(3.0, 2.0))
        assert y == 0.0 and yt == 0.0

    def test_equal_energy_makes_both_equal(self):
        cov = correlated_zero_xp(0.4, -0.4)
        y, yt = covariance_coefficients(cov)
        assert y == pytest.approx(yt, rel=1e-14)
        assert 0.0 < yt <= y < 1.0

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds)
    def test_ordering_bound(self, seed):
        cov = random_covariance(np.random.default_rng(seed))
        y, yt = covariance_coefficients(cov)
        assert 0.0 <= yt <= y < 1.0


class TestPurityCoefficient:
    def test_block_diagonal_is_zero(self):
        assert purity_coefficient(TwoModeCovariance.thermal(2.0, 5.0)) == \
            pytest.approx(0.0, abs=1e-14)

    def test_pure_state_formula(self):
        # mu_1 = 0.8 -> Ltilde = 1 - mu_1^2 = 0.36
        r = 0.5 * math.acosh(1.25)
        cov = two_mode_squeezed(r)
        assert single_mode_purity(cov, 1) == pytest.approx(0.8, rel=1e-12)
        assert purity_coefficient(cov) == pytest.approx(0.36, rel=1e-10)

    def test_group_correlation_identity(self):
        cov = correlated_zero_xp(0.5, -0.3)
        lt = purity_coefficient(cov)
        assert group_correlation(cov) == pytest.approx(lt * (2 - lt), abs=1e-12)

    def test_group_correlation_limits(self):
        # Ltilde = 0.5 -> K^2 = 0.75; Ltilde -> 1 drives K^2 -> 1
        assert 0.5 * (2 - 0.5) == 0.75
        cov = correlated_zero_xp(0.999, -0.999, var=40.0)
        assert group_correlation(cov) > 0.99


class TestPurityTriples:
    def test_k_tilde_squared(self):
        assert k_tilde_squared(1.0, 1.0, 1.0) == 0.0
        assert k_tilde_squared(0.25, 0.5, 0.5) == pytest.approx(0.0, abs=1e-14)
        assert k_tilde_squared(1.0, 2 ** -0.5, 2 ** -0.5) == pytest.approx(0.75)
        with pytest.raises(DomainError):
            k_tilde_squared(0.5, 1.0, 1.0)

    def test_linear_entropy_measures(self):
        assert linear_entropy_measures(1.0, 1.0, 1.0) == (0.0, 0.0, 0.0)
        # factorized mixed state: L = L_fact > 0 with no entanglement at all
        l_raw, l_fact, l_tilde = linear_entropy_measures(0.25, 0.5, 0.5)
        assert l_raw == pytest.approx(0.25)
        assert l_fact == pytest.approx(0.25)
        assert l_tilde == pytest.approx(0.0, abs=1e-14)
        # pure entangled
        l_raw, _, l_tilde = linear_entropy_measures(1.0, 0.8, 0.8)
        assert l_raw == pytest.approx(0.4, rel=1e-14)
        assert l_tilde == pytest.approx(0.36, rel=1e-14)
        assert l_tilde == pytest.approx(0.25 * l_raw * (4.0 - l_raw), abs=1e-12)


class TestDistance:
    def test_block_diagonal_is_zero(self):
        assert distance_coefficient(TwoModeCovariance.thermal(4.0, 2.0)) == \
            pytest.approx(0.0, abs=1e-13)

    def test_small_correlation_relation(self):
        # Z ~ Ltilde / 2 in the weak-correlation regime
        cov = correlated_zero_xp(0.05, -0.04)
        z = distance_coefficient(cov)
        lt = purity_coefficient(cov)
        assert z == pytest.approx(lt / 2.0, rel=0.05)

    def test_strong_correlation_against_printed_form(self):
        # independent oracle: the factorized closed form in the correlation
        # coefficients for zero x-p covariance
        rx = rp = 0.9
        cov = correlated_zero_xp(rx, -rp, var=3.0)
        one = (1 - rx ** 2) * (1 - rp ** 2)
        want = 1.0 + math.sqrt(one) - 2.0 * math.sqrt(
            one / ((1 - rx ** 2 / 4) * (1 - rp ** 2 / 4)))
        assert distance_coefficient(cov) == pytest.approx(want, rel=1e-12)


class TestEntropies:
    def test_vacuum_entropy_zero(self):
        assert gaussian_entropy_two_mode(TwoModeCovariance.vacuum()) == \
            pytest.approx(0.0, abs=1e-12)

    def test_thermal_entropy_occupation_form(self):
        # sum of single-mode thermal entropies (nbar+1)ln(nbar+1) - nbar ln nbar
        th1, th3 = 3.0, 2.0
        want = 0.0
        for th in (th1, th3):
            nbar = (th - 1.0) / 2.0
            want += (nbar + 1) * math.log(nbar + 1) - nbar * math.log(nbar)
        cov = TwoModeCovariance.thermal(th1, th3)
        assert gaussian_entropy_two_mode(cov) == pytest.approx(want, rel=1e-12)

    def test_pure_two_mode_squeezed_entropy_zero(self):
        assert gaussian_entropy_two_mode(two_mode_squeezed(0.7)) == \
            pytest.approx(0.0, abs=1e-6)

    def test_index_of_correlation_block_diagonal(self):
        assert index_of_correlation(TwoModeCovariance.thermal(5.0, 2.0)) == \
            pytest.approx(0.0, abs=1e-12)

    def test_index_of_correlation_vacuum_resonance_maximum(self):
        # derived oracle: for the symmetric-resonance vacuum state at the
        # peak, Ic = (g0+1)ln(g0+1) - (g0-1)ln(g0-1) - 2 ln 2 with
        # g0^2 = 1 + 8 nu/(2 nu - 1)^2
        from cavent import cavity3d

        nu = 50.0 / 3.0
        p = cavity3d.Cavity3DParams(nu=nu)
        tau = 0.5 * math.pi / p.rho  # sin^4(rho tau) = 1
        cov = cavity3d.propagated_covariance(p, cavity3d.SlowTime(tau))
        g0 = math.sqrt(1.0 + 8.0 * nu / (2.0 * nu - 1.0) ** 2)
        want = ((g0 + 1) * math.log(g0 + 1) - (g0 - 1) * math.log(g0 - 1)
                - 2.0 * math.log(2.0))
        assert index_of_correlation(cov) == pytest.approx(want, rel=1e-6)

    def test_index_of_correlation_high_temperature_limit(self):
        # theta -> infinity at fixed theta1 = 3 theta3 converges to
        # ln(g1 g3); the nu -> infinity limit of that is ln(4/3).  (At finite
        # nu the value sits ~8% above ln(4/3): the window quoted around the
        # infinite-nu number is not reachable at nu = 50/3, see the
        # acceptance suite.)
        from cavent import cavity3d

        for nu, expect_close in ((50.0 / 3.0, False), (1e6, True)):
            p = cavity3d.Cavity3DParams(nu=nu, theta1=3000.0, theta3=1000.0)
            tau = 0.25 * math.pi / p.rho  # sin^2(2 rho tau) = 1
            ms = cavity3d.symmetric_entanglement(p, tau)
            g1 = math.sqrt(_g2(nu, 1.0 / 3.0, tau))
            g3 = math.sqrt(_g2(nu, 3.0, tau))
            assert ms.i_c == pytest.approx(math.log(g1 * g3), rel=1e-2)
            if expect_close:
                assert ms.i_c == pytest.approx(math.log(4.0 / 3.0), rel=1e-3)

    def test_compact_entropy(self):
        assert compact_entropy(0.0) == 0.0
        assert compact_entropy(math.log(4.0 / 3.0)) == pytest.approx(0.25, rel=1e-14)
        assert compact_entropy(50.0) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(DomainError):
            compact_entropy(-0.1)


def _g2(nu, ratio, tau):
    rho = math.sqrt(2 * nu - 1)
    return (math.cos(rho * tau) ** 4
            + math.sin(2 * rho * tau) ** 2 * (2 * nu * ratio - 1) / (2 * (2 * nu - 1))
            + math.sin(rho * tau) ** 4 * ((2 * nu * ratio + 1) / (2 * nu - 1)) ** 2)


class TestSmallEntanglementApprox:
    def test_block_diagonal_is_zero(self):
        assert small_entanglement_approx(TwoModeCovariance.thermal(2.0, 3.0)) == 0.0

    def test_matches_exact_when_weak(self):
        rx = math.sqrt(0.01)  # exact Ltilde = 1 - (1 - rx^2) = 0.01 at rp = rx
        cov = correlated_zero_xp(rx, -rx)
        approx = small_entanglement_approx(cov)
        exact = purity_coefficient(cov)
        assert exact == pytest.approx(0.01, rel=1e-10)
        assert abs(approx - exact) < 1e-3

    def test_warns_outside_domain(self):
        cov = correlated_zero_xp(0.9, -0.9)
        with pytest.warns(ApproximationDomainWarning):
            small_entanglement_approx(cov)


class TestMeasureSetProperties:
    @settings(max_examples=40, deadline=None)
    @given(seed=seeds)
    def test_block_diagonal_all_vanish(self, seed):
        rng = np.random.default_rng(seed)
        th1, th2 = rng.uniform(1, 6, size=2)
        r = rng.uniform(0, 1.2)
        blk = np.diag([th1 * math.exp(2 * r) / 2, th1 * math.exp(-2 * r) / 2,
                       th2 / 2, th2 / 2])
        ms = measure_set(TwoModeCovariance(blk))
        for v in (ms.y, ms.y_tilde, ms.l_tilde, ms.k2, ms.z, ms.i_c, ms.j_c):
            assert abs(v) <= 1e-12

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, phi1=st.floats(0, 2 * np.pi), phi2=st.floats(0, 2 * np.pi))
    def test_local_rotation_invariance(self, seed, phi1, phi2):
        cov = random_covariance(np.random.default_rng(seed))
        rot = local_rotation(phi1, phi2)
        a = measure_set(cov)
        b = measure_set(TwoModeCovariance(rot @ cov.q @ rot.T))
        for name in ("y", "y_tilde", "l_tilde", "k2", "z", "i_c", "j_c"):
            assert abs(getattr(a, name) - getattr(b, name)) < 1e-10, name

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds)
    def test_group_correlation_identity_everywhere(self, seed):
        cov = random_covariance(np.random.default_rng(seed))
        ms = measure_set(cov)
        assert abs(ms.k2 - ms.l_tilde * (2.0 - ms.l_tilde)) <= 1e-12
        assert abs(ms.j_c - (1.0 - math.exp(-ms.i_c))) <= 1e-12

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds)
    def test_pure_state_relations(self, seed):
        cov = random_pure_covariance(np.random.default_rng(seed), strength=0.5)
        mu = purity(cov)
        if abs(mu - 1.0) > 1e-9:
            return
        mu1 = single_mode_purity(cov, 1)
        mu2 = single_mode_purity(cov, 2)
        lt = purity_coefficient(cov)
        assert abs(lt - (1.0 - mu1 ** 2)) < 1e-8
        l_raw, _, lt2 = linear_entropy_measures(mu, mu1, mu2)
        assert abs(lt2 - 0.25 * l_raw * (4.0 - l_raw)) < 1e-8
        # the entropic identity Ic = 2 S1 carries the degenerate-spectrum
        # noise floor: the pure state's symplectic pair splits by
        # ~sqrt(eps_machine) and x ln x amplifies it
        i_c = index_of_correlation(cov)
        s1 = single_mode_entropy(cov, 1)
        floor = 2e-6 * max(1.0, float(np.abs(cov.q).max()))
        assert abs(i_c - 2.0 * s1) < max(1e-8, floor)

    def test_gaussian_equivalent_flag(self):
        ms = measure_set(TwoModeCovariance.vacuum(), gaussian_equivalent=True)
        assert ms.gaussian_equivalent
        assert not measure_set(TwoModeCovariance.vacuum()).gaussian_equivalent
