import logging
from dataclasses import replace

import numpy as np
import pytest

from netsync.config import SweepConfig
from netsync.errors import DegenerateLoop, NotNormal, UnboundedGain, Unclassified
from netsync.network import BranchSpec, Netlist, build_star_netlist
from netsync.numerics import RationalFunction
from netsync.oscillators import CHUA_DEFAULTS, chua_preset, oscillator_from_config
from netsync.certificates import (
    MARGINAL, STABLE, UNSTABLE, certify, hinf_scalar, high_frequency_limit, lft_scalar, matrix_gain_oracle,
    matrix_gain_profile, mode_gain_profile, pole_stability, xi_frequency_response, xi_surface, z_eq
)
from netsync.certificates.surface import log_grid
from netsync.reduction import NO_SHUNT_UNIFORM, SHUNT_HOMOGENEOUS, SHUNT_UNIFORM, classify

from .conftest import random_netlist


class TestGains:
    """Feedback interconnection and peak gain."""

    def test_lft_matches_pointwise_formula(self):
        a = RationalFunction([1., 2.], [3., 1., 1.])
        b = RationalFunction([0.5], [1., 1.])
        h = lft_scalar(a, b)
        for s in (0.3j, 2j, 1. + 1j):
            assert h(s) == pytest.approx(a(s) / (1. + a(s) * b(s)))

    def test_degenerate_loop(self):
        with pytest.raises(DegenerateLoop):
            lft_scalar(RationalFunction.constant(1.), RationalFunction.constant(-1.))

    def test_z_eq_without_shunt(self, chua):
        assert z_eq(chua.z_osc, None) is chua.z_osc

    def test_z_eq_parallel(self, chua):
        y = RationalFunction.constant(2.)
        s = 1.5j
        assert z_eq(chua.z_osc, y)(s) == pytest.approx(1. / (1. / chua.z_osc(s) + 2.))

    def test_resonant_peak(self):
        """s/(s^2 + 0.1 s + 1) peaks at 10 for omega = 1."""
        res = hinf_scalar(RationalFunction([0., 1.], [1., 0.1, 1.]))
        assert res.peak == pytest.approx(10., rel=1e-3)
        assert res.omega_star == pytest.approx(1., rel=1e-3)
        assert res.stability == STABLE
        assert not res.boundary

    def test_peak_at_band_edge(self, caplog):
        with caplog.at_level(logging.WARNING, logger='netsync'):
            res = hinf_scalar(RationalFunction([1.], [1., 1.]))
        assert res.boundary
        assert res.omega_star == pytest.approx(1e-3)
        assert res.peak == pytest.approx(1., rel=1e-5)
        assert any('boundary' in r.getMessage() for r in caplog.records)

    def test_constant_is_not_boundary(self, caplog):
        with caplog.at_level(logging.WARNING, logger='netsync'):
            res = hinf_scalar(RationalFunction.constant(0.5))
        assert res.peak == pytest.approx(0.5)
        assert not res.boundary
        assert not any('boundary' in r.getMessage() for r in caplog.records)

    def test_rising_to_high_frequency_limit(self):
        """(s^2 + s)/(s^2 + 2 s + 1) climbs towards 1 above the band, the limit is the supremum."""
        h = RationalFunction([0., 1., 1.], [1., 2., 1.])
        assert high_frequency_limit(h) == pytest.approx(1.)
        res = hinf_scalar(h)
        assert not res.boundary
        assert res.peak == pytest.approx(1., rel=1e-9)
        assert res.omega_star == pytest.approx(1e3)

    def test_printed_chua_loop_settles(self, chua_printed):
        """The printed impedance behind an inductive line approaches its limit 1 from below."""
        h = lft_scalar(chua_printed.z_osc, RationalFunction([1.], [0., 1.]))
        res = hinf_scalar(h)
        assert not res.boundary
        assert high_frequency_limit(h) == pytest.approx(1.)
        assert res.peak >= 1. - 1e-9

    def test_improper(self):
        with pytest.raises(UnboundedGain):
            hinf_scalar(RationalFunction([0., 1.]))

    def test_pole_stability(self):
        assert pole_stability(RationalFunction([1.], [-1., 1.]))[0] == UNSTABLE
        verdict, axis = pole_stability(RationalFunction([1.], [1., 0., 1.]))
        assert verdict == MARGINAL
        assert axis == pytest.approx((1.,))
        assert pole_stability(RationalFunction([2.]))[0] == STABLE

    def test_cancelled_pole_is_ignored(self):
        """(s - 1)/((s - 1)(s + 2)) has no right half-plane pole once cancelled."""
        h = RationalFunction([-1., 1.], [-2., 1., 1.])
        assert pole_stability(h)[0] == STABLE


class TestCertify:
    """Certificate dispatch over network classes."""

    def test_case_a_set1_certified(self, case_a_set1, chua_printed):
        report = certify(classify(case_a_set1), chua_printed)
        assert report.kind == NO_SHUNT_UNIFORM
        assert report.passed is True
        assert report.margin == pytest.approx(0.8, rel=1e-3)
        assert len(report.modes) == 3
        assert sum(m.is_max for m in report.modes) >= 1

    def test_case_a_set2_not_certified(self, case_a_set2, chua_printed):
        report = certify(classify(case_a_set2), chua_printed)
        assert report.passed is False
        assert report.margin == pytest.approx(1.082, rel=5e-3)

    def test_case_a_netlists_use_printed_impedance(self, case_a_set1, case_a_set2):
        for net in (case_a_set1, case_a_set2):
            assert net.oscillator.impedance == 'printed'
            osc = oscillator_from_config(net.oscillator)
            assert osc.params['impedance'] == 'printed'

    def test_case_a_set1_circuit_impedance(self, case_a_set1, chua):
        """The component-derived impedance peaks inside the band and does not certify set 1."""
        report = certify(classify(case_a_set1), chua)
        assert report.passed is False
        assert report.margin == pytest.approx(2.3797111211628224, rel=1e-3)

    def test_case_a_set2_circuit_impedance(self, case_a_set2, chua):
        report = certify(classify(case_a_set2), chua)
        assert report.passed is False
        assert report.margin > 100.

    def test_unclassified_refused(self, chua):
        net = Netlist(nodes=('1', '2', '3'), boundary=('1', '2', '3'),
                      branches=(BranchSpec('1', '2', r=1.), BranchSpec('2', '3', l=1.),
                                BranchSpec('1', '3', r=2.)))
        with pytest.raises(Unclassified):
            certify(classify(net), chua)

    def test_worker_pool_matches_serial(self, case_a_set1, chua):
        net_class = classify(case_a_set1)
        serial = certify(net_class, chua)
        pooled = certify(net_class, chua, processes=2)
        assert pooled.margin == pytest.approx(serial.margin, rel=1e-12)
        assert [m.lam for m in pooled.modes] == [m.lam for m in serial.modes]

    def test_report_dict(self, case_a_set1, chua):
        data = certify(classify(case_a_set1), chua).to_dict()
        assert set(data) == {'pass', 'margin', 'sigma', 'kind', 'modes'}
        assert set(data['modes'][0]) >= {'lambda', 'peak', 'omega_star', 'stability', 'is_max'}

    def test_scalar_matches_matrix_gain(self, chua):
        """Per-mode scalar gains equal the singular-value gain for normal Y."""
        omegas = np.logspace(-2, 2, 50)
        for seed in range(20):
            rng = np.random.default_rng(seed)
            n_boundary = int(rng.integers(2, 7))
            net = random_netlist(rng, n_boundary + int(rng.integers(1, 4)), n_boundary, uniform=True)
            net_class = classify(net)
            assert net_class.kind == NO_SHUNT_UNIFORM

            scalar = mode_gain_profile(net_class, chua, omegas)
            matrix = matrix_gain_profile(net_class.admittance, chua.z_osc, omegas)
            np.testing.assert_allclose(scalar, matrix, rtol=1e-6)

    def test_matrix_gain_oracle_two_nodes(self, chua):
        """For N = 2 the only differential mode has eigenvalue 2."""
        omegas = np.logspace(-2, 2, 200)
        lap = np.array([[1., -1.], [-1., 1.]])
        oracle = matrix_gain_oracle(lambda s: lap / s, chua.z_osc, omegas)
        z = chua.z_osc.frequency_response(omegas)
        expected = np.max(np.abs(z / (1. + 2. * z / (1j * omegas))))
        assert oracle == pytest.approx(expected, rel=1e-9)

    def test_matrix_gain_oracle_without_coupling(self, chua):
        omegas = np.logspace(-2, 2, 200)
        oracle = matrix_gain_oracle(lambda s: np.zeros((3, 3)), chua.z_osc, omegas)
        assert oracle == pytest.approx(np.max(np.abs(chua.z_osc.frequency_response(omegas))), rel=1e-9)

    def test_shunt_folds_into_oscillator_impedance(self, chua):
        """(I + z (y_sh I + y_s L))^-1 z equals (I + z_eq y_s L)^-1 z_eq at every frequency."""
        rng = np.random.default_rng(11)
        weights = np.triu(rng.uniform(0.2, 2., (4, 4)), 1)
        lap = np.diag((weights + weights.T).sum(axis=1)) - (weights + weights.T)
        y_shunt = RationalFunction([1., 0.5], [2., 1.])
        y_series = RationalFunction([1.], [0.3, 1.])
        z_parallel = z_eq(chua.z_osc, y_shunt)
        eye = np.eye(4)
        for omega in rng.uniform(0.01, 100., 20):
            s = 1j * omega
            z = chua.z_osc(s)
            lhs = np.linalg.solve(eye + z * (y_shunt(s) * eye + y_series(s) * lap), z * eye)
            rhs = np.linalg.solve(eye + z_parallel(s) * y_series(s) * lap, z_parallel(s) * eye)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)

    def test_margin_scales_with_sigma(self, star_with_load, chua):
        net_class = classify(star_with_load)
        base = certify(net_class, chua)
        for factor in (0.5, 2., 3.):
            osc = chua_preset(slopes=[factor * k for k in CHUA_DEFAULTS['slopes']])
            report = certify(net_class, osc)
            assert report.sigma == pytest.approx(factor * base.sigma)
            assert report.margin == pytest.approx(factor * base.margin, rel=1e-12)

    def test_homogeneous_matches_uniform_dispatch(self, star_with_load, chua):
        """Gamma has spectrum {0, N, ..., N}, so the uniform route gives the same margin."""
        homogeneous = classify(star_with_load)
        assert homogeneous.kind == SHUNT_HOMOGENEOUS
        np.testing.assert_allclose(homogeneous.eigenvalues, [0., 4., 4., 4.], atol=1e-12)

        uniform = replace(homogeneous, kind=SHUNT_UNIFORM)
        assert len(uniform.modes) == 3
        a, b = certify(homogeneous, chua), certify(uniform, chua)
        assert b.margin == pytest.approx(a.margin, rel=1e-9)
        assert b.passed == a.passed

    def test_matrix_gain_needs_normal_y(self, chua):
        with pytest.raises(NotNormal):
            matrix_gain_profile(lambda s: np.array([[1., 1.], [0., 1.]]), chua.z_osc, [1.])


class TestSurface:
    """Margin of the loaded star over line parameters."""

    def test_grid_crosses_one(self, chua):
        grid = log_grid(1e-3, 10., 20)
        xi = xi_surface(grid, grid, chua)
        assert xi.shape == (20, 20)
        assert np.all(np.isfinite(xi)) and np.all(xi > 0)
        assert xi.min() < 1. < xi.max()
        assert xi[0, 0] < xi[-1, -1]
        assert xi[-1, -1] > 1.

    def test_matches_certificate_of_loaded_star(self, chua):
        """xi(R, L) is the certificate margin of a star with those line parameters."""
        cfg = SweepConfig()
        for r_net, l_net in ((0.3, 0.2), (2., 5.)):
            net_class = classify(build_star_netlist(4, r_net=r_net, l_net=l_net, r_load=1.5))
            assert net_class.kind == SHUNT_HOMOGENEOUS
            margin = certify(net_class, chua, cfg).margin
            xi = xi_surface([r_net], [l_net], chua, cfg=cfg)[0, 0]
            assert xi == pytest.approx(margin, rel=1e-6)

    def test_independent_of_star_size(self, chua):
        a = xi_surface([0.5], [0.5], chua, n=3)
        b = xi_surface([0.5], [0.5], chua, n=9)
        assert a[0, 0] == b[0, 0]

    def test_frequency_response_bounded_by_peak(self, chua):
        omegas = np.logspace(-3, 3, 500)
        profile = xi_frequency_response(1., 1., chua, omegas)
        assert profile.max() <= xi_surface([1.], [1.], chua)[0, 0] * (1 + 1e-9)

    def test_bad_line_parameters(self, chua):
        with pytest.raises(ValueError):
            xi_surface([0.], [1.], chua)
