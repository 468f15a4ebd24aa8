import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from netsync.errors import (
    DegenerateInput, GuardViolated, NetSyncError, NotSymmetric, NotUniform, RankDeficient, SingularInterior
)
from netsync.network import BranchSpec, Netlist, ShuntSpec, assemble_admittance, build_star_netlist, eval_admittance
from netsync.numerics import complete_laplacian, projector
from netsync.reduction import (
    NO_SHUNT_HOMOGENEOUS, NO_SHUNT_UNIFORM, SHUNT_HOMOGENEOUS, SHUNT_UNIFORM, UNCLASSIFIED,
    augment, classify, effective_impedance, effective_impedance_matrix, grounded_inverse_entry,
    homogeneous_forward, homogeneous_params, kron_reduce, kron_reduce_grounded, kron_reduce_symbolic,
    kron_reduce_uniform, pseudo_inverse_zero_sum, uniform_line_factor, ydagger_from_Z
)
from netsync.reduction.classify import CORRESPONDENCE_NOTE

from .conftest import random_netlist


def _random_case(seed, shunts=False):
    rng = np.random.default_rng(seed)
    n_boundary = int(rng.integers(2, 6))
    n_nodes = n_boundary + int(rng.integers(1, 5))
    net = random_netlist(rng, n_nodes, n_boundary, shunts=shunts)
    s = 1j * rng.uniform(0.1, 10.)
    return net, eval_admittance(assemble_admittance(net), s)


def _rel_max(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


class TestKronReduce:
    """Schur-complement reduction."""

    def test_star_delta(self, star_resistive):
        """The unit-conductance star with three tips reduces to I - 11^T/3."""
        y_a = eval_admittance(assemble_admittance(star_resistive), 1j)
        result = kron_reduce(y_a, 3, nodes=star_resistive.nodes)
        assert_allclose(result.Y, np.eye(3) - np.ones((3, 3)) / 3, atol=1e-12)
        assert result.boundary == ('1', '2', '3')
        assert result.eliminated == ('center',)

    def test_empty_interior_passthrough(self):
        y = np.array([[2., -1.], [-1., 2.]])
        assert_allclose(kron_reduce(y, 2).Y, y)

    def test_asymmetric_input(self):
        with pytest.raises(NotSymmetric):
            kron_reduce(np.array([[1., -1., 0.], [-2., 2., 0.], [0., 0., 1.]]), 2)

    def test_singular_interior(self):
        y = np.array([[1., -1., 0.], [-1., 1., 0.], [0., 0., 0.]])
        with pytest.raises(SingularInterior):
            kron_reduce(y, 2)

    def test_closure_without_shunts(self):
        """Connected networks without shunts reduce to zero row sums."""
        for seed in range(50):
            net, y_a = _random_case(seed)
            rng = np.random.default_rng(1000 + seed)
            for omega in rng.uniform(0.1, 10., 10):
                y_a = eval_admittance(assemble_admittance(net), 1j * omega)
                y = kron_reduce(y_a, net.n_boundary).Y
                assert np.max(np.abs(y.sum(axis=1))) <= 1e-9 * np.linalg.norm(y)

    def test_shunts_survive_reduction(self):
        """An interior shunt always shows up as a nonzero reduced row sum."""
        for seed in range(50):
            net, y_a = _random_case(seed, shunts=True)
            y = kron_reduce(y_a, net.n_boundary).Y
            assert np.max(np.abs(y.sum(axis=1))) > 1e-6 * np.linalg.norm(y)


class TestAugmentation:
    """Ground as an explicit node."""

    def test_augmented_sums_vanish(self):
        _, y_a = _random_case(3, shunts=True)
        y_hat = augment(y_a)
        assert_allclose(y_hat.sum(axis=1), 0., atol=1e-12 * np.max(np.abs(y_hat)))
        assert_allclose(y_hat, y_hat.T)

    def test_reduction_commutes_with_augmentation(self):
        """Reducing the augmented matrix equals augmenting the reduced one."""
        for seed in range(30):
            net, y_a = _random_case(seed, shunts=seed % 2 == 0)
            nb = net.n_boundary
            grounded = kron_reduce_grounded(y_a, nb, nodes=net.nodes)
            expected = augment(kron_reduce(y_a, nb).Y)
            assert_allclose(grounded.Y, expected, atol=1e-9 * np.max(np.abs(expected)))
            assert grounded.boundary[-1] == 'ground'


class TestEffectiveImpedance:
    """Pseudo-inverse and effective impedance identities."""

    def test_invariance_under_reduction(self):
        """Boundary effective impedances agree between Y_A, the reduced Y and their augmentations."""
        for seed in range(30):
            net, y_a = _random_case(seed, shunts=seed % 2 == 1)
            nb = net.n_boundary
            y = kron_reduce(y_a, nb).Y

            z_full = effective_impedance_matrix(y_a)[:nb, :nb]
            z_reduced = effective_impedance_matrix(y)
            assert _rel_max(z_reduced, z_full) <= 1e-9
            if net.has_shunts:
                assert _rel_max(effective_impedance_matrix(y, grounded=True)[:nb, :nb], z_full) <= 1e-9
                assert _rel_max(effective_impedance_matrix(y_a, grounded=True)[:nb, :nb], z_full) <= 1e-9

    def test_penrose_conditions(self):
        for seed in range(30):
            net, y_a = _random_case(seed)
            y = kron_reduce(y_a, net.n_boundary).Y
            y_dag = pseudo_inverse_zero_sum(y)
            scale = np.max(np.abs(y_dag))
            assert_allclose(y @ y_dag @ y, y, atol=1e-9 * np.max(np.abs(y)))
            assert_allclose(y_dag @ y @ y_dag, y_dag, atol=1e-9 * scale)
            assert_allclose(y @ y_dag, (y @ y_dag).conj().T, atol=1e-9)
            assert_allclose(y_dag @ y, (y_dag @ y).conj().T, atol=1e-9)
            assert_allclose(y @ y_dag, projector(y.shape[0]), atol=1e-9)

    def test_ydagger_from_z(self):
        """Y^+ is recovered from the effective impedances."""
        for seed in range(30):
            net, y_a = _random_case(seed)
            y = kron_reduce(y_a, net.n_boundary).Y
            y_dag = pseudo_inverse_zero_sum(y)
            recovered = ydagger_from_Z(effective_impedance_matrix(y))
            assert_allclose(recovered, y_dag, atol=1e-9 * np.max(np.abs(y_dag)))

    def test_grounded_inverse_entry(self):
        """Grounding a node of a zero-sum matrix and inverting matches the formula."""
        _, y_a = _random_case(7)
        y_dag = pseudo_inverse_zero_sum(y_a)
        ref = y_a.shape[0] - 1
        inv = np.linalg.inv(y_a[:ref, :ref])
        for n in range(ref):
            for m in range(ref):
                assert grounded_inverse_entry(y_dag, n, m, ref) == pytest.approx(inv[n, m], rel=1e-9)

    def test_effective_impedance_pair(self):
        """Two unit resistors in series between the tips of a path."""
        y = np.array([[1., -1., 0.], [-1., 2., -1.], [0., -1., 1.]])
        assert effective_impedance(y, 0, 2) == pytest.approx(2.)
        assert effective_impedance(y, 1, 1) == 0

    def test_disconnected_rank_deficient(self):
        lap = np.zeros((4, 4))
        lap[:2, :2] = [[1., -1.], [-1., 1.]]
        lap[2:, 2:] = [[1., -1.], [-1., 1.]]
        with pytest.raises(RankDeficient):
            pseudo_inverse_zero_sum(lap)

    def test_nonzero_row_sums_rejected(self):
        """A grounded matrix is outside the rank-one shift and raises a netsync error."""
        y = complete_laplacian(3) + np.eye(3)
        with pytest.raises(DegenerateInput, match="zero row sums"):
            pseudo_inverse_zero_sum(y)
        with pytest.raises(NetSyncError):
            pseudo_inverse_zero_sum(y)


class TestHomogeneous:
    """Homogeneous networks and the forward-map inversion."""

    def test_complete_graph_impedances(self):
        """Y = y * Gamma has every pairwise impedance equal to 2/(N y)."""
        rng = np.random.default_rng(11)
        for n in range(3, 9):
            y_series = complex(rng.uniform(0.1, 2.), rng.uniform(-2., 2.))
            z = effective_impedance_matrix(y_series * complete_laplacian(n))
            pairs = np.triu_indices(n, 1)
            assert_allclose(z[pairs], 2. / (n * y_series), rtol=1e-10)

    def test_perturbed_weight_breaks_uniformity(self):
        n = 4
        lap = complete_laplacian(n)
        lap[0, 1] = lap[1, 0] = -1.01
        lap[0, 0] += 0.01
        lap[1, 1] += 0.01
        z = effective_impedance_matrix(lap)[np.triu_indices(n, 1)]
        assert np.max(np.abs(z - z[0])) / np.max(np.abs(z)) > 1e-9

    def test_no_shunt_params(self):
        y_series, y_shunt = homogeneous_params(2., None, 4)
        assert y_series == pytest.approx(0.25)
        assert y_shunt is None

    def test_star_with_load_oracle(self):
        """Direct reduction of the loaded three-tip star matches the inverted forward map."""
        r_net, l_net, r_load = 0.3, 0.2, 1.5
        net = build_star_netlist(3, r_net=r_net, l_net=l_net, r_load=r_load)
        for omega in (0.1, 1., 10.):
            s = 1j * omega
            z_net, z_load = r_net + s * l_net, r_load
            y = kron_reduce(eval_admittance(assemble_admittance(net), s), 3).Y

            y_shunt_direct = y.sum(axis=1)[0]
            y_series_direct = -y[0, 1]
            assert y_shunt_direct == pytest.approx(1. / (z_net + 3 * z_load), rel=1e-10)
            assert y_series_direct == pytest.approx(z_load / (z_net * (z_net + 3 * z_load)), rel=1e-10)

            y_series, y_shunt = homogeneous_params(2 * z_net, z_net + z_load, 3)
            assert y_series == pytest.approx(y_series_direct, rel=1e-10)
            assert y_shunt == pytest.approx(y_shunt_direct, rel=1e-10)

    def test_forward_round_trip(self):
        y_series, y_shunt = 0.4 - 0.3j, 0.2 + 0.1j
        z_es, z_esh = homogeneous_forward(y_series, y_shunt, 5)
        back = homogeneous_params(z_es, z_esh, 5)
        assert back[0] == pytest.approx(y_series, rel=1e-10)
        assert back[1] == pytest.approx(y_shunt, rel=1e-10)

    def test_guard(self):
        """z_es/z_esh = 2N/(N - 1) has no inverse."""
        with pytest.raises(GuardViolated):
            homogeneous_params(3., 1., 3)


class TestUniform:
    """Networks with uniform line characteristics."""

    def test_line_factor(self):
        branches = (BranchSpec('1', '2', r=0.2, l=1.), BranchSpec('2', '3', r=0.6, l=3.))
        z_unit, scales = uniform_line_factor(branches)
        assert_allclose(scales, [1., 3.])
        assert z_unit(2j) == pytest.approx(0.2 + 2j)

    def test_mixed_branches_not_uniform(self):
        branches = (BranchSpec('1', '2', r=1.), BranchSpec('2', '3', l=1.))
        with pytest.raises(NotUniform):
            uniform_line_factor(branches)

    def test_case_a_laplacian(self, case_a_set1):
        """y_series = 1/s and L = s * Y(s) at any s."""
        y_series, lap = kron_reduce_uniform(case_a_set1)
        assert y_series(2j) == pytest.approx(1. / 2j)
        y = kron_reduce(eval_admittance(assemble_admittance(case_a_set1), 1j), 4).Y
        assert_allclose(lap, (1j * y).real, atol=1e-10)
        assert np.max(np.abs((1j * y).imag)) < 1e-10
        assert_allclose(lap.sum(axis=1), 0., atol=1e-10)


class TestSymbolic:
    """Rational-function reduction."""

    def test_symbolic_matches_numeric(self, star_with_load):
        y_sym = assemble_admittance(star_with_load)
        reduced = kron_reduce_symbolic(y_sym, 4).Y
        for s in (0.5j, 3j, 0.2 + 1j):
            numeric = kron_reduce(eval_admittance(y_sym, s), 4).Y
            assert_allclose(eval_admittance(reduced, s), numeric, rtol=1e-9)

    def test_degrees_stay_minimal(self, star_with_load):
        """The loaded-star branch admittance is second order after cancellation."""
        reduced = kron_reduce_symbolic(assemble_admittance(star_with_load), 4).Y
        assert reduced[0, 1].den.degree == 2
        assert reduced.row_sum(0)(1j) == pytest.approx(1. / (4.1 + 0.1j), rel=1e-9)


class TestClassify:
    """Decision tree and extracted parameters."""

    def test_case_a(self, case_a_set1):
        result = classify(case_a_set1)
        assert result.kind == NO_SHUNT_UNIFORM
        assert result.y_series(1j) == pytest.approx(-1j)
        assert result.y_shunt is None
        assert len(result.eigenvalues) == 4
        assert result.eigenvalues[0] == 0.
        assert np.all(result.eigenvalues[1:] > 0)
        assert len(result.modes) == 3

    def test_star_with_load(self, star_with_load, caplog):
        with caplog.at_level(logging.WARNING, logger='netsync'):
            result = classify(star_with_load)
        assert result.kind == SHUNT_HOMOGENEOUS
        assert CORRESPONDENCE_NOTE in result.notes
        assert any(CORRESPONDENCE_NOTE in r.getMessage() for r in caplog.records)

        s = 2j
        z_net = 0.1 + 0.1 * s
        assert result.y_series(s) == pytest.approx(1. / (z_net * (z_net + 4.)), rel=1e-9)
        assert result.y_shunt(s) == pytest.approx(1. / (z_net + 4.), rel=1e-9)
        assert_allclose(result.modes, [4.])
        assert result.y_shunt.den.degree == 1
        assert_allclose(result.y_shunt.poles(), [-41.], rtol=1e-10)

    def test_star_with_load_matches_direct_reduction(self, star_with_load):
        """The extracted admittance agrees with numeric Kron reduction over the band."""
        result = classify(star_with_load)
        y_sym = assemble_admittance(star_with_load)
        for omega in np.logspace(-2, 2, 17):
            s = 1j * omega
            direct = kron_reduce(eval_admittance(y_sym, s), 4).Y
            assert _rel_max(result.admittance(s), direct) <= 1e-9

    def test_resonant_branch_at_unit_frequency(self):
        """An LC branch with a pole at s = j on the default sample grid still classifies."""
        net = Netlist(nodes=('1', '2', 'c'), boundary=('1', '2'),
                      branches=(BranchSpec('1', 'c', r=1.), BranchSpec('c', '2', l=1., c=1.)))
        result = classify(net)
        assert result.kind == NO_SHUNT_HOMOGENEOUS
        s = 2j
        assert result.y_series(s) == pytest.approx(s / (s * s + s + 1.), rel=1e-9)
        assert result.y_series.den.degree == 2

    def test_two_node_path_is_homogeneous(self):
        """A single pair is trivially homogeneous even with mixed branches."""
        net = Netlist(nodes=('1', '2', 'c'), boundary=('1', '2'),
                      branches=(BranchSpec('1', 'c', r=1.), BranchSpec('c', '2', l=1.)))
        result = classify(net)
        assert result.kind == NO_SHUNT_HOMOGENEOUS
        assert result.y_series(1j) == pytest.approx(1. / (1. + 1j))

    def test_mixed_triangle_unclassified(self):
        net = Netlist(nodes=('1', '2', '3'), boundary=('1', '2', '3'),
                      branches=(BranchSpec('1', '2', r=1.), BranchSpec('2', '3', l=1.),
                                BranchSpec('1', '3', r=2.)))
        result = classify(net)
        assert result.kind == UNCLASSIFIED
        assert not result.is_classified
        assert 'not uniform' in result.reason

    def test_shunt_uniform(self):
        """Two loaded stars joined at their centers: equal shunts, two branch weights."""
        net = Netlist(
            nodes=('1', '2', '3', '4', 'a', 'b'),
            boundary=('1', '2', '3', '4'),
            branches=(BranchSpec('1', 'a', r=1.), BranchSpec('2', 'a', r=1.),
                      BranchSpec('3', 'b', r=1.), BranchSpec('4', 'b', r=1.),
                      BranchSpec('a', 'b', r=1.)),
            shunts=(ShuntSpec('a', r=1.), ShuntSpec('b', r=1.))
        )
        result = classify(net)
        assert result.kind == SHUNT_UNIFORM
        assert result.eigenvalues[0] == 0.
        for s in (0.1j, 1j, 10j):
            direct = kron_reduce(eval_admittance(assemble_admittance(net), s), 4).Y
            assert_allclose(result.admittance(s), direct, atol=1e-9)

    def test_single_boundary_node(self):
        net = Netlist(nodes=('1', 'a'), boundary=('1',), branches=(BranchSpec('1', 'a', r=1.),))
        assert classify(net).kind == UNCLASSIFIED

    def test_report_dict(self, case_a_set1):
        data = classify(case_a_set1).to_dict()
        assert data['kind'] == NO_SHUNT_UNIFORM
        assert len(data['lambda']) == 4
        assert data['y_series'] == {'num': [1.], 'den': [0., 1.]}
        assert data['y_shunt'] is None
