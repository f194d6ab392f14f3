import numpy as np
import pytest

from abelian_coh import DualMeasure, GroupDescriptor, build_nontrivial_cocycle, validate_cocycle
from abelian_coh.errors import PreconditionError, ResolutionError, WrongRegimeError
from abelian_coh.measure import poisson_density, uniform_arc_density

Z = GroupDescriptor(1)


def test_shell_structure(poisson_fine, shell_cocycle):
    nc = shell_cocycle
    assert nc.shell_count == 8
    assert np.all(nc.shell_masses > 0)
    # each point lies in at most one shell, and every shell is nonempty
    assert set(np.unique(nc.shell_index)) == set(range(9))
    u = [nc.neighborhood_masses[k] for k in nc.k_sequence]
    assert all(a > b for a, b in zip(u, u[1:]))


def test_neighborhood_masses_from_definition(poisson_fine, shell_cocycle):
    theta = poisson_fine.angles[:, 0]
    m = poisson_fine.masses
    for k in range(6):
        ms = np.arange(-k, k + 1)
        worst = np.abs(np.exp(1j * np.outer(theta, ms)) - 1).max(axis=1)
        assert shell_cocycle.neighborhood_masses[k] == pytest.approx(m[worst < 2.0 ** -k].sum(), abs=1e-15)


def test_k_sequence_rule(shell_cocycle):
    u, ks = shell_cocycle.neighborhood_masses, shell_cocycle.k_sequence
    assert ks[0] == 0
    for prev, nxt in zip(ks, ks[1:]):
        assert nxt == min(k for k in range(prev + 1, len(u)) if u[k] < u[prev])


def test_eta_is_normalized_on_each_shell(poisson_fine, shell_cocycle):
    nc = shell_cocycle
    for n in range(1, 9):
        on = nc.shell_index == n
        assert np.sum(nc.eta[on] ** 2 * poisson_fine.masses[on]) == pytest.approx(1.0, rel=1e-12)
    assert not np.any(nc.eta[nc.shell_index == 0])


def test_cocycle_is_xi_minus_one_times_eta(poisson_fine, shell_cocycle):
    theta = poisson_fine.angles[:, 0]
    assert np.allclose(shell_cocycle.cocycle.generator_values[0], (np.exp(1j * theta) - 1) * shell_cocycle.eta)
    assert validate_cocycle(shell_cocycle.cocycle)


def test_partial_sums_recomputed(poisson_fine, shell_cocycle):
    nc, b = shell_cocycle, shell_cocycle.cocycle
    m = poisson_fine.masses
    for cert in nc.partial_sums:
        ell = cert.ell
        tails, totals = [], []
        for x in range(-ell, ell + 1):
            sq = np.abs(b.value(Z.element((x,)))) ** 2 * m
            totals.append(sq.sum())
            tails.append(sq[nc.shell_index >= ell].sum())
        assert cert.max_tail == pytest.approx(max(tails), rel=1e-9, abs=1e-15)
        assert cert.max_total == pytest.approx(max(totals), rel=1e-9)
        assert max(tails) <= 4 / 3 and max(totals) <= 4 * ell + 4 / 3
        assert cert.max_tail <= cert.geometric_bound
    assert nc.bound_certified


def test_obstruction_integrals_recomputed(poisson_fine, shell_cocycle):
    b = shell_cocycle.cocycle.generator_values[0]
    xi_minus_one = np.exp(1j * poisson_fine.angles[:, 0]) - 1
    dist = np.abs(poisson_fine.angles[:, 0])
    prev = 0.0
    for delta, integral in shell_cocycle.obstruction:
        outside = dist > delta
        direct = np.sum(np.abs(b[outside] / xi_minus_one[outside]) ** 2 * poisson_fine.masses[outside])
        assert integral == pytest.approx(direct, rel=1e-12)
        assert integral - prev >= 1 - 1e-9
        prev = integral
    assert prev >= 8 - 1
    assert shell_cocycle.divergence_certified


def test_gap_means_wrong_regime():
    mu = DualMeasure.from_parts(Z, (), uniform_arc_density([1.0, 2.0]), 1024).normalized()[0]
    with pytest.raises(WrongRegimeError):
        build_nontrivial_cocycle(mu, 4)


def test_trivial_atom_rejected():
    mu = DualMeasure.from_parts(Z, [(((0.0,), ()), 0.2)], 0.8 * np.full(64, 1 / (2 * np.pi)), 64)
    with pytest.raises(PreconditionError):
        build_nontrivial_cocycle(mu, 2)


def test_resolution_error_names_usable_count():
    mu = DualMeasure.from_parts(Z, (), poisson_density(0.5), 4096).normalized()[0]
    with pytest.raises(ResolutionError) as info:
        build_nontrivial_cocycle(mu, 8)
    assert 1 <= info.value.usable < 8
    assert build_nontrivial_cocycle(mu, info.value.usable).shell_count == info.value.usable
