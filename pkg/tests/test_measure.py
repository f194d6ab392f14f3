import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelian_coh import DualMeasure, GroupDescriptor, decompose, distance_to_support, l2_norm
from abelian_coh.errors import ConstantFunctionError, InvalidArgumentError
from abelian_coh.measure import (inner, midpoint_grid, poisson_density, poisson_kernel, total_variation,
                                 uniform_arc_density)

Z = GroupDescriptor(1)


def test_midpoint_grid_layout():
    ang, chars, q = midpoint_grid(Z, 8)
    assert q == pytest.approx(2 * math.pi / 8)
    assert ang[0, 0] == pytest.approx(-math.pi + math.pi / 8)
    assert np.allclose(np.diff(ang[:, 0]), 2 * math.pi / 8)
    ang, chars, q = midpoint_grid(GroupDescriptor(1, (3,)), 4)
    assert ang.shape == (12, 1) and sorted(set(chars[:, 0])) == [0, 1, 2]


def test_poisson_mass_is_one_on_grid():
    # the kernel integrates to 1; the midpoint rule is spectrally accurate for it
    mu = DualMeasure.from_parts(Z, (), poisson_density(0.5), 4096)
    assert abs(mu.total_mass - 1.0) <= 1e-9


def test_poisson_kernel_closed_form():
    theta = np.linspace(-3, 3, 7)
    series = sum(0.5 ** abs(n) * np.cos(n * theta) for n in range(-80, 81)) / (2 * math.pi)
    assert np.allclose(poisson_kernel(theta, 0.5), series, atol=1e-14)


def test_support_distance_examples():
    triv = Z.trivial_character()
    dirac = DualMeasure.dirac(Z.character(2.0))
    assert distance_to_support(triv, dirac) == pytest.approx(2.0)
    pois = DualMeasure.from_parts(Z, (), poisson_density(0.5), 4096)
    assert distance_to_support(triv, pois) == 0.0
    arc = DualMeasure.from_parts(Z, (), uniform_arc_density([0.5, 1.0]), 4096)
    assert abs(distance_to_support(triv, arc) - 0.5) <= 2 * math.pi / 4096


def test_support_distance_empty_support():
    mu = DualMeasure.from_parts(Z, (), np.zeros(16), 16)
    assert distance_to_support(Z.trivial_character(), mu) == math.inf


def test_torsion_support_distance_uses_sentinel():
    g = GroupDescriptor(0, (6,))
    mu = DualMeasure.from_parts(g, [(((), (2,)), 1.0)])
    assert distance_to_support(g.trivial_character(), mu) == 2 * math.pi


@st.composite
def mixed_measures(draw):
    n_atoms = draw(st.integers(0, 3))
    thetas = draw(st.lists(st.floats(-3.1, 3.1), min_size=n_atoms, max_size=n_atoms, unique=True))
    thetas = [t for i, t in enumerate(thetas) if all(abs(t - s) > 1e-6 for s in thetas[:i])]
    if draw(st.booleans()):
        thetas = [0.0] + [t for t in thetas if abs(t) > 1e-6]
    weights = [draw(st.floats(0.05, 1.0)) for _ in thetas]
    with_density = draw(st.booleans()) or not thetas
    dens = poisson_density(draw(st.floats(0.1, 0.9)), draw(st.floats(-3, 3))) if with_density else None
    mu = DualMeasure.from_parts(Z, [(((t,), ()), w) for t, w in zip(thetas, weights)], dens, 256)
    return mu.normalized()[0]


@given(mixed_measures())
def test_decompose_reconstruct_roundtrip(mu):
    if mu.trivial_atom_mass() >= 1 - 1e-9:
        with pytest.raises(ConstantFunctionError):
            decompose(mu)
        return
    dec = decompose(mu)
    assert dec.trivial_mass == pytest.approx(mu.trivial_atom_mass())
    assert dec.perp.trivial_atom_index() is None
    assert abs(dec.perp.total_mass - 1.0) < 1e-9
    assert total_variation(dec.reconstruct(), mu) <= 1e-9


def test_decompose_dirac_at_identity_rejected():
    with pytest.raises(ConstantFunctionError):
        decompose(DualMeasure.dirac(Z.trivial_character()))


def test_decompose_requires_probability():
    mu = DualMeasure.from_parts(Z, [(((1.0,), ()), 0.5)])
    with pytest.raises(InvalidArgumentError):
        decompose(mu)


def test_normalized_records_factor():
    mu = DualMeasure.from_parts(Z, [(((1.0,), ()), 2.0), (((-1.0,), ()), 2.0)])
    out, factor = mu.normalized()
    assert factor == 0.25 and out.notes["normalization_factor"] == 0.25
    assert out.total_mass == pytest.approx(1.0)


def test_l2_norm_and_inner(rng):
    mu = DualMeasure.from_parts(Z, [(((1.0,), ()), 0.3)], poisson_density(0.4), 64).normalized()[0]
    f = rng.standard_normal(mu.n_points) + 1j * rng.standard_normal(mu.n_points)
    g = rng.standard_normal(mu.n_points) + 1j * rng.standard_normal(mu.n_points)
    assert l2_norm(np.ones(mu.n_points), mu) == pytest.approx(1.0)
    assert l2_norm(f, mu) ** 2 == pytest.approx(np.sum(np.abs(f) ** 2 * mu.masses))
    assert inner(2j * f, g, mu) == pytest.approx(2j * inner(f, g, mu))
    assert inner(f, 2j * g, mu) == pytest.approx(-2j * inner(f, g, mu))
    with pytest.raises(InvalidArgumentError):
        l2_norm(f[:-1], mu)


def test_parallelogram_law_in_l2(rng):
    mu = DualMeasure.from_parts(Z, (), poisson_density(0.5), 128)
    f, g = rng.standard_normal((2, mu.n_points)) + 1j * rng.standard_normal((2, mu.n_points))
    lhs = l2_norm(f + g, mu) ** 2 + l2_norm(f - g, mu) ** 2
    assert lhs == pytest.approx(2 * l2_norm(f, mu) ** 2 + 2 * l2_norm(g, mu) ** 2)


def test_restrict_keeps_grid_positions():
    mu = DualMeasure.from_parts(Z, [(((1.0,), ()), 0.5)], poisson_density(0.5), 16)
    keep = np.zeros(mu.n_points, dtype=bool)
    keep[[0, 3, 7]] = True
    sub = mu.restrict(keep)
    assert sub.n_atoms == 1 and list(sub.grid_index) == [2, 6]
    assert sub.total_mass == pytest.approx(mu.masses[keep].sum())


@pytest.mark.parametrize("atoms", [
    [(((1.0,), ()), -0.1)],
    [(((1.0,), ()), 0.5), (((1.0 + 2 * math.pi,), ()), 0.5)],
])
def test_invalid_atoms(atoms):
    with pytest.raises(InvalidArgumentError):
        DualMeasure.from_parts(Z, atoms)


def test_invalid_generators():
    with pytest.raises(InvalidArgumentError):
        poisson_density(1.0)
    with pytest.raises(InvalidArgumentError):
        uniform_arc_density([1.0, 0.5])
    with pytest.raises(InvalidArgumentError):
        DualMeasure.from_parts(Z, (), -np.ones(8), 8)


def test_arrays_are_read_only():
    mu = DualMeasure.from_parts(Z, (), poisson_density(0.5), 16)
    with pytest.raises(ValueError):
        mu.density[0] = 1.0
