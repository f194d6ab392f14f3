import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelian_coh import DualMeasure, GroupDescriptor, PdFunction, bochner_forward, build_gns, verify_equivalence
from abelian_coh.errors import InvalidArgumentError, NotPositiveDefiniteError, WindowTooSmallError
from abelian_coh.gns import orbit_gram_measure
from abelian_coh.measure import poisson_density

Z = GroupDescriptor(1)
Z6 = GroupDescriptor(0, (6,))


def poisson_phi(n=16):
    mu = DualMeasure.from_parts(Z, (), poisson_density(0.5), 4096).normalized()[0]
    return mu, bochner_forward(mu, n)


def test_kernel_example_shape_and_cyclic_vector():
    _, phi = poisson_phi(16)
    model = build_gns(phi)
    assert model.window_radius == 8
    assert model.kernel_matrix.shape == (17, 17)
    e = model.cyclic_vector()
    assert model.inner(e, e) == pytest.approx(1.0, abs=1e-12)


def test_translates_of_cyclic_vector_reproduce_phi():
    _, phi = poisson_phi(16)
    model = build_gns(phi)
    e = model.cyclic_vector()
    for t in range(-8, 9):
        x = Z.element((t,))
        assert abs(model.inner(model.translate(e, x), e) - phi.value(x)) <= 1e-12


def test_translation_is_isometric_inside_window(rng):
    _, phi = poisson_phi(16)
    model = build_gns(phi)
    u = np.zeros(model.dimension, dtype=complex)
    u[6:11] = rng.standard_normal(5) + 1j * rng.standard_normal(5)   # supported on -2..2
    v = model.translate(u, Z.element((3,)))
    assert model.inner(v, v) == pytest.approx(model.inner(u, u), rel=1e-12)


@given(st.integers(0, 2 ** 31))
def test_gns_inner_product_parallelogram_law(seed):
    _, phi = poisson_phi(8)
    model = build_gns(phi)
    rng = np.random.default_rng(seed)
    u, v = rng.standard_normal((2, model.dimension)) + 1j * rng.standard_normal((2, model.dimension))
    norm2 = lambda w: model.inner(w, w).real
    assert norm2(u + v) + norm2(u - v) == pytest.approx(2 * norm2(u) + 2 * norm2(v), rel=1e-10)
    assert norm2(u) >= -1e-10
    assert model.inner(u, v) == pytest.approx(np.conj(model.inner(v, u)), abs=1e-10)


def test_measure_gram_matches_direct_quadrature():
    mu = DualMeasure.from_parts(Z, [(((1.0,), ()), 0.4), (((-2.0,), ()), 0.6)])
    shifts = [Z.element((s,)) for s in range(4)]
    b = orbit_gram_measure(mu, shifts)
    for i in range(4):
        for j in range(4):
            expected = 0.4 * np.exp(1j * (i - j)) + 0.6 * np.exp(-2j * (i - j))
            assert b[i, j] == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("mu, tol", [
    (DualMeasure.dirac(Z.character(2.0)), 1e-12),
    (DualMeasure.from_parts(Z, (), poisson_density(0.5), 4096).normalized()[0], 1e-8),
    (DualMeasure.from_parts(Z6, [(((), (c,)), w) for c, w in enumerate([.3, .2, .1, .15, .05, .2])]), 1e-12),
])
def test_equivalence_on_canonical_measures(mu, tol):
    phi = bochner_forward(mu, 16)
    gen = mu.group.generators()[0]
    shifts = [mu.group.element(tuple(s * c for c in gen.free_part), tuple(s * c for c in gen.torsion_part))
              for s in range(9)]
    assert verify_equivalence(build_gns(phi), mu, shifts) <= tol


def test_equivalence_detects_wrong_measure():
    _, phi = poisson_phi(16)
    other = DualMeasure.from_parts(Z, (), poisson_density(0.3), 4096).normalized()[0]
    shifts = [Z.element((s,)) for s in range(9)]
    assert verify_equivalence(build_gns(phi), other, shifts) > 0.1


def test_shift_outside_window():
    mu, phi = poisson_phi(8)
    with pytest.raises(WindowTooSmallError):
        verify_equivalence(build_gns(phi), mu, [Z.element((s,)) for s in range(9)])


def test_gns_window_needs_twice_the_radius():
    _, phi = poisson_phi(8)
    with pytest.raises(WindowTooSmallError):
        build_gns(phi, window_radius=6)


def test_non_pd_rejected():
    phi = PdFunction(Z, 2, [-0.9, 0.9, 1.0, 0.9, -0.9])
    with pytest.raises(NotPositiveDefiniteError):
        build_gns(phi)


def test_group_mismatch():
    _, phi = poisson_phi(8)
    with pytest.raises(InvalidArgumentError):
        verify_equivalence(build_gns(phi), DualMeasure.dirac(Z6.trivial_character()), [])
