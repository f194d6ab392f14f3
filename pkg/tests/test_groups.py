import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelian_coh import (DualPoint, GroupDescriptor, GroupElement, dual_distance, evaluate_character,
                         hom_to_C_dimension)
from abelian_coh.errors import InvalidArgumentError
from abelian_coh.groups import TORSION_SENTINEL, character_table, generator_angles, wrap_angle

GROUPS = [GroupDescriptor(1), GroupDescriptor(2), GroupDescriptor(0, (6,)), GroupDescriptor(1, (2, 3))]
angle = st.floats(-10.0, 10.0, allow_nan=False)
coeff = st.integers(-40, 40)


@st.composite
def group_and_elements(draw, count=2):
    g = draw(st.sampled_from(GROUPS))
    elems = [g.element([draw(coeff) for _ in range(g.free_rank)],
                       [draw(st.integers(0, n - 1)) for n in g.torsion_orders]) for _ in range(count)]
    xi = g.character([draw(angle) for _ in range(g.free_rank)],
                     [draw(st.integers(0, n - 1)) for n in g.torsion_orders])
    return g, elems, xi


@given(group_and_elements())
def test_character_is_homomorphism(data):
    g, (x, y), xi = data
    lhs = evaluate_character(xi, x + y)
    rhs = evaluate_character(xi, x) * evaluate_character(xi, y)
    assert abs(lhs - rhs) < 1e-12
    assert abs(abs(evaluate_character(xi, x)) - 1.0) < 1e-12


@given(group_and_elements(count=1))
def test_character_conjugation(data):
    g, (x,), xi = data
    assert abs(evaluate_character(xi, -x) - np.conj(evaluate_character(xi, x))) < 1e-12


def test_torsion_character_values_match_roots_of_unity():
    g = GroupDescriptor(0, (6,))
    for c in range(6):
        xi = g.character((), (c,))
        for r in range(6):
            expected = np.exp(2j * np.pi * c * r / 6)
            assert abs(evaluate_character(xi, g.element((), (r,))) - expected) < 1e-12


def test_character_table_matches_scalar_evaluation(rng):
    g = GroupDescriptor(1, (2, 3))
    ang = rng.uniform(-np.pi, np.pi, (7, 1))
    chars = np.stack([rng.integers(0, 2, 7), rng.integers(0, 3, 7)], axis=1)
    free, tors = g.box(2)
    table = character_table(ang, chars, free, tors, g.torsion_orders)
    for p in range(7):
        xi = g.character(ang[p], chars[p])
        for q in range(len(free)):
            x = g.element(free[q], tors[q])
            assert abs(table[p, q] - evaluate_character(xi, x)) < 1e-12


def test_generator_angles_give_generator_values(rng):
    g = GroupDescriptor(1, (4,))
    ang = rng.uniform(-np.pi, np.pi, (5, 1))
    chars = rng.integers(0, 4, (5, 1))
    ph = generator_angles(ang, chars, g.torsion_orders)
    for p in range(5):
        xi = g.character(ang[p], chars[p])
        for i, x in enumerate(g.generators()):
            assert abs(np.exp(1j * ph[i, p]) - evaluate_character(xi, x)) < 1e-12


@given(st.floats(-1e3, 1e3, allow_nan=False))
def test_wrap_angle_range(t):
    w = wrap_angle(t)
    assert -math.pi < w <= math.pi
    assert abs(np.exp(1j * w) - np.exp(1j * t)) < 1e-9


def test_wrap_angle_boundary():
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(math.pi) == math.pi


def test_torsion_arithmetic_reduces():
    g = GroupDescriptor(1, (6,))
    x = g.element((2,), (5,)) + g.element((-1,), (4,))
    assert x.free_part == (1,) and x.torsion_part == (3,)
    assert (x - x) == g.identity()


def test_hom_dimension_is_free_rank():
    assert [hom_to_C_dimension(g) for g in GROUPS] == [1, 2, 0, 1]


@given(st.sampled_from(GROUPS[:2]), st.data())
def test_dual_distance_is_metric(g, data):
    pts = [g.character([data.draw(angle) for _ in range(g.free_rank)]) for _ in range(3)]
    a, b, c = pts
    assert dual_distance(a, a) == 0.0
    assert abs(dual_distance(a, b) - dual_distance(b, a)) < 1e-15
    assert dual_distance(a, c) <= dual_distance(a, b) + dual_distance(b, c) + 1e-12
    assert 0.0 <= dual_distance(a, b) <= math.pi


def test_dual_distance_examples():
    g = GroupDescriptor(1)
    assert dual_distance(g.character(0.5), g.trivial_character()) == pytest.approx(0.5)
    assert dual_distance(g.character(3.0), g.character(-3.0)) == pytest.approx(2 * math.pi - 6.0)
    h = GroupDescriptor(0, (6,))
    assert dual_distance(h.character((), (1,)), h.trivial_character()) == TORSION_SENTINEL


def test_box_size_and_order():
    g = GroupDescriptor(2, (3,))
    free, tors = g.box(1)
    assert len(free) == 9 * 3
    assert tuple(free[0]) == (-1, -1) and tuple(tors[0]) == (0,)
    free, tors = g.box(2, nonnegative=True)
    assert free.min() == 0 and len(free) == 27


def test_json_roundtrip():
    for g in GROUPS:
        assert GroupDescriptor.from_json(g.to_json()) == g


@pytest.mark.parametrize("args", [(-1,), (1.5,), (1, (1,)), (0, (0,))])
def test_invalid_descriptors(args):
    with pytest.raises(InvalidArgumentError):
        GroupDescriptor(*args)


def test_mismatched_groups_rejected():
    with pytest.raises(InvalidArgumentError):
        evaluate_character(GroupDescriptor(1).character(0.1), GroupDescriptor(2).identity())
    with pytest.raises(InvalidArgumentError):
        DualPoint(GroupDescriptor(1), (0.1, 0.2))
    with pytest.raises(InvalidArgumentError):
        GroupElement(GroupDescriptor(1), (1, 2))
