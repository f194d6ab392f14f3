"""1-cocycles of the multiplication representation on a discretized L^2(mu).

A cocycle is stored by its values on the generators; all other values come
from the extension rule b(x + y) = rho(x) b(y) + b(x).  On a single
generator g with xi(g) = e^{i alpha} this gives

    b(a g) = (e^{i a alpha} - 1) / (e^{i alpha} - 1) * b(g),

valid for negative a as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import InvalidArgumentError
from ..groups import GroupElement, character_table, generator_angles
from ..measure import DualMeasure, l2_norm

COCYCLE_TOL = 1e-9


def geometric_factor(alpha: np.ndarray, a: int) -> np.ndarray:
    """sum_{j=0}^{a-1} e^{i j alpha} continued to negative a, in the stable Dirichlet form."""
    alpha = np.asarray(alpha, dtype=float)
    half = np.sin(alpha / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(a * alpha / 2.0) / half
    ratio = np.where(half == 0.0, float(a), ratio)
    return np.exp(0.5j * (a - 1) * alpha) * ratio


@dataclass(frozen=True, eq=False)
class Cocycle:
    measure: DualMeasure
    generator_values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.generator_values, dtype=complex)
        expected = (self.measure.group.generator_count, self.measure.n_points)
        if vals.ndim == 1 and expected[0] == 1:
            vals = vals[None, :]
        if vals.shape != expected:
            raise InvalidArgumentError(f"generator values have shape {vals.shape}, expected {expected}")
        vals.setflags(write=False)
        object.__setattr__(self, "generator_values", vals)

    @property
    def group(self):
        return self.measure.group

    @cached_property
    def phases(self) -> np.ndarray:
        """Angle of xi(g_i) at every point, shape (n_generators, n_points)."""
        mu = self.measure
        return generator_angles(mu.angles, mu.torsion, mu.group.torsion_orders)

    def character(self, x: GroupElement) -> np.ndarray:
        """xi(x) at every point of the measure."""
        mu = self.measure
        return character_table(mu.angles, mu.torsion, np.asarray([x.free_part]).reshape(1, -1),
                               np.asarray([x.torsion_part]).reshape(1, -1), mu.group.torsion_orders)[:, 0]

    def value(self, x: GroupElement) -> np.ndarray:
        if x.group != self.group:
            raise InvalidArgumentError("element belongs to a different group")
        out = np.zeros(self.measure.n_points, dtype=complex)
        prefix = np.ones(self.measure.n_points, dtype=complex)
        for i, a in enumerate(x.coefficients):
            if a == 0:
                continue
            alpha = self.phases[i]
            out += prefix * geometric_factor(alpha, a) * self.generator_values[i]
            prefix = prefix * np.exp(1j * a * alpha)
        return out

    def generator_norms(self) -> np.ndarray:
        return np.asarray([l2_norm(v, self.measure) for v in self.generator_values])

    def norm(self) -> float:
        """Largest L^2 norm over the generators."""
        return float(self.generator_norms().max(initial=0.0))

    @classmethod
    def coboundary(cls, measure: DualMeasure, u) -> "Cocycle":
        """b(g) = (rho(g) - 1) u."""
        u = np.asarray(u, dtype=complex)
        if u.shape != (measure.n_points,):
            raise InvalidArgumentError("vector does not live on the measure's points")
        ph = generator_angles(measure.angles, measure.torsion, measure.group.torsion_orders)
        return cls(measure, (np.exp(1j * ph) - 1.0) * u[None, :])

    @classmethod
    def zero(cls, measure: DualMeasure) -> "Cocycle":
        return cls(measure, np.zeros((measure.group.generator_count, measure.n_points), dtype=complex))


def random_smooth_cocycle(measure: DualMeasure, seed: int = 0, degree: int = 4) -> Cocycle:
    """Seeded cocycle with trigonometric-polynomial generator values.

    On a single generator any vector is a cocycle, so b(1) is a random
    polynomial of the given degree.  With more generators the relation
    (1 - xi(x)) b(y) = (1 - xi(y)) b(x) ties them together, and the result is
    the coboundary of such a polynomial.
    """
    rng = np.random.default_rng(seed)
    k = np.arange(-degree, degree + 1)
    decay = 1.0 / (1.0 + np.abs(k)) ** 2
    g = measure.group
    poly = np.zeros(measure.n_points, dtype=complex)
    coords = measure.angles if g.free_rank else np.zeros((measure.n_points, 1))
    for c in range(coords.shape[1]):
        coef = (rng.standard_normal(len(k)) + 1j * rng.standard_normal(len(k))) * decay
        poly += np.exp(1j * np.outer(coords[:, c], k)) @ coef
    if g.generator_count == 1 and g.free_rank == 1:
        return Cocycle(measure, poly[None, :])
    return Cocycle.coboundary(measure, poly)


def coboundary_residual(b: Cocycle, w) -> float:
    """max_i || (rho(g_i) - 1) w - b(g_i) || over the generators."""
    w = np.asarray(w)
    diff = (np.exp(1j * b.phases) - 1.0) * w[None, :] - b.generator_values
    return max((l2_norm(row, b.measure) for row in diff), default=0.0)


def box_residual(b: Cocycle, w, radius: int) -> float:
    """max over x with ||x||_inf <= radius of || (rho(x) - 1) w - b(x) ||."""
    worst = 0.0
    free, tors = b.group.box(radius)
    for f, t in zip(free, tors):
        x = GroupElement(b.group, tuple(f), tuple(t))
        worst = max(worst, l2_norm((b.character(x) - 1.0) * w - b.value(x), b.measure))
    return worst


@dataclass(frozen=True)
class CocycleCheck:
    passed: bool
    max_violation: float
    pairs_checked: int

    def __bool__(self) -> bool:
        return self.passed


def validate_cocycle(b: Cocycle, random_pairs: int = 10, seed: int = 0, radius: int = 5,
                     tol: float = COCYCLE_TOL) -> CocycleCheck:
    """Check (1 - xi(x)) b(y) = (1 - xi(y)) b(x) in weighted L^2.

    Runs over all generator pairs and ``random_pairs`` random pairs of
    elements with free part in the box of the given radius.  For torsion
    generators the relation b(n g) = 0 is checked as well.
    """
    g, mu = b.group, b.measure
    gens = g.generators()
    values = {x: b.value(x) for x in gens}
    pairs = [(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    rng = np.random.default_rng(seed)
    for _ in range(random_pairs):
        pick = []
        for _ in range(2):
            free = rng.integers(-radius, radius + 1, size=g.free_rank)
            tors = [rng.integers(0, n) for n in g.torsion_orders]
            pick.append(GroupElement(g, tuple(free), tuple(tors)))
        pairs.append(tuple(pick))

    worst = 0.0
    for x, y in pairs:
        bx = values[x] if x in values else b.value(x)
        by = values[y] if y in values else b.value(y)
        lhs = (1.0 - b.character(x)) * by
        rhs = (1.0 - b.character(y)) * bx
        worst = max(worst, l2_norm(lhs - rhs, mu))
    for j, n in enumerate(g.torsion_orders):
        i = g.free_rank + j
        worst = max(worst, l2_norm(geometric_factor(b.phases[i], n) * b.generator_values[i], mu))
    return CocycleCheck(worst <= tol, worst, len(pairs))
