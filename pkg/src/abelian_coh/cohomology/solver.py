"""Solving b = (rho - 1) w when the support stays away from the trivial character.

Averaging the symmetric cocycle relation against a finitely supported
probability measure nu on G gives

    (1 - xi(x)) v(xi) = (1 - nu_hat(xi)) b(x)(xi),   v = sum_y nu(y) b(y),

so w = v / (nu_hat - 1) satisfies (rho(x) - 1) w = b(x) wherever
|1 - nu_hat| is bounded below.  nu is the uniform measure on the box
{0, ..., m-1}^d times the torsion subgroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import AbelianCohError, NoGapError, PreconditionError
from ..groups import GroupDescriptor, GroupElement, as_rows
from ..measure import SUPPORT_THRESHOLD, DualMeasure, distance_to_support
from .cocycle import Cocycle, box_residual, coboundary_residual, geometric_factor

SOLVE_RTOL = 1e-8
# |1 - nu_hat| must stay at least this large on the support
SEPARATION = 0.5


@dataclass(frozen=True)
class SmoothingMeasure:
    """Uniform probability measure on {0..m-1}^d x torsion subgroup."""

    group: GroupDescriptor
    box_side: int
    gap: float = math.nan
    epsilon: float = math.nan
    separation: float = math.nan

    @property
    def size(self) -> int:
        return self.box_side ** self.group.free_rank * self.group.torsion_size

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        free, tors = self.group.box(self.box_side - 1, nonnegative=True)
        return free, tors

    @property
    def support_points(self) -> list[GroupElement]:
        free, tors = self.support()
        return [GroupElement(self.group, tuple(f), tuple(t)) for f, t in zip(free, tors)]

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)

    def fourier_transform(self, angles, torsion) -> np.ndarray:
        """nu_hat(xi) = sum_y nu(y) xi(y), evaluated row by row."""
        angles = as_rows(angles, self.group.free_rank, float)
        torsion = as_rows(torsion, self.group.torsion_rank)
        out = np.ones(len(angles), dtype=complex)
        for c in range(self.group.free_rank):
            out *= geometric_factor(angles[:, c], self.box_side) / self.box_side
        if self.group.torsion_rank:
            out = np.where(np.all(torsion == 0, axis=1), out, 0.0)
        return out


def find_smoothing_measure(mu_perp: DualMeasure, threshold: float = SUPPORT_THRESHOLD) -> SmoothingMeasure:
    """Smallest box side m with |1 - nu_hat| >= 1/2 on the numerical support.

    The one-dimensional bound |nu_hat(theta)| <= 1 / (m sin(|theta|/2))
    shows m = ceil(2 / sin(gap/2)) always works; smaller m are tried first.
    """
    g = mu_perp.group
    triv = g.trivial_character()
    gap = distance_to_support(triv, mu_perp, threshold)
    if not gap > 0:
        raise NoGapError("the trivial character lies in the numerical support (gap 0)")
    mask = mu_perp.support_mask(threshold)
    ang, tors = mu_perp.angles[mask], mu_perp.torsion[mask]
    if not g.free_rank or not mask.any():
        nu = SmoothingMeasure(g, 1, gap)
        hat = nu.fourier_transform(ang, tors)
        return SmoothingMeasure(g, 1, gap, float(np.abs(hat).max(initial=0.0)),
                                float(np.abs(1 - hat).min(initial=1.0)))
    guide = math.ceil(2.0 / math.sin(min(gap, math.pi) / 2.0))
    for m in range(1, 4 * guide + 64):
        hat = SmoothingMeasure(g, m, gap).fourier_transform(ang, tors)
        sep = float(np.abs(1.0 - hat).min())
        if sep >= SEPARATION:
            return SmoothingMeasure(g, m, gap, float(np.abs(hat).max()), sep)
    raise AbelianCohError(f"no box side up to {4 * guide + 63} separates nu_hat from 1 (gap {gap})")


@dataclass(frozen=True, eq=False)
class CoboundarySolution:
    w: np.ndarray
    residual: float
    smoothing: SmoothingMeasure
    bound: float
    certified: bool


def _smoothed_cocycle(b: Cocycle, nu: SmoothingMeasure) -> np.ndarray:
    """v = sum_y nu(y) b(y), b(y) by the extension rule."""
    v = np.zeros(b.measure.n_points, dtype=complex)
    for y in nu.support_points:
        v += b.value(y)
    return v / nu.size


def solve_coboundary(b: Cocycle, threshold: float = SUPPORT_THRESHOLD) -> CoboundarySolution:
    """Vector w with (rho(g_i) - 1) w = b(g_i), certified to 1e-8 (1 + ||b||)."""
    mu = b.measure
    nu = find_smoothing_measure(mu, threshold)
    v = _smoothed_cocycle(b, nu)
    denom = nu.fourier_transform(mu.angles, mu.torsion) - 1.0
    safe = np.abs(denom) >= SEPARATION
    w = np.zeros(mu.n_points, dtype=complex)
    w[safe] = v[safe] / denom[safe]
    residual = coboundary_residual(b, w)
    bound = SOLVE_RTOL * (1.0 + b.norm())
    return CoboundarySolution(w, residual, nu, bound, residual <= bound)


@dataclass(frozen=True, eq=False)
class ApproximationStage:
    stage: int
    radius: float
    w: np.ndarray
    residual: float
    tail_bound: float
    neighborhood_mass: float
    solver_residual: float
    box_side: int
    box_residual: float | None = None

    def __iter__(self):
        # unpacks as (w_n, residual_n)
        return iter((self.w, self.residual))


def approximate_by_coboundaries(b: Cocycle, stage_count: int = 5, first_radius: float = 1.0,
                                check_box: int | None = None,
                                threshold: float = SUPPORT_THRESHOLD) -> list[ApproximationStage]:
    """Coboundaries w_n of the projections of b off V_n = {xi : dist(xi, 1_G) < r_n}.

    r_n halves from ``first_radius``.  Each residual satisfies
    residual_n^2 = sum over V_n of |b(g_i)|^2 (the tail) up to the solver
    error on the complement; ``tail_bound`` stores the generator sum of the
    tails.
    """
    mu = b.measure
    if mu.trivial_atom_index() is not None:
        raise PreconditionError("the measure has an atom at the trivial character")
    dist = mu.distances_to(mu.group.trivial_character())
    masses = mu.masses
    stages = []
    for n in range(stage_count):
        r = first_radius / 2.0 ** n
        inside = dist < r
        keep = ~inside
        w = np.zeros(mu.n_points, dtype=complex)
        solver_res, side = 0.0, 0
        if np.any(keep & mu.support_mask(threshold)):
            part = Cocycle(mu.restrict(keep), b.generator_values[:, keep])
            sol = solve_coboundary(part, threshold)
            w[keep] = sol.w
            solver_res, side = sol.residual, sol.smoothing.box_side
        tail = float(np.sum(np.abs(b.generator_values[:, inside]) ** 2 * masses[None, inside]))
        stages.append(ApproximationStage(
            n + 1, r, w, coboundary_residual(b, w), tail, float(masses[inside].sum()), solver_res, side,
            box_residual(b, w, check_box) if check_box is not None else None))
    return stages
