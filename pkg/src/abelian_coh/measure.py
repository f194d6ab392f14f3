"""Finite measures on the dual group: atoms plus a gridded density.

A :class:`DualMeasure` is a weighted point cloud.  Atoms carry their weight
directly; grid points are midpoints of a uniform angular grid of ``M`` cells
per torus coordinate and carry ``density * quadrature_weight``.  Functions on
the measure ("discretized L^2 vectors") are complex arrays with one entry per
point, atoms first, then grid points.

The grid need not be complete: restrictions keep a subset of cells together
with their index in the full grid (``grid_index``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConstantFunctionError, InvalidArgumentError
from .groups import (
    TORSION_SENTINEL,
    TWO_PI,
    DualPoint,
    GroupDescriptor,
    arc_distance,
    dual_distances,
    wrap_angle,
)

DEFAULT_GRID_SIZE = 4096
SUPPORT_THRESHOLD = 1e-12
MASS_TOL = 1e-9
# trivial atom weight at or above 1 - CONSTANT_TOL means phi == 1
CONSTANT_TOL = 1e-9
ATOM_COINCIDENCE = 1e-12


def midpoint_grid(group: GroupDescriptor, grid_size: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Midpoints -pi + (j + 1/2) 2pi/M of the full grid, times every torsion character.

    Returns ``(angles, torsion_chars, quadrature_weight)``; the row order is C
    order over (angle indices..., torsion characters...).
    """
    if grid_size < 1:
        raise InvalidArgumentError(f"grid size must be positive, got {grid_size}")
    d = group.free_rank
    mids = -math.pi + (np.arange(grid_size) + 0.5) * (TWO_PI / grid_size)
    axes = [mids] * d + [np.arange(n, dtype=float) for n in group.torsion_orders]
    if not axes:
        return np.zeros((1, 0)), np.zeros((1, 0), dtype=np.int64), 1.0
    grids = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    return flat[:, :d], flat[:, d:].astype(np.int64), (TWO_PI / grid_size) ** d


@dataclass(frozen=True, eq=False)
class DualMeasure:
    group: GroupDescriptor
    atom_angles: np.ndarray
    atom_torsion: np.ndarray
    atom_weights: np.ndarray
    grid_angles: np.ndarray
    grid_torsion: np.ndarray
    density: np.ndarray
    quad_weights: np.ndarray
    grid_size: int | None = None
    grid_index: np.ndarray | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        g = self.group
        d, t = g.free_rank, g.torsion_rank
        aw = np.asarray(self.atom_weights, dtype=float).reshape(-1)
        dens = np.asarray(self.density, dtype=float).reshape(-1)
        aa = np.asarray(self.atom_angles, dtype=float).reshape(len(aw), d)
        at = np.asarray(self.atom_torsion, dtype=np.int64).reshape(len(aw), t)
        ga = np.asarray(self.grid_angles, dtype=float).reshape(len(dens), d)
        gt = np.asarray(self.grid_torsion, dtype=np.int64).reshape(len(dens), t)
        qw = np.broadcast_to(np.asarray(self.quad_weights, dtype=float), dens.shape).copy()
        if not (len(aa) == len(at) == len(aw)):
            raise InvalidArgumentError("atom arrays have inconsistent lengths")
        if not (len(ga) == len(gt) == len(dens) == len(qw)):
            raise InvalidArgumentError("grid arrays have inconsistent lengths")
        if np.any(aw <= 0) or np.any(~np.isfinite(aw)):
            raise InvalidArgumentError("atom weights must be positive and finite")
        if np.any(dens < 0) or np.any(~np.isfinite(dens)):
            raise InvalidArgumentError("density values must be nonnegative and finite")
        if np.any(qw <= 0):
            raise InvalidArgumentError("quadrature weights must be positive")
        aa = wrap_angle(aa) if aa.size else aa
        if t:
            at = np.mod(at, np.asarray(g.torsion_orders))
            gt = np.mod(gt, np.asarray(g.torsion_orders))
        for i in range(1, len(aa)):
            dist = dual_distances(aa[:i], at[:i], aa[i], at[i])
            if np.any(dist <= ATOM_COINCIDENCE):
                raise InvalidArgumentError(f"atom {i} coincides with an earlier atom")
        gi = self.grid_index
        gi = np.arange(len(dens)) if gi is None else np.asarray(gi, dtype=np.int64).reshape(-1)
        if len(gi) != len(dens):
            raise InvalidArgumentError("grid_index length mismatch")
        for name, arr in (("atom_angles", aa), ("atom_torsion", at), ("atom_weights", aw),
                          ("grid_angles", ga), ("grid_torsion", gt), ("density", dens),
                          ("quad_weights", qw), ("grid_index", gi)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_parts(cls, group: GroupDescriptor, atoms: Iterable[tuple] = (),
                   density: Callable | np.ndarray | None = None,
                   grid_size: int = DEFAULT_GRID_SIZE, notes: dict | None = None) -> "DualMeasure":
        """Build from ``(DualPoint | (angles, torsion), weight)`` atoms and an optional density.

        ``density`` is either a callable ``f(angles, torsion) -> values`` evaluated
        at the grid midpoints, or an array over the full midpoint grid.
        """
        aa, at, aw = [], [], []
        for point, weight in atoms:
            if isinstance(point, DualPoint):
                if point.group != group:
                    raise InvalidArgumentError("atom belongs to a different group")
                ang, tor = point.torus_angles, point.torsion_characters
            else:
                ang, tor = point
            aa.append(np.asarray(ang, dtype=float).reshape(group.free_rank))
            at.append(np.asarray(tor, dtype=np.int64).reshape(group.torsion_rank))
            aw.append(float(weight))
        d, t = group.free_rank, group.torsion_rank
        if density is None:
            ga, gt, dens, qw, gs = np.zeros((0, d)), np.zeros((0, t), np.int64), np.zeros(0), np.zeros(0), None
        else:
            ga, gt, q = midpoint_grid(group, grid_size)
            dens = density(ga, gt) if callable(density) else np.asarray(density, dtype=float).reshape(-1)
            dens = np.asarray(dens, dtype=float).reshape(-1)
            if len(dens) != len(ga):
                raise InvalidArgumentError(
                    f"density table has {len(dens)} values, grid has {len(ga)} cells")
            qw, gs = np.full(len(ga), q), grid_size
        k = len(aw)
        aa = np.asarray(aa, dtype=float).reshape(k, d)
        at = np.asarray(at, dtype=np.int64).reshape(k, t)
        return cls(group, aa, at, np.asarray(aw, dtype=float),
                   ga, gt, dens, qw, gs, None, dict(notes or {}))

    @classmethod
    def dirac(cls, point: DualPoint) -> "DualMeasure":
        return cls.from_parts(point.group, [(point, 1.0)])

    # -- views ------------------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return len(self.atom_weights)

    @property
    def n_points(self) -> int:
        return len(self.atom_weights) + len(self.density)

    @property
    def angles(self) -> np.ndarray:
        return np.vstack([self.atom_angles, self.grid_angles])

    @property
    def torsion(self) -> np.ndarray:
        return np.vstack([self.atom_torsion, self.grid_torsion])

    @property
    def masses(self) -> np.ndarray:
        return np.concatenate([self.atom_weights, self.density * self.quad_weights])

    @property
    def is_atom(self) -> np.ndarray:
        return np.arange(self.n_points) < self.n_atoms

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def cell_halfwidth(self) -> float:
        return 0.0 if not self.grid_size else math.pi / self.grid_size

    def atoms(self) -> list[tuple[DualPoint, float]]:
        return [(DualPoint(self.group, tuple(a), tuple(t)), float(w))
                for a, t, w in zip(self.atom_angles, self.atom_torsion, self.atom_weights)]

    def support_mask(self, threshold: float = SUPPORT_THRESHOLD) -> np.ndarray:
        return np.concatenate([self.atom_weights > 0, self.density > threshold])

    def distances_to(self, xi: DualPoint, cells: bool = False) -> np.ndarray:
        """Distance from xi to every point; with ``cells`` grid points count as closed cells."""
        dist = dual_distances(self.angles, self.torsion, xi.torus_angles, xi.torsion_characters)
        if cells and len(self.density) and self.group.free_rank:
            g_ang = arc_distance(self.grid_angles, np.asarray(xi.torus_angles)[None, :])
            h = self.cell_halfwidth
            # a midpoint within rounding of the cell edge still covers xi
            g_dist = np.where(g_ang <= h * (1.0 + 1e-9), 0.0, g_ang - h).max(axis=1)
            if self.group.torsion_rank:
                differs = np.any(self.grid_torsion != np.asarray(xi.torsion_characters)[None, :], axis=1)
                g_dist = np.where(differs, TORSION_SENTINEL, g_dist)
            dist[self.n_atoms:] = g_dist
        return dist

    def is_probability(self, tol: float = MASS_TOL) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    # -- transformations -----------------------------------------------------

    def _replace(self, **changes) -> "DualMeasure":
        fields = dict(group=self.group, atom_angles=self.atom_angles, atom_torsion=self.atom_torsion,
                      atom_weights=self.atom_weights, grid_angles=self.grid_angles,
                      grid_torsion=self.grid_torsion, density=self.density,
                      quad_weights=self.quad_weights, grid_size=self.grid_size,
                      grid_index=self.grid_index, notes=dict(self.notes))
        fields.update(changes)
        return DualMeasure(**fields)

    def scaled(self, factor: float) -> "DualMeasure":
        if factor <= 0:
            raise InvalidArgumentError("scale factor must be positive")
        return self._replace(atom_weights=self.atom_weights * factor, density=self.density * factor)

    def normalized(self) -> tuple["DualMeasure", float]:
        """Rescale to total mass one; returns the measure and the factor applied."""
        total = self.total_mass
        if not total > 0:
            raise InvalidArgumentError("cannot normalize a measure of zero mass")
        factor = 1.0 / total
        out = self.scaled(factor)
        out.notes["normalization_factor"] = factor
        return out, factor

    def restrict(self, keep: np.ndarray) -> "DualMeasure":
        """Sub-measure on the points selected by the boolean mask ``keep``."""
        keep = np.asarray(keep, dtype=bool)
        if keep.shape != (self.n_points,):
            raise InvalidArgumentError("mask length does not match the number of points")
        ka, kg = keep[: self.n_atoms], keep[self.n_atoms:]
        return self._replace(
            atom_angles=self.atom_angles[ka], atom_torsion=self.atom_torsion[ka],
            atom_weights=self.atom_weights[ka], grid_angles=self.grid_angles[kg],
            grid_torsion=self.grid_torsion[kg], density=self.density[kg],
            quad_weights=self.quad_weights[kg], grid_index=self.grid_index[kg])

    def trivial_atom_index(self) -> int | None:
        if not self.n_atoms:
            return None
        triv = self.group.trivial_character()
        dist = dual_distances(self.atom_angles, self.atom_torsion,
                              triv.torus_angles, triv.torsion_characters)
        hits = np.flatnonzero(dist <= ATOM_COINCIDENCE)
        return int(hits[0]) if len(hits) else None

    def trivial_atom_mass(self) -> float:
        i = self.trivial_atom_index()
        return 0.0 if i is None else float(self.atom_weights[i])


def _point_key(kind: str, angles, torsion) -> tuple:
    return (kind,) + tuple(np.round(np.asarray(angles, dtype=float), 14)) + tuple(int(c) for c in torsion)


def total_variation(a: DualMeasure, b: DualMeasure) -> float:
    """Total variation distance between two discretized measures (points matched by position)."""
    acc: dict[tuple, float] = {}
    for sign, mu in ((1.0, a), (-1.0, b)):
        kinds = ["a"] * mu.n_atoms + ["g"] * len(mu.density)
        for kind, ang, tor, m in zip(kinds, mu.angles, mu.torsion, mu.masses):
            key = _point_key(kind, ang, tor)
            acc[key] = acc.get(key, 0.0) + sign * m
    return float(sum(abs(v) for v in acc.values()))


@dataclass(frozen=True, eq=False)
class Decomposition:
    trivial_mass: float
    perp: DualMeasure

    def reconstruct(self) -> DualMeasure:
        """trivial_mass * delta_{1_G} + (1 - trivial_mass) * perp."""
        t = self.trivial_mass
        body = self.perp.scaled(1.0 - t)
        if t <= 0:
            return body
        g = self.perp.group
        triv = g.trivial_character()
        return body._replace(
            atom_angles=np.vstack([np.asarray(triv.torus_angles, dtype=float).reshape(1, -1), body.atom_angles]),
            atom_torsion=np.vstack([np.asarray(triv.torsion_characters, dtype=np.int64).reshape(1, -1),
                                    body.atom_torsion]),
            atom_weights=np.concatenate([[t], body.atom_weights]))


def decompose(mu: DualMeasure) -> Decomposition:
    """Split off the atom at the trivial character and renormalize the rest."""
    if not mu.is_probability():
        raise InvalidArgumentError(f"not a probability measure (total mass {mu.total_mass!r})")
    i = mu.trivial_atom_index()
    t = 0.0 if i is None else float(mu.atom_weights[i])
    if t >= 1.0 - CONSTANT_TOL:
        raise ConstantFunctionError("measure is the Dirac mass at the trivial character (phi is constant 1)")
    rest = mu
    if i is not None:
        keep = np.ones(mu.n_points, dtype=bool)
        keep[i] = False
        rest = mu.restrict(keep)
    perp = rest.scaled(1.0 / (1.0 - t))
    perp.notes.pop("normalization_factor", None)
    return Decomposition(t, perp)


def distance_to_support(xi: DualPoint, mu: DualMeasure, threshold: float = SUPPORT_THRESHOLD) -> float:
    """Distance from xi to the numerical support; grid cells count as closed boxes.

    Returns ``inf`` for a measure with empty numerical support.
    """
    mask = mu.support_mask(threshold)
    if not mask.any():
        return math.inf
    return float(mu.distances_to(xi, cells=True)[mask].min())


def l2_norm(f, mu: DualMeasure) -> float:
    f = np.asarray(f)
    if f.shape != (mu.n_points,):
        raise InvalidArgumentError(f"vector of shape {f.shape} does not live on {mu.n_points} points")
    return float(np.sqrt(np.sum(np.abs(f) ** 2 * mu.masses)))


def inner(f, g, mu: DualMeasure) -> complex:
    """<f, g> = integral of f * conj(g); linear in the first slot."""
    return complex(np.sum(np.asarray(f) * np.conj(g) * mu.masses))


# ----------------------------------------------------------------------------
# density generators
# ----------------------------------------------------------------------------

def poisson_kernel(theta, r: float):
    """(1 - r^2) / (2 pi (1 - 2 r cos theta + r^2))."""
    return (1.0 - r * r) / (TWO_PI * (1.0 - 2.0 * r * np.cos(theta) + r * r))


def _on_character(values: np.ndarray, torsion: np.ndarray, chars: Sequence[int] | None) -> np.ndarray:
    if torsion.shape[1] == 0:
        return values
    target = np.zeros(torsion.shape[1], dtype=np.int64) if chars is None else np.asarray(chars)
    return np.where(np.all(torsion == target[None, :], axis=1), values, 0.0)


def poisson_density(r: float, center: Sequence[float] | float = 0.0, torsion: Sequence[int] | None = None):
    """Product Poisson kernel centred at ``center``, carried by one torsion character."""
    if not 0.0 < r < 1.0:
        raise InvalidArgumentError(f"Poisson parameter must lie in (0, 1), got {r}")

    def f(angles, chars):
        c = np.broadcast_to(np.asarray(center, dtype=float), (angles.shape[1],))
        vals = np.prod(poisson_kernel(angles - c[None, :], r), axis=1)
        return _on_character(vals, chars, torsion)
    return f


def uniform_arc_density(arc: Sequence[float] | Sequence[Sequence[float]], torsion: Sequence[int] | None = None):
    """Uniform density 1/|arc| on cells whose midpoint lies in the (product of) arc(s)."""
    arcs = np.asarray(arc, dtype=float)
    if arcs.ndim == 1:
        arcs = arcs[None, :]
    if np.any(arcs[:, 1] <= arcs[:, 0]):
        raise InvalidArgumentError(f"arc endpoints must be increasing, got {arc}")

    def f(angles, chars):
        a = np.broadcast_to(arcs, (angles.shape[1], 2))
        inside = np.all((angles >= a[None, :, 0]) & (angles <= a[None, :, 1]), axis=1)
        vals = np.where(inside, 1.0 / np.prod(a[:, 1] - a[:, 0]), 0.0)
        return _on_character(vals, chars, torsion)
    return f
