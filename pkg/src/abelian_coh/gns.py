"""Finite-window GNS model of a positive definite function.

The GNS space is spanned by point masses delta_x for x in a window W, with

    <delta_x, delta_y> = phi(x - y),

so ``K[x, y] = phi(x - y)`` and, for coefficient vectors u, v,
``<u, v> = u^T K conj(v)`` (linear in the first argument).  Translation by t
sends delta_x to delta_{x+t} and is only defined while the support stays in W.

Equivalence with the multiplication representation on L^2(mu) is checked by
comparing the Gram matrices of the two cyclic orbits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bochner import PdFunction, check_positive_definite, gram_matrix
from .errors import InvalidArgumentError, NotPositiveDefiniteError, WindowTooSmallError
from .groups import GroupDescriptor, GroupElement, character_table
from .measure import DualMeasure

PSD_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class GnsModel:
    group: GroupDescriptor
    window_radius: int
    free: np.ndarray
    torsion: np.ndarray
    kernel_matrix: np.ndarray
    phi: PdFunction

    @property
    def dimension(self) -> int:
        return len(self.free)

    @property
    def cyclic_index(self) -> int:
        return self.index_of(self.group.identity())

    def index_of(self, x: GroupElement) -> int:
        hits = np.flatnonzero(np.all(self.free == np.asarray(x.free_part), axis=1)
                              & np.all(self.torsion == np.asarray(x.torsion_part), axis=1))
        if not len(hits):
            raise WindowTooSmallError(f"{x} lies outside the GNS window of radius {self.window_radius}")
        return int(hits[0])

    def basis_vector(self, x: GroupElement) -> np.ndarray:
        e = np.zeros(self.dimension, dtype=complex)
        e[self.index_of(x)] = 1.0
        return e

    def cyclic_vector(self) -> np.ndarray:
        return self.basis_vector(self.group.identity())

    def inner(self, u, v) -> complex:
        return complex(np.asarray(u) @ self.kernel_matrix @ np.conj(v))

    def translate(self, u, t: GroupElement) -> np.ndarray:
        """pi(t) u; raises if part of the support would leave the window."""
        u = np.asarray(u, dtype=complex)
        out = np.zeros_like(u)
        for i in np.flatnonzero(u):
            x = GroupElement(self.group, tuple(self.free[i]), tuple(self.torsion[i])) + t
            out[self.index_of(x)] += u[i]
        return out


def build_gns(phi: PdFunction, window_radius: int | None = None) -> GnsModel:
    """Kernel-matrix model on the window of radius ``window_radius`` (default N // 2).

    Differences of window elements must stay inside phi's window, hence the
    default of half of phi's radius.
    """
    g = phi.group
    if window_radius is None:
        window_radius = phi.window_radius // 2
    if g.free_rank and 2 * window_radius > phi.window_radius:
        raise WindowTooSmallError(
            f"GNS window {window_radius} needs phi on radius {2 * window_radius}, have {phi.window_radius}")
    verdict = check_positive_definite(phi)
    if not verdict:
        raise NotPositiveDefiniteError(
            f"phi is not positive definite (min eigenvalue {verdict.min_eigenvalue:.3e})", verdict)
    free, tors = g.box(window_radius)
    k = gram_matrix(phi, free, tors)
    eig = np.linalg.eigvalsh(k)
    if eig[0] < -PSD_RTOL * np.max(np.abs(eig)):
        raise NotPositiveDefiniteError(f"GNS kernel has eigenvalue {eig[0]:.3e}", verdict)
    k.setflags(write=False)
    return GnsModel(g, window_radius, free, tors, k, phi)


def orbit_gram_gns(model: GnsModel, shifts: list[GroupElement]) -> np.ndarray:
    """A[s, t] = <pi(s) xi, pi(t) xi> = phi(s - t)."""
    idx = [model.index_of(s) for s in shifts]
    return model.kernel_matrix[np.ix_(idx, idx)]


def orbit_gram_measure(mu: DualMeasure, shifts: list[GroupElement]) -> np.ndarray:
    """B[s, t] = <rho(s) 1, rho(t) 1> in L^2(mu) = integral of xi(s - t) d mu."""
    g = mu.group
    free = np.asarray([s.free_part for s in shifts], dtype=np.int64).reshape(len(shifts), g.free_rank)
    tors = np.asarray([s.torsion_part for s in shifts], dtype=np.int64).reshape(len(shifts), g.torsion_rank)
    table = character_table(mu.angles, mu.torsion, free, tors, g.torsion_orders)
    weighted = table * mu.masses[:, None]
    return weighted.T @ np.conj(table)


def verify_equivalence(model: GnsModel, mu: DualMeasure, shifts: list[GroupElement]) -> float:
    """max |A - B| over the shift set; small values certify equal cyclic orbits."""
    if mu.group != model.group:
        raise InvalidArgumentError("measure and GNS model live on different groups")
    for s in shifts:
        for t in shifts:
            d = s - t
            if d.sup_norm() > model.window_radius:
                raise WindowTooSmallError(f"shift difference {d.free_part} lies outside the window")
    a = orbit_gram_gns(model, shifts)
    b = orbit_gram_measure(mu, shifts)
    return float(np.max(np.abs(a - b)))
