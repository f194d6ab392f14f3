"""Nontrivial cocycles from dyadic shells around the trivial character.

With K_k = {x : ||x||_inf <= k} (K_0 = {0}) and

    U_k = {xi : max_{g in K_k} |xi(g) - 1| < 2^-k},

the indices k_0 = 0, k_n = min{k > k_{n-1} : mu(U_k) < mu(U_{k_{n-1}})} cut
the dual into shells C_n = U_{k_n} minus U_{k_{n+1}}.  With eta_n the
normalized indicator of C_n, b(x) = sum_n (xi(x) - 1) eta_n is a cocycle;
it is the formal coboundary of sum_n eta_n, whose squared norm equals the
number of shells and therefore diverges as shells are added.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError, ResolutionError, WrongRegimeError
from ..groups import character_table
from ..measure import SUPPORT_THRESHOLD, DualMeasure, distance_to_support
from .cocycle import Cocycle

DEFAULT_SHELLS = 8
MAX_LEVEL = 60
INCREMENT_TOL = 1e-9


@dataclass(frozen=True)
class PartialSumCertificate:
    ell: int
    max_tail: float         # max over x in K_ell of sum_{n >= ell} ||(rho(x) - 1) eta_n||^2
    max_total: float        # same with n >= 1
    geometric_bound: float  # sum_{n >= ell} 4^{-k_n}

    @property
    def tail_ok(self) -> bool:
        return self.max_tail <= 4.0 / 3.0 and self.max_tail <= self.geometric_bound

    @property
    def total_ok(self) -> bool:
        return self.max_total <= 4.0 * self.ell + 4.0 / 3.0


@dataclass(frozen=True, eq=False)
class NontrivialCocycle:
    cocycle: Cocycle
    k_sequence: tuple[int, ...]           # k_0, ..., k_{L+1}
    shell_index: np.ndarray               # 1..L per point, 0 outside all shells
    shell_masses: np.ndarray              # mu(C_1), ..., mu(C_L)
    neighborhood_masses: tuple[float, ...]  # mu(U_k) for k = 0, 1, ...
    eta: np.ndarray
    partial_sums: tuple[PartialSumCertificate, ...]
    obstruction: tuple[tuple[float, float], ...]  # (delta_n, I_{delta_n}), n = 1..L

    @property
    def shell_count(self) -> int:
        return len(self.shell_masses)

    @property
    def increments(self) -> np.ndarray:
        vals = np.asarray([i for _, i in self.obstruction])
        return np.diff(np.concatenate([[0.0], vals]))

    @property
    def divergence_certified(self) -> bool:
        inc = self.increments
        return bool(len(inc)) and bool(np.all(inc >= 1.0 - INCREMENT_TOL)) \
            and self.obstruction[-1][1] >= self.shell_count - 1

    @property
    def bound_certified(self) -> bool:
        return all(c.tail_ok and c.total_ok for c in self.partial_sums)


def neighborhood_levels(mu: DualMeasure, max_level: int = MAX_LEVEL) -> np.ndarray:
    """For every point, the largest k with the point in U_k (U_k are nested)."""
    g = mu.group
    levels = np.zeros(mu.n_points, dtype=np.int64)
    live = mu.masses > 0
    ang, tors = mu.angles, mu.torsion
    for k in range(1, max_level + 1):
        cand = np.flatnonzero(live & (levels == k - 1))
        if not len(cand):
            break
        free, tor = g.box(k)
        table = character_table(ang[cand], tors[cand], free, tor, g.torsion_orders)
        inside = np.abs(table - 1.0).max(axis=1) < 2.0 ** -k
        levels[cand[inside]] = k
    return levels


def _shell_indices(levels: np.ndarray, masses: np.ndarray) -> tuple[list[int], list[float]]:
    top = int(levels.max(initial=0))
    u_mass = [float(masses[levels >= k].sum()) for k in range(top + 2)]
    ks = [0]
    while True:
        prev = ks[-1]
        nxt = next((k for k in range(prev + 1, len(u_mass)) if u_mass[k] < u_mass[prev]), None)
        if nxt is None:
            return ks, u_mass
        ks.append(nxt)


def build_nontrivial_cocycle(mu_perp: DualMeasure, shell_count: int = DEFAULT_SHELLS,
                             ells: tuple[int, ...] = (1, 2, 3),
                             threshold: float = SUPPORT_THRESHOLD) -> NontrivialCocycle:
    """Shell cocycle on a measure whose support touches 1_G without an atom there."""
    g = mu_perp.group
    if mu_perp.trivial_atom_index() is not None:
        raise PreconditionError("the measure has an atom at the trivial character")
    triv = g.trivial_character()
    gap = distance_to_support(triv, mu_perp, threshold)
    if gap > 0:
        raise WrongRegimeError(f"support stays {gap:.3g} away from the trivial character; "
                               "every cocycle is a coboundary there (use solve_coboundary)")
    masses = mu_perp.masses
    levels = neighborhood_levels(mu_perp)
    ks, u_mass = _shell_indices(levels, masses)
    usable = len(ks) - 2
    if usable < shell_count:
        raise ResolutionError(
            f"grid resolves only {max(usable, 0)} shells, {shell_count} requested", max(usable, 0))
    ks = ks[: shell_count + 2]

    shell = np.zeros(mu_perp.n_points, dtype=np.int64)
    for n in range(1, shell_count + 1):
        shell[(levels >= ks[n]) & (levels < ks[n + 1]) & (masses > 0)] = n
    shell_mass = np.asarray([masses[shell == n].sum() for n in range(1, shell_count + 1)])
    eta = np.zeros(mu_perp.n_points)
    for n in range(1, shell_count + 1):
        eta[shell == n] = 1.0 / np.sqrt(shell_mass[n - 1])

    b = Cocycle.coboundary(mu_perp, eta.astype(complex))

    certs = []
    for ell in ells:
        free, tor = g.box(ell)
        chi = character_table(mu_perp.angles, mu_perp.torsion, free, tor, g.torsion_orders)
        sq = np.abs(chi - 1.0) ** 2 * masses[:, None]
        per_shell = np.stack([sq[shell == n].sum(axis=0) / shell_mass[n - 1]
                              for n in range(1, shell_count + 1)])
        tail = per_shell[ell - 1:].sum(axis=0)
        geom = float(sum(4.0 ** -ks[n] for n in range(ell, shell_count + 1)))
        certs.append(PartialSumCertificate(ell, float(tail.max()), float(per_shell.sum(axis=0).max()), geom))

    dist = mu_perp.distances_to(triv)
    inner = [dist[shell == n].min() for n in range(1, shell_count + 1)]
    outer = [dist[shell == n].max() for n in range(1, shell_count + 1)]
    density = masses * eta ** 2
    obstruction = []
    for n in range(1, shell_count + 1):
        if n == shell_count:
            delta = inner[n - 1] / 2.0
        elif outer[n] < inner[n - 1]:
            delta = 0.5 * (inner[n - 1] + outer[n])
        else:
            delta = float(np.nextafter(inner[n - 1], 0.0))
        obstruction.append((float(delta), float(density[dist > delta].sum())))

    return NontrivialCocycle(b, tuple(ks), shell, shell_mass, tuple(u_mass), eta,
                             tuple(certs), tuple(obstruction))
