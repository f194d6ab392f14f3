"""Positive definite functions on a finite window and the transform to dual measures.

Forward: phi(x) = sum over the measure of xi(x).  Inverse: atoms at declared
candidate characters are fitted from Cesaro means, the remainder is turned
into a density with a Fejer-smoothed partial Fourier sum.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentInputError,
    InvalidArgumentError,
    NotPositiveDefiniteError,
    WindowTooSmallError,
)
from .groups import TWO_PI, DualPoint, GroupDescriptor, GroupElement, as_rows, character_table
from .measure import DEFAULT_GRID_SIZE, MASS_TOL, DualMeasure, midpoint_grid

log = logging.getLogger(__name__)

PSD_RTOL = 1e-8
HERMITIAN_TOL = 1e-12
MIN_CESARO_WINDOW = 64
CESARO_TOL = 1e-2
FULL_GRAM_LIMIT = 2048
_CHUNK = 512


class UnconvergedWarning(RuntimeWarning):
    """Cesaro means did not settle within tolerance."""


@dataclass(frozen=True, eq=False)
class PdFunction:
    """Values of phi on ``{x : ||free(x)||_inf <= window_radius}`` times the torsion subgroup.

    ``values`` has shape ``(2N+1,)*d + torsion_orders``; free coordinate ``m``
    sits at index ``m + N``.  For a finite group the window radius is ignored.
    """

    group: GroupDescriptor
    window_radius: int
    values: np.ndarray

    def __post_init__(self):
        g, n = self.group, int(self.window_radius)
        if n < 0:
            raise InvalidArgumentError("window radius must be nonnegative")
        object.__setattr__(self, "window_radius", n)
        shape = (2 * n + 1,) * g.free_rank + g.torsion_orders
        vals = np.array(self.values, dtype=complex).reshape(shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        free, tors = g.box(n)
        at_zero = self.at(np.zeros((1, g.free_rank), np.int64), np.zeros((1, g.torsion_rank), np.int64))[0]
        if abs(at_zero - 1.0) > MASS_TOL:
            raise InvalidArgumentError(f"phi(0) must be 1, got {at_zero}")
        mirrored = self.at(-free, -tors)
        if np.max(np.abs(mirrored - np.conj(vals.ravel()))) > HERMITIAN_TOL:
            raise InvalidArgumentError("phi is not Hermitian: phi(-x) != conj(phi(x))")
        if np.max(np.abs(vals)) > 1.0 + HERMITIAN_TOL:
            raise InvalidArgumentError("|phi(x)| exceeds phi(0) = 1")

    @classmethod
    def from_callable(cls, group: GroupDescriptor, window_radius: int, f) -> "PdFunction":
        """Tabulate ``f(free, torsion) -> values`` on the window."""
        free, tors = group.box(window_radius)
        return cls(group, window_radius, np.asarray(f(free, tors), dtype=complex))

    def elements(self) -> tuple[np.ndarray, np.ndarray]:
        return self.group.box(self.window_radius)

    def contains(self, free: np.ndarray) -> np.ndarray:
        free = as_rows(free, self.group.free_rank)
        if not self.group.free_rank:
            return np.ones(len(free), dtype=bool)
        return np.abs(free).max(axis=1) <= self.window_radius

    def at(self, free, torsion) -> np.ndarray:
        g = self.group
        free = as_rows(free, g.free_rank)
        torsion = as_rows(torsion, g.torsion_rank)
        if not np.all(self.contains(free)):
            bad = free[~self.contains(free)][0]
            raise WindowTooSmallError(f"element with free part {tuple(bad)} is outside window {self.window_radius}")
        idx = [free[:, i] + self.window_radius for i in range(g.free_rank)]
        idx += [np.mod(torsion[:, j], n) for j, n in enumerate(g.torsion_orders)]
        if not idx:
            return self.values.reshape(1).repeat(len(free))
        return self.values[tuple(idx)]

    def value(self, x: GroupElement) -> complex:
        return complex(self.at(np.asarray([x.free_part]), np.asarray([x.torsion_part]))[0])


@dataclass(frozen=True, eq=False)
class PdVerdict:
    is_pd: bool
    min_eigenvalue: float
    matrix_norm: float
    witness_free: np.ndarray | None = None
    witness_torsion: np.ndarray | None = None
    matrices_checked: int = 0

    def __bool__(self) -> bool:
        return self.is_pd


def gram_matrix(phi: PdFunction, free: np.ndarray, torsion: np.ndarray) -> np.ndarray:
    """K_ij = phi(x_i - x_j)."""
    g = phi.group
    free = as_rows(free, g.free_rank)
    torsion = as_rows(torsion, g.torsion_rank)
    dfree = as_rows(free[:, None, :] - free[None, :, :], g.free_rank) if g.free_rank else np.zeros((len(free) ** 2, 0), np.int64)
    dtors = (torsion[:, None, :] - torsion[None, :, :]).reshape(len(torsion) ** 2, g.torsion_rank)
    n = len(free)
    return phi.at(dfree, dtors).reshape(n, n)


def check_positive_definite(phi: PdFunction, sample_count: int = 16, seed: int = 0,
                            subsets=None, rtol: float = PSD_RTOL) -> PdVerdict:
    """PSD test of Gram matrices phi(x - y) over finite subsets of the window.

    The full nonnegative box ``{0..N}^d x torsion`` is always tested when it
    has at most ``FULL_GRAM_LIMIT`` elements (for G = Z this is the full
    Toeplitz matrix); ``sample_count`` random subsets of that box follow.
    Explicit ``subsets`` (a list of ``(free, torsion)`` arrays) replace the
    automatic choice and must have all differences inside the window.
    """
    g = phi.group
    if subsets is None:
        n = phi.window_radius
        bfree, btors = g.box(n, nonnegative=True)
        chosen = []
        if len(bfree) <= FULL_GRAM_LIMIT:
            chosen.append((bfree, btors))
        rng = np.random.default_rng(seed)
        for _ in range(sample_count):
            size = int(rng.integers(2, min(64, len(bfree)) + 1)) if len(bfree) > 1 else 1
            pick = np.sort(rng.choice(len(bfree), size=size, replace=False))
            chosen.append((bfree[pick], btors[pick]))
    else:
        chosen = []
        for free, tors in subsets:
            free = as_rows(free, g.free_rank)
            tors = as_rows(tors, g.torsion_rank)
            diffs = (free[:, None, :] - free[None, :, :]).reshape(len(free) ** 2, g.free_rank)
            if not np.all(phi.contains(diffs)):
                raise WindowTooSmallError("requested subset has differences outside the window")
            chosen.append((free, tors))

    worst = None
    for free, tors in chosen:
        eig = np.linalg.eigvalsh(gram_matrix(phi, free, tors))
        norm = float(np.max(np.abs(eig)))
        lo = float(eig[0])
        if worst is None or lo / max(norm, 1e-300) < worst[0] / max(worst[1], 1e-300):
            worst = (lo, norm, free, tors)
        if lo < -rtol * norm:
            return PdVerdict(False, lo, norm, free, tors, len(chosen))
    lo, norm, free, tors = worst
    return PdVerdict(True, lo, norm, None, None, len(chosen))


def _weighted_character_sum(weights: np.ndarray, angles: np.ndarray, chars: np.ndarray,
                            free: np.ndarray, torsion: np.ndarray, orders) -> np.ndarray:
    """sum_p weights_p * xi_p(x_q) for every q, reduced in fixed chunk order."""
    out = np.zeros(len(free), dtype=complex)
    for start in range(0, len(weights), _CHUNK):
        sl = slice(start, start + _CHUNK)
        out += weights[sl] @ character_table(angles[sl], chars[sl], free, torsion, orders)
    return out


def bochner_forward(mu: DualMeasure, window_radius: int) -> PdFunction:
    """phi(x) = integral of xi(x) d mu(xi) on the window."""
    if not mu.is_probability():
        raise InvalidArgumentError(f"not a probability measure (total mass {mu.total_mass!r})")
    g = mu.group
    free, tors = g.box(window_radius)
    vals = _weighted_character_sum(mu.masses.astype(complex), mu.angles, mu.torsion, free, tors,
                                   g.torsion_orders)
    return PdFunction(g, window_radius, vals)


def cesaro_mean(phi: PdFunction, xi: DualPoint | None = None, radius: int | None = None) -> complex:
    """Average of phi(x) * conj(xi(x)) over the box of the given radius times torsion."""
    g = phi.group
    radius = phi.window_radius if radius is None else radius
    free, tors = g.box(radius if g.free_rank else 0)
    vals = phi.at(free, tors)
    if xi is not None:
        chi = character_table(np.asarray([xi.torus_angles]).reshape(1, -1),
                              np.asarray([xi.torsion_characters]).reshape(1, -1),
                              free, tors, g.torsion_orders)[0]
        vals = vals * np.conj(chi)
    return complex(vals.mean())


@dataclass(frozen=True)
class AtomEstimate:
    value: float
    diagnostics: tuple[tuple[int, float], ...] = ()
    converged: bool = True
    warning: str | None = None

    def __float__(self) -> float:
        return self.value


def atom_at_trivial(phi: PdFunction, min_window: int = MIN_CESARO_WINDOW,
                    tol: float = CESARO_TOL) -> AtomEstimate:
    """Mass of the spectral measure at the trivial character.

    Exact for finite groups.  Otherwise the Cesaro mean over the full window,
    with the means at N/4, N/2, N as a convergence diagnostic: the value is
    flagged unconverged when the last step moves by more than ``tol`` or by
    more than the previous step plus ``tol``.
    """
    g = phi.group
    if g.is_finite:
        v = cesaro_mean(phi).real
        return AtomEstimate(float(min(max(v, 0.0), 1.0)))
    n = phi.window_radius
    if n < min_window:
        raise WindowTooSmallError(f"window {n} is below the Cesaro minimum {min_window}")
    radii = (n // 4, n // 2, n)
    means = tuple(cesaro_mean(phi, radius=r).real for r in radii)
    step_last, step_prev = abs(means[2] - means[1]), abs(means[1] - means[0])
    converged = step_last <= tol and step_last <= step_prev + tol
    msg = None
    if not converged:
        msg = f"Cesaro means {means} at radii {radii} have not settled within {tol}"
        warnings.warn(msg, UnconvergedWarning, stacklevel=2)
    value = float(min(max(means[2], 0.0), 1.0))
    return AtomEstimate(value, tuple(zip(radii, means)), converged, msg)


def _fit_atoms(phi: PdFunction, candidates: list[DualPoint], atom_tol: float) -> list[tuple[DualPoint, float]]:
    """Least-squares weights of candidate characters against phi on the window.

    Solves A w = c with c_b the Cesaro mean of phi * conj(xi_b) and A_ba the
    Cesaro mean of xi_a * conj(xi_b).  For a single candidate this is the
    plain Cesaro mean.  Candidates at or below ``atom_tol`` are discarded and
    the fit repeated.
    """
    g = phi.group
    free, tors = g.box(phi.window_radius)
    vals = phi.at(free, tors)
    active = list(candidates)
    while active:
        ang = np.asarray([p.torus_angles for p in active], dtype=float).reshape(len(active), -1)
        chr_ = np.asarray([p.torsion_characters for p in active], dtype=np.int64).reshape(len(active), -1)
        table = character_table(ang, chr_, free, tors, g.torsion_orders)
        c = np.conj(table) @ vals / len(vals)
        a = np.conj(table) @ table.T / len(vals)
        w = np.linalg.solve(a, c).real
        keep = w > atom_tol
        if keep.all():
            return list(zip(active, (float(x) for x in w)))
        active = [p for p, k in zip(active, keep) if k]
    return []


def fejer_density(phi_values: np.ndarray, group: GroupDescriptor, window_radius: int,
                  grid_size: int) -> np.ndarray:
    """Fejer-smoothed inverse transform evaluated at the grid midpoints.

    Density is with respect to d theta on the torus and counting measure on
    the torsion characters.
    """
    free, tors = group.box(window_radius)
    taper = np.prod(1.0 - np.abs(free) / (window_radius + 1.0), axis=1) if group.free_rank else np.ones(len(free))
    coeff = taper * np.asarray(phi_values).reshape(-1)
    ang, chars, _ = midpoint_grid(group, grid_size)
    dens = np.empty(len(ang))
    scale = 1.0 / (TWO_PI ** group.free_rank * group.torsion_size)
    for start in range(0, len(ang), _CHUNK):
        sl = slice(start, start + _CHUNK)
        table = character_table(ang[sl], chars[sl], free, tors, group.torsion_orders)
        dens[sl] = (np.conj(table) @ coeff).real * scale
    return dens


def bochner_inverse(phi: PdFunction, grid_size: int = DEFAULT_GRID_SIZE,
                    candidates: tuple[DualPoint, ...] = (), atom_tol: float = CESARO_TOL,
                    negative_tol: float = 1e-3, check: bool = True) -> DualMeasure:
    """Recover the spectral measure of phi.

    Finite groups: exact inverse DFT, one atom per character of positive mass.
    Otherwise atoms are fitted at the trivial character and the declared
    ``candidates``, subtracted, and the remainder is estimated by a Fejer
    sum, clipped at zero and rescaled to the leftover mass.  The maximal
    forward-roundtrip error on the inner half window is stored in
    ``notes["roundtrip_error"]``.
    """
    g = phi.group
    if check:
        verdict = check_positive_definite(phi)
        if not verdict:
            raise NotPositiveDefiniteError(
                f"phi is not positive definite (min eigenvalue {verdict.min_eigenvalue:.3e})", verdict)

    if g.is_finite:
        ang, chars, _ = midpoint_grid(g, 1)
        free, tors = g.box(0)
        table = character_table(ang, chars, free, tors, g.torsion_orders)
        weights = (np.conj(table) @ phi.at(free, tors)).real / len(free)
        if np.any(weights < -MASS_TOL):
            raise InconsistentInputError(f"negative character mass {weights.min():.3e}")
        keep = weights > 1e-12
        mu = DualMeasure.from_parts(g, [((a, c), w) for a, c, w, k in zip(ang, chars, weights, keep) if k])
        mu, _ = mu.normalized()
        mu.notes.pop("normalization_factor", None)
        mu.notes["roundtrip_error"] = _roundtrip_error(phi, mu, 0)
        return mu

    seen = [g.trivial_character()]
    for p in candidates:
        if not any(p == q for q in seen):
            seen.append(p)
    atoms = _fit_atoms(phi, seen, atom_tol)
    free, tors = g.box(phi.window_radius)
    rest = phi.at(free, tors)
    if atoms:
        ang = np.asarray([p.torus_angles for p, _ in atoms], dtype=float).reshape(len(atoms), -1)
        chr_ = np.asarray([p.torsion_characters for p, _ in atoms], dtype=np.int64).reshape(len(atoms), -1)
        w = np.asarray([x for _, x in atoms])
        rest = rest - w @ character_table(ang, chr_, free, tors, g.torsion_orders)
    origin = np.flatnonzero(~np.any(free, axis=1) & ~np.any(tors, axis=1))[0]
    leftover = float(rest[origin].real)

    density = None
    if leftover > MASS_TOL:
        dens = fejer_density(rest, g, phi.window_radius, grid_size)
        q = (TWO_PI / grid_size) ** g.free_rank
        negative = float(np.sum(np.clip(-dens, 0.0, None)) * q)
        if negative > negative_tol:
            raise InconsistentInputError(f"Fejer estimate carries negative mass {negative:.3e}")
        dens = np.clip(dens, 0.0, None)
        total = float(dens.sum() * q)
        if total <= 0:
            raise InconsistentInputError("Fejer estimate vanishes although continuous mass remains")
        density = dens * (leftover / total)

    mu = DualMeasure.from_parts(g, atoms, density, grid_size)
    mu, _ = mu.normalized()
    mu.notes.pop("normalization_factor", None)
    mu.notes["fejer_order"] = phi.window_radius
    mu.notes["roundtrip_error"] = _roundtrip_error(phi, mu, phi.window_radius // 2)
    return mu


def _roundtrip_error(phi: PdFunction, mu: DualMeasure, radius: int) -> float:
    back = bochner_forward(mu, radius)
    free, tors = back.elements()
    return float(np.max(np.abs(back.values.ravel() - phi.at(free, tors))))
