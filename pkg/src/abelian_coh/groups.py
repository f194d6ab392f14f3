"""Finitely generated abelian groups Z^d x Z_{n_1} x ... x Z_{n_k} and their duals.

The dual of such a group is T^d x Z_{n_1} x ... x Z_{n_k}.  A character is
stored as a vector of torus angles theta in (-pi, pi] plus one residue per
torsion factor; it acts on ``x = (m, r)`` by

    xi(x) = exp(i <theta, m>) * prod_j exp(2 pi i c_j r_j / n_j).

Besides the scalar value types there are array helpers (``character_table``,
``generator_angles``) used by the measure and cohomology code, which keep
points as rows of ``(angles, torsion)`` arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidArgumentError

TWO_PI = 2.0 * math.pi

# distance reported between characters that differ on the torsion part
TORSION_SENTINEL = TWO_PI


def wrap_angle(theta):
    """Map angles to (-pi, pi]."""
    t = np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi
    t = np.where(t <= -math.pi, t + TWO_PI, t)
    if np.ndim(t) == 0:
        return float(t)
    return t


@dataclass(frozen=True)
class GroupDescriptor:
    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(n) for n in self.torsion_orders))
        if int(self.free_rank) != self.free_rank or self.free_rank < 0:
            raise InvalidArgumentError(f"free_rank must be a nonnegative integer, got {self.free_rank!r}")
        object.__setattr__(self, "free_rank", int(self.free_rank))
        if any(n < 2 for n in self.torsion_orders):
            raise InvalidArgumentError(f"torsion orders must be >= 2, got {self.torsion_orders}")

    @property
    def torsion_rank(self) -> int:
        return len(self.torsion_orders)

    @property
    def torsion_size(self) -> int:
        return math.prod(self.torsion_orders)

    @property
    def generator_count(self) -> int:
        return self.free_rank + self.torsion_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.free_rank, (0,) * self.torsion_rank)

    def element(self, free=(), torsion=None) -> "GroupElement":
        if torsion is None:
            torsion = (0,) * self.torsion_rank
        return GroupElement(self, tuple(free), tuple(torsion))

    def generators(self) -> list["GroupElement"]:
        """Free generators e_1..e_d followed by one generator per torsion factor."""
        out = []
        for i in range(self.generator_count):
            coeffs = [0] * self.generator_count
            coeffs[i] = 1
            out.append(self.element(coeffs[: self.free_rank], coeffs[self.free_rank:]))
        return out

    def trivial_character(self) -> "DualPoint":
        return DualPoint(self, (0.0,) * self.free_rank, (0,) * self.torsion_rank)

    def character(self, angles=(), torsion=None) -> "DualPoint":
        if torsion is None:
            torsion = (0,) * self.torsion_rank
        return DualPoint(self, tuple(np.atleast_1d(angles).tolist()) if self.free_rank else (), tuple(torsion))

    def torsion_elements(self) -> np.ndarray:
        """All torsion residues, shape (torsion_size, torsion_rank), C order."""
        if not self.torsion_orders:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(n) for n in self.torsion_orders], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def box(self, radius: int, nonnegative: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Elements with ||free||_inf <= radius times the whole torsion subgroup.

        Returns ``(free, torsion)`` arrays with one row per element; the
        ordering is C order over (free coordinates..., torsion coordinates...).
        """
        lo = 0 if nonnegative else -radius
        axes = [np.arange(lo, radius + 1)] * self.free_rank + [np.arange(n) for n in self.torsion_orders]
        if not axes:
            return np.zeros((1, 0), dtype=np.int64), np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*axes, indexing="ij")
        flat = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        return flat[:, : self.free_rank], flat[:, self.free_rank:]

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion_orders)}

    @classmethod
    def from_json(cls, data: dict) -> "GroupDescriptor":
        try:
            return cls(int(data.get("free_rank", 0)), tuple(data.get("torsion", ())))
        except (TypeError, AttributeError) as exc:
            raise InvalidArgumentError(f"bad group descriptor {data!r}: {exc}") from exc

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z_{n}" for n in self.torsion_orders]
        return " x ".join(parts) if parts else "trivial group"


@dataclass(frozen=True)
class GroupElement:
    group: GroupDescriptor
    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...] = field(default=())

    def __post_init__(self):
        g = self.group
        if len(self.free_part) != g.free_rank or len(self.torsion_part) != g.torsion_rank:
            raise InvalidArgumentError(
                f"element ({self.free_part}, {self.torsion_part}) does not match {g}")
        object.__setattr__(self, "free_part", tuple(int(m) for m in self.free_part))
        object.__setattr__(
            self, "torsion_part",
            tuple(int(r) % n for r, n in zip(self.torsion_part, g.torsion_orders)))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _same_group(self.group, other.group)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free_part, other.free_part)),
            tuple(a + b for a, b in zip(self.torsion_part, other.torsion_part)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.free_part),
                            tuple(-a for a in self.torsion_part))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    @property
    def coefficients(self) -> tuple[int, ...]:
        """Coordinates with respect to ``GroupDescriptor.generators()``."""
        return self.free_part + self.torsion_part

    def sup_norm(self) -> int:
        return max((abs(m) for m in self.free_part), default=0)


@dataclass(frozen=True)
class DualPoint:
    group: GroupDescriptor
    torus_angles: tuple[float, ...]
    torsion_characters: tuple[int, ...] = field(default=())

    def __post_init__(self):
        g = self.group
        if len(self.torus_angles) != g.free_rank or len(self.torsion_characters) != g.torsion_rank:
            raise InvalidArgumentError(
                f"character ({self.torus_angles}, {self.torsion_characters}) does not match {g}")
        object.__setattr__(self, "torus_angles", tuple(float(wrap_angle(t)) for t in self.torus_angles))
        object.__setattr__(
            self, "torsion_characters",
            tuple(int(c) % n for c, n in zip(self.torsion_characters, g.torsion_orders)))

    def is_trivial(self) -> bool:
        return all(t == 0.0 for t in self.torus_angles) and all(c == 0 for c in self.torsion_characters)


def _same_group(a: GroupDescriptor, b: GroupDescriptor) -> None:
    if a != b:
        raise InvalidArgumentError(f"group mismatch: {a} vs {b}")


def evaluate_character(xi: DualPoint, x: GroupElement) -> complex:
    """Value xi(x); always of modulus one."""
    _same_group(xi.group, x.group)
    phase = sum(t * m for t, m in zip(xi.torus_angles, x.free_part))
    turns = _torsion_turns(np.asarray([xi.torsion_characters], dtype=np.int64),
                           np.asarray([x.torsion_part], dtype=np.int64),
                           xi.group.torsion_orders)[0, 0]
    return complex(np.exp(1j * (phase + TWO_PI * turns)))


def hom_to_C_dimension(g: GroupDescriptor) -> int:
    """dim Hom(G, C): only the free part contributes."""
    return g.free_rank


def dual_distance(xi: DualPoint, eta: DualPoint) -> float:
    """Max-coordinate arc distance on T^d; ``TORSION_SENTINEL`` if torsion parts differ."""
    _same_group(xi.group, eta.group)
    return float(dual_distances(
        np.asarray([xi.torus_angles], dtype=float).reshape(1, -1),
        np.asarray([xi.torsion_characters], dtype=np.int64).reshape(1, -1),
        np.asarray(eta.torus_angles, dtype=float),
        np.asarray(eta.torsion_characters, dtype=np.int64))[0])


# ----------------------------------------------------------------------------
# array helpers
# ----------------------------------------------------------------------------

def as_rows(a, width: int, dtype=np.int64) -> np.ndarray:
    """Coerce to a 2-d array with ``width`` columns (width 0 allowed)."""
    a = np.asarray(a, dtype=dtype)
    if a.ndim == 2 and a.shape[1] == width:
        return a
    if width == 0:
        return np.zeros((len(a) if a.ndim else 1, 0), dtype=dtype)
    return a.reshape(-1, width)


def arc_distance(a, b):
    """Elementwise distance on the circle R / 2 pi Z."""
    d = np.abs(np.mod(np.asarray(a, dtype=float) - b, TWO_PI))
    return np.minimum(d, TWO_PI - d)


def dual_distances(angles: np.ndarray, torsion: np.ndarray, ref_angles, ref_torsion) -> np.ndarray:
    """Distance from every row of ``(angles, torsion)`` to one reference point."""
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[0]
    if angles.shape[1]:
        dist = arc_distance(angles, np.asarray(ref_angles, dtype=float)[None, :]).max(axis=1)
    else:
        dist = np.zeros(n)
    if torsion.shape[1]:
        differs = np.any(torsion != np.asarray(ref_torsion)[None, :], axis=1)
        dist = np.where(differs, TORSION_SENTINEL, dist)
    return dist


def _torsion_turns(chars: np.ndarray, residues: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    """Fractional turns sum_j c_j r_j / n_j for all (char, residue) pairs, in (-1/2, 1/2]."""
    out = np.zeros((chars.shape[0], residues.shape[0]))
    for j, n in enumerate(orders):
        k = np.mod(np.outer(chars[:, j], residues[:, j]), n)
        k = np.where(2 * k > n, k - n, k)
        out += k / n
    return out


def character_table(angles: np.ndarray, chars: np.ndarray, free: np.ndarray,
                    torsion: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    """Matrix of xi_p(x_q) for dual points p (rows) and group elements q (columns)."""
    angles = np.asarray(angles, dtype=float)
    free = np.asarray(free, dtype=float)
    phase = angles @ free.T if angles.shape[1] else np.zeros((angles.shape[0], free.shape[0]))
    if len(orders):
        phase = phase + TWO_PI * _torsion_turns(np.asarray(chars, dtype=np.int64),
                                                np.asarray(torsion, dtype=np.int64), orders)
    return np.exp(1j * phase)


def generator_angles(angles: np.ndarray, chars: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    """Phase of xi(g_i) in (-pi, pi] for every generator g_i; shape (n_gen, n_points)."""
    rows = [np.asarray(angles, dtype=float)[:, i] for i in range(np.shape(angles)[1])]
    for j, n in enumerate(orders):
        rows.append(wrap_angle(TWO_PI * np.asarray(chars)[:, j] / n))
    if not rows:
        return np.zeros((0, np.shape(angles)[0]))
    return np.vstack([np.atleast_1d(r) for r in rows])


def iter_box(group: GroupDescriptor, radius: int) -> Iterator[GroupElement]:
    free, tors = group.box(radius)
    for f, t in zip(free, tors):
        yield GroupElement(group, tuple(f), tuple(t))


def torsion_character_grid(group: GroupDescriptor) -> list[tuple[int, ...]]:
    return list(itertools.product(*[range(n) for n in group.torsion_orders]))
