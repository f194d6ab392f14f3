"""Vanishing of H^1 and reduced H^1 for the representation attached to a dual measure."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError, ResolutionError
from ..groups import GroupDescriptor, hom_to_C_dimension
from ..measure import DualMeasure, decompose, distance_to_support
from .cocycle import Cocycle
from .shells import DEFAULT_SHELLS, NontrivialCocycle, build_nontrivial_cocycle

# "mu(1_G) = 0" cut-off: explicit atom lists vs Cesaro-inferred masses
ATOM_TOL_EXPLICIT = 1e-6
ATOM_TOL_INFERRED = 1e-2


class Verdict(str, enum.Enum):
    VANISHES = "vanishes"
    NONVANISHING = "nonvanishing"


def decide(trivial_positive: bool, hom_positive: bool, gap_positive: bool) -> tuple[Verdict, Verdict]:
    """(H^1, reduced H^1) for finitely generated G, which is always sigma-compact.

    Reduced H^1 vanishes iff mu(1_G) = 0 or Hom(G, C) = 0; H^1 vanishes iff in
    addition 1_G stays outside the support of the remainder.
    """
    reduced = not (trivial_positive and hom_positive)
    full = reduced and gap_positive
    as_verdict = {True: Verdict.VANISHES, False: Verdict.NONVANISHING}
    return as_verdict[full], as_verdict[reduced]


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    trivial_mass: float
    hom_dim: int
    support_distance: float
    verdict_H1: Verdict
    verdict_reduced_H1: Verdict
    atom_tol: float
    witness: Cocycle | None = None
    witness_kind: str | None = None
    shell_witness: NontrivialCocycle | None = None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "trivial_mass": self.trivial_mass,
            "hom_dim": self.hom_dim,
            "support_distance": self.support_distance,
            "atom_tol": self.atom_tol,
            "verdict_H1": self.verdict_H1.value,
            "verdict_reduced_H1": self.verdict_reduced_H1.value,
            "witness_kind": self.witness_kind,
        }
        if self.shell_witness is not None:
            sw = self.shell_witness
            out["shell_witness"] = {
                "shell_count": sw.shell_count,
                "k_sequence": list(sw.k_sequence),
                "shell_masses": sw.shell_masses.tolist(),
                "obstruction": [list(p) for p in sw.obstruction],
                "divergence_certified": sw.divergence_certified,
                "bound_certified": sw.bound_certified,
            }
        out.update(self.notes)
        return out


def homomorphism_cocycle(mu: DualMeasure) -> Cocycle:
    """x -> (first free coordinate of x) * indicator of the trivial atom.

    Lives in the fixed vectors, where every coboundary vanishes, so it is
    nonzero in H^1 and in reduced H^1.
    """
    g = mu.group
    i = mu.trivial_atom_index()
    if i is None or not g.free_rank:
        raise InvalidArgumentError("needs an atom at the trivial character and a free factor")
    vals = np.zeros((g.generator_count, mu.n_points), dtype=complex)
    vals[0, i] = 1.0
    return Cocycle(mu, vals)


def classify(mu: DualMeasure, group: GroupDescriptor | None = None, atom_tol: float = ATOM_TOL_EXPLICIT,
             witness: bool = True, shell_count: int = DEFAULT_SHELLS) -> ClassificationReport:
    g = mu.group if group is None else group
    if g != mu.group:
        raise InvalidArgumentError(f"measure lives on the dual of {mu.group}, not {g}")
    dec = decompose(mu)
    hom = hom_to_C_dimension(g)
    gap = distance_to_support(g.trivial_character(), dec.perp)
    trivial_positive = dec.trivial_mass > atom_tol
    h1, reduced = decide(trivial_positive, hom > 0, gap > 0)

    wit, kind, shell_wit, notes = None, None, None, {}
    if mu.notes.get("normalization_factor") is not None:
        notes["normalization_factor"] = mu.notes["normalization_factor"]
    if witness and reduced is Verdict.NONVANISHING:
        wit, kind = homomorphism_cocycle(mu), "homomorphism"
    if witness and h1 is Verdict.NONVANISHING and gap == 0:
        try:
            shell_wit = build_nontrivial_cocycle(dec.perp, shell_count)
        except ResolutionError as exc:
            notes["shell_resolution"] = f"{exc}; using {exc.usable}"
            if exc.usable >= 1:
                shell_wit = build_nontrivial_cocycle(dec.perp, exc.usable)
        if wit is None and shell_wit is not None:
            wit, kind = shell_wit.cocycle, "shells"
    return ClassificationReport(dec.trivial_mass, hom, gap, h1, reduced, atom_tol, wit, kind, shell_wit, notes)
