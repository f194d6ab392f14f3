"""JSON/TOML/CSV reading and writing for groups, measures, functions and cocycles.

Measure files look like::

    {"group": {"free_rank": 1, "torsion": []},
     "atoms": [{"theta": [2.0], "torsion": [], "weight": 0.5}],
     "density": {"kind": "poisson", "r": 0.5},
     "grid_size": 4096}

Density kinds: ``poisson`` (``r``, optional ``center``), ``uniform_arc``
(``arc``), ``table`` (``values`` over the full midpoint grid) and ``mixture``
(``components``, each a density spec with a ``weight``).  Any density may
carry ``torsion`` (the character it sits on) and ``mass``; analytic kinds
default to the mass left over by the atoms.  The loader normalizes the total
mass to one and records the factor in ``notes["normalization_factor"]``.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import numpy as np

from .bochner import PdFunction
from .cohomology.cocycle import Cocycle
from .errors import InvalidArgumentError, ParseError
from .groups import GroupDescriptor
from .measure import DEFAULT_GRID_SIZE, DualMeasure, midpoint_grid, poisson_density, uniform_arc_density

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def load_config(path) -> dict:
    """Parse a JSON or TOML file (chosen by suffix), reporting the failing line."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".toml":
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            line = getattr(exc, "lineno", None)
            if line is None:
                import re
                m = re.search(r"line (\d+)", str(exc))
                line = int(m.group(1)) if m else None
            raise ParseError(f"{path}: {exc}", line) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", exc.lineno) from exc


def dump_json(data, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


# ----------------------------------------------------------------------------
# measures
# ----------------------------------------------------------------------------

def _density_callable(spec: dict):
    kind = spec.get("kind")
    tors = spec.get("torsion")
    if kind == "poisson":
        return poisson_density(float(spec["r"]), spec.get("center", 0.0), tors)
    if kind == "uniform_arc":
        return uniform_arc_density(spec["arc"], tors)
    if kind == "mixture":
        parts = [(float(c.get("weight", 1.0)), c) for c in spec["components"]]
        total = sum(w for w, _ in parts)
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgumentError(f"mixture weights sum to {total}, not 1")

        def f(angles, chars):
            out = np.zeros(len(angles))
            for w, c in parts:
                vals = _density_callable(c)(angles, chars)
                mass = vals.sum()
                out += w * vals / mass if mass > 0 else 0.0
            return out
        return f
    raise InvalidArgumentError(f"unknown density kind {kind!r}")


def measure_from_json(data: dict, group: GroupDescriptor | None = None,
                      grid_size: int | None = None) -> DualMeasure:
    try:
        if group is None:
            if "group" not in data:
                raise InvalidArgumentError("measure file names no group; pass one explicitly")
            group = GroupDescriptor.from_json(data["group"])
        grid = int(grid_size or data.get("grid_size", DEFAULT_GRID_SIZE))
        atoms = []
        for a in data.get("atoms", []):
            atoms.append(((a.get("theta", []), a.get("torsion", [0] * group.torsion_rank)), float(a["weight"])))
        atom_mass = sum(w for _, w in atoms)
        spec = data.get("density")
        density = None
        if spec:
            ang, chars, q = midpoint_grid(group, grid)
            if spec.get("kind") == "table":
                vals = np.asarray(spec["values"], dtype=float)
                if len(vals) != len(ang):
                    raise InvalidArgumentError(
                        f"density table has {len(vals)} values, grid of size {grid} has {len(ang)} cells")
            else:
                vals = np.asarray(_density_callable(spec)(ang, chars), dtype=float)
            target = spec.get("mass")
            if target is None and spec.get("kind") != "table":
                target = 1.0 - atom_mass
                if target <= 0:
                    raise InvalidArgumentError("atoms already carry all the mass; give the density an explicit mass")
            if target is not None:
                current = vals.sum() * q
                if current <= 0:
                    raise InvalidArgumentError("density has zero mass on this grid")
                vals = vals * (float(target) / current)
            density = vals
        mu = DualMeasure.from_parts(group, atoms, density, grid)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"malformed measure spec: {exc!r}") from exc
    mu, _ = mu.normalized()
    return mu


def measure_to_json(mu: DualMeasure) -> dict:
    g = mu.group
    out = {
        "group": g.to_json(),
        "atoms": [{"theta": [float(x) for x in a], "torsion": [int(c) for c in t], "weight": float(w)}
                  for a, t, w in zip(mu.atom_angles, mu.atom_torsion, mu.atom_weights)],
    }
    if len(mu.density):
        ang, _, _ = midpoint_grid(g, mu.grid_size)
        table = np.zeros(len(ang))
        table[mu.grid_index] = mu.density
        out["density"] = {"kind": "table", "values": [float(v) for v in table]}
        out["grid_size"] = mu.grid_size
    return out


# ----------------------------------------------------------------------------
# positive definite functions
# ----------------------------------------------------------------------------

def function_to_json(phi: PdFunction) -> dict:
    flat = phi.values.ravel()
    return {
        "group": phi.group.to_json(),
        "window_radius": phi.window_radius,
        "values_re": [float(v) for v in flat.real],
        "values_im": [float(v) for v in flat.imag],
    }


def function_from_json(data: dict) -> PdFunction:
    try:
        g = GroupDescriptor.from_json(data["group"])
        vals = np.asarray(data["values_re"], dtype=float) + 1j * np.asarray(data.get("values_im", 0.0), dtype=float)
        return PdFunction(g, int(data["window_radius"]), vals)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"malformed function spec: {exc!r}") from exc


# ----------------------------------------------------------------------------
# CSV
# ----------------------------------------------------------------------------

def _point_columns(mu: DualMeasure) -> list[str]:
    g = mu.group
    return (["index", "kind"] + [f"theta_{i + 1}" for i in range(g.free_rank)]
            + [f"torsion_{j + 1}" for j in range(g.torsion_rank)] + ["mass"])


def _point_rows(mu: DualMeasure):
    kinds = ["atom"] * mu.n_atoms + ["grid"] * len(mu.density)
    for i, (kind, ang, tor, m) in enumerate(zip(kinds, mu.angles, mu.torsion, mu.masses)):
        yield [i, kind] + [repr(float(a)) for a in ang] + [int(t) for t in tor] + [repr(float(m))]


def write_vector_csv(path, mu: DualMeasure, columns: dict[str, np.ndarray]) -> None:
    """One row per measure point; each complex column becomes ``<name>_re``, ``<name>_im``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = _point_columns(mu)
        for name in columns:
            header += [f"{name}_re", f"{name}_im"]
        w.writerow(header)
        for row, *vals in zip(_point_rows(mu), *columns.values()):
            for v in vals:
                row += [repr(float(np.real(v))), repr(float(np.imag(v)))]
            w.writerow(row)


def write_cocycle_csv(path, b: Cocycle) -> None:
    write_vector_csv(path, b.measure, {f"b{i + 1}": v for i, v in enumerate(b.generator_values)})


def read_cocycle_csv(path, mu: DualMeasure) -> Cocycle:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if len(rows) != mu.n_points:
        raise ParseError(f"{path}: {len(rows)} rows, measure has {mu.n_points} points")
    vals = []
    for i in range(mu.group.generator_count):
        try:
            re_ = np.asarray([float(r[f"b{i + 1}_re"]) for r in rows])
            im_ = np.asarray([float(r[f"b{i + 1}_im"]) for r in rows])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"{path}: bad cocycle column b{i + 1}: {exc}") from exc
        vals.append(re_ + 1j * im_)
    return Cocycle(mu, np.asarray(vals))


def write_table_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
