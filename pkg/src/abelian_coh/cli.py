"""``abelian-coh`` command-line front end."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .bochner import atom_at_trivial, bochner_forward, bochner_inverse, check_positive_definite
from .cohomology import (
    approximate_by_coboundaries,
    build_nontrivial_cocycle,
    classify,
    coboundary_residual,
    random_smooth_cocycle,
    solve_coboundary,
)
from .errors import AbelianCohError, InvalidArgumentError, ParseError, PreconditionError
from .gns import build_gns, verify_equivalence
from .groups import GroupDescriptor, evaluate_character
from .measure import DEFAULT_GRID_SIZE, decompose, total_variation
from .serialize import (
    dump_json,
    function_from_json,
    function_to_json,
    load_config,
    measure_from_json,
    measure_to_json,
    read_cocycle_csv,
    write_cocycle_csv,
    write_table_csv,
    write_vector_csv,
)

OUT_ENV = "ABELIAN_COH_OUT"
DEFAULT_WINDOW = 16
GNS_THRESHOLD = 1e-8
MEASURE_KINDS = ("atoms", "uniform_arc", "poisson", "mixture")


# ----------------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------------

def resolve_out_dir(flag: str | None, configured: str | None = None) -> Path:
    """--out beats $ABELIAN_COH_OUT, which beats the scenario's own setting."""
    chosen = flag or os.environ.get(OUT_ENV) or configured or "."
    return Path(chosen)


def parse_shifts(text: str) -> list[int]:
    """'0..8' or '0,2,5'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ParseError(f"bad shift list {text!r}") from exc


def shift_elements(group: GroupDescriptor, shifts: list[int]):
    """Integer shift s means s times the first generator."""
    if not group.generator_count:
        raise InvalidArgumentError("the trivial group has no shifts")
    gen = group.generators()[0]
    return [group.element(tuple(s * c for c in gen.free_part), tuple(s * c for c in gen.torsion_part))
            for s in shifts]


def load_group(path) -> GroupDescriptor | None:
    if path is None:
        return None
    data = load_config(path)
    try:
        return GroupDescriptor.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed group: {exc}") from exc


def load_measure(path, group=None, grid=None):
    return measure_from_json(load_config(path), group, grid)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(data) -> None:
    print(json.dumps(data, indent=2, default=_json_default))


# ----------------------------------------------------------------------------
# measure generation
# ----------------------------------------------------------------------------

def generate_measure(kind: str, params: dict, group: GroupDescriptor | None = None,
                     grid_size: int = DEFAULT_GRID_SIZE) -> dict:
    """Validated measure spec for one of the generator kinds.

    The returned dict loads (via the serializer) to a probability measure.
    """
    group = group or GroupDescriptor(1)
    spec: dict = {"group": group.to_json(), "grid_size": int(grid_size)}
    if kind == "atoms":
        atoms = params.get("atoms") or []
        if not atoms:
            raise ParseError("atoms: need at least one atom")
        spec["atoms"] = [{"theta": list(a["theta"]), "torsion": list(a.get("torsion", [0] * group.torsion_rank)),
                          "weight": float(a["weight"])} for a in atoms]
        spec.pop("grid_size")
    elif kind == "poisson":
        r = float(params.get("r", 0.5))
        if not 0.0 < r < 1.0:
            raise ParseError(f"poisson: r must lie in (0, 1), got {r}")
        dens = {"kind": "poisson", "r": r}
        if params.get("center") is not None:
            dens["center"] = params["center"]
        spec["density"] = dens
    elif kind == "uniform_arc":
        arc = params.get("arc")
        if arc is None:
            raise ParseError("uniform_arc: missing arc")
        spec["density"] = {"kind": "uniform_arc", "arc": arc}
    elif kind == "mixture":
        comps = params.get("components") or []
        atoms, dens = [], []
        for c in comps:
            if "weight" not in c or "kind" not in c:
                raise ParseError("mixture: every component needs kind and weight")
            if c["kind"] == "atom":
                atoms.append({"theta": list(c["theta"]), "torsion": list(c.get("torsion", [0] * group.torsion_rank)),
                              "weight": float(c["weight"])})
            else:
                dens.append(c)
        total = sum(float(c["weight"]) for c in comps)
        if not comps or abs(total - 1.0) > 1e-9:
            raise ParseError(f"mixture: component weights sum to {total}, not 1")
        if atoms:
            spec["atoms"] = atoms
        if dens:
            dmass = sum(float(c["weight"]) for c in dens)
            spec["density"] = {"kind": "mixture", "mass": dmass,
                               "components": [dict(c, weight=float(c["weight"]) / dmass) for c in dens]}
    else:
        raise ParseError(f"unknown measure kind {kind!r}; choose from {', '.join(MEASURE_KINDS)}")
    try:
        measure_from_json(spec)
    except InvalidArgumentError as exc:
        raise ParseError(f"{kind}: {exc}") from exc
    return spec


def _parse_atom(text: str) -> dict:
    """THETA[,THETA...][/C,C...]:WEIGHT"""
    try:
        point, weight = text.rsplit(":", 1)
        tors = []
        if "/" in point:
            point, t = point.split("/")
            tors = [int(c) for c in t.split(",") if c]
        theta = [float(a) for a in point.split(",") if a]
        return {"theta": theta, "torsion": tors, "weight": float(weight)}
    except ValueError as exc:
        raise ParseError(f"bad atom {text!r}; expected THETA[/TORSION]:WEIGHT") from exc


# ----------------------------------------------------------------------------
# pipeline steps (shared by subcommands and scenarios)
# ----------------------------------------------------------------------------

def step_classify(mu, out: Path | None, shells: int, atom_tol: float | None = None, witness=True) -> dict:
    kw = {} if atom_tol is None else {"atom_tol": atom_tol}
    report = classify(mu, shell_count=shells, witness=witness, **kw).to_json()
    if out is not None:
        dump_json(report, out / "report.json")
    return report


def step_cocycle_build(mu, out: Path, shells: int):
    nc = build_nontrivial_cocycle(mu, shells)
    write_cocycle_csv(out / "cocycle.csv", nc.cocycle)
    info = {
        "shell_count": nc.shell_count,
        "k_sequence": list(nc.k_sequence),
        "shell_masses": nc.shell_masses.tolist(),
        "partial_sums": [{"ell": c.ell, "max_tail": c.max_tail, "max_total": c.max_total,
                          "tail_ok": c.tail_ok, "total_ok": c.total_ok} for c in nc.partial_sums],
        "obstruction": [{"delta": d, "integral": i} for d, i in nc.obstruction],
        "divergence_certified": nc.divergence_certified,
        "bound_certified": nc.bound_certified,
    }
    dump_json(info, out / "shells.json")
    return nc, info


def step_cocycle_solve(b, out: Path) -> dict:
    sol = solve_coboundary(b)
    write_vector_csv(out / "solution.csv", b.measure, {"w": sol.w})
    info = {"residual": sol.residual, "bound": sol.bound, "certified": sol.certified,
            "box_side": sol.smoothing.box_side, "gap": sol.smoothing.gap,
            "epsilon": sol.smoothing.epsilon, "separation": sol.smoothing.separation}
    dump_json(info, out / "solve.json")
    return info


def step_cocycle_approx(b, out: Path, stages: int, first_radius: float = 1.0, check_box=None) -> list[dict]:
    res = approximate_by_coboundaries(b, stages, first_radius, check_box)
    header = ["stage", "radius", "residual", "tail_bound", "neighborhood_mass", "solver_residual", "box_side"]
    if check_box is not None:
        header.append("box_residual")
    rows = []
    for s in res:
        row = [s.stage, s.radius, s.residual, s.tail_bound, s.neighborhood_mass, s.solver_residual, s.box_side]
        if check_box is not None:
            row.append(s.box_residual)
        rows.append(row)
    write_table_csv(out / "residuals.csv", header, rows)
    return [dict(zip(header, r)) for r in rows]


def step_gns_verify(mu, shifts: list[int], window: int | None, threshold: float = GNS_THRESHOLD,
                    phi=None) -> dict:
    span = max(shifts) - min(shifts) if shifts else 0
    if phi is None:
        phi = bochner_forward(mu, window or max(2 * span, 1))
    model = build_gns(phi)
    disc = verify_equivalence(model, mu, shift_elements(mu.group, shifts))
    return {"shifts": shifts, "window_radius": model.window_radius, "discrepancy": disc,
            "threshold": threshold, "passed": bool(disc <= threshold)}


# ----------------------------------------------------------------------------
# scenarios
# ----------------------------------------------------------------------------

STEP_KEYS = {
    "classify": {"shells", "atom_tol", "witness"},
    "cocycle_build": {"shells"},
    "cocycle_solve": {"seed", "degree"},
    "cocycle_approx": {"stages", "first_radius", "check_box", "cocycle", "seed"},
    "gns_verify": {"shifts", "window", "threshold"},
    "transform_forward": {"window"},
    "transform_inverse": {"candidates", "grid"},
}


def validate_pipeline(pipeline) -> None:
    if not isinstance(pipeline, list):
        raise ParseError("pipeline must be a list of steps")
    have_cocycle = have_function = False
    for i, step in enumerate(pipeline):
        if not isinstance(step, dict) or "command" not in step:
            raise ParseError(f"pipeline step {i} needs a 'command'")
        cmd = step["command"]
        if cmd not in STEP_KEYS:
            raise ParseError(f"pipeline step {i}: unknown command {cmd!r}")
        extra = set(step) - STEP_KEYS[cmd] - {"command"}
        if extra:
            raise ParseError(f"pipeline step {i} ({cmd}): unknown keys {sorted(extra)}")
        if cmd == "cocycle_build":
            have_cocycle = True
        if cmd == "transform_forward":
            have_function = True
        if cmd == "cocycle_approx" and step.get("cocycle", "built") == "built" and not have_cocycle:
            raise ParseError(f"pipeline step {i}: cocycle_approx needs an earlier cocycle_build "
                             "(or \"cocycle\": \"random\")")
        if cmd == "transform_inverse" and not have_function:
            raise ParseError(f"pipeline step {i}: transform_inverse needs an earlier transform_forward")


def find_scenario(name: str) -> Path:
    path = Path(name)
    if path.is_file():
        return path
    bundled = resources.files("abelian_coh") / "scenarios"
    for candidate in (name, f"{name}.json", f"{name}.toml"):
        res = bundled / candidate
        if res.is_file():
            return Path(str(res))
    raise ParseError(f"no scenario file or bundled scenario named {name!r}")


def bundled_scenarios() -> list[str]:
    bundled = resources.files("abelian_coh") / "scenarios"
    return sorted(p.name for p in bundled.iterdir() if p.name.endswith((".json", ".toml")))


def run_scenario(path, out_flag: str | None = None, grid: int | None = None,
                 window: int | None = None, log=print) -> int:
    """Execute a scenario's pipeline, writing artifacts; returns the exit code."""
    path = find_scenario(str(path))
    cfg = load_config(path)
    if not isinstance(cfg, dict):
        raise ParseError(f"{path}: scenario must be an object")
    pipeline = cfg.get("pipeline", [])
    validate_pipeline(pipeline)
    name = cfg.get("name", path.stem)
    if not pipeline:
        log(f"{name}: empty pipeline, nothing to do")
        return 0
    group = GroupDescriptor.from_json(cfg["group"]) if "group" in cfg else None
    if "measure" not in cfg:
        raise ParseError(f"{path}: scenario has no measure")
    mu = measure_from_json(cfg["measure"], group, grid)
    out = resolve_out_dir(out_flag, cfg.get("output_dir") or f"{name}_out")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InvalidArgumentError(f"output directory {out} is not writable: {exc}") from exc

    summary = [f"scenario: {name}", f"group: {mu.group}", f"points: {mu.n_points}",
               f"normalization_factor: {mu.notes.get('normalization_factor', 1.0):.12g}"]
    cocycle = phi = None
    for step in pipeline:
        cmd = step["command"]
        if cmd == "classify":
            rep = step_classify(mu, out, step.get("shells", 8), step.get("atom_tol"), step.get("witness", True))
            summary += [f"classify: H1 {rep['verdict_H1']}, reduced H1 {rep['verdict_reduced_H1']}",
                        f"  trivial_mass {rep['trivial_mass']:.6g}, hom_dim {rep['hom_dim']}, "
                        f"support_distance {rep['support_distance']:.6g}, witness {rep['witness_kind']}"]
        elif cmd == "cocycle_build":
            nc, info = step_cocycle_build(mu, out, step.get("shells", 8))
            cocycle = nc.cocycle
            summary += [f"cocycle_build: {info['shell_count']} shells, k = {info['k_sequence']}",
                        f"  partial-sum bounds hold: {info['bound_certified']}, "
                        f"obstruction diverges: {info['divergence_certified']}"]
        elif cmd == "cocycle_solve":
            b = random_smooth_cocycle(mu, step.get("seed", 0), step.get("degree", 4))
            info = step_cocycle_solve(b, out)
            summary.append(f"cocycle_solve: residual {info['residual']:.3e} (bound {info['bound']:.3e}), "
                           f"box side {info['box_side']}, certified {info['certified']}")
        elif cmd == "cocycle_approx":
            b = cocycle if step.get("cocycle", "built") == "built" else \
                random_smooth_cocycle(mu, step.get("seed", 0))
            rows = step_cocycle_approx(b, out, step.get("stages", 5), step.get("first_radius", 1.0),
                                       step.get("check_box"))
            summary.append("cocycle_approx: residuals " + ", ".join(f"{r['residual']:.4g}" for r in rows))
        elif cmd == "gns_verify":
            shifts = step.get("shifts", [0, 8])
            shifts = parse_shifts(shifts) if isinstance(shifts, str) else list(range(shifts[0], shifts[1] + 1))
            info = step_gns_verify(mu, shifts, step.get("window", window), step.get("threshold", GNS_THRESHOLD))
            dump_json(info, out / "gns.json")
            summary.append(f"gns_verify: discrepancy {info['discrepancy']:.3e} "
                           f"({'pass' if info['passed'] else 'fail'} at {info['threshold']:g})")
        elif cmd == "transform_forward":
            phi = bochner_forward(mu, step.get("window", window or DEFAULT_WINDOW))
            dump_json(function_to_json(phi), out / "function.json")
            summary.append(f"transform_forward: window {phi.window_radius}")
        elif cmd == "transform_inverse":
            cands = [mu.group.character(c) for c in step.get("candidates", [])]
            inv = bochner_inverse(phi, step.get("grid", grid or DEFAULT_GRID_SIZE), cands)
            dump_json(measure_to_json(inv), out / "inverse.json")
            summary.append(f"transform_inverse: roundtrip error {inv.notes['roundtrip_error']:.3e}")
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    for line in summary:
        log(line)
    return 0


# ----------------------------------------------------------------------------
# selftest
# ----------------------------------------------------------------------------

def selftest(seed: int = 0, count: int = 20, log=print) -> bool:
    """Randomized property checks; the seed fixes every draw."""
    from .cohomology import Cocycle
    from .measure import DualMeasure, poisson_density, uniform_arc_density

    rng = np.random.default_rng(seed)
    g = GroupDescriptor(1)
    results = {"forward is PSD": True, "decompose roundtrip": True,
               "coboundary roundtrip": True, "character homomorphism": True}
    for _ in range(count):
        n_atoms = int(rng.integers(0, 4))
        atoms = [(((float(t),), ()), float(w)) for t, w in zip(rng.uniform(-np.pi, np.pi, n_atoms),
                                                       rng.uniform(0.1, 1.0, n_atoms))]
        density = poisson_density(float(rng.uniform(0.1, 0.9)), float(rng.uniform(-np.pi, np.pi)))
        mu, _ = DualMeasure.from_parts(g, atoms, density, 512).normalized()
        phi = bochner_forward(mu, 8)
        results["forward is PSD"] &= bool(check_positive_definite(phi, seed=int(rng.integers(1 << 31))))
        if mu.trivial_atom_mass() < 1.0 - 1e-9:
            results["decompose roundtrip"] &= total_variation(decompose(mu).reconstruct(), mu) <= 1e-9

        lo = float(rng.uniform(0.2, 1.5))
        arc, _ = DualMeasure.from_parts(g, (), uniform_arc_density([lo, lo + 1.0]), 512).normalized()
        u = rng.standard_normal(arc.n_points) + 1j * rng.standard_normal(arc.n_points)
        b = Cocycle.coboundary(arc, u)
        sol = solve_coboundary(b)
        results["coboundary roundtrip"] &= coboundary_residual(b, sol.w) <= 1e-10

        x, y = (g.element((int(v),)) for v in rng.integers(-50, 50, 2))
        xi = g.character((float(rng.uniform(-np.pi, np.pi)),))
        results["character homomorphism"] &= \
            abs(evaluate_character(xi, x + y) - evaluate_character(xi, x) * evaluate_character(xi, y)) < 1e-12
    for name, ok in results.items():
        log(f"{'PASS' if ok else 'FAIL'}  {name} ({count} draws, seed {seed})")
    return all(results.values())


# ----------------------------------------------------------------------------
# argparse
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abelian-coh", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--grid", type=int, default=None, help="midpoint grid size M per torus coordinate")
    p.add_argument("--window", type=int, default=None, help="window radius N for positive definite functions")
    p.add_argument("--seed", type=int, default=0, help="seed for selftest draws")
    p.add_argument("--out", default=None, help=f"output directory (overrides ${OUT_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide vanishing of H^1 and reduced H^1")
    c.add_argument("--measure", required=True)
    c.add_argument("--group")
    c.add_argument("--atom-tol", type=float, default=None)
    c.add_argument("--shells", type=int, default=8)
    c.add_argument("--no-witness", action="store_true")

    t = sub.add_parser("transform", help="Bochner transform in either direction")
    tsub = t.add_subparsers(dest="direction", required=True)
    tf = tsub.add_parser("forward", help="measure JSON -> function JSON")
    tf.add_argument("--measure", required=True)
    tf.add_argument("--group")
    tf.add_argument("-o", "--output")
    ti = tsub.add_parser("inverse", help="function JSON -> measure JSON")
    ti.add_argument("--function", required=True)
    ti.add_argument("--candidate", type=float, action="append", default=[],
                    help="declared atom angle (first torus coordinate); repeatable")
    ti.add_argument("--check-atom", action="store_true", help="also report the Cesaro trivial-atom estimate")
    ti.add_argument("-o", "--output")

    gn = sub.add_parser("gns", help="GNS model checks")
    gsub = gn.add_subparsers(dest="action", required=True)
    gv = gsub.add_parser("verify", help="compare cyclic-orbit Gram matrices")
    gv.add_argument("--measure", required=True)
    gv.add_argument("--group")
    gv.add_argument("--function", help="use this function instead of the measure's transform")
    gv.add_argument("--shifts", default="0..8")
    gv.add_argument("--threshold", type=float, default=GNS_THRESHOLD)

    cc = sub.add_parser("cocycle", help="build, solve or approximate cocycles")
    csub = cc.add_subparsers(dest="action", required=True)
    for name, helptext in (("build", "shell cocycle near the trivial character"),
                           ("solve", "coboundary solve when the support has a gap"),
                           ("approx", "coboundary approximations on shrinking neighborhoods")):
        a = csub.add_parser(name, help=helptext)
        a.add_argument("--measure", required=True)
        a.add_argument("--group")
        a.add_argument("--shells", type=int, default=8)
        if name != "build":
            a.add_argument("--cocycle", help="cocycle CSV; default is a seeded random smooth cocycle"
                           + (" (solve)" if name == "solve" else " or the shell cocycle (approx)"))
            a.add_argument("--cocycle-seed", type=int, default=0)
        if name == "approx":
            a.add_argument("--stages", type=int, default=5)
            a.add_argument("--first-radius", type=float, default=1.0)
            a.add_argument("--check-box", type=int, default=None, metavar="L",
                           help="also report residuals over the box of radius L")

    m = sub.add_parser("measure", help="write a normalized measure JSON")
    m.add_argument("kind", choices=MEASURE_KINDS)
    m.add_argument("--group")
    m.add_argument("--atom", action="append", default=[], help="THETA[,THETA..][/C,..]:WEIGHT; repeatable")
    m.add_argument("--arc", type=float, nargs=2, metavar=("A", "B"))
    m.add_argument("--r", type=float, default=0.5)
    m.add_argument("--center", type=float, default=None)
    m.add_argument("--component", action="append", default=[], help="JSON object with kind and weight")
    m.add_argument("-o", "--output")

    r = sub.add_parser("run", help="run a scenario file or bundled scenario")
    r.add_argument("scenario", nargs="?")
    r.add_argument("--list", action="store_true", help="list bundled scenarios")

    s = sub.add_parser("selftest", help="seeded randomized property checks")
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--seed", type=int, default=None, dest="selftest_seed", help="same as the global --seed")
    return p


def _write_or_print(data, output):
    if output:
        dump_json(data, output)
    else:
        emit_json(data)


def _cocycle_input(args, mu):
    if args.cocycle:
        return read_cocycle_csv(args.cocycle, mu)
    if args.action == "approx":
        return build_nontrivial_cocycle(mu, args.shells).cocycle
    return random_smooth_cocycle(mu, args.cocycle_seed)


def dispatch(args) -> int:
    cmd = args.command
    if cmd == "classify":
        mu = load_measure(args.measure, load_group(args.group), args.grid)
        emit_json(step_classify(mu, None, args.shells, args.atom_tol, not args.no_witness))
        return 0
    if cmd == "transform":
        if args.direction == "forward":
            mu = load_measure(args.measure, load_group(args.group), args.grid)
            _write_or_print(function_to_json(bochner_forward(mu, args.window or DEFAULT_WINDOW)), args.output)
            return 0
        phi = function_from_json(load_config(args.function))
        cands = [phi.group.character((c,) + (0.0,) * (phi.group.free_rank - 1)) for c in args.candidate]
        inv = bochner_inverse(phi, args.grid or DEFAULT_GRID_SIZE, cands)
        _write_or_print(measure_to_json(inv), args.output)
        if args.output or args.check_atom:
            print(f"roundtrip error on inner half-window: {inv.notes['roundtrip_error']:.3e}", file=sys.stderr)
        if args.check_atom:
            est = atom_at_trivial(phi)
            print(f"trivial atom (Cesaro): {est.value:.6g}, converged {est.converged}", file=sys.stderr)
        return 0
    if cmd == "gns":
        mu = load_measure(args.measure, load_group(args.group), args.grid)
        phi = function_from_json(load_config(args.function)) if args.function else None
        info = step_gns_verify(mu, parse_shifts(args.shifts), args.window, args.threshold, phi)
        print(f"discrepancy {info['discrepancy']:.3e}  {'PASS' if info['passed'] else 'FAIL'} "
              f"(threshold {info['threshold']:g}, shifts {args.shifts}, window {info['window_radius']})")
        return 0 if info["passed"] else 1
    if cmd == "cocycle":
        mu = load_measure(args.measure, load_group(args.group), args.grid)
        out = resolve_out_dir(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.action == "build":
            _, info = step_cocycle_build(mu, out, args.shells)
            emit_json(info)
        elif args.action == "solve":
            emit_json(step_cocycle_solve(_cocycle_input(args, mu), out))
        else:
            rows = step_cocycle_approx(_cocycle_input(args, mu), out, args.stages, args.first_radius,
                                       args.check_box)
            for row in rows:
                print(f"stage {row['stage']}  radius {row['radius']:.6g}  residual {row['residual']:.6g}  "
                      f"tail {row['tail_bound']:.6g}")
        return 0
    if cmd == "measure":
        group = load_group(args.group)
        params = {"atoms": [_parse_atom(a) for a in args.atom], "arc": args.arc, "r": args.r,
                  "center": args.center}
        try:
            params["components"] = [json.loads(c) for c in args.component]
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad --component JSON: {exc.msg}", exc.lineno) from exc
        spec = generate_measure(args.kind, params, group, args.grid or DEFAULT_GRID_SIZE)
        _write_or_print(spec, args.output)
        return 0
    if cmd == "run":
        if args.list or not args.scenario:
            for name in bundled_scenarios():
                print(name)
            return 0
        return run_scenario(args.scenario, args.out, args.grid, args.window)
    if cmd == "selftest":
        seed = args.seed if args.selftest_seed is None else args.selftest_seed
        return 0 if selftest(seed, args.count) else 1
    raise AssertionError(cmd)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except AbelianCohError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
