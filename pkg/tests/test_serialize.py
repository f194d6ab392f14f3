import json

import numpy as np
import pytest

from abelian_coh import Cocycle, DualMeasure, GroupDescriptor, bochner_forward
from abelian_coh.errors import InvalidArgumentError, ParseError
from abelian_coh.measure import poisson_density, total_variation
from abelian_coh.serialize import (function_from_json, function_to_json, load_config, measure_from_json,
                                   measure_to_json, read_cocycle_csv, write_cocycle_csv)

Z = GroupDescriptor(1)


def test_poisson_spec_normalized():
    mu = measure_from_json({"group": Z.to_json(), "density": {"kind": "poisson", "r": 0.5}, "grid_size": 4096})
    assert abs(mu.total_mass - 1.0) <= 1e-12
    assert abs(mu.notes["normalization_factor"] - 1.0) <= 1e-9


def test_atoms_are_normalized_with_factor():
    mu = measure_from_json({"group": Z.to_json(),
                            "atoms": [{"theta": [1.0], "weight": 2.0}, {"theta": [2.0], "weight": 2.0}]})
    assert mu.atom_weights.tolist() == [0.5, 0.5]
    assert mu.notes["normalization_factor"] == 0.25


def test_density_takes_leftover_mass():
    mu = measure_from_json({"group": Z.to_json(), "atoms": [{"theta": [0.0], "weight": 0.25}],
                            "density": {"kind": "uniform_arc", "arc": [1.0, 2.0]}, "grid_size": 512})
    assert mu.trivial_atom_mass() == pytest.approx(0.25)
    assert mu.density.sum() * mu.quad_weights[0] == pytest.approx(0.75)


def test_mixture_density():
    spec = {"group": Z.to_json(), "grid_size": 1024, "density": {"kind": "mixture", "components": [
        {"kind": "poisson", "r": 0.5, "weight": 0.5}, {"kind": "uniform_arc", "arc": [1, 2], "weight": 0.5}]}}
    mu = measure_from_json(spec)
    on_arc = (mu.angles[:, 0] >= 1) & (mu.angles[:, 0] <= 2)
    poisson_part = DualMeasure.from_parts(Z, (), poisson_density(0.5), 1024).masses
    assert mu.masses[on_arc].sum() == pytest.approx(0.5 + 0.5 * poisson_part[on_arc].sum(), rel=1e-9)
    spec["density"]["components"][0]["weight"] = 0.7
    with pytest.raises(InvalidArgumentError):
        measure_from_json(spec)


def test_measure_roundtrip():
    mu = measure_from_json({"group": Z.to_json(), "atoms": [{"theta": [0.0], "weight": 0.3}],
                            "density": {"kind": "poisson", "r": 0.3}, "grid_size": 256})
    back = measure_from_json(json.loads(json.dumps(measure_to_json(mu))))
    assert total_variation(mu, back) <= 1e-12


def test_restricted_measure_roundtrip():
    mu = measure_from_json({"group": Z.to_json(), "density": {"kind": "poisson", "r": 0.3}, "grid_size": 64})
    keep = np.arange(mu.n_points) % 3 == 0
    sub = mu.restrict(keep).normalized()[0]
    back = measure_from_json(measure_to_json(sub))
    assert total_variation(sub, back.restrict(back.density > 0)) <= 1e-12


@pytest.mark.parametrize("spec", [
    {"atoms": [{"theta": [0.0], "weight": 1.0}]},                                   # no group
    {"group": {"free_rank": 1}, "density": {"kind": "nope"}},
    {"group": {"free_rank": 1}, "density": {"kind": "table", "values": [1, 2]}, "grid_size": 8},
    {"group": {"free_rank": 1}, "atoms": [{"theta": [0.0]}]},
    {"group": {"free_rank": 1}, "atoms": [{"theta": [0.0], "weight": 1.0}], "density": {"kind": "poisson", "r": 0.5}},
])
def test_malformed_measure_specs(spec):
    with pytest.raises(InvalidArgumentError):
        measure_from_json(spec)


def test_function_roundtrip():
    mu = measure_from_json({"group": {"free_rank": 1, "torsion": [3]},
                            "atoms": [{"theta": [1.0], "torsion": [2], "weight": 1.0}]})
    phi = bochner_forward(mu, 3)
    back = function_from_json(json.loads(json.dumps(function_to_json(phi))))
    assert back.group == phi.group and np.array_equal(back.values, phi.values)


def test_json_parse_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "a": 1,\n  "b": oops\n}\n')
    with pytest.raises(ParseError) as info:
        load_config(p)
    assert info.value.line == 3 and "line 3" in str(info.value)


def test_toml_parse_error_has_line(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text('name = "x"\n\n[group\nfree_rank = 1\n')
    with pytest.raises(ParseError) as info:
        load_config(p)
    assert info.value.line == 3


def test_toml_loads(tmp_path):
    p = tmp_path / "ok.toml"
    p.write_text('[group]\nfree_rank = 0\ntorsion = [6]\n')
    assert load_config(p) == {"group": {"free_rank": 0, "torsion": [6]}}


def test_cocycle_csv_roundtrip(tmp_path, rng):
    mu = measure_from_json({"group": {"free_rank": 2}, "density": {"kind": "poisson", "r": 0.4}, "grid_size": 8})
    b = Cocycle.coboundary(mu, rng.standard_normal(mu.n_points) + 1j * rng.standard_normal(mu.n_points))
    write_cocycle_csv(tmp_path / "b.csv", b)
    back = read_cocycle_csv(tmp_path / "b.csv", mu)
    assert np.array_equal(back.generator_values, b.generator_values)
    header = (tmp_path / "b.csv").read_text().splitlines()[0]
    assert header == "index,kind,theta_1,theta_2,mass,b1_re,b1_im,b2_re,b2_im"
