import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttc import compile_network, dumps_project, loads_project, nets
from ttc.project_io import ProjectParseError, ProjectSchemaError
from ttc.testing import network_to_project, random_network

ALL_FIXTURES = sorted(nets.FIXTURES)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_round_trip_identity(name):
    p = nets.FIXTURES[name]()
    text = dumps_project(p)
    p2 = loads_project(text)
    assert p2 == p
    assert dumps_project(p2) == text


def test_committed_fixtures_match_regeneration(fixture_dir):
    for name, build in nets.FIXTURES.items():
        committed = (fixture_dir / f"{name}.tnp").read_text(encoding="utf-8")
        assert committed == dumps_project(build()), name


def test_binary_mera_fixture_loads_with_four_networks(fixture_dir):
    p = loads_project((fixture_dir / "binary_mera.tnp").read_bytes())
    assert p.networks_present() == (1, 2, 3, 4)


def test_empty_tensor_list_loads_then_fails_validation():
    p = loads_project(json.dumps(
        {"format_version": 1, "index_types": [], "tensors": [], "edges": []}))
    from ttc import validate_project

    report = validate_project(p)
    assert any(v.code == "E_NO_NETWORKS" for v in report.project_errors)


def test_truncated_file_reports_byte_offset(fixture_dir):
    raw = (fixture_dir / "malformed.tnp").read_text(encoding="utf-8")
    with pytest.raises(ProjectParseError) as exc:
        loads_project(raw)
    assert exc.value.offset > 0
    assert "byte offset" in str(exc.value)


def test_schema_errors_carry_paths():
    doc = {"format_version": 1,
           "index_types": [{"id": 9, "name": "x", "default_dim": 0}],
           "tensors": [{"id": 1, "anchor_count": 0}],
           "edges": "nope"}
    with pytest.raises(ProjectSchemaError) as exc:
        loads_project(json.dumps(doc))
    paths = [p for p, _ in exc.value.problems]
    assert "$.index_types[0].id" in paths
    assert "$.index_types[0].default_dim" in paths
    assert "$.tensors[0].anchor_count" in paths
    assert "$.edges" in paths


def test_unknown_format_version_rejected():
    with pytest.raises(ProjectSchemaError):
        loads_project(json.dumps(
            {"format_version": 99, "index_types": [], "tensors": [], "edges": []}))


def test_unknown_fields_survive_round_trip():
    doc = json.loads(dumps_project(nets.matrix_chain()))
    doc["editor_state"] = {"viewport": [0, 0, 800, 600]}
    doc["tensors"][0]["sticker"] = "red"
    doc["edges"][1]["curvature"] = 0.25
    p = loads_project(json.dumps(doc))
    out = json.loads(dumps_project(p))
    assert out["editor_state"] == {"viewport": [0, 0, 800, 600]}
    assert out["tensors"][0]["sticker"] == "red"
    assert out["edges"][1]["curvature"] == 0.25


def test_geometry_is_opaque_to_compilation():
    doc = json.loads(dumps_project(nets.matrix_chain()))
    base = compile_network(loads_project(json.dumps(doc)), 1)
    for t in doc["tensors"]:
        t["geometry"] = {"x": 1.5, "y": -2.25, "shape": "circle"}
    assert compile_network(loads_project(json.dumps(doc)), 1) == base


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_canonical_serialization_ignores_key_order(pyrandom):
    def shuffle_keys(obj):
        if isinstance(obj, dict):
            items = [(k, shuffle_keys(v)) for k, v in obj.items()]
            pyrandom.shuffle(items)
            return dict(items)
        if isinstance(obj, list):
            return [shuffle_keys(v) for v in obj]
        return obj

    canonical = dumps_project(nets.binary_mera_like())
    scrambled = json.dumps(shuffle_keys(json.loads(canonical)), indent=None)
    assert dumps_project(loads_project(scrambled)) == canonical


def test_round_trip_preserves_compilation():
    rng = random.Random(11)
    for _ in range(20):
        p = network_to_project(random_network(rng, rng.randint(1, 6)))
        p2 = loads_project(dumps_project(p))
        assert compile_network(p2, 1) == compile_network(p, 1)
