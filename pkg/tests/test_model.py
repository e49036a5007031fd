import random

import pytest

from ttc import compile_network, nets, validate_project
from ttc.model import (
    AnchorRef,
    Edge,
    IndexType,
    InvalidNetworkError,
    OpenEnd,
    Project,
    TensorInstance,
)
from ttc.testing import network_to_project, random_network


def project_of(tensors, edges, types=None):
    return Project(
        index_types=types or (IndexType(id=1, name="chi", default_dim=2),),
        tensors=tuple(tensors),
        edges=tuple(edges),
    )


def edge(eid, a, b, type_id=1, dim=None):
    end_b = OpenEnd(plaque=b) if isinstance(b, int) else AnchorRef(*b)
    return Edge(id=eid, index_type=type_id, end_a=AnchorRef(*a), end_b=end_b,
                dim_override=dim)


def codes(report, net=1):
    return sorted(v.code for v in report.networks.get(net, ()))


class TestValidate:
    def test_wired_loop_is_valid(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=2, network=1),
             TensorInstance(id=2, anchor_count=2, network=1)],
            [edge(1, (1, 1), (2, 1)), edge(2, (1, 2), (2, 2))])
        report = validate_project(p)
        assert report.ok
        assert compile_network(p, 1).closed

    def test_unwired_anchor(self):
        report = validate_project(nets.invalid_unwired())
        assert codes(report) == ["E_UNWIRED_ANCHOR"]
        v = report.networks[1][0]
        assert "anchor 3" in v.location

    def test_multiwired_anchor(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, network=1),
             TensorInstance(id=2, anchor_count=2, network=1)],
            [edge(1, (1, 1), (2, 1)), edge(2, (1, 1), (2, 2))])
        assert "E_MULTIWIRED_ANCHOR" in codes(report := validate_project(p))
        assert report.network_valid(1) is False

    def test_cross_network(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, network=1),
             TensorInstance(id=2, anchor_count=1, network=2)],
            [edge(1, (1, 1), (2, 1))])
        report = validate_project(p)
        assert "E_CROSS_NETWORK" in codes(report, 1)
        assert "E_CROSS_NETWORK" in codes(report, 2)

    def test_assigned_to_unassigned_edge(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, network=1),
             TensorInstance(id=2, anchor_count=1, network=None)],
            [edge(1, (1, 1), (2, 1))])
        assert "E_CROSS_NETWORK" in codes(validate_project(p))

    def test_unassigned_tensors_ignored(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, network=1),
             TensorInstance(id=2, anchor_count=3, network=None)],
            [edge(1, (1, 1), 1)])
        assert validate_project(p).ok

    def test_dup_plaque(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=2, network=1)],
            [edge(1, (1, 1), 1), edge(2, (1, 2), 1)])
        assert "E_DUP_PLAQUE" in codes(validate_project(p))

    def test_gap_plaque(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=2, network=1)],
            [edge(1, (1, 1), 1), edge(2, (1, 2), 3)])
        assert "E_GAP_PLAQUE" in codes(validate_project(p))

    def test_copy_mismatch_arity(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, name="W", network=1),
             TensorInstance(id=2, anchor_count=2, name="W", network=1)],
            [edge(1, (1, 1), 1), edge(2, (2, 1), 2), edge(3, (2, 2), 3)])
        assert "E_COPY_MISMATCH" in codes(validate_project(p))

    def test_copy_mismatch_dims(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, name="W", network=1),
             TensorInstance(id=2, anchor_count=1, name="W", network=1)],
            [edge(1, (1, 1), 1, dim=2), edge(2, (2, 1), 2, dim=5)])
        assert "E_COPY_MISMATCH" in codes(validate_project(p))

    def test_copies_consistent_ok(self):
        report = validate_project(nets.binary_mera_like())
        assert report.ok

    def test_bad_name(self):
        for name in ("2tensor", "for", "ncon", "which_net", "a-b"):
            p = project_of(
                [TensorInstance(id=1, anchor_count=1, name=name, network=1)],
                [edge(1, (1, 1), 1)])
            assert "E_BAD_NAME" in codes(validate_project(p)), name

    def test_bad_name_on_unassigned_is_project_level(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=1, network=1),
             TensorInstance(id=2, anchor_count=1, name="while", network=None)],
            [edge(1, (1, 1), 1)])
        report = validate_project(p)
        assert report.network_valid(1)
        assert any(v.code == "E_BAD_NAME" for v in report.project_errors)

    def test_no_networks(self):
        p = project_of([TensorInstance(id=1, anchor_count=1, network=None)], [])
        report = validate_project(p)
        assert any(v.code == "E_NO_NETWORKS" for v in report.project_errors)
        assert not report.ok

    def test_validation_never_raises_on_random_projects(self):
        rng = random.Random(7)
        for _ in range(50):
            net = random_network(rng, rng.randint(1, 6))
            report = validate_project(network_to_project(net))
            assert report.ok  # generator builds valid projects


class TestCompile:
    def test_figure_pair_labels(self):
        # two 3-anchor tensors sharing A.anchor3 -- B.anchor1
        net = compile_network(nets.figure_pair(), 1)
        assert net.labels == ((-1, -2, 1), (1, -3, -4))
        assert net.dims == {1: 4, -1: 2, -2: 3, -3: 5, -4: 6}
        assert not net.closed

    def test_trace_edge_matrix(self):
        p = project_of(
            [TensorInstance(id=1, anchor_count=2, network=1)],
            [edge(1, (1, 1), (1, 2))])
        net = compile_network(p, 1)
        assert net.labels == ((1, 1),)
        assert net.closed

    def test_compile_rejects_invalid(self):
        with pytest.raises(InvalidNetworkError):
            compile_network(nets.invalid_unwired(), 1)

    def test_labels_ascending_edge_id_order(self):
        net = compile_network(nets.matrix_chain(), 1)
        assert net.labels == ((-1, 1), (1, 2), (2, -2))

    def test_default_names(self):
        p = project_of(
            [TensorInstance(id=5, anchor_count=2, network=2),
             TensorInstance(id=9, anchor_count=2, network=2)],
            [edge(1, (5, 1), (9, 1)), edge(2, (5, 2), (9, 2))])
        net = compile_network(p, 2)
        assert net.names == ("N2_1", "N2_2")

    def test_edge_relabeling_preserves_cost(self):
        # permuting edge ids permutes positive labels but not the optimum
        from ttc import optimal_order_full

        rng = random.Random(3)
        for _ in range(20):
            net = random_network(rng, rng.randint(2, 5))
            p = network_to_project(net)
            base = optimal_order_full(compile_network(p, 1)).total_cost

            ids = [e.id for e in p.edges]
            shuffled = ids[:]
            rng.shuffle(shuffled)
            remap = dict(zip(ids, shuffled))
            p2 = Project(
                index_types=p.index_types,
                tensors=p.tensors,
                edges=tuple(
                    Edge(id=remap[e.id], index_type=e.index_type,
                         end_a=e.end_a, end_b=e.end_b,
                         dim_override=e.dim_override)
                    for e in p.edges),
            )
            assert optimal_order_full(compile_network(p2, 1)).total_cost == base

    def test_compile_deterministic(self):
        p = nets.binary_mera_like()
        a = compile_network(p, 3)
        b = compile_network(p, 3)
        assert a == b

    def test_dims_override(self):
        net = compile_network(nets.matrix_chain(), 1,
                              dims_override={"a": 7, "b": 7, "c": 7, "d": 7})
        assert set(net.dims.values()) == {7}

    def test_labeled_network_invariants_on_random_projects(self):
        rng = random.Random(23)
        for _ in range(40):
            p = network_to_project(random_network(rng, rng.randint(1, 7)))
            net = compile_network(p, 1)
            counts = {}
            for labs, t in zip(net.labels, p.tensors):
                assert len(labs) == t.anchor_count
                for lab in labs:
                    counts[lab] = counts.get(lab, 0) + 1
            for lab, cnt in counts.items():
                assert cnt == (2 if lab > 0 else 1)
                assert net.dims[lab] >= 1
            opens = sorted(-lab for lab in counts if lab < 0)
            assert opens == list(range(1, len(opens) + 1))
            assert net.closed == (not opens)
