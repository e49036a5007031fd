import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import min_cost_over_all_trees, trace_free_sets
from ttc import binary_cost, compile_network, cost_report, heuristic_order, nets, optimal_order_full
from ttc.search import (
    MAX_COST,
    ContractionTree,
    CostOverflowError,
    FullSearchCapExceeded,
    Leaf,
    Node,
    effective_leaves,
)
from ttc.testing import random_network


def triple_loop_mult_count(dims_a, shared, dims_b):
    """Count multiplications of C[i,j] = sum_k A[i,k] B[k,j] literally."""
    count = 0
    for _ in range(dims_a):
        for _ in range(shared):
            for _ in range(dims_b):
                count += 1
    return count


class TestBinaryCost:
    def test_matrix_multiply(self):
        assert binary_cost([-1, 1], [1, -2], {-1: 10, 1: 10, -2: 10}) == 1000

    def test_triple_loop_oracle(self):
        dims = {-1: 2, 1: 4, -2: 3}
        assert binary_cost([-1, 1], [1, -2], dims) == triple_loop_mult_count(2, 4, 3)

    def test_outer_product(self):
        assert binary_cost([-1], [-2], {-1: 5, -2: 7}) == 35

    def test_rejects_traces(self):
        with pytest.raises(ValueError):
            binary_cost([1, 1], [2], {1: 2, 2: 2})

    def test_overflow(self):
        dims = {1: 1 << 70, 2: 1 << 70}
        with pytest.raises(CostOverflowError):
            binary_cost([1], [2], dims)
        assert binary_cost([1], [1], {1: MAX_COST}) == MAX_COST

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_symmetry_and_scale(self, data):
        labels = list(range(1, data.draw(st.integers(2, 8))))
        la = data.draw(st.lists(st.sampled_from(labels), unique=True, max_size=4))
        lb = data.draw(st.lists(st.sampled_from(labels), unique=True, max_size=4))
        dims = {l: data.draw(st.integers(1, 9)) for l in labels}
        c = binary_cost(la, lb, dims)
        assert c == binary_cost(lb, la, dims)
        scale = data.draw(st.integers(2, 5))
        scaled = {l: d * scale for l, d in dims.items()}
        assert binary_cost(la, lb, scaled) == c * scale ** len(set(la) | set(lb))


class TestOptimalFull:
    def test_matrix_chain(self):
        net = compile_network(nets.matrix_chain(), 1)
        tree = optimal_order_full(net)
        assert tree.total_cost == 54
        assert tree.linearization() == (1, 2)
        # the forced alternative A(BC) costs exactly 100
        leaves, _ = effective_leaves(net)
        bc = binary_cost(sorted(leaves[1]), sorted(leaves[2]), net.dims)
        a_bc = binary_cost(sorted(leaves[0]),
                           sorted(leaves[1] ^ leaves[2]), net.dims)
        assert bc + a_bc == 100

    def test_two_tensor_single_tree(self):
        net = compile_network(nets.trace_pair(), 1)
        tree = optimal_order_full(net)
        assert len(tree.nodes()) == 1
        assert tree.total_cost == 4 * 4  # union of both labels, dims 4*4

    def test_oracle_small_corpus(self):
        rng = random.Random(42)
        for _ in range(30):
            net = random_network(rng, rng.randint(2, 6), min_dim=2, max_dim=6)
            leaves = trace_free_sets(net.all_label_lists())
            expect = min_cost_over_all_trees(leaves, net.dims)
            assert optimal_order_full(net).total_cost == expect

    def test_lanes_identical(self):
        rng = random.Random(5)
        for _ in range(40):
            net = random_network(rng, rng.randint(2, 7), min_dim=2, max_dim=5)
            a = optimal_order_full(net, kernel="python")
            b = optimal_order_full(net, kernel="numba")
            assert a == b

    def test_tiebreak_lex_smallest_linearization(self):
        rng = random.Random(9)
        for _ in range(15):
            # uniform dims create plenty of cost ties
            net = random_network(rng, rng.randint(3, 5), min_dim=3, max_dim=3)
            tree = optimal_order_full(net)
            best = _best_cost_and_lin_by_enumeration(net)
            assert (tree.total_cost, tree.linearization()) == best

    def test_disconnected_networks_supported(self):
        rng = random.Random(13)
        for _ in range(10):
            net = random_network(rng, rng.randint(2, 5), connected=False,
                                 max_extra_edges=1)
            leaves = trace_free_sets(net.all_label_lists())
            expect = min_cost_over_all_trees(leaves, net.dims)
            assert optimal_order_full(net).total_cost == expect

    def test_cap_refusal(self):
        rng = random.Random(1)
        net = random_network(rng, 17)
        with pytest.raises(FullSearchCapExceeded):
            optimal_order_full(net)
        heuristic_order(net, "quick")  # heuristics accept any size

    def test_forced_numba_on_unsafe_instance_errors(self):
        net = compile_network(nets.matrix_chain(), 1,
                              dims_override={n: 10 ** 6 for n in "abcd"})
        with pytest.raises(RuntimeError):
            optimal_order_full(net, kernel="numba")
        optimal_order_full(net, kernel="python")  # big ints are fine

    def test_trace_precontraction(self):
        net = compile_network(nets.traced_tensor_pair(), 1)
        tree = optimal_order_full(net)
        assert tree.trace_labels == (3,)
        assert 3 not in tree.linearization()
        assert tree.ncon_order()[0] == 3


def _all_ordered_trees(positions, leaves):
    if len(positions) == 1:
        yield Leaf(positions[0], leaves[positions[0]])
        return
    rest = positions[1:]
    for bits in range(1 << len(rest)):
        left_pos = [positions[0]] + [p for i, p in enumerate(rest) if bits >> i & 1]
        right_pos = [p for i, p in enumerate(rest) if not bits >> i & 1]
        if not right_pos:
            continue
        for order in (0, 1):
            for lt in _all_ordered_trees(tuple(left_pos) if not order
                                         else tuple(right_pos), leaves):
                for rt in _all_ordered_trees(tuple(right_pos) if not order
                                             else tuple(left_pos), leaves):
                    yield lt, rt


def _best_cost_and_lin_by_enumeration(net):
    leaves = trace_free_sets(net.all_label_lists())

    def expand(item):
        if isinstance(item, Leaf):
            return item
        lt, rt = expand(item[0]), expand(item[1])
        shared = lt.labels & rt.labels
        cost = math.prod(net.dims[l] for l in lt.labels | rt.labels)
        return Node(lt, rt, lt.labels ^ rt.labels, tuple(sorted(shared)), cost)

    best = None
    for raw in _all_ordered_trees(tuple(range(len(leaves))), leaves):
        root = expand(raw)
        tree = ContractionTree(root, len(leaves), ())
        key = (tree.total_cost, tree.linearization())
        if best is None or key < best:
            best = key
    return best


class TestHeuristics:
    def test_two_tensor_any_mode_matches_optimal(self):
        net = compile_network(nets.trace_pair(), 1)
        opt = optimal_order_full(net)
        for mode in ("quick", "thorough", "extensive"):
            assert heuristic_order(net, mode).total_cost == opt.total_cost

    def test_quick_greedy_chain_trace(self):
        # greedy picks AB (24) over BC (60); AC share nothing
        net = compile_network(nets.matrix_chain(), 1)
        tree = heuristic_order(net, "quick")
        assert tree.total_cost == 54
        assert tree.linearization() == (1, 2)

    def test_heuristics_never_beat_optimal(self):
        rng = random.Random(21)
        for _ in range(25):
            net = random_network(rng, rng.randint(2, 6), min_dim=2, max_dim=5)
            opt = optimal_order_full(net).total_cost
            for mode in ("quick", "thorough", "extensive"):
                # extensive is exact only among connected-subset trees, so
                # even it may exceed the unconditional optimum
                cost = heuristic_order(net, mode, seed=3, budget_s=5).total_cost
                assert cost >= opt

    def test_thorough_seeded_deterministic(self):
        rng = random.Random(2)
        net = random_network(rng, 9, min_dim=2, max_dim=4)
        a = heuristic_order(net, "thorough", seed=7)
        b = heuristic_order(net, "thorough", seed=7)
        assert a == b

    def test_extensive_vs_quick_on_tree_networks(self):
        rng = random.Random(31)
        wins = 0
        trials = 20
        for _ in range(trials):
            net = random_network(rng, 12, min_dim=2, max_dim=6,
                                 max_extra_edges=0, max_open=2)
            quick = heuristic_order(net, "quick").total_cost
            extensive = heuristic_order(net, "extensive", budget_s=15).total_cost
            if extensive <= quick:
                wins += 1
        assert wins >= 0.95 * trials

    def test_reported_cost_matches_recomputation(self):
        rng = random.Random(17)
        for _ in range(10):
            net = random_network(rng, rng.randint(2, 8))
            for mode in ("quick", "thorough"):
                tree = heuristic_order(net, mode, seed=1)
                recomputed = sum(
                    binary_cost(sorted(nd.left.labels), sorted(nd.right.labels),
                                net.dims)
                    for nd in tree.nodes())
                assert tree.total_cost == recomputed


class TestCostReport:
    def test_chain_report(self):
        net = compile_network(nets.matrix_chain(), 1)
        tree = optimal_order_full(net)
        rep = cost_report(net, tree, guaranteed=True)
        assert rep.total_mults == 54
        assert rep.time_estimate_s == pytest.approx(1.8e-8)
        assert rep.order == (1, 2)
        assert rep.guaranteed_optimal
        assert [p.render() for p in rep.top_costs] == ["a*c*d", "a*b*c"]

    def test_two_tensor_network_reports_single_top_cost(self):
        net = compile_network(nets.trace_pair(), 1)
        rep = cost_report(net, optimal_order_full(net), guaranteed=True)
        assert len(rep.top_costs) == 1
        assert rep.top_costs[0].render() == "chi^2"

    def test_uniform_type_renders_powers(self):
        net = compile_network(nets.ring_six(), 1)
        rep = cost_report(net, optimal_order_full(net), guaranteed=True)
        union = max(len(nd.left.labels | nd.right.labels)
                    for nd in optimal_order_full(net).nodes())
        assert rep.top_costs[0].render() == f"chi^{union}"

    def test_overridden_dims_become_factors(self):
        net = compile_network(nets.figure_pair(), 1)
        rep = cost_report(net, optimal_order_full(net), guaranteed=True)
        assert rep.top_costs[0].render() == "2*3*4*5*6"

    def test_scale_property_on_tree_nodes(self):
        rng = random.Random(8)
        for _ in range(10):
            net = random_network(rng, rng.randint(2, 5), min_dim=2, max_dim=4)
            tree = optimal_order_full(net)
            c = 3
            scaled = {l: d * c for l, d in net.dims.items()}
            for nd in tree.nodes():
                union = nd.left.labels | nd.right.labels
                assert (binary_cost(sorted(nd.left.labels),
                                    sorted(nd.right.labels), scaled)
                        == nd.step_cost * c ** len(union))
