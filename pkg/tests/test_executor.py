import random

import numpy as np
import pytest

from oracles import nested_sum_execute
from ttc import compile_network, ncon_execute, nets, pairwise_contract, partial_trace
from ttc.testing import random_network


def random_arrays(net, rng, complex_data=False):
    out = []
    for labs in net.all_label_lists():
        shape = tuple(net.dims[l] for l in labs)
        a = rng.normal(size=shape)
        if complex_data:
            a = a + 1j * rng.normal(size=shape)
        out.append(a)
    return out


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    denom = max(np.max(np.abs(b)), 1e-300)
    return np.max(np.abs(a - b)) / denom


class TestPartialTrace:
    def test_identity_trace(self):
        t, labs = partial_trace(np.eye(3), [1, 1])
        assert labs == []
        assert float(t) == 3.0

    def test_ones_partial(self):
        t, labs = partial_trace(np.ones((2, 3, 3)), [-1, 2, 2])
        assert labs == [-1]
        np.testing.assert_allclose(t, [3.0, 3.0])

    def test_distinct_noop(self):
        a = np.arange(6.0).reshape(2, 3)
        t, labs = partial_trace(a, [-1, -2])
        assert labs == [-1, -2]
        np.testing.assert_allclose(t, a)

    def test_mismatched_dims(self):
        with pytest.raises(ValueError):
            partial_trace(np.ones((2, 3)), [1, 1])

    def test_oracle(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(3, 2, 3))
        t, labs = partial_trace(a, [4, -1, 4])
        assert labs == [-1]
        np.testing.assert_allclose(t, nested_sum_execute([a], [[4, -1, 4]]))


class TestPairwise:
    def test_matrix_multiply(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[5.0, 6.0], [7.0, 8.0]])
        t, labs = pairwise_contract(a, [-1, 1], b, [1, -2])
        assert labs == [-1, -2]
        np.testing.assert_allclose(t, [[19, 22], [43, 50]])

    def test_outer_product(self):
        t, labs = pairwise_contract(np.array([1.0, 2.0]), [-1],
                                    np.array([3.0, 4.0]), [-2])
        assert labs == [-1, -2]
        np.testing.assert_allclose(t, [[3, 4], [6, 8]])

    def test_dot(self):
        t, labs = pairwise_contract(np.array([1.0, 2.0]), [1],
                                    np.array([3.0, 4.0]), [1])
        assert labs == []
        assert float(t) == 11.0

    def test_shared_dim_mismatch(self):
        with pytest.raises(ValueError):
            pairwise_contract(np.ones((2, 3)), [-1, 1], np.ones((4, 2)), [1, -2])


class TestNconExecute:
    def test_figure_pair_oracle(self):
        net = compile_network(nets.figure_pair(), 1)
        rng = np.random.default_rng(1)
        arrays = random_arrays(net, rng)
        got = ncon_execute(arrays, net.all_label_lists(), [1])
        want = nested_sum_execute(arrays, net.all_label_lists())
        assert rel_err(got, want) < 1e-12

    def test_single_tensor_transpose(self):
        a = np.arange(6.0).reshape(2, 3)
        got = ncon_execute([a], [[-2, -1]], [])
        np.testing.assert_allclose(got, a.T)

    def test_three_ring_order_invariance(self):
        rng = np.random.default_rng(2)
        a, b, c = (rng.normal(size=(2, 2)) for _ in range(3))
        labels = [[1, 2], [2, 3], [3, 1]]
        results = [float(ncon_execute([a, b, c], labels, order))
                   for order in ([1, 2, 3], [2, 3, 1], [3, 1, 2])]
        assert max(results) - min(results) < 1e-12 * max(1, abs(results[0]))

    def test_default_order_is_ascending(self):
        net = compile_network(nets.matrix_chain(), 1)
        rng = np.random.default_rng(3)
        arrays = random_arrays(net, rng)
        np.testing.assert_allclose(
            ncon_execute(arrays, net.all_label_lists()),
            ncon_execute(arrays, net.all_label_lists(), [1, 2]))

    def test_complex_promotion(self):
        a = np.array([[1.0 + 2.0j, 0.0], [0.0, 1.0]])
        b = np.eye(2)
        got = ncon_execute([a, b], [[1, 2], [2, 1]], [1, 2])
        assert np.iscomplexobj(got)
        assert complex(got) == pytest.approx(2 + 2j)

    def test_errors(self):
        a = np.ones((2, 2))
        with pytest.raises(ValueError):
            ncon_execute([a], [[-1, -3]])  # gapped open labels rejected
        with pytest.raises(ValueError):
            ncon_execute([a], [[1, -1]])  # positive label appearing once
        with pytest.raises(ValueError):
            ncon_execute([a, a], [[1, -1], [1, -1]])  # duplicate open label
        with pytest.raises(ValueError):
            ncon_execute([a, a], [[1, 2], [2, 1]], [1])  # order missing 2
        with pytest.raises(ValueError):
            ncon_execute([a, a], [[1, 2], [2, 1]], [1, 1, 2])  # duplicates
        with pytest.raises(ValueError):
            ncon_execute([a, np.ones((3, 2))], [[1, -1], [1, -2]])

    def test_order_may_include_trace_labels(self):
        net = compile_network(nets.traced_tensor_pair(), 1)
        rng = np.random.default_rng(4)
        arrays = random_arrays(net, rng)
        lists = net.all_label_lists()
        np.testing.assert_allclose(
            ncon_execute(arrays, lists, [3, 1, 2]),
            ncon_execute(arrays, lists, [1, 2]))

    def test_oracle_corpus(self):
        rng = random.Random(100)
        nprng = np.random.default_rng(100)
        for _ in range(60):
            net = random_network(rng, rng.randint(1, 6), max_dim=4,
                                 space_cap=20000)
            arrays = random_arrays(net, nprng, complex_data=rng.random() < 0.2)
            lists = net.all_label_lists()
            want = nested_sum_execute(arrays, lists)
            got = ncon_execute(arrays, lists)
            assert rel_err(got, want) < 1e-10
            # any permutation of the positive labels is a valid order
            pos = sorted({l for labs in lists for l in labs if l > 0})
            for _ in range(2):
                rng.shuffle(pos)
                assert rel_err(ncon_execute(arrays, lists, list(pos)), want) < 1e-10

    def test_permutation_equivariance(self):
        rng = random.Random(200)
        nprng = np.random.default_rng(200)
        for _ in range(20):
            net = random_network(rng, rng.randint(2, 5), max_dim=4,
                                 space_cap=20000)
            arrays = random_arrays(net, nprng)
            lists = [list(l) for l in net.all_label_lists()]
            base = ncon_execute(arrays, lists)
            k = rng.randrange(len(arrays))
            perm = list(range(arrays[k].ndim))
            rng.shuffle(perm)
            arrays[k] = np.transpose(arrays[k], perm)
            lists[k] = [lists[k][p] for p in perm]
            assert rel_err(ncon_execute(arrays, lists), base) < 1e-12

    def test_linearity_in_each_slot(self):
        rng = random.Random(300)
        nprng = np.random.default_rng(300)
        for _ in range(10):
            net = random_network(rng, rng.randint(2, 4), max_dim=3,
                                 space_cap=5000)
            arrays = random_arrays(net, nprng)
            lists = net.all_label_lists()
            k = rng.randrange(len(arrays))
            other = nprng.normal(size=arrays[k].shape)
            alpha, beta = 1.7, -0.3
            mixed = list(arrays)
            mixed[k] = alpha * arrays[k] + beta * other
            swapped = list(arrays)
            swapped[k] = other
            want = (alpha * ncon_execute(arrays, lists)
                    + beta * ncon_execute(swapped, lists))
            assert rel_err(ncon_execute(mixed, lists), want) < 1e-10
