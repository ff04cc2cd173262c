import math

import numpy as np
import pytest

from realized_cumulants.bell import g_eval
from realized_cumulants.models import (
    BrownianMartingale,
    ExponentialMartingale,
    PoissonMartingale,
    TreeModel,
    simulate_exponential_martingale,
    tree_backward_induction,
    tree_enumerate_paths,
)
from realized_cumulants.montecarlo import run_paths
from realized_cumulants.paths import MultiPath, PathBatch
from realized_cumulants.realized import (
    aggregation_check_tree,
    aggregation_residual_tree,
    aggregation_triples,
    batch_realized_cumulant,
    conditional_expected_realized_cumulant_tree,
    expected_realized_cumulant_tree,
    realized_cumulant,
    unbiasedness_mc,
)

from conftest import random_tree


def test_realized_variance_by_hand():
    path = MultiPath([0, 1, 2], [0.0, 1.0, -1.0])
    stat = realized_cumulant(path, 1)
    assert stat.value == 5.0
    assert stat.order == 2
    np.testing.assert_array_equal(stat.contributions, [1.0, 4.0])


def test_realized_skewness_single_cell():
    path = MultiPath([0, 1], [[0.0, 0.0], [2.0, 1.0]])
    assert realized_cumulant(path, 2).value == 14.0


def test_neuberger_and_bae_lee_forms(rng):
    v = rng.normal(size=(9, 3))
    path = MultiPath(np.arange(9), v)
    d = np.diff(v, axis=0)
    skew = np.sum(d[:, 0] ** 3 + 3 * d[:, 0] * d[:, 1])
    kurt = np.sum(d[:, 0] ** 4 + 6 * d[:, 0] ** 2 * d[:, 1] + 4 * d[:, 0] * d[:, 2] + 3 * d[:, 1] ** 2)
    assert realized_cumulant(path, 2).value == pytest.approx(skew, rel=1e-13)
    assert realized_cumulant(path, 3).value == pytest.approx(kurt, rel=1e-13)


def test_constant_path_is_zero():
    path = MultiPath(np.linspace(0, 1, 6), np.full((6, 3), 2.5))
    for n in (1, 2, 3):
        assert realized_cumulant(path, n).value == 0.0


def test_single_point_grid():
    stat = realized_cumulant(MultiPath([0.0], [[1.0, 2.0]]), 2)
    assert stat.value == 0.0
    assert stat.contributions.size == 0


def test_missing_components():
    with pytest.raises(ValueError):
        realized_cumulant(MultiPath([0, 1], [0.0, 1.0]), 2)


def test_value_is_sum_of_contributions(rng):
    path = MultiPath(np.cumsum(rng.uniform(0.1, 1, 30)), rng.normal(size=(30, 4)))
    for n in (1, 2, 3, 4):
        stat = realized_cumulant(path, n)
        assert abs(stat.value - stat.contributions.sum()) <= 1e-12
        np.testing.assert_allclose(stat.contributions, g_eval(n, path.increments(n)))


def test_concatenation_adds(rng):
    a = MultiPath([0.0, 0.3, 1.0], rng.normal(size=(3, 3)))
    tail = rng.normal(size=(3, 3))
    tail[0] = a.values[-1]
    b = MultiPath([1.0, 1.5, 2.2], tail)
    joined = a.concat(b)
    for n in (1, 2, 3):
        assert realized_cumulant(joined, n).value == pytest.approx(
            realized_cumulant(a, n).value + realized_cumulant(b, n).value, abs=1e-13)


def test_batch_matches_single_paths():
    batch = ExponentialMartingale(1.0).sample_batch(3, np.arange(5), 8, 3)
    per_path = [realized_cumulant(p, 2).value for p in batch.paths()]
    np.testing.assert_allclose(batch_realized_cumulant(batch, 2), per_path, rtol=1e-14)
    rebuilt = PathBatch.from_paths(batch.paths())
    np.testing.assert_array_equal(rebuilt.values, batch.values)


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, 0.0), (3, -4.0)])
def test_expected_realized_two_step(binomial2, n, expected):
    assert expected_realized_cumulant_tree(binomial2, n) == pytest.approx(expected, abs=1e-12)


def test_expected_realized_matches_enumeration_oracle(binomial2):
    # E sum (dM)^2 by hand: every path has two squared unit steps
    paths = tree_enumerate_paths(binomial2, tree_backward_induction(binomial2, 2))
    assert sum(p * np.sum(np.diff(path.values[:, 0]) ** 2) for p, path in paths) == 2.0


@pytest.mark.parametrize("seed", range(4))
def test_expected_realized_equals_cumulants_on_random_trees(seed):
    tree = random_tree(np.random.default_rng(seed), depth=4)
    ct = tree_backward_induction(tree, 5)
    for n in (1, 2, 3, 4):
        assert expected_realized_cumulant_tree(tree, n, ct=ct) == pytest.approx(ct.cumulants[0][0, n], abs=1e-12)
        for t_start in range(tree.depth + 1):
            cond = conditional_expected_realized_cumulant_tree(tree, n, t_start, ct=ct)
            np.testing.assert_allclose(cond, ct.cumulants[t_start][:, n], rtol=0, atol=1e-12)
            uncond = expected_realized_cumulant_tree(tree, n, t_start, ct=ct)
            assert uncond == pytest.approx(tree.level_mass(t_start) @ ct.cumulants[t_start][:, n], abs=1e-12)


def test_refinement_invariance_on_tree(rng):
    tree = random_tree(rng, depth=3)
    ct = tree_backward_induction(tree, 4)
    for n in (1, 2, 3):
        vals = [expected_realized_cumulant_tree(tree, n, partition=p, ct=ct)
                for p in ([0, 3], [0, 1, 3], [0, 2, 3], [0, 1, 2, 3])]
        assert max(vals) - min(vals) <= 1e-12


def test_nontrivial_f0_is_reported_per_node(rng):
    tree = random_tree(rng, depth=3, multi_root=True)
    ct = tree_backward_induction(tree, 3)
    per_node = conditional_expected_realized_cumulant_tree(tree, 2, ct=ct)
    assert per_node.shape == (2,)
    np.testing.assert_allclose(per_node, ct.cumulants[0][:, 2], atol=1e-12)


def test_bad_partition(binomial3):
    with pytest.raises(ValueError):
        expected_realized_cumulant_tree(binomial3, 1, partition=[1, 3])


@pytest.mark.parametrize("seed", range(4))
def test_aggregation_all_triples(seed):
    tree = random_tree(np.random.default_rng(seed), depth=3)
    for n in (1, 2, 3):
        ct = tree_backward_induction(tree, n + 1)
        for s, t, u in aggregation_triples(3):
            assert np.max(np.abs(aggregation_residual_tree(tree, n, s, t, u, ct))) <= 1e-12


def test_aggregation_by_enumeration(rng):
    # both sides by summing over enumerated paths, conditioning on the root
    tree = random_tree(rng, depth=3)
    ct = tree_backward_induction(tree, 4)
    for n, (s, t, u) in [(2, (0, 1, 3)), (3, (0, 2, 3))]:
        lhs = rhs = 0.0
        for p, path in tree_enumerate_paths(tree, ct):
            x = path.values[:, :n]
            lhs += p * g_eval(n, x[u] - x[s])
            rhs += p * (g_eval(n, x[t] - x[s]) + g_eval(n, x[u] - x[t]))
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert aggregation_check_tree(tree, n, s, t, u).passed


@pytest.mark.parametrize("n, triple", [(2, (0, 1, 3)), (3, (0, 2, 3)), (1, (1, 1, 2))])
def test_aggregation_check_reports(binomial3, n, triple):
    report = aggregation_check_tree(binomial3, n, *triple)
    assert report.passed
    assert report.standard_error == 0.0


def test_aggregation_bad_order(binomial3):
    with pytest.raises(ValueError):
        aggregation_check_tree(binomial3, 1, 2, 1, 3)


def test_telescoping_order_one_on_tree(rng):
    # E[sum (dM)^2 + X^(2)_T - X^(2)_0] = 0 exactly
    tree = random_tree(rng, depth=4)
    ct = tree_backward_induction(tree, 2)
    total = sum(p * (realized_cumulant(path, 1).value + path.values[-1, 1] - path.values[0, 1])
                for p, path in tree_enumerate_paths(tree, ct))
    assert abs(total) <= 1e-12


def _telescoped(batch):
    return {"x": batch_realized_cumulant(batch, 1) + batch.values[:, -1, 1] - batch.values[:, 0, 1]}


def test_telescoping_order_one_mc():
    res = run_paths(_telescoped, ExponentialMartingale(1.0), 50_000, 8, 2, seed=21)
    assert abs(res.mean("x")) <= 4 * res.standard_error("x")


@pytest.mark.parametrize(
    "model, n, target",
    [
        (PoissonMartingale(1.0, 1.0), 2, 1.0),
        (ExponentialMartingale(1.0), 1, math.e - 1),
        (BrownianMartingale(1.0), 2, 0.0),
    ],
)
def test_unbiasedness_mc(model, n, target):
    report = unbiasedness_mc(model, n, 20_000, 8, seed=17)
    assert report.target == pytest.approx(target, rel=1e-14, abs=1e-15)
    assert report.passed, report.line()


def test_unbiased_on_coarse_non_uniform_partition():
    # the statistic is partition-free: a 3-point irregular sub-grid is still unbiased
    batch = ExponentialMartingale(1.0).sample_batch(8, np.arange(40_000), 10, 2)
    keep = [0, 1, 7, 10]
    vals = np.array([realized_cumulant(p.restrict(points=p.grid[keep]), 1).value for p in batch.paths()])
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - (math.e - 1)) <= 4 * se


def test_single_path_statistic_matches_simulator():
    path = simulate_exponential_martingale(1.0, 4, seed=1, n_components=2)
    assert realized_cumulant(path, 1).value == pytest.approx(np.sum(np.diff(path.values[:, 0]) ** 2))


def test_tree_order_too_low(binomial3):
    ct = tree_backward_induction(binomial3, 2)
    with pytest.raises(ValueError):
        expected_realized_cumulant_tree(binomial3, 2, ct=ct)


def test_two_point_tree():
    tree = TreeModel([[[(0, 0.25), (1, 0.75)]]], [3.0, -1.0])
    # single cell: expectation of g_n(X - E X) is the (n+1)-th cumulant of a two-point law
    p, a, b = 0.25, 3.0, -1.0
    mean = p * a + (1 - p) * b
    var = p * (a - mean) ** 2 + (1 - p) * (b - mean) ** 2
    third = p * (a - mean) ** 3 + (1 - p) * (b - mean) ** 3
    assert expected_realized_cumulant_tree(tree, 1) == pytest.approx(var, abs=1e-12)
    assert expected_realized_cumulant_tree(tree, 2) == pytest.approx(third, abs=1e-12)
