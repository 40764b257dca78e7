import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import D, instances, path_graph, random_instance
from steinerlearn.approx import ShortestPathTable, two_approx
from steinerlearn.exact import dreyfus_wagner, verify_steiner_tree
from steinerlearn.graph import STPInstance
from steinerlearn.heuristics import h1_induced_mst, h2_terminal_promotion


def test_gstar_with_d_scored_high(gstar):
    scores = [0.0, 0.0, 0.0, 0.9]
    assert h1_induced_mst(gstar, scores).cost == 9
    tree = h2_terminal_promotion(gstar, scores)
    assert tree.cost == 9 and D in tree.nodes


def test_gstar_with_flat_scores(gstar):
    scores = np.zeros(4)
    assert h1_induced_mst(gstar, scores).cost == 10
    assert h2_terminal_promotion(gstar, scores).cost == 10


def test_terminals_already_connected_ignore_low_scores():
    # terminals 0 and 1 are adjacent; node 2 scores below threshold
    inst = STPInstance(path_graph([1, 1]), (0, 1))
    assert h1_induced_mst(inst, [0, 0, 0.3]).pairs == {(0, 1)}


def test_scores_shape_checked(gstar):
    with pytest.raises(ValueError):
        h1_induced_mst(gstar, [0.5, 0.5])
    with pytest.raises(ValueError):
        h2_terminal_promotion(gstar, [0.5] * 5)


@settings(max_examples=60, deadline=None)
@given(instances(max_n=9), st.data())
def test_valid_trees_and_bounds(inst, data):
    scores = data.draw(st.lists(st.floats(0, 1), min_size=inst.n, max_size=inst.n))
    opt = dreyfus_wagner(inst).optimal_cost
    base = two_approx(inst).cost
    h1 = h1_induced_mst(inst, scores)
    h2 = h2_terminal_promotion(inst, scores)
    assert verify_steiner_tree(inst, h1) == (True, h1.cost)
    assert verify_steiner_tree(inst, h2) == (True, h2.cost)
    assert h1.cost >= opt and h2.cost >= opt
    assert h2.cost <= base


def test_perfect_scores_give_good_trees():
    rng = np.random.default_rng(2)
    hits = 0
    for _ in range(30):
        inst = random_instance(rng, 12, 4)
        opt = dreyfus_wagner(inst)
        scores = np.zeros(inst.n)
        scores[list(opt.tree.nodes)] = 1.0
        # the optimal node set induces a connected graph whose MST is optimal
        assert h1_induced_mst(inst, scores).cost == opt.optimal_cost
        hits += h2_terminal_promotion(inst, scores).cost == opt.optimal_cost
    assert hits >= 20


def test_deterministic_and_table_reuse():
    rng = np.random.default_rng(9)
    inst = random_instance(rng, 15, 5)
    scores = rng.random(15)
    table = ShortestPathTable.of(inst.graph)
    a = h2_terminal_promotion(inst, scores)
    assert a == h2_terminal_promotion(inst, scores, table=table)
    assert h1_induced_mst(inst, scores) == h1_induced_mst(inst, scores)
