import pytest

from compreach.decompose import decompose
from compreach.generators import (
    buffer_cells,
    buffer_flat,
    gen_buffer,
    gen_clique,
    gen_philosophers,
    gen_tree,
    generate,
    philosopher_assignments,
    philosophers_flat,
    phrow,
    tree_flat,
)
from compreach.net import find_isomorphism, isomorphic, validate_net
from compreach.oracle import oracle_reach, reach_marked, reachable_markings
from compreach.wiring import check_reachability, combined_markings, evaluate, net_semantics


def test_generators_are_deterministic():
    assert buffer_flat(5) == buffer_flat(5)
    assert gen_clique(4) == gen_clique(4)
    assert philosophers_flat(3) == philosophers_flat(3)
    t1, a1 = gen_philosophers(3)
    t2, a2 = gen_philosophers(3)
    assert str(t1) == str(t2) and a1 == a2


def test_generated_nets_are_valid():
    assert validate_net(buffer_flat(4).net) == []
    assert validate_net(tree_flat(4).net) == []
    assert validate_net(philosophers_flat(4).net) == []
    assert validate_net(gen_clique(5).net) == []
    for n in philosopher_assignments().nets.values():
        assert validate_net(n) == []


def test_buffer_sizes():
    m = buffer_flat(4)
    assert len(m.net.places) == 8 and len(m.net.transitions) == 5
    assert len(buffer_cells(3).places) == 6


@pytest.mark.parametrize("shape", ["left", "right", "balanced"])
@pytest.mark.parametrize("n", [1, 2, 5])
def test_buffer_decompositions_denote_the_flat_net(shape, n):
    t, a = gen_buffer(n, shape)
    flat = buffer_flat(n)
    sem = net_semantics(t, a)
    assert isomorphic(sem, flat.net)
    (init,) = combined_markings(t, a.initial)
    assert check_reachability(t, a).reachable == reach_marked(flat).reachable
    assert len(init) == n


def test_tree_decomposition_denotes_the_flat_tree():
    for n in (1, 2, 3, 4):
        t, a = gen_tree(n)
        assert isomorphic(net_semantics(t, a), tree_flat(n).net)
        assert check_reachability(t, a).reachable == reach_marked(tree_flat(n)).reachable


def test_tree_evaluation_hits_the_memo():
    t, a = gen_tree(5)
    r = check_reachability(t, a)
    assert r.stats.hits > r.stats.misses


@pytest.mark.parametrize("n", [2, 3])
def test_philosopher_decomposition_denotes_the_ring(n):
    t, a = gen_philosophers(n)
    sem = net_semantics(t, a)
    flat = philosophers_flat(n)
    assert isomorphic(sem, flat.net)
    # same reachable markings once the tags are dropped and places matched up
    mapping = find_isomorphism(sem, flat.net)
    (init,) = combined_markings(t, a.initial)
    got = {frozenset(mapping[p] for p in x) for x in reachable_markings(sem, init)}
    assert got == reachable_markings(flat.net, flat.initial)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_philosopher_verdict_matches_oracle(n):
    t, a = gen_philosophers(n)
    assert check_reachability(t, a).reachable == reach_marked(philosophers_flat(n)).reachable
    assert reach_marked(philosophers_flat(n)).reachable


def test_phrow_fixpoint():
    a = philosopher_assignments()
    d3 = evaluate(phrow(3), a)
    assert d3.num_states == 10
    assert evaluate(phrow(4), a) == d3
    assert evaluate(phrow(2), a) != d3


def test_clique_shape():
    m = gen_clique(3)
    assert len(m.net.places) == 3 and len(m.net.transitions) == 6
    assert m.initial == {"q0"}
    assert reach_marked(m).reachable
    with pytest.raises(ValueError):
        gen_clique(1)


def test_buffer_of_one_is_reachable():
    for shape in ("flat", "left", "right", "balanced"):
        made = generate("buffer", 1, shape)
        if shape == "flat":
            assert reach_marked(made).reachable
        else:
            assert check_reachability(*made).reachable


def test_generate_dispatch_and_errors():
    assert generate("tree", 3, "flat") == tree_flat(3)
    assert isinstance(generate("philosophers", 2), tuple)
    assert generate("clique", 3) == gen_clique(3)
    with pytest.raises(ValueError):
        generate("tree", 3, "left")
    with pytest.raises(ValueError):
        generate("clique", 3, "balanced")
    with pytest.raises(ValueError):
        generate("ring", 3)
    with pytest.raises(ValueError):
        gen_buffer(0)
    with pytest.raises(ValueError):
        gen_buffer(3, "diagonal")
    with pytest.raises(ValueError):
        philosophers_flat(1)


def test_automatic_and_hand_decompositions_agree():
    for flat, hand in [
        (buffer_flat(4), gen_buffer(4, "right")),
        (tree_flat(3), gen_tree(3)),
        (philosophers_flat(2), gen_philosophers(2)),
    ]:
        auto = decompose(flat.net, flat.targets, flat.initial, leaf_budget=4)
        oracle = oracle_reach(flat.net, flat.initial, flat.targets).reachable
        assert check_reachability(auto.expr, auto.assign).reachable == oracle
        assert check_reachability(*hand).reachable == oracle
