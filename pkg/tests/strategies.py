"""Hypothesis strategies for nets with boundaries and wiring decompositions."""

from __future__ import annotations

from hypothesis import strategies as st

from compreach.net import NetWithBoundaries, Transition
from compreach.wiring import Assignments, Seq, Tensor, Var


@st.composite
def nets(draw, left=None, right=None, max_places=3, max_transitions=4, max_width=3, prefix="p"):
    k = draw(st.integers(0, max_width)) if left is None else left
    l = draw(st.integers(0, max_width)) if right is None else right
    n_places = draw(st.integers(0, max_places))
    places = [f"{prefix}{i}" for i in range(n_places)]
    n_trans = draw(st.integers(0, max_transitions))
    place_sets = st.sets(st.sampled_from(places), max_size=2) if places else st.just(set())
    pres = [draw(place_sets) for _ in range(n_trans)]
    posts = [draw(place_sets) for _ in range(n_trans)]
    # each port is attached to at most one transition
    owners = st.one_of(st.none(), st.integers(0, n_trans - 1)) if n_trans else st.none()
    src = [set() for _ in range(n_trans)]
    tgt = [set() for _ in range(n_trans)]
    for i in range(k):
        o = draw(owners)
        if o is not None:
            src[o].add(i)
    for j in range(l):
        o = draw(owners)
        if o is not None:
            tgt[o].add(j)
    transitions = [Transition(f"t{i}", pres[i], posts[i], src[i], tgt[i]) for i in range(n_trans)]
    return NetWithBoundaries(k, l, places, transitions)


@st.composite
def markings(draw, net, min_size=0, max_size=2):
    one = st.frozensets(st.sampled_from(net.places)) if net.places else st.just(frozenset())
    return draw(st.lists(one, min_size=min_size, max_size=max_size, unique=True))


@st.composite
def marked_leaf(draw, left, right, max_places=2, max_transitions=3):
    net = draw(nets(left, right, max_places=max_places, max_transitions=max_transitions))
    initial = draw(markings(net, min_size=1, max_size=2))
    final = draw(markings(net, min_size=0, max_size=2))
    return net, initial, final


@st.composite
def decompositions(draw, left=None, right=None, max_places=8, max_width=3, max_depth=3):
    """A random wiring expression over fresh leaves, with at most ``max_places`` places in total."""
    k = draw(st.integers(0, max_width)) if left is None else left
    l = draw(st.integers(0, max_width)) if right is None else right
    a = Assignments({}, {}, {})
    budget = [max_places]

    def build(k, l, depth):
        kind = "leaf" if depth == 0 or budget[0] <= 1 else draw(st.sampled_from(["leaf", "seq", "tensor"]))
        if kind == "seq":
            m = draw(st.integers(0, max_width))
            return Seq(build(k, m, depth - 1), build(m, l, depth - 1))
        if kind == "tensor":
            k1 = draw(st.integers(0, k))
            l1 = draw(st.integers(0, l))
            return Tensor(build(k1, l1, depth - 1), build(k - k1, l - l1, depth - 1))
        cap = min(2, budget[0])
        net, initial, final = draw(marked_leaf(k, l, max_places=cap))
        budget[0] -= len(net.places)
        name = f"x{len(a.nets)}"
        a.nets[name] = net
        a.initial[name] = initial
        a.final[name] = final
        return Var(name)

    expr = build(k, l, draw(st.integers(0, max_depth)))
    return expr, a
