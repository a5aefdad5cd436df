"""Brute-force reference implementations used only by the tests.

Everything here works on explicit labels and explicit subsets so that it
shares no code path with the diagram-based implementation.
"""

from __future__ import annotations

from itertools import combinations, product

from compreach.net import NetWithBoundaries


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def label_of(net: NetWithBoundaries, ts) -> int:
    lab = 0
    for t in ts:
        for i in t.source:
            lab |= 1 << i
        for j in t.target:
            lab |= 1 << (net.left + j)
    return lab


def explicit_steps(net: NetWithBoundaries, marking) -> set:
    """``{(label bits, successor marking)}`` by scanning every subset of transitions."""
    x = frozenset(marking)
    out = set()
    for us in subsets(net.transitions):
        places = [p for t in us for p in t.places]
        if len(places) != len(set(places)):
            continue
        pre = frozenset(p for t in us for p in t.pre)
        post = frozenset(p for t in us for p in t.post)
        if pre <= x and not post & x:
            out.add((label_of(net, us), (x - pre) | post))
    return out


def brute_synchronisations(n: NetWithBoundaries, m: NetWithBoundaries) -> set:
    """Every synchronisation ``(U, V)`` as pairs of transition-id frozensets, the trivial one included."""
    out = set()
    for us in subsets(n.transitions):
        if not _mi(us):
            continue
        tu = frozenset(j for t in us for j in t.target)
        for vs in subsets(m.transitions):
            if not _mi(vs):
                continue
            if frozenset(i for t in vs for i in t.source) == tu:
                out.add((frozenset(t.id for t in us), frozenset(t.id for t in vs)))
    return out


def brute_minimal_synchronisations(n, m) -> set:
    syncs = [s for s in brute_synchronisations(n, m) if s[0] or s[1]]
    return {
        s for s in syncs
        if not any(o != s and o[0] <= s[0] and o[1] <= s[1] for o in syncs)
    }


def _mi(ts) -> bool:
    places = [p for t in ts for p in t.places]
    return len(places) == len(set(places))


# -- explicit automata ---------------------------------------------------------------


class ExplicitNfa:
    """States are arbitrary hashables; ``edges[s]`` maps label bits to a set of states."""

    def __init__(self, nbits, initial, final, edges):
        self.nbits = nbits
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        self.edges = edges

    def succ(self, s, lab):
        return self.edges.get(s, {}).get(lab, frozenset())


def explicit_net_nfa(net: NetWithBoundaries, initial, final) -> ExplicitNfa:
    init = {frozenset(x) for x in initial}
    edges, todo = {}, list(init)
    while todo:
        x = todo.pop()
        if x in edges:
            continue
        edges[x] = {}
        for lab, y in explicit_steps(net, x):
            edges[x].setdefault(lab, set()).add(y)
            if y not in edges:
                todo.append(y)
    edges = {x: {lab: frozenset(ys) for lab, ys in e.items()} for x, e in edges.items()}
    fin = {frozenset(y) for y in final} & set(edges)
    return ExplicitNfa(net.left + net.right, init, fin, edges)


def from_bounded(a) -> ExplicitNfa:
    """Read a diagram-based automaton back label by label."""
    edges = {}
    for s in range(a.num_states):
        e = {}
        for lab in range(1 << a.label_bits):
            ys = a.successors(s, lab) if hasattr(a, "successors") else frozenset({a.next_state(s, lab)})
            if ys:
                e[lab] = frozenset(ys)
        edges[s] = e
    initial = a.initial if isinstance(a.initial, frozenset) else {a.initial}
    return ExplicitNfa(a.label_bits, initial, a.final, edges)


def naive_seq(a: ExplicitNfa, b: ExplicitNfa, k: int, l: int, m: int) -> ExplicitNfa:
    """Product ``a ; b`` by enumerating every ``alpha``, ``gamma`` and ``beta``."""
    init = {(x, y) for x in a.initial for y in b.initial}
    edges, todo = {}, list(init)
    while todo:
        s = todo.pop()
        if s in edges:
            continue
        x, y = s
        e = {}
        for alpha, gamma, beta in product(range(1 << k), range(1 << l), range(1 << m)):
            xs = a.succ(x, alpha | gamma << k)
            ys = b.succ(y, gamma | beta << l)
            for t in product(xs, ys):
                e.setdefault(alpha | beta << k, set()).add(t)
        edges[s] = {lab: frozenset(v) for lab, v in e.items()}
        todo += [t for v in e.values() for t in v if t not in edges]
    fin = {s for s in edges if s[0] in a.final and s[1] in b.final}
    return ExplicitNfa(k + m, init, fin, edges)


def naive_tensor(a: ExplicitNfa, b: ExplicitNfa, k, l, p, q) -> ExplicitNfa:
    init = {(x, y) for x in a.initial for y in b.initial}
    edges, todo = {}, list(init)
    while todo:
        s = todo.pop()
        if s in edges:
            continue
        x, y = s
        e = {}
        for alpha, beta, gamma, delta in product(range(1 << k), range(1 << l), range(1 << p), range(1 << q)):
            xs = a.succ(x, alpha | beta << k)
            ys = b.succ(y, gamma | delta << p)
            lab = alpha | gamma << k | beta << (k + p) | delta << (k + p + l)
            for t in product(xs, ys):
                e.setdefault(lab, set()).add(t)
        edges[s] = {lab: frozenset(v) for lab, v in e.items()}
        todo += [t for v in e.values() for t in v if t not in edges]
    fin = {s for s in edges if s[0] in a.final and s[1] in b.final}
    return ExplicitNfa(k + l + p + q, init, fin, edges)


def explicit_weak_dfa(a: ExplicitNfa):
    """Epsilon-closure plus subset construction, completed with an explicit empty-set sink.

    Returns ``(states, initial, final, delta)`` with ``delta[(s, lab)]``.
    """

    def close(xs):
        seen, todo = set(xs), list(xs)
        while todo:
            for y in a.succ(todo.pop(), 0):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    start = close(a.initial)
    states, delta, todo = {start}, {}, [start]
    while todo:
        s = todo.pop()
        for lab in range(1 << a.nbits):
            img = frozenset(y for x in s for y in a.succ(x, lab))
            t = close(img)
            delta[(s, lab)] = t
            if t not in states:
                states.add(t)
                todo.append(t)
    final = {s for s in states if s & a.final}
    return states, start, final, delta


def moore_minimal_size(a: ExplicitNfa, nbits: int) -> int:
    """Number of states of the minimal complete DFA of the weak language, by partition refinement."""
    states, start, final, delta = explicit_weak_dfa(a)
    block = {s: (s in final) for s in states}
    while True:
        sig = {s: (block[s],) + tuple(block[delta[(s, lab)]] for lab in range(1 << nbits)) for s in states}
        ids: dict = {}
        new = {s: ids.setdefault(sig[s], len(ids)) for s in states}
        if len(set(new.values())) == len(set(block.values())):
            return len(set(new.values()))
        block = new


def same_weak_language(a: ExplicitNfa, d, nbits: int) -> bool:
    """Is the weak language of ``a`` the language of the complete DFA ``d`` (a :class:`MinimalDfa`)?"""
    states, start, final, delta = explicit_weak_dfa(a)
    seen = {(start, 0)}
    todo = [(start, 0)]
    while todo:
        s, q = todo.pop()
        if (s in final) != (q in d.final):
            return False
        for lab in range(1 << nbits):
            nxt = (delta[(s, lab)], d.next_state(q, lab))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return True


def traces(a: ExplicitNfa, length: int) -> set:
    """Accepted words (tuples of labels) of exactly ``length`` letters."""
    out = set()
    frontier = {(x, ()) for x in a.initial}
    for _ in range(length):
        frontier = {
            (y, w + (lab,))
            for x, w in frontier
            for lab, ys in a.edges.get(x, {}).items()
            for y in ys
        }
    for x, w in frontier:
        if x in a.final:
            out.add(w)
    return out


def bfs_reachable(net: NetWithBoundaries, initial) -> set:
    """Reachable markings by full step firing (explicit subsets)."""
    seen = {frozenset(initial)}
    todo = list(seen)
    while todo:
        x = todo.pop()
        for _, y in explicit_steps(net, x):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


# -- a fixed random corpus -------------------------------------------------------------


def random_net(rng, k, l, max_places=3, max_transitions=4, prefix="p"):
    from compreach.net import Transition

    places = [f"{prefix}{i}" for i in range(rng.randint(0, max_places))]
    n = rng.randint(0, max_transitions)

    def some():
        return {p for p in places if rng.random() < 0.35}

    src = [set() for _ in range(n)]
    tgt = [set() for _ in range(n)]
    if n:
        for i in range(k):
            if rng.random() < 0.8:
                src[rng.randrange(n)].add(i)
        for j in range(l):
            if rng.random() < 0.8:
                tgt[rng.randrange(n)].add(j)
    ts = [Transition(f"t{i}", some(), some(), src[i], tgt[i]) for i in range(n)]
    return NetWithBoundaries(k, l, places, ts)


def random_targets(rng, places):
    from compreach.net import PlaceTarget

    return {p: rng.choice(list(PlaceTarget)) for p in places}


def random_decomposition(rng, k=0, l=0, max_places=8, max_width=3, max_depth=4):
    """Random expression over fresh leaves; leaves get one initial marking and per-place targets.

    Returns ``(expr, assignments, leaf_targets)``.
    """
    from compreach.net import target_markings
    from compreach.wiring import Assignments, Seq, Tensor, Var

    a = Assignments({}, {}, {})
    leaf_targets = {}
    budget = [max_places]

    def build(k, l, depth):
        kind = "leaf" if depth == 0 or budget[0] <= 1 else rng.choice(["leaf", "seq", "seq", "tensor"])
        if kind == "seq":
            m = rng.randint(0, max_width)
            return Seq(build(k, m, depth - 1), build(m, l, depth - 1))
        if kind == "tensor":
            k1, l1 = rng.randint(0, k), rng.randint(0, l)
            return Tensor(build(k1, l1, depth - 1), build(k - k1, l - l1, depth - 1))
        net = random_net(rng, k, l, max_places=min(3, budget[0]), max_transitions=4)
        budget[0] -= len(net.places)
        name = f"x{len(a.nets)}"
        targets = random_targets(rng, net.places)
        a.nets[name] = net
        a.initial[name] = [frozenset(p for p in net.places if rng.random() < 0.4)]
        a.final[name] = target_markings(net.places, targets)
        leaf_targets[name] = targets
        return Var(name)

    return build(k, l, max_depth), a, leaf_targets


def composite_targets(expr, leaf_targets) -> dict:
    """Per-place targets of the composite net, with the same tagging as ``net_semantics``."""
    from compreach.wiring import Var, postorder

    out = {}
    for node in postorder(expr):
        if isinstance(node, Var):
            out[id(node)] = dict(leaf_targets[node.name])
        else:
            left, right = out[id(node.left)], out[id(node.right)]
            merged = {"L." + p: v for p, v in left.items()}
            merged.update({"R." + p: v for p, v in right.items()})
            out[id(node)] = merged
    return out[id(expr)]


def subterms(expr):
    from compreach.wiring import postorder

    return list(postorder(expr))
