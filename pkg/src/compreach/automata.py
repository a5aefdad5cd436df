"""Automata with boundaries, their products, epsilon-closure and minimisation.

An automaton ``A : k -> l`` reads labels ``alpha/beta`` with ``alpha`` in
``{0,1}^k`` and ``beta`` in ``{0,1}^l``.  Labels are encoded as bitmasks:
bit ``i < k`` is left port ``i``, bit ``k + j`` is right port ``j``.  Label
``0`` is the silent label epsilon.

Transition functions are set-valued decision diagrams (see
:mod:`compreach.diagram`), one root per state.
"""

from __future__ import annotations

import hashlib
from collections import deque
from typing import Iterable

from .diagram import DiagramStore
from .net import NetWithBoundaries, StepLabel, WidthMismatch

EPSILON = 0


def _label_bits(label) -> int:
    return label.to_bits() if isinstance(label, StepLabel) else int(label)


class BoundedNfa:
    """Non-deterministic automaton with boundaries ``left -> right``."""

    def __init__(self, left, right, store, delta, initial, final, names=None):
        self.left = left
        self.right = right
        self.store = store
        self.delta = tuple(delta)
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        self.names = tuple(names) if names is not None else None

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def label_bits(self) -> int:
        return self.left + self.right

    def successors(self, state: int, label) -> frozenset:
        return self.store.lookup(self.delta[state], _label_bits(label))

    def step(self, states: Iterable[int], label) -> frozenset:
        bits = _label_bits(label)
        out = frozenset()
        for s in states:
            out |= self.store.lookup(self.delta[s], bits)
        return out

    def epsilon_closure(self, states: Iterable[int]) -> frozenset:
        seen = set(states)
        todo = list(seen)
        while todo:
            for t in self.store.lookup(self.delta[todo.pop()], EPSILON):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return frozenset(seen)

    def accepts(self, word: Iterable) -> bool:
        current = self.initial
        for label in word:
            current = self.step(current, label)
            if not current:
                return False
        return bool(current & self.final)

    def diagram_size(self) -> int:
        return sum(self.store.size(r) for r in set(self.delta))

    def __repr__(self):
        return (
            f"<BoundedNfa {self.left}->{self.right}: {self.num_states} states, "
            f"{len(self.initial)} initial, {len(self.final)} final>"
        )


class MinimalDfa:
    """Complete minimal DFA with canonical numbering; state 0 is initial.

    States are numbered breadth-first from the initial state, visiting
    successors in lexicographic order of the least label leading to them.
    """

    def __init__(self, left, right, store, delta, final):
        self.left = left
        self.right = right
        self.store = store
        self.delta = tuple(delta)
        self.final = frozenset(final)
        self.table = tuple(
            store.serialise(root, lambda v: next(iter(v))) for root in self.delta
        )
        self.sink = next(
            (
                s for s, root in enumerate(self.delta)
                if s not in self.final and store.is_leaf(root) and store.value(root) == {s}
            ),
            None,
        )
        self._signature = None

    initial = 0

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def label_bits(self) -> int:
        return self.left + self.right

    def next_state(self, state: int, label) -> int:
        (target,) = self.store.lookup(self.delta[state], _label_bits(label))
        return target

    def accepts(self, word: Iterable) -> bool:
        s = 0
        for label in word:
            s = self.next_state(s, label)
        return s in self.final

    @property
    def signature(self) -> str:
        if self._signature is None:
            self._signature = canonical_signature(self)
        return self._signature

    def to_nfa(self, trim: bool = True) -> BoundedNfa:
        """View as a :class:`BoundedNfa`, dropping every edge into the sink when ``trim``."""
        sink = self.sink if trim else None
        store = DiagramStore(self.label_bits)
        memo: dict = {}
        drop = frozenset() if sink is None else frozenset({sink})
        delta = []
        for s, root in enumerate(self.delta):
            if s == sink:
                delta.append(store.empty)
            else:
                delta.append(store.transplant(self.store, root, lambda v: v - drop, memo=memo))
        return BoundedNfa(self.left, self.right, store, delta, {0}, self.final)

    def __eq__(self, other):
        if not isinstance(other, MinimalDfa):
            return NotImplemented
        return (self.left, self.right, self.final, self.table) == (
            other.left, other.right, other.final, other.table
        )

    def __hash__(self):
        return hash(self.signature)

    def __repr__(self):
        return (
            f"<MinimalDfa {self.left}->{self.right}: {self.num_states} states, "
            f"final={sorted(self.final)}, sink={self.sink}>"
        )


def canonical_signature(d: MinimalDfa) -> str:
    payload = repr((d.left, d.right, d.num_states, tuple(sorted(d.final)), d.table))
    return hashlib.sha256(payload.encode()).hexdigest()


# -- nets to automata ----------------------------------------------------------


def net_to_nfa(net: NetWithBoundaries, initial_markings, final_markings) -> BoundedNfa:
    """The step LTS of ``net`` restricted to markings reachable from ``initial_markings``."""
    starts = [net.mask(x) for x in initial_markings]
    if not starts:
        raise ValueError("at least one initial marking is required")
    targets = {net.mask(y) for y in final_markings}
    index: dict = {}
    order: list = []
    for x in starts:
        if x not in index:
            index[x] = len(order)
            order.append(x)
    store = DiagramStore(net.label_bits)
    delta = []
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        by_label: dict = {}
        for lab, y in net.step_edges(x):
            j = index.get(y)
            if j is None:
                j = index[y] = len(order)
                order.append(y)
            by_label.setdefault(lab, set()).add(j)
        delta.append(store.from_map(by_label))
    return BoundedNfa(
        net.left,
        net.right,
        store,
        delta,
        {index[x] for x in starts},
        {index[y] for y in targets if y in index},
        names=[net.unmask(x) for x in order],
    )


# -- products --------------------------------------------------------------------


class _PairIndex:
    def __init__(self):
        self.index: dict = {}
        self.pairs: list = []

    def __call__(self, x, y) -> int:
        key = (x, y)
        i = self.index.get(key)
        if i is None:
            i = self.index[key] = len(self.pairs)
            self.pairs.append(key)
        return i


def nfa_seq(a: BoundedNfa, b: BoundedNfa) -> BoundedNfa:
    """``a ; b``: ``(x,y) -alpha/beta-> (x',y')`` iff some ``gamma`` has
    ``x -alpha/gamma-> x'`` and ``y -gamma/beta-> y'``.  Reachable part only.
    """
    if a.right != b.left:
        raise WidthMismatch(f"cannot compose {a.left}->{a.right} with {b.left}->{b.right}")
    k, l, m = a.left, a.right, b.right
    sa, sb = a.store, b.store
    r = DiagramStore(k + m)
    pair = _PairIndex()
    alpha_memo: dict = {}
    join_memo: dict = {}
    lift_memo: dict = {}

    def lift(y, xs):
        # walk b's right-boundary variables; leaves become products xs x ys
        key = (y, xs)
        res = lift_memo.get(key)
        if res is not None:
            return res
        v = sb.var(y)
        if v == sb.nvars:
            ys = sb.value(y)
            res = r.leaf(pair(p, q) for p in sa.value(xs) for q in ys) if ys else r.empty
        else:
            res = r.node(k + v - l, lift(sb.lo(y), xs), lift(sb.hi(y), xs))
        lift_memo[key] = res
        return res

    def join(x, y):
        # x: node of a at or below its right-boundary variables; y: node of b
        key = (x, y)
        res = join_memo.get(key)
        if res is not None:
            return res
        gx = sa.var(x) - k
        gy = sb.var(y)
        g = min(gx, gy, l)
        if g == l:
            res = lift(y, x) if sa.value(x) else r.empty
        else:
            x0, x1 = sa.cofactors(x, k + g)
            y0, y1 = sb.cofactors(y, g)
            res = r.union(join(x0, y0), join(x1, y1))
        join_memo[key] = res
        return res

    def over_alpha(x, y_root):
        key = (x, y_root)
        res = alpha_memo.get(key)
        if res is not None:
            return res
        v = sa.var(x)
        if v < k:
            res = r.node(v, over_alpha(sa.lo(x), y_root), over_alpha(sa.hi(x), y_root))
        else:
            res = join(x, y_root)
        alpha_memo[key] = res
        return res

    return _explore_product(a, b, pair, r, lambda x, y: over_alpha(a.delta[x], b.delta[y]), k, m)


def nfa_tensor(a: BoundedNfa, b: BoundedNfa) -> BoundedNfa:
    """``a (x) b``: ``(x,y) -alpha gamma/beta delta-> (x',y')`` iff both components move."""
    k, l = a.left, a.right
    p, q = b.left, b.right
    sa, sb = a.store, b.store
    r = DiagramStore(k + p + l + q)
    pair = _PairIndex()
    memo: dict = {}

    def walk(phase, x, y):
        key = (phase, x, y)
        res = memo.get(key)
        if res is not None:
            return res
        if phase == 0:  # a's left ports
            v = sa.var(x)
            if v < k:
                res = r.node(v, walk(0, sa.lo(x), y), walk(0, sa.hi(x), y))
            else:
                res = walk(1, x, y)
        elif phase == 1:  # b's left ports
            v = sb.var(y)
            if v < p:
                res = r.node(k + v, walk(1, x, sb.lo(y)), walk(1, x, sb.hi(y)))
            else:
                res = walk(2, x, y)
        elif phase == 2:  # a's right ports
            v = sa.var(x)
            if v < sa.nvars:
                res = r.node(p + v, walk(2, sa.lo(x), y), walk(2, sa.hi(x), y))
            elif not sa.value(x):
                res = r.empty
            else:
                res = walk(3, x, y)
        else:  # b's right ports
            v = sb.var(y)
            if v < sb.nvars:
                res = r.node(k + l + v, walk(3, x, sb.lo(y)), walk(3, x, sb.hi(y)))
            else:
                ys = sb.value(y)
                res = r.leaf(pair(s, t) for s in sa.value(x) for t in ys) if ys else r.empty
        memo[key] = res
        return res

    return _explore_product(
        a, b, pair, r, lambda x, y: walk(0, a.delta[x], b.delta[y]), k + p, l + q
    )


def _explore_product(a, b, pair, store, root_of, left, right):
    initial = [pair(x, y) for x in sorted(a.initial) for y in sorted(b.initial)]
    delta = []
    i = 0
    while i < len(pair.pairs):
        x, y = pair.pairs[i]
        delta.append(root_of(x, y))
        i += 1
    final = {i for i, (x, y) in enumerate(pair.pairs) if x in a.final and y in b.final}
    return BoundedNfa(left, right, store, delta, initial, final, names=list(pair.pairs))


# -- subset constructions ----------------------------------------------------------


def _subset_construction(a: BoundedNfa, start, closure, complete: bool) -> BoundedNfa:
    work = DiagramStore(a.label_bits)
    imported: dict = {}
    import_memo: dict = {}

    def delta_of(s):
        n = imported.get(s)
        if n is None:
            n = imported[s] = work.transplant(a.store, a.delta[s], memo=import_memo)
        return n

    out = DiagramStore(a.label_bits)
    subsets: list = []
    index: dict = {}

    def state_of(subset):
        i = index.get(subset)
        if i is None:
            i = index[subset] = len(subsets)
            subsets.append(subset)
        return i

    leaf_memo: dict = {}

    def map_leaf(targets):
        res = leaf_memo.get(targets)
        if res is None:
            if targets:
                res = frozenset({state_of(closure(targets))})
            elif complete:
                res = frozenset({state_of(frozenset())})
            else:
                res = frozenset()
            leaf_memo[targets] = res
        return res

    state_of(closure(frozenset(start)))
    transplant_memo: dict = {}
    delta = []
    i = 0
    while i < len(subsets):
        subset = subsets[i]
        i += 1
        d = work.union_all(delta_of(s) for s in sorted(subset))
        delta.append(out.transplant(work, d, map_leaf, memo=transplant_memo))
    final = {i for i, s in enumerate(subsets) if s & a.final}
    return BoundedNfa(a.left, a.right, out, delta, {0}, final, names=subsets)


def epsilon_close(a: BoundedNfa) -> BoundedNfa:
    """Deterministic automaton of epsilon-closed state sets accepting the weak language of ``a``.

    The start state is the closure of the initial states; on each label the
    successor is the closure of the one-step image.  A set is final iff it
    meets a final state (sets are closed, so trailing silent moves are absorbed).
    """
    return _subset_construction(a, a.initial, a.epsilon_closure, complete=False)


def determinise(a: BoundedNfa, complete: bool = False) -> BoundedNfa:
    return _subset_construction(a, a.initial, lambda s: s, complete=complete)


def reverse(a: BoundedNfa) -> BoundedNfa:
    store = DiagramStore(a.label_bits)
    incoming: dict = {}
    for s, root in enumerate(a.delta):
        for assignment, targets in a.store.cubes(root):
            for t in targets:
                incoming.setdefault(t, []).append(store.cube(assignment, (s,)))
    delta = [store.union_all(incoming.get(t, ())) for t in range(a.num_states)]
    return BoundedNfa(a.left, a.right, store, delta, a.final, a.initial)


def empty_dfa(left: int, right: int) -> MinimalDfa:
    store = DiagramStore(left + right)
    return MinimalDfa(left, right, store, [store.leaf({0})], ())


def minimise(a: BoundedNfa) -> MinimalDfa:
    """Brzozowski: reverse, determinise, reverse, determinise; then number canonically."""
    if not a.final or not a.initial:
        return empty_dfa(a.left, a.right)
    d1 = determinise(reverse(a))
    if not d1.final:
        return empty_dfa(a.left, a.right)
    d2 = determinise(reverse(d1), complete=True)
    return _canonical(d2)


def _canonical(d: BoundedNfa) -> MinimalDfa:
    order = [min(d.initial)]
    number = {order[0]: 0}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for value in d.store.leaves_in_order(d.delta[s]):
            (t,) = value
            if t not in number:
                number[t] = len(order)
                order.append(t)
    store = DiagramStore(d.label_bits)
    memo: dict = {}
    delta = [
        store.transplant(d.store, d.delta[s], lambda v: frozenset(number[t] for t in v), memo=memo)
        for s in order
    ]
    final = {number[s] for s in d.final if s in number}
    return MinimalDfa(d.left, d.right, store, delta, final)


def epsmin(a: BoundedNfa) -> MinimalDfa:
    """Epsilon-closure followed by minimisation."""
    return minimise(epsilon_close(a))


def is_accepting_verdict(d: MinimalDfa) -> bool:
    """Verdict of a closed (``0 -> 0``) automaton: does it accept anything at all?"""
    if d.left or d.right:
        raise WidthMismatch(f"verdict needs a 0->0 automaton, got {d.left}->{d.right}")
    return 0 in d.final or d.next_state(0, EPSILON) in d.final
