"""Automatic wiring decompositions of closed nets.

Components are split recursively until they have at most ``leaf_budget``
places.  Each split prefers, in order:

transition cut
    a transition whose removal leaves exactly two place-connected components;
    the component nets are composed with ``;`` and the cut transition is
    shared through one middle port.
place cut
    a place whose removal (together with every arc touching it) leaves exactly
    two components; the result is ``carrier ; (first ⊗ second)`` where the
    carrier is a one-place net holding the removed place.
forced removal
    the place whose extraction gives the narrowest middle boundary, with the
    same ``carrier ; ...`` shape (``⊗`` only when the rest is disconnected).

All three reduce to splitting every transition into per-part pieces glued
through fresh middle ports, which keeps every port attached to one transition.
Leaves keep the original place identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .net import NetWithBoundaries, PlaceTarget, Transition, target_markings
from .wiring import Assignments, Seq, Tensor, Var

DEFAULT_LEAF_BUDGET = 2


@dataclass
class SearchCounter:
    """Nodes visited by connectivity tests, per search kind."""

    transition: int = 0
    place: int = 0
    forced: int = 0


@dataclass
class Step:
    kind: str
    cut: str
    places: int
    widths: tuple
    balance: int
    middle: int
    parts: list

    def to_dict(self):
        return {
            "kind": self.kind,
            "cut": self.cut,
            "places": self.places,
            "widths": list(self.widths),
            "balance": self.balance,
            "middle_width": self.middle,
            "parts": self.parts,
        }


@dataclass
class DecompositionResult:
    expr: object
    assign: Assignments
    report: list = field(default_factory=list)
    counter: SearchCounter = field(default_factory=SearchCounter)

    def explain(self) -> str:
        lines = []
        for i, s in enumerate(self.report):
            k, l = s.widths
            lines.append(
                f"{i:3d} {s.kind:<22} cut={s.cut:<12} places={s.places:<4} {k}->{l} "
                f"balance={s.balance} middle={s.middle} parts={s.parts}"
            )
        return "\n".join(lines)


# -- connectivity ------------------------------------------------------------------


def _components(net: NetWithBoundaries, skip_transition=None, skip_place=None, counter=None, kind=None) -> list:
    """Place sets of the connected components, ignoring one transition or one place and its arcs."""
    touching: dict = {p: [] for p in net.places if p != skip_place}
    live = []
    for t in net.transitions:
        if t.id == skip_transition or (skip_place is not None and skip_place in t.places):
            continue
        live.append(t)
        for p in t.places:
            touching[p].append(len(live) - 1)
    seen_t = [False] * len(live)
    seen_p: set = set()
    out = []
    visits = 0
    for start in touching:
        if start in seen_p:
            continue
        comp, stack = [], [start]
        seen_p.add(start)
        while stack:
            p = stack.pop()
            visits += 1
            comp.append(p)
            for i in touching[p]:
                if seen_t[i]:
                    continue
                seen_t[i] = True
                visits += 1
                for q in live[i].places:
                    if q not in seen_p:
                        seen_p.add(q)
                        stack.append(q)
        out.append(frozenset(comp))
    if counter is not None:
        setattr(counter, kind, getattr(counter, kind) + visits)
    return out


def _order(net, comps):
    """Sort place sets by their earliest place in ``net.places``."""
    idx = net.index
    return sorted(comps, key=lambda c: min(idx[p] for p in c))


def separating_transition(net: NetWithBoundaries, counter: SearchCounter | None = None):
    """``(transition id, balance)`` of the most balanced transition cut, or ``None``.

    Ties go to the narrower middle boundary, then to the earlier transition.
    """
    best = None
    for i, t in enumerate(net.transitions):
        comps = _components(net, skip_transition=t.id, counter=counter, kind="transition")
        if len(comps) != 2:
            continue
        a, b = comps
        balance = abs(len(a) - len(b))
        width = _seq_width(net, a, b)
        key = (balance, width, i)
        if best is None or key < best[0]:
            best = (key, t.id, balance)
    return None if best is None else (best[1], best[2])


def separating_place(net: NetWithBoundaries, counter: SearchCounter | None = None):
    """``(place id, balance)`` of the most balanced place cut, or ``None``."""
    best = None
    for i, p in enumerate(net.places):
        comps = _components(net, skip_place=p, counter=counter, kind="place")
        if len(comps) != 2:
            continue
        a, b = _order(net, comps)
        balance = abs(len(a) - len(b))
        width = _best_fork(net, frozenset({p}), a, b)[0]
        key = (balance, width, i)
        if best is None or key < best[0]:
            best = (key, p, balance)
    return None if best is None else (best[1], best[2])


# -- splitting transitions into parts ----------------------------------------------


def _restrict(places, part):
    return frozenset(p for p in places if p in part)


def _seq_split(net: NetWithBoundaries, a, b) -> tuple:
    """Nets ``A : k -> m`` and ``B : m -> l`` with ``A ; B`` isomorphic to ``net``.

    ``A`` holds the places in ``a`` and every left port, ``B`` the places in
    ``b`` and every right port.
    """
    ta, tb = [], []
    m = 0
    for t in net.transitions:
        pa, qa = _restrict(t.pre, a), _restrict(t.post, a)
        pb, qb = _restrict(t.pre, b), _restrict(t.post, b)
        has_a = bool(pa or qa or t.source)
        has_b = bool(pb or qb or t.target)
        if has_a and has_b:
            ta.append(Transition(t.id, pa, qa, t.source, {m}))
            tb.append(Transition(t.id, pb, qb, {m}, t.target))
            m += 1
        elif has_b:
            tb.append(Transition(t.id, pb, qb, (), t.target))
        else:
            ta.append(Transition(t.id, pa, qa, t.source, ()))
    places_a = tuple(p for p in net.places if p in a)
    places_b = tuple(p for p in net.places if p in b)
    return (
        NetWithBoundaries(net.left, m, places_a, ta),
        NetWithBoundaries(m, net.right, places_b, tb),
    )


def _seq_width(net, a, b) -> int:
    return min(_seq_split(net, a, b)[0].right, _seq_split(net, b, a)[0].right)


def _fork_split(net: NetWithBoundaries, carrier, first, second, l1: int) -> tuple:
    """Nets ``C : k -> m1 + m2``, ``F : m1 -> l1``, ``S : m2 -> l - l1``.

    ``C ; (F ⊗ S)`` is isomorphic to ``net``.  Right ports below ``l1`` go to
    ``F``, the rest to ``S``.
    """
    tc, tf, ts = [], [], []
    m1 = m2 = 0
    pending = []
    for t in net.transitions:
        tgt_f = frozenset(j for j in t.target if j < l1)
        tgt_s = frozenset(j - l1 for j in t.target if j >= l1)
        pc, qc = _restrict(t.pre, carrier), _restrict(t.post, carrier)
        pf, qf = _restrict(t.pre, first), _restrict(t.post, first)
        ps, qs = _restrict(t.pre, second), _restrict(t.post, second)
        has_c = bool(pc or qc or t.source)
        has_f = bool(pf or qf or tgt_f)
        has_s = bool(ps or qs or tgt_s)
        if not (has_c or has_f or has_s):
            has_c = True
        mids_f = mids_s = ()
        if has_f and (has_c or has_s):
            mids_f = (m1,)
            m1 += 1
        if has_s and (has_c or has_f):
            mids_s = (m2,)
            m2 += 1
        if has_f:
            tf.append(Transition(t.id, pf, qf, mids_f, tgt_f))
        if has_s:
            ts.append(Transition(t.id, ps, qs, mids_s, tgt_s))
        if has_c or mids_f or mids_s:
            pending.append((t.id, pc, qc, t.source, mids_f, mids_s))
    for tid, pc, qc, src, mids_f, mids_s in pending:
        tc.append(Transition(tid, pc, qc, src, set(mids_f) | {m1 + j for j in mids_s}))
    return (
        NetWithBoundaries(net.left, m1 + m2, tuple(p for p in net.places if p in carrier), tc),
        NetWithBoundaries(m1, l1, tuple(p for p in net.places if p in first), tf),
        NetWithBoundaries(m2, net.right - l1, tuple(p for p in net.places if p in second), ts),
    )


def _best_fork(net, carrier, a, b) -> tuple:
    """``(middle width, first, second, l1)`` minimising the carrier's right boundary."""
    best = None
    for order, (first, second) in enumerate(((a, b), (b, a))):
        for l1 in range(net.right + 1):
            c, _, _ = _fork_split(net, carrier, first, second, l1)
            key = (c.right, order, l1)
            if best is None or key < best[0]:
                best = (key, first, second, l1)
    (width, _, _), first, second, l1 = best
    return width, first, second, l1


def _group(comps) -> tuple:
    """Two place groups of near-equal size, largest components placed first."""
    g1, g2 = set(), set()
    for c in sorted(comps, key=lambda c: -len(c)):
        (g1 if len(g1) <= len(g2) else g2).update(c)
    return frozenset(g1), frozenset(g2)


# -- the recursive driver ------------------------------------------------------------


class _Builder:
    def __init__(self, initial, targets, leaf_budget, counter):
        self.initial = frozenset(initial)
        self.targets = targets
        self.budget = leaf_budget
        self.counter = counter
        self.assign = Assignments({}, {}, {})
        self.report: list = []

    def leaf(self, net: NetWithBoundaries):
        name = f"n{len(self.assign.nets)}"
        net = NetWithBoundaries(net.left, net.right, net.places, net.transitions, name=name)
        self.assign.nets[name] = net
        self.assign.initial[name] = [self.initial & frozenset(net.places)]
        self.assign.final[name] = target_markings(net.places, self.targets)
        return Var(name)

    def build(self, net: NetWithBoundaries):
        if len(net.places) <= self.budget:
            return self.leaf(net)
        cut = separating_transition(net, self.counter)
        if cut is not None:
            tid, balance = cut
            a, b = _order(net, _components(net, skip_transition=tid))
            left, right = _seq_split(net, a, b)
            flipped = _seq_split(net, b, a)
            if flipped[0].right < left.right:
                left, right = flipped
            self._record("transition-cut", tid, net, balance, left.right, [len(left.places), len(right.places)])
            return Seq(self.build(left), self.build(right))
        cut = separating_place(net, self.counter)
        if cut is not None:
            p, balance = cut
            a, b = _order(net, _components(net, skip_place=p))
            return self._fork(net, "place-cut", p, a, b, balance)
        return self._forced(net)

    def _fork(self, net, kind, p, a, b, balance):
        _, first, second, l1 = _best_fork(net, frozenset({p}), a, b)
        carrier, f, s = _fork_split(net, frozenset({p}), first, second, l1)
        self._record(kind, p, net, balance, carrier.right, [1, len(f.places), len(s.places)])
        return Seq(self.build(carrier), Tensor(self.build(f), self.build(s)))

    def _forced(self, net):
        best = None
        for i, p in enumerate(net.places):
            comps = _components(net, skip_place=p, counter=self.counter, kind="forced")
            if len(comps) >= 2:
                a, b = _group(_order(net, comps))
                width = _best_fork(net, frozenset({p}), a, b)[0]
                balance = abs(len(a) - len(b))
            else:
                rest = comps[0] if comps else frozenset()
                width = _seq_split(net, frozenset({p}), rest)[0].right
                a, b = rest, None
                balance = len(rest) - 1
            key = (width, balance, i)
            if best is None or key < best[0]:
                best = (key, p, a, b, balance)
        _, p, a, b, balance = best
        if b is not None:
            return self._fork(net, "forced-place-removal", p, *_order(net, [a, b]), balance)
        carrier, rest = _seq_split(net, frozenset({p}), a)
        self._record("forced-place-removal", p, net, balance, carrier.right, [1, len(rest.places)])
        return Seq(self.build(carrier), self.build(rest))

    def _record(self, kind, cut, net, balance, middle, parts):
        self.report.append(Step(kind, str(cut), len(net.places), (net.left, net.right), balance, middle, parts))


def decompose(net: NetWithBoundaries, targets, initial=(), leaf_budget: int = DEFAULT_LEAF_BUDGET) -> DecompositionResult:
    """Wiring decomposition of ``net`` with per-leaf initial and final markings.

    ``targets`` maps places to :class:`PlaceTarget` (missing places are
    DontCare); ``initial`` is the single initial marking of the whole net.
    """
    if leaf_budget < 1:
        raise ValueError(f"leaf budget must be at least 1, got {leaf_budget}")
    targets = {p: PlaceTarget.parse(v) for p, v in targets.items()}
    counter = SearchCounter()
    b = _Builder(initial, targets, leaf_budget, counter)
    expr = b.build(net)
    return DecompositionResult(expr, b.assign, b.report, counter)
