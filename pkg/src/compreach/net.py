"""1-bounded Petri nets with left and right boundaries.

A net ``N : k -> l`` has places, transitions and two boundaries of ``k`` and
``l`` ports.  Each transition has a pre-set, a post-set and connects to a
(possibly empty) set of ports on either boundary; at most one transition may
be attached to any given port.  Ordinary nets are the case ``k = l = 0``.

Markings are frozensets of place identifiers.  Internally places are numbered
by their position in ``places`` and markings are handled as integer bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import chain
from typing import Iterable, Iterator, Mapping

Marking = frozenset

LEFT_TAG = "L."
RIGHT_TAG = "R."


class NetError(ValueError):
    """Raised on malformed nets or incompatible compositions."""


class WidthMismatch(NetError):
    pass


@dataclass(frozen=True)
class Transition:
    id: str
    pre: frozenset = frozenset()
    post: frozenset = frozenset()
    source: frozenset = frozenset()
    target: frozenset = frozenset()

    def __post_init__(self):
        for name in ("pre", "post", "source", "target"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def places(self) -> frozenset:
        return self.pre | self.post


@dataclass(frozen=True)
class StepLabel:
    """A boundary label ``alpha/beta``; bit ``i`` of a side is ``'1'`` iff port ``i`` fired."""

    left: str
    right: str

    def __str__(self):
        return f"{self.left}/{self.right}"

    @classmethod
    def epsilon(cls, k: int, l: int) -> "StepLabel":
        return cls("0" * k, "0" * l)

    @classmethod
    def from_ports(cls, k: int, l: int, source: Iterable[int], target: Iterable[int]) -> "StepLabel":
        src, tgt = set(source), set(target)
        return cls(
            "".join("1" if i in src else "0" for i in range(k)),
            "".join("1" if j in tgt else "0" for j in range(l)),
        )

    @classmethod
    def parse(cls, text: str) -> "StepLabel":
        left, _, right = text.partition("/")
        return cls(left, right)

    @property
    def is_epsilon(self) -> bool:
        return "1" not in self.left and "1" not in self.right

    def to_bits(self) -> int:
        k = len(self.left)
        bits = 0
        for i, c in enumerate(self.left):
            if c == "1":
                bits |= 1 << i
        for j, c in enumerate(self.right):
            if c == "1":
                bits |= 1 << (k + j)
        return bits

    @classmethod
    def from_bits(cls, bits: int, k: int, l: int) -> "StepLabel":
        return cls(
            "".join("1" if bits >> i & 1 else "0" for i in range(k)),
            "".join("1" if bits >> (k + j) & 1 else "0" for j in range(l)),
        )


@dataclass(frozen=True)
class Synchronisation:
    """A pair of transition-id sets of ``N`` and ``M`` agreeing on the shared boundary."""

    u: frozenset
    v: frozenset

    def __post_init__(self):
        object.__setattr__(self, "u", frozenset(self.u))
        object.__setattr__(self, "v", frozenset(self.v))

    def __le__(self, other: "Synchronisation") -> bool:
        return self.u <= other.u and self.v <= other.v

    @property
    def trivial(self) -> bool:
        return not self.u and not self.v


@dataclass(frozen=True)
class NetWithBoundaries:
    left: int
    right: int
    places: tuple = ()
    transitions: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))

    # -- compiled form -------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.places)}

    @cached_property
    def _compiled(self):
        idx = self.index
        k = self.left
        pre, post, touch, label = [], [], [], []
        for t in self.transitions:
            pm = _mask(idx, t.pre)
            qm = _mask(idx, t.post)
            pre.append(pm)
            post.append(qm)
            touch.append(pm | qm)
            lab = 0
            for i in t.source:
                lab |= 1 << i
            for j in t.target:
                lab |= 1 << (k + j)
            label.append(lab)
        return tuple(pre), tuple(post), tuple(touch), tuple(label)

    @property
    def label_bits(self) -> int:
        return self.left + self.right

    def mask(self, marking: Iterable[str]) -> int:
        try:
            return _mask(self.index, marking)
        except KeyError as exc:
            raise NetError(f"marking mentions unknown place {exc.args[0]!r}") from None

    def unmask(self, bits: int) -> frozenset:
        return frozenset(p for i, p in enumerate(self.places) if bits >> i & 1)

    def transition(self, tid: str) -> Transition:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def all_markings(self) -> Iterator[frozenset]:
        for bits in range(1 << len(self.places)):
            yield self.unmask(bits)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return (
            f"<NetWithBoundaries{label} {self.left}->{self.right}: "
            f"{len(self.places)} places, {len(self.transitions)} transitions>"
        )

    # -- step semantics on bitsets ---------------------------------------

    def step_edges(self, x: int) -> set:
        """All ``(label_bits, successor_bits)`` pairs of mutually independent enabled steps at ``x``."""
        pre, post, touch, label = self._compiled
        enabled = [
            i for i in range(len(pre))
            if pre[i] & x == pre[i] and not post[i] & x
        ]
        out = {(0, x)}
        # backtracking over MI subsets; stack holds (next index, used places, label, removed, added)
        stack = [(0, 0, 0, 0, 0)]
        while stack:
            start, used, lab, removed, added = stack.pop()
            for j in range(start, len(enabled)):
                t = enabled[j]
                if touch[t] & used:
                    continue
                state = (j + 1, used | touch[t], lab | label[t], removed | pre[t], added | post[t])
                out.add((state[2], (x & ~state[3]) | state[4]))
                stack.append(state)
        return out

    def single_firings(self, x: int) -> Iterator[tuple]:
        """Yield ``(transition_index, successor_bits)`` for each individually enabled transition."""
        pre, post, _, _ = self._compiled
        for i in range(len(pre)):
            if pre[i] & x == pre[i] and not post[i] & x:
                yield i, (x & ~pre[i]) | post[i]


def _mask(index: dict, places: Iterable[str]) -> int:
    bits = 0
    for p in places:
        bits |= 1 << index[p]
    return bits


def validate_net(net: NetWithBoundaries) -> list:
    """Return a list of invariant violations; an empty list means the net is valid."""
    problems = []
    places = set(net.places)
    if len(places) != len(net.places):
        problems.append("duplicate place identifiers")
    if len({t.id for t in net.transitions}) != len(net.transitions):
        problems.append("duplicate transition identifiers")
    if net.left < 0 or net.right < 0:
        problems.append("negative boundary width")
    left_owner, right_owner = {}, {}
    for t in net.transitions:
        for p in sorted(t.places - places):
            problems.append(f"transition {t.id} refers to unknown place {p}")
        for side, ports, width, owner in (
            ("left", t.source, net.left, left_owner),
            ("right", t.target, net.right, right_owner),
        ):
            for port in sorted(ports):
                if not 0 <= port < width:
                    problems.append(f"transition {t.id}: {side} port {port} out of range 0..{width - 1}")
                elif port in owner:
                    problems.append(
                        f"{side} port {port} multiply connected ({owner[port]}, {t.id})"
                    )
                else:
                    owner[port] = t.id
    return problems


def ensure_valid(net: NetWithBoundaries) -> NetWithBoundaries:
    problems = validate_net(net)
    if problems:
        raise NetError("; ".join(problems))
    return net


def step_successors(net: NetWithBoundaries, marking: Iterable[str]) -> set:
    """Step relation at ``marking``: a set of ``(StepLabel, Marking)`` pairs.

    Every mutually independent set ``U`` of transitions with ``pre(U)`` marked
    and ``post(U)`` unmarked contributes one pair, including ``U = {}``, so the
    epsilon self-loop is always present.
    """
    x = net.mask(marking)
    return {
        (StepLabel.from_bits(lab, net.left, net.right), net.unmask(y))
        for lab, y in net.step_edges(x)
    }


def is_mutually_independent(transitions: Iterable[Transition]) -> bool:
    seen = set()
    for t in transitions:
        if t.places & seen:
            return False
        seen |= t.places
    return True


# -- composition -----------------------------------------------------------


def minimal_synchronisations(n: NetWithBoundaries, m: NetWithBoundaries) -> list:
    """Minimal non-trivial synchronisations of ``n ; m``, in a deterministic order.

    Each boundary-connected transition forces, through port injectivity, the
    unique transitions on the other side of its ports; the forced closure is
    the only minimal synchronisation containing it, and is dropped when a
    demanded port is unconnected or a side fails mutual independence.
    """
    if n.right != m.left:
        raise WidthMismatch(f"cannot compose {n.left}->{n.right} with {m.left}->{m.right}")
    n_by_port = {p: i for i, t in enumerate(n.transitions) for p in t.target}
    m_by_port = {p: j for j, t in enumerate(m.transitions) for p in t.source}
    seen_n, seen_m = set(), set()
    result = []

    def close(us, vs):
        ok = True
        todo_u, todo_v = list(us), list(vs)
        while todo_u or todo_v:
            while todo_u:
                for p in n.transitions[todo_u.pop()].target:
                    j = m_by_port.get(p)
                    if j is None:
                        ok = False
                    elif j not in vs:
                        vs.add(j)
                        todo_v.append(j)
            while todo_v:
                for p in m.transitions[todo_v.pop()].source:
                    i = n_by_port.get(p)
                    if i is None:
                        ok = False
                    elif i not in us:
                        us.add(i)
                        todo_u.append(i)
        return ok

    starts = [({i}, set()) for i in range(len(n.transitions))]
    starts += [(set(), {j}) for j in range(len(m.transitions))]
    for us, vs in starts:
        if us & seen_n or vs & seen_m:
            continue
        ok = close(us, vs)
        seen_n |= us
        seen_m |= vs
        tu = [n.transitions[i] for i in sorted(us)]
        tv = [m.transitions[j] for j in sorted(vs)]
        if ok and is_mutually_independent(tu) and is_mutually_independent(tv):
            result.append(Synchronisation({t.id for t in tu}, {t.id for t in tv}))
    return result


def _sync_id(n: NetWithBoundaries, m: NetWithBoundaries, s: Synchronisation) -> str:
    u = "+".join(t.id for t in n.transitions if t.id in s.u)
    v = "+".join(t.id for t in m.transitions if t.id in s.v)
    return f"{u}|{v}"


def compose_seq(n: NetWithBoundaries, m: NetWithBoundaries) -> NetWithBoundaries:
    """``n ; m``: places of both (tagged ``L.``/``R.``), one transition per minimal synchronisation."""
    syncs = minimal_synchronisations(n, m)
    nt = {t.id: t for t in n.transitions}
    mt = {t.id: t for t in m.transitions}
    transitions = []
    used: set = set()
    for s in syncs:
        us = [nt[i] for i in s.u]
        vs = [mt[j] for j in s.v]
        tid = base = _sync_id(n, m, s)
        suffix = 1
        while tid in used:
            suffix += 1
            tid = f"{base}#{suffix}"
        used.add(tid)
        transitions.append(
            Transition(
                tid,
                pre=_tagged(us, vs, "pre"),
                post=_tagged(us, vs, "post"),
                source=frozenset(chain.from_iterable(t.source for t in us)),
                target=frozenset(chain.from_iterable(t.target for t in vs)),
            )
        )
    places = [LEFT_TAG + p for p in n.places] + [RIGHT_TAG + q for q in m.places]
    return NetWithBoundaries(n.left, m.right, places, transitions)


def _tagged(us, vs, attr):
    left = {LEFT_TAG + p for t in us for p in getattr(t, attr)}
    right = {RIGHT_TAG + p for t in vs for p in getattr(t, attr)}
    return frozenset(left | right)


def compose_tensor(n: NetWithBoundaries, m: NetWithBoundaries) -> NetWithBoundaries:
    """``n (x) m``: disjoint union, ``m``'s ports shifted past ``n``'s on both sides."""
    transitions = [
        Transition(
            LEFT_TAG + t.id,
            {LEFT_TAG + p for p in t.pre},
            {LEFT_TAG + p for p in t.post},
            t.source,
            t.target,
        )
        for t in n.transitions
    ]
    transitions += [
        Transition(
            RIGHT_TAG + t.id,
            {RIGHT_TAG + p for p in t.pre},
            {RIGHT_TAG + p for p in t.post},
            {n.left + i for i in t.source},
            {n.right + j for j in t.target},
        )
        for t in m.transitions
    ]
    places = [LEFT_TAG + p for p in n.places] + [RIGHT_TAG + q for q in m.places]
    return NetWithBoundaries(n.left + m.left, n.right + m.right, places, transitions)


# -- markings under composition ------------------------------------------------


def join_markings(x: Iterable[str], y: Iterable[str]) -> frozenset:
    """``X + Y`` as a marking of a composite with tagged place identifiers."""
    return frozenset(LEFT_TAG + p for p in x) | frozenset(RIGHT_TAG + q for q in y)


def split_marking(z: Iterable[str]) -> tuple:
    x, y = set(), set()
    for p in z:
        if p.startswith(LEFT_TAG):
            x.add(p[len(LEFT_TAG):])
        elif p.startswith(RIGHT_TAG):
            y.add(p[len(RIGHT_TAG):])
        else:
            raise NetError(f"place {p!r} carries no composition tag")
    return frozenset(x), frozenset(y)


def strip_tags(pid: str) -> str:
    while pid.startswith(LEFT_TAG) or pid.startswith(RIGHT_TAG):
        pid = pid[2:]
    return pid


# -- structural comparison -------------------------------------------------------


def canonical_form(net: NetWithBoundaries, rename=None) -> tuple:
    """Identifier-insensitive summary for transitions; places compared by (renamed) id."""
    rename = rename or (lambda p: p)
    transitions = sorted(
        (
            tuple(sorted(rename(p) for p in t.pre)),
            tuple(sorted(rename(p) for p in t.post)),
            tuple(sorted(t.source)),
            tuple(sorted(t.target)),
        )
        for t in net.transitions
    )
    return net.left, net.right, tuple(sorted(rename(p) for p in net.places)), tuple(transitions)


def positional_key(net: NetWithBoundaries) -> tuple:
    """Structure with places and transitions replaced by their positions."""
    idx = net.index
    return (
        net.left,
        net.right,
        len(net.places),
        tuple(
            (
                tuple(sorted(idx[p] for p in t.pre)),
                tuple(sorted(idx[p] for p in t.post)),
                tuple(sorted(t.source)),
                tuple(sorted(t.target)),
            )
            for t in net.transitions
        ),
    )


def find_isomorphism(a: NetWithBoundaries, b: NetWithBoundaries):
    """A place bijection ``a -> b`` witnessing a boundary-preserving isomorphism, or ``None``."""
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    if (a.left, a.right, len(a.places), len(a.transitions)) != (
        b.left, b.right, len(b.places), len(b.transitions)
    ):
        return None

    def graph(net):
        g = nx.DiGraph()
        for p in net.places:
            g.add_node(("p", p), kind="place")
        for i in range(net.left):
            g.add_node(("l", i), kind=("left", i))
        for j in range(net.right):
            g.add_node(("r", j), kind=("right", j))
        for t in net.transitions:
            node = ("t", t.id)
            g.add_node(node, kind="transition")
            for p in t.pre:
                g.add_edge(("p", p), node)
            for p in t.post:
                g.add_edge(node, ("p", p))
            for i in t.source:
                g.add_edge(("l", i), node)
            for j in t.target:
                g.add_edge(node, ("r", j))
        return g

    matcher = DiGraphMatcher(graph(a), graph(b), node_match=lambda x, y: x["kind"] == y["kind"])
    if not matcher.is_isomorphic():
        return None
    return {u[1]: v[1] for u, v in matcher.mapping.items() if u[0] == "p"}


def isomorphic(a: NetWithBoundaries, b: NetWithBoundaries) -> bool:
    return find_isomorphism(a, b) is not None


# -- marked nets and per-place targets -------------------------------------------


class PlaceTarget(str, Enum):
    """What a target configuration asks of a single place."""

    YES = "yes"
    NO = "no"
    DONTCARE = "dontcare"

    @classmethod
    def parse(cls, value) -> "PlaceTarget":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("_", "").replace("-", ""))
        except ValueError:
            raise NetError(f"unknown place target {value!r} (expected yes, no or dontcare)") from None


def satisfies(marking: Iterable[str], targets: Mapping) -> bool:
    marking = frozenset(marking)
    for p, want in targets.items():
        want = PlaceTarget.parse(want)
        if want is PlaceTarget.YES and p not in marking:
            return False
        if want is PlaceTarget.NO and p in marking:
            return False
    return True


def target_markings(places: Iterable[str], targets: Mapping) -> list:
    """All markings of ``places`` consistent with ``targets``; unlisted places count as DontCare."""
    out = [frozenset()]
    for p in places:
        want = PlaceTarget.parse(targets.get(p, PlaceTarget.DONTCARE))
        if want is PlaceTarget.YES:
            out = [x | {p} for x in out]
        elif want is PlaceTarget.DONTCARE:
            out = out + [x | {p} for x in out]
    return out


@dataclass(frozen=True)
class MarkedNet:
    """A closed net with its initial marking and per-place targets."""

    net: NetWithBoundaries
    initial: frozenset
    targets: Mapping

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(
            self, "targets", {p: PlaceTarget.parse(self.targets.get(p, "dontcare")) for p in self.net.places}
        )
        unknown = (self.initial | set(self.targets)) - set(self.net.places)
        if unknown:
            raise NetError(f"marking or targets mention unknown places: {sorted(unknown)}")

    def is_target(self, marking) -> bool:
        return satisfies(marking, self.targets)
