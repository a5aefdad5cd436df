"""Wiring expressions and their memoised evaluation to minimal DFAs.

A wiring expression is a tree over ``x | t ; t | t (x) t``.  With nets,
initial markings and final markings assigned to its variables it denotes a
composite net, a set of composite markings, and (through :func:`evaluate`) the
minimal DFA of the composite's boundary behaviour, computed bottom-up without
ever building the composite net.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .automata import (
    MinimalDfa,
    epsmin,
    is_accepting_verdict,
    net_to_nfa,
    nfa_seq,
    nfa_tensor,
)
from .net import (
    NetWithBoundaries,
    compose_seq,
    compose_tensor,
    join_markings,
    positional_key,
)


class WiringError(ValueError):
    """Unassigned variable or incompatible boundaries."""


class WidthGuardError(RuntimeError):
    """A node's alphabet is wider than the configured cap."""


@dataclass(frozen=True, eq=False)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class Seq:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} ; {self.right})"


@dataclass(frozen=True, eq=False)
class Tensor:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} x {self.right})"


def seq_right(terms):
    """``t1 ; (t2 ; (... ; tn))``."""
    terms = list(terms)
    expr = terms[-1]
    for t in reversed(terms[:-1]):
        expr = Seq(t, expr)
    return expr


def seq_left(terms):
    """``((t1 ; t2) ; ...) ; tn``."""
    terms = list(terms)
    expr = terms[0]
    for t in terms[1:]:
        expr = Seq(expr, t)
    return expr


def seq_balanced(terms):
    terms = list(terms)
    if len(terms) == 1:
        return terms[0]
    mid = len(terms) // 2
    return Seq(seq_balanced(terms[:mid]), seq_balanced(terms[mid:]))


def postorder(t) -> Iterator:
    """Children before parents, without recursion (expressions may be thousands deep)."""
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Var):
            yield node
        elif expanded:
            yield node
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))


def variables(t) -> list:
    seen, out = set(), []
    for node in postorder(t):
        if isinstance(node, Var) and node.name not in seen:
            seen.add(node.name)
            out.append(node.name)
    return out


@dataclass
class Assignments:
    nets: dict
    initial: dict = field(default_factory=dict)
    final: dict = field(default_factory=dict)

    def net(self, name) -> NetWithBoundaries:
        try:
            return self.nets[name]
        except KeyError:
            raise WiringError(f"variable {name!r} is not assigned a net") from None


def widths(t, a: Assignments) -> dict:
    """Boundary widths of every node, keyed by ``id(node)``; checks ``;`` compatibility."""
    out: dict = {}
    for node in postorder(t):
        if isinstance(node, Var):
            n = a.net(node.name)
            out[id(node)] = (n.left, n.right)
            continue
        (k, l), (p, q) = out[id(node.left)], out[id(node.right)]
        if isinstance(node, Seq):
            if l != p:
                raise WiringError(f"width mismatch at ';': {k}->{l} then {p}->{q} in {_short(node)}")
            out[id(node)] = (k, q)
        else:
            out[id(node)] = (k + p, l + q)
    return out


def _short(node, limit=80):
    text = str(node) if _depth_at_most(node, 30) else f"<{type(node).__name__} node>"
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _depth_at_most(node, bound):
    stack = [(node, 0)]
    while stack:
        n, d = stack.pop()
        if d > bound:
            return False
        if not isinstance(n, Var):
            stack.append((n.left, d + 1))
            stack.append((n.right, d + 1))
    return True


def check_width_guard(t, a: Assignments, max_width: int, all_widths: dict | None = None) -> None:
    """Raise :class:`WidthGuardError` if any node reads more than ``max_width`` label bits."""
    all_widths = widths(t, a) if all_widths is None else all_widths
    for node in postorder(t):
        k, l = all_widths[id(node)]
        if k + l > max_width:
            what = f"leaf {node.name}" if isinstance(node, Var) else f"{type(node).__name__.lower()} node"
            raise WidthGuardError(
                f"{what} has boundary {k}->{l} ({k + l} label bits), above the cap of {max_width}"
            )


def net_semantics(t, a: Assignments) -> NetWithBoundaries:
    widths(t, a)
    out: dict = {}
    for node in postorder(t):
        if isinstance(node, Var):
            out[id(node)] = a.net(node.name)
        elif isinstance(node, Seq):
            out[id(node)] = compose_seq(out[id(node.left)], out[id(node.right)])
        else:
            out[id(node)] = compose_tensor(out[id(node.left)], out[id(node.right)])
    return out[id(t)]


def combined_markings(t, markings: dict) -> set:
    """Combine per-variable marking sets into markings of the composite (tagged place ids)."""
    out: dict = {}
    for node in postorder(t):
        if isinstance(node, Var):
            try:
                out[id(node)] = {frozenset(x) for x in markings[node.name]}
            except KeyError:
                raise WiringError(f"no markings given for variable {node.name!r}") from None
        else:
            left, right = out[id(node.left)], out[id(node.right)]
            out[id(node)] = {join_markings(x, y) for x in left for y in right}
    return out[id(t)]


# -- evaluation ------------------------------------------------------------------


class MemoTable:
    """Cache from evaluation keys to minimal DFAs.

    Leaf keys are positional forms of (net, initial, final); internal keys are
    ``(operator, left signature, right signature)``.
    """

    def __init__(self):
        self._table: dict = {}
        self.hits = 0
        self.misses = 0

    def get(self, key):
        d = self._table.get(key)
        if d is None:
            self.misses += 1
        else:
            self.hits += 1
        return d

    def put(self, key, d: MinimalDfa):
        self._table[key] = d

    def __len__(self):
        return len(self._table)


class _NoMemo(MemoTable):
    def get(self, key):
        self.misses += 1
        return None

    def put(self, key, d):
        pass


@dataclass
class NodeStat:
    index: int
    op: str
    name: str
    widths: tuple
    hit: bool
    nfa_states: int = 0
    dfa_states: int = 0
    seconds: float = 0.0

    def to_dict(self):
        return {
            "index": self.index,
            "op": self.op,
            "name": self.name,
            "widths": list(self.widths),
            "memo_hit": self.hit,
            "nfa_states": self.nfa_states,
            "dfa_states": self.dfa_states,
            "seconds": round(self.seconds, 6),
        }


@dataclass
class EvaluationStats:
    nodes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def hits(self) -> int:
        return sum(1 for n in self.nodes if n.hit)

    @property
    def misses(self) -> int:
        return sum(1 for n in self.nodes if not n.hit)

    def misses_by_op(self) -> Counter:
        return Counter(n.op for n in self.nodes if not n.hit)

    @property
    def minimisations(self) -> int:
        return self.misses

    def to_dict(self):
        by_op = self.misses_by_op()
        return {
            "memo_hits": self.hits,
            "memo_misses": self.misses,
            "misses_by_op": {op: by_op.get(op, 0) for op in ("leaf", "seq", "tensor")},
            "largest_nfa": max((n.nfa_states for n in self.nodes), default=0),
            "largest_dfa": max((n.dfa_states for n in self.nodes), default=0),
            "seconds": round(self.seconds, 6),
            "nodes": [n.to_dict() for n in self.nodes],
        }


def leaf_key(net: NetWithBoundaries, initial, final) -> tuple:
    return (
        "leaf",
        positional_key(net),
        frozenset(net.mask(x) for x in initial),
        frozenset(net.mask(y) for y in final),
    )


def evaluate(t, a: Assignments, memo: MemoTable | None = None, stats: EvaluationStats | None = None,
             max_width: int | None = None, keep: list | None = None) -> MinimalDfa:
    """Bottom-up minimal DFA of ``t``, consulting ``memo`` before every minimisation.

    With ``keep`` given, ``(NodeStat, MinimalDfa)`` is appended for every node.
    """
    all_widths = widths(t, a)
    if max_width is not None:
        check_width_guard(t, a, max_width, all_widths)
    memo = MemoTable() if memo is None else memo
    stats = EvaluationStats() if stats is None else stats
    start = time.perf_counter()
    results: dict = {}
    for i, node in enumerate(postorder(t)):
        t0 = time.perf_counter()
        if isinstance(node, Var):
            net = a.net(node.name)
            init = a.initial.get(node.name)
            if not init:
                raise WiringError(f"variable {node.name!r} needs a non-empty set of initial markings")
            final = a.final.get(node.name, ())
            key = leaf_key(net, init, final)
            op, name = "leaf", node.name
        else:
            left, right = results[id(node.left)], results[id(node.right)]
            op = "seq" if isinstance(node, Seq) else "tensor"
            key = (op, left.signature, right.signature)
            name = ""
        stat = NodeStat(i, op, name, all_widths[id(node)], hit=True)
        d = memo.get(key)
        if d is None:
            stat.hit = False
            if op == "leaf":
                nfa = net_to_nfa(net, init, final)
            elif op == "seq":
                nfa = nfa_seq(left.to_nfa(), right.to_nfa())
            else:
                nfa = nfa_tensor(left.to_nfa(), right.to_nfa())
            d = epsmin(nfa)
            memo.put(key, d)
            stat.nfa_states = nfa.num_states
        stat.dfa_states = d.num_states
        stat.seconds = time.perf_counter() - t0
        stats.nodes.append(stat)
        if keep is not None:
            keep.append((stat, d))
        results[id(node)] = d
    stats.seconds += time.perf_counter() - start
    return results[id(t)]


@dataclass
class ReachabilityReport:
    reachable: bool
    stats: EvaluationStats
    dfa: MinimalDfa


def check_reachability(t, a: Assignments, use_memo: bool = True, max_width: int | None = None,
                       keep: list | None = None) -> ReachabilityReport:
    k, l = widths(t, a)[id(t)]
    if k or l:
        raise WiringError(f"reachability needs a closed net (0->0), got {k}->{l}")
    stats = EvaluationStats()
    d = evaluate(t, a, MemoTable() if use_memo else _NoMemo(), stats, max_width=max_width, keep=keep)
    return ReachabilityReport(is_accepting_verdict(d), stats, d)
