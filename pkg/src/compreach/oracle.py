"""Explicit-state reachability for closed nets, used as ground truth.

Breadth-first search over markings, firing one transition at a time.  This
reaches the same markings as step firing: every member of a mutually
independent step is enabled on its own and the members touch disjoint places,
so any step can be replayed as a sequence of singleton firings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .net import MarkedNet, NetError, NetWithBoundaries, PlaceTarget, is_mutually_independent

MAX_PLACES = 24


class OracleLimitError(NetError):
    """The net is too large for exhaustive exploration."""


@dataclass
class ReachabilityResult:
    reachable: bool
    explored: int
    witness: list | None = None
    shortest_length: int | None = None
    final_marking: frozenset | None = None


def _target_masks(net: NetWithBoundaries, targets: Mapping) -> tuple:
    yes = no = 0
    for p, want in targets.items():
        want = PlaceTarget.parse(want)
        bit = 1 << net.index[p]
        if want is PlaceTarget.YES:
            yes |= bit
        elif want is PlaceTarget.NO:
            no |= bit
    return yes, no


def oracle_reach(net: NetWithBoundaries, init, targets: Mapping) -> ReachabilityResult:
    """Search from ``init`` (one marking or a collection of markings) for a marking meeting ``targets``.

    The witness is a list of singleton transition-id sets; its length is the
    BFS depth of the first target marking found.
    """
    if net.left or net.right:
        raise NetError(f"the oracle needs a closed net (0->0), got {net.left}->{net.right}")
    if len(net.places) > MAX_PLACES:
        raise OracleLimitError(f"{len(net.places)} places exceeds the oracle's cap of {MAX_PLACES}")
    unknown = set(targets) - set(net.places)
    if unknown:
        raise NetError(f"targets mention unknown places: {sorted(unknown)}")
    yes, no = _target_masks(net, targets)
    starts = _initial_masks(net, init)

    parent: dict = {}
    queue = deque()
    for x in starts:
        if x not in parent:
            parent[x] = None
            queue.append(x)
    while queue:
        x = queue.popleft()
        if x & yes == yes and not x & no:
            witness = _path(net, parent, x)
            return ReachabilityResult(True, len(parent), witness, len(witness), net.unmask(x))
        for i, y in net.single_firings(x):
            if y not in parent:
                parent[y] = (x, i)
                queue.append(y)
    return ReachabilityResult(False, len(parent))


def _initial_masks(net: NetWithBoundaries, init) -> list:
    init = list(init)
    if not init or all(isinstance(p, str) for p in init):
        return [net.mask(init)]
    return sorted(net.mask(x) for x in init)


def _path(net, parent, x) -> list:
    steps = []
    while parent[x] is not None:
        x, i = parent[x]
        steps.append(frozenset({net.transitions[i].id}))
    steps.reverse()
    return steps


def reach_marked(m: MarkedNet) -> ReachabilityResult:
    return oracle_reach(m.net, m.initial, m.targets)


def reachable_markings(net: NetWithBoundaries, init: Iterable, steps: bool = False) -> set:
    """Every marking reachable from ``init``, by singleton firings or (``steps=True``) full steps."""
    seen = set(_initial_masks(net, init))
    stack = list(seen)
    while stack:
        x = stack.pop()
        succ = (y for _, y in net.step_edges(x)) if steps else (y for _, y in net.single_firings(x))
        for y in succ:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return {net.unmask(x) for x in seen}


def replay(net: NetWithBoundaries, marking, witness) -> frozenset:
    """Fire the steps of ``witness`` from ``marking``; raises :class:`NetError` if one is not enabled."""
    x = frozenset(marking)
    for step in witness:
        ts = [net.transition(t) for t in step]
        if not is_mutually_independent(ts):
            raise NetError(f"step {sorted(step)} is not mutually independent")
        pre = frozenset().union(*(t.pre for t in ts))
        post = frozenset().union(*(t.post for t in ts))
        if not pre <= x or post & x:
            raise NetError(f"step {sorted(step)} is not enabled at {sorted(x)}")
        x = (x - pre) | post
    return x

