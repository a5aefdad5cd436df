"""Reduced ordered decision diagrams whose terminals are sets of states.

An automaton state ``x`` of an automaton ``k -> l`` gives a function
``{0,1}^(k+l) -> 2^States``.  Such functions are stored as ordered diagrams
over ``k + l`` boolean variables (left ports first, then right ports) with
frozensets at the leaves; ``union`` is the pointwise join of the boolean
algebra of subsets.

Nodes are small integers owned by a :class:`DiagramStore`.  Stores are
hash-consed, so within one store equal functions are the same node.  There
is no global unique table: each automaton owns its store.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping


class DiagramStore:
    __slots__ = ("nvars", "_var", "_lo", "_hi", "_val", "_nodes", "_leaves", "_union", "empty")

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._var: list = []
        self._lo: list = []
        self._hi: list = []
        self._val: list = []
        self._nodes: dict = {}
        self._leaves: dict = {}
        self._union: dict = {}
        self.empty = self.leaf(frozenset())

    def __len__(self):
        return len(self._var)

    # -- construction ------------------------------------------------------

    def leaf(self, value: Iterable[int]) -> int:
        value = frozenset(value)
        n = self._leaves.get(value)
        if n is None:
            n = len(self._var)
            self._var.append(self.nvars)
            self._lo.append(-1)
            self._hi.append(-1)
            self._val.append(value)
            self._leaves[value] = n
        return n

    def node(self, var: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (var, lo, hi)
        n = self._nodes.get(key)
        if n is None:
            n = len(self._var)
            self._var.append(var)
            self._lo.append(lo)
            self._hi.append(hi)
            self._val.append(None)
            self._nodes[key] = n
        return n

    def from_map(self, mapping: Mapping[int, Iterable[int]]) -> int:
        """Diagram of the function sending each label (as a bitmask) to its target set."""
        items = [(bits, frozenset(targets)) for bits, targets in mapping.items()]
        return self._build(0, items)

    def _build(self, var, items):
        if not items:
            return self.empty
        if var == self.nvars:
            value = frozenset()
            for _, targets in items:
                value |= targets
            return self.leaf(value)
        lo = [it for it in items if not it[0] >> var & 1]
        hi = [it for it in items if it[0] >> var & 1]
        return self.node(var, self._build(var + 1, lo), self._build(var + 1, hi))

    def cube(self, assignment: Iterable[tuple], value: Iterable[int]) -> int:
        """Diagram equal to ``value`` on the cube fixed by ``(var, bit)`` pairs, empty elsewhere."""
        n = self.leaf(value)
        for var, bit in sorted(assignment, reverse=True):
            n = self.node(var, self.empty, n) if bit else self.node(var, n, self.empty)
        return n

    def transplant(
        self,
        src: "DiagramStore",
        root: int,
        leaf_fn: Callable | None = None,
        var_fn: Callable | None = None,
        memo: dict | None = None,
    ) -> int:
        """Copy ``root`` from ``src`` into this store, mapping leaves and (monotonically) variables."""
        if memo is None:
            memo = {}

        def go(x):
            r = memo.get(x)
            if r is not None:
                return r
            v = src._var[x]
            if v == src.nvars:
                value = src._val[x]
                r = self.leaf(leaf_fn(value) if leaf_fn else value)
            else:
                r = self.node(var_fn(v) if var_fn else v, go(src._lo[x]), go(src._hi[x]))
            memo[x] = r
            return r

        return go(root)

    # -- inspection --------------------------------------------------------

    def is_leaf(self, n: int) -> bool:
        return self._var[n] == self.nvars

    def var(self, n: int) -> int:
        return self._var[n]

    def lo(self, n: int) -> int:
        return self._lo[n]

    def hi(self, n: int) -> int:
        return self._hi[n]

    def value(self, n: int) -> frozenset:
        return self._val[n]

    def cofactors(self, n: int, var: int) -> tuple:
        if self._var[n] == var:
            return self._lo[n], self._hi[n]
        return n, n

    def lookup(self, n: int, bits: int) -> frozenset:
        var = self._var
        while var[n] != self.nvars:
            n = self._hi[n] if bits >> var[n] & 1 else self._lo[n]
        return self._val[n]

    def cubes(self, n: int) -> Iterator[tuple]:
        """Yield ``(assignment, value)`` per path, low branches first.

        ``assignment`` is a tuple of ``(var, bit)``; untested variables are free.
        The first path reaching a given leaf carries its lexicographically least label.
        """
        stack = [(n, ())]
        while stack:
            x, path = stack.pop()
            v = self._var[x]
            if v == self.nvars:
                yield path, self._val[x]
                continue
            stack.append((self._hi[x], path + ((v, 1),)))
            stack.append((self._lo[x], path + ((v, 0),)))

    def leaves_in_order(self, n: int) -> list:
        seen, order = set(), []
        for _, value in self.cubes(n):
            if value not in seen:
                seen.add(value)
                order.append(value)
        return order

    def size(self, n: int) -> int:
        seen, stack = set(), [n]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            if self._var[x] != self.nvars:
                stack.append(self._lo[x])
                stack.append(self._hi[x])
        return len(seen)

    def serialise(self, n: int, leaf_fn: Callable = lambda v: tuple(sorted(v))) -> tuple:
        """Canonical node list (post-order, low-first); equal functions give equal tuples."""
        order: dict = {}
        out: list = []

        def go(x):
            if x in order:
                return order[x]
            v = self._var[x]
            if v == self.nvars:
                entry = ("leaf", leaf_fn(self._val[x]))
            else:
                entry = (v, go(self._lo[x]), go(self._hi[x]))
            order[x] = len(out)
            out.append(entry)
            return order[x]

        go(n)
        return tuple(out)

    # -- algebra -----------------------------------------------------------

    def union(self, a: int, b: int) -> int:
        if a == b or b == self.empty:
            return a
        if a == self.empty:
            return b
        key = (a, b) if a < b else (b, a)
        r = self._union.get(key)
        if r is not None:
            return r
        va, vb = self._var[a], self._var[b]
        if va == vb == self.nvars:
            r = self.leaf(self._val[a] | self._val[b])
        else:
            v = min(va, vb)
            a0, a1 = self.cofactors(a, v)
            b0, b1 = self.cofactors(b, v)
            r = self.node(v, self.union(a0, b0), self.union(a1, b1))
        self._union[key] = r
        return r

    def union_all(self, nodes: Iterable[int]) -> int:
        r = self.empty
        for n in nodes:
            r = self.union(r, n)
        return r
