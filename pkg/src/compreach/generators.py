"""Benchmark net families and their hand-written wiring decompositions.

Buffer
    A cell ``b1 : 1 -> 1`` holds one token in ``top`` or ``bot``.  Its
    transition ``l`` (attached to the left port) moves the token ``bot -> top``
    and ``r`` (attached to the right port) moves it ``top -> bot``.  The chain
    ``top ; b1 ; ... ; b1 ; bot`` is closed by ``top : 0 -> 1`` and
    ``bot : 1 -> 0``, both single place-less transitions.  Every cell starts in
    ``top`` and the target is every cell in ``bot``.

Tree
    A binary tree of places of depth ``n``; a source transition marks the
    root and every internal place forks its token to both children.  Target:
    every place marked.

Philosophers
    ``ph : 3 -> 3`` and ``fk : 3 -> 3`` talk over three wires per side: wire 0
    carries the first fork taken, wire 1 the second, wire 2 the joint release.
    A philosopher may pick up either fork first.  ``d3 : 0 -> 6``, ``i3 : 3 -> 3``
    and ``e3 : 6 -> 0`` close the row into a ring.  The target is the deadlock
    where every fork is held and no philosopher eats.

Clique
    ``n`` places with a transition between every ordered pair.
"""

from __future__ import annotations

from .net import MarkedNet, NetWithBoundaries, PlaceTarget, Transition, target_markings
from .wiring import Assignments, Seq, Tensor, Var, seq_balanced, seq_left, seq_right

BUFFER_SHAPES = ("flat", "left", "right", "balanced")
FAMILIES = ("buffer", "tree", "philosophers", "clique")

YES, NO, DC = PlaceTarget.YES, PlaceTarget.NO, PlaceTarget.DONTCARE


def _check_size(n, least=1):
    if not isinstance(n, int) or n < least:
        raise ValueError(f"size must be an integer >= {least}, got {n!r}")


# -- buffer ------------------------------------------------------------------------


def buffer_top() -> NetWithBoundaries:
    return NetWithBoundaries(0, 1, (), (Transition("t", (), (), (), {0}),), name="top")


def buffer_bot() -> NetWithBoundaries:
    return NetWithBoundaries(1, 0, (), (Transition("t", (), (), {0}, ()),), name="bot")


def buffer_cells(n: int) -> NetWithBoundaries:
    """The flat chain ``b_n : 1 -> 1`` of ``n`` cells (``b_1`` is the basic cell)."""
    _check_size(n)
    if n == 1:
        places = ("top", "bot")
        name = "b1"
    else:
        places = tuple(p for i in range(1, n + 1) for p in (f"top{i}", f"bot{i}"))
        name = f"b{n}"
    top = (lambda i: "top") if n == 1 else (lambda i: f"top{i}")
    bot = (lambda i: "bot") if n == 1 else (lambda i: f"bot{i}")
    transitions = [Transition("l", {bot(1)}, {top(1)}, {0}, ())]
    for i in range(1, n):
        transitions.append(Transition(f"t{i}", {top(i), bot(i + 1)}, {bot(i), top(i + 1)}))
    transitions.append(Transition("r", {top(n)}, {bot(n)}, (), {0}))
    return NetWithBoundaries(1, 1, places, transitions, name=name)


def buffer_cell_markings(n: int) -> tuple:
    """``(initial, final)`` of ``b_n``: all cells up, all cells down."""
    net = buffer_cells(n)
    initial = frozenset(p for p in net.places if p.startswith("top"))
    final = frozenset(p for p in net.places if p.startswith("bot"))
    return initial, final


def buffer_flat(n: int) -> MarkedNet:
    """``B_n`` as an ordinary net: places ``top1 bot1 ... topn botn``, transitions ``t0 .. tn``."""
    _check_size(n)
    places = tuple(p for i in range(1, n + 1) for p in (f"top{i}", f"bot{i}"))
    transitions = [Transition("t0", {"bot1"}, {"top1"})]
    for i in range(1, n):
        transitions.append(Transition(f"t{i}", {f"top{i}", f"bot{i + 1}"}, {f"bot{i}", f"top{i + 1}"}))
    transitions.append(Transition(f"t{n}", {f"top{n}"}, {f"bot{n}"}))
    net = NetWithBoundaries(0, 0, places, transitions, name=f"B{n}")
    initial = {p for p in places if p.startswith("top")}
    targets = {p: (YES if p.startswith("bot") else NO) for p in places}
    return MarkedNet(net, initial, targets)


def buffer_assignments() -> Assignments:
    init, final = buffer_cell_markings(1)
    return Assignments(
        nets={"top": buffer_top(), "b1": buffer_cells(1), "bot": buffer_bot()},
        initial={"top": [frozenset()], "b1": [init], "bot": [frozenset()]},
        final={"top": [frozenset()], "b1": [final], "bot": [frozenset()]},
    )


def buffer_expression(n: int, shape: str):
    _check_size(n)
    terms = [Var("top")] + [Var("b1") for _ in range(n)] + [Var("bot")]
    if shape == "right":
        return seq_right(terms)
    if shape == "left":
        return seq_left(terms)
    if shape == "balanced":
        return seq_balanced(terms)
    raise ValueError(f"unknown buffer shape {shape!r}; expected one of {', '.join(BUFFER_SHAPES)}")


def gen_buffer(n: int, shape: str = "flat"):
    """``B_n`` flat (a :class:`MarkedNet`) or decomposed as ``(expr, assignments)``."""
    if shape == "flat":
        return buffer_flat(n)
    return buffer_expression(n, shape), buffer_assignments()


# -- tree --------------------------------------------------------------------------


def tree_flat(n: int) -> MarkedNet:
    """Depth-``n`` binary tree; places ``p1 .. p(2^n - 1)`` in heap order."""
    _check_size(n)
    size = (1 << n) - 1
    places = tuple(f"p{i}" for i in range(1, size + 1))
    transitions = [Transition("feed", (), {"p1"})]
    for i in range(1, size + 1):
        if 2 * i <= size:
            transitions.append(Transition(f"f{i}", {f"p{i}"}, {f"p{2 * i}", f"p{2 * i + 1}"}))
    net = NetWithBoundaries(0, 0, places, transitions, name=f"T{n}")
    return MarkedNet(net, (), {p: YES for p in places})


def _tree_component(kind: str) -> NetWithBoundaries:
    fed = kind != "root"
    leaf = kind == "leaf"
    ts = [Transition("in", (), {"c"}, {0} if fed else ())]
    if not leaf:
        ts.append(Transition("fork", {"c"}, (), (), {0, 1}))
    return NetWithBoundaries(1 if fed else 0, 0 if leaf else 2, ("c",), ts, name=kind)


def tree_assignments() -> Assignments:
    nets = {"root": _tree_component("root"), "node": _tree_component("node"), "leaf": _tree_component("leaf")}
    return Assignments(
        nets=nets,
        initial={v: [frozenset()] for v in nets},
        final={v: [frozenset({"c"})] for v in nets},
    )


def tree_expression(n: int):
    """``root ; (sub ⊗ sub)`` where each subtree is ``node ; (sub ⊗ sub)`` down to ``leaf``."""
    _check_size(n)

    def subtree(depth):
        if depth == 1:
            return Var("leaf")
        return Seq(Var("node"), Tensor(subtree(depth - 1), subtree(depth - 1)))

    if n == 1:
        return Var("single")
    return Seq(Var("root"), Tensor(subtree(n - 1), subtree(n - 1)))


def gen_tree(n: int):
    """Hand decomposition of ``T_n`` as ``(expr, assignments)``."""
    expr = tree_expression(n)
    a = tree_assignments()
    if n == 1:
        single = NetWithBoundaries(0, 0, ("c",), (Transition("in", (), {"c"}),), name="single")
        a.nets["single"] = single
        a.initial["single"] = [frozenset()]
        a.final["single"] = [frozenset({"c"})]
    return expr, a


# -- dining philosophers -------------------------------------------------------------

WIRES = 3


def philosopher() -> NetWithBoundaries:
    return NetWithBoundaries(
        WIRES,
        WIRES,
        ("think", "hasL", "hasR", "eat"),
        (
            Transition("takeL1", {"think"}, {"hasL"}, {0}, ()),
            Transition("takeR2", {"hasL"}, {"eat"}, (), {1}),
            Transition("takeR1", {"think"}, {"hasR"}, (), {0}),
            Transition("takeL2", {"hasR"}, {"eat"}, {1}, ()),
            Transition("release", {"eat"}, {"think"}, {2}, {2}),
        ),
        name="ph",
    )


def fork() -> NetWithBoundaries:
    return NetWithBoundaries(
        WIRES,
        WIRES,
        ("free",),
        (
            Transition("takenL1", {"free"}, (), {0}, ()),
            Transition("takenL2", {"free"}, (), {1}, ()),
            Transition("returnedL", (), {"free"}, {2}, ()),
            Transition("takenR1", {"free"}, (), (), {0}),
            Transition("takenR2", {"free"}, (), (), {1}),
            Transition("returnedR", (), {"free"}, (), {2}),
        ),
        name="fk",
    )


def cup(w: int = WIRES) -> NetWithBoundaries:
    """``d_w : 0 -> 2w``, wire ``j`` joined to wire ``w + j``."""
    return NetWithBoundaries(0, 2 * w, (), tuple(Transition(f"w{j}", (), (), (), {j, w + j}) for j in range(w)),
                             name=f"d{w}")


def identity(w: int = WIRES) -> NetWithBoundaries:
    return NetWithBoundaries(w, w, (), tuple(Transition(f"w{j}", (), (), {j}, {j}) for j in range(w)),
                             name=f"i{w}")


def cap(w: int = WIRES) -> NetWithBoundaries:
    return NetWithBoundaries(2 * w, 0, (), tuple(Transition(f"w{j}", (), (), {j, w + j}, ()) for j in range(w)),
                             name=f"e{w}")


PH_INITIAL = frozenset({"think"})
FK_INITIAL = frozenset({"free"})
PH_TARGETS = {"think": NO, "hasL": DC, "hasR": DC, "eat": NO}
FK_TARGETS = {"free": NO}


def philosopher_assignments() -> Assignments:
    ph, fk = philosopher(), fork()
    wires = {"d3": cup(), "i3": identity(), "e3": cap()}
    nets = {"ph": ph, "fk": fk, **wires}
    initial = {"ph": [PH_INITIAL], "fk": [FK_INITIAL], **{v: [frozenset()] for v in wires}}
    final = {
        "ph": target_markings(ph.places, PH_TARGETS),
        "fk": target_markings(fk.places, FK_TARGETS),
        **{v: [frozenset()] for v in wires},
    }
    return Assignments(nets, initial, final)


def phrow(k: int):
    """``PhRow_1 = ph ; fk`` and ``PhRow_(k+1) = ph ; (fk ; PhRow_k)``, built without recursion."""
    _check_size(k)
    row = Seq(Var("ph"), Var("fk"))
    for _ in range(k - 1):
        row = Seq(Var("ph"), Seq(Var("fk"), row))
    return row


def philosophers_expression(n: int):
    return Seq(Var("d3"), Seq(Tensor(Var("i3"), phrow(n)), Var("e3")))


def gen_philosophers(n: int):
    """``Ph_n = d3 ; ((i3 ⊗ PhRow_n) ; e3)`` with its assignments."""
    return philosophers_expression(n), philosopher_assignments()


def philosophers_flat(n: int) -> MarkedNet:
    """The ring of ``n`` philosophers built directly.

    Philosopher ``i`` sits between fork ``i - 1`` (its left) and fork ``i``
    (its right), indices taken modulo ``n``.  Only meaningful for ``n >= 2``:
    with a single fork the release would put two tokens on one place.
    """
    _check_size(n, 2)
    places, transitions, targets = [], [], {}
    for i in range(1, n + 1):
        for p in ("think", "hasL", "hasR", "eat"):
            places.append(f"{p}{i}")
            targets[f"{p}{i}"] = PH_TARGETS[p]
        places.append(f"free{i}")
        targets[f"free{i}"] = NO
    for i in range(1, n + 1):
        left, right = f"free{(i - 2) % n + 1}", f"free{i}"
        transitions += [
            Transition(f"takeL1_{i}", {f"think{i}", left}, {f"hasL{i}"}),
            Transition(f"takeR2_{i}", {f"hasL{i}", right}, {f"eat{i}"}),
            Transition(f"takeR1_{i}", {f"think{i}", right}, {f"hasR{i}"}),
            Transition(f"takeL2_{i}", {f"hasR{i}", left}, {f"eat{i}"}),
            Transition(f"release{i}", {f"eat{i}"}, {f"think{i}", left, right}),
        ]
    net = NetWithBoundaries(0, 0, tuple(places), tuple(transitions), name=f"Ph{n}")
    initial = {p for p in places if p.startswith(("think", "free"))}
    return MarkedNet(net, initial, targets)


# -- clique ------------------------------------------------------------------------


def gen_clique(n: int) -> MarkedNet:
    """``n`` places, one transition ``i -> j`` per ordered pair; one token starting in ``q0``.

    The target asks for the token in the last place, which is reachable.
    """
    _check_size(n, 2)
    places = tuple(f"q{i}" for i in range(n))
    transitions = tuple(
        Transition(f"m{i}_{j}", {f"q{i}"}, {f"q{j}"}) for i in range(n) for j in range(n) if i != j
    )
    net = NetWithBoundaries(0, 0, places, transitions, name=f"K{n}")
    targets = {p: NO for p in places}
    targets[places[-1]] = YES
    return MarkedNet(net, {places[0]}, targets)


def generate(family: str, n: int, shape: str | None = None):
    """Dispatch by family name.

    ``shape="flat"`` gives the ordinary net as a :class:`MarkedNet`; otherwise
    the result is ``(expr, assignments)``.  Without a shape, buffers and cliques
    come out flat and trees and philosophers as their hand decompositions.
    """
    if family == "buffer":
        return gen_buffer(n, shape or "flat")
    if family == "clique":
        if shape not in (None, "flat"):
            raise ValueError("clique nets have no hand decomposition; use --shape flat or omit it")
        return gen_clique(n)
    if family in ("tree", "philosophers"):
        if shape == "flat":
            return tree_flat(n) if family == "tree" else philosophers_flat(n)
        if shape is not None:
            raise ValueError(f"--shape {shape} applies to buffer only")
        return gen_tree(n) if family == "tree" else gen_philosophers(n)
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
