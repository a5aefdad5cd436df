"""GraphViz output for automata.

Edge labels are written ``left/right`` with one character per port: ``0``,
``1`` or ``*`` when the port does not matter.  One edge is drawn per
diagram path, so a single label can stand for many letters.
"""

from __future__ import annotations

from pathlib import Path

from .automata import BoundedNfa, MinimalDfa


def cube_label(assignment, left: int, right: int) -> str:
    bits = ["*"] * (left + right)
    for var, bit in assignment:
        bits[var] = str(bit)
    return "".join(bits[:left]) + "/" + "".join(bits[left:])


def _state_name(names, s):
    if names is None:
        return str(s)
    name = names[s]
    if isinstance(name, (set, frozenset)):
        return "{" + ", ".join(sorted(map(str, name))) + "}"
    return str(name)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a, title: str = "automaton", emit_sink: bool = False) -> str:
    """DOT text for a :class:`MinimalDfa` or :class:`BoundedNfa`."""
    if isinstance(a, MinimalDfa):
        hidden = set() if emit_sink or a.sink is None else {a.sink}
        initial, names = {0}, None
    elif isinstance(a, BoundedNfa):
        hidden = set()
        initial, names = set(a.initial), a.names
    else:
        raise TypeError(f"cannot draw {type(a).__name__}")
    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;", '  node [shape=circle];']
    for s in range(a.num_states):
        if s in hidden:
            continue
        shape = "doublecircle" if s in a.final else "circle"
        lines.append(f"  s{s} [label={_quote(_state_name(names, s))}, shape={shape}];")
    for s in sorted(initial - hidden):
        lines.append(f"  init{s} [shape=point];")
        lines.append(f"  init{s} -> s{s};")
    for s in range(a.num_states):
        if s in hidden:
            continue
        for assignment, targets in a.store.cubes(a.delta[s]):
            for u in sorted(targets):
                if u in hidden:
                    continue
                label = cube_label(assignment, a.left, a.right)
                lines.append(f"  s{s} -> s{u} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(path, a, title: str = "automaton", emit_sink: bool = False) -> None:
    Path(path).write_text(to_dot(a, title, emit_sink), encoding="utf-8")
