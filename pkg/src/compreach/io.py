"""JSON files for nets and wiring decompositions.

Net file::

    {"left": k, "right": l,
     "places": [{"id": "p", "initial": true, "target": "yes"}, ...],
     "transitions": [{"id": "t", "pre": [...], "post": [...],
                      "source": [ports], "target_ports": [ports]}, ...]}

Decomposition file::

    {"expr": {"op": "seq", "left": {...}, "right": {...}},
     "leaves": {"x": <net file>, ...}}

where ``op`` is ``seq``, ``tensor`` or ``var`` (with ``"name"``).  A leaf
whose initial or final marking set cannot be described by per-place flags
carries explicit ``"initial_markings"`` / ``"final_markings"`` lists instead.
"""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .net import MarkedNet, NetError, NetWithBoundaries, PlaceTarget, Transition, ensure_valid, target_markings
from .wiring import Assignments, Seq, Tensor, Var, postorder


class FormatError(NetError):
    """A file does not follow the net or decomposition format."""


@contextmanager
def _deep(depth: int):
    """Raise the recursion limit for json on very deep expressions."""
    old = sys.getrecursionlimit()
    need = min(4 * depth + 1000, 30000)
    if need > old:
        sys.setrecursionlimit(need)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def expr_depth(expr) -> int:
    depth = {}
    for node in postorder(expr):
        depth[id(node)] = 1 if isinstance(node, Var) else 1 + max(depth[id(node.left)], depth[id(node.right)])
    return depth[id(expr)]


# -- nets ------------------------------------------------------------------------


def _per_place(places, markings):
    """Per-place targets describing ``markings`` exactly, or ``None``."""
    markings = {frozenset(x) for x in markings}
    if not markings:
        return None
    targets = {}
    for p in places:
        hits = sum(1 for x in markings if p in x)
        targets[p] = PlaceTarget.YES if hits == len(markings) else PlaceTarget.NO if hits == 0 else PlaceTarget.DONTCARE
    if set(target_markings(places, targets)) != markings:
        return None
    return targets


def net_to_json(net: NetWithBoundaries, initial=(), targets=None, initial_markings=None, final_markings=None) -> dict:
    """Serialise a net with one initial marking and per-place targets.

    ``initial_markings`` / ``final_markings`` (sets of markings) take the
    place of ``initial`` / ``targets`` when given.
    """
    explicit = {}
    if initial_markings is not None:
        initial_markings = sorted({frozenset(x) for x in initial_markings}, key=sorted)
        if len(initial_markings) == 1:
            initial = initial_markings[0]
        else:
            initial = frozenset()
            explicit["initial_markings"] = [sorted(x) for x in initial_markings]
    if final_markings is not None:
        targets = _per_place(net.places, final_markings)
        if targets is None:
            explicit["final_markings"] = sorted(sorted(x) for x in {frozenset(y) for y in final_markings})
    targets = targets or {}
    initial = frozenset(initial)
    doc = {
        "left": net.left,
        "right": net.right,
        "places": [
            {
                "id": p,
                "initial": p in initial,
                "target": PlaceTarget.parse(targets.get(p, PlaceTarget.DONTCARE)).value,
            }
            for p in net.places
        ],
        "transitions": [
            {
                "id": t.id,
                "pre": sorted(t.pre),
                "post": sorted(t.post),
                "source": sorted(t.source),
                "target_ports": sorted(t.target),
            }
            for t in net.transitions
        ],
    }
    doc.update(explicit)
    return doc


def marked_to_json(m: MarkedNet) -> dict:
    return net_to_json(m.net, m.initial, m.targets)


def _field(doc, key, kind, where):
    if key not in doc:
        raise FormatError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise FormatError(f"{where}: field {key!r} must be an integer")
    if kind is list and not isinstance(value, list):
        raise FormatError(f"{where}: field {key!r} must be a list")
    return value


def _net_from_json(doc, where="net") -> tuple:
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected a JSON object")
    left = _field(doc, "left", int, where)
    right = _field(doc, "right", int, where)
    places, initial, targets = [], set(), {}
    for i, p in enumerate(_field(doc, "places", list, where)):
        pw = f"{where}: place #{i}"
        if not isinstance(p, dict) or not isinstance(p.get("id"), str):
            raise FormatError(f"{pw}: expected an object with a string 'id'")
        places.append(p["id"])
        if p.get("initial", False):
            initial.add(p["id"])
        try:
            targets[p["id"]] = PlaceTarget.parse(p.get("target", "dontcare"))
        except NetError as exc:
            raise FormatError(f"{pw} ({p['id']}): {exc}") from None
    transitions = []
    for i, t in enumerate(_field(doc, "transitions", list, where)):
        tw = f"{where}: transition #{i}"
        if not isinstance(t, dict) or not isinstance(t.get("id"), str):
            raise FormatError(f"{tw}: expected an object with a string 'id'")
        transitions.append(
            Transition(
                t["id"],
                t.get("pre", []),
                t.get("post", []),
                t.get("source", []),
                t.get("target_ports", []),
            )
        )
    try:
        net = ensure_valid(NetWithBoundaries(left, right, tuple(places), tuple(transitions)))
    except NetError as exc:
        raise FormatError(f"{where}: {exc}") from None
    return net, frozenset(initial), targets


def net_from_json(doc) -> MarkedNet:
    net, initial, targets = _net_from_json(doc)
    return MarkedNet(net, initial, targets)


# -- decompositions --------------------------------------------------------------


def expr_to_json(expr) -> dict:
    out = {}
    for node in postorder(expr):
        if isinstance(node, Var):
            out[id(node)] = {"op": "var", "name": node.name}
        else:
            op = "seq" if isinstance(node, Seq) else "tensor"
            out[id(node)] = {"op": op, "left": out[id(node.left)], "right": out[id(node.right)]}
    return out[id(expr)]


def expr_from_json(doc):
    """Inverse of :func:`expr_to_json`, without recursion."""
    built: dict = {}
    stack = [(doc, False)]
    while stack:
        node, expanded = stack.pop()
        if not isinstance(node, dict) or node.get("op") not in ("seq", "tensor", "var"):
            raise FormatError(f"expression node must be an object with op seq, tensor or var, got {node!r:.80}")
        if node["op"] == "var":
            if not isinstance(node.get("name"), str):
                raise FormatError("var node needs a string 'name'")
            built[id(node)] = Var(node["name"])
        elif not expanded:
            if "left" not in node or "right" not in node:
                raise FormatError(f"{node['op']} node needs 'left' and 'right'")
            stack.append((node, True))
            stack.append((node["right"], False))
            stack.append((node["left"], False))
        else:
            cls = Seq if node["op"] == "seq" else Tensor
            built[id(node)] = cls(built[id(node["left"])], built[id(node["right"])])
    return built[id(doc)]


def decomposition_to_json(expr, assign: Assignments) -> dict:
    leaves = {}
    for name in sorted({n.name for n in postorder(expr) if isinstance(n, Var)}):
        net = assign.net(name)
        leaves[name] = net_to_json(
            net,
            initial_markings=assign.initial.get(name, [frozenset()]),
            final_markings=assign.final.get(name, []),
        )
    return {"expr": expr_to_json(expr), "leaves": leaves}


def decomposition_from_json(doc) -> tuple:
    if not isinstance(doc, dict) or "expr" not in doc or "leaves" not in doc:
        raise FormatError("decomposition file needs 'expr' and 'leaves'")
    if not isinstance(doc["leaves"], dict):
        raise FormatError("'leaves' must map variable names to nets")
    expr = expr_from_json(doc["expr"])
    a = Assignments({}, {}, {})
    for name, leaf in doc["leaves"].items():
        net, initial, targets = _net_from_json(leaf, where=f"leaf {name}")
        a.nets[name] = NetWithBoundaries(net.left, net.right, net.places, net.transitions, name=name)
        if "initial_markings" in leaf:
            a.initial[name] = [_marking(x, net, name) for x in leaf["initial_markings"]]
        else:
            a.initial[name] = [initial]
        if "final_markings" in leaf:
            a.final[name] = [_marking(x, net, name) for x in leaf["final_markings"]]
        else:
            a.final[name] = target_markings(net.places, targets)
    missing = sorted({n.name for n in postorder(expr) if isinstance(n, Var)} - set(a.nets))
    if missing:
        raise FormatError(f"expression uses variables with no leaf net: {', '.join(missing)}")
    return expr, a


def _marking(x, net, name):
    if not isinstance(x, list) or not all(isinstance(p, str) for p in x):
        raise FormatError(f"leaf {name}: markings must be lists of place ids")
    unknown = set(x) - set(net.places)
    if unknown:
        raise FormatError(f"leaf {name}: marking mentions unknown places {sorted(unknown)}")
    return frozenset(x)


# -- files -----------------------------------------------------------------------


def dumps(doc, depth: int = 0) -> str:
    with _deep(depth):
        return json.dumps(doc, indent=1 if depth < 200 else None, sort_keys=False) + "\n"


def read_json(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        with _deep(len(text) // 8):
            return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def write_net(path, m: MarkedNet) -> None:
    Path(path).write_text(dumps(marked_to_json(m)), encoding="utf-8")


def read_net(path) -> MarkedNet:
    doc = read_json(path)
    try:
        return net_from_json(doc)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_decomposition(path, expr, assign: Assignments) -> None:
    Path(path).write_text(dumps(decomposition_to_json(expr, assign), expr_depth(expr)), encoding="utf-8")


def read_decomposition(path) -> tuple:
    doc = read_json(path)
    try:
        return decomposition_from_json(doc)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None
