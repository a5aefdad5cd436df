"""Compositional reachability checking for 1-bounded Petri nets with boundaries."""

from .automata import BoundedNfa, MinimalDfa, epsmin, minimise, net_to_nfa, nfa_seq, nfa_tensor
from .net import (
    MarkedNet,
    NetError,
    NetWithBoundaries,
    PlaceTarget,
    StepLabel,
    Transition,
    compose_seq,
    compose_tensor,
    minimal_synchronisations,
    step_successors,
)
from .wiring import Assignments, MemoTable, Seq, Tensor, Var, check_reachability, evaluate, net_semantics

__version__ = "0.1.0"
