"""Graphical rewrite rules: each supported gate maps hypergraphs to hypergraphs.

Edge toggles follow multiset semantics: a subset generated an even number of
times is left alone, an odd number of times is complemented.  A toggle of the
empty subset is a global sign flip and is tracked separately.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import gates as G
from .hypergraph import (
    EdgeMultiset,
    Hypergraph,
    adjacency,
    adjacency_pairs,
    mask_from_vertices,
    pair_union_multiset,
)


class NonGraphicalGateError(ValueError):
    """A gate without a hypergraph-preserving rule reached the rule engine."""

    def __init__(self, index: int, gate: G.GateOp):
        super().__init__(f"gate {index} ({gate.kind}) has no graphical rule")
        self.index = index
        self.gate = gate


@dataclass(frozen=True)
class RewriteResult:
    hypergraph: Hypergraph
    global_sign: int = 1
    graphical: bool = True


def _check_vertex(h: Hypergraph, v: int) -> None:
    if not 1 <= v <= h.n:
        raise ValueError(f"vertex {v} outside 1..{h.n}")


# -- toggle multisets (exposed so tests can assert worked examples) -----------


def not_toggle_multiset(h: Hypergraph, a: int) -> EdgeMultiset:
    """Adjacency elements of ``a``; the empty element encodes a sign flip."""
    _check_vertex(h, a)
    return EdgeMultiset.from_masks(adjacency(h, (a,)).elements)


def cnot_toggle_multiset(h: Hypergraph, control: int, target: int) -> EdgeMultiset:
    """Unions ``e_t | {control}`` over the adjacency of the target."""
    return ext_cnot_toggle_multiset(h, (control,), target)


def ext_cnot_toggle_multiset(h: Hypergraph, controls: Iterable[int], target: int) -> EdgeMultiset:
    controls = tuple(controls)
    _check_vertex(h, target)
    cmask = mask_from_vertices(controls, h.n)
    if cmask == 0:
        raise ValueError("control set must be nonempty")
    if (cmask >> (target - 1)) & 1:
        raise ValueError("target must not be a control")
    elems = adjacency(h, (target,)).elements
    return EdgeMultiset.from_masks(m | cmask for m in elems)


def complementation_multiset(h: Hypergraph, a: int) -> EdgeMultiset:
    """Pairwise unions of distinct adjacency elements of ``a``."""
    _check_vertex(h, a)
    return pair_union_multiset(adjacency_pairs(h, a))


# -- single-gate rules ---------------------------------------------------------


def apply_phase_edge(h: Hypergraph, edge: Iterable[int]) -> RewriteResult:
    """The multi-qubit phase gate squares to identity, so it toggles its edge."""
    mask = mask_from_vertices(edge, h.n)
    if mask == 0:
        raise ValueError("phase edge must be nonempty")
    return RewriteResult(h.with_edges_toggled((mask,)))


def apply_not(h: Hypergraph, a: int) -> RewriteResult:
    """Toggle every adjacency element of ``a``; an empty element flips the sign."""
    toggles = not_toggle_multiset(h, a).odd_support()
    sign = -1 if 0 in toggles else 1
    return RewriteResult(h.with_edges_toggled(toggles - {0}), sign)


def apply_cnot(h: Hypergraph, control: int, target: int) -> RewriteResult:
    if control == target:
        raise ValueError("control and target must differ")
    _check_vertex(h, control)
    toggles = cnot_toggle_multiset(h, control, target).odd_support()
    return RewriteResult(h.with_edges_toggled(toggles))


def apply_ext_cnot(h: Hypergraph, controls: Iterable[int], target: int) -> RewriteResult:
    toggles = ext_cnot_toggle_multiset(h, controls, target).odd_support()
    return RewriteResult(h.with_edges_toggled(toggles))


def apply_local_complementation(h: Hypergraph, a: int, sign: int = 1) -> RewriteResult:
    """Edge-pair complementation around ``a``; the sign choice never matters."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    toggles = complementation_multiset(h, a).odd_support()
    # unions of distinct nonempty-or-not elements are never empty
    return RewriteResult(h.with_edges_toggled(toggles - {0}))


def measure_z(h: Hypergraph, a: int, outcome: int) -> RewriteResult:
    """Z-measurement branch; both outcomes occur with probability 1/2.

    The measured vertex stays in the vertex set but becomes isolated; the
    result describes the post-measurement state of the remaining qubits.
    """
    _check_vertex(h, a)
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    abit = 1 << (a - 1)
    keep = frozenset(m for m in h.edges if not m & abit)
    sign = 1
    if outcome == 1:
        inherited = frozenset(m & ~abit for m in h.edges if m & abit)
        if 0 in inherited:
            sign = -1
        keep = keep ^ (inherited - {0})
    return RewriteResult(Hypergraph(h.n, keep), sign)


def apply_rule(h: Hypergraph, g: G.GateOp) -> RewriteResult:
    """Dispatch one gate; square-root gates come back with ``graphical=False``."""
    if any(v < 1 or v > h.n for v in g.support()):
        raise ValueError(f"gate support {sorted(g.support())} outside 1..{h.n}")
    if g.kind == G.PHASE:
        return apply_phase_edge(h, g.edge)
    if g.kind == G.Z:
        return apply_phase_edge(h, (g.vertex,))
    if g.kind == G.X:
        return apply_not(h, g.vertex)
    if g.kind == G.CNOT:
        return apply_cnot(h, g.control, g.target)
    if g.kind == G.EXT_CNOT:
        return apply_ext_cnot(h, g.controls, g.target)
    if g.kind == G.TAU:
        return apply_local_complementation(h, g.vertex, g.sign)
    if g.kind == G.MEASURE_Z:
        return measure_z(h, g.vertex, g.outcome)
    return RewriteResult(h, 1, graphical=False)


def apply_sequence(h: Hypergraph, ops: Sequence[G.GateOp]) -> RewriteResult:
    """Left fold of the single-gate rules in application order."""
    sign = 1
    for index, g in enumerate(ops):
        step = apply_rule(h, g)
        if not step.graphical:
            raise NonGraphicalGateError(index, g)
        h = step.hypergraph
        sign *= step.global_sign
    return RewriteResult(h, sign)
