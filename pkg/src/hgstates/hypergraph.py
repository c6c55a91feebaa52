"""Immutable multi-qubit hypergraphs with bitmask edge sets.

Conventions used across the package:

- Vertices are 1-based: ``{1, ..., n}``.
- An edge is a nonempty subset of vertices, stored internally as an integer
  bitmask with bit ``v - 1`` set for vertex ``v``.  The empty edge (a pure
  global phase) is never stored; operations that would produce it report a
  sign flag instead.
- Computational-basis indices put qubit 1 in the most significant bit, so
  worked examples written as bit strings can be read off directly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_VERTICES = 63
MAX_SIGN_QUBITS = 24


class NotAHypergraphState(ValueError):
    """Raised when a state vector has no exact hypergraph-state form."""


def mask_from_vertices(vertices: Iterable[int], n: int) -> int:
    """Pack a collection of distinct vertices into an edge bitmask."""
    mask = 0
    for v in vertices:
        v = int(v)
        if not 1 <= v <= n:
            raise ValueError(f"vertex {v} outside 1..{n}")
        bit = 1 << (v - 1)
        if mask & bit:
            raise ValueError(f"repeated vertex {v}")
        mask |= bit
    return mask


def vertices_from_mask(mask: int) -> tuple[int, ...]:
    """Unpack an edge bitmask into a sorted vertex tuple."""
    out = []
    v = 1
    m = int(mask)
    while m:
        if m & 1:
            out.append(v)
        m >>= 1
        v += 1
    return tuple(out)


def flip_bit_order(mask: int, n: int) -> int:
    """Reverse the low ``n`` bits; converts vertex masks to basis masks.

    Vertex ``v`` sits at bit ``v - 1`` of an edge mask but at bit ``n - v``
    of a basis index, so the two encodings are bit reversals of each other.
    """
    out = 0
    for k in range(n):
        if (mask >> k) & 1:
            out |= 1 << (n - 1 - k)
    return out


def edge_sort_key(mask: int) -> tuple[int, int]:
    """Canonical edge order: by cardinality, then numeric mask value."""
    return (int(mask).bit_count(), int(mask))


@dataclass(frozen=True)
class Hypergraph:
    """A hypergraph on vertices ``1..n`` with a set of bitmask edges."""

    n: int
    edges: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        full = (1 << self.n) - 1
        for mask in self.edges:
            if not isinstance(mask, int):
                raise TypeError("edges must be integer bitmasks")
            if mask <= 0 or mask & ~full:
                raise ValueError(f"edge mask {mask!r} is not a nonempty subset of 1..{self.n}")

    # -- accessors ---------------------------------------------------------

    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges, key=edge_sort_key))

    def edge_sets(self) -> tuple[tuple[int, ...], ...]:
        """Edges as sorted vertex tuples, in canonical order."""
        return tuple(vertices_from_mask(m) for m in self.sorted_edges())

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return mask_from_vertices(vertices, self.n) in self.edges

    def max_cardinality(self) -> int:
        return max((m.bit_count() for m in self.edges), default=0)

    def vertex_support(self) -> int:
        """Mask of vertices that touch at least one edge."""
        out = 0
        for m in self.edges:
            out |= m
        return out

    def isolated_vertices(self) -> tuple[int, ...]:
        support = self.vertex_support()
        return tuple(v for v in range(1, self.n + 1) if not (support >> (v - 1)) & 1)

    # -- structural edits (all return new values) --------------------------

    def with_edges_toggled(self, masks: Iterable[int]) -> "Hypergraph":
        """Symmetric difference with a set of edge masks (no empty masks)."""
        toggles = frozenset(masks)
        if 0 in toggles:
            raise ValueError("cannot toggle the empty edge; it is a global phase")
        return Hypergraph(self.n, self.edges ^ toggles)

    def relabeled(self, mapping: dict[int, int], n: int | None = None) -> "Hypergraph":
        """Apply a vertex relabeling; must be injective on used vertices."""
        new_n = self.n if n is None else n
        new_edges = set()
        for m in self.edges:
            new = mask_from_vertices((mapping[v] for v in vertices_from_mask(m)), new_n)
            if new in new_edges:
                raise ValueError("relabeling collides two edges")
            new_edges.add(new)
        return Hypergraph(new_n, frozenset(new_edges))

    def without_vertices(self, vertices: Iterable[int]) -> "Hypergraph":
        """Drop isolated vertices, renumbering the remainder downward."""
        drop = set(vertices)
        support = self.vertex_support()
        for v in drop:
            if (support >> (v - 1)) & 1:
                raise ValueError(f"vertex {v} is not isolated")
        keep = [v for v in range(1, self.n + 1) if v not in drop]
        if not keep:
            raise ValueError("cannot delete every vertex")
        mapping = {v: i + 1 for i, v in enumerate(keep)}
        return self.relabeled(mapping, n=len(keep))

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edge_sets()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "Hypergraph":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise ValueError("hypergraph JSON needs 'n' and 'edges' fields")
        return hypergraph(int(data["n"]), data["edges"])

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        return cls.from_json_dict(json.loads(text))

    def to_dot(self) -> str:
        """Graphviz output: plain lines for 2-edges, a point node per other edge."""
        lines = ["graph hypergraph {", "  node [shape=circle];"]
        for v in range(1, self.n + 1):
            lines.append(f"  v{v};")
        aux = 0
        for mask in self.sorted_edges():
            vs = vertices_from_mask(mask)
            if len(vs) == 2:
                lines.append(f"  v{vs[0]} -- v{vs[1]};")
            else:
                lines.append(f'  e{aux} [shape=point, label=""];')
                for v in vs:
                    lines.append(f"  e{aux} -- v{v};")
                aux += 1
        lines.append("}")
        return "\n".join(lines)


def hypergraph(n: int, edge_sets: Iterable[Iterable[int]] = ()) -> Hypergraph:
    """Build a hypergraph from vertex collections, rejecting duplicates."""
    masks = set()
    for edge in edge_sets:
        mask = mask_from_vertices(edge, n)
        if mask == 0:
            raise ValueError("empty edge is not storable (it is a global phase)")
        if mask in masks:
            raise ValueError(f"duplicate edge {tuple(sorted(edge))}")
        masks.add(mask)
    return Hypergraph(n, frozenset(masks))


def complete_three_uniform(n: int) -> Hypergraph:
    """All three-element subsets of ``1..n``."""
    if n < 3:
        raise ValueError("need at least three vertices")
    return hypergraph(n, combinations(range(1, n + 1), 3))


def all_hypergraphs(n: int) -> Iterator[Hypergraph]:
    """Every hypergraph on ``n`` vertices; 2^(2^n - 1) values, keep n small."""
    universe = list(range(1, 1 << n))
    for bits in range(1 << len(universe)):
        yield Hypergraph(n, frozenset(universe[i] for i in range(len(universe)) if (bits >> i) & 1))


def connected_three_uniform_hypergraphs(n: int) -> Iterator[Hypergraph]:
    """Every connected 3-uniform hypergraph covering all ``n`` vertices."""
    triples = [mask_from_vertices(c, n) for c in combinations(range(1, n + 1), 3)]
    for bits in range(1, 1 << len(triples)):
        h = Hypergraph(n, frozenset(triples[i] for i in range(len(triples)) if (bits >> i) & 1))
        if is_three_uniform_connected(h):
            yield h


def random_hypergraph(rng: np.random.Generator, n: int, max_edges: int = 12) -> Hypergraph:
    """Uniformly sample an edge count, then distinct nonempty edges."""
    universe = (1 << n) - 1
    k = int(rng.integers(0, min(max_edges, universe) + 1))
    masks = rng.choice(universe, size=k, replace=False) + 1 if k else []
    return Hypergraph(n, frozenset(int(m) for m in masks))


# -- adjacency machinery ----------------------------------------------------


@dataclass(frozen=True)
class Adjacency:
    """Edge remainders ``e - W`` over all edges containing the anchor ``W``."""

    anchor: int  # vertex mask of W
    elements: frozenset[int]  # vertex masks, possibly including 0 (empty set)

    def element_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(vertices_from_mask(m) for m in sorted(self.elements, key=edge_sort_key))

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class EdgeMultiset:
    """Vertex subsets with positive multiplicities; order-canonical."""

    counts: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        for mask, mult in self.counts:
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")
            if mask < 0:
                raise ValueError("negative mask")

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> "EdgeMultiset":
        tally: dict[int, int] = {}
        for m in masks:
            tally[int(m)] = tally.get(int(m), 0) + 1
        return cls(tuple(sorted(tally.items(), key=lambda kv: edge_sort_key(kv[0]))))

    def multiplicity(self, mask: int) -> int:
        for m, c in self.counts:
            if m == mask:
                return c
        return 0

    def odd_support(self) -> frozenset[int]:
        return frozenset(m for m, c in self.counts if c % 2 == 1)

    def as_sets(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return tuple((vertices_from_mask(m), c) for m, c in self.counts)

    def total(self) -> int:
        return sum(c for _, c in self.counts)


def adjacency(h: Hypergraph, w: Iterable[int]) -> Adjacency:
    """Remainders ``e - w`` of every edge ``e`` that contains all of ``w``."""
    anchor = mask_from_vertices(w, h.n)
    if anchor == 0:
        raise ValueError("anchor must be nonempty")
    elements = frozenset(m & ~anchor for m in h.edges if m & anchor == anchor)
    return Adjacency(anchor, elements)


def adjacency_pairs(h: Hypergraph, a: int) -> tuple[tuple[int, int], ...]:
    """All unordered pairs of distinct adjacency elements of vertex ``a``."""
    adj = adjacency(h, (a,))
    elems = sorted(adj.elements, key=edge_sort_key)
    return tuple((e1, e2) for e1, e2 in combinations(elems, 2))


def pair_union_multiset(pairs: Iterable[Sequence[int]]) -> EdgeMultiset:
    """Multiset of unions ``e1 | e2`` over a collection of element pairs."""
    return EdgeMultiset.from_masks(e1 | e2 for e1, e2 in pairs)


def toggle_edges(h: Hypergraph, m: EdgeMultiset | Iterable[int]) -> Hypergraph:
    """Toggle the odd-multiplicity subsets, discarding any empty subset."""
    if isinstance(m, EdgeMultiset):
        support = m.odd_support()
    else:
        support = EdgeMultiset.from_masks(m).odd_support()
    return h.with_edges_toggled(support - {0})


@dataclass(frozen=True)
class SignFunction:
    """A boolean function as a packed truth table over basis indices."""

    n: int
    table: bytes

    def __post_init__(self) -> None:
        if len(self.table) != 1 << self.n:
            raise ValueError("table length must be 2^n")
        if any(b not in (0, 1) for b in self.table):
            raise ValueError("table entries must be bits")

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.table, dtype=np.uint8)

    def __call__(self, x: int) -> int:
        return self.table[x]


def sign_function(h: Hypergraph) -> SignFunction:
    """Truth table of the edge-parity function: f(x) = XOR of monomials."""
    if h.n > MAX_SIGN_QUBITS:
        raise ValueError(f"sign table for n={h.n} exceeds the n<={MAX_SIGN_QUBITS} cap")
    table = np.zeros(1 << h.n, dtype=np.uint8)
    view = table.reshape([2] * h.n)
    for mask in h.edges:
        idx = tuple(1 if (mask >> (v - 1)) & 1 else slice(None) for v in range(1, h.n + 1))
        view[idx] ^= 1
    return SignFunction(h.n, table.tobytes())


def hypergraph_from_sign(f: SignFunction) -> tuple[Hypergraph, int]:
    """Invert :func:`sign_function` via the binary Moebius (subset-XOR) transform.

    Returns the unique hypergraph plus a global-sign flag (+1 or -1) for the
    constant term, which has no stored-edge representation.
    """
    n = f.n
    t = f.as_array().copy()
    view = t.reshape([2] * n)
    for ax in range(n):
        lo = tuple(0 if k == ax else slice(None) for k in range(n))
        hi = tuple(1 if k == ax else slice(None) for k in range(n))
        view[hi] ^= view[lo]
    flat = t.reshape(-1)
    sign = -1 if flat[0] else 1
    masks = [flip_bit_order(int(b), n) for b in np.nonzero(flat)[0] if b != 0]
    return Hypergraph(n, frozenset(masks)), sign


def is_three_uniform_connected(h: Hypergraph) -> bool:
    """True iff every edge has three vertices and shared edges connect all n."""
    if not h.edges:
        return False
    if any(m.bit_count() != 3 for m in h.edges):
        return False
    parent = list(range(h.n + 1))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for mask in h.edges:
        vs = vertices_from_mask(mask)
        for other in vs[1:]:
            parent[find(other)] = find(vs[0])
    roots = {find(v) for v in range(1, h.n + 1)}
    return len(roots) == 1
