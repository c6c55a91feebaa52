"""Local-equivalence machinery: Pauli orbits, Clifford search, and the
five-qubit demonstration that local-unitary equivalence exceeds local-Pauli
equivalence for hypergraph states.

Pauli assignments are tracked modulo phase, with Y written as XZ.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import gates as G
from .hypergraph import Hypergraph, hypergraph, vertices_from_mask
from .oracle import (
    DenseOperator,
    StateVector,
    build_state,
    complementation_unitary,
    equal_up_to_global_phase,
    is_product_operator,
)
from .rules import apply_local_complementation, apply_not, apply_phase_edge

PAULI_LABELS = ("I", "X", "Z", "XZ")
MAX_ORBIT_QUBITS = 12
MAX_CLIFFORD_SEARCH_QUBITS = 5


def _assignment(xbits: int, zbits: int, n: int) -> tuple[str, ...]:
    out = []
    for v in range(n):
        x = (xbits >> v) & 1
        z = (zbits >> v) & 1
        out.append(("I", "Z", "X", "XZ")[x * 2 + z])
    return tuple(out)


def pauli_orbit(h: Hypergraph) -> dict[Hypergraph, tuple[str, ...]]:
    """All hypergraphs reachable by per-vertex X/Z rewrites, with witnesses.

    Global signs are discarded; the witnessing assignment maps the input
    state onto the member state up to a phase.
    """
    if h.n > MAX_ORBIT_QUBITS:
        raise ValueError(f"orbit enumeration capped at n<={MAX_ORBIT_QUBITS}")
    seen: dict[Hypergraph, tuple[int, int]] = {h: (0, 0)}
    queue: deque[Hypergraph] = deque([h])
    while queue:
        current = queue.popleft()
        xbits, zbits = seen[current]
        for v in range(1, h.n + 1):
            bit = 1 << (v - 1)
            for flipped, parities in (
                (apply_not(current, v).hypergraph, (xbits ^ bit, zbits)),
                (apply_phase_edge(current, (v,)).hypergraph, (xbits, zbits ^ bit)),
            ):
                if flipped not in seen:
                    seen[flipped] = parities
                    queue.append(flipped)
    return {member: _assignment(x, z, h.n) for member, (x, z) in seen.items()}


def pauli_equivalent(h1: Hypergraph, h2: Hypergraph) -> tuple[bool, tuple[str, ...] | None]:
    """Orbit membership test; returns the witnessing assignment when found."""
    if h1.n != h2.n:
        raise ValueError("hypergraphs have different vertex counts")
    orbit = pauli_orbit(h1)
    if h2 in orbit:
        return True, orbit[h2]
    return False, None


def assignment_operator(assignment: Sequence[str], n: int) -> np.ndarray:
    """Dense matrix of a per-vertex Pauli assignment (X applied after Z)."""
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    eye = np.eye(2, dtype=np.complex128)
    table = {"I": eye, "X": x, "Z": z, "XZ": x @ z}
    out = np.array([[1.0 + 0j]])
    for label in assignment:
        out = np.kron(out, table[label])
    return out


# -- single-qubit Clifford group -------------------------------------------------


def _canonical_key(mat: np.ndarray) -> tuple:
    flat = mat.reshape(-1)
    pivot = next(x for x in flat if abs(x) > 1e-8)
    normalized = flat / (pivot / abs(pivot))
    return tuple(np.round(normalized, 9).tolist())


def single_qubit_cliffords() -> list[np.ndarray]:
    """The 24 single-qubit Cliffords modulo phase, generated by sqrt-Z and sqrt-X."""
    gens = [
        np.diag([1.0 + 0j, 1j]),
        np.array([[0.5 + 0.5j, 0.5 - 0.5j], [0.5 - 0.5j, 0.5 + 0.5j]]),
    ]
    identity = np.eye(2, dtype=np.complex128)
    members: dict[tuple, np.ndarray] = {_canonical_key(identity): identity}
    queue = deque([identity])
    while queue:
        mat = queue.popleft()
        for g in gens:
            nxt = g @ mat
            key = _canonical_key(nxt)
            if key not in members:
                members[key] = nxt
                queue.append(nxt)
    group = list(members.values())
    if len(group) != 24:
        raise AssertionError(f"single-qubit Clifford closure has size {len(group)}")
    return group


@dataclass(frozen=True, eq=False)
class EquivalenceCertificate:
    """A verified per-qubit gate list mapping one state to another."""

    kind: str  # "pauli", "local_clifford", "local_unitary_product"
    factors: tuple[np.ndarray, ...]
    verified: bool
    assignment: tuple[str, ...] | None = None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verified": self.verified,
            "assignment": list(self.assignment) if self.assignment else None,
            "factors": [
                [[(z.real, z.imag) for z in row] for row in f] for f in self.factors
            ],
        }


def verify_certificate(
    cert: EquivalenceCertificate, h1: Hypergraph, h2: Hypergraph, tol: float = 1e-8
) -> bool:
    """Re-check a certificate against the oracle, independent of any search."""
    amps = build_state(h1).amps
    mat = np.array([[1.0 + 0j]])
    for f in cert.factors:
        mat = np.kron(mat, f)
    mapped = mat @ amps
    norm = np.linalg.norm(mapped)
    if norm < 1e-12:
        return False
    candidate = StateVector(h1.n, mapped / norm)
    return equal_up_to_global_phase(candidate, build_state(h2), tol)


def local_clifford_search(
    h1: Hypergraph, h2: Hypergraph, tol: float = 1e-8
) -> EquivalenceCertificate | None:
    """Brute-force per-qubit Clifford assignment mapping state 1 onto state 2.

    Contracts the overlap tensor of both states against all 24^n assignments
    at once, then returns the first hit in enumeration order.
    """
    if h1.n != h2.n:
        raise ValueError("hypergraphs have different vertex counts")
    n = h1.n
    if n > MAX_CLIFFORD_SEARCH_QUBITS:
        raise ValueError(f"Clifford search capped at n<={MAX_CLIFFORD_SEARCH_QUBITS}")
    group = single_qubit_cliffords()
    w = np.stack([m.reshape(-1) for m in group])  # (24, 4), index (row, col)
    source = build_state(h1).amps.reshape([2] * n)
    target = build_state(h2).amps.conj().reshape([2] * n)
    # K[(i1 j1) ... (in jn)] = conj(t)_i * s_j, paired per qubit
    k = np.tensordot(target, source, axes=0)
    order = [ax for q in range(n) for ax in (q, n + q)]
    k = np.transpose(k, order).reshape([4] * n)
    letters = "abcdefgh"[:n]
    caps = "ABCDEFGH"[:n]
    spec = (
        letters
        + ","
        + ",".join(f"{caps[q]}{letters[q]}" for q in range(n))
        + "->"
        + caps
    )
    overlaps = np.einsum(spec, k, *([w] * n), optimize="greedy")
    hits = np.argwhere(np.abs(overlaps) >= 1.0 - tol)
    if len(hits) == 0:
        return None
    first = tuple(int(i) for i in hits[0])
    factors = tuple(group[i] for i in first)
    cert = EquivalenceCertificate("local_clifford", factors, verified=False)
    verified = verify_certificate(cert, h1, h2, tol)
    return EquivalenceCertificate("local_clifford", factors, verified, None)


# -- complementation products -----------------------------------------------------


def complementation_net_operator(
    h: Hypergraph, moves: Sequence[tuple[int, int]]
) -> tuple[DenseOperator, Hypergraph]:
    """Compose complementation unitaries along a move list (vertex, sign).

    Each unitary takes its phase factors from the hypergraph reached so far,
    so the graphical prediction and the dense product stay in lockstep.
    """
    if h.n > 10:
        raise ValueError("net operator capped at n<=10")
    mat = np.eye(1 << h.n, dtype=np.complex128)
    current = h
    for vertex, sign in moves:
        mat = complementation_unitary(current, vertex, sign).matrix @ mat
        current = apply_local_complementation(current, vertex, sign).hypergraph
    return DenseOperator(h.n, mat), current


def complementation_pair_operator(
    h: Hypergraph, a: int, b: int, signs: tuple[int, int] = (1, -1)
) -> tuple[DenseOperator, Hypergraph]:
    """Two complementations, the second taken on the intermediate hypergraph."""
    return complementation_net_operator(h, [(a, signs[0]), (b, signs[1])])


# -- the five-qubit search ----------------------------------------------------------


@dataclass
class PairSearchResult:
    pairs: list[tuple[Hypergraph, Hypergraph, EquivalenceCertificate]] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def __iter__(self) -> Iterator:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _structured_candidates(n: int) -> Iterator[Hypergraph]:
    """Small three-edge hypergraphs, then the same dressed with one two-edge."""
    triples = list(combinations(range(1, n + 1), 3))
    twos = list(combinations(range(1, n + 1), 2))
    for k in (2, 3):
        for combo in combinations(triples, k):
            yield hypergraph(n, combo)
    for k in (2, 3):
        for combo in combinations(triples, k):
            for two in twos:
                yield hypergraph(n, combo + (two,))


def _random_candidates(rng: np.random.Generator, n: int) -> Iterator[Hypergraph]:
    triples = list(combinations(range(1, n + 1), 3))
    twos = list(combinations(range(1, n + 1), 2))
    while True:
        k3 = int(rng.integers(2, 5))
        k2 = int(rng.integers(0, 3))
        picked3 = [triples[i] for i in rng.choice(len(triples), size=k3, replace=False)]
        picked2 = [twos[i] for i in rng.choice(len(twos), size=k2, replace=False)]
        yield hypergraph(n, picked3 + picked2)


def find_lu_not_pauli_pairs(
    n: int = 5,
    budget: int = 60000,
    seed: int = 7,
    tol: float = 1e-8,
    stop_after: int = 3,
) -> PairSearchResult:
    """Search for complementation pairs whose net operator is a local product
    while the endpoint hypergraphs sit in disjoint Pauli orbits.

    Both complementations are required to be individually nonlocal (each has
    a multi-vertex adjacency element), so found pairs witness cancellation
    of entangling factors rather than an already-local move.  The candidate
    stream enumerates small structured hypergraphs, then random ones.
    """
    from .hypergraph import adjacency

    rng = np.random.default_rng(seed)
    result = PairSearchResult(stats={"candidates": 0, "product_hits": 0, "pauli_equivalent": 0})
    singletons = [(v,) for v in range(1, n + 1)]

    def candidate_stream() -> Iterator[Hypergraph]:
        yield from _structured_candidates(n)
        yield from _random_candidates(rng, n)

    def multi_elements(g: Hypergraph, v: int) -> frozenset[int]:
        return frozenset(m for m in adjacency(g, (v,)).elements if m.bit_count() >= 2)

    for h in candidate_stream():
        if result.stats["candidates"] >= budget or len(result.pairs) >= stop_after:
            break
        if h.max_cardinality() < 3:
            continue
        for a, b in permutations(range(1, n + 1), 2):
            if result.stats["candidates"] >= budget or len(result.pairs) >= stop_after:
                break
            for signs in ((1, -1), (-1, 1)):
                result.stats["candidates"] += 1
                if not multi_elements(h, a):
                    continue  # first move is already local
                h1 = apply_local_complementation(h, a, signs[0]).hypergraph
                if not multi_elements(h1, b):
                    continue  # second move is already local
                h2 = apply_local_complementation(h1, b, signs[1]).hypergraph
                if h2 == h or h2.max_cardinality() < 3:
                    continue
                net, predicted = complementation_net_operator(h, [(a, signs[0]), (b, signs[1])])
                if predicted != h2:
                    raise AssertionError("graphical prediction diverged from itself")
                ok, factors = is_product_operator(net, singletons)
                if not ok:
                    continue
                result.stats["product_hits"] += 1
                equivalent, _ = pauli_equivalent(h, h2)
                if equivalent:
                    result.stats["pauli_equivalent"] += 1
                    continue
                cert = EquivalenceCertificate(
                    "local_unitary_product", tuple(factors), verified=False
                )
                if not verify_certificate(cert, h, h2, tol):
                    continue
                cert = EquivalenceCertificate(
                    "local_unitary_product", tuple(factors), verified=True
                )
                result.pairs.append((h, h2, cert))
    return result
