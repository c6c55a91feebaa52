"""Dense state-vector ground truth for the graphical rewrite rules.

Every gate is applied as an exact unitary (or projector branch) on a full
2^n amplitude vector, so rewrite rules can be checked against linear
algebra that shares no code with the rule engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import gates as G
from .hypergraph import (
    Hypergraph,
    NotAHypergraphState,
    adjacency,
    flip_bit_order,
    hypergraph_from_sign,
    mask_from_vertices,
    sign_function,
    SignFunction,
)

MAX_STATE_QUBITS = 20
MAX_OPERATOR_QUBITS = 12

_SQRT_X = {
    1: np.array([[0.5 + 0.5j, 0.5 - 0.5j], [0.5 - 0.5j, 0.5 + 0.5j]]),
    -1: np.array([[0.5 - 0.5j, 0.5 + 0.5j], [0.5 + 0.5j, 0.5 - 0.5j]]),
}


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes; qubit 1 is the most significant index bit."""

    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_STATE_QUBITS:
            raise ValueError(f"state size n={self.n} outside 1..{MAX_STATE_QUBITS}")
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise ValueError("amplitude vector has wrong length")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized (norm {norm})")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def amplitude(self, bits: str) -> complex:
        return complex(self.amps[int(bits, 2)])


@dataclass(frozen=True, eq=False)
class DenseOperator:
    n: int
    matrix: np.ndarray
    unitary: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_OPERATOR_QUBITS:
            raise ValueError(f"operator size n={self.n} outside 1..{MAX_OPERATOR_QUBITS}")
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = 1 << self.n
        if mat.shape != (dim, dim):
            raise ValueError("operator matrix has wrong shape")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def check_unitary(self, tol: float = 1e-10) -> bool:
        dim = self.matrix.shape[0]
        return bool(np.allclose(self.matrix @ self.matrix.conj().T, np.eye(dim), atol=tol))

    def apply(self, s: StateVector) -> StateVector:
        if s.n != self.n:
            raise ValueError("operator and state sizes differ")
        return StateVector(s.n, self.matrix @ s.amps)


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    """Partial trace onto ``kept`` qubits (ascending; first kept qubit is MSB)."""

    kept: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = 1 << len(self.kept)
        if mat.shape != (dim, dim):
            raise ValueError("reduced matrix has wrong shape")
        if not np.allclose(mat, mat.conj().T, atol=1e-10):
            raise ValueError("reduced matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > 1e-10:
            raise ValueError("reduced matrix does not have unit trace")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def eigenvalues(self) -> np.ndarray:
        vals = np.linalg.eigvalsh(self.matrix)[::-1]
        return np.clip(vals, 0.0, None)


@dataclass(frozen=True)
class ActingEdgeCounts:
    """Edge counts against a basis string on the first n-1 qubits."""

    m_x: int
    m_x_n: int


# -- cached index helpers ----------------------------------------------------


@lru_cache(maxsize=None)
def _acting_mask(n: int, edge_mask: int) -> np.ndarray:
    """Boolean vector over basis indices where all vertices of the edge are 1."""
    bm = flip_bit_order(edge_mask, n)
    x = np.arange(1 << n)
    cond = (x & bm) == bm
    cond.flags.writeable = False
    return cond


@lru_cache(maxsize=None)
def _bit_set_mask(n: int, vertex: int) -> np.ndarray:
    return _acting_mask(n, 1 << (vertex - 1))


@lru_cache(maxsize=None)
def _x_permutation(n: int, vertex: int) -> np.ndarray:
    perm = np.arange(1 << n) ^ (1 << (n - vertex))
    perm.flags.writeable = False
    return perm


@lru_cache(maxsize=None)
def _controlled_flip_permutation(n: int, controls_mask: int, target: int) -> np.ndarray:
    x = np.arange(1 << n)
    bm = flip_bit_order(controls_mask, n)
    tbit = 1 << (n - target)
    perm = np.where((x & bm) == bm, x ^ tbit, x)
    perm.flags.writeable = False
    return perm


def _apply_single_qubit(amps: np.ndarray, n: int, vertex: int, m2: np.ndarray) -> np.ndarray:
    arr = amps.reshape(1 << (vertex - 1), 2, -1)
    out = np.empty_like(arr)
    out[:, 0, :] = m2[0, 0] * arr[:, 0, :] + m2[0, 1] * arr[:, 1, :]
    out[:, 1, :] = m2[1, 0] * arr[:, 0, :] + m2[1, 1] * arr[:, 1, :]
    return out.reshape(-1)


# -- construction and comparison ---------------------------------------------


def build_state(h: Hypergraph) -> StateVector:
    """Equal-magnitude superposition with signs from the edge-parity function."""
    if h.n > MAX_STATE_QUBITS:
        raise ValueError(f"state for n={h.n} exceeds the n<={MAX_STATE_QUBITS} cap")
    table = sign_function(h).as_array()
    amps = np.where(table, -1.0, 1.0).astype(np.complex128) / math.sqrt(1 << h.n)
    return StateVector(h.n, amps)


def count_acting_edges(h: Hypergraph, x: str | Sequence[int]) -> ActingEdgeCounts:
    """Count edges acting on ``x`` and on ``x`` with 1 appended at qubit n."""
    bits = [int(b) for b in x]
    if len(bits) != h.n - 1 or any(b not in (0, 1) for b in bits):
        raise ValueError("x must be a bit string on the first n-1 qubits")
    ones = {i + 1 for i, b in enumerate(bits) if b}
    ones_full = ones | {h.n}
    m_x = m_x_n = 0
    for mask in h.edges:
        vs = set()
        m = mask
        v = 1
        while m:
            if m & 1:
                vs.add(v)
            m >>= 1
            v += 1
        if vs <= ones:
            m_x += 1
        if vs <= ones_full:
            m_x_n += 1
    return ActingEdgeCounts(m_x, m_x_n)


def equal_up_to_global_phase(s1: StateVector, s2: StateVector, tol: float = 1e-10) -> bool:
    """Amplitude-wise equality after fixing the phase at the largest amplitude."""
    if s1.n != s2.n:
        raise ValueError("states have different sizes")
    a, b = s1.amps, s2.amps
    k = int(np.argmax(np.abs(a) + np.abs(b)))
    if abs(a[k]) < tol or abs(b[k]) < tol:
        return bool(np.max(np.abs(a - b)) <= tol)
    phase = b[k] / a[k]
    phase /= abs(phase)
    return bool(np.max(np.abs(b - phase * a)) <= tol)


def extract_hypergraph(s: StateVector, tol: float = 1e-10) -> Hypergraph:
    """Invert :func:`build_state`; raises :class:`NotAHypergraphState` otherwise."""
    target = 2.0 ** (-s.n / 2)
    mags = np.abs(s.amps)
    if np.max(np.abs(mags - target)) > tol:
        raise NotAHypergraphState("amplitudes do not have uniform magnitude")
    phase = s.amps[0] / abs(s.amps[0])
    table = ((s.amps / phase).real < 0).astype(np.uint8)
    expected = np.where(table, -1.0, 1.0) * (phase * target)
    if np.max(np.abs(s.amps - expected)) > tol:
        raise NotAHypergraphState("amplitudes are not +- one common phase")
    h, _ = hypergraph_from_sign(SignFunction(s.n, table.tobytes()))
    return h


# -- gate application ---------------------------------------------------------


def project_z(s: StateVector, vertex: int, outcome: int) -> tuple[float, StateVector]:
    """Projective Z-measurement branch: probability and renormalized state."""
    if not 1 <= vertex <= s.n:
        raise ValueError(f"vertex {vertex} outside 1..{s.n}")
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    cond = _bit_set_mask(s.n, vertex)
    if outcome == 0:
        cond = ~cond
    kept = np.where(cond, s.amps, 0.0)
    prob = float(np.vdot(kept, kept).real)
    if prob < 1e-12:
        raise ValueError("branch has zero probability")
    return prob, StateVector(s.n, kept / math.sqrt(prob))


def apply_complementation_factors(s: StateVector, h: Hypergraph, vertex: int, sign: int) -> StateVector:
    """Apply sqrt-phase factors on the adjacency of ``vertex``, then sqrt-X.

    The adjacency is taken from ``h``, which must describe ``s``.
    """
    elems = adjacency(h, (vertex,)).elements
    cnt = np.zeros(1 << s.n, dtype=np.int64)
    for m in elems:
        cnt += _acting_mask(s.n, m)
    # factor (-sign)*i per acting adjacency element
    i_unit = -1j if sign > 0 else 1j
    lut = np.array([1.0 + 0j, i_unit, -1.0 + 0j, -i_unit])
    amps = s.amps * lut[cnt & 3]
    amps = _apply_single_qubit(amps, s.n, vertex, _SQRT_X[sign])
    return StateVector(s.n, amps)


def apply_gate(s: StateVector, g: G.GateOp) -> StateVector:
    """Exact action of a gate; measurement branches are renormalized."""
    n = s.n
    if any(v < 1 or v > n for v in g.support()):
        raise ValueError(f"gate support {sorted(g.support())} outside 1..{n}")
    if g.kind == G.PHASE:
        cond = _acting_mask(n, mask_from_vertices(g.edge, n))
        amps = s.amps.copy()
        amps[cond] = -amps[cond]
        return StateVector(n, amps)
    if g.kind == G.SQRT_PHASE:
        cond = _acting_mask(n, mask_from_vertices(g.edge, n))
        amps = s.amps.copy()
        amps[cond] = amps[cond] * (1j * g.sign)
        return StateVector(n, amps)
    if g.kind == G.Z:
        cond = _bit_set_mask(n, g.vertex)
        amps = s.amps.copy()
        amps[cond] = -amps[cond]
        return StateVector(n, amps)
    if g.kind == G.SQRT_Z:
        cond = _bit_set_mask(n, g.vertex)
        amps = s.amps.copy()
        amps[cond] = amps[cond] * (1j * g.sign)
        return StateVector(n, amps)
    if g.kind == G.X:
        return StateVector(n, s.amps[_x_permutation(n, g.vertex)])
    if g.kind == G.SQRT_X:
        return StateVector(n, _apply_single_qubit(s.amps, n, g.vertex, _SQRT_X[g.sign]))
    if g.kind == G.CNOT:
        perm = _controlled_flip_permutation(n, 1 << (g.control - 1), g.target)
        return StateVector(n, s.amps[perm])
    if g.kind == G.EXT_CNOT:
        perm = _controlled_flip_permutation(n, mask_from_vertices(g.controls, n), g.target)
        return StateVector(n, s.amps[perm])
    if g.kind == G.MEASURE_Z:
        _, out = project_z(s, g.vertex, g.outcome)
        return out
    if g.kind == G.TAU:
        h = extract_hypergraph(s)
        return apply_complementation_factors(s, h, g.vertex, g.sign)
    raise ValueError(f"unsupported gate kind {g.kind!r}")


def with_inserted_qubit(s: StateVector, position: int, bit: int) -> StateVector:
    """Tensor a basis qubit into the state at a 1-based qubit position."""
    if not 1 <= position <= s.n + 1:
        raise ValueError("position outside 1..n+1")
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    arr = s.amps.reshape(1 << (position - 1), -1)
    out = np.zeros((arr.shape[0], 2, arr.shape[1]), dtype=np.complex128)
    out[:, bit, :] = arr
    return StateVector(s.n + 1, out.reshape(-1))


# -- reductions and spectra ----------------------------------------------------


def reduced_density(s: StateVector, kept: Iterable[int]) -> ReducedDensity:
    """Partial trace over the complement of ``kept``."""
    kept_t = tuple(sorted(set(int(v) for v in kept)))
    if not kept_t or len(kept_t) >= s.n:
        raise ValueError("kept qubits must be a nonempty proper subset")
    if kept_t[0] < 1 or kept_t[-1] > s.n:
        raise ValueError("kept qubit outside 1..n")
    axes = [v - 1 for v in kept_t]
    others = [k for k in range(s.n) if k not in axes]
    tensor = s.amps.reshape([2] * s.n)
    mat = np.transpose(tensor, axes + others).reshape(1 << len(axes), -1)
    return ReducedDensity(kept_t, mat @ mat.conj().T)


def schmidt_spectrum(s: StateVector, side: Iterable[int]) -> np.ndarray:
    """Descending squared Schmidt coefficients across ``side`` vs the rest."""
    return reduced_density(s, side).eigenvalues()


def max_schmidt_over_bipartitions(s: StateVector) -> float:
    """Largest squared Schmidt coefficient over every bipartition."""
    from itertools import combinations

    best = 0.0
    rest = list(range(2, s.n + 1))
    for k in range(0, (s.n - 2) // 2 + 1):
        for extra in combinations(rest, k):
            side = (1,) + extra
            best = max(best, float(schmidt_spectrum(s, side)[0]))
    return best


# -- dense operators ------------------------------------------------------------


def gate_unitary(g: G.GateOp, n: int) -> DenseOperator:
    """Full matrix of a fixed gate; refuses state-dependent or branch gates."""
    if g.kind == G.TAU:
        raise ValueError("TAU depends on the hypergraph; use complementation_unitary")
    if g.kind == G.MEASURE_Z:
        raise ValueError("MEASURE_Z is not unitary")
    if any(v < 1 or v > n for v in g.support()):
        raise ValueError("gate support outside 1..n")
    dim = 1 << n
    if g.kind in (G.PHASE, G.SQRT_PHASE, G.Z, G.SQRT_Z):
        if g.kind in (G.PHASE, G.SQRT_PHASE):
            cond = _acting_mask(n, mask_from_vertices(g.edge, n))
        else:
            cond = _bit_set_mask(n, g.vertex)
        factor = -1.0 if g.kind in (G.PHASE, G.Z) else 1j * g.sign
        diag = np.where(cond, factor, 1.0).astype(np.complex128)
        return DenseOperator(n, np.diag(diag))
    if g.kind in (G.X, G.CNOT, G.EXT_CNOT):
        if g.kind == G.X:
            perm = _x_permutation(n, g.vertex)
        elif g.kind == G.CNOT:
            perm = _controlled_flip_permutation(n, 1 << (g.control - 1), g.target)
        else:
            perm = _controlled_flip_permutation(n, mask_from_vertices(g.controls, n), g.target)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[perm, np.arange(dim)] = 1.0
        return DenseOperator(n, mat)
    if g.kind == G.SQRT_X:
        eye_pre = np.eye(1 << (g.vertex - 1))
        eye_post = np.eye(1 << (n - g.vertex))
        return DenseOperator(n, np.kron(np.kron(eye_pre, _SQRT_X[g.sign]), eye_post))
    raise ValueError(f"unsupported gate kind {g.kind!r}")


def compose(ops: Sequence[G.GateOp], n: int | None = None) -> DenseOperator:
    """Matrix product of the gates, rightmost acting first."""
    if n is None:
        supports = [max(g.support(), default=0) for g in ops]
        n = max(supports, default=0)
        if n == 0:
            raise ValueError("cannot infer qubit count from an empty sequence")
    if n > MAX_OPERATOR_QUBITS:
        raise ValueError(f"operator for n={n} exceeds the n<={MAX_OPERATOR_QUBITS} cap")
    mat = np.eye(1 << n, dtype=np.complex128)
    for g in ops:
        mat = mat @ gate_unitary(g, n).matrix
    return DenseOperator(n, mat)


def complementation_unitary(h: Hypergraph, vertex: int, sign: int) -> DenseOperator:
    """Dense sqrt-X times adjacency sqrt-phase product for a given hypergraph."""
    if h.n > MAX_OPERATOR_QUBITS:
        raise ValueError(f"operator for n={h.n} exceeds the n<={MAX_OPERATOR_QUBITS} cap")
    n = h.n
    elems = adjacency(h, (vertex,)).elements
    cnt = np.zeros(1 << n, dtype=np.int64)
    for m in elems:
        cnt += _acting_mask(n, m)
    i_unit = -1j if sign > 0 else 1j
    lut = np.array([1.0 + 0j, i_unit, -1.0 + 0j, -i_unit])
    diag = lut[cnt & 3]
    sx = gate_unitary(G.sqrt_x_gate(vertex, sign), n).matrix
    return DenseOperator(n, sx * diag[None, :])


def is_product_operator(
    op: DenseOperator, parts: Sequence[Iterable[int]], tol: float = 1e-9
) -> tuple[bool, list[np.ndarray] | None]:
    """Operator-Schmidt rank-1 test across every adjacent cut of a partition.

    Returns the per-part factor matrices (ordered as ``parts``) when the
    operator is a tensor product over the partition.
    """
    part_lists = [tuple(sorted(set(int(v) for v in p))) for p in parts]
    flat = [v for p in part_lists for v in p]
    if sorted(flat) != list(range(1, op.n + 1)):
        raise ValueError("parts must partition 1..n")
    order = flat
    axes = [v - 1 for v in order]
    tensor = op.matrix.reshape([2] * (2 * op.n))
    tensor = np.transpose(tensor, axes + [op.n + a for a in axes])
    rest = tensor.reshape(1 << op.n, 1 << op.n)
    factors: list[np.ndarray] = []
    for part in part_lists[:-1]:
        d_a = 1 << len(part)
        d_b = rest.shape[0] // d_a
        rearranged = (
            rest.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)
        )
        u, sv, vh = np.linalg.svd(rearranged, full_matrices=False)
        if sv[0] <= tol:
            return False, None
        if len(sv) > 1 and sv[1] > tol * sv[0]:
            return False, None
        scale = math.sqrt(sv[0])
        factors.append((u[:, 0] * scale).reshape(d_a, d_a))
        rest = (vh[0] * scale).reshape(d_b, d_b)
    factors.append(rest)
    return True, factors
