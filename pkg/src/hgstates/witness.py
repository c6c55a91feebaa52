"""Closed-form Schmidt data and entanglement witnesses for three-uniform states.

All integer quantities come from exact arithmetic on (1+i)^k; floats only
appear in the final divisions so large-n values stay trustworthy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .hypergraph import Hypergraph, complete_three_uniform, is_three_uniform_connected
from .oracle import ReducedDensity, StateVector

GENERIC_ALPHA = 0.75


def gaussian_power(k: int) -> tuple[int, int]:
    """Exact real and imaginary parts of (1+i)^k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    re, im = 1, 0
    for _ in range(k):
        re, im = re - im, re + im
    return re, im


@dataclass(frozen=True)
class ReducedMatrixEntries:
    """Signed integer off-diagonals of the one-, two- and three-qubit reductions.

    ``rho12_low`` sits next to |00>, ``rho12_high`` next to |11>;
    ``rho123_low`` neighbours |000> and ``rho123_corner`` is the |000><111| term.
    """

    n: int
    rho1_offdiag: int
    rho12_low: int
    rho12_high: int
    rho123_low: int
    rho123_corner: int

    def __post_init__(self) -> None:
        if self.rho1_offdiag != self.rho12_low + self.rho12_high:
            raise ValueError("entry identity rho1 = low + high violated")


def reduced_matrix_entries(n: int) -> ReducedMatrixEntries:
    if n < 4:
        raise ValueError("need n >= 4")
    re1, im1 = gaussian_power(n - 1)
    re2, im2 = gaussian_power(n - 2)
    re3, im3 = gaussian_power(n - 3)
    return ReducedMatrixEntries(
        n=n,
        rho1_offdiag=re1 + im1,
        rho12_low=re2 + im2,
        rho12_high=re2 - im2,
        rho123_low=re3 + im3,
        rho123_corner=im3 - re3,
    )


# -- closed-form maximal squared Schmidt coefficients ---------------------------


def max_schmidt_one_vs_rest(n: int) -> float:
    """Largest squared Schmidt coefficient across a single qubit vs the rest."""
    if n < 4:
        raise ValueError("need n >= 4")
    r = n % 4
    if r == 0:
        return 0.5
    if r == 2:
        return 0.5 + 2.0 ** (-n / 2)
    return 0.5 + 2.0 ** (-(n + 1) / 2)


def max_schmidt_two_vs_rest(n: int) -> float:
    """Largest squared Schmidt coefficient across two qubits vs the rest."""
    if n < 4:
        raise ValueError("need n >= 4")
    return (3.0 + math.sqrt(1.0 + 2.0 ** (6 - n))) / 8.0


def max_schmidt_three_vs_rest(n: int) -> float:
    """Largest squared Schmidt coefficient across three qubits vs the rest."""
    if n < 6:
        raise ValueError("need n >= 6")
    r = n % 4
    k = n // 4
    if r == 0:
        return 0.25 + math.sqrt(48.0 + 2.0 ** (4 * k)) / 2.0 ** (2 * k + 3)
    if r == 1:
        return 0.25 + 2.0 ** (-2 * k - 1) + math.sqrt(16.0 + 2.0 ** (4 * k) + 2.0 ** (2 * k + 2)) / 2.0 ** (2 * k + 3)
    if r == 2:
        return 0.25 + 2.0 ** (-2 * k - 1) + (2.0 + 2.0 ** (2 * k)) / 2.0 ** (2 * k + 3)
    return 0.25 + 2.0 ** (-2 * k - 2) + math.sqrt(4.0 + 2.0 ** (4 * k) + 2.0 ** (2 * k + 1)) / 2.0 ** (2 * k + 3)


@dataclass(frozen=True)
class SchmidtExtremes:
    """Closed-form spectrum maxima for the complete three-uniform state."""

    n: int
    one_vs_rest: float
    two_vs_rest: float
    three_vs_rest: float | None
    residue: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda1": self.one_vs_rest,
            "lambda2": self.two_vs_rest,
            "lambda3": self.three_vs_rest,
            "residue_mod_4": self.residue,
        }


def schmidt_extremes(n: int) -> SchmidtExtremes:
    return SchmidtExtremes(
        n=n,
        one_vs_rest=max_schmidt_one_vs_rest(n),
        two_vs_rest=max_schmidt_two_vs_rest(n),
        three_vs_rest=max_schmidt_three_vs_rest(n) if n >= 6 else None,
        residue=n % 4,
    )


# -- explicit reduced density matrices ------------------------------------------


def one_qubit_reduced(n: int) -> ReducedDensity:
    e = reduced_matrix_entries(n)
    d = 1 << (n - 1)
    a = e.rho1_offdiag
    mat = np.array([[d, a], [a, d]], dtype=np.complex128) / (1 << n)
    return ReducedDensity((1,), mat)


def two_qubit_reduced(n: int) -> ReducedDensity:
    e = reduced_matrix_entries(n)
    d = 1 << (n - 2)
    lo, hi = e.rho12_low, e.rho12_high
    mat = np.array(
        [
            [d, lo, lo, 0],
            [lo, d, d, hi],
            [lo, d, d, hi],
            [0, hi, hi, d],
        ],
        dtype=np.complex128,
    ) / (1 << n)
    return ReducedDensity((1, 2), mat)


def three_qubit_reduced(n: int) -> ReducedDensity:
    if n < 6:
        raise ValueError("need n >= 6")
    e = reduced_matrix_entries(n)
    d = 1 << (n - 3)
    c = e.rho123_low
    b = e.rho123_corner
    mat = np.array(
        [
            [d, c, c, 0, c, 0, 0, b],
            [c, d, d, -b, d, -b, -b, 0],
            [c, d, d, -b, d, -b, -b, 0],
            [0, -b, -b, d, -b, d, d, -c],
            [c, d, d, -b, d, -b, -b, 0],
            [0, -b, -b, d, -b, d, d, -c],
            [0, -b, -b, d, -b, d, d, -c],
            [b, 0, 0, -c, 0, -c, -c, d],
        ],
        dtype=np.complex128,
    ) / (1 << n)
    return ReducedDensity((1, 2, 3), mat)


# -- witnesses -------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    """Projector-witness threshold: expectation alpha - overlap is negative
    only on states that are not biseparable."""

    alpha: float
    witness_kind: str  # "generic_3uniform" or "complete_3uniform"
    n: int
    one_vs_rest: float | None = None
    two_vs_rest: float | None = None
    three_vs_rest: float | None = None
    expectation: float | None = None
    detected: bool | None = None

    def evaluated(self, expectation: float) -> "WitnessReport":
        return replace(self, expectation=expectation, detected=bool(expectation < 0))

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "witness_kind": self.witness_kind,
            "n": self.n,
            "lambda1": self.one_vs_rest,
            "lambda2": self.two_vs_rest,
            "lambda3": self.three_vs_rest,
            "expectation": self.expectation,
            "detected": self.detected,
        }


def witness_alpha(h: Hypergraph) -> WitnessReport:
    """Witness constant: 3/4 for any connected three-uniform state, or the
    tight closed-form maximum for the complete one."""
    if not is_three_uniform_connected(h):
        raise ValueError("witness requires a connected three-uniform hypergraph")
    n = h.n
    if h == complete_three_uniform(n) and n >= 4:
        ext = schmidt_extremes(n)
        candidates = [ext.one_vs_rest, ext.two_vs_rest]
        # the three-vs-rest value exceeds 1/2 only at n=6; include it there
        if n == 6 and ext.three_vs_rest is not None:
            candidates.append(ext.three_vs_rest)
        return WitnessReport(
            alpha=max(candidates),
            witness_kind="complete_3uniform",
            n=n,
            one_vs_rest=ext.one_vs_rest,
            two_vs_rest=ext.two_vs_rest,
            three_vs_rest=ext.three_vs_rest,
        )
    return WitnessReport(alpha=GENERIC_ALPHA, witness_kind="generic_3uniform", n=n)


def witness_expectation(report: WitnessReport, s: StateVector, target: StateVector) -> float:
    """alpha minus the squared overlap with the target state."""
    if s.n != target.n:
        raise ValueError("state sizes differ")
    overlap = np.vdot(target.amps, s.amps)
    return float(report.alpha - abs(overlap) ** 2)


# -- the four-vs-four estimation window ------------------------------------------

ESTIMATION_WINDOW_CUT = (1, 2, 3, 4)


def estimation_window_hypergraph() -> Hypergraph:
    """Eight-qubit window of the even/even normal form around the cut.

    Obtainable from the n=12, p=8 normal form by Z-measuring qubits 1..4
    with outcome 0 and relabeling the remaining qubits to 1..8.
    """
    from .hypergraph import hypergraph

    return hypergraph(8, [(1, 2, 8), (3, 4, 8), (4, 5, 6), (4, 7, 8)])


def four_vs_four_schmidt_bound() -> float:
    """Closed-form measurement-tree estimate for the 4|4 squared Schmidt maximum.

    Terms: a double Bell-pair leaf, a claimed Bell-pair-times-small-window
    leaf, and a two-vs-four leaf, weighted by their branch probabilities.
    See :func:`estimation_window_report` for how the middle term compares
    with the exactly computed window.
    """
    return (
        0.25 * 0.25
        + 0.25 * (0.5 * max_schmidt_two_vs_rest(4))
        + 0.5 * max_schmidt_two_vs_rest(6)
    )


@dataclass(frozen=True)
class WindowReport:
    """Exact measurement-tree data for the eight-qubit estimation window.

    ``closed_form_bound`` is the literature value of the three-term sum; the
    middle term there assumes the Bell pair created by the first measurement
    factors out of its leaf, which fails for this window because the leaf's
    remaining edges share qubit 8 with the pair.  ``corrected_bound`` uses
    the exactly computed leaf maxima instead and is a true upper bound.
    """

    window: Hypergraph
    true_max: float
    closed_form_bound: float
    leaf_probabilities: tuple[float, float, float]
    leaf_maxima: tuple[float, float, float]  # (double-pair, pair-delete, plain)
    claimed_leaf_maxima: tuple[float, float, float]
    corrected_bound: float

    @property
    def within_closed_form_bound(self) -> bool:
        return self.true_max <= self.closed_form_bound + 1e-10

    @property
    def within_corrected_bound(self) -> bool:
        return self.true_max <= self.corrected_bound + 1e-10

    @property
    def below_one_half(self) -> bool:
        return self.true_max < 0.5

    def to_json_dict(self) -> dict:
        return {
            "window": self.window.to_json_dict(),
            "true_max": self.true_max,
            "closed_form_bound": self.closed_form_bound,
            "corrected_bound": self.corrected_bound,
            "leaf_probabilities": list(self.leaf_probabilities),
            "leaf_maxima": list(self.leaf_maxima),
            "claimed_leaf_maxima": list(self.claimed_leaf_maxima),
            "within_closed_form_bound": self.within_closed_form_bound,
            "within_corrected_bound": self.within_corrected_bound,
            "below_one_half": self.below_one_half,
        }


def estimation_window_report() -> WindowReport:
    """Run the two-measurement tree on the window and compare all bounds.

    Checks on the way: both measurements split 50/50, the first toggle
    branch introduces the {2,8} edge, the second the {4,6} edge.
    """
    from .oracle import build_state, project_z, schmidt_spectrum
    from .rules import measure_z

    window = estimation_window_hypergraph()
    state = build_state(window)
    cut = ESTIMATION_WINDOW_CUT
    true_max = float(schmidt_spectrum(state, cut)[0])

    p_pair, _ = project_z(state, 1, 1)
    if abs(p_pair - 0.5) > 1e-12:
        raise AssertionError("first measurement branches are not uniform")
    with_pair = measure_z(window, 1, 1).hypergraph
    if not with_pair.has_edge((2, 8)):
        raise AssertionError("toggle branch did not inherit the {2,8} edge")
    plain = measure_z(window, 1, 0).hypergraph

    q_pair, _ = project_z(build_state(with_pair), 5, 1)
    if abs(q_pair - 0.5) > 1e-12:
        raise AssertionError("second measurement branches are not uniform")
    pair_pair = measure_z(with_pair, 5, 1).hypergraph
    if not pair_pair.has_edge((4, 6)):
        raise AssertionError("toggle branch did not inherit the {4,6} edge")
    pair_del = measure_z(with_pair, 5, 0).hypergraph

    probs = (0.25, 0.25, 0.5)
    maxima = tuple(
        float(schmidt_spectrum(build_state(h), cut)[0]) for h in (pair_pair, pair_del, plain)
    )
    claimed = (0.25, 0.5 * max_schmidt_two_vs_rest(4), max_schmidt_two_vs_rest(6))
    corrected = sum(p * v for p, v in zip(probs, maxima))
    return WindowReport(
        window=window,
        true_max=true_max,
        closed_form_bound=four_vs_four_schmidt_bound(),
        leaf_probabilities=probs,
        leaf_maxima=maxima,
        claimed_leaf_maxima=claimed,
        corrected_bound=float(corrected),
    )
