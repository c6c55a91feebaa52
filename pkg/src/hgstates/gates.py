"""Gate descriptions shared by the rewrite engine and the dense oracle.

A :class:`GateOp` is a tagged record; the JSON wire format uses the same
kind names, e.g. ``{"gate": "CNOT", "control": 1, "target": 2}`` and
``{"gate": "TAU", "vertex": 1, "sign": "+"}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

PHASE = "PHASE"
X = "X"
Z = "Z"
CNOT = "CNOT"
EXT_CNOT = "EXT_CNOT"
TAU = "TAU"
SQRT_PHASE = "SQRT_PHASE"
SQRT_X = "SQRT_X"
SQRT_Z = "SQRT_Z"
MEASURE_Z = "MEASURE_Z"

ALL_KINDS = frozenset(
    {PHASE, X, Z, CNOT, EXT_CNOT, TAU, SQRT_PHASE, SQRT_X, SQRT_Z, MEASURE_Z}
)
# Gates with a hypergraph-to-hypergraph rule; the square roots are oracle-only.
GRAPHICAL_KINDS = frozenset({PHASE, X, Z, CNOT, EXT_CNOT, TAU, MEASURE_Z})


@dataclass(frozen=True)
class GateOp:
    kind: str
    edge: tuple[int, ...] | None = None
    vertex: int | None = None
    control: int | None = None
    controls: tuple[int, ...] | None = None
    target: int | None = None
    sign: int | None = None
    outcome: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unsupported gate kind {self.kind!r}")
        if self.kind in (PHASE, SQRT_PHASE):
            if not self.edge:
                raise ValueError(f"{self.kind} needs a nonempty edge")
        if self.kind in (X, Z, TAU, SQRT_X, SQRT_Z, MEASURE_Z) and self.vertex is None:
            raise ValueError(f"{self.kind} needs a vertex")
        if self.kind == CNOT:
            if self.control is None or self.target is None:
                raise ValueError("CNOT needs control and target")
            if self.control == self.target:
                raise ValueError("CNOT control and target must differ")
        if self.kind == EXT_CNOT:
            if not self.controls or self.target is None:
                raise ValueError("EXT_CNOT needs controls and a target")
            if self.target in self.controls:
                raise ValueError("EXT_CNOT target must not be a control")
            if len(set(self.controls)) != len(self.controls):
                raise ValueError("EXT_CNOT controls must be distinct")
        if self.kind in (TAU, SQRT_PHASE, SQRT_X, SQRT_Z) and self.sign not in (1, -1):
            raise ValueError(f"{self.kind} needs sign +1 or -1")
        if self.kind == MEASURE_Z and self.outcome not in (0, 1):
            raise ValueError("MEASURE_Z needs outcome 0 or 1")

    def support(self) -> frozenset[int]:
        out: set[int] = set()
        if self.edge:
            out.update(self.edge)
        if self.vertex is not None:
            out.add(self.vertex)
        if self.control is not None:
            out.add(self.control)
        if self.controls:
            out.update(self.controls)
        if self.target is not None:
            out.add(self.target)
        return frozenset(out)

    def is_graphical(self) -> bool:
        return self.kind in GRAPHICAL_KINDS


def phase_gate(edge: Iterable[int]) -> GateOp:
    return GateOp(PHASE, edge=tuple(sorted(edge)))


def x_gate(vertex: int) -> GateOp:
    return GateOp(X, vertex=vertex)


def z_gate(vertex: int) -> GateOp:
    return GateOp(Z, vertex=vertex)


def cnot_gate(control: int, target: int) -> GateOp:
    return GateOp(CNOT, control=control, target=target)


def ext_cnot_gate(controls: Iterable[int], target: int) -> GateOp:
    return GateOp(EXT_CNOT, controls=tuple(sorted(controls)), target=target)


def complementation_gate(vertex: int, sign: int = 1) -> GateOp:
    return GateOp(TAU, vertex=vertex, sign=sign)


def sqrt_phase_gate(edge: Iterable[int], sign: int = 1) -> GateOp:
    return GateOp(SQRT_PHASE, edge=tuple(sorted(edge)), sign=sign)


def sqrt_x_gate(vertex: int, sign: int = 1) -> GateOp:
    return GateOp(SQRT_X, vertex=vertex, sign=sign)


def sqrt_z_gate(vertex: int, sign: int = 1) -> GateOp:
    return GateOp(SQRT_Z, vertex=vertex, sign=sign)


def measure_z_gate(vertex: int, outcome: int) -> GateOp:
    return GateOp(MEASURE_Z, vertex=vertex, outcome=outcome)


def gate_to_json_dict(g: GateOp) -> dict:
    out: dict = {"gate": g.kind}
    if g.edge is not None:
        out["edge"] = list(g.edge)
    if g.vertex is not None:
        out["vertex"] = g.vertex
    if g.control is not None:
        out["control"] = g.control
    if g.controls is not None:
        out["controls"] = list(g.controls)
    if g.target is not None:
        out["target"] = g.target
    if g.sign is not None:
        out["sign"] = "+" if g.sign > 0 else "-"
    if g.outcome is not None:
        out["outcome"] = g.outcome
    return out


def gate_from_json_dict(data: dict) -> GateOp:
    if not isinstance(data, dict) or "gate" not in data:
        raise ValueError("gate JSON needs a 'gate' field")
    kind = data["gate"]
    sign = data.get("sign")
    if sign is not None:
        if sign in ("+", "+1", 1):
            sign = 1
        elif sign in ("-", "-1", -1):
            sign = -1
        else:
            raise ValueError(f"bad sign {sign!r}")
    return GateOp(
        kind=kind,
        edge=tuple(data["edge"]) if "edge" in data else None,
        vertex=data.get("vertex"),
        control=data.get("control"),
        controls=tuple(data["controls"]) if "controls" in data else None,
        target=data.get("target"),
        sign=sign,
        outcome=data.get("outcome"),
    )


def gates_to_json(ops: Sequence[GateOp]) -> str:
    return json.dumps([gate_to_json_dict(g) for g in ops])


def gates_from_json(text: str) -> tuple[GateOp, ...]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("gate sequence JSON must be a list")
    return tuple(gate_from_json_dict(d) for d in data)


def random_graphical_gate(rng: np.random.Generator, n: int, kind: str | None = None) -> GateOp:
    """Sample a graphical gate instance with support inside ``1..n``."""
    kinds = [PHASE, X, Z, TAU, MEASURE_Z]
    if n >= 2:
        kinds += [CNOT, EXT_CNOT]
    if kind is None:
        kind = kinds[int(rng.integers(len(kinds)))]
    if kind == PHASE:
        return phase_gate(vertices_of_random_subset(rng, n))
    if kind == X:
        return x_gate(int(rng.integers(1, n + 1)))
    if kind == Z:
        return z_gate(int(rng.integers(1, n + 1)))
    if kind == TAU:
        return complementation_gate(int(rng.integers(1, n + 1)), 1 if rng.integers(2) else -1)
    if kind == MEASURE_Z:
        return measure_z_gate(int(rng.integers(1, n + 1)), int(rng.integers(2)))
    if kind == CNOT:
        c, t = rng.choice(np.arange(1, n + 1), size=2, replace=False)
        return cnot_gate(int(c), int(t))
    if kind == EXT_CNOT:
        t = int(rng.integers(1, n + 1))
        rest = [v for v in range(1, n + 1) if v != t]
        k = int(rng.integers(1, min(4, len(rest)) + 1))
        controls = rng.choice(rest, size=k, replace=False)
        return ext_cnot_gate((int(c) for c in controls), t)
    raise ValueError(f"cannot sample kind {kind!r}")


def vertices_of_random_subset(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    mask = int(rng.integers(1, 1 << n))
    return tuple(v for v in range(1, n + 1) if (mask >> (v - 1)) & 1)
