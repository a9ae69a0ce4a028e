"""Static models of the bistable memristor and the threshold-switch transistor.

The memristor is a two-state resistor: a voltage at or above ``v_set`` across
it (plus electrode minus minus electrode) sets it to LRS, at or below
``v_reset`` resets it to HRS, anything in between leaves it alone.
Transistors are ideal switches with an on and an off resistance.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import WiringError

# Solved node voltages carry rounding error; a threshold reached exactly in
# exact arithmetic (e.g. 0.5 V across a symmetric divider) must still fire.
THRESHOLD_EPS = 1e-9


class State(enum.Enum):
    HRS = "HRS"
    LRS = "LRS"


@dataclass(frozen=True)
class MemristorModel:
    r_hrs: float = 1e6
    r_lrs: float = 1e4
    v_set: float = 0.5
    v_reset: float = -0.35
    state: State = State.HRS

    def __post_init__(self):
        if not self.r_hrs > self.r_lrs > 0:
            raise ValueError(f"need r_hrs > r_lrs > 0, got {self.r_hrs}, {self.r_lrs}")
        if not self.v_set > 0 > self.v_reset:
            raise ValueError(f"need v_set > 0 > v_reset, got {self.v_set}, {self.v_reset}")

    def resistance(self, state: State | None = None) -> float:
        state = self.state if state is None else state
        return self.r_lrs if state is State.LRS else self.r_hrs

    def with_state(self, state: State) -> "MemristorModel":
        return replace(self, state=state)


def memristor_next_state(m: MemristorModel, v_across: float, state: State | None = None) -> State:
    """State after applying ``v_across`` (plus minus minus electrode).

    Returns the current state when the voltage is inside the retention window.
    """
    current = m.state if state is None else state
    if v_across >= m.v_set - THRESHOLD_EPS:
        return State.LRS
    if v_across <= m.v_reset + THRESHOLD_EPS:
        return State.HRS
    return current


class SwitchKind(enum.Enum):
    NMOS = "nmos"
    PMOS = "pmos"


@dataclass(frozen=True)
class SwitchModel:
    kind: SwitchKind
    v_th: float
    gate: str
    drain: str
    source: str
    r_on: float = 100.0
    r_off: float = 1e8

    def __post_init__(self):
        if not self.r_off > self.r_on > 0:
            raise ValueError(f"need r_off > r_on > 0, got {self.r_on}, {self.r_off}")
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", SwitchKind(self.kind.lower()))

    def resistance(self, on: bool) -> float:
        return self.r_on if on else self.r_off


def switch_conducts(s: SwitchModel, node_voltages: Mapping[str, float]) -> bool:
    for net in (s.gate, s.drain, s.source):
        if net not in node_voltages:
            raise WiringError(f"switch terminal on unknown net {net!r}")
    vg = node_voltages[s.gate]
    vs = node_voltages[s.source]
    if s.kind is SwitchKind.NMOS:
        return vg - vs >= s.v_th
    return vs - vg >= abs(s.v_th)
