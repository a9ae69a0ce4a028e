"""Switch-level DC solver and power accounting.

``settle`` alternates a linear nodal solve of the resistive network with a
device update (memristor SET/RESET from the voltage across it, transistor
on/off from its gate drive) until the device assignment stops changing.
Rails, input ports and rail ties are ideal voltage sources.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .devices import State, memristor_next_state, switch_conducts
from .errors import ArityError, FloatingNodeError, SolverError, StructuralError, UnconvergedError
from .netlist import RAIL_LEVELS, BehavioralGate, Memristor, Netlist, RailTie, Transistor, flatten
from .trit import LevelMap, check_trit, trit_to_voltage, voltage_to_trit
from .truthtable import input_tuples


@dataclass(frozen=True)
class SolverSettings:
    max_iter: int = 32
    kcl_tol: float = 1e-9


@dataclass(frozen=True)
class SteadyState:
    inputs: tuple
    node_voltages: dict
    branch_currents: dict  # memristor plus->minus, transistor drain->source
    memristor_states: dict
    switch_states: dict
    converged: bool
    iterations: int
    kcl_residual: float
    oscillated: bool = False
    snapshots: tuple = ()  # dissipation of every solved configuration, in order
    output_nets: tuple = ()
    branch_terminals: dict = field(default_factory=dict)

    @property
    def device_states(self) -> dict:
        return {**{k: v.value for k, v in self.memristor_states.items()},
                **{k: ("on" if v else "off") for k, v in self.switch_states.items()}}


class AnalogCircuit:
    """A flattened netlist prepared for repeated DC solves."""

    def __init__(self, n: Netlist, levels: LevelMap = LevelMap(), settings: SolverSettings = SolverSettings()):
        flat = flatten(n)
        self.name = n.name
        self.levels = levels
        self.settings = settings
        self.input_nets = flat.input_nets
        self.output_names = flat.output_names
        self.output_nets = flat.output_nets
        self.memristors = []
        self.transistors = []
        fixed = {r: lvl * levels.vdd for r, lvl in RAIL_LEVELS.items()}
        for c in flat.components:
            if isinstance(c, BehavioralGate):
                raise StructuralError(f"{c.name} is a behavioral primitive; the analog backend needs devices")
            if isinstance(c, Memristor):
                self.memristors.append(c)
            elif isinstance(c, Transistor):
                self.transistors.append(c)
            elif isinstance(c, RailTie):
                fixed[c.net] = trit_to_voltage(c.level, levels)
        self.fixed = fixed
        self.terminals = {m.name: (m.plus, m.minus) for m in self.memristors}
        self.terminals.update({t.name: (t.model.drain, t.model.source) for t in self.transistors})
        branch_nets = list(self.terminals.values())
        nodes = []
        for pair in branch_nets:
            for net in pair:
                if net not in fixed and net not in self.input_nets and net not in nodes:
                    nodes.append(net)
        self.nodes = nodes
        self.index = {net: i for i, net in enumerate(nodes)}
        self._check_connected(branch_nets)
        for t in self.transistors:
            if not self._known(t.model.gate):
                raise FloatingNodeError(f"gate of {t.name} is on floating net {t.model.gate!r}")
        for net in self.output_nets:
            if not self._known(net):
                raise FloatingNodeError(f"output net {net!r} is not connected to any device")

    def _known(self, net):
        return net in self.index or net in self.fixed or net in self.input_nets

    def _check_connected(self, branch_nets):
        parent = {n: n for n in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        grounded = set()
        for a, b in branch_nets:
            ia, ib = a in parent, b in parent
            if ia and ib:
                parent[find(a)] = find(b)
            elif ia:
                grounded.add(a)
            elif ib:
                grounded.add(b)
        roots = {find(g) for g in grounded}
        floating = [n for n in self.nodes if find(n) not in roots]
        if floating:
            raise FloatingNodeError(f"nets with no path to a source: {floating}")

    # ------------------------------------------------------------ linear solve

    def _solve(self, source_v: dict, mem: dict, sw: dict) -> dict:
        n = len(self.nodes)
        G = np.zeros((n, n))
        rhs = np.zeros(n)
        for a, b, g in self._branches(mem, sw):
            ia, ib = self.index.get(a), self.index.get(b)
            if ia is not None:
                G[ia, ia] += g
                if ib is not None:
                    G[ia, ib] -= g
                else:
                    rhs[ia] += g * source_v[b]
            if ib is not None:
                G[ib, ib] += g
                if ia is not None:
                    G[ib, ia] -= g
                else:
                    rhs[ib] += g * source_v[a]
        try:
            v = np.linalg.solve(G, rhs) if n else np.zeros(0)
        except np.linalg.LinAlgError:
            raise FloatingNodeError("singular conductance matrix") from None
        volts = dict(source_v)
        volts.update(zip(self.nodes, v.tolist()))
        return volts

    def _branches(self, mem, sw):
        for m in self.memristors:
            yield m.plus, m.minus, 1.0 / m.model.resistance(mem[m.name])
        for t in self.transistors:
            yield t.model.drain, t.model.source, 1.0 / t.model.resistance(sw[t.name])

    def _currents(self, volts, mem, sw) -> dict:
        cur = {}
        for m in self.memristors:
            cur[m.name] = (volts[m.plus] - volts[m.minus]) / m.model.resistance(mem[m.name])
        for t in self.transistors:
            s = t.model
            cur[t.name] = (volts[s.drain] - volts[s.source]) / s.resistance(sw[t.name])
        return cur

    def _power(self, volts, mem, sw) -> float:
        total = 0.0
        for a, b, g in self._branches(mem, sw):
            dv = volts[a] - volts[b]
            total += dv * dv * g
        return total

    def _residual(self, volts, mem, sw) -> float:
        acc = np.zeros(len(self.nodes))
        for a, b, g in self._branches(mem, sw):
            i = (volts[a] - volts[b]) * g
            if a in self.index:
                acc[self.index[a]] += i
            if b in self.index:
                acc[self.index[b]] -= i
        return float(np.max(np.abs(acc))) if len(acc) else 0.0

    def _update(self, volts, mem):
        new_mem = {m.name: memristor_next_state(m.model, volts[m.plus] - volts[m.minus], mem[m.name])
                   for m in self.memristors}
        new_sw = {t.name: switch_conducts(t.model, volts) for t in self.transistors}
        return new_mem, new_sw

    # ------------------------------------------------------------ fixed point

    def source_voltages(self, inputs) -> dict:
        inputs = tuple(check_trit(x) for x in inputs)
        if len(inputs) != len(self.input_nets):
            raise ArityError(f"{self.name} takes {len(self.input_nets)} inputs, got {len(inputs)}")
        v = dict(self.fixed)
        for net, t in zip(self.input_nets, inputs):
            v[net] = trit_to_voltage(t, self.levels)
        return v

    def settle(self, inputs, initial: SteadyState | None = None) -> SteadyState:
        """Solve for ``inputs``.

        Without ``initial`` every memristor starts in HRS and switches are
        set from a first solve with every switch off.  With ``initial`` the
        device states of that solution are the starting point, which is how
        input transitions are modelled.
        """
        inputs = tuple(inputs)
        src = self.source_voltages(inputs)
        if initial is None:
            mem = {m.name: m.model.state for m in self.memristors}
            off = {t.name: False for t in self.transistors}
            sw = {t.name: switch_conducts(t.model, self._solve(src, mem, off)) for t in self.transistors}
        else:
            mem = dict(initial.memristor_states)
            sw = dict(initial.switch_states)
        seen = []
        snapshots = []
        for it in range(1, self.settings.max_iter + 1):
            volts = self._solve(src, mem, sw)
            snapshots.append(self._power(volts, mem, sw))
            new_mem, new_sw = self._update(volts, mem)
            if new_mem == mem and new_sw == sw:
                return self._state(inputs, volts, mem, sw, it, snapshots)
            seen.append((mem, sw))
            if (new_mem, new_sw) in seen:
                cycle = seen[seen.index((new_mem, new_sw)):]
                if len(cycle) != 2:
                    raise SolverError(f"{self.name}: device states cycle with period {len(cycle)}", cycle)
                best = min(cycle, key=lambda c: self._power(self._solve(src, *c), *c))
                volts = self._solve(src, *best)
                return self._state(inputs, volts, best[0], best[1], it, snapshots, oscillated=True)
            mem, sw = new_mem, new_sw
        raise UnconvergedError(f"{self.name}: no fixed point after {self.settings.max_iter} iterations",
                               seen[-2:])

    def _state(self, inputs, volts, mem, sw, it, snapshots, oscillated=False):
        residual = self._residual(volts, mem, sw)
        return SteadyState(inputs, volts, self._currents(volts, mem, sw), dict(mem), dict(sw),
                           residual < self.settings.kcl_tol, it, residual, oscillated, tuple(snapshots),
                           self.output_nets, self.terminals)


def settle(n: Netlist, inputs, m: LevelMap = LevelMap(), settings: SolverSettings = SolverSettings(),
           initial: SteadyState | None = None) -> SteadyState:
    return AnalogCircuit(n, m, settings).settle(inputs, initial)


def read_outputs(s: SteadyState, ports=None, m: LevelMap = LevelMap()) -> list:
    """Quantize the output voltages; ``ports`` defaults to every output net."""
    if not s.converged:
        raise UnconvergedError("cannot read outputs of an unconverged solution")
    nets = s.output_nets if ports is None else ports
    return [voltage_to_trit(s.node_voltages[net], m) for net in nets]


def static_power(s: SteadyState) -> float:
    """Sum of |V * I| over every memristor and transistor."""
    if not s.converged:
        raise UnconvergedError("static power of an unconverged solution")
    v = s.node_voltages
    total = 0.0
    for name, i in s.branch_currents.items():
        a, b = s.branch_terminals[name]
        total += abs((v[a] - v[b]) * i)
    return total


@dataclass(frozen=True)
class PowerReport:
    circuit: str
    static_per_input: dict  # input tuple -> W
    average: float
    dynamic: float
    max_instantaneous: float
    peak_input: tuple
    peak_transition: tuple | None
    oscillations: tuple = ()

    def to_csv(self, delimiter: str = ",") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(["inputs", "static_W"])
        for ins, p in self.static_per_input.items():
            w.writerow([" ".join(map(str, ins)), f"{p:.6e}"])
        w.writerow(["average", f"{self.average:.6e}"])
        w.writerow(["max_instantaneous", f"{self.max_instantaneous:.6e}"])
        w.writerow(["dynamic", f"{self.dynamic:.6e}"])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"circuit {self.circuit}"]
        for ins, p in self.static_per_input.items():
            lines.append(f"  static {' '.join(f'{x:2d}' for x in ins)} : {p * 1e6:12.6f} uW")
        lines.append(f"  average           : {self.average * 1e6:12.6f} uW")
        lines.append(f"  peak static       : {self.static_per_input[self.peak_input] * 1e6:12.6f} uW "
                     f"[{'&'.join(map(str, self.peak_input))}]")
        lines.append(f"  max instantaneous : {self.max_instantaneous * 1e6:12.6f} uW")
        lines.append(f"  dynamic           : {self.dynamic * 1e6:12.6f} uW")
        if self.peak_transition:
            a, b = self.peak_transition
            lines.append(f"  peak transition   : {a} -> {b}")
        if self.oscillations:
            lines.append(f"  oscillation resolved for inputs: {list(self.oscillations)}")
        return "\n".join(lines) + "\n"


def power_report(n: Netlist, m: LevelMap = LevelMap(), settings: SolverSettings = SolverSettings()) -> PowerReport:
    """Static power for every input tuple, their mean, and the dynamic figure.

    Instantaneous power is sampled on every solved device configuration
    while re-settling each transition between consecutive rows of the
    canonical input sweep, starting from the device states the previous row
    settled into.
    """
    ac = AnalogCircuit(n, m, settings)
    rows = input_tuples(len(ac.input_nets))
    states = {}
    statics = {}
    osc = []
    for r in rows:
        s = ac.settle(r)
        states[r] = s
        statics[r] = static_power(s)
        if s.oscillated:
            osc.append(r)
    average = sum(statics.values()) / len(statics)
    peak_input = max(statics, key=statics.get)
    max_inst = statics[peak_input]
    peak_transition = None
    for r0, r1 in zip(rows, rows[1:]):
        s = ac.settle(r1, initial=states[r0])
        if s.oscillated:
            osc.append((r0, r1))
        top = max(s.snapshots)
        if top > max_inst:
            max_inst, peak_transition = top, (r0, r1)
    return PowerReport(n.name, statics, average, abs(max_inst - average), max_inst, peak_input,
                       peak_transition, tuple(osc))
