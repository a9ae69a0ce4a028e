"""Ideal-logic (levelized) evaluation of gate kinds and structural netlists."""
from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Union

from .errors import ArityError, StructuralError, WiringError
from .gates import GateKind, behavioral_eval, eval_primitive
from .netlist import RAIL_LEVELS, BehavioralGate, Memristor, Netlist, RailTie, Transistor, flatten
from .trit import check_trit, nti, pti, sti, tmax_n, tmin_n
from .truthtable import TruthTable, input_tuples

Circuit = Union[Netlist, GateKind]

CELL_FUNCS = {
    "tmin": lambda xs: tmin_n(xs),
    "tmax": lambda xs: tmax_n(xs),
    "sti": lambda xs: sti(xs[0]),
    "pti": lambda xs: pti(xs[0]),
    "nti": lambda xs: nti(xs[0]),
    "dec13_y0": lambda xs: 1 if xs[0] == 0 else -1,
}


@dataclass(frozen=True)
class _Node:
    name: str
    inputs: tuple
    outputs: tuple
    fn: object


class CompiledCircuit:
    """A flattened netlist reduced to logic nodes in topological order."""

    def __init__(self, n: Netlist):
        flat = flatten(n)
        self.name = n.name
        self.inputs = flat.input_names
        self.outputs = flat.output_names
        self._in_nets = flat.input_nets
        self._out_nets = flat.output_nets
        covered = set()
        nodes = []
        for cell in flat.cells:
            if cell.kind not in CELL_FUNCS:
                raise StructuralError(f"cell {cell.name} has unknown kind {cell.kind!r}")
            fn = CELL_FUNCS[cell.kind]
            nodes.append(_Node(cell.name, cell.inputs, (cell.output,), lambda xs, fn=fn: (fn(xs),)))
            covered.update(cell.members)
        for c in flat.components:
            if isinstance(c, BehavioralGate):
                nodes.append(_Node(c.name, c.inputs, c.outputs, lambda xs, k=c.kind: eval_primitive(k, xs)))
            elif isinstance(c, RailTie):
                nodes.append(_Node(c.name, (), (c.net,), lambda xs, v=c.level: (v,)))
            elif isinstance(c, (Memristor, Transistor)) and c.name not in covered:
                raise StructuralError(f"device {c.name} belongs to no logic cell; use the analog backend")
        driver = {}
        for node in nodes:
            for net in node.outputs:
                if net in driver or net in RAIL_LEVELS or net in self._in_nets:
                    raise WiringError(f"net {net!r} has more than one driver")
                driver[net] = node
        graph = {}
        for node in nodes:
            deps = set()
            for net in node.inputs:
                if net in driver:
                    deps.add(driver[net].name)
                elif net not in RAIL_LEVELS and net not in self._in_nets:
                    raise WiringError(f"net {net!r} feeding {node.name} is undriven")
            graph[node.name] = deps
        for net in self._out_nets:
            if net not in driver and net not in RAIL_LEVELS and net not in self._in_nets:
                raise WiringError(f"output net {net!r} is unreachable")
        try:
            order = list(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise StructuralError(f"combinational cycle through {exc.args[1]}") from None
        by_name = {node.name: node for node in nodes}
        self._order = [by_name[name] for name in order]

    def __call__(self, inputs) -> list:
        inputs = [check_trit(x) for x in inputs]
        if len(inputs) != len(self._in_nets):
            raise ArityError(f"{self.name} takes {len(self._in_nets)} inputs, got {len(inputs)}")
        values = dict(RAIL_LEVELS)
        values.update(zip(self._in_nets, inputs))
        for node in self._order:
            outs = node.fn([values[n] for n in node.inputs])
            values.update(zip(node.outputs, outs))
        return [values[n] for n in self._out_nets]


def compile_circuit(circuit: Circuit):
    """Return ``(evaluate, input names, output names)``."""
    if isinstance(circuit, GateKind):
        return (lambda xs: behavioral_eval(circuit, xs)), circuit.inputs, circuit.outputs
    if isinstance(circuit, Netlist):
        c = CompiledCircuit(circuit)
        return c, c.inputs, c.outputs
    raise TypeError(f"cannot simulate {type(circuit).__name__}")


def eval_digital(circuit: Circuit, inputs) -> list:
    fn, _, _ = compile_circuit(circuit)
    return list(fn(list(inputs)))


def sweep(circuit: Circuit) -> TruthTable:
    """Exhaustive truth table over all 3**n inputs."""
    fn, ins, outs = compile_circuit(circuit)
    if len(ins) > 9:
        raise ArityError(f"{len(ins)} inputs is too many to enumerate")
    return TruthTable(ins, outs, tuple(tuple(fn(list(x))) for x in input_tuples(len(ins))))


def one_hot_patterns(n: int) -> list:
    """Encoder stimuli: +1 on a single line, -1 elsewhere (first line first)."""
    return [tuple(1 if i == j else -1 for i in range(n)) for j in range(n)]


def sweep_onehot(circuit: Circuit) -> list:
    """``[(inputs, outputs), ...]`` over the one-hot patterns only."""
    fn, ins, _ = compile_circuit(circuit)
    return [(p, tuple(fn(list(p)))) for p in one_hot_patterns(len(ins))]


def _as_table(x) -> TruthTable:
    return x if isinstance(x, TruthTable) else sweep(x)


def equiv(a, b) -> tuple:
    """``(equal, counterexamples)``; counterexamples are ``(inputs, out_a, out_b)``."""
    ta, tb = _as_table(a), _as_table(b)
    if (ta.arity_in, ta.arity_out) != (tb.arity_in, tb.arity_out):
        raise ArityError(f"arity mismatch: {ta.arity_in}->{ta.arity_out} vs {tb.arity_in}->{tb.arity_out}")
    cex = [(ins, ra, rb) for ins, ra, rb in zip(input_tuples(ta.arity_in), ta.rows, tb.rows) if ra != rb]
    return not cex, cex
