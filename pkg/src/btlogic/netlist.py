"""Hierarchical component-level netlists.

A :class:`Netlist` holds nets, device components (memristors, transistors),
behavioral primitives, rail ties, *cells* and child instances.  Cells are
annotations written by the gate builders: they group device components into
a logical gate (``tmin``, ``tmax``, ``sti`` ...) so the digital simulator can
evaluate a structural netlist without device physics.  Cells are renamed
along with everything else when a hierarchy is flattened.

Rail nets ``VDD``, ``GND`` and ``VNEG`` are global: they are never prefixed
during flattening and carry logic levels +1, 0 and -1.

File format
-----------
``write_netlist`` emits JSON (``schema: btlogic.netlist``, ``version: 1``)::

    {"schema": "btlogic.netlist", "version": 1, "top": "<name>",
     "definitions": {"<name>": {
         "nets": [...], "rails": {"VDD": 1, ...},
         "ports": {"inputs": [[port, net], ...], "outputs": [...]},
         "components": [{"type": "memristor", "name", "plus", "minus",
                         "r_hrs", "r_lrs", "v_set", "v_reset", "state"},
                        {"type": "transistor", "name", "kind", "gate",
                         "drain", "source", "v_th", "r_on", "r_off"},
                        {"type": "behavioral", "name", "kind", "inputs",
                         "outputs"},
                        {"type": "railtie", "name", "net", "level"}],
         "cells": [{"name", "kind", "inputs", "output", "members"}],
         "children": [{"name", "definition", "connections": {port: net}}],
         "behavioral_fallback": false}}}

Every distinct sub-netlist is stored once under ``definitions`` and children
refer to it by name.  Components are sorted by type, then name, so output
is byte-stable.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

from .devices import MemristorModel, State, SwitchKind, SwitchModel
from .errors import NetlistParseError, StructuralError

RAIL_LEVELS = {"VDD": 1, "GND": 0, "VNEG": -1}
RAIL_FOR_LEVEL = {v: k for k, v in RAIL_LEVELS.items()}
SEP = "/"
SCHEMA = "btlogic.netlist"
VERSION = 1

# input count of each device-level cell kind; None means "2 or more"
CELL_ARITY = {"tmin": None, "tmax": None, "sti": 1, "pti": 1, "nti": 1, "dec13_y0": 1}


@dataclass(frozen=True)
class Memristor:
    name: str
    plus: str
    minus: str
    model: MemristorModel = MemristorModel()

    @property
    def nets(self):
        return (self.plus, self.minus)


@dataclass(frozen=True)
class Transistor:
    name: str
    model: SwitchModel

    @property
    def nets(self):
        return (self.model.gate, self.model.drain, self.model.source)


@dataclass(frozen=True)
class BehavioralGate:
    """Device whose internals are unknown; evaluated by its logic contract."""

    name: str
    kind: str
    inputs: tuple
    outputs: tuple

    @property
    def nets(self):
        return tuple(self.inputs) + tuple(self.outputs)


@dataclass(frozen=True)
class RailTie:
    """Zero-cost connection of a net to a logic rail."""

    name: str
    net: str
    level: int

    @property
    def nets(self):
        return (self.net,)


Component = Union[Memristor, Transistor, BehavioralGate, RailTie]
_TYPE_ORDER = {Memristor: 0, Transistor: 1, BehavioralGate: 2, RailTie: 3}


@dataclass(frozen=True)
class Cell:
    name: str
    kind: str
    inputs: tuple
    output: str
    members: tuple = ()


@dataclass(frozen=True)
class Instance:
    name: str
    netlist: "Netlist"
    connections: tuple  # ((child port, parent net), ...)

    def connection_map(self) -> dict:
        return dict(self.connections)


@dataclass(frozen=True)
class Netlist:
    name: str
    nets: tuple
    components: tuple = ()
    cells: tuple = ()
    inputs: tuple = ()  # ((port, net), ...)
    outputs: tuple = ()
    children: tuple = ()
    behavioral_fallback: bool = False

    @property
    def input_names(self) -> tuple:
        return tuple(p for p, _ in self.inputs)

    @property
    def output_names(self) -> tuple:
        return tuple(p for p, _ in self.outputs)

    @property
    def input_nets(self) -> tuple:
        return tuple(n for _, n in self.inputs)

    @property
    def output_nets(self) -> tuple:
        return tuple(n for _, n in self.outputs)

    def port_net(self, port: str) -> str:
        for p, n in self.inputs + self.outputs:
            if p == port:
                return n
        raise KeyError(port)

    def canonical(self) -> "Netlist":
        """Same netlist with components and instance connections in the canonical write order."""
        return Netlist(
            self.name, self.nets, tuple(sorted(self.components, key=_component_key)),
            self.cells, self.inputs, self.outputs,
            tuple(Instance(i.name, i.netlist.canonical(), tuple(sorted(i.connections))) for i in self.children),
            self.behavioral_fallback,
        )


def _component_key(c):
    return (_TYPE_ORDER[type(c)], c.name)


class NetlistBuilder:
    """Mutable helper that accumulates parts and freezes them into a Netlist."""

    def __init__(self, name: str, behavioral_fallback: bool = False):
        self.name = name
        self.behavioral_fallback = behavioral_fallback
        self._nets: dict = {r: None for r in RAIL_LEVELS}
        self.components: list = []
        self.cells: list = []
        self.inputs: list = []
        self.outputs: list = []
        self.children: list = []

    def net(self, name: str) -> str:
        self._nets.setdefault(name, None)
        return name

    def input(self, port: str, net: str | None = None) -> str:
        net = self.net(net or port)
        self.inputs.append((port, net))
        return net

    def output(self, port: str, net: str | None = None) -> str:
        net = self.net(net or port)
        self.outputs.append((port, net))
        return net

    def add(self, component):
        for n in component.nets:
            self.net(n)
        self.components.append(component)
        return component

    def cell(self, name, kind, inputs, output, members=()):
        for n in (*inputs, output):
            self.net(n)
        self.cells.append(Cell(name, kind, tuple(inputs), output, tuple(members)))

    def instance(self, name: str, netlist: Netlist, connections: dict) -> Instance:
        for n in connections.values():
            self.net(n)
        inst = Instance(name, netlist, tuple(connections.items()))
        self.children.append(inst)
        return inst

    def build(self) -> Netlist:
        return Netlist(
            self.name, tuple(self._nets), tuple(self.components), tuple(self.cells),
            tuple(self.inputs), tuple(self.outputs), tuple(self.children),
            self.behavioral_fallback,
        )


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    where: str = ""

    def __str__(self):
        loc = f"{self.where}: " if self.where else ""
        return f"[{self.code}] {loc}{self.message}"


def validate(n: Netlist) -> list:
    """Return a list of :class:`Finding`; empty means the netlist is valid."""
    findings: list = []
    _validate(n, "", findings, ())
    return findings


def _validate(n: Netlist, where: str, out: list, ancestors: tuple):
    here = where or n.name
    if n.name in ancestors:
        out.append(Finding("cyclic-hierarchy", f"{n.name!r} instantiates itself", here))
        return
    counts = Counter(n.nets)
    for net, c in counts.items():
        if c > 1:
            code = "duplicate-rail" if net in RAIL_LEVELS else "duplicate-net"
            out.append(Finding(code, f"net {net!r} declared {c} times", here))
    declared = set(n.nets)
    used: set = set()

    def ref(net, what):
        used.add(net)
        if net not in declared:
            out.append(Finding("dangling-net", f"{what} references undeclared net {net!r}", here))

    names = Counter(c.name for c in n.components)
    for name, c in names.items():
        if c > 1:
            out.append(Finding("duplicate-name", f"component name {name!r} used {c} times", here))
    driven = set(RAIL_LEVELS) | {net for _, net in n.inputs}
    for c in n.components:
        for net in c.nets:
            ref(net, f"component {c.name}")
        if isinstance(c, BehavioralGate):
            driven.update(c.outputs)
            if not n.behavioral_fallback:
                out.append(Finding("behavioral-primitive",
                                   f"{c.name} ({c.kind}) in a netlist not flagged behavioral-fallback", here))
        elif isinstance(c, RailTie):
            driven.add(c.net)
            if c.level not in RAIL_FOR_LEVEL:
                out.append(Finding("arity", f"rail tie {c.name} has invalid level {c.level!r}", here))
        elif isinstance(c, Memristor):
            driven.update(c.nets)
        else:
            driven.update((c.model.drain, c.model.source))
    member_names = set(names)
    for cell in n.cells:
        for net in (*cell.inputs, cell.output):
            ref(net, f"cell {cell.name}")
        driven.add(cell.output)
        if cell.kind not in CELL_ARITY:
            out.append(Finding("unknown-cell", f"cell {cell.name} has unknown kind {cell.kind!r}", here))
        else:
            want = CELL_ARITY[cell.kind]
            got = len(cell.inputs)
            if (want is None and got < 2) or (want is not None and got != want):
                out.append(Finding("arity", f"cell {cell.name} ({cell.kind}) has {got} inputs", here))
        for m in cell.members:
            if m not in member_names:
                out.append(Finding("unknown-member", f"cell {cell.name} lists missing component {m!r}", here))
    for inst in n.children:
        child = inst.netlist
        ports_in, ports_out = set(child.input_names), set(child.output_names)
        conn = inst.connection_map()
        for port, net in inst.connections:
            ref(net, f"instance {inst.name}")
            if port not in ports_in | ports_out:
                out.append(Finding("arity", f"instance {inst.name} connects unknown port {port!r}", here))
            elif port in ports_out:
                driven.add(net)
        for port in sorted((ports_in | ports_out) - set(conn)):
            out.append(Finding("unconnected-port", f"instance {inst.name} leaves port {port!r} open", here))
        _validate(child, f"{here}{SEP}{inst.name}", out, ancestors + (n.name,))
    for port, net in n.inputs + n.outputs:
        ref(net, f"port {port}")
    for port, net in n.outputs:
        if net in declared and net not in driven:
            out.append(Finding("floating-output", f"output {port!r} (net {net!r}) has no driver", here))
    for net in n.nets:
        if net not in used and net not in RAIL_LEVELS:
            out.append(Finding("unused-net", f"net {net!r} is not connected to anything", here))


class InvalidNetlistError(StructuralError):
    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("invalid netlist: " + "; ".join(str(f) for f in self.findings))


def check(n: Netlist) -> Netlist:
    findings = validate(n)
    if findings:
        raise InvalidNetlistError(findings)
    return n


# ---------------------------------------------------------------- flattening

def flatten(n: Netlist) -> Netlist:
    """Inline every child instance; names become ``instance/name``."""
    nets = list(n.nets)
    comps = list(n.components)
    cells = list(n.cells)
    fallback = n.behavioral_fallback
    for inst in n.children:
        fallback |= _inline(inst, "", {net: net for net in n.nets}, nets, comps, cells, (n.name,))
    return Netlist(n.name, tuple(dict.fromkeys(nets)), tuple(comps), tuple(cells),
                   n.inputs, n.outputs, (), fallback)


def _inline(inst: Instance, prefix: str, parent_map: dict, nets, comps, cells, ancestors) -> bool:
    child = inst.netlist
    if child.name in ancestors:
        raise StructuralError(f"cyclic hierarchy: {' -> '.join(ancestors + (child.name,))}")
    path = f"{prefix}{inst.name}{SEP}"
    conn = inst.connection_map()
    mapping = {}
    for port, net in child.inputs + child.outputs:
        if port not in conn:
            raise StructuralError(f"instance {path[:-1]} leaves port {port!r} unconnected")
        target = parent_map.get(conn[port], conn[port])
        if mapping.setdefault(net, target) != target:
            raise StructuralError(f"instance {path[:-1]}: net {net!r} bound to two parent nets")
    for net in child.nets:
        if net in RAIL_LEVELS:
            mapping[net] = net
        elif net not in mapping:
            mapping[net] = path + net
            nets.append(path + net)

    def m(net):
        return mapping[net]

    for c in child.components:
        comps.append(_rename(c, path, m))
    for cell in child.cells:
        cells.append(Cell(path + cell.name, cell.kind, tuple(map(m, cell.inputs)), m(cell.output),
                          tuple(path + x for x in cell.members)))
    fallback = child.behavioral_fallback
    for sub in child.children:
        fallback |= _inline(sub, path, mapping, nets, comps, cells, ancestors + (child.name,))
    return fallback


def _rename(c, path, m):
    if isinstance(c, Memristor):
        return Memristor(path + c.name, m(c.plus), m(c.minus), c.model)
    if isinstance(c, Transistor):
        s = c.model
        return Transistor(path + c.name, SwitchModel(s.kind, s.v_th, m(s.gate), m(s.drain), m(s.source),
                                                     s.r_on, s.r_off))
    if isinstance(c, BehavioralGate):
        return BehavioralGate(path + c.name, c.kind, tuple(map(m, c.inputs)), tuple(map(m, c.outputs)))
    return RailTie(path + c.name, m(c.net), c.level)


# ---------------------------------------------------------------- counting

@dataclass(frozen=True)
class CostReport:
    transistors: int
    memristors: int
    behavioral_primitives: int = 0

    def __str__(self):
        s = f"{self.transistors}T{self.memristors}M"
        if self.behavioral_primitives:
            s += f"+{self.behavioral_primitives}B"
        return s


def tally(components: Iterable) -> CostReport:
    kinds = Counter(type(c) for c in components)
    return CostReport(kinds[Transistor], kinds[Memristor], kinds[BehavioralGate])


def count(n: Netlist) -> CostReport:
    check(n)
    return tally(flatten(n).components)


# ---------------------------------------------------------------- persistence

def _component_to_json(c) -> dict:
    if isinstance(c, Memristor):
        m = c.model
        return {"type": "memristor", "name": c.name, "plus": c.plus, "minus": c.minus,
                "r_hrs": m.r_hrs, "r_lrs": m.r_lrs, "v_set": m.v_set, "v_reset": m.v_reset,
                "state": m.state.value}
    if isinstance(c, Transistor):
        s = c.model
        return {"type": "transistor", "name": c.name, "kind": s.kind.value, "gate": s.gate,
                "drain": s.drain, "source": s.source, "v_th": s.v_th, "r_on": s.r_on, "r_off": s.r_off}
    if isinstance(c, BehavioralGate):
        return {"type": "behavioral", "name": c.name, "kind": c.kind,
                "inputs": list(c.inputs), "outputs": list(c.outputs)}
    return {"type": "railtie", "name": c.name, "net": c.net, "level": c.level}


def _collect_definitions(n: Netlist, defs: dict):
    if n.name in defs:
        if defs[n.name] != n:
            raise StructuralError(f"two different sub-netlists share the name {n.name!r}")
        return
    defs[n.name] = n
    for inst in n.children:
        _collect_definitions(inst.netlist, defs)


def _definition_to_json(n: Netlist) -> dict:
    return {
        "nets": list(n.nets),
        "rails": {r: RAIL_LEVELS[r] for r in n.nets if r in RAIL_LEVELS},
        "ports": {"inputs": [list(p) for p in n.inputs], "outputs": [list(p) for p in n.outputs]},
        "components": [_component_to_json(c) for c in sorted(n.components, key=_component_key)],
        "cells": [{"name": c.name, "kind": c.kind, "inputs": list(c.inputs), "output": c.output,
                   "members": list(c.members)} for c in n.cells],
        "children": [{"name": i.name, "definition": i.netlist.name, "connections": dict(i.connections)}
                     for i in n.children],
        "behavioral_fallback": n.behavioral_fallback,
    }


def dumps(n: Netlist) -> str:
    defs: dict = {}
    _collect_definitions(n, defs)
    doc = {"schema": SCHEMA, "version": VERSION, "top": n.name,
           "definitions": {name: _definition_to_json(d) for name, d in defs.items()}}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_netlist(n: Netlist, path) -> None:
    check(n)
    Path(path).write_text(dumps(n))


class _Reader:
    def __init__(self, doc):
        self.doc = doc
        self.defs = None
        self.built: dict = {}

    @staticmethod
    def need(obj, key, where, kind=None):
        if not isinstance(obj, dict) or key not in obj:
            raise NetlistParseError(f"missing section {key!r}", field=f"{where}.{key}" if where else key)
        value = obj[key]
        if kind is not None and not isinstance(value, kind):
            raise NetlistParseError(f"section {key!r} has wrong type {type(value).__name__}",
                                    field=f"{where}.{key}" if where else key)
        return value

    def top(self) -> Netlist:
        doc = self.doc
        if not isinstance(doc, dict):
            raise NetlistParseError("top level must be an object")
        if doc.get("schema") != SCHEMA:
            raise NetlistParseError(f"not a netlist file (schema {doc.get('schema')!r})", field="schema")
        if doc.get("version") != VERSION:
            raise NetlistParseError(f"unsupported schema version {doc.get('version')!r}", field="version")
        self.defs = self.need(doc, "definitions", "", dict)
        return self.definition(self.need(doc, "top", "", str), ())

    def definition(self, name: str, stack: tuple) -> Netlist:
        if name in stack:
            raise StructuralError(f"cyclic hierarchy: {' -> '.join(stack + (name,))}")
        if name in self.built:
            return self.built[name]
        if name not in self.defs:
            raise NetlistParseError(f"undefined sub-netlist {name!r}", field=f"definitions.{name}")
        d = self.defs[name]
        w = f"definitions.{name}"
        nets = self.need(d, "nets", w, list)
        rails = d.get("rails", {})
        for r, lvl in rails.items():
            if RAIL_LEVELS.get(r) != lvl:
                raise NetlistParseError(f"rail {r!r} must have level {RAIL_LEVELS.get(r)}", field=f"{w}.rails")
        ports = self.need(d, "ports", w, dict)
        inputs = tuple(self._port(p, f"{w}.ports.inputs[{i}]")
                       for i, p in enumerate(self.need(ports, "inputs", f"{w}.ports", list)))
        outputs = tuple(self._port(p, f"{w}.ports.outputs[{i}]")
                        for i, p in enumerate(self.need(ports, "outputs", f"{w}.ports", list)))
        comps = tuple(self.component(c, f"{w}.components[{i}]")
                      for i, c in enumerate(self.need(d, "components", w, list)))
        cells = []
        for i, c in enumerate(d.get("cells", [])):
            cw = f"{w}.cells[{i}]"
            cells.append(Cell(self.need(c, "name", cw, str), self.need(c, "kind", cw, str),
                              tuple(self.need(c, "inputs", cw, list)), self.need(c, "output", cw, str),
                              tuple(c.get("members", []))))
        children = []
        for i, c in enumerate(d.get("children", [])):
            cw = f"{w}.children[{i}]"
            sub = self.definition(self.need(c, "definition", cw, str), stack + (name,))
            children.append(Instance(self.need(c, "name", cw, str), sub,
                                     tuple(self.need(c, "connections", cw, dict).items())))
        n = Netlist(name, tuple(nets), comps, tuple(cells), inputs, outputs, tuple(children),
                    bool(d.get("behavioral_fallback", False)))
        self.built[name] = n
        return n

    @staticmethod
    def _port(p, where):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p)):
            raise NetlistParseError("port must be a [port, net] pair", field=where)
        return tuple(p)

    def component(self, c, w):
        kind = self.need(c, "type", w, str)
        try:
            if kind == "memristor":
                model = MemristorModel(float(c["r_hrs"]), float(c["r_lrs"]), float(c["v_set"]),
                                       float(c["v_reset"]), State(c.get("state", "HRS")))
                return Memristor(c["name"], c["plus"], c["minus"], model)
            if kind == "transistor":
                model = SwitchModel(SwitchKind(c["kind"]), float(c["v_th"]), c["gate"], c["drain"],
                                    c["source"], float(c["r_on"]), float(c["r_off"]))
                return Transistor(c["name"], model)
            if kind == "behavioral":
                return BehavioralGate(c["name"], c["kind"], tuple(c["inputs"]), tuple(c["outputs"]))
            if kind == "railtie":
                return RailTie(c["name"], c["net"], int(c["level"]))
        except KeyError as exc:
            raise NetlistParseError(f"{kind} lacks field {exc.args[0]!r}", field=f"{w}.{exc.args[0]}") from None
        except (TypeError, ValueError) as exc:
            raise NetlistParseError(f"bad {kind}: {exc}", field=w) from None
        raise NetlistParseError(f"unknown component type {kind!r}", field=f"{w}.type")


def loads(text: str) -> Netlist:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetlistParseError(f"malformed netlist file: {exc.msg}", line=exc.lineno) from None
    return _Reader(doc).top()


def read_netlist(path) -> Netlist:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise NetlistParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)
