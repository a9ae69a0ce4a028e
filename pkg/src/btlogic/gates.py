"""Gate family: logic contracts and structural (device-level) builders.

Structural conventions
----------------------
* ``TMIN(k)``: k memristors, plus electrodes tied together at the output,
  minus electrodes on the inputs.  ``TMAX(k)`` is the mirror image (minus
  electrodes at the output).  Current from the highest to the lowest input
  sets the memristor at the winning input to LRS and resets the others, so
  the output divider sits next to the min (or max) input.
* ``PTI``/``NTI``: pull-up memristor from VDD plus one NMOS to VNEG whose
  threshold (1.5 V / 0.8 V) decides which inputs pull the output down.
* ``STI``: pull-up memristor, a second memristor in series with a 0.8 V NMOS
  (input 0: equal-memristor divider gives 0 V) and a 1.5 V NMOS straight to
  VNEG (input +1).
* ``DEC13`` (5 transistors, 5 memristors): ``X-1 = NTI(X)``,
  ``X1 = NTI(PTI(X))`` and the ``X0`` branch::

      VDD --M2-- X0 --T3-- k --T2-- VNEG        T3 gate = VDD, source = k
                           k --M1-- X           T2 gate = X,   source = VNEG

  X = -1: T2 off, T3 on, M1/M2 act as a TMIN of (-1, +1) -> -1.
  X = 0: both switches off, M2 pulls X0 up to +1.
  X = +1: both on, X0 is shorted to VNEG through T3 and T2 -> -1.
* ``ENC31``/``ENC92`` contain behavioral primitives (``subcircuit1``,
  ``subcircuit2``) whose transistor-level internals are not known; such
  netlists are flagged ``behavioral_fallback``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .devices import MemristorModel, SwitchKind, SwitchModel
from .errors import ArityError, PreconditionError, StructuralError
from .netlist import BehavioralGate, Memristor, Netlist, NetlistBuilder, Transistor
from .trit import check_trit, int_to_word, nti, pti, sti, tmax_n, tmin_n

TAGS = ("TMIN", "TMAX", "STI", "PTI", "NTI", "ENC31", "ENC92", "DEC13", "DEC29", "MUX3", "THA", "MUL", "MLE")
METHODS = ("decoder", "mux")

_LINE = {-1: "-1", 0: "0", 1: "1"}


def line_name(var: str, k: int) -> str:
    """Net name of decoder output ``var_k``, e.g. ``A-1``, ``A0``, ``A1``."""
    return f"{var}{_LINE[k]}"


@dataclass(frozen=True)
class GateKind:
    tag: str
    k: int | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown gate tag {self.tag!r}")
        if self.tag in ("TMIN", "TMAX"):
            if self.k is None or self.k < 2:
                raise ArityError(f"{self.tag} needs k >= 2, got {self.k!r}")
        elif self.k is not None:
            raise ArityError(f"{self.tag} takes no input count")

    @property
    def name(self) -> str:
        return f"{self.tag.lower()}{self.k}" if self.k else self.tag.lower()

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, name: str) -> "GateKind":
        m = re.fullmatch(r"(tmin|tmax)(\d+)", name.lower())
        if m:
            return cls(m.group(1).upper(), int(m.group(2)))
        return cls(name.upper())

    @property
    def inputs(self) -> tuple:
        if self.tag in ("TMIN", "TMAX"):
            return tuple(f"in{i}" for i in range(self.k))
        return _PORTS[self.tag][0]

    @property
    def outputs(self) -> tuple:
        if self.tag in ("TMIN", "TMAX"):
            return ("out",)
        return _PORTS[self.tag][1]

    @property
    def one_hot(self) -> bool:
        return self.tag in ("ENC31", "ENC92")


_PORTS = {
    "STI": (("in",), ("out",)),
    "PTI": (("in",), ("out",)),
    "NTI": (("in",), ("out",)),
    "ENC31": (("X1", "X0", "X-1"), ("Y",)),
    "ENC92": (tuple(f"X{i}" for i in range(4, -5, -1)), ("Y1", "Y0")),
    "DEC13": (("X",), ("X-1", "X0", "X1")),
    "DEC29": (("A", "B"), tuple(f"Y{i}" for i in range(-4, 5))),
    "MUX3": (("S", "I-1", "I0", "I1"), ("OUT",)),
    "THA": (("A", "B"), ("S", "C")),
    "MUL": (("A", "B"), ("MUL",)),
    "MLE": (("A", "B"), ("MLE",)),
}

TMIN2, TMAX2 = GateKind("TMIN", 2), GateKind("TMAX", 2)
STI, PTI, NTI = GateKind("STI"), GateKind("PTI"), GateKind("NTI")
ENC31, ENC92 = GateKind("ENC31"), GateKind("ENC92")
DEC13, DEC29, MUX3 = GateKind("DEC13"), GateKind("DEC29"), GateKind("MUX3")
THA, MUL, MLE = GateKind("THA"), GateKind("MUL"), GateKind("MLE")


# ---------------------------------------------------------------- semantics

def _one_hot_index(xs) -> int:
    highs = [i for i, x in enumerate(xs) if x == 1]
    if len(highs) != 1 or any(x != -1 for i, x in enumerate(xs) if i != highs[0]):
        raise PreconditionError(f"encoder input must be one-hot (+1 once, -1 elsewhere), got {tuple(xs)}")
    return highs[0]


def _half_add(a, b):
    s = a + b
    if s > 1:
        return (s - 3, 1)
    if s < -1:
        return (s + 3, -1)
    return (s, 0)


def _sign(x):
    return (x > 0) - (x < 0)


def behavioral_eval(kind: GateKind, inputs) -> list:
    """Reference logic of every gate kind."""
    xs = [check_trit(x) for x in inputs]
    if len(xs) != len(kind.inputs):
        raise ArityError(f"{kind} takes {len(kind.inputs)} inputs, got {len(xs)}")
    tag = kind.tag
    if tag == "TMIN":
        return [tmin_n(xs)]
    if tag == "TMAX":
        return [tmax_n(xs)]
    if tag in ("STI", "PTI", "NTI"):
        return [{"STI": sti, "PTI": pti, "NTI": nti}[tag](xs[0])]
    if tag == "ENC31":
        return [1 - _one_hot_index(xs)]
    if tag == "ENC92":
        w = int_to_word(4 - _one_hot_index(xs), 2)
        return [w.trits[1], w.trits[0]]
    if tag == "DEC13":
        return [1 if xs[0] == k else -1 for k in (-1, 0, 1)]
    if tag == "DEC29":
        v = 3 * xs[0] + xs[1]
        return [1 if v == i else -1 for i in range(-4, 5)]
    if tag == "MUX3":
        return [xs[1 + xs[0] + 1]]
    if tag == "THA":
        return list(_half_add(*xs))
    if tag == "MUL":
        return [xs[0] * xs[1]]
    return [_sign(xs[0] - xs[1])]


def _subcircuit1(ins):
    # only -1 (X1 low) is exercised by the encoder analysis; +1 passes through
    x = ins[0]
    if x == 0:
        raise PreconditionError("subcircuit1 is driven by a binary (+/-1) encoder line")
    return (x,)


def _subcircuit2(ins):
    x = ins[0]
    if x == 0:
        raise PreconditionError("subcircuit2 behavior for a logic-0 input is undefined")
    return (0,) if x == -1 else (-1,)


PRIMITIVE_CONTRACTS = {"subcircuit1": (1, 1, _subcircuit1), "subcircuit2": (1, 1, _subcircuit2)}


def eval_primitive(kind: str, inputs) -> tuple:
    if kind in PRIMITIVE_CONTRACTS:
        n_in, _, fn = PRIMITIVE_CONTRACTS[kind]
        if len(inputs) != n_in:
            raise ArityError(f"{kind} takes {n_in} inputs, got {len(inputs)}")
        return tuple(fn(tuple(inputs)))
    return tuple(behavioral_eval(GateKind.parse(kind), inputs))


def primitive_arity(kind: str) -> tuple:
    if kind in PRIMITIVE_CONTRACTS:
        return PRIMITIVE_CONTRACTS[kind][:2]
    g = GateKind.parse(kind)
    return len(g.inputs), len(g.outputs)


# ---------------------------------------------------------------- builders

@dataclass(frozen=True)
class DeviceParams:
    memristor: MemristorModel = MemristorModel()
    r_on: float = 100.0
    r_off: float = 1e8
    v_th_low: float = 0.8
    v_th_high: float = 1.5

    def nmos(self, v_th, gate, drain, source) -> SwitchModel:
        return SwitchModel(SwitchKind.NMOS, v_th, gate, drain, source, self.r_on, self.r_off)


@dataclass(frozen=True)
class BuildOptions:
    method: str = "decoder"
    share_decoders: bool = True
    # MUX3 only: leave the select decoder out and expose its three lines as ports
    external_decoder: bool = False
    devices: DeviceParams = DeviceParams()

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")


def add_minmax(b: NetlistBuilder, kind: str, name: str, inputs, out: str, dev: DeviceParams):
    members = []
    for i, net in enumerate(inputs):
        mname = f"{name}.m{i}"
        plus, minus = (out, net) if kind == "tmin" else (net, out)
        b.add(Memristor(mname, plus, minus, dev.memristor))
        members.append(mname)
    b.cell(name, kind, tuple(inputs), out, members)


def add_inverter(b: NetlistBuilder, kind: str, name: str, inp: str, out: str, dev: DeviceParams):
    if kind == "sti":
        mid = b.net(f"{name}.z")
        parts = [Memristor(f"{name}.m0", "VDD", out, dev.memristor),
                 Memristor(f"{name}.m1", out, mid, dev.memristor),
                 Transistor(f"{name}.t0", dev.nmos(dev.v_th_low, inp, mid, "VNEG")),
                 Transistor(f"{name}.t1", dev.nmos(dev.v_th_high, inp, out, "VNEG"))]
    else:
        vth = dev.v_th_high if kind == "pti" else dev.v_th_low
        parts = [Memristor(f"{name}.m0", "VDD", out, dev.memristor),
                 Transistor(f"{name}.t0", dev.nmos(vth, inp, out, "VNEG"))]
    for p in parts:
        b.add(p)
    b.cell(name, kind, (inp,), out, [p.name for p in parts])


def add_dec13_middle(b: NetlistBuilder, name: str, inp: str, out: str, dev: DeviceParams):
    k = b.net(f"{name}.k")
    parts = [Memristor(f"{name}.m2", out, "VDD", dev.memristor),
             Transistor(f"{name}.t3", dev.nmos(dev.v_th_high, "VDD", out, k)),
             Memristor(f"{name}.m1", k, inp, dev.memristor),
             Transistor(f"{name}.t2", dev.nmos(dev.v_th_high, inp, k, "VNEG"))]
    for p in parts:
        b.add(p)
    b.cell(name, "dec13_y0", (inp,), out, [p.name for p in parts])


@lru_cache(maxsize=None)
def build_dec13(dev: DeviceParams = DeviceParams()) -> Netlist:
    b = NetlistBuilder("dec13")
    x = b.input("X")
    y_n, y_0, y_p = (b.output(p) for p in ("X-1", "X0", "X1"))
    add_inverter(b, "nti", "u1", x, y_n, dev)
    add_dec13_middle(b, "u2", x, y_0, dev)
    p = b.net("p")
    add_inverter(b, "pti", "u3", x, p, dev)
    add_inverter(b, "nti", "u4", p, y_p, dev)
    return b.build()


@lru_cache(maxsize=None)
def build_mux_core(dev: DeviceParams = DeviceParams()) -> Netlist:
    """The selection part of MUX3: three 2-input TMINs and one 3-input TMAX."""
    b = NetlistBuilder("mux3_core")
    lines = [b.input(p) for p in ("S-1", "S0", "S1")]
    data = [b.input(p) for p in ("I-1", "I0", "I1")]
    out = b.output("OUT")
    picked = []
    for i, (s, d) in enumerate(zip(lines, data)):
        w = b.net(f"w{i}")
        add_minmax(b, "tmin", f"u{i + 2}", (s, d), w, dev)
        picked.append(w)
    add_minmax(b, "tmax", "u5", picked, out, dev)
    return b.build()


def attach_decoder(b: NetlistBuilder, var_net: str, prefix: str, dev: DeviceParams, name=None) -> tuple:
    """Instantiate a DEC13 on ``var_net``; returns the three line nets."""
    lines = tuple(b.net(line_name(prefix, k)) for k in (-1, 0, 1))
    b.instance(name or f"dec_{prefix}", build_dec13(dev),
               {"X": var_net, "X-1": lines[0], "X0": lines[1], "X1": lines[2]})
    return lines


def _build_minmax(kind, dev):
    b = NetlistBuilder(kind.name)
    ins = [b.input(p) for p in kind.inputs]
    add_minmax(b, kind.tag.lower(), "u1", ins, b.output("out"), dev)
    return b.build()


def _build_inverter(kind, dev):
    b = NetlistBuilder(kind.name)
    add_inverter(b, kind.tag.lower(), "u1", b.input("in"), b.output("out"), dev)
    return b.build()


def _build_dec29(dev):
    b = NetlistBuilder("dec29")
    a, bb = b.input("A"), b.input("B")
    outs = {i: b.output(f"Y{i}") for i in range(-4, 5)}
    la = attach_decoder(b, a, "A", dev)
    lb = attach_decoder(b, bb, "B", dev)
    for i, ka in enumerate((-1, 0, 1)):
        for j, kb in enumerate((-1, 0, 1)):
            add_minmax(b, "tmin", f"u{3 * i + j + 3}", (la[i], lb[j]), outs[3 * ka + kb], dev)
    return b.build()


def _build_mux3(opts: BuildOptions):
    dev = opts.devices
    if opts.external_decoder:
        return build_mux_core(dev)
    b = NetlistBuilder("mux3")
    s = b.input("S")
    data = [b.input(p) for p in ("I-1", "I0", "I1")]
    out = b.output("OUT")
    lines = attach_decoder(b, s, "S", dev, name="u1")
    picked = []
    for i, (line, d) in enumerate(zip(lines, data)):
        w = b.net(f"w{i}")
        add_minmax(b, "tmin", f"u{i + 2}", (line, d), w, dev)
        picked.append(w)
    add_minmax(b, "tmax", "u5", picked, out, dev)
    return b.build()


def _build_enc31(dev):
    b = NetlistBuilder("enc31", behavioral_fallback=True)
    x1, x0, _xm1 = (b.input(p) for p in ("X1", "X0", "X-1"))
    y = b.output("Y")
    t = b.net("t")
    add_minmax(b, "tmin", "u1", (x0, "GND"), t, dev)
    s = b.net("s")
    b.add(BehavioralGate("sub1", "subcircuit1", (x1,), (s,)))
    add_minmax(b, "tmax", "u2", (x1, t, s), y, dev)
    return b.build()


def _build_enc92(dev):
    b = NetlistBuilder("enc92", behavioral_fallback=True)
    x = {i: b.input(f"X{i}") for i in range(4, -5, -1)}
    for out, hi, lo in (("Y1", (4, 3, 2), (-2, -3, -4)), ("Y0", (4, 1, -2), (2, -1, -4))):
        y = b.output(out)
        up, down, shifted = b.net(f"{out}.hi"), b.net(f"{out}.lo"), b.net(f"{out}.sh")
        add_minmax(b, "tmax", f"{out}.u1", [x[i] for i in hi], up, dev)
        add_minmax(b, "tmax", f"{out}.u2", [x[i] for i in lo], down, dev)
        b.add(BehavioralGate(f"{out}.sub2", "subcircuit2", (down,), (shifted,)))
        add_minmax(b, "tmax", f"{out}.u7", (up, shifted), y, dev)
    return b.build()


TABLE7_KINDS = (THA, MUL, MLE)


def table7(kind: GateKind):
    """Truth table of THA / MUL / MLE from the behavioral contract."""
    from .truthtable import TruthTable

    return TruthTable.from_function(lambda a, b: tuple(behavioral_eval(kind, (a, b))), kind.inputs, kind.outputs)


@lru_cache(maxsize=None)
def build_structural(kind: GateKind, options: BuildOptions = BuildOptions()) -> Netlist:
    dev = options.devices
    tag = kind.tag
    if tag in ("TMIN", "TMAX"):
        return _build_minmax(kind, dev)
    if tag in ("STI", "PTI", "NTI"):
        return _build_inverter(kind, dev)
    if tag == "DEC13":
        return build_dec13(dev)
    if tag == "DEC29":
        return _build_dec29(dev)
    if tag == "MUX3":
        return _build_mux3(options)
    if tag == "ENC31":
        return _build_enc31(dev)
    if tag == "ENC92":
        return _build_enc92(dev)
    if tag in ("THA", "MUL", "MLE"):
        from . import synthesis

        table = table7(kind)
        name = f"{kind.name}_{options.method}"
        if options.method == "decoder":
            return synthesis.synth_decoder(table, dev, name=name).netlist
        return synthesis.synth_mux(table, dev, share_decoders=options.share_decoders, name=name)
    raise StructuralError(f"no structural realization for {kind}")


GATE_NAMES = (
    "tmin2", "tmin3", "tmax2", "tmax3", "sti", "pti", "nti", "enc31", "enc92", "dec13", "dec29", "mux3",
    "tha-decoder", "tha-mux", "mul-decoder", "mul-mux", "mle-decoder", "mle-mux",
)


def resolve(name: str, devices: DeviceParams = DeviceParams()) -> tuple:
    """Canonical gate name (``tmin2``, ``dec13``, ``tha-mux`` ...) -> (kind, options)."""
    base, _, method = name.lower().partition("-")
    kind = GateKind.parse(base)
    if method and kind not in TABLE7_KINDS:
        raise StructuralError(f"{kind} has no method variants")
    return kind, BuildOptions(method=method or "decoder", devices=devices)
