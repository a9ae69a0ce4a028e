"""Truth table -> circuit, by decoder minterms or by multiplexer trees.

Decoder method
    Every input variable gets a 1-3 decoder.  A *minterm* is the TMIN of one
    decoder line per variable.  Rows whose output is +1 feed a TMAX directly;
    rows whose output is 0 feed a TMAX that is then clamped by a TMIN with
    GND; -1 rows need nothing since the empty TMAX is -1.  The two branches
    are joined by a final TMAX.  One-input min/max degenerate to wires.

Mux method
    The first variable drives the select of the output multiplexer, its
    cofactors are decomposed on the remaining variables, leaves are rails.
    A cofactor that is constant becomes a rail and one equal to a remaining
    variable becomes a wire to that input.  Multiplexers whose select is the
    same net share a single 1-3 decoder.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ArityError, BTLogicError
from .gates import (TABLE7_KINDS, BuildOptions, DeviceParams, GateKind, add_minmax, attach_decoder,
                    build_mux_core, build_structural, line_name)
from .netlist import RAIL_FOR_LEVEL, CostReport, Netlist, NetlistBuilder, RailTie, count
from .trit import check_trit, tmax_n, tmin_n
from .truthtable import TruthTable, input_tuples


class UnboundVariableError(BTLogicError, KeyError):
    pass


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Line:
    """Decoder output ``var_k``: +1 when ``var == k``, else -1."""

    var: str
    k: int


@dataclass(frozen=True)
class Min:
    children: tuple


@dataclass(frozen=True)
class Max:
    children: tuple


def expr_eval(e, inputs, variables: Sequence[str] | None = None) -> int:
    """Evaluate with ``inputs`` as a ``{var: trit}`` mapping or a sequence
    matched positionally against ``variables``."""
    if not isinstance(inputs, Mapping):
        if variables is None:
            raise ArityError("positional inputs need the variable order")
        if len(inputs) != len(variables):
            raise ArityError(f"expected {len(variables)} inputs, got {len(inputs)}")
        inputs = dict(zip(variables, inputs))
    return _eval(e, inputs)


def _eval(e, env):
    if isinstance(e, Const):
        return check_trit(e.value)
    if isinstance(e, Line):
        if e.var not in env:
            raise UnboundVariableError(e.var)
        return 1 if check_trit(env[e.var]) == e.k else -1
    vals = [_eval(c, env) for c in e.children]
    if isinstance(e, Min):
        return tmin_n(vals) if vals else 1
    return tmax_n(vals) if vals else -1


def _join(cls, xs):
    xs = tuple(xs)
    return xs[0] if len(xs) == 1 else cls(xs)


def minterm(variables, values):
    return _join(Min, (Line(v, k) for v, k in zip(variables, values)))


def decoder_form(values: Sequence[int], variables: Sequence[str]):
    """Canonical decoder-method expression for one output column."""
    values = tuple(values)
    if len(set(values)) == 1:
        return Const(values[0])
    rows = input_tuples(len(variables))
    zeros = [minterm(variables, r) for r, v in zip(rows, values) if v == 0]
    ones = [minterm(variables, r) for r, v in zip(rows, values) if v == 1]
    parts = []
    if zeros:
        parts.append(Min((Const(0), _join(Max, zeros))))
    if ones:
        parts.append(_join(Max, ones))
    if not parts:
        return Const(-1)
    return _join(Max, parts)


def _is_clamp(e):
    return isinstance(e, Min) and len(e.children) == 2 and e.children[0] == Const(0)


def _minterm_key(e):
    lines = e.children if isinstance(e, Min) else (e,)
    if not all(isinstance(x, Line) for x in lines):
        raise ValueError(f"not a minterm: {e!r}")
    return frozenset((x.var, x.k) for x in lines)


def _terms(e):
    return frozenset(_minterm_key(c) for c in (e.children if isinstance(e, Max) else (e,)))


def minterm_partition(e) -> tuple:
    """(0-valued minterms, +1-valued minterms) of a decoder-form expression.

    Each minterm is a frozenset of ``(var, k)`` pairs, so comparison with a
    hand-written partition is order insensitive.
    """
    if isinstance(e, Const):
        return frozenset(), frozenset()
    if _is_clamp(e):
        return _terms(e.children[1]), frozenset()
    if isinstance(e, Max) and any(_is_clamp(c) for c in e.children):
        clamp = next(c for c in e.children if _is_clamp(c))
        rest = [c for c in e.children if c is not clamp]
        return _terms(clamp.children[1]), _terms(_join(Max, rest))
    return frozenset(), _terms(e)


_SUB = str.maketrans("-0123456789", "₋₀₁₂₃₄₅₆₇₈₉")


def format_expr(e) -> str:
    """Render in the usual notation: juxtaposed minterms, '·' min, '+' max."""
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Line):
        return f"{e.var}{str(e.k).translate(_SUB)}"
    if isinstance(e, Min):
        if all(isinstance(c, Line) for c in e.children):
            return "".join(format_expr(c) for c in e.children)
        return "·".join(_wrap(c) for c in e.children)
    has_clamp = any(_is_clamp(c) for c in e.children)
    if has_clamp:
        return " + ".join(format_expr(c) if _is_clamp(c) else f"({format_expr(c)})" for c in e.children)
    return " + ".join(format_expr(c) for c in e.children)


def _wrap(e):
    s = format_expr(e)
    return f"({s})" if isinstance(e, Max) else s


# ---------------------------------------------------------------- decoder method

@dataclass(frozen=True)
class DecoderSynthesis:
    expressions: dict
    netlist: Netlist

    def formatted(self) -> str:
        return "\n".join(f"{out} = {format_expr(e)}" for out, e in self.expressions.items())


def _lines_used(e, acc):
    if isinstance(e, Line):
        acc.add(e.var)
    elif isinstance(e, (Min, Max)):
        for c in e.children:
            _lines_used(c, acc)


def _check_table(t):
    if not isinstance(t, TruthTable):
        raise TypeError("synthesis needs a complete TruthTable")
    if t.arity_in < 1:
        raise ArityError("synthesis needs at least one input variable")


def synth_decoder(t: TruthTable, devices: DeviceParams = DeviceParams(), name: str | None = None) -> DecoderSynthesis:
    _check_table(t)
    b = NetlistBuilder(name or "synth_decoder")
    for v in t.inputs:
        b.input(v)
    exprs = {out: decoder_form(t.values(j), t.inputs) for j, out in enumerate(t.outputs)}
    used = set()
    for e in exprs.values():
        _lines_used(e, used)
    for v in t.inputs:
        if v in used:
            attach_decoder(b, v, v, devices)

    for out, e in exprs.items():
        counter = iter(range(1, 10 ** 6))

        def emit(node, target=None):
            if isinstance(node, Const):
                return RAIL_FOR_LEVEL[node.value]
            if isinstance(node, Line):
                return line_name(node.var, node.k)
            ins = [emit(c) for c in node.children]
            i = next(counter)
            net = target or b.net(f"{out}.n{i}")
            add_minmax(b, "tmin" if isinstance(node, Min) else "tmax", f"{out}.u{i}", ins, net, devices)
            return net

        if isinstance(e, Const):
            b.add(RailTie(f"{out}.tie", out, e.value))
            b.output(out)
        elif isinstance(e, Line):
            b.output(out, line_name(e.var, e.k))
        else:
            emit(e, target=b.net(out))
            b.output(out)
    return DecoderSynthesis(exprs, b.build())


# ---------------------------------------------------------------- mux method

def projection(n: int, j: int) -> tuple:
    """Column of variable ``j`` over all n-input rows."""
    return tuple(r[j] for r in input_tuples(n))


def synth_mux(t: TruthTable, devices: DeviceParams = DeviceParams(), share_decoders: bool = True,
              name: str | None = None) -> Netlist:
    _check_table(t)
    b = NetlistBuilder(name or "synth_mux")
    variables = t.inputs
    for v in variables:
        b.input(v)
    decoders: dict = {}
    mux_count = 0

    def select_lines(var, idx):
        if not share_decoders:
            return attach_decoder(b, var, f"u{idx}.{var}", devices, name=f"u{idx}.dec")
        if var not in decoders:
            decoders[var] = attach_decoder(b, var, var, devices, name=f"dec_{var}")
        return decoders[var]

    def build(values, depth, out, target=None):
        nonlocal mux_count
        if len(set(values)) == 1:
            return RAIL_FOR_LEVEL[values[0]]
        remaining = len(variables) - depth
        for j in range(remaining):
            if values == projection(remaining, j):
                return variables[depth + j]
        size = 3 ** (remaining - 1)
        kids = [build(values[i * size:(i + 1) * size], depth + 1, out) for i in range(3)]
        mux_count += 1
        idx = mux_count
        lines = select_lines(variables[depth], idx)
        net = b.net(target or f"{out}.w{idx}")
        b.instance(f"u{idx}", build_mux_core(devices), {
            "S-1": lines[0], "S0": lines[1], "S1": lines[2],
            "I-1": kids[0], "I0": kids[1], "I1": kids[2], "OUT": net})
        return net

    for j, out in enumerate(t.outputs):
        values = t.values(j)
        if len(set(values)) == 1:
            b.add(RailTie(f"{out}.tie", out, values[0]))
            b.output(out)
            continue
        net = build(values, 0, out, target=out)
        if net == out:
            b.output(out)
        else:
            b.output(out, net)
    return b.build()


# ---------------------------------------------------------------- cost comparison

@dataclass(frozen=True)
class CostRow:
    kind: str
    method: str
    report: CostReport


def cost_compare(kinds=TABLE7_KINDS, methods=("decoder", "mux"), devices: DeviceParams = DeviceParams()) -> list:
    rows = []
    for method in methods:
        for kind in kinds:
            kind = GateKind.parse(kind) if isinstance(kind, str) else kind
            m = method if kind in TABLE7_KINDS else "decoder"
            n = build_structural(kind, BuildOptions(method=m, devices=devices))
            rows.append(CostRow(kind.name, method, count(n)))
    return rows


def format_cost_grid(rows) -> str:
    kinds = list(dict.fromkeys(r.kind for r in rows))
    methods = list(dict.fromkeys(r.method for r in rows))
    cell = {(r.kind, r.method): str(r.report) for r in rows}
    width = max([len("method")] + [len(m) for m in methods])
    cols = [max(len(k.upper()), *(len(cell[(k, m)]) for m in methods)) for k in kinds]
    lines = ["method".ljust(width) + "  " + "  ".join(k.upper().rjust(c) for k, c in zip(kinds, cols))]
    for m in methods:
        lines.append(m.ljust(width) + "  " + "  ".join(cell[(k, m)].rjust(c) for k, c in zip(kinds, cols)))
    return "\n".join(lines) + "\n"
