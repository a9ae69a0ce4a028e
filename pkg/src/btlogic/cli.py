"""``btlogic`` command line.

Exit status: 0 success, 1 a reproduction check found a mismatch, 2 usage
error, 3 unreadable or malformed input file, 4 analog solver failure,
5 any other logic, wiring or precondition error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import sys
from pathlib import Path

from .analog import AnalogCircuit, power_report, read_outputs
from .config import FORMATS, ToolkitConfig, load_config
from .digital import compile_circuit, sweep, sweep_onehot
from .errors import BTLogicError, ConfigError, NetlistParseError, PreconditionError, SolverError
from .gates import GATE_NAMES, DEC13, GateKind, build_structural, resolve
from .netlist import Netlist, count, dumps, read_netlist
from .synthesis import cost_compare, format_cost_grid, synth_decoder, synth_mux
from .trit import parse_trit
from .truthtable import read_table

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_FILE, EXIT_SOLVER, EXIT_LOGIC = 0, 1, 2, 3, 4, 5

# Component counts of the reference design, (transistors, memristors).
TABLE9 = {
    ("tha", "decoder"): (10, 59), ("mul", "decoder"): (10, 35), ("mle", "decoder"): (10, 32),
    ("tha", "mux"): (10, 64), ("mul", "mux"): (10, 28), ("mle", "mux"): (10, 46),
}
DEC13_COUNT = (5, 5)
# Reported reduction of THA average power of the decoder method relative to the mux method.
REFERENCE_THA_REDUCTION = 99.77


class UsageError(BTLogicError):
    pass


def _table(rows, header, fmt) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def _circuit(ref: str, cfg: ToolkitConfig) -> Netlist:
    """A netlist file path or one of the built-in gate names."""
    if ref.lower() in GATE_NAMES:
        kind, opts = resolve(ref, cfg.devices)
        return build_structural(kind, opts)
    path = Path(ref)
    if not path.exists():
        raise NetlistParseError(f"{ref!r} is neither a gate name ({', '.join(GATE_NAMES)}) nor a file")
    return read_netlist(path)


# ---------------------------------------------------------------- commands

def cmd_truth(args, cfg, out):
    name = args.gate.lower()
    base = name.partition("-")[0]
    kind = GateKind.parse(base)
    if kind.tag in ("ENC31", "ENC92"):
        rows = [list(ins) + list(outs) for ins, outs in sweep_onehot(kind)]
        out.write(_table(rows, list(kind.inputs) + list(kind.outputs), cfg.format))
        return EXIT_OK
    t = sweep(kind)
    out.write(t.to_csv() if cfg.format == "csv" else t.to_text())
    return EXIT_OK


def cmd_sim(args, cfg, out):
    n = _circuit(args.circuit, cfg)
    try:
        inputs = [parse_trit(x) for x in args.inputs]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.backend == "digital":
        fn, _, names = compile_circuit(n)
        values = list(fn(inputs))
        out.write(" ".join(f"{k}={v}" for k, v in zip(names, values)) + "\n")
        return EXIT_OK
    ac = AnalogCircuit(n, cfg.levels, cfg.solver)
    s = ac.settle(inputs)
    values = read_outputs(s, m=cfg.levels)
    out.write(" ".join(f"{k}={v}" for k, v in zip(ac.output_names, values)) + "\n")
    if args.verbose:
        for name, net in zip(ac.output_names, ac.output_nets):
            out.write(f"  V({name}) = {s.node_voltages[net]:+.6f} V\n")
        out.write(f"  iterations {s.iterations}, KCL residual {s.kcl_residual:.3e} A"
                  f"{', oscillation resolved' if s.oscillated else ''}\n")
    return EXIT_OK


def cmd_sweep(args, cfg, out):
    t = sweep(_circuit(args.circuit, cfg))
    out.write(t.to_csv() if cfg.format == "csv" else t.to_text())
    return EXIT_OK


def cmd_synth(args, cfg, out):
    t = read_table(args.table)
    name = args.name or Path(args.table).stem
    if args.emit == "expr":
        if args.method != "decoder":
            raise PreconditionError("expressions are only produced by the decoder method")
        text = synth_decoder(t, cfg.devices, name=name).formatted() + "\n"
    elif args.method == "decoder":
        text = dumps(synth_decoder(t, cfg.devices, name=name).netlist)
    else:
        text = dumps(synth_mux(t, cfg.devices, name=name))
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_count(args, cfg, out):
    r = count(_circuit(args.circuit, cfg))
    if cfg.format == "csv":
        out.write(_table([[r.transistors, r.memristors, r.behavioral_primitives]],
                         ["transistors", "memristors", "behavioral"], "csv"))
    else:
        out.write(f"{r}\n")
    return EXIT_OK


def cmd_power(args, cfg, out):
    r = power_report(_circuit(args.circuit, cfg), cfg.levels, cfg.solver)
    out.write(r.to_csv() if cfg.format == "csv" else r.to_text())
    return EXIT_OK


def cmd_compare_table9(args, cfg, out):
    rows, ok = [], True
    for r in cost_compare(devices=cfg.devices):
        want = TABLE9[(r.kind, r.method)]
        got = (r.report.transistors, r.report.memristors)
        ok &= got == want and r.report.behavioral_primitives == 0
        rows.append([r.kind.upper(), r.method, str(r.report), f"{want[0]}T{want[1]}M",
                     "ok" if got == want else "MISMATCH"])
    dec = count(build_structural(DEC13))
    got = (dec.transistors, dec.memristors)
    ok &= got == DEC13_COUNT
    rows.append(["DEC13", "-", str(dec), "5T5M", "ok" if got == DEC13_COUNT else "MISMATCH"])
    if cfg.format == "text":
        out.write(format_cost_grid(cost_compare(devices=cfg.devices)) + "\n")
    out.write(_table(rows, ["circuit", "method", "built", "reference", "status"], cfg.format))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_compare_power(args, cfg, out):
    reports = {}
    for kind in ("tha", "mul", "mle"):
        for method in ("decoder", "mux"):
            k, opts = resolve(f"{kind}-{method}", cfg.devices)
            reports[(kind, method)] = power_report(build_structural(k, opts), cfg.levels, cfg.solver)
    rows = []
    for (kind, method), r in reports.items():
        pk = "&".join(map(str, r.peak_input))
        rows.append([kind.upper(), method, f"{r.average * 1e6:.6f}", f"{r.dynamic * 1e6:.6f}",
                     f"{r.static_per_input[r.peak_input] * 1e6:.6f}", pk])
    out.write(_table(rows, ["circuit", "method", "average_uW", "dynamic_uW", "peak_static_uW", "peak_input"],
                     cfg.format))
    dec, mux = reports[("tha", "decoder")].average, reports[("tha", "mux")].average
    change = 100.0 * (mux - dec) / mux if mux else 0.0
    if cfg.format == "csv":
        out.write(f"tha_average_reduction_percent,{change:.2f}\n"
                  f"reference_reduction_percent,{REFERENCE_THA_REDUCTION:.2f}\n")
    else:
        out.write(f"\nTHA average power, decoder method vs mux method: {change:+.2f}% reduction "
                  f"(reference design reports {REFERENCE_THA_REDUCTION:.2f}%; not asserted)\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="btlogic", description="Balanced ternary logic toolkit.")
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--format", choices=FORMATS, help="report format (overrides the config)")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("truth", help="print the truth table of a gate kind")
    s.add_argument("gate", help="tmin2, sti, dec29, tha, ...")
    s.set_defaults(func=cmd_truth)

    s = sub.add_parser("sim", help="evaluate one input tuple")
    s.add_argument("circuit", help="netlist file or gate name")
    s.add_argument("--inputs", nargs="+", required=True, help="trits, e.g. --inputs 1 -1")
    s.add_argument("--backend", choices=("digital", "analog"), default="digital")
    s.add_argument("-v", "--verbose", action="store_true", help="analog: also print voltages")
    s.set_defaults(func=cmd_sim)

    s = sub.add_parser("sweep", help="exhaustive truth table of a circuit")
    s.add_argument("circuit")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("synth", help="synthesize a truth-table file")
    s.add_argument("table")
    s.add_argument("--method", choices=("decoder", "mux"), default="decoder")
    s.add_argument("--emit", choices=("netlist", "expr"), default="netlist")
    s.add_argument("--name", help="netlist name (default: file stem)")
    s.add_argument("-o", "--output", help="write here instead of stdout")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("count", help="transistor/memristor count")
    s.add_argument("circuit")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("power", help="static, average and dynamic power")
    s.add_argument("circuit")
    s.set_defaults(func=cmd_power)

    s = sub.add_parser("compare-table9", help="check component counts against the reference grid")
    s.set_defaults(func=cmd_compare_table9)

    s = sub.add_parser("compare-power", help="decoder vs mux power for THA/MUL/MLE")
    s.set_defaults(func=cmd_compare_power)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_config(args.config) if args.config else ToolkitConfig()
        if args.format:
            cfg = ToolkitConfig(**{**cfg.__dict__, "format": args.format})
        return args.func(args, cfg, out)
    except UsageError as exc:
        err.write(f"btlogic: {exc}\n")
        return EXIT_USAGE
    except (NetlistParseError, ConfigError) as exc:
        err.write(f"btlogic: {exc}\n")
        return EXIT_FILE
    except SolverError as exc:
        err.write(f"btlogic: solver: {exc}\n")
        return EXIT_SOLVER
    except (BTLogicError, ValueError) as exc:
        err.write(f"btlogic: {exc}\n")
        return EXIT_LOGIC
    except OSError as exc:
        err.write(f"btlogic: {exc}\n")
        return EXIT_FILE


if __name__ == "__main__":
    sys.exit(main())
