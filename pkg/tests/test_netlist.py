import json

import pytest

from btlogic.devices import MemristorModel, State
from btlogic.errors import NetlistParseError, StructuralError
from btlogic.gates import DEC13, GATE_NAMES, build_structural, resolve
from btlogic.netlist import (BehavioralGate, Cell, CostReport, Instance, InvalidNetlistError, Memristor, Netlist,
                             NetlistBuilder, RailTie, check, count, dumps, flatten, loads, read_netlist, tally,
                             validate, write_netlist)


def codes(n):
    return sorted({f.code for f in validate(n)})


def tmin_netlist():
    return build_structural(*resolve("tmin2"))


def test_builtin_gates_are_valid():
    for name in GATE_NAMES:
        n = build_structural(*resolve(name))
        assert validate(n) == [], name


def test_builder_adds_rails():
    b = NetlistBuilder("x")
    assert {"VDD", "GND", "VNEG"} <= set(b.build().nets)


def test_duplicate_net_and_rail():
    n = tmin_netlist()
    bad = Netlist(n.name, n.nets + ("in0", "VDD"), n.components, n.cells, n.inputs, n.outputs)
    assert {"duplicate-net", "duplicate-rail"} <= set(codes(bad))


def test_dangling_net():
    n = tmin_netlist()
    bad = Netlist(n.name, n.nets, n.components + (Memristor("mx", "out", "nowhere"),), n.cells, n.inputs,
                  n.outputs)
    assert "dangling-net" in codes(bad)


def test_duplicate_component_name():
    n = tmin_netlist()
    bad = Netlist(n.name, n.nets, n.components + (n.components[0],), n.cells, n.inputs, n.outputs)
    assert "duplicate-name" in codes(bad)


def test_behavioral_needs_fallback_flag():
    b = NetlistBuilder("beh")
    a = b.input("a")
    y = b.output("y")
    b.add(BehavioralGate("g", "subcircuit1", (a,), (y,)))
    assert "behavioral-primitive" in codes(b.build())
    b.behavioral_fallback = True
    assert codes(b.build()) == []


def test_cell_arity_and_kind():
    b = NetlistBuilder("c")
    a = b.input("a")
    b.output("y")
    b.cell("u1", "tmin", (a,), "y")
    b.cell("u2", "xor", (a,), "y")
    b.cell("u3", "sti", (a, a), "y", ("ghost",))
    assert {"arity", "unknown-cell", "unknown-member"} <= set(codes(b.build()))


def test_unconnected_port_and_floating_output():
    b = NetlistBuilder("top")
    x = b.input("x")
    b.output("y")
    b.instance("d", build_structural(DEC13), {"X": x, "X-1": b.net("a"), "X0": b.net("b")})
    found = codes(b.build())
    assert "unconnected-port" in found
    assert "floating-output" in found


def test_unused_net():
    b = NetlistBuilder("u")
    b.net("lonely")
    assert codes(b.build()) == ["unused-net"]


def test_cyclic_hierarchy_detected():
    inner = Netlist("loop", ("VDD", "GND", "VNEG", "p"), inputs=(("p", "p"),))
    outer = Netlist("loop", ("VDD", "GND", "VNEG", "q"), inputs=(("q", "q"),),
                    children=(Instance("i", inner, (("p", "q"),)),))
    assert "cyclic-hierarchy" in codes(outer)
    with pytest.raises(StructuralError):
        flatten(outer)


def test_check_raises_with_findings():
    b = NetlistBuilder("u")
    b.net("lonely")
    with pytest.raises(InvalidNetlistError) as exc:
        check(b.build())
    assert exc.value.findings[0].code == "unused-net"


def test_flatten_prefixes_and_keeps_rails():
    n = build_structural(*resolve("dec29"))
    flat = flatten(n)
    assert flat.children == ()
    names = {c.name for c in flat.components}
    assert "dec_A/u1.m0" in names and "dec_B/u2.t3" in names
    assert all(r in flat.nets for r in ("VDD", "GND", "VNEG"))
    assert not any(net.endswith("/VDD") for net in flat.nets)
    # child port nets collapse onto the parent nets
    assert "A-1" in flat.nets and "dec_A/X-1" not in flat.nets
    cell_names = {c.name for c in flat.cells}
    assert "dec_A/u2" in cell_names
    for cell in flat.cells:
        assert set(cell.members) <= names


def test_flatten_rejects_shorted_ports():
    child = Netlist("buf", ("VDD", "GND", "VNEG", "w"), inputs=(("a", "w"),), outputs=(("b", "w"),))
    b = NetlistBuilder("top")
    x, y = b.input("x"), b.output("y")
    b.instance("i", child, {"a": x, "b": y})
    with pytest.raises(StructuralError):
        flatten(b.build())


def test_count_and_tally():
    assert str(count(build_structural(DEC13))) == "5T5M"
    assert str(count(tmin_netlist())) == "0T2M"
    assert str(CostReport(1, 2, 3)) == "1T2M+3B"
    assert tally([]) == CostReport(0, 0, 0)
    assert count(build_structural(*resolve("enc31"))).behavioral_primitives == 1


@pytest.mark.parametrize("name", GATE_NAMES)
def test_json_roundtrip(name):
    n = build_structural(*resolve(name))
    text = dumps(n)
    back = loads(text)
    assert back == n.canonical()
    assert dumps(back) == text


def test_json_is_byte_stable(tmp_path):
    n = build_structural(*resolve("tha-mux"))
    p = tmp_path / "tha.json"
    write_netlist(n, p)
    first = p.read_bytes()
    write_netlist(read_netlist(p), p)
    assert p.read_bytes() == first
    doc = json.loads(first)
    # the shared mux core is stored once
    assert sorted(doc["definitions"]) == ["dec13", "mux3_core", "tha_mux"]


def test_json_keeps_device_parameters():
    b = NetlistBuilder("m")
    a, y = b.input("a"), b.output("y")
    b.add(Memristor("m0", y, a, MemristorModel(2e6, 5e3, 0.6, -0.4, State.LRS)))
    b.add(RailTie("t", "y", 0))
    assert loads(dumps(b.build())).components == b.build().canonical().components


def test_parse_error_reports_line():
    with pytest.raises(NetlistParseError) as exc:
        loads('{"schema": "btlogic.netlist",\n "version": 1,\n oops}')
    assert exc.value.line == 3


def test_parse_error_missing_section():
    doc = json.loads(dumps(tmin_netlist()))
    del doc["definitions"]["tmin2"]["nets"]
    with pytest.raises(NetlistParseError) as exc:
        loads(json.dumps(doc))
    assert exc.value.field == "definitions.tmin2.nets"
    assert "nets" in str(exc.value)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(schema="other"),
    lambda d: d.update(version=99),
    lambda d: d.update(top="missing"),
    lambda d: d["definitions"]["tmin2"]["components"][0].update(type="capacitor"),
    lambda d: d["definitions"]["tmin2"]["components"][0].update(state="MAYBE"),
    lambda d: d["definitions"]["tmin2"]["components"][0].pop("plus"),
    lambda d: d["definitions"]["tmin2"]["components"][0].update(r_hrs="big"),
])
def test_parse_rejects_malformed(mutate):
    doc = json.loads(dumps(tmin_netlist()))
    mutate(doc)
    with pytest.raises(NetlistParseError):
        loads(json.dumps(doc))


def test_read_missing_file(tmp_path):
    with pytest.raises(NetlistParseError):
        read_netlist(tmp_path / "absent.json")
