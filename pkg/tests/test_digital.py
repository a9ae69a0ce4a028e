import pytest

from btlogic.digital import compile_circuit, equiv, eval_digital, one_hot_patterns, sweep, sweep_onehot
from btlogic.errors import ArityError, PreconditionError, StructuralError, WiringError
from btlogic.gates import (DEC13, DEC29, ENC31, ENC92, MLE, MUL, MUX3, THA, GateKind, add_minmax,
                           build_structural, resolve)
from btlogic.netlist import Memristor, NetlistBuilder, RailTie
from btlogic.truthtable import TruthTable, input_tuples


def structural(name):
    return build_structural(*resolve(name))


@pytest.mark.parametrize("k", [2, 3, 5])
def test_minmax_structural_sweep(k):
    for tag, fn in (("tmin", min), ("tmax", max)):
        t = sweep(structural(f"{tag}{k}"))
        assert t.rows == tuple((fn(r),) for r in input_tuples(k))


@pytest.mark.parametrize("name", ["sti", "pti", "nti", "dec13", "dec29", "mux3", "tha-decoder", "tha-mux",
                                  "mul-decoder", "mul-mux", "mle-decoder", "mle-mux"])
def test_structural_equals_behavioral(name):
    kind, _ = resolve(name)
    ok, cex = equiv(structural(name), kind)
    assert ok, cex[:3]


@pytest.mark.parametrize("name,kind", [("enc31", ENC31), ("enc92", ENC92)])
def test_encoders_on_one_hot_inputs(name, kind):
    assert sweep_onehot(structural(name)) == sweep_onehot(kind)


def test_encoder_off_contract_raises():
    with pytest.raises(PreconditionError):
        eval_digital(structural("enc31"), (0, -1, -1))


def test_one_hot_patterns():
    assert one_hot_patterns(3) == [(1, -1, -1), (-1, 1, -1), (-1, -1, 1)]


def test_sim_sample():
    assert eval_digital(structural("tha-decoder"), (1, 1)) == [-1, 1]
    assert eval_digital(THA, (1, 1)) == [-1, 1]


def test_arity_checked():
    with pytest.raises(ArityError):
        eval_digital(structural("tmin2"), (1,))


def test_sweep_limit():
    with pytest.raises(ArityError):
        sweep(GateKind("TMIN", 10))


def test_equiv_reports_counterexamples():
    ok, cex = equiv(structural("mul-decoder"), structural("mle-decoder"))
    assert not ok
    assert cex[0] == ((-1, -1), (1,), (0,))
    with pytest.raises(ArityError):
        equiv(THA, MUL)


def test_equiv_accepts_tables():
    t = TruthTable.from_function(lambda a, b: a * b, "AB", ("Y",))
    assert equiv(t, MUL)[0]


def _builder():
    b = NetlistBuilder("bad")
    return b, b.input("a"), b.input("b"), b.output("y")


def test_multiple_drivers():
    b, a, c, y = _builder()
    add_minmax(b, "tmin", "u1", (a, c), y, resolve("tmin2")[1].devices)
    b.add(RailTie("t", y, 0))
    with pytest.raises(WiringError):
        compile_circuit(b.build())


def test_undriven_input_to_cell():
    b, a, c, y = _builder()
    dev = resolve("tmin2")[1].devices
    add_minmax(b, "tmin", "u1", (a, b.net("floating")), y, dev)
    with pytest.raises(WiringError):
        compile_circuit(b.build())


def test_unreachable_output():
    b, a, c, y = _builder()
    with pytest.raises(WiringError):
        compile_circuit(b.build())


def test_combinational_cycle():
    b, a, c, y = _builder()
    dev = resolve("tmin2")[1].devices
    w = b.net("w")
    add_minmax(b, "tmin", "u1", (a, w), y, dev)
    add_minmax(b, "tmax", "u2", (y, c), w, dev)
    with pytest.raises(StructuralError):
        compile_circuit(b.build())


def test_bare_device_needs_analog():
    b, a, c, y = _builder()
    b.add(Memristor("m", y, a))
    with pytest.raises(StructuralError):
        compile_circuit(b.build())


def test_rail_inputs_on_cells():
    b, a, c, y = _builder()
    add_minmax(b, "tmin", "u1", (a, "GND"), y, resolve("tmin2")[1].devices)
    fn, _, _ = compile_circuit(b.build())
    assert [fn([x, 0])[0] for x in (-1, 0, 1)] == [-1, 0, 0]


def test_unsupported_object():
    with pytest.raises(TypeError):
        compile_circuit("tmin2")
