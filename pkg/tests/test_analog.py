import math

import pytest

from btlogic.analog import (AnalogCircuit, SolverSettings, SteadyState, power_report, read_outputs, settle,
                            static_power)
from btlogic.devices import MemristorModel, State
from btlogic.digital import eval_digital
from btlogic.errors import FloatingNodeError, SolverError, StructuralError, UnconvergedError
from btlogic.gates import DEC13, BuildOptions, DeviceParams, GateKind, build_structural, resolve
from btlogic.netlist import Memristor, NetlistBuilder, RailTie
from btlogic.trit import LevelMap
from btlogic.truthtable import input_tuples

R_HRS, R_LRS, R_OFF = 1e6, 1e4, 1e8


def structural(name, **dev):
    return build_structural(*resolve(name, DeviceParams(**dev)))


def test_tmin_divider_oracle():
    s = settle(structural("tmin2"), (1, -1))
    assert s.converged
    assert s.node_voltages["out"] == pytest.approx(-1 + 2 * R_LRS / (R_LRS + R_HRS), abs=1e-12)
    assert s.memristor_states == {"u1.m0": State.HRS, "u1.m1": State.LRS}
    assert read_outputs(s) == [-1]
    assert static_power(s) == pytest.approx(4 / (R_HRS + R_LRS), rel=1e-9)


def test_tmax_divider_oracle():
    s = settle(structural("tmax2"), (1, -1))
    assert s.node_voltages["out"] == pytest.approx(1 - 2 * R_LRS / (R_LRS + R_HRS), abs=1e-12)
    assert s.memristor_states == {"u1.m0": State.LRS, "u1.m1": State.HRS}


def test_zero_drive_is_exact():
    s = settle(structural("tmin2"), (0, 0))
    assert s.node_voltages["out"] == 0.0
    assert static_power(s) == 0.0


def test_tmax3_all_high_no_power():
    s = settle(build_structural(GateKind("TMAX", 3)), (1, 1, 1))
    assert static_power(s) <= 4 / R_OFF


def test_dec13_middle_line_pulled_up():
    s = settle(build_structural(DEC13), (0,))
    # HRS pull-up against the off-state leakage of T3
    assert s.node_voltages["X0"] == pytest.approx(1.0, abs=2 * 2 * R_HRS / R_OFF)
    assert not s.switch_states["u2.t2"] and not s.switch_states["u2.t3"]
    assert read_outputs(s) == [-1, 1, -1]


def test_dec13_high_input_shorts_to_vneg():
    s = settle(build_structural(DEC13), (1,))
    assert s.switch_states["u2.t2"] and s.switch_states["u2.t3"]
    assert s.node_voltages["X0"] < -0.9


@pytest.mark.parametrize("k", [2, 3, 5, 7])
@pytest.mark.parametrize("tag", ["TMIN", "TMAX"])
def test_minmax_analog_agrees(tag, k):
    n = build_structural(GateKind(tag, k))
    ac = AnalogCircuit(n)
    for r in input_tuples(k):
        s = ac.settle(r)
        assert s.converged and s.iterations <= 32
        assert read_outputs(s) == eval_digital(n, r), r


@pytest.mark.parametrize("name", ["sti", "pti", "nti", "dec13"])
def test_cells_analog_agree(name):
    n = structural(name)
    for r in input_tuples(len(n.inputs)):
        s = settle(n, r)
        assert s.kcl_residual < 1e-9
        assert read_outputs(s) == eval_digital(n, r)


def test_two_input_full_swing_deviation_bound():
    bound = 2 * R_LRS / (R_LRS + R_HRS)
    for tag in ("tmin2", "tmax2"):
        n = structural(tag)
        for r in ((-1, 1), (1, -1)):
            s = settle(n, r)
            ideal = min(r) if tag == "tmin2" else max(r)
            assert abs(s.node_voltages["out"] - ideal) <= bound + 1e-12


def test_device_parameters_flow_through():
    s = settle(structural("tmin2", memristor=MemristorModel(r_lrs=2e4)), (1, -1))
    assert s.node_voltages["out"] == pytest.approx(-1 + 2 * 2e4 / (2e4 + R_HRS), abs=1e-12)


def test_vdd_scaling():
    s = settle(structural("tmin2"), (1, -1), LevelMap(1.8))
    assert s.node_voltages["out"] == pytest.approx(1.8 * (-1 + 2 * R_LRS / (R_LRS + R_HRS)), abs=1e-12)
    assert read_outputs(s, m=LevelMap(1.8)) == [-1]


def test_deterministic():
    n = structural("mle-mux")
    a, b = settle(n, (0, 1)), settle(n, (0, 1))
    assert a == b


def test_device_states_view():
    s = settle(structural("pti"), (1,))
    assert s.device_states == {"u1.m0": "LRS", "u1.t0": "on"}


def test_transition_starts_from_previous_states():
    ac = AnalogCircuit(structural("tmin2"))
    before = ac.settle((1, -1))
    after = ac.settle((-1, 1), initial=before)
    # first configuration is the old divider; the +1 side then SETs while the
    # old LRS device has not yet reset, briefly leaving two LRS in series
    assert after.snapshots[0] == pytest.approx(4 / (R_LRS + R_HRS))
    assert max(after.snapshots) == pytest.approx(4 / (2 * R_LRS))
    assert read_outputs(after) == [-1]


def test_two_cycle_is_resolved_and_flagged():
    ac = AnalogCircuit(structural("tha-decoder"))
    s = ac.settle((-1, 1), initial=ac.settle((-1, 0)))
    assert s.oscillated and s.converged


def test_unconverged_raises():
    n = build_structural(DEC13)
    with pytest.raises(UnconvergedError) as exc:
        settle(n, (1,), settings=SolverSettings(max_iter=1))
    assert isinstance(exc.value, SolverError)


def test_read_outputs_needs_convergence():
    s = settle(structural("tmin2"), (1, 1))
    bad = SteadyState(**{**s.__dict__, "converged": False})
    with pytest.raises(UnconvergedError):
        read_outputs(bad)
    with pytest.raises(UnconvergedError):
        static_power(bad)


def test_behavioral_primitives_rejected():
    with pytest.raises(StructuralError):
        AnalogCircuit(structural("enc31"))


def test_floating_node():
    b = NetlistBuilder("float")
    a, y = b.input("a"), b.output("y")
    b.add(Memristor("m0", y, a))
    b.add(Memristor("m1", b.net("island1"), b.net("island2")))
    with pytest.raises(FloatingNodeError):
        AnalogCircuit(b.build())


def test_rail_tie_is_a_source():
    b = NetlistBuilder("tie")
    a, y = b.input("a"), b.output("y")
    b.add(RailTie("t", "z", 1))
    b.add(Memristor("m0", y, a))
    b.add(Memristor("m1", y, "z"))
    s = settle(b.build(), (-1,))
    assert s.node_voltages["z"] == 1.0
    assert read_outputs(s) == [-1]


def test_power_report_tmin():
    r = power_report(structural("tmin2"))
    assert len(r.static_per_input) == 9
    assert r.average == pytest.approx(sum(r.static_per_input.values()) / 9)
    assert r.dynamic == pytest.approx(abs(r.max_instantaneous - r.average))
    assert r.max_instantaneous >= max(r.static_per_input.values())
    assert all(p >= 0 for p in r.static_per_input.values())
    for x in (-1, 0, 1):
        assert r.static_per_input[(x, x)] <= 4 / R_OFF
    assert r.peak_input in ((-1, 1), (1, -1))


def test_power_report_constant_circuit():
    b = NetlistBuilder("const")
    y = b.output("y")
    b.add(RailTie("t", "z", 1))
    b.add(Memristor("m0", y, "z"))
    r = power_report(b.build())
    assert r.dynamic == 0.0
    assert list(r.static_per_input) == [()]


def test_power_report_rendering():
    r = power_report(structural("tmin2"))
    csv_text = r.to_csv()
    assert csv_text.splitlines()[0] == "inputs,static_W"
    assert "-1 1,3.960396e-06" in csv_text
    text = r.to_text()
    assert "average" in text and "[-1&1]" in text


@pytest.mark.parametrize("name", ["tha-decoder", "tha-mux", "mul-decoder", "mul-mux", "mle-decoder", "mle-mux"])
def test_arithmetic_circuits_settle(name):
    r = power_report(structural(name))
    assert len(r.static_per_input) == 9
    assert all(p >= 0 and math.isfinite(p) for p in r.static_per_input.values())
    assert r.dynamic == pytest.approx(abs(r.max_instantaneous - r.average))
