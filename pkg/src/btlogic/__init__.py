"""Balanced ternary logic toolkit: gates, netlists, simulation, synthesis."""
from .analog import (AnalogCircuit, PowerReport, SolverSettings, SteadyState, power_report, read_outputs, settle,
                     static_power)
from .config import ToolkitConfig, load_config, save_config
from .devices import MemristorModel, State, SwitchKind, SwitchModel, memristor_next_state, switch_conducts
from .digital import eval_digital, equiv, sweep, sweep_onehot
from .errors import (ArityError, BTLogicError, ConfigError, FloatingNodeError, NetlistParseError, NumericError,
                     PreconditionError, RangeError, SolverError, StructuralError, TableParseError, TritError,
                     UnconvergedError, WiringError)
from .gates import (GATE_NAMES, BuildOptions, DeviceParams, GateKind, behavioral_eval, build_structural, resolve,
                    table7)
from .netlist import (Cell, CostReport, Instance, Memristor, Netlist, NetlistBuilder, RailTie, Transistor, count,
                      dumps, flatten, loads, read_netlist, validate, write_netlist)
from .synthesis import (Const, Line, Max, Min, cost_compare, expr_eval, format_expr, minterm_partition,
                        synth_decoder, synth_mux)
from .trit import (BalancedWord, LevelMap, int_to_word, nti, pti, sti, tmax, tmin, trit_to_voltage,
                   voltage_to_trit, word_to_int)
from .truthtable import TruthTable, parse_table, read_table

__version__ = "0.1.0"
