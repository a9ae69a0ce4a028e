"""Exception hierarchy shared by all btlogic modules."""


class BTLogicError(Exception):
    """Base class for every error raised by this package."""


class TritError(BTLogicError, ValueError):
    """A value outside {-1, 0, +1} was used as a trit."""


class ArityError(BTLogicError, ValueError):
    pass


class RangeError(BTLogicError, ValueError):
    pass


class NumericError(BTLogicError, ValueError):
    pass


class PreconditionError(BTLogicError, ValueError):
    """Inputs violate a gate contract (e.g. non one-hot encoder input)."""


class WiringError(BTLogicError):
    """A net is referenced but missing, undriven, or multiply driven."""


class StructuralError(BTLogicError):
    """Combinational cycles, cyclic hierarchy, unsupported constructs."""


class NetlistParseError(BTLogicError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class TableParseError(NetlistParseError):
    pass


class SolverError(BTLogicError):
    """The switch-level fixed point did not settle."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle or []


class FloatingNodeError(SolverError):
    pass


class UnconvergedError(SolverError):
    pass


class ConfigError(BTLogicError, ValueError):
    pass
