"""Complete ternary truth tables in canonical row order.

Rows are ordered lexicographically over (-1, 0, 1) with the first input most
significant, i.e. ``(-1,-1), (-1,0), (-1,1), (0,-1), ...``.

Text format (``read_table`` / ``TruthTable.to_file_text``)::

    # comments and blank lines are ignored
    inputs A B
    outputs S C
    -1 -1 | 1 -1
    -1  0 | -1 0
    ...

The ``inputs``/``outputs`` header lines give the arity.  Each row lists the
input trits then the output trits; the ``|`` separator is optional.  Trits
may be written ``-1 0 1`` or ``N Z P``.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .errors import ArityError, TableParseError
from .trit import TRITS, check_trit, parse_trit


def input_tuples(n: int):
    """All 3**n input tuples in canonical order."""
    return list(itertools.product(TRITS, repeat=n))


def row_index(inputs: Sequence[int]) -> int:
    idx = 0
    for t in inputs:
        idx = idx * 3 + check_trit(t) + 1
    return idx


def default_names(prefix: str, n: int) -> tuple:
    if prefix == "in" and n <= 26:
        return tuple(chr(ord("A") + i) for i in range(n))
    return tuple(f"{prefix}{i}" for i in range(n))


@dataclass(frozen=True)
class TruthTable:
    inputs: tuple
    outputs: tuple
    rows: tuple  # output tuples, one per canonical input tuple

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        rows = tuple(tuple(check_trit(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != 3 ** len(self.inputs):
            raise ArityError(f"{len(self.inputs)}-input table needs {3 ** len(self.inputs)} rows, got {len(rows)}")
        for r in rows:
            if len(r) != len(self.outputs):
                raise ArityError(f"row {r} does not have {len(self.outputs)} outputs")

    @property
    def arity_in(self) -> int:
        return len(self.inputs)

    @property
    def arity_out(self) -> int:
        return len(self.outputs)

    @classmethod
    def from_function(cls, fn: Callable, inputs, outputs) -> "TruthTable":
        """``fn(*trits)`` must return a trit or a tuple of trits."""
        inputs, outputs = tuple(inputs), tuple(outputs)
        rows = []
        for ins in input_tuples(len(inputs)):
            r = fn(*ins)
            rows.append(tuple(r) if isinstance(r, (tuple, list)) else (r,))
        return cls(inputs, outputs, tuple(rows))

    @classmethod
    def from_columns(cls, inputs, columns: dict) -> "TruthTable":
        outs = tuple(columns)
        return cls(inputs, outs, tuple(zip(*(tuple(columns[o]) for o in outs))))

    def __getitem__(self, ins) -> tuple:
        if len(ins) != self.arity_in:
            raise ArityError(f"expected {self.arity_in} inputs, got {len(ins)}")
        return self.rows[row_index(ins)]

    def items(self):
        return zip(input_tuples(self.arity_in), self.rows)

    def column(self, output) -> "TruthTable":
        j = self.outputs.index(output) if isinstance(output, str) else output
        return TruthTable(self.inputs, (self.outputs[j],), tuple((r[j],) for r in self.rows))

    def values(self, output=0) -> tuple:
        j = self.outputs.index(output) if isinstance(output, str) else output
        return tuple(r[j] for r in self.rows)

    def renamed(self, inputs=None, outputs=None) -> "TruthTable":
        return TruthTable(inputs or self.inputs, outputs or self.outputs, self.rows)

    # -------------------------------------------------------------- rendering

    def to_text(self) -> str:
        """Aligned plain-text table."""
        header = list(self.inputs) + list(self.outputs)
        body = [[str(v) for v in ins + outs] for ins, outs in self.items()]
        widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(header)]

        def fmt(cells):
            left = " ".join(c.rjust(w) for c, w in zip(cells[:self.arity_in], widths))
            right = " ".join(c.rjust(w) for c, w in zip(cells[self.arity_in:], widths[self.arity_in:]))
            return f"{left} | {right}" if self.arity_in else right

        return "\n".join([fmt(header)] + [fmt(r) for r in body]) + "\n"

    def to_csv(self, delimiter: str = ",") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(list(self.inputs) + list(self.outputs))
        for ins, outs in self.items():
            w.writerow(list(ins) + list(outs))
        return buf.getvalue()

    def to_file_text(self) -> str:
        lines = [f"inputs {' '.join(self.inputs)}", f"outputs {' '.join(self.outputs)}"]
        for ins, outs in self.items():
            lines.append(" ".join(f"{v:2d}" for v in ins) + " | " + " ".join(f"{v:2d}" for v in outs))
        return "\n".join(lines) + "\n"


def parse_table(text: str) -> TruthTable:
    inputs = outputs = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head in ("inputs", "outputs"):
            names = tuple(rest.split())
            if head == "inputs":
                inputs = names
            else:
                outputs = names
            continue
        if inputs is None or outputs is None:
            raise TableParseError("rows before the inputs/outputs header", line=lineno)
        tokens = line.replace("|", " ").split()
        try:
            trits = [parse_trit(t) for t in tokens]
        except ValueError as exc:
            raise TableParseError(str(exc), line=lineno) from None
        n, m = len(inputs), len(outputs)
        if len(trits) != n + m:
            raise TableParseError(f"expected {n + m} trits, found {len(trits)}", line=lineno)
        expect = input_tuples(n)[len(rows)] if len(rows) < 3 ** n else None
        if tuple(trits[:n]) != expect:
            raise TableParseError(f"row inputs {tuple(trits[:n])} out of canonical order (expected {expect})",
                                  line=lineno)
        rows.append(tuple(trits[n:]))
    if inputs is None:
        raise TableParseError("missing 'inputs' header", field="inputs")
    if outputs is None:
        raise TableParseError("missing 'outputs' header", field="outputs")
    if len(rows) != 3 ** len(inputs):
        raise TableParseError(f"incomplete table: {len(rows)} of {3 ** len(inputs)} rows")
    return TruthTable(inputs, outputs, tuple(rows))


def read_table(path) -> TruthTable:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_table(text)
