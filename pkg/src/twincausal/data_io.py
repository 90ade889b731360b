"""Grouped-count tables and the empirical joints derived from them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .causal_graph import CausalGraph
from .errors import (
    DuplicateAssignment,
    EmptyTable,
    HeaderMismatch,
    MissingVariable,
    NegativeCount,
    OutOfRangeState,
    ZeroConditioningMass,
)

COUNT_COLUMN = "N"


@dataclass(frozen=True)
class CountsTable:
    """Rows of ``(assignment, count)`` over named discrete variables."""

    variables: tuple[str, ...]
    cards: tuple[int, ...]
    rows: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cards", tuple(int(k) for k in self.cards))
        object.__setattr__(
            self, "rows", tuple((tuple(int(s) for s in a), int(n)) for a, n in self.rows)
        )
        if len(self.variables) != len(self.cards):
            raise ValueError("variables and cards differ in length")
        if len(set(self.variables)) != len(self.variables):
            raise HeaderMismatch(f"duplicate column in {self.variables}")
        seen = set()
        for assignment, n in self.rows:
            if len(assignment) != len(self.variables):
                raise ValueError(f"row {assignment} has wrong arity")
            if n < 0:
                raise NegativeCount(f"negative count {n} for {assignment}")
            for name, s, k in zip(self.variables, assignment, self.cards):
                if not 0 <= s < k:
                    raise OutOfRangeState(f"{name}={s} outside 0..{k - 1}")
            if assignment in seen:
                raise DuplicateAssignment(f"assignment {assignment} listed twice")
            seen.add(assignment)

    @property
    def total(self) -> int:
        """Total count M."""
        return sum(n for _, n in self.rows)

    def to_array(self, order: Sequence[str] | None = None) -> np.ndarray:
        """Dense integer count array with one axis per variable."""
        order = tuple(order) if order is not None else self.variables
        missing = set(order) ^ set(self.variables)
        if missing:
            raise HeaderMismatch(f"column set mismatch: {sorted(missing)}")
        perm = [self.variables.index(v) for v in order]
        arr = np.zeros([self.cards[i] for i in perm], dtype=np.int64)
        for assignment, n in self.rows:
            arr[tuple(assignment[i] for i in perm)] += n
        return arr

    @classmethod
    def from_array(cls, variables, counts, drop_zero: bool = True) -> "CountsTable":
        counts = np.asarray(counts)
        rows = []
        for idx in np.ndindex(counts.shape):
            n = int(counts[idx])
            if n or not drop_zero:
                rows.append((idx, n))
        return cls(tuple(variables), counts.shape, tuple(rows))

    def marginalize(self, keep: Sequence[str]) -> "CountsTable":
        keep = tuple(keep)
        unknown = set(keep) - set(self.variables)
        if unknown:
            raise MissingVariable(f"not in table: {sorted(unknown)}")
        arr = self.to_array()
        drop = tuple(i for i, v in enumerate(self.variables) if v not in keep)
        summed = arr.sum(axis=drop)
        kept_order = [v for v in self.variables if v in keep]
        perm = [kept_order.index(v) for v in keep]
        return CountsTable.from_array(keep, np.transpose(summed, perm))

    def scaled(self, factor: int) -> "CountsTable":
        return CountsTable(
            self.variables, self.cards, tuple((a, n * int(factor)) for a, n in self.rows)
        )


def load_counts(text: str, graph: CausalGraph) -> CountsTable:
    """Parse a counts CSV whose header is the graph's observed variables
    (in any order) followed by ``N``."""
    reader = csv.reader(io.StringIO(text.strip()))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise HeaderMismatch("empty CSV: header required") from None
    if not header or header[-1] != COUNT_COLUMN:
        raise HeaderMismatch(f"last column must be {COUNT_COLUMN!r}, got {header}")
    columns = header[:-1]
    latent = [c for c in columns if c in graph and not graph.var(c).observed]
    if latent:
        raise HeaderMismatch(f"latent variables cannot be columns: {latent}")
    if sorted(columns) != sorted(graph.observed) or len(set(columns)) != len(columns):
        raise HeaderMismatch(
            f"columns {columns} do not match observed variables {list(graph.observed)}"
        )

    rows = []
    for lineno, record in enumerate(reader, start=2):
        if not record or all(not c.strip() for c in record):
            continue
        if len(record) != len(header):
            raise HeaderMismatch(f"line {lineno}: expected {len(header)} cells")
        try:
            cells = [int(c) for c in record]
        except ValueError:
            raise OutOfRangeState(f"line {lineno}: non-integer cell in {record}") from None
        rows.append((tuple(cells[:-1]), cells[-1]))
    return CountsTable(tuple(columns), tuple(graph.card(c) for c in columns), tuple(rows))


def read_counts(path, graph: CausalGraph) -> CountsTable:
    with open(path, encoding="utf-8") as fh:
        return load_counts(fh.read(), graph)


def serialize_counts(table: CountsTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(table.variables) + [COUNT_COLUMN])
    for assignment, n in table.rows:
        writer.writerow(list(assignment) + [n])
    return buf.getvalue()


class EmpiricalJoint:
    """Normalized frequencies ``N / M`` over full assignments."""

    def __init__(self, variables, mass: np.ndarray):
        self.variables = tuple(variables)
        self.mass = np.asarray(mass, dtype=float)
        self.cards = self.mass.shape

    def _axis(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise MissingVariable(f"variable {name!r} not in joint") from None

    def prob(self, assignment: Mapping[str, int]) -> float:
        """Marginal mass of a partial assignment."""
        index = [slice(None)] * len(self.variables)
        for name, state in assignment.items():
            index[self._axis(name)] = int(state)
        return float(math.fsum(np.ravel(self.mass[tuple(index)])))

    def cond(self, target: Mapping[str, int], given: Mapping[str, int]) -> float:
        """P(target | given), as a ratio of marginal masses."""
        denom = self.prob(given) if given else 1.0
        if denom <= 0.0:
            event = ",".join(f"{k}={v}" for k, v in given.items())
            raise ZeroConditioningMass(event)
        return self.prob({**given, **target}) / denom


def empirical_joint(table: CountsTable) -> EmpiricalJoint:
    m = table.total
    if m <= 0:
        raise EmptyTable("empirical joint needs a positive total count")
    return EmpiricalJoint(table.variables, table.to_array() / m)
