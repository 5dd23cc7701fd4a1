"""Sparse exact Gaussian elimination with inconsistency witnesses.

Entries are any exact field elements supporting ``+ - * /`` and truthiness
(gmpy ``mpq``, sympy ``FracElement``, ``ANP``).  Rows are dicts
``{unknown: coefficient}``.  When a system is inconsistent the solver
returns the row combination that reduces to ``0 = nonzero``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable


@dataclass(frozen=True)
class Solution:
    values: dict
    free: tuple = ()

    @property
    def consistent(self) -> bool:
        return True


@dataclass(frozen=True)
class Inconsistency:
    witness: dict            # equation index -> multiplier
    contradiction: Any       # sum(multiplier * rhs), nonzero

    @property
    def consistent(self) -> bool:
        return False


@dataclass
class LinearSystem:
    """Equations ``sum(row[u] * u) == rhs``."""

    unknowns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def add(self, row: dict, rhs, label: Hashable = None) -> None:
        row = {u: c for u, c in row.items() if c}
        if not row and not rhs:
            return
        self.rows.append(row)
        self.rhs.append(rhs)
        self.labels.append(label)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.unknowns)

    def solve(self, *, zero=0, track=True) -> Solution | Inconsistency:
        order = {u: i for i, u in enumerate(self.unknowns)}
        pivots: dict = {}      # col -> (row, rhs, combo)
        pivot_order: list = []
        for idx, (row0, rhs0) in enumerate(zip(self.rows, self.rhs)):
            row = dict(row0)
            rhs = rhs0
            combo = {idx: _one_like(rhs0, row0)} if track else None
            while True:
                hit = [c for c in row if c in pivots]
                if not hit:
                    break
                for col in hit:
                    f = row.get(col)
                    if not f:
                        continue
                    prow, prhs, pcombo = pivots[col]
                    for c, v in prow.items():
                        nv = row.get(c, zero) - f * v
                        if nv:
                            row[c] = nv
                        else:
                            row.pop(c, None)
                    rhs = rhs - f * prhs
                    if track:
                        for k, v in pcombo.items():
                            nv = combo.get(k, zero) - f * v
                            if nv:
                                combo[k] = nv
                            else:
                                combo.pop(k, None)
            if not row:
                if rhs:
                    return Inconsistency(combo or {}, rhs)
                continue
            col = min(row, key=lambda u: order.get(u, len(order)))
            inv = 1 / row[col]
            row = {c: v * inv for c, v in row.items()}
            rhs = rhs * inv
            if track:
                combo = {k: v * inv for k, v in combo.items()}
            pivots[col] = (row, rhs, combo)
            pivot_order.append(col)
        values: dict = {}
        for col in reversed(pivot_order):
            prow, prhs, _ = pivots[col]
            acc = prhs
            for c, v in prow.items():
                if c != col and c in values:
                    acc = acc - v * values[c]
            values[col] = acc
        free = tuple(u for u in self.unknowns if u not in values)
        for u in free:
            values[u] = zero
        return Solution(values, free)

    def replay(self, witness: dict):
        """Apply a witness: returns (combined row, combined rhs)."""
        row: dict = {}
        rhs = None
        for k, y in witness.items():
            for c, v in self.rows[k].items():
                nv = row.get(c, 0) + y * v if c in row else y * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            term = y * self.rhs[k]
            rhs = term if rhs is None else rhs + term
        return row, rhs

    def check(self, values: dict) -> bool:
        for row, rhs in zip(self.rows, self.rhs):
            acc = None
            for c, v in row.items():
                t = v * values[c]
                acc = t if acc is None else acc + t
            acc = (acc - rhs) if acc is not None else -rhs
            if acc:
                return False
        return True


def _one_like(rhs, row):
    sample = rhs if rhs else next(iter(row.values()))
    return sample / sample
