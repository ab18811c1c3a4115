"""CSS code data model: validation, parameters, Tanner graph export.

A CSS code is the pair (Hx, Hz) of binary parity-check matrices over the
same qubit set with every X-check commuting with every Z-check, i.e.
Hx . Hz^T = 0. Equivalently a 3-term chain complex with the X side as
the top boundary map and the Z side as the bottom one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from qweight.gf2 import (
    BitMatrix,
    mat_mul_t,
    min_weight_in_coset_complement,
    rank,
)

DEFAULT_DISTANCE_BUDGET = 1 << 24


class CssCode:
    """Pair of parity-check matrices (hx: m_x x n, hz: m_z x n)."""

    __slots__ = ("hx", "hz", "label")

    def __init__(self, hx: BitMatrix, hz: BitMatrix, label: str = ""):
        if hx.cols != hz.cols:
            raise ValueError(
                f"qubit count mismatch: hx has {hx.cols} columns, hz has {hz.cols}"
            )
        self.hx = hx
        self.hz = hz
        self.label = label

    @property
    def n(self) -> int:
        return self.hx.cols

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"CssCode(n={self.n}, mx={self.hx.rows}, mz={self.hz.rows}{tag})"


@dataclass
class ValidationReport:
    anticommuting_pairs: list[tuple[int, int]] = field(default_factory=list)
    zero_rows_x: list[int] = field(default_factory=list)
    zero_rows_z: list[int] = field(default_factory=list)
    duplicate_rows_x: list[tuple[int, int]] = field(default_factory=list)
    duplicate_rows_z: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.anticommuting_pairs

    @property
    def warnings(self) -> list[str]:
        out = []
        for side, rows in (("x", self.zero_rows_x), ("z", self.zero_rows_z)):
            for i in rows:
                out.append(f"zero-weight {side}-check {i}")
        for side, pairs in (("x", self.duplicate_rows_x), ("z", self.duplicate_rows_z)):
            for i, j in pairs:
                out.append(f"duplicate {side}-checks {i} and {j}")
        return out


def _row_issues(m: BitMatrix) -> tuple[list[int], list[tuple[int, int]]]:
    zero = []
    seen: dict[int, int] = {}
    dups = []
    for i in range(m.rows):
        v = m.row_as_int(i)
        if v == 0:
            zero.append(i)
        elif v in seen:
            dups.append((seen[v], i))
        else:
            seen[v] = i
    return zero, dups


def validate(code: CssCode) -> ValidationReport:
    """Check commutation; report every anticommuting (x,z) pair plus
    zero-row and duplicate-row warnings."""
    report = ValidationReport()
    prod = mat_mul_t(code.hx, code.hz)
    for i in range(prod.rows):
        for j in prod.row_support(i):
            report.anticommuting_pairs.append((i, j))
    report.zero_rows_x, report.duplicate_rows_x = _row_issues(code.hx)
    report.zero_rows_z, report.duplicate_rows_z = _row_issues(code.hz)
    return report


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    d_x: Optional[int]
    d_z: Optional[int]
    d: Optional[int]
    w_x: int
    w_z: int
    q_x: int
    q_z: int
    w: int

    def __str__(self) -> str:
        def fmt(v):
            return "?" if v is None else str(v)

        return f"n={self.n} k={self.k} d={fmt(self.d)} w={self.w}"


def params(code: CssCode, distance_budget: int = DEFAULT_DISTANCE_BUDGET) -> CodeParams:
    """Code parameters; distances by budgeted exhaustive search.

    d_x is the minimum weight over ker(Hz) \\ rowspace(Hx) (X-type logical
    representatives), d_z the mirror image. Either is None when the search
    budget is exhausted or the logical class is empty; d is only reported
    when both sides are known.
    """
    rep = validate(code)
    if not rep.ok:
        raise ValueError(
            f"code does not commute; first anticommuting pair {rep.anticommuting_pairs[0]}"
        )
    n = code.n
    k = n - rank(code.hx) - rank(code.hz)
    d_x = min_weight_in_coset_complement(code.hz, code.hx, budget=distance_budget).weight
    d_z = min_weight_in_coset_complement(code.hx, code.hz, budget=distance_budget).weight
    d = min(d_x, d_z) if d_x is not None and d_z is not None else None

    def stats(m: BitMatrix) -> tuple[int, int]:
        rw = int(m.row_weights().max()) if m.rows else 0
        cw = int(m.col_weights().max()) if m.rows and m.cols else 0
        return rw, cw

    w_x, q_x = stats(code.hx)
    w_z, q_z = stats(code.hz)
    return CodeParams(
        n=n, k=k, d_x=d_x, d_z=d_z, d=d,
        w_x=w_x, w_z=w_z, q_x=q_x, q_z=q_z,
        w=max(w_x, w_z, q_x, q_z),
    )


def tanner_graph(code: CssCode) -> nx.Graph:
    """Tripartite Tanner graph: nodes ("x",i), ("q",j), ("z",l); one edge
    per nonzero parity-check entry."""
    g = nx.Graph()
    for i in range(code.hx.rows):
        g.add_node(("x", i), kind="x")
    for j in range(code.n):
        g.add_node(("q", j), kind="q")
    for l in range(code.hz.rows):
        g.add_node(("z", l), kind="z")
    for i in range(code.hx.rows):
        for j in code.hx.row_support(i):
            g.add_edge(("x", i), ("q", j))
    for l in range(code.hz.rows):
        for j in code.hz.row_support(l):
            g.add_edge(("q", j), ("z", l))
    return g
