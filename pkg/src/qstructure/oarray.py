"""Orthogonal arrays OA(N, k, s, t) and the gate-family correspondence."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .fpfield import check_prime
from .gates import GateFamily, GateTable


class OAError(ValueError):
    pass


@dataclass(frozen=True)
class OrthogonalArray:
    levels: int
    strength: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.levels < 1 or self.strength < 1:
            raise OAError("levels and strength must be positive")
        if not self.data:
            raise OAError("empty array")
        k = len(self.data[0])
        if any(len(row) != k for row in self.data):
            raise OAError("ragged array")
        if any(not 0 <= v < self.levels for row in self.data for v in row):
            raise OAError(f"entries must lie in [0, {self.levels})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], levels: int, strength: int) -> "OrthogonalArray":
        return cls(levels, strength, tuple(tuple(int(v) for v in r) for r in rows))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    @property
    def index(self) -> int:
        """lambda = N / s^t; raises if non-integral."""
        denom = self.levels**self.strength
        if self.rows % denom:
            raise OAError(f"N={self.rows} is not divisible by s^t={denom}")
        return self.rows // denom

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def with_column(self, col: Sequence[int]) -> "OrthogonalArray":
        if len(col) != self.rows:
            raise OAError("column length mismatch")
        return OrthogonalArray(self.levels, self.strength, tuple(r + (int(v),) for r, v in zip(self.data, col)))

    def select(self, cols: Sequence[int]) -> "OrthogonalArray":
        return OrthogonalArray(self.levels, self.strength, tuple(tuple(r[j] for j in cols) for r in self.data))

    def to_csv(self) -> str:
        return "".join(",".join(str(v) for v in row) + "\n" for row in self.data)

    @classmethod
    def from_csv(cls, text: str, levels: int, strength: int) -> "OrthogonalArray":
        rows = []
        for n, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                rows.append([int(tok) for tok in line.split(",")])
            except ValueError:
                raise OAError(f"line {n}: not a comma-separated list of integers") from None
        return cls.from_rows(rows, levels, strength)


@dataclass(frozen=True)
class StrengthViolation:
    cols: tuple[int, ...]
    tuple: tuple[int, ...]
    count: int

    def __str__(self) -> str:
        return f"cols=({','.join(map(str, self.cols))}) tuple=({','.join(map(str, self.tuple))})×{self.count}"


def first_violation(oa: OrthogonalArray) -> StrengthViolation | None:
    """Brute-force count over every t-subset of columns; first bad tuple or None.

    Column subsets are visited in lexicographic order and, within a subset,
    tuples in lexicographic order, so the reported violation is deterministic.
    """
    lam = oa.index
    t = oa.strength
    if t > oa.cols:
        raise OAError(f"strength {t} exceeds column count {oa.cols}")
    for cols in itertools.combinations(range(oa.cols), t):
        counts = Counter(tuple(row[j] for j in cols) for row in oa.data)
        for tup in itertools.product(range(oa.levels), repeat=t):
            if counts[tup] != lam:
                return StrengthViolation(cols, tup, counts[tup])
    return None


def verify_strength(oa: OrthogonalArray) -> bool:
    return first_violation(oa) is None


def combine_gates_to_oa(family: GateFamily | Sequence[GateTable]) -> OrthogonalArray:
    """Columns Q_a, Q_b, g_1(a,b), ..., g_m(a,b); rows lexicographic in (a, b)."""
    gates = list(family)
    if not gates:
        raise OAError("empty gate family")
    p = gates[0].modulus
    if any(g.modulus != p for g in gates):
        raise OAError("gates of mixed modulus")
    rows = [(a, b) + tuple(g.table[a][b] for g in gates) for a in range(p) for b in range(p)]
    return OrthogonalArray.from_rows(rows, levels=p, strength=2)


def max_columns_bound(p: int) -> int:
    """Most columns an OA(p^2, k, p, 2) can have."""
    check_prime(p)
    return p + 1
