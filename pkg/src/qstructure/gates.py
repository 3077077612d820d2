"""p-ary logical gates: truth tables, the two non-informativeness restrictions,
equivalence up to output relabelling, and the canonical linear family.

A gate is a function F_p x F_p -> F_p stored as a p x p table, ``table[a][b]``
being the output for inputs (Q_a, Q_b) = (a, b). Restriction 1 (the gate output
says nothing about either input alone) is the Latin-square property; restriction
2 (two different gates say nothing about each other) is orthogonality of the
two Latin squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .fpfield import Felt, check_prime

# Largest p for which the maximality of the gate family is verified by search.
MAX_VERIFY_P = 7


class GateError(ValueError):
    pass


@dataclass(frozen=True)
class GateTable:
    modulus: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        p = check_prime(self.modulus)
        if len(self.table) != p or any(len(row) != p for row in self.table):
            raise GateError(f"gate table must be {p}x{p}")
        if any(not 0 <= v < p for row in self.table for v in row):
            raise GateError(f"gate entries must lie in F_{p}")

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]]) -> "GateTable":
        return cls(p, tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def from_function(cls, p: int, f: Callable[[int, int], int]) -> "GateTable":
        return cls(p, tuple(tuple(f(a, b) % p for b in range(p)) for a in range(p)))

    def __call__(self, a: int, b: int) -> int:
        return self.table[int(a) % self.modulus][int(b) % self.modulus]

    def entry(self, a: Felt, b: Felt) -> Felt:
        if a.modulus != self.modulus or b.modulus != self.modulus:
            raise GateError("modulus mismatch")
        return Felt(self.table[a.value][b.value], self.modulus)

    def relabel(self, sigma: Sequence[int]) -> "GateTable":
        """Apply an output permutation: new[a][b] = sigma[old[a][b]]."""
        return GateTable(self.modulus, tuple(tuple(sigma[v] for v in row) for row in self.table))

    def rows(self) -> Iterator[tuple[int, int, int]]:
        """Truth-table rows (a, b, output), lexicographic in (a, b)."""
        for a, row in enumerate(self.table):
            for b, v in enumerate(row):
                yield a, b, v

    def to_text(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.table) + "\n"

    @classmethod
    def from_text(cls, text: str, p: int | None = None) -> "GateTable":
        rows = [[int(t) for t in line.split()] for line in text.strip().splitlines() if line.strip()]
        return cls.from_rows(p if p is not None else len(rows), rows)


@dataclass(frozen=True)
class GateFamily:
    modulus: int
    gates: tuple[GateTable, ...]

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[GateTable]:
        return iter(self.gates)

    def __getitem__(self, i: int) -> GateTable:
        return self.gates[i]


def gate_linear(p: int, i: int | Felt) -> GateTable:
    """The gate Q_a *_i Q_b = Q_a + i*Q_b (mod p)."""
    check_prime(p)
    if isinstance(i, Felt):
        if i.modulus != p:
            raise GateError("modulus mismatch")
        i = i.value
    if not 1 <= i <= p - 1:
        raise GateError(f"gate index must be in 1..{p - 1}, got {i}")
    return GateTable.from_function(p, lambda a, b: a + i * b)


def _same_modulus(g1: GateTable, g2: GateTable) -> int:
    if g1.modulus != g2.modulus:
        raise GateError(f"modulus mismatch: {g1.modulus} vs {g2.modulus}")
    return g1.modulus


def check_restriction1(g: GateTable) -> bool:
    p = g.modulus
    full = set(range(p))
    rows_ok = all(set(g.table[a]) == full for a in range(p))
    cols_ok = all({g.table[a][b] for a in range(p)} == full for b in range(p))
    return rows_ok and cols_ok


def check_restriction2(g1: GateTable, g2: GateTable) -> bool:
    p = _same_modulus(g1, g2)
    pairs = {(v1, v2) for (_, _, v1), (_, _, v2) in zip(g1.rows(), g2.rows())}
    return len(pairs) == p * p


def _output_map(g1: GateTable, g2: GateTable) -> dict[int, int] | None:
    """The output map sigma with g2 = sigma o g1, if one exists and is a bijection."""
    sigma: dict[int, int] = {}
    for (_, _, v1), (_, _, v2) in zip(g1.rows(), g2.rows()):
        if sigma.setdefault(v1, v2) != v2:
            return None
    if len(set(sigma.values())) != len(sigma):
        return None
    return sigma


def gates_equivalent(g1: GateTable, g2: GateTable) -> bool:
    _same_modulus(g1, g2)
    # An injective partial map always extends to a permutation of F_p.
    return _output_map(g1, g2) is not None


def canonicalize(g: GateTable) -> GateTable:
    """Relabel outputs so that column 0 reads 0, 1, ..., p-1 (g[a][0] = a)."""
    if not check_restriction1(g):
        raise GateError("canonical form is only defined for gates satisfying restriction 1")
    sigma = [0] * g.modulus
    for a in range(g.modulus):
        sigma[g.table[a][0]] = a
    return g.relabel(sigma)


def latin_squares(p: int, *, reduced_column: bool = False) -> Iterator[GateTable]:
    """All Latin squares of order p, in lexicographic order of their rows.

    With ``reduced_column`` only those with g[a][0] = a are produced (one per
    equivalence class)."""
    check_prime(p)
    perms = list(itertools.permutations(range(p)))

    def extend(rows: list[tuple[int, ...]]) -> Iterator[GateTable]:
        a = len(rows)
        if a == p:
            yield GateTable(p, tuple(rows))
            return
        for perm in perms:
            if reduced_column and perm[0] != a:
                continue
            if all(perm[b] != r[b] for r in rows for b in range(p)):
                yield from extend(rows + [perm])

    yield from extend([])


def linear_index(g: GateTable) -> int | None:
    """i if g is equivalent to gate_linear(p, i), else None."""
    p = g.modulus
    for i in range(1, p):
        if gates_equivalent(g, gate_linear(p, i)):
            return i
    return None


def _family_order(g: GateTable) -> tuple[int, tuple[tuple[int, ...], ...]]:
    i = linear_index(g)
    return (i if i is not None else g.modulus, g.table)


def find_orthogonal_mate(members: Sequence[GateTable]) -> GateTable | None:
    """Backtracking search for a Latin square orthogonal to every member.

    The mate is searched in canonical form (column 0 = identity), which loses
    nothing because both properties are invariant under output relabelling.
    Returns None when no mate exists.
    """
    if not members:
        raise GateError("need at least one member")
    p = members[0].modulus
    for g in members:
        _same_modulus(members[0], g)
    cells = [(a, b) for a in range(p) for b in range(1, p)]
    row_used = [{a} for a in range(p)]
    col_used = [set() for _ in range(p)]
    col_used[0] = set(range(p))
    # For member m and output v, which mate values already sit on cells with m == v.
    class_used = [[set() for _ in range(p)] for _ in members]
    for a in range(p):
        for m, g in enumerate(members):
            class_used[m][g.table[a][0]].add(a)
    grid = [[a if b == 0 else -1 for b in range(p)] for a in range(p)]

    def place(idx: int) -> bool:
        if idx == len(cells):
            return True
        a, b = cells[idx]
        blocked = row_used[a] | col_used[b]
        for m, g in enumerate(members):
            blocked |= class_used[m][g.table[a][b]]
        for v in range(p):
            if v in blocked:
                continue
            grid[a][b] = v
            row_used[a].add(v)
            col_used[b].add(v)
            for m, g in enumerate(members):
                class_used[m][g.table[a][b]].add(v)
            if place(idx + 1):
                return True
            row_used[a].discard(v)
            col_used[b].discard(v)
            for m, g in enumerate(members):
                class_used[m][g.table[a][b]].discard(v)
        grid[a][b] = -1
        return False

    if place(0):
        return GateTable.from_rows(p, grid)
    return None


def _exhaustive_classes(p: int) -> list[GateTable]:
    classes = list(latin_squares(p, reduced_column=True))
    best: tuple[GateTable, ...] = ()
    for size in range(len(classes), 0, -1):
        for combo in itertools.combinations(classes, size):
            if all(check_restriction2(x, y) for x, y in itertools.combinations(combo, 2)):
                best = combo
                break
        if best:
            break
    return list(best)


def enumerate_gate_classes(p: int, *, verify: bool = True) -> GateFamily:
    """One canonical gate per class, forming a maximal pairwise-orthogonal family.

    p <= 3: all Latin squares are enumerated and the largest mutually
    orthogonal set of classes is chosen. Larger p: the linear family is built
    and, when ``verify`` is set, its maximality is checked by searching for an
    orthogonal mate (only supported up to MAX_VERIFY_P).
    """
    check_prime(p)
    if p <= 3:
        gates = _exhaustive_classes(p)
    else:
        if verify and p > MAX_VERIFY_P:
            raise GateError(f"maximality search is limited to p <= {MAX_VERIFY_P}; pass verify=False")
        gates = [gate_linear(p, i) for i in range(1, p)]
        if verify:
            if not all(check_restriction1(g) for g in gates):
                raise GateError("linear gate fails restriction 1")
            if not all(check_restriction2(x, y) for x, y in itertools.combinations(gates, 2)):
                raise GateError("linear gates fail restriction 2")
            mate = find_orthogonal_mate(gates)
            if mate is not None:
                raise GateError(f"linear family is not maximal: found mate {mate.table}")
    gates.sort(key=_family_order)
    return GateFamily(p, tuple(gates))


def apply_gate(g: GateTable, a: int | Felt, b: int | Felt) -> int:
    """Outcome of Q_a * Q_b from subsystem outcomes: pure table lookup."""
    return g(int(a), int(b))


def format_truth_table(g: GateTable, name: str | None = None) -> str:
    """Three-column truth table (Q_a, Q_b, output) in lexicographic block order."""
    label = name or "Q_a*Q_b"
    header = ("Q_a", "Q_b", label)
    width = [max(len(header[0]), 1), max(len(header[1]), 1), len(label)]
    lines = [" | ".join(h.rjust(w) for h, w in zip(header, width))]
    lines.append("-+-".join("-" * w for w in width))
    for a, b, v in g.rows():
        lines.append(" | ".join(str(x).rjust(w) for x, w in zip((a, b, v), width)))
        if b == g.modulus - 1 and a != g.modulus - 1:
            lines.append("-+-".join("-" * w for w in width))
    return "\n".join(lines) + "\n"


def gate_name(g: GateTable) -> str:
    i = linear_index(g) if g.table == canonicalize(g).table else None
    if i is None:
        return "Q_a*Q_b"
    if g.modulus == 2:
        return "Q_a XOR Q_b"
    if i == 1:
        return "Q_a+Q_b"
    if i == g.modulus - 1:
        return "Q_a-Q_b" if g.modulus == 3 else f"Q_a+{i}xQ_b"
    return f"Q_a+{i}xQ_b"

