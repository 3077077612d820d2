"""Question sets: the determining subset Q_M for one and two bodies, commuting
families of composite questions, the unique-partner formula and the counting
identities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence, Union

import numpy as np

from .fpfield import Felt, check_prime, fp_inv
from .pauli import (
    CompositeLabel,
    PauliLabel,
    commutes,
    composite_labels,
    composite_operator,
    eigenprojectors,
    labels_commute,
    single_alphabet,
)


class StructureError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class LocalQuestion:
    """A single-system question asked of one body."""

    body: int
    label: PauliLabel

    def __post_init__(self) -> None:
        if not self.label.in_alphabet():
            raise StructureError(f"{self.label} is not a single-system question")
        if self.body < 0:
            raise StructureError("body index must be non-negative")

    @property
    def modulus(self) -> int:
        return self.label.modulus

    def to_dict(self) -> dict:
        return {"kind": "local", "subsystem": self.body, "label": str(self.label)}

    def __str__(self) -> str:
        return f"{self.label}@{self.body}"


@dataclass(frozen=True, order=True)
class CompositeQuestion:
    """Q_a *_gate Q_b between body 0 and body 1; realized as A (x) B^gate."""

    a: PauliLabel
    b: PauliLabel
    gate: int

    def __post_init__(self) -> None:
        if self.a.modulus != self.b.modulus:
            raise StructureError("modulus mismatch")
        if not (self.a.in_alphabet() and self.b.in_alphabet()):
            raise StructureError("composite questions combine single-system questions")
        if not 1 <= self.gate <= self.modulus - 1:
            raise StructureError(f"gate index must be in 1..{self.modulus - 1}")

    @property
    def modulus(self) -> int:
        return self.a.modulus

    @property
    def label(self) -> CompositeLabel:
        return CompositeLabel(self.a, self.b, self.gate)

    @classmethod
    def from_label(cls, c: CompositeLabel) -> "CompositeQuestion":
        return cls(c.a, c.b, c.k)

    def to_dict(self) -> dict:
        return {"kind": "composite", "a": str(self.a), "b": str(self.b), "gate": self.gate}

    def __str__(self) -> str:
        return f"{self.a} *{self.gate} {self.b}"


Question = Union[LocalQuestion, CompositeQuestion]


def question_from_dict(obj: dict, p: int) -> Question:
    kind = obj.get("kind")
    try:
        if kind == "local":
            return LocalQuestion(int(obj.get("subsystem", obj.get("body", 0))), _label_field(obj, "label", p))
        if kind == "composite":
            return CompositeQuestion(_label_field(obj, "a", p), _label_field(obj, "b", p), int(obj["gate"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"bad question {obj!r}: {exc}") from None
    raise StructureError(f"question kind must be 'local' or 'composite', got {kind!r}")


def _label_field(obj: dict, key: str, p: int) -> PauliLabel:
    v = obj[key]
    if isinstance(v, dict):
        return PauliLabel.of(v["x"], v["z"], p)
    return PauliLabel.parse(str(v), p)


@dataclass(frozen=True)
class QuestionSet:
    modulus: int
    bodies: int
    members: tuple[Question, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, q: object) -> bool:
        return q in self.members


def single_QM(p: int, body: int = 0) -> QuestionSet:
    """The p+1 local questions X, Z, XZ, ..., XZ^{p-1} of one body."""
    return QuestionSet(p, 1, tuple(LocalQuestion(body, l) for l in single_alphabet(p)))


def composite_QM(p: int) -> QuestionSet:
    """Q_M of two bodies: both local sets plus every Q_a *_i Q_b."""
    alpha = single_alphabet(p)
    members: list[Question] = [LocalQuestion(0, l) for l in alpha]
    members += [LocalQuestion(1, l) for l in alpha]
    members += [CompositeQuestion(a, b, i) for a in alpha for b in alpha for i in range(1, p)]
    return QuestionSet(p, 2, tuple(members))


def question_set(p: int, bodies: int) -> QuestionSet:
    if bodies == 1:
        return single_QM(p)
    if bodies == 2:
        return composite_QM(p)
    raise StructureError("operator-level question sets exist for 1 or 2 bodies only")


def qm_cardinality(p: int, n_bodies: int) -> int:
    """|Q_M| for N bodies, closed form (p^{2N} - 1) / (p - 1)."""
    check_prime(p)
    if n_bodies < 1:
        raise StructureError("need at least one body")
    return (p ** (2 * n_bodies) - 1) // (p - 1)


def qm_cardinality_sum(p: int, n_bodies: int) -> int:
    """|Q_M| counted body-subset by body-subset: sum_k C(N,k) (p+1)^k (p-1)^{k-1}."""
    check_prime(p)
    if n_bodies < 1:
        raise StructureError("need at least one body")
    return sum(comb(n_bodies, k) * (p + 1) ** k * (p - 1) ** (k - 1) for k in range(1, n_bodies + 1))


def dof(p: int, n_bodies: int) -> int:
    """Free parameters of an N-body density matrix, p^{2N} - 1."""
    check_prime(p)
    if n_bodies < 1:
        raise StructureError("need at least one body")
    return p ** (2 * n_bodies) - 1


def unique_partner(a: PauliLabel, b: PauliLabel, m: int | Felt, c: PauliLabel, d: PauliLabel) -> Felt:
    """The one n in F_p^* with [A (x) B^m, C (x) D^n] = 0, for A != C and B != D.

    With A = X^{i1} Z^{i2}, B = X^{j1} Z^{j2}, C = X^{k1} Z^{k2}, D = X^{l1} Z^{l2}:
    n = (i1 k2 - i2 k1) / (m (j2 l1 - j1 l2)).
    """
    p = a.modulus
    if any(lbl.modulus != p for lbl in (b, c, d)):
        raise StructureError("modulus mismatch")
    if not all(lbl.in_alphabet() for lbl in (a, b, c, d)):
        raise StructureError("labels must come from the single-system alphabet")
    m = m if isinstance(m, Felt) else Felt.of(m, p)
    if m.value == 0:
        raise StructureError("m must be nonzero")
    if a == c or b == d:
        raise StructureError("the partner is only unique when A != C and B != D")
    num = Felt.of(a.x * c.z - a.z * c.x, p)
    den = m * Felt.of(b.z * d.x - b.x * d.z, p)
    return num * fp_inv(den)


def partners_by_search(a: PauliLabel, b: PauliLabel, m: int, c: PauliLabel, d: PauliLabel) -> list[int]:
    """Every n in 1..p-1 whose composite commutes with A (x) B^m, by matrix commutator."""
    p = a.modulus
    u = composite_operator(CompositeLabel(a, b, int(m) % p))
    return [n for n in range(1, p) if commutes(u, composite_operator(CompositeLabel(c, d, n)))]


def commutation_graph(p: int) -> tuple[list[CompositeLabel], list[set[int]]]:
    verts = composite_labels(p)
    adj = [set() for _ in verts]
    for i, j in itertools.combinations(range(len(verts)), 2):
        if labels_commute(verts[i], verts[j]):
            adj[i].add(j)
            adj[j].add(i)
    return verts, adj


def maximal_cliques(adj: Sequence[set[int]]) -> list[tuple[int, ...]]:
    """Bron-Kerbosch with pivoting; cliques returned sorted, each as sorted indices."""
    out: list[tuple[int, ...]] = []

    def expand(r: list[int], cand: set[int], excl: set[int]) -> None:
        if not cand and not excl:
            out.append(tuple(sorted(r)))
            return
        pivot = max(cand | excl, key=lambda u: (len(adj[u] & cand), -u))
        for v in sorted(cand - adj[pivot]):
            expand(r + [v], cand & adj[v], excl & adj[v])
            cand = cand - {v}
            excl = excl | {v}

    expand([], set(range(len(adj))), set())
    return sorted(out)


def find_commuting_families(p: int) -> list[tuple[CompositeLabel, ...]]:
    """All maximal sets of pairwise commuting composites A (x) B^k."""
    check_prime(p)
    verts, adj = commutation_graph(p)
    return [tuple(verts[i] for i in clique) for clique in maximal_cliques(adj)]


def check_shared_local_claim(q1: CompositeQuestion, q2: CompositeQuestion) -> bool:
    """Does "sharing a local question implies incompatible" hold for this pair?

    Identical questions and pairs sharing nothing satisfy it vacuously. Compatibility
    is judged from the matrix commutator, independently of the symbolic rule.
    """
    if q1.modulus != q2.modulus:
        raise StructureError("modulus mismatch")
    if q1 == q2:
        return True
    if q1.a != q2.a and q1.b != q2.b:
        return True
    return not commutes(composite_operator(q1.label), composite_operator(q2.label))


def family_gate_tables(
    family: Sequence[CompositeLabel], first: int = 0, second: int = 1
) -> list[tuple[CompositeLabel, list[list[int]]]]:
    """For a commuting family, how each other member's outcome depends on two base members.

    For every outcome pair (q1, q2) of the base members the joint eigenspace is
    projected out and each remaining member's eigenvalue exponent read off.
    Returns (member, table) with table[q1][q2] the member's outcome.
    """
    if len(family) < 3:
        raise StructureError("need at least three members")
    p = family[0].modulus
    ops = [composite_operator(c) for c in family]
    for x, y in itertools.combinations(ops, 2):
        if not commutes(x, y):
            raise StructureError("family members do not commute")
    proj1 = eigenprojectors(ops[first], p)
    proj2 = eigenprojectors(ops[second], p)
    others = [i for i in range(len(family)) if i not in (first, second)]
    member_proj = {i: eigenprojectors(ops[i], p) for i in others}
    tables = {i: [[-1] * p for _ in range(p)] for i in others}
    for q1 in range(p):
        for q2 in range(p):
            joint = proj1[q1] @ proj2[q2]
            weight = np.trace(joint).real
            if weight < 0.5:
                raise StructureError("base members are not independent")
            for i in others:
                hits = [c for c in range(p) if abs(np.trace(member_proj[i][c] @ joint).real - weight) < 1e-8]
                if len(hits) != 1:
                    raise StructureError(f"{family[i]} is not determined by the base members")
                tables[i][q1][q2] = hits[0]
    return [(family[i], tables[i]) for i in others]


def shared_component_pairs(p: int) -> Iterable[tuple[CompositeQuestion, CompositeQuestion]]:
    """Composite pairs that share exactly one local question (the other differs)."""
    alpha = single_alphabet(p)
    for a, b, b2 in itertools.product(alpha, alpha, alpha):
        if b != b2:
            for i, j in itertools.product(range(1, p), repeat=2):
                yield CompositeQuestion(a, b, i), CompositeQuestion(a, b2, j)
                yield CompositeQuestion(b, a, i), CompositeQuestion(b2, a, j)
