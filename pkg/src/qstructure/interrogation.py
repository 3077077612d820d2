"""Sequential interrogation of one- and two-body p-ary systems.

States are density matrices; asking a question projects onto the eigenspace of
the observed outcome (Lueders rule). Outcome q of a question means eigenvalue
omega^q of its phase-normalized operator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .fpfield import Felt, check_prime, inv_mod
from .pauli import (
    EPS,
    PauliLabel,
    commutes,
    composite_operator,
    eigenprojectors,
    is_hermitian,
    is_psd,
    label_unitary,
    tensor,
)
from .structure import (
    CompositeQuestion,
    LocalQuestion,
    Question,
    QuestionSet,
    StructureError,
    question_from_dict,
    question_set,
    single_QM,
)


class InterrogationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SystemState:
    modulus: int
    bodies: int
    rho: np.ndarray

    def __post_init__(self) -> None:
        check_prime(self.modulus)
        dim = self.modulus**self.bodies
        if self.rho.shape != (dim, dim):
            raise InterrogationError(f"rho must be {dim}x{dim}")
        if not is_hermitian(self.rho, 1e-8) or abs(np.trace(self.rho) - 1) > 1e-8 or not is_psd(self.rho, 1e-8):
            raise InterrogationError("rho is not a density matrix")

    @property
    def dim(self) -> int:
        return self.modulus**self.bodies


@dataclass(frozen=True)
class OutcomeDistribution:
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(v < -EPS or v > 1 + EPS for v in self.probs) or abs(sum(self.probs) - 1) > 1e-8:
            raise InterrogationError(f"not a probability distribution: {self.probs}")
        object.__setattr__(self, "probs", tuple(min(max(float(v), 0.0), 1.0) for v in self.probs))

    @property
    def modulus(self) -> int:
        return len(self.probs)

    def is_uniform(self, eps: float = 1e-9) -> bool:
        return all(abs(v - 1 / len(self.probs)) < eps for v in self.probs)

    def certain_outcome(self, eps: float = 1e-9) -> int | None:
        """The outcome carrying all the weight, if there is one."""
        best = max(range(len(self.probs)), key=self.probs.__getitem__)
        return best if self.probs[best] > 1 - eps else None


@dataclass(frozen=True)
class InterrogationRecord:
    question: Question
    outcome: Felt
    time_index: int
    probability: float = 1.0


@dataclass(frozen=True)
class InterrogationHistory:
    records: tuple[InterrogationRecord, ...] = ()
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        times = [r.time_index for r in self.records]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InterrogationError("time indices must be strictly increasing")

    def append(self, q: Question, outcome: Felt, probability: float) -> "InterrogationHistory":
        t = self.records[-1].time_index + 1 if self.records else 1
        return InterrogationHistory(self.records + (InterrogationRecord(q, outcome, t, probability),), self.rng_seed)

    def asked(self) -> set[Question]:
        return {r.question for r in self.records}


@dataclass(frozen=True)
class InfoReport:
    per_question: dict[Question, float]
    system_info: float


# --- states and operators ---------------------------------------------------


def init_state(p: int, bodies: int) -> SystemState:
    """The maximally mixed state I / p^N."""
    check_prime(p)
    if bodies < 1:
        raise InterrogationError("need at least one body")
    dim = p**bodies
    return SystemState(p, bodies, np.eye(dim, dtype=complex) / dim)


def pure_state(p: int, bodies: int, vec: np.ndarray) -> SystemState:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return SystemState(p, bodies, np.outer(v, v.conj()))


def _check_question(q: Question, p: int, bodies: int) -> None:
    if q.modulus != p:
        raise InterrogationError(f"question {q} is over F_{q.modulus}, system over F_{p}")
    if isinstance(q, LocalQuestion) and q.body >= bodies:
        raise InterrogationError(f"question {q} addresses body {q.body} of a {bodies}-body system")
    if isinstance(q, CompositeQuestion) and bodies != 2:
        raise InterrogationError("composite questions need a two-body system")


def question_operator(q: Question, p: int, bodies: int) -> np.ndarray:
    """Operator of a question on the full p^N-dimensional space."""
    _check_question(q, p, bodies)
    if isinstance(q, CompositeQuestion):
        return composite_operator(q.label)
    out = np.eye(1, dtype=complex)
    for s in range(bodies):
        out = tensor(out, label_unitary(q.label) if s == q.body else np.eye(p, dtype=complex))
    return out


@lru_cache(maxsize=None)
def _projectors(q: Question, bodies: int) -> np.ndarray:
    ps = np.array(eigenprojectors(question_operator(q, q.modulus, bodies), q.modulus))
    ps.setflags(write=False)
    return ps


def projectors(q: Question, bodies: int) -> np.ndarray:
    """Eigenprojectors of a question stacked as P[c]; cached."""
    return _projectors(q, bodies)


def outcome_distribution(s: SystemState, q: Question) -> OutcomeDistribution:
    _check_question(q, s.modulus, s.bodies)
    probs = np.einsum("kij,ji->k", projectors(q, s.bodies), s.rho).real
    return OutcomeDistribution(tuple(float(v) for v in probs))


def interrogate(
    s: SystemState,
    q: Question,
    forced_outcome: int | Felt | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[SystemState, Felt, float]:
    """Ask q; the outcome is forced or sampled, and the state is projected accordingly."""
    dist = outcome_distribution(s, q)
    p = s.modulus
    if forced_outcome is not None:
        if isinstance(forced_outcome, Felt) and forced_outcome.modulus != p:
            raise InterrogationError("forced outcome has the wrong modulus")
        c = int(forced_outcome) % p
        if dist.probs[c] <= EPS:
            raise InterrogationError(f"outcome {c} of {q} has zero probability")
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        probs = np.array(dist.probs)
        c = int(rng.choice(p, p=probs / probs.sum()))
    P = projectors(q, s.bodies)[c]
    prob = dist.probs[c]
    rho = P @ s.rho @ P / prob
    rho = (rho + rho.conj().T) / 2
    return SystemState(p, s.bodies, rho), Felt(c, p), prob


def replay(history: InterrogationHistory, p: int, bodies: int) -> SystemState:
    s = init_state(p, bodies)
    for rec in history.records:
        s, _, _ = interrogate(s, rec.question, rec.outcome)
    return s


# --- information ------------------------------------------------------------


InfoMeasure = Callable[[OutcomeDistribution], float]


def shannon_complement(d: OutcomeDistribution) -> float:
    """1 - H(d) / log p: 0 at the uniform distribution, 1 at a point mass."""
    if d.is_uniform():
        return 0.0
    if d.certain_outcome() is not None:
        return 1.0
    h = -sum(v * math.log(v) for v in d.probs if v > 0)
    return 1.0 - h / math.log(d.modulus)


def information_of_question(d: OutcomeDistribution, measure: InfoMeasure | None = None) -> float:
    return (measure or shannon_complement)(d)


def support_rank(s: SystemState, eps: float = EPS) -> int:
    w = np.linalg.eigvalsh(s.rho)
    return int(np.sum(w > eps * s.dim ** -1))


def system_information(s: SystemState) -> float:
    """N - log_p(rank of rho); integral on projective histories."""
    val = s.bodies - math.log(support_rank(s), s.modulus)
    r = round(val)
    return float(r) if abs(val - r) < 1e-9 else val


def information_of_system(h: InterrogationHistory, s: SystemState) -> float:
    """System information of s, after checking that s is what h produces."""
    expected = replay(h, s.modulus, s.bodies)
    if np.max(np.abs(expected.rho - s.rho)) > 1e-8:
        raise InterrogationError("state does not match its history")
    return system_information(s)


def derived_questions(
    h: InterrogationHistory, s: SystemState, qm: QuestionSet | None = None
) -> list[tuple[Question, Felt]]:
    """Questions not yet asked whose outcome the state already fixes."""
    qm = qm if qm is not None else question_set(s.modulus, s.bodies)
    asked = h.asked()
    out = []
    for q in qm:
        if q in asked:
            continue
        c = outcome_distribution(s, q).certain_outcome()
        if c is not None:
            out.append((q, Felt(c, s.modulus)))
    return out


def info_report(
    s: SystemState, qm: QuestionSet, measure: InfoMeasure | None = None
) -> InfoReport:
    """Per-question information (zero entries omitted) and the system information."""
    per = {}
    for q in qm:
        v = information_of_question(outcome_distribution(s, q), measure)
        if v > 1e-12:
            per[q] = v
    return InfoReport(per, system_information(s))


# --- complementarity and compatibility ---------------------------------------


def _as_local(q: PauliLabel | LocalQuestion) -> LocalQuestion:
    return q if isinstance(q, LocalQuestion) else LocalQuestion(0, q)


def check_complementary_erasure(p: int, q1: PauliLabel | LocalQuestion, q2: PauliLabel | LocalQuestion) -> bool:
    """Ask q1 then q2 from the mixed state; is everything learned about q1 gone?

    Every admissible pair of outcomes is tried.
    """
    q1, q2 = _as_local(q1), _as_local(q2)
    if q1.body != q2.body:
        raise InterrogationError("complementary questions act on the same body")
    if commutes(label_unitary(q1.label), label_unitary(q2.label)):
        raise InterrogationError(f"{q1} and {q2} are not complementary")
    bodies = q1.body + 1
    s0 = init_state(p, bodies)
    for a in range(p):
        s1, _, _ = interrogate(s0, q1, a)
        for b in range(p):
            if outcome_distribution(s1, q2).probs[b] <= EPS:
                continue
            s2, _, _ = interrogate(s1, q2, b)
            d = outcome_distribution(s2, q1)
            if not d.is_uniform() or information_of_question(d) != 0:
                return False
    return True


def _bodies_for(*qs: Question) -> int:
    if any(isinstance(q, CompositeQuestion) for q in qs):
        return 2
    return max(q.body for q in qs) + 1


def check_compatible_retention(p: int, q1: Question, q2: Question) -> bool:
    """Ask q1 -> a, then q2 -> b, then q1 again; does a come back with certainty?"""
    bodies = _bodies_for(q1, q2)
    if not commutes(question_operator(q1, p, bodies), question_operator(q2, p, bodies)):
        raise InterrogationError(f"{q1} and {q2} are not compatible")
    s0 = init_state(p, bodies)
    for a in range(p):
        if outcome_distribution(s0, q1).probs[a] <= EPS:
            continue
        s1, _, _ = interrogate(s0, q1, a)
        for b in range(p):
            if outcome_distribution(s1, q2).probs[b] <= EPS:
                continue
            s2, _, _ = interrogate(s1, q2, b)
            if outcome_distribution(s2, q1).certain_outcome() != a:
                return False
    return True


def joint_from_local(s: SystemState, a: PauliLabel, b: PauliLabel, k: int | Felt) -> OutcomeDistribution:
    """Distribution of A (x) B^k built only from asking A on body 0, then B on body 1."""
    if s.bodies != 2:
        raise InterrogationError("joint_from_local needs a two-body state")
    p = s.modulus
    k = int(k) % p
    if k == 0:
        raise InterrogationError("gate index must be nonzero")
    qa, qb = LocalQuestion(0, a), LocalQuestion(1, b)
    probs = [0.0] * p
    for a0, pa in enumerate(outcome_distribution(s, qa).probs):
        if pa <= EPS:
            continue
        s1, _, _ = interrogate(s, qa, a0)
        for b0, pb in enumerate(outcome_distribution(s1, qb).probs):
            probs[(a0 + k * b0) % p] += pa * pb
    return OutcomeDistribution(tuple(probs))


def random_density_matrix(p: int, bodies: int, rng: np.random.Generator) -> SystemState:
    """Full-rank random state G G^dagger / tr, G complex Gaussian."""
    dim = p**bodies
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return SystemState(p, bodies, rho / np.trace(rho).real)


# --- entangled states -------------------------------------------------------


def xx_zz_state(p: int, m: int, n: int) -> np.ndarray:
    """Closed form of the joint eigenvector of X (x) X (outcome m) and Z (x) Z^{p-1} (outcome n).

    sum_r omega^{-rm} |r>|(n - r)(p-1)^{-1}> / sqrt(p).
    """
    check_prime(p)
    inv = inv_mod(p - 1, p)
    v = np.zeros(p * p, dtype=complex)
    for r in range(p):
        s = ((n - r) * inv) % p
        v[r * p + s] = np.exp(-2j * np.pi * ((r * m) % p) / p)
    return v / np.sqrt(p)


def joint_eigenvector(ops: Sequence[np.ndarray], outcomes: Sequence[int], p: int) -> np.ndarray:
    """Unit vector spanning the common eigenspace; raises unless it is one-dimensional."""
    P = np.eye(ops[0].shape[0], dtype=complex)
    for u, c in zip(ops, outcomes):
        P = eigenprojectors(u, p)[c % p] @ P
    w, v = np.linalg.eigh((P + P.conj().T) / 2)
    if np.sum(w > 0.5) != 1:
        raise InterrogationError("common eigenspace is not one-dimensional")
    return v[:, -1]


def overlap(u: np.ndarray, v: np.ndarray) -> float:
    """|<u|v>| for unit vectors: 1 iff equal up to a global phase."""
    return float(abs(np.vdot(u, v)))


# --- scenarios --------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioStep:
    question: Question
    outcome: int | None = None


@dataclass(frozen=True)
class Scenario:
    modulus: int
    bodies: int
    steps: tuple[ScenarioStep, ...]
    seed: int | None = None


@dataclass(frozen=True)
class StepReport:
    step: int
    question: Question | None
    outcome: Felt | None
    probability: float | None
    info: InfoReport
    derived: list[tuple[Question, Felt]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "question": self.question.to_dict() if self.question else None,
            "outcome": None if self.outcome is None else self.outcome.value,
            "probability": None if self.probability is None else round(self.probability, 12),
            "info": {str(q): round(v, 12) for q, v in self.info.per_question.items()},
            "system_info": self.info.system_info,
            "derived": [{"question": q.to_dict(), "outcome": c.value} for q, c in self.derived],
        }


def run_scenario(
    script: Scenario | Iterable[tuple[Question, int | None]],
    p: int | None = None,
    bodies: int | None = None,
    seed: int | None = None,
    measure: InfoMeasure | None = None,
) -> list[StepReport]:
    """Replay a script of (question, optional forced outcome), reporting after each step.

    The first report describes the initial state.
    """
    if not isinstance(script, Scenario):
        steps = tuple(ScenarioStep(q, o) for q, o in script)
        if p is None or bodies is None:
            raise InterrogationError("p and bodies are required for a bare script")
        script = Scenario(p, bodies, steps, seed)
    qm = question_set(script.modulus, script.bodies)
    rng = np.random.default_rng(script.seed if script.seed is not None else 0)
    s = init_state(script.modulus, script.bodies)
    h = InterrogationHistory(rng_seed=script.seed)
    trace = [StepReport(0, None, None, None, info_report(s, qm, measure), derived_questions(h, s, qm))]
    for i, st in enumerate(script.steps, 1):
        try:
            s, c, prob = interrogate(s, st.question, st.outcome, rng)
        except (InterrogationError, StructureError) as exc:
            raise InterrogationError(f"step {i}: {exc}") from None
        h = h.append(st.question, c, prob)
        trace.append(StepReport(i, st.question, c, prob, info_report(s, qm, measure), derived_questions(h, s, qm)))
    return trace


def scenario_from_dict(obj: dict) -> Scenario:
    try:
        p = check_prime(int(obj["p"]))
        bodies = int(obj.get("bodies", 1))
        steps = tuple(
            ScenarioStep(question_from_dict(st["question"], p), None if st.get("outcome") is None else int(st["outcome"]))
            for st in obj["steps"]
        )
    except (KeyError, TypeError) as exc:
        raise InterrogationError(f"malformed scenario: {exc}") from None
    seed = obj.get("seed")
    return Scenario(p, bodies, steps, None if seed is None else int(seed))


def scenario_to_dict(sc: Scenario) -> dict:
    out: dict = {"p": sc.modulus, "bodies": sc.bodies}
    if sc.seed is not None:
        out["seed"] = sc.seed
    out["steps"] = [
        {"question": st.question.to_dict(), **({} if st.outcome is None else {"outcome": st.outcome})}
        for st in sc.steps
    ]
    return out


def load_scenario(text: str) -> Scenario:
    try:
        return scenario_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InterrogationError(f"scenario is not valid JSON: {exc}") from None


def builtin_scenario(which: str, m: int = 1, n: int = 2) -> Scenario:
    """Built-in worked examples: single5, composite5 and bell2."""
    if which == "single5":
        x, z = single_QM(5).members[:2]
        return Scenario(5, 1, (ScenarioStep(x, m % 5), ScenarioStep(z, n % 5)))
    if which == "composite5":
        xx = CompositeQuestion(PauliLabel(1, 0, 5), PauliLabel(1, 0, 5), 1)
        zz = CompositeQuestion(PauliLabel(0, 1, 5), PauliLabel(0, 1, 5), 4)
        return Scenario(5, 2, (ScenarioStep(xx, m % 5), ScenarioStep(zz, n % 5)))
    if which == "bell2":
        xx = CompositeQuestion(PauliLabel(1, 0, 2), PauliLabel(1, 0, 2), 1)
        zz = CompositeQuestion(PauliLabel(0, 1, 2), PauliLabel(0, 1, 2), 1)
        return Scenario(2, 2, (ScenarioStep(xx, 0), ScenarioStep(zz, 0)))
    raise InterrogationError(f"unknown scenario {which!r}; choose single5, composite5 or bell2")
