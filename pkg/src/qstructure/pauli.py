"""Generalized Pauli (clock and shift) operators, MUBs and composite operators
in prime dimension.

Matrices are plain complex numpy arrays. Tensor products use the row-major
convention (i_A, i_B) -> i_A * dim_B + i_B, which is what ``np.kron`` does.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fpfield import Felt, check_prime

EPS = 1e-10


class OperatorError(ValueError):
    pass


def omega(p: int) -> complex:
    return complex(np.exp(2j * np.pi / p))


def omega_pow(p: int, e: int) -> complex:
    # Reduce the exponent first so large powers stay exact to machine precision.
    return complex(np.exp(2j * np.pi * (e % p) / p))


def build_Z(p: int) -> np.ndarray:
    check_prime(p)
    return np.diag([omega_pow(p, i) for i in range(p)])


def build_X(p: int) -> np.ndarray:
    check_prime(p)
    x = np.zeros((p, p), dtype=complex)
    for i in range(p):
        x[(i + 1) % p, i] = 1.0
    return x


def matrix_power(m: np.ndarray, e: int) -> np.ndarray:
    return np.linalg.matrix_power(m, e)


# --- labels -----------------------------------------------------------------

_LABEL_RE = re.compile(r"^(X(?:\^(\d+))?)?(Z(?:\^(\d+))?)?$")


@dataclass(frozen=True, order=True)
class PauliLabel:
    """X^x Z^z, exponents reduced mod p."""

    x: int
    z: int
    modulus: int

    def __post_init__(self) -> None:
        check_prime(self.modulus)
        if not (0 <= self.x < self.modulus and 0 <= self.z < self.modulus):
            raise OperatorError("label exponents must be residues mod p")

    @classmethod
    def of(cls, x: int | Felt, z: int | Felt, p: int) -> "PauliLabel":
        return cls(int(x) % p, int(z) % p, p)

    @classmethod
    def parse(cls, text: str, p: int) -> "PauliLabel":
        """Parse 'X', 'Z', 'XZ', 'XZ^3', 'X^2Z^4', 'I'."""
        s = text.strip().replace(" ", "")
        if s == "I":
            return cls(0, 0, check_prime(p))
        m = _LABEL_RE.match(s)
        if not s or m is None:
            raise OperatorError(f"cannot parse Pauli label {text!r}")
        x = (int(m.group(2)) if m.group(2) else 1) if m.group(1) else 0
        z = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        return cls.of(x, z, p)

    @property
    def x_exp(self) -> Felt:
        return Felt(self.x, self.modulus)

    @property
    def z_exp(self) -> Felt:
        return Felt(self.z, self.modulus)

    def in_alphabet(self) -> bool:
        """True for Z and XZ^j, the single-system question operators."""
        return (self.x, self.z) == (0, 1) or self.x == 1

    def __str__(self) -> str:
        def part(sym: str, e: int) -> str:
            return "" if e == 0 else sym if e == 1 else f"{sym}^{e}"

        return (part("X", self.x) + part("Z", self.z)) or "I"


def single_alphabet(p: int) -> list[PauliLabel]:
    """X, Z, XZ, XZ^2, ..., XZ^{p-1}: one label per mutually unbiased basis."""
    check_prime(p)
    return [PauliLabel(1, 0, p), PauliLabel(0, 1, p)] + [PauliLabel(1, j, p) for j in range(1, p)]


def commutation_exponent(a: PauliLabel, c: PauliLabel) -> int:
    """e with A C = omega^e C A for A = X^{a.x} Z^{a.z}, C = X^{c.x} Z^{c.z}."""
    if a.modulus != c.modulus:
        raise OperatorError("modulus mismatch")
    return (a.z * c.x - a.x * c.z) % a.modulus


@dataclass(frozen=True, order=True)
class CompositeLabel:
    """A (x) B^k with k nonzero."""

    a: PauliLabel
    b: PauliLabel
    k: int

    def __post_init__(self) -> None:
        p = self.a.modulus
        if self.b.modulus != p:
            raise OperatorError("modulus mismatch")
        if not 1 <= self.k <= p - 1:
            raise OperatorError(f"composite power must be in 1..{p - 1}, got {self.k}")

    @property
    def modulus(self) -> int:
        return self.a.modulus

    def __str__(self) -> str:
        return f"{self.a} (x) ({self.b})^{self.k}"


def composite_commutation_exponent(u: CompositeLabel, v: CompositeLabel) -> int:
    """e with U V = omega^e V U, from the Weyl relation on each factor."""
    p = u.modulus
    return (commutation_exponent(u.a, v.a) + u.k * v.k * commutation_exponent(u.b, v.b)) % p


def labels_commute(u: CompositeLabel, v: CompositeLabel) -> bool:
    return composite_commutation_exponent(u, v) == 0


def composite_labels(p: int) -> list[CompositeLabel]:
    """All (p+1)^2 (p-1) composites A (x) B^k over the single-system alphabet."""
    alpha = single_alphabet(p)
    return [CompositeLabel(a, b, k) for a in alpha for b in alpha for k in range(1, p)]


# --- operators --------------------------------------------------------------


@lru_cache(maxsize=None)
def _raw_label_matrix(x: int, z: int, p: int) -> np.ndarray:
    m = matrix_power(build_X(p), x) @ matrix_power(build_Z(p), z)
    m.setflags(write=False)
    return m


def operator_from_label(label: PauliLabel, p: int | None = None) -> np.ndarray:
    """X^x Z^z in that product order."""
    p = label.modulus if p is None else p
    if p != label.modulus:
        raise OperatorError("modulus mismatch")
    return _raw_label_matrix(label.x, label.z, p).copy()


def phase_root(u: np.ndarray, p: int, eps: float = EPS) -> complex:
    """Principal p-th root of the phase c in u^p = c I. Raises if u^p is not scalar."""
    up = matrix_power(u, p)
    c = up[0, 0]
    if abs(abs(c) - 1) > eps or np.max(np.abs(up - c * np.eye(u.shape[0]))) > eps:
        raise OperatorError("operator's p-th power is not a unit multiple of the identity")
    return complex(np.exp(1j * np.angle(c) / p))


def normalize_phase(u: np.ndarray, p: int) -> np.ndarray:
    """u divided by the principal root, so that u^p = I and eigenvalues are omega^c."""
    return u / phase_root(u, p)


@lru_cache(maxsize=None)
def _label_unitary(x: int, z: int, p: int) -> np.ndarray:
    m = normalize_phase(_raw_label_matrix(x, z, p), p)
    m.setflags(write=False)
    return m


def label_unitary(label: PauliLabel) -> np.ndarray:
    """Phase-normalized X^x Z^z. Equal to the raw product for odd p; for p = 2,
    XZ becomes XZ / i = -sigma_y so that its eigenvalues are +-1."""
    return _label_unitary(label.x, label.z, label.modulus).copy()


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def composite_operator(c: CompositeLabel, p: int | None = None) -> np.ndarray:
    """U_a (x) U_b^k with phase-normalized factors."""
    p = c.modulus if p is None else p
    if p != c.modulus:
        raise OperatorError("modulus mismatch")
    return tensor(label_unitary(c.a), matrix_power(label_unitary(c.b), c.k))


def commutes(m1: np.ndarray, m2: np.ndarray, eps: float = EPS) -> bool:
    if m1.shape != m2.shape:
        raise OperatorError(f"dimension mismatch: {m1.shape} vs {m2.shape}")
    return bool(np.max(np.abs(m1 @ m2 - m2 @ m1)) < eps)


def eigenprojector(u: np.ndarray, c: int | Felt, p: int) -> np.ndarray:
    """Projector onto the omega^c eigenspace of the phase-normalized u.

    Built as (1/p) sum_t omega^{-ct} u^t, which needs nothing but u^p = I.
    """
    u = normalize_phase(u, p)
    c = int(c) % p
    acc = np.zeros_like(u, dtype=complex)
    power = np.eye(u.shape[0], dtype=complex)
    for t in range(p):
        acc += omega_pow(p, -c * t) * power
        power = power @ u
    return acc / p


def eigenprojectors(u: np.ndarray, p: int) -> list[np.ndarray]:
    return [eigenprojector(u, c, p) for c in range(p)]


def eigen_exponent(u: np.ndarray, v: np.ndarray, p: int, eps: float = EPS) -> int:
    """c with u v = omega^c v for the phase-normalized u; raises if v is not an eigenvector."""
    u = normalize_phase(u, p)
    w = u @ v
    for c in range(p):
        if np.max(np.abs(w - omega_pow(p, c) * v)) < eps:
            return c
    raise OperatorError("vector is not an eigenvector with an omega^c eigenvalue")


# --- bases ------------------------------------------------------------------


def computational_basis(p: int) -> np.ndarray:
    check_prime(p)
    return np.eye(p, dtype=complex)


def fourier_basis(p: int) -> np.ndarray:
    """Columns |j~> = p^{-1/2} sum_k omega^{-kj} |k>; X|j~> = omega^j |j~>."""
    check_prime(p)
    k = np.arange(p)
    return np.array([[omega_pow(p, -kk * j) for j in range(p)] for kk in k]) / np.sqrt(p)


def mub_vector(p: int, k: int | Felt, j: int | Felt) -> np.ndarray:
    """Eigenvector of XZ^k with eigenvalue omega^j.

    Odd p uses the quadratic-phase closed form. For p = 2 the k = 1 basis is
    the sigma_y eigenbasis, matched to the phase-normalized XZ = -sigma_y.
    """
    check_prime(p)
    k, j = int(k) % p, int(j) % p
    if p == 2 and k == 1:
        s = 1 / np.sqrt(2)
        # -sigma_y (1, -i) = +(1, -i); -sigma_y (1, i) = -(1, i)
        return np.array([s, -1j * s]) if j == 0 else np.array([s, 1j * s])
    i = np.arange(p)
    # i(i-1)/2 is an integer, and for odd p its residue depends only on i mod p.
    expo = (-i * j + k * (i * (i - 1) // 2)) % p
    return np.exp(2j * np.pi * expo / p) / np.sqrt(p)


def label_basis(label: PauliLabel) -> np.ndarray:
    """Eigenbasis of a single-system label, column c having eigenvalue omega^c."""
    p = label.modulus
    if not label.in_alphabet():
        raise OperatorError(f"{label} is not a single-system question label")
    if label.x == 0:
        return computational_basis(p)
    return np.column_stack([mub_vector(p, label.z, c) for c in range(p)])


def mub_bases(p: int) -> list[np.ndarray]:
    """Z basis followed by the XZ^k bases, k = 0..p-1; p+1 bases in all."""
    check_prime(p)
    return [computational_basis(p)] + [
        np.column_stack([mub_vector(p, k, j) for j in range(p)]) for k in range(p)
    ]


def is_orthonormal(basis: np.ndarray, eps: float = EPS) -> bool:
    g = basis.conj().T @ basis
    return bool(np.max(np.abs(g - np.eye(basis.shape[1]))) < eps)


def unbiased_deviation(basis_a: np.ndarray, basis_b: np.ndarray, p: int) -> float:
    overlaps = np.abs(basis_a.conj().T @ basis_b) ** 2
    return float(np.max(np.abs(overlaps - 1 / p)))


def check_unbiased(basis_a: np.ndarray, basis_b: np.ndarray, p: int, eps: float = EPS) -> bool:
    if not (is_orthonormal(basis_a, eps) and is_orthonormal(basis_b, eps)):
        raise OperatorError("bases must be orthonormal")
    return unbiased_deviation(basis_a, basis_b, p) < eps


# --- predicates and serialization -------------------------------------------


def is_hermitian(m: np.ndarray, eps: float = EPS) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) < eps)


def is_unitary(m: np.ndarray, eps: float = EPS) -> bool:
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < eps)


def is_psd(m: np.ndarray, eps: float = EPS) -> bool:
    return is_hermitian(m, eps) and bool(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) > -eps)


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        return {"dim": int(m.shape[0]), "data": [[float(z.real), float(z.imag)] for z in m]}
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    flat = np.array([complex(re_, im) for re_, im in obj["data"]], dtype=complex)
    if "dim" in obj:
        if flat.shape[0] != obj["dim"]:
            raise OperatorError("vector length does not match dim")
        return flat
    rows, cols = obj["rows"], obj["cols"]
    if flat.shape[0] != rows * cols:
        raise OperatorError("matrix data does not match rows*cols")
    return flat.reshape(rows, cols)
