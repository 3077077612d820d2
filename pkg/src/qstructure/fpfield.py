"""Arithmetic in the prime field F_p."""

from __future__ import annotations

from dataclasses import dataclass

# Trial division is plenty for the moduli this package works with.
MAX_PRIME = 10_000


class FieldError(ValueError):
    """Raised on invalid field operations (bad modulus, mismatch, zero inverse)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Return ``p`` unchanged if it is prime, else raise FieldError."""
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise FieldError(f"prime required, got {p!r}")
    return p


@dataclass(frozen=True, order=True)
class Felt:
    """An element of F_p. Carries its modulus; mixing moduli is an error."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        check_prime(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise FieldError(f"{self.value} is not a residue mod {self.modulus}")

    @classmethod
    def of(cls, value: int, p: int) -> "Felt":
        return cls(value % p, p)

    def _coerce(self, other: "Felt | int") -> "Felt":
        if isinstance(other, Felt):
            if other.modulus != self.modulus:
                raise FieldError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other
        return Felt.of(int(other), self.modulus)

    def __add__(self, other: "Felt | int") -> "Felt":
        return fp_add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: "Felt | int") -> "Felt":
        o = self._coerce(other)
        return Felt((self.value - o.value) % self.modulus, self.modulus)

    def __rsub__(self, other: "Felt | int") -> "Felt":
        return self._coerce(other) - self

    def __mul__(self, other: "Felt | int") -> "Felt":
        return fp_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Felt":
        return Felt((-self.value) % self.modulus, self.modulus)

    def __truediv__(self, other: "Felt | int") -> "Felt":
        return self * fp_inv(self._coerce(other))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def inv(self) -> "Felt":
        return fp_inv(self)

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


def _same_modulus(a: Felt, b: Felt) -> int:
    if a.modulus != b.modulus:
        raise FieldError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    return a.modulus


def fp_add(a: Felt, b: Felt) -> Felt:
    p = _same_modulus(a, b)
    return Felt((a.value + b.value) % p, p)


def fp_mul(a: Felt, b: Felt) -> Felt:
    p = _same_modulus(a, b)
    return Felt((a.value * b.value) % p, p)


def fp_inv(a: Felt) -> Felt:
    if a.value == 0:
        raise FieldError("zero has no multiplicative inverse")
    return Felt(pow(a.value, a.modulus - 2, a.modulus), a.modulus)


def inv_mod(a: int, p: int) -> int:
    """Plain-int inverse, for hot loops that don't want Felt boxing."""
    return fp_inv(Felt.of(a, p)).value


def elements(p: int) -> list[Felt]:
    check_prime(p)
    return [Felt(v, p) for v in range(p)]
