import itertools

import numpy as np
import pytest

from qstructure.pauli import (
    CompositeLabel,
    OperatorError,
    PauliLabel,
    build_X,
    build_Z,
    check_unbiased,
    commutation_exponent,
    commutes,
    composite_commutation_exponent,
    composite_labels,
    composite_operator,
    eigen_exponent,
    eigenprojector,
    is_hermitian,
    is_orthonormal,
    is_psd,
    is_unitary,
    label_basis,
    label_unitary,
    matrix_from_json,
    matrix_to_json,
    mub_bases,
    mub_vector,
    omega,
    operator_from_label,
    single_alphabet,
    unbiased_deviation,
)

PRIMES = [2, 3, 5, 7]
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


@pytest.mark.parametrize("p", PRIMES)
def test_weyl_relation_and_orders(p):
    X, Z, I = build_X(p), build_Z(p), np.eye(p)
    assert np.max(np.abs(Z @ X - omega(p) * X @ Z)) < 1e-12
    assert np.max(np.abs(np.linalg.matrix_power(X, p) - I)) < 1e-12
    assert np.max(np.abs(np.linalg.matrix_power(Z, p) - I)) < 1e-12
    assert is_unitary(X) and is_unitary(Z)


def test_qubit_matches_pauli_matrices():
    assert np.allclose(build_X(2), SX) and np.allclose(build_Z(2), SZ)
    xz = label_unitary(PauliLabel(1, 1, 2))
    assert np.allclose(xz, -SY)
    assert np.allclose(operator_from_label(PauliLabel(1, 1, 2)), -1j * SY)


def test_p5_matrices():
    X, Z = build_X(5), build_Z(5)
    w = np.exp(2j * np.pi / 5)
    assert np.allclose(np.diag(Z), [1, w, w**2, w**3, w**4])
    e = np.eye(5)
    for i in range(5):
        assert np.allclose(X @ e[:, i], e[:, (i + 1) % 5])


@pytest.mark.parametrize("p", PRIMES)
def test_mub_suite(p):
    bases = mub_bases(p)
    assert len(bases) == p + 1
    assert all(is_orthonormal(B) for B in bases)
    for A, B in itertools.combinations(bases, 2):
        assert unbiased_deviation(A, B, p) < 1e-10
        assert check_unbiased(A, B, p)


@pytest.mark.parametrize("p", PRIMES)
def test_label_bases_are_eigenbases(p):
    for lbl in single_alphabet(p):
        B, U = label_basis(lbl), label_unitary(lbl)
        for c in range(p):
            assert eigen_exponent(U, B[:, c], p) == c


@pytest.mark.parametrize("p", [3, 5, 7])
def test_mub_vector_closed_form_against_eigh(p):
    for k in range(p):
        U = label_unitary(PauliLabel(1, k, p))
        for j in range(p):
            v = mub_vector(p, k, j)
            assert np.allclose(U @ v, np.exp(2j * np.pi * j / p) * v)


def test_fourier_overlap_example():
    # |<0|j~>|^2 = 1/3 for p = 3
    B = mub_bases(3)
    assert np.allclose(np.abs(B[0].conj().T @ B[1]) ** 2, 1 / 3)


def test_commutation_exponent_matches_matrices():
    for p in (2, 3, 5):
        labels = [PauliLabel(x, z, p) for x in range(p) for z in range(p)]
        for a, c in itertools.product(labels, repeat=2):
            A, C = operator_from_label(a), operator_from_label(c)
            e = commutation_exponent(a, c)
            assert np.allclose(A @ C, np.exp(2j * np.pi * e / p) * C @ A)


def test_composite_commutation_matches_matrices():
    for p in (2, 3):
        for u, v in itertools.product(composite_labels(p), repeat=2):
            U, V = composite_operator(u), composite_operator(v)
            assert (composite_commutation_exponent(u, v) == 0) == commutes(U, V)


def test_composite_operator_examples():
    X, Z = build_X(5), build_Z(5)
    x5, z5 = PauliLabel(1, 0, 5), PauliLabel(0, 1, 5)
    assert np.allclose(composite_operator(CompositeLabel(x5, x5, 1)), np.kron(X, X))
    assert np.allclose(composite_operator(CompositeLabel(z5, z5, 4)), np.kron(Z, np.linalg.matrix_power(Z, 4)))
    y2 = PauliLabel(1, 1, 2)
    assert np.allclose(composite_operator(CompositeLabel(y2, y2, 1)), np.kron(SY, SY))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_eigenprojectors_resolve_identity(p):
    for c in composite_labels(p)[:: max(1, p)]:
        U = composite_operator(c)
        Ps = [eigenprojector(U, k, p) for k in range(p)]
        assert np.allclose(sum(Ps), np.eye(p * p))
        for k, P in enumerate(Ps):
            assert np.allclose(P @ P, P) and is_hermitian(P)
            assert np.isclose(np.trace(P).real, p)
            assert np.allclose(U @ P, np.exp(2j * np.pi * k / p) * P)


def test_label_parsing():
    assert str(PauliLabel.parse("XZ^3", 5)) == "XZ^3"
    assert PauliLabel.parse("X^2Z^4", 5) == PauliLabel(2, 4, 5)
    assert PauliLabel.parse("I", 3) == PauliLabel(0, 0, 3)
    assert PauliLabel.parse("XZ^7", 5) == PauliLabel(1, 2, 5)
    for bad in ("", "Y", "ZX", "X^"):
        with pytest.raises(OperatorError):
            PauliLabel.parse(bad, 5)


def test_alphabet_order():
    assert [str(l) for l in single_alphabet(5)] == ["X", "Z", "XZ", "XZ^2", "XZ^3", "XZ^4"]
    assert len(composite_labels(3)) == 32 and len(composite_labels(5)) == 144


def test_errors():
    with pytest.raises(OperatorError):
        CompositeLabel(PauliLabel(1, 0, 5), PauliLabel(1, 0, 5), 0)
    with pytest.raises(OperatorError, match="dimension"):
        commutes(np.eye(2), np.eye(3))
    with pytest.raises(OperatorError):
        check_unbiased(np.ones((2, 2)), np.eye(2), 2)
    with pytest.raises(OperatorError):
        eigen_exponent(build_X(3), np.array([1, 0, 0], dtype=complex), 3)


def test_predicates():
    assert is_psd(np.eye(3) / 3) and not is_psd(np.diag([1.0, -0.5]))
    assert not is_hermitian(build_X(3))


def test_json_round_trip():
    m = composite_operator(CompositeLabel(PauliLabel(1, 2, 3), PauliLabel(0, 1, 3), 2))
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)
    v = mub_vector(5, 2, 3)
    assert np.array_equal(matrix_from_json(matrix_to_json(v)), v)
