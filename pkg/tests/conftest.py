"""Shared fixtures: algebra bases and preferred bases reused across tests."""

from __future__ import annotations

import numpy as np
import pytest

from chargeham import (PreferredBasis, build_preferred_basis, gellmann_basis,
                       pauli_basis, seed_cartan_weyl)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# The five maximal mutually-commuting classes of two-qubit Pauli operators;
# together their spans give five pairwise orthogonal Cartan subalgebras that
# cover all of su(4).
TWO_QUBIT_PAULI_CLASSES = (
    ("IZ", "ZI", "ZZ"),
    ("IX", "XI", "XX"),
    ("IY", "YI", "YY"),
    ("XY", "YZ", "ZX"),
    ("YX", "ZY", "XZ"),
)


def two_qubit_pauli(word: str) -> np.ndarray:
    table = {"I": np.eye(2, dtype=complex), "X": SX, "Y": SY, "Z": SZ}
    return np.kron(table[word[0]], table[word[1]])


@pytest.fixture(scope="session")
def su2_basis():
    return pauli_basis()


@pytest.fixture(scope="session")
def su3_basis():
    return gellmann_basis(3)


@pytest.fixture(scope="session")
def su4_basis():
    return gellmann_basis(4)


@pytest.fixture(scope="session")
def su2_preferred(su2_basis):
    return build_preferred_basis(su2_basis)


@pytest.fixture(scope="session")
def su3_preferred(su3_basis):
    return build_preferred_basis(su3_basis)


@pytest.fixture(scope="session")
def su4_preferred(su4_basis):
    """su(4) preferred basis from the two-qubit Pauli class decomposition."""
    bases = tuple(
        seed_cartan_weyl(su4_basis,
                         cartan=[two_qubit_pauli(w) for w in cls])
        for cls in TWO_QUBIT_PAULI_CLASSES
    )
    return PreferredBasis(su4_basis, bases)
