"""Hermitian matrix Lie algebras.

Pauli and generalized Gell-Mann generator bases, structure constants, the
Killing form computed through adjoint matrices, and a registry of the
classical and exceptional families with their dimension/rank data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, Tolerance, commutator, frobenius, hs_inner
from .verify import VerificationReport

__all__ = [
    "LieBasis",
    "StructureConstants",
    "AlgebraRegistryEntry",
    "pauli_basis",
    "gellmann_basis",
    "structure_constants",
    "killing_form",
    "adjoint_matrix",
    "expand_in_basis",
    "registry_table",
    "check_antisymmetry",
]


@dataclass(eq=False)
class LieBasis:
    """A basis of traceless Hermitian generators for su(local_dim).

    ``generators`` are D x D matrices; ``rank`` is the dimension of a maximal
    commuting (Cartan) subalgebra.
    """

    name: str
    local_dim: int
    generators: list[np.ndarray]
    rank: int
    _structure: "StructureConstants | None" = field(default=None, repr=False)

    def __post_init__(self):
        d = self.local_dim
        for i, g in enumerate(self.generators):
            g = np.asarray(g, dtype=complex)
            if g.shape != (d, d):
                raise ValueError(f"generator {i} has shape {g.shape}, "
                                 f"expected ({d}, {d})")
            if abs(np.trace(g)) > 1e-10:
                raise ValueError(f"generator {i} is not traceless")
            if frobenius(g - g.conj().T) > 1e-10:
                raise ValueError(f"generator {i} is not Hermitian")
            self.generators[i] = g
        gram = self.gram()
        if np.linalg.matrix_rank(gram, tol=1e-8) != self.dimension:
            raise ValueError("generators are not linearly independent")

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def ratio(self) -> int:
        return self.dimension // self.rank

    def gram(self) -> np.ndarray:
        g = np.array([[hs_inner(a, b) for b in self.generators]
                      for a in self.generators])
        return g.real

    @property
    def basis_normalized(self) -> bool:
        """True when all generators share one Hilbert-Schmidt norm."""
        norms = np.array([hs_inner(g, g).real for g in self.generators])
        return bool(np.abs(norms - norms.mean()).max() <= 1e-10)

    def structure(self) -> "StructureConstants":
        if self._structure is None:
            self._structure = structure_constants(self)
        return self._structure


@dataclass
class StructureConstants:
    """Expansion coefficients f[gamma, alpha, beta] of [G_a, G_b] over the basis.

    ``[G_alpha, G_beta] = sum_gamma f[gamma, alpha, beta] G_gamma``.
    """

    basis: LieBasis
    f: np.ndarray
    basis_normalized: bool
    max_residual: float


def pauli_basis() -> LieBasis:
    """The Pauli generators of su(2), ordered (sigma_x, sigma_y, sigma_z)."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return LieBasis("su(2)", 2, [sx, sy, sz], rank=1)


def _sym(d: int, j: int, k: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = m[k, j] = 1
    return m


def _antisym(d: int, j: int, k: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = -1j
    m[k, j] = 1j
    return m


def _diag(d: int, level: int) -> np.ndarray:
    v = np.zeros(d)
    v[: level] = 1
    v[level] = -level
    return np.sqrt(2.0 / (level * (level + 1))) * np.diag(v).astype(complex)


def gellmann_basis(local_dim: int) -> LieBasis:
    """Generalized Gell-Mann generators of su(local_dim), Tr(G_a G_b) = 2 d_ab.

    For local_dim = 3 the standard eight Gell-Mann matrices appear in index
    order 1..8.  For other dimensions the order is symmetric pairs (row
    major), antisymmetric pairs, then diagonal generators.
    """
    d = local_dim
    if d < 2:
        raise ValueError("local_dim must be >= 2")
    if d == 3:
        gens = [
            _sym(3, 0, 1), _antisym(3, 0, 1), _diag(3, 1),
            _sym(3, 0, 2), _antisym(3, 0, 2),
            _sym(3, 1, 2), _antisym(3, 1, 2), _diag(3, 2),
        ]
    else:
        pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
        gens = [_sym(d, j, k) for j, k in pairs]
        gens += [_antisym(d, j, k) for j, k in pairs]
        gens += [_diag(d, level) for level in range(1, d)]
    return LieBasis(f"su({d})", d, gens, rank=d - 1)


def expand_in_basis(x: np.ndarray, basis: LieBasis,
                    tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Coefficients of ``x`` over the basis generators (least squares on the
    Gram matrix), with a span check."""
    x = np.asarray(x, dtype=complex)
    gram = np.array([[hs_inner(a, b) for b in basis.generators]
                     for a in basis.generators])
    rhs = np.array([hs_inner(g, x) for g in basis.generators])
    coeff = np.linalg.solve(gram, rhs)
    recon = sum(c * g for c, g in zip(coeff, basis.generators))
    resid = frobenius(x - recon)
    if resid > tol.threshold(frobenius(x)):
        raise ValueError(
            f"matrix is not in the span of {basis.name} "
            f"(residual {resid:.3e})"
        )
    return coeff


def structure_constants(basis: LieBasis,
                        tol: Tolerance = DEFAULT_TOL) -> StructureConstants:
    """Structure constants of the basis, solved through the Gram matrix."""
    c = basis.dimension
    gens = basis.generators
    gram = np.array([[hs_inner(a, b) for b in gens] for a in gens])
    f = np.zeros((c, c, c), dtype=complex)
    max_residual = 0.0
    for alpha in range(c):
        for beta in range(alpha + 1, c):
            cm = commutator(gens[alpha], gens[beta])
            rhs = np.array([hs_inner(g, cm) for g in gens])
            coeff = np.linalg.solve(gram, rhs)
            recon = sum(co * g for co, g in zip(coeff, gens))
            resid = frobenius(cm - recon)
            if resid > tol.threshold(max(1.0, frobenius(cm))):
                raise ValueError(
                    f"commutator [{alpha}, {beta}] closes outside the basis "
                    f"(residual {resid:.3e})"
                )
            max_residual = max(max_residual, resid)
            f[:, alpha, beta] = coeff
            f[:, beta, alpha] = -coeff
    return StructureConstants(basis, f, basis.basis_normalized, max_residual)


def adjoint_matrix(x: np.ndarray, basis: LieBasis) -> np.ndarray:
    """Matrix of ad(x) = [x, .] over the basis generators."""
    xi = expand_in_basis(x, basis)
    return np.tensordot(xi, basis.structure().f, axes=([0], [1]))


def killing_form(x: np.ndarray, y: np.ndarray, basis: LieBasis) -> complex:
    """Killing form (x, y) = Tr(ad(x) ad(y)); errors if x or y leave the span."""
    ax = adjoint_matrix(x, basis)
    ay = adjoint_matrix(y, basis)
    return complex(np.trace(ax @ ay))


@dataclass(frozen=True)
class AlgebraRegistryEntry:
    """Dimension/rank data for one simple-family member."""

    label: str
    family: str
    n: int | None
    dimension: int
    rank: int
    ratio: int
    note: str = ""


def registry_table(max_n: int = 12) -> list[AlgebraRegistryEntry]:
    """Dimension, rank, and dimension/rank ratio for the classical families
    (n = 1..max_n) and the five exceptional algebras.

    The ratio is an exact integer for every entry.
    """
    entries = []

    def add(label, family, n, dim, rank, note=""):
        if dim % rank != 0:
            raise AssertionError(f"{label}: dimension {dim} not divisible "
                                 f"by rank {rank}")
        entries.append(AlgebraRegistryEntry(label, family, n, dim, rank,
                                            dim // rank, note))

    for n in range(1, max_n + 1):
        note = ""
        if n == 1:
            note = "abelian, not simple"
        elif n == 2:
            note = "not simple: so(4) = su(2) + su(2)"
        add(f"so({2 * n})", "so(2n)", n, n * (2 * n - 1), n, note)
    for n in range(1, max_n + 1):
        add(f"sl({n + 1})", "sl(n+1)", n, (n + 1) ** 2 - 1, n)
    for n in range(1, max_n + 1):
        add(f"so({2 * n + 1})", "so(2n+1)", n, n * (2 * n + 1), n)
    for n in range(1, max_n + 1):
        add(f"sp({2 * n})", "sp(2n)", n, n * (2 * n + 1), n)
    add("g2", "exceptional", None, 14, 2)
    add("f4", "exceptional", None, 52, 4)
    add("e6", "exceptional", None, 78, 6)
    add("e7", "exceptional", None, 133, 7)
    add("e8", "exceptional", None, 248, 8)
    return entries


def check_antisymmetry(sc: StructureConstants,
                       threshold: float = 1e-10) -> VerificationReport:
    """Verify f[gamma, alpha, beta] = -f[alpha, gamma, beta].

    Requires a basis whose generators share one Hilbert-Schmidt norm; the
    antisymmetry under gamma <-> alpha only holds in that case.
    """
    if not sc.basis_normalized:
        raise ValueError(
            "check_antisymmetry requires generators of equal "
            "Hilbert-Schmidt norm"
        )
    violation = float(np.abs(sc.f + np.swapaxes(sc.f, 0, 1)).max())
    return VerificationReport(
        check="structure-constant-antisymmetry",
        passed=violation <= threshold,
        residual=violation,
        threshold=threshold,
        context={"algebra": sc.basis.name},
    )
