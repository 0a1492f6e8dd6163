"""Dense complex linear algebra primitives.

Tolerances, commutators, tensor-product site embedding, Hilbert-Schmidt inner
products, SVD nullspaces, and simultaneous diagonalization of commuting
Hermitian operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Eigenspace",
    "commutator",
    "dag",
    "frobenius",
    "hs_inner",
    "kron_embed",
    "embed_sites",
    "total_operator",
    "nullspace",
    "eig_hermitian",
    "is_hermitian",
    "simultaneous_eigenspaces",
]

# eigenvalues are rounded to this many decimals when clustering degenerate
# levels into joint eigenspaces
LABEL_DECIMALS = 8


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair.

    The effective threshold at a given scale is ``max(abs, rel * scale)``.
    """

    abs: float = 1e-10
    rel: float = 1e-10

    def threshold(self, scale: float) -> float:
        return max(self.abs, self.rel * float(scale))


DEFAULT_TOL = Tolerance()


def _as_square(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = a @ b - b @ a for square matrices of identical shape."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dag b)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def is_hermitian(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = _as_square(a)
    return frobenius(a - dag(a)) <= tol.threshold(frobenius(a))


def embed_sites(op: np.ndarray, sites: tuple[int, ...], n_sites: int,
                local_dim: int) -> np.ndarray:
    """Embed a k-site operator at 1-based ``sites`` of an n-site chain.

    Site 1 is the leftmost tensor factor.  The order of ``sites`` matches the
    tensor-index order of ``op``.
    """
    op = _as_square(np.asarray(op, dtype=complex), "op")
    if n_sites < 1 or local_dim < 2:
        raise ValueError(f"need n_sites >= 1 and local_dim >= 2, got "
                         f"{n_sites}, {local_dim}")
    for s in sites:
        if not 1 <= s <= n_sites:
            raise ValueError(f"site {s} outside 1..{n_sites}")
    return _backend.embed_sites(op, tuple(s - 1 for s in sites), n_sites,
                                local_dim)


def kron_embed(op: np.ndarray, site: int, n_sites: int,
               local_dim: int) -> np.ndarray:
    """Embed a single-site operator at 1-based ``site`` of an n-site chain."""
    return embed_sites(op, (site,), n_sites, local_dim)


def total_operator(op: np.ndarray, n_sites: int, local_dim: int) -> np.ndarray:
    """Sum of ``op`` embedded at every site (the lattice total of a charge)."""
    dim = local_dim ** n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for site in range(1, n_sites + 1):
        out += kron_embed(op, site, n_sites, local_dim)
    return out


def nullspace(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the approximate nullspace of ``m``.

    Returns a 2-D array whose *rows* are the basis vectors, ordered by
    descending original singular-value index.  Singular values below
    ``max(tol.abs, tol.rel * s_max)`` count as zero.  Each vector's phase is
    fixed so its largest-magnitude entry is real positive.
    """
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    n = m.shape[1]
    _, s, vt = np.linalg.svd(m)
    smax = float(s[0]) if s.size else 0.0
    thr = tol.threshold(smax)
    null_idx = [i for i in range(n) if i >= s.size or s[i] < thr]
    vecs = []
    for i in sorted(null_idx, reverse=True):
        v = vt[i].conj()
        j = int(np.argmax(np.abs(v)))
        if abs(v[j]) > 0:
            v = v * (v[j].conjugate() / abs(v[j]))
        vecs.append(v)
    out = np.array(vecs) if vecs else np.zeros((0, n), dtype=complex)
    mnorm = frobenius(m)
    for v in out:
        resid = float(np.linalg.norm(m @ v))
        if resid > 10 * thr * max(1.0, mnorm):
            raise RuntimeError(
                f"nullspace vector residual {resid:.3e} exceeds bound"
            )
    return out


def eig_hermitian(h: np.ndarray,
                  tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Raises ``ValueError`` if ``h`` is not Hermitian within tolerance.
    """
    h = _as_square(h, "h")
    scale = frobenius(h)
    asym = frobenius(h - dag(h))
    if asym > tol.threshold(scale):
        raise ValueError(f"matrix is not Hermitian: |h - h^dag| = {asym:.3e}")
    w, v = np.linalg.eigh(h)
    recon = frobenius(h - (v * w) @ dag(v))
    if recon > 1e-9 * max(1.0, scale):
        raise RuntimeError(f"eigendecomposition residual {recon:.3e}")
    return w, v


@dataclass
class Eigenspace:
    """A joint eigenspace of a commuting Hermitian family.

    ``label`` holds one rounded eigenvalue per operator.  ``basis`` has the
    orthonormal basis vectors as columns.  When every operator is diagonal,
    ``indices`` carries the standard-basis columns spanning the block.
    """

    label: tuple[float, ...]
    basis: np.ndarray
    indices: np.ndarray | None = None

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]


def _round_label(values: np.ndarray) -> np.ndarray:
    # + 0.0 normalizes -0.0 so labels compare and print cleanly
    return np.round(np.real(values), LABEL_DECIMALS) + 0.0


def simultaneous_eigenspaces(ops, tol: Tolerance = DEFAULT_TOL) -> list[Eigenspace]:
    """Joint eigenspaces of pairwise-commuting Hermitian operators.

    Eigenvalues are rounded to 8 decimals to cluster degeneracies; the
    returned spaces are sorted by label tuple.  Raises ``ValueError`` naming
    the first pair of operators that fails to commute.
    """
    mats = [_as_square(op, f"ops[{i}]") for i, op in enumerate(ops)]
    if not mats:
        raise ValueError("need at least one operator")
    dim = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != dim:
            raise ValueError(f"ops[{i}] has mismatched dimension {m.shape[0]}")
        if not is_hermitian(m, tol):
            raise ValueError(f"ops[{i}] is not Hermitian")
    norms = [frobenius(m) for m in mats]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            resid = frobenius(mats[i] @ mats[j] - mats[j] @ mats[i])
            if resid > tol.threshold(norms[i] * norms[j]):
                raise ValueError(
                    f"operators {i} and {j} do not commute "
                    f"(residual {resid:.3e})"
                )

    all_diag = all(
        frobenius(m - np.diag(np.diag(m))) <= tol.threshold(norms[i])
        for i, m in enumerate(mats)
    )
    if all_diag:
        labels = np.stack([_round_label(m.diagonal()) for m in mats], axis=1)
        groups: dict[tuple[float, ...], list[int]] = {}
        for idx in range(dim):
            groups.setdefault(tuple(labels[idx]), []).append(idx)
        spaces = []
        eye = np.eye(dim, dtype=complex)
        for label in sorted(groups):
            idx = np.array(groups[label], dtype=np.intp)
            spaces.append(Eigenspace(label, eye[:, idx], idx))
        return spaces

    blocks: list[tuple[tuple[float, ...], np.ndarray]] = [
        ((), np.eye(dim, dtype=complex))
    ]
    for m in mats:
        refined = []
        for label, basis in blocks:
            sub = dag(basis) @ m @ basis
            sub = 0.5 * (sub + dag(sub))
            w, v = np.linalg.eigh(sub)
            wr = _round_label(w)
            for val in sorted(set(wr.tolist())):
                cols = v[:, wr == val]
                refined.append((label + (float(val),), basis @ cols))
        blocks = refined
    blocks.sort(key=lambda item: item[0])
    return [Eigenspace(label, basis) for label, basis in blocks]
