"""Cartan-Weyl bases and mutually orthogonal charge frames.

A Cartan-Weyl basis of su(D) holds r commuting Hermitian charges plus
(c - r)/2 raising/lowering ladder pairs labeled by root vectors.  A preferred
basis stacks c/r such bases, conjugated so that all c charges are mutually
Killing-orthogonal.  Closed-form constructions cover su(2) (Euler angles
about z-y-z) and su(3) (a constrained eight-angle Euler product with 72
discrete solution tuples in four parity classes); a seeded numerical solver
covers the generic path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import least_squares

from .algebra import (LieBasis, adjoint_matrix, expand_in_basis,
                      gellmann_basis, killing_form, pauli_basis)
from .errors import InfeasibleError
from .linalg import (DEFAULT_TOL, Tolerance, commutator, dag, frobenius,
                     hs_inner, simultaneous_eigenspaces)

__all__ = [
    "LadderPair",
    "CartanWeylBasis",
    "PreferredBasis",
    "Su3Solution",
    "seed_cartan_weyl",
    "conjugate_basis",
    "solve_orthogonal_rotation",
    "build_preferred_basis",
    "su2_closed_form",
    "su3_closed_form",
    "su3_solution_families",
]

ROOT_TOL = 1e-8


@dataclass
class LadderPair:
    """Raising/lowering pair; ``lowering`` is the adjoint of ``raising``.

    ``root[m]`` is the eigenvalue of ``[q_m, raising] = root[m] * raising``
    where ``q_m`` are the Cartan elements the parent basis was seeded with
    (conjugation leaves roots unchanged).
    """

    raising: np.ndarray
    lowering: np.ndarray
    root: tuple[float, ...]

    def __post_init__(self):
        scale = max(1.0, frobenius(self.raising))
        if frobenius(self.lowering - dag(self.raising)) > 1e-10 * scale:
            raise ValueError("lowering operator is not the adjoint of raising")


@dataclass
class CartanWeylBasis:
    """r commuting charges plus (c-r)/2 ladder pairs.

    ``charges`` are unit Hilbert-Schmidt norm when r > 1 (for r = 1 the seed
    charge is kept at its conventional normalization).  ``cartan_elements``
    are the raw Cartan elements the ladder roots refer to.  ``provenance`` is
    the unitary conjugating the seed basis into this one.
    """

    charges: list[np.ndarray]
    cartan_elements: list[np.ndarray]
    ladders: list[LadderPair]
    provenance: np.ndarray

    def __post_init__(self):
        r = len(self.charges)
        if r < 1 or len(self.cartan_elements) != r:
            raise ValueError("charges and cartan_elements must align")
        for i, q in enumerate(self.charges):
            if frobenius(q - dag(q)) > 1e-10 * max(1.0, frobenius(q)):
                raise ValueError(f"charge {i} is not Hermitian")
            if r > 1 and abs(hs_inner(q, q).real - 1.0) > ROOT_TOL:
                raise ValueError(f"charge {i} is not unit-normalized")
            for j in range(i):
                resid = frobenius(commutator(self.charges[j], q))
                if resid > ROOT_TOL:
                    raise ValueError(f"charges {j} and {i} do not commute")
        for pair in self.ladders:
            if len(pair.root) != r:
                raise ValueError("root length must equal the rank")
            scale = max(1.0, frobenius(pair.raising))
            for m, q in enumerate(self.cartan_elements):
                resid = frobenius(commutator(q, pair.raising)
                                  - pair.root[m] * pair.raising)
                if resid > ROOT_TOL * scale:
                    raise ValueError(
                        f"ladder with root {pair.root} fails the eigen "
                        f"relation for Cartan element {m} (residual "
                        f"{resid:.3e})"
                    )
        u = self.provenance
        d = u.shape[0]
        if frobenius(dag(u) @ u - np.eye(d)) > 1e-9 * d:
            raise ValueError("provenance matrix is not unitary")

    @property
    def rank(self) -> int:
        return len(self.charges)


@dataclass
class PreferredBasis:
    """c/r mutually orthogonal Cartan-Weyl bases of one algebra.

    The flattened charges are pairwise Killing-orthogonal and span the
    algebra.
    """

    basis: LieBasis
    cw_bases: list[CartanWeylBasis]

    def __post_init__(self):
        c, r = self.basis.dimension, self.basis.rank
        if len(self.cw_bases) != c // r:
            raise ValueError(
                f"expected {c // r} Cartan-Weyl bases, got {len(self.cw_bases)}"
            )
        charges = self.charges_flat
        if len(charges) != c:
            raise ValueError("total charge count must equal the dimension")
        kappa = np.array([[killing_form(a, b, self.basis).real
                           for b in charges] for a in charges])
        diag_scale = max(1.0, float(np.abs(np.diag(kappa)).max()))
        off = float(np.abs(kappa - np.diag(np.diag(kappa))).max())
        if off > 1e-8 * diag_scale:
            raise ValueError(
                f"charges are not Killing-orthogonal (max off-diagonal "
                f"{off:.3e})"
            )
        gram = np.array([[hs_inner(a, b) for b in charges] for a in charges])
        if np.linalg.matrix_rank(gram, tol=1e-8) != c:
            raise ValueError("charges do not span the algebra")

    @property
    def charges_flat(self) -> list[np.ndarray]:
        return [q for cw in self.cw_bases for q in cw.charges]

    @property
    def ladders_flat(self) -> list[LadderPair]:
        return [pair for cw in self.cw_bases for pair in cw.ladders]


def _ladder_norm_target(rank: int) -> float:
    # hs_inner(L, L) = 1 for rank 1, 1/2 otherwise
    return 1.0 if rank == 1 else np.sqrt(0.5)


def _fix_phase(m: np.ndarray) -> np.ndarray:
    """Rotate a matrix by a global phase so its first significant entry
    (row-major) is real positive."""
    flat = m.ravel()
    cutoff = ROOT_TOL * np.abs(flat).max()
    for entry in flat:
        if abs(entry) > cutoff:
            return m * (entry.conjugate() / abs(entry))
    return m


def _diagonal_generators(basis: LieBasis) -> list[np.ndarray]:
    out = []
    for g in basis.generators:
        if frobenius(g - np.diag(np.diag(g))) <= 1e-12:
            out.append(g)
    return out


def seed_cartan_weyl(basis: LieBasis, cartan: list[np.ndarray] | None = None,
                     tol: Tolerance = DEFAULT_TOL) -> CartanWeylBasis:
    """Root-space decomposition of the adjoint action of a Cartan set.

    ``cartan`` defaults to the diagonal generators of the basis.  Ladder
    operators are the simultaneous eigenvectors of the adjoint matrices with
    nonzero root vectors, normalized to Hilbert-Schmidt norm 1 (rank 1) or
    1/sqrt(2) (higher rank), phase-fixed, and paired raising/lowering with
    the raising root's last nonzero component positive.  Pairs are ordered by
    descending lexicographic raising root.
    """
    r = basis.rank
    if cartan is None:
        cartan = _diagonal_generators(basis)
    if len(cartan) != r:
        raise ValueError(f"need {r} Cartan elements, got {len(cartan)}")
    cartan = [np.asarray(q, dtype=complex) for q in cartan]
    for i, q in enumerate(cartan):
        if frobenius(q - dag(q)) > tol.threshold(frobenius(q)):
            raise ValueError(f"Cartan element {i} is not Hermitian")
        for j in range(i):
            if frobenius(commutator(cartan[j], q)) > ROOT_TOL:
                raise ValueError(f"Cartan elements {j} and {i} do not commute")

    ads = [adjoint_matrix(q, basis) for q in cartan]
    for i, ad in enumerate(ads):
        if frobenius(ad - dag(ad)) > 1e-9 * max(1.0, frobenius(ad)):
            raise ValueError(
                "adjoint matrices are not Hermitian; the seed construction "
                "needs Hilbert-Schmidt-orthogonal generators of equal norm"
            )
    spaces = simultaneous_eigenspaces(ads, tol)

    zero_dim = 0
    positive: dict[tuple[float, ...], np.ndarray] = {}
    negative: dict[tuple[float, ...], np.ndarray] = {}
    for space in spaces:
        root = space.label
        if max(abs(v) for v in root) <= ROOT_TOL:
            zero_dim += space.dimension
            continue
        if space.dimension != 1:
            raise ValueError(f"degenerate root space at root {root}")
        last = next(v for v in reversed(root) if abs(v) > ROOT_TOL)
        target = positive if last > 0 else negative
        target[root] = space.basis[:, 0]
    if zero_dim != r:
        raise ValueError(
            f"zero-root space has dimension {zero_dim}, expected {r}; the "
            f"Cartan set is not maximal or not closed"
        )
    ladders = []
    for root in sorted(positive, reverse=True):
        neg = tuple(-v + 0.0 for v in root)
        if neg not in negative:
            raise ValueError(f"root {root} has no negated partner")
        coeff = positive[root]
        raising = np.tensordot(coeff, np.array(basis.generators), axes=1)
        raising = _fix_phase(raising)
        raising *= _ladder_norm_target(r) / np.sqrt(hs_inner(raising,
                                                             raising).real)
        ladders.append(LadderPair(raising, dag(raising), root))
    if 2 * len(ladders) + r != basis.dimension:
        raise ValueError("root pairing did not exhaust the algebra")

    if r > 1:
        charges = [q / np.sqrt(hs_inner(q, q).real) for q in cartan]
    else:
        charges = [q.copy() for q in cartan]
    d = basis.local_dim
    return CartanWeylBasis(charges, [q.copy() for q in cartan], ladders,
                           np.eye(d, dtype=complex))


def conjugate_basis(u: np.ndarray, cw: CartanWeylBasis,
                    tol: Tolerance = DEFAULT_TOL) -> CartanWeylBasis:
    """Conjugate every element by a unitary: x -> u^dag x u.

    Roots are unchanged; provenance composes on the right.  Conjugating by
    the exact identity returns a bit-for-bit equal copy.
    """
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if frobenius(dag(u) @ u - np.eye(d)) > tol.threshold(np.sqrt(d)):
        raise ValueError("conjugation matrix is not unitary")
    if np.array_equal(u, np.eye(d, dtype=complex)):
        return CartanWeylBasis(
            [q.copy() for q in cw.charges],
            [q.copy() for q in cw.cartan_elements],
            [LadderPair(p.raising.copy(), p.lowering.copy(), p.root)
             for p in cw.ladders],
            cw.provenance.copy(),
        )
    conj = lambda x: dag(u) @ x @ u
    ladders = []
    for p in cw.ladders:
        raising = conj(p.raising)
        ladders.append(LadderPair(raising, dag(raising), p.root))
    return CartanWeylBasis(
        [conj(q) for q in cw.charges],
        [conj(q) for q in cw.cartan_elements],
        ladders,
        cw.provenance @ u,
    )


def solve_orthogonal_rotation(basis: LieBasis,
                              existing_charges: list[np.ndarray],
                              charges: list[np.ndarray],
                              rng_seed=0,
                              max_restarts: int = 32) -> np.ndarray:
    """Unitary U = exp(i sum_a theta_a G_a) making conjugated charges
    Killing-orthogonal to all existing charges.

    Minimizes the vector of trace inner products Tr((U^dag q U) e) by least
    squares from deterministic random starts; accepts when the largest
    Killing inner product against the existing set falls below 1e-10 times
    the Killing scale.  Raises :class:`InfeasibleError` with the best
    residual after ``max_restarts`` failures.
    """
    gens = np.array(basis.generators)
    c = basis.dimension
    existing = [np.asarray(e, dtype=complex) for e in existing_charges]
    charges = [np.asarray(q, dtype=complex) for q in charges]
    kappa_scale = max(1.0, max(abs(killing_form(e, e, basis).real)
                               for e in existing))

    def unitary(theta: np.ndarray) -> np.ndarray:
        return expm(1j * np.tensordot(theta, gens, axes=1))

    def residuals(theta: np.ndarray) -> np.ndarray:
        u = unitary(theta)
        out = np.empty(len(charges) * len(existing))
        i = 0
        for q in charges:
            qn = dag(u) @ q @ u
            for e in existing:
                out[i] = hs_inner(qn, e).real
                i += 1
        return out

    rng = np.random.default_rng(rng_seed)
    best = np.inf
    for restart in range(max_restarts):
        theta0 = rng.normal(size=c)
        sol = least_squares(residuals, theta0, xtol=3e-16, ftol=3e-16,
                            gtol=3e-16)
        u = unitary(sol.x)
        worst = max(
            abs(killing_form(dag(u) @ q @ u, e, basis).real)
            for q in charges for e in existing
        )
        best = min(best, worst)
        if worst <= 1e-10 * kappa_scale:
            return u
    raise InfeasibleError(
        f"orthogonal rotation did not converge for {basis.name}: best "
        f"Killing residual {best:.3e} after {max_restarts} restarts",
        best_residual=best, restarts=max_restarts,
    )


def build_preferred_basis(basis: LieBasis,
                          cartan: list[np.ndarray] | None = None,
                          rng_seed: int = 0,
                          closed_form: bool | None = None,
                          tol: Tolerance = DEFAULT_TOL) -> PreferredBasis:
    """Assemble c/r mutually Killing-orthogonal Cartan-Weyl bases.

    ``closed_form`` defaults to the closed-form construction for local
    dimension 2 or 3 (with the canonical Cartan set) and the numerical path
    otherwise.  The numerical path conjugates the seed by solved orthogonal
    rotations, one round per extra basis, with per-round rng streams spawned
    from ``rng_seed``.
    """
    c, r = basis.dimension, basis.rank
    if c % r != 0:
        raise InfeasibleError(f"dimension {c} is not a multiple of rank {r}")
    if closed_form is None:
        closed_form = basis.local_dim in (2, 3) and cartan is None
    if closed_form:
        if cartan is not None:
            raise ValueError("the closed-form path uses the canonical "
                             "Cartan set; pass cartan=None")
        if basis.local_dim == 2:
            return su2_closed_form(basis=basis)
        if basis.local_dim == 3:
            return su3_closed_form(su3_solution_families()[0], basis=basis)
        raise ValueError("closed-form construction is available only for "
                         "local dimension 2 or 3")

    seed = seed_cartan_weyl(basis, cartan, tol)
    bases = [seed]
    existing = list(seed.charges)
    streams = np.random.SeedSequence(rng_seed).spawn(c // r - 1)
    for stream in streams:
        u = solve_orthogonal_rotation(basis, existing, seed.charges,
                                      rng_seed=stream)
        new = conjugate_basis(u, seed, tol)
        bases.append(new)
        existing.extend(new.charges)
    return PreferredBasis(basis, bases)


# ---------------------------------------------------------------------------
# su(2) closed forms
# ---------------------------------------------------------------------------

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _su2_euler(phi1: float, phi2: float, phi3: float) -> np.ndarray:
    return (expm(1j * _SZ * phi1 / 2) @ expm(1j * _SY * phi2 / 2)
            @ expm(1j * _SZ * phi3 / 2))


def su2_closed_form(phi1_i: float = 0.0, phi3_i: float = 0.0,
                    phi1_ii: float = 0.0, n_ii: int = 1,
                    basis: LieBasis | None = None) -> PreferredBasis:
    """Three mutually orthogonal su(2) Cartan-Weyl bases in closed form.

    The defaults give the pedagogical charge triple (sigma_z, sigma_x,
    sigma_y).  The second and third bases are z-y-z Euler conjugates of the
    seed with middle angle pi/2; their provenance unitaries are stored.
    """
    if basis is None:
        basis = pauli_basis()
    if basis.local_dim != 2:
        raise ValueError("su2_closed_form needs local dimension 2")
    cos3, sin3 = np.cos(phi3_i), np.sin(phi3_i)
    sgn = (-1.0) ** n_ii
    q1 = _SZ.copy()
    q2 = cos3 * _SX + sin3 * _SY
    q3 = sgn * (sin3 * _SX - cos3 * _SY)
    lp1 = 0.5 * (_SX + 1j * _SY)
    lp2 = (-np.exp(-1j * phi1_i) / 2) * (_SZ + 1j * (sin3 * _SX - cos3 * _SY))
    lp3 = (-np.exp(-1j * phi1_ii) / 2) * (
        _SZ - 1j * sgn * (cos3 * _SX + sin3 * _SY))
    phi3_ii = phi3_i + np.pi * (n_ii - 0.5)
    provenances = [
        np.eye(2, dtype=complex),
        _su2_euler(phi1_i, np.pi / 2, phi3_i),
        _su2_euler(phi1_ii, np.pi / 2, phi3_ii),
    ]
    bases = [
        CartanWeylBasis([q], [q], [LadderPair(lp, dag(lp), (2.0,))], u)
        for q, lp, u in zip((q1, q2, q3), (lp1, lp2, lp3), provenances)
    ]
    return PreferredBasis(basis, bases)


# ---------------------------------------------------------------------------
# su(3) closed forms
# ---------------------------------------------------------------------------

class Su3Solution(NamedTuple):
    """One solution tuple of the su(3) orthogonality constraints.

    Angles are canonical representatives in [0, 2*pi); ``parity_class`` in
    1..4 selects which of the three conjugated bases (none, the middle one,
    the last one, or the first one) carries an odd integer parameter.
    """

    x23: float
    x34: float
    y23: float
    y34: float
    parity_class: int


# per-class integer parameters (n_i, n_ii, n_iii) of the three conjugations
_SU3_PARITIES = {1: (2, 2, 2), 2: (2, 1, 2), 3: (2, 2, 1), 4: (1, 2, 2)}

_PHI4 = np.arccos(-1.0 / 3.0)


def su3_solution_families() -> list[Su3Solution]:
    """All 72 orthogonality solutions: four parity classes of 18 tuples.

    Each class lists five sign patterns, each with both overall signs, then
    the x <-> y swaps of the first eight; components are reduced mod 2*pi.
    """
    t = 2 * np.pi / 3
    s = np.pi / 3
    patterns = {
        1: [(0, t, -t, t), (0, 0, t, t), (0, t, t, 0), (t, 0, t, -t),
            (t, t, t, t)],
        2: [(np.pi, s, -s, s), (np.pi, np.pi, s, s), (np.pi, s, s, np.pi),
            (s, np.pi, s, -s), (s, s, s, s)],
        3: [(0, s, t, s), (0, np.pi, t, -s), (0, -s, t, np.pi),
            (t, np.pi, t, s), (t, -s, t, -s)],
        4: [(np.pi, t, s, t), (np.pi, 0, s, -t), (np.pi, -t, s, 0),
            (s, 0, s, t), (s, -t, s, -t)],
    }
    out = []
    for cls in (1, 2, 3, 4):
        ten = []
        for pat in patterns[cls]:
            for sign in (1, -1):
                ten.append(tuple(sign * v for v in pat))
        swapped = [(p[2], p[3], p[0], p[1]) for p in ten[:8]]
        for raw in ten + swapped:
            x23, x34, y23, y34 = (float(np.mod(v, 2 * np.pi)) for v in raw)
            out.append(Su3Solution(x23, x34, y23, y34, cls))
    return out


def _su3_gauge_unitary(a: float, b: float, n: int) -> np.ndarray:
    """Eight-factor Euler product whose conjugation of (lambda_3, lambda_8)
    realizes the closed-form charge pair with parameters (a, b, n)."""
    gm = gellmann_basis(3).generators
    l2, l3, l5, l8 = gm[1], gm[2], gm[4], gm[7]
    p7 = b - a
    p8 = (np.pi * n + np.pi / 2 - a - b) / np.sqrt(3)
    p5 = np.pi * (n - 0.5)
    factors = [(l3, 0.0), (l2, np.pi / 2), (l3, 0.0), (l5, _PHI4),
               (l3, p5), (l2, np.pi / 2), (l3, p7), (l8, p8)]
    u = np.eye(3, dtype=complex)
    for g, angle in factors:
        u = u @ expm(1j * g * angle / 2)
    return u


def su3_closed_form(solution: Su3Solution,
                    basis: LieBasis | None = None) -> PreferredBasis:
    """Four mutually orthogonal su(3) Cartan-Weyl bases from a solution tuple.

    The seed uses the Cartan pair (lambda_3 / 2, lambda_8 / sqrt(3)), giving
    ladder roots (1, 0), (1/2, 1), (-1/2, 1); the other three bases are
    Euler-product conjugates of the seed.
    """
    if basis is None:
        basis = gellmann_basis(3)
    if basis.local_dim != 3:
        raise ValueError("su3_closed_form needs local dimension 3")
    gm = basis.generators
    seed = seed_cartan_weyl(basis, [gm[2] / 2, gm[7] / np.sqrt(3)])
    n1, n2, n3 = _SU3_PARITIES[solution.parity_class]
    abn = [
        (0.0, 0.0, n1),
        (-solution.x23, -solution.y23, n2),
        (-(solution.x23 + solution.x34), -(solution.y23 + solution.y34), n3),
    ]
    bases = [seed]
    for a, b, n in abn:
        bases.append(conjugate_basis(_su3_gauge_unitary(a, b, n), seed))
    return PreferredBasis(basis, bases)
