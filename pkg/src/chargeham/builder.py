"""Hamiltonian construction from preferred bases.

Two-body exchange terms are linear combinations of ladder-pair hoppings
``L_+ (x) L_- + L_- (x) L_+``; couplings conserving every total charge come
from the SVD nullspace of the commutator constraints.  Cyclic products of
two-body factors yield k-body terms whose identity and conserving fewer-body
components are projected out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .cartan import PreferredBasis
from .errors import CapExceededError, InfeasibleError
from .linalg import (DEFAULT_TOL, Tolerance, commutator, dag, embed_sites,
                     frobenius, hs_inner, nullspace, total_operator)

__all__ = [
    "HamiltonianTerm",
    "TwoBodyTerm",
    "CouplingSolution",
    "LatticeSpec",
    "GlobalHamiltonian",
    "two_body_unconstrained",
    "solve_couplings",
    "solved_two_body",
    "k_body",
    "assemble_global",
    "simple_form",
    "su2_three_body_families",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 8192

# a factor's preset couplings are kept when this close to the solution space
PROJECTION_TOL = 1e-8


@dataclass
class HamiltonianTerm:
    """A Hermitian k-site interaction term.

    ``sites`` are 1-based lattice labels; ``matrix`` acts on the k-fold local
    space in the order of ``sites``; ``couplings`` records the coupling
    choices that produced it (layout documented by the producing function).
    """

    sites: tuple[int, ...]
    matrix: np.ndarray
    couplings: np.ndarray | None
    k: int

    def __post_init__(self):
        self.sites = tuple(int(s) for s in self.sites)
        if len(self.sites) != self.k or len(set(self.sites)) != self.k:
            raise ValueError(f"need {self.k} distinct sites, got {self.sites}")
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("term matrix must be square")
        if frobenius(m - dag(m)) > 1e-9 * max(1.0, frobenius(m)):
            raise ValueError("term matrix must be Hermitian")
        self.matrix = m


@dataclass
class TwoBodyTerm(HamiltonianTerm):
    """Two-site exchange term, linear in its coupling vector.

    ``pair_terms[b] = kron(L_+b, L_-b) + kron(L_-b, L_+b)`` over the flattened
    ladder list; ``matrix = sum_b couplings[b] * pair_terms[b]``.
    """

    pair_terms: np.ndarray = field(default=None)

    def at(self, couplings: np.ndarray) -> "TwoBodyTerm":
        """The same exchange structure evaluated at new couplings."""
        couplings = np.asarray(couplings, dtype=float)
        matrix = np.tensordot(couplings, self.pair_terms, axes=1)
        return TwoBodyTerm(self.sites, matrix, couplings, 2, self.pair_terms)


@dataclass
class CouplingSolution:
    """Conservation-constraint matrix, its nullspace, and the chosen vector.

    ``nullspace_basis`` rows are orthonormal real coupling directions;
    ``chosen`` is the canonical representative (uniform-sign direction scaled
    to the generator-frame normalization when one exists).
    """

    constraint_matrix: np.ndarray
    nullspace_basis: np.ndarray
    chosen: np.ndarray

    @property
    def dimension(self) -> int:
        return self.nullspace_basis.shape[0]


@dataclass
class LatticeSpec:
    """Sites, weighted edges, and optional k-site cycles of a lattice.

    Site labels are 1-based.  ``edges`` holds ``(site, site, weight)``
    triples; ``k_body_groups`` holds ``(sites tuple, weight)`` pairs.
    """

    n_sites: int
    edges: list[tuple[int, int, float]]
    k_body_groups: list[tuple[tuple[int, ...], float]] = field(
        default_factory=list)
    geometry: str = ""

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        norm_edges = []
        for edge in self.edges:
            j, jp, w = int(edge[0]), int(edge[1]), float(edge[2])
            if j == jp:
                raise ValueError(f"self-edge at site {j}")
            for s in (j, jp):
                if not 1 <= s <= self.n_sites:
                    raise ValueError(f"edge site {s} outside 1..{self.n_sites}")
            norm_edges.append((j, jp, w))
        self.edges = norm_edges
        norm_groups = []
        for sites, w in self.k_body_groups:
            sites = tuple(int(s) for s in sites)
            if len(sites) < 3 or len(set(sites)) != len(sites):
                raise ValueError(f"k-body group needs >= 3 distinct sites, "
                                 f"got {sites}")
            for s in sites:
                if not 1 <= s <= self.n_sites:
                    raise ValueError(f"group site {s} outside 1..{self.n_sites}")
            norm_groups.append((sites, float(w)))
        self.k_body_groups = norm_groups

    @classmethod
    def chain(cls, n_sites: int, coupling: float = 1.0,
              next_nearest: float = 0.0, periodic: bool = False) -> "LatticeSpec":
        edges = [(j, j + 1, coupling) for j in range(1, n_sites)]
        if periodic and n_sites > 2:
            edges.append((n_sites, 1, coupling))
        if next_nearest:
            edges += [(j, j + 2, next_nearest) for j in range(1, n_sites - 1)]
            if periodic and n_sites > 3:
                edges += [(n_sites - 1, 1, next_nearest),
                          (n_sites, 2, next_nearest)]
        return cls(n_sites, edges, geometry="ring" if periodic else "chain")


@dataclass
class GlobalHamiltonian:
    """Dense lattice Hamiltonian with its lattice, algebra, and basis."""

    lattice: LatticeSpec
    matrix: np.ndarray
    preferred: PreferredBasis
    couplings: np.ndarray

    @property
    def basis(self):
        return self.preferred.basis


def two_body_unconstrained(preferred: PreferredBasis,
                           couplings: np.ndarray | None = None) -> TwoBodyTerm:
    """Exchange term ``sum_b J_b (L_+b (x) L_-b + h.c.)`` on two sites.

    The coupling vector runs over the (c - r)/2 * c/r flattened ladder pairs;
    ``couplings=None`` returns the zero evaluation usable as a template via
    :meth:`TwoBodyTerm.at`.
    """
    ladders = preferred.ladders_flat
    pair_terms = np.array([
        np.kron(p.raising, p.lowering) + np.kron(p.lowering, p.raising)
        for p in ladders
    ])
    if couplings is None:
        couplings = np.zeros(len(ladders))
    couplings = np.asarray(couplings, dtype=float)
    if couplings.shape != (len(ladders),):
        raise ValueError(f"expected {len(ladders)} couplings, got "
                         f"{couplings.shape}")
    matrix = np.tensordot(couplings, pair_terms, axes=1)
    return TwoBodyTerm((1, 2), matrix, couplings, 2, pair_terms)


def _stack_commutator_columns(mats: list[np.ndarray],
                              charges: list[np.ndarray],
                              n_sites: int, local_dim: int) -> np.ndarray:
    """Real matrix whose column b stacks Re/Im of the commutators of mats[b]
    with every total charge."""
    totals = [total_operator(q, n_sites, local_dim) for q in charges]
    cols = []
    for m in mats:
        parts = []
        for qt in totals:
            cm = commutator(m, qt).ravel()
            parts.append(cm.real)
            parts.append(cm.imag)
        cols.append(np.concatenate(parts))
    return np.array(cols).T


def _canonical_direction(ns_rows: np.ndarray) -> tuple[np.ndarray, bool]:
    """First all-equal-sign nullspace vector, else the first vector.

    Returns (direction, uniform_sign_found).  Vectors arrive phase-fixed with
    the largest entry real positive, so an all-equal-sign vector has no
    significantly negative real part and negligible imaginary part.
    """
    for row in ns_rows:
        v = row.real
        scale = np.abs(v).max()
        if np.abs(row.imag).max() > 1e-10 * scale:
            continue
        if (v > -1e-10 * scale).all():
            return v, True
    return ns_rows[0].real, False


def solve_couplings(preferred: PreferredBasis,
                    tol: Tolerance = DEFAULT_TOL) -> CouplingSolution:
    """Solve the conservation constraints for two-body couplings.

    Builds the real constraint matrix J -> vec([H(J), Q_alpha^tot]) stacked
    over all preferred charges, extracts its SVD nullspace, and selects the
    canonical coupling vector: the all-equal-sign direction when one exists,
    scaled so H(J) best matches the generator frame sum_a G_a (x) G_a;
    otherwise the first nullspace vector with largest entry normalized to 1.
    """
    template = two_body_unconstrained(preferred)
    basis = preferred.basis
    m = _stack_commutator_columns(list(template.pair_terms),
                                  preferred.charges_flat, 2, basis.local_dim)
    ns = nullspace(m, tol)
    if ns.shape[0] == 0:
        raise InfeasibleError(
            f"no conserving two-body coupling exists for {basis.name} at "
            f"this tolerance"
        )
    direction, uniform = _canonical_direction(ns)
    if uniform:
        h_dir = np.tensordot(direction, template.pair_terms, axes=1)
        target = sum(np.kron(g, g) for g in basis.generators)
        denom = hs_inner(h_dir, h_dir).real
        scale = hs_inner(h_dir, target).real / denom if denom > 1e-12 else 0.0
        if abs(scale) < 1e-12:
            chosen = direction / np.abs(direction).max()
        else:
            chosen = scale * direction
    else:
        chosen = direction / np.abs(direction).max()
    return CouplingSolution(m, ns, chosen)


def solved_two_body(preferred: PreferredBasis,
                    tol: Tolerance = DEFAULT_TOL) -> TwoBodyTerm:
    """Two-body term evaluated at the canonical conserving couplings."""
    return two_body_unconstrained(preferred, solve_couplings(preferred,
                                                             tol).chosen)


def _cycle_pairs(sites: tuple[int, ...]) -> list[tuple[int, int]]:
    k = len(sites)
    return [(sites[i], sites[(i + 1) % k]) for i in range(k)]


def _subtraction_basis(preferred: PreferredBasis, sites: tuple[int, ...],
                       tol: Tolerance) -> list[np.ndarray]:
    """Identity, embedded solved two-body terms on every site pair, and (for
    k > 3) the solely-(k-1)-body remainders on every cyclic sub-cycle."""
    d = preferred.basis.local_dim
    k = len(sites)
    dim = d ** k
    out = [np.eye(dim, dtype=complex)]
    solved = solved_two_body(preferred, tol)
    positions = {s: i + 1 for i, s in enumerate(sorted(sites))}
    for i in range(k):
        for j in range(i + 1, k):
            a, b = sorted(sites)[i], sorted(sites)[j]
            out.append(embed_sites(solved.matrix,
                                   (positions[a], positions[b]), k, d))
    if k > 3:
        for drop in range(k):
            sub_sites = tuple(s for idx, s in enumerate(sites) if idx != drop)
            factors = [replace_sites(solved, pair)
                       for pair in _cycle_pairs(sub_sites)]
            sub_term, _ = k_body(preferred, factors, tol)
            local = tuple(positions[s] for s in sorted(sub_sites))
            out.append(embed_sites(sub_term.matrix, local, k, d))
    return out


def replace_sites(term: TwoBodyTerm, sites: tuple[int, int]) -> TwoBodyTerm:
    """The same two-body term relabeled onto other lattice sites."""
    return TwoBodyTerm(sites, term.matrix, term.couplings, 2, term.pair_terms)


def k_body(preferred: PreferredBasis, factors: list[TwoBodyTerm],
           tol: Tolerance = DEFAULT_TOL) -> tuple[HamiltonianTerm,
                                                  CouplingSolution]:
    """Solely-k-body term from a cyclic product of two-body factors.

    The factors' sites must form a k-cycle.  Conservation constraints are
    linearized over the last factor's couplings; if that factor carries a
    coupling vector inside the solution space it is kept, otherwise the
    canonical nullspace vector is chosen.  Identity and conserving fewer-body
    components are projected out (Hilbert-Schmidt least squares) and an
    anti-Hermitian remainder absorbs a factor of i.

    Returns the term (sites sorted ascending, couplings stacked per factor)
    and the last-factor coupling solution.
    """
    k = len(factors)
    if k < 3:
        raise ValueError("k-body products need at least 3 factors")
    for i, f in enumerate(factors[:-1]):
        if f.couplings is None or not np.abs(f.couplings).any():
            raise ValueError(f"factor {i} needs nonzero couplings")
    cycle = tuple(f.sites[0] for f in factors)
    if len(set(cycle)) != k:
        raise ValueError(f"factor sites do not visit {k} distinct sites")
    for f, pair in zip(factors, _cycle_pairs(cycle)):
        if f.sites != pair:
            raise ValueError(
                f"factor on {f.sites} breaks the cycle {cycle}"
            )
    d = preferred.basis.local_dim
    sites_sorted = tuple(sorted(cycle))
    positions = {s: i + 1 for i, s in enumerate(sites_sorted)}

    def embed_factor(matrix: np.ndarray, pair: tuple[int, int]) -> np.ndarray:
        return embed_sites(matrix, (positions[pair[0]], positions[pair[1]]),
                           k, d)

    partial = np.eye(d ** k, dtype=complex)
    for f in factors[:-1]:
        partial = partial @ embed_factor(f.matrix, f.sites)

    last = factors[-1]
    candidates = [partial @ embed_factor(t, last.sites)
                  for t in last.pair_terms]
    m = _stack_commutator_columns(candidates, preferred.charges_flat, k, d)
    ns = nullspace(m, tol)
    if ns.shape[0] == 0:
        raise InfeasibleError(
            "the cyclic product admits no conserving choice of last-factor "
            "couplings"
        )
    chosen = None
    if last.couplings is not None and np.abs(last.couplings).max() > 0:
        j = np.asarray(last.couplings, dtype=float)
        nsr = ns.real
        recon = nsr.T @ (nsr @ j)
        if np.linalg.norm(j - recon) <= PROJECTION_TOL * np.linalg.norm(j):
            chosen = j
    if chosen is None:
        chosen, _ = _canonical_direction(ns)
        chosen = chosen / np.abs(chosen).max()
    product = partial @ embed_factor(
        np.tensordot(chosen, last.pair_terms, axes=1), last.sites)

    sub_basis = _subtraction_basis(preferred, sites_sorted, tol)
    gram = np.array([[hs_inner(a, b) for b in sub_basis] for a in sub_basis])
    rhs = np.array([hs_inner(b, product) for b in sub_basis])
    coeff = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    remainder = product - sum(co * b for co, b in zip(coeff, sub_basis))

    scale = max(1.0, frobenius(remainder))
    anti = frobenius(remainder + dag(remainder))
    herm = frobenius(remainder - dag(remainder))
    if anti <= 1e-8 * scale:
        matrix = -1j * remainder
    elif herm <= 1e-8 * scale:
        matrix = remainder
    else:
        raise InfeasibleError(
            f"k-body remainder is neither Hermitian nor anti-Hermitian "
            f"(residuals {herm:.3e}, {anti:.3e})"
        )
    matrix = 0.5 * (matrix + dag(matrix))
    couplings = np.vstack([np.asarray(f.couplings, dtype=float)
                           for f in factors[:-1]] + [chosen])
    term = HamiltonianTerm(sites_sorted, matrix, couplings, k)
    return term, CouplingSolution(m, ns, np.asarray(chosen, dtype=float))


def assemble_global(lattice: LatticeSpec, preferred: PreferredBasis,
                    couplings: np.ndarray | None = None,
                    cap: int = DEFAULT_CAP,
                    tol: Tolerance = DEFAULT_TOL) -> GlobalHamiltonian:
    """Sum the two-body term over all weighted edges (and solely-k-body terms
    over the k-site groups), then verify conservation of every total charge.

    Raises :class:`CapExceededError` when the Hilbert-space dimension passes
    ``cap`` and ``RuntimeError`` if any conservation check fails.
    """
    basis = preferred.basis
    d = basis.local_dim
    n = lattice.n_sites
    dim = d ** n
    if dim > cap:
        raise CapExceededError(
            f"Hilbert space dimension {dim} exceeds the cap {cap}"
        )
    if couplings is None:
        couplings = solve_couplings(preferred, tol).chosen
    term = two_body_unconstrained(preferred, couplings)
    h = np.zeros((dim, dim), dtype=complex)
    for j, jp, w in lattice.edges:
        h += w * embed_sites(term.matrix, (j, jp), n, d)
    if lattice.k_body_groups:
        solved = solved_two_body(preferred, tol)
        for sites, w in lattice.k_body_groups:
            factors = [replace_sites(solved, pair)
                       for pair in _cycle_pairs(sites)]
            group_term, _ = k_body(preferred, factors, tol)
            h += w * embed_sites(group_term.matrix, group_term.sites, n, d)
    hnorm = frobenius(h)
    for alpha, q in enumerate(preferred.charges_flat):
        qtot = total_operator(q, n, d)
        resid = frobenius(commutator(h, qtot)) / max(1.0, hnorm)
        if resid > tol.threshold(frobenius(qtot)):
            raise RuntimeError(
                f"assembled Hamiltonian fails conservation for charge "
                f"{alpha} (residual {resid:.3e})"
            )
    return GlobalHamiltonian(lattice, h, preferred,
                             np.asarray(couplings, dtype=float))


def simple_form(preferred: PreferredBasis) -> HamiltonianTerm:
    """The charge-frame two-site term sum_alpha Q_alpha (x) Q_alpha.

    Proportional (not equal) to the solved ladder-sum Hamiltonian: the
    preferred charges are unit-normalized when the rank exceeds one, while
    the canonical couplings are scaled to the generator frame.
    """
    matrix = sum(np.kron(q, q) for q in preferred.charges_flat)
    return HamiltonianTerm((1, 2), matrix, None, 2)


class CouplingFamily(NamedTuple):
    """A one- or two-parameter family of conserving three-body couplings."""

    label: str
    needs_ratio: bool
    make: Callable[..., np.ndarray]


def su2_three_body_families() -> list[CouplingFamily]:
    """The four su(2) three-body coupling families per two-body factor.

    Each family maps a scale p (and family 4 a shared ratio rho) to the
    coupling triple of one factor; conservation of the cyclic product needs
    every factor drawn from the same family, with rho shared across factors.
    """
    return [
        CouplingFamily("uniform", False,
                       lambda p: np.array([p, p, p], dtype=float)),
        CouplingFamily("last-negated", False,
                        lambda p: np.array([p, p, -p], dtype=float)),
        CouplingFamily("last-double-negated", False,
                       lambda p: np.array([p, p, -2 * p], dtype=float)),
        CouplingFamily("shared-ratio", True,
                       lambda p, rho: np.array([p, p * rho, -p * (1 + rho)],
                                               dtype=float)),
    ]
