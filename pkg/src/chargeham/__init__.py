"""Lattice Hamiltonians that transport noncommuting charges locally while
conserving them globally.

The pipeline: pick a simple Lie algebra represented on a qudit
(:func:`pauli_basis`, :func:`gellmann_basis`), split it into mutually
orthogonal Cartan-Weyl bases whose charges span the whole algebra
(:func:`build_preferred_basis`), solve for the two-body couplings that
conserve every global charge (:func:`solve_couplings`), assemble the lattice
Hamiltonian (:func:`assemble_global`), then verify the structural claims
(:mod:`chargeham.verify`) and study the sector-resolved spectrum
(:mod:`chargeham.spectral`).
"""

from ._backend import active_backend
from .algebra import (AlgebraRegistryEntry, LieBasis, StructureConstants,
                      adjoint_matrix, check_antisymmetry, expand_in_basis,
                      gellmann_basis, killing_form, pauli_basis,
                      registry_table, structure_constants)
from .builder import (CouplingFamily, CouplingSolution, GlobalHamiltonian,
                      HamiltonianTerm, LatticeSpec, TwoBodyTerm,
                      assemble_global, k_body, simple_form, solve_couplings,
                      solved_two_body, su2_three_body_families,
                      two_body_unconstrained)
from .cartan import (CartanWeylBasis, LadderPair, PreferredBasis,
                     Su3Solution, build_preferred_basis, conjugate_basis,
                     seed_cartan_weyl, solve_orthogonal_rotation,
                     su2_closed_form, su3_closed_form,
                     su3_solution_families)
from .errors import CapExceededError, InfeasibleError
from .linalg import (DEFAULT_TOL, Eigenspace, Tolerance, commutator, dag,
                     eig_hermitian, embed_sites, frobenius, hs_inner,
                     kron_embed, nullspace, simultaneous_eigenspaces,
                     total_operator)
from .spectral import (GapStatistics, SectorSpectrum, gap_statistics,
                       pooled_gap_statistics, sector_spectra)
from .verify import (VerificationReport, check_global_conservation,
                     check_local_transport, check_preferred_basis,
                     check_ratio)

__version__ = "0.1.0"

__all__ = [
    "AlgebraRegistryEntry", "CapExceededError", "CartanWeylBasis",
    "CouplingFamily", "CouplingSolution", "DEFAULT_TOL", "Eigenspace",
    "GapStatistics", "GlobalHamiltonian", "HamiltonianTerm",
    "InfeasibleError", "LadderPair", "LatticeSpec", "LieBasis",
    "PreferredBasis", "SectorSpectrum", "StructureConstants",
    "Su3Solution", "Tolerance", "TwoBodyTerm", "VerificationReport",
    "active_backend", "adjoint_matrix", "assemble_global",
    "build_preferred_basis", "check_antisymmetry",
    "check_global_conservation", "check_local_transport",
    "check_preferred_basis", "check_ratio", "commutator", "conjugate_basis",
    "dag", "eig_hermitian", "embed_sites", "expand_in_basis", "frobenius",
    "gap_statistics", "gellmann_basis", "hs_inner", "k_body",
    "killing_form", "kron_embed", "nullspace", "pauli_basis",
    "pooled_gap_statistics", "registry_table", "sector_spectra",
    "seed_cartan_weyl", "simple_form", "simultaneous_eigenspaces",
    "solve_couplings", "solve_orthogonal_rotation", "solved_two_body",
    "structure_constants", "su2_closed_form", "su2_three_body_families",
    "su3_closed_form", "su3_solution_families", "total_operator",
    "two_body_unconstrained",
]
