"""Acceptance gate: nine end-to-end checks with pinned tolerances.

Each check prints a single PASS/FAIL line (run pytest with ``-s`` to stream
them). Expectations are written out explicitly here — reference operators,
registry rows, and statistics bands — so this module stands as the final
word on whether the package does what it promises.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from chargeham import (LatticeSpec, assemble_global, build_preferred_basis,
                       check_antisymmetry, check_local_transport,
                       commutator, frobenius, gellmann_basis, hs_inner,
                       killing_form, pauli_basis, pooled_gap_statistics,
                       registry_table, sector_spectra, simple_form,
                       solve_couplings, structure_constants,
                       su2_three_body_families, su3_closed_form,
                       su3_solution_families, total_operator,
                       two_body_unconstrained)
from chargeham.builder import replace_sites
from conftest import SX, SY, SZ

R_GOE_REFERENCE = 0.5307


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"CRITERION {number}: FAIL - {label}")
        raise
    print(f"CRITERION {number}: PASS - {label}")


def scalar_fit_residual(matrix: np.ndarray, target: np.ndarray) -> float:
    """Residual of the best least-squares fit matrix ~ scale * target."""
    scale = hs_inner(target, matrix).real / hs_inner(target, target).real
    return frobenius(matrix - scale * target)


def test_criterion_1_su2_collapse_to_heisenberg():
    with criterion(1, "su(2) two-body collapse onto the spin-dot form"):
        start = time.perf_counter()
        preferred = build_preferred_basis(pauli_basis())
        solution = solve_couplings(preferred)
        assert solution.dimension == 1
        ham = two_body_unconstrained(preferred, solution.chosen).matrix
        heisenberg = sum(np.kron(s, s) for s in (SX, SY, SZ))
        assert scalar_fit_residual(ham, heisenberg) <= 1e-10
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_2_su3_collapse_all_72_solutions():
    with criterion(2, "su(3) collapse for all 72 solution tuples"):
        start = time.perf_counter()
        lam = gellmann_basis(3).generators
        target = sum(np.kron(g, g) for g in lam)
        solutions = su3_solution_families()
        assert len(solutions) == 72
        for sol in solutions:
            preferred = su3_closed_form(sol)
            solved = solve_couplings(preferred)
            ham = two_body_unconstrained(preferred, solved.chosen).matrix
            residual = scalar_fit_residual(ham, target)
            assert residual <= 1e-8, f"{sol}: residual {residual:.2e}"
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"took {elapsed:.1f}s"


def test_criterion_3_three_body_families_and_chirality():
    with criterion(3, "three-body families; uniform remainder is chiral"):
        preferred = build_preferred_basis(pauli_basis())
        families = su2_three_body_families()

        chirality = np.zeros((8, 8), dtype=complex)
        paulis = (SX, SY, SZ)
        for a, b, c, sign in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                              (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)]:
            chirality += sign * np.kron(paulis[a],
                                        np.kron(paulis[b], paulis[c]))

        def build(family, scales, rho=0.5):
            factors = []
            for p, sites in zip(scales, [(1, 2), (2, 3), (3, 1)]):
                couplings = family.make(p, rho) if family.needs_ratio \
                    else family.make(p)
                factors.append(replace_sites(
                    two_body_unconstrained(preferred, couplings), sites))
            from chargeham import k_body
            return k_body(preferred, factors)

        term, _ = build(families[0], [1.0, 1.0, 1.0])
        scale = hs_inner(chirality, term.matrix).real \
            / hs_inner(chirality, chirality).real
        assert abs(scale) > 1e-12
        assert frobenius(term.matrix - scale * chirality) <= 1e-10

        for family in families:
            term, _ = build(family, [0.9, 1.3, -0.7], rho=0.35)
            for q in preferred.charges_flat:
                q_total = total_operator(q, 3, 2)
                assert frobenius(commutator(term.matrix, q_total)) <= 1e-10


def test_criterion_4_conservation_and_transport_on_chains():
    with criterion(4, "global conservation and local transport on chains"):
        start = time.perf_counter()
        cases = [(pauli_basis(), range(2, 11)),
                 (gellmann_basis(3), range(2, 7))]
        for basis, sizes in cases:
            preferred = build_preferred_basis(basis)
            solution = solve_couplings(preferred)
            term = two_body_unconstrained(preferred, solution.chosen)
            d = basis.local_dim
            for report in check_local_transport(term, preferred):
                shortfall = report.residual  # > 0 means transport too weak
                assert shortfall <= 0.0, report
                assert report.context["commutator_norm"] \
                    > 0.01 * frobenius(term.matrix)
            for n in sizes:
                ham = assemble_global(LatticeSpec.chain(n), preferred,
                                      solution.chosen)
                h_norm = frobenius(ham.matrix)
                worst = max(
                    frobenius(commutator(ham.matrix,
                                         total_operator(q, n, d)))
                    for q in preferred.charges_flat)
                assert worst / h_norm <= 1e-9, f"{basis.name} N={n}"
        elapsed = time.perf_counter() - start
        assert elapsed < 120.0, f"took {elapsed:.1f}s"


def test_criterion_5_killing_trace_proportionality():
    with criterion(5, "adjoint-trace form proportional to trace form"):
        rng = np.random.default_rng(2024)
        for d in (2, 3, 4):
            basis = gellmann_basis(d)
            constants = []
            while len(constants) < 50:
                x = np.tensordot(rng.normal(size=basis.dimension),
                                 basis.generators, axes=1)
                y = np.tensordot(rng.normal(size=basis.dimension),
                                 basis.generators, axes=1)
                overlap = hs_inner(x, y).real
                if abs(overlap) < 0.1 * frobenius(x) * frobenius(y):
                    continue  # avoid ill-conditioned ratios
                constants.append(killing_form(x, y, basis).real / overlap)
            constants = np.asarray(constants)
            spread = (constants.max() - constants.min()) \
                / abs(constants.mean())
            assert spread < 1e-8, f"su({d}): spread {spread:.2e}"
            assert constants.mean() == pytest.approx(2 * d, rel=1e-10)


def test_criterion_6_antisymmetry_and_simple_form(su2_preferred,
                                                  su3_preferred,
                                                  su4_preferred):
    with criterion(6, "structure-constant antisymmetry; dot-form conserves"):
        for d in (2, 3, 4):
            basis = gellmann_basis(d)
            unit = type(basis)(f"su({d})-unit", d,
                               [g / frobenius(g) for g in basis.generators],
                               basis.rank)
            report = check_antisymmetry(structure_constants(unit))
            assert report.passed, report
        for preferred in (su2_preferred, su3_preferred, su4_preferred):
            d = preferred.basis.local_dim
            dot_form = simple_form(preferred).matrix
            for q in preferred.charges_flat:
                q_total = total_operator(q, 2, d)
                assert frobenius(commutator(dot_form, q_total)) <= 1e-9


def test_criterion_7_registry_table():
    with criterion(7, "algebra registry rows and integer ratios"):
        entries = {e.label: e for e in registry_table()}
        assert len(entries) == 4 * 12 + 5

        # Classical families, spelled out: (dimension, rank) by n.
        for n in range(1, 13):
            assert (entries[f"so({2 * n})"].dimension,
                    entries[f"so({2 * n})"].rank) == (n * (2 * n - 1), n)
            assert (entries[f"sl({n + 1})"].dimension,
                    entries[f"sl({n + 1})"].rank) == ((n + 1) ** 2 - 1, n)
            assert (entries[f"so({2 * n + 1})"].dimension,
                    entries[f"so({2 * n + 1})"].rank) == (n * (2 * n + 1), n)
            assert (entries[f"sp({2 * n})"].dimension,
                    entries[f"sp({2 * n})"].rank) == (n * (2 * n + 1), n)

        exceptional = {"g2": (14, 2, 7), "f4": (52, 4, 13),
                       "e6": (78, 6, 13), "e7": (133, 7, 19),
                       "e8": (248, 8, 31)}
        for label, (dim, rank, ratio) in exceptional.items():
            entry = entries[label]
            assert (entry.dimension, entry.rank, entry.ratio) \
                == (dim, rank, ratio)

        for entry in entries.values():
            assert entry.dimension % entry.rank == 0

        from chargeham.cli import main
        assert main(["table"]) == 0


def _largest_sector_pooled_r(ham):
    spectra = sector_spectra(ham, resolve_spatial=True)
    by_charge: dict[float, list] = {}
    for s in spectra:
        by_charge.setdefault(s.sector[0], []).append(s)
    largest = max(by_charge.values(),
                  key=lambda blocks: sum(b.dimension for b in blocks))
    return pooled_gap_statistics(largest)


def test_criterion_8_integrability_diagnostic():
    with criterion(8, "level statistics flip integrable -> chaotic"):
        start = time.perf_counter()
        preferred = build_preferred_basis(pauli_basis())

        nn = assemble_global(LatticeSpec.chain(12), preferred)
        nn_stats = _largest_sector_pooled_r(nn)
        del nn
        assert nn_stats.verdict != "wigner-dyson-like", nn_stats

        nnn = assemble_global(LatticeSpec.chain(12, next_nearest=1.0),
                              preferred)
        nnn_stats = _largest_sector_pooled_r(nnn)
        del nnn
        assert nnn_stats.verdict == "wigner-dyson-like", nnn_stats
        assert nnn_stats.mean_r - nn_stats.mean_r >= 0.05
        assert abs(nnn_stats.mean_r - R_GOE_REFERENCE) <= 0.03

        elapsed = time.perf_counter() - start
        assert elapsed < 600.0, f"took {elapsed:.1f}s"


def test_criterion_9_numerical_matches_closed_form():
    with criterion(9, "numerical rotation search matches closed forms"):
        for make in (pauli_basis, lambda: gellmann_basis(3)):
            basis = make()
            closed = build_preferred_basis(basis, closed_form=True)
            closed_ham = two_body_unconstrained(
                closed, solve_couplings(closed).chosen).matrix
            for seed in range(5):
                numeric = build_preferred_basis(basis, rng_seed=seed,
                                                closed_form=False)
                numeric_ham = two_body_unconstrained(
                    numeric, solve_couplings(numeric).chosen).matrix
                residual = scalar_fit_residual(numeric_ham, closed_ham)
                assert residual <= 1e-7, \
                    f"{basis.name} seed {seed}: residual {residual:.2e}"
