"""Verification suites.

Every check returns :class:`VerificationReport` records rather than raising on
failure; a report passes iff ``residual <= threshold``.  For transport checks
(where a *large* commutator is the healthy outcome) the residual is the signed
shortfall below the transport floor, so the same convention applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .linalg import (DEFAULT_TOL, Tolerance, commutator, frobenius,
                     kron_embed, total_operator)

__all__ = [
    "VerificationReport",
    "check_global_conservation",
    "check_local_transport",
    "check_preferred_basis",
    "check_ratio",
]

TRANSPORT_FLOOR = 0.01


@dataclass
class VerificationReport:
    """Outcome of one verification check; passes iff residual <= threshold."""

    check: str
    passed: bool
    residual: float
    threshold: float
    context: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        expected = self.residual <= self.threshold
        if self.passed != expected:
            raise ValueError(
                f"inconsistent report {self.check}: passed={self.passed} but "
                f"residual={self.residual} vs threshold={self.threshold}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "pass": self.passed,
            "residual": self.residual,
            "threshold": self.threshold,
            "context": self.context,
        }


def _report(check: str, residual: float, threshold: float,
            **context) -> VerificationReport:
    return VerificationReport(check, residual <= threshold, float(residual),
                              float(threshold), context)


def check_global_conservation(ham, preferred,
                              tol: Tolerance = DEFAULT_TOL) -> list[VerificationReport]:
    """Relative commutator residual of H with every total preferred charge.

    Residual for charge alpha is ``|[H, Q_alpha^tot]|_F / max(1, |H|_F)``.
    """
    n = ham.lattice.n_sites
    d = preferred.basis.local_dim
    h = ham.matrix
    hnorm = frobenius(h)
    reports = []
    for alpha, q in enumerate(preferred.charges_flat):
        qtot = total_operator(q, n, d)
        residual = frobenius(commutator(h, qtot)) / max(1.0, hnorm)
        threshold = tol.threshold(frobenius(qtot))
        reports.append(_report("global-conservation", residual, threshold,
                               alpha=alpha))
    return reports


def check_local_transport(term, preferred,
                          floor: float = TRANSPORT_FLOOR) -> list[VerificationReport]:
    """Each preferred charge must fail to commute with the term at each site.

    The commutator norm of the term with a single-site charge must exceed
    ``floor * |term|_F``; the report's residual is the (signed) shortfall
    below that floor, so transporting terms pass with residual <= 0.
    """
    d = preferred.basis.local_dim
    k = term.k
    tnorm = frobenius(term.matrix)
    bar = floor * tnorm
    reports = []
    for alpha, q in enumerate(preferred.charges_flat):
        for pos in range(k):
            local = kron_embed(q, pos + 1, k, d)
            norm = frobenius(commutator(term.matrix, local))
            reports.append(_report(
                "local-transport", bar - norm, 0.0,
                alpha=alpha, site=int(term.sites[pos]),
                commutator_norm=norm, floor=bar,
            ))
    return reports


def check_preferred_basis(preferred,
                          tol: Tolerance = DEFAULT_TOL) -> list[VerificationReport]:
    """Killing orthogonality, charge-Gram rank, and ladder adjointness."""
    from .algebra import killing_form
    from .linalg import dag, hs_inner

    basis = preferred.basis
    charges = preferred.charges_flat
    c = basis.dimension
    reports = []

    kappa = np.array([[killing_form(a, b, basis).real for b in charges]
                      for a in charges])
    diag_scale = max(1.0, float(np.abs(np.diag(kappa)).max()))
    off = float(np.abs(kappa - np.diag(np.diag(kappa))).max())
    reports.append(_report("killing-orthogonality", off, 1e-8 * diag_scale,
                           algebra=basis.name))

    gram = np.array([[hs_inner(a, b) for b in charges] for a in charges])
    rank = int(np.linalg.matrix_rank(gram, tol=1e-8))
    reports.append(_report("charge-gram-rank", float(c - rank), 0.0,
                           rank=rank, dimension=c))

    worst = 0.0
    scale = 1.0
    for cw in preferred.cw_bases:
        for pair in cw.ladders:
            worst = max(worst, frobenius(pair.lowering - dag(pair.raising)))
            scale = max(scale, frobenius(pair.raising))
    reports.append(_report("ladder-adjointness", worst, tol.threshold(scale)))
    return reports


def check_ratio(entry) -> VerificationReport:
    """Dimension/rank divisibility for a registry entry."""
    remainder = entry.dimension % entry.rank
    return _report("dimension-rank-ratio", float(remainder), 0.0,
                   label=entry.label, dimension=entry.dimension,
                   rank=entry.rank)
