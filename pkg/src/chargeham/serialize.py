"""JSON codecs for matrices, bases, Hamiltonians, and reports.

Complex matrices use the CMatrix encoding: ``{"rows": m, "cols": n, "data":
[[re, im], ...]}`` with row-major data.  Floats are emitted through Python's
shortest-repr serializer, so every value round-trips bit-for-bit.  All
top-level documents carry ``schema_version`` "1".
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import LieBasis
from .builder import CouplingSolution, GlobalHamiltonian, LatticeSpec
from .cartan import CartanWeylBasis, LadderPair, PreferredBasis

__all__ = [
    "SCHEMA_VERSION",
    "cmatrix_to_json",
    "cmatrix_from_json",
    "lie_basis_to_json",
    "lie_basis_from_json",
    "preferred_basis_to_json",
    "preferred_basis_from_json",
    "coupling_solution_to_json",
    "coupling_solution_from_json",
    "lattice_to_json",
    "lattice_from_json",
    "hamiltonian_to_json",
    "hamiltonian_from_json",
    "dump_document",
    "load_document",
]

SCHEMA_VERSION = "1"


def cmatrix_to_json(m: np.ndarray) -> dict[str, Any]:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [[float(v.real), float(v.imag)] for v in m.ravel()],
    }


def cmatrix_from_json(doc: dict[str, Any]) -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed CMatrix document: {exc}") from None
    if len(data) != rows * cols:
        raise ValueError(
            f"CMatrix data length {len(data)} does not match "
            f"{rows} x {cols}"
        )
    out = np.empty(rows * cols, dtype=complex)
    for i, entry in enumerate(data):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ValueError(f"CMatrix entry {i} is not a [re, im] pair")
        out[i] = complex(float(entry[0]), float(entry[1]))
    return out.reshape(rows, cols)


def lie_basis_to_json(basis: LieBasis) -> dict[str, Any]:
    return {
        "name": basis.name,
        "local_dim": basis.local_dim,
        "generators": [cmatrix_to_json(g) for g in basis.generators],
    }


def lie_basis_from_json(doc: dict[str, Any]) -> LieBasis:
    gens = [cmatrix_from_json(g) for g in doc["generators"]]
    return LieBasis(str(doc["name"]), int(doc["local_dim"]), gens,
                    rank=int(doc["local_dim"]) - 1)


def _ladder_to_json(p: LadderPair) -> dict[str, Any]:
    return {
        "raising": cmatrix_to_json(p.raising),
        "lowering": cmatrix_to_json(p.lowering),
        "root": [float(v) for v in p.root],
    }


def _ladder_from_json(doc: dict[str, Any]) -> LadderPair:
    return LadderPair(
        cmatrix_from_json(doc["raising"]),
        cmatrix_from_json(doc["lowering"]),
        tuple(float(v) for v in doc["root"]),
    )


def _cw_to_json(cw: CartanWeylBasis) -> dict[str, Any]:
    return {
        "charges": [cmatrix_to_json(q) for q in cw.charges],
        "cartan_elements": [cmatrix_to_json(q) for q in cw.cartan_elements],
        "ladders": [_ladder_to_json(p) for p in cw.ladders],
        "provenance": cmatrix_to_json(cw.provenance),
    }


def _cw_from_json(doc: dict[str, Any]) -> CartanWeylBasis:
    return CartanWeylBasis(
        [cmatrix_from_json(q) for q in doc["charges"]],
        [cmatrix_from_json(q) for q in doc["cartan_elements"]],
        [_ladder_from_json(p) for p in doc["ladders"]],
        cmatrix_from_json(doc["provenance"]),
    )


def preferred_basis_to_json(pb: PreferredBasis) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "algebra": lie_basis_to_json(pb.basis),
        "cw_bases": [_cw_to_json(cw) for cw in pb.cw_bases],
    }


def preferred_basis_from_json(doc: dict[str, Any]) -> PreferredBasis:
    basis = lie_basis_from_json(doc["algebra"])
    return PreferredBasis(basis, [_cw_from_json(cw)
                                  for cw in doc["cw_bases"]])


def coupling_solution_to_json(sol: CouplingSolution) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "constraint_matrix": cmatrix_to_json(sol.constraint_matrix),
        "nullspace_basis": cmatrix_to_json(sol.nullspace_basis),
        "chosen": [float(v) for v in sol.chosen],
    }


def coupling_solution_from_json(doc: dict[str, Any]) -> CouplingSolution:
    ns = cmatrix_from_json(doc["nullspace_basis"])
    return CouplingSolution(
        cmatrix_from_json(doc["constraint_matrix"]).real,
        ns,
        np.array([float(v) for v in doc["chosen"]]),
    )


def lattice_to_json(lattice: LatticeSpec) -> dict[str, Any]:
    return {
        "n_sites": lattice.n_sites,
        "edges": [[j, jp, w] for j, jp, w in lattice.edges],
        "k_body_groups": [[list(sites), w]
                          for sites, w in lattice.k_body_groups],
        "geometry": lattice.geometry,
    }


def lattice_from_json(doc: dict[str, Any]) -> LatticeSpec:
    return LatticeSpec(
        n_sites=int(doc["n_sites"]),
        edges=[(int(e[0]), int(e[1]), float(e[2])) for e in doc["edges"]],
        k_body_groups=[(tuple(int(s) for s in g[0]), float(g[1]))
                       for g in doc.get("k_body_groups", [])],
        geometry=str(doc.get("geometry", "")),
    )


def hamiltonian_to_json(gh: GlobalHamiltonian) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "lattice": lattice_to_json(gh.lattice),
        "matrix": cmatrix_to_json(gh.matrix),
        "algebra": lie_basis_to_json(gh.basis),
        "preferred_basis": preferred_basis_to_json(gh.preferred),
        "couplings": [float(v) for v in gh.couplings],
    }


def hamiltonian_from_json(doc: dict[str, Any]) -> GlobalHamiltonian:
    pb = preferred_basis_from_json(doc["preferred_basis"])
    return GlobalHamiltonian(
        lattice_from_json(doc["lattice"]),
        cmatrix_from_json(doc["matrix"]),
        pb,
        np.array([float(v) for v in doc["couplings"]]),
    )


def dump_document(doc: dict[str, Any], path) -> None:
    """Write a JSON document deterministically (sorted keys, UTF-8)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_document(path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("expected a JSON object at the top level")
    return doc
