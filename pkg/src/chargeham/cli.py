"""Command-line front end.

Commands: ``build`` (config -> preferred-basis/coupling/Hamiltonian JSON),
``verify`` (report stream over a Hamiltonian/basis pair), ``spectrum``
(sector spectra and r-ratio statistics), ``table`` (algebra registry), and
``preferred-basis`` (standalone basis construction).

Exit codes: 0 success / all checks pass, 1 verification failure, 2 input
error, 3 solver infeasibility, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .algebra import gellmann_basis, registry_table
from .builder import (DEFAULT_CAP, LatticeSpec, assemble_global,
                      solve_couplings, two_body_unconstrained)
from .cartan import build_preferred_basis
from .errors import CapExceededError, InfeasibleError
from .linalg import Tolerance
from .spectral import gap_statistics, pooled_gap_statistics, sector_spectra
from .verify import (check_global_conservation, check_local_transport,
                     check_preferred_basis, check_ratio)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_CAP = 4


class ConfigError(ValueError):
    """A build configuration fails schema validation."""


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _parse_algebra(doc) -> "gellmann_basis":
    if not isinstance(doc, dict):
        raise ConfigError("algebra: expected an object")
    family = doc.get("family")
    if family != "su":
        raise ConfigError(f"algebra.family: only 'su' is constructible, "
                          f"got {family!r}")
    dim = doc.get("local_dim", doc.get("D"))
    if not isinstance(dim, int) or dim < 2:
        raise ConfigError("algebra.local_dim: need an integer >= 2")
    return gellmann_basis(dim)


def _parse_lattice(doc) -> LatticeSpec:
    if not isinstance(doc, dict):
        raise ConfigError("lattice: expected an object")
    try:
        return serialize.lattice_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"lattice: {exc}") from None


def _parse_config(doc):
    basis = _parse_algebra(doc.get("algebra"))
    lattice = _parse_lattice(doc.get("lattice"))
    closed_form = doc.get("closed_form")
    if closed_form is not None and not isinstance(closed_form, bool):
        raise ConfigError("closed_form: expected a boolean")
    rng_seed = doc.get("rng_seed", 0)
    if not isinstance(rng_seed, int):
        raise ConfigError("rng_seed: expected an integer")
    tol_doc = doc.get("tolerance", {})
    if not isinstance(tol_doc, dict) or \
            set(tol_doc) - {"abs", "rel"}:
        raise ConfigError("tolerance: expected {'abs': float, 'rel': float}")
    tol = Tolerance(abs=float(tol_doc.get("abs", 1e-10)),
                    rel=float(tol_doc.get("rel", 1e-10)))
    cap = doc.get("cap", DEFAULT_CAP)
    if not isinstance(cap, int) or cap < 1:
        raise ConfigError("cap: expected a positive integer")
    outputs = doc.get("outputs", {})
    if not isinstance(outputs, dict):
        raise ConfigError("outputs: expected an object of filenames")
    names = {
        "preferred_basis": outputs.get("preferred_basis",
                                       "preferred_basis.json"),
        "coupling_solution": outputs.get("coupling_solution",
                                         "coupling_solution.json"),
        "hamiltonian": outputs.get("hamiltonian", "hamiltonian.json"),
    }
    return basis, lattice, closed_form, rng_seed, tol, cap, names


def cmd_build(args) -> int:
    try:
        doc = serialize.load_document(args.config)
    except (OSError, ValueError) as exc:
        return _fail(f"config: {exc}", EXIT_INPUT)
    try:
        basis, lattice, closed_form, rng_seed, tol, cap, names = \
            _parse_config(doc)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_INPUT)
    try:
        preferred = build_preferred_basis(basis, rng_seed=rng_seed,
                                          closed_form=closed_form, tol=tol)
        solution = solve_couplings(preferred, tol)
        ham = assemble_global(lattice, preferred, solution.chosen, cap=cap,
                              tol=tol)
    except InfeasibleError as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except CapExceededError as exc:
        return _fail(str(exc), EXIT_CAP)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    serialize.dump_document(serialize.preferred_basis_to_json(preferred),
                            out_dir / names["preferred_basis"])
    serialize.dump_document(serialize.coupling_solution_to_json(solution),
                            out_dir / names["coupling_solution"])
    serialize.dump_document(serialize.hamiltonian_to_json(ham),
                            out_dir / names["hamiltonian"])
    c, r = basis.dimension, basis.rank
    chosen = solution.chosen
    if np.allclose(chosen, chosen[0], rtol=1e-12, atol=1e-12):
        coupling_note = f"uniform J = {chosen[0]:.10g}"
    else:
        coupling_note = "J = " + np.array2string(chosen, precision=6)
    print(f"{basis.name}: c={c} r={r} c/r={c // r} | N={lattice.n_sites} | "
          f"nullspace dim {solution.dimension} | {coupling_note}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        ham = serialize.hamiltonian_from_json(
            serialize.load_document(args.ham))
        preferred = serialize.preferred_basis_from_json(
            serialize.load_document(args.basis))
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"input: {exc}", EXIT_INPUT)
    reports = []
    reports += check_preferred_basis(preferred)
    reports += check_global_conservation(ham, preferred)
    term = two_body_unconstrained(preferred, ham.couplings)
    reports += check_local_transport(term, preferred)
    ok = True
    for report in reports:
        print(json.dumps(report.to_dict(), sort_keys=True))
        ok = ok and report.passed
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _parse_sector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"--sector: expected comma-separated floats, "
                          f"got {text!r}") from None


def cmd_spectrum(args) -> int:
    try:
        ham = serialize.hamiltonian_from_json(
            serialize.load_document(args.ham))
        wanted = _parse_sector(args.sector) if args.sector else None
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"input: {exc}", EXIT_INPUT)
    dim = ham.basis.local_dim ** ham.lattice.n_sites
    if dim > DEFAULT_CAP:
        return _fail(f"dimension {dim} exceeds the cap {DEFAULT_CAP}",
                     EXIT_CAP)
    spectra = sector_spectra(ham, resolve_spatial=args.resolve_spatial)
    if wanted is not None:
        spectra = [s for s in spectra if s.sector[:len(wanted)] == wanted]
        if not spectra:
            return _fail(f"no sector labeled {wanted}", EXIT_INPUT)
    doc = {
        "schema_version": serialize.SCHEMA_VERSION,
        "spectra": [s.to_dict() for s in spectra],
    }
    if args.stats == "r":
        doc["statistics"] = pooled_gap_statistics(spectra).to_dict()
        doc["per_sector_statistics"] = [gap_statistics(s).to_dict()
                                        for s in spectra]
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_table(_args) -> int:
    entries = registry_table()
    print(f"{'algebra':<10} {'dimension':>9} {'rank':>4} {'ratio':>5}  note")
    ok = True
    for entry in entries:
        report = check_ratio(entry)
        ok = ok and report.passed
        print(f"{entry.label:<10} {entry.dimension:>9} {entry.rank:>4} "
              f"{entry.ratio:>5}  {entry.note}")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_preferred_basis(args) -> int:
    match = re.fullmatch(r"su\((\d+)\)", args.algebra.strip())
    if not match or int(match.group(1)) < 2:
        return _fail(f"--algebra: expected su(D) with D >= 2, got "
                     f"{args.algebra!r}", EXIT_INPUT)
    basis = gellmann_basis(int(match.group(1)))
    closed_form = True if args.closed_form else None
    try:
        preferred = build_preferred_basis(basis, rng_seed=args.rng_seed,
                                          closed_form=closed_form)
    except InfeasibleError as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    serialize.dump_document(serialize.preferred_basis_to_json(preferred),
                            args.out)
    print(f"{basis.name}: wrote {len(preferred.charges_flat)} charges in "
          f"{len(preferred.cw_bases)} Cartan-Weyl bases to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chargeham",
        description="Build and analyze lattice Hamiltonians that transport "
                    "noncommuting charges locally while conserving them "
                    "globally.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build artifacts from a config")
    p_build.add_argument("--config", required=True)
    p_build.add_argument("--out-dir", required=True)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--ham", required=True)
    p_verify.add_argument("--basis", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_spectrum = sub.add_parser("spectrum", help="sector spectra and statistics")
    p_spectrum.add_argument("--ham", required=True)
    p_spectrum.add_argument("--stats", choices=["r"])
    p_spectrum.add_argument("--sector")
    p_spectrum.add_argument("--resolve-spatial", action="store_true")
    p_spectrum.set_defaults(func=cmd_spectrum)

    p_table = sub.add_parser("table", help="print the algebra registry")
    p_table.set_defaults(func=cmd_table)

    p_pb = sub.add_parser("preferred-basis",
                          help="construct and export a preferred basis")
    p_pb.add_argument("--algebra", required=True)
    p_pb.add_argument("--closed-form", action="store_true")
    p_pb.add_argument("--rng-seed", type=int, default=0)
    p_pb.add_argument("--out", required=True)
    p_pb.set_defaults(func=cmd_preferred_basis)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except CapExceededError as exc:
        return _fail(str(exc), EXIT_CAP)


if __name__ == "__main__":
    sys.exit(main())
