"""JSON serialization: exact round-trips and byte-stable documents."""

from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chargeham import (LatticeSpec, assemble_global, solve_couplings,
                       su3_closed_form, su3_solution_families)
from chargeham.serialize import (SCHEMA_VERSION, cmatrix_from_json,
                                 cmatrix_to_json, coupling_solution_from_json,
                                 coupling_solution_to_json, dump_document,
                                 hamiltonian_from_json, hamiltonian_to_json,
                                 lattice_from_json, lattice_to_json,
                                 load_document, preferred_basis_from_json,
                                 preferred_basis_to_json)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
complexes = st.builds(complex, finite, finite)


class TestCMatrix:
    @settings(max_examples=50)
    @given(arrays(np.complex128, (3, 2), elements=complexes))
    def test_round_trip_bitwise(self, m):
        doc = cmatrix_to_json(m)
        back = cmatrix_from_json(doc)
        assert back.shape == m.shape
        assert np.array_equal(back, m, equal_nan=True)

    def test_document_shape(self):
        doc = cmatrix_to_json(np.array([[1 + 2j]], dtype=complex))
        assert doc == {"rows": 1, "cols": 1, "data": [[1.0, 2.0]]}

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            cmatrix_from_json({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})

    def test_rejects_bad_pair(self):
        with pytest.raises(ValueError):
            cmatrix_from_json({"rows": 1, "cols": 1, "data": [[1.0]]})

    def test_survives_extreme_floats(self):
        m = np.array([[5e-324 + 1e308j, -0.0 + 0j]], dtype=complex)
        assert np.array_equal(cmatrix_from_json(cmatrix_to_json(m)), m)


class TestPreferredBasisDocument:
    def test_round_trip_bitwise(self, su3_preferred):
        doc = preferred_basis_to_json(su3_preferred)
        assert doc["schema_version"] == SCHEMA_VERSION
        back = preferred_basis_from_json(doc)
        assert len(back.cw_bases) == len(su3_preferred.cw_bases)
        for a, b in zip(su3_preferred.cw_bases, back.cw_bases):
            for qa, qb in zip(a.charges, b.charges):
                assert np.array_equal(qa, qb)
            for pa, pb_ in zip(a.ladders, b.ladders):
                assert np.array_equal(pa.raising, pb_.raising)
                assert np.array_equal(pa.lowering, pb_.lowering)
                assert pa.root == pb_.root
            assert np.array_equal(a.provenance, b.provenance)

    def test_json_serializable(self, su2_preferred):
        text = json.dumps(preferred_basis_to_json(su2_preferred))
        assert "schema_version" in text

    def test_validated_on_load(self, su2_preferred):
        doc = preferred_basis_to_json(su2_preferred)
        # Corrupt one charge entry: the reconstructed basis must fail its
        # orthogonality validation rather than load silently.
        doc["cw_bases"][1]["charges"][0]["data"][0] = [9.0, 0.0]
        with pytest.raises(ValueError):
            preferred_basis_from_json(doc)


class TestCouplingSolutionDocument:
    def test_round_trip_bitwise(self, su3_preferred):
        sol = solve_couplings(su3_preferred)
        back = coupling_solution_from_json(coupling_solution_to_json(sol))
        assert np.array_equal(back.constraint_matrix, sol.constraint_matrix)
        assert np.array_equal(back.nullspace_basis, sol.nullspace_basis)
        assert np.array_equal(back.chosen, sol.chosen)


class TestLatticeDocument:
    def test_round_trip(self):
        lat = LatticeSpec(5, ((1, 2, 1.0), (4, 5, -0.25)),
                          (((1, 2, 3), 0.5),), "ring")
        back = lattice_from_json(lattice_to_json(lat))
        assert back == lat

    def test_rejects_garbage(self):
        with pytest.raises((ValueError, KeyError, TypeError)):
            lattice_from_json({"n_sites": "many"})


class TestHamiltonianDocument:
    def test_round_trip_bitwise(self, su2_preferred):
        ham = assemble_global(LatticeSpec.chain(3), su2_preferred)
        back = hamiltonian_from_json(hamiltonian_to_json(ham))
        assert np.array_equal(back.matrix, ham.matrix)
        assert np.array_equal(back.couplings, ham.couplings)
        assert back.lattice == ham.lattice

    def test_embeds_preferred_basis(self, su2_preferred):
        ham = assemble_global(LatticeSpec.chain(2), su2_preferred)
        doc = hamiltonian_to_json(ham)
        assert doc["preferred_basis"]["schema_version"] == SCHEMA_VERSION
        back = hamiltonian_from_json(doc)
        for qa, qb in zip(back.preferred.charges_flat,
                          su2_preferred.charges_flat):
            assert np.array_equal(qa, qb)


class TestDocumentIO:
    def test_dump_is_byte_stable(self, tmp_path, su2_preferred):
        doc = preferred_basis_to_json(su2_preferred)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        dump_document(doc, p1)
        dump_document(doc, p2)
        assert p1.read_bytes() == p2.read_bytes()
        assert p1.read_bytes().endswith(b"\n")

    def test_dump_sorts_keys(self, tmp_path):
        path = tmp_path / "doc.json"
        dump_document({"b": 1, "a": 2}, path)
        assert path.read_text() == '{"a":2,"b":1}\n'

    def test_load_round_trip(self, tmp_path):
        path = tmp_path / "doc.json"
        dump_document({"x": [1, 2, 3]}, path)
        assert load_document(path) == {"x": [1, 2, 3]}

    def test_load_rejects_non_object(self, tmp_path):
        path = tmp_path / "doc.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_document(path)

    def test_serialized_solution_identical_across_runs(self, tmp_path):
        # The full build pipeline is deterministic, so two independently
        # constructed documents serialize to identical bytes.
        sols = su3_solution_families()
        a = su3_closed_form(sols[0])
        b = su3_closed_form(sols[0])
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        dump_document(preferred_basis_to_json(a), pa)
        dump_document(preferred_basis_to_json(b), pb)
        assert pa.read_bytes() == pb.read_bytes()
