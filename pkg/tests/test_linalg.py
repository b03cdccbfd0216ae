import json

import numpy as np
import pytest

from quditc.linalg import (
    as_matrix,
    equal_up_to_global_phase,
    is_diagonal,
    is_unitary,
    load_unitary,
    max_norm,
    multiply,
    save_unitary,
)

from conftest import haar_unitary

W3 = np.exp(2j * np.pi / 3)
H3 = np.array([[1, 1, 1], [1, W3, W3.conjugate()], [1, W3.conjugate(), W3]]) / np.sqrt(3)


def naive_product(a, b):
    """Brute-force triple-loop product, the independent oracle."""
    d = a.shape[0]
    out = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                out[i, j] += a[i, k] * b[k, j]
    return out


class TestMultiply:
    def test_identity(self):
        assert np.allclose(multiply(np.eye(3, dtype=complex), H3), H3)

    def test_hadamard_on_ground_state(self):
        # applying the three-level Hadamard to (1,0,0) gives the uniform state
        out = H3 @ np.array([1, 0, 0])
        assert np.allclose(out, np.ones(3) / np.sqrt(3))

    def test_matches_naive_product(self):
        a = haar_unitary(3, 10)
        b = haar_unitary(3, 11)
        assert np.allclose(multiply(a, b), naive_product(a, b), atol=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            multiply(np.eye(3, dtype=complex), np.eye(4, dtype=complex))

    def test_associative_on_random_unitaries(self):
        for dim in (2, 4, 8):
            a, b, c = (haar_unitary(dim, 20 + dim + k) for k in range(3))
            assert max_norm(multiply(multiply(a, b), c) - multiply(a, multiply(b, c))) <= 1e-12


class TestIsUnitary:
    def test_identity(self):
        assert is_unitary(np.eye(5, dtype=complex), 1e-10)

    def test_hadamard(self):
        assert is_unitary(H3, 1e-10)

    def test_perturbed_identity(self):
        m = np.eye(3, dtype=complex)
        m[0, 0] = 1.01
        assert not is_unitary(m, 1e-10)

    def test_closed_under_multiply(self):
        a = haar_unitary(4, 31)
        b = haar_unitary(4, 32)
        assert is_unitary(a, 1e-12) and is_unitary(b, 1e-12)
        assert is_unitary(multiply(a, b), 1e-10)


class TestIsDiagonal:
    def test_phase_diagonal(self):
        assert is_diagonal(np.diag([1, np.exp(0.7j), 1]), 1e-10)

    def test_hadamard_is_not(self):
        assert not is_diagonal(H3, 1e-10)

    def test_boundary_inside_tolerance(self):
        tol = 1e-6
        m = np.diag([1.0 + 0j, 1.0, 1.0])
        m[0, 1] = tol / 2
        assert is_diagonal(m, tol)


class TestEqualUpToGlobalPhase:
    def test_explicit_global_phase(self):
        assert equal_up_to_global_phase(np.exp(1j * np.pi / 7) * H3, H3, 1e-12)

    def test_dagger_is_not_a_global_phase(self):
        # no single phase aligns all entries of H3 with its adjoint
        assert not equal_up_to_global_phase(H3, H3.conj().T, 1e-6)

    def test_relative_phase_is_not_global(self):
        assert not equal_up_to_global_phase(np.eye(3, dtype=complex),
                                            np.diag([1.0, -1.0, 1.0]), 1e-6)

    def test_equivalence_relation(self):
        a = haar_unitary(3, 40)
        b = np.exp(0.321j) * a
        c = np.exp(-1.234j) * a
        for m in (a, b, c):
            assert equal_up_to_global_phase(m, m, 1e-12)
        assert equal_up_to_global_phase(a, b, 1e-12)
        assert equal_up_to_global_phase(b, a, 1e-12)
        assert equal_up_to_global_phase(a, b, 1e-12) and equal_up_to_global_phase(b, c, 1e-12)
        assert equal_up_to_global_phase(a, c, 2e-12)


class TestFileFormat:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "u.json"
        save_unitary(H3, path)
        assert np.allclose(load_unitary(path), H3, atol=1e-15)

    def test_rejects_non_square(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2, "entries": [[[1, 0]], [[0, 0]]]}))
        with pytest.raises(ValueError):
            load_unitary(path)

    def test_rejects_non_finite(self, tmp_path):
        path = tmp_path / "nan.json"
        entries = [[[1, 0], [0, 0]], [[0, 0], [float("nan"), 0]]]
        path.write_text(json.dumps({"dim": 2, "entries": entries}))
        with pytest.raises(ValueError):
            load_unitary(path)

    def test_rejects_dim_mismatch(self, tmp_path):
        path = tmp_path / "mismatch.json"
        entries = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        path.write_text(json.dumps({"dim": 3, "entries": entries}))
        with pytest.raises(ValueError):
            load_unitary(path)


def test_as_matrix_rejects_tiny():
    with pytest.raises(ValueError):
        as_matrix(np.array([[1.0]]))
