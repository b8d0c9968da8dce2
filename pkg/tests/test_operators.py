import numpy as np
import pytest

from krylov_cd.operators import (BasisDeclaration, DenseOperator, Measure, StructuredOperator,
                                 apply_liouvillian, build_liouvillian_matrix, inner_product,
                                 liouvillian_from_m_block, operator_norm, to_dense)
from krylov_cd.paulis import PauliOperator

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def random_pauli(rng, n, n_terms=4, hermitian=True):
    entries = []
    for _ in range(n_terms):
        word = "".join(rng.choice(list("IXYZ"), size=n))
        coeff = rng.normal() if hermitian else rng.normal() + 1j * rng.normal()
        entries.append((word, coeff))
    return PauliOperator.from_strings(n, entries)


class TestMeasure:
    def test_uniform_validation(self):
        with pytest.raises(ValueError):
            Measure.uniform(0.0)
        with pytest.raises(ValueError):
            Measure.gibbs(-1.0)

    def test_gibbs_binding(self):
        h = np.diag([0.0, 1.0, 2.0])
        rho = Measure.gibbs(1.0).bind(h).density_matrix()
        w = np.exp(-np.array([0.0, 1.0, 2.0]))
        assert np.allclose(np.diag(rho), w / w.sum())

    def test_gibbs_beta_zero_is_uniform(self):
        h = np.diag([0.0, 3.0])
        rho = Measure.gibbs(0.0).bind(h).density_matrix()
        assert np.allclose(rho, np.eye(2) / 2)

    def test_unbound_gibbs_rejected(self):
        a = DenseOperator(SX)
        with pytest.raises(ValueError):
            inner_product(a, a, Measure.gibbs(1.0))


class TestInnerProduct:
    def test_normalized_pauli_string(self):
        # single string on 3 sites under rho = 1/2^3
        x1 = PauliOperator.from_site_map(3, {0: "X"})
        assert inner_product(x1, x1, Measure.uniform(1 / 8)) == pytest.approx(1.0)

    def test_distinct_strings_exactly_zero(self):
        z1 = PauliOperator.from_site_map(3, {0: "Z"})
        x1 = PauliOperator.from_site_map(3, {0: "X"})
        assert inner_product(z1, x1, Measure.uniform(1 / 8)) == 0

    def test_hermitian_pair_is_real(self):
        rng = np.random.default_rng(0)
        m = Measure.uniform(1 / 16)
        for _ in range(10):
            a, b = random_pauli(rng, 4), random_pauli(rng, 4)
            val = inner_product(a, b, m)
            assert abs(val.imag) < 1e-12 * max(abs(val), 1.0)

    def test_pauli_matches_dense_up_to_six_sites(self):
        rng = np.random.default_rng(1)
        for n in (2, 4, 6):
            m = Measure.uniform(1 / 2 ** n)
            a, b = random_pauli(rng, n, 6), random_pauli(rng, n, 6)
            lhs = inner_product(a, b, m)
            rhs = inner_product(DenseOperator(a.to_matrix()), DenseOperator(b.to_matrix()), m)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_dense_gibbs_definition(self):
        rng = np.random.default_rng(2)
        h = rng.normal(size=(4, 4))
        h = DenseOperator(h + h.T)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        measure = Measure.gibbs(0.7).bind(h.matrix)
        rho = measure.density_matrix()
        want = 0.5 * np.trace(rho @ (a.conj().T @ b + b @ a.conj().T))
        got = inner_product(DenseOperator(a), DenseOperator(b), measure)
        assert got == pytest.approx(want)

    def test_liouvillian_image_orthogonal_to_source(self):
        # (X, [H, X]) = 0 for Hermitian X, under uniform and Gibbs weights
        rng = np.random.default_rng(3)
        h = random_pauli(rng, 4, 5)
        uniform = Measure.uniform(1 / 16)
        for _ in range(10):
            x = random_pauli(rng, 4, 5)
            val = inner_product(x, apply_liouvillian(h, x), uniform)
            assert abs(val) < 1e-12
        hd = DenseOperator(h.to_matrix())
        gibbs = Measure.gibbs(0.5).bind(hd.matrix)
        for _ in range(5):
            x = DenseOperator(random_pauli(rng, 4, 5).to_matrix())
            val = inner_product(x, apply_liouvillian(hd, x), gibbs)
            assert abs(val) < 1e-12

    def test_conjugate_symmetry_through_liouvillian(self):
        # (X, [H,Y])^* = (Y, [H,X]) for Hermitian X, Y
        rng = np.random.default_rng(4)
        h = random_pauli(rng, 3, 4)
        m = Measure.uniform(1 / 8)
        for _ in range(10):
            x, y = random_pauli(rng, 3), random_pauli(rng, 3)
            lhs = inner_product(x, apply_liouvillian(h, y), m)
            rhs = inner_product(y, apply_liouvillian(h, x), m)
            assert lhs.conjugate() == pytest.approx(rhs, abs=1e-12)

    def test_backend_mismatch(self):
        a = PauliOperator.from_site_map(1, {0: "X"})
        with pytest.raises(TypeError):
            inner_product(a, DenseOperator(SX), Measure.uniform(0.5))


class TestApplyLiouvillian:
    def test_pauli_example(self):
        z = PauliOperator.from_site_map(1, {0: "Z"})
        x = PauliOperator.from_site_map(1, {0: "X"})
        out = apply_liouvillian(z, x)
        assert out.terms["Y"] == pytest.approx(2j)
        assert apply_liouvillian(z, z).is_zero()

    def test_parity_flip(self):
        rng = np.random.default_rng(5)
        h = random_pauli(rng, 3, 4)
        x = random_pauli(rng, 3, 4)
        image = apply_liouvillian(h, x)
        assert image.is_anti_hermitian()
        assert apply_liouvillian(h, image).is_hermitian()

    def test_requires_hermitian_hamiltonian(self):
        bad = PauliOperator.from_strings(1, [("X", 1j)])
        x = PauliOperator.from_site_map(1, {0: "Z"})
        with pytest.raises(ValueError):
            apply_liouvillian(bad, x)

    def test_site_count_mismatch(self):
        h = PauliOperator.from_site_map(2, {0: "Z"})
        x = PauliOperator.from_site_map(3, {0: "X"})
        with pytest.raises(ValueError):
            apply_liouvillian(h, x)

    def test_tfim_image_of_magnetization(self):
        # [H, sum Z] for the transverse-field Ising chain equals
        # sqrt(2) i v W_1 with W_1 the normalized two-site family
        from krylov_cd.models.tfim import magnetization, transverse_ising_hamiltonian, w_family
        n, v, g = 4, 1.0, 0.5
        h = transverse_ising_hamiltonian(n, v, g)
        image = apply_liouvillian(h, magnetization(n))
        expected = np.sqrt(2) * 1j * v * w_family(n, 1)
        assert (image - expected).max_abs_coefficient() < 1e-12


class TestToDense:
    def test_single_site(self):
        x = PauliOperator.from_site_map(1, {0: "X"})
        assert np.allclose(to_dense(x), SX)

    def test_zz(self):
        zz = PauliOperator.from_site_map(2, {0: "Z", 1: "Z"})
        assert np.allclose(to_dense(zz), np.diag([1, -1, -1, 1]))

    def test_two_site_w_family_against_kron(self):
        # (X1 Y2 + Y1 X2)/sqrt(2) assembled independently from Kronecker products
        from krylov_cd.models.tfim import w_family
        want = (np.kron(SX, SY) + np.kron(SY, SX)) / np.sqrt(2)
        assert np.abs(to_dense(w_family(2, 1)) - want).max() < 1e-14

    def test_structured_realization(self):
        basis = BasisDeclaration([DenseOperator(SX), DenseOperator(SY)])
        op = StructuredOperator([1.0, 2.0], basis)
        assert np.allclose(to_dense(op), SX + 2 * SY)


class TestLiouvillianMatrix:
    def test_two_level_closed_form(self):
        # basis (X, Y, Z) under rho = 1/2: L = i h [[0,-n3,n2],[n3,0,-n1],[-n2,n1,0]]
        rng = np.random.default_rng(6)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        h = 1.3
        ham = DenseOperator(0.5 * h * (n[0] * SX + n[1] * SY + n[2] * SZ))
        basis = BasisDeclaration([DenseOperator(SX), DenseOperator(SY), DenseOperator(SZ)])
        built = build_liouvillian_matrix(ham, basis, Measure.uniform(0.5))
        want = 1j * h * np.array([
            [0, -n[2], n[1]],
            [n[2], 0, -n[0]],
            [-n[1], n[0], 0],
        ])
        assert np.abs(built.matrix - want).max() < 1e-12

    def test_zero_hamiltonian(self):
        basis = BasisDeclaration([DenseOperator(SX), DenseOperator(SY), DenseOperator(SZ)])
        built = build_liouvillian_matrix(DenseOperator(np.zeros((2, 2))), basis,
                                         Measure.uniform(0.5))
        assert not built.matrix.any()

    def test_structure_invariants(self):
        rng = np.random.default_rng(7)
        ham = random_pauli(rng, 3, 5)
        els = []
        for word in ("XII", "IYI", "ZZI", "IXZ"):
            els.append(PauliOperator.from_strings(3, [(word, 1.0)]))
        basis = BasisDeclaration(els)
        built = build_liouvillian_matrix(ham, basis, Measure.uniform(1 / 8))
        mat = built.matrix
        assert np.abs(mat + mat.T).max() < 1e-12
        assert np.abs(mat - mat.conj().T).max() < 1e-12
        assert not np.diag(mat).any()

    def test_orthonormality_gate(self):
        els = [DenseOperator(SX), DenseOperator(SX + 0.001 * SY)]
        basis = BasisDeclaration(els)
        with pytest.raises(ValueError, match="orthonormal"):
            build_liouvillian_matrix(DenseOperator(SZ), basis, Measure.uniform(0.5))

    def test_stirap_m_block(self):
        # the 5 x 3 block of the three-level Raman system at a generic protocol point
        from krylov_cd.models.stirap import StirapModel
        model = StirapModel()
        t = 0.37 * model.t_final
        built = build_liouvillian_matrix(model.hamiltonian(t), model.operator_basis(),
                                         model.measure)
        wp, ws = model.omega_p(t), model.omega_s(t)
        d = model.delta
        want = 1j * np.array([
            [d, 0, ws / 2],
            [0, -d, -wp / 2],
            [ws / 2, -wp / 2, 0],
            [wp, -ws / 2, 0],
            [0, np.sqrt(6) * ws / 2, 0],
        ])
        assert built.m_block is not None
        assert np.abs(built.m_block - want).max() < 1e-12

    def test_m_block_roundtrip(self):
        m = 1j * np.arange(6, dtype=float).reshape(3, 2)
        full = liouvillian_from_m_block(m)
        assert np.abs(full + full.T).max() < 1e-15
        assert np.abs(full - full.conj().T).max() < 1e-15


def test_operator_norm_gibbs_positive():
    rng = np.random.default_rng(8)
    h = rng.normal(size=(4, 4))
    h = h + h.T
    measure = Measure.gibbs(1.0).bind(h)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert operator_norm(DenseOperator(a), measure) > 0
