import numpy as np
import pytest

from krylov_cd.paulis import PauliOperator, PauliString


def kron_chain(*mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID = np.eye(2, dtype=complex)


class TestPauliString:
    def test_product_closure_and_phase(self):
        x = PauliString("X")
        y = PauliString("Y")
        z = x * y
        assert z.letters == "Z"
        assert z.phase == 1j
        assert (y * x).phase == -1j

    def test_product_matches_matrices(self):
        rng = np.random.default_rng(7)
        letters = "IXYZ"
        mats = {"I": ID, "X": SX, "Y": SY, "Z": SZ}
        for _ in range(40):
            a = "".join(rng.choice(list(letters), size=3))
            b = "".join(rng.choice(list(letters), size=3))
            pa, pb = PauliString(a), PauliString(b)
            prod = pa * pb
            lhs = prod.to_matrix()
            rhs = kron_chain(*(mats[c] for c in a)) @ kron_chain(*(mats[c] for c in b))
            assert np.abs(lhs - rhs).max() < 1e-14

    def test_trace_rule(self):
        assert PauliString("III", 1j).trace() == 8j
        assert PauliString("IXI").trace() == 0

    def test_phase_validation(self):
        with pytest.raises(ValueError):
            PauliString("X", 0.5)
        with pytest.raises(ValueError):
            PauliString("Q")

    def test_support_span(self):
        assert PauliString("IXIZI").support_span() == 3
        assert PauliString("IIIII").support_span() == 0
        assert PauliString("XIIII").support_span() == 1


class TestPauliOperator:
    def test_phase_folding(self):
        op = PauliOperator.from_strings(1, [(PauliString("X", 1j), 2.0)])
        assert op.terms == {"X": 2j}

    def test_commutator_z_x(self):
        # [Z, X] = 2i Y on one site
        z = PauliOperator.from_site_map(1, {0: "Z"})
        x = PauliOperator.from_site_map(1, {0: "X"})
        comm = z.commutator(x)
        assert set(comm.terms) == {"Y"}
        assert comm.terms["Y"] == pytest.approx(2j)

    def test_commutator_self_zero(self):
        z = PauliOperator.from_site_map(3, {1: "Z"})
        assert z.commutator(z).is_zero()

    def test_commutator_matches_dense(self):
        rng = np.random.default_rng(3)
        n = 3
        letters = list("IXYZ")

        def random_op():
            entries = []
            for _ in range(4):
                word = "".join(rng.choice(letters, size=n))
                entries.append((word, rng.normal() + 1j * rng.normal()))
            return PauliOperator.from_strings(n, entries)

        for _ in range(10):
            a, b = random_op(), random_op()
            lhs = a.commutator(b).to_matrix()
            am, bm = a.to_matrix(), b.to_matrix()
            assert np.abs(lhs - (am @ bm - bm @ am)).max() < 1e-12

    def test_overlap_is_normalized_trace(self):
        a = PauliOperator.from_strings(2, [("XI", 1.0), ("ZZ", 2.0)])
        b = PauliOperator.from_strings(2, [("XI", 0.5 - 1j), ("YY", 3.0)])
        want = np.trace(a.to_matrix().conj().T @ b.to_matrix()) / 4
        assert a.overlap(b) == pytest.approx(want)

    def test_hermiticity_flags(self):
        herm = PauliOperator.from_strings(2, [("XZ", 1.5), ("YY", -0.25)])
        anti = PauliOperator.from_strings(2, [("XZ", 1.5j)])
        assert herm.is_hermitian() and not herm.is_anti_hermitian()
        assert anti.is_anti_hermitian() and not anti.is_hermitian()

    def test_site_map_wraps_periodically(self):
        op = PauliOperator.from_site_map(4, {3: "X", 4: "X"})
        assert set(op.terms) == {"XIIX"}

    def test_dense_cap(self):
        op = PauliOperator.from_site_map(4, {0: "X"})
        with pytest.raises(ValueError):
            op.to_matrix(cap=8)

    def test_span_norms(self):
        op = PauliOperator.from_strings(4, [("XIIX", 1.0), ("IXXI", 2.0), ("ZIII", 3.0)])
        by_span = op.coefficient_norms_by_span()
        assert by_span[4] == pytest.approx(1.0)
        assert by_span[2] == pytest.approx(4.0)
        assert by_span[1] == pytest.approx(9.0)
