import itertools

import pytest

from qdistcert.gaussian import SINGLE, GaussianMatrix, i_power, pauli_matrix
from qdistcert.gf2 import Gf2Error
from qdistcert.pauli import (MUL_TABLE, BinSympPauli, PauliLetter, PauliOp, commutes, from_binsymp,
                             phi, pauli_mul, pauli_weight, symplectic_prod, to_binsymp)

I, X, Y, Z = PauliLetter.I, PauliLetter.X, PauliLetter.Y, PauliLetter.Z
LETTERS = (I, X, Y, Z)


def ops(n: int, phases=(0,)):
    for ph in phases:
        for letters in itertools.product(LETTERS, repeat=n):
            yield PauliOp(ph, letters)


class TestPhi:
    def test_examples(self):
        assert phi(X, Z) == 1
        assert phi(I, Y) == 0
        assert phi(Y, Y) == 0

    def test_table_matches_matrices(self):
        for p, q in itertools.product(LETTERS, repeat=2):
            pq, qp = SINGLE[p] @ SINGLE[q], SINGLE[q] @ SINGLE[p]
            expected = qp if phi(p, q) == 0 else qp.scale((-1, 0))
            assert pq == expected, (p, q)


class TestMultiplication:
    def test_identity_is_neutral(self):
        p = PauliOp.parse("-iXYZ")
        assert pauli_mul(p, PauliOp.identity(3)) == p

    def test_xz_and_zx(self):
        assert pauli_mul(PauliOp.parse("X"), PauliOp.parse("Z")) == PauliOp(3, (Y,))
        assert pauli_mul(PauliOp.parse("Z"), PauliOp.parse("X")) == PauliOp(1, (Y,))

    def test_single_qubit_table_against_matrices(self):
        for (p, q), (r, k) in MUL_TABLE.items():
            assert SINGLE[p] @ SINGLE[q] == SINGLE[r].scale(i_power(k))

    def test_length_mismatch(self):
        with pytest.raises(Gf2Error):
            pauli_mul(PauliOp.parse("X"), PauliOp.parse("XX"))

    def test_matrix_oracle_two_qubits_with_phases(self):
        all_ops = list(ops(2, phases=range(4)))
        for p in all_ops:
            mp = pauli_matrix(p)
            for q in all_ops:
                assert pauli_matrix(pauli_mul(p, q)) == mp @ pauli_matrix(q)

    def test_square_is_identity(self):
        for p in ops(3):
            assert pauli_mul(p, p) == PauliOp.identity(3)


class TestCommutes:
    def test_examples(self):
        assert commutes(PauliOp.parse("XXI"), PauliOp.parse("ZYI"))
        assert not commutes(PauliOp.parse("X"), PauliOp.parse("Z"))
        for p in ops(2):
            assert commutes(p, p)

    def test_length_mismatch(self):
        with pytest.raises(Gf2Error):
            commutes(PauliOp.parse("X"), PauliOp.parse("XI"))

    def test_iff_symplectic_zero(self):
        for n in range(4):
            everything = list(ops(n))
            for p in everything:
                bp = to_binsymp(p)
                for q in everything:
                    assert commutes(p, q) == (symplectic_prod(bp, to_binsymp(q)) == 0)


class TestBinSymp:
    def test_examples(self):
        assert to_binsymp(PauliOp.parse("XXI")) == BinSympPauli.from_strs("110", "000")
        assert to_binsymp(PauliOp.parse("ZYI")) == BinSympPauli.from_strs("010", "110")
        assert to_binsymp(PauliOp.identity(4)) == BinSympPauli.zeros(4)

    def test_phase_is_dropped(self):
        assert to_binsymp(PauliOp.parse("-iXZ")) == to_binsymp(PauliOp.parse("XZ"))

    def test_round_trip_and_bijection(self):
        for n in range(4):
            images = set()
            for p in ops(n):
                b = to_binsymp(p)
                assert from_binsymp(b) == p
                images.add(b.packed())
            assert len(images) == 4 ** n

    def test_phaseless_homomorphism(self):
        for n in (1, 2):
            for p in ops(n, phases=range(4)):
                for q in ops(n, phases=range(4)):
                    assert to_binsymp(pauli_mul(p, q)) == to_binsymp(p) ^ to_binsymp(q)

    def test_inverse_up_to_phase(self):
        for n in (1, 2):
            bs = [to_binsymp(p) for p in ops(n)]
            for b1 in bs:
                for b2 in bs:
                    prod = pauli_mul(from_binsymp(b1), from_binsymp(b2))
                    assert prod.letters == from_binsymp(b1 ^ b2).letters

    def test_symplectic_examples(self):
        assert symplectic_prod(BinSympPauli.from_strs("110", "000"), BinSympPauli.from_strs("010", "110")) == 0
        assert symplectic_prod(BinSympPauli.from_strs("1", "0"), BinSympPauli.from_strs("0", "1")) == 1
        for p in ops(2):
            b = to_binsymp(p)
            assert symplectic_prod(b, b) == 0

    def test_symplectic_length_mismatch(self):
        with pytest.raises(Gf2Error):
            symplectic_prod(BinSympPauli.zeros(1), BinSympPauli.zeros(2))

    def test_packed_round_trip(self):
        b = BinSympPauli.from_strs("1010", "0110")
        assert BinSympPauli.from_packed(4, b.packed()) == b


class TestWeight:
    def test_shor_m7(self):
        assert pauli_weight(PauliOp.parse("XXXXXXIII")) == 6

    def test_identity(self):
        assert pauli_weight(PauliOp.identity(5)) == 0

    def test_pauli_vs_binary_weight(self):
        b = BinSympPauli.from_strs("110", "011")
        assert b.pauli_weight() == 3 and b.binary_weight() == 4

    def test_matches_union_weight(self):
        for p in ops(3):
            assert pauli_weight(p) == to_binsymp(p).pauli_weight()


class TestParsing:
    @pytest.mark.parametrize("text", ["+XXZIY", "-iYZI", "+iX", "-ZZ", "+"])
    def test_round_trip(self, text):
        assert str(PauliOp.parse(text)) == text

    def test_bare_letters_have_phase_zero(self):
        assert PauliOp.parse("XY").phase == 0

    @pytest.mark.parametrize("text", ["XQ", "--X", "x"])
    def test_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            PauliOp.parse(text)


class TestGaussianOracle:
    def test_kron_dimensions(self):
        m = pauli_matrix(PauliOp.parse("XYZ"))
        assert m.dim == 8

    def test_entries_are_units(self):
        for p in ops(2, phases=range(4)):
            for row in pauli_matrix(p).entries:
                assert sum(1 for e in row if e != (0, 0)) == 1
                assert all(e in {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)} for e in row)

    def test_cap(self):
        with pytest.raises(ValueError):
            pauli_matrix(PauliOp.identity(4))

    def test_identity(self):
        assert pauli_matrix(PauliOp.identity(2)) == GaussianMatrix.identity(4)
