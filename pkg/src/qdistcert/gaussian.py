"""Exact Gaussian-integer matrices for checking the Pauli algebra (tests only, n <= 3)."""
from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliLetter, PauliOp

# entries are (real, imag) integer pairs
_ONE, _ZERO, _I = (1, 0), (0, 0), (0, 1)
MAX_QUBITS = 3


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def i_power(k: int):
    return [(1, 0), (0, 1), (-1, 0), (0, -1)][k % 4]


@dataclass(frozen=True)
class GaussianMatrix:
    dim: int
    entries: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def identity(cls, dim: int) -> GaussianMatrix:
        return cls(dim, tuple(tuple(_ONE if i == j else _ZERO for j in range(dim)) for i in range(dim)))

    def __matmul__(self, other: GaussianMatrix) -> GaussianMatrix:
        d = self.dim
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = _ZERO
                for k in range(d):
                    acc = _cadd(acc, _cmul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            rows.append(tuple(row))
        return GaussianMatrix(d, tuple(rows))

    def scale(self, c) -> GaussianMatrix:
        return GaussianMatrix(self.dim, tuple(tuple(_cmul(c, e) for e in row) for row in self.entries))

    def kron(self, other: GaussianMatrix) -> GaussianMatrix:
        d1, d2 = self.dim, other.dim
        d = d1 * d2
        rows = []
        for i in range(d):
            i1, i2 = divmod(i, d2)
            rows.append(
                tuple(_cmul(self.entries[i1][j // d2], other.entries[i2][j % d2]) for j in range(d))
            )
        return GaussianMatrix(d, tuple(rows))


SINGLE = {
    PauliLetter.I: GaussianMatrix(2, ((_ONE, _ZERO), (_ZERO, _ONE))),
    PauliLetter.X: GaussianMatrix(2, ((_ZERO, _ONE), (_ONE, _ZERO))),
    PauliLetter.Y: GaussianMatrix(2, ((_ZERO, (0, -1)), (_I, _ZERO))),
    PauliLetter.Z: GaussianMatrix(2, ((_ONE, _ZERO), (_ZERO, (-1, 0)))),
}


def pauli_matrix(p: PauliOp) -> GaussianMatrix:
    """Fold a phased Pauli into its ``2**n x 2**n`` matrix."""
    if len(p) > MAX_QUBITS:
        raise ValueError(f"matrix oracle is limited to {MAX_QUBITS} qubits")
    m = GaussianMatrix.identity(1)
    for letter in p.letters:
        m = m.kron(SINGLE[letter])
    return m.scale(i_power(p.phase))
