"""Phased Pauli operators and their binary symplectic encoding.

Phases are exponents of ``i`` modulo 4, so multiplying operators adds
integers and no complex arithmetic is involved.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .gf2 import BitString, Gf2Error, dot, pauli_union_weight


class PauliLetter(enum.Enum):
    I = (0, 0)
    X = (1, 0)
    Z = (0, 1)
    Y = (1, 1)

    @property
    def x(self) -> int:
        return self.value[0]

    @property
    def z(self) -> int:
        return self.value[1]

    @classmethod
    def from_xz(cls, x: int, z: int) -> PauliLetter:
        return _FROM_XZ[(x & 1, z & 1)]

    def __str__(self) -> str:
        return self.name


_FROM_XZ = {letter.value: letter for letter in PauliLetter}
I, X, Y, Z = PauliLetter.I, PauliLetter.X, PauliLetter.Y, PauliLetter.Z

# (P, Q) -> (letter of PQ, exponent k with PQ = i^k * letter); taken from the 2x2 matrices.
MUL_TABLE: dict[tuple[PauliLetter, PauliLetter], tuple[PauliLetter, int]] = {
    (I, I): (I, 0), (I, X): (X, 0), (I, Y): (Y, 0), (I, Z): (Z, 0),
    (X, I): (X, 0), (X, X): (I, 0), (X, Y): (Z, 1), (X, Z): (Y, 3),
    (Y, I): (Y, 0), (Y, X): (Z, 3), (Y, Y): (I, 0), (Y, Z): (X, 1),
    (Z, I): (Z, 0), (Z, X): (Y, 1), (Z, Y): (X, 3), (Z, Z): (I, 0),
}


def phi(p: PauliLetter, q: PauliLetter) -> int:
    """Anti-commutation indicator: 0 when ``p`` and ``q`` commute, 1 otherwise."""
    return 0 if p is I or q is I or p is q else 1


_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {v: k for k, v in _PHASE_PREFIX.items()}
_OP_RE = re.compile(r"^\s*(\+i|-i|\+|-|i)?([IXYZ]*)\s*$")


@dataclass(frozen=True)
class PauliOp:
    """``i**phase`` times the tensor product of ``letters``."""

    phase: int
    letters: tuple[PauliLetter, ...]

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def parse(cls, text: str) -> PauliOp:
        m = _OP_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse Pauli operator {text!r}")
        prefix = m.group(1) or "+"
        if prefix == "i":
            prefix = "+i"
        return cls(_PREFIX_PHASE[prefix], tuple(PauliLetter[c] for c in m.group(2)))

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(0, (I,) * n)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + "".join(p.name for p in self.letters)

    def __mul__(self, other: PauliOp) -> PauliOp:
        return pauli_mul(self, other)

    def weight(self) -> int:
        return pauli_weight(self)


def _check_same_length(p: PauliOp, q: PauliOp) -> None:
    if len(p) != len(q):
        raise Gf2Error(f"operator length mismatch: {len(p)} != {len(q)}")


def pauli_mul(p: PauliOp, q: PauliOp) -> PauliOp:
    _check_same_length(p, q)
    phase = p.phase + q.phase
    letters = []
    for a, b in zip(p.letters, q.letters):
        c, k = MUL_TABLE[a, b]
        letters.append(c)
        phase += k
    return PauliOp(phase, tuple(letters))


def commutes(p: PauliOp, q: PauliOp) -> bool:
    _check_same_length(p, q)
    acc = 0
    for a, b in zip(p.letters, q.letters):
        acc ^= phi(a, b)
    return acc == 0


def pauli_weight(p: PauliOp) -> int:
    return sum(1 for a in p.letters if a is not I)


@dataclass(frozen=True)
class BinSympPauli:
    """A phaseless Pauli ``(x | z)``."""

    x: BitString
    z: BitString

    def __post_init__(self):
        if self.x.len != self.z.len:
            raise Gf2Error(f"x/z length mismatch: {self.x.len} != {self.z.len}")

    @property
    def n(self) -> int:
        return self.x.len

    @classmethod
    def from_strs(cls, x: str, z: str) -> BinSympPauli:
        return cls(BitString.from_str(x), BitString.from_str(z))

    @classmethod
    def zeros(cls, n: int) -> BinSympPauli:
        return cls(BitString(n), BitString(n))

    def __xor__(self, other: BinSympPauli) -> BinSympPauli:
        return BinSympPauli(self.x ^ other.x, self.z ^ other.z)

    def __str__(self) -> str:
        return f"({self.x} | {self.z})"

    def pauli_weight(self) -> int:
        return pauli_union_weight(self.x, self.z)

    def binary_weight(self) -> int:
        return self.x.weight() + self.z.weight()

    def packed(self) -> int:
        """``x`` in the low ``n`` bits, ``z`` in the high ``n`` bits."""
        return self.x.bits | (self.z.bits << self.n)

    @classmethod
    def from_packed(cls, n: int, value: int) -> BinSympPauli:
        mask = (1 << n) - 1
        return cls(BitString(n, value & mask), BitString(n, value >> n))


def symplectic_prod(b1: BinSympPauli, b2: BinSympPauli) -> int:
    return dot(b1.x, b2.z) ^ dot(b1.z, b2.x)


def to_binsymp(p: PauliOp) -> BinSympPauli:
    return BinSympPauli(
        BitString.from_bits(a.x for a in p.letters),
        BitString.from_bits(a.z for a in p.letters),
    )


def from_binsymp(b: BinSympPauli) -> PauliOp:
    return PauliOp(0, tuple(PauliLetter.from_xz(xi, zi) for xi, zi in zip(b.x, b.z)))
