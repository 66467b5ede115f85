"""Packed linear algebra over GF(2).

Bit vectors are stored as Python integers: bit ``i`` of the integer is
coordinate ``i`` of the vector, so row operations are single big-int XOR/AND
operations and weights are ``int.bit_count``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class Gf2Error(ValueError):
    """Raised on shape or length mismatches."""


def _check_len(a: int, b: int, what: str = "length") -> None:
    if a != b:
        raise Gf2Error(f"{what} mismatch: {a} != {b}")


@dataclass(frozen=True)
class BitString:
    """A vector in GF(2)^len; position 0 is the least-significant bit of ``bits``."""

    len: int
    bits: int = 0

    def __post_init__(self):
        if self.len < 0:
            raise Gf2Error("negative length")
        if self.bits < 0 or self.bits >> self.len:
            raise Gf2Error(f"bits set beyond position {self.len}")

    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls(n, 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitString:
        value = 0
        n = 0
        for i, b in enumerate(bits):
            if b & 1:
                value |= 1 << i
            n = i + 1
        return cls(n, value)

    @classmethod
    def from_str(cls, s: str) -> BitString:
        """Parse ``"1101001"``; the first character is position 0."""
        s = s.replace(" ", "").replace("_", "")
        if any(c not in "01" for c in s):
            raise Gf2Error(f"not a bit string: {s!r}")
        return cls.from_bits(int(c) for c in s)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> BitString:
        value = 0
        for j in support:
            if not 0 <= j < n:
                raise Gf2Error(f"support index {j} out of range for length {n}")
            value |= 1 << j
        return cls(n, value)

    def __len__(self) -> int:
        return self.len

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.len:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self):
        return ((self.bits >> i) & 1 for i in range(self.len))

    def __str__(self) -> str:
        return "".join(str(b) for b in self)

    def __xor__(self, other: BitString) -> BitString:
        _check_len(self.len, other.len)
        return BitString(self.len, self.bits ^ other.bits)

    def __and__(self, other: BitString) -> BitString:
        _check_len(self.len, other.len)
        return BitString(self.len, self.bits & other.bits)

    def __or__(self, other: BitString) -> BitString:
        _check_len(self.len, other.len)
        return BitString(self.len, self.bits | other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return _support(self.bits)

    def to_hex(self) -> str:
        return hex(self.bits)

    @classmethod
    def from_hex(cls, n: int, text: str) -> BitString:
        return cls(n, int(text, 16))


def _support(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def dot(u: BitString, v: BitString) -> int:
    """Parity of the AND of ``u`` and ``v``."""
    _check_len(u.len, v.len)
    return (u.bits & v.bits).bit_count() & 1


def pauli_union_weight(x: BitString, z: BitString) -> int:
    """Number of positions where ``x`` or ``z`` is set."""
    _check_len(x.len, z.len)
    return (x.bits | z.bits).bit_count()


def _echelon_insert(basis: dict[int, int], v: int) -> int:
    """Reduce ``v`` against ``basis`` (keyed by lowest set bit); insert if independent.

    Returns the residue, which is 0 iff ``v`` was already in the span.
    """
    while v:
        low = v & -v
        b = basis.get(low)
        if b is None:
            basis[low] = v
            return v
        v ^= b
    return 0


def _reduce(basis: dict[int, int], v: int) -> int:
    while v:
        b = basis.get(v & -v)
        if b is None:
            return v
        v ^= b
    return 0


@dataclass(frozen=True)
class Gf2Matrix:
    """An immutable ``rows x cols`` matrix over GF(2); ``data[i]`` packs row ``i``."""

    rows: int
    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise Gf2Error(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise Gf2Error(f"row has bits beyond column {self.cols}")

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence, cols: int | None = None) -> Gf2Matrix:
        """Build from rows given as bit strings, 0/1 sequences or ``BitString``s."""
        data = []
        width = cols
        for r in rows:
            if isinstance(r, str):
                r = BitString.from_str(r)
            elif not isinstance(r, BitString):
                r = BitString.from_bits(int(b) for b in r)
            if width is None:
                width = r.len
            _check_len(r.len, width, "row length")
            data.append(r.bits)
        if width is None:
            raise Gf2Error("cannot infer column count of an empty matrix")
        return cls(len(data), width, tuple(data))

    @classmethod
    def from_bitstrings(cls, rows: Sequence[BitString], cols: int) -> Gf2Matrix:
        for r in rows:
            _check_len(r.len, cols, "row length")
        return cls(len(rows), cols, tuple(r.bits for r in rows))

    # access -----------------------------------------------------------------

    def row(self, i: int) -> BitString:
        return BitString(self.cols, self.data[i])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def __str__(self) -> str:
        return "\n".join(str(self.row(i)) for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.data)

    # structure --------------------------------------------------------------

    def transpose(self) -> Gf2Matrix:
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            for j in _support(r):
                out[j] |= 1 << i
        return Gf2Matrix(self.cols, self.rows, tuple(out))

    def hstack(self, other: Gf2Matrix) -> Gf2Matrix:
        _check_len(self.rows, other.rows, "row count")
        return Gf2Matrix(
            self.rows,
            self.cols + other.cols,
            tuple(a | (b << self.cols) for a, b in zip(self.data, other.data)),
        )

    def vstack(self, other: Gf2Matrix) -> Gf2Matrix:
        _check_len(self.cols, other.cols, "column count")
        return Gf2Matrix(self.rows + other.rows, self.cols, self.data + other.data)

    def select_rows(self, indices: Iterable[int]) -> Gf2Matrix:
        data = tuple(self.data[i] for i in indices)
        return Gf2Matrix(len(data), self.cols, data)

    def with_row(self, i: int, row: BitString) -> Gf2Matrix:
        _check_len(row.len, self.cols, "row length")
        data = list(self.data)
        data[i] = row.bits
        return Gf2Matrix(self.rows, self.cols, tuple(data))

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        _check_len(self.rows, other.rows, "row count")
        _check_len(self.cols, other.cols, "column count")
        return Gf2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def __matmul__(self, other):
        """Matrix product, or the syndrome ``M v`` when ``other`` is a ``BitString``."""
        if isinstance(other, BitString):
            _check_len(self.cols, other.len)
            return BitString.from_bits((r & other.bits).bit_count() & 1 for r in self.data)
        _check_len(self.cols, other.rows, "inner dimension")
        out = []
        for r in self.data:
            acc = 0
            for j in _support(r):
                acc ^= other.data[j]
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(out))

    # linear algebra ---------------------------------------------------------

    def rank(self) -> int:
        basis: dict[int, int] = {}
        for r in self.data:
            _echelon_insert(basis, r)
        return len(basis)

    def rref(self) -> tuple[Gf2Matrix, list[int]]:
        """Reduced row echelon form (zero rows dropped) and its pivot columns."""
        rows = [r for r in self.data if r]
        pivots = []
        top = 0
        for col in range(self.cols):
            bit = 1 << col
            for i in range(top, len(rows)):
                if rows[i] & bit:
                    break
            else:
                continue
            rows[top], rows[i] = rows[i], rows[top]
            pr = rows[top]
            for k in range(len(rows)):
                if k != top and rows[k] & bit:
                    rows[k] ^= pr
            pivots.append(col)
            top += 1
            if top == len(rows):
                break
        rows = rows[:top]
        return Gf2Matrix(len(rows), self.cols, tuple(rows)), pivots

    def kernel_basis(self) -> Gf2Matrix:
        """Canonical basis of ``{v : M v = 0}``, one row per free column in ascending order."""
        r, pivots = self.rref()
        pivot_set = set(pivots)
        out = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            v = 1 << f
            for row, p in zip(r.data, pivots):
                if (row >> f) & 1:
                    v |= 1 << p
            out.append(v)
        return Gf2Matrix(len(out), self.cols, tuple(out))

    def row_space_contains(self, v: BitString) -> bool:
        _check_len(v.len, self.cols)
        basis: dict[int, int] = {}
        for r in self.data:
            _echelon_insert(basis, r)
        return _reduce(basis, v.bits) == 0

    def independent_rows(self, limit: int | None = None) -> list[int]:
        """Indices of a greedy maximal independent row subset, in row order."""
        basis: dict[int, int] = {}
        picked = []
        for i, r in enumerate(self.data):
            if limit is not None and len(picked) >= limit:
                break
            if _echelon_insert(basis, r):
                picked.append(i)
        return picked

    # flattening -------------------------------------------------------------

    def flatten(self) -> BitString:
        """Row-major packing: bit ``i * cols + j`` is entry ``(i, j)``."""
        value = 0
        for i, r in enumerate(self.data):
            value |= r << (i * self.cols)
        return BitString(self.rows * self.cols, value)

    @classmethod
    def unflatten(cls, flat: BitString, rows: int, cols: int) -> Gf2Matrix:
        _check_len(flat.len, rows * cols, "flattened length")
        mask = (1 << cols) - 1
        return cls(rows, cols, tuple((flat.bits >> (i * cols)) & mask for i in range(rows)))

    # serialization ----------------------------------------------------------

    def to_json(self, readable: bool = False) -> dict:
        """Rows as hex integers (bit 0 = column 0), or as ``"0110..."`` strings when ``readable``."""
        if readable:
            return {"rows": self.rows, "cols": self.cols, "format": "bits",
                    "data": [str(self.row(i)) for i in range(self.rows)]}
        return {"rows": self.rows, "cols": self.cols, "data": [format(r, "x") for r in self.data]}

    @classmethod
    def from_json(cls, obj: dict) -> Gf2Matrix:
        try:
            rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        except (KeyError, TypeError) as exc:
            raise Gf2Error(f"malformed matrix object: {exc}") from exc
        if not isinstance(data, list) or len(data) != rows:
            raise Gf2Error(f"matrix 'data' must be a list of {rows} rows")
        try:
            if obj.get("format") == "bits":
                return cls.from_rows(data, cols)
            return cls(rows, cols, tuple(int(h, 16) for h in data))
        except (TypeError, ValueError) as exc:
            raise Gf2Error(f"bad matrix row: {exc}") from exc


def rank(m: Gf2Matrix) -> int:
    return m.rank()


def kernel_basis(m: Gf2Matrix) -> Gf2Matrix:
    return m.kernel_basis()


def row_space_contains(m: Gf2Matrix, v: BitString) -> bool:
    return m.row_space_contains(v)


def mutually_orth(m1: Gf2Matrix, m2: Gf2Matrix) -> bool:
    """True iff every row of ``m1`` has even overlap with every row of ``m2``."""
    _check_len(m1.cols, m2.cols, "column count")
    for a in m1.data:
        for b in m2.data:
            if (a & b).bit_count() & 1:
                return False
    return True


def flatten(m: Gf2Matrix) -> BitString:
    return m.flatten()
