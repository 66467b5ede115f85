"""Stabilizer codes in binary symplectic form, CSS and bivariate bicycle constructions."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .encode import DistanceQuery
from .gf2 import BitString, Gf2Error, Gf2Matrix, mutually_orth
from .pauli import BinSympPauli, PauliOp, from_binsymp, symplectic_prod


class InvalidCodeError(ValueError):
    """A code violates a structural requirement (e.g. non-orthogonal checks)."""


@dataclass(frozen=True)
class BinSympMatrix:
    """Stacked ``(x | z)`` rows of a stabilizer generating set."""

    X: Gf2Matrix
    Z: Gf2Matrix

    def __post_init__(self):
        if (self.X.rows, self.X.cols) != (self.Z.rows, self.Z.cols):
            raise Gf2Error("X and Z blocks must have the same shape")

    @property
    def n(self) -> int:
        return self.X.cols

    @property
    def k(self) -> int:
        return self.X.rows

    def row(self, i: int) -> BinSympPauli:
        return BinSympPauli(self.X.row(i), self.Z.row(i))

    def rows(self) -> list[BinSympPauli]:
        return [self.row(i) for i in range(self.k)]

    def packed(self) -> Gf2Matrix:
        """Rows as ``2n``-bit vectors with ``x`` low and ``z`` high."""
        return self.X.hstack(self.Z)

    def row_space_contains(self, e: BinSympPauli) -> bool:
        if e.n != self.n:
            raise Gf2Error(f"error length {e.n} != code length {self.n}")
        return self.packed().row_space_contains(BitString(2 * self.n, e.packed()))

    def stabilizer_ops(self) -> list[PauliOp]:
        return [from_binsymp(r) for r in self.rows()]


def is_commuting(b: BinSympMatrix) -> bool:
    rows = b.rows()
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if symplectic_prod(rows[i], rows[j]):
                return False
    return True


def css_bsm(hx: Gf2Matrix, hz: Gf2Matrix) -> BinSympMatrix:
    """Z-type rows (from ``hz``) first, then X-type rows (from ``hx``)."""
    if hx.cols != hz.cols:
        raise Gf2Error(f"column mismatch: hx has {hx.cols}, hz has {hz.cols}")
    n = hx.cols
    X = Gf2Matrix.zeros(hz.rows, n).vstack(hx)
    Z = hz.vstack(Gf2Matrix.zeros(hx.rows, n))
    return BinSympMatrix(X, Z)


def undetectable(b: BinSympMatrix, e: BinSympPauli) -> bool:
    """Commutes with every row but lies outside the row space."""
    if e.n != b.n:
        raise Gf2Error(f"error length {e.n} != code length {b.n}")
    if any(symplectic_prod(r, e) for r in b.rows()):
        return False
    return not b.row_space_contains(e)


# CSS codes -------------------------------------------------------------------


@dataclass
class CssCode:
    name: str
    hx: Gf2Matrix
    hz: Gf2Matrix
    ker_hx: Gf2Matrix | None = None
    ker_hz: Gf2Matrix | None = None
    claimed: tuple[int, int] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.hx.cols != self.hz.cols:
            raise InvalidCodeError(f"hx has {self.hx.cols} columns, hz has {self.hz.cols}")
        for ker in (self.ker_hx, self.ker_hz):
            if ker is not None and ker.cols != self.n:
                raise InvalidCodeError("kernel basis has the wrong number of columns")

    @property
    def n(self) -> int:
        return self.hx.cols

    def to_bsm(self) -> BinSympMatrix:
        return css_bsm(self.hx, self.hz)

    def kernel(self, which: str) -> Gf2Matrix:
        """Supplied kernel basis of ``hx``/``hz`` if present, else the canonical one."""
        if which == "hx":
            return self.ker_hx if self.ker_hx is not None else self.hx.kernel_basis()
        if which == "hz":
            return self.ker_hz if self.ker_hz is not None else self.hz.kernel_basis()
        raise ValueError(which)

    def sector_query(self, sector: str, w: int) -> DistanceQuery:
        """X-sector: X errors checked by ``hz``, excluded from ``rowspace(hx)`` via ``ker(hx)``; Z symmetric."""
        if sector == "x":
            return DistanceQuery(self.n, self.hz, self.kernel("hx"), w)
        if sector == "z":
            return DistanceQuery(self.n, self.hx, self.kernel("hz"), w)
        raise ValueError(f"sector must be 'x' or 'z', not {sector!r}")

    def to_json(self, readable: bool = False) -> dict:
        obj = {"name": self.name, "n": self.n,
               "hx": self.hx.to_json(readable), "hz": self.hz.to_json(readable)}
        if self.ker_hx is not None:
            obj["ker_hx"] = self.ker_hx.to_json(readable)
        if self.ker_hz is not None:
            obj["ker_hz"] = self.ker_hz.to_json(readable)
        if self.claimed is not None:
            obj["claimed"] = {"k": self.claimed[0], "d": self.claimed[1]}
        obj.update(self.meta)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> CssCode:
        try:
            hx = Gf2Matrix.from_json(obj["hx"])
            hz = Gf2Matrix.from_json(obj["hz"])
            ker_hx = Gf2Matrix.from_json(obj["ker_hx"]) if obj.get("ker_hx") else None
            ker_hz = Gf2Matrix.from_json(obj["ker_hz"]) if obj.get("ker_hz") else None
            claimed = obj.get("claimed")
            claimed = (int(claimed["k"]), int(claimed["d"])) if claimed else None
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidCodeError(f"malformed code file: {exc}") from exc
        code = cls(str(obj.get("name", "code")), hx, hz, ker_hx, ker_hz, claimed)
        if "n" in obj and int(obj["n"]) != code.n:
            raise InvalidCodeError(f"declared n={obj['n']} but matrices have {code.n} columns")
        return code


def compute_k(c: CssCode) -> int:
    if not mutually_orth(c.hx, c.hz):
        raise InvalidCodeError(f"{c.name}: hx and hz rows are not mutually orthogonal")
    return c.n - c.hx.rank() - c.hz.rank()


# bivariate bicycle codes -----------------------------------------------------


@dataclass(frozen=True)
class BbSpec:
    l: int
    m: int
    a: tuple[tuple[int, int], ...]
    b: tuple[tuple[int, int], ...]
    name: str | None = None
    claimed: tuple[int, int] | None = None

    def __post_init__(self):
        if self.l < 1 or self.m < 1:
            raise InvalidCodeError("l and m must be positive")
        if len(self.a) != 3 or len(self.b) != 3:
            raise InvalidCodeError("A and B each need exactly three monomials")
        object.__setattr__(self, "a", tuple((int(i) % self.l, int(j) % self.m) for i, j in self.a))
        object.__setattr__(self, "b", tuple((int(i) % self.l, int(j) % self.m) for i, j in self.b))

    def to_json(self) -> dict:
        obj = {"l": self.l, "m": self.m, "a": [list(p) for p in self.a], "b": [list(p) for p in self.b]}
        if self.name:
            obj["name"] = self.name
        if self.claimed:
            obj["claimed"] = {"k": self.claimed[0], "d": self.claimed[1]}
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> BbSpec:
        try:
            claimed = obj.get("claimed")
            return cls(
                int(obj["l"]), int(obj["m"]),
                tuple(tuple(p) for p in obj["a"]), tuple(tuple(p) for p in obj["b"]),
                obj.get("name"),
                (int(claimed["k"]), int(claimed["d"])) if claimed else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidCodeError(f"malformed BB spec: {exc}") from exc


def _polynomial_matrix(l: int, m: int, monomials) -> Gf2Matrix:
    """Sum over GF(2) of ``x^i y^j`` with ``x = S_l (x) I_m`` and ``y = I_l (x) S_m``."""
    size = l * m
    rows = [0] * size
    for i, j in monomials:
        for r in range(size):
            ri, rj = divmod(r, m)
            rows[r] ^= 1 << (((ri + i) % l) * m + (rj + j) % m)
    return Gf2Matrix(size, size, tuple(rows))


def bb_build(spec: BbSpec) -> CssCode:
    A = _polynomial_matrix(spec.l, spec.m, spec.a)
    B = _polynomial_matrix(spec.l, spec.m, spec.b)
    hx = A.hstack(B)
    hz = B.transpose().hstack(A.transpose())
    name = spec.name or f"bb_l{spec.l}_m{spec.m}"
    return CssCode(name, hx, hz, claimed=spec.claimed, meta={"bb": spec.to_json()})


_MONO_RE = re.compile(r"^(?:1|(?:x(?:\^?(\d+))?)?\*?(?:y(?:\^?(\d+))?)?)$")


def parse_monomials(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``"x3,y1,y2"`` / ``"1,x^2,x7"`` / ``"x2y1"`` into exponent pairs."""
    out = []
    for term in text.replace(" ", "").split(","):
        if not term:
            raise InvalidCodeError(f"empty monomial in {text!r}")
        mo = _MONO_RE.match(term)
        if not mo or (term != "1" and "x" not in term and "y" not in term):
            raise InvalidCodeError(f"malformed monomial {term!r}")
        i = 0 if "x" not in term else int(mo.group(1) or 1)
        j = 0 if "y" not in term else int(mo.group(2) or 1)
        out.append((i, j))
    return tuple(out)


# kernel certification --------------------------------------------------------


@dataclass(frozen=True)
class KernelCertificate:
    matrix_rank_bound: int
    kernel_rank_bound: int
    certified: bool
    reasons: tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        return "certified" if self.certified else "rejected(" + "; ".join(self.reasons) + ")"


def certify_kernel(m1: Gf2Matrix, m2: Gf2Matrix, r1: int, r2: int) -> KernelCertificate:
    """Rank-sum plus mutual orthogonality: if all hold, ``rowspace(m2) = ker(m1)``."""
    if m1.cols != m2.cols:
        raise Gf2Error(f"column mismatch: {m1.cols} != {m2.cols}")
    n = m1.cols
    reasons = []
    if r1 + r2 != n:
        reasons.append(f"rank-sum: {r1} + {r2} != {n}")
    if m1.rank() < r1:
        reasons.append(f"rank: rank(M1) < {r1}")
    if m2.rank() < r2:
        reasons.append(f"rank: rank(M2) < {r2}")
    if not mutually_orth(m1, m2):
        reasons.append("orthogonality: some row pair has odd overlap")
    return KernelCertificate(r1, r2, not reasons, tuple(reasons))


def independent_row_subset(m: Gf2Matrix, r: int) -> list[int] | None:
    """``r`` row indices of linearly independent rows, or ``None`` if ``rank(m) < r``."""
    if r < 0 or r > m.rows:
        raise ValueError(f"r={r} outside 0..{m.rows}")
    picked = m.independent_rows(limit=r)
    return picked if len(picked) == r else None


# file I/O --------------------------------------------------------------------

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def load_code(source: str | Path) -> CssCode:
    """Load a CSS code JSON or a BB spec JSON; bare names resolve to bundled fixtures."""
    path = Path(source)
    if not path.exists():
        candidate = FIXTURE_DIR / f"{source}.json"
        if candidate.exists():
            path = candidate
    try:
        obj = json.loads(path.read_text())
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise InvalidCodeError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise InvalidCodeError(f"{path}: expected a JSON object")
    if "l" in obj and "m" in obj:
        return bb_build(BbSpec.from_json(obj))
    return CssCode.from_json(obj)
