"""CNF encodings of distance and independence queries.

Two encodings of "an undetectable error of weight at most ``w`` exists" are
provided: one Boolean per error bit, and one where the variables hold the
(sorted) positions of the nonzero bits.
"""
from __future__ import annotations

import io
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .gf2 import BitString, Gf2Error, Gf2Matrix

#: support size at or below which a constant-row lookup ``s[L]`` enumerates the support
LOOKUP_ENUM_THRESHOLD = 16


class DimacsError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass
class Cnf:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        for c in self.clauses:
            _check_clause(c, self.num_vars)

    def add(self, clause: Sequence[int]) -> None:
        clause = list(clause)
        _check_clause(clause, self.num_vars)
        self.clauses.append(clause)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cnf) and self.num_vars == other.num_vars and self.clauses == other.clauses


def _check_clause(clause: Sequence[int], num_vars: int) -> None:
    if not clause:
        raise ValueError("empty clause")
    seen = set()
    for lit in clause:
        if lit == 0 or abs(lit) > num_vars:
            raise ValueError(f"literal {lit} out of range 1..{num_vars}")
        if -lit in seen:
            raise ValueError(f"clause {list(clause)} contains {abs(lit)} in both polarities")
        seen.add(lit)


class VarMap:
    """Allocates variables and remembers the role of each one."""

    def __init__(self):
        self.roles: dict[str, int] = {}
        self.num_vars = 0
        self.trivially_unsat = False
        self._aux = 0

    def new(self, role: str | None = None) -> int:
        self.num_vars += 1
        if role is None:
            role = f"aux[{self._aux}]"
            self._aux += 1
        if role in self.roles:
            raise ValueError(f"role {role!r} allocated twice")
        self.roles[role] = self.num_vars
        return self.num_vars

    def __getitem__(self, role: str) -> int:
        return self.roles[role]

    def __contains__(self, role: str) -> bool:
        return role in self.roles

    def to_json(self) -> dict[str, int]:
        return dict(self.roles)

    @classmethod
    def from_json(cls, obj: dict[str, int]) -> VarMap:
        vm = cls()
        vm.roles = {str(k): int(v) for k, v in obj.items()}
        vm.num_vars = max(vm.roles.values(), default=0)
        vm._aux = sum(1 for k in vm.roles if k.startswith("aux["))
        return vm


@dataclass(frozen=True)
class DistanceQuery:
    """Is there ``E`` with ``stab_rows E = 0``, ``g . E = 1`` for some ``g`` in ``excl_gens``, ``wt(E) <= w``?"""

    n: int
    stab_rows: Gf2Matrix
    excl_gens: Gf2Matrix
    weight_bound: int

    def __post_init__(self):
        if self.stab_rows.cols != self.n or self.excl_gens.cols != self.n:
            raise Gf2Error("query matrices must have n columns")
        if self.weight_bound < 1:
            raise ValueError("weight bound must be at least 1")

    def accepts(self, e: BitString) -> bool:
        """Direct check of the query predicate on a candidate error."""
        if e.len != self.n or not 1 <= e.weight() <= self.weight_bound:
            return False
        if any((r & e.bits).bit_count() & 1 for r in self.stab_rows.data):
            return False
        return any((g & e.bits).bit_count() & 1 for g in self.excl_gens.data)


# gadgets ---------------------------------------------------------------------


def _direct_xor(vars_: Sequence[int], parity: int) -> list[list[int]]:
    clauses = []
    for signs in itertools.product((0, 1), repeat=len(vars_)):
        if sum(signs) & 1 != parity:
            clauses.append([-v if s else v for v, s in zip(vars_, signs)])
    return clauses


def xor_clauses(lits: Iterable[int], parity: int, alloc: VarMap) -> list[list[int]]:
    """Clauses for ``XOR(lits) = parity`` using chained 3-input gadgets."""
    parity &= 1
    odd: dict[int, int] = {}
    for lit in lits:
        if lit < 0:
            parity ^= 1
        v = abs(lit)
        odd[v] = odd.get(v, 0) ^ 1
    vars_ = [v for v, o in odd.items() if o]
    if not vars_:
        if parity == 0:
            return []
        a = alloc.new()
        return [[a], [-a]]
    clauses = []
    while len(vars_) > 3:
        t = alloc.new()
        clauses.extend(_direct_xor(vars_[:3] + [t], 0))
        vars_ = [t] + vars_[3:]
    clauses.extend(_direct_xor(vars_, parity))
    return clauses


def at_most_k(lits: Sequence[int], k: int, alloc: VarMap) -> list[list[int]]:
    """Sequential-counter encoding of ``sum(lits) <= k``."""
    n = len(lits)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= n:
        return []
    if k == 0:
        return [[-x] for x in lits]
    s = [[alloc.new() for _ in range(k)] for _ in range(n - 1)]
    clauses = [[-lits[0], s[0][0]]]
    clauses.extend([-s[0][j]] for j in range(1, k))
    for i in range(1, n - 1):
        x = lits[i]
        clauses.append([-x, s[i][0]])
        clauses.append([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            clauses.append([-x, -s[i - 1][j - 1], s[i][j]])
            clauses.append([-s[i - 1][j], s[i][j]])
        clauses.append([-x, -s[i - 1][k - 1]])
    clauses.append([-lits[n - 1], -s[n - 2][k - 1]])
    return clauses


def _trivially_unsat(vm: VarMap) -> Cnf:
    vm.trivially_unsat = True
    a = vm.new("contradiction")
    return Cnf(vm.num_vars, [[a], [-a]])


def _support(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


# per-bit encoding ------------------------------------------------------------


def encode_perbit(q: DistanceQuery) -> tuple[Cnf, VarMap]:
    vm = VarMap()
    e = [vm.new(f"E[{j}]") for j in range(q.n)]
    gens = [g for g in q.excl_gens.data if g]
    if not gens:
        return _trivially_unsat(vm), vm
    ts = [vm.new(f"t[{i}]") for i in range(len(gens))]
    clauses: list[list[int]] = []
    for s in q.stab_rows.data:
        if s:
            clauses.extend(xor_clauses([e[j] for j in _support(s)], 0, vm))
    for t, g in zip(ts, gens):
        clauses.extend(xor_clauses([e[j] for j in _support(g)] + [t], 0, vm))
    clauses.append(list(ts))
    clauses.extend(at_most_k(e, q.weight_bound, vm))
    return Cnf(vm.num_vars, clauses), vm


# location encoding -----------------------------------------------------------


def location_width(n: int) -> int:
    """Bits per location slot: ceil(log2 n), at least 1."""
    return max(1, (n - 1).bit_length())


class _Builder:
    """Gate construction with constant folding; literals are ints, constants are bools."""

    def __init__(self, vm: VarMap):
        self.vm = vm
        self.clauses: list[list[int]] = []
        self._and_cache: dict[tuple, object] = {}
        self._mux_cache: dict[tuple, object] = {}

    def and2(self, a, b):
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        if a == b:
            return a
        if a == -b:
            return False
        key = (min(a, b), max(a, b))
        hit = self._and_cache.get(key)
        if hit is not None:
            return hit
        g = self.vm.new()
        self.clauses += [[-g, a], [-g, b], [g, -a, -b]]
        self._and_cache[key] = g
        return g

    def or_(self, lits: list):
        if any(x is True for x in lits):
            return True
        lits = [x for x in lits if x is not False]
        if not lits:
            return False
        if len(lits) == 1:
            return lits[0]
        g = self.vm.new()
        self.clauses.append([-g] + lits)
        self.clauses.extend([g, -x] for x in lits)
        return g

    def mux(self, sel: int, hi, lo):
        """``sel ? hi : lo``."""
        hi_const, lo_const = isinstance(hi, bool), isinstance(lo, bool)
        if hi_const and lo_const:
            if hi == lo:
                return hi
            return sel if hi else -sel
        if not hi_const and not lo_const and hi == lo:
            return hi
        if lo is False:
            return self.and2(sel, hi)
        if hi is False:
            return self.and2(-sel, lo)
        if lo is True:
            return -self.and2(sel, -hi)
        if hi is True:
            return -self.and2(-sel, -lo)
        key = (sel, hi, lo)
        hit = self._mux_cache.get(key)
        if hit is not None:
            return hit
        m = self.vm.new()
        self.clauses += [
            [-sel, -hi, m], [-sel, hi, -m],
            [sel, -lo, m], [sel, lo, -m],
        ]
        self._mux_cache[key] = m
        return m


def encode_location(q: DistanceQuery, *, lookup_threshold: int = LOOKUP_ENUM_THRESHOLD,
                    symmetry_breaking: bool = True) -> tuple[Cnf, VarMap]:
    """Location-indexed encoding with sorted slots and first-occurrence flags."""
    n, w = q.n, q.weight_bound
    if n < 1:
        raise ValueError("location encoding needs n >= 1")
    vm = VarMap()
    b = location_width(n)
    slots = [[vm.new(f"L[{i}].b[{k}]") for k in range(b)] for i in range(w)]
    flags: list = [True] + [vm.new(f"f[{i}]") for i in range(1, w)]
    gens = [g for g in q.excl_gens.data if g]
    if not gens:
        return _trivially_unsat(vm), vm
    ts = [vm.new(f"t[{i}]") for i in range(len(gens))]
    bld = _Builder(vm)
    cl = bld.clauses

    # range: every slot holds a location below n
    top = n - 1
    if top < (1 << b) - 1:
        for L in slots:
            for k in range(b):
                if not (top >> k) & 1:
                    cl.append([-L[k]] + [-L[j] for j in range(k + 1, b) if (top >> j) & 1])

    # diff[i][k] <-> bit k of slot i differs from bit k of slot i-1
    for i in range(1, w):
        diff = []
        for k in range(b):
            d = vm.new()
            cl.extend(_direct_xor([slots[i][k], slots[i - 1][k], d], 0))
            diff.append(d)
        f = flags[i]
        cl.append([-f] + diff)
        cl.extend([f, -d] for d in diff)
        if symmetry_breaking:
            # slot i-1 <= slot i: a 1->0 step at bit k needs a difference above k
            A, B = slots[i - 1], slots[i]
            for k in range(b):
                cl.append([-A[k], B[k]] + diff[k + 1:])

    indicator: dict[tuple[int, int], int] = {}

    def at(i: int, j: int) -> int:
        key = (i, j)
        m = indicator.get(key)
        if m is None:
            L = slots[i]
            bits = [L[k] if (j >> k) & 1 else -L[k] for k in range(b)]
            m = vm.new()
            cl.extend([-m, x] for x in bits)
            cl.append([m] + [-x for x in bits])
            indicator[key] = m
        return m

    lookup_cache: dict[tuple[int, int], object] = {}

    def lookup(i: int, row: int):
        key = (i, row)
        hit = lookup_cache.get(key)
        if hit is not None:
            return hit
        supp = _support(row)
        if len(supp) <= lookup_threshold:
            val = bld.or_([at(i, j) for j in supp])
        else:
            level = [bool((row >> j) & 1) for j in range(1 << b)]
            for k in range(b):
                level = [bld.mux(slots[i][k], level[2 * t + 1], level[2 * t]) for t in range(len(level) // 2)]
            val = level[0]
        lookup_cache[key] = val
        return val

    def contributions(row: int) -> tuple[list[int], int]:
        lits, parity = [], 0
        for i in range(w):
            c = bld.and2(flags[i], lookup(i, row))
            if c is True:
                parity ^= 1
            elif c is not False:
                lits.append(c)
        return lits, parity

    for s in q.stab_rows.data:
        if s:
            lits, parity = contributions(s)
            cl.extend(xor_clauses(lits, parity, vm))
    for t, g in zip(ts, gens):
        lits, parity = contributions(g)
        cl.extend(xor_clauses(lits + [t], parity, vm))
    cl.append(list(ts))
    return Cnf(vm.num_vars, cl), vm


def independent_var_count(vm: VarMap) -> int:
    """Number of error or location variables (everything else is functionally derived)."""
    return sum(1 for r in vm.roles if r.startswith("E[") or r.startswith("L["))


# independence ----------------------------------------------------------------


def encode_independence(m: Gf2Matrix) -> Cnf:
    """SAT iff some nonempty subset of rows sums to zero."""
    if m.rows < 1:
        raise ValueError("independence query needs at least one row")
    vm = VarMap()
    c = [vm.new(f"c[{i}]") for i in range(m.rows)]
    clauses: list[list[int]] = []
    cols = m.transpose()
    for col in cols.data:
        if col:
            clauses.extend(xor_clauses([c[i] for i in _support(col)], 0, vm))
    clauses.append(list(c))
    return Cnf(vm.num_vars, clauses)


# DIMACS ----------------------------------------------------------------------


def write_dimacs(cnf: Cnf) -> bytes:
    out = io.StringIO()
    out.write(f"p cnf {cnf.num_vars} {len(cnf.clauses)}\n")
    for c in cnf.clauses:
        out.write(" ".join(map(str, c)))
        out.write(" 0\n")
    return out.getvalue().encode()


def parse_dimacs(data: bytes | str) -> Cnf:
    text = data.decode() if isinstance(data, (bytes, bytearray)) else data
    num_vars = num_clauses = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("c"):
            continue
        if s.startswith("p"):
            parts = s.split()
            if num_vars is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {s!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {s!r}", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError("negative counts in header", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause before header", lineno)
        for tok in s.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad token {tok!r}", lineno) from None
            if lit == 0:
                if not cur:
                    raise DimacsError("empty clause", lineno)
                clauses.append(cur)
                cur = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(f"literal {lit} out of range", lineno)
                cur.append(lit)
    if num_vars is None:
        raise DimacsError("missing header")
    if cur:
        raise DimacsError("last clause not terminated by 0", lineno)
    if len(clauses) != num_clauses:
        raise DimacsError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    try:
        return Cnf(num_vars, clauses)
    except ValueError as exc:
        raise DimacsError(str(exc)) from None


def write_varmap(vm: VarMap) -> bytes:
    return (json.dumps(vm.to_json(), indent=0, sort_keys=False) + "\n").encode()
