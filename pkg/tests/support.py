"""Helpers shared by the test modules: random instances and independent ground truth."""
from __future__ import annotations

import functools
import itertools
import os
import random

from qdistcert.code import CssCode
from qdistcert.encode import Cnf, DistanceQuery, VarMap, encode_location, encode_perbit
from qdistcert.gf2 import BitString, Gf2Matrix
from qdistcert.solver import SolverConfig, decode_witness
from qdistcert.solver.external import find_solver


def random_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.5) -> Gf2Matrix:
    data = []
    for _ in range(rows):
        v = 0
        for j in range(cols):
            if rng.random() < density:
                v |= 1 << j
        data.append(v)
    return Gf2Matrix(rows, cols, tuple(data))


def random_css(rng: random.Random, n: int, name: str = "random") -> CssCode:
    """hx random, hz drawn from combinations of ker(hx), so the pair is always orthogonal."""
    rx = rng.randint(0, max(0, n // 2))
    hx = random_matrix(rng, rx, n, rng.choice([0.3, 0.5]))
    ker = hx.kernel_basis()
    rz = rng.randint(0, max(0, ker.rows - 1))
    rows = []
    for _ in range(rz):
        v = 0
        for r in ker.data:
            if rng.random() < 0.5:
                v ^= r
        rows.append(v)
    hz = Gf2Matrix(rz, n, tuple(rows))
    return CssCode(name, hx, hz)


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, max_len: int = 3,
               min_len: int = 1) -> Cnf:
    clauses = []
    for _ in range(num_clauses):
        k = rng.randint(min(min_len, num_vars), min(max_len, num_vars))
        vs = rng.sample(range(1, num_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Cnf(num_vars, clauses)


def _alive(num_vars: int, clauses) -> int:
    """Bit ``a`` is set iff assignment ``a`` (bit ``v - 1`` of ``a`` = variable ``v``) satisfies all clauses."""
    size = 1 << num_vars
    full = (1 << size) - 1
    var_mask = []
    for v in range(num_vars):
        half = 1 << v
        block = ((1 << half) - 1) << half
        repunit = full // ((1 << (2 * half)) - 1)
        var_mask.append(block * repunit)
    alive = full
    for clause in clauses:
        acc = 0
        for lit in clause:
            m = var_mask[abs(lit) - 1]
            acc |= m if lit > 0 else full ^ m
        alive &= acc
        if not alive:
            break
    return alive


def truth_table_sat(num_vars: int, clauses) -> bool:
    """Exhaustive satisfiability via bit-parallel evaluation over all 2^n assignments."""
    return bool(_alive(num_vars, clauses))


def projected_models(num_vars: int, clauses, proj: list[int]) -> set[tuple[int, ...]]:
    """Exhaustive set of satisfying assignments restricted to the variables in ``proj``."""
    table = bin(_alive(num_vars, clauses))[:1:-1]
    out = set()
    a = table.find("1")
    while a >= 0:
        out.add(tuple((a >> (v - 1)) & 1 for v in proj))
        a = table.find("1", a + 1)
    return out


def brute_sector_models(stab: Gf2Matrix, excl: Gf2Matrix, n: int, w: int) -> set[int]:
    """All E with 1 <= wt(E) <= w, stab E = 0 and some excl row with odd overlap."""
    out = set()
    for k in range(1, w + 1):
        for supp in itertools.combinations(range(n), k):
            e = sum(1 << j for j in supp)
            if any((r & e).bit_count() & 1 for r in stab.data):
                continue
            if any((g & e).bit_count() & 1 for g in excl.data):
                out.add(e)
    return out


def bits(s: str) -> BitString:
    return BitString.from_str(s)


def matrix(*rows: str) -> Gf2Matrix:
    return Gf2Matrix.from_bitstrings([bits(r) for r in rows], len(rows[0]) if rows else 0)


def external_solver() -> str | None:
    return find_solver(SolverConfig(backend="external"))


def extended_enabled() -> bool:
    return os.environ.get("QDISTCERT_EXTENDED", "1") != "0"


def enumerate_projected(cnf: Cnf, block_vars: list[int], decode) -> set:
    """All decoded models, found by solving repeatedly with blocking clauses on ``block_vars``."""
    from qdistcert.solver import solve

    clauses = [list(c) for c in cnf.clauses]
    out = set()
    while True:
        res = solve(Cnf(cnf.num_vars, clauses))
        if not res.is_sat:
            return out
        out.add(decode(res.model))
        clauses.append([-v if res.model[v - 1] else v for v in block_vars])


def mutate_proof(rng: random.Random, proof, num_vars: int, kind: str | None = None):
    """One single-token mutant of an LRAT proof: an addition's id, a literal or a hint is changed.

    Deletion lines are left alone: dropping a deletion only keeps more clauses
    alive, so it cannot turn a valid refutation into an invalid one.
    """
    from dataclasses import replace

    from qdistcert.cert import Add, LratProof

    adds = [i for i, ln in enumerate(proof.lines) if isinstance(ln, Add)]
    i = rng.choice(adds)
    ln = proof.lines[i]
    kinds = [k for k in ("id", "lit", "hint") if (k != "lit" or ln.clause) and (k != "hint" or ln.hints)]
    kind = kind if kind in kinds else rng.choice(kinds)
    if kind == "id":
        delta = rng.choice([-1, 1, 2, rng.randint(-50, 50) or 3])
        new = replace(ln, id=ln.id + delta)
    elif kind == "lit":
        j = rng.randrange(len(ln.clause))
        v = rng.randint(1, num_vars) * rng.choice([1, -1])
        if v == ln.clause[j]:
            v = -v
        cl = list(ln.clause)
        cl[j] = v
        new = replace(ln, clause=tuple(cl))
    else:
        j = rng.randrange(len(ln.hints))
        h = rng.randint(1, ln.id - 1)
        if h == ln.hints[j]:
            h = h - 1 or h + 1
        hs = list(ln.hints)
        hs[j] = h
        new = replace(ln, hints=tuple(hs))
    lines = list(proof.lines)
    lines[i] = new
    return kind, LratProof(lines)


def sector_proof(name: str, sector: str, w: int, backend: str = "internal"):
    """(cnf, proof bytes) for an UNSAT per-bit sector query, memoised per process."""
    return _sector_proof(name, sector, w, backend)


@functools.cache
def _sector_proof(name, sector, w, backend):
    from qdistcert.code import load_code
    from qdistcert.encode import encode_perbit
    from qdistcert.solver import solve

    cnf, _ = encode_perbit(load_code(name).sector_query(sector, w))
    out = solve(cnf, SolverConfig(backend=backend, produce_proof=True))
    assert out.is_unsat and out.proof is not None
    return cnf, out.proof


# encodings ---------------------------------------------------------------------


def e_vars(vm: VarMap, n: int) -> list[int]:
    return [vm[f"E[{j}]"] for j in range(n)]


def slot_vars(vm: VarMap) -> list[int]:
    return [v for r, v in vm.roles.items() if r.startswith("L[")]


def perbit_models(q: DistanceQuery) -> set[int]:
    cnf, vm = encode_perbit(q)
    ev = e_vars(vm, q.n)
    return enumerate_projected(cnf, ev, lambda m: sum(1 << j for j, v in enumerate(ev) if m[v - 1]))


def location_models(q: DistanceQuery, **kw) -> set[int]:
    cnf, vm = encode_location(q, **kw)
    return enumerate_projected(cnf, slot_vars(vm), lambda m: decode_witness(m, vm, q).bits)


def random_query(rng: random.Random, n: int, w: int) -> DistanceQuery:
    stab = random_matrix(rng, rng.randint(0, 3), n, rng.choice([0.2, 0.4, 0.6]))
    excl = random_matrix(rng, rng.randint(1, 3), n, rng.choice([0.3, 0.5, 0.8]))
    return DistanceQuery(n, stab, excl, w)


def random_css_low_rate(rng: random.Random, n: int, k: int, name: str = "random") -> CssCode:
    """CSS code with exactly ``k`` logical qubits: full-rank ``hx``, ``hz`` a random basis of a
    codimension-``k`` subspace of ker(hx).  Few logicals means larger, more varied distances."""
    while True:
        rx = rng.randint(1, max(1, (n - k) // 2 + 1))
        hx = random_matrix(rng, rx, n, rng.choice([0.4, 0.5, 0.6]))
        if hx.rank() != rx or n - rx - k < 0:
            continue
        ker = hx.kernel_basis()
        rz = n - rx - k
        hz = Gf2Matrix(0, n, ())
        while hz.rows < rz:
            v = 0
            for r in ker.data:
                if rng.random() < 0.5:
                    v ^= r
            grown = Gf2Matrix(hz.rows + 1, n, hz.data + (v,))
            if grown.rank() == grown.rows:
                hz = grown
        return CssCode(name, hx, hz)
