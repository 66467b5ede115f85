"""Brute-force distances used as ground truth for the SAT pipeline."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .code import BinSympMatrix, InvalidCodeError, is_commuting, undetectable
from .gf2 import BitString, Gf2Matrix, _echelon_insert, _reduce
from .pauli import BinSympPauli, PauliLetter, PauliOp, commutes, pauli_mul, pauli_weight

BSM_MAX_QUBITS = 12
SECTOR_MAX_QUBITS = 30
PAULI_LEVEL_MAX_QUBITS = 3


class OracleCapError(ValueError):
    """The instance is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class DistanceResult:
    value: int
    witness: BinSympPauli | BitString | None
    sentinel: bool = False


_LETTER_XZ = ((1, 0), (1, 1), (0, 1))  # X < Y < Z


def exact_distance_bsm(b: BinSympMatrix) -> DistanceResult:
    """Minimum Pauli weight over the undetectable set, or ``n + 1`` if it is empty."""
    n = b.n
    if n > BSM_MAX_QUBITS:
        raise OracleCapError(f"n={n} exceeds the {BSM_MAX_QUBITS}-qubit enumeration cap")
    if not is_commuting(b):
        raise InvalidCodeError("stabilizer rows do not commute")
    for w in range(1, n + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product(_LETTER_XZ, repeat=w):
                x = z = 0
                for q, (xb, zb) in zip(support, letters):
                    x |= xb << q
                    z |= zb << q
                e = BinSympPauli(BitString(n, x), BitString(n, z))
                if undetectable(b, e):
                    return DistanceResult(w, e)
    return DistanceResult(n + 1, None, sentinel=True)


def exact_sector_distance(stab: Gf2Matrix, excl_space: Gf2Matrix,
                          max_candidates: int = 50_000_000) -> DistanceResult:
    """Minimum weight of ``E`` with ``stab E = 0`` and ``E`` outside ``rowspace(excl_space)``."""
    n = stab.cols
    if excl_space.cols != n:
        raise ValueError("column mismatch")
    if n > SECTOR_MAX_QUBITS:
        raise OracleCapError(f"n={n} exceeds the {SECTOR_MAX_QUBITS}-bit enumeration cap")
    basis: dict[int, int] = {}
    for r in excl_space.data:
        _echelon_insert(basis, r)
    checks = [r for r in stab.data if r]
    budget = max_candidates
    for w in range(1, n + 1):
        for support in itertools.combinations(range(n), w):
            budget -= 1
            if budget < 0:
                raise OracleCapError(f"more than {max_candidates} candidates enumerated")
            e = 0
            for j in support:
                e |= 1 << j
            if any((r & e).bit_count() & 1 for r in checks):
                continue
            if _reduce(basis, e):
                return DistanceResult(w, BitString(n, e))
    return DistanceResult(n + 1, None, sentinel=True)


def _all_paulis(n: int):
    for letters in itertools.product(
            (PauliLetter.I, PauliLetter.X, PauliLetter.Y, PauliLetter.Z), repeat=n):
        yield PauliOp(0, letters)


def pauli_level_distance(b: BinSympMatrix) -> int:
    """Distance computed on symbolic phased Paulis: normalizer minus stabilizer group."""
    n = b.n
    if n > PAULI_LEVEL_MAX_QUBITS:
        raise OracleCapError(f"n={n} exceeds the {PAULI_LEVEL_MAX_QUBITS}-qubit cap")
    gens = b.stabilizer_ops()
    group = {PauliOp.identity(n)}
    frontier = list(group)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = pauli_mul(p, g)
                if q not in group:
                    group.add(q)
                    nxt.append(q)
        frontier = nxt
    stab_letters = {p.letters for p in group}
    best = n + 1
    for e in _all_paulis(n):
        if all(commutes(e, g) for g in gens) and e.letters not in stab_letters:
            best = min(best, pauli_weight(e))
    return best
