"""SAT backends: an in-process CDCL solver and an external DIMACS solver process.

The in-process core is compiled from ``_cdcl_ext.pyx`` when available; set
``QDISTCERT_PURE=1`` to force the pure-Python implementation.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Literal

from ..encode import Cnf, DistanceQuery, VarMap
from ..gf2 import BitString
from . import _cdcl_py

if os.environ.get("QDISTCERT_PURE") == "1":
    _core = _cdcl_py
else:
    try:
        from . import _cdcl_ext as _core  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _core = _cdcl_py

CORE_NAME = "compiled" if _core is not _cdcl_py else "python"
SOLVER_ENV = "QDISTCERT_SOLVER"


class InternalSoundnessError(RuntimeError):
    """A solver or encoder produced an answer that fails its independent re-check."""


@dataclass
class SolverConfig:
    backend: Literal["internal", "external"] = "internal"
    path: str | None = None
    args: list[str] = field(default_factory=list)
    timeout: float = 0.0
    produce_proof: bool = False
    seed: int = 0

    def resolved_path(self) -> str | None:
        return os.environ.get(SOLVER_ENV) or self.path


@dataclass
class SolveOutcome:
    status: Literal["sat", "unsat", "unknown"]
    model: list[bool] | None = None
    proof: bytes | None = None
    reason: str | None = None
    stats: dict = field(default_factory=dict)

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"

    @property
    def is_unsat(self) -> bool:
        return self.status == "unsat"


def core_module(pure: bool = False):
    return _cdcl_py if pure else _core


def solve(c: Cnf, cfg: SolverConfig | None = None, *, pure: bool = False) -> SolveOutcome:
    """Solve ``c``; any SAT model is re-checked against every clause before it is returned."""
    cfg = cfg or SolverConfig()
    if cfg.backend == "external":
        from .external import solve_external
        out = solve_external(c, cfg)
    elif cfg.backend == "internal":
        out = _solve_internal(c, cfg, core_module(pure))
    else:
        raise ValueError(f"unknown backend {cfg.backend!r}")
    if out.is_sat and not verify_model(c, out.model):
        raise InternalSoundnessError("solver returned a model that violates the CNF")
    return out


def _solve_internal(c: Cnf, cfg: SolverConfig, core) -> SolveOutcome:
    s = core.CdclCore(c.num_vars, c.clauses, cfg.produce_proof, cfg.seed)
    res = s.solve(cfg.timeout)
    stats = s.stats()
    if res == _cdcl_py.SAT:
        return SolveOutcome("sat", model=s.model(), stats=stats)
    if res == _cdcl_py.UNSAT:
        proof = s.proof_text().encode() if cfg.produce_proof else None
        return SolveOutcome("unsat", proof=proof, stats=stats)
    return SolveOutcome("unknown", reason="timeout", stats=stats)


def verify_model(c: Cnf, model) -> bool:
    """True iff ``model`` (index ``v - 1`` for variable ``v``) satisfies every clause."""
    if model is None or len(model) < c.num_vars:
        raise ValueError(f"model covers {0 if model is None else len(model)} of {c.num_vars} variables")
    for clause in c.clauses:
        for lit in clause:
            if bool(model[abs(lit) - 1]) == (lit > 0):
                break
        else:
            return False
    return True


_SLOT_RE = re.compile(r"^L\[(\d+)\]\.b\[(\d+)\]$")
_FLAG_RE = re.compile(r"^f\[(\d+)\]$")
_EBIT_RE = re.compile(r"^E\[(\d+)\]$")


def decode_witness(model, vm: VarMap, q: DistanceQuery) -> BitString:
    """Rebuild the error vector from a model and re-check it against ``q`` directly."""
    def val(v: int) -> bool:
        return bool(model[v - 1])

    bits = 0
    slots: dict[int, int] = {}
    flags: dict[int, bool] = {}
    per_bit = False
    for role, v in vm.roles.items():
        if m := _EBIT_RE.match(role):
            per_bit = True
            if val(v):
                bits |= 1 << int(m.group(1))
        elif m := _SLOT_RE.match(role):
            i, k = int(m.group(1)), int(m.group(2))
            slots[i] = slots.get(i, 0) | (int(val(v)) << k)
        elif m := _FLAG_RE.match(role):
            flags[int(m.group(1))] = val(v)
    if not per_bit:
        for i in sorted(slots):
            if i == 0 or flags.get(i, False):
                if slots[i] >= q.n:
                    raise InternalSoundnessError(f"slot {i} points at location {slots[i]} >= n={q.n}")
                bits ^= 1 << slots[i]
    e = BitString(q.n, bits)
    if not q.accepts(e):
        raise InternalSoundnessError(f"decoded witness {e} fails the direct query check")
    return e
