"""Run a DIMACS solver (CaDiCaL-compatible flags) as a subprocess."""
from __future__ import annotations

import shutil
import subprocess
import tempfile
import time
from pathlib import Path

from ..encode import Cnf, write_dimacs
from . import SolveOutcome, SolverConfig

DEFAULT_SOLVER = "cadical"


def find_solver(cfg: SolverConfig) -> str | None:
    path = cfg.resolved_path() or DEFAULT_SOLVER
    if Path(path).is_file():
        return path
    return shutil.which(path)


def parse_solver_output(text: str, num_vars: int) -> tuple[str | None, list[bool] | None]:
    status = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip()
            status = {"SATISFIABLE": "sat", "UNSATISFIABLE": "unsat", "UNKNOWN": "unknown"}.get(word)
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit:
                    values[abs(lit)] = lit > 0
    model = None
    if status == "sat":
        model = [values.get(v, False) for v in range(1, num_vars + 1)]
    return status, model


def solve_external(c: Cnf, cfg: SolverConfig) -> SolveOutcome:
    exe = find_solver(cfg)
    if exe is None:
        return SolveOutcome("unknown", reason=f"solver-error: executable {cfg.resolved_path() or DEFAULT_SOLVER!r} not found")
    with tempfile.TemporaryDirectory(prefix="qdistcert-") as tmp:
        cnf_path = Path(tmp) / "query.cnf"
        proof_path = Path(tmp) / "proof.lrat"
        cnf_path.write_bytes(write_dimacs(c))
        cmd = [exe, *cfg.args]
        if cfg.produce_proof:
            cmd += ["--lrat", "--no-binary", str(cnf_path), str(proof_path)]
        else:
            cmd += [str(cnf_path)]
        start = time.monotonic()
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True,
                                  timeout=cfg.timeout if cfg.timeout > 0 else None)
        except subprocess.TimeoutExpired:
            return SolveOutcome("unknown", reason="timeout")
        except OSError as exc:
            return SolveOutcome("unknown", reason=f"solver-error: {exc}")
        stats = {"wall": time.monotonic() - start, "exit": proc.returncode}
        try:
            status, model = parse_solver_output(proc.stdout, c.num_vars)
        except ValueError as exc:
            return SolveOutcome("unknown", reason=f"solver-error: unparseable output ({exc})", stats=stats)
        expected = {"sat": 10, "unsat": 20}.get(status or "")
        if status is None or status == "unknown" or proc.returncode != expected:
            detail = proc.stderr.strip().splitlines()[-1:] or [f"exit {proc.returncode}"]
            return SolveOutcome("unknown", reason=f"solver-error: {detail[0]}", stats=stats)
        if status == "sat":
            return SolveOutcome("sat", model=model, stats=stats)
        proof = proof_path.read_bytes() if cfg.produce_proof and proof_path.exists() else None
        return SolveOutcome("unsat", proof=proof, stats=stats)
