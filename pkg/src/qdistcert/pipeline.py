"""Encode, solve, check: the per-sector distance query pipeline behind the CLI."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cert import check_lrat_text
from .code import CssCode
from .encode import encode_location, encode_perbit, write_dimacs, write_varmap
from .solver import (CORE_NAME, InternalSoundnessError, SolveOutcome, SolverConfig, decode_witness, solve,
                     verify_model)

log = logging.getLogger(__name__)

PERBIT_MAX_N = 40
CACHE_ENV = "QDISTCERT_CACHE"


def default_encoding(n: int) -> str:
    return "perbit" if n <= PERBIT_MAX_N else "location"


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


@dataclass
class RunOptions:
    encoding: str = "auto"
    solver: SolverConfig = field(default_factory=SolverConfig)
    cert: bool = False
    jobs: int = 0
    cache_dir: Path | None = None
    artifacts_dir: Path | None = None
    timing: bool = True

    def encoding_for(self, n: int) -> str:
        return default_encoding(n) if self.encoding == "auto" else self.encoding

    def backend_label(self) -> str:
        if self.solver.backend == "internal":
            return f"internal-cdcl({CORE_NAME})"
        return f"external({self.solver.resolved_path() or 'cadical'})"


@dataclass
class SectorResult:
    sector: str
    weight_bound: int
    outcome: str                      # sat | unsat | unknown
    solver: str
    cnf_sha256: str
    wall_time: float = 0.0
    witness: str | None = None
    witness_weight: int | None = None
    certificate: str | None = None     # path on disk, if kept
    certificate_check: str = "not-requested"
    reason: str | None = None
    cached: bool = False

    @property
    def certified_unsat(self) -> bool:
        return self.outcome == "unsat" and self.certificate_check in ("accepted", "not-requested")

    def to_json(self, timing: bool = True) -> dict:
        obj = {
            "sector": self.sector,
            "weight_bound": self.weight_bound,
            "outcome": self.outcome,
            "solver": self.solver,
            "cnf_sha256": self.cnf_sha256,
            "certificate": self.certificate,
            "certificate_check": self.certificate_check,
            "witness": self.witness,
        }
        if self.witness_weight is not None:
            obj["witness_weight"] = self.witness_weight
        if self.reason:
            obj["reason"] = self.reason
        if timing:
            obj["wall_time"] = round(self.wall_time, 6)
            obj["cached"] = self.cached
        return obj


# cache -----------------------------------------------------------------------


class ResultCache:
    """Solver outcomes keyed by the SHA-256 of the CNF bytes.  Entries are never trusted:
    models are re-verified and proofs re-checked on every hit."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def _dir(self, digest: str) -> Path:
        return self.root / digest[:2] / digest

    def load(self, digest: str, want_proof: bool) -> SolveOutcome | None:
        d = self._dir(digest)
        try:
            meta = json.loads((d / "result.json").read_text())
        except (OSError, ValueError):
            return None
        status = meta.get("status")
        if status == "sat":
            bits = meta.get("model", "")
            return SolveOutcome("sat", model=[c == "1" for c in bits])
        if status == "unsat":
            proof = None
            if (d / "proof.lrat").exists():
                proof = (d / "proof.lrat").read_bytes()
            if want_proof and proof is None:
                return None
            return SolveOutcome("unsat", proof=proof)
        return None

    def store(self, digest: str, cnf_bytes: bytes, out: SolveOutcome) -> Path | None:
        if out.status not in ("sat", "unsat"):
            return None
        d = self._dir(digest)
        atomic_write(d / "query.cnf", cnf_bytes)
        proof_path = None
        if out.proof is not None:
            proof_path = d / "proof.lrat"
            atomic_write(proof_path, out.proof)
        meta = {"status": out.status}
        if out.model is not None:
            meta["model"] = "".join("1" if v else "0" for v in out.model)
        atomic_write(d / "result.json", json.dumps(meta).encode())
        return proof_path

    def proof_path(self, digest: str) -> Path | None:
        p = self._dir(digest) / "proof.lrat"
        return p if p.exists() else None


def cache_from_env(explicit: str | Path | None) -> ResultCache | None:
    root = explicit or os.environ.get(CACHE_ENV)
    return ResultCache(Path(root)) if root else None


# queries ---------------------------------------------------------------------


def encode_sector(code: CssCode, sector: str, w: int, encoding: str):
    q = code.sector_query(sector, w)
    enc = encode_perbit if encoding == "perbit" else encode_location
    cnf, vm = enc(q)
    return q, cnf, vm


def run_sector(code: CssCode, sector: str, w: int, opts: RunOptions) -> SectorResult:
    """Solve one sector query and independently re-check whatever the solver claims."""
    encoding = opts.encoding_for(code.n)
    q, cnf, vm = encode_sector(code, sector, w, encoding)
    cnf_bytes = write_dimacs(cnf)
    digest = hashlib.sha256(cnf_bytes).hexdigest()
    label = opts.backend_label()
    cache = ResultCache(opts.cache_dir) if opts.cache_dir else None

    start = time.monotonic()
    out = cache.load(digest, opts.cert) if cache else None
    cached = out is not None
    if out is None:
        cfg = SolverConfig(**{**opts.solver.__dict__, "produce_proof": opts.cert})
        log.info("solving %s sector w=%d (%d vars, %d clauses) with %s",
                 sector, w, cnf.num_vars, len(cnf.clauses), label)
        out = solve(cnf, cfg)
    res = SectorResult(sector, w, out.status, label, digest, cached=cached, reason=out.reason)

    if out.is_sat:
        if not verify_model(cnf, out.model):
            raise InternalSoundnessError(f"{sector}-sector model does not satisfy the CNF")
        e = decode_witness(out.model, vm, q)
        res.witness = str(e)
        res.witness_weight = e.weight()
    elif out.is_unsat and opts.cert:
        if out.proof is None:
            res.certificate_check = "missing"
            res.outcome = "unknown"
            res.reason = "solver reported UNSAT without a proof"
        else:
            chk = check_lrat_text(cnf, out.proof)
            res.certificate_check = "accepted" if chk.accepted else f"rejected: {chk.reason}"
            if not chk.accepted:
                log.warning("%s-sector certificate rejected: %s", sector, chk.reason)
    res.wall_time = time.monotonic() - start

    if cache and not cached:
        cache.store(digest, cnf_bytes, out)
    if opts.artifacts_dir:
        stem = opts.artifacts_dir / f"{code.name}.{sector}.w{w}.{encoding}"
        atomic_write(stem.with_suffix(stem.suffix + ".cnf"), cnf_bytes)
        atomic_write(stem.with_suffix(stem.suffix + ".varmap.json"), write_varmap(vm))
        if out.proof is not None:
            proof_path = stem.with_suffix(stem.suffix + ".lrat")
            atomic_write(proof_path, out.proof)
            res.certificate = str(proof_path)
    elif cache and out.proof is not None:
        p = cache.proof_path(digest)
        res.certificate = str(p) if p else None
    return res


def run_sectors(code: CssCode, w: int, opts: RunOptions, sectors=("x", "z")) -> list[SectorResult]:
    """Run sector queries concurrently; identical CNFs (e.g. ``hx == hz``) are solved once."""
    plans = []
    for s in sectors:
        _, cnf, _ = encode_sector(code, s, w, opts.encoding_for(code.n))
        plans.append((s, hashlib.sha256(write_dimacs(cnf)).hexdigest()))
    unique = {d: s for s, d in reversed(plans)}
    jobs = opts.jobs or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=max(1, min(jobs, len(unique)))) as pool:
        futures = {d: pool.submit(run_sector, code, s, w, opts) for d, s in unique.items()}
        solved = {d: f.result() for d, f in futures.items()}
    results = []
    for s, d in plans:
        r = solved[d]
        if r.sector != s:
            r = SectorResult(**{**r.__dict__, "sector": s})
        results.append(r)
    return results


# verdicts --------------------------------------------------------------------


def code_summary(code: CssCode, k: int | None) -> dict:
    obj = {"name": code.name, "n": code.n, "k": k}
    if code.claimed:
        obj["claimed"] = {"k": code.claimed[0], "d": code.claimed[1]}
    return obj


def toolchain(opts: RunOptions, n: int) -> dict:
    return {
        "version": __version__,
        "backend": opts.backend_label(),
        "encoding": opts.encoding_for(n),
        "seed": opts.solver.seed,
        "certificates": opts.cert,
    }


def distance_verdict(results: list[SectorResult], d: int) -> tuple[str, dict]:
    """``proven-lower-bound`` iff all sectors are UNSAT at ``d - 1`` (certified when requested)."""
    sat = [r for r in results if r.outcome == "sat"]
    if sat:
        best = min(sat, key=lambda r: (r.witness_weight, r.sector))
        return "refuted", {"value": d, "witness_weight": best.witness_weight,
                           "witness_sector": best.sector, "witness": best.witness}
    if all(r.outcome == "unsat" and r.certified_unsat for r in results):
        return "proven-lower-bound", {"value": d}
    return "unknown", {"value": d}
