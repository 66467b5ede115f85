"""``qdistcert`` command line.

Exit codes: 0 proven/accepted, 1 refuted/rejected, 2 unknown, 3 invalid input,
4 internal soundness error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .cert import check_lrat_text
from .code import (BbSpec, CssCode, InvalidCodeError, bb_build, certify_kernel, compute_k,
                   independent_row_subset, load_code, parse_monomials)
from .encode import DimacsError, parse_dimacs, write_dimacs, write_varmap
from .gf2 import Gf2Error, mutually_orth
from .oracle import BSM_MAX_QUBITS, OracleCapError, exact_distance_bsm
from .pipeline import (RunOptions, atomic_write, cache_from_env, code_summary, distance_verdict,
                       default_encoding, encode_sector, run_sectors, toolchain)
from .solver import InternalSoundnessError, SolverConfig

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN, EXIT_INVALID, EXIT_SOUNDNESS = 0, 1, 2, 3, 4
ORACLE_AUTO_MAX_N = 6

log = logging.getLogger("qdistcert")


class UsageError(Exception):
    pass


def emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if out:
        atomic_write(Path(out), text.encode())
    else:
        sys.stdout.write(text)


def _load(path: str) -> CssCode:
    try:
        return load_code(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such code file: {path}") from exc


# validate --------------------------------------------------------------------


def _kernel_check(name: str, m, ker, supplied: bool) -> dict:
    n = m.cols
    r1 = m.rank()
    r2 = n - r1
    kc = certify_kernel(m, ker, r1, r2)
    return {
        "matrix": name,
        "kernel_source": "supplied" if supplied else "computed",
        "rank": r1,
        "kernel_rows": ker.rows,
        "matrix_rows": independent_row_subset(m, r1),
        "kernel_rows_independent": independent_row_subset(ker, r2) if r2 <= ker.rows else None,
        "verdict": kc.verdict,
        "ok": kc.certified,
    }


def cmd_validate(args) -> int:
    code = _load(args.code)
    checks = {"mutually_orth": mutually_orth(code.hx, code.hz)}
    k = code.n - code.hx.rank() - code.hz.rank() if checks["mutually_orth"] else None
    kernels = [
        _kernel_check("hx", code.hx, code.kernel("hx"), code.ker_hx is not None),
        _kernel_check("hz", code.hz, code.kernel("hz"), code.ker_hz is not None),
    ]
    ok = checks["mutually_orth"] and all(kc["ok"] for kc in kernels)
    if code.claimed and k is not None and k != code.claimed[0]:
        checks["claimed_k"] = f"mismatch: computed {k}, claimed {code.claimed[0]}"
        ok = False
    report = {
        "command": "validate",
        "code": code_summary(code, k),
        "checks": checks,
        "rank_hx": code.hx.rank(),
        "rank_hz": code.hz.rank(),
        "kernels": kernels,
        "status": "valid" if ok else "invalid",
    }
    emit(report, args.out)
    return EXIT_OK if ok else EXIT_REFUTED


# distance / exact ------------------------------------------------------------


def _options(args) -> RunOptions:
    backend = "external" if args.solver != "internal" else "internal"
    path = args.solver if args.solver not in ("internal", "external") else None
    cfg = SolverConfig(backend=backend, path=path, args=list(args.solver_arg or []),
                       timeout=args.timeout, seed=args.seed)
    cache = cache_from_env(args.cache)
    return RunOptions(
        encoding=args.encoding, solver=cfg, cert=args.cert, jobs=args.jobs,
        cache_dir=cache.root if cache else None,
        artifacts_dir=Path(args.artifacts) if args.artifacts else None,
        timing=not args.no_timing,
    )


def _require_valid(code: CssCode) -> int:
    try:
        return compute_k(code)
    except InvalidCodeError as exc:
        raise UsageError(str(exc)) from exc


def cmd_distance(args) -> int:
    code = _load(args.code)
    k = _require_valid(code)
    opts = _options(args)
    d = args.d
    if d < 1:
        raise UsageError("--d must be at least 1")
    results = run_sectors(code, d - 1, opts) if d > 1 else []
    status, claim = distance_verdict(results, d)
    report = {
        "command": "distance",
        "code": code_summary(code, k),
        "sectors": [r.to_json(opts.timing) for r in results],
        "claim": {"status": status, **claim},
        "toolchain": toolchain(opts, code.n),
    }
    emit(report, args.out)
    return {"proven-lower-bound": EXIT_OK, "refuted": EXIT_REFUTED}.get(status, EXIT_UNKNOWN)


def _exact_oracle(code: CssCode, k: int, opts: RunOptions, out: str | None) -> int:
    res = exact_distance_bsm(code.to_bsm())
    report = {
        "command": "exact",
        "method": "oracle",
        "code": code_summary(code, k),
        "claim": {"status": "exact", "value": res.value, "sentinel": res.sentinel,
                  "witness": str(res.witness) if res.witness is not None else None},
        "toolchain": toolchain(opts, code.n),
    }
    emit(report, out)
    return EXIT_OK


def cmd_exact(args) -> int:
    code = _load(args.code)
    k = _require_valid(code)
    opts = _options(args)
    method = args.method
    if method == "auto":
        method = "oracle" if code.n <= ORACLE_AUTO_MAX_N else "sat"
    if method == "oracle":
        if code.n > BSM_MAX_QUBITS:
            raise UsageError(f"oracle method is limited to n <= {BSM_MAX_QUBITS}")
        return _exact_oracle(code, k, opts, args.out)

    # ascending scan: the first w with a SAT witness is the distance, all smaller w are UNSAT
    scans = []
    start = max(1, args.start)
    top = min(args.max_w or code.n, code.n)
    status, value = None, None
    if start > 1:
        results = run_sectors(code, start - 1, opts)
        scans.append(results)
        st, _ = distance_verdict(results, start)
        if st != "proven-lower-bound":
            status = st
    if status is None:
        for w in range(start, top + 1):
            results = run_sectors(code, w, opts)
            scans.append(results)
            if any(r.outcome == "sat" for r in results):
                status, value = "exact", w
                break
            if not all(r.certified_unsat for r in results):
                status = "unknown"
                break
        else:
            # nothing up to weight n: the undetectable set is empty
            status, value = ("exact", code.n + 1) if top == code.n else ("proven-lower-bound", top + 1)
    claim = {"status": status, "value": value}
    if status == "exact" and value == code.n + 1:
        claim["sentinel"] = True
    report = {
        "command": "exact",
        "method": "sat",
        "code": code_summary(code, k),
        "scan": [r.to_json(opts.timing) for rs in scans for r in rs],
        "claim": claim,
        "toolchain": toolchain(opts, code.n),
    }
    emit(report, args.out)
    if status in ("exact", "proven-lower-bound"):
        return EXIT_OK
    return EXIT_REFUTED if status == "refuted" else EXIT_UNKNOWN


# encode / bb / check-cert ------------------------------------------------------


def cmd_encode(args) -> int:
    code = _load(args.code)
    _require_valid(code)
    encoding = args.encoding if args.encoding != "auto" else default_encoding(code.n)
    if args.w < 1:
        raise UsageError("--w must be at least 1")
    _, cnf, vm = encode_sector(code, args.sector, args.w, encoding)
    data = write_dimacs(cnf)
    if args.out:
        atomic_write(Path(args.out + ".cnf"), data)
        atomic_write(Path(args.out + ".varmap.json"), write_varmap(vm))
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def cmd_bb(args) -> int:
    try:
        spec = BbSpec(args.l, args.m, parse_monomials(args.a), parse_monomials(args.b), args.name)
    except InvalidCodeError as exc:
        raise UsageError(str(exc)) from exc
    code = bb_build(spec)
    text = json.dumps(code.to_json(), indent=1) + "\n"
    if args.out:
        atomic_write(Path(args.out), text.encode())
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check_cert(args) -> int:
    try:
        cnf = parse_dimacs(Path(args.cnf).read_bytes())
        data = Path(args.lrat).read_bytes()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    res = check_lrat_text(cnf, data, contiguous=not args.allow_id_gaps,
                          allow_vacuous_rat=args.allow_vacuous_rat)
    if res.reason.startswith("parse error"):
        emit({"command": "check-cert", "status": "rejected", "reason": res.reason}, args.out)
        return EXIT_INVALID
    report = {
        "command": "check-cert",
        "status": "accepted" if res.accepted else "rejected",
        "reason": res.reason or None,
        "failed_id": res.failed_id,
        "original_clauses": len(cnf.clauses),
        "added": res.added,
        "deleted": res.deleted,
    }
    emit(report, args.out)
    return EXIT_OK if res.accepted else EXIT_REFUTED


# argument parsing ------------------------------------------------------------


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--encoding", choices=["auto", "perbit", "location"], default="auto",
                   help="auto: perbit for n <= 40, location above")
    p.add_argument("--solver", default="internal",
                   help="'internal', 'external' (cadical on PATH / $QDISTCERT_SOLVER) or a solver path")
    p.add_argument("--solver-arg", action="append", help="extra argument for an external solver")
    p.add_argument("--cert", action="store_true", help="require and check LRAT certificates for UNSAT")
    p.add_argument("--timeout", type=float, default=0.0, help="seconds per solver call (0 = none)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=0, help="worker threads (default: core count)")
    p.add_argument("--cache", help="content-addressed result cache (default: $QDISTCERT_CACHE)")
    p.add_argument("--artifacts", help="directory for CNF, varmap and proof files")
    p.add_argument("--no-timing", action="store_true", help="omit wall times for reproducible reports")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdistcert", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="orthogonality, ranks and kernel certification")
    p.add_argument("code")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distance", help="prove distance >= d (or refute it)")
    p.add_argument("code")
    p.add_argument("--d", type=int, required=True)
    _solver_flags(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("exact", help="find the exact distance by ascending scan")
    p.add_argument("code")
    p.add_argument("--method", choices=["auto", "sat", "oracle"], default="auto")
    p.add_argument("--start", type=int, default=1, help="first weight bound to test for SAT")
    p.add_argument("--max-w", type=int, default=0, help="stop scanning after this weight")
    _solver_flags(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("encode", help="write the CNF and varmap for one sector query")
    p.add_argument("code")
    p.add_argument("--sector", choices=["x", "z"], required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--encoding", choices=["auto", "perbit", "location"], default="auto")
    p.add_argument("--out", help="output prefix: writes PREFIX.cnf and PREFIX.varmap.json")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("bb", help="build a bivariate bicycle code file")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", required=True, help='three monomials, e.g. "x3,y1,y2"')
    p.add_argument("--b", required=True, help='three monomials, e.g. "y3,x1,x2"')
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bb)

    p = sub.add_parser("check-cert", help="check an LRAT proof against a DIMACS CNF")
    p.add_argument("cnf")
    p.add_argument("lrat")
    p.add_argument("--allow-id-gaps", action="store_true",
                   help="accept any increasing clause ids instead of contiguous numbering")
    p.add_argument("--allow-vacuous-rat", action="store_true",
                   help="accept RAT lines without hint groups when no clause needs one")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_cert)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InternalSoundnessError as exc:
        log.error("internal soundness error: %s", exc)
        return EXIT_SOUNDNESS
    except (UsageError, InvalidCodeError, Gf2Error, DimacsError, OracleCapError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
