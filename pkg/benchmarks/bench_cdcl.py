"""Compiled vs pure-Python: CDCL core and LRAT checker on the same inputs.

    python benchmarks/bench_cdcl.py [--repeat 3] [--quick] [--json out.json]

Both cores run identical search (same decisions, same proofs), so the ratio of
wall times is a like-for-like measure of the compiled speedup.
"""
from __future__ import annotations

import argparse
import itertools
import json
import platform
import random
import statistics
import sys
import time

from qdistcert import cert
from qdistcert.cert import check_lrat_text
from qdistcert.code import load_code
from qdistcert.encode import Cnf, encode_location, encode_perbit
from qdistcert.solver import _cdcl_py, core_module


def pigeonhole(holes: int) -> Cnf:
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p, q in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(p, h), -var(q, h)])
    return Cnf(pigeons * holes, clauses)


def random_3sat(n: int, ratio: float, seed: int) -> Cnf:
    rng = random.Random(seed)
    return Cnf(n, [[v * rng.choice([1, -1]) for v in rng.sample(range(1, n + 1), 3)]
                   for _ in range(int(n * ratio))])


def workloads(quick: bool):
    golay = load_code("golay")
    steane = load_code("steane")
    holes = 6 if quick else 7
    yield f"pigeonhole-{holes}", pigeonhole(holes)
    n = 60 if quick else 100
    yield f"3sat-n{n}-r4.26", random_3sat(n, 4.26, 1)
    yield "golay-x-w6-perbit", encode_perbit(golay.sector_query("x", 6))[0]
    yield "golay-x-w7-perbit", encode_perbit(golay.sector_query("x", 7))[0]
    yield "steane-x-w2-location", encode_location(steane.sector_query("x", 2))[0]
    if not quick:
        yield "golay-x-w6-location", encode_location(golay.sector_query("x", 6))[0]


def time_solve(core, cnf: Cnf, proof: bool, repeat: int):
    times, result, proof_text = [], None, ""
    for _ in range(repeat):
        t0 = time.perf_counter()
        s = core.CdclCore(cnf.num_vars, cnf.clauses, proof, 0)
        result = s.solve(0.0)
        times.append(time.perf_counter() - t0)
        if proof and result == _cdcl_py.UNSAT:
            proof_text = s.proof_text()
        stats = s.stats()
    return min(times), result, stats, proof_text


def time_check(cnf: Cnf, text: str, pure: bool, repeat: int):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = check_lrat_text(cnf, text, pure=pure)
        times.append(time.perf_counter() - t0)
    return min(times), res.accepted


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    ap.add_argument("--json", help="also write the rows as JSON")
    args = ap.parse_args(argv)

    compiled = core_module(pure=False)
    if compiled is _cdcl_py:
        print("compiled core not built; nothing to compare", file=sys.stderr)
        return 1
    status = {_cdcl_py.SAT: "sat", _cdcl_py.UNSAT: "unsat", _cdcl_py.UNKNOWN: "unknown"}
    rows = []
    print(f"python {platform.python_version()} on {platform.machine()}, best of {args.repeat}\n")
    head = f"{'instance':<24}{'vars':>7}{'clauses':>9}{'result':>8}{'conflicts':>11}" \
           f"{'python s':>10}{'compiled s':>12}{'speedup':>9}"
    print(head)
    print("-" * len(head))
    proofs = []
    for name, cnf in workloads(args.quick):
        tp, rp, sp, _ = time_solve(_cdcl_py, cnf, True, args.repeat)
        tc, rc, sc, proof = time_solve(compiled, cnf, True, args.repeat)
        assert rp == rc and sp["conflicts"] == sc["conflicts"], f"{name}: cores diverged"
        rows.append({"kind": "solve", "instance": name, "vars": cnf.num_vars, "clauses": len(cnf.clauses),
                     "result": status[rc], "conflicts": sc["conflicts"], "python_s": tp, "compiled_s": tc})
        print(f"{name:<24}{cnf.num_vars:>7}{len(cnf.clauses):>9}{status[rc]:>8}{sc['conflicts']:>11}"
              f"{tp:>10.3f}{tc:>12.4f}{tp / tc:>8.1f}x")
        if proof:
            proofs.append((name, cnf, proof))

    if cert._ext is not None:
        print(f"\n{'LRAT check':<24}{'lines':>7}{'bytes':>11}{'python s':>14}{'compiled s':>12}{'speedup':>9}")
        for name, cnf, proof in proofs:
            tp, ap_ = time_check(cnf, proof, True, args.repeat)
            tc, ac = time_check(cnf, proof, False, args.repeat)
            assert ap_ and ac, f"{name}: proof rejected"
            lines = proof.count("\n")
            rows.append({"kind": "check", "instance": name, "lines": lines, "bytes": len(proof),
                         "python_s": tp, "compiled_s": tc})
            print(f"{name:<24}{lines:>7}{len(proof):>11}{tp:>14.4f}{tc:>12.5f}{tp / tc:>8.1f}x")

    ratios = [r["python_s"] / r["compiled_s"] for r in rows if r["kind"] == "solve"]
    print(f"\nmedian solver speedup {statistics.median(ratios):.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
