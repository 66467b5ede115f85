import dataclasses
import json
import stat
import subprocess
import sys

import pytest

from qdistcert.cli import main
from qdistcert.code import load_code
from qdistcert.encode import parse_dimacs
from qdistcert.gf2 import BitString
from qdistcert.solver import solve
from support import external_solver, sector_proof

BB90 = ["--l", "15", "--m", "3", "--a", "x9,y1,y2", "--b", "1,x2,x7"]


def run(tmp_path, *argv, name="report.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text()) if out.exists() else None


def write_code(tmp_path, code, name="code.json"):
    p = tmp_path / name
    p.write_text(json.dumps(code.to_json(readable=True)))
    return str(p)


class TestValidate:
    def test_steane(self, tmp_path):
        rc, rep = run(tmp_path, "validate", "steane")
        assert rc == 0 and rep["status"] == "valid"
        assert rep["code"] == {"name": "steane", "n": 7, "k": 1, "claimed": {"k": 1, "d": 3}}
        assert [k["rank"] for k in rep["kernels"]] == [3, 3]
        assert all(k["ok"] and k["kernel_source"] == "supplied" for k in rep["kernels"])

    def test_flipped_kernel_bit(self, tmp_path):
        steane = load_code("steane")
        row = steane.ker_hx.row(1)
        bad = steane.ker_hx.with_row(1, BitString(row.len, row.bits ^ 1))
        steane = dataclasses.replace(steane, ker_hx=bad)
        rc, rep = run(tmp_path, "validate", write_code(tmp_path, steane))
        assert rc == 1 and rep["status"] == "invalid"
        assert "orthogonality" in rep["kernels"][0]["verdict"]
        assert rep["kernels"][1]["ok"]

    def test_claimed_k_mismatch(self, tmp_path):
        steane = dataclasses.replace(load_code("steane"), claimed=(2, 3))
        rc, rep = run(tmp_path, "validate", write_code(tmp_path, steane))
        assert rc == 1 and "mismatch" in rep["checks"]["claimed_k"]

    def test_non_orthogonal(self, tmp_path):
        p = tmp_path / "bad.json"
        row = {"rows": 1, "cols": 2, "format": "bits", "data": ["10"]}
        p.write_text(json.dumps({"hx": row, "hz": row}))
        rc, rep = run(tmp_path, "validate", str(p))
        assert rc == 1 and rep["checks"]["mutually_orth"] is False

    def test_malformed_and_missing(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{")
        assert main(["validate", str(p)]) == 3
        assert main(["validate", str(tmp_path / "nope.json")]) == 3

    @pytest.mark.parametrize("name", ["shor", "golay", "bb72", "bb90", "bb108", "bb144", "bb288"])
    def test_fixtures_validate(self, tmp_path, name):
        rc, rep = run(tmp_path, "validate", name)
        assert rc == 0 and rep["code"]["k"] == rep["code"]["claimed"]["k"]


class TestDistance:
    def test_steane_proven_with_certificates(self, tmp_path):
        rc, rep = run(tmp_path, "distance", "steane", "--d", "3", "--cert")
        assert rc == 0 and rep["claim"] == {"status": "proven-lower-bound", "value": 3}
        assert [s["certificate_check"] for s in rep["sectors"]] == ["accepted", "accepted"]
        assert rep["toolchain"]["encoding"] == "perbit"

    def test_steane_refuted(self, tmp_path):
        rc, rep = run(tmp_path, "distance", "steane", "--d", "4")
        assert rc == 1 and rep["claim"]["status"] == "refuted"
        assert rep["claim"]["witness_weight"] == 3

    def test_location_encoding(self, tmp_path):
        rc, rep = run(tmp_path, "distance", "steane", "--d", "3", "--encoding", "location", "--cert")
        assert rc == 0 and rep["toolchain"]["encoding"] == "location"

    def test_d_one_is_trivial(self, tmp_path):
        rc, rep = run(tmp_path, "distance", "shor", "--d", "1")
        assert rc == 0 and rep["sectors"] == []

    def test_bad_d(self, tmp_path):
        assert main(["distance", "steane", "--d", "0"]) == 3

    def test_timeout_is_unknown(self, tmp_path):
        rc, rep = run(tmp_path, "distance", "golay", "--d", "7", "--timeout", "0.001")
        assert rc == 2 and rep["claim"]["status"] == "unknown"

    def test_deterministic_reports(self, tmp_path):
        _, a = run(tmp_path, "distance", "shor", "--d", "4", "--no-timing", name="a.json")
        _, b = run(tmp_path, "distance", "shor", "--d", "4", "--no-timing", "--jobs", "1", name="b.json")
        assert a == b and a["claim"]["status"] == "refuted"

    def test_artifacts(self, tmp_path):
        art = tmp_path / "art"
        rc, rep = run(tmp_path, "distance", "shor", "--d", "3", "--cert", "--artifacts", str(art))
        assert rc == 0
        names = sorted(p.name for p in art.iterdir())
        assert names == [f"shor.{s}.w2.perbit.{ext}" for s in "xz" for ext in ("cnf", "lrat", "varmap.json")]
        assert rep["sectors"][0]["certificate"].endswith(".lrat")

    def test_identical_sectors_share_a_solve(self, tmp_path):
        rc, rep = run(tmp_path, "distance", "steane", "--d", "3")
        x, z = rep["sectors"]
        assert x["cnf_sha256"] == z["cnf_sha256"] and (x["sector"], z["sector"]) == ("x", "z")

    def test_golay_external(self, tmp_path):
        if external_solver() is None:
            pytest.skip("no external solver")
        rc, rep = run(tmp_path, "distance", "golay", "--d", "7", "--solver", "external", "--cert")
        assert rc == 0 and rep["toolchain"]["backend"].startswith("external")

    def test_lying_solver_is_a_soundness_error(self, tmp_path):
        script = tmp_path / "liar"
        script.write_text("#!/bin/sh\necho 's SATISFIABLE'\necho 'v 1 2 3 4 5 6 7 0'\nexit 10\n")
        script.chmod(script.stat().st_mode | stat.S_IEXEC)
        assert main(["distance", "steane", "--d", "3", "--solver", str(script)]) == 4


class TestCache:
    def test_hits_are_rechecked(self, tmp_path):
        cache = tmp_path / "cache"
        rc, first = run(tmp_path, "distance", "steane", "--d", "3", "--cert", "--cache", str(cache),
                        name="a.json")
        rc2, second = run(tmp_path, "distance", "steane", "--d", "3", "--cert", "--cache", str(cache),
                          name="b.json")
        assert rc == rc2 == 0
        assert not first["sectors"][0]["cached"] and second["sectors"][0]["cached"]
        assert all(s["certificate_check"] == "accepted" for s in second["sectors"])

        # a corrupted cached proof is re-checked and rejected, so the claim drops to unknown
        for proof in cache.rglob("proof.lrat"):
            lines = proof.read_bytes().splitlines()
            proof.write_bytes(b"\n".join(lines[:-1]) + b"\n")
        rc3, third = run(tmp_path, "distance", "steane", "--d", "3", "--cert", "--cache", str(cache),
                         name="c.json")
        assert rc3 == 2 and third["claim"]["status"] == "unknown"
        assert third["sectors"][0]["certificate_check"].startswith("rejected")

    def test_environment_variable(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QDISTCERT_CACHE", str(tmp_path / "c"))
        run(tmp_path, "distance", "shor", "--d", "3", name="a.json")
        _, rep = run(tmp_path, "distance", "shor", "--d", "3", name="b.json")
        assert all(s["cached"] for s in rep["sectors"])

    def test_corrupted_model_is_caught(self, tmp_path):
        cache = tmp_path / "cache"
        run(tmp_path, "distance", "steane", "--d", "4", "--cache", str(cache))
        for meta in cache.rglob("result.json"):
            obj = json.loads(meta.read_text())
            if obj["status"] == "sat":
                obj["model"] = "0" * len(obj["model"])
                meta.write_text(json.dumps(obj))
        assert main(["distance", "steane", "--d", "4", "--cache", str(cache)]) == 4


class TestExact:
    @pytest.mark.parametrize("name", ["shor", "steane"])
    def test_sat_scan(self, tmp_path, name):
        rc, rep = run(tmp_path, "exact", name, "--method", "sat", "--cert")
        assert rc == 0 and rep["claim"] == {"status": "exact", "value": 3}
        assert [s["outcome"] for s in rep["scan"]] == ["unsat", "unsat", "unsat", "unsat", "sat", "sat"]

    def test_oracle(self, tmp_path):
        rc, rep = run(tmp_path, "exact", "shor", "--method", "oracle")
        assert rc == 0 and rep["claim"]["value"] == 3

    def test_single_z_sentinel(self, tmp_path):
        rc, rep = run(tmp_path, "exact", "single_z")
        assert rc == 0 and rep["method"] == "oracle"
        assert rep["claim"]["value"] == 2 and rep["claim"]["sentinel"]
        rc, rep = run(tmp_path, "exact", "single_z", "--method", "sat", "--cert", name="sat.json")
        assert rc == 0 and rep["claim"] == {"status": "exact", "value": 2, "sentinel": True}

    def test_start(self, tmp_path):
        rc, rep = run(tmp_path, "exact", "golay", "--start", "7")
        assert rc == 0 and rep["claim"] == {"status": "exact", "value": 7}
        assert [s["weight_bound"] for s in rep["scan"]] == [6, 6, 7, 7]

    def test_max_w(self, tmp_path):
        rc, rep = run(tmp_path, "exact", "golay", "--max-w", "3")
        assert rc == 0 and rep["claim"] == {"status": "proven-lower-bound", "value": 4}

    def test_oracle_cap(self):
        assert main(["exact", "golay", "--method", "oracle"]) == 3


class TestEncode:
    def test_reproducible_bytes(self, tmp_path):
        for i in range(2):
            assert main(["encode", "shor", "--sector", "x", "--w", "2", "--out", str(tmp_path / f"r{i}")]) == 0
        for suffix in (".cnf", ".varmap.json"):
            assert (tmp_path / f"r0{suffix}").read_bytes() == (tmp_path / f"r1{suffix}").read_bytes()

    def test_shor_worked_example_unsat(self, tmp_path):
        for enc in ("perbit", "location"):
            prefix = tmp_path / enc
            main(["encode", "shor", "--sector", "x", "--w", "2", "--encoding", enc, "--out", str(prefix)])
            cnf = parse_dimacs((tmp_path / f"{enc}.cnf").read_bytes())
            assert solve(cnf).is_unsat
            vm = json.loads((tmp_path / f"{enc}.varmap.json").read_text())
            assert vm

    def test_stdout(self, capsysbinary):
        assert main(["encode", "steane", "--sector", "z", "--w", "3"]) == 0
        out = capsysbinary.readouterr().out
        assert out.startswith(b"p cnf ") and solve(parse_dimacs(out)).is_sat

    def test_bad_weight(self):
        assert main(["encode", "steane", "--sector", "z", "--w", "0"]) == 3


class TestBb:
    def test_trivial(self, tmp_path):
        out = tmp_path / "t.json"
        assert main(["bb", "--l", "1", "--m", "1", "--a", "1,1,1", "--b", "1,1,1", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["n"] == 2

    def test_round_trip_validates(self, tmp_path):
        out = tmp_path / "bb90.json"
        assert main(["bb", *BB90, "--name", "bb90", "--out", str(out)]) == 0
        rc, rep = run(tmp_path, "validate", str(out))
        assert rc == 0 and rep["code"]["k"] == 8 and rep["rank_hx"] == rep["rank_hz"] == 41
        built = load_code(out)
        shipped = load_code("bb90")
        assert (built.hx, built.hz) == (shipped.hx, shipped.hz)

    def test_malformed_monomials(self):
        assert main(["bb", "--l", "2", "--m", "2", "--a", "x,q,1", "--b", "1,1,1"]) == 3


class TestCheckCert:
    def _files(self, tmp_path, proof=None):
        cnf, good = sector_proof("steane", "x", 2)
        from qdistcert.encode import write_dimacs
        (tmp_path / "q.cnf").write_bytes(write_dimacs(cnf))
        (tmp_path / "q.lrat").write_bytes(good if proof is None else proof(good))
        return str(tmp_path / "q.cnf"), str(tmp_path / "q.lrat")

    def test_accept(self, tmp_path):
        rc, rep = run(tmp_path, "check-cert", *self._files(tmp_path))
        assert rc == 0 and rep["status"] == "accepted" and rep["added"] > 0

    def test_reject(self, tmp_path):
        def drop_hint(p):
            lines = p.decode().splitlines()
            toks = lines[0].split()
            toks.pop(toks.index("0") + 1)
            return ("\n".join([" ".join(toks)] + lines[1:]) + "\n").encode()
        rc, rep = run(tmp_path, "check-cert", *self._files(tmp_path, drop_hint))
        assert rc == 1 and rep["status"] == "rejected" and rep["failed_id"] is not None

    def test_parse_error(self, tmp_path):
        rc, rep = run(tmp_path, "check-cert", *self._files(tmp_path, lambda p: p + b"7 7\n"))
        assert rc == 3 and rep["reason"].startswith("parse error")

    def test_missing_files(self, tmp_path):
        assert main(["check-cert", str(tmp_path / "a.cnf"), str(tmp_path / "a.lrat")]) == 3

    def test_bad_dimacs(self, tmp_path):
        (tmp_path / "q.cnf").write_text("p cnf 1 1\n2 0\n")
        (tmp_path / "q.lrat").write_text("2 0 1 0\n")
        assert main(["check-cert", str(tmp_path / "q.cnf"), str(tmp_path / "q.lrat")]) == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qdistcert", "validate", "steane"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "valid"
