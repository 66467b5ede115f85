import random

import pytest

from qdistcert import cert
from qdistcert.cert import (Add, Delete, LratParseError, LratProof, check_lrat, check_lrat_text, parse_lrat,
                            render_lrat)
from qdistcert.encode import Cnf
from qdistcert.solver import SolverConfig, solve
from support import mutate_proof, random_cnf, sector_proof, truth_table_sat

UNIT_PAIR = Cnf(1, [[1], [-1]])
compiled = pytest.mark.skipif(cert._ext is None, reason="compiled checker not built")


def both_paths(cnf, text, **kw):
    """Check with the pure checker and, when built, the compiled one; they must agree exactly."""
    res = check_lrat_text(cnf, text, pure=True, **kw)
    if cert._ext is not None:
        assert check_lrat_text(cnf, text, **kw) == res
    return res


class TestParse:
    def test_empty_clause_addition(self):
        assert parse_lrat("3 0 1 2 0").lines == [Add(3, (), (1, 2), 1)]

    def test_deletion(self):
        assert parse_lrat("4 d 1 2 0").lines == [Delete(4, (1, 2), 1)]

    def test_dangling_hint(self):
        with pytest.raises(LratParseError) as exc:
            parse_lrat("3 0 9 0", num_clauses=2)
        assert exc.value.line == 1

    def test_hint_to_deleted_clause(self):
        with pytest.raises(LratParseError, match="no live clause"):
            parse_lrat("2 d 1 0\n3 0 1 0\n", num_clauses=2)

    def test_comments_and_blank_lines(self):
        p = parse_lrat("c hello\n\n3 1 0 1 0\n")
        assert p.lines == [Add(3, (1,), (1,), 3)]

    @pytest.mark.parametrize("text,line", [
        ("3 1 2", 1),                 # no terminator
        ("3 1 0 2", 1),               # hints not terminated
        ("3 1 0 0\n3 0 1 0", 2),      # id not increasing
        ("3 1 0 1 0 0", 1),           # zero inside hints
        ("3 x 0 0", 1),
        ("3 1 0 +1 0", 1),
        ("4 d 1 0 2 0", 1),
        ("4 d -1 0", 1),
        ("3 0 99999999999999999999 0", 1),
    ])
    def test_malformed(self, text, line):
        with pytest.raises(LratParseError) as exc:
            parse_lrat(text)
        assert exc.value.line == line

    def test_round_trip(self):
        text = "c proof\n5   1 -2 0 3 4 0\n\n5 d 3 4 0\n6 0 5 1 0\n"
        p = parse_lrat(text)
        assert render_lrat(p) == "5 1 -2 0 3 4 0\n5 d 3 4 0\n6 0 5 1 0\n"
        assert render_lrat(parse_lrat(render_lrat(p))) == render_lrat(p)

    def test_round_trip_solver_proofs(self):
        cnf, proof = sector_proof("steane", "x", 2)
        p = parse_lrat(proof, len(cnf.clauses))
        canon = [" ".join(line.split()) for line in proof.decode().splitlines() if line.strip()]
        assert render_lrat(p).splitlines() == canon


class TestCheck:
    def test_unit_conflict(self):
        assert both_paths(UNIT_PAIR, "3 0 1 2 0").accepted

    def test_single_unit_is_not_a_conflict(self):
        res = both_paths(UNIT_PAIR, "3 0 2 0")
        assert not res.accepted and res.failed_id == 3

    def test_no_empty_clause(self):
        res = both_paths(Cnf(2, [[1, 2], [-1, 2], [-2]]), "4 2 0 1 2 0\n")
        assert not res.accepted and "incomplete" in res.reason

    def test_counts(self):
        res = both_paths(Cnf(2, [[1, 2], [-1, 2], [-2]]), "4 2 0 1 2 0\n4 d 1 2 0\n5 0 4 3 0\n")
        assert res.accepted and (res.added, res.deleted) == (2, 2)

    def test_deleted_hint_is_rejected(self):
        cnf = Cnf(2, [[1, 2], [-1, 2], [-2]])
        p = parse_lrat("4 2 0 1 2 0\n4 d 4 0\n5 0 4 3 0\n")
        res = check_lrat(cnf, p)
        assert not res.accepted and "no live clause" in res.reason
        assert not both_paths(cnf, "4 2 0 1 2 0\n4 d 4 0\n5 0 4 3 0\n").accepted

    def test_hint_order_matters(self):
        cnf = Cnf(2, [[1, 2], [-1, 2], [-2]])
        assert both_paths(cnf, "4 0 3 1 2 0\n").accepted
        # clause 1 is not unit before clause 3 has fired
        assert not both_paths(cnf, "4 0 1 3 2 0\n").accepted

    def test_hints_after_conflict(self):
        assert not both_paths(UNIT_PAIR, "3 0 1 2 1 0").accepted

    def test_satisfied_hint(self):
        res = both_paths(Cnf(2, [[1, 2], [-1], [-2]]), "4 1 0 2 0\n")
        assert not res.accepted and "satisfied" in res.reason

    @pytest.mark.parametrize("clause", ["1 1", "1 -1", "3"])
    def test_bad_clauses(self, clause):
        assert not both_paths(UNIT_PAIR, f"3 {clause} 0 1 0\n4 0 1 2 0\n").accepted

    def test_contiguous_ids(self):
        text = "5 0 1 2 0\n"
        res = both_paths(UNIT_PAIR, text)
        assert not res.accepted and "skips" in res.reason
        assert both_paths(UNIT_PAIR, text, contiguous=False).accepted

    def test_deletion_line_id(self):
        text = "3 1 0 1 0\n2 d 1 0\n4 0 3 2 0\n"
        assert not both_paths(UNIT_PAIR, text).accepted
        assert both_paths(UNIT_PAIR, text, contiguous=False).accepted

    def test_parse_error_is_a_rejection(self):
        res = both_paths(UNIT_PAIR, "3 0 1 2")
        assert not res.accepted and res.reason.startswith("parse error")


class TestRat:
    F = Cnf(3, [[-1, 2], [2, 3], [2, -3], [-2]])

    def test_rat_line_accepted(self):
        assert both_paths(self.F, "5 1 0 -1 2 3 0\n6 0 4 2 3 0\n").accepted

    def test_rat_group_without_conflict(self):
        res = both_paths(self.F, "5 1 0 -1 2 0\n")
        assert not res.accepted and "does not produce a conflict" in res.reason

    def test_missing_group(self):
        res = both_paths(Cnf(2, [[-1, 2], [-1, -2], [1, 2]]), "4 1 0 0\n")
        assert not res.accepted

    def test_group_for_clause_without_negated_pivot(self):
        assert not both_paths(self.F, "5 1 0 -2 0\n").accepted

    def test_duplicate_group(self):
        assert not both_paths(self.F, "5 1 0 -1 2 3 -1 2 3 0\n").accepted

    def test_blocked_resolvent_needs_no_group(self):
        # (1 -2) against (-1 2) resolves to a tautology; only (-1 3) needs a group
        cnf = Cnf(3, [[-1, 2], [-1, 3], [3]])
        res = both_paths(cnf, "4 1 -2 0 -2 3 0\n")
        assert not res.accepted and "incomplete" in res.reason
        res = both_paths(cnf, "4 1 -2 0 -1 0\n")
        assert not res.accepted and res.failed_id == 4

    def test_empty_clause_cannot_be_rat(self):
        res = both_paths(UNIT_PAIR, "3 0 -1 0\n")
        assert not res.accepted

    def test_extension_definitions(self):
        # x3 <-> x1 & x2 introduced by three RAT lines on a fresh variable, no clause mentions -3
        cnf = Cnf(3, [[1], [2], [-1, -2]])
        text = "4 -3 1 0 0\n5 -3 2 0 0\n6 3 -1 -2 0 0\n7 0 1 2 3 0\n"
        res = both_paths(cnf, text)
        assert not res.accepted and "hints do not produce a conflict" in res.reason
        assert both_paths(cnf, text, allow_vacuous_rat=True).accepted

    def test_vacuous_rat_needs_all_resolvents_blocked(self):
        cnf = Cnf(3, [[1, 3], [2], [-1, -2]])
        assert not both_paths(cnf, "4 -3 1 0 0\n", allow_vacuous_rat=True).accepted


class TestSolverProofs:
    @pytest.mark.parametrize("name,sector,w", [("steane", "x", 2), ("steane", "z", 2), ("shor", "x", 2),
                                               ("shor", "z", 2)])
    def test_accepted(self, name, sector, w):
        cnf, proof = sector_proof(name, sector, w)
        assert both_paths(cnf, proof).accepted

    def test_single_hint_mutations_rejected(self):
        cnf, proof = sector_proof("steane", "x", 2)
        p = parse_lrat(proof)
        rng = random.Random(5)
        for _ in range(150):
            _, mutant = mutate_proof(rng, p, cnf.num_vars, kind="hint")
            assert not check_lrat(cnf, mutant).accepted

    def test_dropping_the_last_line(self):
        cnf, proof = sector_proof("shor", "z", 2)
        lines = proof.decode().splitlines()
        assert not both_paths(cnf, "\n".join(lines[:-1]) + "\n").accepted

    def test_proof_against_a_different_cnf(self):
        cnf, proof = sector_proof("steane", "x", 2)
        weaker = Cnf(cnf.num_vars, cnf.clauses[:-1])
        res = check_lrat_text(weaker, proof, pure=True)
        assert not res.accepted


class TestSoundness:
    def test_never_accepts_for_satisfiable_cnfs(self):
        """Adversarial proofs: an UNSAT formula's proof replayed on SAT variants, plus random lines."""
        rng = random.Random(17)
        tried = 0
        while tried < 200:
            nv = rng.randint(3, 12)
            base = random_cnf(rng, nv, rng.randint(nv * 3, nv * 6), max_len=3, min_len=2)
            out = solve(base, SolverConfig(produce_proof=True))
            if not out.is_unsat:
                continue
            p = parse_lrat(out.proof)
            for _ in range(5):
                # widen one clause in place so clause ids still line up with the proof
                clauses = [list(cl) for cl in base.clauses]
                j = rng.randrange(len(clauses))
                free = [v for v in range(1, nv + 1) if v not in map(abs, clauses[j])]
                if not free:
                    continue
                clauses[j].append(rng.choice(free) * rng.choice([1, -1]))
                weaker = Cnf(nv, clauses)
                if truth_table_sat(nv, weaker.clauses):
                    tried += 1
                    assert not check_lrat(weaker, p).accepted
                    assert not check_lrat(weaker, p, contiguous=False, allow_vacuous_rat=True).accepted
        assert tried >= 200

    def test_random_proofs_on_satisfiable_cnfs(self):
        rng = random.Random(23)
        for _ in range(300):
            nv = rng.randint(1, 8)
            c = random_cnf(rng, nv, rng.randint(1, 3 * nv))
            if not truth_table_sat(nv, c.clauses):
                continue
            m = len(c.clauses)
            lines = []
            for i in range(rng.randint(1, 6)):
                k = rng.randint(0, 2)
                clause = [v * rng.choice([1, -1]) for v in rng.sample(range(1, nv + 1), min(k, nv))]
                hints = [rng.randint(1, m + i) for _ in range(rng.randint(1, 4))]
                lines.append(" ".join(map(str, [m + i + 1, *clause, 0, *hints, 0])))
            lines.append(" ".join(map(str, [m + len(lines) + 1, 0, *range(1, m + len(lines) + 1), 0])))
            text = "\n".join(lines) + "\n"
            assert not both_paths(c, text, allow_vacuous_rat=True).accepted


@compiled
class TestParity:
    def test_pure_and_compiled_agree_on_mutants(self):
        rng = random.Random(31)
        for name, sector in (("steane", "x"), ("shor", "z")):
            cnf, proof = sector_proof(name, sector, 2)
            p = parse_lrat(proof)
            for _ in range(200):
                _, mutant = mutate_proof(rng, p, cnf.num_vars)
                text = render_lrat(mutant)
                assert check_lrat_text(cnf, text) == check_lrat_text(cnf, text, pure=True)

    def test_pure_and_compiled_agree_on_garbage(self):
        rng = random.Random(37)
        alphabet = ["0", "1", "-1", "2", "d", "3", "4", " ", "\n", "x", "-", "\t"]
        for _ in range(500):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 30)))
            assert check_lrat_text(UNIT_PAIR, text) == check_lrat_text(UNIT_PAIR, text, pure=True)

    def test_structured_proof_matches_text(self):
        proof = LratProof([Add(3, (), (1, 2))])
        assert check_lrat(UNIT_PAIR, proof) == check_lrat_text(UNIT_PAIR, render_lrat(proof))
