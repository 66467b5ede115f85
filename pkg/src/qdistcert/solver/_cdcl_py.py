"""Pure-Python CDCL core; the compiled ``_cdcl_ext`` module follows it step for step.

Literals are encoded internally as ``2 * var + sign`` with 0-based variables.
Every learned clause can be logged as an LRAT addition whose hints are the
clauses resolved during conflict analysis, ordered by trail position.
"""
from __future__ import annotations

import time

UNASSIGNED, TRUE, FALSE = 0, 1, -1
VAR_DECAY = 0.95
CLA_DECAY = 0.999
RESTART_UNIT = 100
TIME_CHECK_EVERY = 64

SAT, UNSAT, UNKNOWN = 10, 20, 0


def luby(y: float, x: int) -> float:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


def splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return state, z ^ (z >> 31)


def _ext(lit: int) -> int:
    return -((lit >> 1) + 1) if lit & 1 else (lit >> 1) + 1


class CdclCore:
    """Conflict-driven clause learning with two watched literals, VSIDS and Luby restarts."""

    def __init__(self, num_vars: int, clauses, proof: bool = False, seed: int = 0):
        self.nv = nv = num_vars
        self.proof_enabled = proof
        self.proof: list[tuple] = []
        self.val = [UNASSIGNED] * (2 * nv)
        self.level = [0] * nv
        self.reason = [-1] * nv
        self.trail_pos = [0] * nv
        self.polarity = [1] * nv
        self.seen = [0] * nv
        self.unit_id = [0] * nv
        self.activity = [0.0] * nv
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list[int]] = [[] for _ in range(2 * nv)]
        self.cls: list[list[int]] = []
        self.cid: list[int] = []
        self.learnt_flag: list[bool] = []
        self.cact: list[float] = []
        self.alive: list[bool] = []
        self.learnts: list[int] = []
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.status = UNKNOWN
        self.ok = True

        if seed:
            st = seed
            for v in range(nv):
                st, r = splitmix64(st)
                self.activity[v] = (r % 1000) * 1e-6
        self.heap: list[int] = []
        self.heap_idx = [-1] * nv
        for v in range(nv):
            self._heap_insert(v)

        self.next_id = len(clauses) + 1
        units = []
        for idx, clause in enumerate(clauses):
            ident = idx + 1
            lits = []
            seen_lits = set()
            taut = False
            for x in clause:
                lit = 2 * (abs(x) - 1) + (1 if x < 0 else 0)
                if lit ^ 1 in seen_lits:
                    taut = True
                    break
                if lit not in seen_lits:
                    seen_lits.add(lit)
                    lits.append(lit)
            if taut:
                continue
            if not lits:
                self._final([], ident)
                return
            ci = self._store(lits, ident, False)
            if len(lits) == 1:
                units.append(ci)
            else:
                self.watches[lits[0]].append(ci)
                self.watches[lits[1]].append(ci)
        self.max_learnts = max(len(self.cls) / 3.0, 2000.0)
        for ci in units:
            lit = self.cls[ci][0]
            if self.val[lit] == FALSE:
                self._final([lit], self.cid[ci])
                return
            if self.val[lit] == UNASSIGNED:
                self._enqueue(lit, ci)

    # bookkeeping ------------------------------------------------------------

    def _store(self, lits, ident, learnt):
        ci = len(self.cls)
        self.cls.append(lits)
        self.cid.append(ident)
        self.learnt_flag.append(learnt)
        self.cact.append(0.0)
        self.alive.append(True)
        return ci

    def _final(self, lits, clause_id):
        """Record the empty clause: ``lits`` are all false at level 0."""
        self.ok = False
        self.status = UNSAT
        if self.proof_enabled:
            hints = [self.unit_id[lit >> 1] for lit in lits] + [clause_id]
            self.proof.append(("a", self.next_id, [], hints))
            self.next_id += 1

    def _enqueue(self, lit, ci):
        v = lit >> 1
        self.val[lit] = TRUE
        self.val[lit ^ 1] = FALSE
        self.level[v] = len(self.trail_lim)
        self.reason[v] = ci
        self.trail_pos[v] = len(self.trail)
        self.trail.append(lit)
        if self.proof_enabled and not self.trail_lim and ci >= 0:
            c = self.cls[ci]
            if len(c) == 1:
                self.unit_id[v] = self.cid[ci]
            else:
                hints = [self.unit_id[q >> 1] for q in c[1:]]
                hints.append(self.cid[ci])
                self.proof.append(("a", self.next_id, [_ext(lit)], hints))
                self.unit_id[v] = self.next_id
                self.next_id += 1

    # heap -------------------------------------------------------------------

    def _before(self, a, b):
        act = self.activity
        return act[a] > act[b] or (act[a] == act[b] and a < b)

    def _sift_up(self, i):
        heap, idx = self.heap, self.heap_idx
        v = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            p = heap[parent]
            if not self._before(v, p):
                break
            heap[i] = p
            idx[p] = i
            i = parent
        heap[i] = v
        idx[v] = i

    def _sift_down(self, i):
        heap, idx = self.heap, self.heap_idx
        v = heap[i]
        size = len(heap)
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and self._before(heap[child + 1], heap[child]):
                child += 1
            c = heap[child]
            if not self._before(c, v):
                break
            heap[i] = c
            idx[c] = i
            i = child
        heap[i] = v
        idx[v] = i

    def _heap_insert(self, v):
        if self.heap_idx[v] >= 0:
            return
        self.heap.append(v)
        self.heap_idx[v] = len(self.heap) - 1
        self._sift_up(len(self.heap) - 1)

    def _heap_pop(self):
        heap, idx = self.heap, self.heap_idx
        top = heap[0]
        last = heap.pop()
        idx[top] = -1
        if heap:
            heap[0] = last
            idx[last] = 0
            self._sift_down(0)
        return top

    def _bump_var(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(self.nv):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_idx[v] >= 0:
            self._sift_up(self.heap_idx[v])

    def _bump_clause(self, ci):
        self.cact[ci] += self.cla_inc
        if self.cact[ci] > 1e20:
            for cj in self.learnts:
                self.cact[cj] *= 1e-20
            self.cla_inc *= 1e-20

    # search -----------------------------------------------------------------

    def _propagate(self):
        val, cls, alive, watches, trail = self.val, self.cls, self.alive, self.watches, self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                if not alive[ci]:
                    continue
                c = cls[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == TRUE:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    q = c[k]
                    if val[q] != FALSE:
                        c[1] = q
                        c[k] = false_lit
                        watches[q].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if val[first] == FALSE:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        return -1

    def _analyze(self, confl):
        seen, level, reason, trail, cls = self.seen, self.level, self.reason, self.trail, self.cls
        dl = len(self.trail_lim)
        proof = self.proof_enabled
        out = [-1]
        used = []
        zero_vars = []
        path = 0
        p = -1
        index = len(trail) - 1
        ci = confl
        while True:
            if self.learnt_flag[ci]:
                self._bump_clause(ci)
            c = cls[ci]
            for k in range(0 if p == -1 else 1, len(c)):
                q = c[k]
                v = q >> 1
                if seen[v]:
                    continue
                if level[v] > 0:
                    seen[v] = 1
                    self._bump_var(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        out.append(q)
                elif proof:
                    seen[v] = 2
                    zero_vars.append(v)
            while seen[trail[index] >> 1] != 1:
                index -= 1
            p = trail[index]
            index -= 1
            v = p >> 1
            seen[v] = 0
            path -= 1
            if path == 0:
                break
            ci = reason[v]
            used.append((self.trail_pos[v], ci))
        out[0] = p ^ 1

        keep = [out[0]]
        for q in out[1:]:
            v = q >> 1
            r = reason[v]
            if r < 0:
                keep.append(q)
                continue
            rc = cls[r]
            removable = True
            for x in rc[1:]:
                u = x >> 1
                if seen[u] != 1 and level[u] != 0:
                    removable = False
                    break
            if not removable:
                keep.append(q)
                continue
            used.append((self.trail_pos[v], r))
            if proof:
                for x in rc[1:]:
                    u = x >> 1
                    if level[u] == 0 and seen[u] == 0:
                        seen[u] = 2
                        zero_vars.append(u)
        for q in out[1:]:
            seen[q >> 1] = 0
        for u in zero_vars:
            seen[u] = 0

        hints = None
        if proof:
            used.sort()
            hints = [self.unit_id[u] for u in zero_vars]
            hints.extend(self.cid[r] for _, r in used)
            hints.append(self.cid[confl])

        if len(keep) == 1:
            bt = 0
        else:
            mx = 1
            for k in range(2, len(keep)):
                if level[keep[k] >> 1] > level[keep[mx] >> 1]:
                    mx = k
            keep[1], keep[mx] = keep[mx], keep[1]
            bt = level[keep[1] >> 1]
        return keep, bt, hints

    def _cancel_until(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        trail, val = self.trail, self.val
        stop = self.trail_lim[lvl]
        for k in range(len(trail) - 1, stop - 1, -1):
            lit = trail[k]
            v = lit >> 1
            self.polarity[v] = lit & 1
            val[lit] = UNASSIGNED
            val[lit ^ 1] = UNASSIGNED
            self.reason[v] = -1
            self._heap_insert(v)
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    def _locked(self, ci):
        c = self.cls[ci]
        v = c[0] >> 1
        return self.reason[v] == ci and self.val[c[0]] == TRUE

    def _reduce_db(self):
        self.learnts = [ci for ci in self.learnts if self.alive[ci]]
        cands = [ci for ci in self.learnts if len(self.cls[ci]) > 2 and not self._locked(ci)]
        cands.sort(key=lambda ci: self.cact[ci])
        doomed = cands[: len(cands) // 2]
        if doomed:
            for ci in doomed:
                self.alive[ci] = False
            if self.proof_enabled:
                self.proof.append(("d", self.next_id - 1, [self.cid[ci] for ci in doomed]))
            self.learnts = [ci for ci in self.learnts if self.alive[ci]]
        self.max_learnts *= 1.1

    def solve(self, timeout: float = 0.0, conflict_limit: int = 0) -> int:
        if not self.ok:
            return self.status
        deadline = time.monotonic() + timeout if timeout > 0 else 0.0
        restarts = 0
        restart_limit = luby(2.0, restarts) * RESTART_UNIT
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self._final(self.cls[confl], self.cid[confl])
                    return UNSAT
                keep, bt, hints = self._analyze(confl)
                self._cancel_until(bt)
                ident = self.next_id
                self.next_id += 1
                if self.proof_enabled:
                    self.proof.append(("a", ident, [_ext(q) for q in keep], hints))
                ci = self._store(keep, ident, True)
                if len(keep) > 1:
                    self.watches[keep[0]].append(ci)
                    self.watches[keep[1]].append(ci)
                    self.learnts.append(ci)
                    self._bump_clause(ci)
                self._enqueue(keep[0], ci)
                self.var_inc /= VAR_DECAY
                self.cla_inc /= CLA_DECAY
                if self.conflicts % TIME_CHECK_EVERY == 0:
                    if deadline and time.monotonic() > deadline:
                        self._cancel_until(0)
                        return UNKNOWN
                    if conflict_limit and self.conflicts >= conflict_limit:
                        self._cancel_until(0)
                        return UNKNOWN
            else:
                if since_restart >= restart_limit:
                    restarts += 1
                    restart_limit = luby(2.0, restarts) * RESTART_UNIT
                    since_restart = 0
                    self._cancel_until(0)
                    continue
                if len(self.learnts) - len(self.trail) >= self.max_learnts:
                    self._reduce_db()
                v = -1
                while self.heap:
                    u = self._heap_pop()
                    if self.val[2 * u] == UNASSIGNED:
                        v = u
                        break
                if v < 0:
                    self.status = SAT
                    return SAT
                self.decisions += 1
                self.trail_lim.append(len(self.trail))
                self._enqueue(2 * v + self.polarity[v], -1)

    def model(self) -> list[bool]:
        return [self.val[2 * v] == TRUE for v in range(self.nv)]

    def stats(self) -> dict:
        return {"conflicts": self.conflicts, "decisions": self.decisions, "propagations": self.propagations}

    def proof_text(self) -> str:
        out = []
        for line in self.proof:
            if line[0] == "a":
                _, ident, lits, hints = line
                out.append(" ".join(map(str, [ident, *lits, 0, *hints, 0])))
            else:
                _, ident, ids = line
                out.append(" ".join(map(str, [ident, "d", *ids, 0])))
        return "\n".join(out) + ("\n" if out else "")
