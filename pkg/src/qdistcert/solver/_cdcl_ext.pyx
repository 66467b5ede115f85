# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CDCL core.  Mirrors ``_cdcl_py`` operation for operation, so both
produce the same models and byte-identical LRAT proofs for the same seed."""

from libc.math cimport pow
from libc.stdint cimport uint64_t
from libcpp cimport bool as cbool
from libcpp.algorithm cimport sort, stable_sort
from libcpp.pair cimport pair
from libcpp.string cimport string, to_string
from libcpp.vector cimport vector
from posix.time cimport CLOCK_MONOTONIC, clock_gettime, timespec

cdef enum:
    UNASSIGNED = 0
    TRUE = 1
    FALSE = -1
    TIME_CHECK_EVERY = 64
    R_UNKNOWN = 0
    R_SAT = 10
    R_UNSAT = 20

cdef double VAR_DECAY = 0.95
cdef double CLA_DECAY = 0.999
cdef double RESTART_UNIT = 100.0

SAT, UNSAT, UNKNOWN = R_SAT, R_UNSAT, R_UNKNOWN


cdef double luby(double y, long long x) noexcept nogil:
    cdef long long size = 1, seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return pow(y, <double>seq)


cdef double now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef inline long long ext_lit(int lit) noexcept nogil:
    return -((lit >> 1) + 1) if lit & 1 else (lit >> 1) + 1


cdef extern from *:
    """
    #include <vector>
    struct ActLess {
        const std::vector<double>* act;
        bool operator()(int a, int b) const { return (*act)[a] < (*act)[b]; }
    };
    static inline void stable_sort_by_act(std::vector<int>& v, const std::vector<double>& act) {
        ActLess cmp{&act};
        std::stable_sort(v.begin(), v.end(), cmp);
    }
    """
    void stable_sort_by_act(vector[int]& v, const vector[double]& act) nogil


cdef class CdclCore:
    cdef int nv
    cdef cbool proof_enabled
    cdef vector[signed char] val
    cdef vector[int] level, reason, trail_pos, polarity, seen
    cdef vector[long long] unit_id
    cdef vector[double] activity, cact
    cdef double var_inc, cla_inc, max_learnts
    cdef vector[int] trail, trail_lim, heap, heap_idx, learnts
    cdef int qhead
    cdef vector[vector[int]] watches, cls
    cdef vector[long long] cid
    cdef vector[char] learnt_flag, alive
    cdef long long conflicts, decisions, propagations, next_id
    cdef int status
    cdef cbool ok
    # proof records: [0, id, nlits, lits..., nhints, hints...] or [1, id, n, ids...]
    cdef vector[long long] prf
    # scratch for analysis
    cdef vector[int] out, keep, zero_vars
    cdef vector[pair[int, int]] used
    cdef vector[long long] hints

    def __init__(self, int num_vars, clauses, proof=False, seed=0):
        cdef int v, lit, ci
        cdef uint64_t st, z
        self.nv = num_vars
        self.proof_enabled = bool(proof)
        self.val.assign(2 * num_vars, UNASSIGNED)
        self.level.assign(num_vars, 0)
        self.reason.assign(num_vars, -1)
        self.trail_pos.assign(num_vars, 0)
        self.polarity.assign(num_vars, 1)
        self.seen.assign(num_vars, 0)
        self.unit_id.assign(num_vars, 0)
        self.activity.assign(num_vars, 0.0)
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.qhead = 0
        self.watches.resize(2 * num_vars)
        self.conflicts = self.decisions = self.propagations = 0
        self.status = R_UNKNOWN
        self.ok = True
        if seed:
            st = <uint64_t>seed
            for v in range(num_vars):
                st = st + 0x9E3779B97F4A7C15ULL
                z = st
                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
                z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
                z = z ^ (z >> 31)
                self.activity[v] = <double>(z % 1000) * 1e-6
        self.heap_idx.assign(num_vars, -1)
        for v in range(num_vars):
            self._heap_insert(v)

        self.next_id = len(clauses) + 1
        cdef vector[int] units
        cdef vector[int] lits
        cdef vector[int] single
        for idx, clause in enumerate(clauses):
            ident = idx + 1
            lits.clear()
            seen_lits = set()
            taut = False
            for x in clause:
                lit = 2 * (abs(x) - 1) + (1 if x < 0 else 0)
                if lit ^ 1 in seen_lits:
                    taut = True
                    break
                if lit not in seen_lits:
                    seen_lits.add(lit)
                    lits.push_back(lit)
            if taut:
                continue
            if lits.size() == 0:
                self._final(lits, ident)
                return
            ci = self._store(lits, ident, False)
            if lits.size() == 1:
                units.push_back(ci)
            else:
                self.watches[lits[0]].push_back(ci)
                self.watches[lits[1]].push_back(ci)
        self.max_learnts = max(self.cls.size() / 3.0, 2000.0)
        for ci in units:
            lit = self.cls[ci][0]
            if self.val[lit] == FALSE:
                single.clear()
                single.push_back(lit)
                self._final(single, self.cid[ci])
                return
            if self.val[lit] == UNASSIGNED:
                self._enqueue(lit, ci)

    # bookkeeping ------------------------------------------------------------

    cdef int _store(self, vector[int]& lits, long long ident, cbool learnt) noexcept nogil:
        cdef int ci = self.cls.size()
        self.cls.push_back(lits)
        self.cid.push_back(ident)
        self.learnt_flag.push_back(learnt)
        self.cact.push_back(0.0)
        self.alive.push_back(True)
        return ci

    cdef void _emit_add(self, long long ident, vector[int]* lits, vector[long long]& hints) noexcept nogil:
        cdef size_t k
        self.prf.push_back(0)
        self.prf.push_back(ident)
        if lits == NULL:
            self.prf.push_back(0)
        else:
            self.prf.push_back(lits.size())
            for k in range(lits.size()):
                self.prf.push_back(ext_lit(lits[0][k]))
        self.prf.push_back(hints.size())
        for k in range(hints.size()):
            self.prf.push_back(hints[k])

    cdef void _final(self, vector[int]& lits, long long clause_id) noexcept nogil:
        cdef vector[long long] h
        cdef size_t k
        self.ok = False
        self.status = R_UNSAT
        if self.proof_enabled:
            for k in range(lits.size()):
                h.push_back(self.unit_id[lits[k] >> 1])
            h.push_back(clause_id)
            self._emit_add(self.next_id, NULL, h)
            self.next_id += 1

    cdef void _enqueue(self, int lit, int ci) noexcept nogil:
        cdef int v = lit >> 1
        cdef vector[long long] h
        cdef vector[int] unit
        cdef size_t k
        self.val[lit] = TRUE
        self.val[lit ^ 1] = FALSE
        self.level[v] = self.trail_lim.size()
        self.reason[v] = ci
        self.trail_pos[v] = self.trail.size()
        self.trail.push_back(lit)
        if self.proof_enabled and self.trail_lim.size() == 0 and ci >= 0:
            if self.cls[ci].size() == 1:
                self.unit_id[v] = self.cid[ci]
            else:
                for k in range(1, self.cls[ci].size()):
                    h.push_back(self.unit_id[self.cls[ci][k] >> 1])
                h.push_back(self.cid[ci])
                unit.push_back(lit)
                self._emit_add(self.next_id, &unit, h)
                self.unit_id[v] = self.next_id
                self.next_id += 1

    # heap -------------------------------------------------------------------

    cdef inline cbool _before(self, int a, int b) noexcept nogil:
        return self.activity[a] > self.activity[b] or (self.activity[a] == self.activity[b] and a < b)

    cdef void _sift_up(self, int i) noexcept nogil:
        cdef int v = self.heap[i]
        cdef int parent, p
        while i > 0:
            parent = (i - 1) >> 1
            p = self.heap[parent]
            if not self._before(v, p):
                break
            self.heap[i] = p
            self.heap_idx[p] = i
            i = parent
        self.heap[i] = v
        self.heap_idx[v] = i

    cdef void _sift_down(self, int i) noexcept nogil:
        cdef int v = self.heap[i]
        cdef int size = self.heap.size()
        cdef int child, c
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and self._before(self.heap[child + 1], self.heap[child]):
                child += 1
            c = self.heap[child]
            if not self._before(c, v):
                break
            self.heap[i] = c
            self.heap_idx[c] = i
            i = child
        self.heap[i] = v
        self.heap_idx[v] = i

    cdef void _heap_insert(self, int v) noexcept nogil:
        if self.heap_idx[v] >= 0:
            return
        self.heap.push_back(v)
        self.heap_idx[v] = self.heap.size() - 1
        self._sift_up(self.heap.size() - 1)

    cdef int _heap_pop(self) noexcept nogil:
        cdef int top = self.heap[0]
        cdef int last = self.heap.back()
        self.heap.pop_back()
        self.heap_idx[top] = -1
        if self.heap.size() > 0:
            self.heap[0] = last
            self.heap_idx[last] = 0
            self._sift_down(0)
        return top

    cdef void _bump_var(self, int v) noexcept nogil:
        cdef int u
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(self.nv):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_idx[v] >= 0:
            self._sift_up(self.heap_idx[v])

    cdef void _bump_clause(self, int ci) noexcept nogil:
        cdef size_t k
        self.cact[ci] += self.cla_inc
        if self.cact[ci] > 1e20:
            for k in range(self.learnts.size()):
                self.cact[self.learnts[k]] *= 1e-20
            self.cla_inc *= 1e-20

    # search -----------------------------------------------------------------

    cdef int _propagate(self) noexcept nogil:
        cdef int p, false_lit, ci, first, q, tmp
        cdef size_t i, j, end, k, csize
        cdef vector[int]* ws
        cdef vector[int]* c
        cdef cbool found
        while self.qhead < <int>self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = &self.watches[false_lit]
            i = 0
            j = 0
            end = ws.size()
            while i < end:
                ci = ws[0][i]
                i += 1
                if not self.alive[ci]:
                    continue
                c = &self.cls[ci]
                if c[0][0] == false_lit:
                    c[0][0] = c[0][1]
                    c[0][1] = false_lit
                first = c[0][0]
                if self.val[first] == TRUE:
                    ws[0][j] = ci
                    j += 1
                    continue
                found = False
                csize = c.size()
                for k in range(2, csize):
                    q = c[0][k]
                    if self.val[q] != FALSE:
                        c[0][1] = q
                        c[0][k] = false_lit
                        self.watches[q].push_back(ci)
                        found = True
                        break
                if not found:
                    ws[0][j] = ci
                    j += 1
                    if self.val[first] == FALSE:
                        while i < end:
                            ws[0][j] = ws[0][i]
                            j += 1
                            i += 1
                        ws.resize(j)
                        self.qhead = self.trail.size()
                        return ci
                    self._enqueue(first, ci)
            ws.resize(j)
        return -1

    cdef int _analyze(self, int confl) noexcept nogil:
        """Fills ``self.keep`` and ``self.hints``; returns the backjump level."""
        cdef int dl = self.trail_lim.size()
        cdef int path = 0, p = -1, index = self.trail.size() - 1
        cdef int ci = confl, q, v, u, r, x, mx, bt, tmp
        cdef size_t k, start, kk
        cdef vector[int]* c
        cdef vector[int]* rc
        cdef cbool removable
        self.out.clear()
        self.out.push_back(-1)
        self.used.clear()
        self.zero_vars.clear()
        while True:
            if self.learnt_flag[ci]:
                self._bump_clause(ci)
            c = &self.cls[ci]
            start = 0 if p == -1 else 1
            for k in range(start, c.size()):
                q = c[0][k]
                v = q >> 1
                if self.seen[v]:
                    continue
                if self.level[v] > 0:
                    self.seen[v] = 1
                    self._bump_var(v)
                    if self.level[v] >= dl:
                        path += 1
                    else:
                        self.out.push_back(q)
                elif self.proof_enabled:
                    self.seen[v] = 2
                    self.zero_vars.push_back(v)
            while self.seen[self.trail[index] >> 1] != 1:
                index -= 1
            p = self.trail[index]
            index -= 1
            v = p >> 1
            self.seen[v] = 0
            path -= 1
            if path == 0:
                break
            ci = self.reason[v]
            self.used.push_back(pair[int, int](self.trail_pos[v], ci))
        self.out[0] = p ^ 1

        self.keep.clear()
        self.keep.push_back(self.out[0])
        for k in range(1, self.out.size()):
            q = self.out[k]
            v = q >> 1
            r = self.reason[v]
            if r < 0:
                self.keep.push_back(q)
                continue
            rc = &self.cls[r]
            removable = True
            for kk in range(1, rc.size()):
                u = rc[0][kk] >> 1
                if self.seen[u] != 1 and self.level[u] != 0:
                    removable = False
                    break
            if not removable:
                self.keep.push_back(q)
                continue
            self.used.push_back(pair[int, int](self.trail_pos[v], r))
            if self.proof_enabled:
                for kk in range(1, rc.size()):
                    u = rc[0][kk] >> 1
                    if self.level[u] == 0 and self.seen[u] == 0:
                        self.seen[u] = 2
                        self.zero_vars.push_back(u)
        for k in range(1, self.out.size()):
            self.seen[self.out[k] >> 1] = 0
        for k in range(self.zero_vars.size()):
            self.seen[self.zero_vars[k]] = 0

        self.hints.clear()
        if self.proof_enabled:
            sort(self.used.begin(), self.used.end())
            for k in range(self.zero_vars.size()):
                self.hints.push_back(self.unit_id[self.zero_vars[k]])
            for k in range(self.used.size()):
                self.hints.push_back(self.cid[self.used[k].second])
            self.hints.push_back(self.cid[confl])

        if self.keep.size() == 1:
            return 0
        mx = 1
        for k in range(2, self.keep.size()):
            if self.level[self.keep[k] >> 1] > self.level[self.keep[mx] >> 1]:
                mx = k
        tmp = self.keep[1]
        self.keep[1] = self.keep[mx]
        self.keep[mx] = tmp
        return self.level[self.keep[1] >> 1]

    cdef void _cancel_until(self, int lvl) noexcept nogil:
        cdef int stop, k, lit, v
        if <int>self.trail_lim.size() <= lvl:
            return
        stop = self.trail_lim[lvl]
        k = self.trail.size() - 1
        while k >= stop:
            lit = self.trail[k]
            v = lit >> 1
            self.polarity[v] = lit & 1
            self.val[lit] = UNASSIGNED
            self.val[lit ^ 1] = UNASSIGNED
            self.reason[v] = -1
            self._heap_insert(v)
            k -= 1
        self.trail.resize(stop)
        self.trail_lim.resize(lvl)
        self.qhead = self.trail.size()

    cdef cbool _locked(self, int ci) noexcept nogil:
        cdef int first = self.cls[ci][0]
        return self.reason[first >> 1] == ci and self.val[first] == TRUE

    cdef void _compact_learnts(self) noexcept nogil:
        cdef size_t k, j = 0
        for k in range(self.learnts.size()):
            if self.alive[self.learnts[k]]:
                self.learnts[j] = self.learnts[k]
                j += 1
        self.learnts.resize(j)

    cdef void _reduce_db(self) noexcept nogil:
        cdef vector[int] cands
        cdef size_t k, half
        cdef int ci
        self._compact_learnts()
        for k in range(self.learnts.size()):
            ci = self.learnts[k]
            if self.cls[ci].size() > 2 and not self._locked(ci):
                cands.push_back(ci)
        stable_sort_by_act(cands, self.cact)
        half = cands.size() // 2
        if half > 0:
            for k in range(half):
                self.alive[cands[k]] = False
            if self.proof_enabled:
                self.prf.push_back(1)
                self.prf.push_back(self.next_id - 1)
                self.prf.push_back(half)
                for k in range(half):
                    self.prf.push_back(self.cid[cands[k]])
            self._compact_learnts()
        self.max_learnts *= 1.1

    cdef int _search(self, double timeout, long long conflict_limit) noexcept nogil:
        cdef double deadline = now() + timeout if timeout > 0 else 0.0
        cdef long long restarts = 0, since_restart = 0
        cdef double restart_limit = luby(2.0, restarts) * RESTART_UNIT
        cdef int confl, bt, ci, v, u
        cdef long long ident
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                since_restart += 1
                if self.trail_lim.size() == 0:
                    self._final(self.cls[confl], self.cid[confl])
                    return R_UNSAT
                bt = self._analyze(confl)
                self._cancel_until(bt)
                ident = self.next_id
                self.next_id += 1
                if self.proof_enabled:
                    self._emit_add(ident, &self.keep, self.hints)
                ci = self._store(self.keep, ident, True)
                if self.keep.size() > 1:
                    self.watches[self.keep[0]].push_back(ci)
                    self.watches[self.keep[1]].push_back(ci)
                    self.learnts.push_back(ci)
                    self._bump_clause(ci)
                self._enqueue(self.keep[0], ci)
                self.var_inc /= VAR_DECAY
                self.cla_inc /= CLA_DECAY
                if self.conflicts % TIME_CHECK_EVERY == 0:
                    if deadline > 0 and now() > deadline:
                        self._cancel_until(0)
                        return R_UNKNOWN
                    if conflict_limit > 0 and self.conflicts >= conflict_limit:
                        self._cancel_until(0)
                        return R_UNKNOWN
            else:
                if since_restart >= restart_limit:
                    restarts += 1
                    restart_limit = luby(2.0, restarts) * RESTART_UNIT
                    since_restart = 0
                    self._cancel_until(0)
                    continue
                if <double>(<long long>self.learnts.size() - <long long>self.trail.size()) >= self.max_learnts:
                    self._reduce_db()
                v = -1
                while self.heap.size() > 0:
                    u = self._heap_pop()
                    if self.val[2 * u] == UNASSIGNED:
                        v = u
                        break
                if v < 0:
                    self.status = R_SAT
                    return R_SAT
                self.decisions += 1
                self.trail_lim.push_back(self.trail.size())
                self._enqueue(2 * v + self.polarity[v], -1)

    def solve(self, double timeout=0.0, long long conflict_limit=0):
        cdef int res
        if not self.ok:
            return self.status
        with nogil:
            res = self._search(timeout, conflict_limit)
        return res

    def model(self):
        return [self.val[2 * v] == TRUE for v in range(self.nv)]

    def stats(self):
        return {"conflicts": self.conflicts, "decisions": self.decisions, "propagations": self.propagations}

    def proof_text(self):
        cdef string s
        cdef size_t i = 0, n = self.prf.size(), k, cnt
        while i < n:
            if self.prf[i] == 0:
                s.append(to_string(self.prf[i + 1]))
                cnt = self.prf[i + 2]
                i += 3
                for k in range(cnt):
                    s.push_back(b' ')
                    s.append(to_string(self.prf[i + k]))
                i += cnt
                s.append(b" 0")
                cnt = self.prf[i]
                i += 1
                for k in range(cnt):
                    s.push_back(b' ')
                    s.append(to_string(self.prf[i + k]))
                i += cnt
                s.append(b" 0\n")
            else:
                s.append(to_string(self.prf[i + 1]))
                s.append(b" d")
                cnt = self.prf[i + 2]
                i += 3
                for k in range(cnt):
                    s.push_back(b' ')
                    s.append(to_string(self.prf[i + k]))
                i += cnt
                s.append(b" 0\n")
        return s.decode("ascii")
