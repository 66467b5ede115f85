# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled LRAT parse-and-check.  Same grammar, rules and rejection messages as
``cert.parse_lrat`` followed by ``cert.check_lrat``."""

from libc.stdlib cimport llabs
from libcpp cimport bool as cbool
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cdef struct Line:
    int kind          # 0 add, 1 delete
    long long id
    size_t lits       # arena offset of clause literals (add) or deleted ids (delete)
    size_t nlits
    size_t hints
    size_t nhints
    long long lineno


class _Fail(Exception):
    pass


class Reject(Exception):
    def __init__(self, msg, ident):
        super().__init__(msg)
        self.ident = ident


cdef inline cbool is_space(unsigned char ch) noexcept nogil:
    return ch == 32 or (9 <= ch <= 13)


cdef class _Checker:
    cdef int nv
    cdef cbool contiguous
    cdef cbool vacuous_rat
    # clause db: id -> slot; slot data in cl_arena
    cdef unordered_map[long long, int] slot_of
    cdef vector[size_t] cl_off
    cdef vector[size_t] cl_len
    cdef vector[char] cl_alive
    cdef vector[long long] cl_id
    cdef vector[long long] cl_arena
    cdef vector[char] val          # indexed by literal code
    cdef vector[int] assigned
    cdef vector[Line] lines
    cdef vector[long long] arena

    def __init__(self, int num_vars, clauses, cbool contiguous, cbool vacuous_rat):
        self.nv = num_vars
        self.contiguous = contiguous
        self.vacuous_rat = vacuous_rat
        self.val.assign(2 * num_vars + 2, 0)
        cdef long long ident = 0
        for clause in clauses:
            ident += 1
            self._add_clause(ident, [int(x) for x in clause])

    cdef void _add_clause(self, long long ident, lits):
        self._new_slot(ident, len(lits))
        for x in lits:
            self.cl_arena.push_back(x)

    cdef void _new_slot(self, long long ident, size_t n):
        self.slot_of[ident] = self.cl_off.size()
        self.cl_off.push_back(self.cl_arena.size())
        self.cl_len.push_back(n)
        self.cl_alive.push_back(1)
        self.cl_id.push_back(ident)

    cdef inline int code(self, long long lit) noexcept nogil:
        return 2 * (<int>llabs(lit) - 1) + (1 if lit < 0 else 0)

    cdef inline void assign(self, long long lit):
        cdef int c = self.code(lit)
        if not self.val[c]:
            self.val[c] = 1
            self.assigned.push_back(c)

    cdef inline cbool is_true(self, long long lit) noexcept nogil:
        return self.val[self.code(lit)] != 0

    cdef void undo(self, size_t mark):
        while self.assigned.size() > mark:
            self.val[self.assigned.back()] = 0
            self.assigned.pop_back()

    cdef int slot(self, long long ident):
        if self.slot_of.count(ident) == 0:
            return -1
        cdef int s = self.slot_of[ident]
        return s if self.cl_alive[s] else -1

    # parsing -----------------------------------------------------------------

    cdef parse(self, const unsigned char[:] data, long long num_clauses):
        cdef size_t n = data.shape[0], pos = 0, start, end, t, k, z1, ntok
        cdef long long lineno = 0, last_id = num_clauses, value, ident
        cdef vector[size_t] tok_s, tok_e
        cdef vector[long long] nums
        cdef unordered_set[long long] live
        cdef cbool neg, is_del
        cdef Line ln
        cdef long long i
        for i in range(1, num_clauses + 1):
            live.insert(i)
        while pos <= n:
            lineno += 1
            start = pos
            while pos < n and data[pos] != 10:
                pos += 1
            end = pos
            pos += 1
            tok_s.clear()
            tok_e.clear()
            k = start
            while k < end:
                while k < end and is_space(data[k]):
                    k += 1
                if k >= end:
                    break
                tok_s.push_back(k)
                while k < end and not is_space(data[k]):
                    k += 1
                tok_e.push_back(k)
            ntok = tok_s.size()
            if ntok == 0:
                continue
            if tok_e[0] - tok_s[0] == 1 and data[tok_s[0]] == 99:  # "c"
                continue
            is_del = ntok >= 2 and tok_e[1] - tok_s[1] == 1 and data[tok_s[1]] == 100  # "d"
            nums.clear()
            for t in range(ntok):
                if is_del and t == 1:
                    continue
                k = tok_s[t]
                neg = data[k] == 45
                if neg:
                    k += 1
                if tok_e[t] - k < 1 or tok_e[t] - k > 18:
                    raise _Fail(lineno, "bad integer token")
                value = 0
                while k < tok_e[t]:
                    if data[k] < 48 or data[k] > 57:
                        raise _Fail(lineno, "bad integer token")
                    value = value * 10 + (data[k] - 48)
                    k += 1
                nums.push_back(-value if neg else value)
            if is_del:
                if nums.back() != 0:
                    raise _Fail(lineno, "deletion must end with a single 0")
                for t in range(1, nums.size() - 1 if nums.size() >= 2 else 1):
                    if nums[t] == 0:
                        raise _Fail(lineno, "deletion must end with a single 0")
                if nums[0] < 0:
                    raise _Fail(lineno, "negative id")
                ln.kind = 1
                ln.id = nums[0]
                ln.lits = self.arena.size()
                ln.nlits = 0
                ln.hints = 0
                ln.nhints = 0
                ln.lineno = lineno
                for t in range(1, nums.size() - 1 if nums.size() >= 2 else 1):
                    if nums[t] <= 0:
                        raise _Fail(lineno, "deletion ids must be positive")
                for t in range(1, nums.size() - 1 if nums.size() >= 2 else 1):
                    if num_clauses >= 0:
                        if live.find(nums[t]) == live.end():
                            raise _Fail(lineno, f"deletion of unknown clause {nums[t]}")
                        live.erase(nums[t])
                    self.arena.push_back(nums[t])
                    ln.nlits += 1
                self.lines.push_back(ln)
                continue
            ident = nums[0]
            z1 = 0
            for t in range(1, nums.size()):
                if nums[t] == 0:
                    z1 = t
                    break
            if z1 == 0:
                raise _Fail(lineno, "missing 0 after clause literals")
            if nums.size() < z1 + 2 or nums.back() != 0:
                raise _Fail(lineno, "hints must end with a single 0")
            for t in range(z1 + 1, nums.size() - 1):
                if nums[t] == 0:
                    raise _Fail(lineno, "hints must end with a single 0")
            if ident <= last_id:
                raise _Fail(lineno, f"id {ident} is not greater than {last_id}")
            ln.kind = 0
            ln.id = ident
            ln.lineno = lineno
            ln.lits = self.arena.size()
            ln.nlits = z1 - 1
            for t in range(1, z1):
                self.arena.push_back(nums[t])
            ln.hints = self.arena.size()
            ln.nhints = nums.size() - 1 - (z1 + 1)
            for t in range(z1 + 1, nums.size() - 1):
                if num_clauses >= 0 and nums[t] > 0 and live.find(nums[t]) == live.end():
                    raise _Fail(lineno, f"hint {nums[t]} refers to no live clause")
                self.arena.push_back(nums[t])
            if num_clauses >= 0:
                live.insert(ident)
            last_id = ident
            self.lines.push_back(ln)

    # checking ----------------------------------------------------------------

    cdef cbool propagate(self, size_t off, size_t cnt, long long ident) except *:
        """Hints ``arena[off:off+cnt]``; True once the last hint conflicts."""
        cdef size_t pos, k, s
        cdef long long h, lit, unit
        for pos in range(cnt):
            h = self.arena[off + pos]
            s = self.slot(h) if h > 0 else <size_t>-1
            if h <= 0 or <int>s < 0:
                raise Reject(f"hint {h} refers to no live clause", ident)
            unit = 0
            for k in range(self.cl_len[s]):
                lit = self.cl_arena[self.cl_off[s] + k]
                if self.is_true(lit):
                    raise Reject(f"hint {h} is satisfied", ident)
                if not self.is_true(-lit):
                    if unit:
                        raise Reject(f"hint {h} is not unit", ident)
                    unit = lit
            if unit == 0:
                if pos != cnt - 1:
                    raise Reject(f"hints continue after conflict at {h}", ident)
                return True
            self.assign(unit)
        return False

    cdef check_add(self, Line ln):
        cdef long long ident = ln.id, lit, pivot, cid, h
        cdef size_t a, b, split, k, mark, mark2, s
        cdef unordered_set[long long] seen
        cdef unordered_map[long long, size_t] group_at
        cdef vector[long long] order
        cdef cbool blocked
        cdef vector[size_t] g_off, g_cnt
        for a in range(ln.nlits):
            seen.insert(self.arena[ln.lits + a])
        if seen.size() != ln.nlits:
            raise Reject("repeated literal in clause", ident)
        for a in range(ln.nlits):
            if seen.find(-self.arena[ln.lits + a]) != seen.end():
                raise Reject("tautological clause", ident)
        self.undo(0)
        for a in range(ln.nlits):
            self.assign(-self.arena[ln.lits + a])
        split = ln.nhints
        for a in range(ln.nhints):
            if self.arena[ln.hints + a] < 0:
                split = a
                break
        if self.propagate(ln.hints, split, ident):
            if split < ln.nhints:
                raise Reject("RAT hints after a RUP conflict", ident)
            return
        if split == ln.nhints and not (self.vacuous_rat and ln.nlits > 0):
            raise Reject("hints do not produce a conflict", ident)
        if ln.nlits == 0:
            raise Reject("empty clause cannot be RAT", ident)
        pivot = self.arena[ln.lits]
        # hint groups: [-cid, h, h, ...]
        a = split
        while a < ln.nhints:
            cid = -self.arena[ln.hints + a]
            if group_at.find(cid) != group_at.end():
                raise Reject(f"duplicate RAT group {cid}", ident)
            b = a + 1
            while b < ln.nhints and self.arena[ln.hints + b] > 0:
                b += 1
            group_at[cid] = g_off.size()
            g_off.push_back(ln.hints + a + 1)
            g_cnt.push_back(b - a - 1)
            order.push_back(cid)
            a = b
        for k in range(order.size()):
            cid = order[k]
            s = self.slot(cid) if cid > 0 else <size_t>-1
            if cid <= 0 or <int>s < 0 or not self._contains(s, -pivot):
                raise Reject(f"RAT group {cid} names no live clause containing {-pivot}", ident)
        mark = self.assigned.size()
        for s in range(self.cl_off.size()):
            if not self.cl_alive[s] or not self._contains(s, -pivot):
                continue
            cid = self.cl_id[s]
            blocked = False
            for k in range(self.cl_len[s]):
                lit = self.cl_arena[self.cl_off[s] + k]
                if lit == -pivot:
                    continue
                if self.is_true(lit):
                    blocked = True
                    break
                self.assign(-lit)
            if blocked:
                self.undo(mark)
                continue
            if group_at.find(cid) == group_at.end():
                raise Reject(f"no RAT hints for clause {cid}", ident)
            b = group_at[cid]
            if not self.propagate(g_off[b], g_cnt[b], ident):
                raise Reject(f"RAT group {cid} does not produce a conflict", ident)
            self.undo(mark)

    cdef cbool _contains(self, size_t s, long long lit):
        cdef size_t k
        for k in range(self.cl_len[s]):
            if self.cl_arena[self.cl_off[s] + k] == lit:
                return True
        return False

    cdef run(self, long long m):
        cdef long long last_id = m, added = 0, deleted = 0, lit
        cdef cbool empty = False
        cdef size_t i, k
        cdef Line ln
        cdef int s
        try:
            for i in range(self.lines.size()):
                ln = self.lines[i]
                if ln.kind == 1:
                    if self.contiguous and ln.id != last_id:
                        raise Reject(f"deletion line carries id {ln.id}, expected {last_id}", ln.id)
                    for k in range(ln.nlits):
                        s = self.slot(self.arena[ln.lits + k])
                        if s < 0:
                            raise Reject(f"deletion of unknown clause {self.arena[ln.lits + k]}", ln.id)
                        self.cl_alive[s] = 0
                        self.slot_of.erase(self.arena[ln.lits + k])
                    deleted += ln.nlits
                    continue
                if ln.id <= last_id:
                    raise Reject(f"id {ln.id} is not greater than {last_id}", ln.id)
                if self.contiguous and ln.id != last_id + 1:
                    raise Reject(f"id {ln.id} skips ahead of {last_id + 1}", ln.id)
                for k in range(ln.nlits):
                    lit = self.arena[ln.lits + k]
                    if lit == 0 or llabs(lit) > self.nv:
                        raise Reject(f"literal {lit} out of range", ln.id)
                self.check_add(ln)
                self._new_slot(ln.id, ln.nlits)
                for k in range(ln.nlits):
                    self.cl_arena.push_back(self.arena[ln.lits + k])
                last_id = ln.id
                added += 1
                if ln.nlits == 0:
                    empty = True
        except Reject as rej:
            return (False, f"clause {rej.ident}: {rej}", rej.ident, added, deleted)
        if not empty:
            return (False, "incomplete: no empty clause derived", None, added, deleted)
        return (True, "", None, added, deleted)


def check_bytes(int num_vars, clauses, data, cbool contiguous=True, cbool vacuous_rat=False):
    """Parse and check ``data`` against the CNF; returns ``(accepted, reason, failed_id, added, deleted)``."""
    if isinstance(data, str):
        data = data.encode()
    chk = _Checker(num_vars, clauses, contiguous, vacuous_rat)
    try:
        chk.parse(data, len(clauses))
    except _Fail as exc:
        lineno, msg = exc.args
        return (False, f"parse error: line {lineno}: {msg}", None, 0, 0)
    return chk.run(len(clauses))
