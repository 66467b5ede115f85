"""Textual LRAT parsing and hint-guided checking.

The checker is deliberately strict: every hint must be unit or falsified at
the moment it is used, a conflict must be reached exactly at the last hint of
the group, and hints may only name live clauses.  It never searches.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .encode import Cnf

if os.environ.get("QDISTCERT_PURE") == "1":
    _ext = None
else:
    try:
        from . import _lrat_ext as _ext  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _ext = None


class LratParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass(frozen=True)
class Add:
    id: int
    clause: tuple[int, ...]
    hints: tuple[int, ...]
    line: int = 0


@dataclass(frozen=True)
class Delete:
    id: int
    ids: tuple[int, ...]
    line: int = 0


@dataclass
class LratProof:
    lines: list = field(default_factory=list)

    def additions(self) -> list[Add]:
        return [ln for ln in self.lines if isinstance(ln, Add)]


_TOKEN_RE = re.compile(rb"-?[0-9]{1,18}")


def _ints(tokens: list[bytes], lineno: int) -> list[int]:
    for t in tokens:
        if not _TOKEN_RE.fullmatch(t):
            raise LratParseError("bad integer token", lineno)
    return [int(t) for t in tokens]


def parse_lrat(data: bytes | str, num_clauses: int | None = None) -> LratProof:
    """Parse text LRAT; with ``num_clauses`` known, dangling and deleted hints are parse errors."""
    raw_bytes = data.encode() if isinstance(data, str) else data
    proof = LratProof()
    last_id = num_clauses or 0
    live: set[int] | None = set(range(1, num_clauses + 1)) if num_clauses is not None else None
    for lineno, raw in enumerate(raw_bytes.split(b"\n"), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == b"c":
            continue
        if len(tokens) >= 2 and tokens[1] == b"d":
            nums = _ints([tokens[0]] + tokens[2:], lineno)
            if nums[-1] != 0 or 0 in nums[1:-1]:
                raise LratParseError("deletion must end with a single 0", lineno)
            if nums[0] < 0:
                raise LratParseError("negative id", lineno)
            ids = tuple(nums[1:-1])
            if any(i <= 0 for i in ids):
                raise LratParseError("deletion ids must be positive", lineno)
            if live is not None:
                for i in ids:
                    if i not in live:
                        raise LratParseError(f"deletion of unknown clause {i}", lineno)
                    live.discard(i)
            proof.lines.append(Delete(nums[0], ids, lineno))
            continue
        nums = _ints(tokens, lineno)
        ident = nums[0]
        try:
            z1 = nums.index(0, 1)
        except ValueError:
            raise LratParseError("missing 0 after clause literals", lineno) from None
        if len(nums) < z1 + 2 or nums[-1] != 0 or 0 in nums[z1 + 1:-1]:
            raise LratParseError("hints must end with a single 0", lineno)
        if ident <= last_id:
            raise LratParseError(f"id {ident} is not greater than {last_id}", lineno)
        clause = tuple(nums[1:z1])
        hints = tuple(nums[z1 + 1:-1])
        if live is not None:
            for h in hints:
                if h > 0 and h not in live:
                    raise LratParseError(f"hint {h} refers to no live clause", lineno)
            live.add(ident)
        last_id = ident
        proof.lines.append(Add(ident, clause, hints, lineno))
    return proof


def render_lrat(p: LratProof) -> str:
    out = []
    for ln in p.lines:
        if isinstance(ln, Add):
            out.append(" ".join(map(str, [ln.id, *ln.clause, 0, *ln.hints, 0])))
        else:
            out.append(" ".join(map(str, [ln.id, "d", *ln.ids, 0])))
    return "\n".join(out) + ("\n" if out else "")


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    reason: str = ""
    failed_id: int | None = None
    added: int = 0
    deleted: int = 0

    def __bool__(self) -> bool:
        return self.accepted


class _Reject(Exception):
    def __init__(self, reason: str, ident: int | None):
        super().__init__(reason)
        self.ident = ident


def _propagate_hints(db: dict, assign: dict, hints, ident) -> bool:
    """Apply ``hints`` under ``assign`` (lit -> True); True once the last hint conflicts."""
    last = len(hints) - 1
    for pos, h in enumerate(hints):
        c = db.get(h)
        if c is None:
            raise _Reject(f"hint {h} refers to no live clause", ident)
        unit = 0
        for lit in c:
            if assign.get(lit):
                raise _Reject(f"hint {h} is satisfied", ident)
            if not assign.get(-lit):
                if unit:
                    raise _Reject(f"hint {h} is not unit", ident)
                unit = lit
        if unit == 0:
            if pos != last:
                raise _Reject(f"hints continue after conflict at {h}", ident)
            return True
        assign[unit] = True
    return False


def _check_add(db: dict, ln: Add, vacuous_rat: bool = False) -> None:
    ident = ln.id
    clause = ln.clause
    if len(set(clause)) != len(clause):
        raise _Reject("repeated literal in clause", ident)
    if any(-lit in clause for lit in clause):
        raise _Reject("tautological clause", ident)
    assign = {-lit: True for lit in clause}
    hints = ln.hints
    split = next((i for i, h in enumerate(hints) if h < 0), len(hints))
    rup, rest = hints[:split], hints[split:]
    if _propagate_hints(db, assign, rup, ident):
        if rest:
            raise _Reject("RAT hints after a RUP conflict", ident)
        return
    if not rest and not (vacuous_rat and clause):
        raise _Reject("hints do not produce a conflict", ident)
    if not clause:
        raise _Reject("empty clause cannot be RAT", ident)
    # RAT on the first literal
    pivot = clause[0]
    groups: dict[int, list[int]] = {}
    order: list[int] = []
    cur = None
    for h in rest:
        if h < 0:
            cur = -h
            if cur in groups:
                raise _Reject(f"duplicate RAT group {cur}", ident)
            groups[cur] = []
            order.append(cur)
        else:
            groups[cur].append(h)
    for cid in order:
        d = db.get(cid)
        if d is None or -pivot not in d:
            raise _Reject(f"RAT group {cid} names no live clause containing {-pivot}", ident)
    for cid in sorted(db):
        d = db[cid]
        if -pivot not in d:
            continue
        local = dict(assign)
        blocked = False
        for lit in d:
            if lit == -pivot:
                continue
            if local.get(lit):
                blocked = True
                break
            local[-lit] = True
        if blocked:
            continue
        if cid not in groups:
            raise _Reject(f"no RAT hints for clause {cid}", ident)
        if not _propagate_hints(db, local, groups[cid], ident):
            raise _Reject(f"RAT group {cid} does not produce a conflict", ident)


def check_lrat(c: Cnf, p: LratProof, *, contiguous: bool = True,
               allow_vacuous_rat: bool = False) -> CheckResult:
    """Accept iff every addition replays from its hints and some addition is the empty clause.

    With ``contiguous`` (the default) additions must be numbered ``m+1, m+2, ...``
    and each deletion line must carry the latest id, which is how CaDiCaL and the
    internal solver number their proofs.  Pass ``False`` to accept any increasing ids.

    A line whose hints reach no conflict must carry RAT groups.  With
    ``allow_vacuous_rat`` a non-empty line without groups is also accepted when
    every clause containing the negated pivot is blocked (as for fresh
    extension variables).  Off by default: a corrupted hint or literal can turn
    a RUP step into a vacuous RAT step that still checks.
    """
    db: dict[int, tuple[int, ...]] = {i + 1: tuple(cl) for i, cl in enumerate(c.clauses)}
    last_id = len(c.clauses)
    added = deleted = 0
    empty = False
    try:
        for ln in p.lines:
            if isinstance(ln, Delete):
                if contiguous and ln.id != last_id:
                    raise _Reject(f"deletion line carries id {ln.id}, expected {last_id}", ln.id)
                for i in ln.ids:
                    if db.pop(i, None) is None:
                        raise _Reject(f"deletion of unknown clause {i}", ln.id)
                deleted += len(ln.ids)
                continue
            if ln.id <= last_id:
                raise _Reject(f"id {ln.id} is not greater than {last_id}", ln.id)
            if contiguous and ln.id != last_id + 1:
                raise _Reject(f"id {ln.id} skips ahead of {last_id + 1}", ln.id)
            for lit in ln.clause:
                if lit == 0 or abs(lit) > c.num_vars:
                    raise _Reject(f"literal {lit} out of range", ln.id)
            _check_add(db, ln, allow_vacuous_rat)
            db[ln.id] = ln.clause
            last_id = ln.id
            added += 1
            if not ln.clause:
                empty = True
    except _Reject as rej:
        return CheckResult(False, f"clause {rej.ident}: {rej}", rej.ident, added, deleted)
    if not empty:
        return CheckResult(False, "incomplete: no empty clause derived", None, added, deleted)
    return CheckResult(True, "", None, added, deleted)


def check_lrat_text(c: Cnf, data: bytes | str, *, contiguous: bool = True,
                    allow_vacuous_rat: bool = False, pure: bool = False) -> CheckResult:
    """Parse then check; parse errors become rejections.  Uses the compiled path when built."""
    if _ext is not None and not pure:
        return CheckResult(*_ext.check_bytes(c.num_vars, c.clauses, data, contiguous,
                                                allow_vacuous_rat))
    try:
        p = parse_lrat(data, len(c.clauses))
    except LratParseError as exc:
        return CheckResult(False, f"parse error: {exc}")
    return check_lrat(c, p, contiguous=contiguous, allow_vacuous_rat=allow_vacuous_rat)
