"""Multi-tape deterministic Turing machines with quadruple-style transitions.

Every tape is a pair of stacks.  The head reads the top of the right stack;
the left stack holds the cells to the left of the head, nearest cell on top.
Tapes are kept canonical: neither stack ever has a blank at its bottom, so two
configurations describe the same tape exactly when their stacks are equal.
"""

from __future__ import annotations

import re
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import (
    DeterminismFirst,
    IllegalRubberOp,
    MalformedProgram,
    NotDeterministic,
    OracleMissing,
)

BLANK = "_"
ROLES = ("input", "output", "work", "history", "query")
KINDS = ("normal", "rubber")
RW, SHIFT, ORACLE = "rw", "shift", "oracle"
DEFAULT_STEP_CAP = 5_000_000

_ID = r"[^\s\[\],#]+"
_SYM_BAD = set(" \t\r\n,[]()#")


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class PolyBound:
    """q(n) = a * (n**k + 1)."""

    a: int
    k: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.k, int):
            raise ValueError("PolyBound coefficients must be integers")
        if self.a < 1 or self.k < 0:
            raise ValueError(f"bad PolyBound a={self.a} k={self.k}")

    def eval(self, n: int) -> int:
        return self.a * (n ** self.k + 1)

    __call__ = eval

    def below(self, other: "PolyBound") -> bool:
        """Strict order: compare the exponent first, then the coefficient."""
        return (self.k, self.a) < (other.k, other.a)

    def compose(self, inner: "PolyBound") -> "PolyBound":
        """A PolyBound dominating self(inner(n)) for every n >= 0."""
        # (n^j + 1)^k <= 2^k (n^(jk) + 1), so a((b(n^j+1))^k + 1) <= a((2b)^k + 1)(n^(jk) + 1)
        return PolyBound(self.a * ((2 * inner.a) ** self.k + 1), self.k * inner.k)

    def __add__(self, other: "PolyBound") -> "PolyBound":
        return PolyBound(self.a + other.a, max(self.k, other.k))

    def __str__(self):
        return f"{self.a}(n^{self.k}+1)"


# ---------------------------------------------------------------------------
# machine structure


@dataclass(frozen=True)
class TapeSpec:
    role: str
    kind: str = "normal"

    def __post_init__(self):
        if self.role not in ROLES:
            raise MalformedProgram(f"unknown tape role {self.role!r}")
        if self.kind not in KINDS:
            raise MalformedProgram(f"unknown tape kind {self.kind!r}")

    @property
    def rubber(self) -> bool:
        return self.kind == "rubber"


def _check_move(mv: str) -> None:
    if mv in ("L", "R", "S", "D"):
        return
    if len(mv) == 2 and mv[0] == "I" and mv[1] not in _SYM_BAD:
        return
    raise MalformedProgram(f"bad move {mv!r}")


@dataclass(frozen=True)
class Transition:
    """One quadruple.

    ``rw``: read ``read`` at ``source``, write ``write``, go to ``target``.
    ``shift``: apply ``moves`` and go to ``target``; keyed on ``source`` alone.
    ``oracle``: a reverse oracle call.  From the answer state ``source`` return
    to the query state ``target`` provided the query word's membership equals
    ``answer``; otherwise the machine halts.
    """

    kind: str
    source: str
    target: str
    read: tuple = ()
    write: tuple = ()
    moves: tuple = ()
    answer: bool | None = None
    oracle: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "read", tuple(self.read))
        object.__setattr__(self, "write", tuple(self.write))
        object.__setattr__(self, "moves", tuple(self.moves))
        if self.kind == RW:
            if len(self.read) != len(self.write) or not self.read:
                raise MalformedProgram(f"rw vectors differ in length: {self}")
            for s in self.read + self.write:
                if len(s) != 1 or s in _SYM_BAD:
                    raise MalformedProgram(f"bad symbol {s!r}")
        elif self.kind == SHIFT:
            if not self.moves:
                raise MalformedProgram("shift without moves")
            for mv in self.moves:
                _check_move(mv)
        elif self.kind == ORACLE:
            if self.answer is None or not self.oracle:
                raise MalformedProgram("reverse oracle transition needs an answer and a name")
        else:
            raise MalformedProgram(f"unknown transition kind {self.kind!r}")

    def sort_key(self):
        order = {RW: 0, SHIFT: 1, ORACLE: 2}[self.kind]
        return (self.source, order, self.read, self.target, self.write, self.moves,
                -1 if self.answer is None else int(self.answer), self.oracle or "")

    def format(self) -> str:
        if self.kind == RW:
            return f"rw: {self.source} [{','.join(self.read)}] -> {self.target} [{','.join(self.write)}]"
        if self.kind == SHIFT:
            mv = ",".join(f"I({m[1]})" if m[0] == "I" else m for m in self.moves)
            return f"shift: {self.source} -> {self.target} [{mv}]"
        return f"roracle: {self.source} -> {self.target} {'yes' if self.answer else 'no'} {self.oracle}"


class OracleSite(NamedTuple):
    query: str
    yes: str
    no: str
    name: str


@dataclass(frozen=True)
class Machine:
    name: str
    states: tuple
    start: str
    accept: str
    tapes: tuple
    transitions: tuple
    time_bound: PolyBound | None = None
    balance_bound: PolyBound | None = None
    oracle_sites: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(sorted(set(self.states))))
        object.__setattr__(self, "tapes", tuple(self.tapes))
        object.__setattr__(self, "transitions",
                           tuple(sorted(set(self.transitions), key=Transition.sort_key)))
        object.__setattr__(self, "oracle_sites",
                           tuple(sorted(OracleSite(*s) for s in self.oracle_sites)))
        self._check_structure()

    def _check_structure(self):
        st = set(self.states)
        if not re.fullmatch(_ID, self.name):
            raise MalformedProgram(f"bad machine name {self.name!r}")
        for s in self.states:
            if not re.fullmatch(_ID, s):
                raise MalformedProgram(f"bad state name {s!r}")
        if self.start not in st or self.accept not in st:
            raise MalformedProgram("start and accept must be declared states")
        roles = [t.role for t in self.tapes]
        if roles.count("input") != 1 or roles.count("output") != 1:
            raise MalformedProgram("need exactly one input tape and one output tape")
        T = len(self.tapes)
        query_states = set()
        for site in self.oracle_sites:
            for s in site[:3]:
                if s not in st:
                    raise MalformedProgram(f"oracle state {s!r} undeclared")
            if site.query == self.accept:
                raise MalformedProgram("accept state cannot issue oracle queries")
            if len({site.query, site.yes, site.no}) != 3:
                raise MalformedProgram("oracle states must be distinct")
            if site.query in query_states:
                raise MalformedProgram(f"state {site.query!r} has two oracle sites")
            query_states.add(site.query)
        if self.oracle_sites and "query" not in roles:
            raise MalformedProgram("oracle machine needs a query tape")
        for t in self.transitions:
            if t.source not in st or t.target not in st:
                raise MalformedProgram(f"transition mentions undeclared state: {t.format()}")
            if t.source == self.accept:
                raise MalformedProgram(f"transition leaves the accept state: {t.format()}")
            if t.source in query_states:
                raise MalformedProgram(f"oracle query state has ordinary transitions: {t.format()}")
            if t.kind == RW and len(t.read) != T:
                raise MalformedProgram(f"rw vector length differs from tape count: {t.format()}")
            if t.kind == SHIFT and len(t.moves) != T:
                raise MalformedProgram(f"shift vector length differs from tape count: {t.format()}")

    # -- derived views -----------------------------------------------------

    @property
    def oracle_states(self):
        return self.oracle_sites[0][:3] if self.oracle_sites else None

    @property
    def oracle_name(self):
        return self.oracle_sites[0].name if self.oracle_sites else None

    @cached_property
    def input_tape(self) -> int:
        return next(i for i, t in enumerate(self.tapes) if t.role == "input")

    @cached_property
    def output_tape(self) -> int:
        return next(i for i, t in enumerate(self.tapes) if t.role == "output")

    @cached_property
    def query_tape(self) -> int | None:
        return next((i for i, t in enumerate(self.tapes) if t.role == "query"), None)

    @cached_property
    def alphabet(self) -> tuple:
        syms = {BLANK, "0", "1"}
        for t in self.transitions:
            syms.update(t.read)
            syms.update(t.write)
            syms.update(m[1] for m in t.moves if m[0] == "I")
        return symbol_order(syms)

    @cached_property
    def by_source(self) -> dict:
        out = defaultdict(list)
        for t in self.transitions:
            out[t.source].append(t)
        return dict(out)

    @cached_property
    def rw_index(self) -> dict:
        return {(t.source, t.read): t for t in self.transitions if t.kind == RW}

    @cached_property
    def site_at(self) -> dict:
        return {s.query: s for s in self.oracle_sites}

    @property
    def has_reverse_oracle(self) -> bool:
        return any(t.kind == ORACLE for t in self.transitions)

    def with_bounds(self, time_bound=None, balance_bound=None, name=None) -> "Machine":
        return Machine(name or self.name, self.states, self.start, self.accept, self.tapes,
                       self.transitions, time_bound, balance_bound, self.oracle_sites)

    def format(self) -> str:
        return format_machine(self)


def symbol_order(syms: Iterable[str]) -> tuple:
    """Blank, 0, 1, then markers sorted; this is the engine's symbol numbering."""
    syms = set(syms)
    head = [s for s in (BLANK, "0", "1") if s in syms]
    return tuple(head + sorted(syms - {BLANK, "0", "1"}))


# ---------------------------------------------------------------------------
# text format


def format_machine(m: Machine) -> str:
    lines = [f"machine {m.name}",
             "tapes: " + ", ".join(f"{t.role}:{t.kind}" for t in m.tapes),
             "states: " + " ".join(m.states),
             f"start: {m.start}",
             f"accept: {m.accept}"]
    if m.time_bound:
        lines.append(f"time: {m.time_bound.a} {m.time_bound.k}")
    if m.balance_bound:
        lines.append(f"balance: {m.balance_bound.a} {m.balance_bound.k}")
    for s in m.oracle_sites:
        lines.append(f"oracle: {s.query} {s.yes} {s.no} {s.name}")
    lines.extend(t.format() for t in m.transitions)
    return "\n".join(lines) + "\n"


_VEC = r"\[([^\]]*)\]"
_RE_RW = re.compile(rf"({_ID})\s*{_VEC}\s*->\s*({_ID})\s*{_VEC}")
_RE_SHIFT = re.compile(rf"({_ID})\s*->\s*({_ID})\s*{_VEC}")
_RE_ROR = re.compile(rf"({_ID})\s*->\s*({_ID})\s+(yes|no)\s+({_ID})")
_RE_MOVE = re.compile(r"I\((.)\)|([LRSD])")


def _vec(text: str, lineno: int) -> tuple:
    items = tuple(p.strip() for p in text.split(","))
    if any(not p for p in items):
        raise MalformedProgram(f"line {lineno}: empty vector entry")
    return items


def _moves(text: str, lineno: int) -> tuple:
    out = []
    for p in _vec(text, lineno):
        mm = _RE_MOVE.fullmatch(p)
        if not mm:
            raise MalformedProgram(f"line {lineno}: bad move {p!r}")
        out.append("I" + mm.group(1) if mm.group(1) is not None else mm.group(2))
    return tuple(out)


def _bound(text: str, lineno: int) -> PolyBound:
    parts = text.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MalformedProgram(f"line {lineno}: bound needs two non-negative integers")
    try:
        return PolyBound(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise MalformedProgram(f"line {lineno}: {exc}") from None


def parse_machines(text: str) -> list:
    """Parse one or more machine blocks, each starting with a ``machine`` line."""
    blocks, cur = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("machine ") or line == "machine":
            cur = {"lines": [], "header": (lineno, line)}
            blocks.append(cur)
        elif cur is None:
            raise MalformedProgram(f"line {lineno}: expected 'machine <name>'")
        else:
            cur["lines"].append((lineno, line))
    if not blocks:
        raise MalformedProgram("no machine found")
    return [_parse_block(b) for b in blocks]


def parse_machine(text: str) -> Machine:
    ms = parse_machines(text)
    if len(ms) != 1:
        raise MalformedProgram(f"expected one machine, found {len(ms)}")
    return ms[0]


def _parse_block(block) -> Machine:
    lineno, header = block["header"]
    parts = header.split()
    if len(parts) != 2:
        raise MalformedProgram(f"line {lineno}: expected 'machine <name>'")
    name = parts[1]
    fields = {}
    trans, sites = [], []
    for lineno, line in block["lines"]:
        key, sep, rest = line.partition(":")
        if not sep:
            raise MalformedProgram(f"line {lineno}: missing ':' in {line!r}")
        key, rest = key.strip(), rest.strip()
        if key == "rw":
            mm = _RE_RW.fullmatch(rest)
            if not mm:
                raise MalformedProgram(f"line {lineno}: bad rw line")
            src, rd, dst, wr = mm.groups()
            trans.append((lineno, dict(kind=RW, source=src, target=dst,
                                       read=_vec(rd, lineno), write=_vec(wr, lineno))))
        elif key == "shift":
            mm = _RE_SHIFT.fullmatch(rest)
            if not mm:
                raise MalformedProgram(f"line {lineno}: bad shift line")
            src, dst, mv = mm.groups()
            trans.append((lineno, dict(kind=SHIFT, source=src, target=dst,
                                       moves=_moves(mv, lineno))))
        elif key == "roracle":
            mm = _RE_ROR.fullmatch(rest)
            if not mm:
                raise MalformedProgram(f"line {lineno}: bad roracle line")
            src, dst, ans, oname = mm.groups()
            trans.append((lineno, dict(kind=ORACLE, source=src, target=dst,
                                       answer=ans == "yes", oracle=oname)))
        elif key == "oracle":
            p = rest.split()
            if len(p) != 4:
                raise MalformedProgram(f"line {lineno}: oracle needs q_qu q_yes q_no name")
            sites.append(OracleSite(*p))
        elif key in ("tapes", "states", "start", "accept", "time", "balance"):
            if key in fields:
                raise MalformedProgram(f"line {lineno}: duplicate '{key}'")
            fields[key] = (lineno, rest)
        else:
            raise MalformedProgram(f"line {lineno}: unknown directive {key!r}")
    for req in ("tapes", "states", "start", "accept"):
        if req not in fields:
            raise MalformedProgram(f"machine {name}: missing '{req}'")
    tapes = []
    ln, tx = fields["tapes"]
    for p in tx.split(","):
        role, _, kind = p.strip().partition(":")
        try:
            tapes.append(TapeSpec(role.strip(), kind.strip() or "normal"))
        except MalformedProgram as exc:
            raise MalformedProgram(f"line {ln}: {exc}") from None
    ts = []
    for ln, kw in trans:
        try:
            ts.append(Transition(**kw))
        except MalformedProgram as exc:
            raise MalformedProgram(f"line {ln}: {exc}") from None
    tb = _bound(*reversed(fields["time"])) if "time" in fields else None
    bb = _bound(*reversed(fields["balance"])) if "balance" in fields else None
    return Machine(name, tuple(fields["states"][1].split()), fields["start"][1],
                   fields["accept"][1], tuple(tapes), tuple(ts), tb, bb, tuple(sites))


# ---------------------------------------------------------------------------
# validation


class Issue(NamedTuple):
    kind: str
    transitions: tuple
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.ok

    def lines(self) -> list:
        out = []
        for i in self.issues:
            out.append(f"{i.kind}: {i.detail}")
            out.extend("  " + t.format() for t in i.transitions)
        return out


def validate_deterministic(m: Machine) -> ValidationReport:
    issues = []
    for src, ts in m.by_source.items():
        rws = [t for t in ts if t.kind == RW]
        shifts = [t for t in ts if t.kind == SHIFT]
        ors = [t for t in ts if t.kind == ORACLE]
        seen = {}
        for t in rws:
            if t.read in seen:
                issues.append(Issue("rw-rw", (seen[t.read], t), f"state {src} reads {list(t.read)} twice"))
            else:
                seen[t.read] = t
        for a, b in zip(shifts, shifts[1:]):
            issues.append(Issue("shift-shift", (a, b), f"state {src} has two shifts"))
        if shifts and rws:
            issues.append(Issue("mixed", (rws[0], shifts[0]), f"state {src} has rw and shift transitions"))
        if ors and (rws or shifts or len(ors) > 1):
            others = [t for t in ts if t is not ors[0]]
            issues.append(Issue("oracle-mixed", (ors[0], others[0]),
                                f"state {src} mixes a reverse oracle call with other transitions"))
    return ValidationReport(tuple(issues))


def _arrivals(m: Machine) -> dict:
    arr = defaultdict(list)
    for t in m.transitions:
        arr[t.target].append(t)
    return arr


def delete_symbol(m: Machine, state: str, tape: int, arrivals=None):
    """Symbol under the head of ``tape`` whenever ``state`` is entered, or None."""
    arrivals = _arrivals(m) if arrivals is None else arrivals
    if state == m.start or any(state in (s.yes, s.no) for s in m.oracle_sites):
        return None
    syms = set()
    for t in arrivals.get(state, ()):
        if t.kind == RW:
            syms.add(t.write[tape])
        elif t.kind == SHIFT and t.moves[tape][0] == "I":
            syms.add(t.moves[tape][1])
        else:
            return None
    return syms.pop() if len(syms) == 1 else None


def validate_injective(m: Machine) -> ValidationReport:
    if not validate_deterministic(m):
        raise DeterminismFirst(f"machine {m.name} is not deterministic")
    issues = []
    arr = _arrivals(m)
    answer_states = {}
    for s in m.oracle_sites:
        answer_states[s.yes] = s
        answer_states[s.no] = s
    for state in m.states:
        ts = arr.get(state, [])
        rws = [t for t in ts if t.kind == RW]
        shifts = [t for t in ts if t.kind == SHIFT]
        ors = [t for t in ts if t.kind == ORACLE]
        seen = {}
        for t in rws:
            if t.write in seen:
                issues.append(Issue("rw-rw", (seen[t.write], t),
                                    f"two rw transitions enter {state} writing {list(t.write)}"))
            else:
                seen[t.write] = t
        for a, b in zip(shifts, shifts[1:]):
            issues.append(Issue("shift-shift", (a, b), f"two shifts enter {state}"))
        if shifts and rws:
            issues.append(Issue("rw-shift", (rws[0], shifts[0]),
                                f"{state} is entered by both rw and shift"))
        if state in answer_states and ts:
            issues.append(Issue("oracle-answer", (ts[0],),
                                f"oracle answer state {state} is also a transition target"))
        if ors:
            bad = rws + shifts
            answers = [t.answer for t in ors]
            if bad or len(set(answers)) != len(answers) or state in answer_states:
                issues.append(Issue("roracle", tuple(ors + bad),
                                    f"reverse oracle calls into {state} are ambiguous"))
        if state == m.start and ts:
            issues.append(Issue("start-entered", (ts[0],), f"start state {state} is a transition target"))
    for t in m.transitions:
        if t.kind == SHIFT:
            for i, mv in enumerate(t.moves):
                if mv == "D" and delete_symbol(m, t.source, i, arr) is None:
                    issues.append(Issue("delete-undetermined", (t,),
                                        f"deleted symbol on tape {i} at {t.source} is not fixed"))
    return ValidationReport(tuple(issues))


# ---------------------------------------------------------------------------
# configurations and the reference stepper


@dataclass(frozen=True)
class Config:
    state: str
    tapes: tuple
    steps: int = 0


class _HaltType:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Halt"


Halt = _HaltType()


def initial_config(m: Machine, x: str) -> Config:
    tapes = [((), ()) for _ in m.tapes]
    tapes[m.input_tape] = ((), tuple(reversed(x)))
    return Config(m.start, tuple(tapes), 0)


def tape_content(tape) -> str:
    left, right = tape
    return ("".join(left) + "".join(reversed(right))).rstrip(BLANK)


def _head(tape) -> str:
    return tape[1][-1] if tape[1] else BLANK


def _write(tape, sym):
    left, right = tape
    if right:
        if sym == BLANK and len(right) == 1:
            return (left, ())
        return (left, right[:-1] + (sym,))
    return (left, (sym,)) if sym != BLANK else tape


def _move(tape, mv, rubber):
    left, right = tape
    if mv == "S":
        return tape
    if mv in ("D",) or mv[0] == "I":
        if not rubber:
            raise IllegalRubberOp(f"move {mv} on a normal tape")
        if mv == "D":
            return (left, right[:-1])
        sym = mv[1]
        return (left, right + (sym,)) if (right or sym != BLANK) else tape
    if mv == "L":
        s = left[-1] if left else BLANK
        left = left[:-1]
        return (left, right + (s,)) if (right or s != BLANK) else (left, right)
    s = right[-1] if right else BLANK
    right = right[:-1]
    return (left + (s,), right) if (left or s != BLANK) else (left, right)


def _member(oracle, name: str, word: str) -> bool:
    lang = oracle
    if oracle is None:
        raise OracleMissing(f"oracle {name!r} fired with no oracle bound")
    if isinstance(oracle, Mapping):
        lang = oracle.get(name)
        if lang is None:
            raise OracleMissing(f"no oracle named {name!r}")
    if hasattr(lang, "contains"):
        return bool(lang.contains(word))
    if callable(lang):
        return bool(lang(word))
    return word in lang


def step(m: Machine, c: Config, oracle=None):
    """One transition of the reference interpreter; returns a Config or Halt."""
    if c.state not in m.states:
        raise ValueError(f"unknown state {c.state!r}")
    if c.state == m.accept:
        return Halt
    site = m.site_at.get(c.state)
    if site is not None:
        word = tape_content(c.tapes[m.query_tape])
        nxt = site.yes if _member(oracle, site.name, word) else site.no
        return Config(nxt, c.tapes, c.steps + 1)
    ts = m.by_source.get(c.state, ())
    if not ts:
        return Halt
    t = ts[0]
    if t.kind == ORACLE:
        if len(ts) != 1:
            raise NotDeterministic(f"state {c.state} is ambiguous")
        word = tape_content(c.tapes[m.query_tape])
        if _member(oracle, t.oracle, word) != t.answer:
            return Halt
        return Config(t.target, c.tapes, c.steps + 1)
    if t.kind == SHIFT:
        if len(ts) != 1:
            raise NotDeterministic(f"state {c.state} is ambiguous")
        tapes = tuple(_move(tp, mv, spec.rubber) for tp, mv, spec in zip(c.tapes, t.moves, m.tapes))
        return Config(t.target, tapes, c.steps + 1)
    key = tuple(_head(tp) for tp in c.tapes)
    t = m.rw_index.get((c.state, key))
    if t is None:
        return Halt
    tapes = tuple(_write(tp, s) for tp, s in zip(c.tapes, t.write))
    return Config(t.target, tapes, c.steps + 1)


# ---------------------------------------------------------------------------
# outcomes


ACCEPT, REJECT, TIME, BALANCE, MISSING = (
    "Accept", "Reject", "TimeExceeded", "BalanceViolated", "OracleMissing")


@dataclass(frozen=True)
class RunOutcome:
    tag: str
    output: str | None = None
    steps: int = field(default=0, compare=False)

    @property
    def accepted(self) -> bool:
        return self.tag == ACCEPT

    def __str__(self):
        return f"Accept({self.output!r})" if self.accepted else self.tag


@dataclass(frozen=True)
class RunLimits:
    max_steps: int | None = None
    enforce_balance: bool = True


def step_ceiling(m: Machine, n: int, limits: RunLimits | None) -> int:
    if limits is not None and limits.max_steps is not None:
        return limits.max_steps
    return m.time_bound.eval(n) if m.time_bound else DEFAULT_STEP_CAP


def finish_outcome(m: Machine, x: str, output: str, steps: int, limits) -> RunOutcome:
    if set(output) - {"0", "1"}:
        return RunOutcome(REJECT, None, steps)
    if m.balance_bound and (limits is None or limits.enforce_balance):
        p = m.balance_bound.eval
        if len(output) > p(len(x)) or len(x) > p(len(output)):
            return RunOutcome(BALANCE, None, steps)
    return RunOutcome(ACCEPT, output, steps)


def run_reference(m: Machine, x: str, oracle=None, limits=None) -> RunOutcome:
    """Plain stepping loop over immutable configurations (slow, used as a cross-check)."""
    ceiling = step_ceiling(m, len(x), limits)
    c = initial_config(m, x)
    while True:
        if c.state == m.accept:
            return finish_outcome(m, x, tape_content(c.tapes[m.output_tape]), c.steps, limits)
        if c.steps >= ceiling and _has_move(m, c):
            return RunOutcome(TIME, None, c.steps)
        try:
            nxt = step(m, c, oracle)
        except OracleMissing:
            return RunOutcome(MISSING, None, c.steps)
        if nxt is Halt:
            return RunOutcome(REJECT, None, c.steps)
        c = nxt


def _has_move(m: Machine, c: Config) -> bool:
    if c.state in m.site_at:
        return True
    ts = m.by_source.get(c.state, ())
    if not ts or ts[0].kind != RW:
        return bool(ts)
    return (c.state, tuple(_head(tp) for tp in c.tapes)) in m.rw_index


def run(m: Machine, x: str, oracle=None, limits: RunLimits | None = None) -> RunOutcome:
    from ._engine import Runner

    return Runner(m, x, oracle, limits).finish()


def extract_fn(m: Machine, max_len: int, oracle=None, limits=None, alphabet: str = "01"):
    """Table of the partial function computed by ``m`` on inputs up to ``max_len``."""
    from .fnlab import FiniteFn, all_strings

    table = {}
    for x in all_strings(max_len, alphabet):
        out = run(m, x, oracle, limits)
        if out.accepted:
            table[x] = out.output
    return FiniteFn(table)


def require_deterministic(m: Machine) -> None:
    rep = validate_deterministic(m)
    if not rep:
        raise NotDeterministic(f"machine {m.name}: " + "; ".join(i.detail for i in rep.issues))
