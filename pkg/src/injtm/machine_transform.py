"""Machine-to-machine passes: reversal, chaining, Bennett embeddings and
reverse-oracle simulation."""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import replace

from .builder import Builder
from .errors import NotDeterministic, NotInverses
from .machine_core import (
    BLANK,
    ORACLE,
    RW,
    SHIFT,
    Machine,
    OracleSite,
    PolyBound,
    TapeSpec,
    Transition,
    _arrivals,
    delete_symbol,
    require_deterministic,
    validate_deterministic,
)

REV = "~"
HISTORY_SYMBOLS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
_FLIP = {"L": "R", "R": "L", "S": "S"}


def toggle(name: str) -> str:
    return name[:-1] if name.endswith(REV) else name + REV


def _reverse_parts(transitions, sites, rename, delsym):
    """Reverse a set of transitions and oracle sites.

    Returns (transitions, sites, extra_states, warnings).
    """
    out, warnings, extra = [], [], set()
    for t in transitions:
        if t.kind == RW:
            out.append(Transition(RW, rename(t.target), rename(t.source), t.write, t.read))
        elif t.kind == SHIFT:
            moves = []
            for i, mv in enumerate(t.moves):
                if mv in _FLIP:
                    moves.append(_FLIP[mv])
                elif mv == "D":
                    sym = delsym(t.source, i)
                    if sym is None:
                        warnings.append(f"deleted symbol at {t.source} tape {i} is not fixed")
                        sym = BLANK
                    moves.append("I" + sym)
                else:
                    moves.append("D")
            out.append(Transition(SHIFT, rename(t.target), rename(t.source), moves=tuple(moves)))
    new_sites = []
    for s in sites:
        out.append(Transition(ORACLE, rename(s.yes), rename(s.query), answer=True, oracle=s.name))
        out.append(Transition(ORACLE, rename(s.no), rename(s.query), answer=False, oracle=s.name))
    groups = defaultdict(dict)
    for t in transitions:
        if t.kind == ORACLE:
            groups[(t.target, t.oracle)][t.answer] = t.source
    for (q, name), branch in sorted(groups.items()):
        rq = rename(q)
        ys = rename(branch[True]) if True in branch else f"{rq}!yes"
        ns = rename(branch[False]) if False in branch else f"{rq}!no"
        extra.update((ys, ns))
        new_sites.append(OracleSite(rq, ys, ns, name))
    return out, new_sites, extra, warnings


def _swap_roles(tapes):
    swap = {"input": "output", "output": "input"}
    return tuple(TapeSpec(swap.get(t.role, t.role), t.kind) for t in tapes)


def reverse(m: Machine) -> Machine:
    """Swap every transition's direction, the start and accept states, and the
    input and output roles.  Reversing twice gives back the same table."""
    arr = _arrivals(m)
    ts, sites, extra, warnings = _reverse_parts(
        m.transitions, m.oracle_sites, toggle, lambda s, i: delete_symbol(m, s, i, arr))
    tb = None
    if m.time_bound and m.balance_bound:
        tb = m.time_bound.compose(m.balance_bound)
    r = Machine(toggle(m.name), tuple(toggle(s) for s in m.states) + tuple(extra),
                toggle(m.accept), toggle(m.start), _swap_roles(m.tapes), tuple(ts),
                tb, m.balance_bound, tuple(sites))
    rep = validate_deterministic(r)
    if not rep:
        warnings.extend(i.detail for i in rep.issues)
    if warnings:
        object.__setattr__(r, "warnings", tuple(warnings))
    return r


def warnings_of(m: Machine) -> tuple:
    return getattr(m, "warnings", ())


# ---------------------------------------------------------------------------
# canonical forms


def _edge_key(t: Transition, direction: str):
    return (direction, t.kind, t.read, t.write, t.moves,
            -1 if t.answer is None else int(t.answer), t.oracle or "")


def canonical(m: Machine, keep_bounds: bool = True) -> Machine:
    """Rename states in breadth-first order from the start state."""
    edges = defaultdict(list)
    for t in m.transitions:
        edges[t.source].append((_edge_key(t, "out"), t.target))
        edges[t.target].append((_edge_key(t, "in"), t.source))
    for s in m.oracle_sites:
        for tag, st in (("yes", s.yes), ("no", s.no)):
            edges[s.query].append((("site-" + tag, s.name), st))
            edges[st].append((("site-from-" + tag, s.name), s.query))
    names = {}
    order = deque([m.start, m.accept])
    while order or len(names) < len(m.states):
        if not order:
            order.append(min(s for s in m.states if s not in names))
        s = order.popleft()
        if s in names:
            continue
        names[s] = f"s{len(names)}"
        for key, nxt in sorted(edges[s], key=lambda e: (e[0], names.get(e[1], "~"))):
            if nxt not in names:
                order.append(nxt)
    ren = names.__getitem__
    ts = [replace(t, source=ren(t.source), target=ren(t.target)) for t in m.transitions]
    sites = [OracleSite(ren(s.query), ren(s.yes), ren(s.no), s.name) for s in m.oracle_sites]
    return Machine("canonical", tuple(names.values()), ren(m.start), ren(m.accept), m.tapes,
                   tuple(ts), m.time_bound if keep_bounds else None,
                   m.balance_bound if keep_bounds else None, tuple(sites))


def _permute_tapes(m: Machine, perm) -> Machine:
    """perm[new] = old index."""
    def pv(v):
        return tuple(v[i] for i in perm) if v else v

    ts = [replace(t, read=pv(t.read), write=pv(t.write), moves=pv(t.moves)) for t in m.transitions]
    return Machine(m.name, m.states, m.start, m.accept, tuple(m.tapes[i] for i in perm), tuple(ts),
                   m.time_bound, m.balance_bound, m.oracle_sites)


def equivalent(m1: Machine, m2: Machine, bounds: bool = False) -> bool:
    """Structural equality up to renaming states and reordering tapes."""
    if len(m1.tapes) != len(m2.tapes) or len(m1.states) != len(m2.states):
        return False
    if len(m1.transitions) != len(m2.transitions):
        return False
    c1 = canonical(m1, bounds)
    for perm in itertools.permutations(range(len(m2.tapes))):
        if any(m2.tapes[j] != m1.tapes[i] for i, j in enumerate(perm)):
            continue
        if canonical(_permute_tapes(m2, perm), bounds) == c1:
            return True
    return False


# ---------------------------------------------------------------------------
# chaining


def chain(m1: Machine, m2: Machine) -> Machine:
    """Run m1, then m2 on m1's output.

    m1's output tape becomes m2's input tape.  m2 finds every other tape of m1
    blank, which holds when m1 halts with its output in standard form (head on
    the first cell) and its remaining tapes empty.  A query tape is shared.
    """
    require_deterministic(m1)
    require_deterministic(m2)
    tapes = list(m1.tapes)
    shared_kind = "rubber" if (m1.tapes[m1.output_tape].rubber or
                               m2.tapes[m2.input_tape].rubber) else "normal"
    tapes[m1.output_tape] = TapeSpec("work", shared_kind)
    idx2 = {}
    for j, t in enumerate(m2.tapes):
        if j == m2.input_tape:
            idx2[j] = m1.output_tape
        elif t.role == "query" and m1.query_tape is not None:
            idx2[j] = m1.query_tape
        else:
            idx2[j] = len(tapes)
            tapes.append(t)
    N = len(tapes)
    own1 = set(range(len(m1.tapes)))
    own2 = set(idx2.values())

    def lift(t, prefix, mapping, own):
        def vec(v, fill):
            out = [fill] * N
            for j, s in enumerate(v):
                out[mapping(j)] = s
            return tuple(out)

        if t.kind == RW:
            return Transition(RW, prefix + t.source, prefix + t.target,
                              vec(t.read, BLANK), vec(t.write, BLANK))
        if t.kind == SHIFT:
            return Transition(SHIFT, prefix + t.source, prefix + t.target, moves=vec(t.moves, "S"))
        return replace(t, source=prefix + t.source, target=prefix + t.target)

    ts = [lift(t, "1.", lambda j: j, own1) for t in m1.transitions]
    ts += [lift(t, "2.", idx2.__getitem__, own2) for t in m2.transitions]
    ts.append(Transition(SHIFT, "1." + m1.accept, "2." + m2.start, moves=("S",) * N))
    sites = [OracleSite("1." + s.query, "1." + s.yes, "1." + s.no, s.name) for s in m1.oracle_sites]
    sites += [OracleSite("2." + s.query, "2." + s.yes, "2." + s.no, s.name) for s in m2.oracle_sites]
    states = ["1." + s for s in m1.states] + ["2." + s for s in m2.states]
    tb = bb = None
    if m1.time_bound and m2.time_bound and m1.balance_bound and m2.balance_bound:
        tb = m1.time_bound + m2.time_bound.compose(m1.balance_bound) + PolyBound(1, 0)
        bb = m2.balance_bound.compose(m1.balance_bound) + m1.balance_bound.compose(m2.balance_bound)
    return Machine(f"{m1.name}>{m2.name}", tuple(states), "1." + m1.start, "2." + m2.accept,
                   tuple(tapes), tuple(ts), tb, bb, tuple(sites))


# ---------------------------------------------------------------------------
# reverse oracle calls


def simulate_reverse_oracle(m: Machine) -> Machine:
    """Replace every reverse oracle call by a forward query and a comparison.

    From the answer state the machine asks the oracle; when the answer agrees
    with the one recorded by that state it continues to the query state,
    otherwise it halts without accepting.
    """
    if not m.has_reverse_oracle:
        return m
    ts, sites, states = [], list(m.oracle_sites), set(m.states)
    N = len(m.tapes)
    for t in m.transitions:
        if t.kind != ORACLE:
            ts.append(t)
            continue
        agree, differ = f"{t.source}?agree", f"{t.source}?differ"
        yes, no = (agree, differ) if t.answer else (differ, agree)
        sites.append(OracleSite(t.source, yes, no, t.oracle))
        ts.append(Transition(SHIFT, agree, t.target, moves=("S",) * N))
        states.update((agree, differ))
    return Machine(m.name + "!sim", tuple(states), m.start, m.accept, m.tapes, tuple(ts),
                   m.time_bound, m.balance_bound, tuple(sites))


# ---------------------------------------------------------------------------
# Bennett embeddings


class _Layout:
    """Tape layout of the history-keeping machine built from ``m``."""

    def __init__(self, m: Machine):
        self.m = m
        self.k = k = len(m.tapes)
        self.TI, self.C, self.H, self.TO = 0, k + 1, k + 2, k + 3
        self.N = k + 4
        self.WI = 1 + m.input_tape
        self.WO = 1 + m.output_tape
        self.alph = m.alphabet

    def vec(self, inner=None, **named):
        v = [BLANK] * self.N
        if inner is not None:
            for j, s in enumerate(inner):
                v[1 + j] = s
        for key, s in named.items():
            v[getattr(self, key)] = s
        return tuple(v)

    def moves(self, inner=None, **named):
        v = ["S"] * self.N
        if inner is not None:
            for j, s in enumerate(inner):
                v[1 + j] = s
        for key, s in named.items():
            v[getattr(self, key)] = s
        return tuple(v)

    def combos(self, fixed=None, skip=()):
        """All symbol vectors over m's tapes, with some positions fixed."""
        fixed = fixed or {}
        pools = [(fixed[j],) if j in fixed else ((BLANK,) if j in skip else self.alph)
                 for j in range(self.k)]
        return itertools.product(*pools)


def _history_symbol(i: int) -> str:
    if i >= len(HISTORY_SYMBOLS):
        raise ValueError("too many transitions share a target state")
    return HISTORY_SYMBOLS[i]


def _rw(ts, src, read, dst, write=None):
    ts.append(Transition(RW, src, dst, read, read if write is None else write))


def _sh(ts, src, dst, moves):
    ts.append(Transition(SHIFT, src, dst, moves=moves))


def _copy_in(L: _Layout) -> list:
    """Copy the input word onto m's input tape and rewind that copy."""
    ts = []
    _sh(ts, "c.start", "c.a", L.moves(TI="L"))
    _rw(ts, "c.a", L.vec(), "c.P")
    _sh(ts, "c.P", "c.Q", L.moves(TI="R", WI="R"))
    for s in "01":
        _rw(ts, "c.Q", L.vec(TI=s), "c.P", L.vec(TI=s, WI=s))
    _rw(ts, "c.Q", L.vec(), "c.P2")
    _sh(ts, "c.P2", "c.Q2", L.moves(WI="L"))
    for s in "01":
        _rw(ts, "c.Q2", L.vec(WI=s), "c.P2")
    _rw(ts, "c.Q2", L.vec(), "c.Z")
    _sh(ts, "c.Z", "c.F", L.moves(WI="R"))
    return ts


def _simulate(L: _Layout):
    """m's steps, each followed by pushing an arrival code onto the history tape."""
    m = L.m
    ts, sites = [], []
    S = lambda s: "s." + s  # noqa: E731
    arrivals = defaultdict(list)  # m-state -> list of arrival keys

    def code(target, key):
        arrivals[target].append(key)
        return _history_symbol(len(arrivals[target]) - 1)

    def record(src, read_iter, target, key):
        sym = code(target, key)
        for combo in read_iter:
            _rw(ts, src, L.vec(combo), S(target) + "^h", L.vec(combo, H=sym))

    # entry from the copy phase: m's input tape holds x, the others are blank
    record("c.F", _entry_combos(L), m.start, ("entry",))
    for t in m.transitions:
        if t.kind == RW:
            sym = code(t.target, ("rw", t.source, t.read))
            _rw(ts, S(t.source), L.vec(t.read), S(t.target) + "^h", L.vec(t.write, H=sym))
        elif t.kind == SHIFT:
            dtapes = [j for j, mv in enumerate(t.moves) if mv == "D"]
            ins = {j: mv[1] for j, mv in enumerate(t.moves) if mv[0] == "I"}
            if not dtapes:
                aux = S(t.source) + "^u"
                _sh(ts, S(t.source), aux, L.moves(t.moves))
                record(aux, L.combos(ins), t.target, ("shift", t.source))
                continue
            for n, picked in enumerate(itertools.product(L.alph, repeat=len(dtapes))):
                fixed = dict(zip(dtapes, picked))
                hold, aux = f"{S(t.source)}^v{n}", f"{S(t.source)}^u{n}"
                for combo in L.combos(fixed):
                    _rw(ts, S(t.source), L.vec(combo), hold)
                _sh(ts, hold, aux, L.moves(t.moves))
                record(aux, L.combos(ins), t.target, ("shift", t.source, picked))
        else:
            answer_state = f"{S(t.target)}^x{int(t.answer)}"
            ts.append(Transition(ORACLE, S(t.source), answer_state, answer=t.answer, oracle=t.oracle))
            record(answer_state, L.combos(), t.target, ("roracle", t.source))
    for s in m.oracle_sites:
        ys, ns = S(s.yes) + "^o", S(s.no) + "^o"
        sites.append(OracleSite(S(s.query), ys, ns, s.name))
        record(ys, L.combos(), s.yes, ("site", s.query, True))
        record(ns, L.combos(), s.no, ("site", s.query, False))
    for target in arrivals:
        _sh(ts, S(target) + "^h", S(target), L.moves(H="L"))
    return ts, sites


def _entry_combos(L: _Layout):
    fixed = {j: BLANK for j in range(L.k) if j != L.m.input_tape}
    return [c for c in L.combos(fixed) if c[L.m.input_tape] in (BLANK, "0", "1")]


def _copy_out(L: _Layout) -> list:
    """Copy m's output onto the scratch tape, then rewind m's output tape."""
    m = L.m
    acc = "s." + m.accept
    ts = []

    def each(src, dst, wo, c, wo2=None, c2=None):
        for combo in L.combos({m.output_tape: wo}):
            r = list(L.vec(combo, C=c))
            w = list(r)
            if wo2 is not None:
                w[L.WO] = wo2
            if c2 is not None:
                w[L.C] = c2
            _rw(ts, src, tuple(r), dst, tuple(w))

    _sh(ts, acc, "o.a", L.moves(WO="L"))
    each("o.a", "o.P", BLANK, BLANK)
    _sh(ts, "o.P", "o.Q", L.moves(WO="R", C="R"))
    for s in "01":
        each("o.Q", "o.P", s, BLANK, c2=s)
    each("o.Q", "o.P2", BLANK, BLANK)
    _sh(ts, "o.P2", "o.Q2", L.moves(WO="L"))
    for s in "01":
        each("o.Q2", "o.P2", s, BLANK)
    each("o.Q2", "o.Z", BLANK, BLANK)
    _sh(ts, "o.Z", acc + "^r", L.moves(WO="R"))
    return ts


def _emit_pair(L: _Layout, entry: str) -> list:
    """Write code(x) 11 f(x) on the output tape, emptying the input and scratch tapes."""
    ts = []
    _sh(ts, entry, "f.e", L.moves(TI="L"))
    _rw(ts, "f.e", L.vec(), "f.P5")
    _sh(ts, "f.P5", "f.Q5", L.moves(TI="R"))
    for s in "01":
        _rw(ts, "f.Q5", L.vec(TI=s), "f.P5")
    _rw(ts, "f.Q5", L.vec(), "f.P6")
    _sh(ts, "f.P6", "f.Q6", L.moves(C="L", TO="L"))
    for s in "01":
        _rw(ts, "f.Q6", L.vec(C=s), "f.P6", L.vec(TO=s))
    _rw(ts, "f.Q6", L.vec(), "f.G2", L.vec(TO="1"))
    _sh(ts, "f.G2", "f.G3", L.moves(TO="L"))
    _rw(ts, "f.G3", L.vec(), "f.P7", L.vec(TO="1"))
    _sh(ts, "f.P7", "f.Q7", L.moves(TI="L", TO="L"))
    for s in "01":
        _rw(ts, "f.Q7", L.vec(TI=s), "f.R7", L.vec(TO=s))
    _sh(ts, "f.R7", "f.S7", L.moves(TO="L"))
    _rw(ts, "f.S7", L.vec(), "f.P7", L.vec(TO="0"))
    _rw(ts, "f.Q7", L.vec(), "f.G5")
    _sh(ts, "f.G5", "acc", L.moves(TO="R"))
    return ts


def bennett_garbage(m: Machine) -> Machine:
    """Injective machine computing x -> pair_encode(x, f(x)) for m's function f.

    Phases: copy x to m's input tape; run m while pushing an arrival code for
    every step onto a history tape; copy m's output aside; run the first two
    phases backwards; finally lay out code(x) 11 f(x) on the output tape.
    m must halt with its output in standard form.
    """
    rep = validate_deterministic(m)
    if not rep:
        raise NotDeterministic(f"machine {m.name}: " + "; ".join(i.detail for i in rep.issues))
    L = _Layout(m)
    phase0 = _copy_in(L)
    phase1, sites1 = _simulate(L)
    phase2 = _copy_out(L)
    rename = lambda s: s + "^r"  # noqa: E731
    arr1 = defaultdict(list)
    for t in phase1:
        arr1[t.target].append(t)
    opaque = {s.yes for s in sites1} | {s.no for s in sites1}

    def delsym1(state, tape):
        return _delete_symbol_in(arr1, state, tape, opaque)

    phase3, sites3, extra3, warn3 = _reverse_parts(phase1, sites1, rename, delsym1)
    phase4, _, _, warn4 = _reverse_parts(phase0, (), rename, lambda s, i: None)
    if warn3 or warn4:
        raise NotDeterministic("; ".join(warn3 + warn4))
    phase5 = _emit_pair(L, "c.start^r")
    ts = phase0 + phase1 + phase2 + phase3 + phase4 + phase5
    states = {s for t in ts for s in (t.source, t.target)} | extra3
    for s in sites1 + sites3:
        states.update(s[:3])
    tapes = ((TapeSpec("input"),)
             + tuple(TapeSpec("query" if t.role == "query" else "work", t.kind) for t in m.tapes)
             + (TapeSpec("work"), TapeSpec("history"), TapeSpec("output")))
    tb = bb = None
    if m.time_bound and m.balance_bound:
        tb = PolyBound(16 * m.time_bound.a + 48, max(m.time_bound.k, 1))
        bb = PolyBound(m.balance_bound.a + 4, max(m.balance_bound.k, 1))
    return Machine(f"bennett({m.name})", tuple(states), "c.start", "acc", tapes, tuple(ts),
                   tb, bb, tuple(sites1) + tuple(sites3))


def _delete_symbol_in(arrivals, state, tape, opaque):
    if state in opaque:
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


def swap_pair() -> Machine:
    """pair_encode(a, b) -> pair_encode(b, a); undefined off the pair encoding."""
    b = Builder("swap", ("input:normal", "output:normal", "work:normal", "work:normal"))
    IN, OUT, A, BT = range(4)

    def v(**kw):
        out = ["_"] * 4
        for key, s in kw.items():
            out[{"IN": IN, "OUT": OUT, "A": A, "BT": BT}[key]] = s
        return tuple(out)

    def mv(**kw):
        out = ["S"] * 4
        for key, s in kw.items():
            out[{"IN": IN, "OUT": OUT, "A": A, "BT": BT}[key]] = s
        return tuple(out)

    # split code(a) 11 b into a on A and b on BT
    b.shift("start", "s1", mv(IN="L"))
    b.rw("s1", v(), "P")
    b.shift("P", "Q", mv(IN="R", A="R"))
    b.rw("Q", v(IN="0"), "D", v())
    b.shift("D", "D2", mv(IN="R"))
    for s in "01":
        b.rw("D2", v(IN=s), "P", v(A=s))
    b.rw("Q", v(IN="1"), "Sp", v())
    b.shift("Sp", "Sp2", mv(IN="R"))
    b.rw("Sp2", v(IN="1"), "M", v())
    b.shift("M", "N", mv(IN="R", BT="R"))
    for s in "01":
        b.rw("N", v(IN=s), "M", v(BT=s))
    # write a, then 11, then code(b), right to left
    b.rw("N", v(), "P8")
    b.shift("P8", "Q8", mv(A="L", OUT="L"))
    for s in "01":
        b.rw("Q8", v(A=s), "P8", v(OUT=s))
    b.rw("Q8", v(), "G2", v(OUT="1"))
    b.shift("G2", "G3", mv(OUT="L"))
    b.rw("G3", v(), "P9", v(OUT="1"))
    b.shift("P9", "Q9", mv(BT="L", OUT="L"))
    for s in "01":
        b.rw("Q9", v(BT=s), "R9", v(OUT=s))
    b.shift("R9", "S9", mv(OUT="L"))
    b.rw("S9", v(), "P9", v(OUT="0"))
    b.rw("Q9", v(), "G5")
    b.shift("G5", "acc", mv(OUT="R"))
    return b.build("start", "acc", time=(12, 1), balance=(1, 1))


def bennett_clean(m_f: Machine, m_finv: Machine, window: int = 6, oracle=None) -> Machine:
    """Injective machine computing exactly f, given machines for f and its inverse.

    x -> (x, f(x)) with history uncomputed, then swap to (f(x), x), then run the
    first construction for the inverse backwards, which erases x.
    """
    from .machine_core import extract_fn, run

    require_deterministic(m_f)
    require_deterministic(m_finv)
    table = extract_fn(m_f, window, oracle)
    if not table.is_injective():
        raise NotInverses(f"{m_f.name} is not injective on inputs up to length {window}")
    for x, y in table.items():
        back = run(m_finv, y, oracle)
        if not back.accepted or back.output != x:
            raise NotInverses(f"{m_finv.name}({y!r}) = {back} but {m_f.name}({x!r}) = {y!r}")
    forward = bennett_garbage(m_f)
    backward = reverse(bennett_garbage(m_finv))
    out = chain(chain(forward, swap_pair()), backward)
    return Machine(f"clean.{m_f.name}.{m_finv.name}", out.states, out.start, out.accept, out.tapes,
                   out.transitions, out.time_bound, out.balance_bound, out.oracle_sites)
