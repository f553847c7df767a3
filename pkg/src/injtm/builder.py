"""Incremental construction of machines, with wildcard expansion."""

from __future__ import annotations

import itertools

from .machine_core import RW, SHIFT, ORACLE, Machine, OracleSite, PolyBound, TapeSpec, Transition

WILD = "*"


def _tapes(spec) -> tuple:
    out = []
    for t in spec:
        if isinstance(t, TapeSpec):
            out.append(t)
        else:
            role, _, kind = t.partition(":")
            out.append(TapeSpec(role, kind or "normal"))
    return tuple(out)


def _vec(v) -> tuple:
    if isinstance(v, str):
        v = v.split() if " " in v.strip() else list(v)
    return tuple(v)


class Builder:
    """Collects transitions; ``*`` in a read vector ranges over the alphabet and
    a ``*`` at the same position of the write vector copies the symbol read."""

    def __init__(self, name: str, tapes, alphabet="_01"):
        self.name = name
        self.tapes = _tapes(tapes)
        self.alphabet = tuple(alphabet)
        self.transitions: list = []
        self.states: set = set()
        self.sites: list = []

    def rw(self, src, read, dst, write=None, over=None):
        read = _vec(read)
        write = read if write is None else _vec(write)
        if len(read) != len(self.tapes) or len(write) != len(self.tapes):
            raise ValueError(f"{src}: vector length mismatch")
        pos = [i for i, s in enumerate(read) if s == WILD]
        pools = [over[i] if over and i in over else self.alphabet for i in pos]
        for pick in itertools.product(*pools):
            r, w = list(read), list(write)
            for i, s in zip(pos, pick):
                r[i] = s
                if w[i] == WILD:
                    w[i] = s
            if WILD in w:
                raise ValueError(f"{src}: unmatched wildcard in write vector")
            self.transitions.append(Transition(RW, src, dst, tuple(r), tuple(w)))
        self.states.update((src, dst))
        return self

    def shift(self, src, dst, moves):
        moves = tuple(moves.split()) if isinstance(moves, str) else tuple(moves)
        self.transitions.append(Transition(SHIFT, src, dst, moves=moves))
        self.states.update((src, dst))
        return self

    def roracle(self, src, dst, answer: bool, oracle: str):
        self.transitions.append(Transition(ORACLE, src, dst, answer=answer, oracle=oracle))
        self.states.update((src, dst))
        return self

    def site(self, query, yes, no, name):
        self.sites.append(OracleSite(query, yes, no, name))
        self.states.update((query, yes, no))
        return self

    def build(self, start, accept, time=None, balance=None) -> Machine:
        self.states.update((start, accept))
        tb = PolyBound(*time) if isinstance(time, tuple) else time
        bb = PolyBound(*balance) if isinstance(balance, tuple) else balance
        return Machine(self.name, tuple(self.states), start, accept, self.tapes,
                       tuple(self.transitions), tb, bb, tuple(self.sites))
