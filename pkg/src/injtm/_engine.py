"""Compiled execution of machines.

The transition table is flattened into integer arrays and a numba kernel runs
the ordinary rw/shift steps.  Oracle steps, tape growth and step budgets hand
control back to Python.  Semantics match ``machine_core.step`` exactly; the
test-suite cross-checks the two.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from .errors import IllegalRubberOp, NotDeterministic, OracleMissing
from .machine_core import (
    MISSING,
    ORACLE,
    REJECT,
    RW,
    SHIFT,
    TIME,
    Machine,
    RunOutcome,
    _member,
    finish_outcome,
    step_ceiling,
    validate_deterministic,
)

try:
    if os.environ.get("INJTM_PURE"):
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

K_NONE, K_RW, K_SHIFT, K_QUERY, K_RORACLE = 0, 1, 2, 3, 4
ST_ACCEPT, ST_HALT, ST_TIME, ST_GROW, ST_ORACLE = 0, 1, 2, 3, 4
MV_S, MV_L, MV_R, MV_D, MV_I = 0, 1, 2, 3, 4


@njit(cache=True)
def _kernel(kind, rw_lo, rw_hi, rw_key, rw_tgt, rw_wr, sh_tgt, sh_mv, A, accept,
            left, right, llen, rlen, state, steps, limit):
    T = llen.shape[0]
    cap = left.shape[1]
    while True:
        if state == accept:
            return ST_ACCEPT, state, steps
        k = kind[state]
        if k == K_RW:
            key = 0
            mul = 1
            for t in range(T):
                if rlen[t] > 0:
                    key += right[t, rlen[t] - 1] * mul
                mul *= A
            lo = rw_lo[state]
            hi = rw_hi[state]
            idx = -1
            while lo < hi:
                mid = (lo + hi) // 2
                v = rw_key[mid]
                if v < key:
                    lo = mid + 1
                elif v > key:
                    hi = mid
                else:
                    idx = mid
                    break
            if idx < 0:
                return ST_HALT, state, steps
            if steps >= limit:
                return ST_TIME, state, steps
            for t in range(T):
                w = rw_wr[idx, t]
                r = rlen[t]
                if r > 0:
                    if w == 0 and r == 1:
                        rlen[t] = 0
                    else:
                        right[t, r - 1] = w
                elif w != 0:
                    right[t, 0] = w
                    rlen[t] = 1
            state = rw_tgt[idx]
        elif k == K_SHIFT:
            if steps >= limit:
                return ST_TIME, state, steps
            for t in range(T):
                if llen[t] >= cap - 1 or rlen[t] >= cap - 1:
                    return ST_GROW, state, steps
            for t in range(T):
                mv = sh_mv[state, t]
                if mv == MV_S:
                    continue
                if mv == MV_L:
                    s = 0
                    if llen[t] > 0:
                        llen[t] -= 1
                        s = left[t, llen[t]]
                    if s != 0 or rlen[t] > 0:
                        right[t, rlen[t]] = s
                        rlen[t] += 1
                elif mv == MV_R:
                    s = 0
                    if rlen[t] > 0:
                        rlen[t] -= 1
                        s = right[t, rlen[t]]
                    if s != 0 or llen[t] > 0:
                        left[t, llen[t]] = s
                        llen[t] += 1
                elif mv == MV_D:
                    if rlen[t] > 0:
                        rlen[t] -= 1
                else:
                    s = mv - MV_I
                    if s != 0 or rlen[t] > 0:
                        right[t, rlen[t]] = s
                        rlen[t] += 1
            state = sh_tgt[state]
        elif k == K_NONE:
            return ST_HALT, state, steps
        else:
            if steps >= limit:
                return ST_TIME, state, steps
            return ST_ORACLE, state, steps
        steps += 1


class Compiled:
    """Integer tables for one machine."""

    def __init__(self, m: Machine):
        rep = validate_deterministic(m)
        if not rep:
            raise NotDeterministic(f"machine {m.name}: " + "; ".join(i.detail for i in rep.issues))
        self.m = m
        self.symbols = m.alphabet
        self.sym_id = {s: i for i, s in enumerate(self.symbols)}
        A = len(self.symbols)
        T = len(m.tapes)
        if A ** T >= 2 ** 62:
            raise ValueError("alphabet too large for the compiled engine")
        if A > 120:
            raise ValueError("too many tape symbols")
        self.A, self.T = A, T
        self.state_names = m.states
        self.state_id = {s: i for i, s in enumerate(m.states)}
        S = len(m.states)
        kind = np.zeros(S, np.int8)
        sh_tgt = np.zeros(S, np.int64)
        sh_mv = np.zeros((S, T), np.int16)
        rw_lo = np.zeros(S, np.int64)
        rw_hi = np.zeros(S, np.int64)
        keys, tgts, writes = [], [], []
        self.roracle = {}
        rubber = [t.rubber for t in m.tapes]
        for name, si in self.state_id.items():
            if name in m.site_at:
                kind[si] = K_QUERY
                continue
            ts = m.by_source.get(name, ())
            if not ts:
                continue
            first = ts[0]
            if first.kind == SHIFT:
                kind[si] = K_SHIFT
                sh_tgt[si] = self.state_id[first.target]
                for i, mv in enumerate(first.moves):
                    if mv in ("D",) or mv[0] == "I":
                        if not rubber[i]:
                            # surfaces at step time, like the reference stepper
                            sh_mv[si, i] = -1
                            continue
                    sh_mv[si, i] = self._mv_code(mv)
            elif first.kind == ORACLE:
                kind[si] = K_RORACLE
                self.roracle[si] = first
            else:
                kind[si] = K_RW
                rows = []
                for t in ts:
                    key = 0
                    mul = 1
                    for s in t.read:
                        key += self.sym_id[s] * mul
                        mul *= A
                    rows.append((key, self.state_id[t.target], [self.sym_id[s] for s in t.write]))
                rows.sort()
                rw_lo[si] = len(keys)
                for key, tg, wr in rows:
                    keys.append(key)
                    tgts.append(tg)
                    writes.append(wr)
                rw_hi[si] = len(keys)
        self.illegal = {si for si in range(S) if (sh_mv[si] < 0).any()}
        for si in self.illegal:
            kind[si] = K_RORACLE  # hand back to Python, which raises
        self.kind = kind
        self.rw_lo, self.rw_hi = rw_lo, rw_hi
        self.rw_key = np.array(keys or [0], np.int64)
        self.rw_tgt = np.array(tgts or [0], np.int64)
        self.rw_wr = np.array(writes or [[0] * T], np.int8).reshape(-1, T)
        self.sh_tgt, self.sh_mv = sh_tgt, sh_mv
        self.accept = self.state_id[m.accept]
        self.start = self.state_id[m.start]
        self.sites = {self.state_id[s.query]: s for s in m.oracle_sites}

    def _mv_code(self, mv: str) -> int:
        if mv == "S":
            return MV_S
        if mv == "L":
            return MV_L
        if mv == "R":
            return MV_R
        if mv == "D":
            return MV_D
        return MV_I + self.sym_id[mv[1]]


_CACHE: dict = {}


def compiled(m: Machine) -> Compiled:
    c = _CACHE.get(id(m))
    if c is None or c.m is not m:
        if len(_CACHE) > 4096:
            _CACHE.clear()
        c = Compiled(m)
        _CACHE[id(m)] = c
    return c


class Runner:
    """Resumable execution of one machine on one input."""

    def __init__(self, m: Machine, x: str, oracle=None, limits=None, max_steps=None):
        self.m, self.x, self.oracle, self.limits = m, x, oracle, limits
        self.c = c = compiled(m)
        self.ceiling = step_ceiling(m, len(x), limits) if max_steps is None else max_steps
        cap = max(16, 2 * len(x) + 8)
        self.left = np.zeros((c.T, cap), np.int8)
        self.right = np.zeros((c.T, cap), np.int8)
        self.llen = np.zeros(c.T, np.int64)
        self.rlen = np.zeros(c.T, np.int64)
        it = m.input_tape
        try:
            codes = [c.sym_id[s] for s in reversed(x)]
        except KeyError as exc:
            raise ValueError(f"input symbol {exc.args[0]!r} not in the machine alphabet") from None
        while codes and codes[0] == 0:
            codes.pop(0)  # trailing blanks of the input are not part of the tape
        self.right[it, :len(codes)] = codes
        self.rlen[it] = len(codes)
        self.state = c.start
        self.steps = 0
        self.outcome: RunOutcome | None = None

    def _grow(self):
        T, cap = self.left.shape
        for name in ("left", "right"):
            old = getattr(self, name)
            new = np.zeros((T, cap * 2), np.int8)
            new[:, :cap] = old
            setattr(self, name, new)

    def tape_text(self, t: int) -> str:
        sy = self.c.symbols
        left = [sy[v] for v in self.left[t, :self.llen[t]]]
        right = [sy[v] for v in self.right[t, :self.rlen[t]][::-1]]
        return ("".join(left) + "".join(right)).rstrip("_")

    def advance(self, budget: int | None = None) -> RunOutcome | None:
        """Run for at most ``budget`` more steps; return the outcome once halted."""
        if self.outcome is not None:
            return self.outcome
        c = self.c
        stop = self.ceiling if budget is None else min(self.ceiling, self.steps + budget)
        while True:
            status, state, steps = _kernel(
                c.kind, c.rw_lo, c.rw_hi, c.rw_key, c.rw_tgt, c.rw_wr, c.sh_tgt, c.sh_mv,
                c.A, c.accept, self.left, self.right, self.llen, self.rlen,
                self.state, self.steps, stop)
            self.state, self.steps = int(state), int(steps)
            if status == ST_ACCEPT:
                out = self.tape_text(self.m.output_tape)
                return self._done(finish_outcome(self.m, self.x, out, self.steps, self.limits))
            if status == ST_HALT:
                return self._done(RunOutcome(REJECT, None, self.steps))
            if status == ST_TIME:
                if self.steps >= self.ceiling:
                    return self._done(RunOutcome(TIME, None, self.steps))
                return None
            if status == ST_GROW:
                self._grow()
                continue
            # oracle call or an illegal rubber move
            if self.state in c.illegal:
                raise IllegalRubberOp(f"insert/delete on a normal tape at {c.state_names[self.state]}")
            word = self.tape_text(self.m.query_tape)
            try:
                if self.state in c.sites:
                    site = c.sites[self.state]
                    nxt = site.yes if _member(self.oracle, site.name, word) else site.no
                else:
                    t = c.roracle[self.state]
                    if _member(self.oracle, t.oracle, word) != t.answer:
                        return self._done(RunOutcome(REJECT, None, self.steps))
                    nxt = t.target
            except OracleMissing:
                return self._done(RunOutcome(MISSING, None, self.steps))
            self.state = c.state_id[nxt]
            self.steps += 1

    def _done(self, outcome: RunOutcome) -> RunOutcome:
        self.outcome = outcome
        return outcome

    def finish(self) -> RunOutcome:
        return self.advance(None)


@lru_cache(maxsize=1)
def warm_up() -> None:
    """Trigger kernel compilation (or load it from the on-disk cache)."""
    from .machine_core import PolyBound, TapeSpec, Transition

    m = Machine("warm", ("a", "b", "c"), "a", "c",
                (TapeSpec("input"), TapeSpec("output")),
                (Transition(RW, "a", "b", ("0", "_"), ("0", "_")),
                 Transition(SHIFT, "b", "c", moves=("R", "S"))),
                PolyBound(2, 1), None)
    Runner(m, "0").finish()
