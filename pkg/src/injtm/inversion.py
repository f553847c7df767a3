"""Inverting machine-computed functions.

Three routes: the llex-least preimage by exhaustive search, syntactic
reversal of injective programs, and a dovetailed search over candidate
inverters that verifies every answer before returning it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._engine import Runner
from .codec import Program, validate_program
from .errors import InvalidProgram, NotInImage
from .fnlab import FiniteFn, all_strings, fmin
from .machine_core import Machine, RunLimits, extract_fn, run
from .machine_transform import reverse

FALLBACK = "fallback"


def _input_alphabet(m: Machine) -> str:
    return "".join(c for c in "01" if c in m.alphabet)


def _window(m: Machine, y: str) -> int:
    if m.balance_bound is None:
        raise InvalidProgram(f"{m.name} has no balance bound, so its preimages cannot be searched")
    return m.balance_bound.eval(len(y))


def fmin_invert(m: Machine, y: str, oracle=None) -> str:
    """The llex-least x with m(x) = y among |x| <= balance(|y|)."""
    limit = _window(m, y)
    for x in all_strings(limit, _input_alphabet(m)):
        out = run(m, x, oracle)
        if out.accepted and out.output == y:
            return x
    raise NotInImage(f"{y!r} has no preimage under {m.name} of length <= {limit}")


def fmin_table(m: Machine, max_out_len: int, oracle=None) -> FiniteFn:
    """fmin_invert tabulated over all outputs of length <= max_out_len."""
    if m.balance_bound is None:
        raise InvalidProgram(f"{m.name} has no balance bound")
    window = m.balance_bound.eval(max_out_len)
    table = extract_fn(m, window, oracle, alphabet=_input_alphabet(m))
    short = FiniteFn((x, y) for x, y in table.items() if len(y) <= max_out_len)
    return fmin(short)


def fmin_invert_via_oracle(m: Machine, y: str, image_oracle) -> str:
    """llex-least preimage found by prefix queries to an image language.

    ``image_oracle(z, u, n)`` answers whether some x of length n that starts
    with u has m(x) = z.  The length is fixed first, then one bit at a time.
    """
    limit = _window(m, y)
    alpha = _input_alphabet(m)
    for n in range(limit + 1):
        if not image_oracle(y, "", n):
            continue
        u = ""
        while len(u) < n:
            for b in alpha:
                if image_oracle(y, u + b, n):
                    u += b
                    break
            else:  # pragma: no cover - only with an inconsistent oracle
                raise NotInImage("image oracle answered inconsistently")
        return u
    raise NotInImage(f"{y!r} has no preimage under {m.name} of length <= {limit}")


def prog_inv_injective(w: Program, oracle=None) -> Program:
    """Program for the inverse function: the reversed machine."""
    if w.class_tag not in ("invfP", "invfP_NP"):
        raise InvalidProgram(f"expected an injective program, got {w.class_tag}")
    m = validate_program(w, oracle)
    return Program.of(reverse(m), w.class_tag)


# ---------------------------------------------------------------------------
# dovetailed search


@dataclass
class SearchStats:
    steps_total: int = 0
    programs_tried: int = 0
    winner: str | None = None
    per_program_steps: dict = field(default_factory=dict)
    verify_steps: int = 0
    rounds: int = 0

    def charge(self, pid: str, n: int) -> None:
        self.per_program_steps[pid] = self.per_program_steps.get(pid, 0) + n
        self.steps_total += n


class _Candidate:
    """A registry inverter run on y, resumable in slices."""

    def __init__(self, pid: str, m: Machine, y: str, oracle):
        self.pid = pid
        try:
            self.runner = Runner(m, y, oracle)
        except ValueError:
            self.runner = None  # y uses symbols the inverter cannot read

    def advance(self, budget: int):
        """Returns (steps used, candidate x or None, finished)."""
        if self.runner is None:
            return 0, None, True
        before = self.runner.steps
        out = self.runner.advance(budget)
        used = self.runner.steps - before
        if out is None:
            return used, None, False
        return used, (out.output if out.accepted else None), True


class _Exhaustive:
    """Runs w on every x of the balance window in llex order."""

    def __init__(self, w: Machine, y: str, oracle):
        self.pid = FALLBACK
        self.w, self.y, self.oracle = w, y, oracle
        self.inputs = iter(all_strings(_window(w, y), _input_alphabet(w)))
        self.cur = None
        self.x = None

    def advance(self, budget: int):
        used = 0
        while used < budget:
            if self.cur is None:
                self.x = next(self.inputs, None)
                if self.x is None:
                    return used, None, True
                self.cur = Runner(self.w, self.x, self.oracle)
            before = self.cur.steps
            out = self.cur.advance(budget - used)
            used += self.cur.steps - before
            if out is None:
                continue
            self.cur = None
            if out.accepted and out.output == self.y:
                return used, self.x, False
        return used, None, False


def levin_invert(registry, w, y: str, oracle=None, max_rounds: int = 64):
    """Find x with w(x) = y by dovetailing the registry inverters.

    In round r candidate i runs for 2^(r-i) further steps (once r >= i); the
    exhaustive search over the balance window always comes last.  Every
    proposed x is checked by running w before it is accepted.
    """
    mw = w.machine if isinstance(w, Program) else w
    if mw.balance_bound is None:
        raise InvalidProgram(f"{mw.name} has no balance bound")
    stats = SearchStats()
    live = []
    for i, p in enumerate(registry):
        m = p.machine if isinstance(p, Program) else p
        live.append(_Candidate(f"{i}:{m.name}", m, y, oracle))
    live.append(_Exhaustive(mw, y, oracle))
    stats.programs_tried = len(live)
    order = {c.pid: i for i, c in enumerate(live)}
    for r in itertools.count():
        if not live or r >= max_rounds:
            break
        stats.rounds = r + 1
        for cand in list(live):
            i = order[cand.pid]
            if r < i:
                continue
            used, x, finished = cand.advance(2 ** (r - i))
            stats.charge(cand.pid, used)
            if finished:
                live.remove(cand)
            if x is None:
                continue
            check = run(mw, x, oracle)
            stats.verify_steps += check.steps
            if check.accepted and check.output == y:
                stats.winner = cand.pid
                return x, stats
    raise NotInImage(f"no preimage of {y!r} under {mw.name} found")


def solo_steps(inverter, y: str, oracle=None) -> int:
    m = inverter.machine if isinstance(inverter, Program) else inverter
    return run(m, y, oracle, RunLimits()).steps


__all__ = [
    "FALLBACK", "SearchStats", "fmin_invert", "fmin_invert_via_oracle", "fmin_table",
    "levin_invert", "prog_inv_injective", "solo_steps",
]
