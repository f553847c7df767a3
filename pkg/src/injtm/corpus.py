"""Hand-built machines used by the tests, the CLI and the acceptance suite."""

from __future__ import annotations

from functools import lru_cache

from .builder import Builder
from .machine_core import Machine

B = ("0", "1")
IO = ("input:normal", "output:normal")


def _move_loop(b: Builder, flip: bool = False):
    """Move the input onto the output tape left to right, erasing the input.

    Ends in state ``Q`` reading [_, _] with the output head just past the copy.
    """
    b.shift("start", "a", "L S")
    b.rw("a", "__", "P")
    b.shift("P", "Q", "R R")
    for s in B:
        t = {"0": "1", "1": "0"}[s] if flip else s
        b.rw("Q", (s, "_"), "P", ("_", t))


def _rewind(b: Builder, entry: str = "P2"):
    """Rewind the output head to the first cell and accept."""
    b.shift(entry, "Q2", "S L")
    for s in B:
        b.rw("Q2", ("_", s), entry)
    b.rw("Q2", "__", "Z")
    b.shift("Z", "acc", "S R")


@lru_cache(maxsize=None)
def identity() -> Machine:
    b = Builder("identity", IO)
    _move_loop(b)
    b.rw("Q", "__", "P2")
    _rewind(b)
    return b.build("start", "acc", time=(7, 1), balance=(1, 1))


@lru_cache(maxsize=None)
def flip() -> Machine:
    """Bitwise complement."""
    b = Builder("flip", IO)
    _move_loop(b, flip=True)
    b.rw("Q", "__", "P2")
    _rewind(b)
    return b.build("start", "acc", time=(7, 1), balance=(1, 1))


@lru_cache(maxsize=None)
def append(bit: str) -> Machine:
    b = Builder(f"append{bit}", IO)
    _move_loop(b)
    b.rw("Q", "__", "E1", ("_", bit))
    b.shift("E1", "E2", "S R")
    b.rw("E2", "__", "P2")
    _rewind(b)
    return b.build("start", "acc", time=(11, 1), balance=(1, 1))


def append0() -> Machine:
    return append("0")


def append1() -> Machine:
    return append("1")


@lru_cache(maxsize=None)
def drop0() -> Machine:
    """x0 -> x; undefined on words not ending in 0."""
    b = Builder("drop0", IO)
    _move_loop(b)
    b.rw("Q", "__", "E1")
    b.shift("E1", "E2", "S L")
    b.rw("E2", "_0", "P2", "__")
    _rewind(b)
    return b.build("start", "acc", time=(6, 1), balance=(1, 1))


@lru_cache(maxsize=None)
def drop_last() -> Machine:
    """xb -> x.  Both final erasures write the same vector into one state,
    so the table is not injective."""
    b = Builder("drop_last", IO)
    _move_loop(b)
    b.rw("Q", "__", "E1")
    b.shift("E1", "E2", "S L")
    for s in B:
        b.rw("E2", ("_", s), "P2", "__")
    _rewind(b)
    return b.build("start", "acc", time=(6, 1), balance=(1, 1))


erase = drop_last


def _carry(name: str, hit: str, stop: str) -> Machine:
    # add or subtract one, keeping the width; all-ones (all-zeros) wraps around
    b = Builder(name, IO)
    _move_loop(b)
    b.rw("Q", "__", "C0")
    b.shift("C0", "C1", "S L")
    b.rw("C1", ("_", hit), "C0", ("_", stop))
    b.rw("C1", ("_", stop), "P2", ("_", hit))
    b.rw("C1", "__", "Z")
    _rewind(b)
    return b.build("start", "acc", time=(7, 1), balance=(1, 1))


@lru_cache(maxsize=None)
def inc() -> Machine:
    """Binary increment modulo 2^|x|, most significant bit first."""
    return _carry("inc", "1", "0")


@lru_cache(maxsize=None)
def dec() -> Machine:
    """Binary decrement modulo 2^|x|; the inverse of inc."""
    return _carry("dec", "0", "1")


@lru_cache(maxsize=None)
def const_one() -> Machine:
    """Maps every input of length at most 2 to "1"; longer inputs are rejected."""
    b = Builder("const1", IO)
    b.rw("start", "__", "acc", "_1")
    for s in B:
        b.rw("start", (s, "_"), "c1", "__")
        b.rw("c1r", (s, "_"), "c2", "__")
    b.shift("c1", "c1r", "R S")
    b.rw("c1r", "__", "acc", "_1")
    b.shift("c2", "c2r", "R S")
    b.rw("c2r", "__", "acc", "_1")
    return b.build("start", "acc", time=(3, 0), balance=(2, 0))


@lru_cache(maxsize=None)
def g_machine() -> Machine:
    """0^(2^m) -> 0^m on a rubber input tape.

    Each pass deletes every second 0 and appends one 0 to the output.  A pass
    that meets an odd count ends the run: it succeeds only when that count is
    a lone 0 and some output has already been written, which is then erased.
    """
    b = Builder("g", ("input:rubber", "output:normal"), alphabet="_0")
    b.rw("start", "0_", "S1")
    b.shift("S1", "S2", "L S")
    b.rw("S2", "__", "J")
    b.shift("J", "K", "R S")
    b.rw("K", "0*", "K1")
    b.rw("K", "_*", "W")
    b.shift("K1", "E", "R S")
    b.rw("E", "0*", "E1")
    b.rw("E", "_*", "X1")
    b.shift("E1", "F", "D S")
    b.shift("F", "G", "L S")
    b.rw("G", "0*", "J")
    # even pass done: record one output letter, rewind the input
    b.shift("W", "W1", "S R")
    b.rw("W1", "__", "R1", "_0")
    b.shift("R1", "R2", "L S")
    b.rw("R2", "00", "R1")
    b.rw("R2", "_0", "J")
    # odd count: accept only a lone letter after at least one pass
    b.shift("X1", "X2", "L S")
    b.rw("X2", "0*", "X3")
    b.shift("X3", "X4", "L S")
    b.rw("X4", "_0", "X5")
    b.shift("X5", "X6", "R S")
    b.rw("X6", "00", "X7")
    b.shift("X7", "X9", "D R")
    b.rw("X9", "__", "P")
    b.shift("P", "Q", "S L")
    b.rw("Q", "_0", "P")
    b.rw("Q", "__", "Z")
    b.shift("Z", "acc", "S R")
    return b.build("start", "acc", time=(13, 1), balance=(3, 3))


@lru_cache(maxsize=None)
def oracle_tag(name: str = "even-weight") -> Machine:
    """x -> x b where b = 1 iff x belongs to the oracle language."""
    b = Builder("tag", ("input:normal", "output:normal", "query:normal"))
    b.shift("start", "a", "L S L")
    b.rw("a", "___", "P1")
    b.shift("P1", "Q1", "R S R")
    for s in B:
        b.rw("Q1", (s, "_", "_"), "P1", (s, "_", s))
    b.rw("Q1", "___", "ask")
    b.site("ask", "yes", "no", name)
    for ans, bit in (("yes", "1"), ("no", "0")):
        p, q, mv, nx = f"P{ans}", f"Q{ans}", f"M{ans}", f"N{ans}"
        b.rw(ans, "___", p)
        b.shift(p, q, "L S L")
        for s in B:
            b.rw(q, (s, "_", s), p, (s, "_", "_"))
        b.rw(q, "___", mv)
        b.shift(mv, nx, "R R S")
        for s in B:
            b.rw(nx, (s, "_", "_"), mv, ("_", s, "_"))
        b.rw(nx, "___", "M", ("_", bit, "_"))
    b.shift("M", "M2", "S R S")
    b.rw("M2", "___", "Pr")
    b.shift("Pr", "Qr", "S L S")
    for s in B:
        b.rw("Qr", ("_", s, "_"), "Pr")
    b.rw("Qr", "___", "Z")
    b.shift("Z", "acc", "S R S")
    return b.build("start", "acc", time=(17, 1), balance=(1, 1))


@lru_cache(maxsize=None)
def empty_machine() -> Machine:
    """Accepts nothing."""
    b = Builder("empty", IO)
    b.shift("start", "dead", "S S")
    return b.build("start", "acc", time=(1, 0), balance=(1, 0))


def injective_corpus() -> dict:
    """Machines whose transition tables pass the injectivity check."""
    return {m.name: m for m in (identity(), flip(), append0(), append1(), drop0(),
                                g_machine(), oracle_tag())}


def deterministic_corpus() -> dict:
    out = injective_corpus()
    for m in (drop_last(), inc(), dec(), const_one()):
        out[m.name] = m
    return out


def by_name(name: str) -> Machine:
    table = deterministic_corpus()
    table["erase"] = drop_last()
    table["empty"] = empty_machine()
    if name not in table:
        raise KeyError(f"no corpus machine named {name!r}")
    return table[name]
