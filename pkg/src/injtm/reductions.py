"""Oracle languages, reductions between them and the padded universal language."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import corpus
from .builder import Builder
from .codec import FIXED_ORACLE, Program, code, pair_decode, pair_encode
from .errors import NotAPair, UnknownOracle
from .fnlab import FiniteFn, Universe, all_strings
from .machine_core import Machine, PolyBound, run

# ---------------------------------------------------------------------------
# verifier machines; input is pair_encode(x, certificate)

_VTAPES = ("input:normal", "output:normal", "work:normal")


def _v(inp="_", work="_"):
    return (inp, "_", work)


def even_weight_verifier() -> Machine:
    """Accepts code(x) 11 with x of even weight and an empty certificate."""
    b = Builder("verify-even", _VTAPES)
    for par, other in (("E", "O"), ("O", "E")):
        b.rw(par, _v("0"), par + "a")
        b.shift(par + "a", par + "b", "R S S")
        b.rw(par + "b", _v("0"), par + "0")
        b.rw(par + "b", _v("1"), par + "1")
        b.shift(par + "0", par, "R S S")
        b.shift(par + "1", other, "R S S")
    b.rw("E", _v("1"), "s1")
    b.shift("s1", "s2", "R S S")
    b.rw("s2", _v("1"), "s3")
    b.shift("s3", "s4", "R S S")
    b.rw("s4", _v(), "acc")
    return b.build("E", "acc", time=(3, 1))


def _decode_and_rewind(b: Builder):
    """Copy x onto the work tape, skip the separator, rewind the work tape; ends in 'cert'."""
    b.rw("start", _v("0"), "d1")
    b.shift("d1", "d2", "R S S")
    for s in "01":
        b.rw("d2", _v(s), "d3", _v(s, s))
    b.shift("d3", "start", "R S R")
    b.rw("start", _v("1"), "sep1")
    b.shift("sep1", "sep2", "R S S")
    b.rw("sep2", _v("1"), "sep3")
    b.shift("sep3", "rw", "R S L")
    for s in "01":
        b.rw("rw", ("*", "_", s), "rw1")
    b.shift("rw1", "rw", "S S L")
    b.rw("rw", ("*", "_", "_"), "rw2")
    b.shift("rw2", "cert", "S S R")
    # the certificate 0^j walks the work head j cells to the right
    for s in "_01":
        b.rw("cert", ("0", "_", s), "c1")
    b.shift("c1", "cert", "R S R")


def one_at_verifier() -> Machine:
    """Accepts code(x) 11 0^j when x has a 1 at position j."""
    b = Builder("verify-one", _VTAPES)
    _decode_and_rewind(b)
    b.rw("cert", _v("_", "1"), "acc")
    return b.build("start", "acc", time=(6, 1))


def pair11_verifier() -> Machine:
    """Accepts code(x) 11 0^j when x has 11 at positions j, j+1."""
    b = Builder("verify-11", _VTAPES)
    _decode_and_rewind(b)
    b.rw("cert", _v("_", "1"), "p1")
    b.shift("p1", "p2", "S S R")
    b.rw("p2", _v("_", "1"), "acc")
    return b.build("start", "acc", time=(6, 1))


# ---------------------------------------------------------------------------
# languages


class OracleLanguage:
    """A decidable set of bitstrings, given directly or by a verifier.

    With a verifier, x is a member when some certificate c with
    |c| <= cert_bound(|x|) makes the verifier accept pair_encode(x, c).
    Answers are memoised.
    """

    def __init__(self, name: str, predicate: Callable[[str], bool] | None = None,
                 verifier: Machine | None = None, cert_bound: PolyBound | None = None):
        if (predicate is None) == (verifier is None):
            raise ValueError("give exactly one of predicate or verifier")
        if verifier is not None and cert_bound is None:
            raise ValueError("a verifier needs a certificate bound")
        self.name = name
        self.predicate = predicate
        self.verifier = verifier
        self.cert_bound = cert_bound
        self._memo: dict = {}

    @property
    def presentation(self) -> str:
        return "verifier" if self.verifier is not None else "predicate"

    @property
    def program(self) -> Program:
        if self.verifier is None:
            raise ValueError(f"{self.name} has no verifier program")
        return Program.of(self.verifier, "fP")

    def certificate(self, x: str):
        """A certificate for x, or None; only for verifier languages."""
        for c in all_strings(self.cert_bound.eval(len(x))):
            if run(self.verifier, pair_encode(x, c)).accepted:
                return c
        return None

    def contains(self, x: str) -> bool:
        hit = self._memo.get(x)
        if hit is None:
            if self.verifier is not None:
                hit = self.certificate(x) is not None
            else:
                hit = bool(self.predicate(x))
            self._memo[x] = hit
        return hit

    __call__ = contains

    def __contains__(self, x):
        return self.contains(x)

    def __repr__(self):
        return f"OracleLanguage({self.name!r}, {self.presentation})"


def _parse_numbers(s: str) -> list | None:
    out = []
    while s:
        try:
            head, s = pair_decode(s)
        except NotAPair:
            return None
        out.append(int(head, 2) if head else 0)
    return out


def subset_sum_instance(target: int, items) -> str:
    """code(target) 11 code(a1) 11 ... in binary."""
    return "".join(pair_encode(format(n, "b") if n else "", "") for n in (target, *items))


def subset_sum(s: str) -> bool:
    nums = _parse_numbers(s)
    if not nums:
        return False
    target, items = nums[0], nums[1:]
    return any(sum(c) == target
               for r in range(len(items) + 1)
               for c in itertools.combinations(items, r))


class ImageLanguage(OracleLanguage):
    """Strings pair_encode(z, pair_encode(u, 0^n)) such that m(u v) = z for some
    v with |u v| = n.  Decided by running m on every completion."""

    def __init__(self, name: str, m: Machine, oracle=None):
        super().__init__(name, predicate=self._decide)
        self.m = m
        self.oracle = oracle
        self._runs: dict = {}

    def _f(self, x: str):
        if x not in self._runs:
            out = run(self.m, x, self.oracle)
            self._runs[x] = out.output if out.accepted else None
        return self._runs[x]

    def query(self, z: str, u: str, n: int) -> bool:
        return self.contains(pair_encode(z, pair_encode(u, "0" * n)))

    def _decide(self, s: str) -> bool:
        try:
            z, rest = pair_decode(s)
            u, pad = pair_decode(rest)
        except NotAPair:
            return False
        if set(pad) - {"0"} or len(u) > len(pad):
            return False
        n = len(pad)
        return any(self._f(u + "".join(v)) == z for v in itertools.product("01", repeat=n - len(u)))


def _split_padded(rest: str):
    """x 11 0^pad -> (x, pad) using the rightmost separator."""
    i = rest.rfind("11")
    if i < 0 or set(rest[i + 2:]) - {"0"}:
        return None
    return rest[:i], len(rest) - i - 2


def hartmanis_map(v, p_v: PolyBound, x: str) -> str:
    """code(v) 11 x 11 0^(|v| * p_v(|x|))."""
    bits = v.bits if isinstance(v, Program) else v
    return code(bits) + "11" + x + "11" + "0" * (len(bits) * p_v.eval(len(x)))


def universal_member(s: str, registry=None) -> bool:
    """Membership in the padded universal language over a finite verifier registry."""
    entries = verifier_entries() if registry is None else registry
    try:
        w, rest = pair_decode(s)
    except NotAPair:
        return False
    lang = entries.get(w)
    split = _split_padded(rest)
    if lang is None or split is None:
        return False
    x, pad = split
    if pad != len(w) * lang.cert_bound.eval(len(x)):
        return False
    return lang.contains(x)


class UniversalLanguage(OracleLanguage):
    def __init__(self, name: str, entries: dict):
        super().__init__(name, predicate=lambda s: universal_member(s, entries))
        self.entries = entries


@lru_cache(maxsize=None)
def _verifier_langs() -> tuple:
    return (
        OracleLanguage("even-weight", verifier=even_weight_verifier(), cert_bound=PolyBound(1, 0)),
        OracleLanguage("one-at", verifier=one_at_verifier(), cert_bound=PolyBound(1, 1)),
        OracleLanguage("pair11", verifier=pair11_verifier(), cert_bound=PolyBound(1, 1)),
    )


def verifier_entries() -> dict:
    """Program bits -> verifier-presented language."""
    return {lang.program.bits: lang for lang in _verifier_langs()}


@lru_cache(maxsize=None)
def oracle_registry() -> dict:
    langs = {lang.name: lang for lang in _verifier_langs()}
    langs["subset-sum"] = OracleLanguage("subset-sum", predicate=subset_sum)
    langs["im-dropLast"] = ImageLanguage("im-dropLast", corpus.drop_last())
    langs[FIXED_ORACLE] = UniversalLanguage(FIXED_ORACLE, verifier_entries())
    return langs


def lookup(name: str) -> OracleLanguage:
    try:
        return oracle_registry()[name]
    except KeyError:
        raise UnknownOracle(f"no oracle language named {name!r}") from None


# ---------------------------------------------------------------------------
# reductions

KINDS = ("many_one", "one_one", "invfP")


@dataclass(frozen=True)
class ReductionWitness:
    f: object  # FiniteFn, Machine or callable returning None where undefined
    window: Universe
    kind: str = "many_one"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown reduction kind {self.kind!r}")

    def apply(self, x: str):
        f = self.f
        if isinstance(f, FiniteFn):
            return f.get(x)
        if isinstance(f, Machine):
            out = run(f, x)
            return out.output if out.accepted else None
        return f(x)

    def table(self) -> FiniteFn:
        return FiniteFn((x, y) for x in self.window if (y := self.apply(x)) is not None)


@dataclass
class ReductionReport:
    ok: bool
    checked: int
    counterexamples: list = field(default_factory=list)

    def lines(self) -> list:
        head = f"reduction: {'holds' if self.ok else 'fails'} on {self.checked} strings"
        return [head] + [f"  {c}" for c in self.counterexamples]


def check_reduction(w: ReductionWitness, L1, L2, limit: int = 20) -> ReductionReport:
    """x in L1 <=> f(x) defined and in L2, for every x of the window."""
    bad = []
    table = w.table()
    for x in w.window:
        fx = table.get(x)
        left = bool(L1(x))
        right = fx is not None and bool(L2(fx))
        if left != right:
            where = "f undefined" if fx is None else f"f(x)={fx!r}"
            bad.append(f"x={x!r}: in L1={left}, {where}, in L2={right}")
    if w.kind != "many_one" and not table.is_injective():
        seen = {}
        for x, y in table.items():
            if y in seen:
                bad.append(f"f({seen[y]!r}) = f({x!r}) = {y!r}")
            seen.setdefault(y, x)
    return ReductionReport(not bad, len(w.window), bad[:limit])


def hartmanis_witness(lang: OracleLanguage, max_len: int) -> ReductionWitness:
    bits = lang.program.bits
    return ReductionWitness(lambda x: hartmanis_map(bits, lang.cert_bound, x),
                            Universe(max_len), "invfP")


def asymmetry_witness(max_len: int = 6):
    """An injective reduction whose inverse does not reduce back.

    x -> x0 reduces even weight to itself; the inverse drop0 is undefined on
    even-weight strings ending in 1, so it fails in the other direction while
    still reducing the image part.
    """
    win = Universe(max_len)
    f = FiniteFn((x, x + "0") for x in win)
    back = FiniteFn((y, x) for x, y in f.items() if len(y) <= max_len)
    ew = lookup("even-weight")
    forward = ReductionWitness(f, win, "invfP")
    backward = ReductionWitness(back, win, "invfP")
    return forward, backward, ew, ew


__all__ = [
    "ImageLanguage", "OracleLanguage", "ReductionReport", "ReductionWitness", "UniversalLanguage",
    "asymmetry_witness", "check_reduction", "hartmanis_map", "hartmanis_witness", "lookup",
    "oracle_registry", "subset_sum", "subset_sum_instance", "universal_member", "verifier_entries",
]
