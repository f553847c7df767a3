"""Bit encodings of words, pairs and machines, plus the bounded evaluators."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    BoundTooLarge,
    InvalidProgram,
    MalformedProgram,
    NotAPair,
    NotInDomain,
)
from .machine_core import (
    Machine,
    PolyBound,
    format_machine,
    parse_machine,
    run,
    validate_deterministic,
    validate_injective,
)

_CODE = {"0": "00", "1": "01"}
_DECODE = {"00": "0", "01": "1"}
SEP = "11"

# name of the fixed complete oracle that oracle programs may consult
FIXED_ORACLE = "universal"

CLASS_TAGS = ("fP", "invfP", "invfP_NP", "cofP_pair", "regcofp_pair")
PAIR_TAGS = {"cofP_pair": ("invfP_NP", "fP"), "regcofp_pair": ("cofP_pair", "cofP_pair")}


def code(x: str) -> str:
    """Double every bit: 0 -> 00, 1 -> 01."""
    try:
        return "".join(_CODE[c] for c in x)
    except KeyError as exc:
        raise ValueError(f"not a bitstring: {x!r}") from exc


def pair_encode(w: str, x: str) -> str:
    return code(w) + SEP + x


def pair_decode(s: str) -> tuple:
    """Split code(w) 11 x back into (w, x)."""
    out = []
    for i in range(0, len(s) - 1, 2):
        chunk = s[i:i + 2]
        if chunk == SEP:
            return "".join(out), s[i + 2:]
        if chunk not in _DECODE:
            raise NotAPair(f"bad code unit {chunk!r} at position {i}")
        out.append(_DECODE[chunk])
    raise NotAPair("no separator at an even position")


def is_pair(s: str) -> bool:
    try:
        pair_decode(s)
    except NotAPair:
        return False
    return True


# ---------------------------------------------------------------------------
# machines as bits


def serialize_machine(m: Machine) -> str:
    """UTF-8 bits of the canonical machine text, eight bits per byte."""
    return "".join(f"{b:08b}" for b in format_machine(m).encode("utf-8"))


def deserialize_machine(bits: str) -> Machine:
    if not bits or len(bits) % 8 or set(bits) - {"0", "1"}:
        raise MalformedProgram("machine bits must be a non-empty whole number of bytes")
    raw = bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8))
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedProgram(f"machine bits are not UTF-8: {exc}") from None
    m = parse_machine(text)
    if format_machine(m) != text:
        raise MalformedProgram("machine bits are not in canonical form")
    return m


@dataclass(frozen=True)
class Program:
    """A serialized machine with a class tag, or a pair of programs."""

    class_tag: str
    bits: str
    parts: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.class_tag not in CLASS_TAGS:
            raise MalformedProgram(f"unknown class tag {self.class_tag!r}")

    @classmethod
    def of(cls, m: Machine, class_tag: str = "invfP") -> "Program":
        return cls(class_tag, serialize_machine(m))

    @classmethod
    def pair(cls, class_tag: str, first: "Program", second: "Program") -> "Program":
        if class_tag not in PAIR_TAGS:
            raise MalformedProgram(f"{class_tag} is not a pair class")
        return cls(class_tag, pair_encode(first.bits, second.bits), (first, second))

    @property
    def is_pair(self) -> bool:
        return self.class_tag in PAIR_TAGS

    @cached_property
    def machine(self) -> Machine:
        if self.is_pair:
            raise InvalidProgram(f"{self.class_tag} program has no single machine")
        return deserialize_machine(self.bits)

    @property
    def name(self) -> str:
        if self.is_pair:
            return "(" + ",".join(p.name for p in self.parts) + ")"
        return self.machine.name

    def format(self) -> str:
        out = [f"class: {self.class_tag}"]
        if self.is_pair:
            for p in self.parts:
                out.append("[part]")
                out.append(p.format().rstrip("\n"))
                out.append("[end]")
            return "\n".join(out) + "\n"
        return out[0] + "\n" + format_machine(self.machine)

    @classmethod
    def parse(cls, text: str) -> "Program":
        lines = text.splitlines()
        while lines and not lines[0].split("#", 1)[0].strip():
            lines.pop(0)
        if not lines or not lines[0].startswith("class:"):
            raise MalformedProgram("program text must start with 'class: <tag>'")
        tag = lines[0].split(":", 1)[1].strip()
        if tag not in CLASS_TAGS:
            raise MalformedProgram(f"unknown class tag {tag!r}")
        body = lines[1:]
        if tag not in PAIR_TAGS:
            return cls.of(parse_machine("\n".join(body)), tag)
        parts, depth, cur = [], 0, []
        for line in body:
            s = line.strip()
            if s == "[part]":
                if depth:
                    cur.append(line)
                depth += 1
            elif s == "[end]":
                depth -= 1
                if depth < 0:
                    raise MalformedProgram("unbalanced [end]")
                if depth == 0:
                    parts.append(cls.parse("\n".join(cur)))
                    cur = []
                else:
                    cur.append(line)
            elif depth:
                cur.append(line)
            elif s and not s.startswith("#"):
                raise MalformedProgram(f"text outside a [part] block: {s!r}")
        if depth or len(parts) != 2:
            raise MalformedProgram(f"{tag} needs exactly two [part] blocks")
        want = PAIR_TAGS[tag]
        for p, w in zip(parts, want):
            if p.class_tag != w:
                raise MalformedProgram(f"{tag} expects parts {want}, got {p.class_tag}")
        return cls.pair(tag, *parts)


def _as_program(p, tag: str) -> Program:
    if isinstance(p, Program):
        return p
    if isinstance(p, Machine):
        return Program.of(p, tag)
    if isinstance(p, str):
        return Program(tag, p)
    raise TypeError(f"expected Program, Machine or bits, got {type(p).__name__}")


def _oracle_names(oracle) -> set:
    if isinstance(oracle, Mapping):
        return set(oracle)
    return {FIXED_ORACLE}


def validate_program(p: Program, oracle=None) -> Machine | tuple:
    """Check the demands of the class tag; return the machine (or the parts)."""
    if p.is_pair:
        for part in p.parts:
            validate_program(part, oracle)
        return p.parts
    try:
        m = p.machine
    except MalformedProgram as exc:
        raise InvalidProgram(f"undecodable program: {exc}") from None
    rep = validate_deterministic(m)
    if not rep:
        raise InvalidProgram(f"{m.name}: not deterministic")
    if m.time_bound is None or m.balance_bound is None:
        raise InvalidProgram(f"{m.name}: needs both a time and a balance bound")
    if p.class_tag in ("invfP", "invfP_NP"):
        rep = validate_injective(m)
        if not rep:
            raise InvalidProgram(f"{m.name}: not injective ({rep.issues[0].kind})")
    uses = {s.name for s in m.oracle_sites} | {t.oracle for t in m.transitions if t.oracle}
    if uses:
        if p.class_tag != "invfP_NP":
            raise InvalidProgram(f"{m.name}: oracle calls are not allowed in a {p.class_tag} program")
        extra = uses - _oracle_names(oracle)
        if extra:
            raise InvalidProgram(f"{m.name}: oracle {sorted(extra)} is not the fixed oracle")
    return m


def _check_bound(m: Machine, q: PolyBound) -> None:
    if not m.time_bound.below(q):
        raise BoundTooLarge(f"{m.name}: time bound {m.time_bound} is not below {q}")


class _NoOutput:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NoOutput"

    __str__ = __repr__


NoOutput = _NoOutput()


def _apply(m: Machine, x, oracle):
    if x is None:
        return None
    out = run(m, x, oracle)
    return out.output if out.accepted else None


def inj_ev(q: PolyBound, s: str, oracle=None) -> str:
    """pair_encode(w, x) -> pair_encode(w, phi_w(x)) for injective programs w."""
    try:
        w, x = pair_decode(s)
    except NotAPair as exc:
        raise InvalidProgram(f"input is not a program/argument pair: {exc}") from None
    m = validate_program(Program(("invfP_NP" if oracle is not None else "invfP"), w), oracle)
    _check_bound(m, q)
    y = _apply(m, x, oracle)
    if y is None:
        raise NotInDomain(f"{m.name} has no output on {x!r}")
    return pair_encode(w, y)


def _cofp_parts(q, vp, w, oracle):
    vp = _as_program(vp, "invfP_NP")
    w = _as_program(w, "fP")
    mv = validate_program(Program("invfP_NP", vp.bits), oracle)
    mw = validate_program(Program("fP", w.bits), oracle)
    _check_bound(mv, q)
    _check_bound(mw, q)
    return mv, mw


def _cofp(mv, mw, y, oracle):
    x = _apply(mv, y, oracle)
    fx = _apply(mw, x, oracle)
    if fx is None:
        return NoOutput
    back = _apply(mv, fx, oracle)
    if _apply(mw, back, oracle) != fx or back != x:
        return NoOutput
    return x


def cofp_eval(q: PolyBound, vp, w, y: str, oracle=None):
    """Evaluate the cofP-program (v', w) on y; NoOutput where it is undefined."""
    mv, mw = _cofp_parts(q, vp, w, oracle)
    return _cofp(mv, mw, y, oracle)


def regcofp_eval(q: PolyBound, u: Program, vp: Program, x: str, oracle=None):
    """Psi_u(x) when Psi_u Psi_v' Psi_u(x) = Psi_u(x), NoOutput otherwise."""
    for p in (u, vp):
        if not isinstance(p, Program) or p.class_tag != "cofP_pair":
            raise InvalidProgram("both components must be cofP_pair programs")
    pu = _cofp_parts(q, *u.parts, oracle)
    pv = _cofp_parts(q, *vp.parts, oracle)

    def ev(parts, z):
        return NoOutput if z is NoOutput else _cofp(*parts, z, oracle)

    a = ev(pu, x)
    if a is NoOutput:
        return NoOutput
    return a if ev(pu, ev(pv, a)) == a else NoOutput


__all__ = [
    "FIXED_ORACLE", "NoOutput", "Program", "code", "cofp_eval", "deserialize_machine",
    "inj_ev", "is_pair", "pair_decode", "pair_encode", "regcofp_eval",
    "serialize_machine", "validate_program",
]
