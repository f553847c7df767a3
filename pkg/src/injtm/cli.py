"""Command-line front end.

Exit status: 0 for success or a true answer, 1 for a false answer, a
missing output or a missing preimage, 2 for bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import corpus, fnlab as fl
from .codec import (
    NoOutput,
    Program,
    cofp_eval,
    inj_ev,
    pair_decode,
    pair_encode,
    regcofp_eval,
    serialize_machine,
)
from .errors import InjtmError, NotAPair, NotInDomain, NotInImage
from .inversion import fmin_invert, levin_invert
from .machine_core import (
    DEFAULT_STEP_CAP,
    PolyBound,
    RunLimits,
    format_machine,
    parse_machine,
    run,
    validate_deterministic,
    validate_injective,
)
from .machine_transform import bennett_clean, bennett_garbage, chain, reverse, warnings_of
from .reductions import (
    ReductionWitness,
    check_reduction,
    hartmanis_witness,
    lookup,
    oracle_registry,
)

OK, FALSE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _bits(s: str, what: str = "bitstring") -> str:
    if set(s) - {"0", "1"}:
        raise UsageError(f"{what} must be literal 0/1 text, got {s!r}")
    return s


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _machine(path: str):
    text = _read(path)
    if text.lstrip().startswith("class:"):
        return Program.parse(text).machine
    return parse_machine(text)


def _fn(path: str) -> fl.FiniteFn:
    try:
        return fl.FiniteFn.parse(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _bound(text: str) -> PolyBound:
    try:
        a, k = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"bound must be 'a,k', got {text!r}") from None
    return PolyBound(a, k)


def _oracle(name):
    if name is None:
        return oracle_registry()
    return {name: lookup(name)}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# machines


def cmd_check(a) -> int:
    m = _machine(a.machine)
    want = [k for k in ("deterministic", "injective") if getattr(a, k)] or ["deterministic", "injective"]
    status = OK
    for kind in want:
        rep = validate_deterministic(m) if kind == "deterministic" else validate_injective(m)
        print(f"{kind}: {'yes' if rep else 'no'}")
        for line in rep.lines():
            print("  " + line)
        if not rep:
            status = FALSE
    return status


def cmd_run(a) -> int:
    m = _machine(a.machine)
    out = run(m, _bits(a.input), _oracle(a.oracle), RunLimits(max_steps=a.max_steps))
    if a.steps:
        print(f"steps: {out.steps}", file=sys.stderr)
    if out.accepted:
        print(out.output)
        return OK
    print(out.tag)
    return FALSE


def cmd_reverse(a) -> int:
    r = reverse(_machine(a.machine))
    for w in warnings_of(r):
        print(f"warning: {w}", file=sys.stderr)
    _emit(format_machine(r), a.out)
    return OK


def cmd_bennett(a) -> int:
    m = _machine(a.machine)
    if a.inverse:
        b = bennett_clean(m, _machine(a.inverse), oracle=oracle_registry())
    else:
        b = bennett_garbage(m)
    _emit(format_machine(b), a.out)
    return OK


def cmd_chain(a) -> int:
    _emit(format_machine(chain(_machine(a.first), _machine(a.second))), a.out)
    return OK


# ---------------------------------------------------------------------------
# programs


def cmd_encode(a) -> int:
    if a.decode is not None:
        try:
            w, x = pair_decode(_bits(a.decode))
        except NotAPair as exc:
            print(f"not a pair: {exc}", file=sys.stderr)
            return FALSE
        print(w)
        print(x)
    elif a.machine:
        m = _machine(a.machine)
        print(serialize_machine(m) if a.tag is None else Program.of(m, a.tag).bits)
    else:
        if a.pair is None:
            raise UsageError("give --pair W X, --decode S or --machine FILE")
        print(pair_encode(_bits(a.pair[0]), _bits(a.pair[1])))
    return OK


def cmd_eval(a) -> int:
    p = Program.parse(_read(a.program))
    q = _bound(a.bound)
    x = _bits(a.input)
    ora = _oracle(a.oracle) if p.class_tag == "invfP_NP" or a.oracle else None
    if p.class_tag in ("invfP", "invfP_NP"):
        try:
            y = pair_decode(inj_ev(q, pair_encode(p.bits, x), ora))[1]
        except NotInDomain:
            print("NoOutput")
            return FALSE
    elif p.class_tag == "cofP_pair":
        y = cofp_eval(q, *p.parts, x, ora or oracle_registry())
    elif p.class_tag == "regcofp_pair":
        y = regcofp_eval(q, *p.parts, x, ora or oracle_registry())
    else:
        out = run(p.machine, x, ora)
        y = out.output if out.accepted else NoOutput
    if y is NoOutput:
        print("NoOutput")
        return FALSE
    print(y)
    return OK


def _registry(path) -> list:
    if path is None:
        return []
    d = Path(path)
    if not d.is_dir():
        raise UsageError(f"registry {path} is not a directory")
    return [_machine(str(f)) for f in sorted(d.glob("*.tm"))]


def cmd_invert(a) -> int:
    m = _machine(a.machine)
    y = _bits(a.output)
    ora = oracle_registry()
    try:
        if a.mode == "fmin":
            x = fmin_invert(m, y, ora)
        else:
            x, st = levin_invert(_registry(a.registry), m, y, ora)
            print(f"winner: {st.winner} steps: {st.steps_total} verify: {st.verify_steps}",
                  file=sys.stderr)
    except NotInImage:
        print("NotInImage")
        return FALSE
    print(x)
    return OK


# ---------------------------------------------------------------------------
# finite function lab

_PREDICATES = {
    "inverse": fl.is_inverse,
    "coinverse": fl.is_coinverse,
    "mutual": fl.is_mutual,
    "subinverse": fl.is_subinverse,
}


def cmd_lab(a) -> int:
    if a.op == "compose":
        out = fl.compose_all(*(_fn(p) for p in a.files))
    elif a.op == "fmin":
        out = fl.fmin(_fn(a.files[0]))
    elif a.op == "relinv":
        out = fl.relational_inverse(_fn(a.files[0]))
    elif a.op == "random":
        rng = random.Random(a.seed)
        out = fl.random_fn(rng, fl.Universe(a.max_len).strings(), a.density, injective=a.injective)
    elif a.op in _PREDICATES:
        if len(a.files) != 2:
            raise UsageError(f"lab {a.op} takes F' then F")
        ok = _PREDICATES[a.op](_fn(a.files[0]), _fn(a.files[1]))
        print("true" if ok else "false")
        return OK if ok else FALSE
    else:  # injective
        ok = _fn(a.files[0]).is_injective()
        print("true" if ok else "false")
        return OK if ok else FALSE
    sys.stdout.write(out.format())
    return OK


# ---------------------------------------------------------------------------
# oracles and reductions


def cmd_member(a) -> int:
    ok = lookup(a.oracle).contains(_bits(a.string))
    print("true" if ok else "false")
    return OK if ok else FALSE


def cmd_reduce(a) -> int:
    source = lookup(a.source)
    if a.map is None:
        w = hartmanis_witness(source, a.window)
        target = lookup(a.target or "universal")
    else:
        text = _read(a.map)
        f = parse_machine(text) if text.lstrip().startswith("machine") else fl.FiniteFn.parse(text)
        w = ReductionWitness(f, fl.Universe(a.window), a.kind)
        if a.target is None:
            raise UsageError("--map needs --target")
        target = lookup(a.target)
    rep = check_reduction(w, source, target)
    print("\n".join(rep.lines()))
    return OK if rep.ok else FALSE


# ---------------------------------------------------------------------------
# corpus


def cmd_corpus(a) -> int:
    from .suites import SUITES, run_suite

    if a.action == "list":
        for name, m in sorted(corpus.deterministic_corpus().items()):
            print(f"{name} tapes={len(m.tapes)} states={len(m.states)} transitions={len(m.transitions)}")
        return OK
    if a.action == "dump":
        if not a.name:
            raise UsageError("corpus dump needs a machine name")
        try:
            m = corpus.by_name(a.name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        _emit(format_machine(m), a.out)
        return OK
    names = [s.name for s in SUITES] if a.name in (None, "all") else [a.name]
    status = OK
    for name in names:
        try:
            r = run_suite(name)
        except KeyError:
            raise UsageError(f"unknown suite {name!r}") from None
        print("\n".join(r.lines()), flush=True)
        if not r.passed:
            status = FALSE
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="injtm", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("check", help="validate a machine")
    s.add_argument("--machine", required=True)
    s.add_argument("--deterministic", action="store_true")
    s.add_argument("--injective", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("run", help="run a machine on one input")
    s.add_argument("--machine", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--oracle", help="restrict oracle calls to this registry language")
    s.add_argument("--max-steps", type=int, default=DEFAULT_STEP_CAP)
    s.add_argument("--steps", action="store_true", help="report the step count on stderr")
    s.set_defaults(func=cmd_run)

    for name, func, help_ in (("reverse", cmd_reverse, "reverse an injective machine"),
                              ("bennett", cmd_bennett, "injective embedding of a machine")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--machine", required=True)
        s.add_argument("--out", "-o")
        if name == "bennett":
            s.add_argument("--inverse", help="machine for the inverse; gives the garbage-free form")
        s.set_defaults(func=func)

    s = sub.add_parser("chain", help="run one machine after another")
    s.add_argument("--first", required=True)
    s.add_argument("--second", required=True)
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("encode", help="pair codes and machine serialization")
    s.add_argument("--pair", nargs=2, metavar=("W", "X"))
    s.add_argument("--decode", metavar="S")
    s.add_argument("--machine")
    s.add_argument("--tag")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("eval", help="evaluate a tagged program under a time bound")
    s.add_argument("--program", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--bound", default="5,2", help="a,k for a(n^k+1)")
    s.add_argument("--oracle")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("invert", help="find a preimage")
    s.add_argument("--mode", choices=("fmin", "levin"), default="fmin")
    s.add_argument("--machine", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--registry", help="directory of candidate inverter .tm files")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("lab", help="finite partial-function operations")
    s.add_argument("op", choices=("compose", "fmin", "relinv", "random", "injective", *_PREDICATES))
    s.add_argument("files", nargs="*")
    s.add_argument("--max-len", type=int, default=2)
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--injective", action="store_true")
    s.set_defaults(func=cmd_lab)

    s = sub.add_parser("reduce", help="check a reduction on a window")
    s.add_argument("--check", action="store_true", help="accepted for compatibility; checking is the only action")
    s.add_argument("--source", required=True)
    s.add_argument("--target")
    s.add_argument("--map", help="FiniteFn or machine file; default is the padding map")
    s.add_argument("--kind", default="many_one", choices=("many_one", "one_one", "invfP"))
    s.add_argument("--window", type=int, default=6)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("member", help="oracle language membership")
    s.add_argument("--oracle", required=True)
    s.add_argument("--string", required=True)
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("corpus", help="built-in machines and acceptance suites")
    s.add_argument("action", choices=("list", "dump", "verify"))
    s.add_argument("name", nargs="?")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if a.cmd == "lab" and a.op != "random" and not a.files:
        print(f"injtm: lab {a.op} needs input files", file=sys.stderr)
        return USAGE
    try:
        return a.func(a)
    except (UsageError, InjtmError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"injtm: {msg}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
