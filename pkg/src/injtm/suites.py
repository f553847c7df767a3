"""The twelve acceptance checks, shared by ``injtm corpus verify`` and the tests.

Each check returns a list of failure descriptions (empty when it holds) and
is run under a wall-clock limit by :func:`run_suite`.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import corpus, fnlab as fl
from .codec import NoOutput, Program, cofp_eval, inj_ev, pair_decode, pair_encode
from .errors import NotInDomain, NotInImage
from .inversion import FALLBACK, fmin_invert, levin_invert, prog_inv_injective, solo_steps
from .machine_core import REJECT, PolyBound, extract_fn, run, validate_injective
from .machine_transform import bennett_clean, bennett_garbage, reverse
from .reductions import asymmetry_witness, check_reduction, hartmanis_witness, lookup, oracle_registry

SEED = 20240611

# frozen after the first measurement: the largest steps / 2^m over m = 1..12 was 17.5, at m = 1
G_STEP_CONSTANT = 18


def _oracles():
    return oracle_registry()


def _cap(bad: list, limit: int = 12) -> list:
    return bad[:limit] + ([f"... {len(bad) - limit} more"] if len(bad) > limit else [])


# 1 ---------------------------------------------------------------------------


def check_g_machine() -> list:
    bad = []
    g = corpus.g_machine()
    rg = reverse(g)
    powers = {2 ** m for m in range(1, 13)}
    for m in range(1, 13):
        out = run(g, "0" * 2 ** m)
        if not out.accepted or out.output != "0" * m:
            bad.append(f"g(0^{2 ** m}) = {out}")
        elif out.steps > G_STEP_CONSTANT * 2 ** m:
            bad.append(f"g(0^{2 ** m}) took {out.steps} > {G_STEP_CONSTANT}*2^{m} steps")
        back = run(rg, "0" * m)
        if not back.accepted or back.output != "0" * 2 ** m:
            bad.append(f"reverse(g)(0^{m}) = {back}")
        elif back.steps < 2 ** m:
            bad.append(f"reverse(g)(0^{m}) took only {back.steps} steps")
    for k in range(4097):
        if k in powers:
            continue
        out = run(g, "0" * k)
        if out.tag != REJECT:
            bad.append(f"g(0^{k}) = {out}, expected Reject")
    return _cap(bad)


# 2 ---------------------------------------------------------------------------


def check_reversal() -> list:
    bad = []
    machines = corpus.injective_corpus()
    if len(machines) < 6:
        bad.append(f"only {len(machines)} injective corpus machines")
    ora = _oracles()
    for name, m in machines.items():
        rm = reverse(m)
        for x in fl.all_strings(8):
            out = run(m, x, ora)
            if not out.accepted:
                continue
            back = run(rm, out.output, ora)
            if not back.accepted or back.output != x:
                bad.append(f"{name}: reverse({out.output!r}) = {back}, expected {x!r}")
    return _cap(bad)


# 3 ---------------------------------------------------------------------------


def check_bennett() -> list:
    bad = []
    ora = _oracles()
    for name, m in corpus.deterministic_corpus().items():
        bm = bennett_garbage(m)
        rep = validate_injective(bm)
        if not rep:
            bad.append(f"bennett({name}) not injective: {rep.lines()[:2]}")
            continue
        for x in fl.all_strings(6):
            want = run(m, x, ora)
            got = run(bm, x, ora)
            if want.accepted:
                if not got.accepted or got.output != pair_encode(x, want.output):
                    bad.append(f"bennett({name})({x!r}) = {got}")
            elif got.accepted:
                bad.append(f"bennett({name})({x!r}) = {got} but {name} is undefined there")
    clean = bennett_clean(corpus.inc(), corpus.dec())
    if extract_fn(clean, 8) != extract_fn(corpus.inc(), 8):
        bad.append("bennett_clean(inc, dec) differs from inc on inputs up to length 8")
    return _cap(bad)


# 4 ---------------------------------------------------------------------------


def _fmin_violations(f) -> list:
    fm = fl.fmin(f)
    out = []
    if fl.compose(f, fm) != fl.identity_on(f.image()):
        out.append(f"f o fmin != id on Im(f) for {f!r}")
    if not fm.is_injective():
        out.append(f"fmin not injective for {f!r}")
    if fl.compose_all(fm, f, fm) != fm:
        out.append(f"fmin f fmin != fmin for {f!r}")
    return out


def check_fmin(samples: int = 1000) -> list:
    bad = []
    rng = random.Random(SEED)
    for _ in range(samples):
        pool = fl.Universe(rng.randint(1, 5)).strings()
        bad += _fmin_violations(fl.random_fn(rng, pool, rng.random()))
    for f in fl.partial_functions(["0", "1", "00"]):
        bad += _fmin_violations(f)
    return _cap(bad)


# 5 ---------------------------------------------------------------------------


def random_injective_coinverse(rng: random.Random, f):
    """Pick a preimage for a random subset of Im(f) and invert."""
    return fl.FiniteFn((y, rng.choice(sorted(cls, key=fl.llex_key)))
                       for y, cls in fl.mod_partition(f).classes if rng.random() < 0.7)


def check_coinverse_products(samples: int = 1000) -> list:
    bad = []
    rng = random.Random(SEED + 5)
    pool = fl.Universe(3).strings()
    for _ in range(samples):
        f1, f2 = fl.random_fn(rng, pool, rng.random()), fl.random_fn(rng, pool, rng.random())
        g1, g2 = random_injective_coinverse(rng, f1), random_injective_coinverse(rng, f2)
        if not (fl.is_coinverse(g1, f1) and fl.is_coinverse(g2, f2)):
            bad.append("sampler produced a non co-inverse")
            continue
        prod, co = fl.compose(f2, f1), fl.compose(g1, g2)
        if not co.is_injective() or not fl.is_coinverse(co, prod):
            bad.append(f"f1'f2' is not an injective co-inverse of f2 f1: f1={f1!r} f2={f2!r}")
    f = fl.FiniteFn({"0": "0", "1": "0"})
    fp = fl.FiniteFn({"0": "1"})
    if not fl.is_mutual(fp, f):
        bad.append("counterexample inputs are not mutual inverses")
    if fl.compose(fp, fp) != fl.THETA:
        bad.append("counterexample: f1' f2' is not empty")
    if fl.is_mutual(fl.compose(fp, fp), fl.compose(f, f)):
        bad.append("counterexample: the empty map came out a mutual inverse")
    return _cap(bad)


# 6 ---------------------------------------------------------------------------

POINTS4 = ["", "0", "1", "00"]

LEMMAS = ("InvDomIm", "inj_co_invDomIm", "fvsfprimeinv", "inj_mutinvinvDomIm", "COinvSubfunc",
          "COinvTOinv", "subVSco", "SubofInv(1)", "SubofInv(2)", "regExt")


class _Tally:
    """Violations per named statement, keeping the first example of each."""

    def __init__(self):
        self.count = dict.fromkeys(LEMMAS, 0)
        self.first = {}

    def fail(self, lemma: str, where: str):
        self.count[lemma] += 1
        self.first.setdefault(lemma, where)

    def report(self) -> list:
        return [f"{k}: {n} violations, first at {self.first[k]}" for k, n in self.count.items() if n]


def lemma_tally(points=POINTS4) -> _Tally:
    t = _Tally()
    fns = list(fl.partial_functions(points))
    for f in fns:
        dom, img = f.domain(), f.image()
        for fp in fns:
            inv, co, inj = fl.is_inverse(fp, f), fl.is_coinverse(fp, f), fp.is_injective()
            where = f"f={f!r} f'={fp!r}"
            if inv and not img <= fp.domain():
                t.fail("InvDomIm", where)
            if co and not fp.image() <= dom:
                t.fail("inj_co_invDomIm", where)
            if co and inj:
                if not fp.domain() <= img:
                    t.fail("inj_co_invDomIm", where)
                sub = fl.restrict(f, fp.image())
                if fl.relational_inverse(fp) != sub or not fl.relational_inverse(fp) <= f:
                    t.fail("fvsfprimeinv", where)
                if not fl.is_mutual(fp, sub) or fp != fl.relational_inverse(sub):
                    t.fail("COinvSubfunc", where)
            if inv and co and inj and fp.domain() != img:
                t.fail("inj_mutinvinvDomIm", where)
            if co and fp.domain() == img and not (inv and inj):
                t.fail("COinvTOinv", where)
            if inj:
                sub_ok = fl.is_subinverse(fp, f)
                if sub_ok != co or sub_ok != fl.is_subinverse_search(fp, f):
                    t.fail("subVSco", where)
                if sub_ok:
                    patched = fl.fmin_patch(fp, f)
                    if not (fl.is_mutual(patched, f) and patched.is_injective() and fp <= patched):
                        t.fail("SubofInv(2)", where)
            if inv and co:
                for g in _subfunctions(fp):
                    if not fl.is_subinverse(g, f):
                        t.fail("SubofInv(1)", f"f={f!r} f'={fp!r} g'={g!r}")
            if inv and fp.domain() == img:
                for h in _extensions(fp, points):
                    if not fl.is_inverse(h, f):
                        t.fail("regExt", f"f={f!r} h={h!r}")
    # part (2) of the domain lemma needs injectivity
    f = fl.FiniteFn({"0": "1"})
    fp = fl.FiniteFn({"0": "0", "1": "0"})
    if not fl.is_mutual(fp, f) or fp.domain() <= f.image():
        t.fail("inj_co_invDomIm", "the non-injective counterexample")
    return t


def check_lemma_battery(points=POINTS4) -> list:
    return lemma_tally(points).report()


def _subfunctions(f):
    items = f.pairs()
    for r in range(len(items) + 1):
        for sub in itertools.combinations(items, r):
            yield fl.FiniteFn(sub)


def _extensions(g, points):
    """Every h with h restricted to Dom(g) equal to g.

    Any h whose restriction to some Z inverts f already inverts f on Im(f),
    so extending the inverses with domain exactly Im(f) covers every case.
    """
    free = [p for p in points if p not in g]
    for pick in itertools.product([None] + list(points), repeat=len(free)):
        yield g.union(fl.FiniteFn((x, y) for x, y in zip(free, pick) if y is not None))


# 7 ---------------------------------------------------------------------------


def check_fixators(points=("", "0", "1")) -> list:
    bad = []
    M = list(fl.partial_functions(points))
    for f in M:
        where = f"f={f!r}"
        choice = list(fl.choice_functions(f))
        R = fl.rfix(f, M)
        L = fl.lfix(f, M)
        for c in choice:
            if fl.compose(c, f) not in R:
                bad.append(f"c o f not in RFix: {where} c={c!r}")
            ci = fl.relational_inverse(c)
            if fl.compose(c, ci) != fl.identity_on(c.image()):
                bad.append(f"c c^-1 != id on Im(c): {where}")
            if fl.compose(ci, c) != fl.identity_on(f.image()):
                bad.append(f"c^-1 c != id on Im(f): {where}")
        for c1, c2 in itertools.product(choice, repeat=2):
            b = fl.compose(c2, fl.relational_inverse(c1))
            if not (b.is_injective() and b.domain() == c1.image() and b.image() == c2.image()):
                bad.append(f"c2 c1^-1 is not a bijection between choice sets: {where}")
            if fl.compose_all(c2, f, c1) != c2:
                bad.append(f"c2 f c1 != c2: {where}")
            if not any(fl.compose(a, c1) == c2 for a in R):
                bad.append(f"RFix does not move {c1!r} to {c2!r}: {where}")
        for r in fl.repr_choice_functions(f):
            if r not in R:
                bad.append(f"representative choice function outside RFix: {where}")
        for a in R:
            for c in choice:
                g = fl.compose(a, c)
                if not fl.is_inverse(g, f) or g.domain() != f.image():
                    bad.append(f"RFix action leaves the choice functions: {where} a={a!r}")
        dom = f.domain()
        for a1, a2 in itertools.combinations(R, 2):
            if fl.restrict(a1, dom) != fl.restrict(a2, dom):
                if all(fl.compose(a1, c) == fl.compose(a2, c) for c in choice):
                    bad.append(f"action not faithful: {where} {a1!r} {a2!r}")
        mutual = fl.mutual_inverses(f, M)
        for a in M:
            if fl.compose(f, a).domain() == dom:
                rhs = all(fl.is_mutual(fl.compose(a, fp), f) for fp in mutual)
                if (a in R) != rhs:
                    bad.append(f"RFix characterisation fails: {where} a={a!r}")
            if fl.compose(a, f).image() == f.image():
                rhs = all(fl.is_mutual(fl.compose(fp, a), f) for fp in mutual)
                if (a in L) != rhs:
                    bad.append(f"LFix characterisation fails: {where} b={a!r}")
    return _cap(bad)


# 8 ---------------------------------------------------------------------------


def check_group_inverse(samples: int = 500) -> list:
    bad = []
    rng = random.Random(SEED + 8)
    pool = fl.Universe(3).strings()
    window = fl.Universe(4).strings()
    pi0, pi1 = fl.pi("0", window), fl.pi("1", window)
    pi0p, pi1p = fl.pi_prime("0", window), fl.pi_prime("1", window)
    for _ in range(samples):
        f = fl.random_fn(rng, pool, rng.random())
        fp = fl.FiniteFn((y, rng.choice(sorted(c, key=fl.llex_key)))
                         for y, c in fl.mod_partition(f).classes)
        F = fl.group_inverse(f, fp)
        f0 = fl.pad_zero(f)
        f1p = fl.pad_one_inverse(f, fp)
        where = f"f={f!r}"
        if fl.compose(F, F) != fl.identity_on(F.domain()):
            bad.append(f"F' o F' != id_Z: {where}")
        if fl.compose_all(f0, F, f0) != f0:
            bad.append(f"f0 F' f0 != f0: {where}")
        checks = [
            (f0, f, pi1, pi0p, "f0 = pi1 f pi0'"),
            (f, f0, pi1p, pi0, "f = pi1' f0 pi0"),
            (f1p, fp, pi0, pi1p, "f1' = pi0 f' pi1'"),
            (fp, f1p, pi0p, pi1, "f' = pi0' f1' pi1"),
        ]
        for a, b, beta, alpha, label in checks:
            if not fl.simulates(a, b, beta, alpha):
                bad.append(f"{label} fails: {where}")
    return _cap(bad)


# 9 ---------------------------------------------------------------------------


def check_monoids() -> list:
    bad = []
    sim2 = fl.monoid_closure(fl.partial_injections(["0", "1"]))
    if len(sim2) != 7:
        bad.append(f"symmetric inverse monoid on 2 points has {len(sim2)} elements")
    gr = fl.green_relations(sim2)
    if len(gr.D) != 3:
        bad.append(f"{len(gr.D)} D-classes, expected 3")
    for e in fl.idempotents(sim2):
        if len(e) == 1:
            order = len(fl.maximal_subgroup(sim2, e))
            if order != 2:
                bad.append(f"maximal subgroup at rank-1 idempotent {e!r} has order {order}, expected 2")
    ident = fl.identity_on(["0", "1"])
    order_at_identity = len(fl.maximal_subgroup(sim2, ident))
    if order_at_identity != 2:
        bad.append(f"group of units has order {order_at_identity}")
    rng = random.Random(SEED + 9)
    closures = [sim2, fl.monoid_closure(fl.partial_injections(["0", "1", "00"]))]
    pts = fl.Universe(2).strings()
    injections = list(fl.partial_injections(pts[:4]))
    for _ in range(20):
        closures.append(fl.monoid_closure(rng.sample(injections, 3)))
    for M in closures:
        for e in fl.idempotents(M):
            if e != fl.identity_on(e.domain()):
                bad.append(f"idempotent {e!r} is not an identity")
    return _cap(bad)


# 10 --------------------------------------------------------------------------

EVAL_BOUND = PolyBound(5, 2)


def eval_registry() -> list:
    return [Program.of(m) for m in (corpus.identity(), corpus.flip(), corpus.append0(),
                                    corpus.append1(), corpus.drop0())]


def cofp_registry() -> list:
    c = corpus
    return [(c.identity(), c.identity()), (c.append0(), c.drop_last()), (c.append1(), c.drop0()),
            (c.drop0(), c.append0()), (c.flip(), c.flip()), (c.append0(), c.identity())]


def check_encoding(samples: int = 10_000) -> list:
    bad = []
    rng = random.Random(SEED + 10)

    def rand_bits():
        return "".join(rng.choice("01") for _ in range(rng.randint(0, 24)))

    for _ in range(samples):
        w, x = rand_bits(), rand_bits()
        if pair_decode(pair_encode(w, x)) != (w, x):
            bad.append(f"pair round trip fails for {(w, x)}")
    seen = {}
    for p in eval_registry():
        m = p.machine
        for x in fl.all_strings(4):
            try:
                out = inj_ev(EVAL_BOUND, pair_encode(p.bits, x))
            except NotInDomain:
                if run(m, x).accepted:
                    bad.append(f"inj_ev undefined but {m.name}({x!r}) is defined")
                continue
            direct = run(m, x)
            if not direct.accepted or out != pair_encode(p.bits, direct.output):
                bad.append(f"inj_ev disagrees with {m.name} at {x!r}")
            if out in seen:
                bad.append(f"inj_ev collision: {seen[out]} and {(m.name, x)}")
            seen[out] = (m.name, x)
    for vp, w in cofp_registry():
        phi = extract_fn(w, 6)
        psi = extract_fn(vp, 5)
        table = {}
        for y in fl.all_strings(4):
            out = cofp_eval(EVAL_BOUND, vp, w, y)
            if out is not NoOutput:
                table[y] = out
        Phi = fl.FiniteFn(table)
        if not fl.is_subinverse(Phi, phi):
            bad.append(f"cofP({vp.name},{w.name}) is not a sub-inverse of {w.name}")
        if not Phi <= psi:
            bad.append(f"cofP({vp.name},{w.name}) is not a subfunction of {vp.name}")
    return _cap(bad)


# 11 --------------------------------------------------------------------------


def check_reductions() -> list:
    bad = []
    universal = lookup("universal")
    for name in ("even-weight", "one-at", "pair11"):
        lang = lookup(name)
        rep = check_reduction(hartmanis_witness(lang, 6), lang, universal)
        if not rep.ok:
            bad.append(f"padding map for {name} fails: {rep.counterexamples[:3]}")
    fw, bw, l1, l2 = asymmetry_witness(6)
    if not check_reduction(fw, l1, l2).ok:
        bad.append("asymmetry witness: forward reduction fails")
    if check_reduction(bw, l2, l1).ok:
        bad.append("asymmetry witness: inverse map reduces back, expected a failure")
    return _cap(bad)


# 12 --------------------------------------------------------------------------


def check_levin() -> list:
    bad = []
    g = Program.of(corpus.g_machine())
    inverter = prog_inv_injective(g)
    for m in range(1, 11):
        y = "0" * m
        try:
            x, st = levin_invert([inverter], g, y)
        except NotInImage:
            bad.append(f"levin failed to invert g at 0^{m}")
            continue
        if x != "0" * 2 ** m:
            bad.append(f"levin returned {x!r} for 0^{m}")
        solo = solo_steps(inverter, y)
        if st.steps_total > 10 * solo + st.verify_steps:
            bad.append(f"0^{m}: {st.steps_total} steps vs solo {solo} + verify {st.verify_steps}")
    dl = corpus.drop_last()
    for y in fl.all_strings(5):
        try:
            want = fmin_invert(dl, y)
        except NotInImage:
            want = None
        try:
            got, st = levin_invert([], dl, y)
            if st.winner != FALLBACK:
                bad.append(f"fallback-only search won by {st.winner}")
        except NotInImage:
            got = None
        if got != want:
            bad.append(f"drop_last at {y!r}: levin {got!r}, fmin {want!r}")
    return _cap(bad)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    number: int
    name: str
    title: str
    check: Callable[[], list]
    limit: float


SUITES = [
    Suite(1, "g-machine", "g-machine fidelity", check_g_machine, 5),
    Suite(2, "reversal", "reversal soundness", check_reversal, 10),
    Suite(3, "bennett", "Bennett embeddings", check_bennett, 30),
    Suite(4, "fmin", "llex-least choice function", check_fmin, 60),
    Suite(5, "coinverse", "co-inverse anti-homomorphism", check_coinverse_products, 30),
    Suite(6, "lemmas", "inverse lemma battery", check_lemma_battery, 120),
    Suite(7, "fixators", "fixator battery", check_fixators, 60),
    Suite(8, "group-inverse", "group-inverse construction", check_group_inverse, 30),
    Suite(9, "monoids", "monoid structure", check_monoids, 10),
    Suite(10, "encoding", "encoding and evaluation", check_encoding, 30),
    Suite(11, "reductions", "reductions", check_reductions, 30),
    Suite(12, "levin", "Levin search", check_levin, 30),
]
BY_NAME = {s.name: s for s in SUITES}
BY_NAME.update({str(s.number): s for s in SUITES})


@dataclass
class SuiteResult:
    suite: Suite
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def in_time(self) -> bool:
        return self.elapsed < self.suite.limit

    @property
    def passed(self) -> bool:
        return not self.failures and self.in_time

    def line(self) -> str:
        s = self.suite
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {s.number:>2} {s.name:<14} {self.elapsed:7.2f}s (limit {s.limit}s) {s.title}"

    def lines(self) -> list:
        out = [self.line()]
        if not self.in_time:
            out.append(f"    over the time limit of {self.suite.limit}s")
        out += [f"    {f}" for f in self.failures]
        return out


def run_suite(name) -> SuiteResult:
    from ._engine import warm_up

    suite = BY_NAME[str(name)]
    warm_up()
    t0 = time.perf_counter()
    failures = suite.check()
    return SuiteResult(suite, failures, time.perf_counter() - t0)
