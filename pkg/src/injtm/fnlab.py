"""Finite partial functions on strings and brute-force algebra over them."""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import CapExceeded, DomainMismatch, NotInjective, NotMutual

EMPTY_TEXT = "ε"


def llex_key(s: str):
    """Length-lexicographic order: shorter first, then dictionary order."""
    return (len(s), s)


def all_strings(max_len: int, alphabet: str = "01") -> Iterator[str]:
    for n in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=n):
            yield "".join(t)


def strings_of_length(n: int, alphabet: str = "01") -> Iterator[str]:
    for t in itertools.product(alphabet, repeat=n):
        yield "".join(t)


@dataclass(frozen=True)
class Universe:
    max_len: int
    alphabet: str = "01"

    def __iter__(self):
        return all_strings(self.max_len, self.alphabet)

    def __len__(self):
        a = len(self.alphabet)
        return sum(a ** i for i in range(self.max_len + 1))

    def __contains__(self, s):
        return isinstance(s, str) and len(s) <= self.max_len and set(s) <= set(self.alphabet)

    def strings(self) -> list:
        return list(self)


class FiniteFn(Mapping):
    """An explicit finite partial function, immutable and hashable."""

    __slots__ = ("_m", "_hash")

    def __init__(self, entries=()):
        m = dict(entries)
        object.__setattr__(self, "_m", m)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("FiniteFn is immutable")

    def __getitem__(self, x):
        return self._m[x]

    def __iter__(self):
        return iter(sorted(self._m, key=llex_key))

    def __len__(self):
        return len(self._m)

    def __contains__(self, x):
        return x in self._m

    def get(self, x, default=None):
        return self._m.get(x, default)

    def __call__(self, x):
        return self._m.get(x)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self._m.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if isinstance(other, FiniteFn):
            return self._m == other._m
        if isinstance(other, Mapping):
            return self._m == dict(other)
        return NotImplemented

    def __le__(self, other):
        """Subfunction test."""
        g = other._m
        return all(g.get(x, _MISSING) == y for x, y in self._m.items())

    def items(self):
        return self._m.items()

    def pairs(self) -> list:
        return sorted(self._m.items(), key=lambda p: llex_key(p[0]))

    def domain(self) -> frozenset:
        return frozenset(self._m)

    def image(self) -> frozenset:
        return frozenset(self._m.values())

    def preimage(self, y) -> frozenset:
        return frozenset(x for x, v in self._m.items() if v == y)

    def is_injective(self) -> bool:
        return len(set(self._m.values())) == len(self._m)

    def union(self, other: "FiniteFn") -> "FiniteFn":
        m = dict(self._m)
        for x, y in other.items():
            if m.get(x, y) != y:
                raise ValueError(f"union is not single-valued at {x!r}")
            m[x] = y
        return FiniteFn(m)

    def __repr__(self):
        body = ", ".join(f"{_show(x)}->{_show(y)}" for x, y in self.pairs())
        return "{" + body + "}"

    def format(self) -> str:
        return "".join(f"{_show(x)} -> {_show(y)}\n" for x, y in self.pairs())

    @classmethod
    def parse(cls, text: str) -> "FiniteFn":
        m = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line:
                raise ValueError(f"line {lineno}: expected 'x -> y'")
            a, b = (p.strip() for p in line.split("->", 1))
            a, b = _unshow(a), _unshow(b)
            if a in m and m[a] != b:
                raise ValueError(f"line {lineno}: {a!r} mapped twice")
            m[a] = b
        return cls(m)


_MISSING = object()
THETA = FiniteFn()


def _show(s: str) -> str:
    return s if s else EMPTY_TEXT


def _unshow(s: str) -> str:
    return "" if s == EMPTY_TEXT else s


# ---------------------------------------------------------------------------
# basic algebra


def compose(f2: FiniteFn, f1: FiniteFn) -> FiniteFn:
    """x -> f2(f1(x)), defined where both steps are."""
    g = f2._m
    return FiniteFn({x: g[y] for x, y in f1.items() if y in g})


def compose_all(*fs: FiniteFn) -> FiniteFn:
    """compose_all(f, g, h) = f o g o h."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = compose(f, out)
    return out


def restrict(f: FiniteFn, S: Iterable) -> FiniteFn:
    S = set(S)
    return FiniteFn({x: y for x, y in f.items() if x in S})


def relational_inverse(f: FiniteFn) -> FiniteFn:
    if not f.is_injective():
        raise NotInjective(f"{f!r} is not injective")
    return FiniteFn({y: x for x, y in f.items()})


def identity_on(S: Iterable) -> FiniteFn:
    return FiniteFn({x: x for x in S})


def is_inverse(fp: FiniteFn, f: FiniteFn) -> bool:
    """f o fp o f == f."""
    g, h = fp._m, f._m
    for y in h.values():
        z = g.get(y, _MISSING)
        if z is _MISSING or h.get(z, _MISSING) != y:
            return False
    return True


def is_coinverse(fp: FiniteFn, f: FiniteFn) -> bool:
    """fp o f o fp == fp."""
    g, h = fp._m, f._m
    for x in g.values():
        z = h.get(x, _MISSING)
        if z is _MISSING or g.get(z, _MISSING) != x:
            return False
    return True


def is_mutual(fp: FiniteFn, f: FiniteFn) -> bool:
    return is_inverse(fp, f) and is_coinverse(fp, f)


def is_subinverse(gp: FiniteFn, f: FiniteFn) -> bool:
    """Whether gp is a mutual inverse of some restriction of f.

    If gp is mutual to f restricted to S, it is also mutual to f restricted to
    Im(gp), so that single candidate decides the question.
    """
    img = gp.image()
    if not img <= f.domain():
        return False
    return is_mutual(gp, restrict(f, img))


def is_subinverse_search(gp: FiniteFn, f: FiniteFn) -> bool:
    """Exhaustive search over every subset of Dom(f); exponential, for cross-checks."""
    dom = sorted(f.domain(), key=llex_key)
    for r in range(len(dom) + 1):
        for S in itertools.combinations(dom, r):
            if is_mutual(gp, restrict(f, S)):
                return True
    return False


def is_idempotent(f: FiniteFn) -> bool:
    m = f._m
    return all(m.get(y, _MISSING) == y for y in m.values())


# ---------------------------------------------------------------------------
# kernels and choice


class ModPartition(NamedTuple):
    classes: tuple  # of (image value, frozenset of preimages)

    def class_of(self, x):
        for y, cls in self.classes:
            if x in cls:
                return cls
        return None


def mod_partition(f: FiniteFn) -> ModPartition:
    groups = {}
    for x, y in f.items():
        groups.setdefault(y, set()).add(x)
    return ModPartition(tuple((y, frozenset(groups[y])) for y in sorted(groups, key=llex_key)))


def choice_functions(f: FiniteFn) -> Iterator[FiniteFn]:
    parts = mod_partition(f).classes
    ys = [y for y, _ in parts]
    pools = [sorted(c, key=llex_key) for _, c in parts]
    for pick in itertools.product(*pools):
        yield FiniteFn(zip(ys, pick))


def choice_sets(f: FiniteFn) -> Iterator[frozenset]:
    pools = [sorted(c, key=llex_key) for _, c in mod_partition(f).classes]
    for pick in itertools.product(*pools):
        yield frozenset(pick)


def repr_choice_functions(f: FiniteFn) -> Iterator[FiniteFn]:
    parts = mod_partition(f).classes
    pools = [sorted(c, key=llex_key) for _, c in parts]
    for pick in itertools.product(*pools):
        r = {}
        for (_, cls), rep in zip(parts, pick):
            for x in cls:
                r[x] = rep
        yield FiniteFn(r)


def repr_from_choice(c: FiniteFn, f: FiniteFn) -> FiniteFn:
    """The representative choice function c o f."""
    return compose(c, f)


def choice_from_repr(r: FiniteFn, f: FiniteFn) -> FiniteFn:
    """The choice function y -> r(x) for any x with f(x) = y."""
    out = {}
    for x, y in f.items():
        out.setdefault(y, r[x])
    return FiniteFn(out)


def is_choice_function(c: FiniteFn, f: FiniteFn) -> bool:
    return c.domain() == f.image() and is_inverse(c, f)


def is_repr_choice_function(r: FiniteFn, f: FiniteFn) -> bool:
    if r.domain() != f.domain() or not is_idempotent(r):
        return False
    im = r.image()
    # one element per class, and r keeps every point inside its class
    if len({f[x] for x in im}) != len(im):
        return False
    return all(f[r[x]] == f[x] for x in r)


def fmin(f: FiniteFn) -> FiniteFn:
    out = {}
    for x, y in f.items():
        cur = out.get(y)
        if cur is None or llex_key(x) < llex_key(cur):
            out[y] = x
    return FiniteFn(out)


def fmin_patch(gp: FiniteFn, f: FiniteFn) -> FiniteFn:
    """Extend a sub-inverse gp to a choice function, using the llex-least
    preimage outside the classes gp already serves."""
    fm = fmin(f)
    out = dict(gp.items())
    for y, x in fm.items():
        if y not in out:
            out[y] = x
    return FiniteFn(out)


# ---------------------------------------------------------------------------
# enumeration and sampling


def partial_functions(points: Iterable, values: Iterable | None = None) -> Iterator[FiniteFn]:
    points = sorted(points, key=llex_key)
    values = points if values is None else sorted(values, key=llex_key)
    opts = [None] + list(values)
    for pick in itertools.product(opts, repeat=len(points)):
        yield FiniteFn({x: y for x, y in zip(points, pick) if y is not None})


def partial_injections(points: Iterable, values: Iterable | None = None) -> Iterator[FiniteFn]:
    for f in partial_functions(points, values):
        if f.is_injective():
            yield f


def total_functions(points: Iterable, values: Iterable | None = None) -> Iterator[FiniteFn]:
    points = sorted(points, key=llex_key)
    values = points if values is None else sorted(values, key=llex_key)
    for pick in itertools.product(values, repeat=len(points)):
        yield FiniteFn(zip(points, pick))


def random_fn(rng: random.Random, pool: list, density: float = 0.5,
              injective: bool = False, values: list | None = None) -> FiniteFn:
    values = pool if values is None else values
    dom = [x for x in pool if rng.random() < density]
    if injective:
        dom = dom[:len(values)]
        return FiniteFn(zip(dom, rng.sample(values, len(dom))))
    return FiniteFn((x, rng.choice(values)) for x in dom)


# ---------------------------------------------------------------------------
# monoids


@dataclass(frozen=True)
class FiniteMonoid:
    elements: frozenset
    generators: frozenset
    identity: FiniteFn
    _index: dict = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements, key=repr))

    def __contains__(self, f):
        return f in self.elements

    def is_closed(self) -> bool:
        els = self.elements
        return all(compose(a, b) in els for a in els for b in els)


def monoid_closure(gens: Iterable[FiniteFn], cap: int = 100_000,
                   identity: FiniteFn | None = None) -> FiniteMonoid:
    gens = frozenset(gens)
    if identity is None:
        pts = set()
        for g in gens:
            pts |= g.domain() | g.image()
        identity = identity_on(pts)
    elems = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(g, a)
                if b not in elems:
                    elems.add(b)
                    if len(elems) > cap:
                        raise CapExceeded(f"closure exceeds {cap} elements")
                    nxt.append(b)
        frontier = nxt
    return FiniteMonoid(frozenset(elems), gens, identity)


def idempotents(M: FiniteMonoid) -> set:
    return {f for f in M.elements if is_idempotent(f)}


def regular_elements(M: FiniteMonoid) -> set:
    els = list(M.elements)
    return {f for f in els if any(is_inverse(g, f) for g in els)}


class GreenRelations(NamedTuple):
    L: list
    R: list
    H: list
    D: list

    @staticmethod
    def class_of(partition, f):
        for cls in partition:
            if f in cls:
                return cls
        return None


def _partition(els, key) -> list:
    groups = {}
    for f in els:
        groups.setdefault(key(f), set()).add(f)
    return sorted((frozenset(g) for g in groups.values()), key=lambda c: (len(c), sorted(map(repr, c))))


def green_relations(M: FiniteMonoid) -> GreenRelations:
    els = list(M.elements)
    right = {f: frozenset(compose(f, a) for a in els) for f in els}  # f M
    left = {f: frozenset(compose(a, f) for a in els) for f in els}   # M f
    L = _partition(els, lambda f: left[f])
    R = _partition(els, lambda f: right[f])
    H = _partition(els, lambda f: (left[f], right[f]))
    # D = L o R; join L-classes that share an R-class
    parent = {f: f for f in els}

    def find(f):
        while parent[f] is not f:
            parent[f] = parent[parent[f]]
            f = parent[f]
        return f

    for part in (L, R):
        for cls in part:
            it = iter(cls)
            first = next(it)
            for g in it:
                a, b = find(first), find(g)
                if a is not b:
                    parent[a] = b
    D = _partition(els, lambda f: id(find(f)))
    return GreenRelations(L, R, H, D)


def maximal_subgroup(M: FiniteMonoid, e: FiniteFn) -> set:
    if not is_idempotent(e):
        raise ValueError("maximal subgroups sit at idempotents")
    return set(GreenRelations.class_of(green_relations(M).H, e))


def rfix(f: FiniteFn, U=None, M: FiniteMonoid | Iterable | None = None) -> set:
    """{a in M : f o a = f}."""
    if M is None:
        M, U = U, None
    els = M.elements if isinstance(M, FiniteMonoid) else M
    return {a for a in els if compose(f, a) == f}


def lfix(f: FiniteFn, U=None, M: FiniteMonoid | Iterable | None = None) -> set:
    """{b in M : b o f = f}."""
    if M is None:
        M, U = U, None
    els = M.elements if isinstance(M, FiniteMonoid) else M
    return {b for b in els if compose(b, f) == f}


def mutual_inverses(f: FiniteFn, candidates: Iterable[FiniteFn]) -> list:
    return [g for g in candidates if is_mutual(g, f)]


# ---------------------------------------------------------------------------
# padding, projections and the group inverse


def pad_zero(f: FiniteFn) -> FiniteFn:
    """f0(0x) = 1 f(x)."""
    return FiniteFn({"0" + x: "1" + y for x, y in f.items()})


def _pad_one_inverse(f: FiniteFn, fp: FiniteFn) -> FiniteFn:
    if fp.domain() != f.image():
        raise DomainMismatch("the mutual inverse must have domain Im(f)")
    if not fp.is_injective() or not is_mutual(fp, f):
        raise NotMutual("need an injective mutual inverse")
    return FiniteFn({"1" + y: "0" + x for y, x in fp.items()})


def pad_one_inverse(f: FiniteFn, fp: FiniteFn) -> FiniteFn:
    """f1'(1y) = 0 f'(y)."""
    return _pad_one_inverse(f, fp)


def group_inverse(f: FiniteFn, fp: FiniteFn) -> FiniteFn:
    """F' = f1' together with its own inverse: an involution inverting f0."""
    f1 = _pad_one_inverse(f, fp)
    return f1.union(relational_inverse(f1))


def pi(a: str, U: Iterable) -> FiniteFn:
    """z -> a z on the window."""
    return FiniteFn({z: a + z for z in U})


def pi_prime(a: str, U: Iterable) -> FiniteFn:
    """a z -> z for every a z in the window."""
    return FiniteFn({z: z[len(a):] for z in U if z.startswith(a)})


def simulates(f1: FiniteFn, f2: FiniteFn, beta: FiniteFn, alpha: FiniteFn) -> bool:
    """f1 == beta o f2 o alpha."""
    return f1 == compose_all(beta, f2, alpha)
