"""Independent reference implementations used to cross-check the library.

These avoid the library's own helpers on purpose: plain dicts, itertools and
sorting only.
"""

import itertools


def strings(max_len, alphabet="01"):
    out = []
    for n in range(max_len + 1):
        out += ["".join(p) for p in itertools.product(alphabet, repeat=n)]
    return out


def compose(f2: dict, f1: dict) -> dict:
    return {x: f2[y] for x, y in f1.items() if y in f2}


def llex_min_inverse(f: dict) -> dict:
    pre = {}
    for x, y in f.items():
        pre.setdefault(y, []).append(x)
    return {y: min(xs, key=lambda s: (len(s), s)) for y, xs in pre.items()}


def is_inverse(fp: dict, f: dict) -> bool:
    return compose(f, compose(fp, f)) == f


def subinverse_by_subsets(gp: dict, f: dict) -> bool:
    """Search every subfunction g of f for one with g gp g = g and gp g gp = gp."""
    items = list(f.items())
    for r in range(len(items) + 1):
        for sub in itertools.combinations(items, r):
            g = dict(sub)
            if compose(g, compose(gp, g)) == g and compose(gp, compose(g, gp)) == gp:
                return True
    return False


def green_d_count(elements) -> int:
    """Count D-classes as J-classes (equal in a finite monoid) by two-sided ideals."""
    els = [dict(e) for e in elements]
    key = lambda d: tuple(sorted(d.items()))
    ideals = {}
    for a in els:
        ideals[key(a)] = frozenset(key(compose(compose(s, a), t)) for s in els for t in els)
    return len(set(ideals.values()))


def g_formula(x: str):
    """0^(2^m) -> 0^m for m >= 1; undefined elsewhere."""
    n = len(x)
    if set(x) - {"0"} or n < 2 or n & (n - 1):
        return None
    return "0" * (n.bit_length() - 1)


def hartmanis_string(v_bits: str, a: int, k: int, x: str) -> str:
    coded = "".join({"0": "00", "1": "01"}[c] for c in v_bits)
    return coded + "11" + x + "11" + "0" * (len(v_bits) * a * (len(x) ** k + 1))


def increment(x: str) -> str:
    """Binary increment modulo 2^|x|."""
    if not x:
        return x
    return format((int(x, 2) + 1) % 2 ** len(x), f"0{len(x)}b")
