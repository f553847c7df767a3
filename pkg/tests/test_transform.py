import random

import pytest

from injtm import corpus
from injtm.codec import pair_encode
from injtm.errors import NotInverses
from injtm.fnlab import FiniteFn, all_strings, relational_inverse
from injtm.machine_core import REJECT, extract_fn, run, validate_injective
from injtm.machine_transform import (
    bennett_clean,
    bennett_garbage,
    canonical,
    chain,
    equivalent,
    reverse,
    simulate_reverse_oracle,
    swap_pair,
    warnings_of,
)

from oracles import increment

EVEN = {"even-weight": lambda w: w.count("1") % 2 == 0}
INJECTIVE = sorted(corpus.injective_corpus())


def test_reverse_identity_acts_as_identity():
    r = reverse(corpus.identity())
    assert validate_injective(r)
    assert extract_fn(r, 5) == extract_fn(corpus.identity(), 5)


def test_reverse_g_expands():
    rg = reverse(corpus.g_machine())
    assert run(rg, "000").output == "0" * 8
    assert validate_injective(rg)


@pytest.mark.parametrize("name", INJECTIVE)
def test_reverse_is_involution(name):
    m = corpus.injective_corpus()[name]
    rr = reverse(reverse(m))
    assert equivalent(rr, m.with_bounds(None, None))
    assert canonical(rr, keep_bounds=False) == canonical(m, keep_bounds=False)


@pytest.mark.parametrize("name", INJECTIVE)
def test_reverse_table_is_relational_inverse(name):
    m = corpus.injective_corpus()[name]
    table = extract_fn(m, 5, EVEN)
    back = extract_fn(reverse(m), 7, EVEN)
    want = relational_inverse(table)
    assert FiniteFn((y, x) for y, x in back.items() if y in want) == want


def test_reverse_of_non_injective_warns():
    assert warnings_of(reverse(corpus.drop_last()))
    assert not warnings_of(reverse(corpus.identity()))


def test_reverse_g_blowup():
    rg = reverse(corpus.g_machine())
    for m in range(3, 13):
        assert run(rg, "0" * m).steps >= 2 ** m


def test_bennett_examples():
    b = bennett_garbage(corpus.drop_last())
    assert validate_injective(b)
    assert run(b, "01").output == pair_encode("01", "0")
    assert run(bennett_garbage(corpus.identity()), "1").output == pair_encode("1", "1")


def test_bennett_random_inputs():
    rng = random.Random(7)
    machines = corpus.deterministic_corpus()
    embedded = {n: bennett_garbage(m) for n, m in machines.items()}
    for _ in range(200):
        name = rng.choice(sorted(machines))
        x = "".join(rng.choice("01") for _ in range(rng.randint(0, 7)))
        want = run(machines[name], x, EVEN)
        got = run(embedded[name], x, EVEN)
        if want.accepted:
            assert got.output == pair_encode(x, want.output)
        else:
            assert not got.accepted


def test_bennett_clean_inc():
    c = bennett_clean(corpus.inc(), corpus.dec())
    assert validate_injective(c)
    assert run(c, "011").output == "100"
    table = extract_fn(c, 6)
    assert table == extract_fn(corpus.inc(), 6)
    assert table == FiniteFn({x: increment(x) for x in all_strings(6)})


def test_bennett_clean_identity():
    c = bennett_clean(corpus.identity(), corpus.identity())
    assert extract_fn(c, 6) == FiniteFn({x: x for x in all_strings(6)})


def test_bennett_clean_rejects_non_inverse():
    with pytest.raises(NotInverses):
        bennett_clean(corpus.inc(), corpus.inc())


def test_chain_examples():
    g = corpus.g_machine()
    assert extract_fn(chain(corpus.identity(), g), 8, alphabet="0") == extract_fn(g, 8, alphabet="0")
    assert run(chain(g, g), "0" * 16).output == "00"


def test_chain_of_injective_is_injective():
    c = chain(corpus.append0(), corpus.drop0())
    assert validate_injective(c)
    assert extract_fn(c, 5) == extract_fn(corpus.identity(), 5)


@pytest.mark.parametrize("a,b", [("append0", "flip"), ("flip", "drop0"), ("identity", "append1")])
def test_reverse_of_chain(a, b):
    m1, m2 = corpus.by_name(a), corpus.by_name(b)
    left = reverse(chain(m1, m2))
    right = chain(reverse(m2), reverse(m1))
    assert extract_fn(left, 6) == extract_fn(right, 6)


def test_swap_pair():
    s = swap_pair()
    assert validate_injective(s)
    for w, x in [("", ""), ("01", "1"), ("110", "0010")]:
        assert run(s, pair_encode(w, x)).output == pair_encode(x, w)


def test_simulated_reverse_oracle_matches():
    r = reverse(corpus.oracle_tag())
    assert r.has_reverse_oracle
    sim = simulate_reverse_oracle(r)
    assert not sim.has_reverse_oracle
    assert extract_fn(sim, 6, EVEN) == extract_fn(r, 6, EVEN)
    forward = extract_fn(corpus.oracle_tag(), 4, EVEN)
    back = extract_fn(sim, 5, EVEN)
    assert all(back.get(y) == x for x, y in forward.items())


def test_simulate_without_reverse_oracle_is_unchanged():
    m = corpus.identity()
    assert simulate_reverse_oracle(m) == m


def test_inconsistent_answer_rejects():
    sim = simulate_reverse_oracle(reverse(corpus.oracle_tag()))
    # "01" claims a yes answer for "0", which has even weight; "00" claims no
    assert run(sim, "01", EVEN).output == "0"
    assert run(sim, "00", EVEN).tag == REJECT
