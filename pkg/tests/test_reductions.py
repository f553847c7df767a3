import pytest
from hypothesis import given, strategies as st

from injtm import corpus
from injtm.codec import code, pair_encode
from injtm.errors import UnknownOracle
from injtm.fnlab import FiniteFn, Universe, all_strings
from injtm.machine_core import PolyBound, extract_fn
from injtm.reductions import (
    ReductionWitness,
    asymmetry_witness,
    check_reduction,
    hartmanis_map,
    hartmanis_witness,
    lookup,
    oracle_registry,
    subset_sum,
    subset_sum_instance,
    universal_member,
    verifier_entries,
)

from oracles import hartmanis_string

bits = st.text("01", max_size=6)


@pytest.mark.parametrize("name,pred", [
    ("even-weight", lambda x: x.count("1") % 2 == 0),
    ("one-at", lambda x: "1" in x),
    ("pair11", lambda x: "11" in x),
])
def test_verifier_languages_match_predicates(name, pred):
    lang = lookup(name)
    assert lang.presentation == "verifier"
    for x in all_strings(5):
        assert lang.contains(x) == pred(x), x


def test_hartmanis_map_example():
    p = PolyBound(2, 1)
    assert hartmanis_map("101", p, "01") == code("101") + "11" + "01" + "11" + "0" * 18
    assert hartmanis_map("101", p, "") == code("101") + "1111" + "0" * 6


@given(st.text("01", min_size=1, max_size=8), st.integers(1, 4), st.integers(0, 2), bits)
def test_hartmanis_map_matches_oracle(v, a, k, x):
    assert hartmanis_map(v, PolyBound(a, k), x) == hartmanis_string(v, a, k, x)


@pytest.mark.parametrize("name", ["even-weight", "one-at", "pair11"])
def test_hartmanis_reduction_holds(name):
    lang = lookup(name)
    w = hartmanis_witness(lang, 4)
    rep = check_reduction(w, lang, universal_member)
    assert rep.ok, rep.lines()
    assert w.table().is_injective()


def test_universal_member_rejects_bad_strings():
    assert not universal_member("11")
    lang = lookup("even-weight")
    s = hartmanis_map(lang.program.bits, lang.cert_bound, "11")
    assert universal_member(s)
    assert not universal_member(s + "0")
    assert not universal_member(s[:-1])
    assert not universal_member(code("1") + "11" + "11" + "11")


def test_registry_lookup():
    assert set(verifier_entries().values()) <= set(oracle_registry().values())
    with pytest.raises(UnknownOracle):
        lookup("nope")


def test_image_language_matches_extracted_table():
    lang = lookup("im-dropLast")
    table = extract_fn(corpus.drop_last(), 4)
    for n in range(5):
        for z in all_strings(3):
            hit = any(y == z and len(x) == n for x, y in table.items())
            assert lang.query(z, "", n) == hit, (z, n)
    assert lang.query("01", "01", 3)
    assert not lang.query("01", "1", 3)
    assert not lang.contains("0")


def test_identity_reduction_and_constant_failure():
    ew = lookup("even-weight")
    win = Universe(4)
    ident = ReductionWitness(FiniteFn((x, x) for x in win), win, "one_one")
    assert check_reduction(ident, ew, ew).ok
    const = ReductionWitness(FiniteFn((x, "1") for x in win), win)
    rep = check_reduction(const, ew, ew)
    assert not rep.ok and rep.counterexamples


def test_one_one_kind_needs_injective_map():
    ew = lookup("even-weight")
    win = Universe(3)
    merge = ReductionWitness(FiniteFn((x, "") for x in win), win, "one_one")
    rep = check_reduction(merge, lambda x: True, ew)
    assert not rep.ok
    assert any("f(" in c for c in rep.counterexamples)


def test_unknown_kind():
    with pytest.raises(ValueError):
        ReductionWitness(FiniteFn(), Universe(1), "sideways")


def test_subset_sum():
    assert subset_sum(subset_sum_instance(5, [2, 3, 7]))
    assert not subset_sum(subset_sum_instance(6, [4, 5]))
    assert subset_sum(subset_sum_instance(0, []))
    assert not subset_sum("1")


def test_asymmetry_witness():
    forward, backward, l1, l2 = asymmetry_witness(5)
    assert check_reduction(forward, l1, l2).ok
    assert not check_reduction(backward, l2, l1).ok
