import itertools
import random

import pytest
from hypothesis import given, strategies as st

from injtm import corpus
from injtm import fnlab as fl
from injtm.errors import CapExceeded, DomainMismatch, NotInjective, NotMutual
from injtm.fnlab import THETA, FiniteFn
from injtm.machine_core import extract_fn

import oracles

POINTS = ["", "0", "1", "00"]


@st.composite
def fns(draw, points=POINTS, injective=False):
    dom = draw(st.lists(st.sampled_from(points), unique=True))
    if injective:
        vals = draw(st.permutations(points))[:len(dom)]
    else:
        vals = [draw(st.sampled_from(points)) for _ in dom]
    return FiniteFn(zip(dom, vals))


@st.composite
def with_coinverse(draw, full=False):
    """f together with an injective co-inverse: one preimage for some image points."""
    f = draw(fns())
    pairs = []
    for y, cls in fl.mod_partition(f).classes:
        if full or draw(st.booleans()):
            pairs.append((y, draw(st.sampled_from(sorted(cls)))))
    return f, FiniteFn(pairs)


# -- basics -----------------------------------------------------------------


def test_compose_drop_after_append():
    app = extract_fn(corpus.append0(), 4)
    drop = extract_fn(corpus.drop_last(), 5)
    assert fl.compose(drop, app) == fl.identity_on(fl.all_strings(4))


def test_restrict_and_inverse():
    f = FiniteFn({"0": "1", "1": "1"})
    assert fl.restrict(f, ()) == THETA
    with pytest.raises(NotInjective):
        fl.relational_inverse(f)


@given(fns(), fns())
def test_compose_matches_dict_oracle(f2, f1):
    assert dict(fl.compose(f2, f1)) == oracles.compose(dict(f2), dict(f1))


def test_text_format_round_trip():
    f = FiniteFn({"": "0", "01": ""})
    assert FiniteFn.parse(f.format()) == f
    assert FiniteFn.parse("# nothing\n") == THETA
    with pytest.raises(ValueError):
        FiniteFn.parse("0 -> 1\n0 -> 0\n")


def test_universe_size_and_order():
    u = fl.Universe(3)
    assert len(u) == 15 == len(u.strings())
    assert u.strings() == sorted(u.strings(), key=fl.llex_key)


# -- inverse predicates -------------------------------------------------------


def test_inverse_examples():
    assert fl.is_mutual(FiniteFn({"1": "0"}), FiniteFn({"0": "1"}))
    assert not fl.is_inverse(FiniteFn({"1": "1"}), FiniteFn({"0": "1"}))
    f, fp = FiniteFn({"0": "1"}), FiniteFn({"0": "0", "1": "0"})
    assert fl.is_mutual(fp, f)
    assert not fp.domain() <= f.image()


def test_theta_conventions():
    assert fl.is_inverse(THETA, THETA)
    assert not fl.is_inverse(THETA, FiniteFn({"0": "0"}))
    assert fl.compose(THETA, FiniteFn({"0": "0"})) == THETA


@given(fns(), fns())
def test_inverse_matches_pointwise_characterisation(fp, f):
    pointwise = all(y in fp and f.get(fp[y]) == y for y in f.image())
    assert fl.is_inverse(fp, f) == pointwise == oracles.is_inverse(dict(fp), dict(f))


@given(fns(), fns())
def test_coinverse_is_swapped_inverse(fp, f):
    assert fl.is_coinverse(fp, f) == fl.is_inverse(f, fp)


@given(fns(), fns(injective=True))
def test_subinverse_routes_agree(f, gp):
    assert fl.is_subinverse(gp, f) == fl.is_subinverse_search(gp, f) \
        == oracles.subinverse_by_subsets(dict(gp), dict(f))


@given(fns(), fns())
def test_subinverse_general_against_subset_oracle(f, gp):
    assert fl.is_subinverse(gp, f) == oracles.subinverse_by_subsets(dict(gp), dict(f))


def test_subinverse_examples():
    f = FiniteFn({"0": "0", "1": "0"})
    assert fl.is_subinverse(FiniteFn({"0": "1"}), f)
    assert fl.is_subinverse(THETA, f)
    for c in fl.choice_sets(f):
        assert fl.is_subinverse(fl.relational_inverse(fl.restrict(f, c)), f)


# -- choice functions and fmin ----------------------------------------------


def test_choice_examples():
    f = FiniteFn({"00": "1", "01": "1", "10": "0"})
    assert len(list(fl.choice_functions(f))) == 2
    assert len(list(fl.repr_choice_functions(f))) == 2
    assert fl.fmin(f) == FiniteFn({"1": "00", "0": "10"})
    inj = FiniteFn({"0": "1", "1": "00"})
    assert list(fl.choice_functions(inj)) == [fl.relational_inverse(inj)]
    assert fl.fmin(inj) == fl.relational_inverse(inj)
    drop = extract_fn(corpus.drop_last(), 4)
    assert fl.fmin(drop) == FiniteFn({y: y + "0" for y in fl.all_strings(3)})


@given(fns())
def test_choice_repr_bijection(f):
    cs = list(fl.choice_functions(f))
    rs = list(fl.repr_choice_functions(f))
    assert len(cs) == len(rs) == len(set(cs))
    for c in cs:
        assert fl.is_choice_function(c, f)
        r = fl.repr_from_choice(c, f)
        assert fl.is_repr_choice_function(r, f)
        assert fl.choice_from_repr(r, f) == c
    for r in rs:
        assert fl.repr_from_choice(fl.choice_from_repr(r, f), f) == r


@given(fns())
def test_fmin_properties(f):
    m = fl.fmin(f)
    assert dict(m) == oracles.llex_min_inverse(dict(f))
    assert fl.compose(f, m) == fl.identity_on(f.image())
    assert m.is_injective()
    assert fl.compose_all(m, f, m) == m
    assert fl.is_mutual(m, f)


@given(with_coinverse())
def test_fmin_patch_extends_subinverse(pair):
    f, gp = pair
    assert fl.is_subinverse(gp, f)
    p = fl.fmin_patch(gp, f)
    assert gp <= p and p.is_injective() and fl.is_mutual(p, f)
    assert p.domain() == f.image()


# -- corrected statements -----------------------------------------------------


def test_domain_equal_image_with_injective_coinverse():
    fs = list(fl.partial_functions(["", "0", "1"]))
    for f in fs:
        for fp in fs:
            if fp.is_injective() and fl.is_coinverse(fp, f) and fp.domain() == f.image():
                assert fl.is_mutual(fp, f)


def test_domain_equal_image_needs_injectivity():
    f = FiniteFn({"0": "1", "1": "00"})
    fp = FiniteFn({"1": "0", "00": "0"})
    assert fl.is_coinverse(fp, f) and fp.domain() == f.image()
    assert not fl.is_inverse(fp, f)


@given(with_coinverse(full=True))
def test_subfunction_of_injective_mutual_inverse(pair):
    f, fp = pair
    assert fl.is_mutual(fp, f)
    for r in range(len(fp) + 1):
        for sub in itertools.combinations(fp.pairs(), r):
            assert fl.is_subinverse(FiniteFn(sub), f)


def test_subfunction_of_non_injective_mutual_inverse():
    f = FiniteFn({"00": ""})
    fp = FiniteFn({"": "00", "00": "00"})
    assert fl.is_mutual(fp, f)
    assert not fl.is_subinverse(FiniteFn({"00": "00"}), f)


@given(fns(), fns(), st.sets(st.sampled_from(POINTS)))
def test_restricted_inverse_extends(f, h, Z):
    if fl.is_inverse(fl.restrict(h, Z), f):
        assert fl.is_inverse(h, f)


@given(with_coinverse(), with_coinverse())
def test_coinverse_products(p1, p2):
    (f1, g1), (f2, g2) = p1, p2
    co = fl.compose(g1, g2)
    assert co.is_injective() and fl.is_coinverse(co, fl.compose(f2, f1))


def test_mutual_product_counterexample():
    f = FiniteFn({"0": "0", "1": "0"})
    fp = FiniteFn({"0": "1"})
    assert fl.is_mutual(fp, f)
    assert fl.compose(fp, fp) == THETA
    assert not fl.is_mutual(THETA, fl.compose(f, f))


# -- enumerations ---------------------------------------------------------------


def test_enumeration_counts():
    assert sum(1 for _ in fl.partial_functions(POINTS)) == 5 ** 4
    assert sum(1 for _ in fl.partial_injections(["0", "1"])) == 7
    assert sum(1 for _ in fl.total_functions(["0", "1"])) == 4


def test_random_fn_is_seeded():
    pool = fl.Universe(3).strings()
    a = fl.random_fn(random.Random(1), pool)
    b = fl.random_fn(random.Random(1), pool)
    assert a == b
    assert fl.random_fn(random.Random(2), pool, injective=True).is_injective()


# -- monoids --------------------------------------------------------------------


def test_idempotent_examples():
    assert fl.is_idempotent(fl.identity_on(["0", "1"]))
    assert fl.is_idempotent(FiniteFn({"0": "1", "1": "1"}))
    assert not fl.is_idempotent(FiniteFn({"0": "1"}))


def test_closure_examples():
    ident = fl.identity_on(["0", "1"])
    assert set(fl.monoid_closure([], identity=ident).elements) == {ident}
    tau = FiniteFn({"0": "1", "1": "0"})
    assert set(fl.monoid_closure([tau]).elements) == {ident, tau}
    with pytest.raises(CapExceeded):
        fl.monoid_closure(fl.total_functions(["0", "1", "00"]), cap=5)


def test_symmetric_inverse_monoid_structure():
    M = fl.monoid_closure(fl.partial_injections(["0", "1"]))
    assert len(M) == 7
    assert M.is_closed()
    gr = fl.green_relations(M)
    assert len(gr.D) == 3 == oracles.green_d_count(M.elements)
    ident = fl.identity_on(["0", "1"])
    assert fl.maximal_subgroup(M, ident) == {ident, FiniteFn({"0": "1", "1": "0"})}
    assert fl.regular_elements(M) == set(M.elements)


def test_rank_one_groups_are_trivial():
    M = fl.monoid_closure(fl.partial_injections(["0", "1"]))
    for e in fl.idempotents(M):
        if len(e) == 1:
            assert fl.maximal_subgroup(M, e) == {e}


def test_green_d_matches_ideal_oracle_on_full_monoid():
    M = fl.monoid_closure(fl.partial_functions(["0", "1"]))
    assert len(fl.green_relations(M).D) == oracles.green_d_count(M.elements)


@given(st.lists(fns(points=["0", "1", "00"], injective=True), max_size=3))
def test_injective_idempotents_are_identities(gens):
    M = fl.monoid_closure(gens, identity=fl.identity_on(["0", "1", "00"]))
    for e in fl.idempotents(M):
        assert e == fl.identity_on(e.domain())


# -- fixators -------------------------------------------------------------------


def test_rfix_examples():
    pts = ["0", "1"]
    total = list(fl.total_functions(pts))
    assert fl.rfix(fl.identity_on(pts), total) == {fl.identity_on(pts)}
    const = FiniteFn({"0": "1", "1": "1"})
    assert fl.rfix(const, total) == set(total)
    M = list(fl.partial_functions(["", "0", "1"]))
    f = FiniteFn({"": "0", "0": "0", "1": "1"})
    for r in fl.repr_choice_functions(f):
        assert r in fl.rfix(f, M)


# -- group inverse --------------------------------------------------------------


def test_group_inverse_example():
    f = FiniteFn({"0": "0", "1": "0"})
    fp = FiniteFn({"0": "0"})
    f0 = fl.pad_zero(f)
    F = fl.group_inverse(f, fp)
    assert f0 == FiniteFn({"00": "10", "01": "10"})
    assert F == FiniteFn({"10": "00", "00": "10"})
    assert fl.compose(F, F) == fl.identity_on(["00", "10"])
    assert fl.compose_all(f0, F, f0) == f0


def test_group_inverse_of_theta():
    assert fl.pad_zero(THETA) == THETA
    assert fl.group_inverse(THETA, THETA) == THETA


def test_group_inverse_of_injective():
    f = FiniteFn({"0": "1", "1": "00"})
    fp = fl.relational_inverse(f)
    f1 = fl.pad_one_inverse(f, fp)
    assert fl.group_inverse(f, fp) == f1.union(fl.relational_inverse(f1))


def test_group_inverse_preconditions():
    f = FiniteFn({"0": "0", "1": "0"})
    with pytest.raises(DomainMismatch):
        fl.group_inverse(f, THETA)
    with pytest.raises(NotMutual):
        fl.group_inverse(FiniteFn({"0": "0"}), FiniteFn({"0": "1"}))


def test_simulates_trivial():
    f = FiniteFn({"0": "1"})
    ident = fl.identity_on(fl.Universe(2))
    assert fl.simulates(f, f, ident, ident)


def test_projection_identities():
    U = fl.Universe(4)
    f = FiniteFn({"0": "1", "01": "", "1": "1"})
    f0 = fl.pad_zero(f)
    assert fl.simulates(f0, f, fl.pi("1", U), fl.pi_prime("0", U))
    assert fl.simulates(f, f0, fl.pi_prime("1", U), fl.pi("0", U))
