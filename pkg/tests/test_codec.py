import pytest
from hypothesis import given, strategies as st

from injtm import corpus
from injtm.builder import Builder
from injtm.codec import (
    FIXED_ORACLE,
    NoOutput,
    Program,
    code,
    cofp_eval,
    deserialize_machine,
    inj_ev,
    is_pair,
    pair_decode,
    pair_encode,
    regcofp_eval,
    serialize_machine,
    validate_program,
)
from injtm.errors import BoundTooLarge, InvalidProgram, MalformedProgram, NotAPair, NotInDomain
from injtm.fnlab import FiniteFn, all_strings, is_subinverse
from injtm.machine_core import PolyBound, extract_fn, run

bits = st.text("01", max_size=24)
Q = PolyBound(5, 2)


def test_code_examples():
    assert code("0") == "00"
    assert code("") == ""
    assert code("101") == "010001"


def test_pair_examples():
    assert pair_encode("1", "0") == "01110"
    assert pair_decode("00011110") == ("01", "10")
    with pytest.raises(NotAPair):
        pair_decode("0000")
    assert not is_pair("10")


@given(bits, bits)
def test_pair_round_trip(w, x):
    assert pair_decode(pair_encode(w, x)) == (w, x)
    assert len(code(w)) == 2 * len(w)


@given(bits, bits, bits, bits)
def test_pair_encode_injective(w1, x1, w2, x2):
    if (w1, x1) != (w2, x2):
        assert pair_encode(w1, x1) != pair_encode(w2, x2)


@pytest.mark.parametrize("name", sorted(corpus.deterministic_corpus()))
def test_serialize_round_trip(name):
    m = corpus.deterministic_corpus()[name]
    assert deserialize_machine(serialize_machine(m)) == m


def test_serialize_injective_on_corpus():
    seen = {serialize_machine(m) for m in corpus.deterministic_corpus().values()}
    assert len(seen) == len(corpus.deterministic_corpus())


def test_deserialize_garbage():
    with pytest.raises(MalformedProgram):
        deserialize_machine("11")


def test_program_text_round_trip():
    p = Program.pair("cofP_pair", Program.of(corpus.append0(), "invfP_NP"),
                     Program.of(corpus.drop_last(), "fP"))
    assert Program.parse(p.format()) == p
    single = Program.of(corpus.g_machine())
    assert Program.parse(single.format()) == single


def test_validate_program_demands():
    with pytest.raises(InvalidProgram):
        validate_program(Program.of(corpus.drop_last(), "invfP"))
    assert validate_program(Program.of(corpus.drop_last(), "fP"))
    with pytest.raises(InvalidProgram):
        validate_program(Program.of(corpus.oracle_tag(), "invfP"))
    with pytest.raises(InvalidProgram):
        validate_program(Program.of(corpus.oracle_tag(), "invfP_NP"))
    ok = Program.of(corpus.oracle_tag(FIXED_ORACLE), "invfP_NP")
    assert validate_program(ok)


def test_missing_bounds_rejected():
    m = corpus.identity().with_bounds(None, None)
    with pytest.raises(InvalidProgram):
        validate_program(Program.of(m, "fP"))


def test_inj_ev_identity():
    w = Program.of(corpus.identity()).bits
    assert inj_ev(Q, pair_encode(w, "10")) == pair_encode(w, "10")


def test_inj_ev_g():
    w = Program.of(corpus.g_machine()).bits
    assert inj_ev(Q, pair_encode(w, "0000")) == pair_encode(w, "00")
    with pytest.raises(NotInDomain):
        inj_ev(Q, pair_encode(w, "000"))


def test_inj_ev_bound_too_large():
    m = corpus.identity().with_bounds(PolyBound(9, 3), PolyBound(1, 1))
    with pytest.raises(BoundTooLarge):
        inj_ev(Q, pair_encode(Program.of(m).bits, "1"))


def test_inj_ev_with_oracle():
    w = Program.of(corpus.oracle_tag(FIXED_ORACLE), "invfP_NP").bits
    ora = {FIXED_ORACLE: lambda s: s == "1"}
    assert inj_ev(Q, pair_encode(w, "1"), ora) == pair_encode(w, "11")
    assert inj_ev(Q, pair_encode(w, "0"), ora) == pair_encode(w, "00")


@pytest.mark.parametrize("name", ["identity", "flip", "append0", "drop0", "g"])
def test_inj_ev_agrees_with_run(name):
    m = corpus.by_name(name)
    w = Program.of(m).bits
    for x in all_strings(4):
        out = run(m, x)
        if out.accepted:
            assert inj_ev(Q, pair_encode(w, x)) == pair_encode(w, out.output)


def test_cofp_examples():
    ident = corpus.identity()
    assert cofp_eval(Q, ident, ident, "01") == "01"
    assert cofp_eval(Q, corpus.append0(), corpus.drop_last(), "1") == "10"
    assert cofp_eval(Q, corpus.append1(), corpus.drop0(), "1") is NoOutput


def test_cofp_table_is_subinverse():
    vp, w = corpus.append0(), corpus.drop_last()
    table = FiniteFn((y, x) for y in all_strings(4)
                     if (x := cofp_eval(Q, vp, w, y)) is not NoOutput)
    assert is_subinverse(table, extract_fn(w, 6))
    assert table <= extract_fn(vp, 4)


def _cofp(vp, w):
    return Program.pair("cofP_pair", Program.of(vp, "invfP_NP"), Program.of(w, "fP"))


def test_regcofp_examples():
    ident = _cofp(corpus.identity(), corpus.identity())
    assert regcofp_eval(Q, ident, ident, "0") == "0"
    u = _cofp(corpus.append0(), corpus.drop_last())
    v = _cofp(corpus.drop0(), corpus.append0())
    assert regcofp_eval(Q, u, v, "1") == "10"
    empty = _cofp(corpus.empty_machine(), corpus.identity())
    assert all(regcofp_eval(Q, u, empty, x) is NoOutput for x in all_strings(3))


def test_regcofp_needs_pair_programs():
    with pytest.raises(InvalidProgram):
        regcofp_eval(Q, Program.of(corpus.identity()), Program.of(corpus.identity()), "0")


def test_no_output_is_singleton():
    assert repr(NoOutput) == "NoOutput"
    assert type(NoOutput)() is NoOutput


def test_program_rejects_unknown_tag():
    with pytest.raises(MalformedProgram):
        Program("nope", "0")
    with pytest.raises(MalformedProgram):
        Program.parse("class: nope\n")


def test_builder_oracle_name_must_be_registered():
    b = Builder("ask", ("input:normal", "output:normal", "query:normal"))
    b.site("start", "y", "n", "mystery")
    b.rw("y", "___", "acc")
    b.rw("n", "___", "acc2")
    m = b.build("start", "acc", time=(1, 1), balance=(1, 1))
    with pytest.raises(InvalidProgram):
        validate_program(Program.of(m, "invfP_NP"))
    assert validate_program(Program.of(m, "invfP_NP"), {"mystery": set()})
