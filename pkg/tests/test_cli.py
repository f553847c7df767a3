import pytest

from injtm.cli import main
from injtm.codec import pair_encode
from injtm.fnlab import FiniteFn


@pytest.fixture
def dump(tmp_path):
    def _dump(name):
        path = tmp_path / f"{name}.tm"
        assert main(["corpus", "dump", name, "-o", str(path)]) == 0
        return str(path)
    return _dump


def write_fn(tmp_path, name, f):
    path = tmp_path / name
    path.write_text(FiniteFn(f).format())
    return str(path)


def test_run_g(dump, capsys):
    assert main(["run", "--machine", dump("g"), "--input", "00000000"]) == 0
    assert capsys.readouterr().out == "000\n"


def test_run_reject_exits_one(dump, capsys):
    assert main(["run", "--machine", dump("g"), "--input", "000"]) == 1
    assert capsys.readouterr().out.strip() == "Reject"


def test_check_injective(dump, capsys):
    assert main(["check", "--machine", dump("g"), "--injective"]) == 0
    assert capsys.readouterr().out == "injective: yes\n"


def test_check_non_injective(dump, capsys):
    assert main(["check", "--machine", dump("drop_last"), "--injective"]) == 1
    assert capsys.readouterr().out.startswith("injective: no")


def test_member_universal(capsys):
    assert main(["member", "--oracle", "universal", "--string", "11"]) == 1
    assert capsys.readouterr().out == "false\n"
    assert main(["member", "--oracle", "even-weight", "--string", "11"]) == 0


@pytest.mark.parametrize("argv", [
    ["member", "--oracle", "nope", "--string", "1"],
    ["member", "--oracle", "even-weight", "--string", "12"],
    ["run", "--machine", "/nonexistent.tm", "--input", "0"],
    ["frobnicate"],
    ["corpus", "dump", "nope"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_malformed_machine_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.tm"
    bad.write_text("machine x\nbogus: 1\n")
    assert main(["check", "--machine", str(bad)]) == 2
    assert "line" in capsys.readouterr().err


def test_reverse_round_trip(dump, tmp_path, capsys):
    out = tmp_path / "rg.tm"
    assert main(["reverse", "--machine", dump("g"), "-o", str(out)]) == 0
    assert main(["run", "--machine", str(out), "--input", "000"]) == 0
    assert capsys.readouterr().out == "0" * 8 + "\n"


def test_bennett_clean(dump, tmp_path, capsys):
    out = tmp_path / "b.tm"
    assert main(["bennett", "--machine", dump("inc"), "--inverse", dump("dec"), "-o", str(out)]) == 0
    assert main(["run", "--machine", str(out), "--input", "011"]) == 0
    assert capsys.readouterr().out == "100\n"


def test_chain(dump, tmp_path, capsys):
    out = tmp_path / "c.tm"
    assert main(["chain", "--first", dump("append0"), "--second", dump("flip"), "-o", str(out)]) == 0
    assert main(["run", "--machine", str(out), "--input", "1"]) == 0
    assert capsys.readouterr().out == "01\n"


def test_encode_pair_and_decode(capsys):
    assert main(["encode", "--pair", "01", "1"]) == 0
    s = capsys.readouterr().out.strip()
    assert s == pair_encode("01", "1")
    assert main(["encode", "--decode", s]) == 0
    assert capsys.readouterr().out == "01\n1\n"
    assert main(["encode", "--decode", "0"]) == 1


def test_invert_fmin(dump, capsys):
    assert main(["invert", "--mode", "fmin", "--machine", dump("g"), "--output", "00"]) == 0
    assert capsys.readouterr().out == "0000\n"
    assert main(["invert", "--machine", dump("g"), "--output", "1"]) == 1
    assert capsys.readouterr().out == "NotInImage\n"


def test_invert_levin_with_registry(dump, tmp_path, capsys):
    reg = tmp_path / "reg"
    reg.mkdir()
    assert main(["reverse", "--machine", dump("g"), "-o", str(reg / "rg.tm")]) == 0
    assert main(["invert", "--mode", "levin", "--machine", dump("g"), "--output", "000",
                 "--registry", str(reg)]) == 0
    assert capsys.readouterr().out == "0" * 8 + "\n"


def test_lab_operations(tmp_path, capsys):
    f = write_fn(tmp_path, "f", {"00": "1", "01": "1", "10": "0"})
    assert main(["lab", "fmin", f]) == 0
    m = FiniteFn.parse(capsys.readouterr().out)
    assert m == FiniteFn({"1": "00", "0": "10"})
    mf = write_fn(tmp_path, "m", m)
    assert main(["lab", "mutual", mf, f]) == 0
    assert main(["lab", "injective", f]) == 1
    assert main(["lab", "compose", f, mf]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["true", "false"]
    assert FiniteFn.parse("\n".join(out[2:])) == FiniteFn({"1": "1", "0": "0"})


def test_lab_random_is_seeded(capsys):
    argv = ["--seed", "5", "lab", "random", "--max-len", "3"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    main(["--seed", "6", "lab", "random", "--max-len", "3"])
    assert capsys.readouterr().out != first


def test_reduce_default_padding_map(capsys):
    assert main(["reduce", "--check", "--source", "even-weight", "--window", "3"]) == 0
    assert capsys.readouterr().out.startswith("reduction: holds")


def test_reduce_with_map_file(tmp_path, capsys):
    f = write_fn(tmp_path, "f", {x: "1" for x in ["", "0", "1"]})
    assert main(["reduce", "--source", "even-weight", "--target", "even-weight",
                 "--map", f, "--window", "1"]) == 1
    assert "fails" in capsys.readouterr().out


def test_corpus_list_and_verify(capsys):
    assert main(["corpus", "list"]) == 0
    assert "g " in capsys.readouterr().out
    assert main(["corpus", "verify", "g-machine"]) == 0
    assert "PASS" in capsys.readouterr().out
