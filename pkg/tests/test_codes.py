import pytest

from entdist.codes import (
    StabilizerCode,
    builtin_code,
    builtin_names,
    format_code_text,
    load_code,
    parse_code_text,
    save_code,
    validate_code,
)
from entdist.pauli import PauliString

P = PauliString.from_string


def test_builtin_names():
    assert builtin_names() == ("913", "923", "933", "513", "713")


def test_table_rows_spot_checks():
    c913 = builtin_code("913")
    assert c913.stabilizers[0].letters() == "YIZIIIIXY"
    assert c913.logical_x[0].letters() == "ZIIIIIIXX"
    c933 = builtin_code(933)
    assert c933.k == 3
    assert len(c933.stabilizers) == 6
    assert c933.stabilizers[5].letters() == "ZZZZIZZZZ"


def test_counts_match_parameters():
    for name in builtin_names():
        c = builtin_code(name)
        assert len(c.stabilizers) == c.n - c.k
        assert len(c.logical_x) == len(c.logical_z) == c.k


def test_all_builtins_validate_with_distance():
    for name in builtin_names():
        report = validate_code(builtin_code(name), check_distance=True)
        assert report.passed, report.failures()


def test_five_qubit_code_validates():
    assert validate_code(builtin_code("513")).passed


def test_unknown_code_rejected():
    with pytest.raises(ValueError, match="unknown code"):
        builtin_code("999")


def test_anticommuting_stabilizers_fail():
    bad = StabilizerCode("bad", 2, 0, 1, (P("XI"), P("ZI")), (), ())
    report = validate_code(bad)
    assert not report.passed
    assert any(c.name == "stabilizers_commute" and not c.passed for c in report.checks)


def test_duplicate_stabilizers_fail_rank():
    bad = StabilizerCode("dup", 3, 1, 1, (P("ZZI"), P("ZZI")), (P("XXX"),), (P("ZII"),))
    report = validate_code(bad)
    assert any(c.name == "generator_independence" and not c.passed for c in report.checks)


def test_wrong_logical_pairing_fails():
    # logical X commutes with its own logical Z
    bad = StabilizerCode("pair", 3, 1, 1, (P("ZZI"), P("IZZ")), (P("ZII"),), (P("IIZ"),))
    report = validate_code(bad)
    assert any(c.name == "logical_pairing" and not c.passed for c in report.checks)


def test_code_file_roundtrip(tmp_path):
    for name in builtin_names():
        code = builtin_code(name)
        assert parse_code_text(format_code_text(code)) == code
    path = tmp_path / "code.txt"
    save_code(builtin_code("923"), path)
    assert load_code(path) == builtin_code("923")


def test_code_file_format_shape():
    text = format_code_text(builtin_code("513"))
    lines = text.strip().splitlines()
    assert lines[:4] == ["name=513", "n=5", "k=1", "d=3"]
    assert "H:" in lines and "X:" in lines and "Z:" in lines


def test_parse_code_text_errors():
    with pytest.raises(ValueError, match="missing header"):
        parse_code_text("n=3\nk=1\nd=1\nH:\nZZI\n")
    with pytest.raises(ValueError, match="unexpected content"):
        parse_code_text("name=x\nn=3\nk=1\nd=1\nZZI\n")
    with pytest.raises(ValueError, match="no stabilizer rows"):
        parse_code_text("name=x\nn=3\nk=1\nd=1\nH:\nX:\nZ:\n")


def test_custom_code_from_text_validates():
    text = "\n".join(
        ["name=threequbit", "n=3", "k=1", "d=1", "H:", "ZZI", "IZZ", "X:", "XXX", "Z:", "ZII", ""]
    )
    code = parse_code_text(text)
    assert validate_code(code, check_distance=True).passed
