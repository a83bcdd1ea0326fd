import json

import pytest
from gmpy2 import mpq

from acbm.errors import ParseError
from acbm.family import AnsatzParams, FamilyParams, canonical_torsion_from_F
from acbm.fundamental import build_class_F
from acbm.jsonio import (
    decode_tensor,
    dumps_report,
    encode_tensor,
    f_to_dict,
    lie_to_dict,
    load_f_file,
    load_lie_file,
    load_params_file,
    load_structure,
    load_torsion_file,
    params_to_dict,
    structure_from_dict,
    structure_to_dict,
    torsion_to_dict,
    write_json,
)
from acbm.jsonio import load_json
from acbm.liealg import make_lie_algebra
from acbm.sampling import main_class_data, unimodular
from acbm.structure import canonical_structure, change_basis, validate_structure
from acbm.tensor import eq, tensor, zeros


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_scalar_encoding_round_trip():
    t = tensor([[mpq(1, 2), 3], [mpq(-7, 3), 0]], (2, 2))
    enc = encode_tensor(t)
    assert enc == [["1/2", 3], ["-7/3", 0]]
    back = decode_tensor(enc, (2, 2), "roundtrip")
    assert eq(back, t)


def test_structure_round_trip(tmp_path):
    s = change_basis(canonical_structure(2), unimodular(5, 3))
    p = dump(tmp_path, "s.json", structure_to_dict(s))
    back = load_structure(p)
    assert eq(back.phi, s.phi) and eq(back.g, s.g)
    assert eq(back.xi, s.xi) and eq(back.eta, s.eta)


def test_f_file_round_trip_with_inline_structure(tmp_path):
    s = change_basis(canonical_structure(1), unimodular(3, 5))
    f = build_class_F("MAIN", main_class_data(s, 2), s)
    p = dump(tmp_path, "f.json", f_to_dict(f, s, inline_structure=True))
    f2, s2 = load_f_file(p)
    assert eq(f2, f) and eq(s2.g, s.g)


def test_f_file_defaults_to_the_reference_structure(tmp_path):
    s = canonical_structure(1)
    f = build_class_F("MAIN", main_class_data(s, 2), s)
    p = dump(tmp_path, "f.json", f_to_dict(f))
    f2, s2 = load_f_file(p)
    assert eq(f2, f) and eq(s2.g, s.g)


def test_structure_by_relative_file_reference(tmp_path):
    s = change_basis(canonical_structure(1), unimodular(3, 9))
    dump(tmp_path, "struct.json", structure_to_dict(s))
    f = build_class_F("MAIN", main_class_data(s, 4), s)
    d = f_to_dict(f)
    d["structure"] = {"file": "struct.json"}
    p = dump(tmp_path, "f.json", d)
    f2, s2 = load_f_file(p)
    assert eq(s2.g, s.g)


def test_torsion_file_round_trip(tmp_path):
    s = canonical_structure(1)
    f = build_class_F("MAIN", main_class_data(s, 6), s)
    t = canonical_torsion_from_F(f, s)
    p = dump(tmp_path, "t.json", torsion_to_dict(t))
    t2, s2 = load_torsion_file(p)
    assert eq(t2, t)


def test_params_round_trip_both_kinds(tmp_path):
    a = FamilyParams((mpq(1, 2), mpq(0), mpq(-3), mpq(2, 7)))
    p = dump(tmp_path, "a.json", params_to_dict(a))
    back = load_params_file(p)
    assert isinstance(back, FamilyParams) and back.alpha == a.alpha

    lam = AnsatzParams.from_alpha(a, 1)
    p = dump(tmp_path, "l.json", params_to_dict(lam))
    back = load_params_file(p)
    assert isinstance(back, AnsatzParams) and back.lam == lam.lam


def test_lie_file_round_trip(tmp_path):
    c = zeros(3, 3, 3).copy()
    c[0, 1, 2] = mpq(1)
    c[1, 0, 2] = mpq(-1)
    lie = make_lie_algebra(3, c.tolist())
    p = dump(tmp_path, "lie.json", lie_to_dict(lie))
    lie2, s2 = load_lie_file(p)
    assert eq(lie2.c, lie.c)
    assert validate_structure(s2).ok


def test_write_json_is_deterministic(tmp_path):
    obj = {"b": [mpq(1, 2)], "a": 1}
    text1 = dumps_report({"b": ["1/2"], "a": 1})
    p = tmp_path / "out.json"
    text2 = write_json({"b": ["1/2"], "a": 1}, p)
    assert text1 == text2 == p.read_text()
    assert text1.endswith("\n")
    assert text1.index('"a"') < text1.index('"b"')


def test_parse_errors(tmp_path):
    # not JSON at all
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    with pytest.raises(ParseError):
        load_json(p)

    # top level must be an object
    p.write_text("[1, 2]")
    with pytest.raises(ParseError):
        load_json(p)

    # missing required field
    q = dump(tmp_path, "f.json", {"n": 1})
    with pytest.raises(ParseError):
        load_f_file(q)

    # float scalars are refused
    d = {"n": 1, "F": [[[0.5] * 3] * 3] * 3}
    q = dump(tmp_path, "float.json", d)
    with pytest.raises(ParseError):
        load_f_file(q)

    # ragged nesting
    d = {"n": 1, "F": [[[0] * 3] * 3] * 2}
    q = dump(tmp_path, "ragged.json", d)
    with pytest.raises(ParseError):
        load_f_file(q)

    # malformed rational string
    d = {"n": 1, "T": [[["1/2/3"] * 3] * 3] * 3}
    q = dump(tmp_path, "badrat.json", d)
    with pytest.raises(ParseError):
        load_torsion_file(q)


def test_params_file_needs_exactly_one_kind(tmp_path):
    with pytest.raises(ParseError):
        load_params_file(dump(tmp_path, "none.json", {}))
    with pytest.raises(ParseError):
        load_params_file(
            dump(tmp_path, "both.json", {"alpha": [0] * 4, "lambda": [0] * 18})
        )
    with pytest.raises(ParseError):
        load_params_file(dump(tmp_path, "short.json", {"alpha": [0, 1]}))


def test_f_file_structure_dimension_must_match(tmp_path):
    s2 = canonical_structure(2)
    d = {"n": 1, "F": [[[0] * 3] * 3] * 3, "structure": structure_to_dict(s2)}
    with pytest.raises(ParseError):
        load_f_file(dump(tmp_path, "mismatch.json", d))


def test_lie_file_dimension_must_be_odd(tmp_path):
    d = {"dim": 4, "c": [[[0] * 4] * 4] * 4}
    with pytest.raises(ParseError):
        load_lie_file(dump(tmp_path, "even.json", d))


def test_structure_from_dict_reports_location():
    with pytest.raises(ParseError, match="here"):
        structure_from_dict({"n": 1}, where="here")
