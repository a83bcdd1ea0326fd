import numpy as np
import pytest
from gmpy2 import mpq

from acbm.errors import BadData, UnknownClass
from acbm.fundamental import (
    CLASS_TAGS,
    ClassData,
    build_class_F,
    class_data_f1,
    class_data_f4,
    class_data_f5,
    class_data_f11,
    class_data_main,
    classify_F,
    is_in_class,
    lee_forms,
    validate_F,
)
from acbm.sampling import class_data_random, main_class_data
from acbm.structure import canonical_structure
from acbm.tensor import eq, is_zero, tensor, zeros


def covec(*vals):
    return tensor(list(vals), (len(vals),))


def test_purely_vertical_fixture_matches_hand_computation(s1):
    f = build_class_F("F11", class_data_f11(covec(1, 0, 0), s1), s1)
    # F(x,y,z) = eta(x)(eta(y) w(z) + eta(z) w(y)) with w = e^1
    assert f[2, 2, 0] == 1 and f[2, 0, 2] == 1
    assert sum(1 for v in f.flat if v != 0) == 2


def test_starred_trace_fixture_matches_hand_computation(s1):
    f = build_class_F("F5", class_data_f5(mpq(2), s1), s1)
    assert f[0, 1, 2] == 1 and f[1, 0, 2] == 1
    assert f[0, 2, 1] == 1 and f[1, 2, 0] == 1
    assert sum(1 for v in f.flat if v != 0) == 4


def test_every_builder_output_passes_the_defining_symmetries(s1, s2):
    for s in (s1, s2):
        seeds = range(4)
        for k in seeds:
            f = build_class_F("MAIN", main_class_data(s, k), s)
            assert validate_F(f, s).ok
        for tag in ("F1", "F4", "F5", "F11"):
            f = build_class_F(tag, class_data_random(tag, s, 7), s)
            assert validate_F(f, s).ok


def test_validate_catches_broken_symmetry(s1):
    f = zeros(3, 3, 3).copy()
    f[0, 0, 1] = mpq(1)  # no matching (0,1,0) partner
    rep = validate_F(f, s1)
    assert not rep.ok
    assert any(c.name == "symmetric_in_last_two" and not c.passed for c in rep.checks)


def test_lee_forms_on_vertical_fixture(s1):
    f = build_class_F("F11", class_data_f11(covec(1, 0, 0), s1), s1)
    forms = lee_forms(f, s1)
    assert list(forms.omega) == [1, 0, 0]
    assert is_zero(forms.theta_h) and is_zero(forms.theta_star_h)
    # full trace picks up the vertical part
    assert list(forms.theta_full) == [1, 0, 0]


def test_lee_forms_are_linear_in_the_tensor(s1):
    fa = build_class_F("F1", class_data_f1(covec(3, -5, 0), s1), s1)
    fb = build_class_F("F5", class_data_f5(mpq(2), s1), s1)
    la, lb = lee_forms(fa, s1), lee_forms(fb, s1)
    lsum = lee_forms(fa + fb, s1)
    assert is_zero(lsum.theta_full - la.theta_full - lb.theta_full)
    assert is_zero(lsum.theta_star_full - la.theta_star_full - lb.theta_star_full)
    assert is_zero(lsum.omega - la.omega - lb.omega)


def test_omega_never_sees_the_distinguished_vector(s1, s2):
    for s in (s1, s2):
        for k in range(5):
            f = build_class_F("MAIN", main_class_data(s, 100 + k), s)
            assert np.dot(lee_forms(f, s).omega, s.xi) == 0


def test_trace_relation_horizontal_always_full_only_without_vertical_part(s1):
    phi2 = np.tensordot(s1.phi, s1.phi, axes=([1], [0]))

    def relation(theta_star, theta):
        return is_zero(np.dot(s1.phi.T, theta_star) + np.dot(phi2.T, theta))

    # no vertical part: both versions hold
    f = build_class_F("F1", class_data_f1(covec(3, -5, 0), s1), s1)
    forms = lee_forms(f, s1)
    assert relation(forms.theta_star_h, forms.theta_h)
    assert relation(forms.theta_star_full, forms.theta_full)

    # vertical part present: the full-trace version must break
    f = build_class_F("F11", class_data_f11(covec(2, 1, 0), s1), s1)
    forms = lee_forms(f, s1)
    assert relation(forms.theta_star_h, forms.theta_h)
    assert not relation(forms.theta_star_full, forms.theta_full)


def test_classification_separates_the_pure_classes(s1):
    fixtures = {
        "F1": build_class_F("F1", class_data_f1(covec(3, -5, 0), s1), s1),
        "F4": build_class_F("F4", class_data_f4(mpq(7, 2), s1), s1),
        "F5": build_class_F("F5", class_data_f5(mpq(2), s1), s1),
        "F11": build_class_F("F11", class_data_f11(covec(1, 4, 0), s1), s1),
    }
    for tag, f in fixtures.items():
        cls = classify_F(f, s1)
        assert cls[tag] and cls["MAIN"] and not cls["F0"]
        for other in ("F1", "F4", "F5", "F11"):
            if other != tag:
                assert not cls[other], (tag, other)


def test_zero_tensor_is_in_every_class(s1):
    cls = classify_F(zeros(3, 3, 3), s1)
    assert all(cls.values())


def test_mixed_fixture_is_only_in_the_containing_class(s2):
    cd = main_class_data(s2, 11)
    f = build_class_F("MAIN", cd, s2)
    cls = classify_F(f, s2)
    assert cls["MAIN"]
    assert not any(cls[t] for t in ("F0", "F1", "F4", "F5", "F11"))


def test_sum_of_pure_fixtures_lands_in_the_containing_class(s1):
    f = (
        build_class_F("F1", class_data_f1(covec(3, -5, 0), s1), s1)
        + build_class_F("F5", class_data_f5(mpq(2), s1), s1)
        + build_class_F("F11", class_data_f11(covec(1, 4, 0), s1), s1)
    )
    cls = classify_F(f, s1)
    assert cls["MAIN"]
    assert validate_F(f, s1).ok


def test_builders_reject_incompatible_data(s1):
    with pytest.raises(BadData):
        # horizontal trace form may not have a vertical component
        build_class_F("F1", ClassData(theta=covec(1, 0, 5)), s1)
    with pytest.raises(BadData):
        # vertical form may not see the distinguished vector
        build_class_F("F11", ClassData(omega=covec(0, 0, 1)), s1)


def test_unknown_tag_raises(s1):
    with pytest.raises(UnknownClass):
        build_class_F("F7", ClassData(), s1)
    with pytest.raises(UnknownClass):
        is_in_class(zeros(3, 3, 3), "bogus", s1)


def test_class_tags_are_frozen():
    assert CLASS_TAGS == ("F0", "F1", "F4", "F5", "F11", "MAIN")


def test_main_builder_ties_the_starred_form_to_the_plain_form(s1):
    cd = class_data_main(covec(3, -5, 0), mpq(2), covec(1, 4, 0), s1)
    # theta* = c* eta - theta o phi
    want = mpq(2) * s1.eta - np.dot(cd.theta, s1.phi)
    assert is_zero(cd.theta_star - want)
    f = build_class_F("MAIN", cd, s1)
    forms = lee_forms(f, s1)
    assert is_zero(forms.theta_h - cd.theta)
    assert is_zero(forms.theta_star_h - cd.theta_star)
    assert is_zero(forms.omega - cd.omega)
