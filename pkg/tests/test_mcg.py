import itertools
import random

import pytest

from obd.surface import standard_surface
from obd.curves import NormalCurveSystem, peripheral_curve
from obd.intersection import geometric_intersection
from obd.mcg import (
    MappingClassWord, WordError, apply_word, register_conjugate_twist,
    is_right_of, right_veering_sample, arcs_from_base,
    iteration_growth, invariant_multicurve_search, estimate_fdtc,
    RIGHT, LEFT, EQUAL,
)
from obd.curve_complex import farey_torus, enumerate_curves


@pytest.fixture(scope="module")
def torus():
    return standard_surface(1, 1)


@pytest.fixture(scope="module")
def ft(torus):
    return farey_torus(torus)


@pytest.fixture(scope="module")
def base_word(torus, ft):
    return MappingClassWord(torus, {
        "a": ft.curve(1, 0),
        "b": ft.curve(0, 1),
        "d": peripheral_curve(torus, 0),
    })


def test_twist_fixes_core(base_word, ft):
    ra = base_word.with_letters((("a", 1),))
    assert apply_word(ra, ft.curve(1, 0)) == ft.curve(1, 0)


def test_inverse_law(base_word, ft):
    word = base_word.with_letters((("a", 1), ("b", -1), ("a", 2)))
    for slope in [(1, 0), (0, 1), (1, 1), (-2, 3)]:
        sys = ft.curve(*slope)
        assert apply_word(word.inverse(), apply_word(word, sys)) == sys


def test_functoriality(base_word, ft):
    w1 = base_word.with_letters((("a", 1), ("b", -1)))
    w2 = base_word.with_letters((("b", 2), ("a", 1)))
    comp = w1.compose(w2)
    for slope in [(1, 0), (0, 1), (2, 1)]:
        sys = ft.curve(*slope)
        assert apply_word(comp, sys) == apply_word(w1, apply_word(w2, sys))


def test_farey_twist_growth(base_word, ft):
    ra = base_word.with_letters((("a", 1),))
    b = ft.curve(0, 1)
    a = ft.curve(1, 0)
    for n in range(7):
        img = apply_word(ra.power(n), b)
        assert geometric_intersection(img, b) == n
        assert geometric_intersection(img, a) == 1


def test_twist_growth_inequality(base_word, ft):
    # |i(T_g^n a, b) - n i(a,g) i(g,b)| <= i(a,b)
    rng = random.Random(7)
    slopes = [(1, 0), (0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-1, 2)]
    for _ in range(25):
        sa, sb, sg = (rng.choice(slopes) for _ in range(3))
        a, b, g = ft.curve(*sa), ft.curve(*sb), ft.curve(*sg)
        word = MappingClassWord(a.surface, {"g": g})
        tw = word.with_letters((("g", 1),))
        iag = geometric_intersection(a, g)
        igb = geometric_intersection(g, b)
        iab = geometric_intersection(a, b)
        for n in range(0, 4):
            img = apply_word(tw.power(n), a)
            assert abs(geometric_intersection(img, b) - n * iag * igb) <= iab


def test_unregistered_letter_rejected(torus):
    with pytest.raises(WordError):
        MappingClassWord(torus, {}, letters=(("nope", 1),))


def test_register_conjugate_twist(base_word, ft):
    w = base_word.with_letters((("a", 1), ("b", -1)))
    w2, name = register_conjugate_twist(w, "b")
    image = w2.registry[name]
    assert image == apply_word(w, ft.curve(0, 1))
    # twisting along the image equals conjugated word action
    tw_image = w2.with_letters(((name, 1),))
    conj = w.compose(base_word.with_letters((("b", 1),))).compose(w.inverse())
    for slope in [(1, 0), (1, 1), (-1, 2)]:
        sys = ft.curve(*slope)
        assert apply_word(tw_image, sys) == apply_word(conj, sys)


def test_conjugate_registration_distinct(base_word, ft):
    # images of the basis under powers of a filling-pair word are distinct
    g = base_word.with_letters((("a", 1), ("b", -1)))
    seen = set()
    for n in range(1, 6):
        img = apply_word(g.power(n), ft.curve(1, 0))
        seen.add(img.weights)
    assert len(seen) == 5


# -- right-veering ------------------------------------------------------------------


def test_right_of_equal_clause(torus, base_word):
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 4)
    for arc in arcs:
        assert is_right_of(arc, arc) == EQUAL


def test_positive_twist_veers_right(torus, base_word):
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 5)
    ra = base_word.with_letters((("a", 1),))
    report = right_veering_sample(ra, arcs)
    assert report.lefts == 0
    assert report.rights > 0


def test_negative_twist_veers_left(torus, base_word):
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 5)
    ra_inv = base_word.with_letters((("a", -1),))
    report = right_veering_sample(ra_inv, arcs)
    assert report.lefts > 0


def test_identity_all_equal(torus, base_word):
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 5)
    report = right_veering_sample(base_word.with_letters(()), arcs)
    assert report.lefts == 0 and report.rights == 0
    assert report.right_veering_on_sample


def test_antisymmetry(torus, base_word):
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 4)
    ra = base_word.with_letters((("a", 1), ("b", 1)))
    for arc in arcs:
        image = apply_word(ra, arc)
        v1 = is_right_of(arc, image)
        v2 = is_right_of(image, arc)
        if v1 == RIGHT:
            assert v2 == LEFT
        elif v1 == LEFT:
            assert v2 == RIGHT
        else:
            assert v2 == EQUAL


# -- growth, invariance, fdtc ----------------------------------------------------------


def test_growth_identity_constant(base_word, ft):
    ident = base_word.with_letters(())
    cert = iteration_growth(ident, ft.curve(0, 1), ft.curve(1, 0), 4)
    assert len(set(cert.counts)) == 1
    assert not cert.monotone


def test_growth_farey_strict(base_word, ft):
    word = base_word.with_letters((("a", 1), ("b", -1)))
    cert = iteration_growth(word, ft.curve(0, 1), ft.curve(1, 0), 6)
    assert cert.monotone
    # cross-check: monotone certificate implies no early return
    cur = ft.curve(0, 1)
    for _ in range(6):
        cur = apply_word(word, cur)
        assert cur != ft.curve(0, 1)


def test_invariant_search_finds_twist_core(base_word, ft):
    ra = base_word.with_letters((("a", 1),))
    report = invariant_multicurve_search(ra, 6)
    assert not report.exhausted
    found = report.found
    assert geometric_intersection(found, ft.curve(1, 0)) == 0


def test_invariant_search_identity_first_curve(torus, base_word):
    ident = base_word.with_letters(())
    report = invariant_multicurve_search(ident, 4)
    first = next(iter(enumerate_curves(torus, 4)))
    assert report.found == first


def test_invariant_search_exhausts_on_pseudo_anosov(base_word):
    word = base_word.with_letters((("a", 1), ("b", -1)))
    report = invariant_multicurve_search(word, 6)
    assert report.exhausted
    assert report.curves_checked > 0


def test_fdtc_identity_zero(torus, base_word):
    base = torus.boundary_components[0][0]
    seed = arcs_from_base(torus, base, 4)[0]
    est = estimate_fdtc(base_word.with_letters(()), 4, seed)
    assert (est.low, est.high) == (0, 0)


@pytest.mark.parametrize("letters", [
    (), (("a", 1),), (("a", 1), ("b", -1)), (("b", 2),),
])
def test_fdtc_boundary_twist_shift(torus, base_word, letters):
    base = torus.boundary_components[0][0]
    seed = arcs_from_base(torus, base, 4)[0]
    plain = base_word.with_letters(letters)
    shifted = base_word.with_letters((("d", 1),) + letters)
    e1 = estimate_fdtc(plain, 3, seed)
    e2 = estimate_fdtc(shifted, 3, seed)
    assert e2.low == e1.low + 1
    assert e2.high == e1.high + 1


def test_fdtc_double_boundary_twist(torus, base_word):
    base = torus.boundary_components[0][0]
    seed = arcs_from_base(torus, base, 4)[0]
    word = base_word.with_letters((("d", 2), ("a", 1), ("b", -1)))
    est = estimate_fdtc(word, 4, seed)
    assert est.low <= 2 <= est.high
