import itertools

import pytest

from obd.surface import standard_surface
from obd.curves import NormalCurveSystem, peripheral_curve
from obd.intersection import geometric_intersection
from obd.curve_complex import (
    CurveComplexError, farey_torus, enumerate_curves,
    distance_small, distance_upper_bound, intersection_distance_bound,
)


@pytest.fixture(scope="module")
def torus():
    return standard_surface(1, 1)


@pytest.fixture(scope="module")
def genus2():
    return standard_surface(2, 1)


def test_enumeration_rejects_low_complexity():
    with pytest.raises(CurveComplexError):
        list(enumerate_curves(standard_surface(0, 2), 4))
    with pytest.raises(CurveComplexError):
        list(enumerate_curves(standard_surface(0, 1), 4))


def test_farey_enumeration_bijects_with_slopes(torus):
    ft = farey_torus(torus)
    curves = list(enumerate_curves(torus, 6))
    slopes = ft.slopes_up_to(6)
    assert len(curves) == len(slopes)
    assert len({c.weights for c in curves}) == len(curves)
    for c, s in zip(curves, slopes):
        assert c == ft.curve(*s)


def test_zero_bound_empty(genus2):
    assert list(enumerate_curves(genus2, 0)) == []


def test_enumeration_valid_and_nonperipheral(genus2):
    for c in enumerate_curves(genus2, 8):
        assert len(c.components) == 1
        assert not c.has_peripheral_component()
        assert sum(c.weights) <= 8


def test_distance_zero_and_one(genus2):
    curves = list(enumerate_curves(genus2, 8))
    a = curves[0]
    assert distance_small(a, a).value == "0"
    disjoint = None
    for b in curves[1:]:
        if geometric_intersection(a, b) == 0 and b != a:
            disjoint = b
            break
    assert disjoint is not None
    assert distance_small(a, disjoint).value == "1"


def test_distance_ge3_on_torus(torus):
    ft = farey_torus(torus)
    verdict = distance_small(ft.curve(1, 0), ft.curve(0, 1))
    assert verdict.value == "GE3"
    assert verdict.census is not None
    assert verdict.farey_flag


def test_distance_two_with_witness(genus2):
    curves = list(enumerate_curves(genus2, 8))
    found = None
    for a, b in itertools.combinations(curves, 2):
        if geometric_intersection(a, b) > 0:
            verdict = distance_small(a, b)
            if verdict.value == "2":
                found = (a, b, verdict)
                break
    assert found is not None
    a, b, verdict = found
    w = verdict.witness_curve
    assert geometric_intersection(w, a) == 0
    assert geometric_intersection(w, b) == 0
    assert not w.has_peripheral_component()


def test_peripheral_input_rejected(torus):
    ft = farey_torus(torus)
    p = peripheral_curve(torus, 0)
    with pytest.raises(CurveComplexError):
        distance_small(p, ft.curve(1, 0))


def test_intersection_distance_bound_formula(torus):
    ft = farey_torus(torus)
    assert intersection_distance_bound(ft.curve(1, 0), ft.curve(1, 0)) == 1
    assert intersection_distance_bound(ft.curve(1, 0), ft.curve(0, 1)) == 3
    assert intersection_distance_bound(ft.curve(1, 0), ft.curve(1, 3)) == 7


def test_bfs_disjoint_pair(genus2):
    curves = list(enumerate_curves(genus2, 8))
    a = curves[0]
    b = next(c for c in curves[1:] if geometric_intersection(a, c) == 0)
    assert distance_upper_bound(a, b, 8, 4) == 1


def test_bfs_respects_lemma_bound(genus2):
    curves = list(enumerate_curves(genus2, 6))
    for a, b in itertools.combinations(curves, 2):
        bound = distance_upper_bound(a, b, 8, 5)
        if bound is not None:
            assert bound <= intersection_distance_bound(a, b)
            assert bound >= (0 if a == b else 1)


def test_bfs_consistent_with_distance_class(genus2):
    curves = list(enumerate_curves(genus2, 6))
    for a, b in itertools.combinations(curves[:6], 2):
        bound = distance_upper_bound(a, b, 8, 5)
        if bound is None:
            continue
        verdict = distance_small(a, b)
        assert bound >= verdict.at_least() or verdict.value == "GE3"
        if verdict.value != "GE3":
            assert bound >= verdict.at_least()
