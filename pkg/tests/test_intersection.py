import itertools

import pytest

from obd.surface import standard_surface
from obd.curves import NormalCurveSystem, peripheral_curve, make_arc
from obd.intersection import (
    geometric_intersection, complementary_region_census, fills, FillsError,
    Realization, arc_intersection_free_endpoints, arc_is_boundary_parallel,
    slide_arc_end,
)
from obd.curve_complex import farey_torus, enumerate_curves


@pytest.fixture(scope="module")
def torus():
    return standard_surface(1, 1)


@pytest.fixture(scope="module")
def ft(torus):
    return farey_torus(torus)


FAREY_SAMPLE = [(1, 0), (0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-3, 2), (3, 4), (-5, 3)]


def test_farey_oracle_sample(ft):
    for s1, s2 in itertools.combinations(FAREY_SAMPLE, 2):
        expect = abs(s1[0] * s2[1] - s1[1] * s2[0])
        assert geometric_intersection(ft.curve(*s1), ft.curve(*s2)) == expect


def test_symmetry_and_self(ft):
    curves = [ft.curve(*s) for s in FAREY_SAMPLE[:6]]
    for a, b in itertools.combinations(curves, 2):
        assert geometric_intersection(a, b) == geometric_intersection(b, a)
    for a in curves:
        assert geometric_intersection(a, a) == 0


def test_peripheral_is_disjoint_from_everything(torus, ft):
    p = peripheral_curve(torus, 0)
    for s in FAREY_SAMPLE:
        assert geometric_intersection(p, ft.curve(*s)) == 0


def test_census_crossings_match_fast_count(ft):
    for s1, s2 in itertools.combinations(FAREY_SAMPLE[:6], 2):
        a, b = ft.curve(*s1), ft.curve(*s2)
        census = complementary_region_census(a, b)
        assert census.crossings == geometric_intersection(a, b)


def test_census_euler_identity(torus, ft):
    # cutting along the union: sum of region Euler characteristics equals
    # chi(S) minus chi of the union graph (V=c, E=2c for closed systems)
    for s1, s2 in [((1, 0), (0, 1)), ((1, 1), (-1, 1)), ((2, 1), (1, 2))]:
        a, b = ft.curve(*s1), ft.curve(*s2)
        census = complementary_region_census(a, b)
        c = census.crossings
        assert census.euler_sum() == torus.euler_characteristic + c


def test_empty_census_is_whole_surface(torus):
    census = complementary_region_census(NormalCurveSystem.empty(torus))
    assert len(census.regions) == 1
    region = census.regions[0]
    assert region.euler == torus.euler_characteristic
    assert region.circles == torus.boundary_count


def test_fills_on_torus_basis(ft):
    ok, census = fills(ft.curve(1, 0), ft.curve(0, 1))
    assert ok
    assert census.all_disks_or_boundary_annuli()


def test_fills_rejects_peripheral(torus, ft):
    p = peripheral_curve(torus, 0)
    with pytest.raises(FillsError):
        fills(p, ft.curve(1, 0))


def test_disjoint_pair_does_not_fill():
    s = standard_surface(2, 1)
    curves = list(enumerate_curves(s, 8))
    found = None
    for a, b in itertools.combinations(curves, 2):
        if geometric_intersection(a, b) == 0:
            found = (a, b)
            break
    assert found is not None
    ok, _census = fills(*found)
    assert not ok


def test_same_curve_does_not_fill(ft):
    a = ft.curve(1, 0)
    ok, _ = fills(a, a)
    assert not ok


def test_parallel_copies_intersect_zero(torus):
    a = NormalCurveSystem.from_weights(torus, (1, 0, 1, 0, 0))
    doubled = NormalCurveSystem.from_weights(torus, (2, 0, 2, 0, 0))
    assert geometric_intersection(a, doubled) == 0
    assert geometric_intersection(doubled, doubled) == 0


def test_multicurve_additivity(ft):
    a, b, c = ft.curve(1, 0), ft.curve(0, 1), ft.curve(1, 1)
    surface = a.surface
    union = NormalCurveSystem(surface, a.components + b.components)
    # a and b intersect once; the union against c meets i(a,c)+i(b,c)
    assert geometric_intersection(union, c) == (
        geometric_intersection(a, c) + geometric_intersection(b, c))


# -- arcs ------------------------------------------------------------------------


def test_arc_self_intersection_zero(torus):
    from obd.mcg import arcs_from_base
    base = torus.boundary_components[0][0]
    for arc in arcs_from_base(torus, base, 4):
        assert geometric_intersection(arc, arc) == 0


def test_free_endpoint_drops_removable_crossings(torus):
    from obd.mcg import arcs_from_base
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 4)
    for arc in arcs[:3]:
        free = arc_intersection_free_endpoints(arc, arc)
        assert free == 0


def test_parallel_pushoff_free_intersection_zero(torus):
    from obd.mcg import arcs_from_base
    base = torus.boundary_components[0][0]
    arcs = arcs_from_base(torus, base, 4)
    a = arcs[0]
    slid = slide_arc_end(torus, a.components[0], 1, 1)
    slid_sys = NormalCurveSystem(torus, [slid])
    assert arc_intersection_free_endpoints(a, slid_sys) == 0


def test_boundary_parallel_arc_detection():
    s = standard_surface(0, 2)
    # an arc cutting off a corner of a boundary edge's triangle is trivial;
    # enumerate small arcs and check at least one trivial and one essential
    from obd.mcg import arcs_from_base
    base = s.boundary_components[0][0]
    arcs = arcs_from_base(s, base, 4)
    flags = [arc_is_boundary_parallel(a) for a in arcs]
    assert any(flags)
    comp0 = {a.components[0].end for a in arcs}
    # arcs reaching the other boundary component are essential
    other = set(s.boundary_components[1])
    for a, f in zip(arcs, flags):
        if a.components[0].end in other:
            assert not f
