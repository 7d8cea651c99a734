import pytest
from itertools import product

from obd.surface import standard_surface, subdivide_boundary_edge, attach_band, BoundaryPoint
from obd.curves import (
    NormalCurveSystem, CurveError, validate, validate_weights,
    peripheral_curve, include_into_stabilized, equal,
)


def small_systems(surface, bound, cap=3):
    boundary = [surface.is_boundary_edge(e) for e in range(surface.num_edges)]
    out = []
    for w in product(range(cap + 1), repeat=surface.num_edges):
        if not 0 < sum(w) <= bound:
            continue
        if any(w[e] and boundary[e] for e in range(surface.num_edges)):
            continue
        try:
            validate_weights(surface, w)
        except CurveError:
            continue
        out.append(NormalCurveSystem.from_weights(surface, w))
    return out


@pytest.fixture(scope="module")
def torus():
    return standard_surface(1, 1)


def test_empty_vector_accepted(torus):
    sys = validate(torus, (0,) * torus.num_edges)
    assert sys.is_empty
    assert sys.kind == "empty"


def test_triangle_inequality_violation_reported(torus):
    w = [0] * torus.num_edges
    w[0] = 5
    with pytest.raises(CurveError) as err:
        validate(torus, tuple(w))
    assert "triangle" in str(err.value)


def test_peripheral_curve_flagged(torus):
    p = peripheral_curve(torus, 0)
    census = p.census()
    assert len(census) == 1
    assert census.entries[0].peripheral
    assert p.is_peripheral()


def test_trace_roundtrip(torus):
    for sys in small_systems(torus, 6):
        again = NormalCurveSystem.from_weights(torus, sys.weights)
        assert again == sys
        assert sum(e.weights[i] for e in sys.census().entries
                   for i in [0]) >= 0
        # component weights resum to the total
        totals = [0] * torus.num_edges
        for entry in sys.census().entries:
            totals = [a + b for a, b in zip(totals, entry.weights)]
        assert tuple(totals) == sys.weights


def test_canonical_idempotent(torus):
    for sys in small_systems(torus, 6):
        c1 = sys.canonical_form()
        assert c1 == sys
        assert c1.canonical_form() == c1


def test_drop_peripheral(torus):
    p = peripheral_curve(torus, 0)
    essential = NormalCurveSystem.from_weights(torus, (1, 0, 1, 0, 0))
    both = NormalCurveSystem.from_weights(
        torus, tuple(a + b for a, b in zip(p.weights, essential.weights)))
    assert len(both.components) == 2
    dropped = both.canonical_form(drop_peripheral=True)
    assert dropped == essential


def test_equal_requires_same_surface(torus):
    other = standard_surface(1, 2)
    a = NormalCurveSystem.empty(torus)
    b = NormalCurveSystem.empty(other)
    with pytest.raises(CurveError):
        equal(a, b)


def test_include_into_stabilized_preserves_closed(torus):
    essential = NormalCurveSystem.from_weights(torus, (1, 0, 1, 0, 0))
    comp = torus.boundary_components[0]
    s2, band, transfer = attach_band(
        torus, BoundaryPoint(comp[0], 0), BoundaryPoint(comp[0], 1))
    image = include_into_stabilized(essential, transfer)
    assert image.surface == s2
    assert image.total_weight() >= essential.total_weight()
    # included curves stay clear of the band cells
    for t in band.band_triangles:
        for j in range(3):
            e = s2.edge_of_slot[3 * t + j]
            assert image.weights[e] == 0
    # empty systems stay empty
    empty = NormalCurveSystem.empty(torus)
    assert include_into_stabilized(empty, transfer).is_empty


def test_include_commutes_with_canonical(torus):
    essential = NormalCurveSystem.from_weights(torus, (1, 1, 2, 1, 0))
    comp = torus.boundary_components[0]
    s2, _band, transfer = attach_band(
        torus, BoundaryPoint(comp[0], 0), BoundaryPoint(comp[0], 1))
    image = include_into_stabilized(essential, transfer)
    assert image.canonical_form() == image


def test_subdivision_preserves_class(torus):
    essential = NormalCurveSystem.from_weights(torus, (1, 1, 2, 1, 0))
    bslot = torus.boundary_components[0][0]
    s2, tr = subdivide_boundary_edge(torus, bslot)
    image = include_into_stabilized(essential, tr)
    assert image.total_weight() >= essential.total_weight()
    assert len(image.components) == 1
