import pytest

from obd.surface import (
    Surface, SurfaceError, BoundaryPoint,
    standard_surface, attach_band, subdivide_boundary_edge,
)


@pytest.mark.parametrize("genus,boundary,chi", [
    (0, 1, 1),
    (0, 2, 0),
    (0, 3, -1),
    (1, 1, -1),
    (1, 2, -2),
    (2, 1, -3),
    (2, 2, -4),
    (3, 1, -5),
])
def test_standard_surface_invariants(genus, boundary, chi):
    s = standard_surface(genus, boundary)
    assert s.genus == genus
    assert s.boundary_count == boundary
    assert s.euler_characteristic == chi
    assert s.num_vertices - s.num_edges + s.num_triangles == chi


def test_standard_surface_deterministic():
    a = standard_surface(2, 2)
    b = standard_surface(2, 2)
    assert a.glue == b.glue


def test_gluing_is_involution_and_oriented():
    s = standard_surface(2, 1)
    for slot, p in enumerate(s.glue):
        if p != -1:
            assert s.glue[p] == slot
            assert p != slot


def test_boundary_components_partition_boundary_slots():
    s = standard_surface(1, 2)
    slots = [x for comp in s.boundary_components for x in comp]
    assert sorted(slots) == sorted(x for x in range(len(s.glue)) if s.glue[x] == -1)


def test_attach_band_same_component_splits():
    s = standard_surface(1, 1)
    comp = s.boundary_components[0]
    s2, band, _ = attach_band(s, BoundaryPoint(comp[0], 0), BoundaryPoint(comp[0], 1))
    assert s2.euler_characteristic == s.euler_characteristic - 1
    assert s2.boundary_count == 2
    assert s2.genus == 1


def test_attach_band_distinct_components_merges():
    s = standard_surface(1, 2)
    c0 = s.boundary_components[0][0]
    c1 = s.boundary_components[1][0]
    s2, band, _ = attach_band(s, BoundaryPoint(c0, 0), BoundaryPoint(c1, 0))
    assert s2.euler_characteristic == -3
    assert s2.boundary_count == 1
    assert s2.genus == 2


def test_attach_band_rejects_coincident_points():
    s = standard_surface(1, 1)
    b = s.boundary_components[0][0]
    with pytest.raises(SurfaceError):
        attach_band(s, BoundaryPoint(b, 0), BoundaryPoint(b, 0))


def test_subdivide_preserves_invariants():
    s = standard_surface(1, 1)
    b = s.boundary_components[0][0]
    s2, tr = subdivide_boundary_edge(s, b)
    assert s2.euler_characteristic == s.euler_characteristic
    assert s2.boundary_count == s.boundary_count
    assert s2.genus == s.genus
    assert s2.num_triangles == s.num_triangles + 1


def test_band_triangles_and_feet_are_interior_after_attach():
    s = standard_surface(0, 1)
    comp = s.boundary_components[0]
    s2, band, _ = attach_band(s, BoundaryPoint(comp[0], 0), BoundaryPoint(comp[1], 0))
    assert s2.boundary_count == 2  # Hopf band annulus
    assert s2.genus == 0
    assert not s2.is_boundary_slot(band.bottom_slot)
    assert not s2.is_boundary_slot(band.top_slot)
    assert s2.is_boundary_slot(band.left_slot)
    assert s2.is_boundary_slot(band.right_slot)
    assert s2.glue[band.bottom_slot] == band.foot1_slot
    assert s2.glue[band.top_slot] == band.foot2_slot


def test_disk_flag():
    assert standard_surface(0, 1).is_disk
    assert standard_surface(0, 2).is_annulus
    assert not standard_surface(1, 1).is_disk
    assert standard_surface(1, 1).supports_curve_complex()
    assert not standard_surface(0, 2).supports_curve_complex()


def test_interior_vertex_rejected():
    # a tetrahedron boundary minus nothing would be closed; instead glue two
    # triangles along all three edges: a sphere-like complex with no boundary
    with pytest.raises(SurfaceError):
        Surface([3, 4, 5, 0, 1, 2])
