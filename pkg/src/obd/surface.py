"""Combinatorial oriented surfaces with boundary.

A surface is a collection of oriented triangles with some pairs of sides
glued.  Triangle ``t`` has three side slots ``3*t``, ``3*t+1``, ``3*t+2``;
slot ``3*t+i`` runs from corner ``i`` to corner ``i+1`` (mod 3) and the
corners of every triangle are listed counterclockwise, so the gluing of two
slots is automatically orientation compatible (the two traversals of a glued
edge are opposite).

All vertices lie on the boundary.  This is the key structural property the
curve machinery relies on: the dual graph of the triangulation lifted to the
universal cover is a tree, which makes reduced crossing sequences canonical.

Boundary edges inherit the boundary orientation of the surface (surface on
the left), because a boundary slot is traversed counterclockwise in its
triangle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


class SurfaceError(ValueError):
    pass


def _check_involution(glue):
    for s, p in enumerate(glue):
        if p == -1:
            continue
        if p == s or not (0 <= p < len(glue)) or glue[p] != s:
            raise SurfaceError("gluing table is not a fixed-point-free involution at slot %d" % s)


class Surface:
    """An oriented triangulated surface with nonempty boundary.

    ``glue[slot]`` is the partner slot across that edge, or -1 for a
    boundary slot.  Everything else (edges, boundary components, Euler
    characteristic, genus) is derived.  Instances are immutable.
    """

    def __init__(self, glue):
        glue = tuple(glue)
        if len(glue) % 3 != 0:
            raise SurfaceError("slot table length must be a multiple of 3")
        _check_involution(glue)
        self.glue = glue
        self.num_triangles = len(glue) // 3
        # Edge ids in order of their smallest slot.
        edge_of_slot = [-1] * len(glue)
        edges = []
        for s, p in enumerate(glue):
            if edge_of_slot[s] != -1:
                continue
            edge_of_slot[s] = len(edges)
            if p != -1:
                edge_of_slot[p] = len(edges)
            edges.append((s, p if p != -1 else None))
        self.edge_of_slot = tuple(edge_of_slot)
        self.edges = tuple(edges)
        self.num_edges = len(edges)
        if not any(b is None for _, b in edges):
            raise SurfaceError("surface must have nonempty boundary")
        self._check_vertices_on_boundary()

    # -- basic slot navigation -------------------------------------------------

    @staticmethod
    def tri(slot):
        return slot // 3

    @staticmethod
    def next_in_tri(slot):
        return (slot // 3) * 3 + (slot % 3 + 1) % 3

    @staticmethod
    def prev_in_tri(slot):
        return (slot // 3) * 3 + (slot % 3 + 2) % 3

    def is_boundary_slot(self, slot):
        return self.glue[slot] == -1

    def is_boundary_edge(self, edge):
        return self.edges[edge][1] is None

    def slots_of_edge(self, edge):
        a, b = self.edges[edge]
        return (a,) if b is None else (a, b)

    def edge_weight_is_boundary(self):
        return tuple(self.is_boundary_edge(e) for e in range(self.num_edges))

    # -- vertex fans -----------------------------------------------------------

    def fan_walk(self, boundary_slot):
        """Walk the triangle fan at the head vertex of ``boundary_slot``.

        Returns ``(crossed, next_boundary_slot)`` where ``crossed`` is the
        list of interior slots crossed in order.  Crossing slot ``s`` means
        leaving the current triangle through s; the walk turns around the
        vertex until it runs into the next boundary edge.
        """
        if not self.is_boundary_slot(boundary_slot):
            raise SurfaceError("fan_walk starts at a boundary slot")
        crossed = []
        s = self.next_in_tri(boundary_slot)
        while not self.is_boundary_slot(s):
            crossed.append(s)
            s = self.next_in_tri(self.glue[s])
        return crossed, s

    @cached_property
    def boundary_components(self):
        """Tuple of boundary components, each a tuple of boundary slots in
        boundary-orientation order, starting at the smallest slot."""
        seen = set()
        components = []
        for s0 in range(len(self.glue)):
            if self.glue[s0] != -1 or s0 in seen:
                continue
            cycle = []
            s = s0
            while s not in seen:
                seen.add(s)
                cycle.append(s)
                _, s = self.fan_walk(s)
            components.append(tuple(cycle))
        return tuple(components)

    @cached_property
    def boundary_count(self):
        return len(self.boundary_components)

    def boundary_component_of_slot(self, slot):
        for i, comp in enumerate(self.boundary_components):
            if slot in comp:
                return i
        raise SurfaceError("slot %d is not a boundary slot" % slot)

    # -- global invariants -----------------------------------------------------

    @cached_property
    def num_vertices(self):
        parent = list(range(len(self.glue)))  # corner c of t <-> slot id 3t+c (corner = tail of slot)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for s, p in enumerate(self.glue):
            if p == -1:
                continue
            # tail of s == head of p, head of s == tail of p
            union(s, self.next_in_tri(p))
            union(self.next_in_tri(s), p)
        return len({find(x) for x in range(len(self.glue))})

    def _check_vertices_on_boundary(self):
        # Every vertex orbit must contain the corner of some boundary slot.
        parent = list(range(len(self.glue)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for s, p in enumerate(self.glue):
            if p == -1:
                continue
            union(s, self.next_in_tri(p))
            union(self.next_in_tri(s), p)
        on_boundary = set()
        for s, p in enumerate(self.glue):
            if p == -1:
                on_boundary.add(find(s))
                on_boundary.add(find(self.next_in_tri(s)))
        for x in range(len(self.glue)):
            if find(x) not in on_boundary:
                raise SurfaceError("surface has an interior vertex; all vertices must lie on the boundary")

    @cached_property
    def euler_characteristic(self):
        return self.num_vertices - self.num_edges + self.num_triangles

    @cached_property
    def genus(self):
        chi = self.euler_characteristic
        g2 = 2 - self.boundary_count - chi
        if g2 % 2 != 0 or g2 < 0:
            raise SurfaceError("inconsistent Euler characteristic")
        return g2 // 2

    @property
    def is_disk(self):
        return self.genus == 0 and self.boundary_count == 1

    @property
    def is_annulus(self):
        return self.genus == 0 and self.boundary_count == 2

    def supports_curve_complex(self):
        """True when the surface carries essential curve-complex machinery.

        The disk and the annulus have no essential simple closed curves; the
        once-holed torus is handled separately (Farey convention).
        """
        return not (self.is_disk or self.is_annulus)

    def __repr__(self):
        return "Surface(genus=%d, boundary=%d, triangles=%d)" % (
            self.genus, self.boundary_count, self.num_triangles)

    def __eq__(self, other):
        return isinstance(other, Surface) and self.glue == other.glue

    def __hash__(self):
        return hash(self.glue)

    def describe(self):
        lines = ["surface genus %d boundary %d" % (self.genus, self.boundary_count),
                 "triangles %d edges %d vertices %d chi %d" % (
                     self.num_triangles, self.num_edges, self.num_vertices,
                     self.euler_characteristic)]
        for e, (a, b) in enumerate(self.edges):
            kind = "boundary" if b is None else "interior"
            slots = "slot %d" % a if b is None else "slots %d,%d" % (a, b)
            lines.append("edge e%d %s %s" % (e, kind, slots))
        for i, comp in enumerate(self.boundary_components):
            lines.append("boundary %d slots %s" % (i, ",".join(str(s) for s in comp)))
        return "\n".join(lines)


def euler_characteristic(surface):
    return surface.euler_characteristic


# -- construction ---------------------------------------------------------------


def _polygon_fan_surface(genus):
    """One-boundary surface of the given genus from a fan-triangulated polygon.

    The polygon has sides a1 b1 a1' b1' ... ag bg ag' bg' f; the primed sides
    are glued to their partners with reversal and f stays free.  The fan is
    taken from vertex 0.  All corners land on the boundary.
    """
    n = 4 * genus + 1
    num_tri = n - 2
    glue = [-1] * (3 * num_tri)

    def set_glue(a, b):
        glue[a] = b
        glue[b] = a

    # Triangle k (0-based) has corners (V0, V_{k+1}, V_{k+2}):
    #   slot0 = diagonal V0->V_{k+1}   (for k=0 this is polygon edge e0)
    #   slot1 = polygon edge e_{k+1}
    #   slot2 = diagonal V_{k+2}->V0   (for k=num_tri-1 this is polygon edge e_{n-1})
    for k in range(num_tri - 1):
        set_glue(3 * k + 2, 3 * (k + 1) + 0)

    def polygon_slot(i):
        # slot carrying polygon edge e_i (traversed forward, V_i -> V_{i+1})
        if i == 0:
            return 0
        if i == n - 1:
            return 3 * (num_tri - 1) + 2
        return 3 * (i - 1) + 1

    for h in range(genus):
        set_glue(polygon_slot(4 * h), polygon_slot(4 * h + 2))
        set_glue(polygon_slot(4 * h + 1), polygon_slot(4 * h + 3))
    return Surface(glue)


def standard_surface(genus, boundary):
    """Deterministic triangulation of the oriented surface of the given genus
    and number of boundary components.

    Genus g with one boundary component comes from a fan-triangulated
    (4g+1)-gon with commutator-pattern side gluings; every further boundary
    component is produced by attaching a splitting band to the last boundary
    component.  Same inputs always give the identical labeled complex.
    """
    if genus < 0 or boundary < 1:
        raise SurfaceError("need genus >= 0 and at least one boundary component")
    if genus == 0:
        surface = Surface([-1, -1, -1])  # triangle = disk
    else:
        surface = _polygon_fan_surface(genus)
    for _ in range(boundary - 1):
        comp = surface.boundary_components[-1]
        if len(comp) >= 2:
            end1 = BoundaryPoint(comp[0], 0)
            end2 = BoundaryPoint(comp[1], 0)
        else:
            end1 = BoundaryPoint(comp[0], 0)
            end2 = BoundaryPoint(comp[0], 1)
        surface, _band, _tr = attach_band(surface, end1, end2)
    return surface


# -- boundary subdivision and band attachment ------------------------------------


@dataclass(frozen=True)
class BoundaryPoint:
    """A point in the interior of a boundary edge.

    ``index`` counts how many marked positions of the transported system sit
    strictly before the point along the slot direction; two BoundaryPoints on
    the same slot are ordered by index.
    """
    slot: int
    index: int


class Transfer:
    """Rewrites crossing sequences of curves/arcs from an old surface into a
    new one produced by subdivision or band attachment."""

    def __init__(self, old_surface, new_surface):
        self.old = old_surface
        self.new = new_surface

    def map_closed(self, slots):
        raise NotImplementedError

    def map_arc(self, start, mids, end, start_piece=0, end_piece=0):
        raise NotImplementedError


class IdentityTransfer(Transfer):
    def map_closed(self, slots):
        return tuple(slots)

    def map_arc(self, start, mids, end, start_piece=0, end_piece=0):
        return start, tuple(mids), end


class ChainTransfer(Transfer):
    """Composite of transfer steps.

    Arc transport through a chain keeps endpoints on piece 0 whenever a step
    splits their edge; code that needs finer control (stabilization placing
    an arc end on a specific piece) applies the steps one by one.
    """

    def __init__(self, steps):
        super().__init__(steps[0].old, steps[-1].new)
        self.steps = tuple(steps)

    def map_closed(self, slots):
        for step in self.steps:
            slots = step.map_closed(slots)
        return tuple(slots)

    def map_arc(self, start, mids, end, start_piece=0, end_piece=0):
        for step in self.steps:
            start, mids, end = step.map_arc(start, mids, end, start_piece, end_piece)
            start_piece = end_piece = 0
        return start, tuple(mids), end

    def splits(self, slot):
        for step in self.steps:
            if step.splits(slot):
                return True
            slot = step.boundary_slot_image(slot)
        return False

    def boundary_slot_image(self, slot, piece=0):
        for step in self.steps:
            slot = step.boundary_slot_image(slot, piece)
            piece = 0
        return slot


class SubdivisionTransfer(Transfer):
    """Transfer across the split of one boundary edge.

    The split triangle t (boundary side b = slot i, next side n = slot i+1,
    previous side p = slot i+2) becomes t1 = (b1, d, p) in place of t and
    t2 = (b2, n, d~) appended at the end.
    """

    def __init__(self, old_surface, new_surface, tri, i):
        super().__init__(old_surface, new_surface)
        self.tri_index = tri
        self.i = i
        self.b = 3 * tri + i
        self.n = 3 * tri + (i + 1) % 3
        self.p = 3 * tri + (i + 2) % 3
        t2 = new_surface.num_triangles - 1
        self.t1_b1 = 3 * tri + 0
        self.t1_d = 3 * tri + 1
        self.t1_p = 3 * tri + 2
        self.t2_b2 = 3 * t2 + 0
        self.t2_n = 3 * t2 + 1
        self.t2_d = 3 * t2 + 2

    def splits(self, slot):
        return slot == self.b

    def boundary_slot_image(self, slot, piece=0):
        if slot == self.b:
            return self.t1_b1 if piece == 0 else self.t2_b2
        return self._plain(slot)

    def _plain(self, slot):
        # slots of untouched triangles keep their ids; sides n, p of t move.
        if slot == self.n:
            return self.t2_n
        if slot == self.p:
            return self.t1_p
        if slot // 3 == self.tri_index:
            raise SurfaceError("unmapped slot of the split triangle")
        return slot

    # sides of the split triangle in the new complex, as region tags
    _T1, _T2 = 0, 1

    def _side_region(self, side, piece):
        if side == self.b:
            return self._T1 if piece == 0 else self._T2
        if side == self.p:
            return self._T1
        if side == self.n:
            return self._T2
        raise SurfaceError("not a side of the split triangle")

    def _cross_between(self, region_from, region_to):
        if region_from == region_to:
            return []
        if region_from == self._T1:
            return [self.t1_d]
        return [self.t2_d]

    def map_closed(self, slots):
        out = []
        k = len(slots)
        for idx, s in enumerate(slots):
            if s // 3 != self.tri_index:
                out.append(s)
                continue
            # chord through t from the side entered to side s (n or p)
            prev = slots[idx - 1]
            entry = self.old.glue[prev]
            out.extend(self._cross_between(self._side_region(entry, 0), self._side_region(s, 0)))
            out.append(self._plain(s))
        return tuple(out)

    def map_arc(self, start, mids, end, start_piece=0, end_piece=0):
        events = [("start", start, start_piece)]
        events += [("mid", s, 0) for s in mids]
        events.append(("end", end, end_piece))
        out = []
        for idx in range(1, len(events)):
            kind, s, piece = events[idx]
            pkind, ps, ppiece = events[idx - 1]
            if s // 3 != self.tri_index:
                if kind == "mid":
                    out.append(s)
                continue
            # the chord lives in t; find the entry side of t
            if pkind == "start":
                entry, entry_piece = ps, ppiece
            else:
                entry, entry_piece = self.old.glue[ps], 0
            crossings = self._cross_between(self._side_region(entry, entry_piece),
                                            self._side_region(s, piece))
            out.extend(crossings)
            if kind == "mid":
                out.append(self._plain(s))
        new_start = self.boundary_slot_image(start, start_piece) if self.splits(start) else (
            self._plain(start) if start // 3 == self.tri_index else start)
        new_end = self.boundary_slot_image(end, end_piece) if self.splits(end) else (
            self._plain(end) if end // 3 == self.tri_index else end)
        return new_start, tuple(out), new_end


def subdivide_boundary_edge(surface, boundary_slot):
    """Split a boundary edge in two, returning (new_surface, transfer).

    Arc endpoints on the split edge are assigned to a piece through the
    transfer's piece arguments: piece 0 is the tail piece b1 (before the new
    vertex), piece 1 the head piece b2.
    """
    if not surface.is_boundary_slot(boundary_slot):
        raise SurfaceError("can only subdivide a boundary edge")
    t, i = boundary_slot // 3, boundary_slot % 3
    n_old = 3 * t + (i + 1) % 3
    p_old = 3 * t + (i + 2) % 3
    f = surface.num_triangles
    glue = list(surface.glue) + [-1, -1, -1]
    t1_b1, t1_d, t1_p = 3 * t + 0, 3 * t + 1, 3 * t + 2
    t2_b2, t2_n, t2_d = 3 * f + 0, 3 * f + 1, 3 * f + 2
    gn = surface.glue[n_old]
    gp = surface.glue[p_old]
    glue[t1_b1] = -1
    glue[t2_b2] = -1
    glue[t1_d] = t2_d
    glue[t2_d] = t1_d
    glue[t1_p] = gp
    if gp != -1:
        glue[gp] = t1_p
    glue[t2_n] = gn
    if gn != -1:
        glue[gn] = t2_n
    new_surface = Surface(glue)
    return new_surface, SubdivisionTransfer(surface, new_surface, t, i)


@dataclass(frozen=True)
class BandData:
    """Cells and distinguished curves of an attached band.

    The band is the square [-1,1] x [-1,1]: the bottom side is glued to the
    first attachment edge, the top side to the second, and the left/right
    sides become new boundary edges.  The co-core runs left to right across
    the diagonal used to triangulate the square.
    """
    band_triangles: tuple        # (T1, T2)
    bottom_slot: int             # slot of T1 glued to the first foot
    top_slot: int                # slot of T2 glued to the second foot
    right_slot: int              # new boundary slot of T1
    left_slot: int               # new boundary slot of T2
    diag_exit_from_t1: int       # slot of T1 carrying the diagonal
    diag_exit_from_t2: int
    foot1_slot: int              # old-surface boundary slot of foot 1 (now interior)
    foot2_slot: int

    def cocore_data(self):
        """(start, mids, end) slot data for the co-core arc a."""
        return self.left_slot, (self.diag_exit_from_t2,), self.right_slot

    def core_closure_mids(self):
        """Exit slots closing an arc that ends on the two feet into a curve
        through the band: cross foot2, traverse the band, cross foot1."""
        return (self.foot2_slot, self.diag_exit_from_t2, self.bottom_slot)


class BandAttachTransfer(Transfer):
    """Band attachment away from existing data: slots keep their ids."""

    def map_closed(self, slots):
        return tuple(slots)

    def map_arc(self, start, mids, end, start_piece=0, end_piece=0):
        return start, tuple(mids), end

    def splits(self, slot):
        return False

    def boundary_slot_image(self, slot, piece=0):
        return slot


def _attach_band_at_feet(surface, foot1_slot, foot2_slot):
    """Glue the band square onto two whole boundary edges."""
    if foot1_slot == foot2_slot:
        raise SurfaceError("band feet must be distinct")
    for s in (foot1_slot, foot2_slot):
        if not surface.is_boundary_slot(s):
            raise SurfaceError("band feet must be boundary edges")
    f = surface.num_triangles
    glue = list(surface.glue) + [-1] * 6
    # T1 = (P1, Q1, Q2): slot0 bottom, slot1 right, slot2 diag (Q2->P1)
    # T2 = (P1, Q2, P2): slot0 diag (P1->Q2), slot1 top, slot2 left
    t1_bottom, t1_right, t1_diag = 3 * f + 0, 3 * f + 1, 3 * f + 2
    t2_diag, t2_top, t2_left = 3 * (f + 1) + 0, 3 * (f + 1) + 1, 3 * (f + 1) + 2
    glue[t1_diag] = t2_diag
    glue[t2_diag] = t1_diag
    glue[t1_bottom] = foot1_slot
    glue[foot1_slot] = t1_bottom
    glue[t2_top] = foot2_slot
    glue[foot2_slot] = t2_top
    new_surface = Surface(glue)
    band = BandData(
        band_triangles=(f, f + 1),
        bottom_slot=t1_bottom,
        top_slot=t2_top,
        right_slot=t1_right,
        left_slot=t2_left,
        diag_exit_from_t1=t1_diag,
        diag_exit_from_t2=t2_diag,
        foot1_slot=foot1_slot,
        foot2_slot=foot2_slot,
    )
    return new_surface, band, BandAttachTransfer(surface, new_surface)


def attach_band(surface, end1, end2):
    """Attach a 1-handle at two boundary points.

    Each end is a :class:`BoundaryPoint`.  The host boundary edges are split
    so the attachment happens along fresh edges whose interiors contain the
    chosen points; existing edge labels of the surface persist through the
    splits.  Returns ``(new_surface, band_data, transfer)``.
    """
    if not isinstance(end1, BoundaryPoint) or not isinstance(end2, BoundaryPoint):
        raise SurfaceError("band ends must be BoundaryPoints")
    if end1.slot == end2.slot and end1.index == end2.index:
        raise SurfaceError("band ends must be distinct points")

    transfers = []
    cur = surface

    def isolate(slot):
        """Bracket a point of the edge with two splits; the point ends up
        alone in the interior of the middle piece, whose slot is returned
        together with the slot of the tail piece after it."""
        nonlocal cur
        cur, tr1 = subdivide_boundary_edge(cur, slot)
        transfers.append(tr1)
        after = tr1.boundary_slot_image(slot, piece=1)
        cur, tr2 = subdivide_boundary_edge(cur, after)
        transfers.append(tr2)
        foot = tr2.boundary_slot_image(after, piece=0)
        tail = tr2.boundary_slot_image(after, piece=1)
        return foot, tail

    if end1.slot != end2.slot:
        foot1, _ = isolate(end1.slot)
        slot2 = end2.slot
        for tr in transfers:
            slot2 = tr.boundary_slot_image(slot2)
        foot2, _ = isolate(slot2)
    else:
        swapped = end1.index > end2.index
        foot_a, tail = isolate(end1.slot)
        foot_b, _ = isolate(tail)
        foot1, foot2 = (foot_b, foot_a) if swapped else (foot_a, foot_b)

    new_surface, band, btr = _attach_band_at_feet(cur, foot1, foot2)
    transfers.append(btr)
    return new_surface, band, ChainTransfer(transfers)
