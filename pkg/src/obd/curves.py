"""Normal coordinates for multicurves and multiarcs.

A system is stored two ways at once: as a non-negative integer weight per
edge (crossings for interior edges, arc endpoints for boundary edges) and as
the traced components, each a reduced sequence of exit slots.  Because every
vertex of the triangulation lies on the boundary, the dual graph of the
universal cover is a tree, so a component's reduced sequence is the unique
taut representative of its isotopy class and the weight vector is a complete
invariant.  Equality of systems is therefore plain equality of weight
vectors.

Arc components are considered up to isotopies that keep each endpoint in the
interior of its boundary edge; sliding endpoints across vertices is a
different operation (see the free-endpoint intersection routines).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from obd.surface import Surface


class CurveError(ValueError):
    pass


# -- components ------------------------------------------------------------------


def reduce_arc_slots(surface, mids):
    """Remove backtracks (crossing an edge and immediately recrossing it)."""
    out = []
    for s in mids:
        if out and surface.glue[out[-1]] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def reduce_closed_slots(surface, slots):
    """Cyclically reduce a closed exit-slot sequence."""
    out = list(reduce_arc_slots(surface, slots))
    while len(out) >= 2 and surface.glue[out[-1]] == out[0]:
        out.pop()
        out.pop(0)
    if len(out) == 0:
        raise CurveError("closed component reduced to nothing; it was not essential")
    return tuple(out)


@dataclass(frozen=True)
class ClosedComponent:
    slots: tuple

    @property
    def is_closed(self):
        return True

    def canonical_cycle(self, surface):
        """Rotation- and reversal-invariant form of the cyclic sequence."""
        fwd = self.slots
        rev = tuple(surface.glue[s] for s in reversed(fwd))
        candidates = []
        for seq in (fwd, rev):
            n = len(seq)
            candidates.extend(seq[i:] + seq[:i] for i in range(n))
        return min(candidates)

    def weight_contribution(self, surface, weights):
        for s in self.slots:
            weights[surface.edge_of_slot[s]] += 1


@dataclass(frozen=True)
class ArcComponent:
    start: int   # boundary slot holding the initial endpoint
    mids: tuple  # exit slots of the interior crossings, in order
    end: int     # boundary slot holding the final endpoint

    @property
    def is_closed(self):
        return False

    def reversed(self, surface):
        return ArcComponent(self.end, tuple(surface.glue[s] for s in reversed(self.mids)), self.start)

    def canonical(self, surface):
        a = (self.start, self.mids, self.end)
        r = self.reversed(surface)
        b = (r.start, r.mids, r.end)
        return min(a, b)

    def weight_contribution(self, surface, weights):
        weights[surface.edge_of_slot[self.start]] += 1
        weights[surface.edge_of_slot[self.end]] += 1
        for s in self.mids:
            weights[surface.edge_of_slot[s]] += 1


def make_closed(surface, slots):
    return ClosedComponent(reduce_closed_slots(surface, slots))

def make_arc(surface, start, mids, end):
    if surface.glue[start] != -1 or surface.glue[end] != -1:
        raise CurveError("arc endpoints must lie on boundary edges")
    mids = reduce_arc_slots(surface, mids)
    for s in mids:
        if surface.glue[s] == -1:
            raise CurveError("arc interior cannot cross a boundary edge")
    return ArcComponent(start, mids, end)


# -- triangle-local normal structure ----------------------------------------------


def corner_counts(surface, weights, tri):
    """Per-corner chord counts of a triangle, or a CurveError naming it."""
    w = [weights[surface.edge_of_slot[3 * tri + j]] for j in range(3)]
    if (w[0] + w[1] + w[2]) % 2 != 0:
        raise CurveError("odd weight sum in triangle %d" % tri)
    n = []
    for j in range(3):
        nj = (w[(j + 2) % 3] + w[j] - w[(j + 1) % 3]) // 2
        if nj < 0:
            raise CurveError("triangle inequality fails in triangle %d" % tri)
        n.append(nj)
    return n


def through_triangle(surface, weights, slot, pos):
    """Follow the chord entering at (slot, pos) across its triangle.

    Positions run 1..w along the slot direction.  Returns (slot', pos') of
    the chord's other end inside the same triangle.
    """
    tri = slot // 3
    j = slot % 3
    n = corner_counts(surface, weights, tri)
    w_here = weights[surface.edge_of_slot[slot]]
    if not 1 <= pos <= w_here:
        raise CurveError("position out of range")
    if pos <= n[j]:
        other = 3 * tri + (j + 2) % 3
        w_other = weights[surface.edge_of_slot[other]]
        return other, w_other - pos + 1
    chord = w_here - pos + 1  # numbered from the far corner
    other = 3 * tri + (j + 1) % 3
    return other, chord


def cross_edge(surface, weights, slot, pos):
    """Cross an interior edge: the same point seen from the partner slot."""
    partner = surface.glue[slot]
    if partner == -1:
        raise CurveError("cannot cross a boundary edge")
    w = weights[surface.edge_of_slot[slot]]
    return partner, w - pos + 1


# -- tracing ----------------------------------------------------------------------


def _point_id(surface, weights, slot, pos):
    e = surface.edge_of_slot[slot]
    a, _b = surface.edges[e]
    if slot == a:
        return (e, pos)
    return (e, weights[e] - pos + 1)


def trace_components(surface, weights):
    """Decompose a valid weight vector into components, deterministically.

    Arcs are traced first (scanning boundary edges in id order, positions
    ascending), then closed components (scanning interior edges the same
    way).  The traced realization is the standard nested one, so the
    resulting exit-slot sequences need no reduction.
    """
    weights = list(weights)
    validate_weights(surface, weights)
    visited = set()
    components = []

    def walk_from(slot, pos):
        """Follow the strand from an incidence into its triangle."""
        seq = []
        start_incidence = (slot, pos)
        while True:
            visited.add(_point_id(surface, weights, slot, pos))
            slot2, pos2 = through_triangle(surface, weights, slot, pos)
            if surface.glue[slot2] == -1:
                visited.add(_point_id(surface, weights, slot2, pos2))
                return seq, (slot2, pos2), False
            seq.append(slot2)
            slot, pos = cross_edge(surface, weights, slot2, pos2)
            if (slot, pos) == start_incidence:
                return seq, None, True

    # arcs from boundary endpoints
    for e in range(surface.num_edges):
        if not surface.is_boundary_edge(e):
            continue
        slot = surface.edges[e][0]
        for pos in range(1, weights[e] + 1):
            if (e, pos) in visited:
                continue
            seq, end_incidence, closed = walk_from(slot, pos)
            assert not closed
            components.append(ArcComponent(slot, tuple(seq), end_incidence[0]))

    # closed components from interior edges
    for e in range(surface.num_edges):
        if surface.is_boundary_edge(e):
            continue
        slot = surface.edges[e][0]
        for pos in range(1, weights[e] + 1):
            if (e, pos) in visited:
                continue
            seq, _end, closed = walk_from(slot, pos)
            assert closed
            components.append(ClosedComponent(tuple(seq)))

    return tuple(components)


def validate_weights(surface, weights):
    if len(weights) != surface.num_edges:
        raise CurveError("expected %d weights, got %d" % (surface.num_edges, len(weights)))
    if any(w < 0 or int(w) != w for w in weights):
        raise CurveError("weights must be non-negative integers")
    for tri in range(surface.num_triangles):
        corner_counts(surface, weights, tri)


def weights_of_components(surface, components):
    weights = [0] * surface.num_edges
    for c in components:
        c.weight_contribution(surface, weights)
    return tuple(weights)


# -- peripheral curves --------------------------------------------------------------


def peripheral_slots(surface, component_index):
    """Cyclic exit-slot sequence of the curve parallel to a boundary
    component, oriented along the boundary orientation; None for a disk-like
    component whose parallel curve is contractible."""
    comp = surface.boundary_components[component_index]
    slots = []
    for bslot in comp:
        crossed, _nxt = surface.fan_walk(bslot)
        slots.extend(crossed)
    if not slots:
        return None
    try:
        return reduce_closed_slots(surface, slots)
    except CurveError:
        return None


def peripheral_curve(surface, component_index):
    slots = peripheral_slots(surface, component_index)
    if slots is None:
        raise CurveError("boundary component %d has a contractible parallel curve" % component_index)
    return NormalCurveSystem.from_components(surface, [ClosedComponent(slots)])


# -- systems --------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    kind: str          # "closed" | "arc"
    peripheral: bool
    weights: tuple


@dataclass(frozen=True)
class ComponentCensus:
    entries: tuple

    def __len__(self):
        return len(self.entries)


class NormalCurveSystem:
    """A multicurve/multiarc in normal position, with exact equality."""

    def __init__(self, surface, components):
        self.surface = surface
        self.components = tuple(components)
        self.weights = weights_of_components(surface, self.components)

    @classmethod
    def from_weights(cls, surface, weights):
        comps = trace_components(surface, weights)
        sys = cls(surface, comps)
        if sys.weights != tuple(weights):
            raise CurveError("traced weights disagree with input")
        return sys

    @classmethod
    def from_components(cls, surface, components):
        reduced = []
        for c in components:
            if c.is_closed:
                reduced.append(make_closed(surface, c.slots))
            else:
                reduced.append(make_arc(surface, c.start, c.mids, c.end))
        return cls(surface, reduced)

    @classmethod
    def empty(cls, surface):
        return cls(surface, ())

    # -- structure

    @property
    def is_empty(self):
        return not self.components

    @cached_property
    def kind(self):
        kinds = {("closed" if c.is_closed else "arc") for c in self.components}
        if not kinds:
            return "empty"
        if len(kinds) == 2:
            return "mixed"
        return kinds.pop()

    @property
    def is_closed(self):
        return all(c.is_closed for c in self.components)

    def total_weight(self):
        return sum(self.weights)

    # -- census and canonical form

    @cached_property
    def _peripheral_flags(self):
        peripheral_forms = set()
        for i in range(self.surface.boundary_count):
            slots = peripheral_slots(self.surface, i)
            if slots is not None:
                peripheral_forms.add(ClosedComponent(slots).canonical_cycle(self.surface))
        flags = []
        for c in self.components:
            flags.append(c.is_closed and c.canonical_cycle(self.surface) in peripheral_forms)
        return tuple(flags)

    def census(self):
        entries = []
        for c, peripheral in zip(self.components, self._peripheral_flags):
            entries.append(CensusEntry(
                kind="closed" if c.is_closed else "arc",
                peripheral=peripheral,
                weights=weights_of_components(self.surface, [c]),
            ))
        return ComponentCensus(tuple(entries))

    def has_peripheral_component(self):
        return any(self._peripheral_flags)

    def is_peripheral(self):
        return bool(self.components) and all(self._peripheral_flags)

    def canonical_form(self, drop_peripheral=False):
        comps = self.components
        if drop_peripheral:
            comps = tuple(c for c, p in zip(comps, self._peripheral_flags) if not p)
        return NormalCurveSystem(self.surface, comps)

    def component_systems(self):
        return tuple(NormalCurveSystem(self.surface, (c,)) for c in self.components)

    @property
    def is_connected(self):
        return len(self.components) == 1

    # -- equality

    def same_surface(self, other):
        return self.surface is other.surface or self.surface == other.surface

    def __eq__(self, other):
        if not isinstance(other, NormalCurveSystem):
            return NotImplemented
        return self.same_surface(other) and self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return "NormalCurveSystem(%s, weights=%s)" % (self.kind, list(self.weights))


def validate(surface, weights):
    """Spec entry point: accept a weight vector as a NormalCurveSystem."""
    return NormalCurveSystem.from_weights(surface, weights)


def equal(a, b):
    if not a.same_surface(b):
        raise CurveError("systems live on different surfaces")
    return a.weights == b.weights


def include_into_stabilized(system, transfer, end_pieces=None):
    """Transport a system through a subdivision/band-attachment transfer.

    Closed systems transport exactly (same weights on surviving edges, zero
    on new ones).  Arcs keep endpoints on piece 0 of any split edge unless
    the caller says otherwise via ``end_pieces`` per component.
    """
    comps = []
    for i, c in enumerate(system.components):
        if c.is_closed:
            comps.append(ClosedComponent(transfer.map_closed(c.slots)))
        else:
            sp, ep = (0, 0) if end_pieces is None else end_pieces[i]
            s, m, e = transfer.map_arc(c.start, c.mids, c.end, sp, ep)
            comps.append(ArcComponent(s, m, e))
    return NormalCurveSystem.from_components(transfer.new, comps)
