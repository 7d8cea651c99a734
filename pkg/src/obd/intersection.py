"""Exact geometric intersection numbers and complementary-region censuses.

Everything here works with the reduced exit-slot sequences of components.
Because the dual graph of the universal cover is a tree, a strand through an
edge is determined by its two divergence rays, and the transversal order of
strands along an edge can be computed by walking pairs of rays until they
diverge.  Sorting all strands this way yields a realization of the two
systems that is already in minimal position (no bigons: a pair of strands
swaps transversal order at most once), so crossing counts are read off
triangle by triangle and the complementary regions come from cutting along
that realization.  No isotopy search is ever performed.

Arc endpoints are pinned to their boundary edges.  When two distinct systems
have parallel arcs, endpoints of the first system come before endpoints of
the second along the boundary edge; this convention is what "fixed
endpoints" means for arc-arc intersection numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from obd.curves import CurveError, NormalCurveSystem

EXIT = 0
END = 1


class _Strand:
    """One component of a system, prepared for ray walks.

    Crossings are indexed 1..m for arcs (the mids) and 0..N-1 cyclically for
    closed components; arc anchors use pseudo-indices 0 (start) and m+1
    (end).
    """

    def __init__(self, surface, priority, comp_index, component):
        self.surface = surface
        self.priority = priority
        self.comp_index = comp_index
        self.component = component
        self.closed = component.is_closed
        if self.closed:
            self.slots = component.slots
            self.n = len(self.slots)
        else:
            self.slots = component.mids
            self.n = len(self.slots)
            self.start = component.start
            self.end = component.end

    def crossing_slot(self, pos):
        if self.closed:
            return self.slots[pos % self.n]
        return self.slots[pos - 1]

    def token(self, pos, direction, k):
        """The k-th departure token of the ray leaving crossing ``pos`` in
        ``direction``; k >= 1."""
        glue = self.surface.glue
        if self.closed:
            if direction > 0:
                return (EXIT, self.slots[(pos + k) % self.n])
            return (EXIT, glue[self.slots[(pos - k) % self.n]])
        if direction > 0:
            q = pos + k
            if q <= self.n:
                return (EXIT, self.slots[q - 1])
            if q == self.n + 1:
                return (END, self.end)
            raise IndexError
        q = pos - k
        if q >= 1:
            return (EXIT, glue[self.slots[q - 1]])
        if q == 0:
            return (END, self.start)
        raise IndexError

    def entry_slot(self, pos, direction):
        """Slot through which the ray leaving crossing ``pos`` enters its
        first triangle."""
        glue = self.surface.glue
        if self.closed:
            return glue[self.slots[pos % self.n]] if direction > 0 else self.slots[pos % self.n]
        if direction > 0:
            if pos == 0:
                return self.start  # ray out of the initial endpoint
            return glue[self.slots[pos - 1]]
        if pos == self.n + 1:
            return self.end      # ray out of the final endpoint
        return self.slots[pos - 1]

    def steps(self):
        """Chords of the component: (entry_incidence, exit_incidence) pairs.

        An incidence is (kind, pos, direction-into-the-triangle) where kind
        EXIT marks an edge crossing and END an arc endpoint.
        """
        out = []
        if self.closed:
            for i in range(self.n):
                out.append(((EXIT, (i - 1) % self.n), (EXIT, i)))
            return out
        prev = (END, 0)
        for i in range(1, self.n + 1):
            out.append((prev, (EXIT, i)))
            prev = (EXIT, i)
        out.append((prev, (END, self.n + 1)))
        return out

    def incidence_slot(self, inc, as_exit):
        """Edge slot of an incidence, from the side that matches ``as_exit``:
        exits are seen from the triangle being left, entries from the one
        being entered."""
        kind, pos = inc
        if kind == END:
            return self.start if pos == 0 else self.end
        slot = self.crossing_slot(pos)
        return slot if as_exit else self.surface.glue[slot]


class RayComparer:
    """Memoized divergence walks between rays of a fixed pair of strand
    families."""

    def __init__(self, surface):
        self.surface = surface
        self.memo = {}

    def _rank(self, entry_slot, token):
        """Counterclockwise position of a departure token as seen from the
        entry point: 0 lands on the side right after the entry side, 1 on
        the next one."""
        nxt = self.surface.next_in_tri(entry_slot)
        nxt2 = self.surface.next_in_tri(nxt)
        _kind, slot = token
        if slot == nxt:
            return 0
        if slot == nxt2:
            return 1
        raise CurveError("token %r does not lie in the triangle entered via %d" % (token, entry_slot))

    def _key(self, s1, p1, d1, s2, p2, d2):
        if s1.closed:
            p1 %= s1.n
        if s2.closed:
            p2 %= s2.n
        return (id(s1), p1, d1, id(s2), p2, d2)

    def compare(self, s1, p1, d1, s2, p2, d2):
        """Walk two rays entering the same triangle through the same edge
        until they diverge.

        Returns ``(sign, steps)``: sign is -1 when ray 1 diverges to the
        counterclockwise-earlier landing as seen from the shared entry point,
        +1 in the opposite case, 0 when the rays are parallel forever (or
        parallel until both terminate on a common boundary edge).  ``steps``
        is the index of the first differing token (1 = immediate divergence);
        it is 0 for parallel rays.
        """
        if s1.entry_slot(p1, d1) != s2.entry_slot(p2, d2):
            raise CurveError("rays do not enter the same triangle")
        cap = (s1.n + s2.n + 1) if (s1.closed and s2.closed) else None
        a, b = p1, p2
        entry = s1.entry_slot(p1, d1)
        chain = []
        k = 0
        while True:
            key = self._key(s1, a, d1, s2, b, d2)
            if key in self.memo:
                sign, rest = self.memo[key]
                if sign != 0:
                    rest += 1  # one equal token consumed reaching the memoized state
                break
            chain.append(key)
            k += 1
            if cap is not None and k > cap:
                sign, rest = 0, 0  # both periodic and aligned beyond the Fine-Wilf bound
                break
            t1 = s1.token(a, d1, 1)
            t2 = s2.token(b, d2, 1)
            if t1 == t2:
                if t1[0] == END:
                    sign, rest = 0, 0
                    break
                a += d1
                b += d2
                entry = self.surface.glue[t1[1]]
                continue
            r1 = self._rank(entry, t1)
            r2 = self._rank(entry, t2)
            if r1 == r2:
                raise CurveError("a side cannot be both crossed and terminal")
            sign, rest = (-1 if r1 < r2 else 1), 1
            break
        for back, key in enumerate(reversed(chain)):
            self.memo[key] = (sign, 0 if sign == 0 else rest + back)
        if not chain:
            return sign, 0 if sign == 0 else rest - 1
        return self.memo[self._key(s1, p1, d1, s2, p2, d2)]


# -- essential crossings by corridor conflicts ----------------------------------------


class Pair:
    """Two systems prepared for exact pairwise computations.

    Crossings are counted without choosing any realization: two strands
    crossing a common edge share a maximal corridor of triangles, and they
    intersect essentially (exactly once along that corridor) precisely when
    the transversal orders demanded by the divergences at the corridor's two
    ends disagree.  Each corridor is counted at its first alignment along
    the first strand.
    """

    def __init__(self, first, second=None):
        if second is None:
            second = NormalCurveSystem.empty(first.surface)
        if not first.same_surface(second):
            raise CurveError("systems live on different surfaces")
        self.surface = first.surface
        self.first = first
        self.second = second
        self.strands = []
        for priority, system in enumerate((first, second)):
            for ci, comp in enumerate(system.components):
                self.strands.append(_Strand(self.surface, priority, ci, comp))
        self.comparer = RayComparer(self.surface)

    def _crossing_positions(self, strand):
        return range(strand.n) if strand.closed else range(1, strand.n + 1)

    def _aligned(self, sa, i, sb, j):
        """Ray pairs for two strands crossing the same edge, or None.

        Returns ((fwd1, fwd2), (bwd1, bwd2)) where each pair enters a common
        triangle through the shared edge, on the two sides respectively.
        """
        xa = sa.slots[i % sa.n] if sa.closed else sa.slots[i - 1]
        xb = sb.slots[j % sb.n] if sb.closed else sb.slots[j - 1]
        if xa == xb:
            return ((sa, i, 1), (sb, j, 1)), ((sa, i, -1), (sb, j, -1))
        if xa == self.surface.glue[xb]:
            return ((sa, i, 1), (sb, j, -1)), ((sa, i, -1), (sb, j, 1))
        return None

    def _corridor_crossing(self, sa, i, sb, j):
        """(crosses, is_corridor_head) for an aligned position pair."""
        aligned = self._aligned(sa, i, sb, j)
        if aligned is None:
            return False, False
        (f1, f2), (b1, b2) = aligned
        fwd_sign, _fwd_steps = self.comparer.compare(*f1, *f2)
        bwd_sign, bwd_steps = self.comparer.compare(*b1, *b2)
        crosses = fwd_sign != 0 and fwd_sign == bwd_sign
        return crosses, bwd_steps == 1

    def crossings(self):
        """Essential crossings as (first strand, pos, second strand, pos),
        one per crossing corridor, located at the corridor's head."""
        out = []
        for sa in self.strands:
            if sa.priority != 0:
                continue
            for sb in self.strands:
                if sb.priority != 1:
                    continue
                for i in self._crossing_positions(sa):
                    ea = self.surface.edge_of_slot[sa.slots[i - 1 if not sa.closed else i % sa.n]]
                    for j in self._crossing_positions(sb):
                        eb = self.surface.edge_of_slot[sb.slots[j - 1 if not sb.closed else j % sb.n]]
                        if ea != eb:
                            continue
                        crosses, head = self._corridor_crossing(sa, i, sb, j)
                        if crosses and head:
                            out.append((sa, i, sb, j))
        return out

    def count(self):
        return len(self.crossings())


def geometric_intersection(alpha, beta):
    """Minimal transverse intersection count of two systems.

    Closed components meet in their geometric intersection number; arc
    endpoints are pinned to their boundary edges, with parallel arcs of the
    two systems stacked without crossings.
    """
    if alpha.is_empty or beta.is_empty:
        return 0
    return Pair(alpha, beta).count()


# -- explicit transverse realizations ---------------------------------------------


class Realization:
    """A concrete transverse picture of one or two systems.

    Each edge carries an ordered list of incidences ``(strand, (kind, pos))``
    along the direction of the edge's first slot.  The within-system order is
    the normal (taut) one; the two systems start out in blocks, which is a
    valid transverse position but generally not minimal.  ``tighten`` removes
    bigon faces by adjacent transpositions until the picture is minimal.
    """

    def __init__(self, first, second=None):
        self.pair = Pair(first, second)
        self.surface = self.pair.surface
        self.edge_lists = [[] for _ in range(self.surface.num_edges)]
        per_system = ([], [])
        for strand in self.pair.strands:
            for inc in self._incidences(strand):
                per_system[strand.priority].append((strand, inc))
        import functools
        for priority in (0, 1):
            by_edge = {}
            for item in per_system[priority]:
                e = self._edge_of_incidence(*item)
                by_edge.setdefault(e, []).append(item)
            for e, lst in by_edge.items():
                lst.sort(key=functools.cmp_to_key(
                    lambda a, b, _e=e: self._same_system_order(_e, a, b)))
                self.edge_lists[e].extend(lst)

    # incidence plumbing -------------------------------------------------------

    @staticmethod
    def _incidences(strand):
        out = []
        if strand.closed:
            out.extend((EXIT, i) for i in range(strand.n))
        else:
            out.append((END, 0))
            out.extend((EXIT, i) for i in range(1, strand.n + 1))
            out.append((END, strand.n + 1))
        return out

    def _edge_of_incidence(self, strand, inc):
        kind, pos = inc
        if kind == END:
            slot = strand.start if pos == 0 else strand.end
        else:
            slot = strand.slots[pos % strand.n] if strand.closed else strand.slots[pos - 1]
        return self.surface.edge_of_slot[slot]

    def _exit_slot(self, strand, inc):
        kind, pos = inc
        if kind == END:
            return strand.start if pos == 0 else strand.end
        return strand.slots[pos % strand.n] if strand.closed else strand.slots[pos - 1]

    def _rays(self, strand, inc, edge):
        """(R ray, L ray) of an incidence; R is the side of the partner of
        the edge's first slot.  Anchors have a single ray (on the L side for
        boundary edges)."""
        kind, pos = inc
        if kind == END:
            return None, (strand, pos, 1 if pos == 0 else -1)
        slot_a = self.surface.edges[edge][0]
        x = self._exit_slot(strand, inc)
        if x == slot_a:
            return (strand, pos, 1), (strand, pos, -1)
        return (strand, pos, -1), (strand, pos, 1)

    def _same_system_order(self, edge, a, b):
        """Order along the edge of two incidences of the same system (whose
        strands never cross): -1 when a comes first."""
        ra, la = self._rays(a[0], a[1], edge)
        rb, lb = self._rays(b[0], b[1], edge)
        if ra is not None and rb is not None:
            sign, _ = self.pair.comparer.compare(*ra, *rb)
            if sign != 0:
                return sign
        c, _ = self.pair.comparer.compare(*la, *lb)
        if c != 0:
            return -c
        return self._parallel_tie(edge, a, b)

    def _parallel_tie(self, edge, a, b):
        (s1, inc1), (s2, inc2) = a, b
        ka = (s1.priority, s1.comp_index, inc1)
        kb = (s2.priority, s2.comp_index, inc2)
        if ka == kb:
            raise CurveError("cannot order an incidence against itself")
        low, low_inc = (a if ka < kb else b)
        low_first_sign = -1 if ka < kb else 1
        kind, pos = low_inc
        if kind == END:
            # start anchors stack below, end anchors above, so a family of
            # parallel arcs never crosses itself
            return low_first_sign if pos == 0 else -low_first_sign
        slot_a = self.surface.edges[edge][0]
        x = self._exit_slot(low, low_inc)
        return low_first_sign if x == slot_a else -low_first_sign

    # geometry of the current picture -------------------------------------------

    def index_on_edge(self, strand, inc):
        e = self._edge_of_incidence(strand, inc)
        return e, self.edge_lists[e].index((strand, inc))

    def point_key(self, tri, strand, inc, entering):
        """Position of an incidence around the boundary of a triangle:
        (local side index, offset along that side in slot direction)."""
        kind, pos = inc
        if kind == END:
            side = self._exit_slot(strand, inc)
        else:
            x = self._exit_slot(strand, inc)
            side = self.surface.glue[x] if entering else x
        if side // 3 != tri:
            raise CurveError("incidence not on this triangle")
        e, idx = self.index_on_edge(strand, inc)
        n = len(self.edge_lists[e])
        if side != self.surface.edges[e][0]:
            idx = n - 1 - idx
        return (side % 3, idx)

    def steps_in_triangle(self, tri):
        out = []
        for strand in self.pair.strands:
            for (inc_in, inc_out) in strand.steps():
                if self._exit_slot(strand, inc_out) // 3 == tri:
                    out.append((strand, inc_in, inc_out))
        return out

    def chord_points(self, tri, step):
        strand, inc_in, inc_out = step
        p_in = self.point_key(tri, strand, inc_in, entering=True)
        p_out = self.point_key(tri, strand, inc_out, entering=False)
        return p_in, p_out

    @staticmethod
    def _in_ccw_arc(start, stop, q):
        if start == stop or q == start or q == stop:
            raise CurveError("degenerate point configuration")
        if start < stop:
            return start < q < stop
        return q > start or q < stop

    def chords_cross(self, tri, step_a, step_b):
        a1, a2 = self.chord_points(tri, step_a)
        b1, b2 = self.chord_points(tri, step_b)
        return self._in_ccw_arc(a1, a2, b1) != self._in_ccw_arc(a1, a2, b2)

    def crossing_sign(self, tri, step_a, step_b):
        """+1 when the second chord crosses the first from its right to its
        left (its source point lies in the ccw arc from the first chord's
        source to its target)."""
        a1, a2 = self.chord_points(tri, step_a)
        b1, _b2 = self.chord_points(tri, step_b)
        return 1 if self._in_ccw_arc(a1, a2, b1) else -1

    def crossings_in_triangle(self, tri):
        steps = self.steps_in_triangle(tri)
        out = []
        for i in range(len(steps)):
            for j in range(i + 1, len(steps)):
                if self.chords_cross(tri, steps[i], steps[j]):
                    out.append((steps[i], steps[j]))
        return out

    def total_crossings(self):
        return sum(len(self.crossings_in_triangle(t)) for t in range(self.surface.num_triangles))

    # tightening to minimal position -------------------------------------------

    def tighten(self):
        """Remove bigon faces by adjacent transpositions until minimal."""
        while True:
            complex_ = _CutComplex(self)
            bigon = complex_.find_bigon()
            if bigon is None:
                return complex_
            before = self.total_crossings()
            for edge, item_a, item_b in bigon:
                lst = self.edge_lists[edge]
                ia, ib = lst.index(item_a), lst.index(item_b)
                if abs(ia - ib) != 1:
                    raise CurveError("bigon strands not adjacent on edge %d" % edge)
                lst[ia], lst[ib] = lst[ib], lst[ia]
            after = self.total_crossings()
            if after >= before:
                raise CurveError("bigon removal failed to reduce crossings")


# -- complementary regions -------------------------------------------------------


SIDE = "side"
CHORD = "chord"


class _CutComplex:
    """Complementary regions of a realized picture.

    Each triangle is a small planar graph (corners, marked side points,
    crossings; side segments and chord segments); its faces are traced with
    the rotation-system rule, the outer face is dropped, and faces of
    neighbouring triangles are merged across interior side segments.  The
    result is the set of regions of the surface cut along the realized
    systems, with enough cell structure to compute Euler characteristics and
    boundary circles of each region.
    """

    def __init__(self, realization):
        self.r = realization
        self.surface = realization.surface
        self._build()

    # -- per-triangle combinatorics

    def _side_cell(self, slot, i):
        """i-th segment of a side in the slot's own frame (0 touches the
        tail corner).  Cells are canonically indexed in the frame of the
        edge's first slot so both triangles name a segment identically."""
        e = self.surface.edge_of_slot[slot]
        slot_a = self.surface.edges[e][0]
        n = len(self.r.edge_lists[e])
        idx = i if slot == slot_a else n - i
        return (SIDE, e, idx)

    def _side_dir(self, slot, ascending):
        """Orientation marker of a side segment traversed along (or against)
        the slot direction; canonical +1 means along the first slot."""
        e = self.surface.edge_of_slot[slot]
        slot_a = self.surface.edges[e][0]
        return (1 if ascending else -1) * (1 if slot == slot_a else -1)

    def _point_node(self, item):
        strand, inc = item
        return ("pt", id(strand), inc)

    @staticmethod
    def _step_key(step):
        strand, inc_in, inc_out = step
        return (id(strand), inc_in, inc_out)

    def _build(self):
        r = self.r
        surface = self.surface

        # chords and crossings per triangle
        self.steps = {}
        self.tri_of_step = {}
        self.chords = {}       # step key -> ordered list of crossing step keys
        self.crossing_nodes = {}
        tri_steps = {}
        for tri in range(surface.num_triangles):
            steps = r.steps_in_triangle(tri)
            tri_steps[tri] = steps
            for st in steps:
                self.steps[self._step_key(st)] = st
                self.tri_of_step[self._step_key(st)] = tri
            for i in range(len(steps)):
                for j in range(i + 1, len(steps)):
                    if r.chords_cross(tri, steps[i], steps[j]):
                        ka, kb = self._step_key(steps[i]), self._step_key(steps[j])
                        self.crossing_nodes[frozenset((ka, kb))] = ("x", min(ka, kb), max(ka, kb))
            for st in steps:
                key = self._step_key(st)
                a1, a2 = r.chord_points(tri, st)
                hits = []
                for other in steps:
                    if other is st:
                        continue
                    if r.chords_cross(tri, st, other):
                        b1, b2 = r.chord_points(tri, other)
                        hit = b1 if Realization._in_ccw_arc(a1, a2, b1) else b2
                        hits.append((self._ccw_distance(a1, hit), self._step_key(other)))
                hits.sort()
                self.chords[key] = [k for _d, k in hits]

        # directed-cell incidence per triangle: heads, tails, rotations
        self.heads = {}
        faces = []
        face_of = {}

        for tri in range(surface.num_triangles):
            rotations = {}
            heads = {}

            def chain(cells_dirs, nodes):
                for i, cd in enumerate(cells_dirs):
                    heads[cd] = nodes[i + 1]
                    cell, d = cd
                    heads_rev = (cell, -d)
                    heads[heads_rev] = nodes[i]

            # sides
            for j in range(3):
                slot = 3 * tri + j
                e = surface.edge_of_slot[slot]
                pts = r.edge_lists[e]
                seq = pts if self._side_dir(slot, True) == 1 else pts[::-1]
                nodes = [("c", tri, j)] + [self._point_node(p) for p in seq] + [("c", tri, (j + 1) % 3)]
                cells_dirs = [(self._side_cell(slot, i), self._side_dir(slot, True))
                              for i in range(len(seq) + 1)]
                chain(cells_dirs, nodes)
                # rotations at interior side points: [ascending, chord, descending]
                for i, p in enumerate(seq):
                    node = self._point_node(p)
                    asc = (self._side_cell(slot, i + 1), self._side_dir(slot, True))
                    desc = (self._side_cell(slot, i), self._side_dir(slot, False))
                    chord_cd = None  # filled after chords are registered
                    rotations.setdefault(node, {})["side"] = (asc, desc)

            # chords
            for st in tri_steps[tri]:
                key = self._step_key(st)
                xs = self.chords[key]
                nodes = [self._point_node((st[0], st[1]))]
                for other in xs:
                    nodes.append(self.crossing_nodes[frozenset((key, other))])
                nodes.append(self._point_node((st[0], st[2])))
                cells_dirs = [((CHORD, key, i), 1) for i in range(len(xs) + 1)]
                chain(cells_dirs, nodes)
                first = ((CHORD, key, 0), 1)
                last = ((CHORD, key, len(xs)), 1)
                rotations.setdefault(nodes[0], {})["chord"] = first
                rotations.setdefault(nodes[-1], {})["chord"] = (last[0], -1)

            # assemble rotations: corners
            rot_list = {}
            for j in range(3):
                node = ("c", tri, j)
                slot_out = 3 * tri + j
                slot_in = 3 * tri + (j + 2) % 3
                e_out = surface.edge_of_slot[slot_out]
                e_in = surface.edge_of_slot[slot_in]
                n_in = len(r.edge_lists[e_in])
                out_cd = (self._side_cell(slot_out, 0), self._side_dir(slot_out, True))
                in_cd = (self._side_cell(slot_in, n_in), self._side_dir(slot_in, False))
                rot_list[node] = [out_cd, in_cd]
            # side points
            for node, parts in rotations.items():
                if "side" in parts:
                    asc, desc = parts["side"]
                    chord_cd = parts.get("chord")
                    rot_list[node] = [asc, chord_cd, desc] if chord_cd else [asc, desc]
            # crossings
            for pair, xnode in self.crossing_nodes.items():
                ka, kb = xnode[1], xnode[2]
                if self.tri_of_step[ka] != tri:
                    continue
                st_a, st_b = self.steps[ka], self.steps[kb]
                sign = r.crossing_sign(tri, st_a, st_b)
                ia = self.chords[ka].index(kb)
                ib = self.chords[kb].index(ka)
                a_prev, a_next = ((CHORD, ka, ia), -1), ((CHORD, ka, ia + 1), 1)
                b_prev, b_next = ((CHORD, kb, ib), -1), ((CHORD, kb, ib + 1), 1)
                if sign == 1:
                    rot_list[xnode] = [a_next, b_next, a_prev, b_prev]
                else:
                    rot_list[xnode] = [a_next, b_prev, a_prev, b_next]

            # trace faces of this triangle
            def next_in_face(cd):
                cell, d = cd
                v = heads[cd]
                rot = rot_list[v]
                rev = (cell, -d)
                k = rot.index(rev)
                return rot[(k - 1) % len(rot)]

            visited = set()
            outer_marker = (self._side_cell(3 * tri, 0), self._side_dir(3 * tri, False))
            for start in list(heads.keys()):
                if start in visited:
                    continue
                cycle = []
                cur = start
                while cur not in visited:
                    visited.add(cur)
                    cycle.append(cur)
                    cur = next_in_face(cur)
                if cur != start:
                    raise CurveError("face walk did not close up")
                faces.append((tri, tuple(cycle)))
            self.heads.update({(tri, cd): h for cd, h in heads.items()})

        # identify outer faces and index directed cells
        self.faces = []
        self.face_of_directed = {}
        for tri, cycle in faces:
            outer_marker = (self._side_cell(3 * tri, 0), self._side_dir(3 * tri, False))
            is_outer = outer_marker in cycle
            if is_outer:
                continue
            idx = len(self.faces)
            self.faces.append((tri, cycle))
            for cd in cycle:
                self.face_of_directed[(tri, cd)] = idx

        # union faces across interior edges
        parent = list(range(len(self.faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for e in range(surface.num_edges):
            slot_a, slot_b = surface.edges[e]
            if slot_b is None:
                continue
            n = len(r.edge_lists[e])
            for i in range(n + 1):
                cell = (SIDE, e, i)
                fa = self.face_of_directed.get((slot_a // 3, (cell, 1)))
                fb = self.face_of_directed.get((slot_b // 3, (cell, -1)))
                if fa is None or fb is None:
                    raise CurveError("missing face along an interior edge")
                union(fa, fb)
        self._find = find
        self.region_of_face = [find(i) for i in range(len(self.faces))]

    def _ccw_distance(self, origin, point):
        (so, io), (sp, ip) = origin, point
        if sp == so:
            if ip > io:
                return (0, ip - io)
            return (3, ip)
        return ((sp - so) % 3, ip)

    # -- region analysis

    def _is_wall(self, cell):
        kind = cell[0]
        if kind == CHORD:
            return True
        _kind, e, _i = cell
        return self.surface.is_boundary_edge(e)

    def regions(self):
        groups = {}
        for i, root in enumerate(self.region_of_face):
            groups.setdefault(root, []).append(i)
        return [sorted(v) for _k, v in sorted(groups.items())]

    def region_data(self, face_ids):
        """(euler, circles) of one region; circles are lists of wall cells
        with type tags, walked along the region's boundary."""
        face_set = set(face_ids)
        # instances of directed cells with faces
        instance_of = {}
        for fi in face_ids:
            tri, cycle = self.faces[fi]
            for pos, cd in enumerate(cycle):
                instance_of[(fi, pos)] = cd
        # locate the one or two occurrences of each undirected cell
        occurrences = {}
        for (fi, pos), (cell, d) in instance_of.items():
            occurrences.setdefault(cell, []).append((fi, pos, d))
        glued = {}
        wall_instances = []
        for cell, occ in occurrences.items():
            if self._is_wall(cell):
                wall_instances.extend((cell, fi, pos) for fi, pos, _d in occ)
                continue
            if len(occ) == 2:
                glued[cell] = (occ[0][:2], occ[1][:2])
            elif len(occ) == 1:
                raise CurveError("interior segment with a single region side")
        # Euler characteristic of the compactified region
        F = len(face_ids)
        E = len(glued) + len(wall_instances)
        parent = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        def corner(fi, pos):
            # corner of a face between cell pos-1 and cell pos
            tri, cycle = self.faces[fi]
            return (fi, pos % len(cycle))

        for fi in face_ids:
            tri, cycle = self.faces[fi]
            for pos in range(len(cycle)):
                find(corner(fi, pos))
        for cell, ((f1, p1), (f2, p2)) in glued.items():
            n1 = len(self.faces[f1][1])
            n2 = len(self.faces[f2][1])
            # matching a directed cell with its reversal: head ~ tail
            union(corner(f1, (p1 + 1) % n1), corner(f2, p2))
            union(corner(f1, p1), corner(f2, (p2 + 1) % n2))
        V = len({find(x) for x in list(parent)})
        euler = V - E + F

        # boundary circles: walk wall instances
        succ_wall = {}
        wall_set = {(fi, pos) for _c, fi, pos in wall_instances}
        twins = {}
        for cell, ((f1, p1), (f2, p2)) in glued.items():
            twins[(f1, p1)] = (f2, p2)
            twins[(f2, p2)] = (f1, p1)
        circles = []
        seen = set()
        for _cell, fi, pos in sorted(wall_instances):
            if (fi, pos) in seen:
                continue
            circle = []
            cur = (fi, pos)
            while cur not in seen:
                seen.add(cur)
                circle.append(cur)
                # advance to the next boundary cell after cur's head corner
                nxt = (cur[0], (cur[1] + 1) % len(self.faces[cur[0]][1]))
                while nxt not in wall_set:
                    nxt = twins[nxt]
                    nxt = (nxt[0], (nxt[1] + 1) % len(self.faces[nxt[0]][1]))
                cur = nxt
            tagged = []
            for fi2, pos2 in circle:
                cell, d = self.faces[fi2][1][pos2]
                tagged.append(self._wall_tag(cell))
            circles.append(tagged)
        return euler, circles

    def _wall_tag(self, cell):
        if cell[0] == CHORD:
            key = cell[1]
            strand = self.steps[key][0]
            return ("curve", strand.priority, cell)
        return ("boundary", 0, cell)

    def region_boundary_slot_cycles(self, face_ids):
        """Exit-slot cycles of curves running just inside the region,
        parallel to each of its boundary circles."""
        face_set = set(face_ids)
        instance_of = {}
        for fi in face_ids:
            _tri, cycle = self.faces[fi]
            for pos, cd in enumerate(cycle):
                instance_of[(fi, pos)] = cd
        occurrences = {}
        for (fi, pos), (cell, _d) in instance_of.items():
            occurrences.setdefault(cell, []).append((fi, pos))
        twins = {}
        wall_set = set()
        for cell, occ in occurrences.items():
            if self._is_wall(cell):
                wall_set.update(occ)
            elif len(occ) == 2:
                twins[occ[0]] = occ[1]
                twins[occ[1]] = occ[0]
        cycles = []
        seen = set()
        for start in sorted(wall_set):
            if start in seen:
                continue
            crossed = []
            cur = start
            while cur not in seen:
                seen.add(cur)
                nxt = (cur[0], (cur[1] + 1) % len(self.faces[cur[0]][1]))
                while nxt not in wall_set:
                    cell, _d = self.faces[nxt[0]][1][nxt[1]]
                    tri_from = self.faces[nxt[0]][0]
                    e = cell[1]
                    slot_here = next(s for s in self.surface.slots_of_edge(e)
                                     if s // 3 == tri_from)
                    crossed.append(slot_here)
                    nxt = twins[nxt]
                    nxt = (nxt[0], (nxt[1] + 1) % len(self.faces[nxt[0]][1]))
                cur = nxt
            cycles.append(crossed)
        return cycles

    # -- bigons

    def find_bigon(self):
        """A removable bigon region, as a list of (edge, itemA, itemB) pairs
        to transpose, or None."""
        for face_ids in self.regions():
            euler, circles = self.region_data(face_ids)
            if euler != 1 or len(circles) != 1:
                continue
            tags = circles[0]
            if any(t[0] == "boundary" for t in tags):
                continue
            # count crossing corners: transitions between the two priorities
            runs = _run_count(tags)
            if runs != 2:
                continue
            swaps = []
            for fi in face_ids:
                _tri, cycle = self.faces[fi]
                for cell, _d in cycle:
                    if cell[0] != SIDE or self.surface.is_boundary_edge(cell[1]):
                        continue
                    _kind, e, i = cell
                    lst = self.r.edge_lists[e]
                    if not 1 <= i <= len(lst) - 1:
                        raise CurveError("bigon region touches a triangulation vertex")
                    sw = (e, lst[i - 1], lst[i])
                    if sw not in swaps:
                        swaps.append(sw)
            if swaps:
                return swaps
        return None


def _run_count(tags):
    kinds = [t[:2] for t in tags]
    if not kinds:
        return 0
    runs = 1
    for i in range(1, len(kinds)):
        if kinds[i] != kinds[i - 1]:
            runs += 1
    if kinds[0] == kinds[-1] and runs > 1:
        runs -= 1
    return runs


@dataclass(frozen=True)
class Region:
    euler: int
    circles: int
    sides: int               # maximal wall runs over all boundary circles
    is_disk: bool
    touches_boundary: bool
    is_boundary_annulus: bool  # annulus between the curves and one boundary component
    boundary_edges: tuple      # surface boundary edges on this region's frontier


@dataclass(frozen=True)
class RegionCensus:
    regions: tuple
    crossings: int

    def euler_sum(self):
        return sum(r.euler for r in self.regions)

    def all_disks_or_boundary_annuli(self):
        return all(r.is_disk or r.is_boundary_annulus for r in self.regions)


def _census_from_complex(complex_):
    regions = []
    for face_ids in complex_.regions():
        euler, circles = complex_.region_data(face_ids)
        run_total = sum(_run_count(c) for c in circles)
        bdry_edges = []
        touches = False
        full_boundary_circles = 0
        curve_circles = 0
        for c in circles:
            kinds = {t[0] for t in c}
            if "boundary" in kinds:
                touches = True
                for t in c:
                    if t[0] == "boundary":
                        bdry_edges.append(t[2][1])
            if kinds == {"boundary"}:
                full_boundary_circles += 1
            if kinds == {"curve"}:
                curve_circles += 1
        is_disk = euler == 1
        is_bdry_annulus = (euler == 0 and len(circles) == 2
                           and full_boundary_circles == 1 and curve_circles == 1)
        regions.append(Region(
            euler=euler,
            circles=len(circles),
            sides=run_total,
            is_disk=is_disk,
            touches_boundary=touches,
            is_boundary_annulus=is_bdry_annulus,
            boundary_edges=tuple(sorted(set(bdry_edges))),
        ))
    return RegionCensus(tuple(regions), complex_.r.total_crossings())


def complementary_region_census(alpha, beta=None):
    """Regions of the complement of one or two systems in minimal position."""
    realization = Realization(alpha, beta)
    complex_ = realization.tighten()
    return _census_from_complex(complex_)


class FillsError(ValueError):
    pass


def fills(alpha, beta):
    """Whether two closed non-peripheral systems fill the surface.

    True when every complementary region of the pair in minimal position is
    a disk or an annulus hugging one boundary component.  The census is
    returned as the checkable witness.
    """
    for system in (alpha, beta):
        if not system.is_closed or system.is_empty:
            raise FillsError("filling requires nonempty closed systems")
        if system.has_peripheral_component():
            raise FillsError("peripheral components are not allowed in filling tests")
    census = complementary_region_census(alpha, beta)
    return census.all_disks_or_boundary_annuli(), census


# -- free-endpoint arc intersections -----------------------------------------------


def slide_arc_end(surface, arc, end, direction):
    """Slide one endpoint of an arc across the adjacent vertex.

    ``end`` is 0 (start) or 1 (end); direction +1 slides along the boundary
    orientation, -1 against it.  The arc winds across the vertex fan, so its
    interior gains the fan's crossings.
    """
    from obd.curves import ArcComponent, make_arc
    start, mids, endslot = arc.start, list(arc.mids), arc.end
    if end == 0:
        slot = start
    else:
        slot = endslot
    comp_cycle = None
    for cycle in surface.boundary_components:
        if slot in cycle:
            comp_cycle = cycle
            break
    if comp_cycle is None:
        raise CurveError("arc endpoint is not on the boundary")
    if direction > 0:
        crossed, nxt = surface.fan_walk(slot)
        added = crossed
    else:
        k = comp_cycle.index(slot)
        prev = comp_cycle[(k - 1) % len(comp_cycle)]
        crossed, _ = surface.fan_walk(prev)
        added = [surface.glue[s] for s in reversed(crossed)]
        nxt = prev
    if end == 0:
        # the slid arc first unwinds across the fan back to its old course
        mids2 = [surface.glue[s] for s in reversed(added)]
        return make_arc(surface, nxt, mids2 + mids, endslot)
    return make_arc(surface, start, mids + list(added), nxt)


def arc_intersection_free_endpoints(alpha, beta):
    """Minimal intersection number of two arcs with endpoints free to slide
    along the boundary.

    Exhaustive search over endpoint slides of the first arc within one full
    turn of each boundary cycle, taking the pinned minimum over both
    stacking conventions.
    """
    from obd.curves import NormalCurveSystem
    if alpha.kind != "arc" or beta.kind != "arc":
        raise CurveError("free-endpoint intersection expects arc systems")
    if len(alpha.components) != 1 or len(beta.components) != 1:
        raise CurveError("free-endpoint intersection expects single arcs")
    surface = alpha.surface
    base = alpha.components[0]

    def cycle_len(slot):
        for cycle in surface.boundary_components:
            if slot in cycle:
                return len(cycle)
        raise CurveError("endpoint not on boundary")

    best = None
    l0 = cycle_len(base.start)
    l1 = cycle_len(base.end)
    for d0 in range(-l0, l0 + 1):
        arc0 = base
        for _ in range(abs(d0)):
            arc0 = slide_arc_end(surface, arc0, 0, 1 if d0 > 0 else -1)
        for d1 in range(-l1, l1 + 1):
            arc = arc0
            for _ in range(abs(d1)):
                arc = slide_arc_end(surface, arc, 1, 1 if d1 > 0 else -1)
            sys_a = NormalCurveSystem.from_components(surface, [arc])
            n1 = geometric_intersection(sys_a, beta)
            n2 = geometric_intersection(beta, sys_a)
            val = min(n1, n2)
            if best is None or val < best:
                best = val
            if best == 0:
                return 0
    return best


def arc_is_boundary_parallel(arc_system):
    """Whether a single properly embedded arc cuts a disk off the surface.

    The cut-off disk of a trivial arc touches the arc along one side only,
    so it is a disk region with exactly two wall runs (one along the arc,
    one along the boundary).  An essential arc can also leave a disk behind
    (cutting an annulus along a spanning arc, say) but that disk meets the
    arc along both sides, giving four runs.
    """
    if len(arc_system.components) != 1 or arc_system.kind != "arc":
        raise CurveError("expected a single-arc system")
    census = complementary_region_census(arc_system)
    for region in census.regions:
        if region.is_disk and region.sides == 2:
            return True
    return False
