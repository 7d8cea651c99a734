"""Mapping classes as Dehn twist words and their action on curves and arcs.

A word is a sequence of signed twists about registered closed curves.  The
twist acts on a system by rerouting it around the twisting curve at every
crossing of an explicit transverse picture of the two: each crossing is
replaced by a full parallel copy of the twisting curve, inserted into the
crossing sequence in the direction dictated by the twist sign and the local
crossing sign, and the result is reduced.  Since any transverse
representative maps to a representative of the image class, the block
realization is used directly without tightening.

Right/left/equal comparisons of arcs sharing a basepoint are decided by
walking the two reduced crossing sequences through the (tree-dual) universal
cover until they diverge and reading off the counterclockwise order of the
landings, which matches the boundary-orientation convention: landings swept
first are to the right.
"""

from __future__ import annotations

from dataclasses import dataclass

from obd.curves import (
    ArcComponent,
    ClosedComponent,
    CurveError,
    NormalCurveSystem,
    make_arc,
    make_closed,
    peripheral_curve,
    peripheral_slots,
)
from obd.intersection import EXIT, END, Realization, geometric_intersection


class WordError(ValueError):
    pass


# -- the twist action -----------------------------------------------------------


def _insertion(surface, gamma_strand, gamma_step, forward):
    """Full cyclic crossing list of the twisting curve, phased at a chord."""
    slots = gamma_strand.slots
    n = len(slots)
    _strand, inc_in, inc_out = gamma_step
    a = inc_in[1] % n
    b = inc_out[1] % n
    if forward:
        return [slots[(b + k) % n] for k in range(n)]
    return [surface.glue[slots[(a - k) % n]] for k in range(n)]


def twist_once(system, curve, exponent):
    """Image of a system under one positive or negative twist."""
    if exponent not in (1, -1):
        raise WordError("elementary twists have exponent +1 or -1")
    if not curve.is_closed or len(curve.components) != 1:
        raise WordError("twisting requires a single closed curve")
    if system.is_empty:
        return system
    surface = system.surface
    realization = Realization(system, curve)

    # crossings along each strand of the system, per step, in chord order
    per_step = {}
    for tri in range(surface.num_triangles):
        steps = realization.steps_in_triangle(tri)
        sys_steps = [st for st in steps if st[0].priority == 0]
        cur_steps = [st for st in steps if st[0].priority == 1]
        for st in sys_steps:
            a1, a2 = realization.chord_points(tri, st)
            hits = []
            for gt in cur_steps:
                if realization.chords_cross(tri, st, gt):
                    b1, b2 = realization.chord_points(tri, gt)
                    hit = b1 if Realization._in_ccw_arc(a1, a2, b1) else b2
                    sign = realization.crossing_sign(tri, st, gt)
                    hits.append((_ccw_distance(a1, hit), sign, gt))
            hits.sort(key=lambda t: t[0])
            if hits:
                per_step[(id(st[0]), st[1], st[2])] = [(sign, gt) for _d, sign, gt in hits]

    new_components = []
    for strand in realization.pair.strands:
        if strand.priority != 0:
            continue
        comp = strand.component
        if comp.is_closed:
            seq = []
            for (inc_in, inc_out) in strand.steps():
                for sign, gt in per_step.get((id(strand), inc_in, inc_out), []):
                    forward = (exponent * sign == -1)
                    seq.extend(_insertion(surface, gt[0], gt, forward))
                seq.append(strand.slots[inc_out[1] % strand.n])
            new_components.append(make_closed(surface, seq))
        else:
            seq = []
            for (inc_in, inc_out) in strand.steps():
                for sign, gt in per_step.get((id(strand), inc_in, inc_out), []):
                    forward = (exponent * sign == -1)
                    seq.extend(_insertion(surface, gt[0], gt, forward))
                if inc_out[0] == EXIT:
                    seq.append(strand.slots[inc_out[1] - 1])
            new_components.append(make_arc(surface, comp.start, seq, comp.end))
    return NormalCurveSystem(surface, new_components)


def _ccw_distance(origin, point):
    (so, io), (sp, ip) = origin, point
    if sp == so:
        if ip > io:
            return (0, ip - io)
        return (3, ip)
    return ((sp - so) % 3, ip)


# -- words ------------------------------------------------------------------------


class MappingClassWord:
    """A product of Dehn twists about registered curves.

    Letters act right to left, like function composition.  The registry maps
    names to closed connected systems; boundary-parallel curves are allowed
    (boundary twists act trivially on closed curves but wind arcs).
    """

    def __init__(self, surface, registry=None, letters=()):
        self.surface = surface
        self.registry = dict(registry or {})
        for name, curve in self.registry.items():
            self._check_curve(name, curve)
        self.letters = tuple(letters)
        for name, exp in self.letters:
            if name not in self.registry:
                raise WordError("letter %r is not registered" % name)
            if exp == 0:
                raise WordError("zero exponent in word")

    def _check_curve(self, name, curve):
        if not isinstance(curve, NormalCurveSystem):
            raise WordError("registry entry %r is not a curve system" % name)
        if curve.surface != self.surface:
            raise WordError("curve %r lives on another surface" % name)
        if not curve.is_closed or len(curve.components) != 1:
            raise WordError("registry entry %r must be a single closed curve" % name)

    def register(self, name, curve):
        if name in self.registry:
            raise WordError("name %r already registered" % name)
        self._check_curve(name, curve)
        registry = dict(self.registry)
        registry[name] = curve
        return MappingClassWord(self.surface, registry, self.letters)

    def with_letters(self, letters):
        return MappingClassWord(self.surface, self.registry, letters)

    def expanded_letters(self):
        out = []
        for name, exp in self.letters:
            step = 1 if exp > 0 else -1
            out.extend((name, step) for _ in range(abs(exp)))
        return out

    def inverse(self):
        inv = [(name, -exp) for name, exp in reversed(self.letters)]
        return self.with_letters(inv)

    def compose(self, other):
        """self o other (apply other first)."""
        if self.surface != other.surface:
            raise WordError("words live on different surfaces")
        registry = dict(other.registry)
        for name, curve in self.registry.items():
            if name in registry and registry[name] != curve:
                raise WordError("registries disagree on %r" % name)
            registry[name] = curve
        return MappingClassWord(self.surface, registry, self.letters + other.letters)

    def power(self, k):
        if k == 0:
            return self.with_letters(())
        w = self if k > 0 else self.inverse()
        return w.with_letters(w.letters * abs(k))

    @property
    def is_identity_word(self):
        return not self.letters

    def __repr__(self):
        body = " ".join("R(%s)%s" % (n, "" if e == 1 else "^%d" % e) for n, e in self.letters)
        return "MappingClassWord(%s)" % (body or "id")


def apply_word(word, system):
    """Image of a system under the word, in canonical form."""
    if system.surface != word.surface:
        raise WordError("system lives on another surface")
    out = system
    for name, exp in reversed(word.expanded_letters()):
        out = twist_once(out, word.registry[name], exp)
    return out


def register_conjugate_twist(word, name, new_name=None):
    """Register the image curve w(c); twisting about it equals w R_c w^-1."""
    if name not in word.registry:
        raise WordError("unknown curve %r" % name)
    image = apply_word(word, word.registry[name])
    if new_name is None:
        new_name = "%s@%s" % (name, "".join("%s%+d" % l for l in word.letters) or "id")
    return word.register(new_name, image), new_name


# -- right-veering ------------------------------------------------------------------


RIGHT = "Right"
LEFT = "Left"
EQUAL = "Equal"


def is_right_of(alpha, beta):
    """Position of the second arc relative to the first at their common
    basepoint: Right, Left, or Equal.

    Both arcs must be single arcs based at the same point (same initial
    boundary edge).  The verdict follows the boundary orientation: walking
    from the basepoint along the boundary sweeps the right-hand region
    first, and an arc landing counterclockwise-earlier at the first
    divergence of the two taut arcs lies in that region.
    """
    from obd.intersection import _Strand, RayComparer
    for sys in (alpha, beta):
        if sys.kind != "arc" or len(sys.components) != 1:
            raise WordError("right-of comparison expects single arcs")
    a = alpha.components[0]
    b = beta.components[0]
    if a.start != b.start:
        raise WordError("arcs are not based at the same point")
    surface = alpha.surface
    sa = _Strand(surface, 0, 0, a)
    sb = _Strand(surface, 1, 0, b)
    comparer = RayComparer(surface)
    sign, _steps = comparer.compare(sb, 0, 1, sa, 0, 1)
    if sign == 0:
        return EQUAL
    return RIGHT if sign < 0 else LEFT


def arcs_from_base(surface, base_slot, max_crossings):
    """All taut arcs based at a point of the given boundary edge with at
    most the given number of interior crossings, in deterministic order."""
    if surface.glue[base_slot] != -1:
        raise WordError("base slot must be a boundary edge")
    out = []

    def rec(entry_slot, mids):
        tri = entry_slot // 3
        for k in (1, 2):
            slot = 3 * tri + (entry_slot % 3 + k) % 3
            if surface.glue[slot] == -1:
                out.append(make_arc(surface, base_slot, tuple(mids), slot))
            elif len(mids) < max_crossings:
                mids.append(slot)
                rec(surface.glue[slot], mids)
                mids.pop()

    rec(base_slot, [])
    return [NormalCurveSystem(surface, [a]) for a in out]


@dataclass(frozen=True)
class RightVeeringReport:
    verdicts: tuple         # (arc system, verdict) pairs
    lefts: int
    rights: int
    equals: int

    @property
    def right_veering_on_sample(self):
        return self.lefts == 0


def right_veering_sample(word, arc_family):
    """Trichotomy of every sampled arc against its image; the verdict is
    positive when no arc veers left."""
    verdicts = []
    counts = {RIGHT: 0, LEFT: 0, EQUAL: 0}
    for arc in arc_family:
        image = apply_word(word, arc)
        v = is_right_of(arc, image)
        counts[v] += 1
        verdicts.append((arc, v))
    return RightVeeringReport(tuple(verdicts), counts[LEFT], counts[RIGHT], counts[EQUAL])


# -- growth and invariance certificates ------------------------------------------------


@dataclass(frozen=True)
class GrowthCertificate:
    probe_weights: tuple
    counts: tuple            # k_i = i(h^i(delta), probe), i = 1..n
    monotone: bool

    def excludes_periodicity(self):
        return self.monotone


def iteration_growth(word, delta, probe, iterations):
    """Intersection counts of the iterated images with a probe.

    A strictly increasing sequence certifies that no iterate up to the bound
    returns the system to itself.
    """
    if iterations < 2:
        raise WordError("need at least two iterations")
    counts = []
    cur = delta
    for _ in range(iterations):
        cur = apply_word(word, cur)
        counts.append(geometric_intersection(cur, probe))
    monotone = all(counts[i + 1] > counts[i] for i in range(len(counts) - 1))
    return GrowthCertificate(tuple(probe.weights), tuple(counts), monotone)


@dataclass(frozen=True)
class InvariantSearchReport:
    weight_bound: int
    found: object            # invariant multicurve or None
    curves_checked: int

    @property
    def exhausted(self):
        return self.found is None


def invariant_multicurve_search(word, weight_bound):
    """First invariant non-peripheral multicurve of total weight within the
    bound, or an exhaustion report.

    A multicurve invariant under the word is a union of orbits of its
    components, so it suffices to follow the orbit of every connected
    non-peripheral curve within the weight budget: if the orbit returns to
    its start while staying within budget and its curves are pairwise
    disjoint, their union is invariant; if every orbit escapes the budget or
    collides with itself, no invariant multicurve exists below the bound.
    """
    from obd.curve_complex import enumerate_curves
    surface = word.surface
    checked = 0
    for gamma in enumerate_curves(surface, weight_bound):
        checked += 1
        orbit = [gamma]
        total = gamma.total_weight()
        while True:
            image = apply_word(word, orbit[-1])
            if image == gamma:
                components = []
                ok = True
                for member in orbit:
                    for other in orbit:
                        if member is not other and geometric_intersection(member, other) != 0:
                            ok = False
                if not ok or len({m.weights for m in orbit}) != len(orbit):
                    break
                for member in orbit:
                    components.extend(member.components)
                union = NormalCurveSystem(surface, tuple(components))
                return InvariantSearchReport(weight_bound, union, checked)
            total += image.total_weight()
            if total > weight_bound:
                break
            orbit.append(image)
    return InvariantSearchReport(weight_bound, None, checked)


# -- fractional Dehn twist estimation ---------------------------------------------------


def positive_wind_slots(surface, base_slot):
    """Exit slots of one full positive boundary wind starting at the base
    edge: the course of an arc that hugs the boundary component once."""
    slots = []
    cur = base_slot
    while True:
        crossed, nxt = surface.fan_walk(cur)
        slots.extend(crossed)
        cur = nxt
        if cur == base_slot:
            return tuple(slots)


def boundary_winding(arc_system):
    """Signed number of full boundary winds at the start of an arc."""
    arc = arc_system.components[0]
    surface = arc_system.surface
    plus = positive_wind_slots(surface, arc.start)
    minus = tuple(surface.glue[s] for s in reversed(plus))
    mids = list(arc.mids)
    wind = 0
    changed = True
    while changed:
        changed = False
        if len(plus) and tuple(mids[:len(plus)]) == plus and wind >= 0:
            mids = mids[len(plus):]
            wind += 1
            changed = True
        elif len(minus) and tuple(mids[:len(minus)]) == minus and wind <= 0:
            mids = mids[len(minus):]
            wind -= 1
            changed = True
    return wind


@dataclass(frozen=True)
class TwistCoefficientInterval:
    low: int
    high: int
    windings: tuple

    def shift(self, k):
        return TwistCoefficientInterval(self.low + k, self.high + k,
                                        tuple(w + k * (i + 1) for i, w in enumerate(self.windings)))


def estimate_fdtc(word, iterations, seed_arc):
    """Interval bounding the boundary-winding rate of the word's iterates.

    Winds of the images of the seed arc are counted at its base boundary
    edge; the interval spans the increments between consecutive iterates.
    This is an estimator for the boundary rotation rate, not an exact
    fractional twist coefficient.
    """
    if seed_arc.kind != "arc" or len(seed_arc.components) != 1:
        raise WordError("seed must be a single arc")
    winds = []
    cur = seed_arc
    for _ in range(iterations + 1):
        cur = apply_word(word, cur)
        winds.append(boundary_winding(cur))
    diffs = [winds[i + 1] - winds[i] for i in range(len(winds) - 1)]
    return TwistCoefficientInterval(min(diffs), max(diffs), tuple(winds))
