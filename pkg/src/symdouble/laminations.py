"""Laminations on the double: coordinates, curve presentations, integrality.

Curves are carried combinatorially.  A closed loop is a cyclic list of
passages (triangle index, entry slot, exit slot); an intersecting curve is
an alternating list of segments, each a crossing word on one side of the
double with optional flanking-triangle chain and terminal corners.  The
coordinate extraction follows the quadrilateral corner-count rule; spiral
ends contribute half a crossing to the side selected by the default
orientation (agreeing with the base surface).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .seeds import (
    KIND_TROP_A,
    KIND_TROP_D,
    KIND_TROP_X,
    ClusterState,
    mutate_state,
)
from .surfaces import edge_seed_index, epsilon_from_triangulation, flip, flip_quad

SIDE_S = "S"
SIDE_SO = "S°"


def _check_side(side):
    if side not in (SIDE_S, SIDE_SO):
        raise DomainError("side must be %r or %r" % (SIDE_S, SIDE_SO))
    return side


class LoopCurve:
    """Closed loop on one side of the double, as a cyclic passage list."""

    __slots__ = ("side", "passages", "weight", "gamma_parallel", "orientation")

    def __init__(self, side, passages, weight=1, gamma_parallel=None, orientation=None):
        self.side = _check_side(side)
        self.passages = tuple((t, i, o) for t, i, o in passages)
        self.weight = Fraction(weight)
        # gamma_parallel: edge ids spiraling into the hole this loop encircles
        self.gamma_parallel = tuple(gamma_parallel) if gamma_parallel else None
        self.orientation = orientation  # side whose orientation the loop induces
        if self.weight <= 0:
            raise DomainError("loop weight must be positive")
        if self.gamma_parallel and orientation not in (SIDE_S, SIDE_SO):
            raise DomainError("a loop parallel to the gluing curve needs an orientation")

    def validate(self, tri):
        if not self.passages:
            raise DomainError("empty loop")
        for (t, i, o) in self.passages:
            if not (0 <= t < len(tri.triangles)) or i == o or not (
                0 <= i < 3 and 0 <= o < 3
            ):
                raise DomainError("malformed passage %r" % ((t, i, o),))
        for idx, (t, _i, o) in enumerate(self.passages):
            eid = tri.triangles[t][o]
            if not tri.internal[eid]:
                raise DomainError("loop crosses external edge %r" % eid)
            nt, ni, _no = self.passages[(idx + 1) % len(self.passages)]
            if tri.triangles[nt][ni] != eid:
                raise DomainError("passages do not chain at %r" % eid)
            slots = set(tri.slots[eid])
            if {(t, o), (nt, ni)} != slots:
                raise DomainError("crossing of %r does not use both sides" % eid)
        return self

    def crossing_counts(self, tri):
        counts = {e: 0 for e in tri.edge_ids}
        for (t, _i, o) in self.passages:
            counts[tri.triangles[t][o]] += 1
        return counts

    def turn_word(self, tri):
        """[(edge crossed, 'L'|'R')]: the letter is the turn made before
        crossing the edge; left means the exit slot precedes the entry slot."""
        self.validate(tri)
        out = []
        for (t, i, o) in self.passages:
            eid = tri.triangles[t][o]
            turn = "L" if (i - o) % 3 == 1 else "R"
            out.append((eid, turn))
        return out


class Segment:
    """One piece of an intersecting curve, drawn on one side of the double."""

    __slots__ = ("side", "word", "chain", "start_corner", "end_corner", "along")

    def __init__(self, side, word=(), chain=None, start_corner=None, end_corner=None, along=None):
        self.side = _check_side(side)
        self.word = tuple(word)
        self.chain = tuple(chain) if chain is not None else None
        self.start_corner = start_corner  # (triangle index, corner slot)
        self.end_corner = end_corner
        self.along = along  # edge id when the segment runs along an edge
        if self.along is None and not self.word:
            raise DomainError("segment needs a crossing word or an edge to follow")
        if self.along is not None and self.word:
            raise DomainError("segment cannot both cross edges and follow one")


class IntersectingCurve:
    """Alternating segments (odd on S, even on S°) closing up cyclically."""

    __slots__ = ("segments", "weight")

    def __init__(self, segments, weight=1):
        self.segments = tuple(segments)
        self.weight = Fraction(weight)
        if not self.segments or len(self.segments) % 2:
            raise DomainError("need an even number of alternating segments")
        for pos, seg in enumerate(self.segments):
            want = SIDE_S if pos % 2 == 0 else SIDE_SO
            if seg.side != want:
                raise DomainError("segment %d should lie on %s" % (pos + 1, want))
        if self.weight <= 0:
            raise DomainError("curve weight must be positive")

    def crossing_counts(self, tri, side=None):
        counts = {e: 0 for e in tri.edge_ids}
        for seg in self.segments:
            if side is not None and seg.side != side:
                continue
            for eid in seg.word:
                counts[eid] += 1
        return counts


def doubled_arc(word, chain=None, start_corner=None, end_corner=None, weight=1):
    """The intersecting curve obtained by gluing an arc to its mirror image."""
    word = list(word)
    return IntersectingCurve(
        [
            Segment(SIDE_S, word, chain, start_corner, end_corner),
            Segment(SIDE_SO, word, chain, start_corner, end_corner),
        ],
        weight,
    )


class DLamination:
    """Weighted disjoint curves on the double with gamma orientations."""

    __slots__ = ("loops", "intersecting", "orientations")

    def __init__(self, loops=(), intersecting=(), orientations=None):
        self.loops = tuple(loops)
        self.intersecting = tuple(intersecting)
        self.orientations = dict(orientations or {})


# -- coordinates -----------------------------------------------------------


def shear_from_corners(a12, a23, a34, a14):
    """Cross-difference of the quadrilateral corner counts."""
    return Fraction(a12) + Fraction(a34) - Fraction(a14) - Fraction(a23)


def _quad_side_slots(tri, k):
    """Side slots A, B, C, D of the flip quadrilateral at k, in order.

    With the two triangles rotated k-first as (k, a, b) and (k, c, d), the
    quadrilateral has counterclockwise vertices q1..q4, k joins q1 q3, and
    the sides are a = q1q2, b = q2q3, c = q3q4, d = q4q1.
    """
    (t1, (_, _a, _b)), (t2, (_, _c, _d)) = flip_quad(tri, k)
    p1 = tri.triangles[t1].index(k)
    p2 = tri.triangles[t2].index(k)
    return (
        (t1, (p1 + 1) % 3),  # a
        (t1, (p1 + 2) % 3),  # b
        (t2, (p2 + 1) % 3),  # c
        (t2, (p2 + 2) % 3),  # d
    )


def _corner_to_quad_vertex(tri, k, corner):
    """Map (triangle, corner slot) into the quadrilateral vertex q1..q4.

    Corner m of a triangle lies between its sides m-1 and m.  Returns None
    when the corner's triangle is not part of the quadrilateral at k.
    """
    (t1, _), (t2, _) = flip_quad(tri, k)
    t, m = corner
    if t == t1:
        p1 = tri.triangles[t1].index(k)
        rel = (m - p1) % 3  # corner relative to the k-first rotation
        return {1: 1, 2: 2, 0: 3}[rel]
    if t == t2:
        p2 = tri.triangles[t2].index(k)
        rel = (m - p2) % 3
        return {1: 3, 2: 4, 0: 1}[rel]
    return None


_BIAS_SIDE = {1: 3, 2: 0, 3: 1, 4: 2}  # quad vertex -> index into (a, b, c, d)


def _shear_contributions(tri, k, passages, single_slots, terminal_corners):
    """Corner counts (a, b, c, d) at the quadrilateral of k, halved.

    ``passages`` contribute both their slots, ``single_slots`` one crossing
    each (the first and last crossings of an open segment), and terminal
    corners half a crossing on the side selected by the spiral default.
    """
    sides = _quad_side_slots(tri, k)
    side_of_slot = {slot: pos for pos, slot in enumerate(sides)}
    counts = [Fraction(0)] * 4
    for (t, i, o) in passages:
        for slot in ((t, i), (t, o)):
            pos = side_of_slot.get(slot)
            if pos is not None:
                counts[pos] += Fraction(1, 2)
    for slot in single_slots:
        pos = side_of_slot.get(slot)
        if pos is not None:
            counts[pos] += Fraction(1, 2)
    for corner in terminal_corners:
        q = _corner_to_quad_vertex(tri, k, corner)
        if q is not None:
            counts[_BIAS_SIDE[q]] += Fraction(1, 2)
    return counts


def shear_coordinates(tri, passages, single_slots=(), terminal_corners=()):
    """Shear coordinate vector of a curve given by passages on the surface."""
    out = {}
    for k in tri.internal_edges:
        a, b, c, d = _shear_contributions(tri, k, passages, single_slots, terminal_corners)
        out[k] = shear_from_corners(a, b, c, d)
    return out


def segment_passages(tri, seg):
    """(full passages, terminal crossing slots) of an open segment."""
    from .snakes import resolve_chain

    if seg.along is not None:
        return [], []
    chain = resolve_chain(tri, list(seg.word), seg.chain)
    passages = []
    for j in range(len(seg.word) - 1):
        t = chain[j + 1]
        triple = tri.triangles[t]
        passages.append((t, triple.index(seg.word[j]), triple.index(seg.word[j + 1])))
    first = (chain[0], tri.triangles[chain[0]].index(seg.word[0]))
    last = (chain[-1], tri.triangles[chain[-1]].index(seg.word[-1]))
    return passages, [first, last]


def lamination_coordinates(tri, lam):
    """(b, x) coordinates of a lamination built from curve presentations.

    Loops on one side contribute +-(weight/2) crossings to b; the shear of
    the portion lying on S gives x.  Doubled arcs are mirror symmetric, so
    they contribute b = 0 and the shear of the S-side arc.
    """
    internal = tri.internal_edges
    b = {e: Fraction(0) for e in internal}
    x = {e: Fraction(0) for e in internal}
    for loop in lam.loops:
        loop.validate(tri)
        counts = loop.crossing_counts(tri)
        sign = 1 if loop.side == SIDE_SO else -1
        for e in internal:
            b[e] += sign * loop.weight * Fraction(counts[e], 2)
        if loop.side == SIDE_S:
            shear = shear_coordinates(tri, loop.passages)
            for e in internal:
                x[e] += loop.weight * shear[e]
    for curve in lam.intersecting:
        s_words = [seg for seg in curve.segments if seg.side == SIDE_S]
        so_words = [seg for seg in curve.segments if seg.side == SIDE_SO]
        mirrors = sorted((tuple(s.word), s.along) for s in s_words) == sorted(
            (tuple(s.word), s.along) for s in so_words
        )
        if not mirrors:
            raise DomainError(
                "coordinates of a non-mirror intersecting curve are not modeled"
            )
        for seg in s_words:
            passages, singles = segment_passages(tri, seg)
            corners = [c for c in (seg.start_corner, seg.end_corner) if c]
            shear = shear_coordinates(tri, passages, singles, corners)
            for e in internal:
                x[e] += curve.weight * shear[e]
    return b, x


def crossing_parities(tri, lam):
    """Mod-2 crossing counts of the cycle carried by the lamination."""
    parities = {e: 0 for e in tri.edge_ids}
    for loop in lam.loops:
        if loop.weight.denominator != 1:
            raise DomainError("parities need integral weights")
        counts = loop.crossing_counts(tri)
        for e, c in counts.items():
            parities[e] = (parities[e] + int(loop.weight) * c) % 2
    for curve in lam.intersecting:
        if curve.weight.denominator != 1:
            raise DomainError("parities need integral weights")
        counts = curve.crossing_counts(tri)
        for e, c in counts.items():
            parities[e] = (parities[e] + int(curve.weight) * c) % 2
    return parities


# -- coordinate containers with integrality flags --------------------------


class ALamCoords:
    @staticmethod
    def integral(tri, values):
        vals = {e: Fraction(values[e]) for e in tri.edge_ids}
        if any(2 * v != int(2 * v) for v in vals.values()):
            return False
        for triple in tri.triangles:
            total = sum((vals[e] for e in triple), Fraction(0))
            if total.denominator != 1:
                return False
        return True


class XLamCoords:
    @staticmethod
    def integral(tri, values):
        return all(Fraction(values[e]).denominator == 1 for e in tri.internal_edges)


class DLamCoords:
    @staticmethod
    def integral(tri, b, x):
        return XLamCoords.integral(tri, b) and XLamCoords.integral(tri, x)


def transform_coords_under_flip(tri, kind, values, k):
    """Tropical transport of lamination coordinates through a flip at k.

    kind: 'a' (values over all edges), 'x' (over internal), or 'd' (pair of
    dicts over internal).  Returns (flipped triangulation, new values).
    """
    seed = epsilon_from_triangulation(tri)
    idx = edge_seed_index(tri)
    back = {v: e for e, v in idx.items()}
    if kind == "a":
        state = ClusterState(seed, KIND_TROP_A, {idx[e]: Fraction(values[e]) for e in tri.edge_ids})
    elif kind == "x":
        state = ClusterState(
            seed, KIND_TROP_X, {idx[e]: Fraction(values[e]) for e in tri.internal_edges}
        )
    elif kind == "d":
        b, x = values
        state = ClusterState(
            seed,
            KIND_TROP_D,
            (
                {idx[e]: Fraction(b[e]) for e in tri.internal_edges},
                {idx[e]: Fraction(x[e]) for e in tri.internal_edges},
            ),
        )
    else:
        raise DomainError("unknown coordinate kind %r" % kind)
    new_state = mutate_state(state, idx[k])
    new_tri = flip(tri, k)
    if kind == "a":
        out = {back[i]: v for i, v in new_state.values.items()}
    elif kind == "x":
        out = {back[i]: v for i, v in new_state.values.items()}
    else:
        out = (
            {back[i]: v for i, v in new_state.values[0].items()},
            {back[i]: v for i, v in new_state.values[1].items()},
        )
    return new_tri, out


# -- curve transport through flips ------------------------------------------


_REWRITE = {
    # (entry side, exit side) -> new passages, sides indexed a=0, b=1, c=2, d=3
    (0, 1): [("u2", 2, 0), ("u1", 0, 1)],
    (1, 0): [("u1", 1, 0), ("u2", 0, 2)],
    (0, 2): [("u2", 2, 0), ("u1", 0, 2)],
    (2, 0): [("u1", 2, 0), ("u2", 0, 2)],
    (0, 3): [("u2", 2, 1)],
    (3, 0): [("u2", 1, 2)],
    (1, 2): [("u1", 1, 2)],
    (2, 1): [("u1", 2, 1)],
    (1, 3): [("u1", 1, 0), ("u2", 0, 1)],
    (3, 1): [("u2", 1, 0), ("u1", 0, 1)],
    (2, 3): [("u1", 2, 0), ("u2", 0, 1)],
    (3, 2): [("u2", 1, 0), ("u1", 0, 2)],
}


def reroute_loop_under_flip(tri, passages, k):
    """Passage list of the same loop with respect to flip(tri, k)."""
    (t1, _), (t2, _) = flip_quad(tri, k)
    sides = _quad_side_slots(tri, k)
    side_of_slot = {slot: pos for pos, slot in enumerate(sides)}
    k_slot_1 = (t1, tri.triangles[t1].index(k))
    k_slot_2 = (t2, tri.triangles[t2].index(k))

    new_tri = flip(tri, k)

    def rewrite_run(run):
        if len(run) > 2:
            raise DomainError("unexpected run of %d passages in the quad" % len(run))
        t, i, _o = run[0]
        entry = side_of_slot.get((t, i))
        t, _i, o = run[-1]
        exit_ = side_of_slot.get((t, o))
        if entry is None or exit_ is None:
            raise DomainError("run does not enter and leave through quad sides")
        if len(run) == 2:
            if run[0][0] == run[1][0] or (run[0][0], run[0][2]) not in (k_slot_1, k_slot_2):
                raise DomainError("two-passage run must cross the flipped edge")
        new = []
        for tag, i2, o2 in _REWRITE[(entry, exit_)]:
            tri_index = t1 if tag == "u1" else t2
            triple = new_tri.triangles[tri_index]
            pk = triple.index(k)
            new.append((tri_index, (pk + i2) % 3, (pk + o2) % 3))
        return new

    n = len(passages)
    outside = [p for p, (t, _i, _o) in enumerate(passages) if t not in (t1, t2)]
    if outside:
        start = outside[0]
    else:
        # the loop lives inside the quadrilateral: start at a side entry
        entries = [p for p, (t, i, _o) in enumerate(passages) if (t, i) in side_of_slot]
        if not entries:
            raise DomainError("loop never crosses the quadrilateral sides")
        start = entries[0]
    ordered = [passages[(start + s) % n] for s in range(n)]
    out = []
    run = []
    for passage in ordered:
        t, i, _o = passage
        if t in (t1, t2):
            if run and (t, i) in side_of_slot:
                out.extend(rewrite_run(run))
                run = []
            run.append(passage)
        else:
            if run:
                out.extend(rewrite_run(run))
                run = []
            out.append(passage)
    if run:
        out.extend(rewrite_run(run))
    return out


def classify_integrality(tri, lam=None, coords=None):
    """The three equivalent integrality tests for a D-lamination.

    Returns a dict with any of the keys coords_integral, homology_null,
    pairing_rational that are computable from the supplied data; when a
    curve presentation is given all three are produced and cross-checked by
    the caller.
    """
    from .surfaces import z2_cycle_class

    out = {}
    if coords is not None:
        b, x = coords
        out["coords_integral"] = DLamCoords.integral(tri, b, x)
    elif lam is not None:
        b, x = lamination_coordinates(tri, lam)
        out["coords_integral"] = DLamCoords.integral(tri, b, x)
    if lam is not None:
        parities = crossing_parities(tri, lam)
        out["homology_null"] = z2_cycle_class(tri, parities)["null_homologous"]
        from .pairing import pairing_h_integral

        out["pairing_rational"] = pairing_h_integral(tri, lam)
    return out
