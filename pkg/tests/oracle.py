"""Geometric oracle helpers shared by the test suite.

Polygon triangulations are tracked as labeled chord maps so flips can be
replayed on actual vertex pairs; crossing words are extracted with exact
rational geometry (vertices on a parabola, which is convex position).
Annulus arcs are tracked in the universal cover (an infinite triangulated
strip).
"""

from fractions import Fraction

from symdouble.surfaces import flip, flip_quad


def _common_vertex(p, q):
    shared = set(p) & set(q)
    assert len(shared) == 1, (p, q)
    return shared.pop()


def flip_with_chords(tri, chords, k):
    """Flip edge k and update the chord map via the flip quadrilateral."""
    (_, (_, a, b)), (_, (_, c, d)) = flip_quad(tri, k)
    new_tri = flip(tri, k)
    new_chords = dict(chords)
    new_chords[k] = (_common_vertex(chords[a], chords[b]),
                     _common_vertex(chords[c], chords[d]))
    return new_tri, new_chords


def chord_key(tri, chords):
    """Unlabeled triangulation key: the set of internal chords."""
    return frozenset(frozenset(chords[e]) for e in tri.internal_edges)


def _pos(vertex):
    t = Fraction(vertex)
    return (t, t * t)


def _segment_param(p1, p2, q1, q2):
    """Parameter of the intersection along p1->p2, or None."""
    (x1, y1), (x2, y2) = p1, p2
    (x3, y3), (x4, y4) = q1, q2
    dx1, dy1 = x2 - x1, y2 - y1
    dx2, dy2 = x4 - x3, y4 - y3
    den = dx1 * dy2 - dy1 * dx2
    if den == 0:
        return None
    t = ((x3 - x1) * dy2 - (y3 - y1) * dx2) / den
    s = ((x3 - x1) * dy1 - (y3 - y1) * dx1) / den
    if 0 < t < 1 and 0 < s < 1:
        return t
    return None


def crossing_word(tri, chords, arc):
    """Internal edges of the triangulation crossed by the chord, in order."""
    u, v = arc
    p1, p2 = _pos(u), _pos(v)
    hits = []
    for eid in tri.internal_edges:
        a, b = chords[eid]
        t = _segment_param(p1, p2, _pos(a), _pos(b))
        if t is not None:
            hits.append((t, eid))
    hits.sort()
    return [eid for _t, eid in hits]


def all_polygon_arcs(n):
    """All chords of the n-gon (non-adjacent vertex pairs)."""
    out = []
    for u in range(n):
        for v in range(u + 2, n):
            if u == 0 and v == n - 1:
                continue
            out.append((u, v))
    return out


# -- annulus universal cover ----------------------------------------------
#
# The annulus with one marked point per boundary lifts to the strip
# 0 <= y <= 1 with outer vertices A_k = (k, 1) and inner vertices
# B_k = (k, 0); the deck transformation is (x, y) -> (x + 1, y).  The
# initial triangulation lifts edge 0 to the verticals (A_k, B_k) and edge 1
# to the diagonals (B_k, A_{k+1}); triangle (0,1,2) lifts to the top
# triangles A_k B_k A_{k+1} and triangle (3,0,1) to the bottom ones.


def _vertex_pos(vertex):
    kind, k = vertex
    return (Fraction(k), Fraction(1) if kind == "A" else Fraction(0))


def _translate(vertex, by):
    kind, k = vertex
    return (kind, k + by)


def _orient(p, q, r):
    (x1, y1), (x2, y2), (x3, y3) = p, q, r
    val = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
    return (val > 0) - (val < 0)


def _proper_cross(p1, p2, q1, q2):
    if _orient(p1, p2, q1) * _orient(p1, p2, q2) >= 0:
        return False
    if _orient(q1, q2, p1) * _orient(q1, q2, p2) >= 0:
        return False
    return True


class AnnulusCover:
    """Flip tracking for the annulus in its universal cover."""

    def __init__(self):
        self.chords = {0: (("A", 0), ("B", 0)), 1: (("B", 0), ("A", 1))}

    def _span(self):
        ks = [k for pair in self.chords.values() for _kind, k in pair]
        return min(ks) - 3, max(ks) + 3

    def _all_lift_segments(self):
        lo, hi = self._span()
        out = []
        for eid, (u, v) in self.chords.items():
            for m in range(lo - hi - 1, hi - lo + 2):
                out.append((_translate(u, m), _translate(v, m)))
        return out

    def _vertices(self):
        lo, hi = self._span()
        return [(kind, k) for kind in ("A", "B") for k in range(lo, hi + 1)]

    def _is_empty_triangle(self, p, q, v):
        pp, qq, vv = _vertex_pos(p), _vertex_pos(q), _vertex_pos(v)
        if _orient(pp, qq, vv) == 0:
            return False
        for w in self._vertices():
            if w in (p, q, v):
                continue
            ww = _vertex_pos(w)
            s1 = _orient(pp, qq, ww)
            s2 = _orient(qq, vv, ww)
            s3 = _orient(vv, pp, ww)
            if min(s1, s2, s3) >= 0 or max(s1, s2, s3) <= 0:
                return False  # w on the closed triangle
        for seg in self._all_lift_segments():
            s1, s2 = _vertex_pos(seg[0]), _vertex_pos(seg[1])
            for a, b in ((pp, vv), (qq, vv)):
                if _proper_cross(a, b, s1, s2):
                    return False
        return True

    def flip(self, eid):
        p, q = self.chords[eid]
        apexes = [
            v for v in self._vertices() if v not in (p, q) and self._is_empty_triangle(p, q, v)
        ]
        pp, qq = _vertex_pos(p), _vertex_pos(q)
        left = [v for v in apexes if _orient(pp, qq, _vertex_pos(v)) > 0]
        right = [v for v in apexes if _orient(pp, qq, _vertex_pos(v)) < 0]
        assert len(left) == 1 and len(right) == 1, (p, q, apexes)
        self.chords = dict(self.chords)
        self.chords[eid] = (left[0], right[0])

    def crossing_word(self, eid):
        """Crossing word and triangle chain of a chord against the base zigzag."""
        p, q = self.chords[eid]
        pp, qq = _vertex_pos(p), _vertex_pos(q)
        lo = int(min(pp[0], qq[0])) - 2
        hi = int(max(pp[0], qq[0])) + 2
        hits = []
        for k in range(lo, hi + 1):
            for base, (u, v) in ((0, (("A", k), ("B", k))), (1, (("B", k), ("A", k + 1)))):
                if set((u, v)) & set((p, q)):
                    continue
                t = _segment_param(pp, qq, _vertex_pos(u), _vertex_pos(v))
                if t is not None:
                    hits.append((t, base))
        hits.sort()
        word = [base for _t, base in hits]
        params = [Fraction(0)] + [t for t, _ in hits] + [Fraction(1)]
        chain = []
        for i in range(len(params) - 1):
            mid = (params[i] + params[i + 1]) / 2
            x = pp[0] + (qq[0] - pp[0]) * mid
            y = pp[1] + (qq[1] - pp[1]) * mid
            m = x.__floor__()
            # top triangle A_m B_m A_{m+1} is x - m <= y; bottom is the rest
            chain.append(0 if x - m <= y else 1)
        return word, chain
