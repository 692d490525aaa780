"""Decorated surfaces, ideal triangulations, flips, and mod-2 homology.

Triangles are stored as triples of edge ids listed counterclockwise with
respect to the surface orientation; the opposite surface is represented by
reversing every triple.  Slot-level incidence lets an edge appear in two
different triangles or twice around the surface, but a triangle may not use
the same edge twice (self-folded triangles are rejected).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, FormatError
from .seeds import Seed, mutate_matrix


class DecoratedSurface:
    """Genus, punctures, and marked-point counts per boundary component.

    Boundary components must carry at least one marked point; a boundary
    circle without marked points is a puncture for triangulation purposes.
    The sporadic surfaces with no self-folded-free ideal triangulation are
    rejected.
    """

    __slots__ = ("genus", "punctures", "boundary")

    def __init__(self, genus, punctures, boundary):
        boundary = tuple(int(m) for m in boundary)
        if genus < 0 or punctures < 0 or any(m < 1 for m in boundary):
            raise DomainError("invalid surface data")
        g, r, s = genus, punctures, len(boundary)
        if r + sum(boundary) == 0:
            raise DomainError("no vertices: surface admits no ideal triangulation")
        if g == 0 and s == 0 and r <= 3:
            raise DomainError("sphere with at most three punctures is excluded")
        if g == 0 and s == 1 and boundary[0] == 1 and r <= 1:
            raise DomainError("monogon with at most one puncture is excluded")
        if g == 0 and s == 1 and boundary[0] in (2, 3) and r == 0:
            raise DomainError("unpunctured bigon and triangle are excluded")
        if self._triangle_count(g, r, s, sum(boundary)) <= 0:
            raise DomainError("surface admits no ideal triangulation")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "punctures", punctures)
        object.__setattr__(self, "boundary", boundary)

    def __setattr__(self, name, value):
        raise AttributeError("DecoratedSurface is immutable")

    @staticmethod
    def _triangle_count(g, r, s, marked):
        return 4 * g + 2 * r + 2 * s + marked - 4

    def expected_counts(self):
        """(vertices, internal edges, external edges, triangles)."""
        marked = sum(self.boundary)
        faces = self._triangle_count(self.genus, self.punctures, len(self.boundary), marked)
        internal = (3 * faces - marked) // 2
        return (self.punctures + marked, internal, marked, faces)

    def h1_rank(self):
        """dim H_1(S; Z/2) with punctures treated as boundary circles."""
        holes = self.punctures + len(self.boundary)
        return 2 * self.genus + max(0, holes - 1)

    def __eq__(self, other):
        if not isinstance(other, DecoratedSurface):
            return NotImplemented
        return (self.genus, self.punctures, self.boundary) == (
            other.genus,
            other.punctures,
            other.boundary,
        )

    def __repr__(self):
        return "DecoratedSurface(genus=%d, punctures=%d, boundary=%s)" % (
            self.genus,
            self.punctures,
            list(self.boundary),
        )


class IdealTriangulation:
    """Labeled ideal triangulation without self-folded triangles."""

    __slots__ = ("edge_ids", "internal", "triangles", "slots")

    def __init__(self, edges, triangles, surface=None):
        # edges: iterable of (id, internal flag); triangles: ccw triples of ids
        ids = []
        internal = {}
        for eid, flag in edges:
            if eid in internal:
                raise DomainError("duplicate edge id %r" % eid)
            internal[eid] = bool(flag)
            ids.append(eid)
        triangles = [tuple(t) for t in triangles]
        slots = {eid: [] for eid in ids}
        for t_index, triple in enumerate(triangles):
            if len(triple) != 3:
                raise DomainError("triangle %r is not a triple" % (triple,))
            if len(set(triple)) != 3:
                raise DomainError("self-folded triangle %r rejected" % (triple,))
            for pos, eid in enumerate(triple):
                if eid not in internal:
                    raise DomainError("triangle references unknown edge %r" % eid)
                slots[eid].append((t_index, pos))
        for eid in ids:
            need = 2 if internal[eid] else 1
            if len(slots[eid]) != need:
                raise DomainError(
                    "edge %r fills %d slots, expected %d"
                    % (eid, len(slots[eid]), need)
                )
        object.__setattr__(self, "edge_ids", tuple(sorted(ids)))
        object.__setattr__(self, "internal", internal)
        object.__setattr__(self, "triangles", tuple(triangles))
        object.__setattr__(self, "slots", slots)
        if surface is not None:
            v, e_int, e_ext, f = surface.expected_counts()
            have_int = sum(1 for e in ids if internal[e])
            if (
                len(triangles) != f
                or have_int != e_int
                or len(ids) - have_int != e_ext
            ):
                raise DomainError("triangulation does not match the surface counts")

    def __setattr__(self, name, value):
        raise AttributeError("IdealTriangulation is immutable")

    # -- structure -----------------------------------------------------

    @property
    def internal_edges(self):
        return tuple(e for e in self.edge_ids if self.internal[e])

    @property
    def external_edges(self):
        return tuple(e for e in self.edge_ids if not self.internal[e])

    def is_internal(self, eid):
        return self.internal[eid]

    def triangles_at(self, eid):
        return tuple(t for t, _pos in self.slots[eid])

    def shared_triangles(self, a, b):
        """Indices of triangles having both a and b as sides."""
        at_a = {t for t, _ in self.slots[a]}
        return tuple(t for t, _ in self.slots[b] if t in at_a)

    def opposite(self):
        """The same surface with reversed orientation: reverse every triple."""
        return IdealTriangulation(
            [(e, self.internal[e]) for e in self.edge_ids],
            [tuple(reversed(t)) for t in self.triangles],
        )

    def __eq__(self, other):
        if not isinstance(other, IdealTriangulation):
            return NotImplemented
        return (
            self.edge_ids == other.edge_ids
            and self.internal == other.internal
            and sorted(self._rotated(t) for t in self.triangles)
            == sorted(self._rotated(t) for t in other.triangles)
        )

    @staticmethod
    def _rotated(triple):
        best = min(range(3), key=lambda i: (triple[i:] + triple[:i]))
        return triple[best:] + triple[:best]

    def __repr__(self):
        return "IdealTriangulation(%s)" % (list(self.triangles),)


def epsilon_from_triangulation(tri):
    """Seed over the sorted edge ids; external edges frozen; d_i = 1.

    In each counterclockwise triple the entry for a consecutive pair (i, j)
    gets +1 and the reverse pair -1, summed over triangles.  The global
    chirality choice is validated by the flip/mutation commuting square.
    """
    order = {eid: pos for pos, eid in enumerate(tri.edge_ids)}
    n = len(tri.edge_ids)
    eps = [[Fraction(0)] * n for _ in range(n)]
    for triple in tri.triangles:
        for a in range(3):
            i, j = triple[a], triple[(a + 1) % 3]
            eps[order[i]][order[j]] += 1
            eps[order[j]][order[i]] -= 1
    frozen = [order[e] for e in tri.edge_ids if not tri.internal[e]]
    return Seed(eps, frozen)


def edge_seed_index(tri):
    """Map edge id -> seed index used by epsilon_from_triangulation."""
    return {eid: pos for pos, eid in enumerate(tri.edge_ids)}


def flip_quad(tri, k):
    """The two triangles at k rotated k-first: ((k,a,b), (k,c,d)) with indices."""
    if not tri.internal.get(k, False):
        raise DomainError("flip needs an internal edge, got %r" % k)
    (t1, p1), (t2, p2) = tri.slots[k]
    if t1 == t2:
        raise DomainError("edge %r bounds a self-folded configuration" % k)
    tri1 = tri.triangles[t1][p1:] + tri.triangles[t1][:p1]
    tri2 = tri.triangles[t2][p2:] + tri.triangles[t2][:p2]
    return (t1, tri1), (t2, tri2)


def flip(tri, k):
    """Flip an internal edge; labels survive through the natural bijection."""
    (t1, (k1, a, b)), (t2, (k2, c, d)) = flip_quad(tri, k)
    assert k1 == k2 == k
    if b == c or d == a:
        raise DomainError("flip at %r is irregular (creates a self-folded triangle)" % k)
    new_triangles = list(tri.triangles)
    new_triangles[t1] = (k, b, c)
    new_triangles[t2] = (k, d, a)
    return IdealTriangulation(
        [(e, tri.internal[e]) for e in tri.edge_ids], new_triangles
    )


def flip_is_regular(tri, k):
    try:
        (t1, (_, a, b)), (t2, (_, c, d)) = flip_quad(tri, k)
    except DomainError:
        return False
    return b != c and d != a


# -- mod-2 homology ------------------------------------------------------


def _gf2_span_contains(rows, target):
    """Membership of target in the GF(2) row span, via bitmask elimination."""
    basis = []
    for row in rows:
        cur = row
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
    cur = target
    for b in basis:
        cur = min(cur, cur ^ b)
    return cur == 0


def _gf2_rank(rows):
    rank = 0
    basis = []
    for row in rows:
        cur = row
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
            rank += 1
    return rank


def z2_cycle_class(tri, crossing_parities):
    """Decide whether the given edge-crossing parities bound mod 2.

    The parity vector is read as a mod-2 one-chain carried by the
    triangulation; it bounds exactly when it lies in the span of the
    triangle boundary vectors (each triangle contributes its three sides).
    """
    order = edge_seed_index(tri)
    if set(crossing_parities) - set(order):
        raise DomainError("parity vector mentions unknown edges")
    target = 0
    for eid, bit in crossing_parities.items():
        if int(bit) % 2:
            target |= 1 << order[eid]
    rows = []
    for triple in tri.triangles:
        row = 0
        for eid in triple:
            row ^= 1 << order[eid]
        rows.append(row)
    return {"null_homologous": _gf2_span_contains(rows, target)}


def h1_rank(tri):
    """dim H_1(S; Z/2) from the dual spine of the triangulation."""
    internal = tri.internal_edges
    parent = list(range(len(tri.triangles)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in internal:
        (t1, _), (t2, _) = tri.slots[eid]
        parent[find(t1)] = find(t2)
    components = len({find(t) for t in range(len(tri.triangles))})
    return len(internal) - len(tri.triangles) + components


# -- standard families ---------------------------------------------------


def polygon_surface(n):
    return DecoratedSurface(0, 0, [n])


def polygon_triangulation(n):
    """Disk with n marked points, fan triangulation from vertex 0.

    Boundary side i joins vertices i and i+1 (mod n) and has id i; the fan
    diagonal from vertex 0 to vertex j has id n + (j - 2).  Returns the
    triangulation and a map edge id -> vertex pair.
    """
    if n < 4:
        raise DomainError("need at least four marked points for an internal edge")
    chords = {}
    edges = []
    for i in range(n):
        edges.append((i, False))
        chords[i] = (i, (i + 1) % n)
    for j in range(2, n - 1):
        edges.append((n + j - 2, True))
        chords[n + j - 2] = (0, j)

    def side(u, v):
        for eid, pair in chords.items():
            if pair in ((u, v), (v, u)):
                return eid
        raise DomainError("no edge between %d and %d" % (u, v))

    triangles = []
    for j in range(1, n - 1):
        triangles.append((side(0, j), side(j, j + 1), side(j + 1, 0)))
    tri = IdealTriangulation(edges, triangles, polygon_surface(n))
    return tri, chords


def annulus_surface():
    return DecoratedSurface(0, 0, [1, 1])


def annulus_triangulation():
    """Annulus with one marked point per boundary.

    Edges 0 and 1 run between the two marked points (internal); edge 2 is
    the outer boundary loop and edge 3 the inner one.
    """
    edges = [(0, True), (1, True), (2, False), (3, False)]
    triangles = [(0, 1, 2), (3, 0, 1)]
    return IdealTriangulation(edges, triangles, annulus_surface())


def punctured_torus_surface():
    return DecoratedSurface(1, 1, [])


def punctured_torus_triangulation():
    """Once-punctured torus: three internal edges, two triangles."""
    edges = [(0, True), (1, True), (2, True)]
    triangles = [(0, 2, 1), (1, 0, 2)]
    return IdealTriangulation(edges, triangles, punctured_torus_surface())


def punctured_bigon_surface():
    return DecoratedSurface(0, 1, [2])


def punctured_bigon_triangulation():
    """Once-punctured bigon: two boundary arcs (0, 1), two spokes (2, 3)."""
    edges = [(0, False), (1, False), (2, True), (3, True)]
    triangles = [(0, 3, 2), (2, 3, 1)]
    return IdealTriangulation(edges, triangles, punctured_bigon_surface())


def triangulation_to_dict(tri):
    return {
        "edges": [{"id": e, "internal": tri.internal[e]} for e in tri.edge_ids],
        "triangles": [list(t) for t in tri.triangles],
    }


def triangulation_from_dict(payload, surface=None):
    try:
        edges = [(e["id"], e["internal"]) for e in payload["edges"]]
        triangles = [tuple(t) for t in payload["triangles"]]
    except (KeyError, TypeError) as exc:
        raise FormatError("malformed triangulation payload: %s" % exc)
    return IdealTriangulation(edges, triangles, surface)
