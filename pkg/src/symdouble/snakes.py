"""Snake graphs of arcs: tiles, perfect matchings, Laurent expansions.

A tile is a unit square with its diagonal labeled by the crossed edge; the
two flanking triangles supply the side labels.  Tiles are glued north or
east according to the triangle orientations, which alternate from tile to
tile.  Perfect matchings of the diagonal-free graph index the terms of the
expansion: a matching contributes weight x(P) times the height monomial
y(P) read off from the tiles enclosed by the symmetric difference with the
minimal matching.
"""

from __future__ import annotations

from .algebra import LaurentExpr, RationalExpr
from .errors import DomainError


class SnakeTile:
    """One tile: position, orientation bit, diagonal and side labels."""

    __slots__ = ("index", "pos", "orient", "diagonal", "sides", "glue_side")

    def __init__(self, index, pos, orient, diagonal, sides, glue_side):
        self.index = index
        self.pos = pos
        self.orient = orient
        self.diagonal = diagonal
        self.sides = sides  # {'N','E','S','W'} -> edge id
        self.glue_side = glue_side  # 'N', 'E', or None on the last tile

    def corners(self):
        x, y = self.pos
        return {
            "SW": (x, y),
            "SE": (x + 1, y),
            "NE": (x + 1, y + 1),
            "NW": (x, y + 1),
        }

    def side_segment(self, side):
        c = self.corners()
        return {
            "S": (c["SW"], c["SE"]),
            "E": (c["SE"], c["NE"]),
            "N": (c["NW"], c["NE"]),
            "W": (c["SW"], c["NW"]),
        }[side]


class SnakeGraph:
    """Glued tile sequence with the diagonal-free edge set."""

    def __init__(self, tiles, word, chain):
        self.tiles = tiles
        self.word = tuple(word)
        self.chain = tuple(chain)
        edges = {}
        boundary = {}
        for tile in tiles:
            for side in "SENW":
                seg = tile.side_segment(side)
                key = frozenset(seg)
                label = tile.sides[side]
                if key in edges:
                    if edges[key] != label:
                        raise DomainError(
                            "glued sides disagree: %r vs %r" % (edges[key], label)
                        )
                    boundary[key] = False
                else:
                    edges[key] = label
                    boundary[key] = True
        self.edges = edges
        self.is_boundary = boundary
        self.vertices = sorted({v for key in edges for v in key})

    def edge_label(self, key):
        return self.edges[key]


def _rotate_front(triple, eid):
    pos = triple.index(eid)
    return triple[pos:] + triple[:pos]


def resolve_chain(tri, word, chain=None):
    """Flanking triangle chain Delta_0..Delta_d for a crossing word.

    Consecutive word entries must be sides of a common triangle, with the
    crossing stepping to the other triangle at each edge.  When the chain is
    ambiguous (possible on surfaces where two triangles share two edges) the
    lexicographically first valid chain is chosen unless one is supplied.
    """
    if not word:
        raise DomainError("crossing word must be nonempty")
    for eid in word:
        if not tri.internal.get(eid, False):
            raise DomainError("crossed edge %r is not internal" % eid)
    if chain is not None:
        chain = tuple(chain)
        if len(chain) != len(word) + 1:
            raise DomainError("chain length must be word length + 1")
        if not _chain_valid(tri, word, chain):
            raise DomainError("supplied triangle chain does not fit the word")
        return chain
    candidates = []
    for start in sorted(tri.triangles_at(word[0])):
        built = _try_chain(tri, word, start)
        if built is not None:
            candidates.append(built)
    if not candidates:
        raise DomainError("inconsistent crossing word: no shared triangles")
    return sorted(candidates)[0]


def _other_triangle(tri, eid, t_index):
    ts = tri.triangles_at(eid)
    if t_index not in ts:
        return None
    return ts[1] if ts[0] == t_index else ts[0]


def _try_chain(tri, word, start):
    chain = [start]
    for j, eid in enumerate(word):
        nxt = _other_triangle(tri, eid, chain[-1])
        if nxt is None:
            return None
        if j + 1 < len(word) and word[j + 1] not in tri.triangles[nxt]:
            return None
        chain.append(nxt)
    return tuple(chain)


def _chain_valid(tri, word, chain):
    for j, eid in enumerate(word):
        ts = set(tri.triangles_at(eid))
        if {chain[j], chain[j + 1]} != ts:
            return False
        if j + 1 < len(word) and word[j + 1] not in tri.triangles[chain[j + 1]]:
            return False
    return True


def build_snake(tri, word, chain=None):
    """Snake graph of an arc from its crossing word."""
    chain = resolve_chain(tri, word, chain)
    d = len(word)
    tiles = []
    pos = (0, 0)
    orient = 1
    for j in range(d):
        diag = word[j]
        lower = tri.triangles[chain[j]]
        upper = tri.triangles[chain[j + 1]]
        _, p, q = _rotate_front(lower, diag)
        _, u, v = _rotate_front(upper, diag)
        sides = {}
        if orient == 1:
            sides["W"], sides["S"] = p, q
            sides["E"], sides["N"] = u, v
        else:
            sides["W"], sides["S"] = q, p
            sides["E"], sides["N"] = v, u
        if j + 1 < d:
            shared = [e for e in upper if e != diag and e != word[j + 1]]
            if len(shared) != 1:
                raise DomainError("cannot locate the shared side after %r" % diag)
            glue_label = shared[0]
            if sides["E"] == glue_label and sides["N"] != glue_label:
                glue_side = "E"
            elif sides["N"] == glue_label:
                glue_side = "N"
            else:
                raise DomainError("shared side %r not on the outgoing tile" % glue_label)
        else:
            glue_side = None
        tiles.append(SnakeTile(j, pos, orient, diag, sides, glue_side))
        if glue_side == "E":
            pos = (pos[0] + 1, pos[1])
        elif glue_side == "N":
            pos = (pos[0], pos[1] + 1)
        orient = -orient
    graph = SnakeGraph(tiles, word, chain)
    _check_gluing(graph)
    return graph


def _check_gluing(graph):
    for a, b in zip(graph.tiles, graph.tiles[1:]):
        seg = a.side_segment(a.glue_side)
        opposite = "W" if a.glue_side == "E" else "S"
        seg_b = b.side_segment(opposite)
        if frozenset(seg) != frozenset(seg_b) or a.sides[a.glue_side] != b.sides[opposite]:
            raise DomainError("tile gluing mismatch between %d and %d" % (a.index, b.index))


# -- perfect matchings ----------------------------------------------------


def enumerate_matchings(graph):
    """All perfect matchings, deterministic order, as frozensets of edge keys."""
    vertices = graph.vertices
    incident = {v: [] for v in vertices}
    for key in sorted(graph.edges, key=sorted):
        a, b = sorted(key)
        incident[a].append(key)
        incident[b].append(key)
    out = []

    def extend(pos, used, chosen):
        while pos < len(vertices) and vertices[pos] in used:
            pos += 1
        if pos == len(vertices):
            out.append(frozenset(chosen))
            return
        v = vertices[pos]
        for key in incident[v]:
            a, b = key
            other = b if a == v else a
            if other in used:
                continue
            used.add(v)
            used.add(other)
            chosen.append(key)
            extend(pos + 1, used, chosen)
            chosen.pop()
            used.discard(v)
            used.discard(other)

    extend(0, set(), [])
    return out


def match_count_dp(graph):
    """Matching count via a transfer scan along the tile sequence."""
    live = {}
    count = {(): 1}

    def close_vertex(states, v):
        new = {}
        for state, ways in states.items():
            state_dict = dict(state)
            if state_dict.get(v, False):
                state_dict.pop(v)
                key = tuple(sorted(state_dict.items()))
                new[key] = new.get(key, 0) + ways
        return new

    tiles = graph.tiles
    for idx, tile in enumerate(tiles):
        corners = set(tile.corners().values())
        future = set()
        for later in tiles[idx + 1 :]:
            future |= set(later.corners().values())
        sides = []
        for side in "SENW":
            seg = tile.side_segment(side)
            if tile.glue_side == side:
                continue
            sides.append(frozenset(seg))
        sides = sorted(set(sides), key=sorted)
        new_count = {}
        for state, ways in count.items():
            state_dict = dict(state)
            for mask in range(1 << len(sides)):
                chosen = [sides[i] for i in range(len(sides)) if mask >> i & 1]
                cover = dict(state_dict)
                ok = True
                for key in chosen:
                    for v in key:
                        if cover.get(v, False):
                            ok = False
                            break
                        cover[v] = True
                    if not ok:
                        break
                if not ok:
                    continue
                for v in corners:
                    cover.setdefault(v, False)
                key2 = tuple(sorted(cover.items()))
                new_count[key2] = new_count.get(key2, 0) + ways
        # retire vertices that no later tile touches
        retire = {v for state, _ in new_count.items() for v, _c in state} - future
        if tile.glue_side is None:
            retire |= corners
        collapsed = {}
        for state, ways in new_count.items():
            state_dict = dict(state)
            ok = True
            for v in sorted(retire, key=str):
                if v in state_dict:
                    if not state_dict[v]:
                        ok = False
                        break
                    state_dict.pop(v)
            if not ok:
                continue
            key2 = tuple(sorted(state_dict.items()))
            collapsed[key2] = collapsed.get(key2, 0) + ways
        count = collapsed
        live = future
    return sum(ways for state, ways in count.items() if not state)


def boundary_matchings(graph):
    """The two all-boundary matchings, (minimal, maximal).

    The minimal matching uses the side of the first tile carrying the
    counterclockwise-last side of the flanking triangle Delta_0 (its south
    side when the tile agrees with the surface orientation, west otherwise);
    this is the convention under which expansions match mutation and F has
    constant term 1.
    """
    all_matchings = enumerate_matchings(graph)
    boundary = [
        m for m in all_matchings if all(graph.is_boundary[key] for key in m)
    ]
    if len(boundary) != 2:
        raise DomainError(
            "expected exactly two boundary matchings, found %d" % len(boundary)
        )
    first = graph.tiles[0]
    marker = frozenset(first.side_segment("S" if first.orient == 1 else "W"))
    minimal = [m for m in boundary if marker in m]
    if len(minimal) != 1:
        raise DomainError("minimal matching marker is ambiguous")
    p_minus = minimal[0]
    p_plus = boundary[0] if boundary[1] == p_minus else boundary[1]
    return p_minus, p_plus


def matchings(graph):
    """(all matchings, minimal, maximal)."""
    all_matchings = enumerate_matchings(graph)
    p_minus, p_plus = boundary_matchings(graph)
    return all_matchings, p_minus, p_plus


def enclosed_tiles(graph, matching, p_minus):
    """Tiles enclosed by the symmetric difference with the minimal matching."""
    diff = matching ^ p_minus
    vertical = []
    for key in diff:
        (x1, y1), (x2, y2) = sorted(key)
        if x1 == x2:
            vertical.append((x1, min(y1, y2)))
    out = []
    for tile in graph.tiles:
        x, y = tile.pos
        crossings = sum(1 for (a, b) in vertical if b == y and a > x)
        if crossings % 2:
            out.append(tile.index)
    return out


# -- expansions -----------------------------------------------------------


def x_var(eid):
    return "x%s" % eid


def y_var(eid):
    return "y%s" % eid


def expansion_vars(tri):
    return tuple(x_var(e) for e in tri.edge_ids) + tuple(
        y_var(e) for e in tri.internal_edges
    )


def expand_arc(tri, word, mode="laurent", chain=None):
    """Snake-graph expansion of an arc.

    laurent: sum over matchings of x(P) y(P) over the crossing monomial, a
    subtraction-free Laurent polynomial with principal-coefficient height
    monomials.  F: the same with every x set to 1.  g: the multidegree of
    x(P-)/cross as a map edge id -> int.
    """
    graph = build_snake(tri, word, chain)
    all_matchings, p_minus, _p_plus = matchings(graph)
    vars = expansion_vars(tri)

    def weight(matching):
        exps = {}
        for key in matching:
            name = x_var(graph.edge_label(key))
            exps[name] = exps.get(name, 0) + 1
        for t_index in enclosed_tiles(graph, matching, p_minus):
            name = y_var(graph.tiles[t_index].diagonal)
            exps[name] = exps.get(name, 0) + 1
        return exps

    if mode == "g":
        exps = {}
        for key in p_minus:
            eid = graph.edge_label(key)
            exps[eid] = exps.get(eid, 0) + 1
        for eid in word:
            exps[eid] = exps.get(eid, 0) - 1
        return {e: exps.get(e, 0) for e in tri.edge_ids}

    total = LaurentExpr.const(vars, 0)
    for matching in all_matchings:
        total = total + LaurentExpr.monomial(vars, weight(matching))
    cross = LaurentExpr.monomial(
        vars, {x_var(e): word.count(e) for e in set(word)}
    )
    laurent = RationalExpr(total, cross)
    if mode == "laurent":
        return laurent
    if mode == "F":
        images = {}
        y_names = tuple(y_var(e) for e in tri.internal_edges)
        for e in tri.edge_ids:
            images[x_var(e)] = RationalExpr.const(y_names, 1)
        for e in tri.internal_edges:
            images[y_var(e)] = RationalExpr.var(y_names, y_var(e))
        f = laurent.substitute(images)
        if not f.den.is_one():
            raise DomainError("F-polynomial came out non-polynomial")
        constant = {name: 0 for name in y_names}
        if f.num.eval_exact({n: 0 for n in y_names}) != 1:
            raise DomainError("F-polynomial constant term is not 1")
        return f
    raise DomainError("unknown expansion mode %r" % mode)


def arc_along_edge(tri, eid):
    """Expansion data for an arc that coincides with an edge: F = 1, g = e_i."""
    vars = expansion_vars(tri)
    g = {e: (1 if e == eid else 0) for e in tri.edge_ids}
    laurent = RationalExpr(LaurentExpr.monomial(vars, {x_var(eid): 1}))
    y_names = tuple(y_var(e) for e in tri.internal_edges)
    f = RationalExpr.const(y_names, 1)
    return laurent, f, g
