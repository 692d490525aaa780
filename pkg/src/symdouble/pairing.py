"""The canonical pairing of laminations with the double's coordinate torus.

Values are assembled from: generalized F-polynomials (traces of products of
polynomial turn matrices for loops, snake-graph F-polynomials for segments
of intersecting curves), an integer exponent vector on the B-variables, and
a half-integer exponent vector on the X-variables.  Substituting
Xhat_i = X_i prod_j B_j^{eps_ij} produces the numerator polynomials.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import HalfInt, LaurentExpr, RationalExpr
from .errors import DomainError, NotSubtractionFree
from .laminations import SIDE_S, SIDE_SO, segment_passages
from .seeds import Seed
from .snakes import arc_along_edge, expand_arc, y_var
from .surfaces import edge_seed_index, epsilon_from_triangulation


def pairing_vars(tri):
    internal = tri.internal_edges
    return tuple("B%s" % e for e in internal) + tuple("X%s" % e for e in internal)


def x_name(eid):
    return "X%s" % eid


def b_name(eid):
    return "B%s" % eid


def internal_epsilon(tri):
    """eps restricted to internal x internal, as a dict of dicts."""
    seed = epsilon_from_triangulation(tri)
    idx = edge_seed_index(tri)
    internal = tri.internal_edges
    return {
        i: {j: seed.epsilon[idx[i]][idx[j]] for j in internal} for i in internal
    }


def xhat_images(tri):
    """Xhat_i = X_i prod_j B_j^{eps_ij} over the pairing variables."""
    vars = pairing_vars(tri)
    eps = internal_epsilon(tri)
    images = {b_name(j): RationalExpr.var(vars, b_name(j)) for j in tri.internal_edges}
    for i in tri.internal_edges:
        exps = {x_name(i): 1}
        for j in tri.internal_edges:
            e = eps[i][j]
            if e:
                exps[b_name(j)] = int(e)
        images[x_name(i)] = RationalExpr(LaurentExpr.monomial(vars, exps))
    return images


def plain_images(tri):
    vars = pairing_vars(tri)
    return {
        x_name(i): RationalExpr.var(vars, x_name(i)) for i in tri.internal_edges
    }


# -- monodromy ------------------------------------------------------------


def _mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_pow(m, k):
    if k < 1:
        raise DomainError("matrix power needs k >= 1")
    out = None
    base = m
    while k:
        if k & 1:
            out = base if out is None else _mat_mul(out, base)
        k >>= 1
        if k:
            base = _mat_mul(base, base)
    return out


def _turn_matrix(vars, name, turn, half=True):
    """Left/right turn matrix, either with X^(1/2) entries or factored."""
    x = LaurentExpr.var(vars, name)
    zero = LaurentExpr.const(vars, 0)
    one = LaurentExpr.const(vars, 1)
    if half:
        xh = LaurentExpr.var(vars, name, Fraction(1, 2))
        xmh = LaurentExpr.var(vars, name, Fraction(-1, 2))
        if turn == "L":
            return ((xh, zero), (xmh, xmh))
        if turn == "R":
            return ((xh, xh), (zero, xmh))
    else:
        if turn == "L":
            return ((x, zero), (one, one))
        if turn == "R":
            return ((x, x), (zero, one))
    raise DomainError("turn must be 'L' or 'R'")


def monodromy_word_matrix(word, vars, name_of_edge, half=True):
    """rho = M(e_n) ... M(e_1) for a cyclic turn word."""
    if not word:
        raise DomainError("empty turn word")
    out = None
    for eid, turn in word:
        m = _turn_matrix(vars, name_of_edge(eid), turn, half)
        out = m if out is None else _mat_mul(m, out)
    return out


def normalize_trace(trace):
    """Fix the projective sign so the leading coefficient is positive."""
    if trace.is_zero():
        return trace
    if trace.leading_coefficient() < 0:
        return -trace
    return trace


def monodromy_trace(word, vars, name_of_edge, power=1, half=True):
    m = _mat_pow(monodromy_word_matrix(word, vars, name_of_edge, half), power)
    return normalize_trace(m[0][0] + m[1][1])


# -- pairing values --------------------------------------------------------


class PairingValue:
    """f_num(Xhat-substituted) / f_den(X) times B^g X^h."""

    __slots__ = ("vars", "f_num", "f_den", "b_exponents", "x_exponents")

    def __init__(self, vars, f_num, f_den, b_exponents, x_exponents):
        self.vars = tuple(vars)
        self.f_num = f_num
        self.f_den = f_den
        self.b_exponents = dict(b_exponents)
        self.x_exponents = {e: HalfInt.of(v) for e, v in x_exponents.items()}

    def assemble(self):
        exps = {}
        for e, g in self.b_exponents.items():
            if g:
                exps[b_name(e)] = g
        for e, h in self.x_exponents.items():
            if h.twice:
                exps[x_name(e)] = h
        monomial = LaurentExpr.monomial(self.vars, exps)
        return RationalExpr(self.f_num * monomial, self.f_den)

    def h_integral(self):
        return all(h.is_integer for h in self.x_exponents.values())

    def __mul__(self, other):
        if self.vars != other.vars:
            raise DomainError("pairing values over different variables")
        b = dict(self.b_exponents)
        for e, g in other.b_exponents.items():
            b[e] = b.get(e, 0) + g
        h = dict(self.x_exponents)
        for e, v in other.x_exponents.items():
            h[e] = HalfInt(h.get(e, HalfInt(0)).twice + v.twice)
        return PairingValue(
            self.vars, self.f_num * other.f_num, self.f_den * other.f_den, b, h
        )

    @classmethod
    def one(cls, tri):
        vars = pairing_vars(tri)
        one = LaurentExpr.const(vars, 1)
        return cls(vars, one, one, {}, {})


def _hat_exponent_monomial(tri, crossings, scale):
    """B- and X-exponents of prod_e Xhat_e^{scale * crossings_e}.

    scale is a Fraction (typically +-k/2); the B-part must come out
    integral, which the paper guarantees because every B occurs with even
    total degree in the product over a closed loop.
    """
    eps = internal_epsilon(tri)
    b_exp = {}
    x_exp = {}
    for j in tri.internal_edges:
        total = sum(
            (Fraction(crossings.get(e, 0)) * eps[e][j] for e in tri.internal_edges),
            Fraction(0),
        )
        g = scale * total
        if g.denominator != 1:
            raise DomainError("non-integral B-exponent; malformed loop data")
        if g:
            b_exp[j] = int(g)
    for e, c in crossings.items():
        if c:
            x_exp[e] = HalfInt.of(Fraction(scale * c))
    return b_exp, x_exp


def loop_pairing(tri, loop, m_orientation="same"):
    """Canonical pairing of a single closed loop against the double.

    Loops on the opposite surface give F_c(Xhat) times a monomial; loops on
    the base surface give 1/F_c(X); loops parallel to a gluing curve give a
    pure monomial depending on the orientations.
    """
    vars = pairing_vars(tri)
    k = loop.weight
    if k.denominator != 1:
        raise DomainError("pairing needs an integral weight")
    k = int(k)
    one = LaurentExpr.const(vars, 1)

    if loop.gamma_parallel:
        crossings = {}
        for e in loop.gamma_parallel:
            crossings[e] = crossings.get(e, 0) + 1
        if m_orientation == "same":
            sign = Fraction(-k, 2) if loop.orientation == SIDE_SO else Fraction(k, 2)
            b_exp, x_exp = _hat_exponent_monomial(tri, crossings, sign)
        elif m_orientation == "opposite":
            sign = Fraction(-k, 2) if loop.orientation == SIDE_S else Fraction(k, 2)
            b_exp, x_exp = {}, {
                e: HalfInt.of(sign * c) for e, c in crossings.items()
            }
        else:
            raise DomainError("m_orientation must be 'same' or 'opposite'")
        return PairingValue(vars, one, one, b_exp, x_exp)

    word = loop.turn_word(tri)
    crossings = loop.crossing_counts(tri)
    crossings = {e: c for e, c in crossings.items() if c}
    matrix = monodromy_word_matrix(word, vars, x_name, half=False)
    matrix = _mat_pow(matrix, k)
    trace = normalize_trace(matrix[0][0] + matrix[1][1])

    if loop.side == SIDE_SO:
        images = xhat_images(tri)
        f_num = RationalExpr(trace).substitute(images).as_laurent()
        b_exp, x_exp = _hat_exponent_monomial(tri, crossings, Fraction(-k, 2))
        return PairingValue(vars, f_num, one, b_exp, x_exp)

    x_exp = {e: HalfInt.of(Fraction(k * c, 2)) for e, c in crossings.items()}
    return PairingValue(vars, one, trace, {}, x_exp)


def _gauss_solve(rows, rhs):
    """Solve rows . h = rhs exactly; free variables are set to zero."""
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    aug = [list(map(Fraction, rows[i])) + [Fraction(rhs[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        scale = aug[r][c]
        aug[r] = [v / scale for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            raise DomainError("inconsistent linear system for the h-exponents")
    solution = [Fraction(0)] * n
    for row_index, c in enumerate(pivots):
        solution[c] = aug[row_index][n]
    return solution


def segment_f_and_g(tri, seg):
    """(F-polynomial over X-variables, full g-vector) of one segment."""
    vars = pairing_vars(tri)
    rename = {y_var(e): x_name(e) for e in tri.internal_edges}
    if seg.along is not None:
        _laurent, f, g = arc_along_edge(tri, seg.along)
        return f.num.rename(vars, rename), g
    f = expand_arc(tri, list(seg.word), "F", chain=seg.chain)
    g = expand_arc(tri, list(seg.word), "g", chain=seg.chain)
    return f.as_laurent().rename(vars, rename), g


def intersecting_pairing(tri, curve):
    """Theorem-main value of an intersecting curve (orientations all base)."""
    vars = pairing_vars(tri)
    k = curve.weight
    if k.denominator != 1:
        raise DomainError("pairing needs an integral weight")
    k = int(k)

    f_num = LaurentExpr.const(vars, 1)
    f_den = LaurentExpr.const(vars, 1)
    g_even = {e: 0 for e in tri.edge_ids}
    s = {e: Fraction(0) for e in tri.edge_ids}
    hat = xhat_images(tri)
    for seg in curve.segments:
        f_poly, g = segment_f_and_g(tri, seg)
        if seg.side == SIDE_SO:
            f_num = f_num * RationalExpr(f_poly).substitute(hat).as_laurent()
            for e in tri.edge_ids:
                g_even[e] += g[e]
                s[e] += g[e]
        else:
            f_den = f_den * f_poly
            for e in tri.edge_ids:
                s[e] -= g[e]

    internal = tri.internal_edges
    seed = epsilon_from_triangulation(tri)
    idx = edge_seed_index(tri)
    rows = [[seed.epsilon[idx[j]][idx[e]] for j in internal] for e in tri.edge_ids]
    rhs = [s[e] for e in tri.edge_ids]
    solution = _gauss_solve(rows, rhs)
    h = {}
    for j, value in zip(internal, solution):
        if 2 * value != int(2 * value):
            raise DomainError("h-exponent %s is not half-integral" % value)
        h[j] = HalfInt.of(value)

    b_exp = {e: g_even[e] for e in internal}
    value = PairingValue(vars, f_num, f_den, b_exp, h)
    if k == 1:
        return value
    out = value
    for _ in range(k - 1):
        out = out * value
    return out


def kappa(tri, eta, zeta):
    """Correction factor for reversing the orientation of a gluing curve.

    eta lists the N+1 lifted spoke labels around the puncture in
    counterclockwise order and zeta the N outer labels; the fan is
    re-triangulated by flips at eta_3 ... eta_N to express the cross ratio
    after reversal.  All labels are internal edges of the triangulation.
    """
    n_fan = len(zeta)
    if n_fan < 2 or len(eta) != n_fan + 1:
        raise DomainError("kappa needs N >= 2 triangles around the puncture")
    for label in tuple(eta) + tuple(zeta):
        if not tri.internal.get(label, False):
            raise DomainError("kappa label %r is not an internal edge" % label)
    vars = pairing_vars(tri)

    # fan polygon: spokes 0..N lift eta, outer edges lift zeta
    spokes = ["s%d" % i for i in range(n_fan + 1)]
    outer = ["o%d" % i for i in range(n_fan)]
    edges = [(name, 0 < i < n_fan) for i, name in enumerate(spokes)]
    edges += [(name, False) for name in outer]
    triangles = [(spokes[i], outer[i], spokes[i + 1]) for i in range(n_fan)]
    from .surfaces import IdealTriangulation

    poly = IdealTriangulation(edges, triangles)
    poly_seed = epsilon_from_triangulation(poly)
    poly_idx = edge_seed_index(poly)

    def run(values0):
        from .seeds import KIND_X, ClusterState, mutate_state

        state = ClusterState(
            poly_seed, KIND_X, {poly_idx[spokes[i]]: values0[i] for i in range(1, n_fan)}
        )
        for i in range(2, n_fan):
            state = mutate_state(state, poly_idx[spokes[i]])
        return state.values[poly_idx[spokes[1]]]

    plain0 = {i: RationalExpr.var(vars, x_name(eta[i])) for i in range(1, n_fan)}
    hat = xhat_images(tri)
    hat0 = {i: hat[x_name(eta[i])] for i in range(1, n_fan)}
    x_prime = run(plain0)
    xhat_prime = run(hat0)

    one = RationalExpr.const(vars, 1)
    factor = LaurentExpr.monomial(
        vars, {b_name(zeta[0]): 1, b_name(eta[0]): -1, b_name(eta[1]): -1}
    )
    result = (one + xhat_prime) / (one + x_prime) * RationalExpr(factor)
    if not result.reduced().is_subtraction_free() and not result.is_subtraction_free():
        raise NotSubtractionFree("kappa did not come out subtraction-free")
    return result


def pair_lamination(tri, lam, kappa_factors=()):
    """Product of component pairings, times supplied kappa corrections.

    kappa_factors: iterable of (eta, zeta, count) for gluing-curve
    components whose orientation is reversed, one count per weight-1 curve
    meeting the component.
    """
    total = PairingValue.one(tri)
    for loop in lam.loops:
        total = total * loop_pairing(tri, loop)
    for curve in lam.intersecting:
        total = total * intersecting_pairing(tri, curve)
    value = total.assemble()
    for eta, zeta, count in kappa_factors:
        value = value * kappa(tri, eta, zeta) ** count
    return value


def pairing_h_integral(tri, lam):
    """Whether the total half-integer X-exponent vector is integral."""
    total = PairingValue.one(tri)
    for loop in lam.loops:
        total = total * loop_pairing(tri, loop)
    for curve in lam.intersecting:
        total = total * intersecting_pairing(tri, curve)
    return total.h_integral()
