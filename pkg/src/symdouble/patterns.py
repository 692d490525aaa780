"""Cluster patterns with coefficients in a semifield.

The exchange matrix of a labeled seed is carried as the exchange function
epsilon of a Seed, with b_ij = epsilon_ji.  Coefficients y_j live in one of
three semifields: the tropical semifield Trop(y_1, ..., y_m) with monomials
and componentwise-min addition, the semifield of subtraction-free rational
expressions, and the one-element semifield.  Principal-coefficient runs
record X-polynomials, F-polynomials and g-vectors for every variable they
produce.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import LaurentExpr, RationalExpr
from .errors import DomainError, NotSubtractionFree
from .seeds import Seed, mutate_matrix, _sgn


class TropSemifield:
    """Trop(y_1..y_m): free abelian group on monomials, a + b = min exponents."""

    name = "trop-FZ"

    def __init__(self, y_names):
        self.y_names = tuple(y_names)

    def one(self):
        return (0,) * len(self.y_names)

    def generator(self, index):
        vec = [0] * len(self.y_names)
        vec[index] = 1
        return tuple(vec)

    def validate(self, elem):
        if not (isinstance(elem, tuple) and len(elem) == len(self.y_names)):
            raise DomainError("not a tropical monomial: %r" % (elem,))
        return elem

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def power(self, a, k):
        return tuple(x * k for x in a)

    def oplus_one(self, a):
        return tuple(min(x, 0) for x in a)

    def invert(self, a):
        return tuple(-x for x in a)

    def embed(self, a, vars):
        exps = {name: e for name, e in zip(self.y_names, a)}
        return RationalExpr(LaurentExpr.monomial(vars, exps))

    def eval_poly(self, poly, values):
        """Evaluate a positive polynomial over the y-variables in Trop."""
        if not poly.is_subtraction_free():
            raise NotSubtractionFree("semifield evaluation needs positive coefficients")
        total = None
        for exps, _coeff in poly.terms.items():
            term = self.one()
            for name, twice in zip(poly.vars, exps):
                if twice:
                    if twice % 2:
                        raise DomainError("tropical evaluation needs integer exponents")
                    term = self.mul(term, self.power(values[name], twice // 2))
            total = term if total is None else tuple(min(x, y) for x, y in zip(total, term))
        return total


class QsfSemifield:
    """Subtraction-free rational expressions over a fixed variable tuple."""

    name = "Q_sf"

    def __init__(self, vars):
        self.vars = tuple(vars)

    def one(self):
        return RationalExpr.const(self.vars, 1)

    def validate(self, elem):
        if elem.vars != self.vars:
            raise DomainError("element lives over %r, not %r" % (elem.vars, self.vars))
        if not elem.is_subtraction_free():
            raise NotSubtractionFree("value is not subtraction-free")
        return elem

    def mul(self, a, b):
        return a * b

    def power(self, a, k):
        return a ** k

    def oplus_one(self, a):
        return a + self.one()

    def invert(self, a):
        return self.one() / a

    def embed(self, a, vars):
        if vars == a.vars:
            return a
        return RationalExpr(a.num.rename(vars), a.den.rename(vars))

    def eval_poly(self, poly, values):
        if not poly.is_subtraction_free():
            raise NotSubtractionFree("semifield evaluation needs positive coefficients")
        images = {name: values[name] for name in poly.vars}
        return RationalExpr(poly).substitute(images)


class TrivialSemifield:
    """The one-element semifield {1}."""

    name = "trivial"

    def one(self):
        return 1

    def validate(self, elem):
        if elem != 1:
            raise DomainError("the trivial semifield only contains 1")
        return 1

    def mul(self, a, b):
        return 1

    def power(self, a, k):
        return 1

    def oplus_one(self, a):
        return 1

    def invert(self, a):
        return 1

    def embed(self, a, vars):
        return RationalExpr.const(vars, 1)

    def eval_poly(self, poly, values):
        return 1


class CoefficientState:
    """Cluster variables plus semifield coefficients attached to a seed.

    ``x`` maps every index to a RationalExpr over ``ambient_vars``; ``y``
    maps every unfrozen index to a semifield element.  Frozen indices keep
    their x-value forever and carry no coefficient.
    """

    __slots__ = ("seed", "semifield", "x", "y", "ambient_vars")

    def __init__(self, seed, semifield, x, y, ambient_vars):
        self.seed = seed
        self.semifield = semifield
        self.x = dict(x)
        self.y = {j: semifield.validate(v) for j, v in y.items()}
        self.ambient_vars = tuple(ambient_vars)
        if set(self.x) != set(range(seed.n)):
            raise DomainError("need an x-value for every index")
        if set(self.y) != set(seed.unfrozen):
            raise DomainError("need a coefficient for every unfrozen index")

    def clone(self, seed=None, x=None, y=None):
        return CoefficientState(
            seed or self.seed,
            self.semifield,
            x if x is not None else self.x,
            y if y is not None else self.y,
            self.ambient_vars,
        )


def mutate_with_coefficients(state, k):
    """One mutation of (x, y, epsilon) with sums interpreted in the semifield."""
    seed = state.seed
    seed.require_unfrozen(k)
    eps = seed.epsilon
    sf = state.semifield
    y = dict(state.y)
    x = dict(state.x)

    y_k = state.y[k]
    broken = sf.oplus_one(y_k)
    for j in seed.unfrozen:
        if j == k:
            y[j] = sf.invert(y_k)
        else:
            e = int(eps[j][k])  # b_kj
            term = sf.power(y_k, max(e, 0))
            term = sf.mul(state.y[j], term)
            y[j] = sf.mul(term, sf.power(broken, -e))

    one = RationalExpr.const(state.ambient_vars, 1)
    pos, neg = one, one
    for i in range(seed.n):
        e = int(eps[k][i])  # b_ik
        if e > 0:
            pos = pos * state.x[i] ** e
        elif e < 0:
            neg = neg * state.x[i] ** (-e)
    numerator = sf.embed(y_k, state.ambient_vars) * pos + neg
    denominator = sf.embed(broken, state.ambient_vars) * state.x[k]
    x[k] = (numerator / denominator).reduced()

    return state.clone(seed=mutate_matrix(seed, k), x=x, y=y)


def mutate_coefficient_word(state, word):
    for k in word:
        state = mutate_with_coefficients(state, k)
    return state


# -- principal coefficients ----------------------------------------------


class VariableRecord:
    """One cluster variable from a principal run: X-polynomial, F, g."""

    __slots__ = ("slot", "prefix", "x_poly", "f_poly", "g_vector")

    def __init__(self, slot, prefix, x_poly, f_poly, g_vector):
        self.slot = slot
        self.prefix = prefix
        self.x_poly = x_poly
        self.f_poly = f_poly
        self.g_vector = g_vector


class PrincipalRun:
    """Mutation run with principal coefficients at the initial seed.

    X-polynomials live over variables x1..xn, y1..yn (y only on unfrozen
    indices).  Every record is checked for homogeneity under
    deg(x_i) = e_i, deg(y_j) = -(column j of the initial b-matrix); the
    common degree is the g-vector.
    """

    def __init__(self, seed, word, x_names=None, y_names=None):
        for k in word:
            seed.require_unfrozen(k)
        self.seed0 = seed
        self.word = tuple(word)
        self.x_names = tuple(x_names) if x_names else tuple(
            "x%d" % (i + 1) for i in range(seed.n)
        )
        self.y_names = tuple(y_names) if y_names else tuple(
            "y%d" % (j + 1) for j in seed.unfrozen
        )
        self.ambient = self.x_names + self.y_names
        self.semifield = TropSemifield(self.y_names)
        unfrozen = seed.unfrozen
        x0 = {i: RationalExpr.var(self.ambient, self.x_names[i]) for i in range(seed.n)}
        y0 = {j: self.semifield.generator(t) for t, j in enumerate(unfrozen)}
        state = CoefficientState(seed, self.semifield, x0, y0, self.ambient)
        self.states = [state]
        self.records = [self._snapshot(state, ())]
        prefix = []
        for k in self.word:
            state = mutate_with_coefficients(state, k)
            prefix.append(k)
            self.states.append(state)
            self.records.append(self._snapshot(state, tuple(prefix)))

    # b^0 column j as a degree vector: b_ij = eps_ji of the initial seed
    def _y_degree(self, j):
        return tuple(-self.seed0.epsilon[j][i] for i in range(self.seed0.n))

    def _snapshot(self, state, prefix):
        out = {}
        for slot in range(self.seed0.n):
            x_poly = state.x[slot]
            f_poly = self._specialize_f(x_poly)
            g = self._multidegree(x_poly)
            out[slot] = VariableRecord(slot, prefix, x_poly, f_poly, g)
        return out

    def _specialize_f(self, x_poly):
        images = {name: RationalExpr.const(self.y_names, 1) for name in self.x_names}
        images.update({name: RationalExpr.var(self.y_names, name) for name in self.y_names})
        f = x_poly.substitute(images)
        return f

    def _multidegree(self, x_poly):
        laurent = x_poly.as_laurent()
        n = self.seed0.n
        y_cols = {name: self._y_degree(j) for name, j in zip(self.y_names, self.seed0.unfrozen)}
        degree = None
        for exps, _coeff in laurent.terms.items():
            vec = [Fraction(0)] * n
            for name, twice in zip(laurent.vars, exps):
                if twice == 0:
                    continue
                if twice % 2:
                    raise DomainError("principal run produced a half-integer exponent")
                e = twice // 2
                if name in self.x_names:
                    vec[self.x_names.index(name)] += e
                else:
                    col = y_cols[name]
                    for i in range(n):
                        vec[i] += e * col[i]
            vec = tuple(vec)
            if degree is None:
                degree = vec
            elif degree != vec:
                raise DomainError("X-polynomial is not homogeneous; internal error")
        if degree is None:
            raise DomainError("zero X-polynomial")
        if any(v.denominator != 1 for v in degree):
            raise DomainError("non-integral multidegree")
        return tuple(int(v) for v in degree)

    # -- accessors ------------------------------------------------------

    def record(self, step, slot):
        return self.records[step][slot]

    def x_polynomial(self, step, slot):
        return self.records[step][slot].x_poly

    def f_polynomial(self, step, slot):
        return self.records[step][slot].f_poly

    def g_vector(self, step, slot):
        return self.records[step][slot].g_vector

    def final(self, slot):
        return self.records[-1][slot]

    def all_records(self):
        for step_records in self.records:
            for rec in step_records.values():
                yield rec

    def check_laurent_positive(self):
        """Every X-polynomial is Laurent in x with positive y-polynomial coefficients."""
        for rec in self.all_records():
            laurent = rec.x_poly.as_laurent()
            for exps, coeff in laurent.terms.items():
                if coeff <= 0:
                    raise DomainError("negative coefficient in a cluster variable")
                for name, twice in zip(laurent.vars, exps):
                    if name in self.y_names and twice < 0:
                        raise DomainError("negative y-exponent in a cluster variable")
        return True


def make_semifield(tag, vars=None):
    if tag in ("trop-FZ", "trop"):
        return TropSemifield(vars or ())
    if tag in ("Q_sf", "qsf"):
        return QsfSemifield(vars or ())
    if tag == "trivial":
        return TrivialSemifield()
    raise DomainError("unknown semifield %r" % tag)


def separation_reconstruct(run, step, slot, semifield, x_values, y_values):
    """Rebuild a cluster variable from its F-polynomial and g-vector.

    Returns F|_F(yhat_1..yhat_n) / F|_P(y_1..y_n) * x^g where
    yhat_j = y_j prod_i x_i^{b0_ij} and all values live over a common
    ambient variable tuple.  Must agree with the directly mutated variable.
    """
    rec = run.record(step, slot)
    seed0 = run.seed0
    ambient = None
    for value in x_values.values():
        ambient = value.vars
        break
    if ambient is None:
        raise DomainError("need at least one x-value")

    yhat = {}
    for name, j in zip(run.y_names, seed0.unfrozen):
        image = semifield.embed(y_values[j], ambient)
        for i in range(seed0.n):
            e = int(seed0.epsilon[j][i])  # b0_ij = eps0_ji
            if e:
                image = image * x_values[i] ** e
        yhat[name] = image

    f_upstairs = rec.f_poly.substitute(yhat)

    f_poly = rec.f_poly.as_laurent()
    named_y = {name: y_values[j] for name, j in zip(run.y_names, seed0.unfrozen)}
    downstairs_elem = semifield.eval_poly(f_poly, named_y)
    f_downstairs = semifield.embed(downstairs_elem, ambient)

    out = f_upstairs / f_downstairs
    for i in range(seed0.n):
        g = rec.g_vector[i]
        if g:
            out = out * x_values[i] ** g
    return out
