"""Seeds and the multiplicative / tropical mutation rules.

A seed is an index set with a frozen subset, a Q-valued exchange function
epsilon, and positive skew-symmetrizers d_i such that epsilon_ij / d_j is
skew-symmetric.  Cluster states attach coordinate values of one flavor to a
seed; every mutation returns a fresh state with the matrix mutated in
lockstep.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import LaurentExpr, RationalExpr
from .errors import DomainError


def _sgn(value):
    return (value > 0) - (value < 0)


class Seed:
    """Exchange matrix with frozen set and skew-symmetrizers."""

    __slots__ = ("n", "frozen", "epsilon", "d")

    def __init__(self, epsilon, frozen=(), d=None):
        eps = tuple(tuple(Fraction(x) for x in row) for row in epsilon)
        n = len(eps)
        for row in eps:
            if len(row) != n:
                raise DomainError("exchange matrix must be square")
        frozen = frozenset(frozen)
        if any(i < 0 or i >= n for i in frozen):
            raise DomainError("frozen index out of range")
        if d is None:
            d = tuple(Fraction(1) for _ in range(n))
        else:
            d = tuple(Fraction(x) for x in d)
        if len(d) != n or any(x <= 0 for x in d):
            raise DomainError("need one positive symmetrizer per index")
        for i in range(n):
            for j in range(n):
                if (i not in frozen or j not in frozen) and eps[i][j].denominator != 1:
                    raise DomainError(
                        "epsilon[%d][%d]=%s must be an integer off the frozen block"
                        % (i, j, eps[i][j])
                    )
                if eps[i][j] / d[j] != -eps[j][i] / d[i]:
                    raise DomainError("epsilon_ij / d_j is not skew-symmetric")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "frozen", frozen)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Seed is immutable")

    @property
    def unfrozen(self):
        return tuple(i for i in range(self.n) if i not in self.frozen)

    def require_unfrozen(self, k):
        if not 0 <= k < self.n:
            raise DomainError("index %d out of range" % k)
        if k in self.frozen:
            raise DomainError("index %d is frozen" % k)

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        return (
            self.epsilon == other.epsilon
            and self.frozen == other.frozen
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.epsilon, self.frozen, self.d))

    def __repr__(self):
        return "Seed(n=%d, frozen=%s)" % (self.n, sorted(self.frozen))


def mutate_matrix(seed, k):
    """Matrix mutation at an unfrozen index; an involution, d unchanged."""
    seed.require_unfrozen(k)
    eps = seed.epsilon
    new = []
    for i in range(seed.n):
        row = []
        for j in range(seed.n):
            if k in (i, j):
                row.append(-eps[i][j])
            else:
                row.append(eps[i][j] + (abs(eps[i][k]) * eps[k][j] + eps[i][k] * abs(eps[k][j])) / 2)
        new.append(row)
    return Seed(new, seed.frozen, seed.d)


# Coordinate flavors.  A-values are indexed by all of I; X-values by the
# unfrozen set J; D-values are a (B, X) pair over J; the tropical flavors
# mirror them with exact rationals.
KIND_A = "A"
KIND_X = "X"
KIND_D = "D"
KIND_TROP_A = "trop-a"
KIND_TROP_X = "trop-x"
KIND_TROP_D = "trop-d"

_KINDS = (KIND_A, KIND_X, KIND_D, KIND_TROP_A, KIND_TROP_X, KIND_TROP_D)


class ClusterState:
    """A seed together with one flavor of coordinate values.

    ``values`` is a dict index -> value for A/X kinds, or a pair of dicts
    ``(B, X)`` / ``(b, x)`` for the double kinds.  Values are RationalExpr
    for multiplicative kinds and Fraction for tropical kinds.
    """

    __slots__ = ("seed", "kind", "values")

    def __init__(self, seed, kind, values):
        if kind not in _KINDS:
            raise DomainError("unknown state kind %r" % kind)
        if kind in (KIND_A, KIND_TROP_A):
            keys = set(range(seed.n))
            values = dict(values)
            if set(values) != keys:
                raise DomainError("%s state needs a value for every index" % kind)
        elif kind in (KIND_X, KIND_TROP_X):
            values = dict(values)
            if set(values) != set(seed.unfrozen):
                raise DomainError("%s state needs values exactly on unfrozen indices" % kind)
        else:
            b, x = values
            b, x = dict(b), dict(x)
            if set(b) != set(seed.unfrozen) or set(x) != set(seed.unfrozen):
                raise DomainError("%s state needs paired values on unfrozen indices" % kind)
            values = (b, x)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("ClusterState is immutable")

    def __eq__(self, other):
        if not isinstance(other, ClusterState):
            return NotImplemented
        if self.kind != other.kind or self.seed != other.seed:
            return False
        if self.kind in (KIND_D, KIND_TROP_D):
            return self.values[0] == other.values[0] and self.values[1] == other.values[1]
        return self.values == other.values

    @classmethod
    def symbolic(cls, seed, kind, prefix=None):
        """Fresh symbolic state: one variable per coordinate slot."""
        if kind == KIND_A:
            names = tuple("%s%d" % (prefix or "A", i + 1) for i in range(seed.n))
            vals = {i: RationalExpr.var(names, names[i]) for i in range(seed.n)}
            return cls(seed, kind, vals)
        if kind == KIND_X:
            names = tuple("%s%d" % (prefix or "X", j + 1) for j in seed.unfrozen)
            vals = {
                j: RationalExpr.var(names, "%s%d" % (prefix or "X", j + 1))
                for j in seed.unfrozen
            }
            return cls(seed, kind, vals)
        if kind == KIND_D:
            names = tuple("B%d" % (j + 1) for j in seed.unfrozen) + tuple(
                "X%d" % (j + 1) for j in seed.unfrozen
            )
            b = {j: RationalExpr.var(names, "B%d" % (j + 1)) for j in seed.unfrozen}
            x = {j: RationalExpr.var(names, "X%d" % (j + 1)) for j in seed.unfrozen}
            return cls(seed, kind, (b, x))
        raise DomainError("symbolic states only exist for multiplicative kinds")


def _exchange_monomials(state_values, eps_row, indices):
    """(prod over positive eps, prod over negative eps) of value^|eps|."""
    vars_hint = None
    for idx in indices:
        vars_hint = state_values[idx].vars
        break
    pos = RationalExpr(LaurentExpr.const(vars_hint or (), 1))
    neg = RationalExpr(LaurentExpr.const(vars_hint or (), 1))
    for j in indices:
        e = eps_row[j]
        if e > 0:
            pos = pos * state_values[j] ** int(e)
        elif e < 0:
            neg = neg * state_values[j] ** int(-e)
    return pos, neg


def mutate_state(state, k):
    """Mutate one coordinate flavor at unfrozen k; matrix mutates in lockstep."""
    seed = state.seed
    seed.require_unfrozen(k)
    eps = seed.epsilon
    new_seed = mutate_matrix(seed, k)
    kind = state.kind

    if kind == KIND_A:
        values = dict(state.values)
        pos, neg = _exchange_monomials(values, eps[k], range(seed.n))
        values[k] = ((pos + neg) / values[k]).reduced()
        return ClusterState(new_seed, kind, values)

    if kind == KIND_X:
        values = dict(state.values)
        old = state.values
        one = RationalExpr(LaurentExpr.const(old[k].vars, 1))
        for i in seed.unfrozen:
            if i == k:
                values[i] = one / old[k]
            else:
                e = eps[i][k]
                if e != 0:
                    factor = one + old[k] ** int(-_sgn(e))
                    values[i] = old[i] * factor ** int(-e)
        return ClusterState(new_seed, kind, values)

    if kind == KIND_D:
        b, x = state.values
        new_b, new_x = dict(b), dict(x)
        one = RationalExpr(LaurentExpr.const(x[k].vars, 1))
        pos, neg = _exchange_monomials(b, eps[k], seed.unfrozen)
        new_b[k] = ((x[k] * pos + neg) / ((one + x[k]) * b[k])).reduced()
        for i in seed.unfrozen:
            if i == k:
                new_x[i] = one / x[k]
            else:
                e = eps[i][k]
                if e != 0:
                    factor = one + x[k] ** int(-_sgn(e))
                    new_x[i] = x[i] * factor ** int(-e)
        return ClusterState(new_seed, kind, (new_b, new_x))

    if kind == KIND_TROP_A:
        values = dict(state.values)
        pos = sum((eps[k][j] * values[j] for j in range(seed.n) if eps[k][j] > 0), Fraction(0))
        neg = sum((-eps[k][j] * values[j] for j in range(seed.n) if eps[k][j] < 0), Fraction(0))
        values[k] = max(pos, neg) - values[k]
        return ClusterState(new_seed, kind, values)

    if kind == KIND_TROP_X:
        values = dict(state.values)
        old = state.values
        for i in seed.unfrozen:
            if i == k:
                values[i] = -old[k]
            else:
                e = eps[i][k]
                if e != 0:
                    values[i] = old[i] - e * max(Fraction(0), -_sgn(e) * old[k])
        return ClusterState(new_seed, kind, values)

    if kind == KIND_TROP_D:
        b, x = state.values
        new_b, new_x = dict(b), dict(x)
        pos = sum((eps[k][j] * b[j] for j in seed.unfrozen if eps[k][j] > 0), Fraction(0))
        neg = sum((-eps[k][j] * b[j] for j in seed.unfrozen if eps[k][j] < 0), Fraction(0))
        new_b[k] = max(x[k] + pos, neg) - max(Fraction(0), x[k]) - b[k]
        for i in seed.unfrozen:
            if i == k:
                new_x[i] = -x[k]
            else:
                e = eps[i][k]
                if e != 0:
                    new_x[i] = x[i] - e * max(Fraction(0), -_sgn(e) * x[k])
        return ClusterState(new_seed, kind, (new_b, new_x))

    raise DomainError("unknown state kind %r" % kind)


def mutate_word(state, word):
    """Apply mutations left to right."""
    for k in word:
        state = mutate_state(state, k)
    return state


# -- canonical maps p, phi, pi ------------------------------------------


def map_p(seed, a_values):
    """p*(X_i) = prod_j A_j^{eps_ij}, for unfrozen i."""
    if set(a_values) != set(range(seed.n)):
        raise DomainError("p needs an A-value for every index")
    out = {}
    for i in seed.unfrozen:
        pos, neg = _exchange_monomials(a_values, seed.epsilon[i], range(seed.n))
        out[i] = pos / neg
    return out


def map_phi(seed, a_values, a_circ_values):
    """phi*(B_i) = A_i° / A_i and phi*(X_i) = prod_j A_j^{eps_ij}."""
    if set(a_values) != set(range(seed.n)) or set(a_circ_values) != set(range(seed.n)):
        raise DomainError("phi needs full A-tuples on both factors")
    b = {i: a_circ_values[i] / a_values[i] for i in seed.unfrozen}
    x = map_p(seed, a_values)
    return b, x


def map_pi(seed, b_values, x_values):
    """pi*(X_i) = X_i and pi*(Xhat_i) = X_i prod_j B_j^{eps_ij} (j unfrozen)."""
    if set(b_values) != set(seed.unfrozen) or set(x_values) != set(seed.unfrozen):
        raise DomainError("pi needs paired (B, X) values on unfrozen indices")
    hat = {}
    for i in seed.unfrozen:
        pos, neg = _exchange_monomials(b_values, seed.epsilon[i], seed.unfrozen)
        hat[i] = x_values[i] * pos / neg
    return dict(x_values), hat


def canonical_maps(kind, seed, *value_tuples):
    if kind == "p":
        return map_p(seed, *value_tuples)
    if kind == "phi":
        return map_phi(seed, *value_tuples)
    if kind == "pi":
        return map_pi(seed, *value_tuples)
    raise DomainError("unknown canonical map %r" % kind)


def seed_to_dict(seed):
    """JSON-ready seed payload (1-based frozen indices)."""
    def enc(q):
        return str(q) if q.denominator != 1 else q.numerator

    return {
        "n": seed.n,
        "frozen": [i + 1 for i in sorted(seed.frozen)],
        "epsilon": [[enc(x) for x in row] for row in seed.epsilon],
        "d": [enc(x) for x in seed.d],
    }


def seed_from_dict(payload):
    try:
        n = payload["n"]
        eps = payload["epsilon"]
        frozen = [i - 1 for i in payload.get("frozen", [])]
        d = payload.get("d")
    except (KeyError, TypeError) as exc:
        raise DomainError("malformed seed payload: %s" % exc)
    if len(eps) != n:
        raise DomainError("seed payload: epsilon size disagrees with n")
    return Seed(eps, frozen, d)
