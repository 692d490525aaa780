import random
from fractions import Fraction

import pytest

from symdouble.algebra import RationalExpr, parse_rational
from symdouble.errors import DomainError
from symdouble.seeds import (
    KIND_A,
    KIND_D,
    KIND_TROP_A,
    KIND_TROP_D,
    KIND_TROP_X,
    KIND_X,
    ClusterState,
    Seed,
    canonical_maps,
    map_p,
    map_phi,
    map_pi,
    mutate_matrix,
    mutate_state,
    mutate_word,
    seed_from_dict,
    seed_to_dict,
)


def random_seed(rng, n_max=6, allow_frozen=True):
    n = rng.randint(2, n_max)
    d = [rng.choice([1, 1, 2, 3]) for _ in range(n)]
    hat = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            hat[i][j] = rng.choice([-1, 0, 1])
            hat[j][i] = -hat[i][j]
    eps = [[Fraction(hat[i][j] * d[j]) for j in range(n)] for i in range(n)]
    frozen = []
    if allow_frozen:
        frozen = [i for i in range(n) if rng.random() < 0.25]
        if len(frozen) == n:
            frozen.pop()
    return Seed(eps, frozen, d)


def test_mutate_matrix_rank2():
    seed = Seed([[0, 1], [-1, 0]])
    out = mutate_matrix(seed, 0)
    assert out.epsilon == ((0, -1), (1, 0))


def test_mutate_matrix_rank3_oracle():
    seed = Seed([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    out = mutate_matrix(seed, 1)

    def oracle(eps, k):
        n = len(eps)
        new = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if k in (i, j):
                    new[i][j] = -eps[i][j]
                else:
                    new[i][j] = eps[i][j] + (
                        abs(eps[i][k]) * eps[k][j] + eps[i][k] * abs(eps[k][j])
                    ) // 2
        return new

    assert [list(r) for r in out.epsilon] == oracle([[0, 1, 0], [-1, 0, 1], [0, -1, 0]], 1)
    assert [list(r) for r in out.epsilon] == [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]


def test_matrix_involution_random():
    rng = random.Random(5150)
    for _ in range(100):
        seed = random_seed(rng)
        for k in seed.unfrozen:
            assert mutate_matrix(mutate_matrix(seed, k), k) == seed


def test_x_rule_rank2():
    seed = Seed([[0, 1], [-1, 0]])
    state = ClusterState.symbolic(seed, KIND_X)
    out = mutate_state(state, 0)
    names = ("X1", "X2")
    assert out.values[0] == parse_rational("(1) / (X1)", names)
    assert out.values[1] == parse_rational("X2 + X1*X2", names)


def test_d_rule_quadrilateral():
    seed = Seed([[0]])
    state = ClusterState.symbolic(seed, KIND_D)
    out = mutate_state(state, 0)
    names = ("B1", "X1")
    assert out.values[0][0] == parse_rational("(1) / (B1)", names)
    assert out.values[1][0] == parse_rational("(1) / (X1)", names)


def test_tropical_d_zero_fixed():
    seed = Seed([[0]])
    state = ClusterState(seed, KIND_TROP_D, ({0: Fraction(0)}, {0: Fraction(0)}))
    out = mutate_state(state, 0)
    assert out.values[0][0] == 0
    assert out.values[1][0] == 0


@pytest.mark.parametrize("kind", [KIND_A, KIND_X, KIND_D])
def test_multiplicative_involutions_random(kind):
    rng = random.Random(hash(kind) & 0xFFFF)
    for _ in range(20):
        seed = random_seed(rng, n_max=4)
        if not seed.unfrozen:
            continue
        state = ClusterState.symbolic(seed, kind)
        k = rng.choice(seed.unfrozen)
        back = mutate_state(mutate_state(state, k), k)
        assert back == state


@pytest.mark.parametrize("kind", [KIND_TROP_A, KIND_TROP_X, KIND_TROP_D])
def test_tropical_involutions_random(kind):
    rng = random.Random(hash(kind) & 0xFFFF)
    for _ in range(50):
        seed = random_seed(rng, n_max=5)
        if not seed.unfrozen:
            continue
        if kind == KIND_TROP_A:
            values = {i: Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for i in range(seed.n)}
        elif kind == KIND_TROP_X:
            values = {j: Fraction(rng.randint(-9, 9)) for j in seed.unfrozen}
        else:
            values = (
                {j: Fraction(rng.randint(-9, 9)) for j in seed.unfrozen},
                {j: Fraction(rng.randint(-9, 9)) for j in seed.unfrozen},
            )
        state = ClusterState(seed, kind, values)
        k = rng.choice(seed.unfrozen)
        assert mutate_state(mutate_state(state, k), k) == state


def _trop_point(rng, seed, kind):
    if kind == KIND_A:
        return {i: Fraction(rng.randint(-6, 6), rng.randint(1, 2)) for i in range(seed.n)}
    return {j: Fraction(rng.randint(-6, 6), rng.randint(1, 2)) for j in seed.unfrozen}


def test_tropicalization_commutes_with_mutation():
    rng = random.Random(424242)
    for _ in range(30):
        seed = random_seed(rng, n_max=4)
        if not seed.unfrozen:
            continue
        k = rng.choice(seed.unfrozen)
        for _ in range(4):
            # X flavor
            sym = mutate_state(ClusterState.symbolic(seed, KIND_X), k)
            pt = _trop_point(rng, seed, KIND_X)
            named = {"X%d" % (j + 1): pt[j] for j in seed.unfrozen}
            trop = mutate_state(ClusterState(seed, KIND_TROP_X, pt), k)
            for j in seed.unfrozen:
                assert sym.values[j].trop_eval(named) == trop.values[j]
            # A flavor
            sym_a = mutate_state(ClusterState.symbolic(seed, KIND_A), k)
            pa = _trop_point(rng, seed, KIND_A)
            named_a = {"A%d" % (i + 1): pa[i] for i in range(seed.n)}
            trop_a = mutate_state(ClusterState(seed, KIND_TROP_A, pa), k)
            for i in range(seed.n):
                assert sym_a.values[i].trop_eval(named_a) == trop_a.values[i]
            # D flavor
            sym_d = mutate_state(ClusterState.symbolic(seed, KIND_D), k)
            pb = _trop_point(rng, seed, KIND_X)
            px = _trop_point(rng, seed, KIND_X)
            named_d = {}
            named_d.update({"B%d" % (j + 1): pb[j] for j in seed.unfrozen})
            named_d.update({"X%d" % (j + 1): px[j] for j in seed.unfrozen})
            trop_d = mutate_state(ClusterState(seed, KIND_TROP_D, (pb, px)), k)
            for j in seed.unfrozen:
                assert sym_d.values[0][j].trop_eval(named_d) == trop_d.values[0][j]
                assert sym_d.values[1][j].trop_eval(named_d) == trop_d.values[1][j]


def test_canonical_map_examples():
    zero = Seed([[0, 0], [0, 0]])
    a_state = ClusterState.symbolic(zero, KIND_A)
    image = map_p(zero, a_state.values)
    one = RationalExpr.const(("A1", "A2"), 1)
    assert all(image[i] == one for i in zero.unfrozen)

    # phi on the diagonal gives B = 1
    seed = Seed([[0, 1], [-1, 0]])
    a_vals = ClusterState.symbolic(seed, KIND_A).values
    b, _x = map_phi(seed, a_vals, a_vals)
    one2 = RationalExpr.const(("A1", "A2"), 1)
    assert all(b[i] == one2 for i in seed.unfrozen)

    # pi on the quadrilateral D-point: epsilon row zero forces Xhat = X
    quad = Seed([[0]])
    d_state = ClusterState.symbolic(quad, KIND_D)
    x, hat = map_pi(quad, d_state.values[0], d_state.values[1])
    assert hat[0] == x[0]


def test_phi_pi_diagram():
    # pi(phi(A, A°)) = (p(A), p(A°)) when the frozen coordinates of the two
    # A-tuples agree (the doubling glues the boundary).
    rng = random.Random(13)
    for _ in range(10):
        seed = random_seed(rng, n_max=4)
        if not seed.unfrozen:
            continue
        names = tuple("A%d" % (i + 1) for i in range(seed.n)) + tuple(
            "C%d" % (i + 1) for i in range(seed.n)
        )
        a = {i: RationalExpr.var(names, "A%d" % (i + 1)) for i in range(seed.n)}
        a_circ = {
            i: RationalExpr.var(names, "C%d" % (i + 1))
            if i in seed.unfrozen
            else RationalExpr.var(names, "A%d" % (i + 1))
            for i in range(seed.n)
        }
        b, x = map_phi(seed, a, a_circ)
        first, second = map_pi(seed, b, x)
        p_a = map_p(seed, a)
        p_circ = map_p(seed, a_circ)
        for j in seed.unfrozen:
            assert first[j] == p_a[j]
            assert second[j] == p_circ[j]


def test_canonical_maps_dispatch():
    quad = Seed([[0]])
    state = ClusterState.symbolic(quad, KIND_D)
    assert canonical_maps("pi", quad, state.values[0], state.values[1])
    with pytest.raises(DomainError):
        canonical_maps("nope", quad)


def test_frozen_mutation_rejected():
    seed = Seed([[0, 1], [-1, 0]], frozen=[1])
    with pytest.raises(DomainError):
        mutate_matrix(seed, 1)


def test_seed_roundtrip_dict():
    seed = Seed([[0, Fraction(1, 2)], [Fraction(-1, 2), 0]], frozen=[0, 1], d=[1, 1])
    assert seed_from_dict(seed_to_dict(seed)) == seed


def test_mutate_word_left_to_right():
    seed = Seed([[0, 1], [-1, 0]])
    state = ClusterState.symbolic(seed, KIND_X)
    out = mutate_word(state, [0, 1, 0, 1, 0])
    # pentagon periodicity for the rank-2 X-pattern: values swap slots
    assert out.values[0] == state.values[1]
    assert out.values[1] == state.values[0]
