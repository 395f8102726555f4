import itertools
import random

import pytest

from convdef import (
    Coalgebra,
    DegreeMismatch,
    NotExhaustive,
    Subspace,
    UnsupportedSearch,
    coradical_filtration,
    direct_sum,
    divided_power_t,
    find_grouplikes,
    grouplike_coalgebra,
    is_coalgebra_filtration,
    polynomial_multi,
    trivial_k,
)
from convdef.coalgebra import is_coalgebra_filtration
from convdef.linalg import unit_vec
from convdef.fields import QQ, PrimeField

F2 = PrimeField(2)
F5 = PrimeField(5)


def test_validate_trivial():
    c = trivial_k(QQ)
    rep = c.validate()
    assert rep.ok and rep.cocommutative


def test_validate_divided_power():
    c = divided_power_t(3, QQ)
    rep = c.validate()
    assert rep.ok and rep.cocommutative and rep.grading_compatible


def test_validate_broken_coassociativity():
    # mutate k[t]_{<=3} so Delta(t) = t (x) t: coassociativity fails at t^2
    good = divided_power_t(3, QQ)
    delta = [list(t) for t in good.delta]
    delta[1] = [(1, 1, 1)]
    c = Coalgebra(QQ, good.names, delta, good.counit)
    rep = c.validate()
    assert not rep.coassociative
    assert not rep.ok


def test_iterated_delta_p1_returns_input():
    c = divided_power_t(2, QQ)
    v = (1, 2, 3)
    assert c.iterated_delta(v, 1) == (1, 2, 3)


def test_iterated_delta_t2():
    c = divided_power_t(2, QQ)
    out = c.iterated_delta(unit_vec(QQ, 3, 2), 2)
    # 1 (x) t^2 + t (x) t + t^2 (x) 1
    expect = [0] * 9
    expect[0 * 3 + 2] = 1
    expect[1 * 3 + 1] = 1
    expect[2 * 3 + 0] = 1
    assert list(out) == expect


def test_iterated_delta_slot_independence():
    # coassociativity generalized: expanding any slot at each step agrees
    rng = random.Random(1)
    for c in (divided_power_t(3, QQ), polynomial_multi(2, 2, QQ), grouplike_coalgebra(2, F5)):
        v = tuple(c.field.coerce(rng.randint(0, 3)) for _ in range(c.dim))
        for p in (2, 3, 4):
            ref = c.iterated_delta(v, p)
            for slots in itertools.product(*(range(1, arity + 1) for arity in range(1, p))):
                cur = v
                for arity, slot in enumerate(slots, start=1):
                    cur = c.expand_slot(cur, arity, slot - 1)
                assert cur == ref


def test_delta_component_examples():
    c = divided_power_t(2, QQ)
    t2 = unit_vec(QQ, 3, 2)
    # I = (n) returns the element itself
    assert c.delta_component(t2, (2,)) == t2
    # middle component of Delta(t^2) is t (x) t
    comp = c.delta_component(t2, (1, 1))
    expect = [0] * 9
    expect[1 * 3 + 1] = 1
    assert list(comp) == expect
    with pytest.raises(DegreeMismatch):
        c.delta_component(t2, (1, 0))


def test_delta_component_two_variables():
    p = polynomial_multi(2, 2, QQ)
    i_t1t2 = p.names.index("t1*t2")
    i_t1 = p.names.index("t1")
    i_t2 = p.names.index("t2")
    comp = p.delta_component(unit_vec(QQ, p.dim, i_t1t2), (1, 1))
    expect = [0] * (p.dim * p.dim)
    expect[i_t1 * p.dim + i_t2] = 1
    expect[i_t2 * p.dim + i_t1] = 1
    assert list(comp) == expect


def test_delta_component_sum_recovers_full():
    p = polynomial_multi(2, 2, QQ)
    for i in range(p.dim):
        v = unit_vec(QQ, p.dim, i)
        deg = p.grading[i]
        full = p.iterated_delta(v, 2)
        total = [QQ.zero] * len(full)
        for a in range(deg + 1):
            comp = p.delta_component(v, (a, deg - a))
            total = [x + y for x, y in zip(total, comp)]
        assert tuple(total) == full


def test_coradical_filtration_divided_power():
    n = 3
    c = divided_power_t(n, QQ)
    c0 = Subspace.span(QQ, c.dim, [unit_vec(QQ, c.dim, 0)])
    chain = coradical_filtration(c, c0)
    assert [layer.dim for layer in chain] == list(range(1, n + 2))
    for k, layer in enumerate(chain):
        expect = Subspace.span(QQ, c.dim, [unit_vec(QQ, c.dim, i) for i in range(k + 1)])
        assert layer == expect
    assert is_coalgebra_filtration(c, chain)


def test_coradical_filtration_cosemisimple():
    c = grouplike_coalgebra(3, QQ)
    full = Subspace.full(QQ, 3)
    assert coradical_filtration(c, full) == [full]


def test_coradical_filtration_not_exhaustive():
    c = grouplike_coalgebra(2, QQ)
    c0 = Subspace.span(QQ, 2, [(1, 0)])
    with pytest.raises(NotExhaustive):
        coradical_filtration(c, c0)


def test_find_grouplikes_basis():
    c = divided_power_t(3, QQ)
    gl = find_grouplikes(c)
    assert gl.elements == (unit_vec(QQ, 4, 0),)
    g = grouplike_coalgebra(3, QQ)
    assert len(find_grouplikes(g).elements) == 3


def test_find_grouplikes_exhaustive_f2():
    c = grouplike_coalgebra(2, F2)
    gl = find_grouplikes(c, mode="exhaustive")
    assert set(gl.elements) == {(1, 0), (0, 1)}


def test_find_grouplikes_exhaustive_needs_finite_field():
    with pytest.raises(UnsupportedSearch):
        find_grouplikes(trivial_k(QQ), mode="exhaustive")


def test_builtins_validate():
    for c in (
        trivial_k(QQ),
        divided_power_t(2, QQ),
        divided_power_t(4, F5),
        polynomial_multi(2, 2, QQ),
        polynomial_multi(3, 1, F2),
        direct_sum([trivial_k(QQ), divided_power_t(1, QQ)]),
        grouplike_coalgebra(2, F2),
    ):
        rep = c.validate()
        assert rep.ok and rep.cocommutative


def test_polynomial_multi_layer_dims():
    # dim of the degree-n layer is binom(n + r - 1, n)
    from math import comb

    for r in (1, 2, 3):
        p = polynomial_multi(r, 2, QQ)
        for n in range(3):
            assert len(p.degree_indices(n)) == comb(n + r - 1, n)
    assert polynomial_multi(2, 1, QQ).dim == 3


def test_grading_filtration_is_coalgebra_filtration():
    for c in (divided_power_t(3, QQ), polynomial_multi(2, 2, F5)):
        assert is_coalgebra_filtration(c, c.grading_filtration())
