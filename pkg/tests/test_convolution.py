import random

import pytest

from convdef import (
    Coalgebra,
    ConvMorphism,
    Matrix,
    MultiMap,
    NoFiltration,
    NotCocommutative,
    NotInvertible,
    congruent_mod,
    conv_compose,
    conv_tensor,
    divided_power_t,
    epsilon_embed,
    grouplike_coalgebra,
    identity_conv,
    pullback,
    takeuchi_invert,
    trivial_k,
)
from convdef.fields import QQ, PrimeField

from helpers import random_invertible

F5 = PrimeField(5)


def rand_conv(c, a_dim, p, q, rng):
    f = c.field
    comps = []
    for _ in range(c.dim):
        rows = [[f.random_element(rng) for _ in range(a_dim**p)] for _ in range(a_dim**q)]
        comps.append(MultiMap(a_dim, p, q, Matrix.from_rows(f, rows)))
    return ConvMorphism(c, tuple(comps))


def non_cocommutative_coalgebra(field):
    # basis {a, b, c}: Delta(b) = a (x) b + b (x) c
    return Coalgebra(
        field,
        ["a", "b", "c"],
        [[(0, 0, 1)], [(0, 1, 1), (1, 2, 1)], [(2, 2, 1)]],
        [1, 0, 1],
    )


def test_identity_is_neutral():
    rng = random.Random(2)
    c = divided_power_t(2, QQ)
    f = rand_conv(c, 2, 2, 1, rng)
    e_src = identity_conv(c, 2, 2)
    e_tgt = identity_conv(c, 2, 1)
    assert conv_compose(f, e_src) == f
    assert conv_compose(e_tgt, f) == f


def test_trivial_coalgebra_reduces_to_composition():
    rng = random.Random(3)
    k = trivial_k(QQ)
    f = rand_conv(k, 2, 1, 1, rng)
    g = rand_conv(k, 2, 1, 1, rng)
    assert conv_compose(g, f).components[0].mat == (g.components[0].compose(f.components[0])).mat


def test_divided_power_convolution_is_cauchy_product():
    rng = random.Random(4)
    c = divided_power_t(3, QQ)
    f = rand_conv(c, 2, 1, 1, rng)
    g = rand_conv(c, 2, 1, 1, rng)
    h = conv_compose(f, g)
    for n in range(4):
        acc = MultiMap.zero(QQ, 2, 1, 1)
        for i in range(n + 1):
            acc = acc + f.components[i].compose(g.components[n - i])
        assert h.components[n] == acc


def test_conv_tensor_divided_power_formula():
    rng = random.Random(5)
    c = divided_power_t(2, QQ)
    f = rand_conv(c, 2, 1, 1, rng)
    g = rand_conv(c, 2, 1, 1, rng)
    h = conv_tensor(f, g)
    for n in range(3):
        acc = MultiMap.zero(QQ, 2, 2, 2)
        for i in range(n + 1):
            acc = acc + f.components[i].tensor(g.components[n - i])
        assert h.components[n] == acc


def test_associativity_and_interchange_random():
    rng = random.Random(6)
    for c in (divided_power_t(2, F5), grouplike_coalgebra(2, F5)):
        for _ in range(5):
            f = rand_conv(c, 2, 1, 1, rng)
            g = rand_conv(c, 2, 1, 1, rng)
            h = rand_conv(c, 2, 1, 1, rng)
            assert conv_compose(conv_compose(h, g), f) == conv_compose(h, conv_compose(g, f))
            f2 = rand_conv(c, 2, 1, 1, rng)
            g2 = rand_conv(c, 2, 1, 1, rng)
            lhs = conv_compose(conv_tensor(f, g), conv_tensor(f2, g2))
            rhs = conv_tensor(conv_compose(f, f2), conv_compose(g, g2))
            assert lhs == rhs


def test_conv_tensor_requires_cocommutative():
    rng = random.Random(7)
    c = non_cocommutative_coalgebra(QQ)
    assert c.validate().ok and not c.is_cocommutative
    f = rand_conv(c, 2, 1, 1, rng)
    with pytest.raises(NotCocommutative):
        conv_tensor(f, f)


def test_pullback_identity_and_epsilon():
    rng = random.Random(8)
    c = divided_power_t(2, QQ)
    f = rand_conv(c, 2, 1, 1, rng)
    assert pullback(f, Matrix.identity(QQ, 3), c) == f
    # pulling back an eps-embedding along any coalgebra morphism is an eps-embedding
    k = trivial_k(QQ)
    iota = Matrix.from_rows(QQ, [[1], [0], [0]])
    m0 = MultiMap(2, 1, 1, Matrix.from_rows(QQ, [[1, 2], [3, 4]]))
    emb = epsilon_embed(m0, c)
    assert pullback(emb, iota, k) == epsilon_embed(m0, k)


def test_pullback_picks_constant_term():
    rng = random.Random(9)
    c = divided_power_t(2, QQ)
    f = rand_conv(c, 2, 2, 1, rng)
    k = trivial_k(QQ)
    iota = Matrix.from_rows(QQ, [[1], [0], [0]])
    assert pullback(f, iota, k).components[0] == f.components[0]


def test_pullback_functorial():
    rng = random.Random(10)
    d = divided_power_t(2, QQ)
    c = divided_power_t(1, QQ)
    iota = Matrix.from_rows(QQ, [[1, 0], [0, 1], [0, 0]])
    f = rand_conv(d, 2, 1, 1, rng)
    g = rand_conv(d, 2, 1, 1, rng)
    assert pullback(conv_compose(g, f), iota, c) == conv_compose(
        pullback(g, iota, c), pullback(f, iota, c)
    )
    assert pullback(conv_tensor(g, f), iota, c) == conv_tensor(
        pullback(g, iota, c), pullback(f, iota, c)
    )


def test_congruence_examples():
    rng = random.Random(11)
    c = divided_power_t(3, QQ)
    filt = c.grading_filtration()
    f = rand_conv(c, 2, 1, 1, rng)
    assert congruent_mod(f, f, 3, filt)
    g_comps = list(f.components)
    g_comps[3] = g_comps[3] + MultiMap.identity(QQ, 2, 1)
    g = ConvMorphism(c, tuple(g_comps))
    assert congruent_mod(f, g, 2, filt)
    assert not congruent_mod(f, g, 3, filt)
    with pytest.raises(NoFiltration):
        congruent_mod(f, g, 1, None)


def test_congruence_tensor_degree_additivity():
    # f == 0 mod n and f' == 0 mod n' force f (x) f' == 0 mod n + n'
    rng = random.Random(12)
    c = divided_power_t(3, QQ)
    filt = c.grading_filtration()
    zero11 = MultiMap.zero(QQ, 2, 1, 1)
    z = ConvMorphism(c, (zero11,) * 4)
    f_comps = [zero11, zero11] + [rand_conv(c, 2, 1, 1, rng).components[0] for _ in range(2)]
    f = ConvMorphism(c, tuple(f_comps))           # f == 0 mod 1
    g_comps = [zero11] + [rand_conv(c, 2, 1, 1, rng).components[0] for _ in range(3)]
    g = ConvMorphism(c, tuple(g_comps))           # g == 0 mod 0
    zero22 = ConvMorphism(c, (MultiMap.zero(QQ, 2, 2, 2),) * 4)
    assert congruent_mod(f, z, 1, filt) and congruent_mod(g, z, 0, filt)
    assert congruent_mod(conv_tensor(f, g), zero22, 1, filt)


def test_takeuchi_identity():
    c = divided_power_t(2, QQ)
    e = identity_conv(c, 2, 1)
    filt = c.grading_filtration()
    assert takeuchi_invert(e, filt) == e


def test_takeuchi_geometric_series():
    # f = Id + N t: inverse components are Id, -N, N^2, -N^3 ...
    c = divided_power_t(3, QQ)
    filt = c.grading_filtration()
    n_mat = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    comps = [
        MultiMap.identity(QQ, 2, 1),
        MultiMap(2, 1, 1, n_mat),
        MultiMap.zero(QQ, 2, 1, 1),
        MultiMap.zero(QQ, 2, 1, 1),
    ]
    f = ConvMorphism(c, tuple(comps))
    g = takeuchi_invert(f, filt)
    e = identity_conv(c, 2, 1)
    assert conv_compose(f, g) == e and conv_compose(g, f) == e
    assert g.components[1].mat == -n_mat
    assert g.components[2].mat == n_mat @ n_mat
    assert g.components[3].mat == -(n_mat @ n_mat @ n_mat)


def test_takeuchi_random_and_congruence_of_inverse():
    rng = random.Random(13)
    c = divided_power_t(3, QQ)
    filt = c.grading_filtration()
    e = identity_conv(c, 2, 1)
    for _ in range(10):
        # invertible on the bottom layer: component at 1 is a random invertible matrix
        comps = [MultiMap(2, 1, 1, random_invertible(QQ, 2, rng))]
        for _k in range(3):
            comps.append(
                MultiMap(2, 1, 1, Matrix.from_rows(QQ, [[QQ.random_element(rng) for _ in range(2)] for _ in range(2)]))
            )
        f = ConvMorphism(c, tuple(comps))
        g = takeuchi_invert(f, filt)
        assert conv_compose(f, g) == e and conv_compose(g, f) == e
    # (Id + f)^{-1} == Id - f mod n+1 whenever f == 0 mod n
    for n in (0, 1, 2):
        comps = [MultiMap.zero(QQ, 2, 1, 1)] * (n + 1)
        while len(comps) < 4:
            comps.append(
                MultiMap(2, 1, 1, Matrix.from_rows(QQ, [[QQ.random_element(rng) for _ in range(2)] for _ in range(2)]))
            )
        f = ConvMorphism(c, tuple(comps))
        g = takeuchi_invert(e + f, filt)
        assert congruent_mod(g, e - f, n + 1, filt)


def test_takeuchi_not_invertible():
    c = divided_power_t(1, QQ)
    filt = c.grading_filtration()
    comps = [MultiMap.zero(QQ, 2, 1, 1), MultiMap.identity(QQ, 2, 1)]
    f = ConvMorphism(c, tuple(comps))
    with pytest.raises(NotInvertible):
        takeuchi_invert(f, filt)


def test_slot_insertion_congruence_lemma():
    # For Theta vanishing on C_n^(x)p and phi the degree-0 projection,
    # Theta o Delta^{p-1} == sum_i Theta o phi_i o Delta^{p-1} on C_{n+1}.
    rng = random.Random(14)
    c = divided_power_t(3, QQ)
    d = c.dim
    for p in (2, 3):
        for n in (0, 1, 2):
            # random functional on C^(x)p vanishing on tensors with all degrees <= n
            theta = [QQ.zero] * (d**p)
            for idx in range(d**p):
                digits = []
                rest = idx
                for _ in range(p):
                    digits.append(rest % d)
                    rest //= d
                if any(c.grading[t] > n for t in digits):
                    theta[idx] = QQ.random_element(rng)

            def apply_theta(vec):
                return sum(a * b for a, b in zip(theta, vec))

            def phi_i(vec, i):
                # phi applied to all slots except slot i (1-based), phi = degree-0 projection
                out = [QQ.zero] * len(vec)
                for idx, coeff in enumerate(vec):
                    if coeff == 0:
                        continue
                    digits = []
                    rest = idx
                    for _ in range(p):
                        digits.append(rest % d)
                        rest //= d
                    digits.reverse()
                    keep = True
                    for pos, t in enumerate(digits, start=1):
                        if pos != i and c.grading[t] != 0:
                            keep = False
                            break
                    if keep:
                        out[idx] = out[idx] + coeff
                return out

            # evaluate both sides on every basis vector of degree <= n+1
            for b in range(d):
                if c.grading[b] > n + 1:
                    continue
                tensor = c.iterated_delta(tuple(QQ.one if i == b else QQ.zero for i in range(d)), p)
                lhs = apply_theta(tensor)
                rhs = sum(apply_theta(phi_i(tensor, i)) for i in range(1, p + 1))
                assert lhs == rhs
