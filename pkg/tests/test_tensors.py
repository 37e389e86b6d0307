from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact.structures import clique, decode, directed_cycle, enhance, enhancement_symbol
from artifact.tensors import (
    CubicalTensor,
    apply_p,
    apply_pi,
    contract,
    cube,
    marginal,
    pattern,
    pattern_equiv,
    projection,
    refines,
    segre_flat,
    segre_power,
    tensor_power,
)

from oracles import matvec, p_matrix, pi_matrix


def tensors(max_n=3, max_k=3):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        k = draw(st.integers(1, max_k))
        dom = list(cube(n, k))
        weights = draw(st.lists(st.integers(0, 5), min_size=len(dom), max_size=len(dom)))
        if not any(weights):
            weights[0] = 1
        total = sum(weights)
        return CubicalTensor.build(n, k, {a: Fraction(w, total) for a, w in zip(dom, weights)}, stochastic=True)
    return build()


def test_refines_examples():
    assert refines((1, 1, 2), (3, 3, 3))
    assert not refines((1, 1, 2), (1, 2, 2))
    assert pattern_equiv((1, 2, 1), (3, 4, 3))
    assert pattern((5, 5, 2, 7)) == (1, 1, 2, 3)


def test_projection_bounds():
    assert projection((4, 5, 6), (3, 1, 1)) == (6, 4, 4)
    with pytest.raises(IndexError):
        projection((4, 5), (3,))


def test_segre_power_positions():
    S = segre_power((7, 8), 2)
    assert S == {(1, 1): (7, 7), (1, 2): (7, 8), (2, 1): (8, 7), (2, 2): (8, 8)}
    assert segre_flat((1, 2), 2, 2) == (1, 2, 3, 4)


@given(tensors(), st.data())
def test_apply_pi_matches_materialised_matrix(T, data):
    i = tuple(data.draw(st.lists(st.integers(1, T.order), min_size=T.order, max_size=T.order)))
    dom = set(cube(T.base, T.order))
    got = apply_pi(i, T)
    want = matvec(pi_matrix(i, T.base, T.order), dict(T.entries), dom)
    assert dict(got.entries) == want
    assert got.total() == 1


@given(st.data())
def test_apply_p_matches_materialised_matrix(data):
    rel = list(clique(3).tuples("E"))
    k = data.draw(st.integers(1, 3))
    i = tuple(data.draw(st.lists(st.integers(1, 2), min_size=k, max_size=k)))
    w = data.draw(st.lists(st.integers(0, 3), min_size=len(rel), max_size=len(rel)))
    q = [Fraction(v, max(1, sum(w))) for v in w]
    got = apply_p(i, rel, q, 3)
    want = matvec(p_matrix(i, rel, 3), dict(enumerate(q)), set(cube(3, k)))
    assert dict(got.entries) == want


@given(tensors(), st.data())
def test_pi_composition(T, data):
    k = T.order
    i = tuple(data.draw(st.lists(st.integers(1, k), min_size=k, max_size=k)))
    j = tuple(data.draw(st.lists(st.integers(1, k), min_size=k, max_size=k)))
    composed = tuple(i[t - 1] for t in j)
    assert apply_pi(j, apply_pi(i, T)) == apply_pi(composed, T)


def test_contract_against_hand_values():
    M = CubicalTensor.build(2, 2, {(1, 1): 1, (1, 2): 2, (2, 2): 3})
    N = CubicalTensor.build(2, 1, {(1,): 5, (2,): 7})
    assert dict(contract(M, N, 1).entries) == {(1,): 19, (2,): 21}
    J = CubicalTensor.ones(2, 2)
    assert contract(J, M, 2).value() == 6


def test_marginal_and_unit():
    E = CubicalTensor.unit(3, (2, 3))
    assert marginal(E, 2) == {3: 1}
    with pytest.raises(ValueError):
        CubicalTensor.build(2, 1, {(1,): Fraction(1, 2)}, stochastic=True)


def test_tensor_text_roundtrip():
    T = CubicalTensor.build(2, 2, {(1, 2): Fraction(1, 3), (2, 1): Fraction(2, 3)}, stochastic=True)
    assert CubicalTensor.parse(2, 2, T.dump()) == T


def test_tensor_power_of_k3():
    P = tensor_power(clique(3), 2).structure
    assert P.n == 9 and P.arity("E") == 4 and P.size("E") == 6
    for t in P.tuples("E"):
        a, b = decode(t[0], 3, 2), decode(t[3], 3, 2)
        assert a[0] == a[1] and b[0] == b[1]


def test_tensor_power_keeps_enhancement_full():
    A = enhance(directed_cycle(3), 2)
    P = tensor_power(A, 2).structure
    assert P.size(enhancement_symbol(2)) == 9
