import itertools

import pytest
from hypothesis import given, strategies as st

from artifact.structures import (
    BudgetExhausted,
    ParseError,
    SignatureMismatch,
    automorphisms,
    clique,
    count_homomorphisms_bruteforce,
    decode,
    digraph,
    directed_cycle,
    dump_structure,
    encode,
    enhance,
    enhancement_symbol,
    find_homomorphism,
    is_homomorphism,
    iter_homomorphisms,
    line_digraph,
    make_structure,
    parse_structure,
    power,
)
from artifact.instances import digraph_classes, random_digraph

from oracles import all_homs


@given(st.integers(1, 5), st.integers(1, 4), st.data())
def test_encode_decode_roundtrip(n, k, data):
    t = tuple(data.draw(st.lists(st.integers(1, n), min_size=k, max_size=k)))
    idx = encode(t, n)
    assert 1 <= idx <= n**k
    assert decode(idx, n, k) == t


def test_encode_is_lexicographic():
    tuples = list(itertools.product(range(1, 4), repeat=2))
    assert [encode(t, 3) for t in tuples] == list(range(1, 10))


def test_enhancement_flags_full_without_materialising():
    A = clique(20)
    big = enhance(A, 4)
    assert big.is_enhanced(4) and big.is_full(enhancement_symbol(4))
    assert enhancement_symbol(4) not in big.relations
    small = enhance(A, 2)
    assert small.size(enhancement_symbol(2)) == 400


def test_base_strips_enhancements():
    A = enhance(enhance(clique(3), 2), 3)
    assert A.base() == clique(3)


def test_parse_dump_roundtrip():
    A = enhance(directed_cycle(4), 2)
    B = parse_structure(dump_structure(A))
    assert B == A and B.content_hash == A.content_hash


@pytest.mark.parametrize("text, line", [
    ("domain 2\nrelation E 2\n  t 1 3\n", 3),
    ("domain 2\n  t 1 2\n", 2),
    ("domain 2\nrelation E 2\n  t 1\n", 3),
    ("domain x\n", 1),
    ("relation E 2\n", 0),
    ("domain 2\nrelation E 2\n  t 1 2\n  t 1 2\n", 4),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_structure(text)
    assert err.value.lineno == line


def test_signature_mismatch():
    A = make_structure(2, {"U": [(1,)]})
    with pytest.raises(SignatureMismatch):
        find_homomorphism(clique(2), A)


@pytest.mark.parametrize("X, A, count", [
    (clique(3), clique(3), 6),
    (clique(3), clique(2), 0),
    (directed_cycle(4), clique(2), 2),
    (directed_cycle(3), directed_cycle(3), 3),
])
def test_small_hom_counts(X, A, count):
    assert count_homomorphisms_bruteforce(X, A) == count
    assert len(list(iter_homomorphisms(X, A))) == count


def test_search_matches_enumeration_on_small_digraphs(rng):
    for _ in range(40):
        X = random_digraph(rng.randint(1, 4), 0.4, rng)
        A = random_digraph(rng.randint(1, 3), 0.5, rng)
        homs = list(iter_homomorphisms(X, A))
        assert homs == sorted(homs)
        assert homs == all_homs(X, A)


def test_node_budget_is_enforced():
    with pytest.raises(BudgetExhausted):
        find_homomorphism(clique(6), clique(5), node_budget=50)


def test_power_is_categorical_product():
    A = directed_cycle(3)
    P = power(A, 2)
    assert P.n == 9 and P.size("E") == 9
    proj = tuple(decode(v, 3, 2)[0] for v in range(1, 10))
    assert is_homomorphism(proj, P, A)


def test_line_digraph_of_k3():
    D = line_digraph(clique(3))
    assert D.n == 6 and D.size("S") == 6 * 2
    for (i, j) in D.tuples("S"):
        assert D.labels[i - 1][1] == D.labels[j - 1][0]


def test_automorphisms_of_cliques_and_cycles():
    assert len(automorphisms(clique(4))) == 24
    assert len(automorphisms(directed_cycle(5))) == 5


def test_isomorphism_class_counts():
    # loops allowed: 2, 10 and 104 digraphs on 1, 2, 3 vertices up to isomorphism
    assert [len(digraph_classes(n)) for n in (1, 2, 3)] == [2, 10, 104]
    assert len(digraph_classes(3, loops=False)) == 16


def test_digraph_helper_names():
    G = digraph(2, [(1, 2)], "P2")
    assert G.name == "P2" and G.tuples("E") == ((1, 2),)
