"""Package results against frozen brute-force values (regenerate with scripts/freeze_derived.py)."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from artifact.colouring import match_count
from artifact.minionmaps import enumerate_polymorphisms, has_symmetric_polymorphism
from artifact.structures import (
    automorphisms,
    clique,
    count_homomorphisms_bruteforce,
    digraph,
    directed_cycle,
    iter_homomorphisms,
    line_digraph,
    make_structure,
    power,
)
from artifact.tensors import CubicalTensor, apply_pi, cube

DERIVED = json.loads((Path(__file__).parent / "data" / "derived.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("key, X, A", [
    ("K3,K3", clique(3), clique(3)),
    ("K4,K3", clique(4), clique(3)),
    ("K3,K2", clique(3), clique(2)),
    ("empty2,K2", make_structure(2, {"E": []}, {"E": 2}), clique(2)),
])
def test_small_counts(key, X, A):
    assert count_homomorphisms_bruteforce(X, A) == DERIVED["hom_counts_small"][key]


def test_automorphisms():
    assert len(automorphisms(clique(3))) == DERIVED["automorphisms"]["K3"]
    assert len(automorphisms(directed_cycle(3))) == DERIVED["automorphisms"]["C3"]


def test_structure_sizes():
    assert power(clique(2), 2).size("E") == DERIVED["power_K2_2_arcs"]
    assert line_digraph(clique(3)).size("S") == DERIVED["line_digraph_K3_arcs"]


def test_pi_on_uniform():
    T = CubicalTensor.build(2, 2, {a: Fraction(1, 4) for a in cube(2, 2)}, stochastic=True)
    got = apply_pi((1, 1), T)
    want = {tuple(int(c) for c in a): Fraction(v, 4) for a, v in DERIVED["pi_11_on_ones"].items()}
    assert dict(got.entries) == want


def test_match_count_values():
    for a, i, x, want in DERIVED["match_count"]:
        assert match_count(a, i, x, 3) == want


def test_binary_polymorphisms_of_k2():
    assert len(enumerate_polymorphisms(clique(2), clique(2), 2)) == DERIVED["pol_K2_K2_2"]["count"]
    assert has_symmetric_polymorphism(clique(2), clique(2), 2) == bool(DERIVED["pol_K2_K2_2"]["symmetric"])


def test_class_hom_counts_by_search():
    for nx, ax, na, aa, want in DERIVED["class_hom_counts"]:
        assert sum(1 for _ in iter_homomorphisms(digraph(nx, ax), digraph(na, aa))) == want
