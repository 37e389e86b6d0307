from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact.exactlp import (
    UNBOUNDED,
    InfeasibleError,
    LinearSystem,
    check_certificate,
    feasible,
    guided_feasible,
    max_support_solution,
    maximize,
)

from oracles import lp_feasible_by_vertices


def system(rows, rhs, nvars):
    S = LinearSystem([f"x{j}" for j in range(nvars)])
    for r, b in zip(rows, rhs):
        S.add_row(r, b)
    return S


def test_feasible_toy():
    S = system([{0: 1, 1: 1}, {0: 1, 1: -1}], [1, 0], 2)
    res = feasible(S)
    assert res.feasible and res.witness == {"x0": Fraction(1, 2), "x1": Fraction(1, 2)}


def test_infeasible_toy_has_certificate():
    S = system([{0: 1}, {0: 1}], [1, 2], 1)
    res = feasible(S)
    assert not res.feasible
    assert check_certificate(S, res.certificate)


def test_negative_rhs_with_nonnegative_row_is_infeasible():
    S = system([{0: 1, 1: 2}], [-1], 2)
    res = feasible(S)
    assert not res.feasible and check_certificate(S, res.certificate)


def test_maximize_and_unbounded():
    S = system([{0: 1, 1: 1}], [3], 3)
    assert maximize(S, "x1") == 3
    assert maximize(S, "x2") == UNBOUNDED
    with pytest.raises(InfeasibleError):
        maximize(system([{0: 1}], [-1], 1), "x0")


def test_max_support_reaches_every_possible_variable():
    S = system([{0: 1, 1: 1, 2: 1}, {2: 1, 3: 1}], [1, 0], 4)
    witness, support = max_support_solution(S)
    assert support == {"x0", "x1"}
    assert S.satisfied_by(witness)


def test_certificate_rejects_bad_vectors():
    S = system([{0: 1}], [1], 1)
    assert not check_certificate(S, {0: 1})
    assert not check_certificate(S, {0: -1})


@st.composite
def small_systems(draw):
    m = draw(st.integers(1, 3))
    n = draw(st.integers(1, 4))
    rows = [{j: c for j in range(n) if (c := draw(st.integers(-2, 2)))} for _ in range(m)]
    rhs = [draw(st.integers(-2, 2)) for _ in range(m)]
    return rows, rhs, n


@given(small_systems())
def test_agrees_with_vertex_enumeration(data):
    rows, rhs, n = data
    S = system(rows, rhs, n)
    res = feasible(S)
    oracle = lp_feasible_by_vertices(rows, rhs, n)
    assert res.feasible == (oracle is not None)
    if res.feasible:
        assert S.satisfied_by(res.witness)
    else:
        assert check_certificate(S, res.certificate)


@given(small_systems())
def test_guided_answers_are_exact_when_given(data):
    rows, rhs, n = data
    S = system(rows, rhs, n)
    res = guided_feasible(S)
    if res is None:
        return
    if res.feasible:
        assert S.satisfied_by(res.witness)
    else:
        assert check_certificate(S, res.certificate)
    assert res.feasible == feasible(S, guide=False).feasible


def test_guide_forced_on_larger_system():
    # a transportation polytope with a unique rational answer
    n = 6
    S = LinearSystem([f"t{i}_{j}" for i in range(n) for j in range(n)])
    for i in range(n):
        S.add_row({S.index[f"t{i}_{j}"]: 1 for j in range(n)}, Fraction(1, 3))
        S.add_row({S.index[f"t{j}_{i}"]: 1 for j in range(n)}, Fraction(1, 3))
    res = feasible(S, guide=True)
    assert res.feasible and S.satisfied_by(res.witness)


def test_dump_lists_rows():
    S = system([{0: 1, 1: Fraction(1, 2)}], [1], 2)
    assert "1*x0 + 1/2*x1 = 1" in S.dump()
