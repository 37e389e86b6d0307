"""BLP and Sherali-Adams systems, and the translations between SA solutions
and tensor-valued maps ξ: X^k -> stochastic tensors over [n_A]^k.

A ξ-map is *verified* when every ξ(x) is stochastic, the consistency
equation ξ(x_i) = Π_i ∗ ξ(x) holds, and for every relation R and x in R^X
some stochastic q over R^A satisfies P_i ∗ q = ξ(x_i) for all i in [r]^k.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from gmpy2 import mpq

from .config import check_cap
from .exactlp import FeasibilityResult, LinearSystem, feasible, max_support_solution
from .structures import (
    AutomorphismGroup,
    Map,
    RelationalStructure,
    Tuple,
    binary_symbol,
    decode,
    encode,
    enhancement_symbol,
    ensure_enhanced,
    is_homomorphism,
    line_digraph,
    same_signature,
)
from .tensors import CubicalTensor, apply_p, apply_pi, contract, cube, refines, segre_flat

log = logging.getLogger(__name__)


class VerificationFailure(AssertionError):
    pass


# variable naming


def _graph(dom, vals) -> str:
    return ",".join(f"{v}>{a}" for v, a in zip(dom, vals))


def key_name(key) -> str:
    if key[0] == "V":
        _, V, f = key
        return f"V|{','.join(map(str, V))}|{_graph(V, f)}"
    if key[0] == "C":
        _, R, x, f = key
        return f"C|{R}|{','.join(map(str, x))}|{_graph(sorted(set(x)), f)}"
    if key[0] == "L":
        _, x, a = key
        return f"L|{x}|{a}"
    if key[0] == "Q":
        _, R, x, b = key
        return f"Q|{R}|{','.join(map(str, x))}|{','.join(map(str, b))}"
    raise ValueError(key)


# Sherali-Adams


def _subsets(n: int, k: int):
    for s in range(1, min(k, n) + 1):
        yield from itertools.combinations(range(1, n + 1), s)


def sa_variables(X: RelationalStructure, A: RelationalStructure, k: int, skip=frozenset()) -> Iterator[tuple]:
    dom = range(1, A.n + 1)
    for V in _subsets(X.n, k):
        for f in itertools.product(dom, repeat=len(V)):
            yield ("V", V, f)
    for R in X.symbols:
        if R in skip:
            continue
        for x in X.tuples(R):
            for f in itertools.product(dom, repeat=len(set(x))):
                yield ("C", R, x, f)


def sa_constraints(X: RelationalStructure, A: RelationalStructure, k: int, skip=frozenset()) -> Iterator[tuple]:
    """Rows (label, {key: coef}, rhs) of SA1-SA4."""
    dom = range(1, A.n + 1)
    for V in _subsets(X.n, k):
        fs = list(itertools.product(dom, repeat=len(V)))
        yield "SA1", {("V", V, f): 1 for f in fs}, 1
        for s in range(1, len(V)):
            for pos in itertools.combinations(range(len(V)), s):
                U = tuple(V[p] for p in pos)
                groups: dict = {}
                for g in fs:
                    groups.setdefault(tuple(g[p] for p in pos), []).append(g)
                for f in itertools.product(dom, repeat=s):
                    row = {("V", U, f): 1}
                    for g in groups.get(f, ()):
                        row[("V", V, g)] = -1
                    yield "SA2", row, 0
    for R in X.symbols:
        if R in skip:
            continue
        for x in X.tuples(R):
            S = tuple(sorted(set(x)))
            gs = list(itertools.product(dom, repeat=len(S)))
            for s in range(1, min(k, len(S)) + 1):
                for pos in itertools.combinations(range(len(S)), s):
                    U = tuple(S[p] for p in pos)
                    groups = {}
                    for g in gs:
                        groups.setdefault(tuple(g[p] for p in pos), []).append(g)
                    for f in itertools.product(dom, repeat=s):
                        row = {("V", U, f): 1}
                        for g in groups.get(f, ()):
                            row[("C", R, x, g)] = -1
                        yield "SA3", row, 0
            where = {v: p for p, v in enumerate(S)}
            full = A.is_full(R)
            for g in gs:
                if not full and not A.contains(R, tuple(g[where[v]] for v in x)):
                    yield "SA4", {("C", R, x, g): 1}, 0


def _system(keys, rows) -> LinearSystem:
    sys = LinearSystem()
    index = {}
    for key in keys:
        index[key] = sys.var(key_name(key))
    sys.keys = list(index)
    for label, row, rhs in rows:
        sys.add_row({index[k]: c for k, c in row.items()}, rhs, label)
    return sys


def _sa_size(X, A, k, skip) -> int:
    count = sum(A.n ** len(V) for V in _subsets(X.n, k))
    for R in X.symbols:
        if R not in skip:
            count += sum(A.n ** len(set(x)) for x in X.tuples(R))
    return count


def build_sa(X: RelationalStructure, A: RelationalStructure, k: int, skip=frozenset(),
             cap: int | None = None) -> LinearSystem:
    """The level-k Sherali-Adams system; ``skip`` omits the constraint variables of listed symbols."""
    if k < 1:
        raise ValueError("level must be >= 1")
    same_signature(X, A)
    check_cap(_sa_size(X, A, k, skip), cap, "SA variables")
    return _system(sa_variables(X, A, k, skip), sa_constraints(X, A, k, skip))


@dataclass
class SASolution:
    X: RelationalStructure
    A: RelationalStructure
    k: int
    lambdaV: dict = field(default_factory=dict)
    lambdaC: dict = field(default_factory=dict)
    collapsed: frozenset = frozenset()

    def get(self, key) -> Fraction:
        if key[0] == "V":
            return self.lambdaV.get((key[1], key[2]), Fraction(0))
        _, R, x, f = key
        if R in self.collapsed:
            return self.lambdaV.get((tuple(sorted(set(x))), f), Fraction(0))
        return self.lambdaC.get((R, x, f), Fraction(0))

    def values(self):
        yield from self.lambdaV.values()
        yield from self.lambdaC.values()

    @classmethod
    def from_witness(cls, sys: LinearSystem, witness: Mapping[str, Fraction], X, A, k, collapsed=frozenset()):
        sol = cls(X, A, k, collapsed=frozenset(collapsed))
        for key, name in zip(sys.keys, sys.variables):
            v = witness[name]
            if not v:
                continue
            if key[0] == "V":
                sol.lambdaV[(key[1], key[2])] = v
            else:
                sol.lambdaC[(key[1], key[2], key[3])] = v
        return sol


def first_sa_violation(sol: SASolution, X=None, A=None, k=None) -> str | None:
    """Checks SA1-SA4, nonnegativity and the implied upper bound 1 against the full system."""
    X = sol.X if X is None else X
    A = sol.A if A is None else A
    k = sol.k if k is None else k
    for v in sol.values():
        if v < 0 or v > 1:
            return f"value {v} outside [0,1]"
    vals: dict = {}

    def get(key):
        v = vals.get(key)
        if v is None:
            v = vals[key] = mpq(sol.get(key))
        return v

    for label, row, rhs in sa_constraints(X, A, k):
        if sum((c * get(key) for key, c in row.items()), mpq(0)) != rhs:
            return f"{label}: " + " + ".join(f"{c}*{key_name(kk)}" for kk, c in row.items()) + f" = {rhs}"
    return None


@dataclass
class SAResult:
    accepts: bool
    solution: SASolution | None
    lp: FeasibilityResult | None
    system: LinearSystem
    support: frozenset | None = None


def full_symbols(A: RelationalStructure, k: int) -> frozenset:
    """Symbols of arity <= k that are full in A; SA3 pins their constraint variables to λ_{x}."""
    return frozenset(R for R in A.symbols if A.arity(R) <= k and A.is_full(R))


def solve_sa(X: RelationalStructure, A: RelationalStructure, k: int, *, support_vars=None,
             max_support: bool = False, validate: bool = True, cap: int | None = None) -> SAResult:
    same_signature(X, A)
    skip = full_symbols(A, k)
    sys = build_sa(X, A, k, skip, cap)
    support = None
    if max_support or support_vars is not None:
        res = feasible(sys)
        if res.feasible:
            names = None if support_vars is None else [key_name(key) for key in support_vars]
            witness, support = max_support_solution(sys, names)
            res = FeasibilityResult("feasible", witness, None, res.reduced_shape)
    else:
        res = feasible(sys)
    if not res.feasible:
        return SAResult(False, None, res, sys)
    sol = SASolution.from_witness(sys, res.witness, X, A, k, skip)
    if validate:
        bad = first_sa_violation(sol)
        if bad:
            raise VerificationFailure(f"SA witness fails: {bad}")
    return SAResult(True, sol, res, sys, support)


def sa_accepts(X: RelationalStructure, A: RelationalStructure, k: int, cap: int | None = None
               ) -> tuple[bool, SASolution | None]:
    res = solve_sa(X, A, k, cap=cap)
    return res.accepts, res.solution


# BLP


def blp_variables(X: RelationalStructure, A: RelationalStructure):
    for x in range(1, X.n + 1):
        for a in range(1, A.n + 1):
            yield ("L", x, a)
    for R in X.symbols:
        rel = list(A.tuples(R))
        for x in X.tuples(R):
            for b in rel:
                yield ("Q", R, x, b)


def blp_constraints(X: RelationalStructure, A: RelationalStructure):
    for x in range(1, X.n + 1):
        yield "norm", {("L", x, a): 1 for a in range(1, A.n + 1)}, 1
    for R in X.symbols:
        r = X.arity(R)
        rel = list(A.tuples(R))
        by_pos = []
        for i in range(r):
            d: dict = {}
            for b in rel:
                d.setdefault(b[i], []).append(b)
            by_pos.append(d)
        for x in X.tuples(R):
            for i in range(r):
                for a in range(1, A.n + 1):
                    row = {("Q", R, x, b): 1 for b in by_pos[i].get(a, ())}
                    row[("L", x[i], a)] = -1
                    yield "marg", row, 0


def build_blp(X: RelationalStructure, A: RelationalStructure, cap: int | None = None) -> LinearSystem:
    same_signature(X, A)
    check_cap(X.n * A.n + sum(X.size(R) * A.size(R) for R in X.symbols), cap, "BLP variables")
    return _system(blp_variables(X, A), blp_constraints(X, A))


@dataclass
class BLPSolution:
    vertex: dict  # x -> {a: value}
    constraint: dict  # (R, x) -> {b: value}

    def get(self, key) -> Fraction:
        if key[0] == "L":
            return self.vertex.get(key[1], {}).get(key[2], Fraction(0))
        return self.constraint.get((key[1], key[2]), {}).get(key[3], Fraction(0))

    @classmethod
    def from_witness(cls, sys: LinearSystem, witness):
        sol = cls({}, {})
        for key, name in zip(sys.keys, sys.variables):
            v = witness[name]
            if not v:
                continue
            if key[0] == "L":
                sol.vertex.setdefault(key[1], {})[key[2]] = v
            else:
                sol.constraint.setdefault((key[1], key[2]), {})[key[3]] = v
        return sol


def first_blp_violation(sol: BLPSolution, X, A) -> str | None:
    for dist in list(sol.vertex.values()) + list(sol.constraint.values()):
        if any(v < 0 for v in dist.values()):
            return "negative value"
    for label, row, rhs in blp_constraints(X, A):
        if sum(c * sol.get(key) for key, c in row.items()) != rhs:
            return f"{label}: " + " + ".join(f"{c}*{key_name(kk)}" for kk, c in row.items()) + f" = {rhs}"
    return None


def blp_accepts(X, A, cap=None) -> tuple[bool, BLPSolution | None, FeasibilityResult]:
    sys = build_blp(X, A, cap)
    res = feasible(sys)
    if not res.feasible:
        return False, None, res
    sol = BLPSolution.from_witness(sys, res.witness)
    bad = first_blp_violation(sol, X, A)
    if bad:
        raise VerificationFailure(bad)
    return True, sol, res


# ξ-maps


@dataclass
class XiMap:
    X: RelationalStructure
    A: RelationalStructure
    k: int
    tensors: dict  # x in [n_X]^k -> CubicalTensor over [n_A]^k

    def __getitem__(self, x) -> CubicalTensor:
        return self.tensors[tuple(x)]

    def with_structures(self, X, A) -> "XiMap":
        return XiMap(X, A, self.k, self.tensors)


def _fn_entries(x: Tuple, n: int):
    """All (a, f) with x ≺ a, f the induced map on sorted({x}) (as values)."""
    S = tuple(sorted(set(x)))
    where = {v: p for p, v in enumerate(S)}
    for f in itertools.product(range(1, n + 1), repeat=len(S)):
        yield tuple(f[where[v]] for v in x), S, f


def solution_to_ximap(sol: SASolution, X: RelationalStructure | None = None,
                      A: RelationalStructure | None = None, k: int | None = None) -> XiMap:
    """ξ(x) at a is λ_{{x}}(f_{x,a}) when x ≺ a, zero otherwise."""
    X = sol.X if X is None else X
    A = sol.A if A is None else A
    k = sol.k if k is None else k
    if not (X.is_enhanced(k) and A.is_enhanced(k)):
        log.info("enhancing X and A with the level-%d full relation", k)
        X, A = ensure_enhanced(X, k), ensure_enhanced(A, k)
    tensors = {}
    for x in cube(X.n, k):
        entries = {}
        for a, S, f in _fn_entries(x, A.n):
            v = sol.lambdaV.get((S, f))
            if v:
                entries[a] = v
        tensors[x] = CubicalTensor.build(A.n, k, entries, stochastic=True)
    return XiMap(X, A, k, tensors)


def _canon(T: CubicalTensor):
    return tuple(T.entries.items())


def consistency_indices(k: int, mode: str = "full"):
    if mode == "full":
        return list(cube(k, k))
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode}")
    ident = list(range(1, k + 1))
    out = []
    for p, q in itertools.combinations(range(k), 2):
        i = ident[:]
        i[p], i[q] = i[q], i[p]
        out.append(tuple(i))
    for p in range(k):
        for q in range(k):
            if p != q:
                i = ident[:]
                i[p] = q + 1
                out.append(tuple(i))
    return out


def consistency_violation(xi: XiMap, k: int | None = None, mode: str = "full"):
    """First (x, i) with ξ(x_i) != Π_i ∗ ξ(x), or None."""
    k = xi.k if k is None else k
    idx = consistency_indices(k, mode)
    ids: dict = {}
    tid = {x: ids.setdefault(_canon(T), len(ids)) for x, T in xi.tensors.items()}
    memo: dict = {}
    for x, T in xi.tensors.items():
        cx = tid[x]
        for i in idx:
            key = (cx, i)
            got = memo.get(key)
            if got is None:
                got = ids.setdefault(_canon(apply_pi(i, T)), len(ids))
                memo[key] = got
            if got != tid[tuple(x[j - 1] for j in i)]:
                return x, i
    return None


def check_consistency_eq(xi: XiMap, k: int | None = None, mode: str = "full") -> bool:
    return consistency_violation(xi, k, mode) is None


@dataclass
class VerifyResult:
    ok: bool
    q: dict = field(default_factory=dict)  # (R, x) -> {b: value}
    failure: str | None = None

    def __bool__(self):
        return self.ok


def _q_from_lp(rel, targets, n, k) -> dict | None:
    sys = LinearSystem([f"q{t}" for t in range(len(rel))])
    sys.add_row({t: 1 for t in range(len(rel))}, 1)
    for i, T in targets:
        rows: dict = {}
        for t, b in enumerate(rel):
            rows.setdefault(tuple(b[j - 1] for j in i), {})[t] = 1
        for a in set(rows) | set(T.entries):
            sys.add_row(rows.get(a, {}), T[a])
    res = feasible(sys)
    if not res.feasible:
        return None
    return {b: res.witness[f"q{t}"] for t, b in enumerate(rel) if res.witness[f"q{t}"]}


def _q_matches(rel, q, targets, n) -> bool:
    for i, T in targets:
        if apply_p(i, rel, q, n) != T:
            return False
    return True


def verify_free_hom(xi: XiMap, X: RelationalStructure | None = None, A: RelationalStructure | None = None,
                    k: int | None = None, hints: Mapping | None = None,
                    require_enhanced: bool = True) -> VerifyResult:
    """Is ξ a homomorphism X^⊗k -> F(A^⊗k)? Returns the certifying q vectors.

    The level-k full relation is checked with the consistency equation; for
    arity r <= k the q vector is first read off ξ(x_i) for i = (1..r, r..r),
    otherwise ``hints`` are tried, then a small exact LP.
    """
    X = xi.X if X is None else X
    A = xi.A if A is None else A
    k = xi.k if k is None else k
    enhanced = X.is_enhanced(k) and A.is_enhanced(k)
    if require_enhanced and not enhanced:
        raise ValueError(f"verify_free_hom needs both structures enhanced at level {k}")
    same_signature(X, A)
    n = A.n
    for x in cube(X.n, k):
        T = xi.tensors.get(x)
        if T is None:
            return VerifyResult(False, failure=f"ξ undefined at {x}")
        if T.base != n or T.order != k or not T.is_stochastic():
            return VerifyResult(False, failure=f"ξ{x} is not a stochastic order-{k} tensor over [{n}]")
    Rk = enhancement_symbol(k)
    qs: dict = {}
    if Rk in X.symbols:
        bad = consistency_violation(xi, k)
        if bad is not None:
            return VerifyResult(False, failure=f"consistency equation fails at x={bad[0]}, i={bad[1]}")
        for x in cube(X.n, k):
            qs[(Rk, x)] = dict(xi.tensors[x].entries)
    ids: dict = {}
    tid = {x: ids.setdefault(_canon(T), len(ids)) for x, T in xi.tensors.items()}
    for R in X.symbols:
        if R == Rk:
            continue
        r = X.arity(R)
        rel = list(A.tuples(R))
        idx = list(cube(r, k))
        # constraints whose target tensors coincide share one certificate
        memo: dict = {}
        for x in X.tuples(R):
            sig = tuple(tid[tuple(x[j - 1] for j in i)] for i in idx)
            hint = None if hints is None else hints.get((R, x))
            if hint is None and sig in memo:
                q = memo[sig]
                if q is None:
                    return VerifyResult(False, failure=f"no q for relation {R} at {x}")
                qs[(R, x)] = q
                continue
            targets = [(i, xi.tensors[tuple(x[j - 1] for j in i)]) for i in idx]
            q = None
            if r <= k:
                i0 = tuple(range(1, r + 1)) + (r,) * (k - r)
                T0 = xi.tensors[tuple(x[j - 1] for j in i0)]
                q = {b: T0[b + (b[-1],) * (k - r)] for b in rel}
                q = {b: v for b, v in q.items() if v}
                if not _q_matches(rel, q, targets, n):
                    q = None
            if q is None:
                if hint is not None and _q_matches(rel, hint, targets, n):
                    q = dict(hint)
                else:
                    q = _q_from_lp(rel, targets, n, k)
            if hint is None:
                memo[sig] = q
            if q is None:
                return VerifyResult(False, failure=f"no q for relation {R} at {x}")
            qs[(R, x)] = q
    return VerifyResult(True, qs)


def ximap_to_solution(xi: XiMap, q: Mapping | None = None, check: bool = True) -> SASolution:
    """λ_{{x}}(f_{x,a}) := ξ(x)[a] and λ_{R,x}(f_{x,a}) := q^x(a), asserting representative independence."""
    X, A, k = xi.X, xi.A, xi.k
    if q is None:
        ver = verify_free_hom(xi)
        if not ver:
            raise VerificationFailure(ver.failure)
        q = ver.q
    sol = SASolution(X, A, k)
    for x in cube(X.n, k):
        T = xi.tensors[x]
        for a, S, f in _fn_entries(x, A.n):
            v = T[a]
            prev = sol.lambdaV.get((S, f))
            if prev is None:
                sol.lambdaV[(S, f)] = v
            elif prev != v:
                raise VerificationFailure(f"representatives disagree at V={S}, f={f}: {prev} vs {v}")
    sol.lambdaV = {key: v for key, v in sol.lambdaV.items() if v}
    for R in X.symbols:
        for x in X.tuples(R):
            qx = q[(R, x)]
            S = tuple(sorted(set(x)))
            where = {v: p for p, v in enumerate(S)}
            for b, v in qx.items():
                if not v:
                    continue
                if not refines(x, b):
                    raise VerificationFailure(f"q for {R} at {x} has mass on {b}, which breaks the pattern")
                f = tuple(b[x.index(s)] for s in S)
                assert tuple(f[where[u]] for u in x) == b
                sol.lambdaC[(R, x, f)] = v
    if check:
        bad = first_sa_violation(sol)
        if bad:
            raise VerificationFailure(f"translated SA solution fails: {bad}")
    return sol


def blp_solution_to_ximap(sol: BLPSolution, X: RelationalStructure, A: RelationalStructure, k: int) -> XiMap:
    """Read ξ off a BLP(X^⊗k, A^⊗k) witness: ξ(x) is the distribution of the tensor-power vertex x."""
    tensors = {}
    for x in cube(X.n, k):
        dist = sol.vertex.get(encode(x, X.n), {})
        tensors[x] = CubicalTensor.build(A.n, k, {decode(a, A.n, k): v for a, v in dist.items()},
                                         stochastic=True)
    return XiMap(X, A, k, tensors)


def ximap_to_blp_solution(xi: XiMap, q: Mapping) -> BLPSolution:
    """The converse: a BLP(X^⊗k, A^⊗k) point from a verified ξ and its q vectors."""
    X, A, k = xi.X, xi.A, xi.k
    vertex = {}
    for x, T in xi.tensors.items():
        vertex[encode(x, X.n)] = {encode(a, A.n): v for a, v in T.entries.items()}
    cons = {}
    for (R, x), qx in q.items():
        xs = segre_flat(x, k, X.n)
        cons[(R, xs)] = {segre_flat(b, k, A.n): v for b, v in qx.items()}
    return BLPSolution(vertex, cons)


# derived maps


def restrict_level(xi: XiMap, p: int, q: Mapping | None = None) -> XiMap:
    """g(y) = ξ((y_1..y_p, y_1, ..., y_1)) with the trailing k-p modes summed out."""
    k = xi.k
    if not 1 <= p <= k:
        raise ValueError(f"level {p} outside [1,{k}]")
    if p == k:
        return xi
    X, A = ensure_enhanced(xi.X, p), ensure_enhanced(xi.A, p)
    tensors = {}
    for y in cube(X.n, p):
        T = xi.tensors[y + (y[0],) * (k - p)]
        out: dict = {}
        for a, v in T.entries.items():
            out[a[:p]] = out.get(a[:p], 0) + v
        tensors[y] = CubicalTensor.build(A.n, p, out, stochastic=True)
    g = XiMap(X, A, p, tensors)
    ver = verify_free_hom(g, hints=q if q is not None else _level_hints(xi))
    if not ver:
        raise VerificationFailure(f"restriction to level {p} fails: {ver.failure}")
    return g


def _level_hints(xi: XiMap) -> dict:
    ver = verify_free_hom(xi)
    if not ver:
        raise VerificationFailure(ver.failure)
    return ver.q


def psi(T: CubicalTensor, ells) -> list[dict]:
    """(J ∗ Π_ℓ(1) ∗ T, ..., J ∗ Π_ℓ(k) ∗ T) as vectors over [n]."""
    k, n = T.order, T.base
    J = CubicalTensor.ones(n, k - 1)
    out = []
    for ell in ells:
        v = contract(J, apply_pi(ell, T), k - 1)
        out.append({a[0]: val for a, val in v.entries.items()})
    return out


def default_ells(k: int):
    return [(j,) * k for j in range(1, k + 1)]


def project_to_blp(xi: XiMap, q: Mapping | None = None, ells=None) -> BLPSolution:
    """BLP(X, A) point: λ_x from ψ(ξ(x, ..., x)), λ_{R,x} from the certifying q vectors."""
    X, A, k = xi.X, xi.A, xi.k
    if q is None:
        q = _level_hints(xi)
    ells = default_ells(k) if ells is None else ells
    vertex = {}
    for x in range(1, X.n + 1):
        comps = psi(xi.tensors[(x,) * k], ells) if k > 1 else [{a[0]: v for a, v in xi.tensors[(x,)].entries.items()}]
        vertex[x] = comps[0]
    cons = {}
    for R in X.symbols:
        for x in X.tuples(R):
            cons[(R, x)] = dict(q[(R, x)])
    sol = BLPSolution(vertex, cons)
    bad = first_blp_violation(sol, X, A)
    if bad:
        raise VerificationFailure(f"projection violates BLP: {bad}")
    return sol


def enhance_chain(A: RelationalStructure, top: int) -> RelationalStructure:
    for t in range(1, top + 1):
        A = ensure_enhanced(A, t)
    return A


def transport_line_digraph(xi: XiMap) -> XiMap:
    """ϑ(x)[a] = ξ(x')[a'], x' and a' interleaving the arc endpoints; level halves."""
    k2 = xi.k
    if k2 % 2:
        raise ValueError("transport needs an even level")
    k = k2 // 2
    X0, A0 = xi.X.base(), xi.A.base()
    Xe, Ae = enhance_chain(X0, k2), enhance_chain(A0, k2)
    src = xi.with_structures(Xe, Ae)
    ver = verify_free_hom(src)
    if not ver:
        raise VerificationFailure(f"input fails level-{k2} verification: {ver.failure}")
    dX, dA = line_digraph(X0), line_digraph(A0)
    arc_index = {arc: i + 1 for i, arc in enumerate(dA.labels)}
    tensors = {}
    for x in cube(dX.n, k):
        xp = tuple(e for v in x for e in dX.labels[v - 1])
        entries = {}
        for b, v in xi.tensors[xp].entries.items():
            pairs = [(b[2 * t], b[2 * t + 1]) for t in range(k)]
            if all(pr in arc_index for pr in pairs):
                entries[tuple(arc_index[pr] for pr in pairs)] = v
            else:
                raise VerificationFailure(f"ξ{xp} puts mass {v} on {b}, which is not a partial homomorphism")
        tensors[x] = CubicalTensor.build(dA.n, k, entries, stochastic=True)
    out = XiMap(ensure_enhanced(dX, k), ensure_enhanced(dA, k), k, tensors)
    ver = verify_free_hom(out)
    if not ver:
        raise VerificationFailure(f"transported map fails: {ver.failure}")
    return out


def act(tau: Map, a: Tuple) -> Tuple:
    return tuple(tau[e - 1] for e in a)


def symmetrize(xi: XiMap, G: AutomorphismGroup, check: bool = True) -> XiMap:
    """Average of the maps x -> (a -> ξ(x)[τ^{-1}(a)]) over τ in G."""
    w = Fraction(1, len(G))
    tensors = {}
    for x, T in xi.tensors.items():
        out: dict = {}
        for tau in G:
            for b, v in T.entries.items():
                a = act(tau, b)
                out[a] = out.get(a, 0) + w * v
        tensors[x] = CubicalTensor.build(T.base, T.order, out, stochastic=True)
    res = XiMap(xi.X, xi.A, xi.k, tensors)
    if check:
        for x, T in tensors.items():
            for tau in G:
                for a in cube(T.base, T.order):
                    if T[a] != T[act(tau, a)]:
                        raise VerificationFailure(f"symmetrised ξ{x} not invariant at {a}")
        ver = verify_free_hom(res)
        if not ver:
            raise VerificationFailure(ver.failure)
    return res


def extract_assignment(xi: XiMap, a: Tuple) -> Map:
    """f(j) = a_j for a in the support of ξ((1, ..., k)) when |X| = k."""
    X, A, k = xi.X, xi.A, xi.k
    if X.n != k or k < 2:
        raise ValueError(f"needs |X| = k >= 2, got |X| = {X.n}, k = {k}")
    if not (X.is_enhanced(k) and A.is_enhanced(k)):
        raise ValueError("extraction needs k-enhanced structures")
    a = tuple(a)
    if not xi.tensors[tuple(range(1, k + 1))][a]:
        raise ValueError(f"{a} is not in the support of ξ(1..{k})")
    if not is_homomorphism(a, X, A):
        raise VerificationFailure(f"extracted map {a} is not a homomorphism")
    return a


def sa_count_homs(X: RelationalStructure, A: RelationalStructure, cap: int | None = None) -> int:
    """|Hom(X, A)| as the support size of a maximum-support ξ at (1, ..., k), k = |X|."""
    return count_with_map(X, A, cap)[0]


def count_with_map(X: RelationalStructure, A: RelationalStructure, cap: int | None = None
                   ) -> tuple[int, XiMap | None]:
    """The count from :func:`sa_count_homs` together with the maximum-support ξ it was read from."""
    k = X.n
    if k < 2:
        raise ValueError("needs |X| >= 2")
    Xe, Ae = ensure_enhanced(X, k, cap), ensure_enhanced(A, k, cap)
    whole = tuple(range(1, k + 1))
    block = [("V", whole, f) for f in itertools.product(range(1, A.n + 1), repeat=k)]
    res = solve_sa(Xe, Ae, k, support_vars=block, cap=cap)
    if not res.accepts:
        return 0, None
    xi = solution_to_ximap(res.solution)
    return len(xi.tensors[whole].support()), xi


# property checks used by tests and experiments


def lemma_vanishing_violation(xi: XiMap):
    """Entries with x ⊀ a must vanish."""
    for x, T in xi.tensors.items():
        for a in T.entries:
            if not refines(x, a):
                return x, a
    return None


def q_vanishing_violation(q: Mapping):
    for (R, x), qx in q.items():
        for b, v in qx.items():
            if v and not refines(x, b):
                return R, x, b
    return None


def partial_hom_violation(xi: XiMap):
    """If x_i is in R^X but a_i is not in R^A then ξ(x)[a] must be 0."""
    X, A, k = xi.X, xi.A, xi.k
    for R in X.symbols:
        if A.is_full(R):
            continue
        r = X.arity(R)
        rx = X.relation_set(R)
        idx = list(cube(k, r))
        for x, T in xi.tensors.items():
            for i in idx:
                if tuple(x[j - 1] for j in i) not in rx:
                    continue
                for a in T.entries:
                    if not A.contains(R, tuple(a[j - 1] for j in i)):
                        return R, x, i, a
    return None


def point_mass_ximap(h: Map, X: RelationalStructure, A: RelationalStructure, k: int) -> XiMap:
    X, A = ensure_enhanced(X, k), ensure_enhanced(A, k)
    tensors = {x: CubicalTensor.unit(A.n, tuple(h[v - 1] for v in x)) for x in cube(X.n, k)}
    return XiMap(X, A, k, tensors)


def blp_on_tensor_powers(X: RelationalStructure, A: RelationalStructure, k: int, cap: int | None = None):
    """Decide BLP(X^⊗k, A^⊗k); on acceptance also return the ξ read off the witness."""
    from .tensors import tensor_power
    TX, TA = tensor_power(X, k, cap).structure, tensor_power(A, k, cap).structure
    ok, sol, res = blp_accepts(TX, TA, cap)
    if not ok:
        return False, None, res
    return True, blp_solution_to_ximap(sol, X, A, k), res


def line_digraph_pair(X, A):
    """Binary symbols are required; returns the two line digraphs."""
    binary_symbol(X)
    binary_symbol(A)
    return line_digraph(X.base()), line_digraph(A.base())


def nonenhanced_cycle_ximap() -> XiMap:
    """A level-3 map from the directed 3-cycle into F(K_2^⊗3) that is a homomorphism
    of the plain structures although the 3-cycle has no 2-colouring.

    Values depend only on the equality pattern of x: two entries of 1/2, or 1/8
    everywhere when x is all-distinct. It breaks the consistency equation, so it
    only verifies with ``require_enhanced=False``.
    """
    from .structures import clique, directed_cycle
    from .tensors import pattern
    half = Fraction(1, 2)
    by_pattern = {
        (1, 1, 1): [(1, 1, 1), (2, 2, 2)],
        (1, 1, 2): [(1, 1, 2), (2, 2, 1)],
        (1, 2, 2): [(2, 1, 1), (1, 2, 2)],
        (1, 2, 1): [(2, 1, 2), (1, 2, 1)],
    }
    spread = CubicalTensor.build(2, 3, {a: Fraction(1, 8) for a in cube(2, 3)}, stochastic=True)
    tensors = {}
    for x in cube(3, 3):
        p = pattern(x)
        tensors[x] = spread if p == (1, 2, 3) else CubicalTensor.build(
            2, 3, {a: half for a in by_pattern[p]}, stochastic=True)
    return XiMap(directed_cycle(3), clique(2), 3, tensors)
