"""k-consistency as a greatest fixpoint, and its Boolean tensor form.

A family member is a pair (V, f) with V a sorted tuple of vertices
(1 <= |V| <= k) and f the tuple of images aligned with V.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import check_cap
from .relaxations import XiMap
from .structures import RelationalStructure, Tuple, enhancement_symbol, ensure_enhanced, same_signature
from .tensors import cube, refines


@dataclass(frozen=True)
class PartialHomFamily:
    X: RelationalStructure
    A: RelationalStructure
    k: int
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __contains__(self, item):
        return item in self.members

    def dump(self) -> str:
        return "".join(f"V {' '.join(map(str, V))} -> {' '.join(map(str, f))}\n" for V, f in sorted(self.members))


@dataclass(frozen=True)
class BooleanXiMap:
    X: RelationalStructure
    A: RelationalStructure
    k: int
    supports: dict  # x -> frozenset of a in [n_A]^k


def _scoped(X: RelationalStructure, A: RelationalStructure):
    """(R, x, set of vertices) for every constraint of X whose relation is not full in A."""
    return [(R, x, frozenset(x)) for R in X.symbols if not A.is_full(R) for x in X.tuples(R)]


def is_partial_hom(V: Tuple, f: Tuple, X: RelationalStructure, A: RelationalStructure, scoped=None) -> bool:
    img = dict(zip(V, f))
    Vs = set(V)
    for R, x, s in scoped if scoped is not None else _scoped(X, A):
        if s <= Vs and not A.contains(R, tuple(img[v] for v in x)):
            return False
    return True


def _restrict(V: Tuple, f: Tuple, drop: int) -> tuple[Tuple, Tuple]:
    return V[:drop] + V[drop + 1:], f[:drop] + f[drop + 1:]


def _extend(V: Tuple, f: Tuple, v: int, a: int) -> tuple[Tuple, Tuple]:
    pos = sum(1 for u in V if u < v)
    return V[:pos] + (v,) + V[pos:], f[:pos] + (a,) + f[pos:]


def kconsistency(X: RelationalStructure, A: RelationalStructure, k: int, order: str = "canonical",
                 cap: int | None = None) -> tuple[bool, PartialHomFamily]:
    """Greatest family of partial homs on <= k vertices closed under restriction with the extension property."""
    same_signature(X, A)
    if k < 1:
        raise ValueError("k must be >= 1")
    count = sum(len(list(itertools.combinations(range(X.n), s))) * A.n**s for s in range(1, min(k, X.n) + 1))
    check_cap(count, cap, "k-consistency candidates")
    scoped = _scoped(X, A)
    fam = set()
    for s in range(1, min(k, X.n) + 1):
        for V in itertools.combinations(range(1, X.n + 1), s):
            for f in itertools.product(range(1, A.n + 1), repeat=s):
                if is_partial_hom(V, f, X, A, scoped):
                    fam.add((V, f))
    verts = range(1, X.n + 1)
    changed = True
    while changed:
        changed = False
        members = sorted(fam, reverse=(order == "reverse"))
        for V, f in members:
            if (V, f) not in fam:
                continue
            ok = all(_restrict(V, f, p) in fam for p in range(len(V))) if len(V) > 1 else True
            if ok and len(V) < k:
                for v in verts:
                    if v in V:
                        continue
                    if not any(_extend(V, f, v, a) in fam for a in range(1, A.n + 1)):
                        ok = False
                        break
            if not ok:
                fam.discard((V, f))
                changed = True
    family = PartialHomFamily(X, A, k, frozenset(fam))
    return bool(fam), family


def is_consistent_family(F: PartialHomFamily) -> bool:
    X, A, k = F.X, F.A, F.k
    fam = F.members
    if not fam:
        return False
    scoped = _scoped(X, A)
    for V, f in fam:
        if len(V) > k or not is_partial_hom(V, f, X, A, scoped):
            return False
        if len(V) > 1 and not all(_restrict(V, f, p) in fam for p in range(len(V))):
            return False
        if len(V) < min(k, X.n):
            for v in range(1, X.n + 1):
                if v not in V and not any(_extend(V, f, v, a) in fam for a in range(1, A.n + 1)):
                    return False
    return True


def _fxa(x: Tuple, a: Tuple) -> tuple[Tuple, Tuple]:
    S = tuple(sorted(set(x)))
    img = dict(zip(x, a))
    return S, tuple(img[v] for v in S)


def family_to_boolean_ximap(F: PartialHomFamily, k: int | None = None) -> BooleanXiMap:
    """a in ξ(x) iff x ≺ a and f_{x,a} is in the family."""
    k = F.k if k is None else k
    if not F.members:
        raise ValueError("empty family")
    X, A = ensure_enhanced(F.X, k), ensure_enhanced(F.A, k)
    sup = {}
    for x in cube(X.n, k):
        S = tuple(sorted(set(x)))
        where = {v: p for p, v in enumerate(S)}
        sup[x] = frozenset(
            tuple(f[where[v]] for v in x)
            for f in itertools.product(range(1, A.n + 1), repeat=len(S))
            if (S, f) in F.members
        )
    return BooleanXiMap(X, A, k, sup)


def boolean_ximap_to_family(xi: BooleanXiMap) -> PartialHomFamily:
    members = set()
    for x, sup in xi.supports.items():
        for a in sup:
            if refines(x, a):
                members.add(_fxa(x, a))
    return PartialHomFamily(xi.X.base(), xi.A.base(), xi.k, frozenset(members))


def support_map(xi: XiMap) -> BooleanXiMap:
    return BooleanXiMap(xi.X, xi.A, xi.k, {x: T.support() for x, T in xi.tensors.items()})


def boolean_violation(xi: BooleanXiMap, X: RelationalStructure | None = None,
                      A: RelationalStructure | None = None, k: int | None = None) -> str | None:
    X = xi.X if X is None else X
    A = xi.A if A is None else A
    k = xi.k if k is None else k
    if not (X.is_enhanced(k) and A.is_enhanced(k)):
        raise ValueError(f"needs both structures enhanced at level {k}")
    sup = xi.supports
    for x in cube(X.n, k):
        if not sup.get(x):
            return f"empty support at {x}"
    Rk = enhancement_symbol(k)
    idx_k = list(cube(k, k))
    for x in cube(X.n, k):
        for i in idx_k:
            img = frozenset(tuple(a[j - 1] for j in i) for a in sup[x])
            if img != sup[tuple(x[j - 1] for j in i)]:
                return f"Boolean consistency fails at x={x}, i={i}"
    for R in X.symbols:
        if R == Rk:
            continue
        idx = list(cube(X.arity(R), k))
        rel = list(A.tuples(R))
        for x in X.tuples(R):
            targets = [(i, sup[tuple(x[j - 1] for j in i)]) for i in idx]
            Q = [b for b in rel if all(tuple(b[j - 1] for j in i) in T for i, T in targets)]
            if not Q:
                return f"no nonempty Q for {R} at {x}"
            for i, T in targets:
                if frozenset(tuple(b[j - 1] for j in i) for b in Q) != T:
                    return f"Q for {R} at {x} misses part of ξ(x_i), i={i}"
    return None


def verify_boolean_free_hom(xi: BooleanXiMap, X=None, A=None, k=None) -> bool:
    return boolean_violation(xi, X, A, k) is None


def equivalence_precondition(X: RelationalStructure, k: int) -> None:
    arities = [X.arity(R) for R in X.base().symbols] or [1]
    if k < max(2, max(arities)):
        raise ValueError(f"the k-consistency correspondence needs k >= max(2, max arity) = {max(2, max(arities))}")
