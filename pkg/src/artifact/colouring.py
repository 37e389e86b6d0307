"""Clique maps, the clique acceptance table and approximate-colouring exhibits."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_NODE_BUDGET
from .minionmaps import pushforward
from .relaxations import (
    VerificationFailure,
    XiMap,
    check_consistency_eq,
    sa_accepts,
    first_sa_violation,
    transport_line_digraph,
    verify_free_hom,
    ximap_to_solution,
)
from .structures import (
    RelationalStructure,
    binary_symbol,
    clique,
    digraph,
    ensure_enhanced,
    find_homomorphism,
    is_homomorphism,
    line_digraph,
)
from .tensors import CubicalTensor, cube, pattern, pattern_equiv


def _clique_like(k: int, symbol: str) -> RelationalStructure:
    return digraph(k, [(a, b) for a in range(1, k + 1) for b in range(1, k + 1) if a != b], f"K{k}", symbol)


def _pattern_tensor(pat: tuple, k: int) -> CubicalTensor:
    m = max(pat)
    w = Fraction(math.factorial(k - m), math.factorial(k))
    entries = {tuple(colours[c - 1] for c in pat): w for colours in itertools.permutations(range(1, k + 1), m)}
    return CubicalTensor.build(k, len(pat), entries, stochastic=True)


def clique_xi(X: RelationalStructure, k: int) -> XiMap:
    """x -> ((k - |{x}|)!/k!) times the indicator of {a in [k]^k : a ∼ x}."""
    if k < 2:
        raise ValueError("clique map needs k >= 2")
    E = binary_symbol(X)
    loops = [t for t in X.tuples(E) if t[0] == t[1]]
    if loops:
        raise ValueError(f"loop detected at {loops[0]}")
    Xe = ensure_enhanced(X, k)
    Ke = ensure_enhanced(_clique_like(k, E), k)
    if set(Xe.symbols) != set(Ke.symbols):
        raise ValueError(f"X must be a digraph over the single symbol {E}")
    shared: dict = {}
    tensors = {}
    for x in cube(X.n, k):
        pat = pattern(x)
        if pat not in shared:
            shared[pat] = _pattern_tensor(pat, k)
        tensors[x] = shared[pat]
    return XiMap(Xe, Ke, k, tensors)


def match_count(a, i, x, k: int) -> int:
    """|{b in [k]^k : b_i = a, b ∼ x}| in closed form."""
    a, i, x = tuple(a), tuple(i), tuple(x)
    xi = tuple(x[j - 1] for j in i)
    if not pattern_equiv(a, xi):
        return 0
    return math.factorial(k - len(set(xi))) // math.factorial(k - len(set(x)))


def match_count_bruteforce(a, i, x, k: int) -> int:
    a, i, x = tuple(a), tuple(i), tuple(x)
    return sum(1 for b in cube(k, k) if tuple(b[j - 1] for j in i) == a and pattern_equiv(b, x))


def acceptance_table(ks, cs, ds, cap: int | None = None) -> dict:
    """(k, c, d) -> SA^k(K_c, K_d) acceptance from the LP; any disagreement with min(k, c) <= d raises."""
    table = {}
    for k, c, d in itertools.product(ks, cs, ds):
        ok, _ = sa_accepts(clique(c), clique(d), k, cap)
        if ok != (min(k, c) <= d):
            raise VerificationFailure(f"LP says {ok} for (k,c,d)=({k},{c},{d}) against min(k,c) <= d")
        table[(k, c, d)] = ok
    return table


@dataclass(frozen=True)
class HarnerBounds:
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")

    @staticmethod
    def a_of(p: int) -> int:
        return 2**p

    @staticmethod
    def b_of(p: int) -> int:
        return math.comb(p, p // 2)

    @property
    def a(self) -> int:
        return self.a_of(self.p)

    @property
    def b(self) -> int:
        return self.b_of(self.p)

    def iterate(self, i: int) -> tuple[int, int]:
        """(a^(i)(p), b^(i)(p))."""
        a = b = self.p
        for _ in range(i):
            a, b = self.a_of(a), self.b_of(b)
        return a, b


def harner_bounds(p: int) -> HarnerBounds:
    return HarnerBounds(p)


def _step(lines: list, name: str, ok: bool, detail: str) -> bool:
    lines.append(f"STEP {name} {'OK' if ok else 'FAIL'} {detail}")
    return ok


def approx_colouring_exhibit(c: int, d: int, k: int, cap: int | None = None) -> tuple[bool, list[str], dict]:
    """SA^k(K_{d+1}, K_c) accepts while K_{d+1} does not map to K_d.

    Returns (all steps ok, report lines, artifacts by name).
    """
    lines: list[str] = []
    arts: dict = {}
    if not 2 <= k <= c:
        _step(lines, "regime", False, f"unsupported: needs 2 <= k <= c, got k={k}, c={c}")
        return False, lines, arts
    X = clique(d + 1)
    Kc = clique(c)
    ok = True
    xi0 = clique_xi(X, k)
    ver0 = verify_free_hom(xi0)
    ok &= _step(lines, "clique_map", bool(ver0) and check_consistency_eq(xi0),
                f"K{d + 1}^(x){k} -> F(K{k}^(x){k})")
    arts["clique_map"] = xi0
    h = tuple(range(1, k + 1))
    Ke, Kce = xi0.A, ensure_enhanced(Kc, k)
    ok &= _step(lines, "inclusion", is_homomorphism(h, Ke, Kce), f"K{k} -> K{c} (enhanced)")
    xi1 = pushforward(xi0, h, Kc)
    ver1 = verify_free_hom(xi1)
    ok &= _step(lines, "pushforward", bool(ver1), f"K{d + 1}^(x){k} -> F(K{c}^(x){k})")
    arts["pushforward"] = xi1
    if ver1:
        sol = ximap_to_solution(xi1, ver1.q, check=False)
        bad = first_sa_violation(sol)
        ok &= _step(lines, "sa_solution", bad is None, bad or f"SA^{k}(K{d + 1}, K{c}) point from the map")
        arts["sa_solution"] = sol
    lp, _ = sa_accepts(X, Kc, k, cap)
    ok &= _step(lines, "sa_lp", lp, f"independent LP for SA^{k}(K{d + 1}, K{c}) {'accepts' if lp else 'rejects'}")
    hom = find_homomorphism(X, clique(d))
    ok &= _step(lines, "no_colouring", hom is None, f"K{d + 1} -> K{d}: {'none' if hom is None else hom}")
    return ok, lines, arts


def line_digraph_exhibit(c: int = 4, d: int = 5, cap: int | None = None) -> tuple[bool, list[str], dict]:
    """SA^4(K_d, K_c) through the clique map, transported to SA^2(δK_d, δK_c)."""
    lines: list[str] = []
    arts: dict = {}
    X, Kc = clique(d), clique(c)
    ok = True
    xi0 = clique_xi(X, 4)
    xi1 = pushforward(xi0, tuple(range(1, 5)), Kc) if c != 4 else xi0
    ok &= _step(lines, "level4_map", bool(verify_free_hom(xi1)), f"K{d}^(x)4 -> F(K{c}^(x)4)")
    theta = transport_line_digraph(xi1)
    ver = verify_free_hom(theta)
    ok &= _step(lines, "transport", bool(ver), f"δK{d}^(x)2 -> F(δK{c}^(x)2)")
    arts["transport"] = theta
    dX, dA = line_digraph(X), line_digraph(Kc)
    lp, _ = sa_accepts(dX, dA, 2, cap)
    ok &= _step(lines, "sa_lp", lp, f"independent LP for SA^2(δK{d}, δK{c}) {'accepts' if lp else 'rejects'}")
    lines.append("NOTE the asymptotic claim for every constant level is not desk-reproducible; only this slice is run")
    return ok, lines, arts


def double_line_digraph_colouring(p: int = 4, c: int = 3, node_budget: int = DEFAULT_NODE_BUDGET):
    """Search for δ^(2)K_p -> K_c."""
    E = "E"
    G = line_digraph(line_digraph(clique(p), E), E)
    return G, find_homomorphism(G, _clique_like(c, E), node_budget=node_budget)


__all__ = [
    "HarnerBounds",
    "acceptance_table",
    "approx_colouring_exhibit",
    "clique_xi",
    "double_line_digraph_colouring",
    "harner_bounds",
    "line_digraph_exhibit",
    "match_count",
    "match_count_bruteforce",
    "pushforward",
]
