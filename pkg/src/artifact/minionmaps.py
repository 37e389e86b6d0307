"""Maps between polymorphisms of a template and of its tensor powers.

Maps are tuples of 1-based values indexed by the encoded domain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import check_cap
from .relaxations import VerificationFailure, XiMap, point_mass_ximap
from .structures import (
    Map,
    RelationalStructure,
    compose,
    decode,
    encode,
    ensure_enhanced,
    is_homomorphism,
    iter_homomorphisms,
    power,
    same_signature,
)
from .tensors import CubicalTensor, tensor_power


def hom_lift(f: Map, X: RelationalStructure, B: RelationalStructure, k: int, check: bool = True) -> Map:
    """f*((a_1..a_k)) = (f(a_1)..f(a_k)) as a map [n_X^k] -> [n_B^k]."""
    if check and not is_homomorphism(f, X, B):
        raise VerificationFailure("input is not a homomorphism")
    g = tuple(encode([f[a - 1] for a in decode(idx, X.n, k)], B.n) for idx in range(1, X.n**k + 1))
    if check and not is_homomorphism(g, tensor_power(X, k).structure, tensor_power(B, k).structure):
        raise VerificationFailure("lifted map is not a homomorphism of the tensor powers")
    return g


def hom_drop(g: Map, X: RelationalStructure, B: RelationalStructure, k: int, check: bool = True) -> Map:
    """g_*(a) = first coordinate of g((a, ..., a))."""
    if check and not is_homomorphism(g, tensor_power(X, k).structure, tensor_power(B, k).structure):
        raise VerificationFailure("input is not a homomorphism of the tensor powers")
    f = tuple(decode(g[encode((a,) * k, X.n) - 1], B.n, k)[0] for a in range(1, X.n + 1))
    if check and not is_homomorphism(f, X, B):
        raise VerificationFailure("dropped map is not a homomorphism")
    return f


def boolean_unary_structure() -> RelationalStructure:
    """Domain {1, 2} with one unary relation holding both elements."""
    from .structures import make_structure
    return make_structure(2, {"U": [(1,), (2,)]}, {"U": 1}, "U2")


@dataclass(frozen=True)
class PowerTensorIso:
    forward: Map  # (A^L)^⊗k -> (A^⊗k)^L
    backward: Map
    P: RelationalStructure
    Q: RelationalStructure


def power_tensor_iso(A: RelationalStructure, L: int, k: int, cap: int | None = None) -> PowerTensorIso:
    """Transpose the k x L matrix of coordinates."""
    n = A.n
    check_cap(n ** (L * k), cap, "power/tensor iso domain")
    P = tensor_power(power(A, L, cap), k, cap).structure
    Q = power(tensor_power(A, k, cap).structure, L, cap)
    fwd = []
    for p in range(1, n ** (L * k) + 1):
        M = [decode(e, n, L) for e in decode(p, n**L, k)]
        cols = [encode([M[t][c] for t in range(k)], n) for c in range(L)]
        fwd.append(encode(cols, n**k))
    fwd = tuple(fwd)
    bwd = [0] * len(fwd)
    for p, q in enumerate(fwd, start=1):
        bwd[q - 1] = p
    bwd = tuple(bwd)
    if 0 in bwd:
        raise VerificationFailure("coordinate transposition is not a bijection")
    if not is_homomorphism(fwd, P, Q) or not is_homomorphism(bwd, Q, P):
        raise VerificationFailure("coordinate transposition does not preserve relations")
    return PowerTensorIso(fwd, bwd, P, Q)


@dataclass(frozen=True)
class PolymorphismSet:
    arity: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, f):
        return tuple(f) in set(self.members)

    def dump(self) -> str:
        return "".join(" ".join(map(str, f)) + "\n" for f in self.members)


def enumerate_polymorphisms(A: RelationalStructure, B: RelationalStructure, L: int,
                            cap: int | None = None, node_budget: int | None = None) -> PolymorphismSet:
    same_signature(A, B)
    AL = power(A, L, cap)
    members = tuple(iter_homomorphisms(AL, B, node_budget))
    check_cap(len(members), cap, "polymorphism count")
    return PolymorphismSet(L, members)


def minor(f: Map, pi, n: int, L: int, Lp: int) -> Map:
    """f_{/π}(y_1..y_{L'}) = f(y_{π(1)}, ..., y_{π(L)}) for π: [L] -> [L']."""
    pi = tuple(pi)
    if len(pi) != L or any(not 1 <= j <= Lp for j in pi):
        raise ValueError(f"{pi} is not a map [{L}] -> [{Lp}]")
    return tuple(f[encode([y[j - 1] for j in pi], n) - 1] for y in itertools.product(range(1, n + 1), repeat=Lp))


def _generators(L: int):
    if L < 2:
        return []
    swap = (2, 1) + tuple(range(3, L + 1))
    cycle = tuple(range(2, L + 1)) + (1,)
    return [swap, cycle]


def is_symmetric(f: Map, n: int, L: int) -> bool:
    for sigma in _generators(L):
        if minor(f, sigma, n, L, L) != tuple(f):
            return False
    return True


def has_symmetric_polymorphism(A: RelationalStructure, B: RelationalStructure, L: int,
                               cap: int | None = None, node_budget: int | None = None) -> bool:
    same_signature(A, B)
    for f in iter_homomorphisms(power(A, L, cap), B, node_budget):
        if is_symmetric(f, A.n, L):
            return True
    return False


def _maps(n: int, L: int, Lp: int):
    return itertools.product(range(1, Lp + 1), repeat=L)


def psi_roundtrip_check(A: RelationalStructure, B: RelationalStructure, k: int, L: int,
                        cap: int | None = None) -> tuple[bool, list[str]]:
    """ψ(f) = ρ_L(f) ∘ ξ_L^{-1} and ψ'(g) = ρ'_L(g ∘ ξ_L) on every L-ary polymorphism.

    Checks that ψ(f) is a polymorphism of the tensor powers, ψ'(ψ(f)) = f, and
    ψ(f_{/π}) = ψ(f)_{/π} for every π: [L] -> [L'] with L' <= 2.
    """
    if not A.is_enhanced(k):
        raise ValueError(f"A must be {k}-enhanced")
    same_signature(A, B)
    TA, TB = tensor_power(A, k, cap).structure, tensor_power(B, k, cap).structure
    isos: dict = {}
    pols: dict = {}

    def iso(m):
        if m not in isos:
            isos[m] = power_tensor_iso(A, m, k, cap)
        return isos[m]

    def pol(m):
        if m not in pols:
            pols[m] = enumerate_polymorphisms(A, B, m, cap)
        return pols[m]

    def psi_of(f, m):
        return compose(hom_lift(f, power(A, m, cap), B, k, check=False), iso(m).backward)

    notes = []
    ok = True
    for f in pol(L):
        g = psi_of(f, L)
        if not is_homomorphism(g, power(TA, L, cap), TB):
            ok = False
            notes.append(f"ψ({f}) is not a polymorphism of the tensor powers")
            continue
        back = hom_drop(compose(g, iso(L).forward), power(A, L, cap), B, k, check=False)
        if back != tuple(f):
            ok = False
            notes.append(f"ψ'(ψ({f})) = {back}")
        for Lp in (1, 2):
            for pi in _maps(A.n, L, Lp):
                fm = minor(f, pi, A.n, L, Lp)
                if fm not in pol(Lp):
                    ok = False
                    notes.append(f"minor {pi} of {f} is not a polymorphism")
                    continue
                if psi_of(fm, Lp) != minor(g, pi, TA.n, L, Lp):
                    ok = False
                    notes.append(f"ψ does not commute with the minor {pi} at {f}")
    notes.append(f"{len(pol(L))} polymorphisms of arity {L} checked")
    return ok, notes


def point_mass_free_map(A: RelationalStructure) -> XiMap:
    """a -> E_a as a map A -> F(A) at level 1."""
    return point_mass_ximap(tuple(range(1, A.n + 1)), A, A, 1)


def pushforward(xi: XiMap, h: Map, B: RelationalStructure) -> XiMap:
    """Reindex every ξ(x) along a homomorphism h: A -> B applied entrywise."""
    k = xi.k
    Be = ensure_enhanced(B, k)
    if not is_homomorphism(h, xi.A, Be):
        raise VerificationFailure("pushforward map is not a homomorphism of the enhanced structures")
    shared: dict = {}
    tensors = {}
    for x, T in xi.tensors.items():
        key = id(T)
        if key not in shared:
            out: dict = {}
            for a, v in T.entries.items():
                b = tuple(h[e - 1] for e in a)
                out[b] = out.get(b, 0) + v
            shared[key] = CubicalTensor.build(Be.n, k, out, stochastic=True)
        tensors[x] = shared[key]
    return XiMap(xi.X, Be, k, tensors)
