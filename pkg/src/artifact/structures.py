"""Finite relational structures over the domain [n] = {1..n}.

Tuples are plain tuples of ints. A homomorphism is a tuple ``h`` with
``h[v - 1]`` the image of vertex ``v``.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .config import DEFAULT_NODE_BUDGET, FULL_THRESHOLD, check_cap

Tuple = tuple[int, ...]
Map = tuple[int, ...]

RESERVED_PREFIX = "__R"


def enhancement_symbol(k: int) -> str:
    return f"{RESERVED_PREFIX}{k}"


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class SignatureMismatch(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """Backtracking hit its node budget before deciding the instance."""


# mixed-radix indexing, most significant coordinate first, 1-based on both sides

def encode(t: Sequence[int], n: int) -> int:
    idx = 0
    for a in t:
        idx = idx * n + (a - 1)
    return idx + 1


def decode(idx: int, n: int, k: int) -> Tuple:
    idx -= 1
    out = [0] * k
    for pos in range(k - 1, -1, -1):
        idx, r = divmod(idx, n)
        out[pos] = r + 1
    return tuple(out)


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        for name, ar in self.symbols:
            if ar < 1:
                raise ValueError(f"symbol {name} has arity {ar} < 1")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.symbols)

    def arity(self, name: str) -> int:
        for s, ar in self.symbols:
            if s == name:
                return ar
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(s == name for s, _ in self.symbols)


@dataclass(frozen=True, eq=False)
class RelationalStructure:
    """A finite structure. ``relations`` keeps tuples in declaration order.

    Symbols listed in ``full`` hold every tuple of the right arity and are
    not materialised; ``tuples`` generates them on demand.
    """

    signature: Signature
    n: int
    relations: Mapping[str, tuple[Tuple, ...]]
    full: frozenset = frozenset()
    name: str = ""
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("empty domain")
        for sym, ar in self.signature.symbols:
            if sym in self.full:
                continue
            rel = self.relations.get(sym)
            if rel is None:
                raise ValueError(f"missing relation for symbol {sym}")
            seen = set()
            for t in rel:
                if len(t) != ar:
                    raise ValueError(f"tuple {t} in {sym} has length {len(t)}, arity is {ar}")
                for e in t:
                    if not 1 <= e <= self.n:
                        raise ValueError(f"entry {e} of {t} in {sym} outside [1,{self.n}]")
                if t in seen:
                    raise ValueError(f"duplicate tuple {t} in {sym}")
                seen.add(t)
        extra = set(self.relations) - set(self.signature.names)
        if extra:
            raise ValueError(f"relations for undeclared symbols {sorted(extra)}")

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.signature.names

    def arity(self, sym: str) -> int:
        return self.signature.arity(sym)

    def is_full(self, sym: str) -> bool:
        if sym in self.full:
            return True
        return len(self.relations[sym]) == self.n ** self.arity(sym)

    def tuples(self, sym: str) -> Sequence[Tuple] | Iterator[Tuple]:
        if sym in self.full:
            return itertools.product(range(1, self.n + 1), repeat=self.arity(sym))
        return self.relations[sym]

    def size(self, sym: str) -> int:
        if sym in self.full:
            return self.n ** self.arity(sym)
        return len(self.relations[sym])

    @cached_property
    def _sets(self) -> dict[str, frozenset]:
        return {s: frozenset(t) for s, t in self.relations.items()}

    def contains(self, sym: str, t: Tuple) -> bool:
        if sym in self.full:
            return len(t) == self.arity(sym) and all(1 <= e <= self.n for e in t)
        return t in self._sets[sym]

    def relation_set(self, sym: str) -> frozenset:
        if sym in self.full:
            return frozenset(self.tuples(sym))
        return self._sets[sym]

    def is_enhanced(self, k: int) -> bool:
        sym = enhancement_symbol(k)
        return sym in self.signature and self.arity(sym) == k and self.is_full(sym)

    def without(self, syms: Iterable[str]) -> "RelationalStructure":
        drop = set(syms)
        sig = Signature(tuple(s for s in self.signature.symbols if s[0] not in drop))
        rels = {s: t for s, t in self.relations.items() if s not in drop}
        return RelationalStructure(sig, self.n, rels, self.full - drop, self.name, self.labels)

    def base(self) -> "RelationalStructure":
        """The structure with every enhancement symbol removed."""
        return self.without(s for s in self.symbols if s.startswith(RESERVED_PREFIX))

    def __eq__(self, other):
        if not isinstance(other, RelationalStructure):
            return NotImplemented
        if self.n != other.n or self.signature != other.signature:
            return False
        return all(self.relation_set(s) == other.relation_set(s) for s in self.symbols)

    def __hash__(self):
        return hash((self.n, self.signature))

    def __repr__(self):
        sizes = ", ".join(f"{s}:{self.size(s)}" for s in self.symbols)
        return f"RelationalStructure({self.name or '?'}, n={self.n}, {sizes})"

    def dump(self) -> str:
        return dump_structure(self)

    @cached_property
    def content_hash(self) -> str:
        return hashlib.sha256(dump_structure(self, named=False).encode()).hexdigest()[:16]


def make_structure(n: int, relations: Mapping[str, Iterable[Sequence[int]]], arities: Mapping[str, int] | None = None,
                   name: str = "", full: Iterable[str] = ()) -> RelationalStructure:
    """Convenience constructor; arities default to the tuple length (or must be given for empty relations)."""
    arities = dict(arities or {})
    rels = {}
    for sym, ts in relations.items():
        ts = tuple(dict.fromkeys(tuple(t) for t in ts))
        if sym not in arities:
            if not ts:
                raise ValueError(f"arity of empty relation {sym} must be given")
            arities[sym] = len(ts[0])
        rels[sym] = ts
    full = frozenset(full)
    sig = Signature(tuple((s, arities[s]) for s in list(rels) + [f for f in full if f not in rels]))
    return RelationalStructure(sig, n, rels, full, name)


def digraph(n: int, arcs: Iterable[Sequence[int]], name: str = "", symbol: str = "E") -> RelationalStructure:
    return make_structure(n, {symbol: sorted(tuple(a) for a in arcs)}, {symbol: 2}, name)


def clique(p: int) -> RelationalStructure:
    if p < 1:
        raise ValueError("clique needs p >= 1")
    arcs = [(a, b) for a in range(1, p + 1) for b in range(1, p + 1) if a != b]
    return digraph(p, arcs, name=f"K{p}")


def directed_cycle(p: int) -> RelationalStructure:
    return digraph(p, [(i, i % p + 1) for i in range(1, p + 1)], name=f"C{p}")


def enhance(A: RelationalStructure, k: int, cap: int | None = None) -> RelationalStructure:
    """Add the k-ary symbol holding all of A^k."""
    sym = enhancement_symbol(k)
    if sym in A.signature:
        raise ValueError(f"{A.name or 'structure'} already has reserved symbol {sym}")
    count = A.n ** k
    check_cap(count, cap, f"enhancement {sym}")
    sig = Signature(A.signature.symbols + ((sym, k),))
    rels = dict(A.relations)
    full = set(A.full)
    if count > FULL_THRESHOLD:
        full.add(sym)
    else:
        rels[sym] = tuple(itertools.product(range(1, A.n + 1), repeat=k))
    return RelationalStructure(sig, A.n, rels, frozenset(full), A.name, A.labels)


def ensure_enhanced(A: RelationalStructure, k: int, cap: int | None = None) -> RelationalStructure:
    return A if A.is_enhanced(k) else enhance(A, k, cap)


def power(A: RelationalStructure, L: int, cap: int | None = None) -> RelationalStructure:
    """The L-th cartesian power; elements of [n]^L are encoded into [n^L]."""
    if L < 1:
        raise ValueError("power needs L >= 1")
    N = A.n ** L
    check_cap(N, cap, "power domain")
    rels, full = {}, set()
    for sym, r in A.signature.symbols:
        if A.is_full(sym):
            if N ** r > FULL_THRESHOLD:
                full.add(sym)
            else:
                rels[sym] = tuple(itertools.product(range(1, N + 1), repeat=r))
            continue
        base = list(A.tuples(sym))
        check_cap(len(base) ** L, cap, f"power relation {sym}")
        out = []
        for rows in itertools.product(base, repeat=L):
            out.append(tuple(encode([row[j] for row in rows], A.n) for j in range(r)))
        rels[sym] = tuple(sorted(set(out)))
    name = f"{A.name}^{L}" if A.name else ""
    return RelationalStructure(A.signature, N, rels, frozenset(full), name)


def binary_symbol(X: RelationalStructure) -> str:
    syms = [s for s, ar in X.signature.symbols if ar == 2 and not s.startswith(RESERVED_PREFIX)]
    if len(syms) != 1:
        raise ValueError(f"expected exactly one binary relation, found {syms}")
    return syms[0]


def line_digraph(X: RelationalStructure, symbol: str = "S") -> RelationalStructure:
    """Vertices are the arcs of X in lexicographic order; (x,y) -> (y,z)."""
    sym = binary_symbol(X)
    arcs = sorted(X.tuples(sym))
    if not arcs:
        raise ValueError("line digraph of a digraph with no arcs has an empty domain")
    index = {a: i + 1 for i, a in enumerate(arcs)}
    by_tail: dict[int, list] = {}
    for a in arcs:
        by_tail.setdefault(a[0], []).append(a)
    rel = [(index[a], index[b]) for a in arcs for b in by_tail.get(a[1], [])]
    name = f"d({X.name})" if X.name else ""
    out = make_structure(len(arcs), {symbol: sorted(rel)}, {symbol: 2}, name)
    return RelationalStructure(out.signature, out.n, out.relations, out.full, name, tuple(arcs))


def same_signature(X: RelationalStructure, A: RelationalStructure) -> None:
    if X.signature != A.signature:
        raise SignatureMismatch(f"{X.signature.symbols} vs {A.signature.symbols}")


def is_homomorphism(f: Sequence[int], X: RelationalStructure, A: RelationalStructure) -> bool:
    if len(f) != X.n or any(not 1 <= v <= A.n for v in f):
        return False
    for sym in X.symbols:
        if A.is_full(sym):
            continue
        target = A.relation_set(sym)
        for t in X.tuples(sym):
            if tuple(f[v - 1] for v in t) not in target:
                return False
    return True


def compose(g: Sequence[int], f: Sequence[int]) -> Map:
    """g after f."""
    return tuple(g[v - 1] for v in f)


def inverse(f: Sequence[int]) -> Map:
    out = [0] * len(f)
    for v, img in enumerate(f, start=1):
        out[img - 1] = v
    return tuple(out)


def iter_homomorphisms(X: RelationalStructure, A: RelationalStructure,
                       node_budget: int | None = None) -> Iterator[Map]:
    """All homomorphisms X -> A in lexicographic order.

    Backtracking over vertices 1..n_X, values ascending, with forward
    checking on constraints that have a single unassigned variable left.
    """
    same_signature(X, A)
    nx, na = X.n, A.n
    cons = []
    for sym in X.symbols:
        if A.is_full(sym):
            continue
        target = A.relation_set(sym)
        for t in X.tuples(sym):
            cons.append((t, target))
    domains = [set(range(1, na + 1)) for _ in range(nx)]
    watch: list[list[int]] = [[] for _ in range(nx)]
    for ci, (t, target) in enumerate(cons):
        scope = set(t)
        if len(scope) == 1:
            (v,) = scope
            domains[v - 1] = {a for a in domains[v - 1] if (a,) * len(t) in target}
        for v in scope:
            watch[v - 1].append(ci)
    assignment = [0] * nx
    budget = [node_budget if node_budget is not None else float("inf")]

    def prune(v: int, trail: list) -> bool:
        for ci in watch[v]:
            t, target = cons[ci]
            free = {u for u in t if assignment[u - 1] == 0}
            if not free:
                if tuple(assignment[u - 1] for u in t) not in target:
                    return False
            elif len(free) == 1:
                (u,) = free
                dom = domains[u - 1]
                keep = set()
                for a in dom:
                    assignment[u - 1] = a
                    if tuple(assignment[w - 1] for w in t) in target:
                        keep.add(a)
                assignment[u - 1] = 0
                if len(keep) < len(dom):
                    trail.append((u - 1, dom))
                    domains[u - 1] = keep
                    if not keep:
                        return False
        return True

    def search(v: int) -> Iterator[Map]:
        if v == nx:
            yield tuple(assignment)
            return
        for a in sorted(domains[v]):
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExhausted(f"node budget {node_budget} exhausted")
            assignment[v] = a
            trail: list = []
            if prune(v, trail):
                yield from search(v + 1)
            for u, dom in reversed(trail):
                domains[u] = dom
            assignment[v] = 0

    if all(domains):
        yield from search(0)


def find_homomorphism(X: RelationalStructure, A: RelationalStructure,
                      node_budget: int = DEFAULT_NODE_BUDGET) -> Map | None:
    """First homomorphism in lexicographic order, or None if none exists.

    Raises BudgetExhausted when the search could not finish.
    """
    for h in iter_homomorphisms(X, A, node_budget):
        assert is_homomorphism(h, X, A)
        return h
    return None


def count_homomorphisms_bruteforce(X: RelationalStructure, A: RelationalStructure, cap: int | None = None) -> int:
    same_signature(X, A)
    check_cap(A.n ** X.n, cap, "hom enumeration")
    return sum(1 for f in itertools.product(range(1, A.n + 1), repeat=X.n) if is_homomorphism(f, X, A))


@dataclass(frozen=True)
class AutomorphismGroup:
    degree: int
    elements: tuple[Map, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, f):
        return tuple(f) in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    @classmethod
    def trivial(cls, n: int) -> "AutomorphismGroup":
        return cls(n, (tuple(range(1, n + 1)),))


def automorphisms(A: RelationalStructure, cap: int | None = None) -> AutomorphismGroup:
    check_cap(math.factorial(A.n), cap, "automorphism enumeration")
    found = []
    for p in itertools.permutations(range(1, A.n + 1)):
        if is_homomorphism(p, A, A) and is_homomorphism(inverse(p), A, A):
            found.append(p)
    return AutomorphismGroup(A.n, tuple(found))


# text format

def parse_structure(text: str) -> RelationalStructure:
    name, n = "", None
    order: list[tuple[str, int]] = []
    rels: dict[str, list] = {}
    full: set[str] = set()
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        parts = line.split()
        head = parts[0]
        if head == "structure":
            name = " ".join(parts[1:])
        elif head == "domain":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(lineno, "expected 'domain <n>'")
            n = int(parts[1])
            if n < 1:
                raise ParseError(lineno, "domain must be nonempty")
        elif head == "relation":
            if len(parts) not in (3, 4) or not parts[2].isdigit() or (len(parts) == 4 and parts[3] != "full"):
                raise ParseError(lineno, "expected 'relation <name> <arity> [full]'")
            sym, ar = parts[1], int(parts[2])
            if ar < 1:
                raise ParseError(lineno, "arity must be positive")
            if sym in rels or sym in full:
                raise ParseError(lineno, f"relation {sym} declared twice")
            order.append((sym, ar))
            if len(parts) == 4:
                full.add(sym)
                current = None
            else:
                rels[sym] = []
                current = (sym, ar)
        elif head == "t":
            if current is None:
                raise ParseError(lineno, "tuple outside a relation block")
            if n is None:
                raise ParseError(lineno, "tuple before domain declaration")
            sym, ar = current
            try:
                t = tuple(int(e) for e in parts[1:])
            except ValueError:
                raise ParseError(lineno, "non-integer tuple entry") from None
            if len(t) != ar:
                raise ParseError(lineno, f"tuple has {len(t)} entries, {sym} has arity {ar}")
            for e in t:
                if not 1 <= e <= n:
                    raise ParseError(lineno, f"entry {e} outside domain [1,{n}]")
            if t in rels[sym]:
                raise ParseError(lineno, f"duplicate tuple {t} in {sym}")
            rels[sym].append(t)
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    if n is None:
        raise ParseError(0, "missing domain declaration")
    sig = Signature(tuple(order))
    flagged = set()
    relations = {s: tuple(ts) for s, ts in rels.items()}
    for sym in full:
        ar = sig.arity(sym)
        if n ** ar > FULL_THRESHOLD:
            flagged.add(sym)
        else:
            relations[sym] = tuple(itertools.product(range(1, n + 1), repeat=ar))
    return RelationalStructure(sig, n, relations, frozenset(flagged), name)


def dump_structure(A: RelationalStructure, named: bool = True) -> str:
    lines = []
    if named and A.name:
        lines.append(f"structure {A.name}")
    lines.append(f"domain {A.n}")
    for sym, ar in A.signature.symbols:
        if sym.startswith(RESERVED_PREFIX) and A.is_full(sym):
            lines.append(f"relation {sym} {ar} full")
            continue
        lines.append(f"relation {sym} {ar}")
        for t in A.tuples(sym):
            lines.append("  t " + " ".join(map(str, t)))
    return "\n".join(lines) + "\n"


def load_structure(path: str) -> RelationalStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())
