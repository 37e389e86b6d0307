"""Small digraph families: isomorphism classes and seeded random draws."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from .structures import RelationalStructure, digraph


def _canonical(n: int, arcs: frozenset) -> tuple:
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        img = tuple(sorted((perm[a - 1], perm[b - 1]) for a, b in arcs))
        if best is None or img < best:
            best = img
    return best


@lru_cache(maxsize=None)
def _classes(n: int, loops: bool) -> tuple:
    pairs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if loops or a != b]
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        arcs = frozenset(p for t, p in enumerate(pairs) if mask >> t & 1)
        c = _canonical(n, arcs)
        if c not in seen:
            seen.add(c)
            out.append(c)
    return tuple(sorted(out, key=lambda c: (len(c), c)))


def digraph_classes(n: int, loops: bool = True) -> list[RelationalStructure]:
    """One canonical representative per isomorphism class of digraphs on [n]."""
    return [digraph(n, arcs, f"D{n}.{t}") for t, arcs in enumerate(_classes(n, loops))]


def random_digraph(n: int, p: float, rng: random.Random, loops: bool = True, name: str = "") -> RelationalStructure:
    arcs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if (loops or a != b) and rng.random() < p]
    return digraph(n, arcs, name)


def random_pairs(count: int, max_n: int, seed: int, p: float = 0.4, min_n: int = 1):
    rng = random.Random(seed)
    out = []
    for t in range(count):
        nx, na = rng.randint(min_n, max_n), rng.randint(min_n, max_n)
        out.append((random_digraph(nx, p, rng, name=f"X{t}"), random_digraph(na, p, rng, name=f"A{t}")))
    return out


def sampled_class_pairs(count: int, max_n: int, seed: int):
    """``count`` distinct pairs of isomorphism-class representatives on at most ``max_n`` vertices."""
    pool = [G for n in range(1, max_n + 1) for G in digraph_classes(n)]
    rng = random.Random(seed)
    idx = list(itertools.product(range(len(pool)), repeat=2))
    chosen = sorted(rng.sample(idx, min(count, len(idx))))
    return [(pool[i], pool[j]) for i, j in chosen]
