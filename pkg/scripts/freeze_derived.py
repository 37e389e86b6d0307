"""Recompute the brute-force reference values and write tests/data/derived.json.

Everything here goes through tests/oracles.py and plain itertools; the package
is used only to build the input structures.
"""

import itertools
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import all_homs, cube, match_count_enum, pi_matrix, matvec  # noqa: E402

from artifact.instances import digraph_classes  # noqa: E402
from artifact.structures import digraph  # noqa: E402


def clique_arcs(p):
    return [(a, b) for a in range(1, p + 1) for b in range(1, p + 1) if a != b]


def count(nx, ax, na, aa):
    return len(all_homs(digraph(nx, ax), digraph(na, aa)))


def automorphism_count(n, arcs):
    s = set(arcs)
    return sum(1 for p in itertools.permutations(range(1, n + 1))
               if {(p[a - 1], p[b - 1]) for a, b in arcs} == s)


def line_digraph_arcs(arcs):
    return sum(1 for (a, b), (c, d) in itertools.product(arcs, repeat=2) if b == c)


def power_arcs(arcs, L):
    return len(arcs) ** L


def main():
    out = {}
    out["hom_counts_small"] = {
        "K3,K3": count(3, clique_arcs(3), 3, clique_arcs(3)),
        "K4,K3": count(4, clique_arcs(4), 3, clique_arcs(3)),
        "K3,K2": count(3, clique_arcs(3), 2, clique_arcs(2)),
        "empty2,K2": count(2, [], 2, clique_arcs(2)),
    }
    out["automorphisms"] = {"K3": automorphism_count(3, clique_arcs(3)),
                            "C3": automorphism_count(3, [(1, 2), (2, 3), (3, 1)])}
    out["power_K2_2_arcs"] = power_arcs(clique_arcs(2), 2)
    out["line_digraph_K3_arcs"] = line_digraph_arcs(clique_arcs(3))
    T = {a: 1 for a in cube(2, 2)}
    img = matvec(pi_matrix((1, 1), 2, 2), T, set(cube(2, 2)))
    out["pi_11_on_ones"] = {"".join(map(str, a)): int(v) for a, v in sorted(img.items())}
    out["match_count"] = [[list(a), list(i), list(x), match_count_enum(a, i, x, 3)]
                          for a, i, x in [((1, 1, 2), (1, 1, 2), (1, 2, 3)), ((2, 2, 2), (1, 1, 1), (1, 1, 1))]]
    # every L-ary map [2]^2 -> [2] preserving K2 edges, counted directly
    edges = clique_arcs(2)
    rows = list(itertools.product(edges, repeat=2))
    pols = 0
    sym = 0
    for f in itertools.product((1, 2), repeat=4):
        def F(u, v):
            return f[(u - 1) * 2 + (v - 1)]
        if all((F(e1[0], e2[0]), F(e1[1], e2[1])) in edges for e1, e2 in rows):
            pols += 1
            sym += all(F(u, v) == F(v, u) for u in (1, 2) for v in (1, 2))
    out["pol_K2_K2_2"] = {"count": pols, "symmetric": sym}
    # exhaustive counts over isomorphism classes: |X| in {2, 3}, |A| <= 3
    reps = {n: [sorted(G.tuples("E")) for G in digraph_classes(n)] for n in (1, 2, 3)}
    table = []
    for nx in (2, 3):
        for ax in reps[nx]:
            for na in (1, 2, 3):
                for aa in reps[na]:
                    table.append([nx, ax, na, aa, count(nx, ax, na, aa)])
    out["class_hom_counts"] = table
    path = ROOT / "tests" / "data" / "derived.json"
    path.write_text(json.dumps(out, separators=(",", ":")) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(table)} class pairs)")


if __name__ == "__main__":
    main()
