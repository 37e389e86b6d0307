"""Per-arity symmetric polymorphism checks on small templates.

A finite table is one-sided evidence: a missing arity refutes, a full row
proves nothing about higher arities.
"""

import argparse

from artifact.minionmaps import has_symmetric_polymorphism
from artifact.structures import clique, digraph, directed_cycle


def templates():
    yield "K2,K2", clique(2), clique(2)
    yield "K2,K3", clique(2), clique(3)
    yield "K3,K3", clique(3), clique(3)
    yield "C3,C3", directed_cycle(3), directed_cycle(3)
    tt = digraph(2, [(1, 1), (1, 2), (2, 2)], "T2")
    yield "T2,T2", tt, tt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-arity", type=int, default=3)
    args = ap.parse_args()
    arities = range(1, args.max_arity + 1)
    print("template " + " ".join(f"L={L}" for L in arities))
    for name, A, B in templates():
        row = [int(has_symmetric_polymorphism(A, B, L)) for L in arities]
        print(name, *row)


if __name__ == "__main__":
    main()
