"""Compare level-1 Sherali-Adams with BLP on small digraph pairs.

The two systems differ on repeated variables inside a constraint: SA assigns a
distribution over functions on the set of variables, BLP over tuples of the
relation. Disagreements are listed, not treated as errors.
"""

import argparse

from artifact.instances import digraph_classes, random_pairs
from artifact.relaxations import blp_accepts, sa_accepts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=2, help="exhaust isomorphism classes up to this size")
    ap.add_argument("--random", type=int, default=200, help="extra seeded random pairs on <= 4 vertices")
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    pool = [G for n in range(1, args.max_n + 1) for G in digraph_classes(n)]
    pairs = [(X, A) for X in pool for A in pool] + random_pairs(args.random, 4, args.seed)
    agree = 0
    for X, A in pairs:
        sa = sa_accepts(X, A, 1)[0]
        blp = blp_accepts(X, A)[0]
        if sa == blp:
            agree += 1
        else:
            loops = sum(1 for t in X.tuples("E") if t[0] == t[1])
            print(f"differ X={sorted(X.tuples('E'))} A={sorted(A.tuples('E'))} sa1={sa} blp={blp} loops_in_X={loops}")
    print(f"agree {agree}/{len(pairs)}")


if __name__ == "__main__":
    main()
