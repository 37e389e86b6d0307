"""Print SA^k(K_c, K_d) acceptance next to min(k, c) <= d."""

import argparse
import time

from artifact.relaxations import sa_accepts
from artifact.structures import clique


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=4, help="largest k, c and d")
    args = ap.parse_args()
    rng = range(2, args.max + 1)
    print("k c d lp formula seconds")
    for k in rng:
        for c in rng:
            for d in rng:
                t = time.time()
                ok, _ = sa_accepts(clique(c), clique(d), k)
                print(k, c, d, int(ok), int(min(k, c) <= d), f"{time.time() - t:.2f}")


if __name__ == "__main__":
    main()
