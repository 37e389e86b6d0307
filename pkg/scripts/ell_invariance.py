"""Project level-k maps to BLP under several choices of the index tuples ℓ(j).

Feasibility of the projected point is the claim under test; the projected
values are printed when they differ between choices.
"""

import argparse
import itertools

from artifact.instances import random_pairs
from artifact.relaxations import (
    VerificationFailure,
    project_to_blp,
    sa_accepts,
    solution_to_ximap,
    verify_free_hom,
)
from artifact.structures import ensure_enhanced


def choices(k):
    yield "diagonal", [(j,) * k for j in range(1, k + 1)]
    yield "leading", [(j,) + tuple(range(2, k + 1)) if j == 1 else (j,) + (1,) * (k - 1) for j in range(1, k + 1)]
    yield "rotated", [tuple((j + t - 1) % k + 1 for t in range(k)) for j in range(1, k + 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=60)
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    tested = failures = differ = 0
    for X, A in random_pairs(args.pairs, 3, args.seed):
        for k in (2, 3):
            Xe, Ae = ensure_enhanced(X, k), ensure_enhanced(A, k)
            ok, sol = sa_accepts(Xe, Ae, k)
            if not ok:
                continue
            xi = solution_to_ximap(sol)
            q = verify_free_hom(xi).q
            vals = {}
            for name, ells in choices(k):
                try:
                    vals[name] = project_to_blp(xi, q, ells).vertex
                except VerificationFailure as exc:
                    failures += 1
                    print(f"infeasible under {name}: {exc}")
            tested += 1
            if any(a != b for a, b in itertools.combinations(vals.values(), 2)):
                differ += 1
    print(f"instances {tested}, infeasible projections {failures}, instances with differing values {differ}")


if __name__ == "__main__":
    main()
