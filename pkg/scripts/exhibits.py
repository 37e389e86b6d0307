"""Approximate-colouring exhibits, the line-digraph slice and the δ^(2)K_4 search."""

import argparse
import time

from artifact.colouring import approx_colouring_exhibit, double_line_digraph_colouring, line_digraph_exhibit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--skip-line-digraph", action="store_true")
    args = ap.parse_args()
    for c, d, k in [(3, 3, 3), (3, 4, 3), (4, 4, 4), (2, 2, 2)]:
        t = time.time()
        ok, lines, _ = approx_colouring_exhibit(c, d, k)
        print(f"exhibit c={c} d={d} k={k} ok={ok} {time.time() - t:.1f}s")
        for line in lines:
            print("  " + line)
    if not args.skip_line_digraph:
        t = time.time()
        ok, lines, _ = line_digraph_exhibit()
        print(f"line digraph slice ok={ok} {time.time() - t:.1f}s")
        for line in lines:
            print("  " + line)
    t = time.time()
    G, h = double_line_digraph_colouring()
    found = "found" if h else "not found"
    print(f"double line digraph of K4: {G.n} vertices, 3-colouring {found} {time.time() - t:.2f}s")


if __name__ == "__main__":
    main()
