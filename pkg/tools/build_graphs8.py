"""Build the graph6 corpus of all connected graphs on 8 vertices.

Every connected graph has a vertex whose removal leaves it connected, so
joining a new vertex to each non-empty subset of every connected 7-vertex
graph reaches all classes.  Candidates are reduced to canonical form and
deduplicated.

Usage::

    python tools/build_graphs8.py tests/data/graphs8.g6
"""

import argparse
import sys
import time

import numpy as np

from hubres.enumeration import (
    KNOWN_COUNTS,
    canonical_masks,
    enumerate_connected_masks,
    mask_bits,
    mask_to_graph,
    pair_index,
    bits_to_masks,
)
from hubres.graph import write_graph6


def extend_masks(masks7: np.ndarray) -> np.ndarray:
    """Masks on 8 vertices: each 7-vertex graph plus vertex 7 joined to a subset."""
    bits7 = mask_bits(masks7, 7)
    P8 = pair_index(8)
    subsets = np.arange(1, 1 << 7)
    sub_bits = ((subsets[:, None] >> np.arange(7)[None, :]) & 1).astype(np.uint8)
    k = len(masks7) * len(subsets)
    bits8 = np.zeros((k, 28), dtype=np.uint8)
    # pairs among vertices 0..6 keep their positions in graph6 order
    bits8[:, :21] = np.repeat(bits7, len(subsets), axis=0)
    bits8[:, P8[np.arange(7), 7]] = np.tile(sub_bits, (len(masks7), 1))
    return bits_to_masks(bits8)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", help="output graph6 file")
    args = ap.parse_args(argv)
    t0 = time.time()
    cand = extend_masks(enumerate_connected_masks(7))
    canon = np.unique(canonical_masks(cand, 8))
    print(f"{len(cand)} candidates, {len(canon)} classes in {time.time() - t0:.1f} s",
          file=sys.stderr)
    if len(canon) != KNOWN_COUNTS[8]:
        print(f"expected {KNOWN_COUNTS[8]} classes", file=sys.stderr)
        return 1
    with open(args.out, "w", encoding="ascii") as fh:
        for m in canon:
            fh.write(write_graph6(mask_to_graph(int(m), 8)) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
