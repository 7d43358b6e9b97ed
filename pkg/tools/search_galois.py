"""Search a Galois isometry Y of the shipped Leech structure and write it.

Y satisfies Y F Y^T = F and Y A Y^-1 = 1 - A.  Takes about ten minutes on
one core.

usage: python tools/search_galois.py OUT.txt [--budget N]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from gamma72.catalog import load_leech_structure
from gamma72.hermitian import build_galois_block, find_galois_isometry
from gamma72.lattice import format_gram


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--budget", type=int, default=50_000_000)
    args = ap.parse_args()
    sp = load_leech_structure()
    t = time.perf_counter()
    Y = find_galois_isometry(sp.lattice("Leech"), sp, budget=args.budget, use_data=False)
    build_galois_block(sp, Y)
    Path(args.out).write_text(format_gram(Y.tolist()))
    print(f"found Y in {time.perf_counter() - t:.0f}s, block matrix checked")


if __name__ == "__main__":
    main()
