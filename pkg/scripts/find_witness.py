#!/usr/bin/env python3
"""Run the full witness search against the 3x3 non-decomposable map fixture
and freeze the result for regression replay.

Run from the repository root:  python3 scripts/find_witness.py
"""

import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stormer_kit.io import block_to_payload
from stormer_kit.maps import choi_fixture, witness_search

SEED = 42
BUDGET = 10**6
OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "choi3_witness.json"


def main() -> None:
    start = time.time()
    result = witness_search(choi_fixture(), seed=SEED, budget=BUDGET, n=3, d=3)
    elapsed = time.time() - start
    if result is None:
        print(f"INCONCLUSIVE after budget {BUDGET} ({elapsed:.1f}s); raise the budget")
        raise SystemExit(1)
    payload = {
        "map": "choi3",
        "seed": SEED,
        "budget": BUDGET,
        "n": 3,
        "d": 3,
        "evaluations": result.evaluations,
        "restart": result.restart,
        "min_eig": result.min_eig,
        "search_seconds": round(elapsed, 2),
        "block": block_to_payload(result.block),
    }
    OUT.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(
        f"witness frozen: min_eig={result.min_eig:.6e} after "
        f"{result.evaluations} evaluations ({elapsed:.1f}s) -> {OUT}"
    )


if __name__ == "__main__":
    main()
