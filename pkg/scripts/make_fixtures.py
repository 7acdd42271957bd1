#!/usr/bin/env python3
"""Write the CLI input fixtures used by the golden tests.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stormer_kit.io import block_to_payload, matrix_to_payload
from stormer_kit.sampling import find_nontrivial_block, ginibre
from stormer_kit.stormer import OperatorBlockMatrix

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"wrote {path}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    dump("id2.json", matrix_to_payload(np.eye(2)))
    dump("indefinite2.json", matrix_to_payload(np.array([[1.0, 2.0], [2.0, 1.0]])))
    dump("diag_1i.json", matrix_to_payload(np.diag([1.0, 1j])))
    dump("nilpotent2.json", matrix_to_payload(np.array([[0.0, 1.0], [0.0, 0.0]])))
    dump("singular2.json", matrix_to_payload(np.diag([1.0, 0.0])))

    bell = np.zeros((4, 4))
    for i in (0, 3):
        for j in (0, 3):
            bell[i, j] = 0.5
    dump("bell4.json", matrix_to_payload(bell))

    # PSD partition: split of an integer Gram matrix
    g = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]])
    m = g @ g.T
    dump(
        "partition_psd.json",
        {
            "A": matrix_to_payload(m[:2, :2]),
            "B": matrix_to_payload(m[:2, 2:]),
            "C": matrix_to_payload(m[2:, 2:]),
        },
    )
    dump(
        "partition_bad.json",
        {
            "A": matrix_to_payload(m[:2, :2]),
            "B": matrix_to_payload(3.0 * m[:2, 2:]),
            "C": matrix_to_payload(m[2:, 2:]),
        },
    )

    # a block file whose assembled matrix is not Hermitian
    blocks = np.zeros((2, 2, 2, 2), dtype=complex)
    blocks[0, 0] = blocks[1, 1] = np.eye(2)
    blocks[0, 1] = np.array([[0.0, 1.0], [0.0, 0.0]])
    dump("block_nonherm.json", block_to_payload(OperatorBlockMatrix(blocks)))

    # small decomposable map spec (fixed integer-friendly Kraus data)
    rng = np.random.default_rng(2024)
    ks = [np.round(ginibre(rng, 3, 2), 3) for _ in range(2)]
    ls = [np.round(ginibre(rng, 3, 2), 3) for _ in range(2)]
    dump(
        "kraus_map.json",
        {
            "kind": "kraus",
            "cp": [matrix_to_payload(k) for k in ks],
            "cocp": [matrix_to_payload(k) for k in ls],
        },
    )

    (FIXTURES / "truncated.json").write_text('{"rows": 2, "cols": 2, "data": [[1.0,')
    print(f"wrote {FIXTURES / 'truncated.json'}")

    # nontriviality instance: two-sided-positive block with a failing summand
    x, rows, k = find_nontrivial_block(seed=0, d=2)
    dump(
        "nontrivial_block.json",
        {
            "seed": 0,
            "summand_index": int(k),
            "block": block_to_payload(x),
            "rows": [matrix_to_payload(rows[i]) for i in range(rows.shape[0])],
        },
    )


if __name__ == "__main__":
    main()
