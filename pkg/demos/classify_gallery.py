"""A tour of every verdict the classifier can produce.

Each entry below is a pair of 2x2 Hurwitz matrices A, B (at least one of
them nondiagonalizable) defining the switched system

    x'(t) = u(t) A x(t) + (1 - u(t)) B x(t),   u(t) in {0, 1} arbitrary.

The classifier decides, exactly, whether the system is GUAS (globally
uniformly asymptotically stable for every switching signal), uniformly
stable but not GUAS, or unbounded for some signal -- and prints the
machine-checkable certificate that backs each verdict.

Run:  python3 demos/classify_gallery.py
"""

import math

import numpy as np

from planarswitch import SystemPair, classify

J = [[-1.0, 1.0], [0.0, -1.0]]  # Jordan block, the canonical A

GALLERY = [
    ("fields collinear only at the origin (Delta < 0)",
     J, [[-1.0, -0.5], [0.5, -1.0]]),
    ("rotating, contracting half turns (complex B, degenerate formula)",
     J, [[-1.0, 1.0], [-1.0, -1.0]]),
    ("rotating, contracting half turns (real-eigenvalue B)",
     J, [[-2.0, -1.0], [-1.0, -2.0]]),
    ("non-rotating: invariant projective cone",
     J, [[-2.0, 1.0 / 0.52], [0.52, -2.0]]),
    ("non-rotating: B diagonal in A's Jordan basis",
     J, np.diag([-2.0, -4.0])),
    ("one collinearity line, direct orientation",
     J, [[-1.0, -1.0 / (2.0 - 2.0 * math.sqrt(2.0))],
         [2.0 - 2.0 * math.sqrt(2.0), -1.0]]),
    ("one collinearity line, inverse orientation (stable, not GUAS)",
     J, [[-1.0, -1.0 / (2.0 + 2.0 * math.sqrt(2.0))],
         [2.0 + 2.0 * math.sqrt(2.0), -1.0]]),
    ("a constant convex mix of A and B is already unstable",
     [[-0.1, 1.0], [0.0, -0.1]], [[-0.1, -1.0], [1.0, -0.1]]),
    ("every mix is Hurwitz, yet switching diverges (expanding half turns)",
     [[-0.01, 1.0], [0.0, -0.01]], [[-0.01, 0.1], [-10.0, -0.01]]),
    ("commuting pair: trivially GUAS",
     J, 3.0 * np.array(J)),
]


def main() -> None:
    for title, A, B in GALLERY:
        v = classify(SystemPair.of(A, B))
        print(f"== {title}")
        print(f"   verdict:     {v.kind.value}")
        print(f"   certificate: {v.certificate.kind}")
        for key, val in v.certificate.payload.items():
            print(f"     {key} = {val!r}")
        for w in v.warnings:
            print(f"   warning: {w}")
        print()


if __name__ == "__main__":
    main()
