"""
Deciding whether a grading admits an odd symmetry
=================================================

The grading permutes the central summands. Swapped pairs always carry an odd
self-adjoint unitary. A summand fixed by the grading carries one exactly when
the implementing symmetry has as many +1 as -1 eigenvalues on the block.
"""

import numpy as np

from gradedvna.graded import balance_certificate
from gradedvna.presets import build_preset, conjugated, random_unitary

rng = np.random.default_rng(0xC1F0)
for name in ["mf:1,1", "mf:2,1", "mf:2,2", "sp:2", "diag:4,(1 2)", "diag:4,(1 2)(3 4)", "trivial:sp:1"]:
    g = build_preset(name)
    # a random change of basis hides the block structure; the answer must not change
    h = conjugated(g, random_unitary(g.hilbert_dim, rng))
    cert = balance_certificate(h)
    print(f"{name:18s} balanced={cert.balanced!s:5s} swapped={cert.swapped} "
          f"signatures={cert.signatures}")
    if not cert.balanced:
        print(" " * 19, cert.obstruction)
