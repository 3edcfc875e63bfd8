"""CHSH as a sign function, and Tsirelson's sqrt(2).

The two-party facet (A0B0 + A0B1 + A1B0 - A1B1)/2 <= 1 is labelled by the
sign function f = [+1, +1, +1, -1].  Its Walsh coefficients are all +-1/2,
and the Werner-Wolf operator built from it has norm sqrt(2).
"""
import math

import numpy as np

from wernerwolf import SignFunction, walsh_beta
from wernerwolf.oracle import build_dense, eigen_magnitudes, separable_bound_check
from wernerwolf.polytope import first_violated_facet, quantum_point
from wernerwolf.spectrum import chsh_optimal_angles, full_spectrum, maximize_norm

f = SignFunction(2, [1, 1, 1, -1])
spec = walsh_beta(f)
print("f hex:", f.to_hex())
print("beta:", [str(b) for b in spec.fractions()])

# closed-form spectrum at the textbook angles
angles = chsh_optimal_angles()
res = full_spectrum(f, angles)
for omega, mag in zip(res.omegas, res.magnitudes):
    print(f"  omega={tuple(int(w) for w in omega)}  |lambda|={mag:.12f}")

# the same operator as a dense 4x4 matrix
dense = build_dense(f, angles)
print("dense |eigenvalues|:", np.round(eigen_magnitudes(dense), 12))

# optimizing from random starts finds the same value
rep = maximize_norm(f, restarts=16, seed=1)
print(f"optimized norm {rep.best_norm!r} (sqrt 2 = {math.sqrt(2)!r}) after {rep.sweeps} sweeps")

# product states never exceed 1 ...
print("max |<phi|W|phi>| over 10^4 product states:", separable_bound_check(f, angles, samples=10_000, seed=0))

# ... while the GHZ eigenvector's correlations leave the classical polytope
q = quantum_point(f, angles)
print("quantum correlations:", np.round(q, 6))
print("violated facet:", first_violated_facet(q).to_hex())
