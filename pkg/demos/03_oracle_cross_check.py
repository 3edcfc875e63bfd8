"""Closed-form spectrum against brute-force dense diagonalization.

For random (f, angles) the dense 2**n x 2**n operator's |eigenvalues| must
match the multiset {|lambda_f(omega)|}, and each predicted GHZ vector must
be an eigenvector.
"""
import numpy as np

from wernerwolf.boolfn import random_f
from wernerwolf.oracle import build_dense, eigen_magnitudes, verify_ghz_eigenvectors
from wernerwolf.spectrum import AngleConfig, full_spectrum

for n in range(1, 8):
    diffs, residuals = [], []
    for i in range(20):
        f, a = random_f(n, (3, i)), AngleConfig.random(n, (3, i))
        dense = eigen_magnitudes(build_dense(f, a))
        analytic = np.sort(full_spectrum(f, a).magnitudes)[::-1]
        diffs.append(np.abs(dense - analytic).max())
        residuals.append(verify_ghz_eigenvectors(f, a))
    print(f"n={n}: max spectrum diff {max(diffs):.2e}, max GHZ residual {max(residuals):.2e}")
