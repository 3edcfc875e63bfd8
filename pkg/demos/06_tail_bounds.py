"""Tail bounds: Chebyshev at fixed directions, and the sup-norm view.

At fixed angles and omega, E|lambda_f|^2 = 1, so P{|lambda_f| > M} <= 1/M^2.
The random trigonometric polynomial sup norm is compared with C sqrt(2n ln n);
its theoretical failure ceiling is far below anything sampling can resolve.
"""
from wernerwolf.montecarlo import (
    OptimizerOpts,
    fixed_eigen_magnitudes,
    prop2_tail,
    subnormal_check,
    szk_ceiling,
    szk_tail,
)

mags = fixed_eigen_magnitudes(8, 10_000, seed=0)
print(f"n=8 fixed direction: mean |lambda|^2 = {(mags**2).mean():.4f} (expected 1)")
for rep in prop2_tail(8, 10_000, [1.5, 2, 3, 5], seed=0):
    print(f"  M={rep.threshold:<4g} empirical {rep.empirical_probability:.4f}  bound {rep.bound:.4f}  "
          f"passed={rep.passed}")

print("\nuniform signs are subnormal: E exp(lam xi) = cosh(lam) <= exp(lam^2/2)")
for row in subnormal_check([0.5, 1, 2, 3]):
    print(f"  lam={row.lam:<4g} cosh={row.cosh:9.4f} gaussian={row.gaussian_mgf:9.4f} "
          f"empirical={row.empirical_mean:9.4f}")

print(f"\nsup-norm tail at n=6 (ceiling {szk_ceiling(6):.2e}):")
for rep in szk_tail(6, 60, seed=0, opts=OptimizerOpts(restarts=8, tol=1e-10)):
    print(f"  C={rep.params['C']:<4g} threshold {rep.threshold:.3f}: {rep.exceedances}/{rep.samples}"
          f"  identity err {rep.params['identity_max_error']:.1e}")
