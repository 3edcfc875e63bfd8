"""Typical witnesses: the optimized norm of a random f grows slowly.

For uniform random sign functions the maximal norm stays of order
sqrt(n log n) while the ceiling sqrt(2**(n-1)) grows exponentially, so
typical facets are weak witnesses.  Norms are lower bounds (multi-start
ascent), reported with restart counts.
"""
import sys

from wernerwolf.montecarlo import OptimizerOpts, sample_max_norms, theorem1_exceedance

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 100
opts = OptimizerOpts(restarts=16, tol=1e-10)
rows = []
print(f"{'n':>3} {'median':>8} {'p95':>8} {'max':>8} {'ceiling':>8} {'median/ceil':>11} {'median/sqrt(nlogn)':>18}")
for n in (3, 4, 6, 8, 10):
    row = sample_max_norms(n, samples, seed=5, opts=opts)
    rows.append(row)
    print(f"{n:>3} {row.median:>8.4f} {row.p95:>8.4f} {row.max:>8.4f} {row.mk_ceiling:>8.4f} "
          f"{row.median / row.mk_ceiling:>11.4f} {row.ratio_to_root_nlogn:>18.4f}")

print("\nexceedance of C sqrt(n ln n):")
for rep in theorem1_exceedance(rows, [0.5, 1.0]):
    lo, hi = rep.wilson_ci_95
    print(f"  C={rep.params['C']:<4} n={rep.n:<3} {rep.exceedances:>4}/{rep.samples}  CI [{lo:.3f}, {hi:.3f}]")
