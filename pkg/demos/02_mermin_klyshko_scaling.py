"""Mermin-Klyshko: the exponential ceiling sqrt(2**(n-1)) is attained.

The sign function f(eps) = +1 when the Hamming weight of eps is 0 or 1 mod 4
reaches the largest possible norm at every n; compare with a few random f.
"""
import math
import time

from wernerwolf.boolfn import mermin_klyshko_candidate, random_f
from wernerwolf.spectrum import certify_mermin_klyshko, maximize_norm, mermin_klyshko_norm

print(f"{'n':>3} {'hex':>20} {'certified':>12} {'ceiling':>10} {'random f':>10} {'seconds':>8}")
for n in range(2, 11):
    start = time.perf_counter()
    f = mermin_klyshko_candidate(n)
    rep = certify_mermin_klyshko(f, restarts=64)
    rnd = maximize_norm(random_f(n, (2, n)), restarts=16).best_norm
    hexstr = f.to_hex() if len(f.to_hex()) <= 20 else f.to_hex()[:17] + "..."
    print(f"{n:>3} {hexstr:>20} {rep.best_norm:>12.8f} {mermin_klyshko_norm(n):>10.6f} "
          f"{rnd:>10.6f} {time.perf_counter() - start:>8.3f}")

print("\nratio of a random f to the ceiling shrinks roughly like sqrt(n log n / 2**(n-1));")
print("at n=10 that ratio is", round(math.sqrt(10 * math.log(10) / 2**9), 3))
