"""
The normalization factor as a product of linear forms
=====================================================

With symbolic rates the kernel weights share a polynomial factor at L = 3.
After dividing it out, the weights sum to prod (alpha_i + beta_i) times
prod_{i<j} (alpha_i + beta_i + alpha_j + beta_j).
"""
import time

from glauber import conjecture_check

for L in (1, 2, 3):
    t0 = time.perf_counter()
    rep = conjecture_check(L)
    print(f"L={L}: verdict={rep.verdict}  common factor={rep.quotient}  "
          f"unit-gcd points={rep.content_evidence.unit_points}  ({time.perf_counter() - t0:.2f}s)")

print("\nL=3 normalization factor, expanded, has", len(rep.Z_conj.terms), "terms")
