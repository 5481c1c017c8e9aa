"""Exact destruction-cost moments by dynamic programming.

Two processes: one-sided (after each cut, keep only the root side) and
two-sided (keep cutting everything).  The toll for cutting an edge in a
component of size m is m^alpha.  With integer alpha the whole moment
table is exact rationals, checked here against brute-force enumeration
of every tree and every cut sequence.

The size-1 boundary is a convention: by default an isolated vertex
costs 1 (the value of the recursion boundary), while size_one_cost=0
charges edges only -- under which the two-sided alpha = 0 cost is
exactly the edge count n - 1 on every run.
"""

from treecut import TWO_SIDED, TollSpec, cayley, compute_counts, ordered
from treecut.bruteforce import family_moments
from treecut.moments import one_sided_moments, shifted_moments, two_sided_moments

wo = compute_counts(ordered(), 200, exact_cutoff=200)
wa = compute_counts(cayley(), 200, exact_cutoff=200)

toll = TollSpec(alpha=0)
table = one_sided_moments(wo, toll, 8, 2, mode="rational")
print("one-sided ordered trees, alpha = 0 (number of cuts + boundary):")
for n in range(1, 7):
    print(f"  E cost({n}) = {table.moment(n, 1)}   E cost^2 = {table.moment(n, 2)}")

print()
print("cross-check against exhaustive enumeration at n = 4, alpha = 1:")
toll1 = TollSpec(alpha=1)
dp = two_sided_moments(wa, toll1, 4, 2, mode="rational")
oracle = family_moments(cayley(), 4, toll1, 2, TWO_SIDED)
print(f"  DP    : mean {dp.moment(4, 1)}, second moment {dp.moment(4, 2)}")
print(f"  oracle: mean {oracle[1]}, second moment {oracle[2]}")
print("  equal exactly:", dp.moment(4, 1) == oracle[1] and dp.moment(4, 2) == oracle[2])

print()
print("two-sided alpha = 0 degeneracy, both boundary conventions (n = 50):")
edges = two_sided_moments(wo, TollSpec(alpha=0, size_one_cost=0), 50, 2, mode="rational")
default = two_sided_moments(wo, TollSpec(alpha=0), 50, 2, mode="rational")
print(f"  edges-only : mean {edges.moment(50, 1)} (= n-1), variance "
      f"{edges.moment(50, 2) - edges.moment(50, 1) ** 2}")
print(f"  default    : mean {default.moment(50, 1)} (= 2n-1), variance "
      f"{default.moment(50, 2) - default.moment(50, 1) ** 2}")

print()
print("centered moments come from the raw table by binomial expansion:")
var = shifted_moments(table, lambda n: table.moment(n, 1), 2, n_values=[3, 5, 8])
print("  Var cost(n) for n = 3, 5, 8:", [str(v) for v in var])
