"""
Counting simple permutations three ways
=======================================

Series coefficients, the relation to the Comtet numbers, and plain
exhaustive search.  The first two give exact values far beyond the reach
of the third.
"""

import time

from simpleperms import brute_count_simple, enumerate_simple, random_simple, s_sequence

series = s_sequence(30, "series")
relation = s_sequence(30, "relation")
print(series.as_list()[:12])
print(series.as_list() == relation.as_list())
print("s_20 =", series[20])
print("s_30 =", series[30])

# the oracle: test all n! permutations
for n in range(1, 10):
    t = time.perf_counter()
    count = brute_count_simple(n)
    print(n, count, count == series[n], f"{time.perf_counter() - t:.2f}s")

# listing is lexicographic, and prefix pruning keeps it quick
print([str(p) for p in enumerate_simple(5)])

# uniform sampling by rejection; about e^2 draws per hit
print(random_simple(20, seed=1))
