"""
Exact counts against n!/e^2 (1 - 4/n + 2/(n(n-1)))
=================================================

e^-2 is computed with a certified error bound, so each relative error
below is an interval, not a float.
"""

from simpleperms.asymptotics import (
    bootstrap_check,
    exp_neg2,
    f4_asymptotic_check,
    headline,
    kaplansky_check,
    median_successive_ratio,
    simple_error_rows,
)

print(exp_neg2(30))

h = headline(20)
print(h.exact, h.approx.to_decimal(12), h.relative_error)

rows = simple_error_rows(range(10, 41, 5))
for r in rows:
    print(r.n, r.relative_error.to_decimal(4), r.scaled_residual.to_decimal(4))
print("median ratio over 15..40:", median_successive_ratio(simple_error_rows(range(15, 41))))

# truncating earlier is worse; at n = 20 one correction term happens to beat two
for order in (0, 1, 2):
    print(order, simple_error_rows([20], order)[0].relative_error.to_decimal(4))

# the same game for permutations without short blocks
for r in kaplansky_check([10, 20, 40]) + f4_asymptotic_check([10, 20, 40]):
    print(r.n, r.exact, r.scaled_residual.to_decimal(4))

# exact counts behind the correction terms
for r in bootstrap_check(7):
    print(r)
