"""
Reversion of sum n! x^n and the identities around it
====================================================
"""

from simpleperms import TruncSeries, check_ode_identities, check_structure_identities, lagrange_com, revert
from simpleperms.series import factorial_series, f_m_series, simple_series

F = factorial_series(12)
C = revert(F)
print(C)

# two independent routes to the same coefficients
print([C[n] for n in range(1, 13)])
print([lagrange_com(n) for n in range(1, 13)])

# F(C(x)) = x exactly, through the truncation order
x = TruncSeries.x(12)
print(F.compose(C) == x)

# S(t) = t - 2t^2/(1+t) - C(t); the low coefficients cancel by themselves
print(simple_series(12))

# f_m counts permutations with no non-singleton block of length <= m
print(f_m_series(2, 10))
print(f_m_series(4, 10))

for report in (check_structure_identities(50), check_ode_identities(50)):
    for name in report.passed:
        print("ok", name)
