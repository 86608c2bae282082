"""
Powers of 2 in the Comtet numbers
=================================
"""

from simpleperms.congruence import (
    binomial_3m_m_is_odd,
    check_catalan_mod3,
    check_ord2_theorem,
    check_power2_congruence,
    ord_p,
    scan_ord_p,
)
from simpleperms.series import comtet_series

C = comtet_series(40)
print([ord_p(2, C[n]) for n in range(1, 31)])

# lower bound floor(n/2); tight exactly when C(3m, m) is odd, m = floor(n/2)
for row in check_ord2_theorem(40):
    mark = "tight" if row.equality_observed else ""
    print(row.n, row.valuation, row.lower_bound, mark)

# odd C(3m, m) <=> no two adjacent 1s in binary
print([m for m in range(40) if binomial_3m_m_is_odd(m)])

print(check_power2_congruence(200).checked, "values of s_n checked mod powers of 2")
print([r.checked for r in check_catalan_mod3(200)], "checked mod 3")

# nothing is claimed for odd primes; just look
print(scan_ord_p(3, 20))
