"""
Marked permutations
===================

Marking a set of minimal blocks and collapsing them gives a unique
(skeleton; parts) image.  Runs of overlapping marked pairs collapse
together into one monotone part.
"""

from simpleperms import bivariate_F_m, marked_compose, marked_decompose, minimal_blocks, parse_permutation
from simpleperms.sequences import brute_F_m, verify_theorem2

p = parse_permutation("345612")
marks = minimal_blocks(p)
print([str(b) for b in marks])
image = marked_decompose(p, marks)
print(image, "r =", image.r, "s =", image.s, "l =", image.l, "|M| =", image.mark_count)
print(marked_compose(image.skeleton, image.parts)[0])

# drop the mark on 45: the 3456 run splits in two
partial = [b for b in marks if str(b) != "2-3"]
print(marked_decompose(p, partial))

# sum over permutations of (1+v)^(number of minimal blocks of length <= m)
F2 = bivariate_F_m(2, 6)
for n in range(1, 7):
    print(n, F2.x_slice(n), brute_F_m(n, 2))

print(verify_theorem2(5).by_length)
