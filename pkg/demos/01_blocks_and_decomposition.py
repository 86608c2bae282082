"""
Blocks, simplicity and the substitution decomposition
=====================================================
"""

from simpleperms import blocks, decompose, inflate, is_simple, minimal_blocks, parse_permutation
from simpleperms.perm import pattern

# a block is a segment of positions whose values form an interval
p = parse_permutation("2647513")
for b in blocks(p):
    if 1 < b.length < p.n:
        print("block", b, "values", b.segment(p))

# only singletons and the whole thing: simple
print(is_simple(parse_permutation("58317462")))
print(is_simple(parse_permutation("123")))

# every permutation of length >= 2 is a simple skeleton inflated by smaller permutations
d = decompose(parse_permutation("67183524"))
print(d)
print(d.inflate())

# for 12 and 21 the first part is kept as small as possible
print(decompose(parse_permutation("123")))
print(decompose(parse_permutation("345612")))

# inflation by hand
print(inflate(parse_permutation("21"), [parse_permutation("1234"), parse_permutation("12")]))

# minimal blocks are the inclusion-minimal non-singleton blocks; their patterns are simple
q = parse_permutation("5672413")
for m in (2, 4):
    print(m, [str(pattern(b.segment(q))) for b in minimal_blocks(q, m)])
