"""
The generator of a small chain
==============================

Builds the rate matrix of a two-site chain three ways and checks they agree.
"""
from fractions import Fraction

from glauber import RateProfile, build_generator, build_generator_recursive, second_order_blocks

# Rates can be exact rationals...
profile = RateProfile((Fraction(1), Fraction(2)), (Fraction(3), Fraction(1)))
M = build_generator(profile)
print("numeric generator, columns are source states 00 01 10 11:")
for row in M.matrix.to_text():
    print("   ", "  ".join(f"{x:>5}" for x in row))

# ...or indeterminates a1, b1, a2, b2
sym = RateProfile.symbolic_profile(2)
S = build_generator(sym).matrix
for row in S.to_text():
    print("   ", "  ".join(f"{x:>16}" for x in row))

# both block recursions rebuild the same matrix
print("first-order recursion agrees:", build_generator_recursive(sym).matrix == S)
print("second-order recursion agrees:", second_order_blocks(sym).matrix == S)
