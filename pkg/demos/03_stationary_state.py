"""
Stationary state and site densities
===================================

Exact kernel of the generator, its site marginals, and the closed-form
density they must match.
"""
from fractions import Fraction

from glauber import RateProfile, exact_density, stationary
from glauber.steady import marginal_density, prefix_marginal_consistency

profile = RateProfile((Fraction(1), Fraction(2, 3), Fraction(1), Fraction(4)),
                      (Fraction(1, 2), Fraction(0), Fraction(1), Fraction(3)))
v = stationary(profile)
for w, p in zip(v.to_dict()["weights"], v.probabilities()):
    print(w["config"], w["weight"], p)

print("\nsite  from kernel  closed form")
for k in range(1, profile.L + 1):
    print(f"{k:>4}  {str(marginal_density(v, k)):>11}  {exact_density(k, profile)}")

# adding sites on the right never changes what the left sites see
print("\nprefix of 2 sites, L=2 vs L=4:", prefix_marginal_consistency(2, 2, 4, profile).passed)

# symbolic weights for two sites
for w in stationary(RateProfile.symbolic_profile(2)).weights:
    print(w)
