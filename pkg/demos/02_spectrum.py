"""
Exact spectrum through the bit-reversed Hadamard matrix
=======================================================

Conjugating the generator by the +-1 sign matrix makes it lower triangular,
so the eigenvalues can be read off the diagonal.
"""
import random

from glauber import build_generator, conjugate_and_check, eigenvalues, spectral_gap
from glauber.spectral import hadamard_sign
from glauber.verify import random_integer_profile

print(hadamard_sign(3))

rng = random.Random(1)
profile = random_integer_profile(5, rng)
print("alpha =", [int(a) for a in profile.alpha], " beta =", [int(b) for b in profile.beta])

report = conjugate_and_check(build_generator(profile))
print({k: report.details[k] for k in ("triangular", "diagonal_match", "offdiag_structure")})

# eigenvalues are minus the subset sums of alpha_i + beta_i
spec = eigenvalues(profile)
print("distinct eigenvalues:", len(spec.counts), "of", spec.total)
print("largest five:", [str(v) for v, _ in spec.items()[:5]])
print("gap:", spectral_gap(profile))
