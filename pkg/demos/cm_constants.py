"""
CM divisibility constants and the torsion budget procedure
==========================================================

The chain: a Minkowski bound H(g) on the endomorphism-field degree, a
roots-of-unity bound M(g), their assembly c(g) = H(g) M(g) / 2, and the
budget procedure that trades a small excluded set of degrees for a
uniform torsion bound on the rest.
"""

from fractions import Fraction

from torsiondeg import cmbounds, families

# ## The constants for small dimension

for g in (1, 2):
    b = cmbounds.c_of_g(g)
    print(f"g = {g}: H = {b.H}, M = {b.M}, c = {b.c}")

# c(1) = 144 = 2^4 * 3^2 is the working constant below

# ## What the constants buy: divisibility on torsion orders

# a point of order p^n over a degree-d field forces phi(p^n) | c * d,
# so for fixed d only finitely many exponents survive
print("\nallowed 2-exponents in degree 1:",
      [n for n in range(1, 12) if cmbounds.gr_check(2 ** n, 2 * 144, 1)])
print("allowed torsion orders e with phi(e) | 144 (degree 1):",
      cmbounds.allowed_exponents(1, 1)[:20], "...")

# the per-prime escalation rule: p^N | d once the order reaches p^n
for (p, N) in [(2, 1), (2, 2), (3, 1), (7, 1)]:
    print(f"order {p}^{cmbounds.cm_p1_exponent(1, p, N)} forces "
          f"{p}^{N} | d")

# ## The budget procedure on the CM profile

profile = cmbounds.cm_profile(1)
eps = Fraction(1, 10)
x = 10 ** 4

result = families.b_epsilon_procedure(profile, eps, x)
print(f"\neps = {eps}, x = {x}:")
print("  shift cutoff C =", result.C)
print("  prime bound L =", result.L, " exponent floor N =", result.N)
print("  primes in the budget product:", len(result.n_map))
print("  excluded density:", result.report.density,
      "<=", eps, ":", result.report.density <= eps)
if result.B_eps is not None:
    print("  budget B_eps has", len(str(result.B_eps)), "decimal digits")
else:
    print("  budget left symbolic:", result.B_eps_note)

# tightening eps only grows the budget
looser = families.b_epsilon_procedure(profile, Fraction(1, 2), x)
print("  B(1/10) dominates B(1/2):",
      families.b_eps_dominates(result, looser))
