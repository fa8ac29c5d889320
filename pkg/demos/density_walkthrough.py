# ## Densities of divisor-structured degree sets
#
# Degree sets are unions of clauses: multiples of m, degrees admitting a
# large shifted prime (l - 1 > C with (l - 1) | c d), and degrees with a
# high prime-power divisor.  Everything is exact: counts are integers,
# densities are Fractions.

from fractions import Fraction

from torsiondeg import families

x = 10 ** 5

# ## Single clauses

evens = families.IntegerSetSpec((families.DivClause(2),))
print("multiples of 2:", families.density_upto(evens, x).density)

sevens = families.IntegerSetSpec((families.DivClause(7),))
print("multiples of 7:", families.density_upto(sevens, x).density)

# unions are not sums — inclusion-exclusion shows up in the exact count
both = families.IntegerSetSpec((families.DivClause(2),
                                families.DivClause(7)))
print("multiples of 2 or 7:", families.density_upto(both, x).density,
      "( = 1/2 + 1/7 - 1/14 )")

# ## Shifted primes: the cutoff drives the density down

print("\nc = 1, increasing cutoff C at x =", x)
for C in (0, 10, 100, 1000, 10000):
    spec, report = families.erdos_wagstaff_set(1, C, x)
    print(f"  C = {C:6d}: density {report.density} "
          f"~ {float(report.density):.4f}")

# ## Choosing the cutoff for a target density

for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)):
    C = families.find_cutoff_C(eps, 1, x)
    _, report = families.erdos_wagstaff_set(1, C, x)
    print(f"eps = {str(eps):5s}: minimal C = {C:7d}, "
          f"achieved density {float(report.density):.5f}")

# the returned C is exactly minimal: one step lower already overshoots
eps = Fraction(1, 10)
C = families.find_cutoff_C(eps, 1, x)
if C > 0:
    _, worse = families.erdos_wagstaff_set(1, C - 1, x)
    print("one below the minimal cutoff:", float(worse.density), "> 0.1")
