"""
Genus growth and closed-point degree thresholds
===============================================

"""

from fractions import Fraction

from torsiondeg import curvedeg

# ## The genus table

print("  N  genus  min guaranteed degree")
for N in range(1, 26):
    print(f"{N:3d}  {curvedeg.genus_x1(N):5d}  {curvedeg.min_guaranteed_degree(N):3d}")

# genus 0 exactly for N in {1..10, 12}; the quadratic envelope N^2/24 + 1
# is never exceeded
for N in range(1, 200):
    assert curvedeg.genus_x1(N) <= Fraction(N * N, 24) + 1

# ## Numerical semigroups of point degrees

spec = curvedeg.SemigroupSpec((3, 5))
print("\ndegrees {3,5}: index", spec.index,
      "stable bound", curvedeg.stable_bound(spec))
print("representable targets up to 12:",
      [t for t in range(13) if curvedeg.representable(t, spec)])

# with a common factor the bound scales by the index
spec = curvedeg.SemigroupSpec((6, 10, 15))
print("degrees {6,10,15}: index", spec.index,
      "stable bound", curvedeg.stable_bound(spec))

# ## Putting both together

# a curve of genus g with known point degrees: from the threshold on,
# every degree in the index progression is realized by a closed point
g = 2
spec = curvedeg.SemigroupSpec((2, 3))
print(f"\ngenus {g}, degrees {spec.generators}:")
print("  closed-point threshold:",
      curvedeg.closed_point_degree_threshold(g, spec))
print("  degree bound from a rational point (Weierstrass):",
      curvedeg.rr_degree_bound(g, weierstrass=True))
print("  degree bound in general:",
      curvedeg.rr_degree_bound(g, weierstrass=False))
