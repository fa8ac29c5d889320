# ## Orbit sizes and the degree divisibility they force
#
# For a subgroup G acting on the nonzero vectors of F_p^2, the index of a
# point stabilizer is the orbit size, and for the three relevant case
# labels the combination 2 * i * [G : Stab(v)] is always divisible by
# p - 1 (i = index of the determinant image).  This script sweeps one
# prime exhaustively and prints what the reports actually contain.

from torsiondeg import gl2, orbits

p = 5

classes = gl2.enumerate_subgroups(p, "exhaustive")
print(f"p = {p}: {len(classes)} subgroup classes")

# ## One report in full

G = gl2.standard_subgroups(p)["split_normalizer"]
report = orbits.verify_case_divisibility(G)
print("\nsplit normalizer report:", report.as_dict())

# the arithmetic behind the verdict, spelled out
i = report.det_index
for size in report.orbit_sizes:
    print(f"  (p-1) = {p-1} divides 2*{i}*{size} = {2*i*size}:",
          (2 * i * size) % (p - 1) == 0)

# ## The whole sweep

verdicts = {}
for G in classes:
    r = orbits.verify_case_divisibility(G)
    verdicts[r.verdict] = verdicts.get(r.verdict, 0) + 1
print("\nsweep verdicts:", verdicts)
assert verdicts.get(orbits.VIOLATION, 0) == 0

# ## Pointwise line stabilizers (the lemma behind the split case)

for r in orbits.verify_split_pointwise_stabilizers(p):
    print(f"line {r.line_index}: stabilizer order {r.stabilizer_order}, "
          f"{r.subgroup_count} subgroups, shapes {r.shapes}")

bound = orbits.verify_nonsplit_pointwise_stabilizers(p)
print("nonsplit pointwise orders:", bound.orders, "max", bound.max_order)
