"""torsiondeg: degree divisibility machinery for torsion points.

Finite verification of the GL2(F_p) subgroup case analysis (orbit and
stabilizer divisibility), modular curve degree thresholds, density analytics
for divisor-structured degree sets, and CM divisibility constants.
"""

from ._version import VERSION as __version__

from .arith import (
    FactoredInteger,
    divisors,
    euler_phi,
    factorize,
    glm_order,
    is_prime,
    minkowski_bound,
    ord_p,
    phi_preimage_divisors,
    primes_upto,
)
from .gl2 import (
    DicksonClass,
    ProjectiveType,
    Subgroup,
    SubgroupAnalysis,
    UnclassifiableSubgroupError,
    analyze,
    classify,
    close_generators,
    enumerate_subgroups,
    standard_subgroups,
)
from .orbits import (
    LineStabilizerReport,
    OrbitReport,
    PointwiseBoundReport,
    exceptional_prime_bound,
    orbit_partition,
    stabilizer,
    verify_case_divisibility,
    verify_nonsplit_pointwise_stabilizers,
    verify_split_pointwise_stabilizers,
)
from .curvedeg import (
    SemigroupSpec,
    closed_point_degree_threshold,
    genus_x1,
    min_guaranteed_degree,
    representable,
    rr_degree_bound,
    stable_bound,
)
from .families import (
    BEpsilonResult,
    DivClause,
    FamilyProfile,
    IntegerSetSpec,
    PrimePowerDivClause,
    PrimeShiftClause,
    b_epsilon_procedure,
    b_eps_dominates,
    density_upto,
    erdos_wagstaff_set,
    find_cutoff_C,
    profile_from_dict,
)
from .cmbounds import (
    CmBoundSet,
    allowed_exponents,
    c_of_g,
    cm_p1_exponent,
    cm_profile,
    gr_check,
    h_bound,
    mu_bound,
)

__all__ = [
    "FactoredInteger",
    "divisors",
    "euler_phi",
    "factorize",
    "glm_order",
    "is_prime",
    "minkowski_bound",
    "ord_p",
    "phi_preimage_divisors",
    "primes_upto",
    "DicksonClass",
    "ProjectiveType",
    "Subgroup",
    "SubgroupAnalysis",
    "UnclassifiableSubgroupError",
    "analyze",
    "classify",
    "close_generators",
    "enumerate_subgroups",
    "standard_subgroups",
    "LineStabilizerReport",
    "OrbitReport",
    "PointwiseBoundReport",
    "exceptional_prime_bound",
    "orbit_partition",
    "stabilizer",
    "verify_case_divisibility",
    "verify_nonsplit_pointwise_stabilizers",
    "verify_split_pointwise_stabilizers",
    "SemigroupSpec",
    "closed_point_degree_threshold",
    "genus_x1",
    "min_guaranteed_degree",
    "representable",
    "rr_degree_bound",
    "stable_bound",
    "BEpsilonResult",
    "DivClause",
    "FamilyProfile",
    "IntegerSetSpec",
    "PrimePowerDivClause",
    "PrimeShiftClause",
    "b_epsilon_procedure",
    "b_eps_dominates",
    "density_upto",
    "erdos_wagstaff_set",
    "find_cutoff_C",
    "profile_from_dict",
    "CmBoundSet",
    "allowed_exponents",
    "c_of_g",
    "cm_p1_exponent",
    "cm_profile",
    "gr_check",
    "h_bound",
    "mu_bound",
    "__version__",
]
