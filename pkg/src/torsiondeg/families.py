"""Density analytics for divisor-structured degree sets and the
excluded-set/torsion-budget procedure.

Degree sets are finite unions of two clause shapes: "m divides d" and
"some prime l with l-1 > C satisfies (l-1) | c d".  Densities are exact
counts at a finite cutoff x, reported as rationals; all asymptotic
statements in the surrounding theory are only ever approximated by such
finite-cutoff proxies, and reports say so by carrying x.

The main pipeline (b_epsilon_procedure) picks the least shift cutoff C
whose clause has density at most epsilon/2, converts it to a prime bound
L = C+1, picks the least exponent N whose union bound sum_{l<=L} l^-N
is within the other epsilon/2, asks the family profile for the forced
exponent at each prime, and assembles the torsion budget
B = 1 + prod l^(n_l - 1).  The emitted certificate (an exact density
recount of the union set) is checked before returning.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .arith import glm_order, is_prime, ord_p, primes_array, primes_upto

MAX_SIEVE = 2 * 10 ** 8

# Budget products over every prime up to L get genuinely astronomical (L
# can reach 10^8 for tight epsilon), so materialization is capped and the
# structured outputs carry enough to compare budgets exactly without it.
PRODUCT_PRIME_CAP = 300_000
PRODUCT_DIGIT_CAP = 2_000_000


# ---------------------------------------------------------------------------
# clauses and specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivClause:
    """The degrees divisible by m."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("the modulus must be a positive integer")

    def contains(self, d: int) -> bool:
        return d >= 1 and d % self.m == 0

    def mark(self, mask: np.ndarray) -> None:
        mask[self.m::self.m] = True

    def describe(self) -> dict:
        return {"kind": "divisor", "m": self.m}


@dataclass(frozen=True)
class PrimeShiftClause:
    """The degrees d admitting a prime l with l-1 > C and (l-1) | c d."""

    c: int
    C: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("the multiplier c must be a positive integer")
        if self.C < 0:
            raise ValueError("the cutoff C must be nonnegative")

    def contains(self, d: int) -> bool:
        """Naive trial over all candidate primes — the decidability
        contract, used as the oracle for the sieve."""
        if d < 1:
            return False
        cd = self.c * d
        return any(l - 1 > self.C and cd % (l - 1) == 0
                   for l in primes_upto(cd + 1))

    def mark(self, mask: np.ndarray) -> None:
        ms = _max_prime_shift(self.c, len(mask) - 1)
        np.logical_or(mask, ms > self.C, out=mask)

    def describe(self) -> dict:
        return {"kind": "prime-shift", "c": self.c, "C": self.C}


def _int_nth_root(n: int, k: int) -> int:
    """Largest r with r**k <= n (0 for n < 1); pure-integer bisection."""
    if n < 1:
        return 0
    if k == 1:
        return n
    lo, hi = 0, 1 << ((n.bit_length() + k - 1) // k + 1)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid ** k <= n:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class PrimePowerDivClause:
    """{d : l^N | d for some prime l <= L} — the union of the divisor
    clauses l^N over every prime up to L, kept as one object because L
    can be large enough (10^8) that listing the primes is hostile."""

    N: int
    L: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("the exponent N must be a positive integer")
        if self.L < 0:
            raise ValueError("the prime bound L must be nonnegative")

    def contains(self, d: int) -> bool:
        if d < 1:
            return False
        top = min(self.L, _int_nth_root(d, self.N))
        return any(d % l ** self.N == 0 for l in primes_upto(top))

    def mark(self, mask: np.ndarray) -> None:
        top = min(self.L, _int_nth_root(len(mask) - 1, self.N))
        for l in primes_upto(top):
            step = l ** self.N
            mask[step::step] = True

    def describe(self) -> dict:
        return {"kind": "prime-power-div", "N": self.N, "L": self.L}


def _clause_sort_key(clause):
    if isinstance(clause, DivClause):
        return (0, clause.m, 0)
    if isinstance(clause, PrimeShiftClause):
        return (1, clause.c, clause.C)
    return (2, clause.N, clause.L)


@dataclass(frozen=True)
class IntegerSetSpec:
    """A finite union of clauses, canonically ordered."""

    clauses: tuple

    def __post_init__(self):
        for clause in self.clauses:
            if not isinstance(clause, (DivClause, PrimeShiftClause,
                                       PrimePowerDivClause)):
                raise ValueError(f"unsupported clause {clause!r}")
        ordered = tuple(sorted(set(self.clauses), key=_clause_sort_key))
        object.__setattr__(self, "clauses", ordered)

    def contains(self, d: int) -> bool:
        return any(clause.contains(d) for clause in self.clauses)

    def describe(self) -> list[dict]:
        return [clause.describe() for clause in self.clauses]


@dataclass(frozen=True)
class DensityReport:
    """Exact membership count of a set within [1, x]."""

    cutoff: int
    count: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("the cutoff must be a positive integer")
        if not 0 <= self.count <= self.cutoff:
            raise ValueError("count out of range")

    @property
    def density(self) -> Fraction:
        return Fraction(self.count, self.cutoff)


# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------

_MAXSHIFT_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _max_prime_shift(c: int, x: int) -> np.ndarray:
    """Array where entry d holds the largest l-1 over primes l with
    (l-1) | c d, or 0 if there is none.

    A prime l is relevant exactly when s = (l-1)/gcd(l-1, c) <= x, since
    (l-1) | c d is equivalent to s | d; assigning l-1 to the multiples
    of s for l ascending leaves the maximum in place.
    """
    key = (c, x)
    cached = _MAXSHIFT_CACHE.get(key)
    if cached is not None:
        return cached
    limit = c * x + 1
    if limit > MAX_SIEVE:
        raise ValueError(
            f"prime-shift sieve would need all primes up to {limit}; "
            f"the supported bound is {MAX_SIEVE}")
    primes = primes_array(limit)
    shifts = primes - 1
    s = shifts // np.gcd(shifts, c)
    keep = s <= x
    arr = np.zeros(x + 1, dtype=np.int64)
    for step, value in zip(s[keep], shifts[keep]):
        arr[step::step] = value
    arr.setflags(write=False)
    _MAXSHIFT_CACHE[key] = arr
    return arr


def density_upto(spec: IntegerSetSpec, x: int) -> DensityReport:
    """Exact count of members of the union in [1, x], by sieve."""
    if x < 1:
        raise ValueError("the cutoff must be a positive integer")
    mask = np.zeros(x + 1, dtype=bool)
    for clause in spec.clauses:
        clause.mark(mask)
    return DensityReport(x, int(mask[1:].sum()))


def erdos_wagstaff_set(c: int, C: int, x: int):
    """The degrees up to x with a prime shift divisor beyond C, together
    with their exact density."""
    spec = IntegerSetSpec((PrimeShiftClause(c, C),))
    ms = _max_prime_shift(c, x)
    count = int((ms[1:] > C).sum())
    return spec, DensityReport(x, count)


def find_cutoff_C(epsilon, c: int, x: int) -> int:
    """Least C >= 0 whose prime-shift clause has density at most epsilon
    within [1, x].

    Order statistics give it directly: with K the largest allowed count,
    the (K+1)-th largest value of the per-degree maximal shift is the
    answer (0 when everything fits).
    """
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    ms = _max_prime_shift(c, x)
    allowed = int(eps * x)  # floor; count <= allowed <=> density <= eps
    if allowed >= x:
        return 0
    values = np.sort(ms[1:])
    C = int(values[x - 1 - allowed])  # (allowed+1)-th largest
    count = int((ms[1:] > C).sum())
    if Fraction(count, x) > eps:  # pragma: no cover - defensive
        raise RuntimeError(
            f"no cutoff reaches density {eps} at x={x}; "
            f"smallest achievable count is {count}")
    return C


# ---------------------------------------------------------------------------
# family profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyProfile:
    """The constants a family contributes to the budget pipeline.

    p2_c: a point of prime order l on a member over F forces
    (l-1)/p2_c | [F:Q].  p1_rule(p, N): a point of order p^n with
    n >= p1_rule(p, N) forces p^N | [F:Q].  merelian_B: optional
    degree-indexed bound on torsion order, needed by the exponent
    searches.  si_prime_cutoff is annotation only.
    """

    p2_c: int
    p1_rule: Callable[[int, int], int]
    merelian_B: Optional[Callable[[int], int]] = None
    dim_g: int = 1
    si_prime_cutoff: Optional[int] = None

    def __post_init__(self):
        if self.p2_c < 1:
            raise ValueError("p2_c must be a positive integer")
        if self.dim_g < 1:
            raise ValueError("dim_g must be a positive integer")


def validate_profile(profile: FamilyProfile) -> None:
    """Spot-check the monotonicity contracts on sampled inputs."""
    for p in (2, 3, 5, 7):
        values = [profile.p1_rule(p, N) for N in range(1, 6)]
        if any(v < 1 for v in values):
            raise ValueError(f"p1_rule must be >= 1, got {values} at p={p}")
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError(
                f"p1_rule must be nondecreasing in N, got {values} at p={p}")
    if profile.merelian_B is not None:
        values = [profile.merelian_B(d) for d in (1, 2, 5, 10, 100)]
        if any(v < 1 for v in values):
            raise ValueError("merelian_B must be >= 1")
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError(
                f"merelian_B must be nondecreasing, got {values}")


def rule_from_template(template: dict) -> Callable[[int, int], int]:
    """p1 rules expressible in JSON: shift (N + offset), constant, or the
    complex-multiplication shape N + v_p(c) + 1."""
    kind = template.get("kind")
    if kind == "shift":
        offset = int(template["offset"])
        if offset < 0:
            raise ValueError("shift offset must be nonnegative")
        return lambda p, N: N + offset
    if kind == "constant":
        value = int(template["value"])
        if value < 1:
            raise ValueError("constant rule must be positive")
        return lambda p, N: value
    if kind == "cm":
        c = int(template["c"])
        if c < 1:
            raise ValueError("cm constant must be positive")
        return lambda p, N: N + ord_p(c, p) + 1
    raise ValueError(f"unknown p1_rule kind {kind!r}")


def bound_from_template(template: dict) -> Callable[[int], int]:
    """Merelian bounds expressible in JSON: constant, linear, power."""
    kind = template.get("kind")
    if kind == "constant":
        value = int(template["value"])
        if value < 1:
            raise ValueError("constant bound must be positive")
        return lambda d: value
    if kind == "linear":
        coeff = int(template["coeff"])
        if coeff < 1:
            raise ValueError("linear coefficient must be positive")
        return lambda d: coeff * d
    if kind == "power":
        coeff, exponent = int(template["coeff"]), int(template["exponent"])
        if coeff < 1 or exponent < 1:
            raise ValueError("power bound needs positive coefficient and exponent")
        return lambda d: coeff * d ** exponent
    raise ValueError(f"unknown merelian_B kind {kind!r}")


def profile_from_dict(data: dict) -> FamilyProfile:
    """Build a profile from its JSON form and validate its contracts."""
    bound = data.get("merelian_B")
    profile = FamilyProfile(
        p2_c=int(data["p2_c"]),
        p1_rule=rule_from_template(data["p1_rule"]),
        merelian_B=bound_from_template(bound) if bound is not None else None,
        dim_g=int(data.get("dim_g", 1)),
        si_prime_cutoff=(int(data["si_prime_cutoff"])
                         if data.get("si_prime_cutoff") is not None else None),
    )
    validate_profile(profile)
    return profile


# ---------------------------------------------------------------------------
# forced exponents
# ---------------------------------------------------------------------------

def p1_exponent_merelian(profile: FamilyProfile, p: int, N: int,
                         d: int) -> int:
    """Least n such that a point of order p^n on a degree-d member forces
    p^N to divide the field degree, derived from the growth bound.

    With c the prime-to-p part of #GL_{2g}(F_p), any torsion field degree
    divides c p^G for some G; once p^n exceeds the bound at degree
    d (c p^N - 1), the torsion field degree must exceed c p^N - 1, and a
    divisor of c p^G that large is a multiple of p^N.
    """
    if profile.merelian_B is None:
        raise ValueError("this computation needs the profile's merelian_B")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if N < 1 or d < 1:
        raise ValueError("N and d must be positive integers")
    c = glm_order(2 * profile.dim_g, p, 1)[0]
    bound = profile.merelian_B(d * (c * p ** N - 1))
    n = 1
    while p ** n <= bound:
        n += 1
    return n


def p1_exponent_j_field(profile: FamilyProfile, p: int, N: int,
                        d0: int) -> int:
    """Variant for families parametrized by a degree-d0 j-invariant field:
    the auxiliary field extension costs two extra powers of p."""
    return p1_exponent_merelian(profile, p, N + 2, d0)


# ---------------------------------------------------------------------------
# the budget procedure
# ---------------------------------------------------------------------------

def _tail_within(primes, N: int, budget: Fraction) -> bool:
    """Exact decision of sum(l^-N for l in primes) <= budget.

    primes must be ascending.  Large prime lists use integer bracketing:
    floor terms vanish once l^N passes b*scale, so only a short ascending
    prefix is ever summed, and the +count correction bounds the dropped
    fractional parts.
    """
    count = len(primes)
    if count == 0:
        return True
    if count <= 64:
        return sum(Fraction(1, int(p) ** N) for p in primes) <= budget
    a, b = budget.numerator, budget.denominator
    scale = 1 << 32
    for _ in range(3):
        cap = a * scale
        bQ = b * scale
        floor_sum = 0
        for p in primes:
            t = int(p) ** N
            if t > bQ:
                break  # ascending: every later floor term is 0
            floor_sum += bQ // t
            if floor_sum > cap:
                return False
        if floor_sum + count <= cap:
            return True
        scale <<= 32
    raise RuntimeError(
        "union-bound comparison undecided at 96-bit precision")


class PrimeExponentMap(Mapping):
    """The forced exponent at each prime l <= L, evaluated on demand.

    Behaves like {l: rule(l, N) for primes l <= L} without storing
    millions of entries when L is huge.
    """

    def __init__(self, rule, N: int, L: int, primes: np.ndarray):
        self._rule = rule
        self._N = N
        self.L = L
        self._primes = primes

    def __getitem__(self, l):
        if not (isinstance(l, (int, np.integer)) and 2 <= l <= self.L
                and is_prime(int(l))):
            raise KeyError(l)
        return int(self._rule(int(l), self._N))

    def __iter__(self):
        return (int(l) for l in self._primes)

    def __len__(self):
        return len(self._primes)

    def __repr__(self):
        return (f"PrimeExponentMap(N={self._N}, primes<={self.L}, "
                f"count={len(self._primes)})")


def _product_tree(factors: list[int]) -> int:
    """Balanced product: keeps the big-integer multiplications between
    operands of comparable size, which sequential accumulation does not."""
    vals = list(factors)
    if not vals:
        return 1
    while len(vals) > 1:
        nxt = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


@dataclass(frozen=True)
class BEpsilonResult:
    """Everything the budget procedure derives, plus its certificate.

    B_eps is the literal integer budget when it fits the materialization
    caps, else None with B_eps_note saying why; (C, L, N, n_map) always
    determine it exactly, and b_eps_dominates compares two results
    without needing the integers.
    """

    C: int
    L: int
    N: int
    n_map: PrimeExponentMap
    B_eps: Optional[int]
    B_eps_note: Optional[str]
    excluded: IntegerSetSpec
    report: DensityReport
    profile: "FamilyProfile"


def b_epsilon_procedure(profile: FamilyProfile, epsilon, x: int, *,
                        product_prime_cap: int = PRODUCT_PRIME_CAP,
                        product_digit_cap: int = PRODUCT_DIGIT_CAP,
                        ) -> BEpsilonResult:
    """Derive a torsion budget B valid off an excluded degree set of
    density at most epsilon.

    Half the budget buys the shift cutoff C (degrees keeping a prime
    torsion possibility l need l - 1 <= C, so l <= L = C + 1); the other
    half buys the exponent N via the union bound over l <= L.  The
    profile then forces p^N | degree beyond exponent n_l at each prime,
    so every surviving torsion order divides prod l^(n_l - 1), and B is
    one more than that.  The excluded set's density is recounted exactly
    and must honor the certificate.

    The budget integer is only materialized within the caps (primes
    below L, estimated decimal digits); beyond them B_eps is None and
    B_eps_note reports the overflow, while C, L, N, and n_map still
    specify the budget exactly.
    """
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if x < 1:
        raise ValueError("the cutoff x must be a positive integer")
    half = eps / 2
    C = find_cutoff_C(half, profile.p2_c, x)
    L = C + 1
    small_primes = primes_array(L)
    N = 1
    while not _tail_within(small_primes, N, half):
        N += 1
    for l in small_primes[:32]:
        if profile.p1_rule(int(l), N) < 1:
            raise ValueError(f"profile rule returned < 1 at l={int(l)}")
    B_eps = None
    note = None
    if len(small_primes) > product_prime_cap:
        note = (f"budget product spans {len(small_primes)} primes "
                f"(cap {product_prime_cap}); not materialized")
    else:
        exponents = [(int(l), profile.p1_rule(int(l), N) - 1)
                     for l in small_primes]
        if any(e < 0 for _, e in exponents):
            raise ValueError("profile rule returned < 1")
        digits = sum(e * math.log10(l) for l, e in exponents)
        if digits > product_digit_cap:
            note = (f"budget product needs about {int(digits)} decimal "
                    f"digits (cap {product_digit_cap}); not materialized")
        else:
            B_eps = 1 + _product_tree([l ** e for l, e in exponents])
    n_map = PrimeExponentMap(profile.p1_rule, N, L, small_primes)
    excluded = IntegerSetSpec((PrimeShiftClause(profile.p2_c, C),
                               PrimePowerDivClause(N, L)))
    report = density_upto(excluded, x)
    if report.density > eps:  # pragma: no cover - defensive
        raise RuntimeError(
            f"certificate violated: excluded density {report.density} "
            f"exceeds {eps}")
    return BEpsilonResult(C=C, L=L, N=N, n_map=n_map, B_eps=B_eps,
                          B_eps_note=note, excluded=excluded, report=report,
                          profile=profile)


def b_eps_dominates(tight: BEpsilonResult, loose: BEpsilonResult) -> bool:
    """True when tight.B_eps >= loose.B_eps is established.

    Materialized budgets compare directly.  Otherwise two runs of the
    same profile compare structurally: a larger prime range and a larger
    union exponent dominate factor-by-factor, because profile rules are
    nondecreasing in N.  Returns False when domination is not proved.
    """
    if tight.B_eps is not None and loose.B_eps is not None:
        return tight.B_eps >= loose.B_eps
    if tight.profile.p1_rule is not loose.profile.p1_rule:
        raise ValueError(
            "structural budget comparison needs runs of one profile")
    if tight.L < loose.L or tight.N < loose.N:
        return False
    for l in (2, 3, 5, 7, 11, 13):
        if l <= loose.L and tight.n_map[l] < loose.n_map[l]:
            return False  # pragma: no cover - profile contract violation
    return True


def exponent_to_order_bound(exp_bound: int, g: int) -> int:
    """Torsion order bound from an exponent bound: exp^(2g)."""
    if exp_bound < 1 or g < 1:
        raise ValueError("inputs must be positive integers")
    return exp_bound ** (2 * g)
