"""Subgroups of GL2 over a prime field.

Matrices are 2x2 over F_p, stored row-major as (a, b, c, d), acting on
column vectors: M(x, y) = (a*x + b*y, c*x + d*y).  For fast set arithmetic
a matrix packs into the single integer key ((a*p + b)*p + c)*p + d and a
subgroup keeps its elements as a sorted tuple of such keys.

The classification implemented by `classify` sorts every subgroup into one
of seven buckets with a fixed precedence:

    ContainsSL > Borel > SplitNormalizer > NonsplitNormalizer > Exceptional*

Precedence matters because the bucket conditions overlap (a split Cartan
also lies in a Borel, small cyclic groups lie in several normalizers).
Containment tests are intrinsic and exact: a subgroup lies in some
conjugate of the split normalizer iff it permutes an unordered pair of
rational lines, and in a conjugate of the nonsplit normalizer iff it
permutes a Galois-conjugate pair of non-rational points of P^1(F_{p^2});
both conditions are checked on generators only.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

from .arith import factorize, is_prime

# Groups whose order exceeds this are kept lazy (generators + invariants
# only); asking for their element table raises MaterializationError.
MATERIALIZATION_LIMIT = 2_000_000


class MaterializationError(RuntimeError):
    """The full element table of a subgroup is too large to build."""


class UnclassifiableSubgroupError(RuntimeError):
    """A subgroup fit none of the seven classification buckets.

    For p >= 5 this must never happen; seeing it means a bug, and the
    offending generators are carried on the exception for the report.
    """

    def __init__(self, subgroup: "Subgroup"):
        self.subgroup = subgroup
        gens = [unpack(subgroup.p, k) for k in subgroup.generators]
        super().__init__(f"no class matched for p={subgroup.p}, generators={gens}")


class DicksonClass(str, Enum):
    CONTAINS_SL = "ContainsSL"
    BOREL = "Borel"
    SPLIT_NORMALIZER = "SplitNormalizer"
    NONSPLIT_NORMALIZER = "NonsplitNormalizer"
    EXCEPTIONAL_A4 = "ExceptionalA4"
    EXCEPTIONAL_S4 = "ExceptionalS4"
    EXCEPTIONAL_A5 = "ExceptionalA5"


class ProjectiveType(str, Enum):
    CYCLIC = "Cyclic"
    DIHEDRAL = "Dihedral"
    A4 = "A4"
    S4 = "S4"
    A5 = "A5"
    PSL2_FULL = "PSL2Full"
    PGL2_FULL = "PGL2Full"
    OTHER = "Other"


# ---------------------------------------------------------------------------
# packed-key matrix arithmetic
# ---------------------------------------------------------------------------

def pack(p: int, a: int, b: int, c: int, d: int) -> int:
    return ((a * p + b) * p + c) * p + d


def unpack(p: int, key: int) -> tuple[int, int, int, int]:
    key, d = divmod(key, p)
    key, c = divmod(key, p)
    a, b = divmod(key, p)
    return a, b, c, d


def key_det(p: int, key: int) -> int:
    a, b, c, d = unpack(p, key)
    return (a * d - b * c) % p


def key_mul(p: int, k1: int, k2: int) -> int:
    a, b, c, d = unpack(p, k1)
    e, f, g, h = unpack(p, k2)
    return pack(p, (a * e + b * g) % p, (a * f + b * h) % p,
                (c * e + d * g) % p, (c * f + d * h) % p)


def key_inv(p: int, key: int) -> int:
    a, b, c, d = unpack(p, key)
    di = pow(a * d - b * c, -1, p)
    return pack(p, d * di % p, -b * di % p, -c * di % p, a * di % p)


def key_pow(p: int, key: int, n: int) -> int:
    if n < 0:
        key, n = key_inv(p, key), -n
    result = pack(p, 1, 0, 0, 1)
    while n:
        if n & 1:
            result = key_mul(p, result, key)
        key = key_mul(p, key, key)
        n >>= 1
    return result


def key_is_scalar(p: int, key: int) -> bool:
    a, b, c, d = unpack(p, key)
    return b == 0 and c == 0 and a == d


def projective_order_of(p: int, key: int) -> int:
    """Least k >= 1 with key^k scalar (order of the image in PGL2)."""
    acc = key
    for k in range(1, p + 2):
        if key_is_scalar(p, acc):
            return k
        acc = key_mul(p, acc, key)
    raise AssertionError("projective order exceeded p+1")  # impossible


# ---------------------------------------------------------------------------
# element and line types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Mat2:
    """An invertible 2x2 matrix over F_p (row-major entries)."""

    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not (0 <= v < self.p):
                raise ValueError(f"entry {name}={v} not reduced mod {self.p}")
        if (self.a * self.d - self.b * self.c) % self.p == 0:
            raise ValueError(f"matrix {self.rows()} is singular mod {self.p}")

    @classmethod
    def of(cls, p, a, b, c, d):
        return cls(p, a % p, b % p, c % p, d % p)

    @classmethod
    def from_key(cls, p, key):
        return cls(p, *unpack(p, key))

    @property
    def key(self) -> int:
        return pack(self.p, self.a, self.b, self.c, self.d)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def __mul__(self, other: "Mat2") -> "Mat2":
        if self.p != other.p:
            raise ValueError("mixed moduli")
        return Mat2.from_key(self.p, key_mul(self.p, self.key, other.key))

    def inverse(self) -> "Mat2":
        return Mat2.from_key(self.p, key_inv(self.p, self.key))

    def __pow__(self, n: int) -> "Mat2":
        return Mat2.from_key(self.p, key_pow(self.p, self.key, n))

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        x, y = v
        return ((self.a * x + self.b * y) % self.p,
                (self.c * x + self.d * y) % self.p)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d


@dataclass(frozen=True, order=True)
class Line:
    """A one-dimensional subspace of F_p^2, normalized representative.

    The representative (x, y) has its first nonzero coordinate equal to 1,
    so there are exactly p+1 lines: (1, s) for each slope s, plus (0, 1).
    """

    p: int
    x: int
    y: int

    def __post_init__(self):
        if (self.x, self.y) != ((1, self.y) if self.x == 1 else (0, 1)):
            raise ValueError(f"({self.x},{self.y}) is not a normalized representative")
        if not (0 <= self.y < self.p):
            raise ValueError("representative not reduced")

    @classmethod
    def through(cls, p, x, y):
        x, y = x % p, y % p
        if x == 0 and y == 0:
            raise ValueError("zero vector spans no line")
        if x != 0:
            return cls(p, 1, y * pow(x, -1, p) % p)
        return cls(p, 0, 1)

    @classmethod
    def from_index(cls, p, i):
        return cls(p, 1, i) if i < p else cls(p, 0, 1)

    @property
    def index(self) -> int:
        """Position in the canonical ordering: slope for (1,s), p for (0,1)."""
        return self.y if self.x == 1 else self.p

    def vectors(self):
        """All p-1 nonzero vectors on the line."""
        return [(t * self.x % self.p, t * self.y % self.p)
                for t in range(1, self.p)]


def all_lines(p: int) -> list[Line]:
    return [Line.from_index(p, i) for i in range(p + 1)]


def line_permutation(p: int, key: int) -> tuple[int, ...]:
    """How a matrix permutes the p+1 lines, as a tuple over line indices."""
    a, b, c, d = unpack(p, key)
    images = []
    for i in range(p + 1):
        x, y = (1, i) if i < p else (0, 1)
        nx, ny = (a * x + b * y) % p, (c * x + d * y) % p
        images.append(ny * pow(nx, -1, p) % p if nx else p)
    return tuple(images)


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

def _mulclose(p: int, gens: list[int]) -> tuple[int, ...]:
    """Closure of a set of invertible keys under multiplication."""
    identity = pack(p, 1, 0, 0, 1)
    elements = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = key_mul(p, x, g)
                if y not in elements:
                    elements.add(y)
                    new.append(y)
        frontier = new
    return tuple(sorted(elements))


def _det_closure(p: int, dets: list[int]) -> frozenset[int]:
    """Subgroup of F_p^* generated by the given determinants."""
    image = {1}
    frontier = [1]
    while frontier:
        new = []
        for x in frontier:
            for d in dets:
                y = x * d % p
                if y not in image:
                    image.add(y)
                    new.append(y)
        frontier = new
    return frozenset(image)


def _sl2_keys(p: int) -> tuple[int, ...]:
    """All of SL2(F_p) by direct construction, O(p^3)."""
    keys = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                if a:
                    keys.append(pack(p, a, b, c, (1 + b * c) * pow(a, -1, p) % p))
                elif b and (-b * c) % p == 1:
                    keys.extend(pack(p, 0, b, c, d) for d in range(p))
    return tuple(sorted(keys))


class Subgroup:
    """A subgroup of GL2(F_p), immutable once constructed.

    Most subgroups carry their full sorted element table.  Subgroups that
    contain SL2 can instead be represented lazily by their determinant
    image alone (they are exactly the preimages {g : det g in D}); such a
    subgroup knows its order and invariants but will refuse to materialize
    its elements above MATERIALIZATION_LIMIT.
    """

    def __init__(self, p, *, generators, elements=None, det_image=None,
                 contains_sl2=None, order=None):
        self.p = p
        self.generators = tuple(generators)
        self._elements = tuple(elements) if elements is not None else None
        if self._elements is not None:
            self.order = len(self._elements)
            dets = frozenset(key_det(p, k) for k in self._elements)
            self.det_image = dets
            self.contains_sl2 = (
                sum(1 for k in self._elements if key_det(p, k) == 1)
                == p * (p * p - 1))
        else:
            # lazy: only valid for SL2-preimages, where everything follows
            # from the determinant image
            assert contains_sl2, "lazy subgroups must contain SL2"
            self.det_image = frozenset(det_image)
            self.contains_sl2 = True
            self.order = p * (p * p - 1) * len(self.det_image)
        if order is not None:
            assert order == self.order
        self._fingerprint = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_sorted_keys(cls, p, keys, generators=None):
        """Trusted constructor: keys must already be a sorted closed set."""
        return cls(p, generators=generators if generators is not None else keys,
                   elements=keys)

    @classmethod
    def sl2_preimage(cls, p, det_image, generators):
        return cls(p, generators=generators, det_image=det_image,
                   contains_sl2=True)

    @classmethod
    def generated_by(cls, p, gen_keys):
        gens = sorted(set(gen_keys))
        return cls(p, generators=gens, elements=_mulclose(p, gens))

    # -- element access ----------------------------------------------------

    @property
    def elements(self) -> tuple[int, ...]:
        if self._elements is None:
            if self.order > MATERIALIZATION_LIMIT:
                raise MaterializationError(
                    f"subgroup of order {self.order} exceeds the "
                    f"materialization limit {MATERIALIZATION_LIMIT}")
            self._elements = self._materialize_sl2_preimage()
        return self._elements

    def _materialize_sl2_preimage(self):
        p = self.p
        sl2 = _sl2_keys(p)
        keys = []
        for delta in sorted(self.det_image):
            t = pack(p, delta, 0, 0, 1)
            keys.extend(key_mul(p, k, t) for k in sl2)
        return tuple(sorted(keys))

    @property
    def is_materialized(self) -> bool:
        return self._elements is not None

    def __contains__(self, key: int) -> bool:
        if self._elements is None:
            return key_det(self.p, key) in self.det_image
        # sorted tuple: bisect would do, but sets of this size are cheap
        if not hasattr(self, "_element_set"):
            self._element_set = frozenset(self._elements)
        return key in self._element_set

    def __len__(self) -> int:
        return self.order

    def __repr__(self):
        tag = "lazy" if self._elements is None else "materialized"
        return f"Subgroup(p={self.p}, order={self.order}, {tag})"

    # -- invariants ----------------------------------------------------------

    @property
    def scalar_count(self) -> int:
        if self._elements is not None:
            return sum(1 for k in self._elements if key_is_scalar(self.p, k))
        # lazy SL2-preimage: scalar aI has determinant a^2
        return sum(1 for a in range(1, self.p)
                   if a * a % self.p in self.det_image)

    @property
    def projective_order(self) -> int:
        q, r = divmod(self.order, self.scalar_count)
        assert r == 0
        return q

    def conjugate(self, h_key: int) -> "Subgroup":
        """h G h^{-1}, preserving laziness."""
        p = self.p
        hi = key_inv(p, h_key)
        gens = [key_mul(p, key_mul(p, h_key, g), hi) for g in self.generators]
        if self._elements is None:
            return Subgroup.sl2_preimage(p, self.det_image, gens)
        elems = tuple(sorted(key_mul(p, key_mul(p, h_key, g), hi)
                             for g in self._elements))
        return Subgroup(p, generators=gens, elements=elems)

    # histogram cutoff for fingerprints: order statistics are collected only
    # for groups up to this size, so the rule stays a property of the group
    # itself rather than of how an instance happens to be represented
    HISTOGRAM_LIMIT = 20_000

    def fingerprint(self) -> tuple:
        """Conjugation-invariant signature used for deduplication.

        Identical for conjugate subgroups; cheap collisions are resolved by
        an explicit conjugacy test during enumeration.  The element-order
        histogram is included exactly when the subgroup does not contain
        SL2 and is not too large.
        """
        if self._fingerprint is None:
            parts = [self.p, self.order, tuple(sorted(self.det_image)),
                     self.contains_sl2, self.scalar_count,
                     tuple(sorted(vector_orbit_sizes(self)))]
            if not self.contains_sl2 and self.order <= self.HISTOGRAM_LIMIT:
                hist = {}
                for k in self.elements:
                    o = projective_order_of(self.p, k)
                    hist[o] = hist.get(o, 0) + 1
                parts.append(tuple(sorted(hist.items())))
            self._fingerprint = tuple(parts)
        return self._fingerprint

    def fingerprint_id(self) -> str:
        raw = repr(self.fingerprint()).encode()
        return hashlib.blake2b(raw, digest_size=12).hexdigest()


def close_generators(p: int, gens) -> Subgroup:
    """Smallest subgroup of GL2(F_p) containing the given matrices.

    Accepts Mat2 instances, packed keys, or 2x2 nested sequences; rejects
    any non-invertible generator, identifying the offender.
    """
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    keys = []
    for g in gens:
        if isinstance(g, Mat2):
            if g.p != p:
                raise ValueError(f"generator {g.rows()} has modulus {g.p}, not {p}")
            keys.append(g.key)
            continue
        if isinstance(g, int):
            a, b, c, d = unpack(p, g)
        else:
            (a, b), (c, d) = g
        a, b, c, d = a % p, b % p, c % p, d % p
        if (a * d - b * c) % p == 0:
            raise ValueError(f"generator (({a},{b}),({c},{d})) is singular mod {p}")
        keys.append(pack(p, a, b, c, d))
    return Subgroup.generated_by(p, keys)


# ---------------------------------------------------------------------------
# standard subgroups
# ---------------------------------------------------------------------------

def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = [q for q, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("no primitive root found")


def least_nonresidue(p: int) -> int:
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise ValueError(f"no quadratic non-residue mod {p}")


def split_cartan(p: int) -> Subgroup:
    _require_odd(p, "split Cartan")
    r = primitive_root(p)
    keys = tuple(sorted(pack(p, a, 0, 0, d)
                        for a in range(1, p) for d in range(1, p)))
    return Subgroup.from_sorted_keys(
        p, keys, generators=[pack(p, r, 0, 0, 1), pack(p, 1, 0, 0, r)])


def split_normalizer(p: int) -> Subgroup:
    _require_odd(p, "split Cartan normalizer")
    r = primitive_root(p)
    diag = [pack(p, a, 0, 0, d) for a in range(1, p) for d in range(1, p)]
    anti = [pack(p, 0, b, c, 0) for b in range(1, p) for c in range(1, p)]
    return Subgroup.from_sorted_keys(
        p, tuple(sorted(diag + anti)),
        generators=[pack(p, r, 0, 0, 1), pack(p, 1, 0, 0, r), pack(p, 0, 1, 1, 0)])


def nonsplit_cartan(p: int) -> Subgroup:
    """The matrices [[a, eps*b], [b, a]], (a, b) != (0, 0), eps the least
    quadratic non-residue: a cyclic group of order p^2 - 1 isomorphic to
    the units of F_{p^2}."""
    _require_odd(p, "nonsplit Cartan")
    eps = least_nonresidue(p)
    identity = pack(p, 1, 0, 0, 1)
    qs = [q for q, _ in factorize(p * p - 1)]
    keys = []
    gen = None
    for a in range(p):
        for b in range(p):
            if a == 0 and b == 0:
                continue
            k = pack(p, a, eps * b % p, b, a)
            keys.append(k)
            if gen is None and all(key_pow(p, k, (p * p - 1) // q) != identity
                                   for q in qs):
                gen = k
    assert gen is not None  # the group is cyclic of order p^2-1
    return Subgroup.from_sorted_keys(p, tuple(sorted(keys)), generators=[gen])


def nonsplit_normalizer(p: int) -> Subgroup:
    _require_odd(p, "nonsplit Cartan normalizer")
    cartan = nonsplit_cartan(p)
    w = pack(p, 1, 0, 0, p - 1)
    keys = list(cartan.elements)
    keys.extend(key_mul(p, w, k) for k in cartan.elements)
    return Subgroup.from_sorted_keys(p, tuple(sorted(keys)),
                                     generators=list(cartan.generators) + [w])


def borel(p: int) -> Subgroup:
    r = primitive_root(p)
    keys = tuple(sorted(pack(p, a, b, 0, d)
                        for a in range(1, p) for d in range(1, p)
                        for b in range(p)))
    gens = [pack(p, 1, 1, 0, 1)]
    if p > 2:
        gens += [pack(p, r, 0, 0, 1), pack(p, 1, 0, 0, r)]
    return Subgroup.from_sorted_keys(p, keys, generators=gens)


def sl2(p: int) -> Subgroup:
    return Subgroup.from_sorted_keys(
        p, _sl2_keys(p),
        generators=[pack(p, 1, 1, 0, 1), pack(p, 1, 0, 1, 1)])


def gl2_full(p: int) -> Subgroup:
    keys = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p:
                        keys.append(pack(p, a, b, c, d))
    gens = [pack(p, 1, 1, 0, 1), pack(p, 1, 0, 1, 1)]
    if p > 2:
        gens.append(pack(p, primitive_root(p), 0, 0, 1))
    return Subgroup.from_sorted_keys(p, tuple(sorted(keys)), generators=gens)


def standard_subgroups(p: int) -> dict[str, Subgroup]:
    """The six reference subgroups used throughout: split/nonsplit Cartans
    and their normalizers, the Borel, and SL2."""
    if p < 3:
        raise ValueError("standard subgroups need p >= 3")
    return {
        "split_cartan": split_cartan(p),
        "split_normalizer": split_normalizer(p),
        "nonsplit_cartan": nonsplit_cartan(p),
        "nonsplit_normalizer": nonsplit_normalizer(p),
        "borel": borel(p),
        "sl2": sl2(p),
    }


def _require_odd(p, what):
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p == 2:
        raise ValueError(f"{what} is not defined for p = 2")


# ---------------------------------------------------------------------------
# line actions
# ---------------------------------------------------------------------------

def stabilized_lines(G: Subgroup) -> set[Line]:
    """Lines L with gL = L for every g in G (checked on generators)."""
    p = G.p
    perms = [line_permutation(p, g) for g in G.generators]
    return {Line.from_index(p, i) for i in range(p + 1)
            if all(perm[i] == i for perm in perms)}


def pointwise_fixed_lines(G: Subgroup) -> set[Line]:
    """Lines on which every element of G acts as the identity."""
    p = G.p
    fixed = set()
    for line in all_lines(p):
        x, y = line.x, line.y
        ok = True
        for g in G.generators:
            a, b, c, d = unpack(p, g)
            if ((a * x + b * y) % p, (c * x + d * y) % p) != (x, y):
                ok = False
                break
        if ok:
            fixed.add(line)
    return fixed


def _stabilized_line_pair(G: Subgroup):
    """An unordered pair of distinct lines permuted by G, or None."""
    p = G.p
    perms = [line_permutation(p, g) for g in G.generators]
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            if all({perm[i], perm[j]} == {i, j} for perm in perms):
                return (i, j)
    return None


# --- arithmetic in F_{p^2} = F_p[T]/(T^2 - beta*T - gamma) -----------------

def _quadratic_model(p: int) -> tuple[int, int]:
    if p == 2:
        return 1, 1                      # T^2 = T + 1
    return 0, least_nonresidue(p)        # T^2 = eps


def _fq_mul(p, beta, gamma, z1, z2):
    u1, v1 = z1
    u2, v2 = z2
    vv = v1 * v2
    return ((u1 * u2 + gamma * vv) % p, (u1 * v2 + u2 * v1 + beta * vv) % p)


def _fq_conj(p, beta, z):
    u, v = z
    return ((u + v * beta) % p, -v % p)


def _fq_inv(p, beta, gamma, z):
    zbar = _fq_conj(p, beta, z)
    norm = _fq_mul(p, beta, gamma, z, zbar)
    assert norm[1] == 0
    ninv = pow(norm[0], -1, p)
    return (zbar[0] * ninv % p, zbar[1] * ninv % p)


def _stabilized_conjugate_pair(G: Subgroup):
    """A Galois-conjugate pair of non-rational points of P^1(F_{p^2})
    permuted by G, or None.

    G lies in a conjugate of the standard nonsplit Cartan normalizer
    exactly when such a pair exists: the normalizer is the full stabilizer
    of one pair, and GL2(F_p) moves any pair to any other.
    """
    return _stabilized_conjugate_pair_for_generators(G.p, G.generators)


def _stabilized_conjugate_pair_for_generators(p: int, gen_keys):
    beta, gamma = _quadratic_model(p)
    gens = [unpack(p, g) for g in gen_keys]
    for u in range(p):
        for v in range(1, p):
            z = (u, v)
            zbar = _fq_conj(p, beta, z)
            if zbar < z:
                continue  # each pair once, via its lexicographically least member
            ok = True
            for a, b, c, d in gens:
                # Moebius action on the point coordinate: z -> (c + d z)/(a + b z)
                num = ((c + d * u) % p, d * v % p)
                den = ((a + b * u) % p, b * v % p)
                image = _fq_mul(p, beta, gamma, num, _fq_inv(p, beta, gamma, den))
                if image != z and image != zbar:
                    ok = False
                    break
            if ok:
                return (z, zbar)
    return None


# ---------------------------------------------------------------------------
# vector orbits (generator-based, safe for lazy subgroups)
# ---------------------------------------------------------------------------

def vector_orbit_sizes(G: Subgroup) -> list[int]:
    """Sizes of the orbits of G on F_p^2 minus the origin."""
    return [len(orbit) for orbit in vector_orbits(G)]


def vector_orbits(G: Subgroup) -> list[list[tuple[int, int]]]:
    """Orbits on nonzero vectors, each listed from its lexicographically
    least member, orbits ordered by that representative."""
    p = G.p
    gens = [unpack(p, g) for g in G.generators]
    seen = [False] * (p * p)
    seen[0] = True
    orbits = []
    for start in range(1, p * p):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        frontier = [start]
        while frontier:
            new = []
            for vk in frontier:
                x, y = divmod(vk, p)
                for a, b, c, d in gens:
                    wk = ((a * x + b * y) % p) * p + (c * x + d * y) % p
                    if not seen[wk]:
                        seen[wk] = True
                        orbit.append(wk)
                        new.append(wk)
            frontier = new
        orbits.append([divmod(vk, p) for vk in sorted(orbit)])
    return orbits


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def det_index(G: Subgroup) -> int:
    """(p-1) divided by the size of det(G) — the index of the determinant
    image in F_p^*."""
    return (G.p - 1) // len(G.det_image)


def projective_type(G: Subgroup) -> ProjectiveType:
    p = G.p
    q = G.projective_order
    pgl = p * (p * p - 1)
    psl = pgl // (2 if p > 2 else 1)
    if q == pgl:
        return ProjectiveType.PGL2_FULL
    if G.contains_sl2:
        assert q == psl  # the image sits between PSL2 and PGL2, index 2
        return ProjectiveType.PSL2_FULL
    if q == psl:
        # PSL2 is the unique subgroup of PGL2 of its order
        return ProjectiveType.PSL2_FULL
    return _projective_type_from_elements(G, q)


def _projective_type_from_elements(G: Subgroup, q: int) -> ProjectiveType:
    p = G.p
    elements = G.elements
    orders = {k: projective_order_of(p, k) for k in elements}
    m = max(orders.values())
    if m == q:
        return ProjectiveType.CYCLIC
    if q == 2 * m:
        x = next(k for k, o in orders.items() if o == m)
        powers = {_proj_canonical(p, key_pow(p, x, i)) for i in range(m)}
        for y in elements:
            if orders[y] <= 2 and _proj_canonical(p, y) not in powers:
                t = key_mul(p, key_mul(p, key_mul(p, y, x), key_inv(p, y)), x)
                if key_is_scalar(p, t):
                    return ProjectiveType.DIHEDRAL
    hist = {}
    for k in elements:
        hist[orders[k]] = hist.get(orders[k], 0) + 1
    s = G.scalar_count
    hist = {o: n // s for o, n in hist.items()}
    if q == 12 and 6 not in hist:
        return ProjectiveType.A4
    if q == 24 and 4 in hist and _projective_center_trivial(G):
        # S4 is the only group of order 24 with trivial center
        return ProjectiveType.S4
    if q == 60 and hist == {1: 1, 2: 15, 3: 20, 5: 24}:
        return ProjectiveType.A5
    return ProjectiveType.OTHER


def _proj_canonical(p: int, key: int) -> int:
    """Least packed key among the scalar multiples of a matrix."""
    a, b, c, d = unpack(p, key)
    return min(pack(p, t * a % p, t * b % p, t * c % p, t * d % p)
               for t in range(1, p))


def _projective_center_trivial(G: Subgroup) -> bool:
    p = G.p
    count = 0
    for z in G.elements:
        zi = key_inv(p, z)
        if all(key_is_scalar(p, key_mul(p, key_mul(p, key_mul(p, z, g), zi),
                                        key_inv(p, g)))
               for g in G.generators):
            count += 1
    return count == G.scalar_count


def classify(G: Subgroup) -> DicksonClass:
    """Assign the classification bucket, by fixed precedence.

    Raises UnclassifiableSubgroupError if nothing matches — which cannot
    happen for p >= 5 and indicates a bug if it ever fires.
    """
    if G.contains_sl2:
        return DicksonClass.CONTAINS_SL
    if stabilized_lines(G):
        return DicksonClass.BOREL
    if _stabilized_line_pair(G) is not None:
        return DicksonClass.SPLIT_NORMALIZER
    if _stabilized_conjugate_pair(G) is not None:
        return DicksonClass.NONSPLIT_NORMALIZER
    ptype = projective_type(G)
    if ptype is ProjectiveType.A4:
        return DicksonClass.EXCEPTIONAL_A4
    if ptype is ProjectiveType.S4:
        return DicksonClass.EXCEPTIONAL_S4
    if ptype is ProjectiveType.A5:
        return DicksonClass.EXCEPTIONAL_A5
    raise UnclassifiableSubgroupError(G)


@dataclass(frozen=True)
class SubgroupAnalysis:
    dickson_class: DicksonClass
    det_image_order: int
    det_index: int
    projective_order: int
    projective_type: ProjectiveType


def analyze(G: Subgroup) -> SubgroupAnalysis:
    return SubgroupAnalysis(
        dickson_class=classify(G),
        det_image_order=len(G.det_image),
        det_index=det_index(G),
        projective_order=G.projective_order,
        projective_type=projective_type(G),
    )


def enumerate_subgroups(p, mode="exhaustive", *, count=None, seed=None,
                        ceiling=11, cache_dir=None):
    """Conjugacy-class representatives of subgroups of GL2(F_p).

    Exhaustive mode returns one representative per conjugacy class and is
    limited to p <= ceiling; sampled mode closes `count` random generator
    pairs drawn from a seeded generator and deduplicates them the same
    way.  See the enumeration module for the algorithm.
    """
    from . import _enumeration
    return _enumeration.enumerate_subgroups(
        p, mode, count=count, seed=seed, ceiling=ceiling, cache_dir=cache_dir)
