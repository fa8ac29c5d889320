import random

import pytest
from hypothesis import assume, given, strategies as st

from torsiondeg import gl2
from torsiondeg.gl2 import (
    DicksonClass,
    Line,
    Mat2,
    MaterializationError,
    ProjectiveType,
    Subgroup,
    all_lines,
    analyze,
    borel,
    classify,
    close_generators,
    det_index,
    gl2_full,
    key_det,
    key_inv,
    key_mul,
    key_pow,
    nonsplit_cartan,
    nonsplit_normalizer,
    pack,
    pointwise_fixed_lines,
    projective_order_of,
    projective_type,
    sl2,
    split_cartan,
    split_normalizer,
    stabilized_lines,
    standard_subgroups,
    unpack,
    vector_orbit_sizes,
)

from conftest import (
    A4_HIST,
    A5_HIST,
    S4_HIST,
    find_projective_subgroup,
    projective_order_histogram,
)


# ---------------------------------------------------------------------------
# packed arithmetic
# ---------------------------------------------------------------------------

def mat_mul_naive(p, m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return (((a * e + b * g) % p, (a * f + b * h) % p),
            ((c * e + d * g) % p, (c * f + d * h) % p))


@given(st.sampled_from((2, 3, 5, 7, 13)), st.integers(0, 13 ** 4 - 1),
       st.integers(0, 13 ** 4 - 1))
def test_key_mul_matches_naive(p, r1, r2):
    k1, k2 = r1 % p ** 4, r2 % p ** 4
    assume(key_det(p, k1) and key_det(p, k2))
    a, b, c, d = unpack(p, k1)
    e, f, g, h = unpack(p, k2)
    k = key_mul(p, k1, k2)
    (ra, rb), (rc, rd) = mat_mul_naive(p, ((a, b), (c, d)), ((e, f), (g, h)))
    assert unpack(p, k) == (ra, rb, rc, rd)


@given(st.sampled_from((2, 3, 5, 7, 13)), st.integers(0, 13 ** 4 - 1))
def test_key_inv_and_pow(p, r):
    k = r % p ** 4
    assume(key_det(p, k))
    identity = pack(p, 1, 0, 0, 1)
    assert key_mul(p, k, key_inv(p, k)) == identity
    assert key_pow(p, k, 0) == identity
    assert key_pow(p, k, 3) == key_mul(p, key_mul(p, k, k), k)
    assert key_pow(p, k, -1) == key_inv(p, k)
    assert key_det(p, key_mul(p, k, k)) == key_det(p, k) ** 2 % p


def test_projective_order_of_hand_values():
    # unipotent: [[1,1],[0,1]]^k = [[1,k],[0,1]], scalar iff k = 0 mod p
    assert projective_order_of(5, pack(5, 1, 1, 0, 1)) == 5
    # diag(2,1) mod 5: scalar iff 2^k = 1, so order 4
    assert projective_order_of(5, pack(5, 2, 0, 0, 1)) == 4
    assert projective_order_of(5, pack(5, 2, 0, 0, 2)) == 1
    assert projective_order_of(7, pack(7, 0, 1, 6, 0)) == 2


class TestMat2:
    def test_column_action(self):
        # the antidiagonal [[0,2],[3,0]] fixes (2,1) pointwise mod 5
        m = Mat2.of(5, 0, 2, 3, 0)
        assert m.apply((2, 1)) == (2, 1)
        assert m.apply((1, 0)) == (0, 3)

    def test_validation(self):
        with pytest.raises(ValueError):
            Mat2(4, 1, 0, 0, 1)  # composite modulus
        with pytest.raises(ValueError):
            Mat2(5, 1, 2, 2, 4)  # singular
        with pytest.raises(ValueError):
            Mat2(5, 6, 0, 0, 1)  # not reduced

    def test_arithmetic(self):
        m = Mat2.of(7, 1, 2, 3, 4)
        assert (m * m.inverse()).is_scalar()
        assert (m ** 3).key == key_pow(7, m.key, 3)
        assert m.det == (1 * 4 - 2 * 3) % 7
        assert m.trace == 5


class TestLine:
    def test_there_are_p_plus_one_lines(self):
        for p in (2, 3, 5, 11):
            lines = all_lines(p)
            assert len(lines) == p + 1
            assert len(set(lines)) == p + 1

    def test_through_normalizes(self):
        assert Line.through(5, 2, 4) == Line(5, 1, 2)
        assert Line.through(5, 0, 3) == Line(5, 0, 1)
        assert Line.through(7, 3, 3) == Line(7, 1, 1)
        with pytest.raises(ValueError):
            Line.through(5, 0, 0)

    def test_every_nonzero_vector_lies_on_its_line(self):
        p = 7
        for x in range(p):
            for y in range(p):
                if (x, y) == (0, 0):
                    continue
                line = Line.through(p, x, y)
                assert (x, y) in line.vectors()


# ---------------------------------------------------------------------------
# closure
# ---------------------------------------------------------------------------

class TestCloseGenerators:
    def test_empty_is_trivial(self):
        for p in (2, 5, 13):
            assert close_generators(p, []).order == 1

    def test_involution(self):
        G = close_generators(3, [((0, 1), (1, 0))])
        assert G.order == 2

    def test_unipotents_generate_sl2(self):
        G = close_generators(5, [((1, 1), (0, 1)), ((1, 0), (1, 1))])
        assert G.order == 120  # p(p^2-1)
        assert G.contains_sl2

    def test_rejects_singular_generator(self):
        with pytest.raises(ValueError, match="singular"):
            close_generators(5, [((1, 2), (2, 4))])

    def test_rejects_modulus_mismatch(self):
        with pytest.raises(ValueError):
            close_generators(5, [Mat2.of(7, 1, 1, 0, 1)])

    def test_closure_is_a_group(self):
        rng = random.Random(7)
        for p in (3, 5):
            keys = []
            while len(keys) < 2:
                k = rng.randrange(p ** 4)
                if key_det(p, k):
                    keys.append(k)
            G = close_generators(p, keys)
            elems = set(G.elements)
            sample = list(elems)[:25]
            for x in sample:
                assert key_inv(p, x) in elems
                for y in sample:
                    assert key_mul(p, x, y) in elems


# ---------------------------------------------------------------------------
# standard subgroups
# ---------------------------------------------------------------------------

class TestStandardSubgroups:
    def test_orders_match_closed_forms(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
            std = standard_subgroups(p)
            assert std["split_cartan"].order == (p - 1) ** 2
            assert std["split_normalizer"].order == 2 * (p - 1) ** 2
            assert std["nonsplit_cartan"].order == p * p - 1
            assert std["nonsplit_normalizer"].order == 2 * (p * p - 1)
            assert std["borel"].order == p * (p - 1) ** 2
            assert std["sl2"].order == p * (p * p - 1)

    def test_frozen_example_orders(self):
        assert split_normalizer(5).order == 32
        assert nonsplit_normalizer(5).order == 48
        assert sl2(7).order == 336

    def test_generators_recover_the_group(self):
        for p in (3, 5, 7):
            for name, G in standard_subgroups(p).items():
                reclosed = close_generators(p, list(G.generators))
                assert reclosed.order == G.order, name
                assert reclosed.elements == G.elements, name

    def test_nonsplit_cartan_is_cyclic(self):
        for p in (3, 5, 7, 11):
            C = nonsplit_cartan(p)
            assert len(C.generators) == 1
            g = C.generators[0]
            assert len({key_pow(p, g, i) for i in range(p * p - 1)}) == C.order

    def test_cartan_constructors_reject_p2(self):
        for fn in (split_cartan, split_normalizer, nonsplit_cartan,
                   nonsplit_normalizer):
            with pytest.raises(ValueError):
                fn(2)
        with pytest.raises(ValueError):
            standard_subgroups(2)

    def test_p2_borel_and_sl2(self):
        assert borel(2).order == 2
        assert sl2(2).order == 6
        assert gl2_full(2).order == 6

    def test_gl2_full_order(self):
        for p in (2, 3, 5, 7):
            assert gl2_full(p).order == (p * p - 1) * (p * p - p)

    def test_scalars_are_central(self):
        for p in (3, 5, 7):
            for G in standard_subgroups(p).values():
                scalars = [k for k in G.elements if gl2.key_is_scalar(p, k)]
                for z in scalars:
                    for g in G.generators:
                        assert key_mul(p, z, g) == key_mul(p, g, z)


# ---------------------------------------------------------------------------
# lines under subgroups
# ---------------------------------------------------------------------------

class TestLineActions:
    def test_trivial_group_stabilizes_everything(self):
        G = close_generators(5, [])
        assert stabilized_lines(G) == set(all_lines(5))
        assert pointwise_fixed_lines(G) == set(all_lines(5))

    def test_split_cartan_stabilizes_the_axes(self):
        G = split_cartan(5)
        assert stabilized_lines(G) == {Line(5, 1, 0), Line(5, 0, 1)}
        assert pointwise_fixed_lines(G) == set()

    def test_sl2_stabilizes_nothing(self):
        G = sl2(5)
        assert stabilized_lines(G) == set()
        assert pointwise_fixed_lines(G) == set()

    def test_stabilized_lines_agree_with_full_element_check(self):
        # generator-based containment equals the elementwise definition
        rng = random.Random(3)
        p = 5
        for _ in range(20):
            keys = []
            while len(keys) < 2:
                k = rng.randrange(p ** 4)
                if key_det(p, k):
                    keys.append(k)
            G = close_generators(p, keys)
            perms = [gl2.line_permutation(p, k) for k in G.elements]
            by_elements = {i for i in range(p + 1)
                           if all(perm[i] == i for perm in perms)}
            assert {l.index for l in stabilized_lines(G)} == by_elements


# ---------------------------------------------------------------------------
# vector orbits
# ---------------------------------------------------------------------------

class TestVectorOrbits:
    def test_split_cartan_orbit_sizes(self):
        assert sorted(vector_orbit_sizes(split_cartan(5))) == [4, 4, 16]

    def test_full_group_is_transitive(self):
        assert vector_orbit_sizes(gl2_full(5)) == [24]

    def test_trivial_group(self):
        assert vector_orbit_sizes(close_generators(5, [])) == [1] * 24

    def test_orbits_partition_nonzero_vectors(self):
        for p in (3, 5, 7):
            for G in standard_subgroups(p).values():
                sizes = vector_orbit_sizes(G)
                assert sum(sizes) == p * p - 1
                for s in sizes:
                    assert G.order % s == 0  # orbit-stabilizer

    def test_lazy_subgroup_orbits(self):
        G = Subgroup.sl2_preimage(97, frozenset(range(1, 97)),
                                  [pack(97, 1, 1, 0, 1), pack(97, 1, 0, 1, 1),
                                   pack(97, 5, 0, 0, 1)])
        assert vector_orbit_sizes(G) == [97 * 97 - 1]


# ---------------------------------------------------------------------------
# lazy subgroups
# ---------------------------------------------------------------------------

class TestLazySubgroups:
    def big(self):
        p = 97
        dets = frozenset(pow(5, i, p) for i in range(96))
        assert len(dets) == 96  # 5 generates mod 97
        return Subgroup.sl2_preimage(
            p, dets, [pack(p, 1, 1, 0, 1), pack(p, 1, 0, 1, 1),
                      pack(p, 5, 0, 0, 1)])

    def test_order_without_materializing(self):
        G = self.big()
        assert G.order == 97 * (97 ** 2 - 1) * 96
        assert not G.is_materialized

    def test_materialization_refused(self):
        with pytest.raises(MaterializationError):
            _ = self.big().elements

    def test_membership_via_determinant(self):
        G = self.big()
        assert pack(97, 1, 5, 9, 46) in G or key_det(97, pack(97, 1, 5, 9, 46)) not in G.det_image
        assert pack(97, 1, 1, 0, 1) in G

    def test_scalar_count_and_projective_order(self):
        G = self.big()
        # all 96 scalars have square determinants, all squares are dets here
        assert G.scalar_count == 96
        assert G.projective_order == 97 * (97 ** 2 - 1)

    def test_classify_without_materializing(self):
        G = self.big()
        assert classify(G) is DicksonClass.CONTAINS_SL
        assert projective_type(G) is ProjectiveType.PGL2_FULL
        assert not G.is_materialized

    def test_small_preimage_materializes_consistently(self):
        p = 7
        G = Subgroup.sl2_preimage(p, frozenset({1, 2, 4}),
                                  [pack(p, 1, 1, 0, 1), pack(p, 1, 0, 1, 1),
                                   pack(p, 2, 0, 0, 1)])
        assert G.order == 7 * 48 * 3
        elems = G.elements
        assert len(elems) == G.order
        assert all(key_det(p, k) in {1, 2, 4} for k in elems)
        # agrees with an honest closure of the same generators
        H = close_generators(p, list(G.generators))
        assert H.elements == elems


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

class TestClassify:
    def test_contains_sl(self):
        assert classify(sl2(5)) is DicksonClass.CONTAINS_SL
        assert classify(gl2_full(7)) is DicksonClass.CONTAINS_SL
        assert classify(sl2(2)) is DicksonClass.CONTAINS_SL

    def test_borel_cases(self):
        assert classify(split_cartan(7)) is DicksonClass.BOREL
        assert classify(borel(5)) is DicksonClass.BOREL
        assert classify(close_generators(5, [])) is DicksonClass.BOREL
        # scalars alone fix every line
        assert classify(close_generators(5, [((2, 0), (0, 2))])) is DicksonClass.BOREL

    def test_split_normalizer_cases(self):
        assert classify(split_normalizer(5)) is DicksonClass.SPLIT_NORMALIZER
        assert classify(split_normalizer(11)) is DicksonClass.SPLIT_NORMALIZER

    def test_nonsplit_cases(self):
        assert classify(nonsplit_normalizer(5)) is DicksonClass.NONSPLIT_NORMALIZER
        assert classify(nonsplit_cartan(7)) is DicksonClass.NONSPLIT_NORMALIZER
        assert classify(nonsplit_normalizer(11)) is DicksonClass.NONSPLIT_NORMALIZER

    def test_p2_subgroups_classify(self):
        # GL2(F_2) is S3 on the three lines: the order-3 element acts with
        # no fixed line and no fixed pair, but fixes a conjugate pair
        C3 = close_generators(2, [((0, 1), (1, 1))])
        assert C3.order == 3
        assert classify(C3) is DicksonClass.NONSPLIT_NORMALIZER
        C2 = close_generators(2, [((0, 1), (1, 0))])
        assert classify(C2) is DicksonClass.BOREL

    def test_classification_is_conjugation_invariant(self):
        rng = random.Random(11)
        p = 7
        groups = [split_cartan(p), split_normalizer(p), nonsplit_cartan(p),
                  nonsplit_normalizer(p), borel(p), sl2(p)]
        for G in groups:
            want = classify(G)
            want_i = det_index(G)
            for _ in range(10):
                while True:
                    h = rng.randrange(p ** 4)
                    if key_det(p, h):
                        break
                Gc = G.conjugate(h)
                assert classify(Gc) is want
                assert det_index(Gc) == want_i
                assert Gc.fingerprint() == G.fingerprint()


class TestExceptional:
    def test_a4_preimage_in_gl2_f5(self):
        G = find_projective_subgroup(5, sl2(5).elements, A4_HIST, seed=1)
        assert projective_type(G) is ProjectiveType.A4
        assert classify(G) is DicksonClass.EXCEPTIONAL_A4

    def test_s4_preimage_in_gl2_f7(self):
        G = find_projective_subgroup(7, gl2_full(7).elements, S4_HIST, seed=1)
        assert projective_type(G) is ProjectiveType.S4
        assert classify(G) is DicksonClass.EXCEPTIONAL_S4

    def test_a5_preimage_in_sl2_f11(self):
        G = find_projective_subgroup(11, sl2(11).elements, A5_HIST, seed=1)
        assert projective_type(G) is ProjectiveType.A5
        assert classify(G) is DicksonClass.EXCEPTIONAL_A5


class TestDetIndex:
    def test_frozen_values(self):
        assert det_index(gl2_full(5)) == 1
        assert det_index(sl2(5)) == 4
        assert det_index(sl2(11)) == 10
        assert det_index(split_cartan(5)) == 1

    def test_divides_p_minus_1(self):
        for p in (5, 7, 11):
            for G in standard_subgroups(p).values():
                i = det_index(G)
                assert (p - 1) % (i * len(G.det_image)) == 0 or \
                    i * len(G.det_image) == p - 1


class TestProjectiveType:
    def test_full_groups(self):
        assert projective_type(gl2_full(5)) is ProjectiveType.PGL2_FULL
        assert projective_type(sl2(5)) is ProjectiveType.PSL2_FULL
        assert projective_type(sl2(7)) is ProjectiveType.PSL2_FULL
        assert projective_type(gl2_full(2)) is ProjectiveType.PGL2_FULL

    def test_nonsplit_normalizer_f7_is_dihedral_16(self):
        G = nonsplit_normalizer(7)
        assert G.projective_order == 16
        assert projective_type(G) is ProjectiveType.DIHEDRAL

    def test_cartans_are_cyclic(self):
        for p in (5, 7, 11):
            assert projective_type(split_cartan(p)) is ProjectiveType.CYCLIC
            assert projective_type(nonsplit_cartan(p)) is ProjectiveType.CYCLIC

    def test_normalizers_are_dihedral(self):
        for p in (5, 7, 11):
            assert projective_type(split_normalizer(p)) is ProjectiveType.DIHEDRAL
            assert projective_type(nonsplit_normalizer(p)) is ProjectiveType.DIHEDRAL

    def test_v4_counts_as_dihedral(self):
        G = close_generators(5, [((1, 0), (0, 4)), ((0, 1), (1, 0))])
        assert G.projective_order == 4
        assert projective_type(G) is ProjectiveType.DIHEDRAL

    def test_unipotent_line_is_cyclic(self):
        G = close_generators(7, [((1, 1), (0, 1))])
        assert projective_type(G) is ProjectiveType.CYCLIC

    def test_borel_is_other(self):
        assert projective_type(borel(7)) is ProjectiveType.OTHER


class TestAnalyze:
    def test_analysis_fields_are_consistent(self):
        for p in (5, 7):
            for G in standard_subgroups(p).values():
                a = analyze(G)
                assert a.det_image_order * a.det_index == p - 1
                assert a.projective_order * G.scalar_count == G.order
                assert a.dickson_class is classify(G)

    def test_lagrange(self):
        rng = random.Random(5)
        for p in (3, 5, 7):
            full = (p * p - 1) * (p * p - p)
            for _ in range(15):
                keys = []
                while len(keys) < 2:
                    k = rng.randrange(p ** 4)
                    if key_det(p, k):
                        keys.append(k)
                G = close_generators(p, keys)
                assert full % G.order == 0


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------

class TestFingerprint:
    def test_distinguishes_standard_subgroups(self):
        for p in (5, 7, 11):
            prints = {name: G.fingerprint_id()
                      for name, G in standard_subgroups(p).items()}
            assert len(set(prints.values())) == len(prints)

    def test_stable_under_conjugation(self):
        p = 5
        G = split_normalizer(p)
        for h in (pack(p, 1, 2, 0, 1), pack(p, 2, 1, 1, 1)):
            assert G.conjugate(h).fingerprint_id() == G.fingerprint_id()

    def test_lazy_and_materialized_agree(self):
        p = 5
        lazy = Subgroup.sl2_preimage(p, frozenset({1, 4}),
                                     [pack(p, 1, 1, 0, 1), pack(p, 1, 0, 1, 1),
                                      pack(p, 4, 0, 0, 1)])
        honest = close_generators(p, list(lazy.generators))
        assert honest.order == lazy.order
        assert honest.fingerprint() == lazy.fingerprint()
