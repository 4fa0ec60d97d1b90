import random

import pytest

from rootres import catalog
from rootres.amalgam import (
    NormalForm,
    Syllable,
    as_word,
    build_scheme,
    copy_automorphism,
    eval_hom_family,
    invert_word,
    multiply_words,
    power_quotient,
    power_scheme,
    reduce_word,
    words_equal,
)
from rootres.perms import Perm, Subgroup, hom


def cyc(degree, *cycles):
    return Perm.from_cycles(degree, cycles)


@pytest.fixture(scope="module")
def s3_square():
    return power_scheme(catalog.group("S3"), catalog.subgroup("S3", "A3"), 2)


@pytest.fixture(scope="module")
def c4_cube():
    return power_scheme(catalog.group("C4"), catalog.subgroup("C4", "C2"), 3)


def random_word(scheme, rng, max_len=5):
    n = rng.randrange(max_len + 1)
    out = []
    for _ in range(n):
        lam = rng.randrange(scheme.copies)
        elt = rng.choice(scheme.factors[lam].sorted_elements)
        out.append(Syllable(lam, elt))
    return tuple(out)


def perturb(scheme, word, rng):
    """Rewrite a word by one defining relation, preserving its value."""
    word = list(word)
    move = rng.randrange(3)
    H = scheme.subgroups[0]
    if move == 0:
        lam = rng.randrange(scheme.copies)
        word.insert(rng.randrange(len(word) + 1), Syllable(lam, scheme.factors[lam].identity))
    elif move == 1:
        h = rng.choice(H.sorted_elements)
        lam = rng.randrange(scheme.copies)
        mu = rng.randrange(scheme.copies)
        pos = rng.randrange(len(word) + 1)
        word.insert(pos, Syllable(mu, scheme.transport(h.inverse(), 0, mu)))
        word.insert(pos, Syllable(lam, scheme.transport(h, 0, lam)))
    elif word:
        i = rng.randrange(len(word))
        lam, elt = word[i]
        x = rng.choice(scheme.factors[lam].sorted_elements)
        word[i : i + 1] = [Syllable(lam, elt * x.inverse()), Syllable(lam, x)]
    return tuple(word)


class TestBuildScheme:
    def test_power_of_s3(self, s3_square):
        assert s3_square.is_power and s3_square.copies == 2
        assert s3_square.transversals[0] == (Perm.identity(3), cyc(3, (2, 3)))

    def test_power_of_c4(self, c4_cube):
        assert c4_cube.is_power and c4_cube.copies == 3

    def test_rejects_incoherent_isos(self):
        C4 = catalog.group("C4")
        H = Subgroup(C4, C4.generators)  # amalgamate the whole cyclic group
        r = C4.generators[0]
        inversion = hom(C4, C4, [r.inverse()])
        identity = hom(C4, C4, [r])
        with pytest.raises(ValueError, match="incoherent"):
            build_scheme(
                (C4, C4, C4),
                (H, H, H),
                {(0, 1): inversion, (0, 2): identity, (1, 2): identity},
            )

    def test_rejects_subgroup_outside_factor(self):
        S3, C4 = catalog.group("S3"), catalog.group("C4")
        with pytest.raises(ValueError):
            build_scheme((S3, C4), (catalog.subgroup("S3", "A3"),) * 2)

    def test_nonidentity_isos_accepted_when_coherent(self):
        C4 = catalog.group("C4")
        H = Subgroup(C4, C4.generators)
        r = C4.generators[0]
        inversion = hom(C4, C4, [r.inverse()])
        scheme = build_scheme((C4, C4), (H, H), {(0, 1): inversion})
        assert not scheme.is_power
        assert scheme.transport(r, 0, 1) == r.inverse()


class TestReduce:
    def test_two_transpositions(self, s3_square):
        nf = reduce_word(s3_square, [(0, cyc(3, (1, 2))), (1, cyc(3, (1, 3)))])
        assert nf.length == 2
        assert all(s.elt not in s3_square.subgroups[0].elements for s in nf.tail)

    def test_self_cancellation(self, s3_square):
        t = cyc(3, (1, 2))
        nf = reduce_word(s3_square, [(0, t), (0, t)])
        assert nf.length == 0 and nf.head.is_identity()

    def test_subgroup_product_cancels_across_copies(self, s3_square):
        nf = reduce_word(s3_square, [(0, cyc(3, (1, 2, 3))), (1, cyc(3, (1, 3, 2)))])
        assert nf.length == 0 and nf.head.is_identity()

    def test_idempotent_on_random_words(self, s3_square, c4_cube):
        rng = random.Random(7)
        for scheme in (s3_square, c4_cube):
            for _ in range(120):
                nf = reduce_word(scheme, random_word(scheme, rng))
                assert reduce_word(scheme, nf.as_word()) == nf

    def test_invariant_under_relations(self, s3_square, c4_cube):
        rng = random.Random(11)
        for scheme in (s3_square, c4_cube):
            for _ in range(120):
                word = random_word(scheme, rng)
                nf = reduce_word(scheme, word)
                perturbed = word
                for _ in range(rng.randrange(1, 4)):
                    perturbed = perturb(scheme, perturbed, rng)
                assert reduce_word(scheme, perturbed) == nf

    def test_rejects_foreign_elements(self, s3_square):
        with pytest.raises(ValueError):
            reduce_word(s3_square, [(0, cyc(4, (1, 2)))])
        with pytest.raises(ValueError):
            reduce_word(s3_square, [(2, cyc(3, (1, 2)))])


class TestEqual:
    def test_spurious_identity_syllable(self, s3_square):
        w = as_word([(0, cyc(3, (1, 2))), (1, cyc(3, (1, 3)))])
        padded = (w[0], Syllable(1, Perm.identity(3)), w[1])
        assert words_equal(s3_square, w, padded)

    def test_amalgamation_identifies_subgroup_copies(self, s3_square):
        h = cyc(3, (1, 2, 3))
        assert words_equal(s3_square, [(0, h)], [(1, h)])

    def test_distinct_copies_of_outside_element_differ(self, s3_square):
        t = cyc(3, (1, 2))
        assert not words_equal(s3_square, [(0, t)], [(1, t)])

    def test_factor_embedding(self, s3_square):
        G = s3_square.factors[0]
        for a in G.sorted_elements:
            for b in G.sorted_elements:
                if a != b:
                    assert not words_equal(s3_square, [(0, a)], [(0, b)])

    def test_factor_intersection_is_the_subgroup(self, s3_square):
        G = s3_square.factors[0]
        H = s3_square.subgroups[0]
        for a in G.sorted_elements:
            matches = [b for b in G.sorted_elements if words_equal(s3_square, [(0, a)], [(1, b)])]
            if a in H.elements:
                assert matches == [a]
            else:
                assert matches == []


class TestGroupOperations:
    def test_multiply_by_identity_word(self, s3_square):
        w = as_word([(0, cyc(3, (1, 2))), (1, cyc(3, (1, 3)))])
        assert multiply_words(s3_square, w, ()) == reduce_word(s3_square, w)

    def test_inverse_reverses_and_inverts(self, s3_square):
        a, b = cyc(3, (1, 2)), cyc(3, (1, 3))
        w = as_word([(0, a), (1, b)])
        expected = reduce_word(s3_square, [(1, b.inverse()), (0, a.inverse())])
        assert invert_word(s3_square, w) == expected

    def test_product_with_inverse_is_identity(self, s3_square, c4_cube):
        rng = random.Random(23)
        for scheme in (s3_square, c4_cube):
            for _ in range(60):
                w = random_word(scheme, rng)
                assert multiply_words(scheme, w, invert_word(scheme, w).as_word()).is_identity()

    def test_two_outside_syllables_give_length_two(self, s3_square):
        t = cyc(3, (1, 2))
        nf = multiply_words(s3_square, [(0, t)], [(1, t)])
        assert nf.length == 2


class TestCopyAutomorphism:
    def test_relabels(self, s3_square):
        w = as_word([(0, cyc(3, (1, 2))), (1, cyc(3, (1, 3)))])
        assert copy_automorphism(s3_square, (1, 0), w) == as_word(
            [(1, cyc(3, (1, 2))), (0, cyc(3, (1, 3)))]
        )

    def test_involution(self, s3_square):
        rng = random.Random(5)
        for _ in range(40):
            w = random_word(s3_square, rng)
            assert copy_automorphism(s3_square, (1, 0), copy_automorphism(s3_square, (1, 0), w)) == w

    def test_fixes_subgroup_words(self, s3_square):
        h = cyc(3, (1, 2, 3))
        w = as_word([(0, h)])
        assert words_equal(s3_square, copy_automorphism(s3_square, (1, 0), w), w)

    def test_commutes_with_reduction(self, s3_square, c4_cube):
        rng = random.Random(31)
        for scheme, pi in ((s3_square, (1, 0)), (c4_cube, (2, 0, 1))):
            for _ in range(60):
                w = random_word(scheme, rng)
                nf = reduce_word(scheme, w)
                relabeled = NormalForm(nf.head, tuple(Syllable(pi[s.copy], s.elt) for s in nf.tail))
                assert reduce_word(scheme, copy_automorphism(scheme, pi, w)) == relabeled

    def test_requires_power(self):
        C4 = catalog.group("C4")
        H = Subgroup(C4, C4.generators)
        r = C4.generators[0]
        scheme = build_scheme((C4, C4), (H, H), {(0, 1): hom(C4, C4, [r.inverse()])})
        with pytest.raises(ValueError):
            copy_automorphism(scheme, (1, 0), ())


class TestPowerQuotient:
    def test_collapse_to_c2_star_c2(self, s3_square):
        qscheme, word_map = power_quotient(s3_square, catalog.subgroup("S3", "A3"))
        assert qscheme.factors[0].order == 2
        assert qscheme.subgroups[0].order == 1
        image = reduce_word(
            qscheme, word_map([(0, cyc(3, (1, 2))), (1, cyc(3, (1, 3)))])
        )
        assert image.length == 2

    def test_trivial_kernel_preserves_forms(self, s3_square):
        qscheme, word_map = power_quotient(s3_square, catalog.subgroup("S3", "trivial"))
        assert qscheme.factors[0].order == 6
        rng = random.Random(3)
        for _ in range(40):
            w = random_word(s3_square, rng)
            assert reduce_word(qscheme, word_map(w)).length == reduce_word(s3_square, w).length

    def test_functorial_on_products(self, s3_square):
        qscheme, word_map = power_quotient(s3_square, catalog.subgroup("S3", "A3"))
        rng = random.Random(17)
        for _ in range(60):
            w1, w2 = random_word(s3_square, rng), random_word(s3_square, rng)
            lhs = reduce_word(qscheme, word_map(multiply_words(s3_square, w1, w2).as_word()))
            rhs = multiply_words(qscheme, word_map(w1), word_map(w2))
            assert lhs == rhs

    def test_rejects_non_normal_kernel(self, s3_square):
        with pytest.raises(ValueError):
            power_quotient(s3_square, catalog.subgroup("S3", "C2"))


class TestEvalHomFamily:
    @pytest.fixture(scope="class")
    def sign(self):
        return hom(catalog.group("S3"), catalog.group("C2"), [Perm.identity(2), cyc(2, (1, 2))])

    @pytest.fixture(scope="class")
    def trivial(self):
        return hom(catalog.group("S3"), catalog.group("C2"), [Perm.identity(2)] * 2)

    def test_sign_on_both_copies(self, s3_square, sign):
        value = eval_hom_family(
            s3_square, [sign, sign], [(0, cyc(3, (1, 2))), (1, cyc(3, (1, 3)))]
        )
        assert value.is_identity()

    def test_mixed_family_agreeing_on_subgroup(self, s3_square, sign, trivial):
        assert eval_hom_family(s3_square, [sign, trivial], [(0, cyc(3, (1, 2)))]) == cyc(2, (1, 2))
        assert eval_hom_family(s3_square, [sign, trivial], [(1, cyc(3, (1, 2)))]).is_identity()

    def test_identity_word(self, s3_square, sign):
        assert eval_hom_family(s3_square, [sign, sign], ()).is_identity()

    def test_disagreement_reported_with_witness(self, sign, trivial):
        square_over_c2 = power_scheme(catalog.group("S3"), catalog.subgroup("S3", "C2"), 2)
        with pytest.raises(ValueError, match="agree"):
            eval_hom_family(square_over_c2, [sign, trivial], ())

    def test_respects_equality(self, s3_square, sign, trivial):
        rng = random.Random(41)
        for _ in range(60):
            w = random_word(s3_square, rng)
            perturbed = perturb(s3_square, w, rng)
            assert eval_hom_family(s3_square, [sign, trivial], w) == eval_hom_family(
                s3_square, [sign, trivial], perturbed
            )
