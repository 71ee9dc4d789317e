import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srlab.errors import RedundantBasis
from srlab.subgroups import (
    SubgroupAutomaton,
    conjugate_subgroup,
    coset_representative,
    from_generators,
    intersect,
    subgroup_equal,
)
from srlab.words import (
    Alphabet,
    Word,
    identity,
    invert,
    iter_reduced_words,
    multiply,
    parse_word,
    power,
    reduce_signed,
    shortlex_key,
)

AB = Alphabet(("a", "b"))
AH = Alphabet(("a", "h"))


def w(text: str, alphabet: Alphabet = AB) -> Word:
    return parse_word(alphabet, text)


def sub(*texts: str, alphabet: Alphabet = AB) -> SubgroupAutomaton:
    return from_generators(alphabet, [w(t, alphabet) for t in texts])


class TestMembership:
    def test_cyclic_powers(self):
        h = sub("a")
        assert h.contains(w("a^5"))
        assert h.contains(w("a^-3"))
        assert not h.contains(w("b"))

    def test_trivial_subgroup(self):
        h = sub()
        assert h.is_trivial
        assert h.contains(identity(AB))
        assert not h.contains(w("a"))

    def test_gap_powers_fill_in(self):
        # a = a^3 * a^-2, so <a^2, a^3> is all of <a>
        h = sub("a^2", "a^3")
        assert h.contains(w("a"))

    def test_conjugated_generator(self):
        h = sub("a b a^-1")
        assert h.contains(w("a b^2 a^-1"))
        assert not h.contains(w("b"))

    def test_proper_finite_index_style(self):
        h = sub("a^2", "b", "a b a^-1")
        assert h.contains(w("a^2"))
        assert h.contains(w("a b a^-1"))
        assert not h.contains(w("a"))


class TestBruteForceOracle:
    def brute_members(self, gens, max_factors, max_len):
        acc = {identity(AB)}
        closure = [g for g in gens] + [invert(g) for g in gens]
        frontier = {identity(AB)}
        for _ in range(max_factors):
            frontier = {
                multiply(u, g)
                for u in frontier
                for g in closure
                if len(multiply(u, g)) <= max_len + 4
            }
            acc |= frontier
        return {u for u in acc if len(u) <= max_len}

    def test_agreement_on_random_subgroups(self):
        import random

        rng = random.Random(7)
        all_words = list(iter_reduced_words(AB, 4))
        for _ in range(12):
            gens = rng.sample(all_words, rng.randint(1, 3))
            h = from_generators(AB, gens)
            members = self.brute_members(gens, 6, 6)
            for u in iter_reduced_words(AB, 6, include_identity=True):
                if u in members:
                    assert h.contains(u), f"{u} missed by automaton for {gens}"

    def test_no_false_positives_small(self):
        gens = [w("a b"), w("b a")]
        h = from_generators(AB, gens)
        members = self.brute_members(gens, 8, 6)
        for u in iter_reduced_words(AB, 4, include_identity=True):
            if h.contains(u):
                assert u in members, f"{u} falsely accepted"


class TestIntersect:
    def test_disjoint_cyclics(self):
        assert intersect(sub("a"), sub("b")).is_trivial

    def test_power_lattice(self):
        h = intersect(sub("a^2"), sub("a^3"))
        assert subgroup_equal(h, sub("a^6"))
        for k in range(-12, 13):
            assert h.contains(power(w("a"), k)) == (k % 6 == 0)

    def test_idempotent(self):
        h = sub("a b", "b a")
        assert subgroup_equal(intersect(h, h), h)

    def test_commutative_membership(self):
        h1, h2 = sub("a", "b a b^-1"), sub("a^2", "b^2")
        left, right = intersect(h1, h2), intersect(h2, h1)
        for u in iter_reduced_words(AB, 5, include_identity=True):
            assert left.contains(u) == right.contains(u)
            assert left.contains(u) == (h1.contains(u) and h2.contains(u))


class TestConjugate:
    def test_identity_conjugator(self):
        assert subgroup_equal(conjugate_subgroup(sub("a"), identity(AB)), sub("a"))

    def test_shift_by_generator(self):
        h = conjugate_subgroup(sub("a"), w("b"))
        assert h.contains(w("b^-1 a^2 b"))
        assert not h.contains(w("a"))

    def test_dagger_instance(self):
        # in F(a, h) with H = <h>: a^-1 H a meets H trivially
        h = sub("h", alphabet=AH)
        conj = conjugate_subgroup(h, w("a", AH))
        assert intersect(conj, h).is_trivial


class TestCosetRepresentative:
    def test_strip_subgroup_prefix(self):
        h = sub("a")
        assert coset_representative(h, w("a^3 b")) == w("b")

    def test_member_maps_to_identity(self):
        h = sub("a")
        assert coset_representative(h, w("a^2")).is_identity

    def test_trivial_subgroup_fixes_everything(self):
        h = sub()
        for u in iter_reduced_words(AB, 3, include_identity=True):
            assert coset_representative(h, u) == u

    def test_coset_invariance_and_membership(self):
        h = sub("a b", "b^-1 a")
        for u in iter_reduced_words(AB, 4, include_identity=True):
            r = coset_representative(h, u)
            assert h.contains(multiply(u, invert(r)))
            for m in [w("a b"), w("b^-1 a"), invert(w("a b"))]:
                assert coset_representative(h, multiply(m, u)) == r

    def test_shortlex_minimality(self):
        # representative must be the shortlex-least coset element
        h = sub("a^2", "b a")
        for u in iter_reduced_words(AB, 3, include_identity=True):
            r = coset_representative(h, u)
            for v in iter_reduced_words(AB, len(r), include_identity=True):
                if h.contains(multiply(v, invert(u))):
                    assert shortlex_key(r) <= shortlex_key(v)


class TestExpression:
    def test_rank_detects_redundancy(self):
        assert sub("a^2", "a^3").rank == 1
        assert sub("a", "b").rank == 2
        assert sub("a b a^-1 b^-1").rank == 1

    def test_express_round_trip(self):
        gens = [w("a^2"), w("b a")]
        h = from_generators(AB, gens)
        for u in [w("a^2"), w("b a"), multiply(w("a^2"), w("b a")), identity(AB)]:
            expr = h.express(u)
            assert expr is not None
            out = identity(AB)
            for e in expr:
                piece = gens[abs(e) - 1]
                out = multiply(out, piece if e > 0 else invert(piece))
            assert out == u

    def test_express_rejects_non_member(self):
        h = sub("a^2")
        assert h.express(w("a")) is None

    def test_redundant_basis_raises(self):
        h = sub("a^2", "a^3")
        with pytest.raises(RedundantBasis):
            h.express(w("a"))

    def test_scrambled_basis(self):
        # a valid but non-obvious basis of F(a, b)
        gens = [w("a b"), w("b")]
        h = from_generators(AB, gens)
        for u in iter_reduced_words(AB, 4, include_identity=True):
            expr = h.express(u)
            assert expr is not None
            out = identity(AB)
            for e in expr:
                piece = gens[abs(e) - 1]
                out = multiply(out, piece if e > 0 else invert(piece))
            assert out == u


class TestSerialization:
    def test_round_trip(self):
        h = sub("a b", "b a")
        h2 = SubgroupAutomaton.from_json(h.to_json())
        assert h2.delta == h.delta
        assert subgroup_equal(h, h2)


@st.composite
def subgroup_st(draw):
    texts = st.sampled_from(
        ["a", "b", "a b", "b a", "a^2", "b^2", "a b^-1", "a^2 b", "b a b^-1"]
    )
    gens = draw(st.lists(texts, min_size=1, max_size=3))
    return from_generators(AB, [w(t) for t in gens])


@settings(max_examples=60, deadline=None)
@given(subgroup_st(), subgroup_st())
def test_intersection_soundness(h1, h2):
    both = intersect(h1, h2)
    for u in itertools.islice(iter_reduced_words(AB, 4, include_identity=True), 60):
        assert both.contains(u) == (h1.contains(u) and h2.contains(u))


@settings(max_examples=60, deadline=None)
@given(subgroup_st())
def test_automaton_basis_generates(h):
    basis = h.automaton_basis()
    assert len(basis) == h.rank
    for b in basis:
        assert h.contains(b)
    regrown = from_generators(AB, basis)
    assert subgroup_equal(regrown, h)


def test_folded_invariant():
    for h in [sub("a b", "a b^-1"), sub("a", "b a b^-1"), sub("a b a^-1 b^-1")]:
        for state, trans in enumerate(h.delta):
            assert len(set(trans.keys())) == len(trans)
            for letter, t in trans.items():
                assert h.delta[t][-letter] == state
