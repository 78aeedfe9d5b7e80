import random

import pytest

from errors import NotFiniteWithinBound, OracleMismatch, UnknownGenerator
from group_oracle import (
    FreeOracle,
    GroupRingElement,
    InfiniteCyclicOracle,
    MappingTorusOracle,
    RewritingOracle,
    build_finite_oracle,
    coset_enumeration,
    invert_automorphism,
    norm_element,
    ring_apply,
)
from presentation import parse_presentation
from words import Generator, Word, format_word

a, b, z = Generator("a"), Generator("b"), Generator("z")


@pytest.fixture
def s3():
    return build_finite_oracle(parse_presentation("gp< a, b | a^2, b^3, (a*b)^2 >"))


@pytest.fixture
def c3():
    return coset_enumeration([a], [Word.of(a, 3)], 10)


@pytest.mark.parametrize(
    "text, order",
    [
        ("gp< a, b | a^2, b^3, (a*b)^2 >", 6),
        ("gp< a, b | a^2, b^2, a^-1*b^-1*a*b >", 4),
        ("gp< a, b | a^2, b^3, (a*b)^4 >", 24),
        ("gp< t | t^2 >", 2),
        ("gp< a | a >", 1),
    ],
)
def test_coset_enumeration_orders(text, order):
    assert build_finite_oracle(parse_presentation(text)).order == order


def test_infinite_group_exceeds_bound(trefoil):
    with pytest.raises(NotFiniteWithinBound):
        build_finite_oracle(trefoil, 20)


def test_finite_normal_forms(s3):
    a3, b3 = s3.generators["a"], s3.generators["b"]
    assert s3.normalize(Word.of(a3, 2)).is_identity()
    assert s3.equal(Word.of(b3, -1), Word.of(b3, 2))
    assert s3.elements()[0].is_identity()
    assert len(set(s3.elements())) == 6
    # normal forms are shortlex over positive letters
    assert all(e > 0 for w in s3.elements() for _, e in w.letters)


def test_finite_multiplication_table(s3):
    for i in range(s3.order):
        assert s3.product_index(i, s3.inverse_index(i)) == 0
        assert s3.product_index(0, i) == i


def test_finite_rejects_foreign_generators(c3):
    with pytest.raises(UnknownGenerator):
        c3.normalize(Word.of(b))


def test_infinite_cyclic_normal_form():
    o = InfiniteCyclicOracle(a)
    w = Word.of(a) * Word.of(a, -1) * Word.of(a, 3)
    assert o.normalize(w) == Word.of(a, 3)
    assert not o.is_finite()


def test_free_oracle_is_free_reduction():
    o = FreeOracle([a, b])
    w = Word.of(a) * Word.of(b)
    assert o.normalize(w) == w
    with pytest.raises(NotFiniteWithinBound):
        o.elements()


def test_rewriting_oracle_is_sound_on_trefoil(trefoil):
    a_, b_ = trefoil.generators
    o = RewritingOracle(trefoil.generators, list(trefoil.relators.values()))
    assert not o.exact
    assert o.equal(Word.of(a_, 3), Word.of(b_, 2))
    assert o.normalize(trefoil.relators["r"]).is_identity()
    assert not o.equal(Word.of(a_), Word.of(b_))


def test_mapping_torus_twists_by_the_automorphism(c3):
    images = {"a": Word.of(a, 2)}
    o = MappingTorusOracle(c3, images, z)
    twisted = Word.of(z, -1) * Word.of(a) * Word.of(z)
    assert o.normalize(twisted) == o.normalize(Word.of(a, 2))
    assert format_word(o.normalize(Word.of(z) * Word.of(a))) == "a^2*z"


def test_invert_automorphism():
    c5 = coset_enumeration([a], [Word.of(a, 5)], 10)
    inverse = invert_automorphism(c5, {"a": Word.of(a, 2)})
    assert inverse == {"a": Word.of(a, 3)}
    c3 = coset_enumeration([a], [Word.of(a, 3)], 10)
    assert invert_automorphism(c3, {"a": Word.of(a, 2)}) == {"a": Word.of(a, 2)}


def test_group_ring_arithmetic(c3):
    one = GroupRingElement.one()
    shift = GroupRingElement.of(Word.of(a))
    norm = norm_element(c3)
    assert norm.augmentation() == 3
    assert (one - shift).times(norm, c3).is_zero()
    x = GroupRingElement.from_words([(Word.of(a, 4), 2), (Word.of(a), -1)], c3)
    assert x == GroupRingElement.of(Word.of(a))
    assert str(one - shift) == "1*1 + -1*a"


def test_ring_apply_rejects_non_normal_words(c3):
    x = GroupRingElement.of(Word.of(a, 4))
    with pytest.raises(OracleMismatch):
        ring_apply(x, GroupRingElement.one(), c3)
    y = GroupRingElement.of(Word.of(a))
    assert ring_apply(y, y, c3) == GroupRingElement.of(Word.of(a, 2))
    assert ring_apply(y, 3, c3) == y.scale(3)


def random_ring_element(rng, elements):
    return GroupRingElement({rng.choice(elements): rng.randint(-3, 3) for _ in range(rng.randint(0, 4))})


def test_group_ring_axioms(s3):
    rng = random.Random(7)
    elements = s3.elements()
    one = GroupRingElement.one()
    for _ in range(1000):
        x, y, w = (random_ring_element(rng, elements) for _ in range(3))
        assert x.times(y, s3).times(w, s3) == x.times(y.times(w, s3), s3)
        assert x.times(y + w, s3) == x.times(y, s3) + x.times(w, s3)
        assert (x + y).times(w, s3) == x.times(w, s3) + y.times(w, s3)
        assert x.times(one, s3) == x and one.times(x, s3) == x
        assert x.times(y, s3).augmentation() == x.augmentation() * y.augmentation()
