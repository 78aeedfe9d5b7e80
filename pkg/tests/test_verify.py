import random

import numpy as np
import pytest
from sympy import Matrix

from constructions import cyclic_resolution, cylinder, presentation_complex, standard_resolution, tensor_product
from errors import NotFinite, OracleMismatch
from group_oracle import (
    FreeOracle,
    GroupRingElement,
    InfiniteCyclicOracle,
    build_finite_oracle,
    coset_enumeration,
)
from presentation import parse_presentation
from verify import (
    check_exactness,
    compositions_vanish,
    expand_matrix,
    format_chain_complex,
    fox_derivative,
    group_homology,
    smith_normal_form,
    solve_integer_system,
    to_chain_complex,
)
from words import Generator, Word, reduce


@pytest.fixture
def free():
    a, b = Generator("a"), Generator("b")
    return a, b, FreeOracle([a, b])


def ring(*terms):
    return GroupRingElement(dict(terms))


def test_fox_derivative_left(free):
    a, b, o = free
    w = Word.of(a) * Word.of(b) * Word.of(a, -1)
    assert fox_derivative(w, a, o) == ring((Word.identity(), 1), (Word.of(a) * Word.of(b) * Word.of(a, -1), -1))
    assert fox_derivative(w, "b", o) == ring((Word.of(a), 1))


def test_fox_derivative_right(free):
    a, b, o = free
    w = Word.of(a, 3)
    assert fox_derivative(w, a, o, side="right") == ring((Word.of(a, 2), 1), (Word.of(a), 1), (Word.identity(), 1))
    v = Word.of(a, -1) * Word.of(b)
    assert fox_derivative(v, a, o, side="right") == ring((Word.of(a, -1) * Word.of(b), -1))


def random_free_word(rng, gens):
    return reduce([(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, 10))])


def test_fundamental_formula_of_free_derivatives(free):
    a, b, o = free
    one = GroupRingElement.one()
    rng = random.Random(5)
    for _ in range(1000):
        w = random_free_word(rng, [a, b])
        expected = GroupRingElement.of(w) - one
        left = GroupRingElement.zero()
        right = GroupRingElement.zero()
        for x in (a, b):
            shift = GroupRingElement.of(Word.of(x)) - one
            left = left + fox_derivative(w, x, o).times(shift, o)
            right = right + shift.times(fox_derivative(w, x, o, side="right"), o)
        assert left == expected
        assert right == expected


def test_smith_normal_form_of_diagonal():
    snf = smith_normal_form([[2, 0], [0, 3]])
    assert [abs(d) for d in snf.diagonal] == [1, 6]
    m = np.array([[2, 0], [0, 3]], dtype=object)
    product = snf.left.dot(m).dot(snf.right)
    assert product[0, 1] == 0 and product[1, 0] == 0
    assert snf.rank == 2


def test_smith_normal_form_random_matrices():
    rng = random.Random(7)
    for _ in range(1000):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = np.array([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)], dtype=object)
        snf = smith_normal_form(m)
        assert abs(Matrix(snf.left.tolist()).det()) == 1
        assert abs(Matrix(snf.right.tolist()).det()) == 1
        d = snf.left.dot(m).dot(snf.right)
        for i in range(rows):
            for j in range(cols):
                assert d[i, j] == (snf.diagonal[i] if i == j else 0)
        values = [abs(x) for x in snf.diagonal]
        assert all(b % a == 0 if a else b == 0 for a, b in zip(values, values[1:]))


def test_solve_integer_system():
    assert solve_integer_system([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert solve_integer_system([[2, 4]], [3]) is None
    x = solve_integer_system([[1, 1], [1, -1]], [4, 2])
    assert x == [3, 1]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_small_cyclic_resolution_is_exact(p):
    cc = to_chain_complex(cyclic_resolution(p, 6))
    report = check_exactness(cc, range(1, 6))
    assert report.exact, report.messages
    for n in range(2, 7):
        assert compositions_vanish(cc, n)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_group_homology_of_cyclic_group(p):
    cc = to_chain_complex(cyclic_resolution(p, 4))
    h = group_homology(cc, [0, 1, 2, 3])
    assert (h[0].rank, h[0].torsion) == (1, [])
    assert h[1].torsion == [p] and h[1].rank == 0
    assert h[2].is_zero()
    assert h[3].torsion == [p] and h[3].rank == 0


def test_truncation_reports_missing_exactness():
    cc = to_chain_complex(cyclic_resolution(3, 3))
    report = check_exactness(cc, [3])
    assert not report.exact
    assert report.group(3).rank == 1


def test_standard_and_small_resolutions_agree():
    o = build_finite_oracle(parse_presentation("gp< a | a^3 >"))
    standard = group_homology(to_chain_complex(standard_resolution(o, 4)), [1, 2, 3])
    small = group_homology(to_chain_complex(cyclic_resolution(3, 4)), [1, 2, 3])
    assert [(h.rank, h.torsion) for h in standard] == [(h.rank, h.torsion) for h in small]


@pytest.mark.parametrize("text", ["gp< t | t^2 >", "gp< a | a^3 >"])
def test_standard_resolution_is_exact(text):
    o = build_finite_oracle(parse_presentation(text))
    cc = to_chain_complex(standard_resolution(o, 4))
    report = check_exactness(cc, [1, 2, 3])
    assert report.exact, report.messages


def test_tensor_of_two_cyclic_groups():
    c2 = cyclic_resolution(2, 3)
    cc = to_chain_complex(tensor_product(c2, c2, 3))
    h = group_homology(cc, [0, 1, 2])
    assert h[0].rank == 1
    assert sorted(h[1].torsion) == [2, 2] and h[1].rank == 0
    assert h[2].torsion == [2] and h[2].rank == 0
    assert str(h[1]) == "C2 x C2"


def test_expanded_matrix_shape():
    cc = to_chain_complex(cyclic_resolution(3, 3))
    m = expand_matrix(cc, 2)
    assert m.shape == (3, 3)
    # boundary of c2 is 1 + a + a^2: every column sums to 3
    assert list(m.sum(axis=0)) == [3, 3, 3]


def test_expanded_entries_are_exact_integers():
    cc = to_chain_complex(cyclic_resolution(2, 2))
    cc.matrices[2][0][0] = cc.matrices[2][0][0].scale(2 ** 70)
    m = expand_matrix(cc, 2)
    assert m.dtype == object
    assert max(abs(int(v)) for v in m.flat) == 2 ** 70
    assert compositions_vanish(cc, 2)


def test_expansion_needs_a_finite_group():
    p = parse_presentation("gp< a >")
    c = presentation_complex(p, InfiniteCyclicOracle(p.generators[0]))
    cc = to_chain_complex(c)
    with pytest.raises(NotFinite):
        expand_matrix(cc, 1)


def test_chain_complex_needs_one_object():
    with pytest.raises(OracleMismatch):
        to_chain_complex(cylinder(cyclic_resolution(2, 2), 2))


def test_format_chain_complex():
    text = format_chain_complex(to_chain_complex(cyclic_resolution(2, 3)))
    assert "d1: a -> *" in text
    assert "d3: c3 -> c2" in text
    assert "  c2: 1*1 + -1*a" in text


def test_table_oracle_from_enumeration_matches_powers():
    a = Generator("a")
    o = coset_enumeration([a], [Word.of(a, 4)], 10)
    cc = to_chain_complex(cyclic_resolution(4, 2), o)
    assert cc.rank(2) == 1
    assert compositions_vanish(cc, 2)
