import pytest

from constructions import cyclic_resolution, inversion_lift, presentation_complex
from crossed_complex import (
    ComplexMorphism,
    apply_morphism,
    boundary,
    check_complex_axioms,
    compose,
    format_dump,
    identities_presentation,
    identity_morphism,
    parse_dump,
    verify_morphism,
)
from crossed_module import ModuleElement, PeifferSequence
from errors import DimensionOutOfRange, DumpSyntaxError, MissingImage, MissingOracle, UnknownGenerator
from group_oracle import GroupRingElement
from presentation import parse_presentation
from words import Word


def test_small_cyclic_resolution_satisfies_axioms():
    for p in (2, 3, 5):
        report = check_complex_axioms(cyclic_resolution(p, 5))
        assert report.ok, report.messages
        assert report.exact
        assert report.checked == 5


def test_broken_boundary_is_reported():
    c = cyclic_resolution(3, 3)
    c.boundaries["c3"] = PeifferSequence.of("c2")
    report = check_complex_axioms(c)
    assert not report.ok
    assert report.witness == "c3"


def test_boundary_of_wrong_dimension_is_reported():
    c = cyclic_resolution(3, 4)
    c.boundaries["c4"] = ModuleElement.generator("c4", 4)
    report = check_complex_axioms(c)
    assert not report.ok
    assert report.witness == "c4"


def test_boundary_operator(trefoil):
    c = presentation_complex(trefoil)
    assert boundary("r", c) == trefoil.relators["r"]
    assert boundary(PeifferSequence.of("r"), c) == trefoil.relators["r"]
    with pytest.raises(DimensionOutOfRange):
        boundary(Word.identity(), c)


def test_module_boundary_needs_an_oracle():
    c = cyclic_resolution(2, 5)
    c.oracle = None
    with pytest.raises(MissingOracle):
        boundary(ModuleElement.generator("c5", 5), c)


def test_dimension_one_names_have_no_boundary(trefoil):
    c = presentation_complex(trefoil)
    with pytest.raises(DimensionOutOfRange):
        boundary("a", c)
    with pytest.raises(UnknownGenerator):
        boundary("nothing", c)


@pytest.mark.parametrize("p", [2, 3])
def test_axioms_without_an_oracle_use_the_complex_relators(p):
    c = cyclic_resolution(p, 5)
    c.oracle = None
    report = check_complex_axioms(c, 5)
    assert report.ok, report.messages
    assert report.checked == 5
    assert not report.exact


def test_axioms_of_a_free_complex_without_an_oracle_are_exact():
    c = presentation_complex(parse_presentation("gp< a, b >"))
    report = check_complex_axioms(c)
    assert report.ok and report.exact


def test_identity_and_inversion_lifts_commute_with_boundaries():
    c = cyclic_resolution(3, 5)
    assert verify_morphism(identity_morphism(c)).ok
    report = verify_morphism(inversion_lift(3, c))
    assert report.ok, report.messages


def test_inversion_squares_to_identity_for_p_2():
    c = cyclic_resolution(2, 5)
    f = inversion_lift(2, c)
    square = compose(f, f)
    for n in range(3, 6):
        assert square.images[f"c{n}"] == c.element(f"c{n}")
    assert verify_morphism(square).ok


def test_wrong_lift_is_caught():
    c = cyclic_resolution(3, 4)
    f = inversion_lift(3, c)
    f.images["c2"] = PeifferSequence.of("c2")
    report = verify_morphism(f)
    assert not report.ok
    assert report.witness == "c2"


def test_missing_image_is_reported():
    c = cyclic_resolution(2, 3)
    f = ComplexMorphism(c, c, {"*": "*"}, {"a": c.element("a")})
    report = verify_morphism(f)
    assert not report.ok
    assert "c2" in report.messages[0]
    with pytest.raises(MissingImage):
        apply_morphism(f, PeifferSequence.of("c2"))


def test_identities_presentation_of_cyclic_group():
    ids = identities_presentation(cyclic_resolution(2, 4))
    assert [name for name, _ in ids.generators] == ["c3"]
    assert [name for name, _ in ids.relations] == ["c4"]
    assert "identity c3 : c2 * c2^-1^{a}" in str(ids)


def test_dump_round_trip():
    c = cyclic_resolution(3, 4)
    text = format_dump(c)
    assert text.splitlines()[0] == "pi1: finite-table"
    assert "d c3 = c2 * c2^-1^{a}" in text
    assert "d c4 = c3.[1*1 + 1*a + 1*a^2]" in text
    again = parse_dump(text)
    assert format_dump(again) == text
    assert again.oracle.order == 3
    assert check_complex_axioms(again).ok


def test_dump_of_module_with_negative_coefficients():
    c = cyclic_resolution(3, 5)
    text = format_dump(c)
    assert "d c5 = c4.[1*1 + -1*a]" in text
    again = parse_dump(text)
    assert again.boundaries["c5"].coords["c4"] == GroupRingElement.one() - GroupRingElement.of(
        again.oracle.normalize(Word.of(again.generator("a")))
    )


def test_dump_syntax_error_names_the_line():
    with pytest.raises(DumpSyntaxError) as exc:
        parse_dump("pi1: free\nobjects: *\nbogus line\n")
    assert exc.value.line == 3
