import pytest

from cocycle import (
    CocycleData,
    automorphism_oracle,
    coboundary_action,
    build_extension,
    element_order,
    extension_presentation,
    identify,
    verify_cocycle,
)
from constructions import presentation_complex, standard_resolution
from errors import OracleMismatch, TooLarge, UnverifiedCocycle
from group_oracle import InfiniteCyclicOracle, build_finite_oracle
from presentation import parse_presentation
from words import Word


def finite(text):
    p = parse_presentation(text)
    return build_finite_oracle(p), list(p.relators.values())


@pytest.fixture
def c3_kernel():
    o, rels = finite("gp< a | a^3 >")
    return automorphism_oracle(o, rels, "C3")


@pytest.fixture
def c2_standard():
    o, _ = finite("gp< t | t^2 >")
    return standard_resolution(o, 3)


@pytest.mark.parametrize(
    "text, count",
    [("gp< a | a^3 >", 2), ("gp< a, b | a^2, b^2, a^-1*b^-1*a*b >", 6), ("gp< a, b | a^2, b^3, (a*b)^2 >", 6), ("gp< t | t^2 >", 1)],
)
def test_automorphism_counts(text, count):
    o, rels = finite(text)
    assert automorphism_oracle(o, rels).order == count


def test_automorphisms_compose_on_the_right(c3_kernel):
    m = c3_kernel
    for alpha in m.automorphisms:
        assert m.multiply(alpha, m.inverse(alpha)) == m.identity


def test_inner_automorphisms_of_abelian_kernel_are_trivial(c3_kernel):
    m = c3_kernel
    for k in range(m.kernel.order):
        assert m.boundary(k) == m.identity


def test_automorphism_from_images(c3_kernel):
    m = c3_kernel
    a = m.kernel.generators["a"]
    inversion = m.automorphism({"a": Word.of(a, 2)})
    assert inversion != m.identity
    assert m.multiply(inversion, inversion) == m.identity
    with pytest.raises(OracleMismatch):
        m.automorphism({"a": Word.identity()})


def test_kernel_must_be_small():
    with pytest.raises(TooLarge):
        automorphism_oracle(InfiniteCyclicOracle(parse_presentation("gp< a >").generators[0]))


def cocycle(m, resolution, k1_t):
    k1 = {"[1]": m.identity, "[t]": k1_t}
    k2 = {g.name: 0 for g in resolution.generators(2)}
    return CocycleData(k1, k2)


def test_inverting_action_gives_s3(c3_kernel, c2_standard):
    m = c3_kernel
    a = m.kernel.generators["a"]
    c = cocycle(m, c2_standard, m.automorphism({"a": Word.of(a, 2)}))
    assert verify_cocycle(c, c2_standard, m).ok
    report = build_extension(c, c2_standard, m)
    assert report.order == 6
    assert report.surjection_ok and report.kernel_ok
    assert report.isomorphism_type == "S3"


def test_trivial_action_gives_c6(c3_kernel, c2_standard):
    m = c3_kernel
    c = cocycle(m, c2_standard, m.identity)
    report = build_extension(c, c2_standard, m)
    assert report.order == 6
    assert report.isomorphism_type == "C6"


def test_missing_values_fail_verification(c3_kernel, c2_standard):
    m = c3_kernel
    c = CocycleData({"[1]": m.identity}, {})
    report = verify_cocycle(c, c2_standard, m)
    assert not report.ok
    assert report.witness == "[t]"


@pytest.fixture
def trefoil_setup(trefoil):
    resolution = presentation_complex(trefoil)
    o, rels = finite("gp< a, b | a^2, b^3, (a*b)^2 >")
    m = automorphism_oracle(o, rels, "S3")
    x = o.locate(Word.of(o.generators["a"]))
    y = o.locate(Word.of(o.generators["b"]))
    return resolution, m, x, y


def _trefoil_cocycle(m, x, y, s):
    return CocycleData({"a": m.boundary(x), "b": m.boundary(y)}, {"r": s})


def test_trefoil_cocycle_from_kernel_elements(trefoil_setup):
    resolution, m, x, y = trefoil_setup
    o = m.kernel
    inv_y = o.inverse_index(y)
    s = o.product_index(o.product_index(o.product_index(o.product_index(x, x), x), inv_y), inv_y)
    c = _trefoil_cocycle(m, x, y, s)
    assert verify_cocycle(c, resolution, m).ok
    report = build_extension(c, resolution, m)
    assert report.order is None
    assert "r = a^3*b^-2*" in report.presentation
    assert "k_a" in report.presentation


def test_trefoil_cocycle_with_wrong_value_fails(trefoil_setup):
    resolution, m, x, y = trefoil_setup
    c = _trefoil_cocycle(m, x, y, 0)
    report = verify_cocycle(c, resolution, m)
    assert not report.ok
    assert report.witness == "r"
    with pytest.raises(UnverifiedCocycle):
        build_extension(c, resolution, m)


def test_central_perturbation_keeps_the_verdict(trefoil):
    resolution = presentation_complex(trefoil)
    o, rels = finite("gp< a | a^3 >")
    m = automorphism_oracle(o, rels)
    for s in range(o.order):
        c = CocycleData({"a": m.identity, "b": m.identity}, {"r": s})
        assert verify_cocycle(c, resolution, m).ok


def test_extension_presentation_lists_all_relators(c3_kernel, c2_standard):
    m = c3_kernel
    c = cocycle(m, c2_standard, m.identity)
    p, kgens = extension_presentation(c, c2_standard, m)
    assert set(kgens) == {"a"}
    assert "K1" in p.relators
    assert {"act_[1]_a", "act_[t]_a"} <= set(p.relators)
    assert len(p.generators) == 3


def test_identify_small_groups():
    o, _ = finite("gp< a, b | a^2, b^2, (a*b)^4 >")
    assert identify(o) == "D4"
    o, _ = finite("gp< a, b | a^2, b^2, a^-1*b^-1*a*b >")
    assert identify(o) == "C2 x C2"
    assert element_order(o, 0) == 1


def test_coboundary_is_conjugation_and_a_homomorphism():
    o, rels = finite("gp< a, b | a^2, b^3, (a*b)^2 >")
    m = automorphism_oracle(o, rels, "S3")
    x = o.locate(Word.of(o.generators["a"]))
    y = o.locate(Word.of(o.generators["b"]))
    assert coboundary_action(m, 0) == m.identity
    assert coboundary_action(m, x) != m.identity
    assert coboundary_action(m, x)[y] == o.product_index(o.product_index(x, y), x)
    xy = o.product_index(x, y)
    assert coboundary_action(m, xy) == m.multiply(coboundary_action(m, x), coboundary_action(m, y))
