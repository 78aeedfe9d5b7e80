"""Resolution builders: presentation complexes, small cyclic and standard resolutions,
tensor products and cylinders, amalgamated sums, HNN extensions, retractions and lifts."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional

import config
from crossed_complex import (
    ComplexMorphism,
    CrossedComplex,
    Element,
    apply_morphism,
    dimension_of,
    verify_morphism,
)
from crossed_module import ModuleElement, PeifferSequence, abelianize
from errors import (
    AmbiguousWithoutHints,
    DimensionOverflow,
    LiftNotFound,
    NotFinite,
    NotTwoObject,
    UnverifiedLift,
)
from group_oracle import (
    FiniteOracle,
    FreeOracle,
    GroupOracle,
    GroupRingElement,
    MappingTorusOracle,
    ProductOracle,
    RewritingOracle,
    coset_enumeration,
    invert_automorphism,
    norm_element,
)
from presentation import Presentation
from verify import solve_integer_system
from words import Generator, Word, reduce

logger = logging.getLogger(__name__)

TENSOR = "⊗"
IOTA = "ι"


def presentation_complex(p: Presentation, oracle: Optional[GroupOracle] = None, label: str = "") -> CrossedComplex:
    """The free crossed complex of length 2 on a presentation."""
    complex_ = CrossedComplex(objects=tuple(p.objects), oracle=oracle, label=label)
    for gen in p.generators:
        complex_.add(1, gen)
    for name, word in p.relators.items():
        complex_.add(2, Generator(name, word.source, word.source), word)
    return complex_


def interval_complex() -> CrossedComplex:
    """The groupoid with objects 0, 1 and one arrow 0 -> 1."""
    iota = Generator(IOTA, "0", "1")
    complex_ = CrossedComplex(objects=("0", "1"), label="I")
    complex_.add(1, iota)
    complex_.oracle = FreeOracle([iota])
    return complex_


def cyclic_oracle(p: int, name: str = "a") -> FiniteOracle:
    gen = Generator(name)
    return coset_enumeration([gen], [Word.of(gen, p)], max(p, 1))


def cyclic_resolution(p: int, max_dim: Optional[int] = None) -> CrossedComplex:
    """Small free crossed resolution of C_p: boundaries a^p, then c(1-a) and cN alternately."""
    max_dim = config.MAXDIM if max_dim is None else max_dim
    oracle = cyclic_oracle(p)
    a = oracle.generators["a"]
    complex_ = CrossedComplex(objects=("*",), oracle=oracle, label=f"C{p}")
    complex_.add(1, a)
    if max_dim >= 2:
        complex_.add(2, Generator("c2"), Word.of(a, p))
    one = GroupRingElement.one()
    shift = GroupRingElement.of(oracle.normalize(Word.of(a)))
    norm = norm_element(oracle)
    for n in range(3, max_dim + 1):
        coefficient = one - shift if n % 2 == 1 else norm
        lower = ModuleElement(n - 1, "*", {f"c{n - 1}": coefficient})
        image = sequence_of(lower) if n == 3 else lower
        complex_.add(n, Generator(f"c{n}"), image)
    return complex_


def sequence_of(m: ModuleElement) -> PeifferSequence:
    """A dimension-2 module element sum_x x.r_x as the Peiffer sequence of its terms."""
    out = PeifferSequence.identity(m.basepoint)
    for x in sorted(m.coords):
        for w, n in m.coords[x].sorted_terms():
            out = out * PeifferSequence(((x, 1, w),), m.basepoint) ** n
    return out


def inversion_lift(p: int, complex_: Optional[CrossedComplex] = None, max_dim: Optional[int] = None) -> ComplexMorphism:
    """Lift of a -> a^-1 to the small C_p resolution.

    For p = 2 it is negation in every dimension >= 3. For odd p the lift repeats with
    period 4 from dimension 3: c.a^-1, c, -c.a^-1, -c.
    """
    complex_ = complex_ or cyclic_resolution(p, max_dim)
    oracle = complex_.oracle
    a = oracle.generators["a"]
    images = {"a": Word.of(a, -1)}
    if complex_.count(2):
        images["c2"] = PeifferSequence.of("c2", sign=-1)
    back = GroupRingElement.of(oracle.normalize(Word.of(a, -1)))
    one = GroupRingElement.one()
    for n in range(3, complex_.max_dim + 1):
        if p == 2:
            coefficient = -one
        else:
            coefficient = {3: back, 0: one, 1: -back, 2: -one}[n % 4]
        image = ModuleElement(n, "*", {f"c{n}": coefficient})
        images[f"c{n}"] = image
    return ComplexMorphism(complex_, complex_, {"*": "*"}, images)


def element_label(word: Word) -> str:
    """`1`, or the letters of a positive normal form run together."""
    if not word.letters:
        return "1"
    names = [g.name for g, _ in word.letters]
    sep = "" if all(len(n) == 1 for n in names) else "."
    return sep.join(n if e > 0 else f"{n}'" for n, (_, e) in zip(names, word.letters))


def standard_resolution(o: GroupOracle, max_dim: Optional[int] = None) -> CrossedComplex:
    """Standard free crossed resolution of a finite group: bases G, G x G, G^n."""
    max_dim = config.MAXDIM if max_dim is None else max_dim
    if not o.is_finite():
        raise NotFinite(f"standard resolution needs a finite oracle, got {o.kind}")
    elements = o.elements()
    labels = {w: element_label(w) for w in elements}

    def name(*xs):
        return "[" + ",".join(labels[x] for x in xs) + "]"

    bar = [Generator(name(g)) for g in elements]
    moves = {
        gen.name: [o.product_index(i, o.index[g]) for i in range(o.order)]
        for gen, g in zip(bar, elements)
    }
    oracle = FiniteOracle(bar, moves)
    letter = {g: Word.of(gen) for g, gen in zip(elements, bar)}
    complex_ = CrossedComplex(objects=("*",), oracle=oracle, label="standard")
    for gen in bar:
        complex_.add(1, gen)
    mul = o.multiply
    if max_dim >= 2:
        for a, b in product(elements, repeat=2):
            complex_.add(2, Generator(name(a, b)), letter[a] * letter[b] * letter[mul(a, b)].inverse())
    if max_dim >= 3:
        for a, b, c in product(elements, repeat=3):
            image = PeifferSequence(
                (
                    (name(a, mul(b, c)), 1, Word.identity()),
                    (name(mul(a, b), c), -1, Word.identity()),
                    (name(a, b), -1, Word.identity()),
                    (name(b, c), 1, letter[a].inverse()),
                )
            )
            complex_.add(3, Generator(name(a, b, c)), image)
    one = GroupRingElement.one()
    for n in range(4, max_dim + 1):
        for xs in product(elements, repeat=n):
            image = ModuleElement(n - 1)
            first = oracle.normalize(letter[o.inverse(xs[0])])
            image = image + ModuleElement(n - 1, "*", {name(*xs[1:]): GroupRingElement.of(first)})
            for i in range(1, n):
                merged = xs[: i - 1] + (mul(xs[i - 1], xs[i]),) + xs[i + 1:]
                image = image + ModuleElement(n - 1, "*", {name(*merged): one.scale((-1) ** i)})
            image = image + ModuleElement(n - 1, "*", {name(*xs[:-1]): one.scale((-1) ** n)})
            complex_.add(n, Generator(name(*xs)), image)
    logger.debug("standard resolution: %s generators", [complex_.count(n) for n in range(1, max_dim + 1)])
    return complex_


def _default_object(p, q):
    return "*" if p == q == "*" else f"{p}{TENSOR}{q}"


def _default_cell(left, right):
    return f"{left}{TENSOR}{right}"


class TensorBuilder:
    """Generators a⊗b with m + n <= max_dim and the case-split boundary rules."""

    def __init__(
        self,
        left: CrossedComplex,
        right: CrossedComplex,
        max_dim: int,
        object_name: Optional[Callable] = None,
        cell_name: Optional[Callable] = None,
    ):
        self.A = left
        self.B = right
        self.max_dim = max_dim
        self.object_name = object_name or _default_object
        self.cell_name = cell_name or _default_cell
        self.cells = {}
        objects = [self.object_name(p, q) for p in left.objects for q in right.objects]
        self.C = CrossedComplex(objects=tuple(objects), label=f"{left.label}{TENSOR}{right.label}")

    def items(self, complex_, dim):
        return list(complex_.objects) if dim == 0 else complex_.generators(dim)

    @staticmethod
    def tau(x):
        return x if isinstance(x, str) else x.target

    @staticmethod
    def sigma(x):
        return x if isinstance(x, str) else x.source

    def obj(self, p: str, q: str) -> str:
        return self.object_name(p, q)

    def build(self) -> CrossedComplex:
        for total in range(1, self.max_dim + 1):
            for m in range(0, total + 1):
                n = total - m
                for a in self.items(self.A, m):
                    for b in self.items(self.B, n):
                        self._declare(m, a, n, b)
        self._build_oracle()
        for total in range(2, self.max_dim + 1):
            for m in range(0, total + 1):
                n = total - m
                for a in self.items(self.A, m):
                    for b in self.items(self.B, n):
                        name = self.cells[(m, _name(a), n, _name(b))]
                        self.C.boundaries[name] = self.cell_boundary(m, a, n, b)
        return self.C

    def _declare(self, m, a, n, b):
        name = self.cell_name(_name(a), _name(b))
        if m + n == 1:
            if m == 1:
                gen = Generator(name, self.obj(a.source, b), self.obj(a.target, b))
            else:
                gen = Generator(name, self.obj(a, b.source), self.obj(a, b.target))
        else:
            at = self.obj(self.tau(a), self.tau(b))
            gen = Generator(name, at, at)
        self.cells[(m, _name(a), n, _name(b))] = name
        self.C.add(m + n, gen)

    def _build_oracle(self):
        gens1 = self.C.generators(1)
        if self.A.oracle is None or self.B.oracle is None:
            self.C.oracle = None
            self.work = FreeOracle(gens1)
            return
        letters = {}
        for (m, a, n, b), name in self.cells.items():
            if m + n != 1:
                continue
            gen = self.C.generator(name)
            letters[gen] = (0, self.A.generator(a), b) if m == 1 else (1, self.B.generator(b), a)
        objects = {self.obj(p, q): (p, q) for p in self.A.objects for q in self.B.objects}
        self.C.oracle = ProductOracle(self.A.oracle, self.B.oracle, letters, objects)
        self.work = self.C.oracle

    def cell(self, m: int, a, n: int, b) -> Element:
        """The generator a⊗b (or object) as an element of its dimension."""
        if m + n == 0:
            return self.obj(a, b)
        return self.C.element(self.cells[(m, _name(a), n, _name(b))])

    # Functorial parts: p⊗y and x⊗q

    def left_object(self, p: str, y: Word) -> Word:
        """p⊗y for an object p of A."""
        if isinstance(y, str):
            return self.obj(p, y)
        if isinstance(y, Word):
            if not y.letters:
                return Word.identity(self.obj(p, y.source))
            letters = [(self.C.generator(self.cells[(0, p, 1, g.name)]), e) for g, e in y.letters]
            return reduce(letters, self.obj(p, y.source), self.obj(p, y.target))
        if isinstance(y, PeifferSequence):
            factors = tuple(
                (self.cells[(0, p, 2, s)], e, self.left_object(p, u)) for s, e, u in y.factors
            )
            return PeifferSequence(factors, self.obj(p, y.basepoint))
        coords = {
            self.cells[(0, p, y.dim, g)]: r.map_words(lambda w: self.left_object(p, w), self.work)
            for g, r in y.coords.items()
        }
        return ModuleElement(y.dim, self.obj(p, y.basepoint), coords)

    def right_object(self, x: Word, q: str) -> Word:
        """x⊗q for an object q of B."""
        if isinstance(x, str):
            return self.obj(x, q)
        if isinstance(x, Word):
            if not x.letters:
                return Word.identity(self.obj(x.source, q))
            letters = [(self.C.generator(self.cells[(1, g.name, 0, q)]), e) for g, e in x.letters]
            return reduce(letters, self.obj(x.source, q), self.obj(x.target, q))
        if isinstance(x, PeifferSequence):
            factors = tuple(
                (self.cells[(2, s, 0, q)], e, self.right_object(u, q)) for s, e, u in x.factors
            )
            return PeifferSequence(factors, self.obj(x.basepoint, q))
        coords = {
            self.cells[(x.dim, g, 0, q)]: r.map_words(lambda w: self.right_object(w, q), self.work)
            for g, r in x.coords.items()
        }
        return ModuleElement(x.dim, self.obj(x.basepoint, q), coords)

    # Expansion of x⊗y by the bimorphism laws

    def tensor(self, x, y) -> Element:
        m, n = dimension_of(x), dimension_of(y)
        if m == 0:
            return self.left_object(x, y)
        if n == 0:
            return self.right_object(x, y)
        if m == 1:
            return self.word_left(x, y)
        if n == 1:
            return self.word_right(x, y)
        return self.bilinear(x, y)

    def _act(self, z, word):
        if isinstance(z, PeifferSequence):
            return z.act(word)
        return z.act(word, self.work)

    def _unit(self, dim, at):
        return PeifferSequence.identity(at) if dim == 2 else ModuleElement.zero(dim, at)

    def _plus(self, z, w):
        return z * w if isinstance(z, PeifferSequence) else z + w

    def _minus(self, z):
        return z.inverse() if isinstance(z, PeifferSequence) else -z

    def word_left(self, w: Word, y: Element) -> Element:
        """w⊗y for a dimension-1 word w: (aa')⊗y = (a'⊗y)(a⊗y)^(a'⊗tau y)."""
        n = dimension_of(y)
        ty = _basepoint(y)
        out = self._unit(1 + n, self.obj(w.target, ty))
        letters = w.letters
        for i in range(len(letters) - 1, -1, -1):
            gen, exp = letters[i]
            suffix = reduce(letters[i + 1:], gen.end(exp), w.target)
            term = self.gen_left(gen, y)
            if exp < 0:
                back = self.right_object(Word.of(gen, -1), ty)
                term = self._minus(self._act(term, back))
            out = self._plus(out, self._act(term, self.right_object(suffix, ty)))
        return out

    def gen_left(self, g: Generator, y: Element) -> Element:
        """g⊗y for a dimension-1 generator g of A."""
        n = dimension_of(y)
        tg = g.target
        if n == 1:
            out = PeifferSequence.identity(self.obj(tg, y.target))
            letters = y.letters
            for j, (b, exp) in enumerate(letters):
                suffix = reduce(letters[j + 1:], b.end(exp), y.target)
                term = self.cell(1, g, 1, b)
                if exp < 0:
                    term = term.act(self.left_object(tg, Word.of(b, -1))).inverse()
                out = out * term.act(self.left_object(tg, suffix))
            return out
        out = ModuleElement.zero(1 + n, self.obj(tg, _basepoint(y)))
        for s, k, u in _terms(y):
            term = self.cell(1, g, n, self.B.generator(s)).scale(k)
            out = out + term.act(self.left_object(tg, u), self.work)
        return out

    def word_right(self, x: Element, w: Word) -> ModuleElement:
        """x⊗w for x of dimension >= 2 and a word w: x⊗(bb') = (x⊗b)^(tau x⊗b') + x⊗b'."""
        m = dimension_of(x)
        tx = _basepoint(x)
        out = ModuleElement.zero(m + 1, self.obj(tx, w.target))
        letters = w.letters
        for j, (b, exp) in enumerate(letters):
            suffix = reduce(letters[j + 1:], b.end(exp), w.target)
            term = ModuleElement.zero(m + 1, self.obj(tx, b.target))
            for s, k, u in _terms(x):
                cell = self.cell(m, self.A.generator(s), 1, b).scale(k)
                term = term + cell.act(self.right_object(u, b.target), self.work)
            if exp < 0:
                term = -term.act(self.left_object(tx, Word.of(b, -1)), self.work)
            out = out + term.act(self.left_object(tx, suffix), self.work)
        return out

    def bilinear(self, x: Element, y: Element) -> ModuleElement:
        m, n = dimension_of(x), dimension_of(y)
        tx, ty = _basepoint(x), _basepoint(y)
        out = ModuleElement.zero(m + n, self.obj(tx, ty))
        for s, k, u in _terms(x):
            for t, l, v in _terms(y):
                cell = self.cell(m, self.A.generator(s), n, self.B.generator(t)).scale(k * l)
                t_at = self.B.generator(t).source
                path = self.right_object(u, t_at) * self.left_object(tx, v)
                out = out + cell.act(path, self.work)
        return out

    def cell_boundary(self, m: int, a, n: int, b) -> Element:
        """chi_{m+n}(a⊗b), following the sign and order of the six cases."""
        if m == 0:
            return self.tensor(a, self.B.boundaries[b.name])
        if n == 0:
            return self.tensor(self.A.boundaries[a.name], b)
        if m == 1 and n == 1:
            return (
                self.cell(0, a.target, 1, b).inverse()
                * self.cell(1, a, 0, b.source).inverse()
                * self.cell(0, a.source, 1, b)
                * self.cell(1, a, 0, b.target)
            )
        if m == 1:
            x = self.tensor(Word.of(a), self.B.boundaries[b.name])
            y = self.cell(0, a.target, n, b)
            z = self._act(self.cell(0, a.source, n, b), self.cell(1, a, 0, b.target))
            if n == 2:
                return x.inverse() * y.inverse() * z
            return -x - y + z
        if n == 1:
            x = self.cell(m, a, 0, b.target)
            y = self._act(self.cell(m, a, 0, b.source), self.cell(0, a.target, 1, b))
            z = self.tensor(self.A.boundaries[a.name], Word.of(b))
            if m == 2:
                return x.inverse() * y * z
            sign = (-1) ** m
            return x.scale(-sign) + y.scale(sign) + z
        left = self.tensor(self.A.boundaries[a.name], self.B.element(b.name))
        right = self.tensor(self.A.element(a.name), self.B.boundaries[b.name])
        return left + right.scale((-1) ** m)


def _name(x):
    return x if isinstance(x, str) else x.name


def _basepoint(x):
    if isinstance(x, str):
        return x
    if isinstance(x, Word):
        return x.target
    return x.basepoint


def _terms(x):
    """(generator, integer, conjugator) terms of a dimension >= 2 element."""
    if isinstance(x, PeifferSequence):
        return [(s, e, u) for s, e, u in x.factors]
    return [(g, n, w) for g in sorted(x.coords) for w, n in x.coords[g].sorted_terms()]


def tensor_product(
    left: CrossedComplex,
    right: CrossedComplex,
    max_dim: Optional[int] = None,
    object_name: Optional[Callable] = None,
    cell_name: Optional[Callable] = None,
) -> CrossedComplex:
    """A⊗B truncated at max_dim."""
    max_dim = config.MAXDIM if max_dim is None else max_dim
    if max_dim < 1 or max_dim > left.max_dim + right.max_dim:
        raise DimensionOverflow(
            f"max_dim {max_dim} outside 1..{left.max_dim + right.max_dim} for these factors"
        )
    complex_ = TensorBuilder(left, right, max_dim, object_name, cell_name).build()
    logger.debug("tensor: %s generators", [complex_.count(n) for n in range(1, max_dim + 1)])
    return complex_


def cylinder(b: CrossedComplex, max_dim: Optional[int] = None) -> CrossedComplex:
    """I⊗B; for one-object B the objects are 0, 1 and the arrow ι⊗* is ι."""
    max_dim = config.MAXDIM if max_dim is None else max_dim
    max_dim = min(max_dim, b.max_dim + 1)
    if b.is_reduced():
        only = b.objects[0]

        def object_name(p, q):
            return p

        def cell_name(left, right):
            return left if right == only else f"{left}{TENSOR}{right}"

        complex_ = tensor_product(interval_complex(), b, max_dim, object_name, cell_name)
    else:
        complex_ = tensor_product(interval_complex(), b, max_dim)
    complex_.label = f"cyl({b.label})"
    return complex_


@dataclass
class AmalgamData:
    """Resolutions of A, B, C and verified lifts C -> A, C -> B."""
    A: CrossedComplex
    B: CrossedComplex
    C: CrossedComplex
    i_lift: ComplexMorphism
    j_lift: ComplexMorphism


@dataclass
class HnnData:
    """Resolutions of G and A with two lifts A -> G (the 0 end and the 1 end)."""
    G: CrossedComplex
    A: CrossedComplex
    k0: ComplexMorphism
    k1: ComplexMorphism
    stable: str = "z"


def _check_lift(f, max_dim, what):
    report = verify_morphism(f, max_dim)
    if not report.ok:
        raise UnverifiedLift(f"{what} does not commute with boundaries: {'; '.join(report.messages)}")


def _embed(source, target, rename, at):
    """Copy the generators of a one-object complex into target at object `at`, renamed."""
    images = {}
    for dim in sorted(source.gens):
        for gen in source.generators(dim):
            target.add(dim, Generator(rename[gen.name], at, at))
            images[gen.name] = target.element(rename[gen.name])
    return ComplexMorphism(source, target, {o: at for o in source.objects}, images)


def _all_names(complex_):
    return {g for table in complex_.gens.values() for g in table}


def _rewriting_oracle(result):
    return RewritingOracle(result.generators(1), list(result.omega().values()))


@dataclass
class _Gluing:
    """A result complex fed by embedded copies and by a cylinder mapped in through `phi`."""
    result: CrossedComplex
    cylinder: CrossedComplex
    phi: ComplexMorphism
    cells: dict
    copies: list
    fill: object
    oracle_factory: object
    correct: object = None

    def run(self, max_dim):
        self.fill(1)
        for dim in range(2, max_dim + 1):
            for source, embed, rename in self.copies:
                for gen in source.generators(dim):
                    self.result.boundaries[rename[gen.name]] = apply_morphism(embed, source.boundaries[gen.name])
            for gen in self.cylinder.generators(dim):
                if gen.name not in self.cells:
                    continue
                image = apply_morphism(self.phi, self.cylinder.boundaries[gen.name])
                if self.correct is not None:
                    image = self.correct(gen.name, image)
                self.result.boundaries[self.cells[gen.name]] = image
            if dim == 2:
                self.result.oracle = self.oracle_factory(self.result)
            self.fill(dim)
        if self.result.oracle is None:
            self.result.oracle = self.oracle_factory(self.result)
        return self.result


def _end_images(phi, lifts, dim):
    """Images of 0⊗x and 1⊗x for the dimension-`dim` generators x of the glued complex."""
    for end, lift, embed in lifts:
        for gen in lift.source.generators(dim):
            if gen.name in lift.images:
                phi.images[f"{end}{TENSOR}{gen.name}"] = apply_morphism(embed, lift.images[gen.name])


def amalgam_resolution(d: AmalgamData, max_dim: Optional[int] = None) -> CrossedComplex:
    """Double mapping cylinder A ⊔ (I⊗C) ⊔ B glued along the two lifts; objects 0 and 1."""
    max_dim = config.MAXDIM if max_dim is None else max_dim
    for lift, what in ((d.i_lift, "i lift"), (d.j_lift, "j lift")):
        _check_lift(lift, max_dim - 1, what)
    cyl = cylinder(d.C, max_dim)
    a_names, b_names = _all_names(d.A), _all_names(d.B)
    cells = {g.name: g.name for n in range(2, max_dim + 1) for g in cyl.generators(n)
             if g.name.startswith(IOTA + TENSOR)}
    reserved = set(cells) | {IOTA}
    a_rename = {n: (f"A_{n}" if n in b_names | reserved else n) for n in a_names}
    b_rename = {n: (f"B_{n}" if n in a_names | reserved else n) for n in b_names}
    result = CrossedComplex(objects=("0", "1"), label=f"{d.A.label}*{d.B.label}")
    embed_a = _embed(d.A, result, a_rename, "0")
    embed_b = _embed(d.B, result, b_rename, "1")
    result.add(1, Generator(IOTA, "0", "1"))
    for name in cells:
        result.add(cyl.dim_of(name), Generator(name, "1", "1"))
    phi = ComplexMorphism(cyl, result, {"0": "0", "1": "1"}, {IOTA: Word.of(result.generator(IOTA))})
    lifts = (("0", d.i_lift, embed_a), ("1", d.j_lift, embed_b))

    def fill(dim):
        _end_images(phi, lifts, dim)
        for name in cells:
            if cyl.dim_of(name) == dim:
                phi.images[name] = result.element(name)

    copies = [(d.A, embed_a, a_rename), (d.B, embed_b, b_rename)]
    _Gluing(result, cyl, phi, cells, copies, fill, _rewriting_oracle).run(max_dim)
    logger.debug("amalgam: %s generators", [result.count(n) for n in range(1, max_dim + 1)])
    return result


def hnn_resolution(d: HnnData, max_dim: Optional[int] = None) -> CrossedComplex:
    """G with a stable letter z and generators z⊗a, one for each generator a of A.

    The dimension-2 generators z⊗a are based so that their boundary reads z^-1 k0(a) z k1(a)^-1.
    """
    max_dim = config.MAXDIM if max_dim is None else max_dim
    for lift, what in ((d.k0, "k0 lift"), (d.k1, "k1 lift")):
        _check_lift(lift, max_dim - 1, what)
    cyl = cylinder(d.A, max_dim)
    g_names = _all_names(d.G)
    stable = d.stable if d.stable not in g_names else f"{d.stable}_"
    prefix = stable + TENSOR
    rename = {n: (f"G_{n}" if n.startswith(prefix) else n) for n in g_names}
    result = CrossedComplex(objects=("*",), label=f"hnn({d.G.label})")
    embed = _embed(d.G, result, rename, "*")
    z = Generator(stable)
    result.add(1, z)
    cells = {}
    for n in range(2, max_dim + 1):
        for gen in cyl.generators(n):
            if gen.name.startswith(IOTA + TENSOR):
                cells[gen.name] = prefix + gen.name[len(IOTA + TENSOR):]
                result.add(n, Generator(cells[gen.name]))
    phi = ComplexMorphism(cyl, result, {"0": "*", "1": "*"}, {IOTA: Word.of(z)})
    lifts = (("0", d.k0, embed), ("1", d.k1, embed))

    def shift_of(name):
        return phi.images[f"1{TENSOR}{name[len(IOTA + TENSOR):]}"]

    def fill(dim):
        _end_images(phi, lifts, dim)
        for name, new in cells.items():
            if cyl.dim_of(name) != dim:
                continue
            if dim == 2:
                phi.images[name] = PeifferSequence(((new, 1, shift_of(name)),), "*")
            else:
                phi.images[name] = result.element(new)

    def correct(name, image):
        if cyl.dim_of(name) != 2:
            return image
        shift = shift_of(name)
        return shift * image * shift.inverse()

    def oracle_factory(r):
        return _hnn_oracle(d, r, z)

    _Gluing(result, cyl, phi, cells, [(d.G, embed, rename)], fill, oracle_factory, correct).run(max_dim)
    logger.debug("hnn: %s generators", [result.count(n) for n in range(1, max_dim + 1)])
    return result


def _hnn_oracle(d, result, z):
    """Exact mapping-torus oracle when A = G and k1 is the identity; rewriting otherwise."""
    g1 = [g.name for g in d.G.generators(1)]
    a1 = [g.name for g in d.A.generators(1)]
    k1_identity = all(
        isinstance(d.k1.images.get(n), Word) and d.k1.images[n] == Word.of(d.G.generator(n)) for n in a1
    )
    if d.G.oracle is not None and g1 and g1 == a1 and k1_identity:
        k = {n: d.G.oracle.normalize(d.k0.images[n]) for n in a1}
        return MappingTorusOracle(d.G.oracle, invert_automorphism(d.G.oracle, k), z, k)
    return _rewriting_oracle(result)


def retract_to_vertex(c: CrossedComplex, keep: str) -> CrossedComplex:
    """Collapse the arrow joining the two objects; everything lands at `keep`."""
    if c.is_reduced():
        return c
    if len(c.objects) != 2 or keep not in c.objects:
        raise NotTwoObject(f"expected two objects including {keep}, got {c.objects}")
    bridges = [g for g in c.generators(1) if g.source != g.target]
    if len(bridges) != 1:
        raise NotTwoObject(f"expected one connecting arrow, found {len(bridges)}")
    bridge = bridges[0]
    result = CrossedComplex(objects=(keep,), label=f"retract({c.label})")
    images = {bridge.name: Word.identity(keep)}
    for dim in sorted(c.gens):
        for gen in c.generators(dim):
            if gen == bridge:
                continue
            result.add(dim, Generator(gen.name, keep, keep))
            images[gen.name] = result.element(gen.name)
    fold = ComplexMorphism(c, result, {o: keep for o in c.objects}, images)
    for dim in range(2, c.max_dim + 1):
        for gen in c.generators(dim):
            result.boundaries[gen.name] = apply_morphism(fold, c.boundaries[gen.name])
        if dim == 2:
            result.oracle = _rewriting_oracle(result)
    if result.oracle is None:
        result.oracle = FreeOracle(result.generators(1))
    return result


# Lifting group morphisms


def lift_morphism(
    images: Optional[dict],
    src: CrossedComplex,
    dst: CrossedComplex,
    max_dim: Optional[int] = None,
    hints: Optional[dict] = None,
    object_map: Optional[dict] = None,
) -> ComplexMorphism:
    """Extend dimension-1 images to a morphism of resolutions src -> dst.

    Dimension 2 by bounded search for Peiffer sequences with the required boundary,
    dimensions >= 3 by integer linear algebra over a finite coefficient group.
    """
    max_dim = min(src.max_dim, config.MAXDIM if max_dim is None else max_dim)
    hints = dict(hints or {})
    if images is None:
        if not {g.name for g in src.generators(1)} <= set(dst.gens.get(1, {})):
            raise AmbiguousWithoutHints("no dimension-1 images given and generator names differ")
        images = {g.name: Word.of(dst.generator(g.name)) for g in src.generators(1)}
    object_map = object_map or {o: dst.objects[0] for o in src.objects}
    f = ComplexMorphism(src, dst, object_map, dict(images))
    for gen in src.generators(1):
        if gen.name not in f.images:
            raise LiftNotFound(f"no image for {gen.name}", 1)
    f.images.update(hints)
    for dim in range(2, max_dim + 1):
        for gen in src.generators(dim):
            if gen.name in f.images:
                continue
            wanted = apply_morphism(f, src.boundaries[gen.name])
            if dim == 2:
                found = _search_dim2(wanted, dst)
            else:
                found = _solve_module(wanted, dst, dim)
            if found is None:
                raise LiftNotFound(f"no image found for {gen.name}", dim)
            f.images[gen.name] = found
    report = verify_morphism(f, max_dim)
    if not report.ok:
        dim = src.dim_of(report.witness) if report.witness else 0
        raise LiftNotFound(f"lift fails: {'; '.join(report.messages)}", dim)
    return f


def _search_dim2(wanted, dst, factors=None, length=None):
    """A Peiffer sequence with boundary `wanted`, peeling relator rotations off the word."""
    factors = config.LIFT_FACTORS if factors is None else factors
    length = config.LIFT_WORD_LENGTH if length is None else length
    rotations = []
    for name, rel in sorted(dst.omega().items()):
        for sign in (1, -1):
            word = rel if sign > 0 else rel.inverse()
            for k in range(max(len(word.letters), 1)):
                rotations.append((name, sign, word, k))

    def search(w, depth):
        if w.is_identity():
            return PeifferSequence.identity(w.source)
        if depth == 0 or len(w.letters) > length:
            return None
        letters = w.letters
        for name, sign, word, k in rotations:
            rot = word.letters[k:] + word.letters[:k]
            n = len(rot)
            if n == 0:
                continue
            for i in range(len(letters) - n + 1):
                if letters[i:i + n] != rot:
                    continue
                prefix = reduce(letters[:i], w.source)
                alpha = reduce(word.letters[:k], word.source)
                rest = reduce(letters[:i] + letters[i + n:], w.source, w.target)
                tail = search(rest, depth - 1)
                if tail is not None:
                    head = PeifferSequence(((name, sign, alpha * prefix.inverse()),), w.source)
                    return head * tail
        return None

    return search(wanted, factors)


def _solve_module(wanted, dst, dim):
    """Module element x of dimension `dim` with chi(x) = wanted, over a finite oracle."""
    oracle = dst.oracle
    if oracle is None or not oracle.is_finite():
        return None
    target = abelianize(wanted, oracle) if isinstance(wanted, PeifferSequence) else wanted.normalized(oracle)
    lower = [g.name for g in dst.generators(dim - 1)]
    upper = [g.name for g in dst.generators(dim)]
    elements = oracle.elements()
    row_index = {(g, w): i for i, (g, w) in enumerate(product(lower, elements))}
    columns = []
    for g in upper:
        image = dst.boundaries[g]
        image = abelianize(image, oracle) if isinstance(image, PeifferSequence) else image
        for h in elements:
            moved = image.times(GroupRingElement.of(h), oracle, "*")
            column = [0] * len(row_index)
            for x, r in moved.coords.items():
                for w, n in r.terms.items():
                    column[row_index[(x, w)]] += n
            columns.append(column)
    rhs = [0] * len(row_index)
    for x, r in target.coords.items():
        for w, n in r.terms.items():
            rhs[row_index[(x, w)]] += n
    matrix = [[columns[j][i] for j in range(len(columns))] for i in range(len(rhs))]
    solution = solve_integer_system(matrix, rhs)
    if solution is None:
        return None
    out = ModuleElement.zero(dim, wanted.basepoint)
    for (g, h), n in zip(product(upper, elements), solution):
        if n:
            out = out + ModuleElement(dim, "*", {g: GroupRingElement.of(h, n)})
    return out
