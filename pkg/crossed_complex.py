"""Free crossed complexes of groupoids: boundaries, axiom checks, morphisms, dumps."""
import logging
import re
from dataclasses import dataclass, field
from typing import Optional, Union

import config
from crossed_module import (
    ModuleElement,
    PeifferSequence,
    boundary2,
    equal_elements,
    format_module,
    format_sequence,
)
from errors import (
    DimensionOutOfRange,
    DumpSyntaxError,
    MissingImage,
    MissingOracle,
    NonIdentityBoundary,
    UnknownGenerator,
    XresError,
)
from group_oracle import FreeOracle, GroupOracle, GroupRingElement, RewritingOracle, coset_enumeration
from models import AxiomReport, MorphismReport
from words import Generator, Word, format_word, reduce

logger = logging.getLogger(__name__)

POWER = re.compile(r"\^(-?\d+)")

# an element of some dimension: a Word (1), a PeifferSequence (2) or a ModuleElement (>= 3)
Element = Union[Word, PeifferSequence, ModuleElement]


@dataclass
class CrossedComplex:
    """Objects, generators per dimension and a boundary for every generator of dim >= 2.

    Boundaries are Words (dim 2), PeifferSequences (dim 3) or ModuleElements (dim >= 4).
    Generator names are unique across all dimensions.
    """
    objects: tuple
    gens: dict = field(default_factory=dict)
    boundaries: dict = field(default_factory=dict)
    oracle: Optional[GroupOracle] = None
    label: str = ""

    def __post_init__(self):
        self._dims = {name: n for n, table in self.gens.items() for name in table}

    def add(self, dim: int, gen: Generator, boundary=None) -> None:
        self.gens.setdefault(dim, {})[gen.name] = gen
        self._dims[gen.name] = dim
        if boundary is not None:
            self.boundaries[gen.name] = boundary

    def dim_of(self, name: str) -> int:
        return self._dims[name]

    def generator(self, name: str) -> Generator:
        return self.gens[self._dims[name]][name]

    def generators(self, dim: int) -> list[Generator]:
        table = self.gens.get(dim, {})
        return [table[name] for name in sorted(table)]

    def count(self, dim: int) -> int:
        return len(self.gens.get(dim, {}))

    @property
    def max_dim(self) -> int:
        dims = [n for n, table in self.gens.items() if table]
        return max(dims) if dims else 0

    def omega(self) -> dict:
        return {name: self.boundaries[name] for name in self.gens.get(2, {})}

    def element(self, name: str) -> Element:
        """The generator `name` as an element of its dimension."""
        dim = self._dims[name]
        gen = self.generator(name)
        if dim == 1:
            return Word.of(gen)
        if dim == 2:
            return PeifferSequence.of(name, gen.source)
        return ModuleElement.generator(name, dim, gen.source)

    def coefficient_oracle(self) -> GroupOracle:
        if self.oracle is None:
            raise MissingOracle(f"complex {self.label or '?'} has no coefficient oracle")
        return self.oracle

    def truncated(self, max_dim: int) -> "CrossedComplex":
        gens = {n: dict(table) for n, table in self.gens.items() if n <= max_dim}
        names = {name for table in gens.values() for name in table}
        bounds = {name: b for name, b in self.boundaries.items() if name in names}
        return CrossedComplex(self.objects, gens, bounds, self.oracle, self.label)

    def is_reduced(self) -> bool:
        return len(self.objects) == 1


def dimension_of(x) -> int:
    if isinstance(x, str):
        return 0
    if isinstance(x, Word):
        return 1
    if isinstance(x, PeifferSequence):
        return 2
    return x.dim


def boundary(x, complex_: CrossedComplex, oracle: Optional[GroupOracle] = None) -> Element:
    """chi_n on an element (or generator name) of dimension n >= 2.

    `oracle` normalizes module coefficients; it defaults to the complex's own.
    """
    if isinstance(x, str):
        if x not in complex_._dims:
            raise UnknownGenerator(f"{x} is not a generator of {complex_.label or 'this complex'}")
        if complex_.dim_of(x) < 2:
            raise DimensionOutOfRange(f"{x} has dimension {complex_.dim_of(x)}; boundaries start in dimension 2")
        return complex_.boundaries[x]
    if isinstance(x, PeifferSequence):
        return boundary2(x, complex_.omega())
    if not isinstance(x, ModuleElement):
        raise DimensionOutOfRange(f"no boundary below dimension 2 ({x!r})")
    if x.dim == 3:
        out = PeifferSequence.identity(x.basepoint)
        for g in sorted(x.coords):
            image = complex_.boundaries[g]
            for w, n in x.coords[g].sorted_terms():
                out = out * image.act(w) ** n
        return out
    oracle = complex_.coefficient_oracle() if oracle is None else oracle
    out = ModuleElement.zero(x.dim - 1, x.basepoint)
    for g in sorted(x.coords):
        out = out + complex_.boundaries[g].times(x.coords[g], oracle, x.basepoint)
    return out


def _is_trivial(x, complex_, oracle):
    """Verdict-like (trivial, exact) for an element of any dimension >= 1."""
    if isinstance(x, Word):
        return x.is_identity(), True
    if isinstance(x, PeifferSequence):
        if oracle is None:
            oracle = FreeOracle(complex_.generators(1))
        verdict = equal_elements(x, PeifferSequence.identity(x.basepoint), complex_.omega(), oracle)
        return verdict.equal, verdict.exact
    return x.normalized(oracle).is_zero(), oracle.exact


def _own_relators_oracle(complex_: CrossedComplex) -> GroupOracle:
    """Free reduction, plus deletion of the complex's own dimension-2 relators when it has any."""
    gens1 = complex_.generators(1)
    relators = list(complex_.omega().values())
    return RewritingOracle(gens1, relators) if relators else FreeOracle(gens1)


def check_complex_axioms(complex_: CrossedComplex, max_dim: Optional[int] = None) -> AxiomReport:
    """Basepoint coherence and chi_{n-1} chi_n = 1 on every generator up to max_dim."""
    max_dim = complex_.max_dim if max_dim is None else max_dim
    report = AxiomReport(max_dim=max_dim)
    oracle = complex_.oracle
    if oracle is None:
        oracle = _own_relators_oracle(complex_)
        report.exact = report.exact and oracle.exact
    try:
        for dim in range(1, max_dim + 1):
            for gen in complex_.generators(dim):
                report.checked += 1
                problem = _basepoint_problem(complex_, dim, gen)
                if problem is None and dim >= 3:
                    trivial, exact = _is_trivial(boundary(complex_.boundaries[gen.name], complex_, oracle), complex_, oracle)
                    report.exact = report.exact and exact
                    if not trivial:
                        problem = f"boundary of boundary of {gen.name} is not trivial"
                if problem:
                    report.ok = False
                    report.witness = gen.name
                    report.messages.append(problem)
                    return report
    except XresError as exc:
        report.ok = False
        report.messages.append(str(exc))
    logger.debug("axioms: %d generators checked to dim %d", report.checked, max_dim)
    return report


def _basepoint_problem(complex_, dim, gen):
    objects = set(complex_.objects)
    if gen.source not in objects or gen.target not in objects:
        return f"{gen.name} has an endpoint outside the objects"
    if dim == 1:
        return None
    if gen.source != gen.target:
        return f"{gen.name} in dimension {dim} is not based at one object"
    if gen.name not in complex_.boundaries:
        return f"{gen.name} has no boundary"
    image = complex_.boundaries[gen.name]
    if dimension_of(image) != dim - 1:
        return f"boundary of {gen.name} has dimension {dimension_of(image)}"
    base = image.source if isinstance(image, Word) else image.basepoint
    if isinstance(image, Word) and not image.is_loop():
        return f"boundary of {gen.name} is not a loop"
    if base != gen.source:
        return f"boundary of {gen.name} is at {base}, generator at {gen.source}"
    if isinstance(image, ModuleElement):
        for g, r in image.coords.items():
            start = complex_.generator(g).source
            for w in r.terms:
                if w.source != start or w.target != base:
                    return f"coefficient {format_word(w)} of {g} in boundary of {gen.name} has wrong endpoints"
    return None


@dataclass
class ComplexMorphism:
    """Object map plus an image for every generator of the source."""
    source: CrossedComplex
    target: CrossedComplex
    object_map: dict
    images: dict = field(default_factory=dict)


def identity_morphism(complex_: CrossedComplex) -> ComplexMorphism:
    images = {name: complex_.element(name) for name in complex_._dims}
    return ComplexMorphism(complex_, complex_, {o: o for o in complex_.objects}, images)


def _image(f, name):
    if name not in f.images:
        raise MissingImage(f"no image for generator {name}")
    return f.images[name]


def _target_oracle(f):
    return f.target.oracle if f.target.oracle is not None else _own_relators_oracle(f.target)


def apply_morphism(f: ComplexMorphism, x: Element) -> Element:
    """Extend the generator images of f to any element of the source."""
    if isinstance(x, str):
        return f.object_map[x]
    if isinstance(x, Word):
        if not x.letters:
            return Word.identity(f.object_map[x.source])
        letters = []
        for gen, exp in x.letters:
            image = _image(f, gen.name)
            letters.extend(image.letters if exp > 0 else image.inverse().letters)
        return reduce(letters, f.object_map[x.source], f.object_map[x.target])
    if isinstance(x, PeifferSequence):
        out = PeifferSequence.identity(f.object_map[x.basepoint])
        for sym, sign, u in x.factors:
            out = out * (_image(f, sym) ** sign).act(apply_morphism(f, u))
        return out
    oracle = _target_oracle(f)
    base = f.object_map[x.basepoint]
    out = ModuleElement.zero(x.dim, base)
    for g in sorted(x.coords):
        coefficient = x.coords[g].map_words(lambda w: apply_morphism(f, w), oracle)
        out = out + _image(f, g).times(coefficient, oracle, base)
    return out


def compose(f: ComplexMorphism, g: ComplexMorphism) -> ComplexMorphism:
    """g after f."""
    images = {name: apply_morphism(g, image) for name, image in f.images.items()}
    objects = {o: g.object_map[p] for o, p in f.object_map.items()}
    return ComplexMorphism(f.source, g.target, objects, images)


def _elements_equal(a, b, target, oracle):
    if isinstance(a, Word):
        return a == b, True
    if isinstance(a, PeifferSequence):
        verdict = equal_elements(a, b, target.omega(), oracle)
        return verdict.equal, verdict.exact
    return a.normalized(oracle) == b.normalized(oracle), oracle.exact


def verify_morphism(f: ComplexMorphism, max_dim: Optional[int] = None) -> MorphismReport:
    """f chi = chi f on every source generator up to max_dim."""
    max_dim = f.source.max_dim if max_dim is None else max_dim
    report = MorphismReport()
    oracle = _target_oracle(f)
    try:
        for dim in range(1, max_dim + 1):
            for gen in f.source.generators(dim):
                report.checked += 1
                image = _image(f, gen.name)
                if dimension_of(image) != dim:
                    ok, exact = False, True
                elif dim == 1:
                    ok = image.source == f.object_map[gen.source] and image.target == f.object_map[gen.target]
                    exact = True
                else:
                    lhs = boundary(image, f.target, oracle)
                    rhs = apply_morphism(f, f.source.boundaries[gen.name])
                    ok, exact = _elements_equal(lhs, rhs, f.target, oracle)
                report.exact = report.exact and exact
                if not ok:
                    report.ok = False
                    report.witness = gen.name
                    report.messages.append(f"boundary does not commute on {gen.name}")
                    return report
    except XresError as exc:
        report.ok = False
        report.messages.append(str(exc))
    return report


@dataclass
class IdentitiesPresentation:
    """Generators (dim-3 boundaries) and relations (dim-4 boundaries) of the identities module."""
    generators: list = field(default_factory=list)
    relations: list = field(default_factory=list)

    def __str__(self):
        lines = [f"identity {name} : {format_sequence(c)}" for name, c in self.generators]
        lines += [f"relation {name} : {format_module(m)}" for name, m in self.relations]
        return "\n".join(lines)


def identities_presentation(complex_: CrossedComplex) -> IdentitiesPresentation:
    result = IdentitiesPresentation()
    for gen in complex_.generators(3):
        image = complex_.boundaries[gen.name]
        if not boundary2(image, complex_.omega()).is_identity():
            raise NonIdentityBoundary(f"boundary of {gen.name} is not an identity among relations")
        result.generators.append((gen.name, image))
    for gen in complex_.generators(4):
        result.relations.append((gen.name, complex_.boundaries[gen.name]))
    return result


# Dump format


def format_element(x: Element) -> str:
    if isinstance(x, Word):
        return format_word(x)
    if isinstance(x, PeifferSequence):
        return format_sequence(x)
    return format_module(x)


def format_dump(complex_: CrossedComplex) -> str:
    """Text dump ordered by (dimension, name)."""
    kind = complex_.oracle.kind if complex_.oracle is not None else "none"
    lines = [f"pi1: {kind}", "objects: " + ", ".join(sorted(complex_.objects))]
    for dim in sorted(complex_.gens):
        for gen in complex_.generators(dim):
            if dim == 1:
                lines.append(f"gen 1 {gen.name} : {gen.source} -> {gen.target}")
            else:
                lines.append(f"gen {dim} {gen.name} @ {gen.source}")
    for dim in sorted(complex_.gens):
        if dim < 2:
            continue
        for gen in complex_.generators(dim):
            lines.append(f"d {gen.name} = {format_element(complex_.boundaries[gen.name])}")
    return "\n".join(lines) + "\n"


def split_top(text: str, sep: str) -> list[str]:
    """Split on `sep` outside {} and [] groups."""
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            i += len(sep)
            start = i
            continue
        i += 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_dump_word(text: str, gens: dict, at: str = "*") -> Word:
    """Longest-match scan, so generator names may themselves contain `*` (as in `a⊗*`)."""
    text = text.strip()
    if text == "1":
        return Word.identity(at)
    names = sorted(gens, key=len, reverse=True)
    letters, i = [], 0
    while i < len(text):
        name = next((n for n in names if text.startswith(n, i)), None)
        if name is None:
            raise XresError(f"unknown dimension-1 generator at {text[i:]!r}")
        i += len(name)
        power = 1
        match = POWER.match(text, i)
        if match:
            power = int(match.group(1))
            i = match.end()
        letters.extend([(gens[name], 1 if power > 0 else -1)] * abs(power))
        if i < len(text):
            if text[i] != "*":
                raise XresError(f"expected `*` at {text[i:]!r}")
            i += 1
    return reduce(letters)


def parse_ring(text: str, gens: dict, start: str, end: str) -> GroupRingElement:
    terms = {}
    for term in split_top(text, " + "):
        if term == "0":
            continue
        n, _, word = term.partition("*")
        w = parse_dump_word(word, gens, start)
        if w.is_identity():
            w = Word.identity(start)
        terms[w] = terms.get(w, 0) + int(n)
    return GroupRingElement(terms)


def parse_dump(text: str, bound: Optional[int] = None) -> CrossedComplex:
    """Inverse of format_dump; the pi1 line decides how the coefficient oracle is rebuilt."""
    complex_ = CrossedComplex(objects=())
    kind = "none"
    pending = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("pi1:"):
                kind = line.split(":", 1)[1].strip()
            elif line.startswith("objects:"):
                complex_.objects = tuple(o.strip() for o in line.split(":", 1)[1].split(",") if o.strip())
            elif line.startswith("gen "):
                _, dim, rest = line.split(" ", 2)
                dim = int(dim)
                if dim == 1:
                    name, _, ends = rest.rpartition(" : ")
                    source, _, target = ends.partition(" -> ")
                    complex_.add(1, Generator(name, source.strip(), target.strip()))
                else:
                    name, _, at = rest.rpartition(" @ ")
                    complex_.add(dim, Generator(name, at.strip(), at.strip()))
            elif line.startswith("d "):
                name, _, expr = line[2:].partition(" = ")
                pending.append((number, name.strip(), expr.strip()))
            else:
                raise DumpSyntaxError(f"unrecognised line {line!r}", number)
        except DumpSyntaxError:
            raise
        except (ValueError, XresError) as exc:
            raise DumpSyntaxError(str(exc), number) from exc
    gens1 = complex_.gens.get(1, {})
    for number, name, expr in pending:
        try:
            dim = complex_.dim_of(name)
            at = complex_.generator(name).source
            complex_.boundaries[name] = _parse_element(complex_, dim - 1, expr, gens1, at)
        except KeyError as exc:
            raise DumpSyntaxError(f"unknown generator {exc}", number) from exc
        except (ValueError, XresError) as exc:
            raise DumpSyntaxError(str(exc), number) from exc
    complex_.oracle = _rebuild_oracle(complex_, kind, bound)
    return complex_


def _parse_element(complex_, dim, expr, gens1, at):
    if dim == 1:
        word = parse_dump_word(expr, gens1, at)
        return word if word.letters else Word.identity(at)
    if dim == 2:
        out = PeifferSequence.identity(at)
        if expr == "1":
            return out
        for factor in split_top(expr, " * "):
            head, brace, conj = factor.partition("^{")
            u = None
            if brace:
                u = parse_dump_word(conj.rstrip("}"), gens1)
            sign = 1
            if head.endswith("^-1"):
                head, sign = head[:-3], -1
            start = complex_.generator(head).source
            u = u if u is not None else Word.identity(start)
            out = out * PeifferSequence(((head, sign, u),), u.target)
        return out
    out = ModuleElement.zero(dim, at)
    if expr == "0":
        return out
    for term in split_top(expr, " + "):
        name, _, ring = term.partition(".[")
        start = complex_.generator(name).source
        out = out + ModuleElement(dim, at, {name: parse_ring(ring[:-1], gens1, start, at)})
    return out


def _rebuild_oracle(complex_, kind, bound):
    if kind == "none":
        return None
    gens1 = complex_.generators(1)
    relators = list(complex_.omega().values())
    if kind == "free":
        return FreeOracle(gens1)
    if kind in ("finite-table", "finite") and complex_.is_reduced():
        bound = config.ENUM_BOUND if bound is None else bound
        return coset_enumeration(gens1, relators, bound)
    return RewritingOracle(gens1, relators)
