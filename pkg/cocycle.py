"""Non-abelian 2-cocycles with values in the inner automorphism crossed module K -> Aut(K)."""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

import config
from errors import NotFiniteWithinBound, OracleMismatch, TooLarge, UnverifiedCocycle
from crossed_complex import CrossedComplex
from group_oracle import FiniteOracle, coset_enumeration
from models import CocycleReport, ExtensionReport
from presentation import Presentation, format_presentation
from words import Generator, Word, format_word, reduce

logger = logging.getLogger(__name__)


def extend_map(source: FiniteOracle, target: FiniteOracle, images: dict) -> Optional[tuple]:
    """Index map source -> target extending generator images, or None if not a homomorphism."""
    phi = []
    for word in source.elements():
        i = 0
        for gen, _ in word.letters:
            i = target.product_index(i, images[gen.name])
        phi.append(i)
    for name, moves in source.moves.items():
        for i, j in enumerate(moves):
            if phi[j] != target.product_index(phi[i], images[name]):
                return None
    return tuple(phi)


def element_order(o: FiniteOracle, i: int) -> int:
    n, j = 1, i
    while j != 0:
        j = o.product_index(j, i)
        n += 1
    return n


@dataclass
class InnerCrossedModule:
    """Aut(K) as permutations of element indices of K, with boundary by conjugation.

    Automorphisms act on the right, so (alpha beta)(k) = beta(alpha(k)).
    """
    kernel: FiniteOracle
    automorphisms: list
    relators: list = field(default_factory=list)
    name: str = "K"

    def __post_init__(self):
        self.index = {alpha: i for i, alpha in enumerate(self.automorphisms)}

    @property
    def order(self) -> int:
        return len(self.automorphisms)

    @property
    def identity(self) -> tuple:
        return tuple(range(self.kernel.order))

    def multiply(self, alpha: tuple, beta: tuple) -> tuple:
        return tuple(beta[alpha[i]] for i in range(len(alpha)))

    def inverse(self, alpha: tuple) -> tuple:
        out = [0] * len(alpha)
        for i, j in enumerate(alpha):
            out[j] = i
        return tuple(out)

    def boundary(self, k: int) -> tuple:
        """Conjugation x -> k^-1 x k."""
        o = self.kernel
        back = o.inverse_index(k)
        return tuple(o.product_index(o.product_index(back, i), k) for i in range(o.order))

    def element(self, word: Word) -> int:
        return self.kernel.locate(word)

    def automorphism(self, images: dict) -> tuple:
        """The automorphism with the given generator images (Words over K)."""
        indices = {name: self.kernel.locate(w) for name, w in images.items()}
        alpha = extend_map(self.kernel, self.kernel, indices)
        if alpha is None or alpha not in self.index:
            raise OracleMismatch(f"images {', '.join(map(format_word, images.values()))} do not define an automorphism")
        return alpha

    def word_image(self, word: Word, k1: dict) -> tuple:
        """k1 extended to a word over the dimension-1 generators."""
        out = self.identity
        for gen, exp in word.letters:
            alpha = k1[gen.name]
            out = self.multiply(out, alpha if exp > 0 else self.inverse(alpha))
        return out


def automorphism_oracle(o: FiniteOracle, relators: Optional[list] = None, name: str = "K") -> InnerCrossedModule:
    """Aut(K) by enumerating generator images of a small finite K."""
    if not o.is_finite():
        raise TooLarge(f"kernel must be finite, got a {o.kind} oracle")
    if o.order > config.AUT_LIMIT:
        raise TooLarge(f"|K| = {o.order} exceeds the limit {config.AUT_LIMIT}")
    names = list(o.generators)
    found = set()
    for choice in product(range(o.order), repeat=len(names)):
        alpha = extend_map(o, o, dict(zip(names, choice)))
        if alpha is not None and len(set(alpha)) == o.order:
            found.add(alpha)
    autos = sorted(found)
    logger.debug("automorphisms of %s: %d", name, len(autos))
    return InnerCrossedModule(o, autos, list(relators or []), name)


def coboundary_action(m: InnerCrossedModule, k: int) -> tuple:
    return m.boundary(k)


@dataclass
class CocycleData:
    """k1: dimension-1 generator -> automorphism; k2: dimension-2 generator -> index in K."""
    k1: dict
    k2: dict


def verify_cocycle(c: CocycleData, resolution: CrossedComplex, m: InnerCrossedModule) -> CocycleReport:
    """boundary(k2 r) = k1(omega r) on dimension 2; k2 of every dimension-3 boundary is trivial."""
    report = CocycleReport()
    o = m.kernel
    try:
        for gen in resolution.generators(1):
            if gen.name not in c.k1:
                raise KeyError(gen.name)
        for gen in resolution.generators(2):
            report.checked += 1
            lhs = m.boundary(c.k2[gen.name])
            rhs = m.word_image(resolution.boundaries[gen.name], c.k1)
            if lhs != rhs:
                report.ok = False
                report.witness = gen.name
                report.messages.append(f"boundary of k2({gen.name}) differs from k1 of its relator")
                return report
        for gen in resolution.generators(3):
            report.checked += 1
            total = 0
            for x, e, u in resolution.boundaries[gen.name].factors:
                k = c.k2[x] if e > 0 else o.inverse_index(c.k2[x])
                total = o.product_index(total, m.word_image(u, c.k1)[k])
            if total != 0:
                report.ok = False
                report.witness = gen.name
                report.messages.append(f"k2 of the boundary of {gen.name} is not trivial")
                return report
    except KeyError as exc:
        report.ok = False
        report.witness = exc.args[0]
        report.messages.append(f"no cocycle value for {exc.args[0]}")
    return report


def table_relators(o: FiniteOracle) -> list[Word]:
    """Relators w_i g w_{ig}^-1 read off the multiplication table."""
    out = []
    for i, word in enumerate(o.elements()):
        for name, gen in o.generators.items():
            out.append(word * Word.of(gen) * o.words[o.moves[name][i]].inverse())
    return [r for r in out if r.letters]


def extension_presentation(c: CocycleData, resolution: CrossedComplex, m: InnerCrossedModule) -> tuple[Presentation, dict]:
    """X1 and the generators of K, with K relators, action relators and omega(r) = k2(r)."""
    o = m.kernel
    taken = {g.name for g in resolution.generators(1)}
    rename = {g: (f"k_{g}" if g in taken else g) for g in o.generators}
    kgens = {name: Generator(rename[name]) for name in o.generators}

    def kword(word):
        return reduce([(kgens[g.name], e) for g, e in word.letters])

    relators = {}
    for n, rel in enumerate(m.relators or table_relators(o), 1):
        relators[f"K{n}"] = kword(rel)
    for x in resolution.generators(1):
        for name, g in kgens.items():
            image = m.word_image(Word.of(x), c.k1)[o.locate(Word.of(o.generators[name]))]
            rel = Word.of(x, -1) * Word.of(g) * Word.of(x) * kword(o.words[image]).inverse()
            relators[f"act_{x.name}_{g.name}"] = rel
    for r in resolution.generators(2):
        relators[r.name] = resolution.boundaries[r.name] * kword(o.words[c.k2[r.name]]).inverse()
    generators = tuple(resolution.generators(1)) + tuple(kgens[name] for name in o.generators)
    return Presentation(("*",), generators, relators), kgens


def build_extension(
    c: CocycleData, resolution: CrossedComplex, m: InnerCrossedModule, bound: Optional[int] = None
) -> ExtensionReport:
    """Table, surjection and identification for finite G; a presentation otherwise."""
    check = verify_cocycle(c, resolution, m)
    if not check.ok:
        raise UnverifiedCocycle(f"cocycle fails at {check.witness}: {'; '.join(check.messages)}")
    p, kgens = extension_presentation(c, resolution, m)
    report = ExtensionReport(kernel_order=m.kernel.order, presentation=format_presentation(p))
    g = resolution.oracle
    if g is None or not g.is_finite():
        report.messages.append("G is not known to be finite; E is given by its presentation")
        return report
    report.quotient_order = g.order
    expected = m.kernel.order * g.order
    bound = max(expected, 1) if bound is None else bound
    try:
        e = coset_enumeration(p.generators, p.relators.values(), bound)
    except NotFiniteWithinBound as exc:
        report.messages.append(str(exc))
        return report
    report.order = e.order
    images = {x.name: g.locate(Word.of(x)) for x in resolution.generators(1)}
    images.update({k.name: 0 for k in kgens.values()})
    pi = extend_map(e, g, images)
    report.surjection_ok = pi is not None and len(set(pi)) == g.order
    kernel_words = {e.locate(reduce([(kgens[x.name], s) for x, s in w.letters])) for w in m.kernel.elements()}
    report.kernel_ok = bool(pi) and sum(1 for i in pi if i == 0) == m.kernel.order and len(kernel_words) == m.kernel.order
    if e.order != expected:
        report.messages.append(f"|E| = {e.order}, expected |K||G| = {expected}")
    if e.order <= config.IDENTIFY_LIMIT:
        product_group = direct_product(m, resolution)
        report.isomorphism_type = identify(e, extra=[(f"{m.name} x G", product_group)])
    return report


def direct_product(m: InnerCrossedModule, resolution: CrossedComplex) -> Callable[[int], FiniteOracle]:
    """K x G as a presentation, enumerated."""
    o = m.kernel
    taken = {g.name for g in resolution.generators(1)}
    kgens = {name: Generator(f"k_{name}" if name in taken else name) for name in o.generators}

    def kword(word):
        return reduce([(kgens[g.name], e) for g, e in word.letters])

    rels = [kword(r) for r in (m.relators or table_relators(o))]
    rels += list(resolution.omega().values())
    for x in resolution.generators(1):
        for k in kgens.values():
            rels.append(Word.of(x, -1) * Word.of(k, -1) * Word.of(x) * Word.of(k))
    gens = list(resolution.generators(1)) + list(kgens.values())
    return lambda bound: coset_enumeration(gens, rels, bound)


def _library(n):
    a, b = Generator("a"), Generator("b")
    A, B = Word.of(a), Word.of(b)
    out = [(f"C{n}", ([a], [A ** n]))]
    if n == 4:
        out.append(("C2 x C2", ([a, b], [A ** 2, B ** 2, (A * B) ** 2])))
    if n == 6:
        out.append(("S3", ([a, b], [A ** 2, B ** 3, (A * B) ** 2])))
    if n % 2 == 0 and n >= 8:
        out.append((f"D{n // 2}", ([a, b], [A ** (n // 2), B ** 2, (B * A) ** 2])))
    if n == 24:
        out.append(("S4", ([a, b], [A ** 2, B ** 3, (A * B) ** 4])))
    return out


def isomorphic(e: FiniteOracle, h: FiniteOracle) -> bool:
    """Search images of the generators of e in h with matching element orders."""
    if e.order != h.order:
        return False
    names = list(e.generators)
    orders = {name: element_order(e, e.locate(Word.of(e.generators[name]))) for name in names}
    choices = [[j for j in range(h.order) if element_order(h, j) == orders[name]] for name in names]
    for pick in product(*choices):
        phi = extend_map(e, h, dict(zip(names, pick)))
        if phi is not None and len(set(phi)) == h.order:
            return True
    return False


def identify(e: FiniteOracle, extra=()) -> Optional[str]:
    """Name of a library group isomorphic to e, or None."""
    for name, (gens, rels) in _library(e.order):
        if isomorphic(e, coset_enumeration(gens, rels, e.order)):
            return name
    for name, build in extra:
        try:
            candidate = build(e.order)
        except NotFiniteWithinBound:
            continue
        if isomorphic(e, candidate):
            return name
    return None
