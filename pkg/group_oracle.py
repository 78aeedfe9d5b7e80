"""Normal-form oracles for groups and groupoids, and exact group-ring arithmetic."""
import logging
from typing import Optional
from collections import deque

import config
from errors import NonComposablePath, NotFiniteWithinBound, OracleMismatch, UnknownGenerator
from words import Generator, Word, cyclically_reduce, format_word, reduce

logger = logging.getLogger(__name__)

SENTINEL = -1


class GroupOracle:
    """Base oracle: `normalize` sends equal elements to identical Words."""
    kind = "abstract"
    exact = True

    def __init__(self, generators):
        self.generators = {g.name: g for g in generators}

    def check_word(self, word: Word) -> None:
        for gen, _ in word.letters:
            if self.generators.get(gen.name) != gen:
                raise UnknownGenerator(f"{gen.name} is not a generator of this {self.kind} oracle")

    def normalize(self, word: Word) -> Word:
        raise NotImplementedError

    def identity(self, obj: str = "*") -> Word:
        return Word.identity(obj)

    def multiply(self, a: Word, b: Word) -> Word:
        return self.normalize(a * b)

    def inverse(self, a: Word) -> Word:
        return self.normalize(a.inverse())

    def equal(self, a: Word, b: Word) -> bool:
        return self.normalize(a) == self.normalize(b)

    def is_finite(self) -> bool:
        return False

    def elements(self) -> list[Word]:
        raise NotFiniteWithinBound(f"{self.kind} oracle has no element list")


class FreeOracle(GroupOracle):
    """Free group or free groupoid: normal form is free reduction."""
    kind = "free"

    def normalize(self, word: Word) -> Word:
        self.check_word(word)
        return word


class InfiniteCyclicOracle(FreeOracle):
    kind = "infinite-cyclic"

    def __init__(self, generator: Generator):
        super().__init__([generator])
        self.generator = generator

    def normalize(self, word: Word) -> Word:
        self.check_word(word)
        power = sum(e for _, e in word.letters)
        return Word.of(self.generator, power)


class CosetTable:
    """Coset table over the trivial subgroup, filled by relator scanning and coincidences.

    Slot 2i is right multiplication by generator i, slot 2i+1 by its inverse.
    """

    def __init__(self, ngens: int, rels):
        self.nslots = 2 * ngens
        self.rels = [list(rel) for rel in rels]
        for i in range(ngens):
            self.rels.insert(0, [2 * i + 1, 2 * i])
            self.rels.insert(0, [2 * i, 2 * i + 1])
        self.labels = []
        self.neighbors = []
        self.start = self.add_coset()

    def add_coset(self) -> int:
        c = len(self.labels)
        self.labels.append(c)
        self.neighbors.append(self.nslots * [SENTINEL])
        return c

    def find(self, c: int) -> int:
        labels = self.labels
        root = c
        while labels[root] != root:
            root = labels[root]
        while labels[c] != root:
            labels[c], c = root, labels[c]
        return root

    def unify(self, c1: int, c2: int) -> None:
        labels = self.labels
        neighbors = self.neighbors
        to_unify = [(c1, c2)]
        while to_unify:
            c1, c2 = to_unify.pop()
            c1 = self.find(c1)
            c2 = self.find(c2)
            if c1 == c2:
                continue
            c1, c2 = min(c1, c2), max(c1, c2)
            labels[c2] = c1
            for d in range(self.nslots):
                n1 = neighbors[c1][d]
                n2 = neighbors[c2][d]
                if n1 == SENTINEL:
                    neighbors[c1][d] = n2
                elif n2 != SENTINEL:
                    to_unify.append((n1, n2))

    def follow_step(self, c: int, d: int) -> int:
        c = self.find(c)
        row = self.neighbors[c]
        if row[d] == SENTINEL:
            row[d] = self.add_coset()
        return self.find(row[d])

    def follow_path(self, c: int, path: list[int]) -> int:
        c = self.find(c)
        for d in path:
            c = self.follow_step(c, d)
        return c

    def build(self, maxsize: int) -> Optional["CosetTable"]:
        """Scan every relator at every live coset; None once `maxsize` cosets were defined."""
        to_visit = 0
        while to_visit < len(self.labels):
            c = self.find(to_visit)
            if c == to_visit:
                for rel in self.rels:
                    self.unify(self.follow_path(c, rel), c)
            to_visit += 1
            if len(self.neighbors) > maxsize:
                return None
        return self

    def compress(self) -> list[list[int]]:
        """Live cosets renumbered from 0 (the start coset), with their rows."""
        live = [c for c in range(len(self.labels)) if self.find(c) == c]
        lookup = {c: i for i, c in enumerate(live)}
        rows = [[lookup[self.find(n)] for n in self.neighbors[c]] for c in live]
        return rows


class FiniteOracle(GroupOracle):
    """Finite group given by right-multiplication moves of each generator on element indices.

    Element 0 is the identity; `words[i]` is the shortlex-least word over positive letters.
    """
    kind = "finite-table"

    def __init__(self, generators, moves: dict):
        super().__init__(generators)
        self.order_ = len(next(iter(moves.values()))) if moves else 1
        self.moves = {name: list(perm) for name, perm in moves.items()}
        self.inverse_moves = {}
        for name, perm in self.moves.items():
            inv = [0] * len(perm)
            for i, j in enumerate(perm):
                inv[j] = i
            self.inverse_moves[name] = inv
        self.words = self._shortlex_words(generators)
        self.index = {w: i for i, w in enumerate(self.words)}
        self._cayley = {}

    def _shortlex_words(self, generators):
        words = [None] * self.order_
        words[0] = Word.identity("*")
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for gen in generators:
                j = self.moves[gen.name][i]
                if words[j] is None:
                    words[j] = words[i] * Word.of(gen)
                    queue.append(j)
        if any(w is None for w in words):
            raise OracleMismatch("generators do not reach every element")
        return words

    def is_finite(self) -> bool:
        return True

    @property
    def order(self) -> int:
        return self.order_

    def elements(self) -> list[Word]:
        return list(self.words)

    def locate(self, word: Word, start: int = 0) -> int:
        """Index of (element `start`) * word."""
        i = start
        for gen, exp in word.letters:
            if self.generators.get(gen.name) != gen:
                raise UnknownGenerator(f"{gen.name} is not a generator of this finite oracle")
            i = (self.moves if exp > 0 else self.inverse_moves)[gen.name][i]
        return i

    def normalize(self, word: Word) -> Word:
        return self.words[self.locate(word)]

    def product_index(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._cayley:
            self._cayley[key] = self.locate(self.words[j], i)
        return self._cayley[key]

    def multiply(self, a: Word, b: Word) -> Word:
        return self.words[self.product_index(self.locate(a), self.locate(b))]

    def inverse_index(self, i: int) -> int:
        return next(j for j in range(self.order_) if self.product_index(i, j) == 0)

    def label(self, word: Word) -> int:
        return format_word(self.normalize(word))


class RewritingOracle(GroupOracle):
    """Free reduction plus Dehn-style replacement by shorter halves of relators.

    Sound (equal outputs mean equal elements) but not complete, so `exact` is False.
    """
    kind = "rewriting"
    exact = False

    def __init__(self, generators, relators: list[Word]):
        super().__init__(generators)
        self.relators = [cyclically_reduce(r) for r in relators if r.letters]
        self.rotations = set()
        for rel in self.relators:
            for candidate in (rel, rel.inverse()):
                letters = candidate.letters
                for i in range(len(letters)):
                    self.rotations.add(letters[i:] + letters[:i])
        self.rotations = sorted(self.rotations, key=lambda r: [_letter_key(x) for x in r])

    def normalize(self, word: Word) -> Word:
        self.check_word(word)
        while True:
            step = self._rewrite_once(word)
            if step is None:
                return word
            word = step

    def _rewrite_once(self, word):
        letters = word.letters
        for rot in self.rotations:
            n = len(rot)
            for k in range(n, (n + 1) // 2 - 1, -1):
                piece = rot[:k]
                rest = tuple((g, -e) for g, e in reversed(rot[k:]))
                if k < n - k:
                    break
                if k == n - k and _word_key(rest) >= _word_key(piece):
                    continue
                for i in range(len(letters) - k + 1):
                    if letters[i:i + k] == piece:
                        new = letters[:i] + rest + letters[i + k:]
                        return reduce(new, word.source, word.target)
        return None


def _letter_key(letter):
    gen, exp = letter
    return (gen.name, 0 if exp > 0 else 1)


def _word_key(letters):
    return (len(letters), [_letter_key(x) for x in letters])


class ProductOracle(GroupOracle):
    """Direct product of two groupoids, on letters `g⊗q` (left moves) and `p⊗h` (right moves).

    Normal form: left part first (at the source's right object), then right part.
    """
    kind = "direct-product"

    def __init__(self, left: GroupOracle, right: GroupOracle, letters: dict, objects: dict):
        """`letters`: product Generator -> (side, component Generator, fixed object)."""
        super().__init__(letters.keys())
        self.left = left
        self.right = right
        self.exact = left.exact and right.exact
        self.letters = {g.name: info for g, info in letters.items()}
        self.objects = dict(objects)
        self.back = {}
        for gen, (side, comp, fixed) in letters.items():
            self.back[(side, comp.name, fixed)] = gen

    def object_of(self, left_obj: str, right_obj: str) -> str:
        return next(o for o, pair in self.objects.items() if pair == (left_obj, right_obj))

    def normalize(self, word: Word) -> Word:
        self.check_word(word)
        src_left, src_right = self.objects[word.source]
        tgt_left, tgt_right = self.objects[word.target]
        parts = ([], [])
        for gen, exp in word.letters:
            side, comp, _ = self.letters[gen.name]
            parts[side].append((comp, exp))
        left = self.left.normalize(reduce(parts[0], src_left, tgt_left))
        right = self.right.normalize(reduce(parts[1], src_right, tgt_right))
        out = [(self.back[(0, g.name, src_right)], e) for g, e in left.letters]
        out += [(self.back[(1, g.name, tgt_left)], e) for g, e in right.letters]
        return reduce(out, word.source, word.target)


class MappingTorusOracle(GroupOracle):
    """G semidirect Z for an automorphism k of G, with z^-1 g z = k(g).

    Normal form g*z^j with g normalized in G.
    """
    kind = "mapping-torus"

    def __init__(self, base: GroupOracle, images: dict, stable: Generator, inverse_images: Optional[dict] = None):
        super().__init__(list(base.generators.values()) + [stable])
        self.base = base
        self.exact = base.exact
        self.stable = stable
        self.images = dict(images)
        if inverse_images is None:
            inverse_images = invert_automorphism(base, self.images)
        self.inverse_images = dict(inverse_images)
        self._power_cache = {}

    def twist(self, name: str, j: int) -> Word:
        """k^j applied to the generator `name`, normalized."""
        key = (name, j)
        if key not in self._power_cache:
            if j == 0:
                value = Word.of(self.base.generators[name])
            else:
                step = self.images if j > 0 else self.inverse_images
                prev = self.twist(name, j - 1 if j > 0 else j + 1)
                value = self.base.normalize(prev.substitute(step, "*", "*"))
            self._power_cache[key] = value
        return self._power_cache[key]

    def normalize(self, word: Word) -> Word:
        self.check_word(word)
        g = Word.identity("*")
        j = 0
        for gen, exp in word.letters:
            if gen.name == self.stable.name:
                j += exp
                continue
            h = self.twist(gen.name, -j)
            g = self.base.normalize(g * (h if exp > 0 else h.inverse()))
        return g * Word.of(self.stable, j)


def invert_automorphism(base: GroupOracle, images: dict) -> dict:
    """Images of the inverse automorphism, by search for finite G or by k o k = id."""
    square = {
        name: base.normalize(img.substitute(images, "*", "*")) for name, img in images.items()
    }
    if all(square[name] == Word.of(base.generators[name]) for name in images):
        return dict(images)
    if not base.is_finite():
        raise OracleMismatch("inverse automorphism must be supplied for infinite groups")
    inverse = {}
    for name, gen in base.generators.items():
        target = Word.of(gen)
        for element in base.elements():
            if base.normalize(element.substitute(images, "*", "*")) == target:
                inverse[name] = element
                break
        else:
            raise OracleMismatch(f"automorphism is not onto: nothing maps to {name}")
    return inverse


def coset_enumeration(generators, relators, bound: int) -> FiniteOracle:
    """Finite oracle for <generators | relators> or NotFiniteWithinBound."""
    generators = list(generators)
    slot = {g.name: i for i, g in enumerate(generators)}
    rels = []
    for rel in relators:
        for gen, _ in rel.letters:
            if gen.name not in slot:
                raise UnknownGenerator(f"relator uses unknown generator {gen.name}")
        rels.append([2 * slot[g.name] + (0 if e > 0 else 1) for g, e in rel.letters])
    table = CosetTable(len(generators), rels)
    maxsize = bound * config.COSET_SLACK + 100
    if table.build(maxsize) is None:
        raise NotFiniteWithinBound(f"coset enumeration exceeded {maxsize} cosets (bound {bound})")
    rows = table.compress()
    logger.debug("coset enumeration: %d cosets defined, %d live", len(table.labels), len(rows))
    if len(rows) > bound:
        raise NotFiniteWithinBound(f"group has {len(rows)} elements, bound is {bound}")
    moves = {g.name: [row[2 * i] for row in rows] for i, g in enumerate(generators)}
    return FiniteOracle(generators, moves)


def build_finite_oracle(presentation, bound: Optional[int] = None) -> FiniteOracle:
    """Enumerate a one-object presentation into a multiplication-table oracle."""
    bound = config.ENUM_BOUND if bound is None else bound
    if bound < 1:
        raise NotFiniteWithinBound("bound must be positive")
    if len(presentation.objects) > 1:
        raise OracleMismatch("finite enumeration needs a one-object presentation")
    return coset_enumeration(presentation.generators, presentation.relators.values(), bound)


def normalize(g: Word, o: GroupOracle) -> Word:
    return o.normalize(g)


class GroupRingElement:
    """Finite integer combination of normalized group(oid) elements."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms = {w: n for w, n in (terms or {}).items() if n}

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    @classmethod
    def one(cls, obj: str = "*") -> "GroupRingElement":
        return cls({Word.identity(obj): 1})

    @classmethod
    def of(cls, word: Word, coefficient: int = 1) -> "GroupRingElement":
        return cls({word: coefficient})

    @classmethod
    def from_words(cls, words, oracle: GroupOracle) -> "GroupRingElement":
        total = {}
        for word, n in words:
            key = oracle.normalize(word)
            total[key] = total.get(key, 0) + n
        return cls(total)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({} if other == 0 else {Word.identity(): other})
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        terms = dict(self.terms)
        for w, n in other.terms.items():
            terms[w] = terms.get(w, 0) + n
        return GroupRingElement(terms)

    def __neg__(self):
        return GroupRingElement({w: -n for w, n in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int) -> "GroupRingElement":
        return GroupRingElement({w: n * c for w, c in self.terms.items()})

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def times(self, other: "GroupRingElement", oracle: GroupOracle) -> "GroupRingElement":
        """Convolution; products of non-composable groupoid arrows vanish."""
        terms = {}
        for u, m in self.terms.items():
            for v, n in other.terms.items():
                if u.target != v.source:
                    continue
                w = oracle.multiply(u, v)
                terms[w] = terms.get(w, 0) + m * n
        return GroupRingElement(terms)

    def act(self, word: Word, oracle: GroupOracle) -> "GroupRingElement":
        """Right multiplication by a group element."""
        return self.times(GroupRingElement.of(oracle.normalize(word)), oracle)

    def map_words(self, fn, oracle: GroupOracle) -> "GroupRingElement":
        """Apply a word map to every key and renormalize."""
        return GroupRingElement.from_words(((fn(w), n) for w, n in self.terms.items()), oracle)

    def normalized(self, oracle: GroupOracle) -> "GroupRingElement":
        return GroupRingElement.from_words(self.terms.items(), oracle)

    def coefficient(self, word: Word) -> int:
        return self.terms.get(word, 0)

    def sorted_terms(self) -> list[tuple]:
        return sorted(self.terms.items(), key=lambda item: (len(item[0]), format_word(item[0])))

    def __str__(self):
        return format_ring(self)

    def __repr__(self):
        return f"GroupRingElement({format_ring(self)!r})"


def format_ring(x: GroupRingElement) -> str:
    """`n1*g1 + n2*g2`; zero prints as `0`."""
    if not x.terms:
        return "0"
    return " + ".join(f"{n}*{format_word(w)}" for w, n in x.sorted_terms())


def ring_apply(x: GroupRingElement, y, o: GroupOracle, op: str = "mul") -> GroupRingElement:
    """Add, subtract, scale (y an int) or multiply two elements of the group ring over `o`."""
    try:
        for element in (x, y):
            if isinstance(element, GroupRingElement):
                for w in element.terms:
                    if o.normalize(w) != w:
                        raise OracleMismatch(f"{format_word(w)} is not a normal form of this oracle")
    except (UnknownGenerator, NonComposablePath) as exc:
        raise OracleMismatch(str(exc)) from exc
    if isinstance(y, int):
        return x.scale(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    return x.times(y, o)


def norm_element(oracle: GroupOracle) -> GroupRingElement:
    """Sum of all elements of a finite group."""
    return GroupRingElement({w: 1 for w in oracle.elements()})
