"""Group and groupoid presentations: grammar, printing and validation.

Grammar::

    [obj< p,q,... >] gp< g1, g2 : p -> q, ... | name = word, word, ... >

Words use `*`, `^n` (integer powers, including negative), parentheses and `1`.
Unnamed relators are called r1, r2, ... in order.
"""
import re
from dataclasses import dataclass, field

from errors import NonComposablePath, NonLoopRelator, PresentationSyntaxError
from models import ValidationReport
from words import Generator, Word, format_word, reduce

TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>-?\d+)|(?P<arrow>->)|(?P<punct>[<>|,=*^():]))")


@dataclass(frozen=True)
class Presentation:
    """Objects, generators X1 and the relator function omega: X2 -> F(X1)."""
    objects: tuple
    generators: tuple
    relators: dict = field(default_factory=dict)
    adjusted: tuple = ()

    def generator(self, name: str) -> Generator:
        return next(g for g in self.generators if g.name == name)

    def is_reduced(self) -> bool:
        return len(self.objects) == 1


def tokenize(text: str) -> list[tuple]:
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationSyntaxError(f"unexpected character {text[pos:].strip()[:1]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.gens = {}

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise PresentationSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        if kind is not None and tok[0] != kind:
            raise PresentationSyntaxError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        objects = ["*"]
        if self.peek()[1] == "obj":
            self.take("obj")
            self.take("<")
            objects = [self.take(kind="name")[1]]
            while self.peek()[1] == ",":
                self.take(",")
                objects.append(self.take(kind="name")[1])
            self.take(">")
        self.objects = objects
        self.take("gp")
        self.take("<")
        generators = []
        if self.peek()[1] not in ("|", ">"):
            generators.append(self.generator())
            while self.peek()[1] == ",":
                self.take(",")
                generators.append(self.generator())
        relators, adjusted = {}, []
        if self.peek()[1] == "|":
            self.take("|")
            if self.peek()[1] != ">":
                self.relator(relators, adjusted)
                while self.peek()[1] == ",":
                    self.take(",")
                    self.relator(relators, adjusted)
        self.take(">")
        self.take(kind="end")
        return Presentation(tuple(objects), tuple(generators), relators, tuple(adjusted))

    def generator(self):
        kind, name, pos = self.take(kind="name")
        if name in self.gens:
            raise PresentationSyntaxError(f"duplicate generator {name}", pos)
        source = target = self.objects[0]
        if self.peek()[1] == ":":
            self.take(":")
            source = self.object_name()
            self.take("->", kind="arrow")
            target = self.object_name()
        elif len(self.objects) > 1:
            raise PresentationSyntaxError(f"generator {name} needs `: source -> target`", pos)
        gen = Generator(name, source, target)
        self.gens[name] = gen
        return gen

    def object_name(self):
        _, name, pos = self.take(kind="name")
        if name not in self.objects:
            raise PresentationSyntaxError(f"unknown object {name}", pos)
        return name

    def relator(self, relators, adjusted):
        start = self.peek()[2]
        name = None
        tok, nxt = self.tokens[self.i], self.tokens[self.i + 1]
        if tok[0] == "name" and nxt[1] == "=":
            name = tok[1]
            if name in relators:
                raise PresentationSyntaxError(f"duplicate relator name {name}", tok[2])
            self.i += 2
        letters = self.expr()
        name = name or f"r{len(relators) + 1}"
        try:
            word = reduce(letters, None if letters else self.objects[0])
        except NonComposablePath as exc:
            raise PresentationSyntaxError(f"relator {name}: {exc}", start) from exc
        if not word.is_loop():
            raise NonLoopRelator(f"relator {name} = {format_word(word)} is not a loop")
        if len(word.letters) != len(letters):
            adjusted.append(name)
        relators[name] = word

    def expr(self):
        letters = self.factor()
        while self.peek()[1] == "*":
            self.take("*")
            letters = letters + self.factor()
        return letters

    def factor(self):
        kind, value, pos = self.peek()
        if value == "(":
            self.take("(")
            letters = self.expr()
            self.take(")")
        elif kind == "int" and value == "1":
            self.take()
            letters = []
        elif kind == "name":
            self.take()
            if value not in self.gens:
                raise PresentationSyntaxError(f"unknown generator {value}", pos)
            letters = [(self.gens[value], 1)]
        else:
            raise PresentationSyntaxError(f"unexpected {value or 'end of input'!r}", pos)
        if self.peek()[1] == "^":
            self.take("^")
            power = int(self.take(kind="int")[1])
            base = letters if power >= 0 else [(g, -e) for g, e in reversed(letters)]
            letters = base * abs(power)
        return letters


def parse_presentation(text: str) -> Presentation:
    """Parse the presentation grammar; raises PresentationSyntaxError with a position."""
    return _Parser(text).parse()


def parse_word(text: str, generators) -> Word:
    """Parse a word over the given generators (same word grammar as relators)."""
    parser = _Parser(text)
    parser.gens = {g.name: g for g in generators}
    parser.objects = sorted({g.source for g in generators} | {g.target for g in generators}) or ["*"]
    letters = parser.expr()
    parser.take(kind="end")
    if not letters:
        return Word.identity(parser.objects[0] if len(parser.objects) == 1 else "*")
    return reduce(letters)


def format_presentation(p: Presentation) -> str:
    """Canonical print; parses back to an equal presentation."""
    head = ""
    if len(p.objects) > 1 or p.objects != ("*",):
        head = "obj< " + ", ".join(p.objects) + " > "
    gens = []
    for g in p.generators:
        if head:
            gens.append(f"{g.name} : {g.source} -> {g.target}")
        else:
            gens.append(g.name)
    rels = [f"{name} = {format_word(w)}" for name, w in p.relators.items()]
    body = ", ".join(gens)
    if rels:
        body += " | " + ", ".join(rels)
    return f"{head}gp< {body} >"


def validate(p: Presentation) -> ValidationReport:
    """Report trivial relators, repeated relator values and relators reduced while parsing."""
    report = ValidationReport(ok=True)
    seen = {}
    for name, word in p.relators.items():
        if not word.letters:
            report.warnings.append(f"relator {name} is trivial")
        key = (word.letters, word.source)
        if key in seen:
            report.warnings.append(f"relators {seen[key]} and {name} have the same value {format_word(word)}")
        else:
            seen[key] = name
    for name in p.adjusted:
        report.warnings.append(f"relator {name} was freely reduced on input")
    report.ok = not report.warnings
    return report
