"""Words in free groups and free groupoids on a finite graph of generators."""
from dataclasses import dataclass
from typing import Optional

from errors import NonComposablePath


@dataclass(frozen=True, order=True)
class Generator:
    """A free generator name: source -> target (a loop for groups and dims >= 2)."""
    name: str
    source: str = "*"
    target: str = "*"

    def __str__(self):
        return self.name

    def start(self, exponent: int) -> str:
        return self.source if exponent > 0 else self.target

    def end(self, exponent: int) -> str:
        return self.target if exponent > 0 else self.source


def reduce(letters, source: Optional[str] = None, target: Optional[str] = None) -> "Word":
    """Freely reduce a sequence of (Generator, +-1) letters into a Word.

    `source`/`target` pin the endpoints; they are required for empty input
    unless the single object "*" is meant.
    """
    stack = []
    here = source
    for gen, exp in letters:
        if exp not in (1, -1):
            raise NonComposablePath(f"exponent {exp} on {gen.name} is not +-1")
        if here is not None and gen.start(exp) != here:
            raise NonComposablePath(
                f"{gen.name}^{exp} starts at {gen.start(exp)}, path is at {here}"
            )
        if source is None:
            source = gen.start(exp)
        here = gen.end(exp)
        if stack and stack[-1][0] == gen and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((gen, exp))
    if source is None:
        source = target if target is not None else "*"
        here = source
    if target is not None and here != target:
        raise NonComposablePath(f"path ends at {here}, expected {target}")
    return Word(tuple(stack), source, here)


@dataclass(frozen=True)
class Word:
    """Freely reduced word with explicit endpoints."""
    letters: tuple = ()
    source: str = "*"
    target: str = "*"

    @classmethod
    def identity(cls, obj: str = "*") -> "Word":
        return cls((), obj, obj)

    @classmethod
    def of(cls, gen: Generator, exponent: int = 1) -> "Word":
        if exponent == 0:
            return cls.identity(gen.source)
        return cls(((gen, 1),), gen.source, gen.target) ** exponent

    def is_identity(self) -> bool:
        return not self.letters

    def is_loop(self) -> bool:
        return self.source == self.target

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        if self.target != other.source:
            raise NonComposablePath(
                f"cannot compose {self} ending at {self.target} with {other} starting at {other.source}"
            )
        return reduce(self.letters + other.letters, self.source, other.target)

    def inverse(self) -> "Word":
        return Word(
            tuple((g, -e) for g, e in reversed(self.letters)), self.target, self.source
        )

    __invert__ = inverse

    def __pow__(self, n):
        if n == 0:
            return Word.identity(self.source)
        base = self if n > 0 else self.inverse()
        if not base.is_loop() and abs(n) > 1:
            raise NonComposablePath(f"cannot raise non-loop {self} to power {n}")
        if not base.letters:
            return base
        if abs(n) == 1:
            return base
        return reduce(base.letters * abs(n), base.source, base.target)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def substitute(self, images: dict, source: Optional[str] = None, target: Optional[str] = None) -> "Word":
        """Replace each generator by images[name] (a Word); endpoints default to the images'."""
        letters = []
        for gen, exp in self.letters:
            image = images[gen.name]
            letters.extend(image.letters if exp > 0 else image.inverse().letters)
        if source is None and self.letters:
            first, exp = self.letters[0]
            image = images[first.name]
            source = image.source if exp > 0 else image.target
        return reduce(letters, source, target)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r}, {self.source}->{self.target})"


def format_word(word: Word) -> str:
    """Print as `a^3*b^-2`; the empty word prints as `1`."""
    if not word.letters:
        return "1"
    parts = []
    run_gen, run = None, 0
    for gen, exp in word.letters + ((None, 0),):
        if run_gen is not None and gen == run_gen and (exp > 0) == (run > 0):
            run += exp
            continue
        if run_gen is not None:
            parts.append(run_gen.name if run == 1 else f"{run_gen.name}^{run}")
        run_gen, run = gen, exp
    return "*".join(parts)


def conjugate(w: Word, u: Word) -> Word:
    """w^u = u^-1 w u for a loop w at the source of u."""
    if not w.is_loop():
        raise NonComposablePath(f"{w} is not a loop")
    if u.source != w.target:
        raise NonComposablePath(f"conjugator {u} starts at {u.source}, word is at {w.target}")
    return u.inverse() * w * u


def invert(w: Word) -> Word:
    return w.inverse()


def cyclic_rotations(word: Word) -> list[Word]:
    """All cyclic permutations of a loop, as Words."""
    n = len(word.letters)
    out = []
    for i in range(n):
        letters = word.letters[i:] + word.letters[:i]
        first, exp = letters[0]
        start = first.start(exp)
        out.append(Word(letters, start, start))
    return out


def cyclically_reduce(word: Word) -> Word:
    """Strip inverse pairs between the two ends of a loop."""
    letters = word.letters
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        letters = letters[1:-1]
    if not letters:
        return Word.identity(word.source)
    first, exp = letters[0]
    start = first.start(exp)
    return Word(letters, start, start)
