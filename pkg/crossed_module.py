"""The free crossed module on a relator function: Peiffer sequences and their invariants."""
from dataclasses import dataclass
from typing import Optional

from errors import BasepointMismatch, NonComposablePath, OracleMismatch, UnknownGenerator, UnknownRelator
from group_oracle import GroupOracle, GroupRingElement, format_ring
from words import Word, format_word


@dataclass(frozen=True)
class PeifferSequence:
    """Product of (x_i^eps_i)^u_i; every conjugator u_i ends at `basepoint`."""
    factors: tuple = ()
    basepoint: str = "*"

    @classmethod
    def identity(cls, basepoint: str = "*") -> "PeifferSequence":
        return cls((), basepoint)

    @classmethod
    def of(cls, symbol: str, at: str = "*", sign: int = 1, conjugator: Optional[Word] = None) -> "PeifferSequence":
        conjugator = Word.identity(at) if conjugator is None else conjugator
        return cls(((symbol, sign, conjugator),), conjugator.target)

    def is_identity(self) -> bool:
        return not self.factors

    def __mul__(self, other):
        if self.basepoint != other.basepoint:
            raise BasepointMismatch(f"sequences at {self.basepoint} and {other.basepoint}")
        left = list(self.factors)
        right = list(other.factors)
        while left and right:
            x, e, u = left[-1]
            y, f, v = right[0]
            if x != y or e != -f or u != v:
                break
            left.pop()
            right.pop(0)
        return PeifferSequence(tuple(left + right), self.basepoint)

    def inverse(self) -> "PeifferSequence":
        return PeifferSequence(tuple((x, -e, u) for x, e, u in reversed(self.factors)), self.basepoint)

    __invert__ = inverse

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        out = PeifferSequence.identity(self.basepoint)
        for _ in range(abs(n)):
            out = out * base
        return out

    def act(self, u: Word) -> "PeifferSequence":
        """(x,w)^u = (x, wu)."""
        if u.source != self.basepoint:
            raise NonComposablePath(f"cannot act at {self.basepoint} by {format_word(u)} from {u.source}")
        return PeifferSequence(tuple((x, e, w * u) for x, e, w in self.factors), u.target)

    def symbols(self) -> set:
        return {x for x, _, _ in self.factors}

    def __str__(self):
        return format_sequence(self)


def format_sequence(c: PeifferSequence) -> str:
    """`x`, `x^-1`, `x^{u}`, `x^-1^{u}` joined by ` * `; identity is `1`."""
    if not c.factors:
        return "1"
    parts = []
    for x, e, u in c.factors:
        text = x if e > 0 else f"{x}^-1"
        if u.letters:
            text += "^{" + format_word(u) + "}"
        parts.append(text)
    return " * ".join(parts)


def boundary2(c: PeifferSequence, omega: dict) -> Word:
    """phi_2: product of u^-1 (omega x)^eps u over the factors."""
    out = Word.identity(c.basepoint)
    for x, e, u in c.factors:
        if x not in omega:
            raise UnknownRelator(f"{x} has no boundary")
        rel = omega[x] if e > 0 else omega[x].inverse()
        out = out * (u.inverse() * rel * u)
    return out


def act_dim2(c: PeifferSequence, u: Word) -> PeifferSequence:
    return c.act(u)


def peiffer_commutator(w1: PeifferSequence, w2: PeifferSequence, omega: dict) -> PeifferSequence:
    """<w1, w2> = w1^-1 w2^-1 w1 w2^(phi_2 w1)."""
    if w1.basepoint != w2.basepoint:
        raise BasepointMismatch(f"sequences at {w1.basepoint} and {w2.basepoint}")
    return w1.inverse() * w2.inverse() * w1 * w2.act(boundary2(w1, omega))


class ModuleElement:
    """Element sum_g g.r_g of a free module over a group(oid) ring.

    Coefficient r_g is a combination of arrows from the basepoint of g to `basepoint`.
    """

    __slots__ = ("dim", "basepoint", "coords")

    def __init__(self, dim: int, basepoint: str = "*", coords: Optional[dict] = None):
        self.dim = dim
        self.basepoint = basepoint
        self.coords = {g: r for g, r in (coords or {}).items() if r}

    @classmethod
    def zero(cls, dim: int, basepoint: str = "*") -> "ModuleElement":
        return cls(dim, basepoint)

    @classmethod
    def generator(cls, name: str, dim: int, at: str = "*", coefficient: Optional[GroupRingElement] = None) -> "ModuleElement":
        return cls(dim, at, {name: coefficient or GroupRingElement.one(at)})

    def is_zero(self) -> bool:
        return not self.coords

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleElement)
            and self.dim == other.dim
            and self.basepoint == other.basepoint
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.dim, self.basepoint, frozenset(self.coords.items())))

    def _check(self, other):
        if self.dim != other.dim or self.basepoint != other.basepoint:
            raise BasepointMismatch(
                f"cannot add dim {self.dim} at {self.basepoint} to dim {other.dim} at {other.basepoint}"
            )

    def __add__(self, other):
        self._check(other)
        coords = dict(self.coords)
        for g, r in other.coords.items():
            coords[g] = coords[g] + r if g in coords else r
        return ModuleElement(self.dim, self.basepoint, coords)

    def __neg__(self):
        return ModuleElement(self.dim, self.basepoint, {g: -r for g, r in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int) -> "ModuleElement":
        return ModuleElement(self.dim, self.basepoint, {g: r.scale(n) for g, r in self.coords.items()})

    def times(self, r: GroupRingElement, oracle: GroupOracle, basepoint: Optional[str] = None) -> "ModuleElement":
        """Right action by a ring element whose arrows start at this basepoint."""
        if basepoint is None:
            targets = {w.target for w in r.terms}
            basepoint = targets.pop() if len(targets) == 1 else self.basepoint
        return ModuleElement(
            self.dim, basepoint, {g: c.times(r, oracle) for g, c in self.coords.items()}
        )

    def act(self, u: Word, oracle: GroupOracle) -> "ModuleElement":
        """Action of a group(oid) element u from the basepoint."""
        if u.source != self.basepoint:
            raise NonComposablePath(f"cannot act at {self.basepoint} by {format_word(u)}")
        return self.times(GroupRingElement.of(oracle.normalize(u)), oracle, u.target)

    def normalized(self, oracle: GroupOracle) -> "ModuleElement":
        return ModuleElement(self.dim, self.basepoint, {g: r.normalized(oracle) for g, r in self.coords.items()})

    def __str__(self):
        return format_module(self)

    def __repr__(self):
        return f"ModuleElement(dim={self.dim}, {format_module(self)!r})"


AbelianizedElement = ModuleElement


def format_module(m: ModuleElement) -> str:
    """`g.[n1*w1 + n2*w2] + h.[...]`; zero prints as `0`."""
    if not m.coords:
        return "0"
    return " + ".join(f"{g}.[{format_ring(m.coords[g])}]" for g in sorted(m.coords))


def abelianize(c: PeifferSequence, o: GroupOracle) -> ModuleElement:
    """coords[x] = sum of eps_i * u_i over the factors with symbol x."""
    out = ModuleElement(2, c.basepoint)
    try:
        for x, e, u in c.factors:
            out = out + ModuleElement(2, c.basepoint, {x: GroupRingElement.of(o.normalize(u), e)})
    except UnknownGenerator as exc:
        raise OracleMismatch(str(exc)) from exc
    return out


@dataclass(frozen=True)
class Verdict:
    """Equality answer; `exact` is False when the oracle only rewrites soundly."""
    equal: bool
    exact: bool = True

    def __bool__(self):
        return self.equal


def equal_elements(c: PeifferSequence, d: PeifferSequence, omega: dict, o: GroupOracle) -> Verdict:
    """Equal in the free crossed module iff boundaries agree and abelianizations agree."""
    if c.basepoint != d.basepoint:
        raise BasepointMismatch(f"sequences at {c.basepoint} and {d.basepoint}")
    if boundary2(c, omega) != boundary2(d, omega):
        return Verdict(False, True)
    same = abelianize(c, o) == abelianize(d, o)
    return Verdict(same, o.exact or same)
