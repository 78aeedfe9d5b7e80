"""Chain complexes of free right Z[G]-modules from crossed complexes, Smith normal form, homology."""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from crossed_module import PeifferSequence, abelianize
from errors import NotFinite, OracleMismatch, UnknownGenerator
from group_oracle import GroupOracle, GroupRingElement, format_ring
from models import ExactnessReport, HomologyGroup
from words import Word, reduce

logger = logging.getLogger(__name__)


def fox_derivative(w: Word, x, o: GroupOracle, side: str = "left") -> GroupRingElement:
    """Free derivative of w by the generator x, coefficients normalized by o.

    side="left":  D(uv) = D(u) + u.D(v)
    side="right": D(uv) = D(u).v + D(v)
    """
    name = getattr(x, "name", x)
    if name not in o.generators:
        raise UnknownGenerator(f"{name} is not a generator of this {o.kind} oracle")
    gen = o.generators[name]
    letters = w.letters
    total = []
    for i, (g, e) in enumerate(letters):
        if g != gen:
            continue
        if side == "left":
            coefficient = reduce(letters[:i], w.source, g.start(e))
            if e < 0:
                coefficient = coefficient * Word.of(gen, -1)
        else:
            coefficient = reduce(letters[i + 1:], g.end(e), w.target)
            if e < 0:
                coefficient = Word.of(gen, -1) * coefficient
        total.append((coefficient, e))
    return GroupRingElement.from_words(total, o)


@dataclass
class ChainComplex:
    """bases[n] names the free generators in dimension n; matrices[n] maps C_n -> C_{n-1}.

    matrices[n][i][j] is the coefficient of bases[n-1][i] in the boundary of bases[n][j];
    chains are right modules, so boundary(x.g) = boundary(x).g.
    """
    oracle: GroupOracle
    bases: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)

    @property
    def max_dim(self) -> int:
        return max(self.bases)

    def rank(self, n: int) -> int:
        return len(self.bases.get(n, []))


def to_chain_complex(complex_, o: Optional[GroupOracle] = None, max_dim: Optional[int] = None) -> ChainComplex:
    """Augmentation in dimension 1, right Fox derivatives in dimension 2, module boundaries above."""
    o = o or complex_.coefficient_oracle()
    if not complex_.is_reduced():
        raise OracleMismatch("chain complexes are built for one-object complexes; retract first")
    max_dim = complex_.max_dim if max_dim is None else max_dim
    at = complex_.objects[0]
    cc = ChainComplex(oracle=o, bases={0: [at]})
    one = GroupRingElement.one(at)
    for n in range(1, max_dim + 1):
        cc.bases[n] = [g.name for g in complex_.generators(n)]
        rows = cc.bases[n - 1]
        matrix = [[GroupRingElement.zero() for _ in cc.bases[n]] for _ in rows]
        for j, gen in enumerate(complex_.generators(n)):
            image = complex_.boundaries.get(gen.name)
            if n == 1:
                matrix[0][j] = GroupRingElement.of(o.normalize(Word.of(gen))) - one
                continue
            if n == 2:
                for i, x in enumerate(rows):
                    matrix[i][j] = fox_derivative(image, x, o, side="right")
                continue
            module = abelianize(image, o) if isinstance(image, PeifferSequence) else image.normalized(o)
            for i, x in enumerate(rows):
                if x in module.coords:
                    matrix[i][j] = module.coords[x]
        cc.matrices[n] = matrix
    return cc


def expand_matrix(cc: ChainComplex, n: int) -> np.ndarray:
    """Integer matrix of the boundary C_n -> C_{n-1} over the basis (generator, element)."""
    o = cc.oracle
    if not o.is_finite():
        raise NotFinite(f"cannot expand over a {o.kind} oracle")
    elements = o.elements()
    index = {w: k for k, w in enumerate(elements)}
    size = len(elements)
    rows, cols = cc.rank(n - 1), cc.rank(n)
    out = np.zeros((rows * size, cols * size), dtype=object)
    for i in range(rows):
        for j in range(cols):
            entry = cc.matrices[n][i][j]
            if not entry:
                continue
            for k, g in enumerate(elements):
                moved = entry.times(GroupRingElement.of(g), o)
                for h, c in moved.terms.items():
                    out[i * size + index[h], j * size + k] += c
    return out


def augmented_matrix(cc: ChainComplex, n: int) -> np.ndarray:
    """The boundary after applying Z tensor_G: entries are augmentations."""
    rows, cols = cc.rank(n - 1), cc.rank(n)
    out = np.zeros((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = cc.matrices[n][i][j].augmentation()
    return out


def compositions_vanish(cc: ChainComplex, n: int) -> bool:
    """Expanded matrices of dimensions n-1 and n multiply to zero."""
    return not np.any(expand_matrix(cc, n - 1) @ expand_matrix(cc, n))


@dataclass
class SnfResult:
    """left @ matrix @ right is diagonal with entries `diagonal` (d1 | d2 | ...)."""
    diagonal: list
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _domain_matrix(a):
    a = np.array(a, dtype=object)
    if a.ndim != 2:
        a = a.reshape(len(a), 0)
    rows, cols = a.shape
    if not rows or not cols:
        return DomainMatrix.zeros((rows, cols), ZZ).to_dense()
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in a.tolist()], (rows, cols), ZZ)


def _to_array(m):
    rows, cols = m.shape
    return np.array([[int(x) for x in row] for row in m.to_list()], dtype=object).reshape(rows, cols)


def smith_normal_form(a) -> SnfResult:
    """Smith normal form over Z with unimodular transforms."""
    m = _domain_matrix(a)
    diagonal, left, right = smith_normal_decomp(m)
    rows, cols = m.shape
    d = _to_array(diagonal)
    return SnfResult([int(d[i, i]) for i in range(min(rows, cols))], _to_array(left), _to_array(right))


def solve_integer_system(a, b: list[int]) -> Optional[list[int]]:
    """An integer x with a x = b, or None."""
    snf = smith_normal_form(a)
    rows, cols = snf.left.shape[0], snf.right.shape[0]
    rhs = snf.left.dot(np.array([int(v) for v in b], dtype=object)) if rows else []
    y = [0] * cols
    for i in range(rows):
        pivot = snf.diagonal[i] if i < len(snf.diagonal) else 0
        value = int(rhs[i])
        if pivot == 0:
            if value:
                return None
        elif value % pivot:
            return None
        else:
            y[i] = value // pivot
    return [int(v) for v in snf.right.dot(np.array(y, dtype=object))] if cols else []


def homology_groups(boundaries: dict, sizes: dict, dims: list[int]) -> list[HomologyGroup]:
    """H_n from integer boundary matrices d_n: C_n -> C_{n-1} (missing ones are zero)."""
    snfs = {n: smith_normal_form(m) for n, m in boundaries.items()}
    out = []
    for n in dims:
        rank_out = snfs[n].rank if n in snfs else 0
        incoming = snfs.get(n + 1)
        rank_in = incoming.rank if incoming else 0
        torsion = [abs(d) for d in incoming.diagonal if abs(d) > 1] if incoming else []
        out.append(HomologyGroup(dim=n, rank=sizes[n] - rank_out - rank_in, torsion=torsion))
    return out


def check_exactness(cc: ChainComplex, dims: Optional[list[int]] = None) -> ExactnessReport:
    """Homology of the expanded complex; exact when every requested group vanishes."""
    o = cc.oracle
    if not o.is_finite():
        raise NotFinite(f"exactness needs a finite oracle, got {o.kind}")
    dims = list(dims) if dims is not None else list(range(1, cc.max_dim + 1))
    size = len(o.elements())
    needed = {n for d in dims for n in (d, d + 1) if 1 <= n <= cc.max_dim}
    boundaries = {n: expand_matrix(cc, n) for n in sorted(needed)}
    sizes = {n: cc.rank(n) * size for n in dims}
    report = ExactnessReport(dims=dims, homology=homology_groups(boundaries, sizes, dims))
    for h in report.homology:
        if not h.is_zero():
            report.exact = False
            report.messages.append(f"H{h.dim} = {h}")
    logger.debug("exactness over %d elements: %s", size, report.messages or "exact")
    return report


def group_homology(cc: ChainComplex, dims: Optional[list[int]] = None) -> list[HomologyGroup]:
    """H_n(G; Z) from Z tensor_G of the complex; the top dimension is cut off."""
    dims = list(dims) if dims is not None else list(range(0, cc.max_dim))
    needed = {n for d in dims for n in (d, d + 1) if 1 <= n <= cc.max_dim}
    boundaries = {n: augmented_matrix(cc, n) for n in sorted(needed)}
    sizes = {n: cc.rank(n) for n in dims}
    return homology_groups(boundaries, sizes, dims)


def format_chain_complex(cc: ChainComplex) -> str:
    """One block per dimension, one matrix row per line, entries separated by `; `."""
    lines = []
    for n in sorted(cc.matrices):
        lines.append(f"d{n}: {', '.join(cc.bases[n]) or '-'} -> {', '.join(cc.bases[n - 1])}")
        for name, row in zip(cc.bases[n - 1], cc.matrices[n]):
            lines.append(f"  {name}: " + "; ".join(format_ring(x) for x in row))
    return "\n".join(lines) + "\n"
