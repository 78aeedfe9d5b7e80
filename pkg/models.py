"""Pydantic report models for xres checks."""
from typing import Optional

from pydantic import BaseModel, Field


class ValidationReport(BaseModel):
    """Presentation warnings (trivial or repeated relators, reduced inputs)."""
    ok: bool = True
    warnings: list[str] = Field(default_factory=list)


class AxiomReport(BaseModel):
    """Crossed complex axioms: basepoints and boundary-of-boundary triviality."""
    ok: bool = True
    checked: int = 0
    max_dim: int = 0
    exact: bool = True
    witness: Optional[str] = None
    messages: list[str] = Field(default_factory=list)


class MorphismReport(BaseModel):
    """Whether a morphism commutes with the boundaries up to max_dim."""
    ok: bool = True
    checked: int = 0
    exact: bool = True
    witness: Optional[str] = None
    messages: list[str] = Field(default_factory=list)


class HomologyGroup(BaseModel):
    """Z^rank + Z/t1 + Z/t2 + ..."""
    dim: int
    rank: int = 0
    torsion: list[int] = Field(default_factory=list)

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z^{self.rank}" if self.rank > 1 else "Z"] if self.rank else []
        parts += [f"C{t}" for t in self.torsion]
        return " x ".join(parts) or "0"


class ExactnessReport(BaseModel):
    """Homology per dimension; exact when every checked group vanishes."""
    exact: bool = True
    dims: list[int] = Field(default_factory=list)
    homology: list[HomologyGroup] = Field(default_factory=list)
    messages: list[str] = Field(default_factory=list)

    def group(self, dim: int) -> HomologyGroup:
        return next(h for h in self.homology if h.dim == dim)


class CocycleReport(BaseModel):
    """Cocycle conditions on dim-2 and dim-3 generators."""
    ok: bool = True
    checked: int = 0
    witness: Optional[str] = None
    messages: list[str] = Field(default_factory=list)


class ExtensionReport(BaseModel):
    """Extension E of G by K: a table (finite G) or a presentation."""
    order: Optional[int] = None
    kernel_order: int = 0
    quotient_order: Optional[int] = None
    isomorphism_type: Optional[str] = None
    presentation: Optional[str] = None
    surjection_ok: Optional[bool] = None
    kernel_ok: Optional[bool] = None
    messages: list[str] = Field(default_factory=list)
