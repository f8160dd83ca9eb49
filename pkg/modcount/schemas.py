"""
(schemas.py) Defines Pydantic models for the JSON wire formats (polynomials,
quasi-polynomials, fatgraph catalogs), the parsed Command, and the
response bodies rendered by each router.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from modcount.services.exactnum import Polynomial, QuasiPolynomial, format_rational, parse_rational
from modcount.services.fatgraph_service import FatgraphCatalog


# ********************************************************************************
# --- Wire Models ---
# ********************************************************************************


# ==============================================================================
# --- Polynomials and Quasi-polynomials ---
# ==============================================================================

class MonomialModel(BaseModel):
    """One term: exponent vector and an exact coefficient written 'p/q'."""
    exp: List[int]
    coef: str = Field(..., description="Reduced rational, e.g. '-1/12'.")

    @field_validator("coef")
    @classmethod
    def _exact(cls, value: str) -> str:
        # normalizes '2/4' to '1/2'
        return format_rational(parse_rational(value))


class PolynomialModel(BaseModel):
    """Polynomial in `vars` variables, monomials sorted by exponent."""
    vars: int = Field(..., ge=0)
    monomials: List[MonomialModel]

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "PolynomialModel":
        monomials = [MonomialModel(exp=list(exp), coef=format_rational(coef)) for exp, coef in sorted(poly.items())]
        return cls(vars=poly.nvars, monomials=monomials)

    def to_polynomial(self) -> Polynomial:
        terms: Dict[tuple, Fraction] = {}
        for monomial in self.monomials:
            if len(monomial.exp) != self.vars:
                raise ValueError(f"Monomial {monomial.exp} does not have {self.vars} exponents.")
            terms[tuple(monomial.exp)] = terms.get(tuple(monomial.exp), Fraction(0)) + parse_rational(monomial.coef)
        return Polynomial(self.vars, terms)


class ParityClassModel(BaseModel):
    parity: List[Literal[0, 1]]
    poly: PolynomialModel


class QuasiPolynomialModel(BaseModel):
    """One polynomial per parity class of Z^vars; missing classes are zero."""
    vars: int = Field(..., ge=1)
    classes: List[ParityClassModel]

    @classmethod
    def from_quasipolynomial(cls, qp: QuasiPolynomial) -> "QuasiPolynomialModel":
        classes = [
            ParityClassModel(parity=list(parity), poly=PolynomialModel.from_polynomial(qp.polynomial(parity)))
            for parity in sorted(qp.parity_classes())
        ]
        return cls(vars=qp.nvars, classes=classes)

    def to_quasipolynomial(self) -> QuasiPolynomial:
        return QuasiPolynomial(self.vars, {tuple(c.parity): c.poly.to_polynomial() for c in self.classes})


# ==============================================================================
# --- Fatgraph Catalog ---
# ==============================================================================

class FatgraphEntryModel(BaseModel):
    text: str = Field(..., description="One-line form E;tau0 cycles;tau1 pairs;dart->label.")
    edges: int
    vertices: int
    aut_order: int


class FatgraphCatalogModel(BaseModel):
    g: int
    n: int
    unlabeled_count: int
    labeled_count: int
    entries: List[FatgraphEntryModel]

    @classmethod
    def from_catalog(cls, catalog: FatgraphCatalog) -> "FatgraphCatalogModel":
        entries = [
            FatgraphEntryModel(
                text=entry.fatgraph.to_text(),
                edges=entry.num_edges,
                vertices=entry.fatgraph.num_vertices,
                aut_order=entry.aut_order,
            )
            for entry in catalog.entries
        ]
        return cls(g=catalog.g, n=catalog.n, unlabeled_count=catalog.unlabeled_count, labeled_count=len(catalog), entries=entries)


# ********************************************************************************
# --- Command ---
# ********************************************************************************

class Command(BaseModel):
    """A validated command line: verb, optional action and the verb's own options."""
    verb: Literal["fatgraphs", "count", "poly", "euler", "volume", "intersections", "dilaton",
                  "hz", "hurwitz", "vpf", "laplace", "verify"]
    action: Optional[str] = None
    options: Dict[str, Any] = Field(default_factory=dict)
    output_format: Literal["json", "table"] = "table"
    cache_dir: Optional[str] = None
    jobs: int = Field(1, ge=1)


class CommandResult(BaseModel):
    """Rendered output of a command plus the exit code it maps to."""
    output: str
    exit_code: int = 0


# ********************************************************************************
# --- Response Models ---
# ********************************************************************************

class ValueResponse(BaseModel):
    """A single exact value with the inputs it was computed from."""
    quantity: str
    g: Optional[int] = None
    n: Optional[int] = None
    arguments: List[Any] = Field(default_factory=list)
    method: Optional[str] = None
    value: str


class WeilPeterssonModel(BaseModel):
    top_part: PolynomialModel
    scaled_volume: PolynomialModel
    matched: bool


class VolumeResponse(BaseModel):
    g: int
    n: int
    volume: PolynomialModel
    weil_petersson: Optional[WeilPeterssonModel] = None


class IntersectionModel(BaseModel):
    d: List[int]
    value: str


class IntersectionsResponse(BaseModel):
    g: int
    n: int
    numbers: List[IntersectionModel]


class DilatonResponse(BaseModel):
    g: int
    n: int
    lengths: List[int]
    lhs: str
    rhs: str
    vanishing: str
    holds: bool


class HZTableResponse(BaseModel):
    c: List[List[int]] = Field(..., description="c[n][k] for 0 <= n <= nmax, 0 <= k <= kmax.")
    epsilon: Dict[str, int] = Field(..., description="Keyed 'g,n'.")
    mu: Dict[str, int] = Field(..., description="Keyed 'g,n'.")


class MismatchModel(BaseModel):
    exp: List[int]
    lhs: str
    rhs: str


class SeriesDiffResponse(BaseModel):
    form: Optional[str] = None
    order: int
    matched: bool
    first_mismatch: Optional[MismatchModel] = None
    mismatches: int = 0


class LaplaceFormResponse(BaseModel):
    """prod over columns a of z^a / (1 - z^a), with its expansion."""
    columns: List[List[int]]
    order: int
    terms: List[MonomialModel]


class EhrhartResponse(BaseModel):
    b0: List[int]
    polynomial: PolynomialModel
    constant_term: str
    reciprocity_checked: bool


class SeriesResponse(BaseModel):
    g: int
    n: int
    order: int
    terms: List[MonomialModel]


class AiryResponse(BaseModel):
    g: int
    n: int
    derived: List[MonomialModel] = Field(..., description="Laurent terms in the pole-local variables.")
    printed: Optional[List[MonomialModel]] = None
    ratio: Optional[str] = Field(None, description="Printed coefficient divided by derived coefficient.")


class AsymptoticRowModel(BaseModel):
    s: str
    ratio: str
    deviation: str


class AsymptoticResponse(BaseModel):
    g: int
    n: int
    rows: List[AsymptoticRowModel]
    passed: bool


class CheckRow(BaseModel):
    """One line of the verify matrix."""
    name: str
    passed: bool
    detail: str = ""


class VerifyReport(BaseModel):
    quick: bool
    rows: List[CheckRow]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)
