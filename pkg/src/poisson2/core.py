"""Core data model: graded spaces, structure tables, bundles, reports.

Everything is exact. A finite-dimensional Z/2-graded space carries up to
three structure tables — a supercommutative product, a symmetric bracket
with zero diagonal, and a squaring map defined on odd basis vectors. The
squaring extends to arbitrary odd elements through the polarization rule

    s(sum l_i x_i) = sum l_i^2 s(x_i) + sum_{i<j} l_i l_j [x_i, x_j]

so tables only ever store basis data. Structure values are kept sparse
(sorted ``(index, coeff)`` tuples) because the large examples have tables
that are almost entirely zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as _dc_field
from typing import Callable, Iterable, Mapping, Sequence

from .field import Field, FieldError


#### errors ##################################################################


class AlgebraError(Exception):
    """Base class for structural errors raised by this package."""


class ValidationError(AlgebraError):
    """Table data violates grading, symmetry, or range invariants."""


class MissingStructure(AlgebraError):
    """Operation needs a structure role the bundle does not carry."""


class NotOddHomogeneous(AlgebraError):
    """Squaring applied to an element that is not odd homogeneous."""


class NotEven(AlgebraError):
    """An even map or element was required."""


class NotAssociative(AlgebraError):
    """Product failed associativity where associativity is a precondition."""


class AdSquareMismatch(AlgebraError):
    """Candidate squaring value y has ad_y != (ad_x)^2."""


class NotAnIdeal(AlgebraError):
    """Subspace is not a homogeneous ideal for the requested structure."""


class RoleMismatch(AlgebraError):
    """Map or module data has the wrong shape or parity layout."""


class ArityMismatch(AlgebraError):
    """Cochain evaluated on the wrong number of arguments."""


class NoUnit(AlgebraError):
    """Operation requires a unital product."""


class NotPoissonInput(AlgebraError):
    """Operation requires a bundle that passes the Poisson laws."""


class InvalidRepresentation(AlgebraError):
    """Representation data is structurally malformed."""


class NotStrong(AlgebraError):
    """Module map is not linear over the coefficient algebra."""


class NotADeformation(AlgebraError):
    """Layer data is not a valid deformation datum."""


class NotAHochschildCocycle(AlgebraError):
    """Bilinear map fails the Hochschild cocycle identity."""


class DifferentialEscapesSubspace(AlgebraError):
    """Differential image left the constrained cochain subspace."""


class SizeBudgetExceeded(AlgebraError):
    """Requested object is larger than the configured budget."""


class UnstableTruncation(AlgebraError):
    """Truncated quotient dimensions changed when the slack was raised."""


class NotRotaBaxter(AlgebraError):
    """Operator fails the Rota-Baxter identity."""


class HypothesesFail(AlgebraError):
    """Factorization input does not satisfy the required identities."""


class ParseError(AlgebraError):
    """Algebra file is malformed."""


#### sparse values ###########################################################

# A sparse vector is a sorted tuple of (basis index, nonzero coefficient).
SparseVec = tuple[tuple[int, int], ...]

SV_ZERO: SparseVec = ()


def sv_from_dict(d: Mapping[int, int]) -> SparseVec:
    return tuple(sorted((i, c) for i, c in d.items() if c))


def sv_add(a: SparseVec, b: SparseVec) -> SparseVec:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for i, c in b:
        w = acc.get(i, 0) ^ c
        if w:
            acc[i] = w
        else:
            del acc[i]
    return sv_from_dict(acc)


def sv_scale(field: Field, c: int, a: SparseVec) -> SparseVec:
    if c == 0:
        return SV_ZERO
    if c == 1:
        return a
    return tuple((i, field.mul(c, v)) for i, v in a)


def sv_dense(a: SparseVec, dim: int) -> tuple[int, ...]:
    out = [0] * dim
    for i, c in a:
        out[i] = c
    return tuple(out)


def sv_from_dense(vec: Sequence[int]) -> SparseVec:
    return tuple((i, c) for i, c in enumerate(vec) if c)


#### graded spaces and elements ##############################################


@dataclass(frozen=True)
class SuperSpace:
    """Finite-dimensional Z/2-graded vector space with named basis."""

    field: Field
    names: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.parities):
            raise ValidationError("names/parities length mismatch")
        if len(set(self.names)) != len(self.names):
            raise ValidationError("duplicate basis names")
        if any(p not in (0, 1) for p in self.parities):
            raise ValidationError("parities must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def even_indices(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.parities) if p == 0)

    @property
    def odd_indices(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.parities) if p == 1)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no basis vector named {name!r}") from None

    def basis(self, i: int) -> "Element":
        coeffs = [0] * self.dim
        coeffs[i] = 1
        return Element(self, tuple(coeffs))

    def element(self, mapping: Mapping[str, int] | Sequence[int]) -> "Element":
        if isinstance(mapping, Mapping):
            coeffs = [0] * self.dim
            for name, c in mapping.items():
                coeffs[self.index(name)] = self.field.validate_scalar(c)
            return Element(self, tuple(coeffs))
        if len(mapping) != self.dim:
            raise ValidationError("coefficient vector has wrong length")
        return Element(self, tuple(self.field.validate_scalar(c) for c in mapping))

    def zero(self) -> "Element":
        return Element(self, (0,) * self.dim)


@dataclass(frozen=True)
class Element:
    """Immutable element of a :class:`SuperSpace`, dense coefficient tuple."""

    space: SuperSpace
    coeffs: tuple[int, ...]

    def __add__(self, other: "Element") -> "Element":
        if other.space is not self.space and other.space != self.space:
            raise ValidationError("elements live in different spaces")
        return Element(self.space, tuple(a ^ b for a, b in zip(self.coeffs, other.coeffs)))

    __sub__ = __add__  # characteristic 2

    def scale(self, c: int) -> "Element":
        f = self.space.field
        c = f.validate_scalar(c)
        return Element(self.space, tuple(f.mul(c, a) for a in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    def sparse(self) -> SparseVec:
        return sv_from_dense(self.coeffs)

    def parity(self) -> int | None:
        """0, 1, or None when the element mixes parities (or is zero)."""
        seen = {self.space.parities[i] for i in self.support()}
        if len(seen) == 1:
            return seen.pop()
        return None

    def __str__(self) -> str:
        f = self.space.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            name = self.space.names[i]
            terms.append(name if c == 1 else f"{f.fmt(c)}*{name}")
        return " + ".join(terms) if terms else "0"


def fmt_sparse(space: SuperSpace, sv: SparseVec) -> str:
    return str(Element(space, sv_dense(sv, space.dim)))


#### structure tables ########################################################


class BilinearTable:
    """Sparse table of a bilinear structure on basis pairs.

    ``kind`` is "product" or "bracket". Brackets are always symmetric with a
    forced zero diagonal (char-2 alternation) and are stored for i <= j only.
    Products are symmetric by default (``symmetric=True``, the
    supercommutative case, stored for i <= j); matrix-style noncommutative
    products store all ordered pairs. There are no signs in characteristic 2,
    so symmetric lookups just sort the key.
    """

    __slots__ = ("space", "kind", "symmetric", "entries")

    def __init__(self, space: SuperSpace, kind: str,
                 entries: Mapping[tuple[int, int], SparseVec],
                 symmetric: bool = True):
        if kind not in ("product", "bracket"):
            raise ValidationError(f"unknown table kind {kind!r}")
        if kind == "bracket" and not symmetric:
            raise ValidationError("brackets are symmetric in characteristic 2")
        self.space = space
        self.kind = kind
        self.symmetric = symmetric
        clean: dict[tuple[int, int], SparseVec] = {}
        par = space.parities
        for (i, j), val in entries.items():
            if symmetric and i > j:
                raise ValidationError("symmetric table keys must have i <= j")
            if kind == "bracket" and i == j and val:
                raise ValidationError("bracket diagonal must vanish")
            val = tuple((t, space.field.validate_scalar(c)) for t, c in val if c)
            if not val:
                continue
            want = (par[i] + par[j]) & 1
            for t, _ in val:
                if par[t] != want:
                    raise ValidationError(
                        f"grading violation at ({space.names[i]},{space.names[j]}): "
                        f"target {space.names[t]} has parity {par[t]}, expected {want}")
            clean[(i, j)] = tuple(sorted(val))
        self.entries = clean

    def value(self, i: int, j: int) -> SparseVec:
        if self.symmetric and i > j:
            i, j = j, i
        if self.kind == "bracket" and i == j:
            return SV_ZERO
        return self.entries.get((i, j), SV_ZERO)

    def apply_sv(self, a: SparseVec, b: SparseVec) -> SparseVec:
        f = self.space.field
        acc: dict[int, int] = {}
        for i, ci in a:
            for j, cj in b:
                val = self.value(i, j)
                if not val:
                    continue
                c = f.mul(ci, cj)
                for t, v in val:
                    w = acc.get(t, 0) ^ f.mul(c, v)
                    if w:
                        acc[t] = w
                    else:
                        del acc[t]
        return sv_from_dict(acc)

    def nonzero_pairs(self) -> Iterable[tuple[int, int]]:
        return self.entries.keys()


class SquaringTable:
    """Squaring values on odd basis vectors; even targets enforced."""

    __slots__ = ("space", "entries")

    def __init__(self, space: SuperSpace, entries: Mapping[int, SparseVec]):
        self.space = space
        par = space.parities
        clean: dict[int, SparseVec] = {}
        for i, val in entries.items():
            if par[i] != 1:
                raise ValidationError(f"squaring defined on even basis vector {space.names[i]}")
            val = tuple((t, space.field.validate_scalar(c)) for t, c in val if c)
            if not val:
                continue
            for t, _ in val:
                if par[t] != 0:
                    raise ValidationError(
                        f"squaring of {space.names[i]} has odd component {space.names[t]}")
            clean[i] = tuple(sorted(val))
        self.entries = clean

    def value(self, i: int) -> SparseVec:
        if self.space.parities[i] != 1:
            raise NotOddHomogeneous(f"{self.space.names[i]} is even")
        return self.entries.get(i, SV_ZERO)


#### bundles #################################################################


@dataclass(frozen=True)
class AlgebraBundle:
    """A graded space with whichever structure roles it carries.

    Roles: ``product`` (associative supercommutative candidate), ``bracket``
    + ``squaring`` (Lie candidate), all three (Poisson candidate). ``unit``
    is optional and always refers to the product.
    """

    space: SuperSpace
    product: BilinearTable | None = None
    bracket: BilinearTable | None = None
    squaring: SquaringTable | None = None
    unit: Element | None = None
    name: str = ""

    def __post_init__(self):
        for table, kind in ((self.product, "product"), (self.bracket, "bracket")):
            if table is not None and (table.space != self.space or table.kind != kind):
                raise ValidationError(f"{kind} table does not match the bundle space")
        if self.squaring is not None and self.squaring.space != self.space:
            raise ValidationError("squaring table does not match the bundle space")
        if self.bracket is not None and self.squaring is None and self.space.odd_indices:
            raise ValidationError("bracket present but squaring missing on a space with odd part")
        if self.unit is not None:
            if self.product is None:
                raise ValidationError("unit requires a product")
            if not isinstance(self.unit, Element) or self.unit.space != self.space:
                raise ValidationError("unit must be an element of the bundle space")
            if self.unit.parity() not in (0,):
                raise ValidationError("unit must be even")

    @property
    def dim(self) -> int:
        return self.space.dim

    def require(self, *roles: str) -> None:
        for role in roles:
            if getattr(self, role) is None:
                raise MissingStructure(f"bundle {self.name or '?'} has no {role}")

    def with_tables(self, **kw) -> "AlgebraBundle":
        data = dict(space=self.space, product=self.product, bracket=self.bracket,
                    squaring=self.squaring, unit=self.unit, name=self.name)
        data.update(kw)
        return AlgebraBundle(**data)


def bundle_from_strings(field: Field, basis: Sequence[tuple[str, int]],
                        product: Mapping[tuple[str, str], Mapping[str, int]] | None = None,
                        bracket: Mapping[tuple[str, str], Mapping[str, int]] | None = None,
                        squaring: Mapping[str, Mapping[str, int]] | None = None,
                        unit: str | None = None,
                        name: str = "",
                        commutative: bool = True) -> AlgebraBundle:
    """Convenience builder used by the example library and tests."""
    space = SuperSpace(field, tuple(n for n, _ in basis), tuple(p for _, p in basis))

    def _sv(val: Mapping[str, int]) -> SparseVec:
        return sv_from_dict({space.index(k): v for k, v in val.items()})

    prod_t = None
    if product is not None:
        if commutative:
            keyed = {tuple(sorted((space.index(a), space.index(b)))): _sv(v)
                     for (a, b), v in product.items()}
        else:
            keyed = {(space.index(a), space.index(b)): _sv(v)
                     for (a, b), v in product.items()}
        prod_t = BilinearTable(space, "product", keyed, symmetric=commutative)
    brk_t = None
    if bracket is not None:
        brk_t = BilinearTable(space, "bracket", {
            tuple(sorted((space.index(a), space.index(b)))): _sv(v)
            for (a, b), v in bracket.items()})
    sq_t = None
    if squaring is not None:
        sq_t = SquaringTable(space, {space.index(k): _sv(v) for k, v in squaring.items()})
    elif bracket is not None and space.odd_indices:
        sq_t = SquaringTable(space, {})
    unit_el = space.element({unit: 1}) if unit else None
    return AlgebraBundle(space, prod_t, brk_t, sq_t, unit_el, name)


#### evaluation ##############################################################


def eval_product(bundle: AlgebraBundle, x: Element, y: Element) -> Element:
    bundle.require("product")
    return Element(x.space, sv_dense(bundle.product.apply_sv(x.sparse(), y.sparse()), x.space.dim))


def eval_bracket(bundle: AlgebraBundle, x: Element, y: Element) -> Element:
    bundle.require("bracket")
    return Element(x.space, sv_dense(bundle.bracket.apply_sv(x.sparse(), y.sparse()), x.space.dim))


def squaring_sv(bundle: AlgebraBundle, x: SparseVec) -> SparseVec:
    """Squaring of an odd element, via the polarization extension rule."""
    bundle.require("squaring")
    f = bundle.space.field
    par = bundle.space.parities
    for i, _ in x:
        if par[i] != 1:
            raise NotOddHomogeneous(
                f"element has even component {bundle.space.names[i]}")
    acc: SparseVec = SV_ZERO
    for i, c in x:
        acc = sv_add(acc, sv_scale(f, f.square(c), bundle.squaring.value(i)))
    if bundle.bracket is not None:
        for (i, ci), (j, cj) in itertools.combinations(x, 2):
            acc = sv_add(acc, sv_scale(f, f.mul(ci, cj), bundle.bracket.value(i, j)))
    elif len(x) > 1:
        raise MissingStructure("polarization of the squaring needs a bracket")
    return acc


def eval_squaring(bundle: AlgebraBundle, x: Element) -> Element:
    return Element(x.space, sv_dense(squaring_sv(bundle, x.sparse()), x.space.dim))


#### reports #################################################################

VIOLATION_CAP = 16


@dataclass
class Violation:
    law: str
    witness: tuple[str, ...]
    lhs: str
    rhs: str

    def to_dict(self) -> dict:
        return {"law": self.law, "witness": list(self.witness),
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class Report:
    """Outcome of a law check or a computation with verdicts.

    ``status`` is "pass" or "fail" for completed checks ("error" is reserved
    for the CLI, which maps raised exceptions onto it). ``dimensions`` holds
    whatever integer summary the operation naturally produces.
    """

    status: str = "pass"
    violations: list[Violation] = _dc_field(default_factory=list)
    dimensions: dict[str, int] = _dc_field(default_factory=dict)
    laws: list[str] = _dc_field(default_factory=list)
    timing: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def add(self, law: str, witness: Sequence[str], lhs: str, rhs: str) -> bool:
        """Record a violation; returns False once the cap is reached."""
        self.status = "fail"
        if len(self.violations) < VIOLATION_CAP:
            self.violations.append(Violation(law, tuple(witness), lhs, rhs))
        return len(self.violations) < VIOLATION_CAP

    def law(self, name: str) -> None:
        if name not in self.laws:
            self.laws.append(name)

    def merge(self, other: "Report", prefix: str = "") -> None:
        for v in other.violations:
            if len(self.violations) < VIOLATION_CAP:
                law = f"{prefix}{v.law}" if prefix else v.law
                self.violations.append(Violation(law, v.witness, v.lhs, v.rhs))
        if not other.passed:
            self.status = "fail"
        for name in other.laws:
            self.law(f"{prefix}{name}" if prefix else name)
        self.dimensions.update(other.dimensions)

    def to_dict(self, with_timing: bool = False) -> dict:
        out = {
            "schema": 1,
            "status": self.status,
            "violations": [v.to_dict() for v in self.violations],
            "dimensions": dict(sorted(self.dimensions.items())),
            "laws": list(self.laws),
        }
        if with_timing and self.timing is not None:
            out["timing"] = round(self.timing, 6)
        return out
