"""Divided-power Poisson algebras in two bracket families.

The underlying commutative algebra has a monomial basis x^(i) with
per-variable exponent bounds 2^h - 1; multiplication carries the binomial
coefficient binom(i+j, i), which mod 2 collapses (Lucas) to the bitwise
test i AND j = 0. On top of that algebra live two bracket/squaring
families, distinguished by how the odd variables pair up:

* type ``pi-i`` uses unpaired odd generators theta_1..theta_n, and its
  squaring involves the divided square gamma_2 of the theta-derivatives;
* type ``pi-pi`` pairs the odd generators (xi_i, eta_i) like a symplectic
  block, with no divided square anywhere.

Odd variables always get exponent bound 1. Allowing theta^(2) breaks the
squaring Jacobi identity (take x = theta, y = theta^(2): [x,[x,y]] = 1
while [s(x),y] = 0), so taller odd columns are rejected outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (AlgebraBundle, BilinearTable, Element, NotEven,
                   RoleMismatch, SizeBudgetExceeded, SquaringTable,
                   SuperSpace, ValidationError, sv_from_dict)
from .field import GF2, Field

DIM_CAP = 4096

_ODD_ROLES = ("theta", "xi", "eta")


@dataclass(frozen=True)
class DPVariable:
    """One generator: display name, parity, pairing role, and height.

    The height h gives the exponent bound 2^h - 1 (so h = 1 means the
    variable squares to zero, h = 2 allows up to the third divided power,
    and so on). Roles are "p"/"q" for the even symplectic pairs, "theta"
    for unpaired odd generators, "xi"/"eta" for paired odd generators.
    """

    name: str
    parity: int
    role: str
    height: int = 1


class DPSpec:
    """Validated variable list plus the derived monomial basis.

    Instances precompute the basis (exponent vectors in reverse
    lexicographic order, so the constant monomial sits at index 0 and the
    first variable varies fastest), the name table, and the role layout
    used by the bracket builders.
    """

    def __init__(self, variables: Sequence[DPVariable], field: Field = GF2):
        variables = tuple(variables)
        if not variables:
            raise ValidationError("a divided-power spec needs at least one variable")
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate variable names")
        for v in variables:
            if v.role not in ("p", "q") + _ODD_ROLES:
                raise RoleMismatch(f"unknown role {v.role!r} for {v.name}")
            want_parity = 0 if v.role in ("p", "q") else 1
            if v.parity != want_parity:
                raise RoleMismatch(
                    f"{v.name} has role {v.role} but parity {v.parity}")
            if v.height < 1:
                raise ValidationError(f"{v.name} needs height >= 1")
            if v.parity == 1 and v.height != 1:
                raise RoleMismatch(
                    f"odd variable {v.name} must have height 1: a divided "
                    "square of an odd generator breaks the squaring Jacobi "
                    "identity")

        p_idx = [i for i, v in enumerate(variables) if v.role == "p"]
        q_idx = [i for i, v in enumerate(variables) if v.role == "q"]
        th_idx = [i for i, v in enumerate(variables) if v.role == "theta"]
        xi_idx = [i for i, v in enumerate(variables) if v.role == "xi"]
        eta_idx = [i for i, v in enumerate(variables) if v.role == "eta"]
        if len(p_idx) != len(q_idx):
            raise RoleMismatch("p and q variables must come in pairs")
        if len(xi_idx) != len(eta_idx):
            raise RoleMismatch("xi and eta variables must come in pairs")
        if th_idx and xi_idx:
            raise RoleMismatch("theta generators cannot mix with xi/eta pairs")

        self.variables = variables
        self.field = field
        self.bounds = tuple((1 << v.height) - 1 for v in variables)
        self.even_pairs = tuple(zip(p_idx, q_idx))
        self.odd_pairs = tuple(zip(xi_idx, eta_idx))
        self.thetas = tuple(th_idx)

        dim = 1
        for b in self.bounds:
            dim *= b + 1
            if dim > DIM_CAP:
                raise SizeBudgetExceeded(
                    f"monomial basis exceeds {DIM_CAP} elements")

        # reverse-lex: rightmost exponent most significant
        self.monomials: tuple[tuple[int, ...], ...] = tuple(
            tuple(reversed(rev))
            for rev in itertools.product(
                *[range(b + 1) for b in reversed(self.bounds)]))
        self.rank = {m: i for i, m in enumerate(self.monomials)}
        odd_mask = tuple(1 if v.parity else 0 for v in variables)
        parities = tuple(
            sum(e for e, o in zip(m, odd_mask) if o) & 1 for m in self.monomials)
        self.space = SuperSpace(
            field, tuple(self._name(m) for m in self.monomials), parities)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def _name(self, m: tuple[int, ...]) -> str:
        parts = []
        for v, e in zip(self.variables, m):
            if e == 0:
                continue
            parts.append(v.name if e == 1 else f"{v.name}^({e})")
        return "*".join(parts) if parts else "1"

    def monomial_parity(self, m: tuple[int, ...]) -> int:
        return self.space.parities[self.rank[m]]


#### arithmetic on exponent vectors ##########################################


def _mul_exp(spec: DPSpec, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...] | None:
    """Product monomial, or None when the coefficient vanishes.

    Lucas: binom(i+j, i) is odd exactly when i AND j = 0, in which case
    i + j = i OR j stays within the all-ones bound automatically.
    """
    out = []
    for x, y, bd in zip(a, b, spec.bounds):
        if x & y:
            return None
        z = x | y
        if z > bd:
            return None
        out.append(z)
    return tuple(out)


def _shift_down(m: tuple[int, ...], s: int) -> tuple[int, ...] | None:
    if m[s] == 0:
        return None
    return m[:s] + (m[s] - 1,) + m[s + 1:]


def _shift_up(spec: DPSpec, m: tuple[int, ...], s: int) -> tuple[int, ...] | None:
    if m[s] + 1 > spec.bounds[s]:
        return None
    return m[:s] + (m[s] + 1,) + m[s + 1:]


def _gamma2_exp(spec: DPSpec, m: tuple[int, ...]) -> tuple[int, ...] | None:
    """Divided square of one monomial; nonzero only for x_t^(i) with i a
    power of two (the coefficient is binom(2i-1, i-1), odd exactly then)."""
    nz = [(s, e) for s, e in enumerate(m) if e]
    if len(nz) != 1:
        return None
    s, e = nz[0]
    if e & (e - 1):
        return None
    if 2 * e > spec.bounds[s]:
        return None
    return m[:s] + (2 * e,) + m[s + 1:]


#### public element-level operations #########################################


def dp_multiply(spec: DPSpec, m1: tuple[int, ...], m2: tuple[int, ...]) -> Element:
    """Product of two basis monomials given by exponent vectors."""
    for m in (m1, m2):
        if m not in spec.rank:
            raise ValidationError(f"{m} is not a monomial of this spec")
    out = _mul_exp(spec, m1, m2)
    if out is None:
        return spec.space.zero()
    return spec.space.basis(spec.rank[out])


def dp_partial(spec: DPSpec, s: int, m: tuple[int, ...]) -> Element:
    """Divided-power derivative along variable s: x^(i) -> x^(i-1)."""
    if m not in spec.rank:
        raise ValidationError(f"{m} is not a monomial of this spec")
    down = _shift_down(m, s)
    if down is None:
        return spec.space.zero()
    return spec.space.basis(spec.rank[down])


def dp_gamma2(spec: DPSpec, f: Element) -> Element:
    """Divided square of an even element.

    Quadratic expansion over the monomial support: squared coefficients on
    the per-monomial divided squares, cross products between distinct
    monomials, and the constant term acting by plain multiplication (the
    divided square of 1 itself is taken to be 0, matching the classical
    definition on the augmentation ideal).
    """
    if f.space != spec.space:
        raise ValidationError("element does not live on this spec's basis")
    fld = spec.field
    sup = f.sparse()
    if any(spec.space.parities[i] for i, _ in sup):
        raise NotEven("divided squares are only defined for even elements")
    const = 0
    rest: list[tuple[int, int]] = []
    for i, c in sup:
        if i == 0:
            const = c
        else:
            rest.append((i, c))
    acc: dict[int, int] = {}

    def put(idx: int, c: int) -> None:
        w = acc.get(idx, 0) ^ c
        if w:
            acc[idx] = w
        else:
            del acc[idx]

    for i, c in rest:
        g = _gamma2_exp(spec, spec.monomials[i])
        if g is not None:
            put(spec.rank[g], fld.square(c))
    for (i, ci), (j, cj) in itertools.combinations(rest, 2):
        prod = _mul_exp(spec, spec.monomials[i], spec.monomials[j])
        if prod is not None:
            put(spec.rank[prod], fld.mul(ci, cj))
    if const:
        for i, c in rest:
            put(i, fld.mul(const, c))
    coeffs = [0] * spec.dim
    for i, c in acc.items():
        coeffs[i] = c
    return Element(spec.space, tuple(coeffs))


#### bundle construction #####################################################


def _disjoint_pairs(spec: DPSpec) -> Iterable[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered monomial pairs with nonzero product, enumerated directly
    (per variable, pairs of exponents with disjoint bits)."""
    per_var = []
    for bd in spec.bounds:
        per_var.append([(x, y)
                        for x in range(bd + 1)
                        for y in range(bd + 1) if not (x & y)])
    for combo in itertools.product(*per_var):
        yield tuple(c[0] for c in combo), tuple(c[1] for c in combo)


def _bracket_terms(spec: DPSpec, kind: str) -> list[tuple[int, int]]:
    """Ordered (u, v) variable pairs: the bracket is the sum over them of
    (d/du of the left argument) times (d/dv of the right argument)."""
    terms: list[tuple[int, int]] = []
    for p, q in spec.even_pairs:
        terms.append((p, q))
        terms.append((q, p))
    if kind == "pi-i":
        for t in spec.thetas:
            terms.append((t, t))
    else:
        for xi, eta in spec.odd_pairs:
            terms.append((xi, eta))
            terms.append((eta, xi))
    return terms


def _build(spec: DPSpec, kind: str) -> AlgebraBundle:
    if kind == "pi-i" and spec.odd_pairs:
        raise RoleMismatch("this family takes unpaired odd generators only")
    if kind == "pi-pi" and spec.thetas:
        raise RoleMismatch("this family takes paired odd generators only")

    sp = spec.space
    rank = spec.rank

    product: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
    for a, b in _disjoint_pairs(spec):
        ra, rb = rank[a], rank[b]
        if ra <= rb:
            product[(ra, rb)] = ((rank[_mul_exp(spec, a, b)], 1),)

    # bracket over ordered pairs; each (u, v) term contributes
    # m(c)*m(d) at the slot (c + e_u, d + e_v). Diagonal slots are discarded:
    # the table stores an alternating bracket, so whatever the term sum says
    # about {m, m} (it is 1 for bare thetas) never becomes data.
    acc: dict[tuple[int, int], dict[int, int]] = {}
    terms = _bracket_terms(spec, kind)
    for c, d in _disjoint_pairs(spec):
        target = rank[_mul_exp(spec, c, d)]
        for u, v in terms:
            a = _shift_up(spec, c, u)
            if a is None:
                continue
            b = _shift_up(spec, d, v)
            if b is None:
                continue
            key = (rank[a], rank[b])
            slot = acc.setdefault(key, {})
            slot[target] = slot.get(target, 0) ^ 1

    bracket: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
    for (i, j), vals in acc.items():
        if i >= j:
            # i == j: alternation wins over the term sum; i > j: the
            # transposed term list supplies (j, i) identically.
            continue
        sv = sv_from_dict(vals)
        if sv:
            bracket[(i, j)] = sv

    squaring: dict[int, tuple[tuple[int, int], ...]] = {}
    for h in sp.odd_indices:
        m = spec.monomials[h]
        vals: dict[int, int] = {}

        def put(e: Element) -> None:
            for i, c in e.sparse():
                vals[i] = vals.get(i, 0) ^ c

        for p, q in spec.even_pairs:
            dp_ = _shift_down(m, p)
            dq_ = _shift_down(m, q)
            if dp_ is not None and dq_ is not None:
                prod = _mul_exp(spec, dp_, dq_)
                if prod is not None:
                    vals[rank[prod]] = vals.get(rank[prod], 0) ^ 1
        if kind == "pi-i":
            for t in spec.thetas:
                dt = _shift_down(m, t)
                if dt is not None:
                    g = _gamma2_exp(spec, dt)
                    if g is not None:
                        vals[rank[g]] = vals.get(rank[g], 0) ^ 1
                    # the derivative may be the constant monomial; its
                    # divided square is zero by convention
        else:
            for xi, eta in spec.odd_pairs:
                da = _shift_down(m, xi)
                db = _shift_down(m, eta)
                if da is not None and db is not None:
                    prod = _mul_exp(spec, da, db)
                    if prod is not None:
                        vals[rank[prod]] = vals.get(rank[prod], 0) ^ 1
        sv = sv_from_dict(vals)
        if sv:
            squaring[h] = sv

    label = "pi_i" if kind == "pi-i" else "pi_pi"
    shape = "x".join(str(b + 1) for b in spec.bounds)
    return AlgebraBundle(
        sp,
        BilinearTable(sp, "product", product, symmetric=True),
        BilinearTable(sp, "bracket", bracket),
        SquaringTable(sp, squaring),
        unit=sp.basis(0),
        name=f"{label}({shape})",
    )


def _standard_spec(even_pairs: int, thetas: int, odd_pairs: int,
                   heights: Sequence[int] | int | None,
                   field: Field) -> DPSpec:
    if even_pairs < 0 or thetas < 0 or odd_pairs < 0:
        raise ValidationError("variable counts cannot be negative")
    if isinstance(heights, int):
        heights = [heights] * (2 * even_pairs)
    if heights is None:
        heights = [1] * (2 * even_pairs)
    heights = list(heights)
    if len(heights) != 2 * even_pairs:
        raise ValidationError(
            f"need one height per even variable ({2 * even_pairs}), "
            f"got {len(heights)}")
    vs = [DPVariable(f"p{i + 1}", 0, "p", heights[i]) for i in range(even_pairs)]
    vs += [DPVariable(f"q{i + 1}", 0, "q", heights[even_pairs + i])
           for i in range(even_pairs)]
    vs += [DPVariable(f"theta{i + 1}", 1, "theta") for i in range(thetas)]
    vs += [DPVariable(f"xi{i + 1}", 1, "xi") for i in range(odd_pairs)]
    vs += [DPVariable(f"eta{i + 1}", 1, "eta") for i in range(odd_pairs)]
    return DPSpec(vs, field)


def build_pi_i(spec: DPSpec | None = None, *, even_pairs: int = 0, odd: int = 0,
               heights: Sequence[int] | int | None = None,
               field: Field = GF2) -> AlgebraBundle:
    """Poisson bundle with unpaired odd generators (divided-square family).

    Either pass an explicit :class:`DPSpec`, or give counts: ``even_pairs``
    symplectic (p, q) pairs with ``heights`` (one per even variable) and
    ``odd`` theta generators.
    """
    if spec is None:
        spec = _standard_spec(even_pairs, odd, 0, heights, field)
    return _build(spec, "pi-i")


def build_pi_pi(spec: DPSpec | None = None, *, even_pairs: int = 0,
                odd_pairs: int = 0,
                heights: Sequence[int] | int | None = None,
                field: Field = GF2) -> AlgebraBundle:
    """Poisson bundle with paired odd generators (xi/eta family)."""
    if spec is None:
        spec = _standard_spec(even_pairs, 0, odd_pairs, heights, field)
    return _build(spec, "pi-pi")
