"""Formal deformations of Poisson structures, truncated at a fixed order.

A deformation is stored as its layer list: order-k data is k even pair
cochains (mu_i, omega_i), one per power of the parameter. The deformed
structure lives on an ordinary bundle over the base field with basis
{t^j e_i}; its bracket collects the layer terms t-degree by t-degree, and
its squaring carries the t^(2a) weight that a quadratic map forces on
higher blocks. Validity of deformation data is defined operationally:
the deformed bundle passes the full axiom suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checks import check_poisson
from .cohomology import (Cochain, CochainSpace, coboundary_matrix,
                         poisson_subspace)
from .core import (AlgebraBundle, BilinearTable, NotADeformation,
                   NotPoissonInput, Report, SparseVec, SquaringTable,
                   SuperSpace, ValidationError, sv_add, sv_scale)
from .linalg import Matrix, solve

__all__ = [
    "TruncatedDeformation", "pair_cochain", "check_infinitesimal",
    "obstruction", "check_extension", "deformed_bundle", "equivalent_order1",
]


def _resolve(space: SuperSpace, key) -> int:
    if isinstance(key, str):
        return space.index(key)
    return int(key)


def pair_cochain(bundle: AlgebraBundle, mu=None, omega=None) -> Cochain:
    """Assemble a degree-2 pair cochain from small tables.

    ``mu`` maps basis pairs (names or indices, any order, no diagonal) to
    linear combinations; ``omega`` maps odd basis vectors to linear
    combinations. Values may be dicts keyed by name/index or sparse pairs.
    """
    cs = CochainSpace(bundle, 2)
    space = bundle.space
    f = space.field
    coeffs = [0] * cs.total_dim

    def combo(val) -> SparseVec:
        if isinstance(val, dict):
            items = [(_resolve(space, k), c) for k, c in val.items()]
        else:
            items = [(_resolve(space, k), c) for k, c in val]
        out = {}
        for t, c in items:
            out[t] = out.get(t, 0) ^ f.validate_scalar(c)
        return tuple(sorted((t, c) for t, c in out.items() if c))

    for (a, b), val in (mu or {}).items():
        i, j = _resolve(space, a), _resolve(space, b)
        sv = combo(val)
        if not sv:
            continue
        if i == j:
            raise ValidationError("mu is alternating; diagonal entries must vanish")
        for m, c in sv:
            coeffs[cs.phi_index(tuple(sorted((i, j))), m)] ^= c
    for x, val in (omega or {}).items():
        i = _resolve(space, x)
        if space.parities[i] != 1:
            raise ValidationError("omega is defined on odd basis vectors only")
        for m, c in combo(val):
            coeffs[cs.omega_index(i, (), m)] ^= c
    return Cochain(cs, tuple(coeffs))


def _check_layer(bundle: AlgebraBundle, layer: Cochain, sub2, what: str) -> None:
    if layer.cspace.n != 2 or layer.cspace.bundle is not bundle:
        raise ValidationError(f"{what} must be a degree-2 pair cochain on the base")
    vec = layer.sparse()
    par = layer.cspace.parity_vector()
    if any(par[i] for i, _ in vec):
        raise ValidationError(f"{what} must be even")
    if not sub2.contains(vec):
        raise ValidationError(
            f"{what} fails the multiplicativity constraints of the pair complex")


@dataclass(frozen=True)
class TruncatedDeformation:
    """Layers (mu_i, omega_i) of a deformation cut off after order k."""

    base: AlgebraBundle
    layers: tuple[Cochain, ...]

    def __post_init__(self):
        self.base.require("product", "bracket")
        verdict = check_poisson(self.base)
        if not verdict.passed:
            laws = ", ".join(sorted({v.law for v in verdict.violations}))
            raise NotPoissonInput(f"deformation base fails: {laws}")
        if len(self.layers) < 1:
            raise ValidationError("a deformation carries at least one layer")
        sub2 = poisson_subspace(self.base, 2)
        for pos, layer in enumerate(self.layers, start=1):
            _check_layer(self.base, layer, sub2, f"layer {pos}")

    @property
    def order(self) -> int:
        return len(self.layers)

    def mu(self, i: int, a: int, b: int) -> SparseVec:
        """mu_i on a basis pair; i = 0 is the undeformed bracket."""
        if i == 0:
            return self.base.bracket.value(a, b)
        return self.layers[i - 1].phi_value((a, b))

    def omega(self, i: int, x: int) -> SparseVec:
        """omega_i on an odd basis vector; i = 0 is the undeformed squaring."""
        if i == 0:
            return self.base.squaring.value(x)
        return self.layers[i - 1].omega_value(x, ())


def check_infinitesimal(D: TruncatedDeformation) -> Report:
    """Is the first layer a cocycle of the pair complex?"""
    d2 = coboundary_matrix(D.base, 2)
    img = d2.apply(D.layers[0].sparse())
    rep = Report()
    rep.law("infinitesimal-cocycle")
    if img:
        cs3 = CochainSpace(D.base, 3)
        f = D.base.space.field
        for i, c in img:
            if not rep.add("infinitesimal-cocycle", (cs3.describe(i),),
                           "0", f.fmt(c)):
                break
    return rep


def deformed_bundle(D: TruncatedDeformation) -> AlgebraBundle:
    """The deformed structure as a bundle on the blocks {t^j e_i}.

    The product is the parameter-linear extension of the base product; the
    bracket sums layer terms into the matching power; the squaring of a
    block vector t^a x starts at power 2a because squarings are quadratic.
    Powers beyond the order are cut.
    """
    P = D.base
    f = P.space.field
    k = D.order
    n = P.dim
    names = []
    for j in range(k + 1):
        pre = "" if j == 0 else ("t*" if j == 1 else f"t^{j}*")
        names.extend(pre + nm for nm in P.space.names)
    space = SuperSpace(f, tuple(names), P.space.parities * (k + 1))
    N = space.dim

    prod = {}
    for u in range(N):
        ju, eu = divmod(u, n)
        for v in range(u, N):
            jv, ev = divmod(v, n)
            if ju + jv > k:
                continue
            val = tuple(((ju + jv) * n + t, c) for t, c in P.product.value(eu, ev))
            if val:
                prod[(u, v)] = val

    brk = {}
    for u in range(N):
        ju, eu = divmod(u, n)
        for v in range(u + 1, N):
            jv, ev = divmod(v, n)
            acc: dict[int, int] = {}
            for i in range(0, k - ju - jv + 1):
                for t, c in D.mu(i, eu, ev):
                    key = (ju + jv + i) * n + t
                    w = acc.get(key, 0) ^ c
                    if w:
                        acc[key] = w
                    else:
                        del acc[key]
            if acc:
                brk[(u, v)] = tuple(sorted(acc.items()))

    squaring = None
    if space.odd_indices:
        sq = {}
        for w in space.odd_indices:
            a, x = divmod(w, n)
            acc = {}
            for i in range(0, k - 2 * a + 1):
                for t, c in D.omega(i, x):
                    key = (2 * a + i) * n + t
                    val = acc.get(key, 0) ^ c
                    if val:
                        acc[key] = val
                    else:
                        del acc[key]
            if acc:
                sq[w] = tuple(sorted(acc.items()))
        squaring = SquaringTable(space, sq)

    unit = None
    if P.unit is not None:
        unit = space.element({names[t]: c for t, c in P.unit.sparse()})
    return AlgebraBundle(space, BilinearTable(space, "product", prod),
                         BilinearTable(space, "bracket", brk), squaring, unit,
                         name=f"{P.name or '?'}[t]/(t^{k + 1})")


def obstruction(D: TruncatedDeformation) -> Cochain:
    """The degree-3 pair blocking extension to the next order.

    The deformation must already be valid at its own order; the output is
    verified to be even and to satisfy the degree-3 multiplicativity
    constraints before it is returned.
    """
    verdict = check_poisson(deformed_bundle(D))
    if not verdict.passed:
        laws = ", ".join(sorted({v.law for v in verdict.violations}))
        raise NotADeformation(f"order-{D.order} data fails the axiom suite: {laws}")
    P = D.base
    f = P.space.field
    k = D.order
    cs3 = CochainSpace(P, 3)

    def mu_sv(i: int, a: int, sv: SparseVec) -> SparseVec:
        out: SparseVec = ()
        for t, c in sv:
            out = sv_add(out, sv_scale(f, c, D.layers[i - 1].phi_value((a, t))))
        return out

    coeffs = [0] * cs3.total_dim
    for T in cs3.ntuples:
        x, y, z = T
        acc: SparseVec = ()
        for i in range(1, k + 1):
            j = k + 1 - i
            acc = sv_add(acc, mu_sv(i, x, D.mu(j, y, z)))
            acc = sv_add(acc, mu_sv(i, y, D.mu(j, z, x)))
            acc = sv_add(acc, mu_sv(i, z, D.mu(j, x, y)))
        for m, c in acc:
            coeffs[cs3.phi_index(T, m)] ^= c
    for x in cs3.owners:
        for Z in cs3.ztuples:
            z = Z[0]
            acc = ()
            for i in range(1, k + 1):
                j = k + 1 - i
                acc = sv_add(acc, mu_sv(i, z, D.omega(j, x)))
                acc = sv_add(acc, mu_sv(i, x, D.mu(j, x, z)))
            for m, c in acc:
                coeffs[cs3.omega_index(x, Z, m)] ^= c

    out = Cochain(cs3, tuple(coeffs))
    vec = out.sparse()
    par = cs3.parity_vector()
    if any(par[i] for i, _ in vec) or not poisson_subspace(P, 3).contains(vec):
        raise ValidationError(
            "obstruction escaped the even constrained degree-3 space")
    return out


def check_extension(D: TruncatedDeformation, layer_next: Cochain) -> bool:
    """Does the candidate next layer absorb the obstruction?"""
    _check_layer(D.base, layer_next, poisson_subspace(D.base, 2), "next layer")
    d2 = coboundary_matrix(D.base, 2)
    return d2.apply(layer_next.sparse()) == obstruction(D).sparse()


def equivalent_order1(P: AlgebraBundle, layerA: Cochain,
                      layerB: Cochain) -> Cochain | None:
    """A degree-1 witness making two infinitesimal layers equivalent.

    Solves layerA + layerB = d(psi) for psi ranging over the even part of
    the constrained degree-1 space (linear maps satisfying the product
    rule). Returns the witness, or None when the classes differ.
    """
    sub2 = poisson_subspace(P, 2)
    d2 = coboundary_matrix(P, 2)
    for what, layer in (("first layer", layerA), ("second layer", layerB)):
        _check_layer(P, layer, sub2, what)
        if d2.apply(layer.sparse()):
            raise ValidationError(f"{what} is not a cocycle")

    sub1 = poisson_subspace(P, 1)
    d1 = coboundary_matrix(P, 1)
    evens = [b for b, p in zip(sub1.basis, sub1.basis_parity) if p == 0]
    target = sv_add(layerA.sparse(), layerB.sparse())
    f = P.space.field
    cs1 = CochainSpace(P, 1)
    if not target:
        return Cochain(cs1, (0,) * cs1.total_dim)
    if not evens:
        return None

    nrows = d1.dst.total_dim
    dense = [[0] * len(evens) for _ in range(nrows)]
    for col, b in enumerate(evens):
        for r, c in d1.apply(b):
            dense[r][col] = c
    rhs = [0] * nrows
    for r, c in target:
        rhs[r] = c
    sol = solve(Matrix.from_rows(f, dense, len(evens)), rhs)
    if sol is None:
        return None
    psi: SparseVec = ()
    for kk, c in enumerate(sol):
        if c:
            psi = sv_add(psi, sv_scale(f, c, evens[kk]))
    coeffs = [0] * cs1.total_dim
    for i, c in psi:
        coeffs[i] = c
    return Cochain(cs1, tuple(coeffs))
