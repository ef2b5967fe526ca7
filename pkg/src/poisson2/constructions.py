"""Builders that combine algebras: representations, semidirect and tensor products.

A representation is handed over as explicit matrices on the basis of the
acting algebra; nothing about them is assumed beyond parity homogeneity,
which the constructor enforces. Whether the matrices actually satisfy the
module laws is the job of :func:`check_representation`. The two product
constructions return ordinary bundles, so the usual structure checks apply
to their output unchanged.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .core import (AlgebraBundle, BilinearTable, Element, InvalidRepresentation,
                   Report, SparseVec, SquaringTable, SuperSpace, ValidationError,
                   fmt_sparse, sv_dense, sv_from_dict)

Mat = tuple[tuple[int, ...], ...]


#### dense matrix arithmetic over binary fields ##############################
#
# Operators on the module are small dense matrices, rows indexing outputs:
# mat[a][b] is the coefficient of basis vector a in the image of vector b.
# Field addition is XOR for every field used here.


def _freeze(field, rows: Sequence[Sequence[int]], dim: int) -> Mat:
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValidationError("operator matrix has wrong shape")
    return tuple(tuple(field.validate_scalar(c) for c in r) for r in rows)


def _mat_mul(field, A: Mat, B: Mat) -> Mat:
    n = len(A)
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = 0
            for k in range(n):
                if A[a][k] and B[k][b]:
                    acc ^= field.mul(A[a][k], B[k][b])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_add(*mats: Mat) -> Mat:
    n = len(mats[0])
    return tuple(tuple(
        _xor_all(m[a][b] for m in mats) for b in range(n)) for a in range(n))


def _xor_all(vals) -> int:
    acc = 0
    for v in vals:
        acc ^= v
    return acc


def _mat_zero(n: int) -> Mat:
    return tuple((0,) * n for _ in range(n))


def _mat_combine(field, mats: Sequence[Mat], sv: SparseVec, n: int) -> Mat:
    """Linear combination sum_t c_t * mats[t]."""
    out = [[0] * n for _ in range(n)]
    for t, c in sv:
        m = mats[t]
        for a in range(n):
            row = m[a]
            for b in range(n):
                if row[b]:
                    out[a][b] ^= field.mul(c, row[b])
    return tuple(tuple(r) for r in out)


def _mat_apply(field, mat: Mat, sv: SparseVec) -> SparseVec:
    acc: dict[int, int] = {}
    for b, c in sv:
        for a in range(len(mat)):
            v = mat[a][b]
            if v:
                w = acc.get(a, 0) ^ field.mul(c, v)
                if w:
                    acc[a] = w
                else:
                    del acc[a]
    return sv_from_dict(acc)


def _first_col_mismatch(A: Mat, B: Mat, cols) -> int | None:
    for b in cols:
        for a in range(len(A)):
            if A[a][b] != B[a][b]:
                return b
    return None


#### representations #########################################################


@dataclass(frozen=True)
class Representation:
    """Module data for a Poisson algebra: one operator pair per basis vector.

    ``pi[i]`` is the associative action of the i-th basis vector of
    ``algebra`` on ``space``, ``gamma[i]`` the bracket action. Both must be
    parity-homogeneous operators of the same parity as that basis vector;
    the constructor rejects anything else. The module laws themselves are
    *not* assumed — run :func:`check_representation`.
    """

    algebra: AlgebraBundle
    space: SuperSpace
    pi: tuple[Mat, ...]
    gamma: tuple[Mat, ...]

    def __post_init__(self):
        P = self.algebra
        P.require("product", "bracket")
        if P.space.odd_indices:
            P.require("squaring")
        if self.space.field != P.space.field:
            raise ValidationError("module lives over a different field")
        f = P.space.field
        dv = self.space.dim
        if len(self.pi) != P.space.dim or len(self.gamma) != P.space.dim:
            raise ValidationError("need one operator per basis vector of the algebra")
        object.__setattr__(self, "pi", tuple(_freeze(f, m, dv) for m in self.pi))
        object.__setattr__(self, "gamma", tuple(_freeze(f, m, dv) for m in self.gamma))
        parV = self.space.parities
        for i, want in enumerate(P.space.parities):
            for label, mat in (("pi", self.pi[i]), ("gamma", self.gamma[i])):
                for a in range(dv):
                    for b in range(dv):
                        if mat[a][b] and (parV[a] + parV[b]) & 1 != want:
                            raise ValidationError(
                                f"{label}({P.space.names[i]}) is not parity-homogeneous "
                                f"of parity {want}")


def check_representation(rep: Representation) -> Report:
    """Verify the module laws of a representation, exhaustively on basis pairs.

    Covers: pi multiplicative, gamma compatible with bracket and squaring,
    the two mixed compatibilities tying pi and gamma together, and the two
    characteristic-2 conditions that only constrain the even (resp. odd)
    part of the module.
    """
    t0 = time.perf_counter()
    P = rep.algebra
    sp, sv_space = P.space, rep.space
    f = sp.field
    n, dv = sp.dim, sv_space.dim
    out = Report()
    out.dimensions.update(dim_algebra=n, dim_module=dv)

    def pi_of(sv: SparseVec) -> Mat:
        return _mat_combine(f, rep.pi, sv, dv)

    def gamma_of(sv: SparseVec) -> Mat:
        return _mat_combine(f, rep.gamma, sv, dv)

    def record(law: str, names: tuple[str, ...], lhs: Mat, rhs: Mat, cols) -> bool:
        b = _first_col_mismatch(lhs, rhs, cols)
        if b is None:
            return True
        col = tuple(range(dv))
        lcol = sv_from_dict({a: lhs[a][b] for a in col if lhs[a][b]})
        rcol = sv_from_dict({a: rhs[a][b] for a in col if rhs[a][b]})
        out.add(law, names + (sv_space.names[b],),
                fmt_sparse(sv_space, lcol), fmt_sparse(sv_space, rcol))
        return len(out.violations) < 16

    all_cols = tuple(range(dv))
    ev_cols = sv_space.even_indices
    od_cols = sv_space.odd_indices

    out.law("pi-morphism")
    for i in range(n):
        for j in range(i, n):
            lhs = pi_of(P.product.value(i, j))
            rhs = _mat_mul(f, rep.pi[i], rep.pi[j])
            if not record("pi-morphism", (sp.names[i], sp.names[j]), lhs, rhs, all_cols):
                break
        else:
            continue
        break

    out.law("gamma-morphism")
    for i in range(n):
        for j in range(i + 1, n):
            lhs = gamma_of(P.bracket.value(i, j))
            rhs = _mat_add(_mat_mul(f, rep.gamma[i], rep.gamma[j]),
                           _mat_mul(f, rep.gamma[j], rep.gamma[i]))
            if not record("gamma-morphism", (sp.names[i], sp.names[j]), lhs, rhs, all_cols):
                break
        else:
            continue
        break

    if sp.odd_indices and P.squaring is not None:
        out.law("gamma-squaring")
        for i in sp.odd_indices:
            lhs = gamma_of(P.squaring.value(i))
            rhs = _mat_mul(f, rep.gamma[i], rep.gamma[i])
            if not record("gamma-squaring", (sp.names[i],), lhs, rhs, all_cols):
                break

    out.law("leibniz-action")
    for i in range(n):
        for j in range(i, n):
            lhs = gamma_of(P.product.value(i, j))
            rhs = _mat_add(_mat_mul(f, rep.pi[i], rep.gamma[j]),
                           _mat_mul(f, rep.pi[j], rep.gamma[i]))
            if not record("leibniz-action", (sp.names[i], sp.names[j]), lhs, rhs, all_cols):
                break
        else:
            continue
        break

    out.law("bracket-action")
    for i in range(n):
        for j in range(n):
            lhs = pi_of(P.bracket.value(i, j))
            rhs = _mat_add(_mat_mul(f, rep.pi[i], rep.gamma[j]),
                           _mat_mul(f, rep.gamma[j], rep.pi[i]))
            if not record("bracket-action", (sp.names[i], sp.names[j]), lhs, rhs, all_cols):
                break
        else:
            continue
        break

    out.law("even-compat")
    out.law("odd-compat")
    for i in sp.odd_indices:
        for j in sp.even_indices:
            px, gx = rep.pi[i], rep.gamma[i]
            py, gy = rep.pi[j], rep.gamma[j]
            lhs = _mat_mul(f, py, _mat_mul(f, gx, px))
            rhs = _mat_mul(f, px, _mat_mul(f, py, gx))
            if not record("even-compat", (sp.names[i], sp.names[j]), lhs, rhs, ev_cols):
                break
            lhs = _mat_mul(f, py, _mat_mul(f, py, gx))
            rhs = _mat_add(_mat_mul(f, py, _mat_mul(f, gx, py)),
                           _mat_mul(f, px, _mat_mul(f, py, gy)),
                           _mat_mul(f, gy, _mat_mul(f, px, py)))
            if not record("odd-compat", (sp.names[i], sp.names[j]), lhs, rhs, od_cols):
                break
        else:
            continue
        break

    out.timing = time.perf_counter() - t0
    return out


def adjoint_representation(bundle: AlgebraBundle) -> Representation:
    """The algebra acting on itself: pi by multiplication, gamma by bracket."""
    bundle.require("product", "bracket")
    sp = bundle.space
    n = sp.dim

    def col_matrix(values: list[SparseVec]) -> Mat:
        rows = [[0] * n for _ in range(n)]
        for b, sv in enumerate(values):
            for a, c in sv:
                rows[a][b] = c
        return tuple(tuple(r) for r in rows)

    pi = tuple(col_matrix([bundle.product.value(i, b) for b in range(n)])
               for i in range(n))
    gamma = tuple(col_matrix([bundle.bracket.value(i, b) for b in range(n)])
                  for i in range(n))
    return Representation(bundle, sp, pi, gamma)


#### semidirect product ######################################################


def semidirect_poisson(rep: Representation) -> AlgebraBundle:
    """Extend the algebra by its module, with the module as a square-zero ideal.

    Products and brackets between the two blocks go through the module
    actions; two module elements multiply (and bracket) to zero, and odd
    module vectors square to zero, so mixed squares come out of the
    extended-square expansion as the bracket action demands.
    """
    report = check_representation(rep)
    if not report.passed:
        raise InvalidRepresentation(
            "module laws fail: " + ", ".join(sorted({v.law for v in report.violations})))
    P, V = rep.algebra, rep.space
    if V.dim == 0:
        return P
    f = P.space.field
    np_, nv = P.space.dim, V.dim
    names = P.space.names + tuple("v." + nm for nm in V.names)
    space = SuperSpace(f, names, P.space.parities + V.parities)

    def lift(sv: SparseVec) -> SparseVec:
        return tuple((np_ + a, c) for a, c in sv)

    product: dict[tuple[int, int], SparseVec] = {}
    bracket: dict[tuple[int, int], SparseVec] = {}
    for (i, j), val in P.product.entries.items():
        product[(i, j)] = val
    for (i, j), val in P.bracket.entries.items():
        bracket[(i, j)] = val
    for i in range(np_):
        for b in range(nv):
            pv = sv_from_dict({np_ + a: rep.pi[i][a][b]
                               for a in range(nv) if rep.pi[i][a][b]})
            if pv:
                product[(i, np_ + b)] = pv
            gv = sv_from_dict({np_ + a: rep.gamma[i][a][b]
                               for a in range(nv) if rep.gamma[i][a][b]})
            if gv:
                bracket[(i, np_ + b)] = gv

    squaring: dict[int, SparseVec] = {}
    if P.squaring is not None:
        squaring.update(P.squaring.entries)

    unit = None
    if P.unit is not None:
        u = P.unit.sparse()
        if _mat_combine(f, rep.pi, u, nv) == tuple(
                tuple(1 if a == b else 0 for b in range(nv)) for a in range(nv)):
            unit = Element(space, sv_dense(u, space.dim))

    return AlgebraBundle(
        space,
        BilinearTable(space, "product", product),
        BilinearTable(space, "bracket", bracket),
        SquaringTable(space, squaring),
        unit,
        name=f"semidirect({P.name or '?'})")


#### tensor product ##########################################################


def tensor_product(left: AlgebraBundle, right: AlgebraBundle) -> AlgebraBundle:
    """Tensor product of two Poisson bundles on the paired basis.

    Basis pairs are ordered left-index major. The bracket of two pure
    tensors couples the bracket of one side with the product of the other,
    in both ways; a pure odd tensor squares through whichever factor is odd.
    Odd elements mixing the two blocks get their square from the
    extended-square expansion, which is exactly the rule the bracket
    encodes.
    """
    left.require("product", "bracket")
    right.require("product", "bracket")
    f = left.space.field
    if right.space.field != f:
        raise ValidationError("tensor factors live over different fields")
    nl, nr = left.space.dim, right.space.dim
    names = tuple(f"{a}(x){b}" for a in left.space.names for b in right.space.names)
    parities = tuple((pa + pb) & 1
                     for pa in left.space.parities for pb in right.space.parities)
    space = SuperSpace(f, names, parities)

    def pair(i: int, j: int) -> int:
        return i * nr + j

    def weave(lsv: SparseVec, rsv: SparseVec) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, ca in lsv:
            for b, cb in rsv:
                t = pair(a, b)
                w = out.get(t, 0) ^ f.mul(ca, cb)
                if w:
                    out[t] = w
                else:
                    del out[t]
        return out

    product: dict[tuple[int, int], SparseVec] = {}
    bracket: dict[tuple[int, int], SparseVec] = {}
    for I in range(nl * nr):
        i, j = divmod(I, nr)
        for K in range(I, nl * nr):
            k, l = divmod(K, nr)
            val = sv_from_dict(weave(left.product.value(i, k), right.product.value(j, l)))
            if val:
                product[(I, K)] = val
            if I < K:
                acc = weave(left.bracket.value(i, k), right.product.value(j, l))
                for t, c in weave(left.product.value(i, k), right.bracket.value(j, l)).items():
                    w = acc.get(t, 0) ^ c
                    if w:
                        acc[t] = w
                    else:
                        del acc[t]
                if acc:
                    bracket[(I, K)] = sv_from_dict(acc)

    squaring: dict[int, SparseVec] = {}
    for I in range(nl * nr):
        i, j = divmod(I, nr)
        if parities[I] != 1:
            continue
        if left.space.parities[i] == 1:
            val = weave(left.squaring.value(i), right.product.value(j, j))
        else:
            val = weave(left.product.value(i, i), right.squaring.value(j))
        sv = sv_from_dict(val)
        if sv:
            squaring[I] = sv

    unit = None
    if left.unit is not None and right.unit is not None:
        usv = sv_from_dict(weave(left.unit.sparse(), right.unit.sparse()))
        unit = Element(space, sv_dense(usv, space.dim))

    return AlgebraBundle(
        space,
        BilinearTable(space, "product", product),
        BilinearTable(space, "bracket", bracket),
        SquaringTable(space, squaring),
        unit,
        name=f"{left.name or '?'}(x){right.name or '?'}")


def tensor_swap_matrix(left: AlgebraBundle, right: AlgebraBundle) -> list[list[int]]:
    """Benchmark isomorphism left(x)right -> right(x)left: transpose the pair index."""
    nl, nr = left.space.dim, right.space.dim
    n = nl * nr
    mat = [[0] * n for _ in range(n)]
    for i in range(nl):
        for j in range(nr):
            mat[j * nl + i][i * nr + j] = 1
    return mat
