"""Law checkers and structural constructions for algebra bundles.

Checks return a :class:`~poisson2.core.Report` and never raise on a law
violation — exceptions are reserved for structural misuse (missing roles,
shape mismatches, budget limits). Multilinear laws are verified on all basis
tuples, which is exhaustive for them; the genuinely quadratic laws (squaring
identities) are verified on basis vectors plus seeded random elements, since
basis cases alone would not pin them down.

Triple-indexed laws on large GF(2) bundles (total dim above
``FLAT_MIN_DIM``) are evaluated as sparse matrix identities: every term of
shape ``sum_a T1[u,v,a] T2[a,w,m]`` is one sparse matmul, and the terms are
XOR-compared after reindexing into a common layout. Small or GF(2^k) bundles
use plain loops over the sparse tables.
"""

from __future__ import annotations

import itertools
import random
import time
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .core import (AdSquareMismatch, AlgebraBundle, BilinearTable, Element,
                   MissingStructure, NotAnIdeal, NotAssociative, Report,
                   SizeBudgetExceeded, SparseVec, SquaringTable, SuperSpace,
                   ValidationError, fmt_sparse, squaring_sv, sv_add,
                   sv_dense, sv_from_dense, sv_from_dict, sv_scale)
from .linalg import Matrix, in_span, span_rank

FLAT_MIN_DIM = 48
DERIVATION_DIM_CAP = 64


#### small evaluation helpers on sparse values ###############################


def _tbl_left(table: BilinearTable, i: int, sv: SparseVec) -> SparseVec:
    """e_i * v through a table."""
    f = table.space.field
    acc: dict[int, int] = {}
    for t, c in sv:
        for u, v in table.value(i, t):
            w = acc.get(u, 0) ^ f.mul(c, v)
            if w:
                acc[u] = w
            else:
                del acc[u]
    return sv_from_dict(acc)


def _tbl_right(table: BilinearTable, sv: SparseVec, j: int) -> SparseVec:
    """v * e_j through a table."""
    f = table.space.field
    acc: dict[int, int] = {}
    for t, c in sv:
        for u, v in table.value(t, j):
            w = acc.get(u, 0) ^ f.mul(c, v)
            if w:
                acc[u] = w
            else:
                del acc[u]
    return sv_from_dict(acc)


def _rand_element(space: SuperSpace, rng: random.Random, parity: int | None = None) -> SparseVec:
    idxs = range(space.dim) if parity is None else (
        space.even_indices if parity == 0 else space.odd_indices)
    for _ in range(8):
        sv = tuple((i, c) for i in idxs if (c := rng.randrange(space.field.order)))
        if sv:
            return sv
    return ()


def _names(space: SuperSpace, *svs: SparseVec | int) -> tuple[str, ...]:
    out = []
    for s in svs:
        if isinstance(s, int):
            out.append(space.names[s])
        else:
            out.append(fmt_sparse(space, s))
    return tuple(out)


#### flat sparse identity machinery (GF(2), large dims) #####################


def _sym_triples(table: BilinearTable, n: int):
    """All (i, j, target, coeff) with both argument orders materialized."""
    I, J, T, C = [], [], [], []
    for (i, j), val in table.entries.items():
        for t, c in val:
            I.append(i); J.append(j); T.append(t); C.append(c)
            if table.symmetric and i != j:
                I.append(j); J.append(i); T.append(t); C.append(c)
    return (np.array(I, dtype=np.int64), np.array(J, dtype=np.int64),
            np.array(T, dtype=np.int64), np.array(C, dtype=np.int64))


def _flat_product(t1: BilinearTable, t2: BilinearTable, n: int) -> sp.coo_matrix:
    """Sparse M[(u,v),(w,m)] = sum_a t1[u,v,a] * t2[a,w,m], mod 2."""
    i1, j1, a1, c1 = _sym_triples(t1, n)
    left = sp.coo_matrix((c1, (i1 * n + j1, a1)), shape=(n * n, n)).tocsr()
    a2, w2, m2, c2 = _sym_triples(t2, n)
    right = sp.coo_matrix((c2, (a2, w2 * n + m2)), shape=(n, n * n)).tocsr()
    out = (left @ right).tocoo()
    out.data %= 2
    out.eliminate_zeros()
    return out


def _remap(mat: sp.coo_matrix, n: int, pattern: str) -> sp.coo_matrix:
    """Reindex M[(u,v),(w,m)] into the canonical layout rows=(i,j), cols=(z,m).

    Patterns name where (i, j, z) sit among (u, v, w):
      "uv.w"  identity          (i,j,z) = (u,v,w)
      "wu.v"  w->i, u->j, v->z  (i,j,z) = (w,u,v)
      "uw.v"  u->i, w->j, v->z  (i,j,z) = (u,w,v)
    """
    u, v = mat.row // n, mat.row % n
    w, m = mat.col // n, mat.col % n
    if pattern == "uv.w":
        r, c = mat.row, mat.col
    elif pattern == "wu.v":
        r, c = w * n + u, v * n + m
    elif pattern == "uw.v":
        r, c = u * n + w, v * n + m
    else:  # pragma: no cover
        raise ValueError(pattern)
    return sp.coo_matrix((mat.data, (r, c)), shape=mat.shape)


def _flat_residual_witnesses(terms: Sequence[sp.coo_matrix], n: int) -> list[tuple[int, int, int]]:
    """XOR the terms; decode up to 16 distinct basis triples (i, j, z) left over."""
    total = terms[0].shape
    glued = sp.coo_matrix(total, dtype=np.int64)
    for t in terms:
        glued = glued + t
    glued = glued.tocoo()
    glued.data %= 2
    glued.eliminate_zeros()
    seen: list[tuple[int, int, int]] = []
    for r, c in zip(glued.row, glued.col):
        trip = (int(r) // n, int(r) % n, int(c) // n)
        if trip not in seen:
            seen.append(trip)
            if len(seen) >= 16:
                break
    return seen


#### check_lie ###############################################################


def check_lie(bundle: AlgebraBundle, seed: int = 0, samples: int = 8) -> Report:
    """Verify the Lie laws: Jacobi, Jacobi-with-squaring, polarization.

    Grading, bracket symmetry, the zero diagonal, and scalar 2-semilinearity
    of the squaring extension are enforced structurally at table construction
    and are recorded as covered laws rather than re-scanned.
    """
    t0 = time.perf_counter()
    bundle.require("bracket")
    space = bundle.space
    n = space.dim
    B = bundle.bracket
    rep = Report()
    rep.dimensions.update(dim=n, dim_even=len(space.even_indices),
                          dim_odd=len(space.odd_indices))
    for law in ("bracket-grading", "bracket-symmetry", "bracket-diagonal",
                "squaring-semilinearity"):
        rep.law(law)

    rep.law("jacobi")
    if n >= FLAT_MIN_DIM and space.field.degree == 1:
        BB = _flat_product(B, B, n)
        bad = _flat_residual_witnesses(
            [_remap(BB, n, "wu.v"), _remap(BB, n, "uw.v"), _remap(BB, n, "uv.w")], n)
        for i, j, z in bad:
            lhs = sv_add(_tbl_left(B, i, B.value(j, z)), _tbl_left(B, j, B.value(i, z)))
            rhs = _tbl_right(B, B.value(i, j), z)
            if not rep.add("jacobi", _names(space, i, j, z),
                           fmt_sparse(space, lhs), fmt_sparse(space, rhs)):
                break
    else:
        done = False
        for i in range(n):
            if done:
                break
            for j in range(i, n):
                if done:
                    break
                bij = B.value(i, j)
                for z in range(j, n):
                    lhs = sv_add(_tbl_left(B, i, B.value(j, z)),
                                 _tbl_left(B, j, B.value(i, z)))
                    rhs = _tbl_right(B, bij, z)
                    if lhs != rhs:
                        if not rep.add("jacobi", _names(space, i, j, z),
                                       fmt_sparse(space, lhs), fmt_sparse(space, rhs)):
                            done = True
                            break

    if space.odd_indices:
        bundle.require("squaring")
        rep.law("jacobi-squaring")
        rep.law("polarization")
        rng = random.Random(seed)
        odd_svs: list[SparseVec] = [((i, 1),) for i in space.odd_indices]
        for _ in range(samples):
            odd_svs.append(_rand_element(space, rng, parity=1))
        probes: list[SparseVec] = [((j, 1),) for j in range(n)]
        for _ in range(max(2, samples // 2)):
            probes.append(_rand_element(space, rng))
        for x in odd_svs:
            if not x:
                continue
            sx = squaring_sv(bundle, x)
            for y in probes:
                lhs = B.apply_sv(sx, y)
                rhs = B.apply_sv(x, B.apply_sv(x, y))
                if lhs != rhs:
                    rep.add("jacobi-squaring", _names(space, x, y),
                            fmt_sparse(space, lhs), fmt_sparse(space, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break
        # polarization: [x,y] = s(x+y) + s(x) + s(y) on random odd pairs
        for _ in range(samples):
            x = _rand_element(space, rng, parity=1)
            y = _rand_element(space, rng, parity=1)
            if not x or not y:
                continue
            lhs = B.apply_sv(x, y)
            rhs = sv_add(squaring_sv(bundle, sv_add(x, y)),
                         sv_add(squaring_sv(bundle, x), squaring_sv(bundle, y)))
            if lhs != rhs:
                rep.add("polarization", _names(space, x, y),
                        fmt_sparse(space, lhs), fmt_sparse(space, rhs))

    rep.timing = time.perf_counter() - t0
    return rep


#### check_associative_supercommutative #####################################


def check_associative_supercommutative(bundle: AlgebraBundle, seed: int = 0,
                                       samples: int = 8) -> Report:
    """Associativity on all basis triples, supercommutativity, unit laws."""
    t0 = time.perf_counter()
    bundle.require("product")
    space = bundle.space
    n = space.dim
    P = bundle.product
    rep = Report()
    rep.dimensions.update(dim=n, dim_even=len(space.even_indices),
                          dim_odd=len(space.odd_indices))
    rep.law("product-grading")

    rep.law("supercommutativity")
    if P.symmetric:
        for i in space.odd_indices:
            val = P.value(i, i)
            if val:
                rep.add("supercommutativity", _names(space, i, i),
                        fmt_sparse(space, val), "0")
    else:
        for i in range(n):
            for j in range(i, n):
                a, b = P.value(i, j), P.value(j, i)
                if a != b:
                    rep.add("supercommutativity", _names(space, i, j),
                            fmt_sparse(space, a), fmt_sparse(space, b))
                elif i == j and space.parities[i] == 1 and a:
                    rep.add("supercommutativity", _names(space, i, i),
                            fmt_sparse(space, a), "0")
                if len(rep.violations) >= 16:
                    break
            if len(rep.violations) >= 16:
                break

    rep.law("associativity")
    if n >= FLAT_MIN_DIM and space.field.degree == 1 and P.symmetric:
        PP = _flat_product(P, P, n)
        bad = _flat_residual_witnesses([_remap(PP, n, "uv.w"), _remap(PP, n, "wu.v")], n)
        for i, j, z in bad:
            lhs = _tbl_right(P, P.value(i, j), z)
            rhs = _tbl_left(P, i, P.value(j, z))
            if not rep.add("associativity", _names(space, i, j, z),
                           fmt_sparse(space, lhs), fmt_sparse(space, rhs)):
                break
    else:
        done = False
        for i in range(n):
            if done:
                break
            for j in range(n):
                if done:
                    break
                pij = P.value(i, j)
                for z in range(n):
                    lhs = _tbl_right(P, pij, z)
                    rhs = _tbl_left(P, i, P.value(j, z))
                    if lhs != rhs:
                        if not rep.add("associativity", _names(space, i, j, z),
                                       fmt_sparse(space, lhs), fmt_sparse(space, rhs)):
                            done = True
                            break

    if bundle.unit is not None:
        rep.law("unit")
        u = bundle.unit.sparse()
        for i in range(n):
            left = P.apply_sv(u, ((i, 1),))
            right = P.apply_sv(((i, 1),), u)
            if left != ((i, 1),):
                rep.add("unit", _names(space, i), fmt_sparse(space, left), space.names[i])
            if right != ((i, 1),):
                rep.add("unit", _names(space, i), fmt_sparse(space, right), space.names[i])
            if len(rep.violations) >= 16:
                break

    rep.timing = time.perf_counter() - t0
    return rep


#### check_poisson ###########################################################


def check_poisson(bundle: AlgebraBundle, seed: int = 0, samples: int = 8) -> Report:
    """Full Poisson law suite: product laws, Lie laws, Leibniz, compatibility.

    The bracket Leibniz rule {xy,z} = x{y,z} + {x,z}y is multilinear and is
    checked on basis triples. The product-squaring compatibility
    s(xy) = x^2 s(y) + xy{x,y} (x even, y odd) is quadratic in x, so it runs
    on basis pairs and on seeded random element pairs.
    """
    t0 = time.perf_counter()
    bundle.require("product", "bracket")
    space = bundle.space
    n = space.dim
    P, B = bundle.product, bundle.bracket
    rep = Report()
    rep.merge(check_associative_supercommutative(bundle, seed=seed, samples=samples))
    rep.merge(check_lie(bundle, seed=seed, samples=samples))

    rep.law("leibniz")
    if n >= FLAT_MIN_DIM and space.field.degree == 1 and P.symmetric:
        PB = _flat_product(P, B, n)
        BP = _flat_product(B, P, n)
        bad = _flat_residual_witnesses(
            [_remap(PB, n, "uv.w"), _remap(BP, n, "wu.v"), _remap(BP, n, "uw.v")], n)
        for i, j, z in bad:
            lhs = _tbl_right(B, P.value(i, j), z)
            rhs = sv_add(_tbl_left(P, i, B.value(j, z)),
                         _tbl_right(P, B.value(i, z), j))
            if not rep.add("leibniz", _names(space, i, j, z),
                           fmt_sparse(space, lhs), fmt_sparse(space, rhs)):
                break
    else:
        done = False
        for i in range(n):
            if done:
                break
            for j in range(i, n):
                if done:
                    break
                pij = P.value(i, j)
                for z in range(n):
                    lhs = _tbl_right(B, pij, z)
                    rhs = sv_add(_tbl_left(P, i, B.value(j, z)),
                                 _tbl_right(P, B.value(i, z), j))
                    if lhs != rhs:
                        if not rep.add("leibniz", _names(space, i, j, z),
                                       fmt_sparse(space, lhs), fmt_sparse(space, rhs)):
                            done = True
                            break

    if space.odd_indices:
        rep.law("product-squaring")
        rng = random.Random(seed + 1)
        evens: list[SparseVec] = [((i, 1),) for i in space.even_indices]
        odds: list[SparseVec] = [((j, 1),) for j in space.odd_indices]
        for _ in range(samples):
            ev = _rand_element(space, rng, parity=0)
            od = _rand_element(space, rng, parity=1)
            if ev:
                evens.append(ev)
            if od:
                odds.append(od)
        for x in evens:
            xx = P.apply_sv(x, x)
            for y in odds:
                xy = P.apply_sv(x, y)
                lhs = squaring_sv(bundle, xy)
                rhs = sv_add(P.apply_sv(xx, squaring_sv(bundle, y)),
                             P.apply_sv(xy, B.apply_sv(x, y)))
                if lhs != rhs:
                    rep.add("product-squaring", _names(space, x, y),
                            fmt_sparse(space, lhs), fmt_sparse(space, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break

    rep.timing = time.perf_counter() - t0
    return rep


#### derivations #############################################################

MatrixRows = Sequence[Sequence[int]]


def _matrix_apply(space: SuperSpace, mat: MatrixRows, sv: SparseVec) -> SparseVec:
    f = space.field
    acc: dict[int, int] = {}
    for b, c in sv:
        for a in range(space.dim):
            v = mat[a][b]
            if v:
                w = acc.get(a, 0) ^ f.mul(c, v)
                if w:
                    acc[a] = w
                else:
                    del acc[a]
    return sv_from_dict(acc)


def _matrix_parity(space: SuperSpace, mat: MatrixRows) -> int | None:
    par = space.parities
    seen = set()
    for a in range(space.dim):
        for b in range(space.dim):
            if mat[a][b]:
                seen.add((par[a] + par[b]) & 1)
    if len(seen) > 1:
        return None
    return seen.pop() if seen else 0


def check_derivation(bundle: AlgebraBundle, mat: MatrixRows,
                     structure: str = "lie", seed: int = 0, samples: int = 8) -> Report:
    """Verify the derivation laws of ``mat`` for the given structure.

    structure: "associative" (product Leibniz), "lie" (bracket Leibniz plus
    the squaring rule d(s(x)) = [d(x), x]), or "poisson" (all of them).
    """
    t0 = time.perf_counter()
    if structure not in ("associative", "lie", "poisson"):
        raise ValidationError(f"unknown structure {structure!r}")
    space = bundle.space
    n = space.dim
    if len(mat) != n or any(len(r) != n for r in mat):
        raise ValidationError("derivation matrix has wrong shape")
    rep = Report()
    rep.law("parity-homogeneous")
    if _matrix_parity(space, mat) is None:
        rep.add("parity-homogeneous", ("matrix",), "mixed-parity blocks", "single parity")

    def d(sv: SparseVec) -> SparseVec:
        return _matrix_apply(space, mat, sv)

    if structure in ("associative", "poisson"):
        bundle.require("product")
        P = bundle.product
        rep.law("product-leibniz")
        for i in range(n):
            for j in range(i if P.symmetric else 0, n):
                lhs = d(P.value(i, j))
                rhs = sv_add(P.apply_sv(d(((i, 1),)), ((j, 1),)),
                             P.apply_sv(((i, 1),), d(((j, 1),))))
                if lhs != rhs:
                    rep.add("product-leibniz", _names(space, i, j),
                            fmt_sparse(space, lhs), fmt_sparse(space, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break

    if structure in ("lie", "poisson"):
        bundle.require("bracket")
        B = bundle.bracket
        rep.law("bracket-leibniz")
        for i in range(n):
            for j in range(i, n):
                lhs = d(B.value(i, j))
                rhs = sv_add(B.apply_sv(d(((i, 1),)), ((j, 1),)),
                             B.apply_sv(((i, 1),), d(((j, 1),))))
                if lhs != rhs:
                    rep.add("bracket-leibniz", _names(space, i, j),
                            fmt_sparse(space, lhs), fmt_sparse(space, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break
        if space.odd_indices:
            bundle.require("squaring")
            rep.law("squaring-rule")
            rng = random.Random(seed)
            odd_svs: list[SparseVec] = [((i, 1),) for i in space.odd_indices]
            for _ in range(samples):
                sv = _rand_element(space, rng, parity=1)
                if sv:
                    odd_svs.append(sv)
            for x in odd_svs:
                lhs = d(squaring_sv(bundle, x))
                rhs = B.apply_sv(d(x), x)
                if lhs != rhs:
                    rep.add("squaring-rule", _names(space, x),
                            fmt_sparse(space, lhs), fmt_sparse(space, rhs))
                    if len(rep.violations) >= 16:
                        break

    rep.timing = time.perf_counter() - t0
    return rep


def derivation_space(bundle: AlgebraBundle, structure: str = "lie") -> dict[str, list[tuple[tuple[int, ...], ...]]]:
    """Solve for all derivation matrices of the given structure.

    Returns {"even": [...], "odd": [...]} of matrices (row tuples; column b
    holds the image of basis vector b). The constraint rows are parity-pure,
    so kernel vectors are parity-homogeneous and the split is exact.

    Raises:
        SizeBudgetExceeded: total dim above the supported cap.
    """
    if structure not in ("associative", "lie", "poisson"):
        raise ValidationError(f"unknown structure {structure!r}")
    space = bundle.space
    n = space.dim
    cap = DERIVATION_DIM_CAP if space.field.degree == 1 else DERIVATION_DIM_CAP // 2
    if n > cap:
        raise SizeBudgetExceeded(f"derivation_space supports dim <= {cap}, got {n}")
    rows: list[list[int]] = []

    def blank() -> list[int]:
        return [0] * (n * n)

    def add_value_along_unknowns(row: list[int], m: int, sv: SparseVec) -> None:
        # coefficient of unknown D[m][c] is sv_c  (term D(value)|_m)
        for c, v in sv:
            row[m * n + c] ^= v

    def table_rows(T: BilinearTable, pairs: Iterable[tuple[int, int]]) -> None:
        f = space.field
        for i, j in pairs:
            val = T.value(i, j)
            for m in range(n):
                row = blank()
                add_value_along_unknowns(row, m, val)
                # (D(e_i) e_j)|_m : unknown D[a][i] with coeff (e_a e_j)|_m
                for a in range(n):
                    for t, v in T.value(a, j):
                        if t == m:
                            row[a * n + i] ^= v
                    for t, v in T.value(i, a):
                        if t == m:
                            row[a * n + j] ^= v
                if any(row):
                    rows.append(row)

    if structure in ("associative", "poisson"):
        bundle.require("product")
        P = bundle.product
        pairs = ([(i, j) for i in range(n) for j in range(i, n)] if P.symmetric
                 else [(i, j) for i in range(n) for j in range(n)])
        table_rows(P, pairs)
    if structure in ("lie", "poisson"):
        bundle.require("bracket")
        table_rows(bundle.bracket, [(i, j) for i in range(n) for j in range(i, n)])
        if space.odd_indices:
            bundle.require("squaring")
            B = bundle.bracket
            for x in space.odd_indices:
                sx = bundle.squaring.value(x)
                for m in range(n):
                    row = blank()
                    add_value_along_unknowns(row, m, sx)
                    # [D(x), x]|_m : unknown D[a][x] with coeff [e_a, e_x]|_m
                    for a in range(n):
                        for t, v in B.value(a, x):
                            if t == m:
                                row[a * n + x] ^= v
                    if any(row):
                        rows.append(row)

    if not rows:
        kernel = [tuple(1 if q == k else 0 for q in range(n * n)) for k in range(n * n)]
    else:
        kernel = Matrix.from_rows(space.field, rows, n * n).kernel_basis()
    out: dict[str, list[tuple[tuple[int, ...], ...]]] = {"even": [], "odd": []}
    for vec in kernel:
        matr = tuple(tuple(vec[a * n + b] for b in range(n)) for a in range(n))
        par = _matrix_parity(space, matr)
        if par is None:  # pragma: no cover - rows are parity-pure
            raise ValidationError("derivation kernel vector mixes parities")
        out["even" if par == 0 else "odd"].append(matr)
    return out


#### center, twists, squaring reconstruction ################################


def center(bundle: AlgebraBundle) -> list[Element]:
    """Basis of {z : [z, x] = 0 for all x}."""
    bundle.require("bracket")
    space = bundle.space
    n = space.dim
    B = bundle.bracket
    rows = []
    for x in range(n):
        for m in range(n):
            row = [0] * n
            for i in range(n):
                for t, v in B.value(i, x):
                    if t == m:
                        row[i] ^= v
            if any(row):
                rows.append(row)
    if not rows:
        return [space.basis(i) for i in range(n)]
    kern = Matrix.from_rows(space.field, rows, n).kernel_basis()
    return [Element(space, v) for v in kern]


def twist_squaring(bundle: AlgebraBundle, g: Mapping[str | int, Element]) -> AlgebraBundle:
    """New bundle with squaring s + g, where g maps odd basis into the even center.

    Raises:
        ValidationError: a g-value is not even or not central.
    """
    bundle.require("bracket", "squaring")
    space = bundle.space
    zbasis = [z.coeffs for z in center(bundle) if z.parity() == 0]
    new_entries: dict[int, SparseVec] = dict(bundle.squaring.entries)
    for key, val in g.items():
        i = space.index(key) if isinstance(key, str) else key
        if space.parities[i] != 1:
            raise ValidationError(f"twist key {space.names[i]} is even")
        if not val.is_zero and val.parity() != 0:
            raise ValidationError(f"twist value at {space.names[i]} is not even")
        if not in_span(space.field, zbasis, val.coeffs, space.dim):
            raise ValidationError(f"twist value at {space.names[i]} is not central")
        new_entries[i] = sv_add(new_entries.get(i, ()), val.sparse())
    return bundle.with_tables(squaring=SquaringTable(space, new_entries))


def build_squaring_from_basis(bundle: AlgebraBundle,
                              assignments: Mapping[str | int, Element]) -> AlgebraBundle:
    """Install s(x_j) := y_j on odd basis vectors and extend by polarization.

    Every odd basis vector needs an assignment, and each y_j must be even
    with ad_{y_j} = (ad_{x_j})^2.

    Raises:
        AdSquareMismatch: some y_j acts differently from ad_{x_j} squared.
        ValidationError: missing or ill-graded assignments.
    """
    bundle.require("bracket")
    space = bundle.space
    B = bundle.bracket
    resolved: dict[int, Element] = {}
    for key, val in assignments.items():
        i = space.index(key) if isinstance(key, str) else key
        resolved[i] = val
    missing = [space.names[i] for i in space.odd_indices if i not in resolved]
    if missing:
        raise ValidationError(f"no squaring value for odd basis: {', '.join(missing)}")
    entries: dict[int, SparseVec] = {}
    for i, y in resolved.items():
        if space.parities[i] != 1:
            raise ValidationError(f"{space.names[i]} is even")
        if not y.is_zero and y.parity() != 0:
            raise ValidationError(f"candidate square of {space.names[i]} is not even")
        ysv = y.sparse()
        for z in range(space.dim):
            ad_y = B.apply_sv(ysv, ((z, 1),))
            ad_xx = B.apply_sv(((i, 1),), B.apply_sv(((i, 1),), ((z, 1),)))
            if ad_y != ad_xx:
                raise AdSquareMismatch(
                    f"ad of candidate square of {space.names[i]} differs from ad^2 "
                    f"at {space.names[z]}: {fmt_sparse(space, ad_y)} vs {fmt_sparse(space, ad_xx)}")
        entries[i] = ysv
    return bundle.with_tables(squaring=SquaringTable(space, entries))


#### morphisms, ideals, quotients ############################################


def check_morphism(src: AlgebraBundle, dst: AlgebraBundle, mat: MatrixRows,
                   seed: int = 0, samples: int = 8) -> Report:
    """Check that mat defines a morphism for every structure both bundles share."""
    t0 = time.perf_counter()
    if len(mat) != dst.space.dim or any(len(r) != src.space.dim for r in mat):
        raise ValidationError("morphism matrix has wrong shape")
    rep = Report()
    sA, sB = src.space, dst.space
    f = sA.field
    if f != sB.field:
        raise ValidationError("morphism endpoints live over different fields")

    def phi(sv: SparseVec) -> SparseVec:
        acc: dict[int, int] = {}
        for b, c in sv:
            for a in range(sB.dim):
                v = mat[a][b]
                if v:
                    w = acc.get(a, 0) ^ f.mul(c, v)
                    if w:
                        acc[a] = w
                    else:
                        del acc[a]
        return sv_from_dict(acc)

    rep.law("parity")
    for b in range(sA.dim):
        img = phi(((b, 1),))
        for a, _ in img:
            if sB.parities[a] != sA.parities[b]:
                rep.add("parity", (sA.names[b],), fmt_sparse(sB, img),
                        f"parity {sA.parities[b]} image")
                break

    if src.product is not None and dst.product is not None:
        rep.law("product-morphism")
        for i in range(sA.dim):
            for j in range(sA.dim):
                lhs = phi(src.product.value(i, j))
                rhs = dst.product.apply_sv(phi(((i, 1),)), phi(((j, 1),)))
                if lhs != rhs:
                    rep.add("product-morphism", _names(sA, i, j),
                            fmt_sparse(sB, lhs), fmt_sparse(sB, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break

    if src.bracket is not None and dst.bracket is not None:
        rep.law("bracket-morphism")
        for i in range(sA.dim):
            for j in range(i, sA.dim):
                lhs = phi(src.bracket.value(i, j))
                rhs = dst.bracket.apply_sv(phi(((i, 1),)), phi(((j, 1),)))
                if lhs != rhs:
                    rep.add("bracket-morphism", _names(sA, i, j),
                            fmt_sparse(sB, lhs), fmt_sparse(sB, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break
        if sA.odd_indices and src.squaring is not None and dst.squaring is not None:
            rep.law("squaring-morphism")
            rng = random.Random(seed)
            odd_svs: list[SparseVec] = [((i, 1),) for i in sA.odd_indices]
            for _ in range(samples):
                sv = _rand_element(sA, rng, parity=1)
                if sv:
                    odd_svs.append(sv)
            parB = sB.parities
            for x in odd_svs:
                lhs = phi(squaring_sv(src, x))
                img = phi(x)
                if any(parB[i] == 0 for i, _ in img):
                    # the parity law already reported this map; the square of
                    # a mixed-parity image is not even defined
                    continue
                rhs = squaring_sv(dst, img)
                if lhs != rhs:
                    rep.add("squaring-morphism", _names(sA, x),
                            fmt_sparse(sB, lhs), fmt_sparse(sB, rhs))
                    if len(rep.violations) >= 16:
                        break

    rep.timing = time.perf_counter() - t0
    return rep


def _split_generators(space: SuperSpace, vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Even and odd components of each generator, nonzero ones only."""
    out = []
    for vec in vectors:
        ev = tuple(c if space.parities[i] == 0 else 0 for i, c in enumerate(vec))
        od = tuple(c if space.parities[i] == 1 else 0 for i, c in enumerate(vec))
        for part in (ev, od):
            if any(part):
                out.append(part)
    return out


def check_ideal(bundle: AlgebraBundle, vectors: Sequence[Element | Sequence[int]]) -> Report:
    """Is span(vectors) a homogeneous ideal for the bundle's structures?

    Laws: homogeneity (even/odd parts stay inside), bracket absorption,
    squaring closure on the odd part, and product absorption when the bundle
    carries a product (every structure role present is checked).
    """
    t0 = time.perf_counter()
    space = bundle.space
    n = space.dim
    f = space.field
    vecs = [v.coeffs if isinstance(v, Element) else tuple(v) for v in vectors]
    rep = Report()
    rep.dimensions["generators"] = len(vecs)
    rep.law("homogeneous")
    split = _split_generators(space, vecs)
    base_rank = span_rank(f, vecs, n)
    rep.dimensions["ideal_dim"] = base_rank
    if span_rank(f, split, n) != base_rank:
        rep.add("homogeneous", ("span",),
                "parity components escape the span", "homogeneous subspace")
        rep.timing = time.perf_counter() - t0
        return rep
    # work with the split (parity-pure) spanning set from here on
    basis_m = Matrix.from_rows(f, split, n) if split else None
    R, pivots = (basis_m.rref() if basis_m else (None, ()))
    pure = [R.row(r) for r in range(len(pivots))] if R else []

    def inside(sv: SparseVec) -> bool:
        return in_span(f, pure, sv_dense(sv, n), n)

    if bundle.bracket is not None:
        rep.law("bracket-absorb")
        for h in pure:
            hsv = sv_from_dense(h)
            for j in range(n):
                out = bundle.bracket.apply_sv(hsv, ((j, 1),))
                if out and not inside(out):
                    rep.add("bracket-absorb", (fmt_sparse(space, hsv), space.names[j]),
                            fmt_sparse(space, out), "element of the ideal")
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break
        if bundle.squaring is not None:
            rep.law("squaring-closure")
            for h in pure:
                hsv = sv_from_dense(h)
                if hsv and all(space.parities[i] == 1 for i, _ in hsv):
                    out = squaring_sv(bundle, hsv)
                    if out and not inside(out):
                        rep.add("squaring-closure", (fmt_sparse(space, hsv),),
                                fmt_sparse(space, out), "element of the ideal")
    if bundle.product is not None:
        rep.law("product-absorb")
        for h in pure:
            hsv = sv_from_dense(h)
            for j in range(n):
                for out in (bundle.product.apply_sv(((j, 1),), hsv),
                            bundle.product.apply_sv(hsv, ((j, 1),))):
                    if out and not inside(out):
                        rep.add("product-absorb", (space.names[j], fmt_sparse(space, hsv)),
                                fmt_sparse(space, out), "element of the ideal")
                        break
                if len(rep.violations) >= 16:
                    break
            if len(rep.violations) >= 16:
                break

    rep.timing = time.perf_counter() - t0
    return rep


def quotient(bundle: AlgebraBundle, vectors: Sequence[Element | Sequence[int]]) -> AlgebraBundle:
    """Quotient bundle by a homogeneous ideal.

    Coset representatives are the basis vectors at non-pivot columns of the
    reduced span, so the result is deterministic and keeps original names.

    Raises:
        NotAnIdeal: check_ideal fails on the span.
    """
    ideal_rep = check_ideal(bundle, vectors)
    if not ideal_rep.passed:
        v = ideal_rep.violations[0]
        raise NotAnIdeal(f"{v.law}: {', '.join(v.witness)} -> {v.lhs}")
    space = bundle.space
    n = space.dim
    f = space.field
    vecs = [v.coeffs if isinstance(v, Element) else tuple(v) for v in vectors]
    split = _split_generators(space, vecs)
    if not split:
        return bundle
    R, pivots = Matrix.from_rows(f, split, n).rref()
    rows = [R.row(r) for r in range(len(pivots))]
    reps = [i for i in range(n) if i not in set(pivots)]
    rep_pos = {i: k for k, i in enumerate(reps)}

    def reduce_sv(sv: SparseVec) -> SparseVec:
        dense = list(sv_dense(sv, n))
        for r, p in zip(rows, pivots):
            c = dense[p]
            if c:
                for q in range(n):
                    if r[q]:
                        dense[q] ^= f.mul(c, r[q])
        return sv_from_dense(dense)

    def project(sv: SparseVec) -> SparseVec:
        red = reduce_sv(sv)
        return tuple((rep_pos[i], c) for i, c in red)

    qspace = SuperSpace(f, tuple(space.names[i] for i in reps),
                        tuple(space.parities[i] for i in reps))
    prod_t = brk_t = sq_t = None
    if bundle.product is not None:
        sym = bundle.product.symmetric
        entries = {}
        for a, i in enumerate(reps):
            for b, j in enumerate(reps):
                if sym and a > b:
                    continue
                val = project(bundle.product.value(i, j))
                if val:
                    entries[(a, b)] = val
        prod_t = BilinearTable(qspace, "product", entries, symmetric=sym)
    if bundle.bracket is not None:
        entries = {}
        for a, i in enumerate(reps):
            for b, j in enumerate(reps):
                if a >= b:
                    continue
                val = project(bundle.bracket.value(i, j))
                if val:
                    entries[(a, b)] = val
        brk_t = BilinearTable(qspace, "bracket", entries)
        sq_entries = {}
        for a, i in enumerate(reps):
            if qspace.parities[a] == 1:
                val = project(bundle.squaring.value(i)) if bundle.squaring else ()
                if val:
                    sq_entries[a] = val
        sq_t = SquaringTable(qspace, sq_entries)
    unit_el = None
    if bundle.unit is not None:
        usv = project(bundle.unit.sparse())
        if usv:
            unit_el = Element(qspace, sv_dense(usv, qspace.dim))
    return AlgebraBundle(qspace, prod_t, brk_t, sq_t, unit_el,
                         name=f"{bundle.name}/ideal" if bundle.name else "quotient")


#### commutator Lie structure from an associative product ####################


def assoc_to_lie(bundle: AlgebraBundle, seed: int = 0) -> AlgebraBundle:
    """Lie bundle with [x,y] = xy + yx and s(a) = a^2 on odd basis vectors.

    Raises:
        NotAssociative: the product fails associativity on some basis triple.
    """
    bundle.require("product")
    space = bundle.space
    n = space.dim
    P = bundle.product
    # associativity is the precondition; supercommutativity is not
    for i in range(n):
        for j in range(n):
            pij = P.value(i, j)
            for z in range(n):
                if _tbl_right(P, pij, z) != _tbl_left(P, i, P.value(j, z)):
                    raise NotAssociative(
                        f"({space.names[i]} {space.names[j]}) {space.names[z]} != "
                        f"{space.names[i]} ({space.names[j]} {space.names[z]})")
    brk_entries: dict[tuple[int, int], SparseVec] = {}
    for i in range(n):
        for j in range(i + 1, n):
            val = sv_add(P.value(i, j), P.value(j, i))
            if val:
                brk_entries[(i, j)] = val
    sq_entries: dict[int, SparseVec] = {}
    for i in space.odd_indices:
        val = P.value(i, i)
        if val:
            sq_entries[i] = val
    return AlgebraBundle(
        space, bundle.product,
        BilinearTable(space, "bracket", brk_entries),
        SquaringTable(space, sq_entries),
        bundle.unit,
        name=f"lie({bundle.name})" if bundle.name else "lie")
