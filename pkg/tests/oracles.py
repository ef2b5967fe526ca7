"""Independent naive reference implementations used to pin test expectations.

Everything here is deliberately schoolbook: plain-list Gaussian elimination,
Pascal's triangle instead of bit tricks, and differentials computed by
evaluating the defining formulas pointwise on element tuples. None of the
optimized assembly code paths from the package are exercised; only the raw
structure tables and element arithmetic are shared, since those ARE the
input data.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from poisson2.core import Element, SparseVec, sv_add, sv_dense, sv_scale
from poisson2.field import Field


#### naive linear algebra ####################################################


def naive_rref(field: Field, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Textbook row reduction over a field, no packing, no vectorization."""
    R = [list(r) for r in rows]
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        sel = None
        for i in range(r, nrows):
            if R[i][c]:
                sel = i
                break
        if sel is None:
            continue
        R[r], R[sel] = R[sel], R[r]
        inv = field.inv(R[r][c])
        if inv != 1:
            R[r] = [field.mul(inv, v) for v in R[r]]
        for i in range(nrows):
            if i != r and R[i][c]:
                coef = R[i][c]
                R[i] = [field.add(R[i][j], field.mul(coef, R[r][j])) for j in range(ncols)]
        pivots.append(c)
        r += 1
    return R, pivots


def naive_rank(field: Field, rows: list[list[int]]) -> int:
    if not rows:
        return 0
    return len(naive_rref(field, rows)[1])


def naive_kernel(field: Field, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Right-kernel basis, one vector per free column, ascending."""
    if not rows:
        return [[1 if j == f else 0 for j in range(ncols)] for f in range(ncols)]
    R, pivots = naive_rref(field, rows)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, p in enumerate(pivots):
            if R[r][f]:
                v[p] = R[r][f]
        out.append(v)
    return out


def naive_in_span(field: Field, vectors: list[list[int]], vec: list[int]) -> bool:
    base = naive_rank(field, vectors) if vectors else 0
    return naive_rank(field, vectors + [vec]) == base


#### binomials mod 2 without Lucas ###########################################


@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _pascal_row(n - 1)
    return tuple((([0] + list(prev))[k] ^ (list(prev) + [0])[k]) for k in range(n + 1))


def pascal_binom_mod2(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return _pascal_row(n)[k]


#### pointwise cochain differential ##########################################


def _phi_eval(bundle, n, phi, elements):
    """Multilinear evaluation of a phi-dict {sorted tuple: dense M vector}."""
    f = bundle.space.field
    dimM = len(next(iter(phi.values()))) if phi else bundle.dim
    acc: SparseVec = ()
    for combo in itertools.product(*[e.sparse() for e in elements]):
        idxs = tuple(i for i, _ in combo)
        if len(set(idxs)) != len(idxs):
            continue
        coef = 1
        for _, c in combo:
            coef = f.mul(coef, c)
        val = phi.get(tuple(sorted(idxs)))
        if val is None:
            continue
        acc = sv_add(acc, sv_scale(f, coef, tuple((m, v) for m, v in enumerate(val) if v)))
    return acc


def _omega_eval(bundle, n, phi, omega, x, zs):
    """First-slot-quadratic evaluation with polarization against phi."""
    f = bundle.space.field
    acc: SparseVec = ()
    xs = x.sparse()
    for combo in itertools.product(*[e.sparse() for e in zs]):
        idxs = tuple(i for i, _ in combo)
        if len(set(idxs)) != len(idxs):
            continue
        coef = 1
        for _, c in combo:
            coef = f.mul(coef, c)
        Z = tuple(sorted(idxs))
        for i, ci in xs:
            val = omega.get((i, Z))
            if val is not None:
                acc = sv_add(acc, sv_scale(
                    f, f.mul(coef, f.square(ci)),
                    tuple((m, v) for m, v in enumerate(val) if v)))
        for (i, ci), (j, cj) in itertools.combinations(xs, 2):
            pair = (i, j) + Z
            if len(set(pair)) != len(pair):
                continue
            val = phi.get(tuple(sorted(pair)))
            if val is not None:
                acc = sv_add(acc, sv_scale(
                    f, f.mul(coef, f.mul(ci, cj)),
                    tuple((m, v) for m, v in enumerate(val) if v)))
    return acc


def _act(bundle, x: Element, val: SparseVec) -> SparseVec:
    """Adjoint action of an element on a coefficient value."""
    from poisson2.core import eval_bracket

    M = bundle.space
    return eval_bracket(bundle, x, Element(M, sv_dense(val, M.dim))).sparse()


def oracle_differential(bundle, n: int, phi: dict, omega: dict):
    """Evaluate the degree-n differential of (phi, omega) pointwise.

    Returns (phi_out, omega_out) in the same dict form, computed by walking
    every destination argument tuple and applying the displayed formulas
    with Element arithmetic.
    """
    from poisson2.core import eval_bracket, squaring_sv

    space = bundle.space
    f = space.field
    dim = space.dim
    basis = [space.basis(i) for i in range(dim)]
    phi_out: dict[tuple, list[int]] = {}
    omega_out: dict[tuple, list[int]] = {}

    for T in itertools.combinations(range(dim), n + 1):
        args = [basis[t] for t in T]
        acc: SparseVec = ()
        for i in range(n + 1):
            rest = args[:i] + args[i + 1:]
            acc = sv_add(acc, _act(bundle, args[i], _phi_eval(bundle, n, phi, rest)))
        for i, j in itertools.combinations(range(n + 1), 2):
            br = eval_bracket(bundle, args[i], args[j])
            rest = [br] + [args[k] for k in range(n + 1) if k not in (i, j)]
            acc = sv_add(acc, _phi_eval(bundle, n, phi, rest))
        if acc:
            phi_out[T] = list(sv_dense(acc, dim))

    if n + 1 >= 2:
        for x in space.odd_indices:
            xe = basis[x]
            for Z in itertools.combinations(range(dim), n - 1):
                zs = [basis[z] for z in Z]
                acc = ()
                # x . phi(x, Z)
                acc = sv_add(acc, _act(bundle, xe, _phi_eval(bundle, n, phi, [xe] + zs)))
                # z_i . omega(x, Z minus z_i)
                for i in range(len(zs)):
                    rest = zs[:i] + zs[i + 1:]
                    acc = sv_add(acc, _act(bundle, zs[i],
                                           _omega_eval(bundle, n, phi, omega, xe, rest)))
                # phi(s(x), Z)
                sx = Element(space, sv_dense(squaring_sv(bundle, xe.sparse()), dim))
                acc = sv_add(acc, _phi_eval(bundle, n, phi, [sx] + zs))
                # phi([x, z_i], x, Z minus z_i)
                for i in range(len(zs)):
                    br = eval_bracket(bundle, xe, zs[i])
                    rest = [br, xe] + zs[:i] + zs[i + 1:]
                    acc = sv_add(acc, _phi_eval(bundle, n, phi, rest))
                # omega(x, [z_i, z_j], Z minus both)
                for i, j in itertools.combinations(range(len(zs)), 2):
                    br = eval_bracket(bundle, zs[i], zs[j])
                    rest = [br] + [zs[k] for k in range(len(zs)) if k not in (i, j)]
                    acc = sv_add(acc, _omega_eval(bundle, n, phi, omega, xe, rest))
                if acc:
                    omega_out[(x, Z)] = list(sv_dense(acc, dim))
    return phi_out, omega_out


#### coordinate bridge #######################################################


def coords_of_pair(cspace, phi: dict, omega: dict) -> list[int]:
    vec = [0] * cspace.total_dim
    for T, val in phi.items():
        for m, c in enumerate(val):
            if c:
                vec[cspace.phi_index(tuple(T), m)] = c
    for (x, Z), val in omega.items():
        for m, c in enumerate(val):
            if c:
                vec[cspace.omega_index(x, tuple(Z), m)] = c
    return vec


def pair_of_coord(cspace, idx: int) -> tuple[dict, dict]:
    kind, *rest = cspace.coord(idx)
    dimM = cspace.dimM
    if kind == "phi":
        T, m = rest
        val = [0] * dimM
        val[m] = 1
        return {tuple(T): val}, {}
    x, Z, m = rest
    val = [0] * dimM
    val[m] = 1
    return {}, {(x, tuple(Z)): val}


def oracle_coboundary_columns(bundle, n: int) -> list[list[int]]:
    """Differential matrix columns, one per source coordinate, via pointwise
    evaluation. Completely bypasses the package's assembler."""
    from poisson2.cohomology import CochainSpace

    src = CochainSpace(bundle, n)
    dst = CochainSpace(bundle, n + 1)
    cols = []
    for idx in range(src.total_dim):
        phi, omega = pair_of_coord(src, idx)
        dphi, domega = oracle_differential(bundle, n, phi, omega)
        cols.append(coords_of_pair(dst, dphi, domega))
    return cols


def _coord_parity(bundle, cspace, idx: int) -> int:
    kind, *rest = cspace.coord(idx)
    par = bundle.space.parities
    if kind == "phi":
        T, m = rest
        return (sum(par[t] for t in T) + par[m]) & 1
    x, Z, m = rest
    return (sum(par[t] for t in Z) + par[m]) & 1


def oracle_lie_h(bundle, n: int) -> dict[str, int]:
    """Cohomology dims by naive elimination on pointwise-built matrices."""
    from poisson2.cohomology import CochainSpace

    f = bundle.space.field
    src = CochainSpace(bundle, n)
    cols_n = oracle_coboundary_columns(bundle, n)
    dst_dim = CochainSpace(bundle, n + 1).total_dim
    rows_n = [[cols_n[c][r] for c in range(src.total_dim)] for r in range(dst_dim)]
    out = {}
    for pname, p in (("even", 0), ("odd", 1)):
        keep = [c for c in range(src.total_dim) if _coord_parity(bundle, src, c) == p]
        rows_p = [[row[c] for c in keep] for row in rows_n]
        kern = naive_kernel(f, rows_p, len(keep))
        img: list[list[int]] = []
        if n >= 1:
            cols_prev = oracle_coboundary_columns(bundle, n - 1)
            prev = CochainSpace(bundle, n - 1)
            for c in range(prev.total_dim):
                if _coord_parity(bundle, prev, c) != p:
                    continue
                full = cols_prev[c]
                img.append([full[src_c] for src_c in keep])
        h = len(kern) - naive_rank(f, [v for v in img if any(v)])
        out[pname] = h
    out["total"] = out["even"] + out["odd"]
    return out


def oracle_poisson_constraint_rows(bundle, n: int) -> list[list[int]]:
    """Multiderivation constraint rows built by pointwise evaluation of the
    three product-compatibility laws on coordinate basis cochains."""
    from poisson2.cohomology import CochainSpace
    from poisson2.core import eval_product

    space = bundle.space
    f = space.field
    dim = space.dim
    basis = [space.basis(i) for i in range(dim)]
    cspace = CochainSpace(bundle, n)
    rows: list[list[int]] = []

    def prod(a, b):
        return eval_product(bundle, a, b)

    def mk_row(values_per_coord: list[SparseVec]) -> None:
        # one constraint row per module coordinate of the residual
        seen = set()
        for sv in values_per_coord:
            for m, _ in sv:
                seen.add(m)
        for m in sorted(seen):
            row = [0] * cspace.total_dim
            for c, sv in enumerate(values_per_coord):
                for mm, v in sv:
                    if mm == m:
                        row[c] = f.add(row[c], v)
            if any(row):
                rows.append(row)

    def phi_of(idx):
        return pair_of_coord(cspace, idx)

    if n >= 1:
        for i in range(dim):
            for j in range(i, dim):
                xy = prod(basis[i], basis[j])
                for Z in itertools.combinations(range(dim), n - 1):
                    zs = [basis[z] for z in Z]
                    residuals = []
                    for c in range(cspace.total_dim):
                        phi, _ = phi_of(c)
                        lhs = _phi_eval(bundle, n, phi, [xy] + zs)
                        r1 = prod(basis[i], Element(space, sv_dense(
                            _phi_eval(bundle, n, phi, [basis[j]] + zs), dim))).sparse()
                        r2 = prod(basis[j], Element(space, sv_dense(
                            _phi_eval(bundle, n, phi, [basis[i]] + zs), dim))).sparse()
                        residuals.append(sv_add(lhs, sv_add(r1, r2)))
                    mk_row(residuals)
    if n >= 2:
        for i in space.odd_indices:
            for j in space.even_indices:
                xy = prod(basis[i], basis[j])
                ysq = prod(basis[j], basis[j])
                for Z in itertools.combinations(range(dim), n - 2):
                    zs = [basis[z] for z in Z]
                    residuals = []
                    for c in range(cspace.total_dim):
                        phi, omega = phi_of(c)
                        lhs = _omega_eval(bundle, n, phi, omega, xy, zs)
                        r1 = prod(ysq, Element(space, sv_dense(
                            _omega_eval(bundle, n, phi, omega, basis[i], zs), dim))).sparse()
                        r2 = prod(xy, Element(space, sv_dense(
                            _phi_eval(bundle, n, phi, [basis[i], basis[j]] + zs), dim))).sparse()
                        residuals.append(sv_add(lhs, sv_add(r1, r2)))
                    mk_row(residuals)
    if n >= 3:
        for x in space.odd_indices:
            for a in range(dim):
                for b in range(a, dim):
                    ab = prod(basis[a], basis[b])
                    for rest in itertools.combinations(range(dim), n - 3):
                        rs = [basis[t] for t in rest]
                        residuals = []
                        for c in range(cspace.total_dim):
                            phi, omega = phi_of(c)
                            lhs = _omega_eval(bundle, n, phi, omega, basis[x], [ab] + rs)
                            r1 = prod(basis[a], Element(space, sv_dense(
                                _omega_eval(bundle, n, phi, omega, basis[x],
                                            [basis[b]] + rs), dim))).sparse()
                            r2 = prod(basis[b], Element(space, sv_dense(
                                _omega_eval(bundle, n, phi, omega, basis[x],
                                            [basis[a]] + rs), dim))).sparse()
                            residuals.append(sv_add(lhs, sv_add(r1, r2)))
                        mk_row(residuals)
    return rows


def oracle_poisson_h(bundle, n: int) -> dict[str, int]:
    """Constrained-subcomplex cohomology dims, all parts naive."""
    from poisson2.cohomology import CochainSpace

    f = bundle.space.field
    src = CochainSpace(bundle, n)
    N = src.total_dim

    def sub_basis(deg):
        cs = CochainSpace(bundle, deg)
        rows = oracle_poisson_constraint_rows(bundle, deg)
        return naive_kernel(f, rows, cs.total_dim) if rows else [
            [1 if j == k else 0 for j in range(cs.total_dim)] for k in range(cs.total_dim)]

    B_n = sub_basis(n)
    B_up = sub_basis(n + 1)
    cols_n = oracle_coboundary_columns(bundle, n)
    up_dim = CochainSpace(bundle, n + 1).total_dim

    def apply_cols(cols, vec):
        out = [0] * len(cols[0]) if cols else []
        for c, coef in enumerate(vec):
            if coef:
                for r in range(len(out)):
                    out[r] = f.add(out[r], f.mul(coef, cols[c][r]))
        return out

    # restricted matrix: solve expansion over B_up for each image
    D_cols = []
    for b in B_n:
        img = apply_cols(cols_n, b)
        sol = _naive_solve_columns(f, B_up, img)
        assert sol is not None, "image escaped the constrained subspace"
        D_cols.append(sol)

    prev_cols_restricted: list[list[int]] = []
    prev_par: list[int] = []
    if n >= 1:
        B_dn = sub_basis(n - 1)
        cols_prev = oracle_coboundary_columns(bundle, n - 1)
        for b in B_dn:
            img = apply_cols(cols_prev, b)
            sol = _naive_solve_columns(f, B_n, img)
            assert sol is not None
            prev_cols_restricted.append(sol)
            ps = {_coord_parity(bundle, CochainSpace(bundle, n - 1), c)
                  for c, v in enumerate(b) if v}
            prev_par.append(ps.pop())

    basis_par = []
    for b in B_n:
        ps = {_coord_parity(bundle, src, c) for c, v in enumerate(b) if v}
        basis_par.append(ps.pop())

    out = {}
    for pname, p in (("even", 0), ("odd", 1)):
        keep = [k for k in range(len(B_n)) if basis_par[k] == p]
        rows = [[D_cols[k][r] for k in keep] for r in range(len(B_up))]
        kern = naive_kernel(f, [r for r in rows if any(r)] or [[0] * len(keep)], len(keep)) \
            if keep else []
        img = [col for col, bp in zip(prev_cols_restricted, prev_par) if bp == p]
        h = len(kern) - naive_rank(f, [v for v in img if any(v)])
        out[pname] = h
    out["total"] = out["even"] + out["odd"]
    return out


def _naive_solve_columns(f: Field, basis: list[list[int]], target: list[int]):
    """Expansion coefficients of target over basis columns, or None."""
    if not basis:
        return [] if not any(target) else None
    N = len(basis[0])
    k = len(basis)
    rows = [[basis[c][r] for c in range(k)] + [target[r]] for r in range(N)]
    R, pivots = naive_rref(f, rows)
    if pivots and pivots[-1] == k:
        return None
    sol = [0] * k
    for r, p in enumerate(pivots):
        sol[p] = R[r][k]
    return sol
