"""Cochain complexes for bracket-with-squaring structures.

A degree-n cochain is a pair (phi, omega): phi is an alternating n-linear
map into the module M, and (for n >= 2) omega takes one odd element plus
n-2 further arguments, is quadratic in the first slot and linear in the
rest, and polarizes against phi:

    omega(x + y, Z) = omega(x, Z) + omega(y, Z) + phi(x, y, Z).

Coordinates: phi is stored on strictly increasing basis tuples, omega on
(odd basis vector, strictly increasing trailing tuple) pairs — the trailing
tuple may repeat the first slot, there is no alternation across that
boundary. XC^0 = M and XC^1 = Hom(L, M) have no omega block.

The differential of the pair is (d_CE phi, delta(phi, omega)) where d_CE is
the sign-free Chevalley-Eilenberg sum and delta adds the squaring terms; the
same assembled matrix serves the constrained subcomplex used for Poisson
structures, whose member cochains are multiderivations in every slot.

Coordinate parity of (T, m) is |T| + |m|; of (x, Z, m) it is |Z| + |m|. The
differential preserves coordinate parity, so complexes split and every
computation here takes a parity filter.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (AlgebraBundle, ArityMismatch, DifferentialEscapesSubspace,
                   Element, NotAHochschildCocycle, NotOddHomogeneous, Report,
                   SizeBudgetExceeded, SparseVec, SuperSpace, ValidationError,
                   fmt_sparse, sv_add, sv_dense, sv_from_dict, sv_scale)
from .linalg import IntGF2, Matrix

DENSE_COORD_CAP = 4096


def _pair_dim(space: SuperSpace, n: int, dim_m: int) -> int:
    """Coordinate count of the degree-n pair space, without building it."""
    d = math.comb(space.dim, n) * dim_m
    if n >= 2:
        d += len(space.odd_indices) * math.comb(space.dim, n - 2) * dim_m
    return d


def _guard_dense(bundle: AlgebraBundle, degrees: Iterable[int],
                 module: "CochainModule | None") -> None:
    """Refuse extension-field runs whose dense systems would not fit."""
    f = bundle.space.field
    if f.degree == 1:
        return
    dim_m = module.space.dim if module is not None else bundle.space.dim
    for n in degrees:
        if _pair_dim(bundle.space, n, dim_m) > DENSE_COORD_CAP:
            raise SizeBudgetExceeded(
                f"degree-{n} cochain space exceeds the dense solver cap of "
                f"{DENSE_COORD_CAP} coordinates over an extension field")


#### modules #################################################################


@dataclass(frozen=True)
class CochainModule:
    """Coefficient module: a graded space with one action matrix per basis
    vector of the algebra. ``act_rows[x][m2]`` lists ``(m, c)`` with
    c = coefficient of basis m2 in (e_x . e_m)."""

    space: SuperSpace
    act_rows: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]
    name: str = ""


def adjoint_module(bundle: AlgebraBundle) -> CochainModule:
    """The bundle acting on itself through its bracket."""
    bundle.require("bracket")
    n = bundle.dim
    rows: list[list[list[tuple[int, int]]]] = [[[] for _ in range(n)] for _ in range(n)]
    for x in range(n):
        for m in range(n):
            for t, c in bundle.bracket.value(x, m):
                rows[x][t].append((m, c))
    return CochainModule(
        bundle.space,
        tuple(tuple(tuple(r) for r in per_x) for per_x in rows),
        name="adjoint")


#### cochain spaces ##########################################################


def _insert_sorted(tup: tuple[int, ...], v: int) -> tuple[int, ...]:
    out = []
    placed = False
    for t in tup:
        if not placed and v < t:
            out.append(v)
            placed = True
        out.append(t)
    if not placed:
        out.append(v)
    return tuple(out)


class CochainSpace:
    """Coordinate model of XC^n(L; M) with deterministic enumeration.

    phi coordinates come first, ordered by (tuple, module index) with tuples
    in lexicographic order; omega coordinates follow, ordered by (odd basis
    index, trailing tuple, module index).
    """

    def __init__(self, bundle: AlgebraBundle, n: int, module: CochainModule | None = None):
        if n < 0:
            raise ArityMismatch("cochain degree must be >= 0")
        bundle.require("bracket")
        self.bundle = bundle
        self.n = n
        self.module = module or adjoint_module(bundle)
        nL = bundle.dim
        self.dimM = self.module.space.dim
        self.ntuples: list[tuple[int, ...]] = list(itertools.combinations(range(nL), n))
        self._phi_rank = {T: r for r, T in enumerate(self.ntuples)}
        self.owners: tuple[int, ...] = bundle.space.odd_indices if n >= 2 else ()
        self.ztuples: list[tuple[int, ...]] = (
            list(itertools.combinations(range(nL), n - 2)) if n >= 2 else [])
        self._z_rank = {Z: r for r, Z in enumerate(self.ztuples)}
        self._owner_rank = {x: r for r, x in enumerate(self.owners)}
        self.dim_phi = len(self.ntuples) * self.dimM
        self.dim_omega = len(self.owners) * len(self.ztuples) * self.dimM
        self.total_dim = self.dim_phi + self.dim_omega

    def phi_index(self, T: tuple[int, ...], m: int) -> int:
        return self._phi_rank[T] * self.dimM + m

    def omega_index(self, x: int, Z: tuple[int, ...], m: int) -> int:
        r = self._owner_rank[x] * len(self.ztuples) + self._z_rank[Z]
        return self.dim_phi + r * self.dimM + m

    def coord(self, idx: int) -> tuple:
        """Decode a flat index into ("phi", T, m) or ("omega", x, Z, m)."""
        if idx < self.dim_phi:
            r, m = divmod(idx, self.dimM)
            return ("phi", self.ntuples[r], m)
        r, m = divmod(idx - self.dim_phi, self.dimM)
        xr, zr = divmod(r, len(self.ztuples))
        return ("omega", self.owners[xr], self.ztuples[zr], m)

    def coord_parity(self, idx: int) -> int:
        kind, *rest = self.coord(idx)
        parL = self.bundle.space.parities
        parM = self.module.space.parities
        if kind == "phi":
            T, m = rest
            return (sum(parL[t] for t in T) + parM[m]) & 1
        x, Z, m = rest
        return (sum(parL[t] for t in Z) + parM[m]) & 1

    def parity_vector(self) -> list[int]:
        return [self.coord_parity(i) for i in range(self.total_dim)]

    def describe(self, idx: int) -> str:
        names = self.bundle.space.names
        mnames = self.module.space.names
        kind, *rest = self.coord(idx)
        if kind == "phi":
            T, m = rest
            args = ",".join(names[t] for t in T)
            return f"phi({args})->{mnames[m]}" if T else f"value->{mnames[m]}"
        x, Z, m = rest
        args = ",".join([names[x] + "!"] + [names[t] for t in Z])
        return f"omega({args})->{mnames[m]}"


@dataclass(frozen=True)
class Cochain:
    """Dense coordinate vector in a :class:`CochainSpace`."""

    cspace: CochainSpace
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.cspace.total_dim:
            raise ArityMismatch("cochain coordinate vector has wrong length")

    def sparse(self) -> SparseVec:
        return tuple((i, c) for i, c in enumerate(self.coeffs) if c)

    def phi_value(self, T: tuple[int, ...]) -> SparseVec:
        """Value of phi on a basis tuple (any order, repeats give zero)."""
        cs = self.cspace
        if len(T) != cs.n:
            raise ArityMismatch(f"phi takes {cs.n} arguments")
        if len(set(T)) != len(T):
            return ()
        key = tuple(sorted(T))
        out = {}
        for m in range(cs.dimM):
            c = self.coeffs[cs.phi_index(key, m)]
            if c:
                out[m] = c
        return sv_from_dict(out)

    def omega_value(self, x: int, Z: tuple[int, ...]) -> SparseVec:
        """Value of omega on an odd basis vector and a trailing basis tuple."""
        cs = self.cspace
        if cs.n < 2:
            raise ArityMismatch("omega exists only in degree >= 2")
        if len(Z) != cs.n - 2:
            raise ArityMismatch(f"omega takes {cs.n - 2} trailing arguments")
        if self.cspace.bundle.space.parities[x] != 1:
            raise NotOddHomogeneous("omega's first slot needs an odd basis vector")
        if len(set(Z)) != len(Z):
            return ()
        key = tuple(sorted(Z))
        out = {}
        for m in range(cs.dimM):
            c = self.coeffs[cs.omega_index(x, key, m)]
            if c:
                out[m] = c
        return sv_from_dict(out)


def eval_cochain(c: Cochain, args: Sequence[Element], component: str = "phi") -> Element:
    """Evaluate the phi or omega component on elements.

    phi expands multilinearly over supports. omega takes (x, z_2,..,z_{n-1})
    with x odd homogeneous: quadratic in x with phi cross-terms, linear in
    the trailing slots.

    Raises:
        ArityMismatch: wrong number of arguments for the component.
        NotOddHomogeneous: omega's first argument mixes in even components.
    """
    cs = c.cspace
    f = cs.bundle.space.field
    M = cs.module.space
    if component == "phi":
        if len(args) != cs.n:
            raise ArityMismatch(f"phi component takes {cs.n} arguments")
        acc: SparseVec = ()
        for combo in itertools.product(*[a.sparse() for a in args]):
            coef = 1
            for _, cc in combo:
                coef = f.mul(coef, cc)
            val = c.phi_value(tuple(i for i, _ in combo))
            acc = sv_add(acc, sv_scale(f, coef, val))
        return Element(M, sv_dense(acc, M.dim))
    if component != "omega":
        raise ValidationError(f"unknown component {component!r}")
    if cs.n < 2:
        raise ArityMismatch("omega exists only in degree >= 2")
    if len(args) != cs.n - 1:
        raise ArityMismatch(f"omega component takes {cs.n - 1} arguments")
    x, trail = args[0], args[1:]
    xsv = x.sparse()
    if any(cs.bundle.space.parities[i] == 0 for i, _ in xsv):
        raise NotOddHomogeneous("omega's first argument must be odd")
    acc = ()
    for combo in itertools.product(*[a.sparse() for a in trail]):
        coef = 1
        for _, cc in combo:
            coef = f.mul(coef, cc)
        Z = tuple(i for i, _ in combo)
        if len(set(Z)) != len(Z):
            continue
        # quadratic part of the first slot
        for i, ci in xsv:
            val = c.omega_value(i, Z)
            acc = sv_add(acc, sv_scale(f, f.mul(coef, f.square(ci)), val))
        # phi cross terms
        for (i, ci), (j, cj) in itertools.combinations(xsv, 2):
            val = c.phi_value((i, j) + Z)
            acc = sv_add(acc, sv_scale(f, f.mul(coef, f.mul(ci, cj)), val))
    return Element(M, sv_dense(acc, M.dim))


#### coboundary assembly #####################################################


@dataclass
class CoboundaryMatrix:
    """Sparse differential XC^n -> XC^{n+1} in coordinate form.

    ``entries`` may contain duplicate (dst, src) pairs; consumers fold them
    additively in the field (XOR of coefficients).
    """

    src: CochainSpace
    dst: CochainSpace
    entries: list[tuple[int, int, int]]
    _cols: dict[int, list[tuple[int, int]]] | None = None
    _rows: dict[int, list[tuple[int, int]]] | None = None

    def col_dict(self) -> dict[int, list[tuple[int, int]]]:
        if self._cols is None:
            cols: dict[int, dict[int, int]] = {}
            for d, s, c in self.entries:
                slot = cols.setdefault(s, {})
                w = slot.get(d, 0) ^ c
                if w:
                    slot[d] = w
                else:
                    del slot[d]
            self._cols = {s: sorted(v.items()) for s, v in cols.items() if v}
        return self._cols

    def row_dict(self) -> dict[int, list[tuple[int, int]]]:
        if self._rows is None:
            rows: dict[int, dict[int, int]] = {}
            for d, s, c in self.entries:
                slot = rows.setdefault(d, {})
                w = slot.get(s, 0) ^ c
                if w:
                    slot[s] = w
                else:
                    del slot[s]
            self._rows = {d: sorted(v.items()) for d, v in rows.items() if v}
        return self._rows

    def apply(self, vec: Iterable[tuple[int, int]]) -> SparseVec:
        """Apply to a sparse coordinate vector; returns sparse coordinates."""
        f = self.src.bundle.space.field
        cols = self.col_dict()
        acc: dict[int, int] = {}
        for s, c in vec:
            for d, v in cols.get(s, ()):
                w = acc.get(d, 0) ^ f.mul(c, v)
                if w:
                    acc[d] = w
                else:
                    del acc[d]
        return sv_from_dict(acc)

    def to_csr(self):
        """scipy CSR with integer data (GF(2) use: reduce data mod 2 after matmul)."""
        import scipy.sparse as sp

        if not self.entries:
            return sp.csr_matrix((self.dst.total_dim, self.src.total_dim), dtype=np.int64)
        arr = np.asarray(self.entries, dtype=np.int64)
        m = sp.coo_matrix((arr[:, 2], (arr[:, 0], arr[:, 1])),
                          shape=(self.dst.total_dim, self.src.total_dim)).tocsr()
        m.data %= 2
        m.eliminate_zeros()
        return m

    def to_dense(self) -> Matrix:
        f = self.src.bundle.space.field
        folded: dict[tuple[int, int], int] = {}
        for d, s, c in self.entries:
            key = (d, s)
            w = folded.get(key, 0) ^ c
            if w:
                folded[key] = w
            else:
                del folded[key]
        m = Matrix(f, self.dst.total_dim, self.src.total_dim)
        for (d, s), c in folded.items():
            m._put(d, s, c)
        return m


def coboundary_matrix(bundle: AlgebraBundle, n: int,
                      module: CochainModule | None = None) -> CoboundaryMatrix:
    """Assemble the degree-n differential of the pair complex.

    Iterates destination coordinates and expands each term of the two
    formulas (Chevalley-Eilenberg block and the squaring block) into source
    coordinates, so cost is linear in the output's sparse size.
    """
    bundle.require("bracket")
    src = CochainSpace(bundle, n, module)
    dst = CochainSpace(bundle, n + 1, module or src.module)
    module = src.module
    act = module.act_rows
    B = bundle.bracket
    nL = bundle.dim
    dimM = src.dimM
    entries: list[tuple[int, int, int]] = []

    # ---- phi block of the target --------------------------------------
    for T in dst.ntuples:
        ins: list[tuple[tuple[int, ...], int]] = []
        for ii, jj in itertools.combinations(range(n + 1), 2):
            rest = T[:ii] + T[ii + 1:jj] + T[jj + 1:]
            for b, cb in B.value(T[ii], T[jj]):
                if b in rest:
                    continue
                ins.append((_insert_sorted(rest, b), cb))
        acts = [(T[p], T[:p] + T[p + 1:]) for p in range(n + 1)]
        for m2 in range(dimM):
            d_idx = dst.phi_index(T, m2)
            for tup, cb in ins:
                entries.append((d_idx, src.phi_index(tup, m2), cb))
            for x, rest in acts:
                for m, c in act[x][m2]:
                    entries.append((d_idx, src.phi_index(rest, m), c))

    # ---- omega block of the target (degree n+1 >= 2) -------------------
    if n >= 1 and dst.owners:
        sq = bundle.squaring
        for x in dst.owners:
            for Z in dst.ztuples:
                zl = len(Z)
                direct_phi: list[tuple[tuple[int, ...], int]] = []
                if sq is not None:
                    for b, cb in sq.value(x):
                        if b in Z:
                            continue
                        direct_phi.append((_insert_sorted(Z, b), cb))
                for i in range(zl):
                    rest = Z[:i] + Z[i + 1:]
                    if x in rest:
                        continue
                    for b, cb in B.value(x, Z[i]):
                        if b == x or b in rest:
                            continue
                        direct_phi.append((_insert_sorted(_insert_sorted(rest, x), b), cb))
                direct_omega: list[tuple[tuple[int, ...], int]] = []
                for ii, jj in itertools.combinations(range(zl), 2):
                    rest = Z[:ii] + Z[ii + 1:jj] + Z[jj + 1:]
                    for b, cb in B.value(Z[ii], Z[jj]):
                        if b in rest:
                            continue
                        direct_omega.append((_insert_sorted(rest, b), cb))
                first_tuple = None if x in Z else _insert_sorted(Z, x)
                trail_acts = [(Z[i], Z[:i] + Z[i + 1:]) for i in range(zl)]
                for m2 in range(dimM):
                    d_idx = dst.omega_index(x, Z, m2)
                    for tup, cb in direct_phi:
                        entries.append((d_idx, src.phi_index(tup, m2), cb))
                    for ztup, cb in direct_omega:
                        entries.append((d_idx, src.omega_index(x, ztup, m2), cb))
                    if first_tuple is not None:
                        for m, c in act[x][m2]:
                            entries.append((d_idx, src.phi_index(first_tuple, m), c))
                    for z, rest in trail_acts:
                        for m, c in act[z][m2]:
                            entries.append((d_idx, src.omega_index(x, rest, m), c))

    return CoboundaryMatrix(src, dst, entries)


#### constrained (multiderivation) subspace ##################################


class PoissonSubspace:
    """Basis of the multiderivation cochain subspace inside XC^n coordinates.

    Constraint rows: first-slot derivation behaviour of phi on products,
    omega's quadratic compatibility with products in its first slot, and
    linear derivation behaviour of omega's trailing slots. The basis comes
    out of the kernel in canonical free-column form, so expansion
    coefficients of a member vector are plain coordinate reads.
    """

    def __init__(self, bundle: AlgebraBundle, n: int):
        bundle.require("product", "bracket")
        t0 = time.perf_counter()
        self.bundle = bundle
        self.n = n
        self.cspace = CochainSpace(bundle, n)  # adjoint coefficients
        f = bundle.space.field
        cs = self.cspace
        nL = bundle.dim
        if f.degree > 1 and cs.total_dim > DENSE_COORD_CAP:
            raise SizeBudgetExceeded(
                f"constrained subspace over GF(2^{f.degree}) capped at "
                f"{DENSE_COORD_CAP} coordinates, got {cs.total_dim}")

        P = bundle.product
        prod_rows: list[list[list[tuple[int, int]]]] = [
            [[] for _ in range(nL)] for _ in range(nL)]
        for b in range(nL):
            for m in range(nL):
                for t, c in P.value(b, m):
                    prod_rows[b][t].append((m, c))

        rows: list[list[tuple[int, int]]] = []

        def mult_rows(u: SparseVec, m2: int) -> list[tuple[int, int]]:
            # row m2 of multiplication by the element u
            out = []
            for b, cb in u:
                for m, c in prod_rows[b][m2]:
                    out.append((m, f.mul(cb, c)))
            return out

        # first-slot derivation rows (degrees >= 1)
        if n >= 1:
            for i in range(nL):
                for j in range(i, nL):
                    vij = P.value(i, j)
                    for Z in itertools.combinations(range(nL), n - 1):
                        tup_j = None if j in Z else _insert_sorted(Z, j)
                        tup_i = None if i in Z else _insert_sorted(Z, i)
                        for m2 in range(nL):
                            row: list[tuple[int, int]] = []
                            for c, pc in vij:
                                if c in Z:
                                    continue
                                row.append((cs.phi_index(_insert_sorted(Z, c), m2), pc))
                            if tup_j is not None:
                                for m, c in prod_rows[i][m2]:
                                    row.append((cs.phi_index(tup_j, m), c))
                            if tup_i is not None:
                                for m, c in prod_rows[j][m2]:
                                    row.append((cs.phi_index(tup_i, m), c))
                            if row:
                                rows.append(row)

        # first-slot quadratic rows for omega (degrees >= 2)
        if n >= 2:
            odd = bundle.space.odd_indices
            even = bundle.space.even_indices
            for i in odd:
                for j in even:
                    vij = P.value(i, j)
                    vjj = P.value(j, j)
                    for Z in itertools.combinations(range(nL), n - 2):
                        pair_tup = None
                        if i not in Z and j not in Z:
                            pair_tup = _insert_sorted(_insert_sorted(Z, i), j)
                        for m2 in range(nL):
                            row = []
                            for c, pc in vij:
                                row.append((cs.omega_index(c, Z, m2), f.square(pc)))
                            for (c, pc), (c2, pc2) in itertools.combinations(vij, 2):
                                if c in Z or c2 in Z:
                                    continue
                                row.append((cs.phi_index(
                                    _insert_sorted(_insert_sorted(Z, c), c2), m2),
                                    f.mul(pc, pc2)))
                            for m, c in mult_rows(vjj, m2):
                                row.append((cs.omega_index(i, Z, m), c))
                            if pair_tup is not None:
                                for m, c in mult_rows(vij, m2):
                                    row.append((cs.phi_index(pair_tup, m), c))
                            if row:
                                rows.append(row)

        # trailing-slot derivation rows for omega (degrees >= 3)
        if n >= 3:
            odd = bundle.space.odd_indices
            for x in odd:
                for a in range(nL):
                    for b in range(a, nL):
                        vab = P.value(a, b)
                        for rest in itertools.combinations(range(nL), n - 3):
                            tup_b = None if b in rest else _insert_sorted(rest, b)
                            tup_a = None if a in rest else _insert_sorted(rest, a)
                            for m2 in range(nL):
                                row = []
                                for c, pc in vab:
                                    if c in rest:
                                        continue
                                    row.append((cs.omega_index(x, _insert_sorted(rest, c), m2), pc))
                                if tup_b is not None:
                                    for m, c in prod_rows[a][m2]:
                                        row.append((cs.omega_index(x, tup_b, m), c))
                                if tup_a is not None:
                                    for m, c in prod_rows[b][m2]:
                                        row.append((cs.omega_index(x, tup_a, m), c))
                                if row:
                                    rows.append(row)

        self._build(rows)
        self.timing = time.perf_counter() - t0

    # ---- kernel handling ---------------------------------------------

    def _build(self, rows: list[list[tuple[int, int]]]) -> None:
        f = self.bundle.space.field
        N = self.cspace.total_dim
        if f.degree == 1:
            sys_ = IntGF2(N)
            for row in rows:
                sys_.add_row(i for i, _ in row)
            self._int_sys = sys_
            self._dense = None
            self.free_columns = sys_.free_columns()
            self.basis: list[SparseVec] = [
                tuple((i, 1) for i in sorted(sup)) for sup in sys_.kernel_supports()]
        else:
            self._int_sys = None
            dense_rows = []
            for row in rows:
                folded: dict[int, int] = {}
                for i, c in row:
                    w = folded.get(i, 0) ^ c
                    if w:
                        folded[i] = w
                    else:
                        del folded[i]
                if folded:
                    vec = [0] * N
                    for i, c in folded.items():
                        vec[i] = c
                    dense_rows.append(vec)
            if dense_rows:
                m = Matrix.from_rows(f, dense_rows, N)
                R, piv = m.rref()
                self._dense = (R, piv)
                pivset = set(piv)
                self.free_columns = [c for c in range(N) if c not in pivset]
                self.basis = [tuple((i, c) for i, c in enumerate(v) if c)
                              for v in m.kernel_basis()]
            else:
                self._dense = None
                self.free_columns = list(range(N))
                self.basis = [((i, 1),) for i in range(N)]
        self._free_pos = {c: k for k, c in enumerate(self.free_columns)}
        par = self.cspace.parity_vector()
        self.basis_parity: list[int] = []
        for vec in self.basis:
            ps = {par[i] for i, _ in vec}
            if len(ps) != 1:  # pragma: no cover - rows are parity-pure
                raise ValidationError("constrained basis vector mixes parities")
            self.basis_parity.append(ps.pop())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords_in_basis(self, vec: SparseVec) -> tuple[int, ...] | None:
        """Expansion over the basis, or None when vec is outside the subspace."""
        f = self.bundle.space.field
        coeffs = [0] * len(self.basis)
        for i, c in vec:
            k = self._free_pos.get(i)
            if k is not None:
                coeffs[k] = c
        acc: SparseVec = ()
        for k, c in enumerate(coeffs):
            if c:
                acc = sv_add(acc, sv_scale(f, c, self.basis[k]))
        if acc != tuple(vec):
            return None
        return tuple(coeffs)

    def contains(self, vec: SparseVec) -> bool:
        return self.coords_in_basis(vec) is not None


def poisson_subspace(bundle: AlgebraBundle, n: int) -> PoissonSubspace:
    return PoissonSubspace(bundle, n)


#### cohomology computations #################################################


def _parity_split(vectors: Sequence[SparseVec], parities: Sequence[int]) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {0: [], 1: []}
    for k, p in enumerate(parities):
        out[p].append(k)
    return out


@dataclass
class CohomologyResult:
    """Dimensions and representatives of one cohomology degree."""

    degree: int
    complex: str                      # "lie" | "poisson"
    parity: str                       # "even" | "odd" | "both"
    cochain_dims: dict[str, int]
    cocycle_dims: dict[str, int]
    coboundary_dims: dict[str, int]
    h_dims: dict[str, int]
    representatives: list[tuple[str, SparseVec]]
    cspace: CochainSpace
    timing: float = 0.0

    def to_report(self) -> Report:
        rep = Report()
        pref = "h" if self.complex == "lie" else "h_po"
        for key in ("even", "odd", "total"):
            if key in self.h_dims:
                rep.dimensions[f"{pref}_{key}"] = self.h_dims[key]
        rep.dimensions["cochain_total"] = self.cochain_dims["total"]
        for key in ("even", "odd", "total"):
            if key in self.cocycle_dims:
                rep.dimensions[f"cocycles_{key}"] = self.cocycle_dims[key]
            if key in self.coboundary_dims:
                rep.dimensions[f"coboundaries_{key}"] = self.coboundary_dims[key]
        rep.law(f"{self.complex}-cohomology-degree-{self.degree}")
        rep.timing = self.timing
        return rep


def _span_rank_sparse(field, vectors: list[SparseVec], ncols: int) -> int:
    if field.degree == 1:
        sys_ = IntGF2(ncols)
        for v in vectors:
            sys_.add_row(i for i, _ in v)
        return sys_.rank_
    if not vectors:
        return 0
    dense = [sv_dense(v, ncols) for v in vectors]
    return Matrix.from_rows(field, dense, ncols).rank()


def _complete_to_quotient(field, kernel: list[SparseVec], image: list[SparseVec],
                          ncols: int) -> list[SparseVec]:
    """Kernel vectors extending a basis of the image span, greedily."""
    if field.degree == 1:
        sys_ = IntGF2(ncols)
        for v in image:
            sys_.add_row(i for i, _ in v)
        reps = []
        for v in kernel:
            if sys_.add_row(i for i, _ in v) is not None:
                reps.append(v)
        return reps
    rows = [sv_dense(v, ncols) for v in image]
    rank = Matrix.from_rows(field, rows, ncols).rank() if rows else 0
    reps = []
    for v in kernel:
        cand = rows + [sv_dense(v, ncols)]
        r = Matrix.from_rows(field, cand, ncols).rank()
        if r > rank:
            rows, rank = cand, r
            reps.append(v)
    return reps


def _kernel_of_columns(field, cols: list[SparseVec], nrows: int) -> list[SparseVec]:
    """Kernel of the matrix whose k-th column is cols[k] (sparse over rows)."""
    ncols = len(cols)
    if ncols == 0:
        return []
    # transpose into rows over the column index space
    rows_map: dict[int, dict[int, int]] = {}
    for k, col in enumerate(cols):
        for r, c in col:
            rows_map.setdefault(r, {})[k] = c
    if field.degree == 1:
        sys_ = IntGF2(ncols)
        for r in sorted(rows_map):
            sys_.add_row(rows_map[r].keys())
        return [tuple((i, 1) for i in sorted(sup)) for sup in sys_.kernel_supports()]
    dense_rows = []
    for r in sorted(rows_map):
        vec = [0] * ncols
        for k, c in rows_map[r].items():
            vec[k] = c
        dense_rows.append(vec)
    if not dense_rows:
        return [((k, 1),) for k in range(ncols)]
    kern = Matrix.from_rows(field, dense_rows, ncols).kernel_basis()
    return [tuple((i, c) for i, c in enumerate(v) if c) for v in kern]


def lie_cohomology(bundle: AlgebraBundle, n: int, parity: str = "both",
                   module: CochainModule | None = None) -> CohomologyResult:
    """XH^n of the full pair complex, split by coordinate parity."""
    t0 = time.perf_counter()
    if parity not in ("even", "odd", "both"):
        raise ValidationError(f"unknown parity filter {parity!r}")
    _guard_dense(bundle, (n, n + 1), module)
    d_n = coboundary_matrix(bundle, n, module)
    cs = d_n.src
    f = bundle.space.field
    par = cs.parity_vector()
    N = cs.total_dim

    # kernel of d_n
    if f.degree == 1:
        sys_ = IntGF2(N)
        for _, row in sorted(d_n.row_dict().items()):
            sys_.add_row(i for i, _ in row)
        kernel = [tuple((i, 1) for i in sorted(sup)) for sup in sys_.kernel_supports()]
    else:
        dm = d_n.to_dense()
        kernel = [tuple((i, c) for i, c in enumerate(v) if c) for v in dm.kernel_basis()]

    image: list[SparseVec] = []
    if n >= 1:
        d_prev = coboundary_matrix(bundle, n - 1, module)
        cols = d_prev.col_dict()
        for s in range(d_prev.src.total_dim):
            col = cols.get(s)
            if col:
                image.append(tuple(col))

    def vec_parity(v: SparseVec) -> int:
        ps = {par[i] for i, _ in v}
        if len(ps) != 1:
            raise ValidationError("cochain vector mixes coordinate parities")
        return ps.pop()

    kern_by_p: dict[int, list[SparseVec]] = {0: [], 1: []}
    for v in kernel:
        kern_by_p[vec_parity(v)].append(v)
    img_by_p: dict[int, list[SparseVec]] = {0: [], 1: []}
    for v in image:
        img_by_p[vec_parity(v)].append(v)

    wanted = {"even": (0,), "odd": (1,), "both": (0, 1)}[parity]
    names = {0: "even", 1: "odd"}
    cocy: dict[str, int] = {}
    cobo: dict[str, int] = {}
    h: dict[str, int] = {}
    reps: list[tuple[str, SparseVec]] = []
    for p in wanted:
        kp = kern_by_p[p]
        rank_img = _span_rank_sparse(f, img_by_p[p], N)
        cocy[names[p]] = len(kp)
        cobo[names[p]] = rank_img
        h[names[p]] = len(kp) - rank_img
        for v in _complete_to_quotient(f, kp, img_by_p[p], N):
            reps.append((names[p], v))
    if parity == "both":
        cocy["total"] = cocy["even"] + cocy["odd"]
        cobo["total"] = cobo["even"] + cobo["odd"]
        h["total"] = h["even"] + h["odd"]
    else:
        only = "even" if parity == "even" else "odd"
        h["total"] = h[only]

    cdims = {"total": N,
             "even": sum(1 for p in par if p == 0),
             "odd": sum(1 for p in par if p == 1)}
    return CohomologyResult(n, "lie", parity, cdims, cocy, cobo, h, reps, cs,
                            timing=time.perf_counter() - t0)


def poisson_cohomology(bundle: AlgebraBundle, n: int, parity: str = "both") -> CohomologyResult:
    """XH^n of the constrained subcomplex (adjoint coefficients).

    Raises:
        DifferentialEscapesSubspace: an image vector fails the degree-(n+1)
        constraints — this would signal broken input structure.
    """
    t0 = time.perf_counter()
    if parity not in ("even", "odd", "both"):
        raise ValidationError(f"unknown parity filter {parity!r}")
    f = bundle.space.field
    _guard_dense(bundle, (max(0, n - 1), n, n + 1), None)
    sub_n = poisson_subspace(bundle, n)
    sub_up = poisson_subspace(bundle, n + 1)
    d_n = coboundary_matrix(bundle, n)

    cols_n: list[tuple[int, ...]] = []
    for b in sub_n.basis:
        img = d_n.apply(b)
        expansion = sub_up.coords_in_basis(img)
        if expansion is None:
            raise DifferentialEscapesSubspace(
                f"differential image of a degree-{n} constrained cochain "
                f"fails the degree-{n + 1} constraints")
        cols_n.append(expansion)

    k_n = len(sub_n.basis)
    Dn_cols = [tuple((r, c) for r, c in enumerate(col) if c) for col in cols_n]

    prev_cols: list[SparseVec] = []
    prev_par: list[int] = []
    if n >= 1:
        sub_dn = poisson_subspace(bundle, n - 1)
        d_prev = coboundary_matrix(bundle, n - 1)
        for b, bp in zip(sub_dn.basis, sub_dn.basis_parity):
            img = d_prev.apply(b)
            expansion = sub_n.coords_in_basis(img)
            if expansion is None:
                raise DifferentialEscapesSubspace(
                    f"differential image of a degree-{n - 1} constrained cochain "
                    f"fails the degree-{n} constraints")
            prev_cols.append(tuple((r, c) for r, c in enumerate(expansion) if c))
            prev_par.append(bp)

    wanted = {"even": (0,), "odd": (1,), "both": (0, 1)}[parity]
    names = {0: "even", 1: "odd"}
    cocy: dict[str, int] = {}
    cobo: dict[str, int] = {}
    h: dict[str, int] = {}
    reps: list[tuple[str, SparseVec]] = []
    for p in wanted:
        idxs = [k for k in range(k_n) if sub_n.basis_parity[k] == p]
        pos = {k: t for t, k in enumerate(idxs)}
        # kernel of D_n restricted to parity-p basis columns
        cols_p = [Dn_cols[k] for k in idxs]
        kern_small = _kernel_of_columns(f, cols_p, len(sub_up.basis))
        kern = [tuple((idxs[i], c) for i, c in v) for v in kern_small]
        img = [col for col, bp in zip(prev_cols, prev_par) if bp == p]
        # both live in restricted coordinates over sub_n basis indices
        rank_img = _span_rank_sparse(f, img, k_n)
        cocy[names[p]] = len(kern)
        cobo[names[p]] = rank_img
        h[names[p]] = len(kern) - rank_img
        for v in _complete_to_quotient(f, kern, img, k_n):
            # expand restricted coordinates back to full cochain coordinates
            acc: SparseVec = ()
            for k, c in v:
                acc = sv_add(acc, sv_scale(f, c, sub_n.basis[k]))
            reps.append((names[p], acc))
    if parity == "both":
        cocy["total"] = cocy["even"] + cocy["odd"]
        cobo["total"] = cobo["even"] + cobo["odd"]
        h["total"] = h["even"] + h["odd"]
    else:
        h["total"] = h["even" if parity == "even" else "odd"]

    cdims = {"total": sub_n.dim,
             "even": sum(1 for p in sub_n.basis_parity if p == 0),
             "odd": sum(1 for p in sub_n.basis_parity if p == 1),
             "ambient": sub_n.cspace.total_dim}
    return CohomologyResult(n, "poisson", parity, cdims, cocy, cobo, h, reps,
                            sub_n.cspace, timing=time.perf_counter() - t0)


#### symmetrized bilinear cocycles ###########################################


def hochschild_to_lie(bundle: AlgebraBundle,
                      mu: Mapping[tuple[int, int], SparseVec]) -> Cochain:
    """Turn a Hochschild 2-cocycle of the product into a degree-2 pair cochain.

    phi(x, y) = mu(x, y) + mu(y, x) on distinct basis pairs and
    omega(x) = mu(x, x) on odd basis vectors.

    Raises:
        NotAHochschildCocycle: mu fails
            x mu(y,z) + mu(xy,z) + mu(x,yz) + mu(x,y) z = 0 on some triple.
    """
    bundle.require("product", "bracket")
    space = bundle.space
    nL = space.dim
    P = bundle.product
    f = space.field

    def mu_val(i: int, j: int) -> SparseVec:
        return mu.get((i, j), ())

    def mu_sv(sv: SparseVec, j: int) -> SparseVec:
        acc: SparseVec = ()
        for i, c in sv:
            acc = sv_add(acc, sv_scale(f, c, mu_val(i, j)))
        return acc

    def mu_sv_right(i: int, sv: SparseVec) -> SparseVec:
        acc: SparseVec = ()
        for j, c in sv:
            acc = sv_add(acc, sv_scale(f, c, mu_val(i, j)))
        return acc

    from .checks import _tbl_left, _tbl_right

    for i in range(nL):
        for j in range(nL):
            for z in range(nL):
                total = _tbl_left(P, i, mu_val(j, z))
                total = sv_add(total, mu_sv(P.value(i, j), z))
                total = sv_add(total, mu_sv_right(i, P.value(j, z)))
                total = sv_add(total, _tbl_right(P, mu_val(i, j), z))
                if total:
                    raise NotAHochschildCocycle(
                        f"cocycle identity fails at ({space.names[i]}, "
                        f"{space.names[j]}, {space.names[z]}): {fmt_sparse(space, total)}")

    cs = CochainSpace(bundle, 2)
    coeffs = [0] * cs.total_dim
    for i in range(nL):
        for j in range(i + 1, nL):
            val = sv_add(mu_val(i, j), mu_val(j, i))
            for m, c in val:
                coeffs[cs.phi_index((i, j), m)] ^= c
    for x in space.odd_indices:
        for m, c in mu_val(x, x):
            coeffs[cs.omega_index(x, (), m)] ^= c
    return Cochain(cs, tuple(coeffs))
