"""Anchored module algebras: an associative algebra acting on a Lie algebra.

The central object is a triple (A, L, anchor): A associative and
supercommutative with unit, L a Lie algebra that is also an A-module, and an
anchor sending each element of L to a derivation of A. The constructor
enforces the purely structural facts (module axioms on the basis, anchor
matrices are derivations); the genuinely algebraic compatibility laws live
in :func:`check_lie_rinehart`.

Constructions: the derivation triple (A, Der(A), id), the Lie algebra on
A + L driven by the anchor, semidirect extensions by strong modules, and
the differential-form triple of a unital Poisson algebra, built as an
explicit quotient of the free module on symbols d(e_i).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .checks import (check_associative_supercommutative, check_lie,
                     check_poisson, derivation_space, _rand_element)
from .constructions import Mat, _mat_combine, _mat_mul
from .core import (AlgebraBundle, BilinearTable, NoUnit, NotPoissonInput,
                   NotStrong, Report, SizeBudgetExceeded, SparseVec,
                   SquaringTable, SuperSpace, ValidationError, fmt_sparse,
                   squaring_sv, sv_add, sv_from_dict)
from .linalg import Matrix, solve


#### the triple ##############################################################


@dataclass(frozen=True)
class LieRinehartTriple:
    """An associative algebra A, a Lie algebra L over it, and an anchor.

    ``action[a][x]`` is the element a.x of L for basis vectors a of A and x
    of L; ``anchor[x]`` is the derivation of A attached to the x-th basis
    vector of L, stored as a matrix (rows index outputs). Shapes, parities,
    the A-module axioms on the basis and the derivation rule are all
    enforced here; the anchor-vs-bracket compatibility laws are not.
    """

    A: AlgebraBundle
    L: AlgebraBundle
    action: tuple[tuple[SparseVec, ...], ...]
    anchor: tuple[Mat, ...]
    #: optional even map A -> L (one L-vector per basis vector of A); the
    #: form triple stores d here, other constructions leave it unset
    differential: tuple[SparseVec, ...] | None = None

    def __post_init__(self):
        A, L = self.A, self.L
        A.require("product")
        L.require("bracket")
        if L.space.odd_indices:
            L.require("squaring")
        if A.space.field != L.space.field:
            raise ValidationError("algebra and module live over different fields")
        if A.unit is None:
            raise ValidationError("the acting algebra must be unital")
        f = A.space.field
        na, nl = A.space.dim, L.space.dim
        if len(self.action) != na or any(len(row) != nl for row in self.action):
            raise ValidationError("action table must be dim(A) x dim(L)")
        cleaned = []
        for a, row in enumerate(self.action):
            out_row = []
            for x, sv in enumerate(row):
                sv = tuple((t, f.validate_scalar(c)) for t, c in sv if c)
                want = (A.space.parities[a] + L.space.parities[x]) & 1
                for t, _ in sv:
                    if L.space.parities[t] != want:
                        raise ValidationError(
                            f"action of {A.space.names[a]} on {L.space.names[x]} "
                            f"breaks the grading")
                out_row.append(tuple(sorted(sv)))
            cleaned.append(tuple(out_row))
        object.__setattr__(self, "action", tuple(cleaned))
        if len(self.anchor) != nl:
            raise ValidationError("need one anchor matrix per basis vector of L")
        frozen = []
        for x, mat in enumerate(self.anchor):
            if len(mat) != na or any(len(r) != na for r in mat):
                raise ValidationError("anchor matrix has wrong shape")
            mat = tuple(tuple(f.validate_scalar(c) for c in r) for r in mat)
            want = L.space.parities[x]
            parA = A.space.parities
            for i in range(na):
                for j in range(na):
                    if mat[i][j] and (parA[i] + parA[j]) & 1 != want:
                        raise ValidationError(
                            f"anchor of {L.space.names[x]} is not parity-homogeneous")
            frozen.append(mat)
        object.__setattr__(self, "anchor", tuple(frozen))
        # module axioms on the basis: unit acts as identity, (ab).x = a.(b.x)
        u = A.unit.sparse()
        for x in range(nl):
            if self.act(u, ((x, 1),)) != ((x, 1),):
                raise ValidationError("unit of A must act as the identity on L")
        for a in range(na):
            for b in range(na):
                ab = A.product.value(a, b)
                for x in range(nl):
                    lhs = self.act(ab, ((x, 1),))
                    rhs = self.act(((a, 1),), self.act(((b, 1),), ((x, 1),)))
                    if lhs != rhs:
                        raise ValidationError(
                            f"action is not associative at "
                            f"({A.space.names[a]}, {A.space.names[b]}, {L.space.names[x]})")
        # each anchor value must be a derivation of the product
        for x in range(nl):
            mat = self.anchor[x]
            for a in range(na):
                for b in range(na):
                    lhs = self._mat_sv(mat, A.product.value(a, b))
                    rhs = sv_add(A.product.apply_sv(self._mat_sv(mat, ((a, 1),)), ((b, 1),)),
                                 A.product.apply_sv(((a, 1),), self._mat_sv(mat, ((b, 1),))))
                    if lhs != rhs:
                        raise ValidationError(
                            f"anchor of {L.space.names[x]} is not a derivation at "
                            f"({A.space.names[a]}, {A.space.names[b]})")
        if self.differential is not None:
            if len(self.differential) != na:
                raise ValidationError("differential needs one value per basis vector of A")
            fixed = []
            for i, sv in enumerate(self.differential):
                sv = tuple(sorted((t, f.validate_scalar(c)) for t, c in sv if c))
                for t, _ in sv:
                    if L.space.parities[t] != A.space.parities[i]:
                        raise ValidationError("differential must be an even map")
                fixed.append(sv)
            object.__setattr__(self, "differential", tuple(fixed))

    def _mat_sv(self, mat: Mat, sv: SparseVec) -> SparseVec:
        f = self.A.space.field
        acc: dict[int, int] = {}
        for b, c in sv:
            for a in range(len(mat)):
                if mat[a][b]:
                    w = acc.get(a, 0) ^ f.mul(c, mat[a][b])
                    if w:
                        acc[a] = w
                    else:
                        del acc[a]
        return sv_from_dict(acc)

    def act(self, a_sv: SparseVec, x_sv: SparseVec) -> SparseVec:
        """Bilinear extension of the action table."""
        f = self.A.space.field
        acc: dict[int, int] = {}
        for a, ca in a_sv:
            for x, cx in x_sv:
                for t, v in self.action[a][x]:
                    w = acc.get(t, 0) ^ f.mul(f.mul(ca, cx), v)
                    if w:
                        acc[t] = w
                    else:
                        del acc[t]
        return sv_from_dict(acc)

    def anchor_of(self, x_sv: SparseVec) -> Mat:
        return _mat_combine(self.A.space.field, self.anchor, x_sv, self.A.space.dim)

    def anchor_apply(self, x_sv: SparseVec, a_sv: SparseVec) -> SparseVec:
        return self._mat_sv(self.anchor_of(x_sv), a_sv)


#### the law suite ###########################################################


def check_lie_rinehart(triple: LieRinehartTriple, seed: int = 0,
                       samples: int = 8) -> Report:
    """Full compatibility suite for an anchored module algebra.

    Merges the associative laws of A and the Lie laws of L, then checks:
    the anchor is a Lie morphism and linear over the action, the bracket
    obeys the action Leibniz rule, and the two squaring-vs-action rules
    (even coefficient on an odd vector, odd coefficient on an even one).
    Multilinear laws run on all basis combinations; the quadratic squaring
    rules run on basis pairs plus seeded random homogeneous elements, since
    basis cases alone do not pin down a squaring.
    """
    t0 = time.perf_counter()
    A, L = triple.A, triple.L
    sa, sl = A.space, L.space
    f = sa.field
    na, nl = sa.dim, sl.dim
    rep = Report()
    rep.merge(check_associative_supercommutative(A, seed=seed, samples=samples))
    rep.merge(check_lie(L, seed=seed, samples=samples))
    rep.dimensions.update(dim_algebra=na, dim_module=nl)

    rep.law("anchor-morphism")
    for i in range(nl):
        for j in range(i + 1, nl):
            lhs = triple.anchor_of(L.bracket.value(i, j))
            mi, mj = triple.anchor[i], triple.anchor[j]
            rhs = tuple(tuple(r1 ^ r2 for r1, r2 in zip(row1, row2))
                        for row1, row2 in zip(_mat_mul(f, mi, mj), _mat_mul(f, mj, mi)))
            if lhs != rhs:
                rep.add("anchor-morphism", (sl.names[i], sl.names[j]),
                        "anchor of bracket", "commutator of anchors")
                if len(rep.violations) >= 16:
                    break
        if len(rep.violations) >= 16:
            break
    if sl.odd_indices and L.squaring is not None:
        for i in sl.odd_indices:
            lhs = triple.anchor_of(L.squaring.value(i))
            rhs = _mat_mul(f, triple.anchor[i], triple.anchor[i])
            if lhs != rhs:
                rep.add("anchor-morphism", (sl.names[i],),
                        "anchor of square", "square of anchor")

    rep.law("anchor-linear")
    for a in range(na):
        for x in range(nl):
            lhs = triple.anchor_of(triple.action[a][x])
            base = triple.anchor[x]
            # a . rho_x as an operator: b |-> a * rho_x(b)
            cols = []
            for b in range(na):
                img = triple._mat_sv(base, ((b, 1),))
                cols.append(A.product.apply_sv(((a, 1),), img))
            rhs = tuple(tuple(sv_lookup(cols[b], r) for b in range(na))
                        for r in range(na))
            if lhs != rhs:
                rep.add("anchor-linear", (sa.names[a], sl.names[x]),
                        "anchor of a.x", "a * anchor of x")
                if len(rep.violations) >= 16:
                    break
        if len(rep.violations) >= 16:
            break

    rng = random.Random(seed)

    rep.law("action-leibniz")
    done = False
    for x in range(nl):
        if done:
            break
        for a in range(na):
            if done:
                break
            ra = triple.anchor_apply(((x, 1),), ((a, 1),))
            for y in range(nl):
                lhs = L.bracket.apply_sv(((x, 1),), triple.action[a][y])
                rhs = sv_add(triple.act(((a, 1),), L.bracket.value(x, y)),
                             triple.act(ra, ((y, 1),)))
                if lhs != rhs:
                    if not rep.add("action-leibniz",
                                   (sl.names[x], sa.names[a], sl.names[y]),
                                   fmt_sparse(sl, lhs), fmt_sparse(sl, rhs)):
                        done = True
                        break

    def square_even_odd(a_sv: SparseVec, x_sv: SparseVec,
                        wit: tuple[str, str]) -> bool:
        ax = triple.act(a_sv, x_sv)
        lhs = squaring_sv(L, ax)
        aa = A.product.apply_sv(a_sv, a_sv)
        rhs = sv_add(triple.act(aa, squaring_sv(L, x_sv)),
                     triple.act(triple.anchor_apply(ax, a_sv), x_sv))
        if lhs != rhs:
            return rep.add("action-squaring-even", wit,
                           fmt_sparse(sl, lhs), fmt_sparse(sl, rhs))
        return True

    def square_odd_even(a_sv: SparseVec, x_sv: SparseVec,
                        wit: tuple[str, str]) -> bool:
        ax = triple.act(a_sv, x_sv)
        lhs = squaring_sv(L, ax)
        rhs = triple.act(triple.anchor_apply(ax, a_sv), x_sv)
        if lhs != rhs:
            return rep.add("action-squaring-odd", wit,
                           fmt_sparse(sl, lhs), fmt_sparse(sl, rhs))
        return True

    if sl.odd_indices:
        rep.law("action-squaring-even")
        ev_as = [((a, 1),) for a in sa.even_indices]
        od_xs = [((x, 1),) for x in sl.odd_indices]
        for _ in range(samples):
            sv = _rand_element(sa, rng, parity=0)
            if sv:
                ev_as.append(sv)
            sv = _rand_element(sl, rng, parity=1)
            if sv:
                od_xs.append(sv)
        for a_sv in ev_as:
            for x_sv in od_xs:
                if not square_even_odd(a_sv, x_sv,
                                       (fmt_sparse(sa, a_sv), fmt_sparse(sl, x_sv))):
                    break
            else:
                continue
            break

    if sa.odd_indices and sl.even_indices:
        rep.law("action-squaring-odd")
        od_as = [((a, 1),) for a in sa.odd_indices]
        ev_xs = [((x, 1),) for x in sl.even_indices]
        for _ in range(samples):
            sv = _rand_element(sa, rng, parity=1)
            if sv:
                od_as.append(sv)
            sv = _rand_element(sl, rng, parity=0)
            if sv:
                ev_xs.append(sv)
        for a_sv in od_as:
            for x_sv in ev_xs:
                if not square_odd_even(a_sv, x_sv,
                                       (fmt_sparse(sa, a_sv), fmt_sparse(sl, x_sv))):
                    break
            else:
                continue
            break

    rep.timing = time.perf_counter() - t0
    return rep


def sv_lookup(sv: SparseVec, idx: int) -> int:
    for t, c in sv:
        if t == idx:
            return c
    return 0


#### derivation triple #######################################################


def der_triple(A: AlgebraBundle) -> LieRinehartTriple:
    """The triple (A, Der(A), identity): derivations acting tautologically.

    The Lie algebra is carved out of End(A) by solving the derivation
    constraints; its bracket is the operator commutator, the square of an
    odd derivation is its operator square, and A acts by postmultiplying
    values. The anchor is the identity, so each basis derivation is its own
    anchor matrix.
    """
    A.require("product")
    if A.unit is None:
        raise ValidationError("derivation triple needs a unital algebra")
    f = A.space.field
    n = A.space.dim
    found = derivation_space(A, "associative")
    mats = list(found["even"]) + list(found["odd"])
    parities = (0,) * len(found["even"]) + (1,) * len(found["odd"])
    k = len(mats)
    names = tuple(f"D{m + 1}" for m in range(k))
    sl = SuperSpace(f, names, parities)

    flat = [tuple(m[a][b] for a in range(n) for b in range(n)) for m in mats]
    coord_mat = (Matrix.from_rows(f, [[flat[m][q] for m in range(k)]
                                      for q in range(n * n)], k)
                 if k else None)

    def coords(mat: Mat) -> SparseVec:
        target = [mat[a][b] for a in range(n) for b in range(n)]
        if not any(target):
            return ()
        sol = solve(coord_mat, target)
        if sol is None:  # pragma: no cover - the families below are closed
            raise ValidationError("operator escapes the derivation space")
        return tuple((m, c) for m, c in enumerate(sol) if c)

    bracket: dict[tuple[int, int], SparseVec] = {}
    for i in range(k):
        for j in range(i + 1, k):
            comm = tuple(tuple(r1 ^ r2 for r1, r2 in zip(row1, row2))
                         for row1, row2 in zip(_mat_mul(f, mats[i], mats[j]),
                                               _mat_mul(f, mats[j], mats[i])))
            sv = coords(comm)
            if sv:
                bracket[(i, j)] = sv
    squaring: dict[int, SparseVec] = {}
    for i in range(k):
        if parities[i] == 1:
            sv = coords(_mat_mul(f, mats[i], mats[i]))
            if sv:
                squaring[i] = sv

    L = AlgebraBundle(sl, None, BilinearTable(sl, "bracket", bracket),
                      SquaringTable(sl, squaring), name=f"der({A.name or '?'})")

    lmult = []
    for a in range(n):
        rows = [[0] * n for _ in range(n)]
        for b in range(n):
            for t, c in A.product.value(a, b):
                rows[t][b] = c
        lmult.append(tuple(tuple(r) for r in rows))

    action = tuple(
        tuple(coords(_mat_mul(f, lmult[a], mats[x])) for x in range(k))
        for a in range(n))
    anchor = tuple(mats)
    return LieRinehartTriple(A, L, action, anchor)


#### the Lie algebra on A + L ################################################


def lr_to_lie(triple: LieRinehartTriple) -> AlgebraBundle:
    """Lie bundle on A + L: the anchor feeds the mixed bracket and squares.

    [a + x, b + y] = rho_x(b) + rho_y(a) + [x, y] and the square of an odd
    a + x is rho_x(a) + s(x); on the basis this stores rho values on mixed
    pairs and plain squares on the L block, and the extended-square
    expansion reproduces the displayed formula on sums.
    """
    A, L = triple.A, triple.L
    f = A.space.field
    na, nl = A.space.dim, L.space.dim
    lnames = L.space.names
    if set(A.space.names) & set(lnames):
        lnames = tuple("l." + nm for nm in lnames)
    space = SuperSpace(f, A.space.names + lnames,
                       A.space.parities + L.space.parities)

    bracket: dict[tuple[int, int], SparseVec] = {}
    for x in range(nl):
        mat = triple.anchor[x]
        for b in range(na):
            val = sv_from_dict({a: mat[a][b] for a in range(na) if mat[a][b]})
            if val:
                bracket[(b, na + x)] = val
    for (i, j), val in L.bracket.entries.items():
        bracket[(na + i, na + j)] = tuple((na + t, c) for t, c in val)

    squaring: dict[int, SparseVec] = {}
    if L.squaring is not None:
        for i, val in L.squaring.entries.items():
            squaring[na + i] = tuple((na + t, c) for t, c in val)

    return AlgebraBundle(space, None, BilinearTable(space, "bracket", bracket),
                         SquaringTable(space, squaring),
                         name=f"lr({A.name or '?'})")


#### modules and their semidirect extension ##################################


@dataclass(frozen=True)
class LRModule:
    """A module over an anchored triple, with a declared strength.

    ``action`` is the A-action on V (elements of V per basis pair), ``pi``
    the L-action as matrices on V. ``strength`` is a claim ("weak" or
    "strong"); :func:`check_lr_module` verifies it.
    """

    triple: LieRinehartTriple
    V: SuperSpace
    action: tuple[tuple[SparseVec, ...], ...]
    pi: tuple[Mat, ...]
    strength: str = "weak"

    def __post_init__(self):
        A = self.triple.A
        L = self.triple.L
        if self.strength not in ("weak", "strong"):
            raise ValidationError("strength must be 'weak' or 'strong'")
        if self.V.field != A.space.field:
            raise ValidationError("module lives over a different field")
        f = self.V.field
        na, nl, nv = A.space.dim, L.space.dim, self.V.dim
        if len(self.action) != na or any(len(r) != nv for r in self.action):
            raise ValidationError("action table must be dim(A) x dim(V)")
        cleaned = []
        for a, row in enumerate(self.action):
            out = []
            for v, sv in enumerate(row):
                sv = tuple((t, f.validate_scalar(c)) for t, c in sv if c)
                want = (A.space.parities[a] + self.V.parities[v]) & 1
                for t, _ in sv:
                    if self.V.parities[t] != want:
                        raise ValidationError("A-action on V breaks the grading")
                out.append(tuple(sorted(sv)))
            cleaned.append(tuple(out))
        object.__setattr__(self, "action", tuple(cleaned))
        if len(self.pi) != nl:
            raise ValidationError("need one operator per basis vector of L")
        frozen = []
        for x, mat in enumerate(self.pi):
            if len(mat) != nv or any(len(r) != nv for r in mat):
                raise ValidationError("module operator has wrong shape")
            mat = tuple(tuple(f.validate_scalar(c) for c in r) for r in mat)
            want = L.space.parities[x]
            for i in range(nv):
                for j in range(nv):
                    if mat[i][j] and (self.V.parities[i] + self.V.parities[j]) & 1 != want:
                        raise ValidationError(
                            f"operator of {L.space.names[x]} is not parity-homogeneous")
            frozen.append(mat)
        object.__setattr__(self, "pi", tuple(frozen))

    def act(self, a_sv: SparseVec, v_sv: SparseVec) -> SparseVec:
        f = self.V.field
        acc: dict[int, int] = {}
        for a, ca in a_sv:
            for v, cv in v_sv:
                for t, w in self.action[a][v]:
                    val = acc.get(t, 0) ^ f.mul(f.mul(ca, cv), w)
                    if val:
                        acc[t] = val
                    else:
                        del acc[t]
        return sv_from_dict(acc)


def check_lr_module(module: LRModule) -> Report:
    """Module laws over the triple, plus the declared strength.

    Weak laws: V is an A-module on the basis, pi is a Lie morphism, and
    pi_x(a.v) = a.pi_x(v) + rho_x(a).v. The strength claim adds two
    linearity laws: pi commutes with the A-action on V and pi of a.x is a
    times pi of x. Both are needed for the semidirect extension to satisfy
    the triple axioms, and the first one alone already fails for the anchor
    acting on A itself.
    """
    t0 = time.perf_counter()
    tri = module.triple
    A, L, V = tri.A, tri.L, module.V
    f = V.field
    na, nl, nv = A.space.dim, L.space.dim, V.dim
    rep = Report()
    rep.dimensions.update(dim_module=nv)

    def mat_sv(mat: Mat, sv: SparseVec) -> SparseVec:
        acc: dict[int, int] = {}
        for b, c in sv:
            for a in range(nv):
                if mat[a][b]:
                    w = acc.get(a, 0) ^ f.mul(c, mat[a][b])
                    if w:
                        acc[a] = w
                    else:
                        del acc[a]
        return sv_from_dict(acc)

    rep.law("action-unit")
    u = A.unit.sparse()
    for v in range(nv):
        got = module.act(u, ((v, 1),))
        if got != ((v, 1),):
            rep.add("action-unit", (V.names[v],), fmt_sparse(V, got), V.names[v])

    rep.law("action-associative")
    for a in range(na):
        for b in range(na):
            ab = A.product.value(a, b)
            for v in range(nv):
                lhs = module.act(ab, ((v, 1),))
                rhs = module.act(((a, 1),), module.act(((b, 1),), ((v, 1),)))
                if lhs != rhs:
                    rep.add("action-associative",
                            (A.space.names[a], A.space.names[b], V.names[v]),
                            fmt_sparse(V, lhs), fmt_sparse(V, rhs))
                    if len(rep.violations) >= 16:
                        break
            if len(rep.violations) >= 16:
                break
        if len(rep.violations) >= 16:
            break

    rep.law("pi-morphism")
    def pi_of(sv: SparseVec) -> Mat:
        return _mat_combine(f, module.pi, sv, nv)

    for i in range(nl):
        for j in range(i + 1, nl):
            lhs = pi_of(L.bracket.value(i, j))
            rhs = tuple(tuple(r1 ^ r2 for r1, r2 in zip(row1, row2))
                        for row1, row2 in zip(_mat_mul(f, module.pi[i], module.pi[j]),
                                              _mat_mul(f, module.pi[j], module.pi[i])))
            if lhs != rhs:
                rep.add("pi-morphism", (L.space.names[i], L.space.names[j]),
                        "pi of bracket", "commutator of operators")
    if L.squaring is not None:
        for i in L.space.odd_indices:
            lhs = pi_of(L.squaring.value(i))
            rhs = _mat_mul(f, module.pi[i], module.pi[i])
            if lhs != rhs:
                rep.add("pi-morphism", (L.space.names[i],),
                        "pi of square", "square of operator")

    rep.law("weak-compat")
    done = False
    for x in range(nl):
        if done:
            break
        for a in range(na):
            if done:
                break
            ra = tri.anchor_apply(((x, 1),), ((a, 1),))
            for v in range(nv):
                av = module.act(((a, 1),), ((v, 1),))
                lhs = mat_sv(module.pi[x], av)
                rhs = sv_add(module.act(((a, 1),), mat_sv(module.pi[x], ((v, 1),))),
                             module.act(ra, ((v, 1),)))
                if lhs != rhs:
                    if not rep.add("weak-compat",
                                   (L.space.names[x], A.space.names[a], V.names[v]),
                                   fmt_sparse(V, lhs), fmt_sparse(V, rhs)):
                        done = True
                        break

    if module.strength == "strong":
        rep.law("strong-operator-linear")
        done = False
        for x in range(nl):
            if done:
                break
            for a in range(na):
                if done:
                    break
                for v in range(nv):
                    av = module.act(((a, 1),), ((v, 1),))
                    lhs = mat_sv(module.pi[x], av)
                    rhs = module.act(((a, 1),), mat_sv(module.pi[x], ((v, 1),)))
                    if lhs != rhs:
                        if not rep.add("strong-operator-linear",
                                       (L.space.names[x], A.space.names[a], V.names[v]),
                                       fmt_sparse(V, lhs), fmt_sparse(V, rhs)):
                            done = True
                            break
        rep.law("strong-action-linear")
        done = False
        for a in range(na):
            if done:
                break
            for x in range(nl):
                if done:
                    break
                ax = tri.action[a][x]
                for v in range(nv):
                    lhs = mat_sv(pi_of(ax), ((v, 1),))
                    rhs = module.act(((a, 1),), mat_sv(module.pi[x], ((v, 1),)))
                    if lhs != rhs:
                        if not rep.add("strong-action-linear",
                                       (A.space.names[a], L.space.names[x], V.names[v]),
                                       fmt_sparse(V, lhs), fmt_sparse(V, rhs)):
                            done = True
                            break

    rep.timing = time.perf_counter() - t0
    return rep


def lr_module_semidirect(module: LRModule) -> LieRinehartTriple:
    """Extend the triple's Lie side by a strong module, anchored through L.

    The module becomes an abelian ideal of the new Lie algebra; its vectors
    square to zero and anchor to zero. Raises :class:`NotStrong` unless the
    module is declared strong and actually passes the strength laws.
    """
    if module.strength != "strong":
        raise NotStrong("semidirect extension needs a strong module")
    report = check_lr_module(module)
    if not report.passed:
        raise NotStrong(
            "module laws fail: " + ", ".join(sorted({v.law for v in report.violations})))
    tri = module.triple
    if module.V.dim == 0:
        return tri
    A, L, V = tri.A, tri.L, module.V
    f = V.field
    na, nl, nv = A.space.dim, L.space.dim, V.dim

    vnames = tuple("v." + nm for nm in V.names)
    space = SuperSpace(f, L.space.names + vnames, L.space.parities + V.parities)
    bracket: dict[tuple[int, int], SparseVec] = {}
    for (i, j), val in L.bracket.entries.items():
        bracket[(i, j)] = val
    for x in range(nl):
        for v in range(nv):
            val = sv_from_dict({nl + a: module.pi[x][a][v]
                                for a in range(nv) if module.pi[x][a][v]})
            if val:
                bracket[(x, nl + v)] = val
    squaring: dict[int, SparseVec] = {}
    if L.squaring is not None:
        squaring.update(L.squaring.entries)
    big_l = AlgebraBundle(space, None, BilinearTable(space, "bracket", bracket),
                          SquaringTable(space, squaring),
                          name=f"{L.name or '?'}+module")

    action = tuple(
        tuple(tri.action[a])
        + tuple(tuple((nl + t, c) for t, c in module.action[a][v]) for v in range(nv))
        for a in range(na))
    zero = tuple(tuple(0 for _ in range(na)) for _ in range(na))
    anchor = tri.anchor + tuple(zero for _ in range(nv))
    return LieRinehartTriple(A, big_l, action, anchor)


#### differential forms of a Poisson algebra #################################


def kaehler(P: AlgebraBundle, seed: int = 0) -> LieRinehartTriple:
    """The differential-form triple of a unital Poisson algebra.

    Works in the free module on symbols d(e_i) with coefficients in P
    (dimension dim(P)^2), mods out the span of the product rule
    d(ab) + a d(b) + b d(a) and d(1), closed under multiplication by basis
    elements, and installs the bracket

        [x d(y), z d(w)] = xz d({y,w}) + x{y,z} d(w) + z{w,x} d(y),

    the two-case squaring (even coefficient: x^2 d(s(y)) + x{x,y} d(y);
    odd coefficient: x{x,y} d(y)) and the anchor x d(y) -> x{y,-} on coset
    representatives. Representative independence is verified against every
    spanning relation before the quotient tables are trusted.
    """
    if P.unit is None:
        raise NoUnit("differential forms need a unital algebra")
    verdict = check_poisson(P, seed=seed)
    if not verdict.passed:
        raise NotPoissonInput(
            "input fails: " + ", ".join(sorted({v.law for v in verdict.violations})))
    f = P.space.field
    n = P.space.dim
    N = n * n
    if N > 4096:
        raise SizeBudgetExceeded(f"form space dimension {N} exceeds 4096")
    par = P.space.parities
    unit_sv = P.unit.sparse()
    prod = P.product
    brk = P.bracket

    # coordinate j*n + i carries e_j d(e_i)
    def form(x_sv: SparseVec, y_sv: SparseVec) -> list[int]:
        vec = [0] * N
        for t, cy in y_sv:
            for j, cx in x_sv:
                vec[j * n + t] ^= f.mul(cx, cy)
        return vec

    def xor_into(dst: list[int], src: list[int]) -> None:
        for q in range(N):
            if src[q]:
                dst[q] ^= src[q]

    def d_of(sv: SparseVec) -> list[int]:
        return form(unit_sv, sv)

    gens: list[list[int]] = [d_of(unit_sv)]
    for i in range(n):
        for j in range(i, n):
            vec = d_of(prod.value(i, j))
            vec[i * n + j] ^= 1
            vec[j * n + i] ^= 1
            if any(vec):
                gens.append(vec)

    def lmult(a: int, vec: list[int]) -> list[int]:
        out = [0] * N
        for q in range(N):
            c = vec[q]
            if not c:
                continue
            j, i = divmod(q, n)
            for t, v in prod.value(a, j):
                out[t * n + i] ^= f.mul(c, v)
        return out

    # close the relation span under multiplication, keeping a homogeneous
    # spanning list for the representative-independence checks below
    hom_rows: list[list[int]] = []
    mat_rows: list[list[int]] = []
    rank = 0

    def absorb(vec: list[int]) -> bool:
        nonlocal rank
        if not any(vec):
            return False
        trial = Matrix.from_rows(f, mat_rows + [vec], N)
        if trial.rank() == rank:
            return False
        mat_rows.append(vec)
        hom_rows.append(vec)
        rank += 1
        return True

    for vec in gens:
        absorb(vec)
    frontier = list(hom_rows)
    while frontier:
        fresh = []
        for vec in frontier:
            for a in range(n):
                out = lmult(a, vec)
                if absorb(out):
                    fresh.append(out)
        frontier = fresh

    if mat_rows:
        R, pivots = Matrix.from_rows(f, mat_rows, N).rref()
        rrows = [tuple(R.entry(r, q) for q in range(N)) for r in range(len(pivots))]
    else:
        pivots, rrows = (), []
    pivot_set = set(pivots)
    coset = [q for q in range(N) if q not in pivot_set]
    qindex = {q: m for m, q in enumerate(coset)}

    def reduce(vec: list[int]) -> list[int]:
        v = list(vec)
        for r, p in enumerate(pivots):
            c = v[p]
            if c:
                row = rrows[r]
                for q in range(N):
                    if row[q]:
                        v[q] ^= f.mul(c, row[q])
        return v

    def to_quotient(vec: list[int]) -> SparseVec:
        red = reduce(vec)
        return tuple((qindex[q], red[q]) for q in range(N) if red[q])

    def br_pair(j: int, i: int, l: int, k: int) -> list[int]:
        vec = form(prod.value(j, l), brk.value(i, k))
        xor_into(vec, form(prod.apply_sv(((j, 1),), brk.value(i, l)), ((k, 1),)))
        xor_into(vec, form(prod.apply_sv(((l, 1),), brk.value(k, j)), ((i, 1),)))
        return vec

    def sq_pure(j: int, i: int) -> list[int]:
        vec = form(prod.apply_sv(((j, 1),), brk.value(j, i)), ((i, 1),))
        if par[j] == 0:
            xor_into(vec, form(prod.value(j, j), P.squaring.value(i)))
        return vec

    def anchor_pure(j: int, i: int) -> Mat:
        cols = [prod.apply_sv(((j, 1),), brk.value(i, b)) for b in range(n)]
        return tuple(tuple(sv_lookup(cols[b], a) for b in range(n)) for a in range(n))

    def br_vec_coord(vec: list[int], l: int, k: int) -> list[int]:
        out = [0] * N
        for q in range(N):
            c = vec[q]
            if not c:
                continue
            j, i = divmod(q, n)
            term = br_pair(j, i, l, k)
            for t in range(N):
                if term[t]:
                    out[t] ^= f.mul(c, term[t])
        return out

    # representative independence: every structure must kill the relations
    for vec in hom_rows:
        mat = [[0] * n for _ in range(n)]
        for q in range(N):
            c = vec[q]
            if not c:
                continue
            j, i = divmod(q, n)
            pure = anchor_pure(j, i)
            for a in range(n):
                for b in range(n):
                    if pure[a][b]:
                        mat[a][b] ^= f.mul(c, pure[a][b])
        if any(any(row) for row in mat):
            raise ValidationError("anchor is not constant on cosets")
        for l in range(n):
            for k in range(n):
                if any(reduce(br_vec_coord(vec, l, k))):
                    raise ValidationError("bracket is not constant on cosets")
        support = [q for q in range(N) if vec[q]]
        if support and all((par[q // n] + par[q % n]) & 1 == 1 for q in support):
            sq = [0] * N
            for m, q in enumerate(support):
                c = vec[q]
                term = sq_pure(q // n, q % n)
                for t in range(N):
                    if term[t]:
                        sq[t] ^= f.mul(f.mul(c, c), term[t])
                for q2 in support[m + 1:]:
                    c2 = vec[q2]
                    term = br_vec_coord([0] * q + [c] + [0] * (N - q - 1),
                                        q2 // n, q2 % n)
                    for t in range(N):
                        if term[t]:
                            sq[t] ^= f.mul(c2, term[t])
            if any(reduce(sq)):
                raise ValidationError("squaring is not constant on cosets")

    names = tuple(f"{P.space.names[q // n]}*d({P.space.names[q % n]})" for q in coset)
    parities = tuple((par[q // n] + par[q % n]) & 1 for q in coset)
    sl = SuperSpace(f, names, parities)

    bracket: dict[tuple[int, int], SparseVec] = {}
    for m1 in range(len(coset)):
        j, i = divmod(coset[m1], n)
        for m2 in range(m1 + 1, len(coset)):
            l, k = divmod(coset[m2], n)
            sv = to_quotient(br_pair(j, i, l, k))
            if sv:
                bracket[(m1, m2)] = sv
    squaring: dict[int, SparseVec] = {}
    for m1, q in enumerate(coset):
        if parities[m1] == 1:
            sv = to_quotient(sq_pure(q // n, q % n))
            if sv:
                squaring[m1] = sv

    omega = AlgebraBundle(sl, None, BilinearTable(sl, "bracket", bracket),
                          SquaringTable(sl, squaring),
                          name=f"forms({P.name or '?'})")

    action = tuple(
        tuple(to_quotient(form(prod.value(a, q // n), ((q % n, 1),)))
              for q in coset)
        for a in range(n))
    anchor = tuple(anchor_pure(q // n, q % n) for q in coset)
    differential = tuple(to_quotient(d_of(((i, 1),))) for i in range(n))
    return LieRinehartTriple(P, omega, action, anchor, differential)
