"""Degree-truncated enveloping algebras of anchored triples.

The quotient of the tensor algebra on A + L by the supercommutator ideal,
the odd-square ideal and the absorption ideal (a (x) u = au) is computed
degree by degree: at each degree the carrier is (generator letter) x
(coset representative one degree down), so left multiples of relations
already killed vanish for free and only the generator images themselves
need eliminating. Representatives are the non-pivot monomials under the
graded-lexicographic word order, so every suffix of a representative is
again one.

Because the relation ideal is not homogeneous, elimination at some degree
can cancel all top-degree terms of a combination and leave a relation
between lower-degree cosets. When that happens the whole sweep restarts
with the dropped relation added to the generating set, and the sweep is
run once more with one extra degree of slack; if the reported dimensions
move, the truncation is unstable and the construction refuses to hand
out an algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (AlgebraBundle, BilinearTable, HypothesesFail, Report,
                   SizeBudgetExceeded, SparseVec, SuperSpace,
                   UnstableTruncation, ValidationError, sv_add, sv_from_dict)
from .lie_rinehart import LieRinehartTriple, check_lie_rinehart, kaehler, lr_to_lie

Word = tuple[int, ...]
WordVec = tuple[tuple[Word, int], ...]

#: hard cap on dim(A + L) ** (max_degree + slack)
WORD_BUDGET = 1 << 24


@dataclass(frozen=True)
class TruncatedPresentation:
    """Generators and degree-2 relation spans of a truncated quotient.

    ``commutators`` holds u (x) v + v (x) u + [u, v] rows, ``squares``
    holds c (x) c + s(c) rows for odd letters, ``absorptions`` holds
    a (x) u + au rows for letters a coming from A. Every row has leading
    word length 2 and strictly shorter tail words.
    """

    letters: tuple[str, ...]
    parities: tuple[int, ...]
    cap: int
    slack: int
    commutators: tuple[WordVec, ...]
    squares: tuple[WordVec, ...]
    absorptions: tuple[WordVec, ...]

    def __post_init__(self):
        for family in (self.commutators, self.squares, self.absorptions):
            for row in family:
                lens = [len(w) for w, c in row if c]
                if not lens or max(lens) != 2:
                    raise ValidationError("relation rows must lead in degree 2")

    @property
    def rows(self) -> tuple[WordVec, ...]:
        return self.commutators + self.squares + self.absorptions


class _Drop(Exception):
    """Elimination produced relations purely between lower-degree cosets."""

    def __init__(self, relations: list[WordVec]):
        self.relations = relations


def _finv(f, c: int) -> int:
    out, e, b = 1, f.order - 2, c
    while e:
        if e & 1:
            out = f.mul(out, b)
        b = f.mul(b, b)
        e >>= 1
    return out


def _eliminate_gf2(rows: list[dict[int, int]]) -> dict[int, dict[int, int]]:
    """GF(2) fast path: rows as bitmasks, pivots keyed by lowest set bit."""
    pivots: dict[int, int] = {}
    for row in rows:
        m = 0
        for q, c in row.items():
            if c:
                m |= 1 << q
        while m:
            p = (m & -m).bit_length() - 1
            if p in pivots:
                m ^= pivots[p]
            else:
                pivots[p] = m
                break
    pivot_mask = 0
    for q in pivots:
        pivot_mask |= 1 << q
    masks: dict[int, int] = {}
    for p in sorted(pivots, reverse=True):
        m = pivots[p] & ~(1 << p)
        rem = m & pivot_mask
        while rem:
            b = (rem & -rem).bit_length() - 1
            m ^= (1 << b) | masks[b]
            rem = m & pivot_mask
        masks[p] = m
    out: dict[int, dict[int, int]] = {}
    for p, m in masks.items():
        tail = {}
        while m:
            b = (m & -m).bit_length() - 1
            tail[b] = 1
            m &= m - 1
        out[p] = tail
    return out


def _eliminate_generic(f, rows: list[dict[int, int]]) -> dict[int, dict[int, int]]:
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        row = {q: c for q, c in row.items() if c}
        while row:
            p = min(row)
            if p in pivots:
                c = row.pop(p)
                for q, v in pivots[p].items():
                    w = row.get(q, 0) ^ f.mul(c, v)
                    if w:
                        row[q] = w
                    else:
                        row.pop(q, None)
            else:
                inv = _finv(f, row.pop(p))
                pivots[p] = {q: f.mul(inv, c) for q, c in row.items()}
                break
    for p in sorted(pivots, reverse=True):
        tail = pivots[p]
        while True:
            hit = next((q for q in tail if q in pivots), None)
            if hit is None:
                break
            c = tail.pop(hit)
            for q, v in pivots[hit].items():
                w = tail.get(q, 0) ^ f.mul(c, v)
                if w:
                    tail[q] = w
                else:
                    tail.pop(q, None)
        pivots[p] = tail
    return pivots


def _eliminate(f, rows: list[dict[int, int]]) -> dict[int, dict[int, int]]:
    if f.order == 2:
        return _eliminate_gf2(rows)
    return _eliminate_generic(f, rows)


class _Sweep:
    """One full degree-by-degree pass at a fixed word-length cap."""

    def __init__(self, field, names, parities, gen_rows: tuple[WordVec, ...],
                 cap: int, extras: list[WordVec]):
        self.f = field
        self.names = names
        self.par = parities
        self.n = len(names)
        self.cap = cap
        self.words: list[Word] = []          # representative words, global ids
        self.by_len: dict[int, list[int]] = {}
        self.exp: dict[tuple[int, int], SparseVec] = {}
        self.letter_class: list[SparseVec] = []
        extras_by_len: dict[int, list[WordVec]] = {}
        for rel in extras:
            top = max(len(w) for w, c in rel if c)
            extras_by_len.setdefault(top, []).append(rel)
        self._run(gen_rows, extras_by_len)

    def _new_rep(self, word: Word) -> int:
        rid = len(self.words)
        self.words.append(word)
        self.by_len.setdefault(len(word), []).append(rid)
        return rid

    def _fold(self, word: Word) -> SparseVec:
        """Class of a word all of whose suffix stages are complete."""
        vec = self.letter_class[word[-1]]
        for i in reversed(word[:-1]):
            acc: dict[int, int] = {}
            for b, c in vec:
                for t, v in self.exp[(i, b)]:
                    w = acc.get(t, 0) ^ self.f.mul(c, v)
                    if w:
                        acc[t] = w
                    else:
                        del acc[t]
            vec = sv_from_dict(acc)
        return vec

    def _run(self, gen_rows, extras_by_len):
        f, n = self.f, self.n
        # stage 1: letters, thinned by any dropped degree-1 relations
        rows1 = []
        for rel in extras_by_len.get(1, []):
            rows1.append({w[0]: c for w, c in rel if c})
        pivots = _eliminate(f, rows1)
        letter_rep: dict[int, int] = {}
        for i in range(n):
            if i not in pivots:
                letter_rep[i] = self._new_rep((i,))
        for i in range(n):
            if i in pivots:
                self.letter_class.append(sv_from_dict(
                    {letter_rep[q]: c for q, c in pivots[i].items()}))
            else:
                self.letter_class.append(((letter_rep[i], 1),))

        for d in range(2, self.cap + 1):
            prev = self.by_len.get(d - 1, [])
            carrier_words = sorted(((i,) + self.words[b] for b in prev
                                    for i in range(n)), reverse=True)
            carrier = {}
            pair_of = []
            for cid, w in enumerate(carrier_words):
                suffix_id = next(b for b in prev if self.words[b] == w[1:])
                carrier[(w[0], suffix_id)] = cid
                pair_of.append((w[0], suffix_id))
            C = len(carrier)

            def lmul_row(i: int, vec: SparseVec, acc: dict[int, int],
                         scale: int = 1) -> None:
                for b, c in vec:
                    c = f.mul(scale, c)
                    if len(self.words[b]) == d - 1:
                        q = carrier[(i, b)]
                        w = acc.get(q, 0) ^ c
                        if w:
                            acc[q] = w
                        else:
                            del acc[q]
                    else:
                        for t, v in self.exp[(i, b)]:
                            q = C + t
                            w = acc.get(q, 0) ^ f.mul(c, v)
                            if w:
                                acc[q] = w
                            else:
                                del acc[q]

            rows = []
            bases: list[SparseVec | None]
            if d == 2:
                bases = [None]
            else:
                bases = [((b, 1),) for b in self.by_len.get(d - 2, [])]
            for base in bases:
                for gen in gen_rows:
                    acc: dict[int, int] = {}
                    for word, coeff in gen:
                        if not coeff:
                            continue
                        if base is None:
                            tail = self.letter_class[word[-1]]
                        else:
                            tail = self.exp[(word[-1], base[0][0])]
                        if len(word) == 1:
                            for t, v in tail:
                                q = C + t
                                w = acc.get(q, 0) ^ f.mul(coeff, v)
                                if w:
                                    acc[q] = w
                                else:
                                    del acc[q]
                        else:
                            lmul_row(word[0], tail, acc, coeff)
                    if acc:
                        rows.append(acc)
            for rel in extras_by_len.get(d, []):
                acc = {}
                for word, coeff in rel:
                    if not coeff:
                        continue
                    if len(word) < d:
                        for t, v in self._fold(word):
                            q = C + t
                            w = acc.get(q, 0) ^ f.mul(coeff, v)
                            if w:
                                acc[q] = w
                            else:
                                del acc[q]
                    else:
                        lmul_row(word[0], self._fold(word[1:]), acc, coeff)
                if acc:
                    rows.append(acc)

            pivots = _eliminate(f, rows)
            dropped = []
            for p, tail in pivots.items():
                if p >= C:
                    rel = tuple(sorted(
                        [(self.words[p - C], 1)] +
                        [(self.words[q - C], c) for q, c in tail.items()]))
                    dropped.append(rel)
            if dropped:
                raise _Drop(dropped)

            new_rep: dict[int, int] = {}
            for cid in range(C):
                if cid not in pivots:
                    i, b = pair_of[cid]
                    new_rep[cid] = self._new_rep((i,) + self.words[b])
            for cid in range(C):
                i, b = pair_of[cid]
                if cid in pivots:
                    acc = {}
                    for q, c in pivots[cid].items():
                        t = new_rep[q] if q < C else q - C
                        acc[t] = acc.get(t, 0) ^ c
                    self.exp[(i, b)] = sv_from_dict(acc)
                else:
                    self.exp[(i, b)] = ((new_rep[cid], 1),)


def _presentation(triple: LieRinehartTriple, cap: int, slack: int) -> TruncatedPresentation:
    big = lr_to_lie(triple)
    n = big.dim
    na = triple.A.dim
    commutators = []
    for u in range(n):
        for v in range(u + 1, n):
            row = [((u, v), 1), ((v, u), 1)]
            row += [((t,), c) for t, c in big.bracket.value(u, v)]
            commutators.append(tuple(row))
    squares = []
    for c in big.space.odd_indices:
        row = [((c, c), 1)]
        row += [((t,), v) for t, v in big.squaring.value(c)]
        squares.append(tuple(row))
    absorptions = []
    for a in range(na):
        for u in range(n):
            if u < na:
                prod = triple.A.product.value(a, u)
            else:
                prod = tuple((na + t, v) for t, v in triple.action[a][u - na])
            row = [((a, u), 1)] + [((t,), v) for t, v in prod]
            absorptions.append(tuple(row))
    return TruncatedPresentation(big.space.names, big.space.parities, cap, slack,
                                 tuple(commutators), tuple(squares),
                                 tuple(absorptions))


@dataclass(eq=False)
class TruncatedUEA:
    """Coset basis and degree-bounded products of a truncated quotient.

    ``words[r]`` is the representative word of coset r and ``degrees[r]``
    its reported degree (the class of the unit of A sits in degree 0).
    ``mult`` maps pairs of coset ids to classes whenever the degrees fit
    under ``max_degree``; ``certificate`` records the slack check.
    """

    triple: LieRinehartTriple
    presentation: TruncatedPresentation
    max_degree: int
    words: tuple[Word, ...]
    degrees: tuple[int, ...]
    dims: dict[int, int]
    mult: dict[tuple[int, int], SparseVec]
    certificate: dict
    unit_rep: int | None
    _exp: dict[tuple[int, int], SparseVec] = field(repr=False, default_factory=dict)
    _letter_class: tuple[SparseVec, ...] = field(repr=False, default=())

    @property
    def field(self):
        return self.triple.A.space.field

    def dim_upto(self, d: int) -> int:
        return sum(c for deg, c in self.dims.items() if deg <= d)

    def rep_name(self, r: int) -> str:
        return "*".join(self.presentation.letters[i] for i in self.words[r])

    def fmt(self, vec: SparseVec) -> str:
        if not vec:
            return "0"
        f = self.field
        return " + ".join(
            (f"{f.fmt(c)}*" if c != 1 else "") + self.rep_name(r) for r, c in vec)

    def letter_class(self, i: int) -> SparseVec:
        return self._letter_class[i]

    def class_of_word(self, word: Word) -> SparseVec:
        if not word:
            raise ValidationError("the empty word is not part of the quotient")
        if len(word) > self.presentation.cap:
            raise SizeBudgetExceeded(
                f"word of length {len(word)} exceeds the elimination cap "
                f"{self.presentation.cap}")
        f = self.field
        vec = self._letter_class[word[-1]]
        for i in reversed(word[:-1]):
            acc: dict[int, int] = {}
            for b, c in vec:
                for t, v in self._exp[(i, b)]:
                    w = acc.get(t, 0) ^ f.mul(c, v)
                    if w:
                        acc[t] = w
                    else:
                        del acc[t]
            vec = sv_from_dict(acc)
        return vec

    def multiply(self, u: SparseVec, v: SparseVec) -> SparseVec:
        f = self.field
        acc: dict[int, int] = {}
        for r1, c1 in u:
            for r2, c2 in v:
                if (r1, r2) not in self.mult:
                    raise SizeBudgetExceeded(
                        f"product {self.rep_name(r1)} * {self.rep_name(r2)} "
                        f"exceeds degree {self.max_degree}")
                for t, c in self.mult[(r1, r2)]:
                    w = acc.get(t, 0) ^ f.mul(f.mul(c1, c2), c)
                    if w:
                        acc[t] = w
                    else:
                        del acc[t]
        return sv_from_dict(acc)


def _sweep_with_restarts(field, pres: TruncatedPresentation, cap: int) -> _Sweep:
    extras: list[WordVec] = []
    seen: set[WordVec] = set()
    for _ in range(256):
        try:
            return _Sweep(field, pres.letters, pres.parities, pres.rows, cap, extras)
        except _Drop as drop:
            fresh = [rel for rel in drop.relations if rel not in seen]
            if not fresh:
                raise UnstableTruncation(
                    "elimination keeps rediscovering the same dropped relations")
            extras.extend(fresh)
            seen.update(fresh)
    raise UnstableTruncation("elimination did not settle after 256 restarts")


def _effective_dims(sweep: _Sweep, unit_word: Word | None, upto: int) -> dict[int, int]:
    dims: dict[int, int] = {}
    for word in sweep.words:
        d = 0 if word == unit_word else len(word)
        if d <= upto:
            dims[d] = dims.get(d, 0) + 1
    return dims


def _unit_word(A: AlgebraBundle) -> Word | None:
    sv = A.unit.sparse()
    if len(sv) == 1 and sv[0][1] == 1:
        return (sv[0][0],)
    return None


def truncated_uea(triple: LieRinehartTriple, max_degree: int,
                  slack: int = 2) -> TruncatedUEA:
    """Quotient of words of length <= max_degree + slack, reported to max_degree.

    The returned object exposes coset words, per-degree dimensions and a
    degree-bounded multiplication table. Elimination runs once at the given
    slack and once with one more degree; if the reported dimensions differ
    the truncation is unreliable and UnstableTruncation is raised, otherwise
    the comparison is kept as ``certificate``.
    """
    if max_degree < 1:
        raise ValidationError("max_degree must be at least 1")
    if slack < 1:
        raise ValidationError("slack must be at least 1")
    verdict = check_lie_rinehart(triple)
    if not verdict.passed:
        raise ValidationError(
            "input fails: " + ", ".join(sorted({v.law for v in verdict.violations})))
    n = triple.A.dim + triple.L.dim
    if n ** (max_degree + slack) > WORD_BUDGET:
        raise SizeBudgetExceeded(
            f"{n}^{max_degree + slack} words exceed the budget {WORD_BUDGET}")
    f = triple.A.space.field
    cap = max_degree + slack
    pres = _presentation(triple, cap, slack)
    sweep = _sweep_with_restarts(f, pres, cap)
    probe = _sweep_with_restarts(f, pres, cap + 1)
    unit_word = _unit_word(triple.A)
    dims = _effective_dims(sweep, unit_word, max_degree)
    dims_probe = _effective_dims(probe, unit_word, max_degree)
    if dims != dims_probe:
        raise UnstableTruncation(
            f"coset dimensions moved when the slack grew: {dims} -> {dims_probe}")
    certificate = {"slack": slack, "dims": dict(dims),
                   "dims_next": dict(dims_probe), "stable": True}

    words = tuple(sweep.words)
    degrees = tuple(0 if w == unit_word else len(w) for w in words)
    unit_rep = words.index(unit_word) if unit_word in words else None
    mult: dict[tuple[int, int], SparseVec] = {}
    U = TruncatedUEA(triple, pres, max_degree, words, degrees, dims, mult,
                     certificate, unit_rep, dict(sweep.exp),
                     tuple(sweep.letter_class))
    for r1, w1 in enumerate(words):
        for r2, w2 in enumerate(words):
            if degrees[r1] + degrees[r2] <= max_degree and len(w1) + len(w2) <= cap:
                mult[(r1, r2)] = U.class_of_word(w1 + w2)
    return U


#### the displayed relations #################################################


def check_uea_relations(U: TruncatedUEA, cap_violations: int = 16) -> Report:
    """Absorption and cross-commutation between A-letters and L-letters.

    Verifies a.x = i(a)i(x) and i(x)i(a) = i(a)i(x) + i(anchor_x(a)) for all
    basis pairs, inside the truncated quotient.
    """
    if U.max_degree < 2:
        raise ValidationError("relation checks need max_degree >= 2")
    triple = U.triple
    na, nl = triple.A.dim, triple.L.dim
    rep = Report()
    rep.dimensions["dim_algebra"] = na
    rep.dimensions["dim_module"] = nl
    rep.dimensions["dim_quotient"] = U.dim_upto(U.max_degree)
    names_a = triple.A.space.names
    names_l = triple.L.space.names
    rep.law("absorb-action")
    rep.law("cross-commutator")
    for a in range(na):
        cls_a = U.letter_class(a)
        for x in range(nl):
            cls_x = U.letter_class(na + x)
            img: SparseVec = ()
            for t, c in triple.action[a][x]:
                img = sv_add(img, tuple((r, U.field.mul(c, v))
                                        for r, v in U.letter_class(na + t)))
            prod = U.multiply(cls_a, cls_x)
            if img != prod:
                if not rep.add("absorb-action", (names_a[a], names_l[x]),
                               U.fmt(img), U.fmt(prod)):
                    return rep
            rho_img: SparseVec = ()
            for t in range(na):
                c = triple.anchor[x][t][a]
                if c:
                    rho_img = sv_add(rho_img, tuple((r, U.field.mul(c, v))
                                                    for r, v in U.letter_class(t)))
            lhs = U.multiply(cls_x, cls_a)
            rhs = sv_add(prod, rho_img)
            if lhs != rhs:
                if not rep.add("cross-commutator", (names_a[a], names_l[x]),
                               U.fmt(lhs), U.fmt(rhs)):
                    return rep
    return rep


#### the Poisson variant #####################################################


def poisson_uea(P: AlgebraBundle, max_degree: int, slack: int = 2
                ) -> tuple[TruncatedUEA, tuple[SparseVec, ...], tuple[SparseVec, ...]]:
    """Enveloping algebra of a unital Poisson algebra via its form triple.

    Returns (U, m, h): U is the truncated enveloping algebra of the
    differential-form triple of P, m sends each basis vector of P to the
    class of its A-letter, and h is the composite of the universal
    differential with the L-letter classes. The morphism and compatibility
    laws relating m and h are verified before the triple is handed out.
    """
    triple = kaehler(P)
    U = truncated_uea(triple, max_degree, slack)
    na = P.dim
    m = tuple(U.letter_class(i) for i in range(na))
    h = []
    for i in range(na):
        acc: SparseVec = ()
        for t, c in triple.differential[i]:
            acc = sv_add(acc, tuple((r, U.field.mul(c, v))
                                    for r, v in U.letter_class(na + t)))
        h.append(acc)
    h = tuple(h)
    verdict = check_uea_poisson_maps(U, m, h)
    if not verdict.passed:
        raise ValidationError(
            "enveloping maps fail: "
            + ", ".join(sorted({v.law for v in verdict.violations})))
    return U, m, h


def check_uea_poisson_maps(U: TruncatedUEA, m: tuple[SparseVec, ...],
                           h: tuple[SparseVec, ...]) -> Report:
    """Morphism laws for m and h plus their four compatibility identities.

    m must be an associative morphism, h a Lie morphism into the quotient
    with commutator and operator square, and the mixed identities couple
    them; the two identities restricted to odd/even pairs need degree-3
    products and are skipped below max_degree 3.
    """
    P = U.triple.A
    f = U.field
    n = P.dim
    names = P.space.names
    par = P.space.parities
    rep = Report()
    mul = U.multiply

    def scaled(vec: SparseVec, c: int) -> SparseVec:
        return tuple((r, f.mul(c, v)) for r, v in vec)

    def image(maps, sv: SparseVec) -> SparseVec:
        out: SparseVec = ()
        for t, c in sv:
            out = sv_add(out, scaled(maps[t], c))
        return out

    def record(law: str, witness: tuple[str, ...], lhs: SparseVec,
               rhs: SparseVec) -> bool:
        if lhs == rhs:
            return True
        return rep.add(law, witness, U.fmt(lhs), U.fmt(rhs))

    rep.law("maps-even")
    for i in range(n):
        for vec, tag in ((m[i], "m"), (h[i], "h")):
            off = {r for r, _ in vec
                   if sum(U.presentation.parities[t] for t in U.words[r]) & 1 != par[i]}
            if off:
                if not rep.add("maps-even", (tag, names[i]), U.fmt(vec),
                               f"parity {par[i]} part"):
                    return rep
    rep.law("m-product")
    rep.law("uea-action")
    for i in range(n):
        for j in range(i, n):
            prod = P.product.value(i, j)
            if not record("m-product", (names[i], names[j]),
                          image(m, prod), mul(m[i], m[j])):
                return rep
            if not record("uea-action", (names[i], names[j]), image(h, prod),
                          sv_add(mul(m[i], h[j]), mul(m[j], h[i]))):
                return rep
    rep.law("h-bracket")
    rep.law("uea-commutator")
    for i in range(n):
        for j in range(n):
            br = P.bracket.value(i, j)
            if i < j:
                if not record("h-bracket", (names[i], names[j]), image(h, br),
                              sv_add(mul(h[i], h[j]), mul(h[j], h[i]))):
                    return rep
            if not record("uea-commutator", (names[i], names[j]), image(m, br),
                          sv_add(mul(m[i], h[j]), mul(h[j], m[i]))):
                return rep
    rep.law("h-squaring")
    for i in P.space.odd_indices:
        if not record("h-squaring", (names[i],),
                      image(h, P.squaring.value(i)), mul(h[i], h[i])):
            return rep
    if U.max_degree >= 3:
        rep.law("uea-odd-compat")
        rep.law("uea-square-compat")
        for x in P.space.odd_indices:
            for y in P.space.even_indices:
                if not record("uea-odd-compat", (names[x], names[y]),
                              mul(m[y], mul(h[x], m[x])),
                              mul(m[x], mul(m[y], h[x]))):
                    return rep
                rhs = sv_add(mul(m[y], mul(h[x], m[y])),
                             sv_add(mul(m[x], mul(m[y], h[y])),
                                    mul(h[y], mul(m[x], m[y]))))
                if not record("uea-square-compat", (names[x], names[y]),
                              mul(m[y], mul(m[y], h[x])), rhs):
                    return rep
    return rep


#### factoring through a target ##############################################


def uea_bundle(U: TruncatedUEA) -> AlgebraBundle:
    """The truncated quotient as an honest product bundle.

    Only possible when every pairwise product of representatives stays
    under the degree bound, i.e. when the quotient is nilpotent enough.
    """
    nr = len(U.words)
    for r1 in range(nr):
        for r2 in range(nr):
            if (r1, r2) not in U.mult:
                raise ValidationError(
                    f"product {U.rep_name(r1)} * {U.rep_name(r2)} leaves the "
                    f"truncation; the quotient has no total product table")
    names = tuple(U.rep_name(r) for r in range(nr))
    parities = tuple(sum(U.presentation.parities[i] for i in w) & 1
                     for w in U.words)
    space = SuperSpace(U.field, names, parities)
    table = BilinearTable(space, "product",
                          {(r1, r2): v for (r1, r2), v in U.mult.items()},
                          symmetric=False)
    unit = space.element({names[U.unit_rep]: 1}) if U.unit_rep is not None else None
    return AlgebraBundle(space, table, None, None, unit,
                         name=f"uea({U.triple.A.name or '?'})")


def check_factorization(U: TruncatedUEA, target: AlgebraBundle,
                        m_images: tuple[SparseVec, ...],
                        h_images: tuple[SparseVec, ...]) -> Report:
    """Finite instance of the universal property against a concrete target.

    The images must satisfy the same relations the quotient was carved by:
    m a product morphism, h a Lie morphism for commutator and square, the
    action absorbed and the anchor measuring the commutation defect. Any
    violation raises HypothesesFail. When they hold, the induced assignment
    word -> product of images is checked to kill every relation row times
    every representative (up to the reported degree) and to agree with the
    stored elimination classes.
    """
    triple = U.triple
    target.require("product")
    f = U.field
    if target.space.field != f:
        raise ValidationError("target lives over a different field")
    na, nl = triple.A.dim, triple.L.dim
    if len(m_images) != na or len(h_images) != nl:
        raise ValidationError("need one image per basis vector of A and of L")
    imgs = [tuple(sorted((t, f.validate_scalar(c)) for t, c in sv if c))
            for sv in tuple(m_images) + tuple(h_images)]
    big = lr_to_lie(triple)
    n = big.dim
    tpar = target.space.parities
    for i in range(n):
        for t, _ in imgs[i]:
            if tpar[t] != big.space.parities[i]:
                raise HypothesesFail(
                    f"image of {big.space.names[i]} is not parity-homogeneous")

    def tmul(u: SparseVec, v: SparseVec) -> SparseVec:
        return target.product.apply_sv(u, v)

    def img_of(sv: SparseVec, offset: int = 0) -> SparseVec:
        out: SparseVec = ()
        for t, c in sv:
            out = sv_add(out, tuple((r, f.mul(c, v)) for r, v in imgs[offset + t]))
        return out

    bad = []
    for u in range(n):
        for v in range(u + 1, n):
            comm = sv_add(tmul(imgs[u], imgs[v]), tmul(imgs[v], imgs[u]))
            if comm != img_of(big.bracket.value(u, v)):
                bad.append(f"commutator at ({big.space.names[u]}, {big.space.names[v]})")
    for c in big.space.odd_indices:
        if tmul(imgs[c], imgs[c]) != img_of(big.squaring.value(c)):
            bad.append(f"square at {big.space.names[c]}")
    for a in range(na):
        for u in range(n):
            if u < na:
                prod = triple.A.product.value(a, u)
            else:
                prod = tuple((na + t, v) for t, v in triple.action[a][u - na])
            if tmul(imgs[a], imgs[u]) != img_of(prod):
                bad.append(f"absorption at ({big.space.names[a]}, {big.space.names[u]})")
    if bad:
        raise HypothesesFail("; ".join(bad[:8]))

    def f_word(word: Word) -> SparseVec:
        out = imgs[word[-1]]
        for i in reversed(word[:-1]):
            out = tmul(imgs[i], out)
        return out

    def f_class(vec: SparseVec) -> SparseVec:
        out: SparseVec = ()
        for r, c in vec:
            out = sv_add(out, tuple((t, f.mul(c, v)) for t, v in f_word(U.words[r])))
        return out

    def tfmt(vec: SparseVec) -> str:
        if not vec:
            return "0"
        return " + ".join(
            (f"{f.fmt(c)}*" if c != 1 else "") + target.space.names[t]
            for t, c in vec)

    rep = Report()
    rep.dimensions["dim_target"] = target.dim
    rep.dimensions["dim_quotient"] = U.dim_upto(U.max_degree)
    rep.law("factor-kills-relations")
    reps_small = [r for r in range(len(U.words))
                  if len(U.words[r]) <= U.max_degree - 2]
    for gen in U.presentation.rows:
        head = "*".join(U.presentation.letters[i] for i in gen[0][0])
        for r in [None] + reps_small:
            out: SparseVec = ()
            for word, coeff in gen:
                full = word if r is None else word + U.words[r]
                out = sv_add(out, tuple((t, f.mul(coeff, v))
                                        for t, v in f_word(full)))
            if out:
                wit = (head, U.rep_name(r) if r is not None else "1")
                if not rep.add("factor-kills-relations", wit, "0", tfmt(out)):
                    return rep
    rep.law("factor-respects-elimination")
    for (i, b), vec in U._exp.items():
        if 1 + len(U.words[b]) > U.max_degree:
            continue
        lhs = tmul(imgs[i], f_word(U.words[b]))
        rhs = f_class(vec)
        if lhs != rhs:
            if not rep.add("factor-respects-elimination",
                           (U.presentation.letters[i], U.rep_name(b)),
                           tfmt(lhs), tfmt(rhs)):
                return rep
    return rep
