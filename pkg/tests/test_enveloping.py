"""Truncated enveloping algebras: quotient dims, relation laws, factorization."""

import math
import random
from itertools import product as iproduct

import pytest

from poisson2.checks import check_associative_supercommutative
from poisson2.core import (AlgebraBundle, BilinearTable, HypothesesFail,
                           SizeBudgetExceeded, SquaringTable, SuperSpace,
                           ValidationError, bundle_from_strings, squaring_sv,
                           sv_add)
from poisson2.divided_powers import build_pi_pi
from poisson2.enveloping import (TruncatedPresentation, check_factorization,
                                 check_uea_poisson_maps, check_uea_relations,
                                 poisson_uea, truncated_uea, uea_bundle)
from poisson2.examples import example_1_1, example_2_2, matrix_superalgebra
from poisson2.field import GF2
from poisson2.lie_rinehart import (LieRinehartTriple, check_lie_rinehart,
                                   der_triple, kaehler, lr_to_lie)

#### oracle ##################################################################
#
# The blunt quotient: enumerate every word over the combined alphabet up to
# the slackened cap, throw in every padded relation row p*g*q, eliminate,
# and count the surviving words per length. Works over GF(2) with bitmask
# rows, so it is only usable for small alphabets, which is exactly where an
# independent recount matters.


def blunt_dims(T, max_degree, slack):
    A, L = T.A, T.L
    na, nl = A.dim, L.dim
    n = na + nl
    cap = max_degree + slack
    par = A.space.parities + L.space.parities

    def anchor_term(x, a):
        mat = T.anchor[x]
        return [((aa,), mat[aa][a]) for aa in range(na) if mat[aa][a]]

    gens = []
    for u in range(n):
        for v in range(u + 1, n):
            if v < na:
                tail = []
            elif u < na:
                tail = anchor_term(v - na, u)
            else:
                tail = [((na + t,), c)
                        for t, c in L.bracket.value(u - na, v - na)]
            gens.append([((u, v), 1), ((v, u), 1)] + tail)
    for c in range(n):
        if par[c]:
            sq = []
            if c >= na and L.squaring is not None:
                sq = [((na + t, ), v) for t, v in L.squaring.value(c - na)]
            gens.append([((c, c), 1)] + sq)
    for a in range(na):
        for u in range(n):
            if u < na:
                tail = [((t,), v) for t, v in A.product.value(a, u)]
            else:
                tail = [((na + t,), v) for t, v in T.action[a][u - na]]
            gens.append([((a, u), 1)] + tail)

    words = []
    for length in range(1, cap + 1):
        words.extend(iproduct(range(n), repeat=length))
    wid = {w: i for i, w in enumerate(words)}

    rows = []
    for g in gens:
        for lp in range(cap - 1):
            for rp in range(cap - 1 - lp):
                for p in iproduct(range(n), repeat=lp):
                    for q in iproduct(range(n), repeat=rp):
                        row = 0
                        for w, cf in g:
                            if cf:
                                row ^= 1 << wid[p + w + q]
                        if row:
                            rows.append(row)

    basis = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    pivots = {b.bit_length() - 1 for b in basis}

    unit_word = None
    sv = A.unit.sparse()
    if len(sv) == 1 and sv[0][1] == 1:
        unit_word = (sv[0][0],)

    dims = {}
    for i, w in enumerate(words):
        if i in pivots or len(w) > max_degree:
            continue
        d = 0 if w == unit_word else len(w)
        dims[d] = dims.get(d, 0) + 1
    return dims


def unit_line():
    return bundle_from_strings(GF2, [("u", 0)],
                               product={("u", "u"): {"u": 1}},
                               bracket={}, unit="u")


def abelian_even_triple(n):
    """n commuting even generators acting trivially over the unit line."""
    A = unit_line()
    sp = SuperSpace(GF2, tuple(f"x{i}" for i in range(n)), (0,) * n)
    L = AlgebraBundle(sp, None, BilinearTable(sp, "bracket", {}), None)
    action = (tuple(((x, 1),) for x in range(n)),)
    return LieRinehartTriple(A, L, action, tuple((((0,),)) for _ in range(n)))


def one_odd_triple(square_to_even):
    A = unit_line()
    if square_to_even:
        sp = SuperSpace(GF2, ("x", "y"), (1, 0))
        L = AlgebraBundle(sp, None, BilinearTable(sp, "bracket", {}),
                          SquaringTable(sp, {0: ((1, 1),)}))
        action = (tuple(((v, 1),) for v in range(2)),)
        return LieRinehartTriple(A, L, action, (((0,),), ((0,),)))
    sp = SuperSpace(GF2, ("x",), (1,))
    L = AlgebraBundle(sp, None, BilinearTable(sp, "bracket", {}),
                      SquaringTable(sp, {}))
    return LieRinehartTriple(A, L, ((((0, 1),),),), (((0,),),))


#### quotient dimensions #####################################################


@pytest.mark.parametrize("n", [1, 2, 3])
def test_abelian_even_generators_give_symmetric_algebra_dims(n):
    U = truncated_uea(abelian_even_triple(n), 4, 2)
    for d in range(5):
        assert U.dims.get(d, 0) == math.comb(n + d - 1, d)


@pytest.mark.parametrize("make,deg", [
    (lambda: abelian_even_triple(2), 3),
    (lambda: one_odd_triple(False), 3),
    (lambda: one_odd_triple(True), 3),
    (lambda: der_triple(example_1_1()), 3),
    (lambda: kaehler(example_1_1()), 3),
])
def test_quotient_dims_match_blunt_padded_elimination(make, deg):
    T = make()
    U = truncated_uea(T, deg, 2)
    assert dict(U.dims) == blunt_dims(T, deg, 2)


@pytest.mark.parametrize("make", [
    lambda: kaehler(example_2_2()),
    lambda: kaehler(build_pi_pi(odd_pairs=1)),
])
def test_wide_alphabet_dims_match_blunt_oracle_at_low_degree(make):
    T = make()
    U = truncated_uea(T, 2, 1)
    assert dict(U.dims) == blunt_dims(T, 2, 1)


def test_single_odd_generator_with_zero_square_truncates():
    U = truncated_uea(one_odd_triple(False), 3, 2)
    assert dict(U.dims) == {0: 1, 1: 1}
    x = U.letter_class(1)
    assert U.multiply(x, x) == ()


def test_single_odd_generator_squaring_to_an_even_one():
    U = truncated_uea(one_odd_triple(True), 3, 2)
    assert dict(U.dims) == {0: 1, 1: 2, 2: 2, 3: 2}
    # no representative word repeats the odd letter
    assert all(w.count(1) <= 1 for w in U.words)
    x, y = U.letter_class(1), U.letter_class(2)
    assert U.multiply(x, x) == y


def test_unit_word_is_reported_at_degree_zero():
    U = truncated_uea(abelian_even_triple(2), 3, 2)
    assert U.unit_rep is not None
    assert U.degrees[U.unit_rep] == 0
    assert U.rep_name(U.unit_rep) == "u"


def test_function_algebra_with_no_vector_fields_collapses():
    A = bundle_from_strings(GF2, [("u", 0), ("t", 0)],
                            product={("u", "u"): {"u": 1},
                                     ("u", "t"): {"t": 1},
                                     ("t", "t"): {}},
                            unit="u")
    sp0 = SuperSpace(GF2, (), ())
    L0 = AlgebraBundle(sp0, None, BilinearTable(sp0, "bracket", {}), None)
    U = truncated_uea(LieRinehartTriple(A, L0, ((), ()), ()), 3, 2)
    assert dict(U.dims) == {0: 1, 1: 1}
    assert U.dim_upto(1) == A.dim


#### embedding identities ####################################################


def cls_of(U, sv, shift=0):
    out = ()
    for i, c in sv:
        out = sv_add(out, tuple((t, U.field.mul(c, v))
                                for t, v in U.letter_class(shift + i)))
    return out


@pytest.mark.parametrize("make", [example_1_1, example_2_2])
def test_squares_of_odd_elements_polarize(make):
    T = kaehler(make())
    big = lr_to_lie(T)
    U = truncated_uea(T, 3, 2)
    rng = random.Random(7)
    odd = list(big.space.odd_indices)
    for _ in range(40):
        c = tuple((i, 1) for i in odd if rng.random() < 0.5)
        v = cls_of(U, c)
        assert U.multiply(v, v) == cls_of(U, squaring_sv(big, c))


@pytest.mark.parametrize("make", [example_1_1, example_2_2])
def test_supercommutators_of_letters_match_the_bracket(make):
    T = kaehler(make())
    big = lr_to_lie(T)
    U = truncated_uea(T, 3, 2)
    for u in range(big.dim):
        for v in range(big.dim):
            lhs = sv_add(U.multiply(U.letter_class(u), U.letter_class(v)),
                         U.multiply(U.letter_class(v), U.letter_class(u)))
            assert lhs == cls_of(U, big.bracket.value(u, v))


@pytest.mark.parametrize("make", [
    lambda: der_triple(example_1_1()),
    lambda: kaehler(example_1_1()),
    lambda: kaehler(example_2_2()),
])
def test_relation_report_passes_on_library_triples(make):
    out = check_uea_relations(truncated_uea(make(), 3, 2))
    assert out.passed, out.violations
    assert out.dimensions["dim_quotient"] > 0


def test_relation_report_needs_two_degrees():
    U = truncated_uea(kaehler(example_1_1()), 1, 1)
    with pytest.raises(ValidationError):
        check_uea_relations(U)


#### the quotient of a square-free function algebra collapses entirely ######
#
# For the smallest library algebra every product of positive-degree classes
# falls back to degree <= 1, and the sweep only learns this from relations
# it trips over one degree higher. The resulting table is a four-dimensional
# honest algebra.


def test_smallest_example_gives_a_four_dimensional_quotient():
    U, m, h = poisson_uea(example_1_1(), 3, 2)
    assert dict(U.dims) == {0: 1, 1: 3}
    B = uea_bundle(U)
    assert B.space.names == ("e", "f", "e*d(f)", "f*d(f)")
    assert check_associative_supercommutative(B).passed
    ix = {nm: r for r, nm in enumerate(B.space.names)}
    cls = lambda nm: ((ix[nm], 1),)
    assert U.multiply(cls("f"), cls("e*d(f)")) == cls("f*d(f)")
    assert U.multiply(cls("e*d(f)"), cls("f")) == cls("f*d(f)")
    assert U.multiply(cls("f*d(f)"), cls("f*d(f)")) == ()
    assert U.multiply(cls("e*d(f)"), cls("f*d(f)")) == ()


def test_bundle_export_refuses_a_quotient_with_missing_products():
    U = truncated_uea(kaehler(example_2_2()), 3, 2)
    with pytest.raises(ValidationError):
        uea_bundle(U)


#### the poisson enveloping pair #############################################


def test_poisson_maps_pass_on_both_library_examples():
    for make, want in ((example_1_1, {0: 1, 1: 3}),
                       (example_2_2, {0: 1, 1: 11, 2: 4})):
        U, m, h = poisson_uea(make(), 3, 2)
        assert dict(U.dims) == want
        out = check_uea_poisson_maps(U, m, h)
        assert out.passed, out.violations
        assert {"uea-action", "uea-commutator", "uea-odd-compat",
                "uea-square-compat"} <= set(out.laws)


def test_poisson_maps_pass_on_a_nonzero_bracket_algebra():
    U, m, h = poisson_uea(build_pi_pi(odd_pairs=1), 3, 2)
    assert check_uea_relations(U).passed
    assert check_uea_poisson_maps(U, m, h).passed


def test_derivative_map_images():
    P = example_1_1()
    U, m, h = poisson_uea(P, 3, 2)
    assert h[P.space.index("e")] == ()
    omega = U.triple.L.space.index("e*d(f)")
    assert h[P.space.index("f")] == U.letter_class(P.dim + omega)


def test_unit_line_has_a_one_dimensional_quotient():
    U, m, h = poisson_uea(unit_line(), 3, 2)
    assert dict(U.dims) == {0: 1}
    assert h == ((),)
    assert check_uea_poisson_maps(U, m, h).passed


#### stability certificates ##################################################


def test_certificate_records_the_probe():
    U = truncated_uea(kaehler(example_2_2()), 2, 1)
    cert = U.certificate
    assert cert["stable"] is True
    assert cert["slack"] == 1
    assert cert["dims"] == cert["dims_next"]
    assert cert["dims"] == {d: k for d, k in U.dims.items()}


#### factorization ###########################################################


def letter_images(U):
    na, nl = U.triple.A.dim, U.triple.L.dim
    return (tuple(U.letter_class(i) for i in range(na)),
            tuple(U.letter_class(na + x) for x in range(nl)))


def test_identity_factorization_through_the_exported_bundle():
    U, _, _ = poisson_uea(example_1_1(), 3, 2)
    B = uea_bundle(U)
    m_im, h_im = letter_images(U)
    out = check_factorization(U, B, m_im, h_im)
    assert out.passed, out.violations
    assert out.dimensions == {"dim_target": 4, "dim_quotient": 4}


def test_augmentation_factorization_onto_the_unit_line():
    U = truncated_uea(one_odd_triple(False), 3, 2)
    K = unit_line()
    out = check_factorization(U, K, (((0, 1),),), ((),))
    assert out.passed, out.violations


def test_factorization_through_a_matrix_target():
    U = truncated_uea(one_odd_triple(False), 3, 2)
    M = matrix_superalgebra(GF2, 1, 1)
    ix = {nm: i for i, nm in enumerate(M.space.names)}
    ident = tuple(sorted(((ix["E11"], 1), (ix["E22"], 1))))
    out = check_factorization(U, M, (ident,), (((ix["E12"], 1),),))
    assert out.passed, out.violations


def test_factorization_rejects_an_image_with_the_wrong_square():
    U = truncated_uea(one_odd_triple(False), 3, 2)
    M = matrix_superalgebra(GF2, 1, 1)
    ix = {nm: i for i, nm in enumerate(M.space.names)}
    ident = tuple(sorted(((ix["E11"], 1), (ix["E22"], 1))))
    off = tuple(sorted(((ix["E12"], 1), (ix["E21"], 1))))
    with pytest.raises(HypothesesFail, match="square at x"):
        check_factorization(U, M, (ident,), (off,))


def test_factorization_rejects_parity_mixing_images():
    # the derivative map of the poisson pair is indexed by the base algebra,
    # not by the form module; feeding it here must trip the parity guard
    U, m, h = poisson_uea(example_1_1(), 3, 2)
    B = uea_bundle(U)
    with pytest.raises(HypothesesFail, match="parity"):
        check_factorization(U, B, m, h)


def test_factorization_rejects_an_image_that_breaks_absorption():
    A = bundle_from_strings(GF2, [("u", 0), ("t", 0)],
                            product={("u", "u"): {"u": 1},
                                     ("u", "t"): {"t": 1},
                                     ("t", "t"): {}},
                            unit="u")
    sp0 = SuperSpace(GF2, (), ())
    L0 = AlgebraBundle(sp0, None, BilinearTable(sp0, "bracket", {}), None)
    U = truncated_uea(LieRinehartTriple(A, L0, ((), ()), ()), 3, 2)
    K = unit_line()
    one = ((0, 1),)
    # sending t to the unit forgets that t squares to zero
    with pytest.raises(HypothesesFail, match="absorption"):
        check_factorization(U, K, (one, one), ())
    # the zero assignment satisfies every carving relation: it factors as a
    # perfectly fine non-unital morphism, so no hypothesis may reject it
    assert check_factorization(U, K, (one, ()), ()).passed


#### guard rails #############################################################


def test_rejects_a_triple_that_fails_the_law_suite():
    A = bundle_from_strings(GF2, [("u", 0), ("t", 0)],
                            product={("u", "u"): {"u": 1},
                                     ("u", "t"): {"t": 1},
                                     ("t", "t"): {}},
                            unit="u")
    sp = SuperSpace(GF2, ("x",), (0,))
    L = AlgebraBundle(sp, None, BilinearTable(sp, "bracket", {}), None)
    bad = LieRinehartTriple(A, L, ((((0, 1),),), ((),)), (((0, 1), (0, 0)),))
    assert not check_lie_rinehart(bad).passed
    with pytest.raises(ValidationError, match="action-leibniz"):
        truncated_uea(bad, 3, 2)


def test_word_budget_guard():
    with pytest.raises(SizeBudgetExceeded):
        truncated_uea(abelian_even_triple(2), 60, 30)


@pytest.mark.parametrize("deg,slack", [(0, 2), (3, 0)])
def test_degree_and_slack_must_be_positive(deg, slack):
    with pytest.raises(ValidationError):
        truncated_uea(abelian_even_triple(1), deg, slack)


def test_products_that_escape_the_cap_are_refused():
    U = truncated_uea(kaehler(example_2_2()), 3, 2)
    deep = [r for r in range(len(U.words)) if U.degrees[r] == 2]
    with pytest.raises(SizeBudgetExceeded):
        U.multiply(((deep[0], 1),), ((deep[0], 1),))


def test_class_of_word_guards():
    U = truncated_uea(kaehler(example_1_1()), 3, 2)
    with pytest.raises(ValidationError):
        U.class_of_word(())
    with pytest.raises(SizeBudgetExceeded):
        U.class_of_word((1,) * 9)
    f = U.triple.A.space.index("f")
    om = U.triple.A.dim + U.triple.L.space.index("e*d(f)")
    tau = U.triple.A.dim + U.triple.L.space.index("f*d(f)")
    assert U.class_of_word((f, om)) == U.letter_class(tau)


def test_presentation_rows_must_lead_in_degree_two():
    with pytest.raises(ValidationError):
        TruncatedPresentation(("a",), (0,), 3, 2,
                              commutators=((((0, 0, 0), 1),),),
                              squares=(), absorptions=())
