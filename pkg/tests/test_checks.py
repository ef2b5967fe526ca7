"""Law checkers, derivation solvers, twists, ideals, quotients."""

from __future__ import annotations

import pytest

from poisson2.checks import (assoc_to_lie, build_squaring_from_basis,
                             center, check_associative_supercommutative,
                             check_derivation, check_ideal, check_lie,
                             check_morphism, check_poisson, derivation_space,
                             quotient, twist_squaring)
from poisson2.core import (AdSquareMismatch, Element, NotAnIdeal,
                           NotAssociative, SizeBudgetExceeded,
                           ValidationError, bundle_from_strings)
from poisson2.examples import example_1_1, example_2_2, matrix_superalgebra
from poisson2.field import GF2, field_new


#### the stock examples are Poisson ##########################################


@pytest.mark.parametrize("mk", [example_1_1, example_2_2])
def test_stock_examples_pass_poisson(mk):
    rep = check_poisson(mk())
    assert rep.passed, rep.to_dict()
    assert rep.violations == []
    for law in ("supercommutativity", "associativity", "leibniz",
                "jacobi", "jacobi-squaring", "product-squaring"):
        assert law in rep.laws


def test_stock_examples_pass_poisson_over_gf4():
    rep = check_poisson(example_2_2(field=field_new(2)), samples=12)
    assert rep.passed


def test_dimensions_reported():
    rep = check_poisson(example_2_2())
    assert rep.dimensions["dim"] == 4
    assert rep.dimensions["dim_even"] == 2
    assert rep.dimensions["dim_odd"] == 2


#### associative checks and the commutator functor ##########################


def test_matrix_superalgebra_fails_only_supercommutativity():
    m = matrix_superalgebra(GF2, 1, 1)
    rep = check_associative_supercommutative(m)
    assert not rep.passed
    assert {v.law for v in rep.violations} == {"supercommutativity"}


def test_unit_law_detects_missing_unit():
    b = bundle_from_strings(
        GF2, [("u", 0)],
        product={("u", "u"): {}},   # u*u = 0, so u is no unit
        unit="u")
    rep = check_associative_supercommutative(b)
    assert not rep.passed
    assert any(v.law == "unit" for v in rep.violations)


def test_commutator_lie_of_matrices_passes():
    for shape in [(1, 1), (2, 1)]:
        gl = assoc_to_lie(matrix_superalgebra(GF2, *shape))
        rep = check_lie(gl)
        assert rep.passed, rep.to_dict()


def test_commutator_lie_squaring_is_the_associative_square():
    b = example_1_1()
    lie = assoc_to_lie(b)
    # f*f = 0 in the supercommutative product, so the derived squaring is 0
    assert lie.squaring.value(1) == ()


def test_assoc_to_lie_rejects_nonassociative_input():
    b = bundle_from_strings(
        GF2, [("a", 0), ("b", 0)],
        product={("a", "a"): {"b": 1}, ("a", "b"): {"a": 1}, ("b", "b"): {}})
    # (aa)b = ab = a but a(ab) = a a = b
    with pytest.raises(NotAssociative):
        assoc_to_lie(b)


def test_flat_path_agrees_on_large_algebra():
    # dim 64 routes the law checks through the sparse tensor path
    m = matrix_superalgebra(GF2, 4, 4)
    assert m.dim == 64
    rep = check_associative_supercommutative(m)
    assert {v.law for v in rep.violations} == {"supercommutativity"}
    gl = assoc_to_lie(m)
    rep2 = check_lie(gl)
    assert rep2.passed, rep2.to_dict()


def test_check_lie_flags_broken_jacobi():
    b = bundle_from_strings(
        GF2, [("a", 0), ("b", 0), ("c", 0)],
        bracket={("a", "b"): {"a": 1}, ("a", "c"): {"b": 1}, ("b", "c"): {}})
    rep = check_lie(b)
    assert not rep.passed
    assert any(v.law == "jacobi" for v in rep.violations)


def test_check_lie_flags_broken_squaring_compat():
    b = bundle_from_strings(
        GF2, [("e", 0), ("f", 1)],
        bracket={("e", "f"): {"f": 1}},
        squaring={"f": {"e": 1}})
    rep = check_lie(b)
    assert not rep.passed
    assert {v.law for v in rep.violations} == {"jacobi-squaring"}


def test_leibniz_violation_detected():
    # product and bracket both fine alone, but not compatible
    b = bundle_from_strings(
        GF2, [("a", 0), ("b", 0), ("c", 0)],
        product={("a", "a"): {"a": 1}, ("a", "b"): {"b": 1}, ("a", "c"): {"c": 1},
                 ("b", "b"): {}, ("b", "c"): {}, ("c", "c"): {}},
        bracket={("a", "b"): {"c": 1}, ("a", "c"): {}, ("b", "c"): {}},
        unit="a")
    rep = check_poisson(b)
    assert not rep.passed
    assert any(v.law == "leibniz" for v in rep.violations)


#### derivations #############################################################


def test_derivation_space_of_the_small_example():
    b = example_1_1()
    ds = derivation_space(b, "associative")
    assert ds["even"] == [((0, 0), (0, 1))]     # f -> f
    assert ds["odd"] == [((0, 1), (0, 0))]      # f -> e
    # both survive the Poisson constraints here
    assert derivation_space(b, "poisson") == ds


def test_found_derivations_check_out():
    b = example_1_1()
    ds = derivation_space(b, "poisson")
    for par in ("even", "odd"):
        for mat in ds[par]:
            rep = check_derivation(b, mat, structure="poisson")
            assert rep.passed, (par, mat, rep.to_dict())


def test_non_derivation_is_flagged():
    b = example_1_1()
    bad = ((0, 0), (1, 0))   # e -> f: breaks d(e) = d(e*e) = 0, and parity
    rep = check_derivation(b, bad, structure="associative")
    assert not rep.passed
    assert any(v.law == "product-leibniz" for v in rep.violations)


def test_derivation_space_budget():
    big = matrix_superalgebra(GF2, 9, 0)
    with pytest.raises(SizeBudgetExceeded):
        derivation_space(big, "associative")


def test_derivation_matrix_shape_checked():
    with pytest.raises(ValidationError):
        check_derivation(example_1_1(), ((0,),), structure="lie")


#### center, twists, squaring reconstruction #################################


def test_center_of_commutator_gl11():
    gl = assoc_to_lie(matrix_superalgebra(GF2, 1, 1))
    z = center(gl)
    assert len(z) == 1
    assert str(z[0]) == "E11 + E22"


def test_center_of_abelian_bracket_is_everything():
    assert len(center(example_2_2())) == 4


def test_twist_squaring_adds_central_value():
    b = example_1_1()
    sp = b.space
    twisted = twist_squaring(b, {"f": sp.basis(0)})
    # old s(f) = e, twist adds e, lands at zero
    assert twisted.squaring.value(1) == ()
    assert check_poisson(twisted).passed


def test_twist_rejects_bad_values():
    b = example_1_1()
    sp = b.space
    with pytest.raises(ValidationError):
        twist_squaring(b, {"e": sp.basis(0)})       # even key
    with pytest.raises(ValidationError):
        twist_squaring(b, {"f": sp.basis(1)})       # odd value
    gl = assoc_to_lie(matrix_superalgebra(GF2, 1, 1))
    e11 = gl.space.basis(gl.space.index("E11"))
    with pytest.raises(ValidationError):
        twist_squaring(gl, {"E12": e11})            # not central


def test_build_squaring_from_basis_round_trip():
    b = example_1_1()
    rebuilt = build_squaring_from_basis(b, {"f": b.space.basis(0)})
    assert rebuilt.squaring.value(1) == ((0, 1),)
    assert check_lie(rebuilt).passed


def test_build_squaring_detects_ad_mismatch():
    gl = assoc_to_lie(matrix_superalgebra(GF2, 1, 1))
    sp = gl.space
    e11 = sp.basis(sp.index("E11"))
    zero = sp.zero()
    with pytest.raises(AdSquareMismatch):
        build_squaring_from_basis(gl, {"E12": e11, "E21": zero})
    ok = build_squaring_from_basis(gl, {"E12": zero, "E21": zero})
    assert check_lie(ok).passed


def test_build_squaring_requires_all_odd_assignments():
    gl = assoc_to_lie(matrix_superalgebra(GF2, 1, 1))
    with pytest.raises(ValidationError):
        build_squaring_from_basis(gl, {"E12": gl.space.zero()})


#### morphisms, ideals, quotients ############################################


def test_identity_is_a_morphism():
    b = example_2_2()
    n = b.dim
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    rep = check_morphism(b, b, ident)
    assert rep.passed, rep.to_dict()


def test_parity_violating_map_is_flagged():
    b = example_1_1()
    swap = ((0, 1), (1, 0))
    rep = check_morphism(b, b, swap)
    assert not rep.passed
    assert any(v.law == "parity" for v in rep.violations)


def test_ideal_checks():
    b = example_2_2()
    e2 = b.space.basis(1)
    assert check_ideal(b, [e2]).passed
    # span{e3} is odd but not squaring-closed: s(e3) = e1 escapes
    rep = check_ideal(b, [b.space.basis(2)])
    assert not rep.passed
    assert any(v.law == "squaring-closure" for v in rep.violations)
    # span{e1} fails product absorption: e1 * e3 = e3 escapes
    rep = check_ideal(b, [b.space.basis(0)])
    assert not rep.passed
    assert any(v.law == "product-absorb" for v in rep.violations)


def test_quotient_by_the_product_socle():
    b = example_2_2()
    q = quotient(b, [b.space.basis(1)])
    assert q.dim == 3
    assert tuple(q.space.names) == ("e1", "e3", "e4")
    # e3 e4 = e2 = 0 in the quotient; s(e4) = e2 = 0 too
    i3, i4 = q.space.index("e3"), q.space.index("e4")
    assert q.product.value(i3, i4) == ()
    assert q.squaring.value(i4) == ()
    assert q.squaring.value(i3) == ((0, 1),)
    assert check_poisson(q).passed


def test_quotient_refuses_non_ideal():
    b = example_2_2()
    with pytest.raises(NotAnIdeal):
        quotient(b, [b.space.basis(2)])


def test_projection_to_quotient_is_a_morphism():
    b = example_2_2()
    q = quotient(b, [b.space.basis(1)])
    # columns: images of e1, e2, e3, e4 in the 3-dim quotient
    proj = ((1, 0, 0, 0),
            (0, 0, 1, 0),
            (0, 0, 0, 1))
    rep = check_morphism(b, q, proj)
    assert rep.passed, rep.to_dict()
