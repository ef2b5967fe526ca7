"""Spaces, elements, structure tables, bundles, reports."""

from __future__ import annotations

import random

import pytest

from poisson2.core import (AlgebraBundle, ArityMismatch, BilinearTable,
                           Element, MissingStructure, NotOddHomogeneous,
                           Report, SquaringTable, SuperSpace, VIOLATION_CAP,
                           ValidationError, bundle_from_strings, eval_bracket,
                           eval_product, eval_squaring, squaring_sv, sv_add,
                           sv_dense, sv_from_dense, sv_from_dict, sv_scale)
from poisson2.examples import example_1_1, example_2_2, matrix_superalgebra
from poisson2.checks import assoc_to_lie
from poisson2.field import GF2, field_new


def space_1_1(field=GF2) -> SuperSpace:
    return SuperSpace(field, ("e", "f"), (0, 1))


#### sparse vector helpers ###################################################


def test_sv_roundtrip_and_add():
    a = sv_from_dict({2: 1, 0: 1})
    assert a == ((0, 1), (2, 1))
    assert sv_dense(a, 4) == (1, 0, 1, 0)
    assert sv_from_dense((1, 0, 1, 0)) == a
    assert sv_add(a, a) == ()          # char 2
    assert sv_add(a, ((1, 1),)) == ((0, 1), (1, 1), (2, 1))


def test_sv_scale_gf4():
    f4 = field_new(2)
    a = ((0, 0b10), (3, 0b11))
    assert sv_scale(f4, 0b10, a) == ((0, f4.mul(2, 2)), (3, f4.mul(2, 3)))
    assert sv_scale(f4, 0, a) == ()
    assert sv_scale(f4, 1, a) is a


#### spaces and elements #####################################################


def test_space_validation():
    with pytest.raises(ValidationError):
        SuperSpace(GF2, ("a", "a"), (0, 0))
    with pytest.raises(ValidationError):
        SuperSpace(GF2, ("a", "b"), (0, 2))
    with pytest.raises(ValidationError):
        SuperSpace(GF2, ("a",), (0, 1))


def test_element_arithmetic_and_parity():
    sp = space_1_1()
    e, f = sp.basis(0), sp.basis(1)
    assert (e + f).coeffs == (1, 1)
    assert (e + e).is_zero
    assert e.parity() == 0 and f.parity() == 1
    assert (e + f).parity() is None
    assert str(e) == "e"
    assert str(sp.zero()) == "0"
    assert str(e + f) == "e + f"


def test_element_str_shows_coefficients_over_gf4():
    sp = space_1_1(field_new(2))
    x = Element(sp, (0b11, 1))
    assert str(x) == "3*e + f"


#### structure tables ########################################################


def test_bracket_table_rejects_diagonal_and_grading():
    sp = space_1_1()
    with pytest.raises(ValidationError):
        # diagonal bracket entries contradict alternation
        BilinearTable(sp, "bracket", {(1, 1): ((0, 1),)})
    with pytest.raises(ValidationError):
        # [e, f] must be odd, e is not
        BilinearTable(sp, "bracket", {(0, 1): ((0, 1),)})


def test_product_table_symmetric_storage():
    b = example_1_1()
    P = b.product
    assert P.value(0, 1) == P.value(1, 0) == ((1, 1),)
    assert P.value(1, 1) == ()


def test_noncommutative_table_keeps_order():
    m = matrix_superalgebra(GF2, 1, 1)
    P = m.product
    i12 = m.space.index("E12")
    i21 = m.space.index("E21")
    assert P.value(i12, i21) != P.value(i21, i12)


def test_squaring_table_validation():
    sp = space_1_1()
    with pytest.raises(ValidationError):
        SquaringTable(sp, {0: ((0, 1),)})           # even key
    with pytest.raises(ValidationError):
        SquaringTable(sp, {1: ((1, 1),)})           # odd target
    t = SquaringTable(sp, {1: ((0, 1),)})
    assert t.value(1) == ((0, 1),)
    with pytest.raises(NotOddHomogeneous):
        t.value(0)


#### bundles #################################################################


def test_bundle_requires_roles():
    b = example_1_1()
    b.require("product", "bracket", "squaring")
    stripped = AlgebraBundle(b.space, product=b.product)
    with pytest.raises(MissingStructure):
        stripped.require("bracket")


def test_bracket_without_squaring_needs_even_space():
    sp = space_1_1()
    br = BilinearTable(sp, "bracket", {})
    with pytest.raises(ValidationError):
        AlgebraBundle(sp, bracket=br)
    ev = SuperSpace(GF2, ("a", "b"), (0, 0))
    AlgebraBundle(ev, bracket=BilinearTable(ev, "bracket", {}))  # fine


def test_unit_must_be_even_and_need_product():
    sp = space_1_1()
    with pytest.raises(ValidationError):
        AlgebraBundle(sp, bracket=BilinearTable(sp, "bracket", {}),
                      squaring=SquaringTable(sp, {}), unit=sp.basis(0))
    prod = BilinearTable(sp, "product", {})
    with pytest.raises(ValidationError):
        AlgebraBundle(sp, product=prod, unit=sp.basis(1))  # f is odd
    with pytest.raises(ValidationError):
        AlgebraBundle(sp, product=prod, unit=1)            # not an element


def test_bundle_from_strings_round_trip():
    b = bundle_from_strings(
        GF2, [("u", 0), ("v", 1)],
        product={("u", "u"): {"u": 1}, ("u", "v"): {"v": 1}},
        squaring={"v": {"u": 1}},
        bracket={},
        unit="u")
    assert b.unit is not None and b.unit.sparse() == ((0, 1),)
    assert b.product.value(0, 1) == ((1, 1),)
    assert b.squaring.value(1) == ((0, 1),)


#### squaring extension ######################################################


def test_squaring_scales_quadratically():
    f4 = field_new(2)
    b = example_1_1(field=f4)
    sp = b.space
    lam = 0b10
    x = Element(sp, (0, lam))
    want = sv_scale(f4, f4.square(lam), ((0, 1),))
    assert eval_squaring(b, x).sparse() == want


def test_squaring_cross_terms_use_bracket():
    # table squarings vanish yet the polarized square is the bracket value
    gl = assoc_to_lie(matrix_superalgebra(GF2, 1, 1))
    sp = gl.space
    x = sp.basis(sp.index("E12")) + sp.basis(sp.index("E21"))
    sq = eval_squaring(gl, x)
    want = eval_bracket(gl, sp.basis(sp.index("E12")), sp.basis(sp.index("E21")))
    assert sq == want
    assert not sq.is_zero


def test_squaring_polarization_property():
    rng = random.Random(1234)
    b = example_2_2()
    sp = b.space
    odd = sp.odd_indices
    for _ in range(32):
        xc = [0] * sp.dim
        yc = [0] * sp.dim
        for i in odd:
            xc[i] = rng.randint(0, 1)
            yc[i] = rng.randint(0, 1)
        x, y = Element(sp, tuple(xc)), Element(sp, tuple(yc))
        lhs = eval_squaring(b, x + y) + eval_squaring(b, x) + eval_squaring(b, y)
        assert lhs == eval_bracket(b, x, y)


def test_squaring_rejects_even_support():
    b = example_1_1()
    with pytest.raises(NotOddHomogeneous):
        squaring_sv(b, ((0, 1),))


def test_squaring_needs_bracket_for_mixed_sums():
    sp = SuperSpace(GF2, ("a", "x", "y"), (0, 1, 1))
    bundle = AlgebraBundle(sp, squaring=SquaringTable(sp, {1: (), 2: ()}))
    assert squaring_sv(bundle, ((1, 1),)) == ()
    with pytest.raises(MissingStructure):
        squaring_sv(bundle, ((1, 1), (2, 1)))


#### evaluation helpers ######################################################


def test_eval_product_bilinear():
    b = example_2_2()
    sp = b.space
    x = sp.basis(2) + sp.basis(3)       # e3 + e4
    assert eval_product(b, x, x).is_zero          # odd squares vanish
    assert eval_product(b, sp.basis(2), sp.basis(3)) == sp.basis(1)


def test_report_cap_and_serialization():
    rep = Report()
    for k in range(VIOLATION_CAP + 5):
        rep.add("law", (f"w{k}",), "l", "r")
    assert len(rep.violations) == VIOLATION_CAP
    assert not rep.passed
    d = rep.to_dict()
    assert d["schema"] == 1
    assert d["status"] == "fail"
    assert "timing" not in d
    rep.timing = 0.25
    assert rep.to_dict(with_timing=True)["timing"] == 0.25


def test_report_merge_prefixes_laws():
    a = Report()
    a.law("alpha")
    b = Report()
    b.law("beta")
    b.add("beta", ("w",), "l", "r")
    a.merge(b, prefix="sub:")
    assert "sub:beta" in a.laws
    assert a.violations[0].law == "sub:beta"
    assert not a.passed
