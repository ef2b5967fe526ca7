"""Field arithmetic and exact linear algebra, pinned against naive oracles."""

from __future__ import annotations

import random

import pytest

from poisson2.field import (GF2, DEFAULT_MODULI, DivisionByZero, Field,
                            NonIrreducibleModulus, UnsupportedDegree,
                            field_new)
from poisson2.linalg import (IntGF2, Matrix, NotASubspace, SparseGF2,
                             SparseGFk, in_span, kernel_basis, quotient_dim,
                             rank, solve, span_rank)

from oracles import naive_kernel, naive_rank, naive_rref

FIELDS = [field_new(k) for k in (1, 2, 3, 4)]


#### field axioms, exhaustive ################################################


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF(2^{f.degree})")
def test_field_axioms_exhaustive(f: Field):
    n = 1 << f.degree
    els = range(n)
    for a in els:
        assert f.add(a, 0) == a
        assert f.add(a, a) == 0          # characteristic 2
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a in els:
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in els:
                assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF(2^{f.degree})")
def test_frobenius_is_additive(f: Field):
    # squaring is a field automorphism in characteristic 2
    n = 1 << f.degree
    for a in range(n):
        for b in range(n):
            assert f.square(f.add(a, b)) == f.add(f.square(a), f.square(b))
            assert f.square(f.mul(a, b)) == f.mul(f.square(a), f.square(b))
    # and it is a bijection
    assert sorted(f.square(a) for a in range(n)) == list(range(n))


def test_division_and_errors():
    f4 = field_new(2)
    with pytest.raises(DivisionByZero):
        f4.inv(0)
    with pytest.raises(DivisionByZero):
        f4.div(1, 0)
    with pytest.raises(UnsupportedDegree):
        field_new(9)
    with pytest.raises(NonIrreducibleModulus):
        field_new(2, modulus=0b101)  # x^2 + 1 = (x+1)^2


def test_default_moduli_are_defaults():
    for k, mod in DEFAULT_MODULI.items():
        assert field_new(k).modulus == mod
    assert GF2.degree == 1


def test_power_and_fmt():
    f8 = field_new(3)
    g = 0b010
    seen = {f8.power(g, i) for i in range(7)}
    assert len(seen) == 7  # x generates the multiplicative group of GF(8)
    assert f8.fmt(0b101) == "5"
    assert GF2.fmt(1) == "1"


#### dense elimination vs the naive oracle ###################################


def _random_rows(rng, f, nrows, ncols):
    hi = (1 << f.degree) - 1
    return [[rng.randint(0, hi) for _ in range(ncols)] for _ in range(nrows)]


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF(2^{f.degree})")
def test_rank_matches_naive_oracle(f: Field):
    rng = random.Random(20240 + f.degree)
    for _ in range(40):
        nrows = rng.randint(1, 9)
        ncols = rng.randint(1, 9)
        rows = _random_rows(rng, f, nrows, ncols)
        assert Matrix.from_rows(f, rows, ncols).rank() == naive_rank(f, rows)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF(2^{f.degree})")
def test_rref_matches_naive_oracle(f: Field):
    rng = random.Random(977 + f.degree)
    for _ in range(25):
        nrows = rng.randint(1, 8)
        ncols = rng.randint(1, 8)
        rows = _random_rows(rng, f, nrows, ncols)
        R, piv = Matrix.from_rows(f, rows, ncols).rref()
        Rn, pivn = naive_rref(f, rows)
        assert list(piv) == pivn
        assert [list(R.row(i)) for i in range(R.nrows)] == Rn


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF(2^{f.degree})")
def test_kernel_annihilates_and_counts(f: Field):
    rng = random.Random(5150 + f.degree)
    for _ in range(30):
        nrows = rng.randint(1, 8)
        ncols = rng.randint(1, 10)
        rows = _random_rows(rng, f, nrows, ncols)
        m = Matrix.from_rows(f, rows, ncols)
        kern = m.kernel_basis()
        assert len(kern) == ncols - m.rank()  # rank-nullity
        for v in kern:
            img = m.apply(v)
            assert all(x == 0 for x in img)
        assert [list(v) for v in kern] == naive_kernel(f, rows, ncols)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF(2^{f.degree})")
def test_solve_round_trip(f: Field):
    rng = random.Random(31 + f.degree)
    hi = (1 << f.degree) - 1
    for _ in range(30):
        nrows = rng.randint(1, 7)
        ncols = rng.randint(1, 7)
        rows = _random_rows(rng, f, nrows, ncols)
        m = Matrix.from_rows(f, rows, ncols)
        x = [rng.randint(0, hi) for _ in range(ncols)]
        rhs = m.apply(x)
        got = m.solve(list(rhs))
        assert got is not None
        assert list(m.apply(got)) == list(rhs)


def test_solve_detects_inconsistency():
    f = GF2
    m = Matrix.from_rows(f, [[1, 0], [1, 0]], 2)
    assert m.solve([1, 0]) is None
    assert m.solve([1, 1]) == (1, 0)


def test_quotient_dim_and_span_helpers():
    f = GF2
    big = [[1, 0, 0], [0, 1, 0]]
    small = [[1, 1, 0]]
    assert span_rank(f, big, 3) == 2
    assert quotient_dim(f, big, small, 3) == 1
    assert in_span(f, big, [1, 1, 0], 3)
    assert not in_span(f, big, [0, 0, 1], 3)
    with pytest.raises(NotASubspace):
        quotient_dim(f, big, [[0, 0, 1]], 3)


def test_matmul_against_schoolbook():
    rng = random.Random(8)
    for f in FIELDS:
        hi = (1 << f.degree) - 1
        a = [[rng.randint(0, hi) for _ in range(5)] for _ in range(4)]
        b = [[rng.randint(0, hi) for _ in range(3)] for _ in range(5)]
        got = Matrix.from_rows(f, a, 5).matmul(Matrix.from_rows(f, b, 3))
        for i in range(4):
            for j in range(3):
                acc = 0
                for k in range(5):
                    acc = f.add(acc, f.mul(a[i][k], b[k][j]))
                assert got.entry(i, j) == acc


def test_wide_gf2_matrix_crosses_word_boundary():
    # columns beyond index 64 exercise the second packed word
    f = GF2
    ncols = 130
    rows = [[0] * ncols for _ in range(3)]
    rows[0][0] = rows[0][129] = 1
    rows[1][64] = 1
    rows[2][0] = rows[2][64] = rows[2][129] = 1
    m = Matrix.from_rows(f, rows, ncols)
    assert m.rank() == 2
    kern = m.kernel_basis()
    assert len(kern) == ncols - 2
    for v in kern:
        assert all(x == 0 for x in m.apply(v))


#### sparse eliminators ######################################################


def test_intgf2_agrees_with_dense():
    rng = random.Random(4242)
    for _ in range(25):
        ncols = rng.randint(1, 40)
        nrows = rng.randint(1, 60)
        rows = [[rng.randint(0, 1) for _ in range(ncols)] for _ in range(nrows)]
        dense = Matrix.from_rows(GF2, rows, ncols)
        sys_ = IntGF2(ncols)
        for r in rows:
            sys_.add_row(i for i, v in enumerate(r) if v)
        assert sys_.rank_ == dense.rank()
        kern_dense = dense.kernel_basis()
        kern_sparse = sys_.kernel_supports()
        assert len(kern_sparse) == len(kern_dense)
        # pivot conventions differ (max-index vs leftmost), so compare spans
        got = [[1 if i in s else 0 for i in range(ncols)] for s in kern_sparse]
        for v in got:
            assert all(x == 0 for x in dense.apply(v))
        joint = got + [list(v) for v in kern_dense]
        if kern_dense:
            assert span_rank(GF2, joint, ncols) == len(kern_dense)
        # membership: every original row reduces to zero
        for r in rows:
            assert sys_.contains(i for i, v in enumerate(r) if v)


def test_intgf2_reduce_keeps_free_bits():
    sys_ = IntGF2(6)
    sys_.add_row([5, 2])      # pivot 5
    sys_.add_row([4, 0])      # pivot 4
    nf = sys_.reduce_int((1 << 5) | (1 << 3))
    # bit 5 eliminated into bit 2; bit 3 is free and survives
    assert nf == (1 << 3) | (1 << 2)
    assert not sys_.contains([5, 3])
    assert sys_.contains([5, 2])


def test_intgf2_duplicate_indices_fold():
    sys_ = IntGF2(4)
    assert sys_.add_row([1, 1, 2, 2]) is None   # folds to zero
    assert sys_.add_row([3, 3, 0]) == 0


def test_sparse_gf2_agrees_with_dense():
    rng = random.Random(99)
    for _ in range(25):
        ncols = rng.randint(1, 30)
        nrows = rng.randint(1, 45)
        rows = [[rng.randint(0, 1) for _ in range(ncols)] for _ in range(nrows)]
        dense = Matrix.from_rows(GF2, rows, ncols)
        sp = SparseGF2(ncols)
        for r in rows:
            sp.add_row(i for i, v in enumerate(r) if v)
        assert sp.rank_ == dense.rank()
        kern_dense = dense.kernel_basis()
        kern = [[1 if i in s else 0 for i in range(ncols)] for s in sp.kernel_vectors()]
        assert len(kern) == len(kern_dense)
        for v in kern:
            assert all(x == 0 for x in dense.apply(v))
        joint = kern + [list(v) for v in kern_dense]
        if kern_dense:
            assert span_rank(GF2, joint, ncols) == len(kern_dense)


def test_sparse_gfk_agrees_with_dense():
    f = field_new(3)
    rng = random.Random(7)
    hi = (1 << f.degree) - 1
    for _ in range(20):
        ncols = rng.randint(1, 12)
        nrows = rng.randint(1, 18)
        rows = [[rng.randint(0, hi) for _ in range(ncols)] for _ in range(nrows)]
        dense = Matrix.from_rows(f, rows, ncols)
        sp = SparseGFk(f, ncols)
        for r in rows:
            sp.add_row((i, v) for i, v in enumerate(r) if v)
        assert sp.rank_ == dense.rank()
        for r in rows:
            assert sp.contains((i, v) for i, v in enumerate(r) if v)
        # a vector outside the row space is recognized
        if sp.rank_ < ncols:
            free = sp.free_columns()[0]
            assert not sp.contains([(free, 1)])


def test_module_level_wrappers():
    m = Matrix.from_rows(GF2, [[1, 1], [0, 1]], 2)
    assert rank(m) == 2
    assert kernel_basis(m) == []
    assert solve(m, [1, 1]) == (0, 1)
