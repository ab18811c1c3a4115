"""Tests for the bit-packed F2 linear algebra kernel.

Every nontrivial expected value here was computed by the brute-force
oracles at the top of this file (span enumeration, full 2^n kernel
enumeration, set-intersection parity) and then frozen in.
"""

import numpy as np
import pytest

from qweight.gf2 import (
    BitMatrix,
    BitVector,
    RowSpace,
    kernel_basis,
    mat_mul_t,
    min_weight_in_coset_complement,
    min_weight_logical,
    rank,
    rref,
)

# A parity-check matrix for the [[7,1,3]] code, with columns ordered so
# that column 0 has weight 2.
STEANE_H = [
    [0, 1, 1, 1, 1, 0, 0],
    [1, 0, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 0, 1],
]

# 5x9 fixture with one dependent row (row2 = row0 ^ row1) and one zero row.
MIXED_59 = [
    [1, 0, 1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1, 0, 0],
    [1, 1, 0, 0, 1, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 0, 0, 1],
]


def _row_to_int(row):
    v = 0
    for j, b in enumerate(row):
        if b:
            v |= 1 << j
    return v


def _span(rows_int):
    out = {0}
    for r in rows_int:
        out |= {s ^ r for s in out}
    return out


def _rank_oracle(rows_int):
    return (len(_span(rows_int))).bit_length() - 1


def _kernel_oracle(rows_int, ncols):
    # every x in F2^ncols orthogonal to all rows; only usable for small ncols
    return [
        x
        for x in range(1 << ncols)
        if all((x & r).bit_count() % 2 == 0 for r in rows_int)
    ]


def _min_weight_oracle(dense_rows_a, dense_rows_b, ncols):
    ker = _kernel_oracle([_row_to_int(r) for r in dense_rows_a], ncols)
    rowspace = _span([_row_to_int(r) for r in dense_rows_b])
    weights = [v.bit_count() for v in ker if v not in rowspace]
    return min(weights) if weights else None


def _random_binary(rng, r, c):
    return rng.integers(0, 2, size=(r, c), dtype=np.uint8)


def test_bitmatrix_dense_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        r = int(rng.integers(1, 9))
        c = int(rng.integers(1, 150))
        dense = _random_binary(rng, r, c)
        m = BitMatrix.from_dense(dense)
        assert m.rows == r and m.cols == c
        assert np.array_equal(m.to_dense(), dense)


def test_bitmatrix_get_set():
    m = BitMatrix.zeros(3, 70)
    assert m.get(2, 69) == 0
    m.set(2, 69, 1)
    m.set(0, 0, 1)
    assert m.get(2, 69) == 1
    assert m.get(0, 0) == 1
    m.set(2, 69, 0)
    assert m.get(2, 69) == 0
    assert m.row_support(0) == [0]


def test_bitmatrix_from_support():
    m = BitMatrix.from_support(3, 7, [[0, 3], [], [1, 2, 6]])
    assert m.row_support(0) == [0, 3]
    assert m.row_support(1) == []
    assert m.row_support(2) == [1, 2, 6]
    assert list(m.row_weights()) == [2, 0, 3]


def test_bitmatrix_col_weights():
    m = BitMatrix.from_dense(STEANE_H)
    assert list(m.col_weights()) == [2, 2, 2, 3, 1, 1, 1]


def test_bitvector():
    v = BitVector.from_dense([1, 0, 1, 1])
    assert v.n == 4
    assert v.weight() == 3
    assert v.support() == [0, 2, 3]
    assert list(v.to_dense()) == [1, 0, 1, 1]


def test_rank_identity_and_equal_rows():
    assert rank(BitMatrix.from_dense(np.eye(2, dtype=np.uint8))) == 2
    assert rank(BitMatrix.from_dense([[1, 1], [1, 1]])) == 1


def test_rank_frozen_fixtures():
    assert rank(BitMatrix.from_dense(STEANE_H)) == 3
    assert rank(BitMatrix.from_dense(MIXED_59)) == 3
    assert rank(BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])) == 2
    assert rank(BitMatrix.zeros(4, 6)) == 0
    assert rank(BitMatrix.zeros(0, 6)) == 0


def test_rank_matches_bruteforce_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(300):
        r = int(rng.integers(1, 9))
        c = int(rng.integers(1, 9))
        dense = _random_binary(rng, r, c)
        ints = [_row_to_int(row) for row in dense]
        assert rank(BitMatrix.from_dense(dense)) == _rank_oracle(ints)


def test_rref_reproduces_rowspace():
    rng = np.random.default_rng(5)
    for _ in range(100):
        dense = _random_binary(rng, int(rng.integers(1, 7)), int(rng.integers(1, 11)))
        m = BitMatrix.from_dense(dense)
        red, pivots = rref(m)
        ints_in = [_row_to_int(r) for r in dense]
        ints_out = [red.row_as_int(i) for i in range(red.rows)]
        assert _span(ints_in) == _span(ints_out)
        assert len(pivots) == _rank_oracle(ints_in)
        # pivot columns appear in exactly one reduced row
        for p in pivots:
            assert sum((v >> p) & 1 for v in ints_out) == 1


def test_kernel_basis_trivial():
    assert kernel_basis(BitMatrix.from_dense(np.eye(2, dtype=np.uint8))).rows == 0
    rep = kernel_basis(BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]]))
    assert rep.rows == 1
    assert rep.row_as_int(0) == 0b111


def test_kernel_basis_steane_dimension():
    k = kernel_basis(BitMatrix.from_dense(STEANE_H))
    assert k.rows == 4


def test_kernel_basis_against_oracle():
    rng = np.random.default_rng(77)
    for _ in range(120):
        r = int(rng.integers(1, 6))
        c = int(rng.integers(1, 13))
        dense = _random_binary(rng, r, c)
        m = BitMatrix.from_dense(dense)
        k = kernel_basis(m)
        ints = [_row_to_int(row) for row in dense]
        oracle = set(_kernel_oracle(ints, c))
        basis_ints = [k.row_as_int(i) for i in range(k.rows)]
        # every basis vector is in the kernel, the basis is independent,
        # and it spans the whole kernel
        for v in basis_ints:
            assert v in oracle
        assert _rank_oracle(basis_ints) == k.rows
        assert _span(basis_ints) == oracle


def test_mat_mul_t_dimension_mismatch():
    a = BitMatrix.zeros(1, 3)
    b = BitMatrix.zeros(1, 4)
    with pytest.raises(ValueError):
        mat_mul_t(a, b)


def test_mat_mul_t_trivial():
    four = BitMatrix.from_dense([[1, 1, 1, 1]])
    assert mat_mul_t(four, four).to_dense().tolist() == [[0]]
    a = BitMatrix.from_dense([[1, 1, 0]])
    b = BitMatrix.from_dense([[1, 0, 0]])
    assert mat_mul_t(a, b).to_dense().tolist() == [[1]]


def test_mat_mul_t_steane_commutes():
    h = BitMatrix.from_dense(STEANE_H)
    assert mat_mul_t(h, h).is_zero()


def test_mat_mul_t_against_parity_oracle():
    rng = np.random.default_rng(31)
    for _ in range(100):
        c = int(rng.integers(1, 80))
        a = _random_binary(rng, int(rng.integers(1, 7)), c)
        b = _random_binary(rng, int(rng.integers(1, 7)), c)
        got = mat_mul_t(BitMatrix.from_dense(a), BitMatrix.from_dense(b)).to_dense()
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                sa = {x for x in range(c) if a[i, x]}
                sb = {x for x in range(c) if b[j, x]}
                assert got[i, j] == len(sa & sb) % 2


def test_rowspace_membership():
    h = BitMatrix.from_dense(STEANE_H)
    rs = RowSpace(h)
    ints = [_row_to_int(r) for r in STEANE_H]
    for v in _span(ints):
        assert rs.contains(v)
    # kernel contains the rowspace strictly: 16 kernel vectors vs 8 row vectors
    kernel = _kernel_oracle(ints, 7)
    outside = [v for v in kernel if v not in _span(ints)]
    assert len(outside) == 8
    for v in outside:
        assert not rs.contains(v)


def test_min_weight_four_qubit():
    four = BitMatrix.from_dense([[1, 1, 1, 1]])
    res = min_weight_in_coset_complement(four, four)
    assert res.weight == 2
    assert res.reason is None


def test_min_weight_steane():
    h = BitMatrix.from_dense(STEANE_H)
    res = min_weight_in_coset_complement(h, h)
    assert res.weight == 3


def test_min_weight_empty_coset():
    # Hx = identity on 2 qubits, Hz empty: no logical class at all
    span_a = BitMatrix.zeros(0, 2)
    span_b = BitMatrix.from_dense(np.eye(2, dtype=np.uint8))
    res = min_weight_in_coset_complement(span_b, span_b)
    assert res.weight is None
    assert res.reason == "empty-coset"
    del span_a


def test_min_weight_budget_exceeded():
    # kernel dimension 30 with a budget that cannot cover 2^30 points
    m = BitMatrix.zeros(1, 30)
    m.set(0, 0, 1)
    res = min_weight_in_coset_complement(m, BitMatrix.zeros(0, 30), budget=1 << 10)
    assert res.weight is None
    assert res.reason == "budget-exceeded"


def test_min_weight_matches_full_enumeration():
    rng = np.random.default_rng(919)
    checked = 0
    for _ in range(200):
        c = int(rng.integers(2, 13))
        a = _random_binary(rng, int(rng.integers(1, 5)), c)
        span_a = BitMatrix.from_dense(a)
        kb = kernel_basis(span_a)
        if kb.rows == 0:
            continue
        # span_b: a random subset of kernel basis rows, so the promise
        # rowspace(span_b) <= kernel(span_a) holds
        take = [i for i in range(kb.rows) if rng.integers(0, 2)]
        b_dense = kb.to_dense()[take] if take else np.zeros((0, c), dtype=np.uint8)
        span_b = BitMatrix.from_dense(b_dense)
        got = min_weight_in_coset_complement(span_a, span_b)
        want = _min_weight_oracle(a.tolist(), b_dense.tolist(), c)
        if want is None:
            assert got.weight is None
        else:
            assert got.weight == want
        checked += 1
    assert checked > 100


def test_min_weight_logical_fixtures():
    h = BitMatrix.from_dense(STEANE_H)
    res = min_weight_logical(h, h)
    assert res.weight == 3
    assert res.certified
    assert res.lower_bound >= 3

    four = BitMatrix.from_dense([[1, 1, 1, 1]])
    res4 = min_weight_logical(four, four)
    assert res4.weight == 2
    assert res4.certified


def test_min_weight_logical_empty_coset():
    eye = BitMatrix.from_dense(np.eye(3, dtype=np.uint8))
    res = min_weight_logical(eye, eye)
    assert res.weight is None
    assert res.certified


def test_min_weight_logical_matches_gray_search():
    rng = np.random.default_rng(4242)
    compared = 0
    for _ in range(150):
        c = int(rng.integers(3, 14))
        a = _random_binary(rng, int(rng.integers(1, 5)), c)
        span_a = BitMatrix.from_dense(a)
        kb = kernel_basis(span_a)
        if kb.rows == 0:
            continue
        take = [i for i in range(kb.rows) if rng.integers(0, 2)]
        b_dense = kb.to_dense()[take] if take else np.zeros((0, c), dtype=np.uint8)
        span_b = BitMatrix.from_dense(b_dense)
        gray = min_weight_in_coset_complement(span_a, span_b)
        bz = min_weight_logical(span_a, span_b)
        assert bz.certified
        assert bz.weight == gray.weight
        compared += 1
    assert compared > 80


def test_min_weight_logical_budget_gives_lower_bound():
    # with a tiny combo budget the search stops early but still reports a
    # valid certified lower bound from the completed sweeps
    rng = np.random.default_rng(8)
    a = _random_binary(rng, 4, 30)
    span_a = BitMatrix.from_dense(a)
    res = min_weight_logical(span_a, BitMatrix.zeros(0, 30), combo_budget=40)
    full = min_weight_logical(span_a, BitMatrix.zeros(0, 30))
    assert full.certified
    assert res.lower_bound <= full.weight
    if res.weight is not None:
        assert res.weight >= full.weight


def test_kernel_basis_deterministic():
    rng = np.random.default_rng(3)
    dense = _random_binary(rng, 5, 40)
    m = BitMatrix.from_dense(dense)
    k1 = kernel_basis(m)
    k2 = kernel_basis(m)
    assert k1.rows == k2.rows
    assert np.array_equal(k1.to_dense(), k2.to_dense())
