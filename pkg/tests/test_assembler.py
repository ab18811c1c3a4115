"""Tests for the glued weight-reduction pipeline."""

import pytest

from qweight.assembler import (
    CHECK_WEIGHT_BOUND,
    QUBIT_WEIGHT_BOUND,
    ReducedCode,
    augment_overhead_estimate,
    augment_with_logical_checks,
    effective_homology_check,
    weight_reduce,
)
from qweight.css import CssCode, validate
from qweight.gf2 import BitMatrix, BitVector, mat_mul_t, rank
from qweight.generators import random_dense_css, standard_code
from qweight.local_complexes import build_qubit_grid, grid_local_code


def k_of(code):
    return code.n - rank(code.hx) - rank(code.hz)


def one_sided(*rows, n=None):
    width = n or max(max(r) for r in rows) + 1
    hx = BitMatrix.from_support(len(rows), width, rows)
    return CssCode(hx, BitMatrix.zeros(0, width), label="one-sided")


@pytest.fixture(scope="module")
def reduced_four():
    return weight_reduce(standard_code("four_qubit"))


@pytest.fixture(scope="module")
def reduced_steane_plain():
    return weight_reduce(standard_code("steane"), uniformize=False)


class TestWeightReduce:
    def test_four_qubit_shape(self, reduced_four):
        r = reduced_four.report
        assert r.n_new == 812
        assert reduced_four.code.hx.rows == 405
        assert reduced_four.code.hz.rows == 405
        assert r.k_new == r.k_orig == 2

    def test_four_qubit_commutes_by_oracle(self, reduced_four):
        assert mat_mul_t(reduced_four.code.hx, reduced_four.code.hz).is_zero()

    def test_four_qubit_validates(self, reduced_four):
        assert validate(reduced_four.code).ok

    def test_weight_bounds_by_oracle(self, reduced_four):
        code = reduced_four.code
        assert int(code.hx.row_weights().max()) <= CHECK_WEIGHT_BOUND
        assert int(code.hz.row_weights().max()) <= CHECK_WEIGHT_BOUND
        assert int((code.hx.col_weights() + code.hz.col_weights()).max()) <= QUBIT_WEIGHT_BOUND

    def test_k_by_external_rank(self, reduced_four):
        assert k_of(reduced_four.code) == 2

    def test_weight_histograms_total(self, reduced_four):
        r = reduced_four.report
        assert sum(r.check_weights.values()) == 405 + 405
        assert sum(r.qubit_weights.values()) == r.n_new
        assert max(r.check_weights) <= CHECK_WEIGHT_BOUND
        assert max(r.qubit_weights) <= QUBIT_WEIGHT_BOUND

    def test_distance_lower_bound(self):
        red = weight_reduce(standard_code("four_qubit"), distance_budget=20_000)
        assert red.report.d_lower == 2

    def test_steane_plain_shape(self, reduced_steane_plain):
        r = reduced_steane_plain.report
        assert r.n_new == 625
        assert r.k_new == r.k_orig == 1
        assert r.expander_edges == 0

    def test_steane_plain_commutes_by_oracle(self, reduced_steane_plain):
        code = reduced_steane_plain.code
        assert mat_mul_t(code.hx, code.hz).is_zero()
        assert k_of(code) == 1

    def test_one_sided_code(self):
        red = weight_reduce(one_sided([0, 1, 3], [1, 2, 3]))
        assert red.report.k_new == red.report.k_orig == 2
        assert red.code.hz.rows > 0  # grids and cones still produce Z checks
        assert mat_mul_t(red.code.hx, red.code.hz).is_zero()

    def test_one_sided_plain_disconnected(self):
        with pytest.raises(RuntimeError, match="uniformize"):
            weight_reduce(one_sided([0, 1, 3], [1, 2, 3]), uniformize=False)

    def test_invalid_input_rejected(self):
        hx = BitMatrix.from_dense([[1, 1, 0]])
        hz = BitMatrix.from_dense([[1, 0, 0]])
        with pytest.raises(ValueError, match="validation"):
            weight_reduce(CssCode(hx, hz))

    def test_zero_weight_check_gets_point_cone(self):
        hx = BitMatrix.from_support(2, 2, [[0, 1], []])
        code = CssCode(hx, BitMatrix.zeros(0, 2), label="padded")
        red = weight_reduce(code)
        assert red.report.k_new == red.report.k_orig == 1
        assert red.report.cone_cells["x1"] == 1
        empty_rows = [
            i for i in range(red.code.hx.rows) if not red.code.hx.row_support(i)
        ]
        assert len(empty_rows) == 1
        assert red.x_check_cells[empty_rows[0]] == (("x", 1), ("vertex", 0))

    def test_isolated_qubit_contributes_one(self):
        red = weight_reduce(one_sided([0, 1], n=3))
        assert red.report.k_new == red.report.k_orig == 2

    def test_provenance_covers_everything(self, reduced_four):
        red = reduced_four
        assert len(red.qubit_cells) == red.report.n_new
        assert len(red.x_check_cells) == red.code.hx.rows
        assert len(red.z_check_cells) == red.code.hz.rows
        assert len(set(red.qubit_cells)) == len(red.qubit_cells)
        prov = red.provenance
        assert len(prov) == red.report.n_new + red.code.hx.rows + red.code.hz.rows
        assert prov[("qubit", 0)] == (("q", 0), ("face", 0))

    def test_report_bookkeeping(self, reduced_four):
        r = reduced_four.report
        assert set(r.cone_cells) == {"x0", "z0"}
        assert all(total >= 1 for total in r.cone_cells.values())
        assert r.expander_edges == 2
        assert r.wall_clock is None
        assert r.seed == 0


class TestDeterminism:
    def test_same_seed_identical(self):
        code = one_sided([0, 1, 2, 3, 4, 5])
        a = weight_reduce(code, seed=7)
        b = weight_reduce(code, seed=7)
        assert a.code.hx.words.tobytes() == b.code.hx.words.tobytes()
        assert a.code.hz.words.tobytes() == b.code.hz.words.tobytes()
        assert a.qubit_cells == b.qubit_cells
        assert a.report == b.report

    def test_seed_changes_expander_edges(self):
        code = one_sided([0, 1, 2, 3, 4, 5])
        a = weight_reduce(code, seed=7)
        c = weight_reduce(code, seed=8)
        assert a.report.n_new == c.report.n_new
        assert (
            a.code.hx.words.tobytes() != c.code.hx.words.tobytes()
            or a.code.hz.words.tobytes() != c.code.hz.words.tobytes()
        )


class TestEffectiveHomology:
    def test_four_qubit(self, reduced_four):
        assert effective_homology_check(reduced_four, standard_code("four_qubit"))

    def test_steane_plain(self, reduced_steane_plain):
        assert effective_homology_check(reduced_steane_plain, standard_code("steane"))

    def test_grid_piece_pattern_by_rank(self):
        # A bare qubit grid must carry all its homology in the middle
        # grade: one encoded qubit, nothing at the ends.
        grid = build_qubit_grid(2, 2)
        code = grid_local_code(grid)
        r2, r1 = rank(code.hx), rank(code.hz)
        n_cells = code.n
        assert (code.hx.rows - r2, n_cells - r2 - r1, code.hz.rows - r1) == (0, 1, 0)

    def test_wrong_original_fails(self, reduced_four):
        # Same blocks, different target dimension: the global k clause
        # must reject even though every piece is still well formed.
        other = standard_code("steane")
        assert not effective_homology_check(reduced_four, other)


class TestAugment:
    def test_steane_logical_drops_k_to_zero(self):
        steane = standard_code("steane")
        aug = augment_with_logical_checks(
            steane, [BitVector.from_support(7, [0, 1, 2])], "X"
        )
        assert validate(aug).ok
        assert k_of(aug) == 0
        assert aug.hx.rows == steane.hx.rows + 1

    def test_augmented_code_reduces(self):
        steane = standard_code("steane")
        aug = augment_with_logical_checks(
            steane, [BitVector.from_support(7, [0, 1, 2])], "X"
        )
        red = weight_reduce(aug, uniformize=False)
        assert red.report.k_new == 0

    def test_no_logicals_is_identity(self):
        steane = standard_code("steane")
        same = augment_with_logical_checks(steane, [], "X")
        assert same.hx.words.tobytes() == steane.hx.words.tobytes()
        assert same.label == steane.label

    def test_anticommuting_logical_names_check(self):
        steane = standard_code("steane")
        with pytest.raises(ValueError, match="anticommutes with Z check 1"):
            augment_with_logical_checks(steane, [BitVector.from_support(7, [0])], "X")

    def test_z_side(self):
        steane = standard_code("steane")
        aug = augment_with_logical_checks(
            steane, [BitVector.from_support(7, [0, 1, 2])], "Z"
        )
        assert k_of(aug) == 0
        assert aug.hz.rows == steane.hz.rows + 1

    def test_bad_kind_and_length(self):
        steane = standard_code("steane")
        with pytest.raises(ValueError, match="kind"):
            augment_with_logical_checks(steane, [], "Y")
        with pytest.raises(ValueError, match="length"):
            augment_with_logical_checks(steane, [BitVector.from_support(3, [0])], "X")

    def test_overhead_estimate(self):
        assert augment_overhead_estimate(0, 10) == 0
        assert augment_overhead_estimate(3, 0) == 0
        assert augment_overhead_estimate(1, 3) == 8
        assert augment_overhead_estimate(2, 3) > augment_overhead_estimate(1, 3)
        assert augment_overhead_estimate(4, 16) >= 4 * 16 * (2 + 4)


class TestRandomCodes:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_dense_code_reduces(self, seed):
        code = random_dense_css(8, 2, 2, seed=seed)
        red = weight_reduce(code, seed=seed)
        r = red.report
        assert r.k_new == r.k_orig
        assert max(r.check_weights) <= CHECK_WEIGHT_BOUND
        assert max(r.qubit_weights) <= QUBIT_WEIGHT_BOUND
        assert validate(red.code).ok
