"""Unit tests for grids, fields, weights, Hölder norms and the PAMF format."""

from unittest.mock import patch

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exceptions import ExponentError, FieldFormatError, GridError
from src.lattice import (
    Field,
    WeightSpec,
    eval_weight,
    holder_norm_positive,
    holder_norms,
    make_grid,
    read_field,
    read_fields,
    weight_transfer_bound,
    weight_transfer_ratio,
    weighted_sup_norm,
    write_field,
    write_fields,
)
from src.lattice.pamf import decode_field, encode_field


class TestGrid:
    """Test grid construction and geometry."""

    def test_spacing_and_origin(self):
        grid = make_grid(2.0, 64)

        assert grid.h == pytest.approx(1.0 / 16.0)
        assert grid.origin_index == 32
        assert grid.axis()[32] == 0.0
        assert grid.axis()[0] == pytest.approx(-2.0)

    @pytest.mark.parametrize("L, n", [(1.0, 12), (1.0, 4), (0.5, 16)])
    @patch("src.exceptions.logger")
    def test_invalid_grids(self, mock_logger, L, n):
        with pytest.raises(GridError):
            make_grid(L, n)

    def test_radius_is_symmetric(self, small_grid):
        r = small_grid.radius()
        o = small_grid.origin_index

        assert r[o, o] == 0.0
        assert r[o + 5, o - 3] == r[o - 5, o + 3]

    def test_interior_mask(self, tiny_grid):
        mask = tiny_grid.interior_mask(0.5)

        # axis runs -1, -7/8, ..., 7/8; nodes with |x| ≤ 1/2 survive
        assert mask.sum() == 9 * 9
        assert tiny_grid.interior_mask(0.0).all()

    def test_node_index(self, small_grid):
        assert small_grid.node_index((0.0, 0.0)) == (32, 32)

    @patch("src.exceptions.logger")
    def test_node_index_outside_box(self, mock_logger, small_grid):
        with pytest.raises(GridError):
            small_grid.node_index((1.5, 0.0))

    def test_dyadic_level(self):
        assert make_grid(1.0, 64).dyadic_level == 5
        assert make_grid(2.0, 64).coarsened().n == 32

    @patch("src.exceptions.logger")
    def test_non_dyadic_spacing(self, mock_logger):
        with pytest.raises(GridError):
            make_grid(1.5, 16).dyadic_level


class TestField:
    """Test field construction and arithmetic."""

    def test_values_are_read_only(self, tiny_grid):
        f = Field.zeros(tiny_grid)

        with pytest.raises(ValueError):
            f.values[0, 0] = 1.0

    def test_construction_copies_input(self, tiny_grid):
        raw = np.ones(tiny_grid.shape)
        f = Field(tiny_grid, raw)
        raw[0, 0] = 5.0

        assert f.values[0, 0] == 1.0

    @patch("src.exceptions.logger")
    def test_rejects_non_finite(self, mock_logger, tiny_grid):
        raw = np.zeros(tiny_grid.shape)
        raw[3, 3] = np.nan

        with pytest.raises(GridError):
            Field(tiny_grid, raw)

    @patch("src.exceptions.logger")
    def test_grid_mismatch(self, mock_logger, tiny_grid, small_grid):
        with pytest.raises(GridError, match="grid mismatch"):
            Field.zeros(tiny_grid) + Field.zeros(small_grid)

    def test_arithmetic(self, tiny_grid):
        f = Field.constant(tiny_grid, 2.0)
        g = Field.constant(tiny_grid, 3.0)

        np.testing.assert_array_equal((f + g).values, 5.0)
        np.testing.assert_array_equal((f - g).values, -1.0)
        np.testing.assert_array_equal((f * g).values, 6.0)
        np.testing.assert_array_equal((0.5 * f).values, 1.0)
        np.testing.assert_array_equal((-f).values, -2.0)

    def test_gaussian_has_unit_mass(self):
        grid = make_grid(4.0, 128)

        assert Field.gaussian(grid, 0.25).mass() == pytest.approx(1.0, abs=1e-6)

    def test_reflection(self, tiny_grid):
        f = Field.from_function(tiny_grid, lambda x1, x2: x1 + 2.0 * x2)
        reflected = f.reflected()
        o = tiny_grid.origin_index

        assert reflected.values[o + 2, o - 1] == pytest.approx(f.values[o - 2, o + 1])
        assert reflected.values[0, 5] == 0.0

    def test_value_at_and_sup(self, tiny_grid):
        f = Field.from_function(tiny_grid, lambda x1, x2: x1)

        assert f.value_at((0.25, 0.0)) == pytest.approx(0.25)
        assert f.sup() == pytest.approx(1.0)
        assert f.sup(0.5) == pytest.approx(0.5)


class TestWeights:
    """Test polynomial and exponential weights."""

    def test_values(self):
        poly = WeightSpec.polynomial(2.0)
        assert eval_weight(poly, (3.0, 4.0)) == pytest.approx(36.0)
        assert eval_weight(WeightSpec.exponential(1.0), (0.0, 0.0)) == pytest.approx(
            np.e
        )

    def test_comparability_constants(self):
        assert WeightSpec.polynomial(-3.0).comparability_constant() == 8.0
        assert WeightSpec.exponential(0.5).comparability_constant() == pytest.approx(
            np.exp(0.5)
        )

    def test_product_within_family(self):
        product = WeightSpec.polynomial(0.5) * WeightSpec.polynomial(-1.5)

        assert product == WeightSpec.polynomial(-1.0)
        assert product.describe() == "p_-1"

    @patch("src.exceptions.logger")
    @pytest.mark.parametrize(
        "kind, exponent",
        [
            ("gaussian", 1.0),
            ("polynomial", float("nan")),
            ("exponential", float("inf")),
        ],
    )
    def test_invalid_weight(self, mock_logger, kind, exponent):
        with pytest.raises(ExponentError):
            WeightSpec(kind, exponent)

    @patch("src.exceptions.logger")
    def test_product_across_families(self, mock_logger):
        with pytest.raises(ExponentError):
            WeightSpec.polynomial(1.0) * WeightSpec.exponential(1.0)

    @given(
        a=st.floats(min_value=-2.0, max_value=2.0),
        ell=st.floats(min_value=-2.0, max_value=2.0),
        r=st.floats(min_value=0.0, max_value=50.0),
        d=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_comparability_holds(self, a, ell, r, d):
        for w in (WeightSpec.polynomial(a), WeightSpec.exponential(ell)):
            C = w.comparability_constant()
            ratio = float(w.of_radius(np.array(r + d)) / w.of_radius(np.array(r)))

            assert ratio <= C * (1.0 + 1e-12)
            assert ratio >= (1.0 - 1e-12) / C

    @settings(max_examples=30, deadline=None)
    @given(
        a=st.floats(min_value=0.001, max_value=0.05),
        s=st.floats(min_value=0.0, max_value=1.0),
        gap=st.floats(min_value=0.01, max_value=1.0),
    )
    def test_transfer_ratio_below_bound(self, a, s, gap):
        grid = make_grid(8.0, 64)
        ratio = weight_transfer_ratio(grid, a, 0.0, s, s + gap)

        assert ratio <= weight_transfer_bound(a, s, s + gap) * (1.0 + 1e-12)

    @patch("src.exceptions.logger")
    def test_transfer_needs_later_time(self, mock_logger):
        with pytest.raises(ExponentError):
            weight_transfer_bound(0.04, 0.5, 0.5)


class TestHolderNorms:
    """Test weighted sup and positive Hölder norms."""

    def test_constant_field(self, tiny_grid):
        f = Field.constant(tiny_grid, -3.0)
        w = WeightSpec.polynomial(0.0)

        assert holder_norm_positive(f, 0.5, w) == pytest.approx(3.0)
        assert holder_norm_positive(f, 1.5, w) == pytest.approx(3.0)

    def test_linear_field(self, tiny_grid):
        f = Field.from_function(tiny_grid, lambda x1, x2: x1)

        # sup part 1 plus the unit increment over a unit step
        assert holder_norm_positive(f, 0.5, WeightSpec.polynomial(0.0)) == (
            pytest.approx(2.0)
        )

    @pytest.mark.parametrize("alpha", [1.0, 2.5, 0.0, -0.5])
    @patch("src.exceptions.logger")
    def test_inadmissible_exponent(self, mock_logger, tiny_grid, alpha):
        flat = WeightSpec.exponential(0.0)

        with pytest.raises(ExponentError):
            holder_norm_positive(Field.zeros(tiny_grid), alpha, flat)

    def test_weighted_sup(self, tiny_grid):
        f = Field.constant(tiny_grid, 2.0)

        assert weighted_sup_norm(f, WeightSpec.polynomial(1.0)) == pytest.approx(2.0)
        assert weighted_sup_norm(
            f, WeightSpec.polynomial(-1.0), collar=0.5
        ) == pytest.approx(2.0 * (1.0 + np.sqrt(0.5)))

    def test_batch_matches_single(self, tiny_grid, rng):
        fields = [
            Field(tiny_grid, rng.standard_normal(tiny_grid.shape)) for _ in range(3)
        ]
        weights = [WeightSpec.polynomial(0.5), WeightSpec.exponential(0.2)] * 2
        batch = holder_norms(fields, 0.4, weights[:3])

        for f, w, value in zip(fields, weights, batch):
            assert holder_norm_positive(f, 0.4, w) == pytest.approx(value)

    def test_norm_grows_with_alpha(self, tiny_grid, rng):
        f = Field(tiny_grid, rng.standard_normal(tiny_grid.shape))
        w = WeightSpec.polynomial(0.0)

        assert holder_norm_positive(f, 0.3, w) <= holder_norm_positive(f, 0.7, w)

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_stable_under_refinement(self, alpha):
        w = WeightSpec.exponential(0.0)
        coarse, fine = (
            holder_norm_positive(Field.gaussian(make_grid(2.0, n), 0.25), alpha, w)
            for n in (64, 128)
        )

        assert fine == pytest.approx(coarse, rel=0.02)


class TestPAMFFormat:
    """Test the binary field format."""

    def test_round_trip(self, tmp_path, small_grid, rng):
        f = Field(small_grid, rng.standard_normal(small_grid.shape))
        path = write_field(tmp_path / "sub" / "f.pamf", f)
        restored = read_field(path)

        assert restored.grid == small_grid
        np.testing.assert_array_equal(restored.values, f.values)

    def test_header_size(self, tiny_grid):
        payload = encode_field(Field.zeros(tiny_grid))

        assert payload[:4] == b"PAMF"
        assert len(payload) == 24 + 8 * 16 * 16

    @patch("src.exceptions.logger")
    def test_bad_magic(self, mock_logger, tiny_grid):
        payload = b"XXXX" + encode_field(Field.zeros(tiny_grid))[4:]

        with pytest.raises(FieldFormatError, match="bad magic"):
            decode_field(payload)

    @patch("src.exceptions.logger")
    def test_truncated_stream(self, mock_logger, tiny_grid):
        payload = encode_field(Field.zeros(tiny_grid))[:-8]

        with pytest.raises(FieldFormatError, match="size mismatch"):
            decode_field(payload)

    @patch("src.exceptions.logger")
    def test_wrong_version(self, mock_logger, tiny_grid):
        payload = bytearray(encode_field(Field.zeros(tiny_grid)))
        payload[4] = 2

        with pytest.raises(FieldFormatError, match="version"):
            decode_field(bytes(payload))

    @patch("src.exceptions.logger")
    def test_missing_file(self, mock_logger, tmp_path):
        with pytest.raises(FieldFormatError):
            read_field(tmp_path / "absent.pamf")

    def test_directory_with_manifest(self, tmp_path, tiny_grid):
        fields = {"a": Field.constant(tiny_grid, 1.0), "b": Field.zeros(tiny_grid)}
        write_fields(tmp_path / "out", fields, {"seed": 3})

        restored, manifest = read_fields(tmp_path / "out")

        assert set(restored) == {"a", "b"}
        assert manifest["seed"] == "3"
        assert manifest["fields"] == "a, b"
