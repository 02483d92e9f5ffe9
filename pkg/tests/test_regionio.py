import json
from fractions import Fraction as F

import pytest

from wavekit import (
    DilationSpec,
    FloatDilation,
    Mat,
    ParameterError,
    load_region,
    parse_matrix,
    region_dilation,
    region_from_dict,
    region_to_dict,
    save_region,
)
from wavekit.construct import dilation_from_dict, dilation_to_dict
from wavekit.regionio import format_matrix, parse_dilation, region_to_json


class TestRegionRoundTrip:
    def test_bit_exact_dict_round_trip(self, matB_build):
        region, _, _ = matB_build
        d1 = region_to_dict(region)
        back = region_from_dict(json.loads(json.dumps(d1)))
        d2 = region_to_dict(back)
        assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)

    def test_geometry_survives(self, main_221):
        region, _, _ = main_221
        back = region_from_dict(region_to_dict(region))
        assert back.volume() == region.volume()
        ours = sorted(v.entries for c in region.cells for v in c.vertices)
        theirs = sorted(v.entries for c in back.cells for v in c.vertices)
        assert ours == theirs
        assert back.frame.base == region.frame.base

    def test_file_round_trip(self, tmp_path, neg_22):
        region, _, _ = neg_22
        path = tmp_path / "region.json"
        save_region(region, str(path))
        back = load_region(str(path), validate=True)
        assert back.volume() == 1
        assert region_to_json(back) == region_to_json(region)

    def test_malformed_data(self):
        with pytest.raises(ParameterError):
            region_from_dict({"dim": 2})
        with pytest.raises(ParameterError):
            region_from_dict({"dim": 2, "cells": [{"halfspaces": []}]})

    def test_malformed_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("not json at all")
        with pytest.raises(ParameterError):
            load_region(str(p))


class TestDilationSerialization:
    def test_exact_round_trip(self, mat1_build):
        _, _, dilation = mat1_build
        back = dilation_from_dict(dilation_to_dict(dilation))
        assert back == dilation

    def test_region_metadata_dilation(self, mat1_build):
        region, _, dilation = mat1_build
        assert region_dilation(region) == dilation

    def test_float_fallback(self):
        import math

        d = parse_dilation(
            {"kind": "matrix", "matrix": [[math.sqrt(2), 0.0], [0.0, math.sqrt(2)]]}
        )
        assert isinstance(d, FloatDilation)

    def test_exact_strings_stay_exact(self):
        d = parse_dilation(
            {
                "kind": "positive-scalar",
                "matrix": [["3/2", "0"], ["0", "3/2"]],
                "power": 1,
                "scalar": "3/2",
            }
        )
        assert isinstance(d, DilationSpec)
        assert d.scalar == F(3, 2)


class TestMatrixText:
    def test_parse(self):
        m = parse_matrix("3,0,0;0,3,0;1,0,-3")
        assert m == Mat.of([[3, 0, 0], [0, 3, 0], [1, 0, -3]])
        m = parse_matrix("1/2, 0; 0, 1/2")
        assert m == Mat.scalar(2, F(1, 2))

    def test_format_round_trip(self):
        m = Mat.of([[F(3, 2), 0], [1, -2]])
        assert parse_matrix(format_matrix(m)) == m

    def test_rejects_ragged(self):
        with pytest.raises(ParameterError):
            parse_matrix("1,2;3")
        with pytest.raises(ParameterError):
            parse_matrix("1,2;;3,4")
