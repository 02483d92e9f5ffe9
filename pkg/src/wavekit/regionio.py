"""Region and dilation JSON serialization.

Rationals travel as ``"p/q"`` strings in lowest terms so that region files
round-trip bit-exactly: construct -> save -> load -> re-verify reproduces the
identical geometry.  Dilation metadata whose entries are not exactly rational
(irrational scalars written as floats) degrades to a float-tolerance dilation
that only the Monte Carlo verifier accepts.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Union

from .construct import dilation_from_dict
from .errors import ParameterError
from .polytopes import ConvexCell, HalfSpace, Parallelotope, Region
from .rational import DilationSpec, Mat, Vec, as_rat, rat_str
from .verify import FloatDilation


def region_to_dict(region: Region) -> dict:
    return {
        "dim": region.dim,
        "cells": [
            {
                "halfspaces": [
                    {
                        "normal": [rat_str(Fraction(a)) for a in h.normal],
                        "offset": rat_str(h.offset),
                    }
                    for h in cell.halfspaces
                ]
            }
            for cell in region.cells
        ],
        "frame": None
        if region.frame is None
        else {
            "base": [rat_str(x) for x in region.frame.base],
            "generators": [
                [rat_str(x) for x in row] for row in region.frame.generators.rows
            ],
        },
        "metadata": region.metadata,
    }


def region_from_dict(data: dict, validate: bool = False) -> Region:
    try:
        dim = int(data["dim"])
        cells = []
        for cd in data["cells"]:
            hs = [
                HalfSpace.make([as_rat(x) for x in h["normal"]], as_rat(h["offset"]))
                for h in cd["halfspaces"]
            ]
            if any(h.dim != dim for h in hs):
                raise ParameterError("halfspace dimension mismatch")
            cells.append(ConvexCell.from_halfspaces(hs))
        frame = None
        if data.get("frame"):
            frame = Parallelotope(
                Vec.of(data["frame"]["base"]), Mat.of(data["frame"]["generators"])
            )
        region = Region(cells, frame, data.get("metadata") or {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed region data: {exc}") from exc
    if validate:
        region.validate()
    return region


def save_region(region: Region, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(region_to_dict(region), fh, indent=2)
        fh.write("\n")


def load_region(path: str, validate: bool = False) -> Region:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"invalid JSON in {path}: {exc}") from exc
    return region_from_dict(data, validate=validate)


def parse_dilation(data: dict) -> Union[DilationSpec, FloatDilation]:
    """Exact dilation when all entries are rational, float-tolerance otherwise."""
    try:
        return dilation_from_dict(data)
    except (ParameterError, KeyError, TypeError):
        pass
    try:
        matrix = tuple(tuple(float(x) for x in row) for row in data["matrix"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed dilation data: {exc}") from exc
    return FloatDilation(matrix=matrix, kind=data.get("kind", "matrix"))


def region_dilation(region: Region) -> Optional[Union[DilationSpec, FloatDilation]]:
    data = region.metadata.get("dilation")
    if data is None:
        return None
    return parse_dilation(data)


def parse_matrix(text: str) -> Mat:
    """Parse the row-major matrix syntax "a,b,c;d,e,f;g,h,i" with rational entries."""
    rows = []
    for row in text.strip().split(";"):
        entries = [as_rat(x.strip()) for x in row.split(",") if x.strip() != ""]
        if not entries:
            raise ParameterError(f"empty row in matrix text {text!r}")
        rows.append(entries)
    return Mat.of(rows)


def format_matrix(m: Mat) -> str:
    return ";".join(",".join(rat_str(x) for x in row) for row in m.rows)


def region_to_json(region: Region) -> str:
    return json.dumps(region_to_dict(region), indent=2) + "\n"
