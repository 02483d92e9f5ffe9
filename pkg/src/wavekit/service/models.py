"""Pydantic request/response schemas for the HTTP service.

Rationals are strings ("p/q" in lowest terms) end to end, so geometry passes
through the wire bit-exactly.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field


class HalfSpaceModel(BaseModel):
    normal: List[str]
    offset: str


class CellModel(BaseModel):
    halfspaces: List[HalfSpaceModel]


class FrameModel(BaseModel):
    base: List[str]
    generators: List[List[str]]


class RegionModel(BaseModel):
    dim: int
    cells: List[CellModel]
    frame: Optional[FrameModel] = None
    metadata: Dict = Field(default_factory=dict)


class ConstructRequest(BaseModel):
    type: Literal["scalar", "neg-scalar", "matrix"]
    dim: Optional[int] = None
    d: Optional[str] = None  # rational, e.g. "2" or "3/2"
    k: int = 1
    matrix: Optional[Union[str, List[List[str]]]] = None
    transpose_given: bool = False
    q: Optional[Union[int, Literal["auto"]]] = None
    q_max: Optional[int] = None
    unimodular: Optional[Union[str, List[List[str]]]] = None


class ConstructSummary(BaseModel):
    kind: str
    dim: int
    cells: int
    volume: str
    t: Optional[List[str]] = None
    k: Optional[List[str]] = None
    q: Optional[int] = None
    d: Optional[str] = None


class ConstructResponse(BaseModel):
    region: RegionModel
    summary: ConstructSummary


class DilationModel(BaseModel):
    kind: str
    matrix: List[List[Union[str, float, int]]]
    power: Optional[int] = None
    scalar: Optional[Union[str, float, int]] = None


class VerifyRequest(BaseModel):
    region: RegionModel
    mode: Literal["exact", "mc", "both"] = "exact"
    samples: int = 100_000
    seed: int = 42
    dilation: Optional[DilationModel] = None  # overrides region metadata
    validate_region: bool = True
    tol: float = 1e-9  # boundary tolerance, float-dilation mode only


class VerifyResponse(BaseModel):
    is_wavelet_set: bool
    exit_code: int
    translation: Dict
    dilation: Dict


class InfoRequest(BaseModel):
    matrix: Union[str, List[List[str]]]
    transpose_given: bool = False
    q_max: Optional[int] = None
    p_max: int = 12


class QAttemptModel(BaseModel):
    q: int
    k: List[str]
    t: List[str]
    hole_in_outer: bool
    hole_clear_of_notch: bool
    satellite_clear: bool
    accepted: bool
    reason: str


class InfoResponse(BaseModel):
    dim: int
    power: Optional[int] = None
    scalar: Optional[str] = None
    expansive: Optional[bool] = None
    singular_values: List[float] = Field(default_factory=list)
    singular_radius: float = 0.0
    sqrt_dim: float = 0.0
    min_singular_exceeds_sqrt_dim: Optional[bool] = None
    hypothesis_satisfied: Optional[bool] = None
    q_trace: List[QAttemptModel] = Field(default_factory=list)
    accepted_q: Optional[int] = None
    notes: List[str] = Field(default_factory=list)


class ExportRequest(BaseModel):
    region: RegionModel
    format: Literal["off", "svg", "csv"]
    slice: Optional[str] = None
    samples: int = 20_000
    seed: int = 42


class ExportResponse(BaseModel):
    filename: str
    content: str


class HealthResponse(BaseModel):
    status: str
    version: str
