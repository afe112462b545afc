"""Pydantic request/response models for the service and the file formats
written by the CLI.  Rationals travel as "num/den" strings (plain "num" when
the denominator is 1); complex points as [re, im] pairs.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class GenerateRequest(BaseModel):
    n: int = Field(ge=1)
    route: Literal["wronskian", "recurrence", "both"] = "wronskian"


class GenerateResponse(BaseModel):
    version: int = SCHEMA_VERSION
    n: int
    route: str
    routes_agree: bool
    P: list[str]
    polys: list[list[str]]
    shifts: list[str]


class PairRequest(BaseModel):
    n: int = Field(ge=1)


class PairResponse(BaseModel):
    version: int = SCHEMA_VERSION
    n: int
    m: int
    P: list[str]
    Q: list[str]
    shift: str


class PairDocument(BaseModel):
    """On-disk pair file accepted by certification."""

    m: int
    n: int
    P: list[str]
    Q: list[str]
    shift: Optional[str] = None


class CertifyRequest(BaseModel):
    pair: PairDocument
    preset: Literal["paper-balance", "pq-roots", "alpha0-form"] = "pq-roots"
    root_tol: float = Field(default=1e-12, gt=0)
    residual_tol: float = Field(default=1e-10, gt=0)
    kernel_tol: float = Field(default=1e-8, gt=0)


class CheckOutcome(BaseModel):
    passed: bool
    detail: str = ""


class RootSetModel(BaseModel):
    roots: list[tuple[float, float]]
    residual_bound: float
    square_free: bool


class NondegModel(BaseModel):
    singular_values: list[float]
    kernel_dim: int
    translation_aligned: bool
    transpose_kernel_aligned: bool


class CertifyResponse(BaseModel):
    version: int = SCHEMA_VERSION
    preset: str
    tolerances: dict[str, float]
    checks: dict[str, CheckOutcome]
    passed: bool
    roots_P: Optional[RootSetModel] = None
    roots_Q: Optional[RootSetModel] = None
    nondegeneracy: Optional[NondegModel] = None


class ConfigModel(BaseModel):
    m: int
    n: int
    preset: str
    a: list[tuple[float, float]]
    b: list[tuple[float, float]]


class SearchRequest(BaseModel):
    m: int = Field(ge=1)
    n: int = Field(ge=0)
    tries: int = Field(ge=1, le=100000)
    seed: int = 0
    preset: Literal["paper-balance", "pq-roots", "alpha0-form"] = "pq-roots"
    tol: float = Field(default=1e-10, gt=0)


class SearchClass(BaseModel):
    config: ConfigModel
    residual_norm: float
    nondegeneracy: NondegModel


class SearchResponse(BaseModel):
    version: int = SCHEMA_VERSION
    m: int
    n: int
    tries: int
    seed: int
    preset: str
    tolerances: dict[str, float]
    classes: list[SearchClass]


class GridSpec(BaseModel):
    start: float
    stop: float
    count: int = Field(ge=1, le=2000)


class PotentialRequest(BaseModel):
    a: tuple[float, float]
    x1: GridSpec
    x2: GridSpec


class PotentialResponse(BaseModel):
    version: int = SCHEMA_VERSION
    a: tuple[float, float]
    rows: list[tuple[float, float, float]]
    scaling_check_error: float


class ReducedRequest(BaseModel):
    m: int = Field(ge=1)
    n: int = Field(ge=0)
    eps_list: list[float]
    c1: float = 0.0


class ReducedEntry(BaseModel):
    eps: float
    row_norm1: float
    row_norm2: float
    row_norm1_elliptic: float
    row_norm2_elliptic: float


class ReducedResponse(BaseModel):
    version: int = SCHEMA_VERSION
    m: int
    n: int
    alpha0: str
    c1: float
    entries: list[ReducedEntry]


class ErrorResponse(BaseModel):
    status: Literal["input-error", "internal-inconsistency"]
    message: str
