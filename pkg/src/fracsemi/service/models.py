"""Pydantic request/response schemas for the HTTP service.

FastAPI validates incoming JSON against these models and rejects
mismatches with a 422 before any numerics run.
"""

from typing import List, Optional, Union

from pydantic import BaseModel, Field


class DensityEvalRequest(BaseModel):
    alpha: float
    s: float = 1.0
    lam: Union[float, List[float]] = Field(alias="lambda")
    method: str = "bromwich"        # closed_half | bromwich | scaled_from_unit | convolution
    deformation: str = "talbot_like"
    n_nodes: int = 64
    sigma: Optional[float] = None
    beta: Optional[float] = None    # convolution factor

    model_config = {"populate_by_name": True}


class DensityEvalResponse(BaseModel):
    alpha: float
    s: float
    lam: List[float]
    values: List[float]
    method: str


class DensityCheckRequest(BaseModel):
    alpha: float
    check: str                      # normalization | roundtrip | inequalities | log_moment | derivative_routes
    s: float = 1.0
    c: float = 0.5
    lam: float = 1.0
    j_max: int = 2
    seed: Optional[int] = None
    t_grid: Optional[List[float]] = None


class MonotoneRequest(BaseModel):
    check: str                      # signs | theorem | bell
    alpha: float
    c: float = 0.5
    s: float = 1.0
    t: float = 1.0
    item: Optional[str] = None      # i | ii | iii | iv (theorem)
    max_n: int = 20
    j_max: int = 10
    j: int = 1


class FunctionSpec(BaseModel):
    """A grid/matrix function: explicit values or a named recipe."""

    values: Optional[List[float]] = None
    name: Optional[str] = None      # ones | step | gauss | sin | basis:<i> | seeded:<seed>


class SemigroupApplyRequest(BaseModel):
    generator: str
    alpha: float = 1.0
    t: float = 0.0
    f: FunctionSpec
    route: str = "spectral"


class SemigroupApplyResponse(BaseModel):
    generator: str
    alpha: float
    t: float
    values: List[float]


class SemigroupCheckRequest(BaseModel):
    generator: str
    check: str                      # quasi_monotone | derivative_bound | kadison_schwarz | balakrishnan | subordination
    alpha: float = 0.5
    c: float = 0.5
    j: int = 1
    t: float = 1.0
    t_grid: Optional[List[float]] = None
    f: Optional[FunctionSpec] = None
    seed: Optional[int] = None


class BmoSeminormRequest(BaseModel):
    generator: str
    alpha: float = 1.0
    variant: str = "bmo"
    f: FunctionSpec
    t_min: float = 1e-3
    t_max: float = 1e3
    n_t: int = 60


class BmoSeminormResponse(BaseModel):
    report: dict
    csv: str


class BmoCheckRequest(BaseModel):
    check: str                      # gamma2 | meyer | cauchy_schwarz | equivalence | translation_example | ou_separation
    generator: Optional[str] = None
    alpha: float = 1.0
    beta: float = 1.0
    s: float = 1.0
    f: Optional[FunctionSpec] = None
    s_values: List[float] = [100.0, 400.0]
    t_probe: float = 10.0
    seed: Optional[int] = None


class SymbolSpec(BaseModel):
    name: str                       # psi | power | imaginary | exp_decay | inv_log
    param: Optional[float] = None   # exponent for power, s for imaginary


class HcalcApplyRequest(BaseModel):
    generator: str
    symbol: SymbolSpec
    route: str = "contour"          # contour | regularized | imaginary
    theta: Optional[float] = None
    s: float = 1.0                  # imaginary-power exponent
    alpha: float = 0.5              # subordination index of the imaginary route


class HcalcApplyResponse(BaseModel):
    generator: str
    symbol: str
    route: str
    matrix_real: List[List[float]]
    matrix_imag: List[List[float]]
    oracle_delta: float


class HcalcCheckRequest(BaseModel):
    check: str                      # ma_sweep | a_condition | word_table
    generator: str = "two_point"
    alpha: float = 0.5
    n_patterns: int = 50
    seed: Optional[int] = None
    symbol: Optional[SymbolSpec] = None
    max_length: int = 10
    breakpoints: Optional[List[float]] = None
    values: Optional[List[float]] = None


class AcceptanceRequest(BaseModel):
    criteria: Optional[List[int]] = None
    fault: Optional[str] = None


class ReportResponse(BaseModel):
    report: dict

    @property
    def passed(self) -> bool:
        return bool(self.report.get("pass", True))


class HealthResponse(BaseModel):
    status: str
    version: str
