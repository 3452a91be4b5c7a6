"""HTTP service exposing the exponentiality test toolkit.

Run with ``uvicorn expgof.service:app``.  The CLI drives the same app
in-process, so every operation is reachable both ways.  Simulation
caches live under EXPGOF_CACHE_DIR when set.
"""

from __future__ import annotations

import os
from typing import List, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, field_validator

from . import efficiency as eff
from . import montecarlo as mc
from . import spectral
from .datasets import DATASETS, get_dataset
from .statistic import statistic_from_raw

app = FastAPI(title="expgof", version="0.1.0",
              description="Weighted-L2 exponentiality test service")


def cache_dir():
    return os.environ.get("EXPGOF_CACHE_DIR") or None


@app.exception_handler(ValueError)
async def _value_error(request, exc):
    raise HTTPException(status_code=400, detail=str(exc))


@app.exception_handler(ArithmeticError)
async def _numeric_error(request, exc):
    raise HTTPException(status_code=500, detail=f"numeric failure: {exc}")


def _resolve_sample(data, dataset):
    if (data is None) == (dataset is None):
        raise HTTPException(400, "provide exactly one of 'data' or 'dataset'")
    if dataset is not None:
        if dataset not in DATASETS:
            raise HTTPException(400, f"unknown dataset {dataset!r}")
        return get_dataset(dataset)
    if not data or any(v <= 0 for v in data):
        raise HTTPException(400, "data must be a nonempty list of positive values")
    return data


class SampleRequest(BaseModel):
    data: Optional[List[float]] = None
    dataset: Optional[str] = None


class TestRequest(SampleRequest):
    a: Union[float, str] = 1.0
    alpha: float = Field(default=mc.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    N: int = Field(default=mc.DEFAULT_N, ge=mc.MIN_N_REPLICATES)
    B: int = Field(default=mc.DEFAULT_B, ge=mc.MIN_BOOTSTRAP)
    grid: List[float] = Field(default=list(mc.DEFAULT_GRID))
    seed: int = 0

    @field_validator("a")
    @classmethod
    def _check_a(cls, v):
        if isinstance(v, str):
            if v != "auto":
                raise ValueError("a must be a positive number or 'auto'")
        elif v <= 0:
            raise ValueError("a must be positive")
        return v


class TestResponse(BaseModel):
    statistic: float
    a: float
    a_selected: bool
    n: int
    critical_value: float
    p_value: float
    reject: bool
    alpha: float
    N: int
    seed: int


class StatisticResponse(BaseModel):
    statistic: float
    a: float
    n: int


class CriticalValueRequest(BaseModel):
    n: int = Field(ge=mc.MIN_INFERENCE_N)
    a: float = Field(gt=0.0)
    alpha: float = Field(default=mc.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    N: int = Field(default=mc.DEFAULT_N, ge=mc.MIN_N_REPLICATES)
    seed: int = 0


class CriticalValueResponse(CriticalValueRequest):
    critical_value: float


class SelectARequest(SampleRequest):
    grid: List[float] = Field(default=list(mc.DEFAULT_GRID))
    B: int = Field(default=mc.DEFAULT_B, ge=mc.MIN_BOOTSTRAP)
    alpha: float = Field(default=mc.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    N: int = Field(default=mc.DEFAULT_N, ge=mc.MIN_N_REPLICATES)
    seed: int = 0


class SelectAResponse(BaseModel):
    a: float
    grid: List[float]
    B: int
    N: int
    seed: int


class PowerRequest(BaseModel):
    alternatives: List[str] = Field(
        default=["W(1.4)", "G(2)", "HN", "U", "CH(0.5)", "CH(1)", "CH(1.5)",
                 "LF(2)", "LF(4)", "EW(1.5)"]
    )
    n: int = Field(default=20, ge=mc.MIN_INFERENCE_N)
    a: List[float] = Field(default=list(mc.DEFAULT_GRID))
    alpha: float = Field(default=mc.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    N: int = Field(default=mc.DEFAULT_N, ge=mc.MIN_N_REPLICATES)
    seed: int = 0
    data_driven: bool = False
    B: int = Field(default=mc.DEFAULT_B, ge=mc.MIN_BOOTSTRAP)


class PowerCell(BaseModel):
    alternative: str
    n: int
    a: Optional[float] = None
    power: float
    selection_frequency: Optional[dict] = None


class PowerResponse(BaseModel):
    cells: List[PowerCell]
    alpha: float
    N: int
    seed: int


class EigenRequest(BaseModel):
    a: List[float] = Field(default=list(mc.DEFAULT_GRID))
    m: int = Field(default=spectral.DEFAULT_M, ge=2)
    B: float = Field(default=spectral.DEFAULT_B, gt=0.0)
    tol: float = Field(default=spectral.DEFAULT_TOL, gt=0.0)


class EigenCell(BaseModel):
    a: float
    delta1: float
    iterations: int
    residual: float


class EfficiencyRequest(BaseModel):
    families: List[str] = Field(default=["weibull", "gamma", "lfr", "emnw"])
    a: List[float] = Field(default=list(mc.DEFAULT_GRID))
    beta: float = Field(default=3.0, gt=1.0)
    m: int = Field(default=1500, ge=2)


class EfficiencyCell(BaseModel):
    family: str
    a: float
    efficiency: float


@app.get("/health")
def health():
    return {"status": "ok", "version": app.version}


@app.get("/datasets")
def list_datasets():
    return {name: len(values) for name, values in DATASETS.items()}


@app.get("/datasets/{name}")
def dataset_values(name: str):
    if name not in DATASETS:
        raise HTTPException(404, f"unknown dataset {name!r}")
    return {"name": name, "values": list(DATASETS[name])}


@app.post("/statistic", response_model=StatisticResponse)
def compute_statistic(req: TestRequest):
    x = _resolve_sample(req.data, req.dataset)
    if isinstance(req.a, str):
        raise HTTPException(400, "a='auto' is not supported for /statistic")
    return StatisticResponse(
        statistic=statistic_from_raw(x, req.a), a=req.a, n=len(x)
    )


@app.post("/test", response_model=TestResponse)
def run_test(req: TestRequest):
    x = _resolve_sample(req.data, req.dataset)
    if len(x) < mc.MIN_INFERENCE_N:
        raise HTTPException(
            400,
            f"inference requires n >= {mc.MIN_INFERENCE_N}; "
            "use /statistic for the bare statistic value",
        )
    outcome = mc.run_test(
        x, req.a, alpha=req.alpha, N=req.N, B=req.B, grid=req.grid,
        seed=req.seed, cache_dir=cache_dir(),
    )
    return TestResponse(
        statistic=outcome.statistic, a=outcome.a, a_selected=outcome.a_selected,
        n=outcome.n, critical_value=outcome.critical_value,
        p_value=outcome.p_value, reject=outcome.reject, alpha=outcome.alpha,
        N=outcome.N, seed=outcome.seed,
    )


@app.post("/critical-value", response_model=CriticalValueResponse)
def compute_critical_value(req: CriticalValueRequest):
    value = mc.critical_value(
        req.n, req.a, req.alpha, req.N, mc.RngStream(seed=req.seed, stream_id=1),
        cache_dir=cache_dir(),
    )
    return CriticalValueResponse(critical_value=value, **req.model_dump())


@app.post("/select-a", response_model=SelectAResponse)
def select_a(req: SelectARequest):
    x = _resolve_sample(req.data, req.dataset)
    a = mc.select_tuning(
        x, req.grid, req.B, req.alpha, mc.RngStream(seed=req.seed, stream_id=0),
        N=req.N, cache_dir=cache_dir(),
    )
    return SelectAResponse(a=a, grid=sorted(req.grid), B=req.B, N=req.N,
                           seed=req.seed)


@app.post("/power", response_model=PowerResponse)
def compute_power(req: PowerRequest):
    cells = []
    for label in req.alternatives:
        alt = mc.parse_alternative(label)
        if req.data_driven:
            result = mc.power_datadriven(
                alt, req.n, req.a, req.alpha, req.N, req.B,
                mc.RngStream(seed=req.seed, stream_id=0),
                cache_dir=cache_dir(),
            )
            cells.append(PowerCell(
                alternative=alt.label(), n=req.n, power=result.power,
                selection_frequency={str(k): v for k, v in
                                     result.selection_frequency.items()},
            ))
        else:
            for a in req.a:
                p = mc.power(
                    alt, req.n, a, req.alpha, req.N,
                    mc.RngStream(seed=req.seed, stream_id=0),
                    cache_dir=cache_dir(),
                )
                cells.append(PowerCell(alternative=alt.label(), n=req.n, a=a,
                                       power=p))
    return PowerResponse(cells=cells, alpha=req.alpha, N=req.N, seed=req.seed)


@app.post("/eigen", response_model=List[EigenCell])
def compute_eigen(req: EigenRequest):
    out = []
    for a in req.a:
        res = spectral.delta1(a, m=req.m, B=req.B, tol=req.tol)
        out.append(EigenCell(a=a, delta1=res.delta1, iterations=res.iterations,
                             residual=res.residual))
    return out


@app.post("/efficiency", response_model=List[EfficiencyCell])
def compute_efficiency(req: EfficiencyRequest):
    out = []
    for fam in req.families:
        model = eff.get_model(fam, beta=req.beta)
        curve = eff.efficiency_curve(model, req.a, m=req.m)
        for a, v in zip(curve.a_grid, curve.values):
            out.append(EfficiencyCell(family=curve.family, a=a, efficiency=v))
    return out
