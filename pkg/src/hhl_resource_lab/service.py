"""FastAPI compute service wrapping the library.

Endpoints mirror the CLI subcommands one-to-one; sweep endpoints return the
finished CSV text (``format="csv"``) or a JSON table (``format="json"``), so
clients never re-format numbers.  Domain errors map to 422 responses carrying
the error class name; anything unexpected maps to 500.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__, experiments
from .errors import DegeneracyWarning, HHLLabError, RangeError

Entry = Union[float, tuple[float, float]]


def _to_complex(entries) -> np.ndarray:
    return np.array(
        [complex(e[0], e[1]) if isinstance(e, (tuple, list)) else complex(e) for e in entries]
    )


class SystemSpec(BaseModel):
    """Problem source: a builtin name or an inline matrix, plus b, C and n.

    Matrix and vector entries are real numbers or [re, im] pairs.  ``b`` is
    scaled to unit length; ``c="auto"`` picks the default fraction of the
    smallest eigenvalue.
    """

    name: Optional[Literal["paper-2d", "paper-3d"]] = None
    matrix: Optional[list[list[Entry]]] = None
    b: Optional[list[Entry]] = None
    c: Union[Literal["auto"], float] = "auto"
    n: Optional[int] = None

    def resolve_matrix(self) -> np.ndarray:
        if self.name is not None and self.matrix is not None:
            raise RangeError("give either a builtin name or an inline matrix, not both")
        if self.name is not None:
            return experiments.builtin_matrix(self.name)
        if self.matrix is None:
            raise RangeError("system needs a builtin name or an inline matrix")
        return np.array([_to_complex(row) for row in self.matrix])

    def resolve_b(self) -> np.ndarray:
        if self.b is not None:
            return _to_complex(self.b)
        if self.name is not None:
            return np.asarray(experiments.default_b(self.name), dtype=complex)
        raise RangeError("system needs a constant vector b")


class GridAxis(BaseModel):
    min: float
    max: float
    steps: int = Field(ge=2)

    def as_tuple(self) -> tuple[float, float, int]:
        return (self.min, self.max, self.steps)


class SolveRequest(BaseModel):
    system: SystemSpec


class SweepBRequest(BaseModel):
    system: SystemSpec
    grids: list[GridAxis]
    stage: str = "psi_2"
    seed: int = 0
    format: Literal["csv", "json"] = "csv"


class SweepKappaRequest(BaseModel):
    grid: GridAxis
    b: list[Entry] = [0.3]
    c: Union[Literal["auto"], float] = "auto"
    stage: str = "psi_2"
    seed: int = 0
    format: Literal["csv", "json"] = "csv"


class DisorderRequest(BaseModel):
    system: SystemSpec
    grid: GridAxis
    sigmas: list[float]
    realizations: int = Field(default=10_000, ge=1)
    seed: int = 0
    format: Literal["csv", "json"] = "csv"


class MicroGgmRequest(BaseModel):
    system: SystemSpec


def _table_response(table: experiments.SweepTable, fmt: str):
    if fmt == "json":
        return JSONResponse(table.to_json_obj())
    return PlainTextResponse(table.to_csv(), media_type="text/csv")


def create_app() -> FastAPI:
    app = FastAPI(title="hhl-resource-lab", version=__version__)

    @app.exception_handler(HHLLabError)
    async def _domain_error(request: Request, exc: HHLLabError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(DegeneracyWarning)
    async def _degeneracy(request: Request, exc: DegeneracyWarning):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(Exception)
    async def _unexpected(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/solve")
    def solve(req: SolveRequest):
        sys_ = req.system
        return experiments.solve_payload(
            sys_.resolve_matrix(), sys_.resolve_b(), c=sys_.c, n=sys_.n
        )

    @app.post("/sweep/b")
    def sweep_b(req: SweepBRequest):
        table = experiments.sweep_b(
            req.system.resolve_matrix(),
            [g.as_tuple() for g in req.grids],
            c=req.system.c,
            n=req.system.n,
            stage=req.stage,
            seed=req.seed,
        )
        return _table_response(table, req.format)

    @app.post("/sweep/kappa")
    def sweep_kappa(req: SweepKappaRequest):
        table = experiments.sweep_kappa(
            req.grid.as_tuple(),
            b=_to_complex(req.b),
            c=req.c,
            stage=req.stage,
            seed=req.seed,
        )
        return _table_response(table, req.format)

    @app.post("/disorder")
    def disorder(req: DisorderRequest):
        table = experiments.disorder_sweep(
            req.system.resolve_matrix(),
            req.grid.as_tuple(),
            sigmas=req.sigmas,
            realizations=req.realizations,
            seed=req.seed,
            c=req.system.c,
            n=req.system.n,
        )
        return _table_response(table, req.format)

    @app.post("/micro-ggm")
    def micro(req: MicroGgmRequest):
        sys_ = req.system
        return experiments.micro_ggm_payload(
            sys_.resolve_matrix(), sys_.resolve_b(), c=sys_.c, n=sys_.n
        )

    return app


app = create_app()
