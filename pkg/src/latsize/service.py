"""HTTP service exposing the lattice-size toolkit.

Every computation the CLI offers is also available as a JSON endpoint, so
long-running searches can be hosted once and shared.  Polytopes travel in
the same document format the file loaders use: {"dim": d, "vertices": [...]}.
Precondition violations surface as HTTP 422 with a human-readable detail.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .generators import (
    GenSpec,
    random_polytope,
    random_width_one,
    white_tetrahedron,
)
from .harness import run_experiment, verify_counterexample
from .latticesize import METHODS, lattice_size, ls_cube_via_reduction
from .polytope import (
    DomainError,
    LatticePolytope,
    complete_to_unimodular,
    convex_hull,
    polytope_to_json,
    width_in_direction,
)
from .reduction import basis_to_json, lattice_width, reduce_basis_3d

app = FastAPI(
    title="latsize",
    version=__version__,
    description="Exact lattice width and lattice size of lattice polytopes",
)


@app.exception_handler(DomainError)
async def _domain_error(_request: Request, exc: DomainError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


class PolytopeDoc(BaseModel):
    dim: int = Field(ge=2, le=3)
    vertices: list[list[int]]

    def build(self) -> LatticePolytope:
        return convex_hull(self.vertices, self.dim)

    @staticmethod
    def dump(P: LatticePolytope) -> "PolytopeDoc":
        return PolytopeDoc(**polytope_to_json(P))


class WitnessDoc(BaseModel):
    A: list[list[int]]
    v: list[int]


class SizeRequest(BaseModel):
    polytope: PolytopeDoc
    method: str = "auto"


class SizeResponse(BaseModel):
    value: int
    witness: WitnessDoc
    method: str


class WidthResponse(BaseModel):
    value: int
    direction: list[int]
    witness: WitnessDoc
    method: str = "width"


class BasisDoc(BaseModel):
    rows: list[list[int]]
    norms: list[int]
    level: str


class ReduceResponse(BaseModel):
    value: int
    witness: WitnessDoc
    method: str = "reduce"
    basis: BasisDoc


class WhiteRequest(BaseModel):
    p: int = Field(ge=0)
    q: int = Field(ge=0)


class WidthOneRequest(BaseModel):
    bound: int = 7
    n0: tuple[int, int] = (5, 8)
    n1: tuple[int, int] = (5, 8)
    seed: int = 0
    index: int = 0


class RandomRequest(BaseModel):
    bound: int = 7
    n: tuple[int, int] = (10, 15)
    seed: int = 0
    index: int = 0


class ExperimentRequest(BaseModel):
    id: int = Field(ge=1, le=4)
    trials: int = Field(ge=1)
    seed: int = 0
    bound: int | None = None
    workers: int = 1


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/width", response_model=WidthResponse)
def width(doc: PolytopeDoc):
    P = doc.build()
    value, direction = lattice_width(P)
    rows = complete_to_unimodular(direction)
    assert width_in_direction(P, rows[0]) == value
    return WidthResponse(
        value=value,
        direction=list(direction),
        witness=WitnessDoc(A=[list(r) for r in rows], v=[0] * P.dim),
    )


@app.post("/ls", response_model=SizeResponse)
def ls_endpoint(req: SizeRequest):
    if req.method not in METHODS:
        raise DomainError(f"unknown method {req.method!r}; pick one of {METHODS}")
    res = lattice_size(req.polytope.build(), req.method)
    return SizeResponse(**res.to_json())


@app.post("/reduce", response_model=ReduceResponse)
def reduce_endpoint(doc: PolytopeDoc):
    P = doc.build()
    if P.dim != 3:
        raise DomainError("basis reduction endpoint expects a 3D polytope")
    b = reduce_basis_3d(P)
    return ReduceResponse(
        value=ls_cube_via_reduction(P),
        witness=WitnessDoc(A=[list(r) for r in b.rows], v=[0, 0, 0]),
        basis=BasisDoc(**basis_to_json(b)),
    )


@app.post("/gen/white", response_model=PolytopeDoc)
def gen_white(req: WhiteRequest):
    return PolytopeDoc.dump(white_tetrahedron(req.p, req.q))


@app.post("/gen/width-one", response_model=PolytopeDoc)
def gen_width_one(req: WidthOneRequest):
    spec = GenSpec("width_one", req.bound, (tuple(req.n0), tuple(req.n1)), req.seed)
    return PolytopeDoc.dump(random_width_one(spec, req.index))


@app.post("/gen/random", response_model=PolytopeDoc)
def gen_random(req: RandomRequest):
    spec = GenSpec("general", req.bound, (tuple(req.n),), req.seed)
    return PolytopeDoc.dump(random_polytope(spec, req.index))


@app.post("/experiment")
def experiment(req: ExperimentRequest):
    return run_experiment(
        req.id, req.trials, req.seed, bound=req.bound, workers=req.workers
    )


@app.post("/verify-counterexample")
def verify():
    return verify_counterexample()
