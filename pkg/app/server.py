"""Optional HTTP surface over the same operations as the CLI."""
from __future__ import annotations

import logging
import os
from typing import Any, Dict, Optional

from fastapi import Body, FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import configure_logging, get_settings
from .diagram import classify, generator, validate as validate_diagram
from .errors import InputError, SchordError
from .frobenius import resolve, validate as validate_algebra
from .hochschild import Variant, cohomology
from .linalg import field_from_spec
from .prop import as_sum, boundary, sum_from_dict
from .schemas import SuiteConfig, load_model
from .verify import run_suite

LOGGER = logging.getLogger(__name__)

configure_logging()

app = FastAPI(
    title="schord",
    description="Chord diagram operations on Hochschild cochains of Frobenius algebras",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Global exception handlers to always return JSON
@app.exception_handler(SchordError)
async def schord_exception_handler(request: Request, exc: SchordError):
    status = 400 if isinstance(exc, InputError) else 422
    return JSONResponse(status_code=status, content=exc.to_dict())


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    LOGGER.exception("unhandled error on %s", request.url.path)
    return JSONResponse(
        status_code=500,
        content={"error": f"Internal server error: {str(exc)}"}
    )


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException):
    return JSONResponse(
        status_code=exc.status_code,
        content={"error": exc.detail}
    )


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    return JSONResponse(
        status_code=422,
        content={"error": f"Validation error: {str(exc)}"}
    )


async def _body(request: Request) -> Dict[str, Any]:
    try:
        body = await request.json()
    except Exception:
        raise InputError("request body is not valid JSON", "body")
    if not isinstance(body, dict):
        raise InputError("request body must be a JSON object", "body")
    return body


def _field(body: Dict[str, Any]):
    return field_from_spec(str(body.get("field") or get_settings().field))


def _diagram_sum(body: Dict[str, Any]):
    value = body.get("diagram")
    if value is None:
        raise InputError("missing diagram", "diagram")
    if isinstance(value, str):
        return as_sum(generator(value))
    return sum_from_dict(value, "diagram")


@app.get("/health")
async def health() -> JSONResponse:
    settings = get_settings()
    return JSONResponse({"status": "ok", "field": settings.field, "max_degree": settings.max_degree})


@app.post("/api/schord/algebra/validate")
async def algebra_validate(request: Request) -> JSONResponse:
    body = await _body(request)
    if "algebra" not in body:
        raise InputError("missing algebra", "algebra")
    alg = resolve(body["algebra"], _field(body))
    return JSONResponse(validate_algebra(alg))


@app.post("/api/schord/diagram/classify")
async def diagram_classify(request: Request) -> JSONResponse:
    s = _diagram_sum(await _body(request))
    if len(s) != 1:
        raise InputError(f"expected a single diagram, got {len(s)} terms", "diagram")
    d, _ = next(s.items())
    report = validate_diagram(d)
    if not report["valid"]:
        return JSONResponse(report, status_code=422)
    return JSONResponse(classify(d).to_dict())


@app.post("/api/schord/diagram/boundary")
async def diagram_boundary(request: Request) -> JSONResponse:
    s = _diagram_sum(await _body(request))
    return JSONResponse(boundary(s).to_dict())


@app.post("/api/schord/hh")
async def hochschild_cohomology(request: Request) -> JSONResponse:
    body = await _body(request)
    if "algebra" not in body or "degree" not in body:
        raise InputError("algebra and degree are required", "body")
    try:
        degree = int(body["degree"])
    except (TypeError, ValueError):
        raise InputError("degree must be an integer", "degree")
    alg = resolve(body["algebra"], _field(body))
    top = int(body.get("max_degree") or max(get_settings().max_degree, degree + 1))
    variant = Variant.FULL if body.get("full") else Variant.NORMALIZED
    return JSONResponse(cohomology(alg, degree, top, variant).to_dict())


@app.post("/api/schord/verify")
def verify(body: Optional[Dict[str, Any]] = Body(default=None)) -> JSONResponse:
    # plain def: starlette runs the suite in its threadpool
    cfg = load_model(SuiteConfig, body or {})
    report = run_suite(cfg)
    return JSONResponse(report)


def main() -> None:  # pragma: no cover
    import uvicorn
    port = int(os.environ.get("PORT", get_settings().port))
    host = os.environ.get("HOST", "0.0.0.0")
    uvicorn.run("app.server:app", host=host, port=port)


if __name__ == "__main__":  # pragma: no cover
    main()
