"""
rankone HTTP API.

A thin FastAPI layer over the services package. Requests use the same pydantic
models as the CLI and responses are the same Report, OracleReport and
conversion rows, so a report fetched over HTTP is byte-identical to the one
``rankone check`` prints.

Author: rankone maintainers
Version: 1.0.0
"""

import logging
from contextlib import asynccontextmanager
from typing import Any, AsyncGenerator, Dict, List

from fastapi import FastAPI, Request, status
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from rankone.api.endpoints import checks, kinematics
from rankone.config import settings
from rankone.exceptions import RankOneError
from rankone.logging_config import configure_logging
from rankone.services import zoo

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncGenerator[None, None]:
    """
    Startup and shutdown hook.

    Building the catalog once at startup runs every registration check, so a
    broken entry stops the server before it accepts requests.

    Args:
        app (FastAPI): The application being served.

    Yields:
        None: Control returns to the server until shutdown.
    """
    configure_logging()
    entries = len(zoo.catalog())
    logger.info(
        "%s %s up (%s), %d catalog entries",
        settings.app_name,
        settings.app_version,
        settings.environment,
        entries,
    )
    yield
    logger.info("%s stopped", settings.app_name)


app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Rank-one convexity and polyconvexity checks for planar energies",
    lifespan=lifespan,
    # Interactive docs only outside production
    docs_url=None if settings.is_production else "/docs",
    redoc_url=None if settings.is_production else "/redoc",
)


def _field_errors(exc: RequestValidationError) -> List[Dict[str, str]]:
    """One record per invalid field; the location drops its 'body' prefix."""
    return [
        {
            "field": " -> ".join(str(part) for part in error["loc"][1:]),
            "message": error["msg"],
            "type": error["type"],
        }
        for error in exc.errors()
    ]


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(
    request: Request, exc: RequestValidationError
) -> JSONResponse:
    """Malformed request bodies: HTTP 422 with per-field records."""
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={"detail": "Validation error", "errors": _field_errors(exc)},
    )


@app.exception_handler(RankOneError)
async def domain_exception_handler(request: Request, exc: RankOneError) -> JSONResponse:
    """
    Well-formed requests the domain rejects: unknown energies, parameters out
    of range, expressions that do not parse, non-finite matrices.

    Returns:
        JSONResponse: HTTP 422 with the message and the error class name.
    """
    logger.info("rejected %s: %s", request.url.path, exc)
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={"detail": str(exc), "error_type": type(exc).__name__},
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """Anything else is a server bug; production hides the message."""
    logger.exception("unhandled error on %s", request.url.path)
    detail = "Internal server error" if settings.is_production else str(exc)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={"detail": detail},
    )


@app.get("/", include_in_schema=False)
async def root() -> Dict[str, Any]:
    """Service name, version and environment."""
    return {
        "status": "healthy",
        "app": settings.app_name,
        "version": settings.app_version,
        "environment": settings.environment,
    }


@app.get("/health", tags=["monitoring"])
async def health_check() -> Dict[str, Any]:
    """
    Liveness probe.

    There are no external services; the catalog size stands in for them so a
    failed catalog build is visible here.
    """
    return {"status": "healthy", "services": {"catalog": len(zoo.names())}}


app.include_router(checks.router, prefix=settings.api_v1_prefix)
app.include_router(kinematics.router, prefix=settings.api_v1_prefix)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "rankone.main:app",
        host="127.0.0.1",
        port=8000,
        reload=settings.is_development,
        log_level=settings.log_level.lower(),
    )
