"""HTTP facade over the verification services.

Run with::

    uvicorn spincontrast.api:app

Every endpoint accepts the same option body (state, model, grid, samples,
seed) and returns the typed report envelope that the CLI serializes.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .errors import NumericFailureError
from .schemas import (
    ContrastEnvelope,
    LemmaEnvelope,
    RunOptions,
    SuiteEnvelope,
    VerificationEnvelope,
)
from .service import run_all, run_contrast, run_lemma_check, run_verify_hv, run_verify_quantum

app = FastAPI(
    title="spincontrast",
    version=__version__,
    description=(
        "Direction-integrated squared expectation values for a single spin-1/2: "
        "the quantum side against classical outcome models."
    ),
)


def _guarded(runner, options: RunOptions):
    try:
        return runner(options)
    except FileNotFoundError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except NumericFailureError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok", "version": __version__}


@app.post("/contrast", response_model=ContrastEnvelope)
def contrast(options: RunOptions) -> ContrastEnvelope:
    return _guarded(run_contrast, options)


@app.post("/verify/quantum", response_model=VerificationEnvelope)
def verify_quantum(options: RunOptions) -> VerificationEnvelope:
    return _guarded(run_verify_quantum, options)


@app.post("/verify/hv", response_model=VerificationEnvelope)
def verify_hv(options: RunOptions) -> VerificationEnvelope:
    return _guarded(run_verify_hv, options)


@app.post("/lemma-check", response_model=LemmaEnvelope)
def lemma_check(options: RunOptions) -> LemmaEnvelope:
    return _guarded(run_lemma_check, options)


@app.post("/all", response_model=SuiteEnvelope)
def run_everything(options: RunOptions) -> SuiteEnvelope:
    return _guarded(run_all, options)
