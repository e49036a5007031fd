"""Local HTTP facade over the engine for the interactive design loop.

Stateless by construction: every response is a pure function of the request
body, and the analyze/export endpoints return exactly what the CLI prints
for the same input (one source of truth in ``analysis``).  The service
holds no project store; the UI owns persistence.  No CORS headers are
added, so browsers confine the API to the origin that served the UI.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.concurrency import run_in_threadpool

from . import __version__
from .analysis import (
    analyze_project,
    build_program,
    planned_cost,
    run_contraction,
    structured_report,
)
from .codegen import TARGETS, EmissionError, emit
from .environments import EnvironmentOfOpenNetworkError
from .model import InvalidNetworkError, validate_project
from .project_io import ProjectParseError, ProjectSchemaError, loads_project
from .search import SEARCH_MODES, CostOverflowError, FullSearchCapExceeded

DEFAULT_CONTRACT_BUDGET = 10 ** 8


def _error(status: int, errors) -> JSONResponse:
    if isinstance(errors, str):
        errors = [{"message": errors}]
    return JSONResponse(status_code=status, content={"errors": errors})


def _violations_doc(violations):
    return [{"code": v.code, "location": v.location, "message": v.message}
            for v in violations]


async def _read_project(request: Request):
    """Returns (project, raw body dict) or an error response."""
    try:
        body = await request.json()
    except Exception:
        return None, None, _error(400, "request body is not valid JSON")
    if not isinstance(body, dict) or "project" not in body:
        return None, None, _error(400, "body must be an object with a 'project' field")
    import json as _json

    try:
        project = loads_project(_json.dumps(body["project"]))
    except ProjectParseError as exc:
        return None, None, _error(400, str(exc))
    except ProjectSchemaError as exc:
        return None, None, _error(
            400, [{"location": p, "message": m} for p, m in exc.problems])
    return project, body, None


def _search_params(body):
    mode = body.get("mode", "full")
    if mode not in SEARCH_MODES:
        return None, None, None, _error(400, f"unknown mode {mode!r}")
    seed = body.get("seed", 0)
    if not isinstance(seed, int):
        return None, None, None, _error(400, "seed must be an integer")
    dims = body.get("dims")
    if dims is not None:
        if (not isinstance(dims, dict)
                or not all(isinstance(v, int) and v >= 1 for v in dims.values())):
            return None, None, None, _error(
                400, "dims must map index-type names to integers >= 1")
    return mode, seed, dims, None


def create_app(ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="ttc", version=__version__)
    budget = int(os.environ.get("TTC_CONTRACT_BUDGET", DEFAULT_CONTRACT_BUDGET))

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/api/validate")
    async def validate(request: Request):
        project, _, err = await _read_project(request)
        if err:
            return err
        report = validate_project(project)
        return {
            "valid": report.ok,
            "project_errors": _violations_doc(report.project_errors),
            "networks": {str(no): _violations_doc(report.networks[no])
                         for no in sorted(report.networks)},
        }

    @app.post("/api/analyze")
    async def analyze(request: Request):
        project, body, err = await _read_project(request)
        if err:
            return err
        mode, seed, dims, err = _search_params(body)
        if err:
            return err
        try:
            analysis = await run_in_threadpool(
                analyze_project, project, mode=mode, seed=seed, dims=dims)
        except FullSearchCapExceeded as exc:
            return _error(422, f"{exc} (select a restricted mode)")
        except CostOverflowError as exc:
            return _error(422, str(exc))
        doc = structured_report(analysis)
        status = 200 if analysis.all_valid else 422
        return JSONResponse(status_code=status, content=doc)

    @app.post("/api/export")
    async def export(request: Request):
        project, body, err = await _read_project(request)
        if err:
            return err
        lang = body.get("lang")
        if lang not in TARGETS:
            return _error(400, f"unknown dialect {lang!r}; "
                               f"expected one of {', '.join(TARGETS)}")
        function_name = body.get("function_name", "contract_network")
        env_search = body.get("env_search", "derived")
        if env_search not in ("derived", "full"):
            return _error(400, f"unknown env_search {env_search!r}")
        mode, seed, dims, err = _search_params(body)
        if err:
            return err
        try:
            analysis = await run_in_threadpool(
                analyze_project, project, mode=mode, seed=seed, dims=dims)
            if not analysis.all_valid:
                return JSONResponse(status_code=422,
                                    content=structured_report(analysis))
            ir = await run_in_threadpool(
                build_program, project, analysis, function_name, env_search)
            source = emit(ir, lang)
        except FullSearchCapExceeded as exc:
            return _error(422, f"{exc} (select a restricted mode)")
        except (EmissionError, CostOverflowError) as exc:
            return _error(422, str(exc))
        return PlainTextResponse(source)

    @app.post("/api/contract")
    async def contract(request: Request):
        project, body, err = await _read_project(request)
        if err:
            return err
        mode, seed, dims, err = _search_params(body)
        if err:
            return err
        net_no = body.get("net")
        env = body.get("env", 0)
        if not isinstance(net_no, int) or not isinstance(env, int):
            return _error(400, "net and env must be integers")
        raw = body.get("tensors")
        if not isinstance(raw, dict):
            return _error(400, "tensors must map names to {shape, data[, imag]}")
        arrays = {}
        for name, spec in raw.items():
            try:
                shape = tuple(spec["shape"])
                data = np.asarray(spec["data"], dtype=float).reshape(shape)
                if "imag" in spec:
                    data = data + 1j * np.asarray(spec["imag"],
                                                  dtype=float).reshape(shape)
            except Exception:
                return _error(400, f"tensor {name!r} is not a valid "
                                   f"{{shape, data[, imag]}} document")
            arrays[name] = data

        # cost gate before any numeric work keeps the service interactive
        try:
            analysis = await run_in_threadpool(
                analyze_project, project, mode=mode, seed=seed, dims=dims)
            target = analysis.network(net_no)
        except (FullSearchCapExceeded, CostOverflowError) as exc:
            return _error(422, str(exc))
        except KeyError as exc:
            return _error(422, str(exc.args[0]))
        if not target.valid:
            return JSONResponse(status_code=422, content={
                "errors": _violations_doc(target.violations)})
        try:
            mults = planned_cost(analysis, net_no, env)
        except EnvironmentOfOpenNetworkError as exc:
            return JSONResponse(status_code=422, content={
                "errors": [{"code": exc.code, "message": str(exc)}]})
        except ValueError as exc:
            return _error(422, str(exc))
        if mults > budget:
            return JSONResponse(status_code=413, content={
                "errors": [{"message": "contraction exceeds the service budget",
                            "multiplications": str(mults),
                            "budget": str(budget)}]})
        try:
            result, mults = await run_in_threadpool(
                run_contraction, project, net_no, arrays, env=env,
                analysis=analysis)
        except EnvironmentOfOpenNetworkError as exc:
            return JSONResponse(status_code=422, content={
                "errors": [{"code": exc.code, "message": str(exc)}]})
        except (InvalidNetworkError, KeyError, ValueError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            return _error(422, str(msg))
        doc = {"shape": list(result.shape),
               "data": np.real(result).ravel().tolist(),
               "multiplications": str(mults)}
        if np.iscomplexobj(result):
            doc["imag"] = np.imag(result).ravel().tolist()
        return doc

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
