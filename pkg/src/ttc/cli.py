"""Command-line front door over the pure engine.

Exit codes are a stable contract: 0 success, 1 validation (or other
input-condition) failure, 2 parse/schema failure, 3 internal error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .analysis import (
    InvalidProjectForExport,
    analyze_project,
    build_program,
    run_contraction,
    structured_report,
    text_report,
)
from .codegen import TARGETS, emit
from .model import InvalidNetworkError, validate_project
from .project_io import ProjectParseError, ProjectSchemaError, load_project
from .search import SEARCH_MODES, CostOverflowError, FullSearchCapExceeded

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_INTERNAL = 3


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


def _load(path: str):
    try:
        return load_project(path)
    except FileNotFoundError:
        _fail(EXIT_PARSE, f"cannot read {path}: no such file")
    except ProjectParseError as exc:
        _fail(EXIT_PARSE, f"parse error in {path}: {exc}")
    except ProjectSchemaError as exc:
        lines = [f"schema error in {path}:"]
        lines += [f"  {p}: {m}" for p, m in exc.problems]
        _fail(EXIT_PARSE, "\n".join(lines))


def _parse_dims(spec: str | None) -> dict[str, int] | None:
    if not spec:
        return None
    out = {}
    for part in spec.split(","):
        if "=" not in part:
            _fail(EXIT_PARSE, f"bad --dims entry {part!r}; expected name=value")
        name, _, val = part.partition("=")
        try:
            dim = int(val)
        except ValueError:
            _fail(EXIT_PARSE, f"bad --dims value {val!r} for {name!r}")
        if dim < 1:
            _fail(EXIT_PARSE, f"--dims {name.strip()} must be >= 1")
        out[name.strip()] = dim
    return out


def _guard(fn):
    """Run an engine call, mapping engine errors to exit codes."""
    try:
        return fn()
    except FullSearchCapExceeded as exc:
        _fail(EXIT_INVALID, f"{exc} (pass --mode quick|thorough|extensive)")
    except (InvalidNetworkError, InvalidProjectForExport, CostOverflowError) as exc:
        _fail(EXIT_INVALID, str(exc))
    except (KeyError, ValueError) as exc:
        _fail(EXIT_INVALID, str(exc))


@click.group()
@click.version_option(version=__version__, prog_name="ttc")
def main():
    """Tensor-network contraction compiler."""


@main.command()
@click.argument("file", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]),
              default="text", show_default=True)
def validate(file, fmt):
    """Validate every network in a project file."""
    project = _load(file)
    report = validate_project(project)
    if fmt == "structured":
        doc = {
            "valid": report.ok,
            "project_errors": [
                {"code": v.code, "location": v.location, "message": v.message}
                for v in report.project_errors],
            "networks": {
                str(no): [
                    {"code": v.code, "location": v.location, "message": v.message}
                    for v in report.networks[no]]
                for no in sorted(report.networks)},
        }
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for v in report.project_errors:
            click.echo(f"project error: [{v.code}] {v.location}: {v.message}")
        for no in sorted(report.networks):
            errs = report.networks[no]
            click.echo(f"Network {no}: {'VALID' if not errs else 'INVALID'}")
            for v in errs:
                click.echo(f"  [{v.code}] {v.location}: {v.message}")
    sys.exit(EXIT_OK if report.ok else EXIT_INVALID)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--mode", type=click.Choice(SEARCH_MODES), default="full",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dims", "dims", default=None,
              help="Override index-type default dimensions: name=val,...")
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]),
              default="text", show_default=True)
def analyze(file, mode, seed, dims, fmt):
    """Search contraction orders and report costs per network."""
    project = _load(file)
    analysis = _guard(lambda: analyze_project(
        project, mode=mode, seed=seed, dims=_parse_dims(dims)))
    if fmt == "structured":
        click.echo(json.dumps(structured_report(analysis), indent=2,
                              sort_keys=True))
    else:
        click.echo(text_report(analysis), nl=False)
    sys.exit(EXIT_OK if analysis.all_valid else EXIT_INVALID)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--lang", type=click.Choice(TARGETS), required=True)
@click.option("-o", "--output", "output", type=click.Path(), required=True)
@click.option("--env-search", type=click.Choice(["derived", "full"]),
              default="derived", show_default=True,
              help="Environment orders: re-root the closed tree, or re-run "
                   "the full search per environment.")
@click.option("--mode", type=click.Choice(SEARCH_MODES), default="full",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def export(file, lang, output, env_search, mode, seed):
    """Emit a standalone contraction function file."""
    project = _load(file)
    function_name = Path(output).stem

    def run():
        analysis = analyze_project(project, mode=mode, seed=seed)
        ir = build_program(project, analysis, function_name, env_search)
        return emit(ir, lang)

    source = _guard(run)
    with open(output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(source)
    click.echo(f"wrote {output}")
    sys.exit(EXIT_OK)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--net", type=int, required=True, help="Network number 1-4.")
@click.option("--env", type=int, default=0, show_default=True,
              help="0: the network as drawn; M: environment of tensor M.")
@click.option("--tensors", "tensors_file", type=click.Path(), required=True,
              help="npz archive keyed by tensor variable name.")
@click.option("--mode", type=click.Choice(SEARCH_MODES), default="full",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dims", "dims", default=None)
@click.option("-o", "--output", "output", type=click.Path(), default=None,
              help="Write the result as npz (key 'result'); default prints JSON.")
def contract(file, net, env, tensors_file, mode, seed, dims, output):
    """Contract a network on concrete tensors."""
    project = _load(file)
    try:
        with np.load(tensors_file) as data:
            arrays = {name: np.asarray(data[name]) for name in data.files}
    except FileNotFoundError:
        _fail(EXIT_PARSE, f"cannot read {tensors_file}: no such file")
    except (ValueError, OSError) as exc:
        _fail(EXIT_PARSE, f"cannot read {tensors_file}: {exc}")

    result, mults = _guard(lambda: run_contraction(
        project, net, arrays, env=env, mode=mode, seed=seed,
        dims=_parse_dims(dims)))
    if output:
        np.savez(output, result=result)
        click.echo(f"wrote {output} ({mults} multiplications)")
    else:
        doc = {"shape": list(result.shape),
               "data": np.real(result).ravel().tolist(),
               "multiplications": str(mults)}
        if np.iscomplexobj(result):
            doc["imag"] = np.imag(result).ravel().tolist()
        click.echo(json.dumps(doc))
    sys.exit(EXIT_OK)


@main.command()
@click.option("--port", type=int, default=8748, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Directory of built UI assets to serve at /.")
def serve(port, host, ui_dir):
    """Run the local analysis service."""
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


def entry():  # console-script shim that maps unexpected crashes to exit 3
    try:
        main(standalone_mode=False)
    except click.exceptions.ClickException as exc:
        exc.show()
        sys.exit(EXIT_PARSE)
    except click.exceptions.Abort:
        sys.exit(EXIT_INTERNAL)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - the contract demands exit 3
        click.echo(f"internal error: {exc!r}", err=True)
        sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    entry()
