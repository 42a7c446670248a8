"""Operator command line: verify claims, run datasets, contest
frameworks, run the property suites, serve the API.

Exit codes: 0 success, 1 runtime failure, 2 usage error,
3 property counterexample found.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from claimarg import contestation, generation, harness, pipeline, semantics
from claimarg import qbaf as qbaf_mod
from claimarg.generation import GenerationParams, MockBackend
from claimarg.llm_client import ClientError, DiskCache, LlmBackend, ModelConfig

EXIT_RUNTIME = 1
EXIT_COUNTEREXAMPLE = 3

METHOD_NAMES = [
    "argllm-0.5-d1",
    "argllm-0.5-d2",
    "argllm-est-d1",
    "argllm-est-d2",
    "direct_question",
    "est_confidence",
    "chain_of_thought",
]


def _backend_options(fn):
    for option in reversed(
        [
            click.option("--mock/--no-mock", default=None, help="Use the offline deterministic backend (default when no endpoint is configured)."),
            click.option("--seed", type=int, default=0, show_default=True, help="Seed for the mock backend and sampling."),
            click.option("--endpoint", default=None, help="Chat-completions endpoint URL."),
            click.option("--model", default=None, help="Model name for the endpoint."),
            click.option("--cache-dir", default=None, help="Response cache directory."),
            click.option("--no-cache", is_flag=True, help="Bypass the response cache."),
        ]
    ):
        fn = option(fn)
    return fn


def _make_backend(mock, seed, endpoint, model, cache_dir, no_cache, caching_default: bool):
    if mock is None:
        mock = endpoint is None and not ModelConfig.from_env().endpoint_url
    if mock:
        return MockBackend(seed=seed)
    overrides = {}
    if endpoint:
        overrides["endpoint_url"] = endpoint
    if model:
        overrides["model_name"] = model
    config = ModelConfig.from_env(**overrides)
    cache = None
    if not no_cache and caching_default:
        cache = DiskCache(cache_dir or ".claimarg-cache")
    elif cache_dir and not no_cache:
        cache = DiskCache(cache_dir)
    return LlmBackend(config, cache)


def _method_config(name: str, backend, semantics_name: str) -> pipeline.MethodConfig:
    if name.startswith("argllm"):
        try:
            _, mode, depth = name.split("-")
            params = GenerationParams(
                depth=int(depth.removeprefix("d")),
                claim_base_mode=generation.FIXED_HALF if mode == "0.5" else generation.ESTIMATED,
            )
        except ValueError:
            raise click.UsageError(f"unknown method {name!r}") from None
        return pipeline.MethodConfig(
            method=pipeline.ARGLLM,
            backend=backend,
            semantics=semantics_name,
            generation=params,
        )
    if name not in pipeline.METHODS:
        raise click.UsageError(f"unknown method {name!r}")
    return pipeline.MethodConfig(method=name, backend=backend)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log at debug level.")
def main(verbose: bool):
    """Claim verification and contestation with argument trees."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.argument("claim")
@click.option("--context", default=None, help="Trusted background information.")
@click.option("--method", default="argllm", show_default=True,
              type=click.Choice(list(pipeline.METHODS)))
@click.option("--semantics", "semantics_name", default=semantics.DF_QUAD,
              show_default=True, type=click.Choice(semantics.semantics_names()))
@click.option("--depth", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--base-mode", default=generation.FIXED_HALF, show_default=True,
              type=click.Choice([generation.FIXED_HALF, generation.ESTIMATED]))
@click.option("--dump", type=click.Path(dir_okay=False), default=None,
              help="Write the framework document to this file.")
@_backend_options
def verify(claim, context, method, semantics_name, depth, base_mode, dump,
           mock, seed, endpoint, model, cache_dir, no_cache):
    """Verify a single claim and print the verdict."""
    backend = _make_backend(mock, seed, endpoint, model, cache_dir, no_cache,
                            caching_default=False)
    config = pipeline.MethodConfig(
        method=method,
        backend=backend,
        semantics=semantics_name,
        generation=GenerationParams(depth=depth, claim_base_mode=base_mode),
    )
    claim_obj = pipeline.Claim(id="cli", text=claim, context=context)
    try:
        verdict = pipeline.verify(claim_obj, config)
    except (generation.BackendError, ClientError, pipeline.AnswerParseError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)

    click.echo(f"claim: {claim}")
    click.echo(f"method: {verdict.method}")
    click.echo(f"strength: {verdict.root_strength:.6f}")
    click.echo(f"label: {verdict.label}")
    if verdict.qbaf is not None:
        click.echo(f"arguments: {len(verdict.qbaf)}")
        for arg in verdict.qbaf:
            strength = (verdict.strengths or {}).get(arg.id, 0.0)
            marker = "*" if arg.id == verdict.qbaf.root else " "
            click.echo(
                f" {marker} {arg.id}: tau={arg.base_score:.2f} sigma={strength:.4f} {arg.text}"
            )
        if dump:
            doc = qbaf_mod.to_dict(
                verdict.qbaf, {verdict.semantics or "": verdict.strengths or {}}
            )
            Path(dump).write_text(json.dumps(doc, indent=2), "utf-8")
            click.echo(f"framework written to {dump}")


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--methods", default="argllm-0.5-d1", show_default=True,
              help="Comma-separated method names: " + ", ".join(METHOD_NAMES))
@click.option("--semantics", "semantics_name", default=semantics.DF_QUAD,
              show_default=True, type=click.Choice(semantics.semantics_names()))
@click.option("--sample", type=click.IntRange(min=1), default=None,
              help="Label-balanced subset size.")
@click.option("--outdir", type=click.Path(file_okay=False), default="results",
              show_default=True)
@_backend_options
def evaluate(dataset_path, methods, semantics_name, sample, outdir,
             mock, seed, endpoint, model, cache_dir, no_cache):
    """Run methods over a claim dataset and write accuracy tables."""
    backend = _make_backend(mock, seed, endpoint, model, cache_dir, no_cache,
                            caching_default=True)
    try:
        dataset = harness.load_dataset(dataset_path)
    except harness.DatasetError as exc:
        raise click.UsageError(str(exc)) from exc
    configs = [
        _method_config(name.strip(), backend, semantics_name)
        for name in methods.split(",")
        if name.strip()
    ]
    if not configs:
        raise click.UsageError("no methods given")
    try:
        results = harness.run(dataset, configs, sample=sample, seed=seed)
    except harness.DatasetError as exc:
        raise click.UsageError(str(exc)) from exc
    paths = harness.write_results(results, outdir)
    click.echo(harness.format_table(results), nl=False)
    click.echo(f"results written to {paths['table'].parent}")


@main.command()
@click.argument("framework_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("edits_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--semantics", "semantics_name", default=semantics.DF_QUAD,
              show_default=True, type=click.Choice(semantics.semantics_names()))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the edited framework document to this file.")
def contest(framework_file, edits_file, semantics_name, out):
    """Apply a scripted sequence of edits to a framework and print diffs."""
    try:
        framework = qbaf_mod.from_json(Path(framework_file).read_text("utf-8"))
        edit_docs = json.loads(Path(edits_file).read_text("utf-8"))
        if not isinstance(edit_docs, list):
            raise ValueError("edits file must contain a JSON array of edits")
        edits = [contestation.edit_from_dict(doc) for doc in edit_docs]
    except (json.JSONDecodeError, ValueError, qbaf_mod.QbafError) as exc:
        raise click.UsageError(f"cannot read inputs: {exc}") from exc

    current = framework
    for index, edit in enumerate(edits):
        try:
            current, diff = contestation.apply_edit(current, edit, semantics_name)
        except qbaf_mod.QbafError as exc:
            click.echo(f"edit {index} failed: {exc}", err=True)
            sys.exit(EXIT_RUNTIME)
        click.echo(
            f"edit {index}: {edit.kind} {edit.target} "
            f"root {diff.before_root_strength:.4f} -> {diff.after_root_strength:.4f} "
            f"label {diff.before_label} -> {diff.after_label} "
            f"predicted {diff.predicted_direction}"
            + ("  [VERDICT FLIPPED]" if diff.flipped else "")
        )
    if out:
        Path(out).write_text(qbaf_mod.to_json(current), "utf-8")
        click.echo(f"edited framework written to {out}")


@main.command("check-properties")
@click.option("--semantics", "semantics_name", default=semantics.DF_QUAD,
              show_default=True, type=click.Choice(semantics.semantics_names()))
@click.option("--trials", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def check_properties(semantics_name, trials, seed):
    """Randomized contestability trials; nonzero exit on a counterexample."""
    report = contestation.check_properties(semantics_name, trials, seed=seed)
    mode = "strict" if report.strict else "weak"
    click.echo(
        f"{report.semantics}: {report.checked} trials, {mode} inequalities, "
        f"{len(report.violations)} violation(s)"
    )
    for violation in report.violations[:20]:
        click.echo(f"  counterexample: {violation}")
    if not report.passed:
        sys.exit(EXIT_COUNTEREXAMPLE)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--snapshot-dir", type=click.Path(file_okay=False), default=None,
              help="Persist contestation sessions here.")
@click.option("--cors", is_flag=True, help="Allow cross-origin requests (UI development).")
def serve(host, port, snapshot_dir, cors):
    """Run the HTTP API."""
    import uvicorn

    from claimarg.service import create_app

    app = create_app(snapshot_dir=snapshot_dir, allow_cors=cors)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
