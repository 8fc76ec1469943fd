"""Command line entry points.

Four tools share this module, one per console script:

* ``forge``   builds functions from plain-language descriptions and runs
  the web console backend.
* ``homesim`` serves the simulated home on its own.
* ``metrics`` analyzes a source file and prints the complexity report.
* ``evalx``   runs graded datasets and writes reports, figures, and the
  generated corpora themselves.

Every main returns an exit code instead of calling sys.exit so tests can
drive them in-process.
"""

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path
from typing import List, Optional

import yaml

from .bridge import Bridge, UserDescription, construct_prompt, extract_function
from .config import (
    AppConfig,
    ConfigError,
    build_platform,
    build_provider,
    load_config,
    read_prompt_template,
)
from .harness import (
    EvalRunner,
    SchemaError,
    build_corpus,
    build_defect_corpus,
    build_repeat_bundle,
    emit_report,
    load_dataset,
    render_figures,
    write_corpus,
)
from .harness.corpus import CorpusBundle
from .homesim import DeviceState, serve
from .codemetrics import LexError, analyze
from .service import ConsoleService

RUNTIME_CHOICES = ("python3", "nodejs")


def _err(message: str) -> int:
    print(message, file=sys.stderr)
    return 2


def _print_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def _read_description(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def _load_state(path: Optional[str]) -> DeviceState:
    """Device roster from a JSON/YAML file: {"devices": {id: kind}} or the
    bare mapping."""
    if path is None:
        return DeviceState()
    raw = Path(path).read_text(encoding="utf-8")
    doc = yaml.safe_load(raw) if path.endswith((".yaml", ".yml")) else json.loads(raw)
    if isinstance(doc, dict) and isinstance(doc.get("devices"), dict):
        doc = doc["devices"]
    if not isinstance(doc, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in doc.items()
    ):
        raise ValueError(f"state file {path} must map device ids to kinds")
    return DeviceState(roster=doc)


def _wait_forever() -> None:
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        pass


# --- forge ---


def _forge_dry_run(config: AppConfig, description: UserDescription) -> int:
    provider = build_provider(config.provider)
    prompt = construct_prompt(description, template_text=read_prompt_template(config))
    response = provider.complete(prompt)
    if not response.ok:
        err = response.provider_error
        _print_json({"ok": False, "error": {"kind": err.kind, "detail": err.detail}})
        return 1
    artifact = extract_function(response.text, description.requested_runtime)
    doc = {
        "ok": artifact.ok,
        "code": artifact.selected_code,
        "dependencies": list(artifact.dependencies),
        "code_blocks": len(artifact.code_blocks),
    }
    if artifact.failure is not None:
        doc["failure"] = {
            "category": artifact.failure.category.value,
            "evidence": artifact.failure.evidence,
        }
    _print_json(doc)
    return 0 if artifact.ok else 1


def _forge_build(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    description = UserDescription(
        text=_read_description(args.desc),
        requested_runtime=args.runtime,
        task_id=args.task_id,
    )
    if args.dry_run:
        return _forge_dry_run(config, description)

    provider = build_provider(config.provider)
    platform = build_platform(config.platform)
    state = DeviceState()
    service = serve(state, "127.0.0.1", 0)
    try:
        bridge = Bridge(
            platform,
            provider,
            function_env={"HOME_API_URL": service.url},
            prompt_template=read_prompt_template(config),
        )
        outcome = bridge.build_and_deploy(description)
        doc = outcome.summary()
        if outcome.artifact is not None:
            doc["code"] = outcome.artifact.selected_code
        _print_json(doc)
        return 0 if outcome.ok else 1
    finally:
        service.stop()
        platform.shutdown()


def _forge_serve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    provider = build_provider(config.provider)
    platform = build_platform(config.platform)
    console = ConsoleService(
        platform,
        provider,
        state=_load_state(args.state),
        host=args.host,
        port=args.port,
        static_dir=args.static,
        prompt_template=read_prompt_template(config),
    )
    console.start()
    try:
        print(console.url, flush=True)
        _wait_forever()
    finally:
        console.stop()
        platform.shutdown()
    return 0


def forge_main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Build and deploy functions from plain-language descriptions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser(
        "build",
        help="one-shot build: generate, extract, deploy into a scratch "
             "platform, report the outcome, tear everything down",
    )
    build.add_argument("--desc", required=True,
                       help="description file, or - for stdin")
    build.add_argument("--runtime", required=True, choices=RUNTIME_CHOICES)
    build.add_argument("--task-id", default="cli",
                       help="identifier used in the function name")
    build.add_argument("--dry-run", action="store_true",
                       help="stop after extraction and print the artifact")
    build.add_argument("--config", help="settings file (JSON or YAML)")

    serve_cmd = sub.add_parser(
        "serve", help="run the web console backend until interrupted"
    )
    serve_cmd.add_argument("--host", default="127.0.0.1")
    serve_cmd.add_argument("--port", type=int, default=0,
                           help="0 picks a free port; the URL is printed")
    serve_cmd.add_argument("--static",
                           help="directory of console assets to serve at /")
    serve_cmd.add_argument("--state", help="device roster file")
    serve_cmd.add_argument("--config", help="settings file (JSON or YAML)")

    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return _forge_build(args)
        return _forge_serve(args)
    except (ConfigError, OSError, ValueError) as err:
        return _err(f"forge: {err}")


# --- homesim ---


def homesim_main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="homesim", description="Serve the simulated home over HTTP."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    serve_cmd = sub.add_parser("serve", help="serve device state until interrupted")
    serve_cmd.add_argument("--state", help="device roster file")
    serve_cmd.add_argument("--host", default="127.0.0.1")
    serve_cmd.add_argument("--port", type=int, default=0,
                           help="0 picks a free port; the URL is printed")
    args = parser.parse_args(argv)

    try:
        state = _load_state(args.state)
    except (OSError, ValueError, json.JSONDecodeError, yaml.YAMLError) as err:
        return _err(f"homesim: {err}")
    service = serve(state, args.host, args.port)
    try:
        print(service.url, flush=True)
        _wait_forever()
    finally:
        service.stop()
    return 0


# --- metrics ---


def metrics_main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="metrics", description="Static complexity metrics for one source file."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="print the metric report as JSON")
    an.add_argument("file", help="source file to measure")
    an.add_argument("--runtime", required=True, choices=RUNTIME_CHOICES)
    args = parser.parse_args(argv)

    try:
        code = Path(args.file).read_text(encoding="utf-8")
        report = analyze(code, args.runtime)
    except (OSError, LexError, ValueError) as err:
        return _err(f"metrics: {err}")
    _print_json(report.to_dict())
    return 0


# --- evalx ---


def _evalx_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    provider_settings = config.provider
    if args.provider:
        provider_settings = dataclasses.replace(provider_settings, kind=args.provider)
    if args.fixtures:
        provider_settings = dataclasses.replace(provider_settings, fixtures_path=args.fixtures)
    if args.seed is not None:
        provider_settings = dataclasses.replace(provider_settings, seed=args.seed)

    formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
    for fmt in formats:
        if fmt not in ("json", "csv"):
            raise ConfigError(f"unknown report format {fmt!r}")

    tasks = load_dataset(args.dataset)
    if args.runtime:
        tasks = [task for task in tasks if task.runtime == args.runtime]
        if not tasks:
            raise ConfigError(f"dataset has no {args.runtime} tasks")

    provider = build_provider(provider_settings)
    platform = build_platform(config.platform)
    try:
        runner = EvalRunner(platform, provider)
        outcomes, report = runner.run_dataset(
            tasks, trials_per_task=args.repeats, parallel=args.parallel
        )
    finally:
        platform.shutdown()

    out_dir = Path(args.out)
    written = emit_report(report, out_dir, formats)
    written.extend(render_figures(report, out_dir))
    overall = report.overall
    _print_json(
        {
            "tasks": len(tasks),
            "trials": len(outcomes),
            "syntactic_rate": overall.syntactic_rate,
            "semantic_rate": overall.semantic_rate,
            "files": sorted(str(p) for p in written),
        }
    )
    return 0


def _evalx_corpus(args: argparse.Namespace) -> int:
    if args.kind == "graded":
        bundle = build_corpus(args.runtime, per_tier=args.per_tier)
    elif args.kind == "defects":
        bundle = build_defect_corpus(args.runtime)
    else:
        task, fixtures = build_repeat_bundle(args.runtime)
        bundle = CorpusBundle(tasks=(task,), fixtures=fixtures)
    dataset_path, fixtures_path = write_corpus(bundle, args.out)
    _print_json({"dataset": str(dataset_path), "fixtures": str(fixtures_path),
                 "tasks": len(bundle.tasks)})
    return 0


def evalx_main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="evalx", description="Graded-dataset evaluation runs and corpora."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a dataset and write reports + figures")
    run.add_argument("--dataset", required=True)
    run.add_argument("--provider", choices=("live", "mock"),
                     help="override the configured provider kind")
    run.add_argument("--runtime", choices=RUNTIME_CHOICES,
                     help="run only this runtime's tasks")
    run.add_argument("--repeats", type=int, default=1,
                     help="trials per task")
    run.add_argument("--out", required=True, help="report directory")
    run.add_argument("--format", default="json,csv",
                     help="comma-separated: json,csv")
    run.add_argument("--config", help="settings file (JSON or YAML)")
    run.add_argument("--fixtures", help="mock fixture file override")
    run.add_argument("--seed", type=int, help="mock draw seed override")
    run.add_argument("--parallel", type=int, default=0,
                     help="trial thread count; 0 keeps timings faithful")

    corpus = sub.add_parser("corpus", help="generate a dataset + fixture pair")
    corpus.add_argument("--runtime", required=True, choices=RUNTIME_CHOICES)
    corpus.add_argument("--out", required=True)
    corpus.add_argument("--kind", choices=("graded", "defects", "repeat"),
                        default="graded")
    corpus.add_argument("--per-tier", type=int, default=25)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _evalx_run(args)
        return _evalx_corpus(args)
    except (ConfigError, SchemaError, OSError, ValueError) as err:
        return _err(f"evalx: {err}")
