"""Command line entry points: serve the gateway, analyze offline, lint catalogs.

`analyze` runs the same pipeline as the service without persistence, writes
the analysis (or the validation report) as stable JSON, and exits 0 on
success, 2 on validation failure, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .alignment import InfeasibleAlignmentError
from .audio import WavFormatError
from .config import ConfigError, ServiceConfig, load_service_config
from .exercises import CatalogError, ExerciseScript, load_exercise_catalog, parse_exercise
from .phones import DEFAULT_INVENTORY
from .pipeline import ingest_wav, run_pipeline
from .posteriors import DemoProvider, PpgFormatError, load_ppg
from .serialize import analysis_to_dict, dumps_stable, validation_to_dict


def _load_exercise_file(path: Path) -> ExerciseScript:
    """Accept either a bare exercise object or a single-entry catalog."""
    raw = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(raw, dict) and "exercises" in raw:
        entries = raw["exercises"]
        if not isinstance(entries, list) or len(entries) != 1:
            raise CatalogError(f"{path}: expected exactly one exercise, got {len(entries)}")
        raw = entries[0]
    return parse_exercise(raw, DEFAULT_INVENTORY)


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        script = _load_exercise_file(Path(args.exercise))
        audio = ingest_wav(Path(args.audio).read_bytes())
        if args.ppg:
            ppg = load_ppg(args.ppg, script.inventory)
        else:
            ppg = DemoProvider().provide(audio, script)
        outcome = run_pipeline(audio, ppg, script, ServiceConfig())
    except (OSError, json.JSONDecodeError, CatalogError, WavFormatError,
            PpgFormatError, InfeasibleAlignmentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    if outcome.ok:
        out.write_text(dumps_stable({"analysis": analysis_to_dict(outcome.analysis)}),
                       encoding="utf-8")
        return 0
    out.write_text(dumps_stable({"validation": validation_to_dict(outcome.validation)}),
                   encoding="utf-8")
    print(f"validation failed: {outcome.validation.failed_code}", file=sys.stderr)
    return 2


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        config = load_service_config(args.config) if args.config else ServiceConfig()
        app = create_app(config)
    except (OSError, ConfigError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return 0


def _cmd_validate_catalog(args: argparse.Namespace) -> int:
    try:
        scripts = load_exercise_catalog(args.catalog)
    except (OSError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for script in scripts:
        phones = sum(len(w.phonemes) for w in script.words)
        print(f"{script.id}: {script.word_count} words, {phones} phonemes, "
              f"{len(script.minimal_pairs)} minimal pairs")
    print(f"ok: {len(scripts)} exercises")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capt",
                                     description="pronunciation feedback backend")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP gateway")
    serve.add_argument("--config", help="service config JSON file")
    serve.add_argument("--host", default="127.0.0.1")
    serve.set_defaults(func=_cmd_serve)

    analyze = sub.add_parser("analyze", help="analyze one recording offline")
    analyze.add_argument("--exercise", required=True, help="exercise JSON file")
    analyze.add_argument("--audio", required=True, help="WAV recording")
    analyze.add_argument("--ppg", help="posteriorgram JSON (default: demo provider)")
    analyze.add_argument("--out", required=True, help="output JSON path")
    analyze.set_defaults(func=_cmd_analyze)

    check = sub.add_parser("validate-catalog", help="check a catalog file")
    check.add_argument("catalog")
    check.set_defaults(func=_cmd_validate_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
