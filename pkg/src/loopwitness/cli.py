"""Command-line front end.

Subcommands: analyze (verdict + certificate), verify (recheck a stored
certificate), simulate (greedy trace), encode (emit the solver script).

Exit codes are machine-oriented so CI can assert verdicts without parsing:
analyze returns 0 for non-termination, 1 for termination, 2 for unknown;
64 flags unparseable input, 69 a required-but-missing solver, 70 an
internal error.  JSON output is schema-versioned and byte-identical across
runs for a fixed configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys

from .certificates import (annotate_trace, certificate_from_json,
                           certificate_json, check_run, verify_witness,
                           witness_to_run)
from .config import Config, with_overrides
from .decide2d import decide
from .errors import InternalCheckError, LoopwitnessError
from .linalg import vec
from .loops import loop_hash, loop_to_relation, parse_loop
from .qnum import Q, qstr
from .simulate import greedy_run
from .smt import encode_witness_exists
from .verdicts import NonTerminating, Terminating, Unknown

SCHEMA_VERSION = 1

EXIT_NONTERMINATING = 0
EXIT_TERMINATING = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_NO_SOLVER = 69
EXIT_INTERNAL = 70

_ENV_PREFIX = "LOOPWITNESS_"

_CONFIG_KEYS = {
    "solver": str,
    "timeout": float,
    "steps": int,
    "seed": int,
    "jobs": int,
    "format": str,
    "denominator_bound": int,
    "smt": bool,
    "heuristics": bool,
    "num_starts": int,
    "box_radius": int,
}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _read_config_file(path: str) -> dict:
    """TOML-style key=value lines; '#' comments; unknown keys rejected."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            value = value.strip("\"'")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            caster = _CONFIG_KEYS[key]
            out[key] = _parse_bool(value) if caster is bool else caster(value)
    return out


def _env_overrides() -> dict:
    out = {}
    for key, caster in _CONFIG_KEYS.items():
        raw = os.environ.get(_ENV_PREFIX + key.upper())
        if raw is None:
            continue
        out[key] = _parse_bool(raw) if caster is bool else caster(raw)
    return out


def _settings_to_config(settings: dict) -> Config:
    cfg = Config()
    mapped = {
        "solver_argv": (tuple(shlex.split(settings["solver"]))
                        if "solver" in settings else None),
        "timeout_s": settings.get("timeout"),
        "steps": settings.get("steps"),
        "seed": settings.get("seed"),
        "jobs": settings.get("jobs"),
        "output_format": settings.get("format"),
        "denominator_bound": settings.get("denominator_bound"),
        "smt_enabled": settings.get("smt"),
        "heuristics_enabled": settings.get("heuristics"),
        "num_starts": settings.get("num_starts"),
        "box_radius": settings.get("box_radius"),
    }
    return with_overrides(cfg, **mapped)


def _collect_config(args) -> Config:
    settings: dict = {}
    if args.config:
        settings.update(_read_config_file(args.config))
    settings.update(_env_overrides())
    for key, attr in (("solver", "solver"), ("timeout", "timeout"),
                      ("steps", "steps"), ("seed", "seed"), ("jobs", "jobs"),
                      ("format", "format")):
        value = getattr(args, attr, None)
        if value is not None:
            settings[key] = value
    if getattr(args, "no_smt", False):
        settings["smt"] = False
    if getattr(args, "no_heuristics", False):
        settings["heuristics"] = False
    return _settings_to_config(settings)


def _load_loop(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_loop(fh.read())


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _verdict_payload(verdict, loop, cfg: Config) -> dict:
    if isinstance(verdict, NonTerminating):
        return {
            "verdict": "non_terminating",
            "method": verdict.method,
            "certificate": certificate_json(loop, verdict.witness,
                                            verdict.run),
        }
    if isinstance(verdict, Terminating):
        return {
            "verdict": "terminating",
            "method": verdict.method,
            "artifacts": verdict.artifacts,
        }
    return {"verdict": "unknown", "reason": verdict.reason}


def _cmd_analyze(args) -> int:
    cfg = _collect_config(args)
    loop = _load_loop(args.file)
    rel = loop_to_relation(loop)
    if not cfg.heuristics_enabled and cfg.smt_enabled \
            and cfg.resolved_solver() is None:
        print("error: SMT-only analysis requested but no solver is "
              "configured or installed", file=sys.stderr)
        return EXIT_NO_SOLVER
    verdict = decide(rel, cfg)
    payload = {"schemaVersion": SCHEMA_VERSION,
               "loopSha256": loop_hash(loop)}
    payload.update(_verdict_payload(verdict, loop, cfg))
    if cfg.output_format == "json":
        sys.stdout.write(_dump_json(payload))
    else:
        print(f"verdict: {payload['verdict']}"
              + (f" ({payload.get('method')})" if payload.get("method")
                 else ""))
        if isinstance(verdict, Unknown):
            print(f"reason: {verdict.reason}")
        if isinstance(verdict, NonTerminating):
            sys.stdout.write(_dump_json(payload["certificate"]))
    if isinstance(verdict, NonTerminating):
        return EXIT_NONTERMINATING
    if isinstance(verdict, Terminating):
        return EXIT_TERMINATING
    return EXIT_UNKNOWN


def _cmd_verify(args) -> int:
    cfg = _collect_config(args)
    loop = _load_loop(args.file)
    rel = loop_to_relation(loop)
    with open(args.cert, "r", encoding="utf-8") as fh:
        stored_hash, wit, trace = certificate_from_json(fh.read())
    if stored_hash != loop_hash(loop):
        print("certificate was issued for a different loop", file=sys.stderr)
        return 1
    report = verify_witness(rel, wit)
    if not report.ok:
        for cond in report.failures():
            print(f"failed: {cond.name}: {cond.detail}", file=sys.stderr)
        return 1
    steps = max(cfg.steps, 1)
    regenerated = annotate_trace(rel, witness_to_run(wit, steps).points)
    if not check_run(rel, regenerated):
        print("witness run prefix leaves the transition relation",
              file=sys.stderr)
        return 1
    if len(trace.points) >= 2 and not check_run(rel, trace):
        print("stored run prefix leaves the transition relation",
              file=sys.stderr)
        return 1
    print("certificate verified")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _collect_config(args)
    loop = _load_loop(args.file)
    rel = loop_to_relation(loop)
    try:
        start = vec([Q(part) for part in args.start.split(",")])
    except (ValueError, TypeError) as e:
        print(f"bad --start value: {e}", file=sys.stderr)
        return EXIT_USAGE
    if len(start) != rel.d:
        print(f"--start needs {rel.d} comma-separated rationals",
              file=sys.stderr)
        return EXIT_USAGE
    trace = greedy_run(rel, start, cfg.steps, Q(cfg.box_radius))
    payload = {
        "schemaVersion": SCHEMA_VERSION,
        "loopSha256": loop_hash(loop),
        "points": [[qstr(x) for x in p] for p in trace.points],
        "stepMembership": list(trace.step_membership),
    }
    sys.stdout.write(_dump_json(payload))
    return 0


def _cmd_encode(args) -> int:
    loop = _load_loop(args.file)
    rel = loop_to_relation(loop)
    sys.stdout.write(encode_witness_exists(rel).text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopwitness",
        description="Exact termination analysis for linear constraint "
                    "loops over the reals (d <= 2)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--solver", help="solver command line, e.g. 'z3 -in'")
    common.add_argument("--timeout", type=float, help="solver budget in "
                        "seconds")
    common.add_argument("--steps", type=int, help="trace/run prefix length")
    common.add_argument("--seed", type=int, help="PRNG seed for trace starts")
    common.add_argument("--jobs", type=int, help="1 = fully sequential")
    common.add_argument("--format", choices=("human", "json"))
    common.add_argument("--no-smt", action="store_true",
                        help="skip the external solver entirely")
    common.add_argument("--no-heuristics", action="store_true",
                        help="skip witness proposers; SMT only")
    common.add_argument("--config", help="key=value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", parents=[common],
                       help="decide termination and emit a certificate")
    p.add_argument("file")
    p.set_defaults(func=_cmd_analyze)
    p = sub.add_parser("verify", parents=[common],
                       help="re-verify a stored certificate")
    p.add_argument("file")
    p.add_argument("cert")
    p.set_defaults(func=_cmd_verify)
    p = sub.add_parser("simulate", parents=[common],
                       help="greedy trace from a start point")
    p.add_argument("file")
    p.add_argument("--start", required=True,
                   help="comma-separated rational coordinates")
    p.set_defaults(func=_cmd_simulate)
    p = sub.add_parser("encode", parents=[common],
                       help="emit the witness-existence solver script")
    p.add_argument("file")
    p.set_defaults(func=_cmd_encode)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except LoopwitnessError as e:
        if isinstance(e, InternalCheckError):
            print(f"internal error: {e}", file=sys.stderr)
            code = EXIT_INTERNAL
        else:
            print(f"error: {e}", file=sys.stderr)
            code = EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
