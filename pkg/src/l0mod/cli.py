"""Command-line front end.

Every subcommand writes one JSON document (sorted keys, fixed indentation)
to stdout or ``--out``.  Exit status: 0 on success, 1 when a verdict fails,
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass

from . import __version__
from .errors import L0Error, PreconditionError
from .ftag import _endpoint_pairs, _over_pairs, affine_decompose, ftag_check, fuzz, line_to_line_check, run_gallery
from .geometry import Line, Segment, line_image_equals, segment_image_equals
from .maps import is_invertible, is_local, is_stable
from .modules import rank_decomposition
from .sampling import DEFAULT_PLAN, SamplingPlan
from .serialize import decode_element, decode_generators, decode_map, decode_space, dumps, loads

CHECKS = ("stable", "local", "invertible", "segments", "lines", "affine", "line_to_line")


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    mode: str = "rational"
    tolerance: float | None = None
    seed: int = 0
    budget: int | None = None
    out: str | None = None

    def __post_init__(self):
        if self.mode not in ("rational", "float"):
            raise InputError(f"mode must be rational or float, got {self.mode!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.budget is not None and self.budget < 1:
            raise InputError("budget must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must be a 64-bit unsigned integer")

    @property
    def plan(self) -> SamplingPlan:
        return DEFAULT_PLAN if self.budget is None else DEFAULT_PLAN.with_budget(self.budget)


def _read_json(arg: str, what: str, mode: str):
    """Accept a path or inline JSON text."""
    text, source = arg, "<inline>"
    if not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg, encoding="utf-8") as fh:
                text, source = fh.read(), arg
        except OSError as exc:
            raise InputError(f"{what}: cannot read {arg}: {exc.strerror}") from None
    try:
        return loads(text, mode)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: malformed JSON at {source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _need(args, name: str):
    val = getattr(args, name)
    if val is None:
        raise InputError(f"--{name} is required for {args.command}")
    return val


def _space(args, cfg: RunConfig):
    return decode_space(_read_json(_need(args, "space"), "space", cfg.mode), cfg.mode, cfg.tolerance)


def _map(args, cfg: RunConfig):
    space = _space(args, cfg)
    return decode_map(_read_json(_need(args, "map"), "map", cfg.mode), space)


def _seed_from_env() -> int:
    raw = os.environ.get("L0MOD_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"L0MOD_SEED must be an integer, got {raw!r}") from None


# --------------------------------------------------------------------------
# subcommands; each returns (report, exit status)


def cmd_decompose(args, cfg):
    space = _space(args, cfg)
    gens = decode_generators(_read_json(_need(args, "generators"), "generators", cfg.mode), space)
    part = rank_decomposition(gens)
    return {"partition": part, "ranks": [part.rank_at(a) for a in space.atoms]}, 0


def cmd_segment(args, cfg):
    space = _space(args, cfg)
    x = decode_element(_read_json(_need(args, "x"), "x", cfg.mode), space, "x")
    y = decode_element(_read_json(_need(args, "y"), "y", cfg.mode), x.module, "y")
    z = decode_element(_read_json(_need(args, "z"), "z", cfg.mode), x.module, "z")
    shape = Line(x, y) if args.line else Segment(x, y)
    lam, bad = shape.solve(z)
    kind = "line" if args.line else "segment"
    if lam is None:
        return {"kind": kind, "result": "not-member", "atom": bad}, 1
    return {"kind": kind, "result": "member", "lambda": lam}, 0


def _run_check(name, T, cfg):
    plan, seed = cfg.plan, cfg.seed
    if name == "stable":
        return is_stable(T, plan, seed)
    if name == "local":
        return is_local(T, plan, seed)
    if name == "invertible":
        return is_invertible(T)
    if name in ("segments", "lines"):
        import random
        pairs = _endpoint_pairs(T, random.Random(seed), plan)
        check = segment_image_equals if name == "segments" else line_image_equals
        cert = _over_pairs(check, T, pairs, plan, seed, name)
        if cert is None:
            raise PreconditionError("segment check needs an affine or invertible map")
        return cert
    if name == "affine":
        return affine_decompose(T, plan, seed).certification
    if name == "line_to_line":
        return line_to_line_check(T, plan, seed)
    raise InputError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")


def cmd_check_map(args, cfg):
    names = [c.strip() for c in (args.checks or "stable,local,segments").split(",") if c.strip()]
    for n in names:
        if n not in CHECKS:
            raise InputError(f"unknown check {n!r}; choose from {', '.join(CHECKS)}")
    T = _map(args, cfg)
    certs = {n: _run_check(n, T, cfg) for n in names}
    passed = all(c.passed for c in certs.values())
    return {"passed": passed, "certificates": certs, "seed": cfg.seed}, 0 if passed else 1


def cmd_ftag(args, cfg):
    T = _map(args, cfg)
    report = ftag_check(T, cfg.plan, cfg.seed)
    # A report whose conclusion contradicts certified hypotheses is a verdict failure.
    return {"report": report, "seed": cfg.seed}, 0 if report.consistent else 1


def cmd_gallery(args, cfg):
    results = run_gallery(cfg.plan, cfg.seed)
    ok = all(r["match"] for r in results)
    return {"items": results, "all_match": ok, "seed": cfg.seed}, 0 if ok else 1


def cmd_fuzz(args, cfg):
    dims = tuple(int(d) for d in args.dims.split(","))
    if not dims or min(dims) < 1:
        raise InputError("--dims must be positive integers")
    start = time.perf_counter()
    summary = fuzz(args.trials, cfg.seed, dims, cfg.plan, cfg.mode)
    elapsed = time.perf_counter() - start
    # Wall-clock time would break byte-identical reports, so it goes to stderr.
    print(f"mean runtime: {elapsed / max(args.trials, 1):.6f} s/trial "
          f"({elapsed:.3f} s total)", file=sys.stderr)
    ok = summary["passes"] == summary["trials"]
    return summary, 0 if ok else 1


COMMANDS = {"decompose": cmd_decompose, "segment": cmd_segment, "check-map": cmd_check_map,
            "ftag": cmd_ftag, "gallery": cmd_gallery, "fuzz": cmd_fuzz}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("rational", "float"), default="rational")
    common.add_argument("--tolerance", type=float, help="comparison tolerance in float mode")
    common.add_argument("--seed", type=int, help="random seed (default: $L0MOD_SEED or 0)")
    common.add_argument("--budget", type=int, help="sampled pairs per checker")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--space", help="space JSON (path or inline)")

    p = argparse.ArgumentParser(prog="l0mod", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"l0mod {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decompose", parents=[common], help="rank partition of a generator family")
    s.add_argument("--generators", help="generators JSON")
    s = sub.add_parser("segment", parents=[common], help="segment or line membership")
    for name in ("x", "y", "z"):
        s.add_argument(f"--{name}", help=f"element {name} JSON")
    s.add_argument("--line", action="store_true", help="test l(x, y) instead of [x, y]")
    s = sub.add_parser("check-map", parents=[common], help="run property checkers on a map")
    s.add_argument("--map", help="map JSON")
    s.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    s = sub.add_parser("ftag", parents=[common], help="full theorem report for a map")
    s.add_argument("--map", help="map JSON")
    sub.add_parser("gallery", parents=[common], help="run the counterexample gallery")
    s = sub.add_parser("fuzz", parents=[common], help="theorem consistency on random affine maps")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--dims", default="2,2,2", help="per-atom dimensions, comma separated")
    return p


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".l0mod-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "fuzz" and args.trials < 1:
            raise InputError("--trials must be at least 1")
        seed = args.seed if args.seed is not None else _seed_from_env()
        cfg = RunConfig(args.mode, args.tolerance, seed, args.budget, args.out)
        report, status = COMMANDS[args.command](args, cfg)
    except (InputError, L0Error, ValueError) as exc:
        print(f"l0mod {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report = dict(report)
    report.setdefault("command", args.command)
    report.setdefault("version", __version__)
    _emit(dumps(report), cfg.out)
    return status


def main() -> None:
    sys.exit(run())
