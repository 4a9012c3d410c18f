"""Command-line front end: ``catpart verify|frames|cases|stats SPEC``.

Exit codes: 0 success, 1 error findings (or generation findings), 2 the spec
could not be read or parsed, 3 the external solver could not be run.
"""

from __future__ import annotations

import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import __version__, report
from .frames import Criterion, FrameSet, generate_frames
from .model import CpSpec, SpecError, load_spec
from .solver import Bounds, EngineFailure, Engine, TestCase, find_solver, find_values, make_engine
from .verifier import VerificationReport, VerifyOptions, verify

EXIT_OK, EXIT_FINDINGS, EXIT_PARSE, EXIT_ENGINE = 0, 1, 2, 3


@dataclass
class RunConfig:
    spec_path: Path
    command: str
    criterion: Criterion = Criterion.EACH_CHOICE
    engine: str = "bounded"
    solver_path: str | None = None
    timeout_ms: int = 10_000
    bounds: Bounds = field(default_factory=Bounds)
    output_format: str = "text"
    suppress_coverage_warnings: bool = False
    force: bool = False
    jobs: int = 1

    def make_engine(self) -> Engine:
        if self.engine == "external" and find_solver(self.solver_path) is None:
            raise EngineFailure(f"cannot find SMT solver {self.solver_path or 'z3'!r}")
        return make_engine("smt" if self.engine == "external" else "bounded", self.bounds, self.timeout_ms, self.solver_path)


class Timer:
    def __init__(self) -> None:
        self.phases: dict[str, float] = {}

    def run(self, phase: str, fn, *args, **kwargs):
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            self.phases[phase] = self.phases.get(phase, 0.0) + time.perf_counter() - start

    def text(self) -> str:
        return " ".join(f"{k}={v:.3f}s" for k, v in self.phases.items())


def _int_range(ctx, param, value: str | None):
    if value is None:
        return None
    try:
        lo, hi = value.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise click.BadParameter("expected LO..HI, for example -10..1000") from None


def _real_grid(ctx, param, value: str | None):
    if value is None:
        return None
    try:
        p, q = value.split("/")
        return int(p), int(q)
    except ValueError:
        raise click.BadParameter("expected P/Q, for example 1000/4") from None


def _options(fn):
    decorators = [
        click.argument("spec", type=click.Path(dir_okay=False, path_type=Path)),
        click.option("--criterion", "-c", default="each-choice", show_default=True,
                     help="each-choice, pairwise, three-way or base-choice"),
        click.option("--engine", type=click.Choice(["bounded", "external"]), default="bounded", show_default=True),
        click.option("--solver", "solver_path", envvar="CP_SOLVER", default=None,
                     help="SMT solver executable for --engine external (default: z3 on PATH)"),
        click.option("--timeout-ms", type=int, default=10_000, show_default=True, help="per solver call"),
        click.option("--int-range", callback=_int_range, default=None, help="integer domain of the bounded engine, LO..HI"),
        click.option("--real-grid", callback=_real_grid, default=None, help="rationals p/q with |p|<=P and q<=Q, as P/Q"),
        click.option("--max-string-len", type=int, default=None),
        click.option("--set-universe", type=int, default=None, help="integer sets range over 0..N"),
        click.option("--format", "output_format", type=click.Choice(["text", "structured"]), default="text", show_default=True),
        click.option("--force", is_flag=True, help="continue even when verification reports errors"),
        click.option("--jobs", type=int, default=1, show_default=True, help="parallel solver calls"),
        click.option("--no-coverage-warnings", is_flag=True, help="skip the category coverage check"),
    ]
    for d in reversed(decorators):
        fn = d(fn)
    return fn


def _config(command: str, **kw) -> RunConfig:
    bounds = Bounds()
    changes = {}
    if kw["int_range"]:
        changes["int_lo"], changes["int_hi"] = kw["int_range"]
    if kw["real_grid"]:
        changes["real_numerator"], changes["real_denominator"] = kw["real_grid"]
    if kw["max_string_len"] is not None:
        changes["max_string_len"] = kw["max_string_len"]
    if kw["set_universe"] is not None:
        changes["set_universe"] = kw["set_universe"]
    if changes:
        try:
            bounds = Bounds(**{**bounds.__dict__, **changes})
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from None
    try:
        criterion = Criterion.parse(kw["criterion"])
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--criterion") from None
    return RunConfig(
        spec_path=kw["spec"],
        command=command,
        criterion=criterion,
        engine=kw["engine"],
        solver_path=kw["solver_path"],
        timeout_ms=kw["timeout_ms"],
        bounds=bounds,
        output_format=kw["output_format"],
        suppress_coverage_warnings=kw["no_coverage_warnings"],
        force=kw["force"],
        jobs=max(1, kw["jobs"]),
    )


def _load(cfg: RunConfig, timer: Timer) -> CpSpec:
    try:
        text = cfg.spec_path.read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {cfg.spec_path}: {exc.strerror or exc}", err=True)
        sys.exit(EXIT_PARSE)
    try:
        return timer.run("parse", load_spec, text, cfg.spec_path.stem)
    except SpecError as exc:
        click.echo(f"{cfg.spec_path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _emit_report(cfg: RunConfig, rep: VerificationReport) -> None:
    if cfg.output_format == "structured":
        recs = [report.finding_record(f) for f in rep.findings]
        recs.append({"kind": "verification", "passed": rep.passed, "errors": len(rep.errors), "warnings": len(rep.warnings)})
        click.echo(report.dumps(recs), nl=False)
    else:
        click.echo(report.findings_text(rep))


def _verify(cfg: RunConfig, spec: CpSpec, engine: Engine, timer: Timer) -> VerificationReport:
    opts = VerifyOptions(coverage_warnings=not cfg.suppress_coverage_warnings, jobs=cfg.jobs)
    return timer.run("verify", verify, spec, engine, opts)


def _guarded(body):
    """Map engine failures to exit code 3."""
    try:
        code = body()
    except EngineFailure as exc:
        click.echo(f"error: solver failure: {exc}", err=True)
        code = EXIT_ENGINE
    sys.exit(code)


def _frames(cfg: RunConfig, spec: CpSpec, timer: Timer) -> tuple[FrameSet | None, int]:
    """Verification gate then generation; returns the frames or an exit code."""
    engine = cfg.make_engine()
    rep = _verify(cfg, spec, engine, timer)
    if not rep.passed and not cfg.force:
        _emit_report(cfg, rep)
        click.echo("verification failed; use --force to generate anyway", err=True)
        return None, EXIT_FINDINGS
    frames = timer.run("frames", generate_frames, spec, cfg.criterion)
    for f in frames.findings:
        click.echo(f"{f.severity.value}: [{f.check}] {f.subject_text()}: {f.detail}", err=True)
    return frames, EXIT_OK


def _count_line(frames: FrameSet) -> str:
    return f"criterion={frames.criterion.value} frames={len(frames)}"


@click.group()
@click.version_option(__version__, prog_name="catpart")
def main() -> None:
    """Category-partition testing: verify specifications, build frames, find values."""


@main.command("verify")
@_options
def verify_cmd(**kw) -> None:
    """Check a specification for structural and semantic defects."""
    cfg = _config("verify", **kw)
    timer = Timer()
    spec = _load(cfg, timer)

    def body() -> int:
        rep = _verify(cfg, spec, cfg.make_engine(), timer)
        _emit_report(cfg, rep)
        return EXIT_OK if rep.passed else EXIT_FINDINGS

    _guarded(body)


@main.command("frames")
@_options
def frames_cmd(**kw) -> None:
    """Generate test frames for a selection criterion."""
    cfg = _config("frames", **kw)
    timer = Timer()
    spec = _load(cfg, timer)

    def body() -> int:
        frames, code = _frames(cfg, spec, timer)
        if frames is None:
            return code
        if cfg.output_format == "structured":
            recs = [report.frame_record(fr, n, cfg.criterion.value) for n, fr in enumerate(frames.frames, 1)]
            recs.append({"kind": "summary", "criterion": cfg.criterion.value, "frames": len(frames), "timings": timer.phases})
            click.echo(report.dumps(recs), nl=False)
        else:
            click.echo(report.frames_text(spec, frames))
            click.echo(_count_line(frames))
        return EXIT_FINDINGS if any(f.is_error for f in frames.findings) else EXIT_OK

    _guarded(body)


def solve_all(spec: CpSpec, frames: FrameSet, engine: Engine, jobs: int = 1) -> list:
    work = lambda fr: find_values(spec, fr, engine)  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, frames.frames))
    return [work(fr) for fr in frames.frames]


@main.command("cases")
@_options
def cases_cmd(**kw) -> None:
    """Generate frames and find concrete values for each of them."""
    cfg = _config("cases", **kw)
    timer = Timer()
    spec = _load(cfg, timer)

    def body() -> int:
        frames, code = _frames(cfg, spec, timer)
        if frames is None:
            return code
        outcomes = timer.run("cases", solve_all, spec, frames, cfg.make_engine(), cfg.jobs)
        solved = sum(isinstance(o, TestCase) for o in outcomes)
        total = sum(timer.phases.values())
        if cfg.output_format == "structured":
            recs = [report.outcome_record(spec, o, n) for n, o in enumerate(outcomes, 1)]
            recs.append({
                "kind": "summary", "criterion": cfg.criterion.value, "frames": len(frames),
                "solved": solved, "unsolved": len(outcomes) - solved, "timings": timer.phases,
            })
            click.echo(report.dumps(recs), nl=False)
        else:
            click.echo("\n".join(report.outcome_text(spec, n, o) for n, o in enumerate(outcomes, 1)))
            click.echo(_count_line(frames))
            click.echo(f"solved={solved} unsolved={len(outcomes) - solved} time={total:.3f}s ({timer.text()})")
        return EXIT_OK

    _guarded(body)


@main.command("stats")
@_options
def stats_cmd(**kw) -> None:
    """Frame counts for every criterion (``--criterion`` is ignored)."""
    cfg = _config("stats", **kw)
    timer = Timer()
    spec = _load(cfg, timer)
    rows = []
    for crit in Criterion:
        start = time.perf_counter()
        frames = generate_frames(spec, crit)
        rows.append((crit, frames, time.perf_counter() - start))
    if cfg.output_format == "structured":
        recs = [
            {"kind": "stats", "criterion": c.value, "frames": len(f), "origins": f.stats, "seconds": round(t, 6)}
            for c, f, t in rows
        ]
        click.echo(report.dumps(recs), nl=False)
    else:
        for c, f, t in rows:
            origins = ", ".join(f"{k}={v}" for k, v in f.stats.items())
            click.echo(f"{_count_line(f)} ({origins}) time={t:.3f}s")
        click.echo(f"row: {spec.name} " + " ".join(str(len(f)) for _, f, _ in rows))
    sys.exit(EXIT_OK)


if __name__ == "__main__":  # pragma: no cover
    main()
