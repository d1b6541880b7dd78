"""Command-line front end.

Input files are flat key-value text, one ``key = value`` (or ``key: value``)
per line, ``#`` starts a comment.  Keys: P, Q, R, S and, for maps, xt, yt
with optional x_inv, y_inv.

Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass

import click

from . import BACKEND, __version__
from .classify import classify, correspondence_table
from .contexts import ConcreteContext, OdeCoefficients
from .engine import NAMES, Invariants
from .errors import CaseViolationError, InvalidTransformationError, OdekitError, ParseError
from .parse import format_expr, parse
from .special import normal_form
from .transform import PointTransformation, transform_ode, transform_pulled
from .verify import SUITES, run_suite

COEFF_KEYS = ("P", "Q", "R", "S")
MAP_KEYS = ("xt", "yt", "x_inv", "y_inv")


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = 20
    term_budget: int = 10**6
    output: str = "text"
    branch: str = "auto"


class InputError(click.ClickException):
    exit_code = 2


def _seed(value):
    env = os.environ.get("ODEKIT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"ODEKIT_SEED must be an integer, got {env!r}") from None
    return value


def read_keyvalue(path, allowed):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            for sep in ("=", ":"):
                if sep in line:
                    k, v = line.split(sep, 1)
                    break
            else:
                raise InputError(f"{path}:{lineno}: expected 'key = value'")
            k = k.strip()
            if k not in allowed:
                raise InputError(f"{path}:{lineno}: unknown key {k!r}; allowed: {', '.join(allowed)}")
            out[k] = v.strip()
    return out


def _parse_field(label, text):
    try:
        return parse(text)
    except ParseError as exc:
        pointer = " " * exc.offset + "^"
        raise InputError(f"cannot parse {label}: {exc.message} at position {exc.offset}\n"
                         f"  {text}\n  {pointer}") from None


def _load_ode(input_file, flags):
    vals = {}
    if input_file:
        vals.update({k: v for k, v in read_keyvalue(input_file, COEFF_KEYS + MAP_KEYS).items()
                     if k in COEFF_KEYS})
    vals.update({k: v for k, v in flags.items() if v is not None})
    parsed = {k: _parse_field(k, str(v)) for k, v in vals.items()}
    try:
        return OdeCoefficients.of(**parsed)
    except OdekitError as exc:
        raise InputError(str(exc)) from None


def _emit(cfg, payload, text_lines):
    if cfg.output == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        for line in text_lines:
            click.echo(line)


def _coeff_options(f):
    for L in reversed(COEFF_KEYS):
        f = click.option(f"--{L}", L, default=None, help=f"coefficient {L}")(f)
    f = click.option("--input", "input_file", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="key-value input file")(f)
    return f


def _common(f):
    f = click.option("--json", "as_json", is_flag=True, help="JSON output")(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    return f


class _Group(click.Group):
    """Library errors become exit code 2 with a one-line message."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except OdekitError as exc:
            raise InputError(f"{type(exc).__name__}: {exc}") from None


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="odekit")
def main():
    """Point invariants of y'' = P + 3Q y' + 3R y'^2 + S y'^3."""


@main.command("classify")
@_coeff_options
@_common
@click.option("--branch", type=click.Choice(["auto", "A", "B"]), default="auto")
def cmd_classify(input_file, P, Q, R, S, as_json, seed, branch):
    """Assign both degeneration-case labels."""
    cfg = RunConfig(seed=_seed(seed), output="json" if as_json else "text", branch=branch)
    ode = _load_ode(input_file, dict(P=P, Q=Q, R=R, S=S))
    rep = classify(ode, branch=cfg.branch, seed=cfg.seed)
    lines = [
        f"equation: {ode}",
        f"shr_label: {rep.shr_label}",
        f"bgd_label: {rep.bgd_label}",
        f"bgd_label_literal: {rep.bgd_label_literal}",
        f"overlap: {rep.overlap}",
        f"branch_used: {rep.branch_used}",
    ]
    lines += [f"flag {k}: {v}" for k, v in rep.flags.items()]
    lines += [f"raw {k}: {v}" for k, v in rep.bgd_raw.items()]
    lines += [f"witness {k}: {v}" for k, v in rep.witnesses.items()]
    lines += [f"warning: {w}" for w in rep.zero_locus_warnings]
    lines += [f"note: {n}" for n in rep.notes]
    payload = {"equation": ode.as_dict(), **rep.as_dict()}
    _emit(cfg, payload, lines)


@main.command("invariants")
@_coeff_options
@_common
@click.option("--branch", type=click.Choice(["auto", "A", "B"]), default="auto")
@click.option("--name", "names", multiple=True, required=True, help="quantity name (repeatable)")
def cmd_invariants(input_file, P, Q, R, S, as_json, seed, branch, names):
    """Print named quantities."""
    cfg = RunConfig(seed=_seed(seed), output="json" if as_json else "text", branch=branch)
    unknown = [n for n in names if n not in NAMES]
    if unknown:
        raise InputError(f"unknown name(s) {', '.join(unknown)}; valid names: {', '.join(NAMES)}")
    ode = _load_ode(input_file, dict(P=P, Q=Q, R=R, S=S))
    inv = Invariants(ConcreteContext(ode), branch=cfg.branch)
    results, lines = {}, []
    for n in names:
        try:
            e, w = inv.value(n)
            results[n] = {"expr": format_expr(e), "weight": w}
            lines.append(f"{n} = {format_expr(e)}" + ("" if w is None else f"  [weight {w}]"))
        except CaseViolationError as exc:
            results[n] = {"error": str(exc)}
            lines.append(f"{n}: error: {exc}")
    try:
        br = inv.branch
    except CaseViolationError:
        br = None
    lines.append(f"branch: {br}")
    _emit(cfg, {"equation": ode.as_dict(), "branch": br, "values": results}, lines)
    if any("error" in r for r in results.values()):
        sys.exit(2)


@main.command("transform")
@_coeff_options
@click.option("--map", "map_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="key-value file with xt, yt (and optionally x_inv, y_inv)")
@click.option("--xt", default=None)
@click.option("--yt", default=None)
@click.option("--x-inv", "x_inv", default=None)
@click.option("--y-inv", "y_inv", default=None)
@click.option("--json", "as_json", is_flag=True)
def cmd_transform(input_file, P, Q, R, S, map_file, xt, yt, x_inv, y_inv, as_json):
    """Apply a point transformation."""
    cfg = RunConfig(output="json" if as_json else "text")
    ode = _load_ode(input_file, dict(P=P, Q=Q, R=R, S=S))
    m = {}
    if input_file:
        m.update({k: v for k, v in read_keyvalue(input_file, COEFF_KEYS + MAP_KEYS).items()
                  if k in MAP_KEYS})
    if map_file:
        m.update(read_keyvalue(map_file, MAP_KEYS))
    m.update({k: v for k, v in dict(xt=xt, yt=yt, x_inv=x_inv, y_inv=y_inv).items() if v})
    if "xt" not in m or "yt" not in m:
        raise InputError("a map needs both xt and yt")
    parsed = {k: _parse_field(k, v) for k, v in m.items()}
    try:
        t = PointTransformation.of(**parsed)
    except InvalidTransformationError as exc:
        raise InputError(f"invalid transformation: {exc}") from None
    if t.has_inverse():
        new = transform_ode(ode, t)
        mode = "new-coordinates"
    else:
        new = transform_pulled(ode, t)
        mode = "pulled-back"
    lines = [f"map: xt = {t.xt}, yt = {t.yt}", f"mode: {mode}"]
    lines += [f"{L} = {format_expr(new[L])}" for L in COEFF_KEYS]
    payload = {"map": {"xt": str(t.xt), "yt": str(t.yt)}, "mode": mode,
               "coefficients": {L: format_expr(new[L]) for L in COEFF_KEYS}}
    _emit(cfg, payload, lines)


@main.command("reduce")
@click.option("--expr", required=True, help="jet expression, e.g. 'S[1,2] + Q[0,2]'")
@click.option("--json", "as_json", is_flag=True)
def cmd_reduce(expr, as_json):
    """Normal form in special coordinates (A = 1, B = 0)."""
    e = _parse_field("expression", expr)
    out = format_expr(normal_form(e))
    _emit(RunConfig(output="json" if as_json else "text"),
          {"input": expr, "normal_form": out}, [out])


@main.command("verify")
@click.option("--suite", type=click.Choice(SUITES + ("all",)), default="all", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--term-budget", type=click.IntRange(min=1), default=10**6, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--timings", is_flag=True, help="include wall-clock times (JSON stops being reproducible)")
@click.option("--json", "as_json", is_flag=True)
def cmd_verify(suite, seed, trials, term_budget, workers, timings, as_json):
    """Run the identity battery."""
    cfg = RunConfig(seed=_seed(seed), trials=trials, term_budget=term_budget,
                    output="json" if as_json else "text")
    rep = run_suite(suite, seed=cfg.seed, trials=cfg.trials, term_budget=cfg.term_budget,
                    workers=workers)
    lines = []
    for r in rep.results:
        mark = "ok " if r.ok else "BAD"
        extra = f" ({r.seconds:.2f}s)" if timings else ""
        lines.append(f"{mark} {r.status:<16} {r.mode:<7} {r.id}{extra}")
        if r.downgraded:
            lines.append(f"    downgraded to numeric: {r.note}")
        if not r.ok and r.residual:
            lines.append(f"    residual: {r.residual}")
    n_bad = sum(not r.ok for r in rep.results)
    lines.append(f"{len(rep.results) - n_bad}/{len(rep.results)} checks as expected "
                 f"(seed {cfg.seed}, trials {cfg.trials}, backend {BACKEND})")
    _emit(cfg, rep.as_dict(timings=timings), lines)
    sys.exit(0 if rep.ok else 1)


@main.command("table")
@click.option("--json", "as_json", is_flag=True)
def cmd_table(as_json):
    """Print the pairing of the two classifications."""
    rows = correspondence_table()
    _emit(RunConfig(output="json" if as_json else "text"),
          [dict(zip(("shr", "bgd", "note"), r)) for r in rows],
          [f"{a:<10} {b:<10} {c}" for a, b, c in rows])


if __name__ == "__main__":  # pragma: no cover
    main()
