"""Command-line verification harness.

Examples::

    apery-verify --list
    apery-verify --identity ZETA3_APERY --digits 40
    apery-verify --identity all --digits 30 --format csv --out report.csv --jobs 8
    apery-verify --identity THM21 --q 3 --a 1/3 --x 1/3
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath

from . import identities
from .errors import AperyError
from .numerics import PrecisionContext

SCHEMA = "apery-verify/1"
MIN_DIGITS = 20
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# grid override flags: option name -> parameter key
OVERRIDES = {"q": "q", "a": "a", "b": "b", "x": "x", "m": "m", "p": "p", "fc_x": "x"}


class ConfigError(Exception):
    """Invalid command-line configuration (exit status 2)."""


@dataclass
class RunConfig:
    identities: list[str]
    digits: int = 30
    tolerance: str | None = None
    overrides: dict = field(default_factory=dict)
    fmt: str = "json"
    out: str | None = None
    jobs: int = 1
    timing: bool = True

    def validate(self) -> None:
        if self.digits < MIN_DIGITS:
            raise ConfigError(f"--digits must be at least {MIN_DIGITS}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.tolerance is not None:
            try:
                if mpmath.mpf(self.tolerance) <= 0:
                    raise ValueError
            except ValueError:
                raise ConfigError(f"--tolerance must be a positive number, got {self.tolerance!r}") from None
        for ident in self.identities:
            if ident not in identities.REGISTRY:
                raise ConfigError(f"unknown identity {ident!r}; use --list to see the catalog")


def _split(values: list[str] | None) -> list[str] | None:
    if not values:
        return None
    out = []
    for v in values:
        out.extend(s.strip() for s in v.split(",") if s.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apery-verify",
                                description="Numerically verify Apery-like series identities.")
    p.add_argument("--identity", action="append", metavar="ID",
                   help="identity id (repeatable or comma separated), or 'all'")
    p.add_argument("--list", action="store_true", help="print the identity catalog and exit")
    p.add_argument("--digits", type=int, default=30, help="decimal working precision (>= 20)")
    p.add_argument("--tolerance", help="override the class tolerance for every point")
    p.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    p.add_argument("--no-timing", action="store_false", dest="timing",
                   help="write elapsed_ms as null so reports are byte-identical across runs")
    grid = p.add_argument_group("grid overrides (comma separated lists)")
    grid.add_argument("--q", action="append", help="order q of the bilateral series")
    grid.add_argument("--a", action="append", help="shift a, e.g. 1/3 or 0.3+0.2i")
    grid.add_argument("--b", action="append", help="shift b of the (n+b)^q denominator")
    grid.add_argument("--x", action="append", metavar="p/N",
                      help="root of unity exp(2 pi i p/N) for the cyclotomic identities")
    grid.add_argument("--m", action="append", help="Fuss-Catalan order m, or derivative order for THM26")
    grid.add_argument("--p", action="append", help="weight parameter p")
    grid.add_argument("--fc-x", action="append", dest="fc_x",
                      help="numeric argument x for the central binomial and Fuss-Catalan identities")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    ids = _split(ns.identity)
    if not ids:
        raise ConfigError("--identity is required (or use --list)")
    if "all" in ids:
        ids = list(identities.IDENTITY_IDS)
    overrides = {opt: _split(getattr(ns, opt)) for opt in OVERRIDES}
    overrides = {k: v for k, v in overrides.items() if v}
    return RunConfig(ids, ns.digits, ns.tolerance, overrides, ns.fmt, ns.out, ns.jobs, ns.timing)


def _axes(ident: str) -> list[str]:
    return [k for k in identities.REGISTRY[ident].kind.split(",") if k]


def resolve_grid(config: RunConfig, ctx: PrecisionContext) -> list[tuple[str, dict]]:
    """Expand the configured identities into validated ``(id, params)`` points in report order."""
    points = []
    for ident in dict.fromkeys(config.identities):
        axes = _axes(ident)
        given = {}
        for opt, values in config.overrides.items():
            key = OVERRIDES[opt]
            if key not in axes:
                continue
            if key == "x" and (opt == "x") != (ident in identities.ROOT_X_IDS):
                continue
            given[key] = values
        if not given:
            grid = identities.default_grid(ident)
        else:
            defaults = identities.default_grid(ident)
            axes_values = {}
            for key in axes:
                if key in given:
                    axes_values[key] = given[key]
                else:
                    axes_values[key] = list(dict.fromkeys(d[key] for d in defaults))
            grid = [{}]
            for key in axes:
                grid = [dict(d, **{key: v}) for d in grid for v in axes_values[key]]
        for params in grid:
            try:
                identities.validate_params(ident, params, ctx)
            except AperyError as exc:
                shown = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
                raise ConfigError(f"{ident} ({shown}): {exc}") from None
            points.append((ident, params))
    points.sort(key=lambda item: (item[0], sorted(item[1].items())))
    return points


def _fmt(value, digits: int) -> str | None:
    if value is None:
        return None
    return mpmath.nstr(value, digits, min_fixed=1, max_fixed=0) if value != 0 else "0"


def _parts(value, digits: int) -> tuple[str | None, str | None]:
    if value is None:
        return None, None
    return _fmt(mpmath.re(value), digits), _fmt(mpmath.im(value), digits)


def _evaluate(task: tuple) -> dict:
    ident, params, digits, tolerance, timing = task
    ctx = PrecisionContext.from_digits(digits)
    report = identities.verify(ident, params, ctx, tolerance)
    lhs_re, lhs_im = _parts(report.lhs, digits)
    rhs_re, rhs_im = _parts(report.rhs, digits)
    return {
        "id": report.id,
        "params": dict(sorted(report.params.items())),
        "lhs_re": lhs_re, "lhs_im": lhs_im,
        "rhs_re": rhs_re, "rhs_im": rhs_im,
        "residual": _fmt(report.residual, 6),
        "residual_mode": report.residual_mode,
        "convergence": report.convergence,
        "tolerance": _fmt(report.tolerance, 6),
        "terms_used": report.terms_used,
        "elapsed_ms": round(report.elapsed_ms, 1) if timing else None,
        "pass": report.passed,
        "error": report.error,
        "details": {k: _fmt(v, 6) for k, v in sorted(report.details.items())},
    }


def run_points(points: list[tuple[str, dict]], config: RunConfig) -> list[dict]:
    tasks = [(i, p, config.digits, config.tolerance, config.timing) for i, p in points]
    if config.jobs == 1 or len(tasks) <= 1:
        return [_evaluate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=1))


def render(records: list[dict], config: RunConfig) -> str:
    if config.fmt == "json":
        doc = {
            "schema": SCHEMA,
            "digits": config.digits,
            "tolerance_override": config.tolerance,
            "summary": {"points": len(records), "passed": sum(r["pass"] for r in records)},
            "records": records,
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    cols = ["schema", "id", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual",
            "residual_mode", "convergence", "tolerance", "terms_used", "elapsed_ms", "pass", "error"]
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = {k: r[k] for k in cols if k in r}
        row["schema"] = SCHEMA
        row["params"] = ";".join(f"{k}={v}" for k, v in r["params"].items())
        writer.writerow(row)
    return buf.getvalue()


def list_identities() -> str:
    lines = []
    for ident in identities.IDENTITY_IDS:
        spec = identities.REGISTRY[ident]
        grid = identities.default_grid(ident)
        axes = _axes(ident)
        shown = "; ".join(f"{k} in {{{', '.join(dict.fromkeys(d[k] for d in grid))}}}" for k in axes) or "no parameters"
        lines.append(f"{ident:<12} {spec.anchor}\n{'':<12} {spec.description}\n{'':<12} grid ({len(grid)} points): {shown}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.list:
        sys.stdout.write(list_identities())
        return EXIT_OK
    try:
        config = config_from_args(ns)
        config.validate()
        points = resolve_grid(config, PrecisionContext.from_digits(config.digits))
    except ConfigError as exc:
        print(f"apery-verify: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    records = run_points(points, config)
    text = render(records, config)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in records if not r["pass"]]
    for r in failed:
        print(f"FAIL {r['id']} {r['params']} residual={r['residual']} {r['error'] or ''}".rstrip(),
              file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
