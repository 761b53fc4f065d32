"""Command-line interface: the full pipeline plus single-stage subcommands."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from ._version import __version__
from .ardl import bounds_test, fit_ardl, fit_ecm, long_run
from .diagnostics import HetKind, cusum, het_test, ramsey_reset, serial_lm
from .errors import ArdlKitError, ConfigError
from .pipeline import (
    PipelineConfig,
    adf_spec_for,
    emit_cusum_plot,
    load_config,
    prepare_dataset,
    render_report,
    resolve_order,
    run_pipeline,
    significance_stars,
)
from .unitroot import classify_integration
from .worldbank import fetch_worldbank


def _build_config(
    config_path: str | None,
    data: str | None,
    dep: str | None,
    regressors: tuple[str, ...],
    seed: int | None,
    level: float | None,
    log: bool | None,
    order: str | None,
) -> PipelineConfig:
    if config_path is not None:
        cfg = load_config(config_path)
        updates: dict = {}
        if data is not None:
            updates["data"] = str(Path(data).resolve())
        if dep is not None:
            updates["dependent"] = dep
        if regressors:
            updates["regressors"] = regressors
        if seed is not None:
            updates["seed"] = seed
        if level is not None:
            updates["significance"] = level
        if log is not None:
            updates["log_transform"] = log
        if order is not None:
            updates["ardl_order"] = _parse_order(order)
        if updates:
            import dataclasses

            cfg = dataclasses.replace(cfg, **updates)
        return cfg
    if dep is None or not regressors:
        raise ConfigError("without --config, both --dep and --regressor are required")
    return PipelineConfig(
        dependent=dep,
        regressors=regressors,
        data=None if data is None else str(Path(data).resolve()),
        seed=seed if seed is not None else 0,
        significance=level if level is not None else 0.05,
        log_transform=log if log is not None else True,
        ardl_order=None if order is None else _parse_order(order),
    )


def _parse_order(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise ConfigError(f"cannot parse order {text!r}; expected e.g. '1,0,1,2'") from None


_common = [
    click.option("--config", "config_path", type=click.Path(), help="TOML config file."),
    click.option("--data", type=click.Path(), help="CSV data file (overrides config)."),
    click.option("--dep", help="Dependent variable (raw column name)."),
    click.option("--regressor", "-r", "regressors", multiple=True, help="Regressor column (repeatable)."),
    click.option("--seed", type=int, default=None, help="Seed recorded in provenance."),
    click.option("--level", type=float, default=None, help="Significance level for verdicts."),
    click.option("--log/--no-log", "log", default=None, help="Log-transform the variables (default on)."),
    click.option("--order", default=None, help="Fixed ARDL order 'p,q1,..,qk'."),
    click.option("--out", type=click.Path(), default=".", help="Output directory."),
    click.option("--format", "fmt", type=click.Choice(["text", "json"]), default=None),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """ARDL bounds-testing toolkit."""


def _fail(exc: ArdlKitError) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@main.command(name="run")
@_with_common
def run_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt) -> None:
    """Run the full pipeline and write report plus CUSUM artifacts."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        report = run_pipeline(cfg)
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        formats = (fmt,) if fmt else (cfg.output_formats or ("text",))
        for f in formats:
            suffix = "txt" if f == "text" else "json"
            (out_dir / f"report.{suffix}").write_text(render_report(report, f), encoding="utf-8")
        emit_cusum_plot(report.cusum, out_dir / "cusum")
        click.echo(render_report(report, formats[0]))
        click.echo(f"artifacts written to {out_dir.resolve()}")
    except ArdlKitError as exc:
        _fail(exc)


@main.command(name="adf")
@_with_common
@click.option("--var", "variables", multiple=True, help="Restrict to these analysis variables.")
def adf_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt, variables) -> None:
    """Unit-root pretest table (levels and first differences)."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        _, ds, dep_name, regs = prepare_dataset(cfg)
        names = variables or (dep_name, *regs)
        click.echo(f"{'variable':<10} {'det':<4} {'lag':>3} {'stat':>12} {'p-value':>10}  verdict")
        for name in names:
            res = classify_integration(
                ds[name], adf_spec_for(cfg, name), cfg.significance,
                adf_spec_for(cfg, name, differenced=True),
            )
            r = res.level_result
            click.echo(
                f"{name:<10} {r.spec.deterministic.value:<4} {r.chosen_lag:>3} "
                f"{r.stat:>12.6f} {r.pvalue:>10.6f}  {r.verdict.value}"
            )
            if res.diff_result is not None:
                d = res.diff_result
                click.echo(
                    f"D({name})".ljust(10)
                    + f" {d.spec.deterministic.value:<4} {d.chosen_lag:>3} "
                    f"{d.stat:>12.6f} {d.pvalue:>10.6f}  {d.verdict.value}"
                )
            click.echo(f"{'':<10} integration order: I({res.order})")
    except ArdlKitError as exc:
        _fail(exc)


def _fit_from_config(cfg: PipelineConfig):
    _, ds, dep_name, regs = prepare_dataset(cfg)
    order = resolve_order(cfg, ds, dep_name, regs)
    model = fit_ardl(ds, dep_name, regs, order)
    return ds, dep_name, regs, order, model


@main.command(name="ardl")
@_with_common
def ardl_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt) -> None:
    """Select/fit the ARDL model and print its coefficients."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        _, dep_name, _, sel, model = _fit_from_config(cfg)
        click.echo(f"ARDL({sel.p}, {list(sel.q)}) for {dep_name}, sample "
                   f"{model.start_period}-{model.end_period}")
        click.echo(f"{'term':<12} {'coef':>12} {'stderr':>12} {'t-stat':>12} {'p-value':>10}")
        fit = model.fit
        for nm, c, s, t, p in zip(fit.names, fit.coef, fit.stderr, fit.tstat, fit.pvalue):
            click.echo(f"{nm:<12} {c:>12.6f} {s:>12.6f} {t:>12.6f} {p:>10.6f}")
        click.echo(f"r2 {fit.r2:.6f}  adj r2 {fit.r2_adj:.6f}  aic {fit.aic:.6f}  sic {fit.sic:.6f}")
    except ArdlKitError as exc:
        _fail(exc)


@main.command(name="bounds")
@_with_common
@click.option("--case", default=None, help="Bounds case: none | rest_const | unrest_const.")
def bounds_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt, case) -> None:
    """Bounds cointegration F test against the Pesaran critical bounds."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        ds, dep_name, regs, sel, _ = _fit_from_config(cfg)
        res = bounds_test(ds, dep_name, regs, sel, case or cfg.bounds_case)
        click.echo(f"F = {res.fstat:.6f}  (k = {res.k}, case = {res.case.value}, df = {res.df})")
        for lv in sorted(res.bounds, reverse=True):
            lo, up = res.bounds[lv]
            click.echo(f"{lv:>5.0%}: lower {lo:.2f}  upper {up:.2f}")
        strongest = f" at {res.strongest_level:.0%}" if res.strongest_level else ""
        click.echo(f"verdict: {res.verdict.value}{strongest}")
    except ArdlKitError as exc:
        _fail(exc)


@main.command(name="ecm")
@_with_common
def ecm_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt) -> None:
    """Long-run coefficients and the error-correction form."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        _, dep_name, _, _, model = _fit_from_config(cfg)
        lr = long_run(model)
        click.echo("long-run coefficients:")
        for nm, c, s, t, p in zip(lr.names, lr.theta, lr.stderr, lr.tstat, lr.pvalue):
            click.echo(
                f"{nm:<10} {c:>12.6f} {s:>12.6f} {t:>12.6f} {p:>10.6f} {significance_stars(p)}"
            )
        click.echo(f"intercept: {lr.intercept_lr:.6f}")
        ecm = fit_ecm(model, lr)
        click.echo(
            f"ECM(-1): {ecm.lam:.6f}  stderr {ecm.stderr:.6f}  t {ecm.tstat:.6f} "
            f"p {ecm.pvalue:.6f} {significance_stars(ecm.pvalue)}"
        )
        for nm, c, s in zip(ecm.short_run_names, ecm.short_run_coef, ecm.short_run_stderr):
            click.echo(f"{nm:<14} {c:>12.6f} {s:>12.6f}")
    except ArdlKitError as exc:
        _fail(exc)


@main.command(name="diagnose")
@_with_common
def diagnose_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt) -> None:
    """Serial-correlation LM, Ramsey RESET, and heteroskedasticity tests."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        _, _, _, _, model = _fit_from_config(cfg)
        tests = (
            serial_lm(model.fit, cfg.serial_lags, cfg.significance),
            ramsey_reset(model.fit, cfg.reset_powers, cfg.significance),
            het_test(model.fit, HetKind(cfg.het_kind), cfg.significance),
        )
        for t in tests:
            click.echo(
                f"{t.name:<28} F {t.fstat:>10.6f}  df ({t.df[0]}, {t.df[1]})  "
                f"p {t.pvalue:.6f}  {t.verdict}"
            )
    except ArdlKitError as exc:
        _fail(exc)


@main.command(name="cusum")
@_with_common
def cusum_cmd(config_path, data, dep, regressors, seed, level, log, order, out, fmt) -> None:
    """CUSUM stability test on the ARDL regression; writes CSV and SVG."""
    try:
        cfg = _build_config(config_path, data, dep, regressors, seed, level, log, order)
        _, _, _, _, model = _fit_from_config(cfg)
        import dataclasses

        res = cusum(model.fit.y, model.fit.X, cfg.cusum_level)
        res = dataclasses.replace(
            res, start_period=model.start_period + (model.fit.n - len(res.path))
        )
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path, svg_path = emit_cusum_plot(res, out_dir / "cusum")
        status = "stable" if res.stable else "UNSTABLE"
        click.echo(f"CUSUM at {res.level:.0%}: {status}; wrote {csv_path} and {svg_path}")
    except ArdlKitError as exc:
        _fail(exc)


@main.command(name="fetch")
@click.option("--country", required=True, help="ISO country code, e.g. IRN.")
@click.option("--indicator", required=True, help="World Bank indicator code.")
@click.option("--years", required=True, help="Year range 'start:end'.")
@click.option("--name", default=None, help="Column name for the fetched series.")
@click.option("--cache", "cache_dir", type=click.Path(), default=None, help="Response cache directory.")
@click.option("--out", type=click.Path(), default="-", help="CSV output path ('-' for stdout).")
def fetch_cmd(country, indicator, years, name, cache_dir, out) -> None:
    """Fetch one indicator from the World Bank API into a CSV."""
    try:
        try:
            start, end = (int(v) for v in years.split(":"))
        except ValueError:
            raise ConfigError(f"years must look like '2000:2022', got {years!r}") from None
        series = fetch_worldbank(country, indicator, (start, end), cache_dir=cache_dir, name=name)
        lines = ["year," + series.name]
        for i, v in enumerate(series.values):
            lines.append(f"{series.start_period + i},{float(v)!r}")
        text = "\n".join(lines) + "\n"
        if out == "-":
            click.echo(text, nl=False)
        else:
            Path(out).write_text(text, encoding="utf-8")
            click.echo(f"wrote {out}")
    except ArdlKitError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
