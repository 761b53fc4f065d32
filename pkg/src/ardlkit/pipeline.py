"""End-to-end workflow: ingest, pretest, estimate, test, diagnose, report.

``run_pipeline`` executes the fixed stage sequence below and returns a
:class:`Report`; every numeric cell of the rendered output comes straight from
a stored field (nothing is recomputed at render time), and identical
configuration plus identical data yields a byte-identical JSON report.

    ingest -> transforms -> unit-root classification (abort on I(2)) ->
    order selection -> ARDL fit -> bounds test -> long-run + ECM (verdict
    permitting) -> diagnostics + CUSUM -> report
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__ as _pkg_version
from .ardl import (
    ArdlModel,
    ArdlOrder,
    BoundsResult,
    CointVerdict,
    EcmResult,
    LongRunCoeffs,
    adjustment_narrative,
    bounds_test,
    fit_ardl,
    fit_ecm,
    long_run,
    parse_case,
    select_order,
)
from .diagnostics import CusumResult, HetKind, TestResult, cusum, het_test, ramsey_reset, serial_lm
from .errors import (
    ArdlKitError,
    ConfigError,
    I2Error,
    NoCointegrationError,
    PipelineError,
)
from .series import Dataset, IngestOptions, load_csv, log_transform
from .unitroot import AdfSpec, Deterministic, IntegrationOrder, Verdict, classify_integration
from .worldbank import fetch_worldbank

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PipelineConfig:
    dependent: str
    regressors: tuple[str, ...]
    data: str | None = None
    period_column: str | None = None
    fetch: dict | None = None
    log_transform: bool = True
    adf_deterministic: dict[str, str] = field(default_factory=dict)
    adf_diff_deterministic: dict[str, str] = field(default_factory=dict)
    adf_fixed_lag: int | None = None
    adf_max_lag: int | None = None
    adf_criterion: str = "sic"
    ardl_order: tuple[int, ...] | None = None
    ardl_p_max: int = 2
    ardl_q_max: int = 2
    ardl_criterion: str = "aic"
    bounds_case: str = "none"
    serial_lags: int = 2
    reset_powers: int = 2
    het_kind: str = "bpg"
    significance: float = 0.05
    cusum_level: float = 0.05
    long_run_output: bool = True
    inconclusive_override: bool = False
    output_formats: tuple[str, ...] = ("text", "json")
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "regressors", tuple(self.regressors))
        if self.ardl_order is not None:
            object.__setattr__(self, "ardl_order", tuple(int(v) for v in self.ardl_order))
        object.__setattr__(self, "output_formats", tuple(self.output_formats))
        if not self.dependent:
            raise ConfigError("a dependent variable is required")
        if not self.regressors:
            raise ConfigError("at least one regressor is required")
        if self.dependent in self.regressors:
            raise ConfigError("the dependent variable cannot also be a regressor")
        if not (0.0 < self.significance < 1.0):
            raise ConfigError(f"significance must lie in (0, 1), got {self.significance}")
        for fmt in self.output_formats:
            if fmt not in ("text", "json"):
                raise ConfigError(f"unknown output format {fmt!r}")

    def analysis_name(self, raw: str) -> str:
        return ("L" + raw) if self.log_transform else raw


_CONFIG_KEYS = {f.name for f in dataclasses.fields(PipelineConfig)}


def load_config(path: str | Path) -> PipelineConfig:
    """Parse a flat TOML config; unknown keys are errors. Relative data paths
    resolve against the config file's directory."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"no such config file: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    if "data" in raw and raw["data"] is not None:
        data_path = Path(raw["data"])
        if not data_path.is_absolute():
            raw["data"] = str((path.parent / data_path).resolve())
    try:
        return PipelineConfig(**raw)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class Report:
    unit_root: dict[str, IntegrationOrder]
    order: ArdlOrder
    ardl: ArdlModel
    bounds: BoundsResult
    long_run: LongRunCoeffs | None
    ecm: EcmResult | None
    diagnostics: tuple[TestResult, ...]
    cusum: CusumResult
    provenance: dict
    notes: tuple[str, ...] = ()


def significance_stars(pvalue: float) -> str:
    """Table convention: *** at 1%, ** at 5%, * at 10%."""
    if pvalue < 0.01:
        return "***"
    if pvalue < 0.05:
        return "**"
    if pvalue < 0.10:
        return "*"
    return ""


def dataset_checksum(ds: Dataset) -> str:
    h = hashlib.sha256()
    for name in ds.names:
        s = ds[name]
        h.update(name.encode())
        h.update(str(s.start_period).encode())
        h.update(s.values.tobytes())
    return h.hexdigest()


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, ArdlKitError) and not isinstance(
                exc, (PipelineError, I2Error, NoCointegrationError, ConfigError)
            ):
                raise PipelineError(name, str(exc)) from exc
            return False

    return _StageContext()


def _det(value: str) -> Deterministic:
    try:
        return Deterministic(value)
    except ValueError:
        raise ConfigError(
            f"deterministic term must be one of 'none', 'c', 'ct', got {value!r}"
        ) from None


def prepare_dataset(config: PipelineConfig) -> tuple[Dataset, Dataset, str, tuple[str, ...]]:
    """Ingest and transform stages: returns (raw dataset, analysis dataset,
    analysis dependent name, analysis regressor names)."""
    with _stage("ingest"):
        if config.data is not None:
            raw_ds = load_csv(config.data, IngestOptions(period_column=config.period_column))
        elif config.fetch is not None:
            spec = dict(config.fetch)
            country = spec.get("country")
            indicators = spec.get("indicators")
            years = spec.get("years")
            if not country or not indicators or not years or len(years) != 2:
                raise ConfigError(
                    "fetch needs 'country', 'indicators' (column -> code), and 'years' [start, end]"
                )
            series = [
                fetch_worldbank(
                    country,
                    code,
                    (int(years[0]), int(years[1])),
                    cache_dir=spec.get("cache_dir"),
                    name=column,
                )
                for column, code in indicators.items()
            ]
            raw_ds = Dataset.from_series(series)
        else:
            raise ConfigError("config needs either 'data' (CSV path) or 'fetch'")

    with _stage("transform"):
        roles = [config.dependent, *config.regressors]
        for name in roles:
            raw_ds[name]  # existence check with a clear error
        if config.log_transform:
            ds = Dataset.from_series([log_transform(raw_ds[name]) for name in roles])
        else:
            ds = Dataset.from_series([raw_ds[name] for name in roles])
        dep = config.analysis_name(config.dependent)
        regressors = tuple(config.analysis_name(r) for r in config.regressors)
    return raw_ds, ds, dep, regressors


def resolve_order(
    config: PipelineConfig, ds: Dataset, dep: str, regressors: tuple[str, ...]
) -> ArdlOrder:
    """Order stage: the configured fixed order, else the grid search winner."""
    with _stage("order"):
        if config.ardl_order is not None:
            values = config.ardl_order
            if len(values) != 1 + len(regressors):
                raise ConfigError(
                    f"ardl_order needs 1 + {len(regressors)} entries (p, then q per regressor)"
                )
            return ArdlOrder(values[0], tuple(values[1:]))
        return select_order(
            ds, dep, regressors, config.ardl_p_max, config.ardl_q_max, config.ardl_criterion
        )


def adf_spec_for(config: PipelineConfig, name: str, differenced: bool = False) -> AdfSpec:
    mapping = config.adf_diff_deterministic if differenced else config.adf_deterministic
    return AdfSpec(
        deterministic=_det(mapping.get(name, "c")),
        fixed_lag=config.adf_fixed_lag,
        max_lag=config.adf_max_lag,
        criterion=config.adf_criterion,
    )


def run_pipeline(config: PipelineConfig) -> Report:
    """Execute the full workflow; see the module docstring for stage order."""
    raw_ds, ds, dep, regressors = prepare_dataset(config)

    for mapping_name, mapping in (
        ("adf_deterministic", config.adf_deterministic),
        ("adf_diff_deterministic", config.adf_diff_deterministic),
    ):
        unknown = set(mapping) - set(ds.names)
        if unknown:
            raise ConfigError(f"{mapping_name} refers to unknown variables: {sorted(unknown)}")

    with _stage("unit_root"):
        unit_root: dict[str, IntegrationOrder] = {}
        for name in (dep, *regressors):
            unit_root[name] = classify_integration(
                ds[name],
                adf_spec_for(config, name),
                config.significance,
                adf_spec_for(config, name, differenced=True),
            )
    for name, result in unit_root.items():
        if result.order >= 2:
            raise I2Error(
                f"variable {name!r} is integrated of order {result.order}; "
                "the bounds procedure requires variables of order at most one"
            )

    order = resolve_order(config, ds, dep, regressors)

    with _stage("ardl"):
        model = fit_ardl(ds, dep, regressors, order)

    with _stage("bounds"):
        bounds = bounds_test(ds, dep, regressors, order, parse_case(config.bounds_case))

    notes: list[str] = []
    longrun: LongRunCoeffs | None = None
    ecm: EcmResult | None = None
    if not config.long_run_output:
        notes.append("long-run output not requested; skipping long-run and ECM stages")
    elif bounds.verdict is CointVerdict.NOT_COINTEGRATED:
        raise NoCointegrationError(
            f"bounds F = {bounds.fstat:.6f} lies below every lower bound: "
            "no level relationship, long-run output unavailable"
        )
    elif bounds.verdict is CointVerdict.INCONCLUSIVE and not config.inconclusive_override:
        notes.append(
            "bounds verdict inconclusive; long-run and ECM stages skipped "
            "(set inconclusive_override = true to force them)"
        )
    else:
        if bounds.verdict is CointVerdict.INCONCLUSIVE:
            notes.append("bounds verdict inconclusive; proceeding under explicit override")
        with _stage("long_run"):
            longrun = long_run(model)
            ecm = fit_ecm(model, longrun)

    with _stage("diagnostics"):
        diag = (
            serial_lm(model.fit, config.serial_lags, config.significance),
            ramsey_reset(model.fit, config.reset_powers, config.significance),
            het_test(model.fit, HetKind(config.het_kind), config.significance),
        )

    with _stage("cusum"):
        stability = cusum(model.fit.y, model.fit.X, config.cusum_level)
        stability = dataclasses.replace(
            stability,
            start_period=model.start_period + (model.fit.n - len(stability.path)),
        )

    provenance = {
        "schema_version": SCHEMA_VERSION,
        "package_version": _pkg_version,
        "config": _config_dict(config),
        "data_sha256": dataset_checksum(raw_ds),
    }
    return Report(
        unit_root=unit_root,
        order=order,
        ardl=model,
        bounds=bounds,
        long_run=longrun,
        ecm=ecm,
        diagnostics=diag,
        cusum=stability,
        provenance=provenance,
        notes=tuple(notes),
    )


def _config_dict(config: PipelineConfig) -> dict:
    out = dataclasses.asdict(config)
    out["regressors"] = list(config.regressors)
    out["output_formats"] = list(config.output_formats)
    if config.ardl_order is not None:
        out["ardl_order"] = list(config.ardl_order)
    return out


def _adf_json(result) -> dict:
    return {
        "deterministic": result.spec.deterministic.value,
        "lag": result.chosen_lag,
        "stat": result.stat,
        "pvalue": result.pvalue,
        "crit": {f"{lv:.2f}": cv for lv, cv in result.crit.items()},
        "verdict": result.verdict.value,
        "nobs": result.nobs,
    }


def report_to_dict(report: Report) -> dict:
    """The documented stable JSON schema (schema_version 1)."""
    unit_root = {
        name: {
            "order": res.order,
            "level": _adf_json(res.level_result),
            "difference": None if res.diff_result is None else _adf_json(res.diff_result),
        }
        for name, res in report.unit_root.items()
    }
    ardl_section = {
        "dependent": report.ardl.dep,
        "regressors": list(report.ardl.regressors),
        "order": {"p": report.order.p, "q": list(report.order.q)},
        "sample": [report.ardl.start_period, report.ardl.end_period],
        "coefficients": [
            {
                "name": nm,
                "coef": float(c),
                "stderr": float(s),
                "tstat": float(t),
                "pvalue": float(p),
            }
            for nm, c, s, t, p in zip(
                report.ardl.fit.names,
                report.ardl.fit.coef,
                report.ardl.fit.stderr,
                report.ardl.fit.tstat,
                report.ardl.fit.pvalue,
            )
        ],
        "r2": report.ardl.fit.r2,
        "r2_adj": report.ardl.fit.r2_adj,
        "aic": report.ardl.fit.aic,
        "sic": report.ardl.fit.sic,
    }
    bounds_section = {
        "fstat": report.bounds.fstat,
        "k": report.bounds.k,
        "case": report.bounds.case.value,
        "bounds": {
            f"{lv:.2f}": [lo, up] for lv, (lo, up) in sorted(report.bounds.bounds.items())
        },
        "verdict": report.bounds.verdict.value,
        "strongest_level": report.bounds.strongest_level,
        "df": list(report.bounds.df),
    }
    long_run_section = None
    if report.long_run is not None:
        long_run_section = {
            "coefficients": [
                {
                    "name": nm,
                    "coef": float(c),
                    "stderr": float(s),
                    "tstat": float(t),
                    "pvalue": float(p),
                    "stars": significance_stars(float(p)),
                }
                for nm, c, s, t, p in zip(
                    report.long_run.names,
                    report.long_run.theta,
                    report.long_run.stderr,
                    report.long_run.tstat,
                    report.long_run.pvalue,
                )
            ],
            "intercept": report.long_run.intercept_lr,
        }
    ecm_section = None
    if report.ecm is not None:
        ecm_section = {
            "coef": report.ecm.lam,
            "stderr": report.ecm.stderr,
            "tstat": report.ecm.tstat,
            "pvalue": report.ecm.pvalue,
            "stars": significance_stars(report.ecm.pvalue),
            "narrative": adjustment_narrative(report.ecm.lam, report.ecm.pvalue),
            "short_run": [
                {"name": nm, "coef": float(c), "stderr": float(s)}
                for nm, c, s in zip(
                    report.ecm.short_run_names,
                    report.ecm.short_run_coef,
                    report.ecm.short_run_stderr,
                )
            ],
            "warning": report.ecm.warning,
        }
    diagnostics_section = [
        {
            "name": t.name,
            "fstat": t.fstat,
            "df": list(t.df),
            "pvalue": t.pvalue,
            "verdict": t.verdict,
            "level": t.level,
        }
        for t in report.diagnostics
    ]
    cusum_section = {
        "stable": report.cusum.stable,
        "level": report.cusum.level,
        "sigma": report.cusum.sigma,
        "start_period": report.cusum.start_period,
        "path": [float(v) for v in report.cusum.path],
        "upper": [float(v) for v in report.cusum.upper],
        "lower": [float(v) for v in report.cusum.lower],
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "provenance": report.provenance,
        "unit_root": unit_root,
        "ardl": ardl_section,
        "bounds": bounds_section,
        "diagnostics": diagnostics_section,
        "long_run": long_run_section,
        "ecm": ecm_section,
        "cusum": cusum_section,
        "notes": list(report.notes),
    }


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _render_text(report: Report) -> str:
    lines: list[str] = []
    add = lines.append
    add("ARDL bounds-testing pipeline report")
    add("=" * 36)
    add("")

    add("1. Unit-root pretests (levels)")
    add(f"   {'variable':<10} {'det':<5} {'lag':>3} {'stat':>12} {'p-value':>10}  verdict")
    for name, res in report.unit_root.items():
        r = res.level_result
        add(
            f"   {name:<10} {r.spec.deterministic.value:<5} {r.chosen_lag:>3} "
            f"{_fmt(r.stat):>12} {_fmt(r.pvalue):>10}  {r.verdict.value}"
        )
    add("")

    add("2. Unit-root pretests (first differences)")
    any_diff = False
    for name, res in report.unit_root.items():
        if res.diff_result is None:
            continue
        any_diff = True
        r = res.diff_result
        add(
            f"   D({name}){'':<{max(0, 7 - len(name))}} {r.spec.deterministic.value:<5} "
            f"{r.chosen_lag:>3} {_fmt(r.stat):>12} {_fmt(r.pvalue):>10}  {r.verdict.value}"
        )
    if not any_diff:
        add("   (all variables already stationary in levels)")
    add("")

    b = report.bounds
    add(f"3. Bounds cointegration test (case: {b.case.value}, k = {b.k})")
    add(f"   F statistic = {_fmt(b.fstat)}   df = {b.df}")
    add(f"   {'level':<7} {'lower I(0)':>11} {'upper I(1)':>11}")
    for lv in sorted(b.bounds, reverse=True):
        lo, up = b.bounds[lv]
        add(f"   {lv:<7.0%} {lo:>11.2f} {up:>11.2f}")
    if b.verdict is CointVerdict.COINTEGRATED and b.strongest_level is not None:
        up = b.bounds[b.strongest_level][1]
        add(
            f"   verdict: cointegrated at {b.strongest_level:.0%} "
            f"(F = {_fmt(b.fstat)} > upper bound {up:.2f} at {b.strongest_level:.0%})"
        )
    else:
        add(f"   verdict: {b.verdict.value}")
    add("")

    add("4. Residual diagnostics")
    add(f"   {'test':<28} {'F':>10} {'df':>10} {'p-value':>10}  verdict")
    for t in report.diagnostics:
        add(
            f"   {t.name:<28} {_fmt(t.fstat):>10} {f'({t.df[0]}, {t.df[1]})':>10} "
            f"{_fmt(t.pvalue):>10}  {t.verdict}"
        )
    add("")

    add(f"5. Long-run coefficients (dependent: {report.ardl.dep})")
    if report.long_run is None:
        add("   (not computed; see notes)")
    else:
        lr = report.long_run
        add(f"   {'variable':<10} {'coef':>12} {'stderr':>12} {'t-stat':>12} {'p-value':>10}")
        for nm, c, s, t, p in zip(lr.names, lr.theta, lr.stderr, lr.tstat, lr.pvalue):
            add(
                f"   {nm:<10} {_fmt(c):>12} {_fmt(s):>12} {_fmt(t):>12} "
                f"{_fmt(p):>10} {significance_stars(p)}"
            )
        add(f"   long-run intercept: {_fmt(lr.intercept_lr)}")
    add("")

    add("6. Error-correction model")
    if report.ecm is None:
        add("   (not computed; see notes)")
    else:
        e = report.ecm
        add(f"   {'term':<14} {'coef':>12} {'stderr':>12} {'t-stat':>12} {'p-value':>10}")
        add(
            f"   {'ECM(-1)':<14} {_fmt(e.lam):>12} {_fmt(e.stderr):>12} "
            f"{_fmt(e.tstat):>12} {_fmt(e.pvalue):>10} {significance_stars(e.pvalue)}"
        )
        for nm, c, s in zip(e.short_run_names, e.short_run_coef, e.short_run_stderr):
            add(f"   {nm:<14} {_fmt(c):>12} {_fmt(s):>12}")
        add(f"   note: {adjustment_narrative(e.lam, e.pvalue)}")
        if e.warning:
            add(f"   warning: {e.warning}")
    add("")

    c = report.cusum
    status = "stable (path within bounds)" if c.stable else "UNSTABLE (path crosses the bounds)"
    add(f"CUSUM coefficient stability at {c.level:.0%}: {status}")
    for note in report.notes:
        add(f"note: {note}")
    add("")
    add("significance stars: *** 1%, ** 5%, * 10%")
    return "\n".join(lines) + "\n"


def render_report(report: Report, format: str = "text") -> str:
    """Render as human-readable text or as the stable JSON document."""
    if format == "text":
        return _render_text(report)
    if format == "json":
        return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"
    raise ConfigError(f"unknown report format {format!r}")


def emit_cusum_plot(c: CusumResult, path: str | Path) -> tuple[Path, Path]:
    """Write the CUSUM path as CSV (period, path, lower, upper, crossed) and a
    standalone SVG rendering; returns the two file paths."""
    base = Path(path)
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path = base.with_suffix(".csv")
    svg_path = base.with_suffix(".svg")

    periods = np.arange(c.start_period, c.start_period + len(c.path))
    crossed = (c.path > c.upper) | (c.path < c.lower)
    with csv_path.open("w", newline="") as fh:
        fh.write("period,path,lower,upper,crossed\n")
        for i in range(len(c.path)):
            fh.write(
                f"{periods[i]},{float(c.path[i])!r},{float(c.lower[i])!r},"
                f"{float(c.upper[i])!r},{int(crossed[i])}\n"
            )

    svg_path.write_text(_cusum_svg(periods, c), encoding="utf-8")
    return csv_path, svg_path


def _cusum_svg(periods: np.ndarray, c: CusumResult) -> str:
    width, height, margin = 640, 400, 50
    if len(c.path) == 0:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"/>'
    y_all = np.concatenate([c.path, c.upper, c.lower])
    y_min, y_max = float(y_all.min()), float(y_all.max())
    pad = 0.05 * (y_max - y_min or 1.0)
    y_min, y_max = y_min - pad, y_max + pad
    x_min, x_max = float(periods[0]), float(periods[-1])
    x_span = (x_max - x_min) or 1.0

    def px(x: float) -> float:
        return margin + (x - x_min) / x_span * (width - 2 * margin)

    def py(y: float) -> float:
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin)

    def polyline(ys: np.ndarray, color: str, dash: str = "") -> str:
        pts = " ".join(f"{px(p):.2f},{py(v):.2f}" for p, v in zip(periods, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{extra} points="{pts}"/>'

    zero = py(0.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{zero:.2f}" x2="{width - margin}" y2="{zero:.2f}" '
        'stroke="#999" stroke-width="0.8"/>',
        polyline(c.upper, "#cc3333", dash="6,4"),
        polyline(c.lower, "#cc3333", dash="6,4"),
        polyline(c.path, "#2255aa"),
        f'<text x="{margin}" y="{margin - 16}" font-family="sans-serif" font-size="14">'
        f"CUSUM of recursive residuals ({c.level:.0%} bounds)</text>",
        f'<text x="{margin}" y="{height - 12}" font-family="sans-serif" font-size="12">'
        f"{int(periods[0])} .. {int(periods[-1])}</text>",
        "</svg>",
    ]
    return "\n".join(parts) + "\n"
