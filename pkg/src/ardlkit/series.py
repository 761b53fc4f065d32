"""Annual time-series containers, deterministic transforms, and CSV ingestion.

Values are plain float64 arrays indexed by integer year. All containers are
immutable after construction, so they can be shared freely across threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, IngestError, SampleError

# Eastern-Arabic (U+0660..) and Persian (U+06F0..) digit glyphs, the '/'
# decimal separator used in Iranian statistical tables, and the Unicode
# minus sign, all mapped to ASCII equivalents.
_DIGIT_MAP = {}
for _i in range(10):
    _DIGIT_MAP[ord("٠") + _i] = ord("0") + _i
    _DIGIT_MAP[ord("۰") + _i] = ord("0") + _i
_DIGIT_MAP[ord("/")] = ord(".")
_DIGIT_MAP[ord("٫")] = ord(".")  # Arabic decimal separator
_DIGIT_MAP[ord("−")] = ord("-")


def normalize_digits(text: str) -> str:
    """Map Persian/Eastern-Arabic digits and '/'-style decimal marks to ASCII.

    Idempotent: ASCII digits and '.' pass through unchanged.
    """
    return text.translate(_DIGIT_MAP)


def _freeze(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class TimeSeries:
    """A named annual series: ``values[i]`` is the observation for period
    ``start_period + i``."""

    name: str
    start_period: int
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _freeze(self.values))
        if self.values.ndim != 1 or len(self.values) < 1:
            raise DomainError(f"series {self.name!r} must hold at least one value")
        if not np.all(np.isfinite(self.values)):
            bad = int(np.flatnonzero(~np.isfinite(self.values))[0])
            raise DomainError(
                f"series {self.name!r} has a non-finite value at period "
                f"{self.start_period + bad}"
            )

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_period(self) -> int:
        return self.start_period + len(self.values) - 1

    @property
    def periods(self) -> np.ndarray:
        return np.arange(self.start_period, self.end_period + 1)


@dataclass(frozen=True)
class Dataset:
    """Aligned collection of uniquely named series over a common sample."""

    series: Mapping[str, TimeSeries]
    start_period: int
    end_period: int

    @classmethod
    def from_series(cls, items: Iterable[TimeSeries]) -> "Dataset":
        items = list(items)
        if not items:
            raise DomainError("dataset needs at least one series")
        names = [s.name for s in items]
        if len(set(names)) != len(names):
            raise DomainError("series names must be unique")
        start = max(s.start_period for s in items)
        end = min(s.end_period for s in items)
        if end < start:
            raise SampleError("series have no common sample")
        trimmed = {}
        for s in items:
            lo = start - s.start_period
            hi = lo + (end - start) + 1
            trimmed[s.name] = TimeSeries(s.name, start, s.values[lo:hi])
        return cls(series=dict(trimmed), start_period=start, end_period=end)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.series)

    @property
    def nobs(self) -> int:
        return self.end_period - self.start_period + 1

    def __getitem__(self, name: str) -> TimeSeries:
        try:
            return self.series[name]
        except KeyError:
            raise DomainError(f"no series named {name!r}") from None

    def values(self, name: str) -> np.ndarray:
        return self[name].values


@dataclass(frozen=True)
class DesignMatrix:
    """Regression-ready response/regressor block over an explicit sample."""

    response: np.ndarray
    response_name: str
    regressors: np.ndarray
    columns: tuple[str, ...]
    start_period: int
    end_period: int
    has_intercept: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "response", _freeze(self.response))
        object.__setattr__(self, "regressors", _freeze(self.regressors))
        if self.regressors.shape[0] != len(self.response):
            raise DomainError("design rows must match response length")
        if self.regressors.shape[1] != len(self.columns):
            raise DomainError("column names must match design width")

    @property
    def nobs(self) -> int:
        return len(self.response)

    @property
    def ncols(self) -> int:
        return self.regressors.shape[1]

    @property
    def periods(self) -> np.ndarray:
        return np.arange(self.start_period, self.end_period + 1)


@dataclass(frozen=True)
class IngestOptions:
    """CSV ingestion knobs. ``period_column=None`` takes the first column."""

    period_column: str | None = None
    normalize: bool = True
    delimiter: str = ","


def _parse_period(text: str, row: int) -> int:
    try:
        value = float(text)
    except ValueError:
        raise IngestError(f"row {row}: period {text!r} is not an integer year") from None
    if value != int(value):
        raise IngestError(f"row {row}: period {text!r} is not an integer year")
    return int(value)


def load_csv(path: str | Path, options: IngestOptions = IngestOptions()) -> Dataset:
    """Read a UTF-8 CSV with a header row and one integer period column.

    Persian/Eastern-Arabic digits and '/' decimal marks are normalized before
    parsing (unless disabled). Rows are sorted by period; duplicate or gapped
    periods and non-numeric cells raise :class:`IngestError`.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError(f"no such file: {path}")
    with path.open("r", encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh, delimiter=options.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if options.period_column is None:
            period_idx = 0
        else:
            try:
                period_idx = header.index(options.period_column)
            except ValueError:
                raise IngestError(
                    f"{path}: no period column named {options.period_column!r}"
                ) from None
        value_cols = [i for i in range(len(header)) if i != period_idx]
        if not value_cols:
            raise IngestError(f"{path}: no value columns besides the period")

        rows: list[tuple[int, list[float]]] = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(header):
                raise IngestError(f"{path}: row {lineno} has {len(raw)} cells, expected {len(header)}")
            cells = [normalize_digits(c.strip()) if options.normalize else c.strip() for c in raw]
            period = _parse_period(cells[period_idx], lineno)
            values = []
            for i in value_cols:
                try:
                    values.append(float(cells[i]))
                except ValueError:
                    raise IngestError(
                        f"{path}: row {lineno}, column {header[i]!r}: "
                        f"cannot parse {raw[i]!r} as a number"
                    ) from None
            rows.append((period, values))

    if not rows:
        raise IngestError(f"{path}: no data rows")
    rows.sort(key=lambda r: r[0])
    periods = [p for p, _ in rows]
    for a, b in zip(periods, periods[1:]):
        if b == a:
            raise IngestError(f"{path}: duplicate period {a}")
        if b != a + 1:
            raise IngestError(f"{path}: gap in period sequence between {a} and {b}")

    start = periods[0]
    data = np.array([v for _, v in rows], dtype=np.float64)
    series = [
        TimeSeries(header[col], start, data[:, j])
        for j, col in enumerate(value_cols)
    ]
    return Dataset.from_series(series)


def log_transform(s: TimeSeries) -> TimeSeries:
    """Elementwise natural log; the name gains an ``L`` prefix."""
    if np.any(s.values <= 0):
        bad = int(np.flatnonzero(s.values <= 0)[0])
        raise DomainError(
            f"series {s.name!r}: value {s.values[bad]} at period "
            f"{s.start_period + bad} is not positive; cannot take logs"
        )
    return TimeSeries("L" + s.name, s.start_period, np.log(s.values))


def lag(s: TimeSeries, k: int) -> TimeSeries:
    """Shift the series so observation ``t`` holds ``s(t-k)``; ``k=0`` is identity."""
    if k < 0:
        raise DomainError(f"lag must be non-negative, got {k}")
    if k >= len(s):
        raise DomainError(f"lag {k} leaves no observations (length {len(s)})")
    if k == 0:
        return s
    return TimeSeries(s.name, s.start_period + k, s.values[: len(s) - k])


def difference(s: TimeSeries, d: int = 1) -> TimeSeries:
    """d-th difference; the sample shrinks by ``d`` from the front."""
    if d < 1:
        raise DomainError(f"difference order must be positive, got {d}")
    if d >= len(s):
        raise DomainError(f"difference order {d} leaves no observations (length {len(s)})")
    return TimeSeries(s.name, s.start_period + d, np.diff(s.values, n=d))


def term_name(name: str, k: int) -> str:
    """Report naming convention for a lagged column: ``VAR``, ``VAR(-1)``, ..."""
    return name if k == 0 else f"{name}(-{k})"


def build_design(
    ds: Dataset,
    dep: str,
    terms: Sequence[tuple[str, int]],
    *,
    intercept: bool = False,
    trend: bool = False,
) -> DesignMatrix:
    """Assemble an aligned lagged-regressor matrix for ``dep``.

    The sample is truncated from the front by the maximum lag among ``terms``.
    Column order: intercept, trend, then ``terms`` in the given order, named
    ``VAR(-k)``.
    """
    dep_series = ds[dep]
    max_lag = 0
    for name, k in terms:
        if k < 0:
            raise DomainError(f"negative lag {k} for {name!r}")
        ds[name]  # existence check
        max_lag = max(max_lag, k)
    n = ds.nobs - max_lag
    if n < 1:
        raise SampleError("maximum lag leaves no observations")

    cols: list[np.ndarray] = []
    names: list[str] = []
    if intercept:
        cols.append(np.ones(n))
        names.append("C")
    if trend:
        cols.append(np.arange(1.0, n + 1))
        names.append("TREND")
    for name, k in terms:
        v = ds.values(name)
        offset = max_lag - k
        cols.append(v[offset : offset + n])
        names.append(term_name(name, k))

    X = np.column_stack(cols) if cols else np.empty((n, 0))
    if n <= X.shape[1]:
        raise SampleError(
            f"{n} observations cannot support {X.shape[1]} regressors"
        )
    y = ds.values(dep)[max_lag:]
    return DesignMatrix(
        response=y,
        response_name=dep,
        regressors=X,
        columns=tuple(names),
        start_period=ds.start_period + max_lag,
        end_period=ds.end_period,
        has_intercept=intercept,
    )
