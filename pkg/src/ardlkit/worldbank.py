"""World Bank indicators API client with raw-response caching."""

from __future__ import annotations

import json
from pathlib import Path

import requests

from .errors import FetchError, IngestError
from .series import TimeSeries

API_ROOT = "https://api.worldbank.org/v2"
_PER_PAGE = 1000
_RETRIES = 3
_TIMEOUT = 30.0


def build_indicator_url(
    country: str, indicator: str, years: tuple[int, int], page: int = 1, per_page: int = _PER_PAGE
) -> str:
    start, end = years
    return (
        f"{API_ROOT}/country/{country}/indicator/{indicator}"
        f"?format=json&date={start}:{end}&per_page={per_page}&page={page}"
    )


def parse_indicator_pages(bodies: list[str], url: str) -> list[tuple[int, float | None]]:
    """(year, value) pairs from raw response bodies, sorted ascending."""
    pairs: list[tuple[int, float | None]] = []
    for body in bodies:
        try:
            payload = json.loads(body)
        except json.JSONDecodeError as exc:
            raise FetchError(f"response is not JSON: {exc}", url=url) from exc
        if not isinstance(payload, list) or len(payload) < 2:
            detail = ""
            if isinstance(payload, list) and payload and isinstance(payload[0], dict):
                detail = f": {payload[0].get('message', '')}"
            raise FetchError(f"unexpected response shape{detail}", url=url)
        rows = payload[1] or []
        for row in rows:
            try:
                year = int(row["date"])
            except (KeyError, TypeError, ValueError):
                continue
            value = row.get("value")
            pairs.append((year, None if value is None else float(value)))
    pairs.sort(key=lambda r: r[0])
    return pairs


def pairs_to_series(name: str, pairs: list[tuple[int, float | None]]) -> TimeSeries:
    """Drop leading/trailing nulls; interior nulls are an ingest error."""
    if not pairs:
        raise IngestError(f"indicator {name!r}: no observations returned")
    lo, hi = 0, len(pairs)
    while lo < hi and pairs[lo][1] is None:
        lo += 1
    while hi > lo and pairs[hi - 1][1] is None:
        hi -= 1
    trimmed = pairs[lo:hi]
    if not trimmed:
        raise IngestError(f"indicator {name!r}: every observation is null")
    for year, value in trimmed:
        if value is None:
            raise IngestError(f"indicator {name!r}: null value at interior year {year}")
    years = [y for y, _ in trimmed]
    for a, b in zip(years, years[1:]):
        if b != a + 1:
            raise IngestError(f"indicator {name!r}: gap in years between {a} and {b}")
    return TimeSeries(name, years[0], [v for _, v in trimmed])


def _cache_paths(cache_dir: Path, country: str, indicator: str, years: tuple[int, int]):
    key = f"wb_{country}_{indicator}_{years[0]}-{years[1]}".replace("/", "_")
    return cache_dir / f"{key}.meta.json", cache_dir / f"{key}.body.json"


def fetch_worldbank(
    country: str,
    indicator: str,
    years: tuple[int, int],
    cache_dir: str | Path | None = None,
    name: str | None = None,
    session: requests.Session | None = None,
) -> TimeSeries:
    """GET the indicator series (paged JSON), caching raw bodies on disk.

    A cached response is reused without any network call; the cache holds the
    raw page bodies plus a metadata record of the request.
    """
    name = name or indicator
    meta_path = body_path = None
    if cache_dir is not None:
        cache_dir = Path(cache_dir)
        cache_dir.mkdir(parents=True, exist_ok=True)
        meta_path, body_path = _cache_paths(cache_dir, country, indicator, years)
        if body_path.exists():
            bodies = json.loads(body_path.read_text(encoding="utf-8"))
            url = build_indicator_url(country, indicator, years)
            return pairs_to_series(name, parse_indicator_pages(bodies, url))

    own_session = session is None
    session = session or requests.Session()
    bodies: list[str] = []
    try:
        page, total_pages = 1, 1
        while page <= total_pages:
            url = build_indicator_url(country, indicator, years, page=page)
            body = _get_with_retries(session, url)
            bodies.append(body)
            try:
                header = json.loads(body)[0]
                total_pages = int(header.get("pages", 1))
            except (json.JSONDecodeError, IndexError, TypeError, ValueError) as exc:
                raise FetchError(f"cannot read paging header: {exc}", url=url) from exc
            page += 1
    finally:
        if own_session:
            session.close()

    if meta_path is not None and body_path is not None:
        meta = {
            "country": country,
            "indicator": indicator,
            "years": list(years),
            "pages": len(bodies),
            "url": build_indicator_url(country, indicator, years),
        }
        meta_path.write_text(json.dumps(meta, indent=2), encoding="utf-8")
        body_path.write_text(json.dumps(bodies), encoding="utf-8")

    url = build_indicator_url(country, indicator, years)
    return pairs_to_series(name, parse_indicator_pages(bodies, url))


def _get_with_retries(session: requests.Session, url: str) -> str:
    last: Exception | None = None
    for _ in range(_RETRIES):
        try:
            resp = session.get(url, timeout=_TIMEOUT)
            resp.raise_for_status()
            return resp.text
        except requests.RequestException as exc:  # noqa: PERF203 - bounded retry
            last = exc
    raise FetchError(f"request failed after {_RETRIES} attempts: {last}", url=url)
