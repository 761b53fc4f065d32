"""World Bank client tests: URL construction, parsing, and caching (offline)."""

from __future__ import annotations

import json

import pytest

from ardlkit.errors import FetchError, IngestError
from ardlkit.worldbank import (
    build_indicator_url,
    fetch_worldbank,
    pairs_to_series,
    parse_indicator_pages,
)


def page_body(rows, pages=1, page=1):
    header = {"page": page, "pages": pages, "per_page": 1000, "total": len(rows)}
    data = [
        {
            "indicator": {"id": "X"},
            "country": {"id": "IRN"},
            "date": str(year),
            "value": value,
        }
        for year, value in rows
    ]
    return json.dumps([header, data])


class FakeResponse:
    def __init__(self, text: str):
        self.text = text

    def raise_for_status(self) -> None:
        pass


class FakeSession:
    def __init__(self, bodies):
        self.bodies = list(bodies)
        self.urls: list[str] = []

    def get(self, url, timeout=None):
        self.urls.append(url)
        return FakeResponse(self.bodies.pop(0))

    def close(self) -> None:
        pass


class TestUrlConstruction:
    def test_contains_codes_dates_and_format(self):
        url = build_indicator_url("IRN", "NV.AGR.TOTL.KN", (2000, 2022))
        assert "/country/IRN/indicator/NV.AGR.TOTL.KN" in url
        assert "date=2000:2022" in url
        assert "format=json" in url
        assert "page=1" in url


class TestParsing:
    def test_sorted_pairs(self):
        bodies = [page_body([(2002, 3.0), (2000, 1.0), (2001, 2.0)])]
        pairs = parse_indicator_pages(bodies, "u")
        assert pairs == [(2000, 1.0), (2001, 2.0), (2002, 3.0)]

    def test_error_payload(self):
        body = json.dumps([{"message": "Invalid indicator"}])
        with pytest.raises(FetchError, match="Invalid indicator"):
            parse_indicator_pages([body], "u")

    def test_not_json(self):
        with pytest.raises(FetchError):
            parse_indicator_pages(["<html>"], "u")

    def test_leading_trailing_nulls_dropped(self):
        pairs = [(1999, None), (2000, 1.0), (2001, 2.0), (2002, None)]
        s = pairs_to_series("x", pairs)
        assert s.start_period == 2000
        assert list(s.values) == [1.0, 2.0]

    def test_interior_null_is_error(self):
        pairs = [(2000, 1.0), (2001, None), (2002, 2.0)]
        with pytest.raises(IngestError, match="2001"):
            pairs_to_series("x", pairs)

    def test_all_null(self):
        with pytest.raises(IngestError):
            pairs_to_series("x", [(2000, None)])

    def test_year_gap_is_error(self):
        with pytest.raises(IngestError, match="gap"):
            pairs_to_series("x", [(2000, 1.0), (2002, 2.0)])


class TestFetch:
    def test_fetch_with_fake_session_and_cache(self, tmp_path):
        session = FakeSession([page_body([(2000, 1.5), (2001, 2.5)])])
        s = fetch_worldbank(
            "IRN", "X", (2000, 2001), cache_dir=tmp_path, name="rd", session=session
        )
        assert s.name == "rd"
        assert list(s.values) == [1.5, 2.5]
        assert len(session.urls) == 1
        assert "date=2000:2001" in session.urls[0]
        # cache metadata + raw bodies landed on disk
        metas = list(tmp_path.glob("*.meta.json"))
        bodies = list(tmp_path.glob("*.body.json"))
        assert len(metas) == 1 and len(bodies) == 1

    def test_cached_response_skips_network(self, tmp_path):
        session = FakeSession([page_body([(2000, 1.5), (2001, 2.5)])])
        first = fetch_worldbank("IRN", "X", (2000, 2001), cache_dir=tmp_path, session=session)

        class ExplodingSession:
            def get(self, url, timeout=None):
                raise AssertionError("network touched despite warm cache")

            def close(self) -> None:
                pass

        second = fetch_worldbank(
            "IRN", "X", (2000, 2001), cache_dir=tmp_path, session=ExplodingSession()
        )
        assert list(first.values) == list(second.values)
        assert first.start_period == second.start_period

    def test_paged_responses(self, tmp_path):
        session = FakeSession(
            [
                page_body([(2000, 1.0)], pages=2, page=1),
                page_body([(2001, 2.0)], pages=2, page=2),
            ]
        )
        s = fetch_worldbank("IRN", "X", (2000, 2001), cache_dir=tmp_path, session=session)
        assert list(s.values) == [1.0, 2.0]
        assert len(session.urls) == 2
        assert "page=2" in session.urls[1]

    def test_interior_null_from_api(self):
        session = FakeSession([page_body([(2000, 1.0), (2001, None), (2002, 2.0)])])
        with pytest.raises(IngestError):
            fetch_worldbank("IRN", "X", (2000, 2002), session=session)
