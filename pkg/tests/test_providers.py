"""Provider contract: fixture client behavior and the HTTP client."""

from __future__ import annotations

import json

import httpx
import pytest

from assetcat.catalog.types import AssetKind
from assetcat.errors import ProviderUnavailable
from assetcat.ingest.providers import AssetRef, FixtureProvider, HttpProvider

from .conftest import REGISTRY_FIXTURE, ts


def test_fixture_provider_lists_since_watermark():
    provider = FixtureProvider("hub", REGISTRY_FIXTURE)
    everything, cursor = provider.list_assets_since(ts(1970, 1, 1), AssetKind.MODEL)
    assert cursor is None
    assert len(everything) == 8
    later, _ = provider.list_assets_since(ts(2024, 6, 1), AssetKind.MODEL)
    assert {r.ref for r in later} == {"charlie-complete", "foxtrot-empty", "golf-bugguide",
                                      "hotel-review"}


def test_fixture_provider_fetches_card_and_abstract():
    provider = FixtureProvider("hub", REGISTRY_FIXTURE)
    ref = AssetRef("hub", AssetKind.MODEL, "alpha-code-gen", ts(2024, 3, 5))
    doc = provider.fetch_card(ref)
    assert doc.asset_id == "hub/alpha-code-gen"
    assert doc.metadata["name"] == "alpha-code-gen"
    assert "alpha-code-gen" in doc.card_text
    assert provider.fetch_linked_abstract(ref)
    no_abstract = AssetRef("hub", AssetKind.MODEL, "bravo-coder", ts(2024, 5, 10))
    assert provider.fetch_linked_abstract(no_abstract) is None


def test_fixture_provider_missing_card_yields_empty_text():
    provider = FixtureProvider("hub", REGISTRY_FIXTURE)
    ref = AssetRef("hub", AssetKind.MODEL, "foxtrot-empty", ts(2024, 6, 2))
    assert provider.fetch_card(ref).card_text == ""


def _mock_registry_transport():
    items = [
        {"id": "remote-model", "created_at": "2025-03-01T00:00:00Z"},
    ]
    metadata = {
        "id": "remote-model",
        "name": "remote-model",
        "kind": "model",
        "created_at": "2025-03-01T00:00:00Z",
        "downloads": 5,
        "likes": 1,
        "commits": 2,
        "contributors": 1,
    }

    def handler(request: httpx.Request) -> httpx.Response:
        path = request.url.path
        assert request.headers.get("authorization") == "Bearer sekret"
        if path == "/api/models":
            return httpx.Response(200, json={"items": items, "next_cursor": None})
        if path == "/api/models/remote-model":
            return httpx.Response(200, json=metadata)
        if path == "/api/models/remote-model/card":
            return httpx.Response(200, text="# remote-model\ncode generation helper\n")
        if path == "/api/models/remote-model/metrics":
            return httpx.Response(200, json={"downloads": 6, "likes": 2, "commits": 2,
                                             "contributors": 1})
        if path == "/api/models/remote-model/abstract":
            return httpx.Response(404)
        return httpx.Response(500)

    return httpx.MockTransport(handler)


def test_http_provider_implements_the_same_contract():
    provider = HttpProvider(
        "live", "https://registry.example", kinds=[AssetKind.MODEL], token="sekret",
        transport=_mock_registry_transport(),
    )
    refs, cursor = provider.list_assets_since(ts(2025, 1, 1), AssetKind.MODEL)
    assert cursor is None
    assert len(refs) == 1 and refs[0].ref == "remote-model"

    doc = provider.fetch_card(refs[0])
    assert doc.metadata["name"] == "remote-model"
    assert "code generation" in doc.card_text

    metrics = provider.fetch_metrics(refs[0])
    assert (metrics.downloads, metrics.likes) == (6, 2)
    assert provider.fetch_linked_abstract(refs[0]) is None


def test_http_provider_wraps_transport_errors():
    def failing(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectError("boom", request=request)

    provider = HttpProvider(
        "live", "https://registry.example", transport=httpx.MockTransport(failing)
    )
    with pytest.raises(ProviderUnavailable):
        provider.list_assets_since(ts(2025, 1, 1), AssetKind.MODEL)
