"""Registry provider clients behind one provider-agnostic contract.

The file-backed fixture provider is a first-class client: it reads a
directory of raw metadata documents plus card texts, which makes the
whole pipeline runnable offline at desk scale. The HTTP client implements
the same contract against a live registry API and honours the same rate
limiter; raw metadata is retained verbatim for reprocessing.
"""

from __future__ import annotations

import abc
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

import httpx

from ..catalog.types import AssetKind
from ..errors import ProviderUnavailable
from ..timeutil import Clock, SystemClock, parse_rfc3339

LIST_PAGE_SIZE = 100


@dataclass(frozen=True)
class AssetRef:
    provider_id: str
    kind: AssetKind
    ref: str  # provider-local identifier (repo path)
    created_at: datetime


@dataclass
class RawAssetDoc:
    ref: AssetRef
    metadata: dict[str, Any]  # raw registry document, kept verbatim
    card_text: str
    fetched_at: datetime

    @property
    def asset_id(self) -> str:
        return f"{self.ref.provider_id}/{self.ref.ref}"


@dataclass
class ProviderMetrics:
    downloads: int = 0
    likes: int = 0
    commits: int = 0
    contributors: int = 0
    as_of: datetime | None = None


class ProviderClient(abc.ABC):
    """Contract every registry provider implements."""

    provider_id: str
    kinds: list[AssetKind]

    @abc.abstractmethod
    def list_assets_since(
        self, since: datetime, kind: AssetKind, cursor: str | None = None
    ) -> tuple[list[AssetRef], str | None]:
        """Refs for assets created/updated since the watermark, plus the
        next pagination cursor (None when exhausted)."""

    @abc.abstractmethod
    def fetch_card(self, ref: AssetRef) -> RawAssetDoc:
        """Raw metadata document plus card text for one asset."""

    @abc.abstractmethod
    def fetch_metrics(self, ref: AssetRef) -> ProviderMetrics:
        """Current dynamic fields (downloads, likes, commits, contributors)."""

    @abc.abstractmethod
    def fetch_linked_abstract(self, ref: AssetRef) -> str | None:
        """Abstract of the linked paper, when the card references one."""


class FixtureProvider(ProviderClient):
    """Directory-backed mock registry.

    Layout: <root>/models/<slug>/metadata.json + card.md [+ abstract.txt],
    and the same under <root>/datasets/. Tests can override dynamic
    metrics per asset via ``metric_overrides`` and simulate vanished
    assets via ``unavailable_refs``.
    """

    def __init__(self, provider_id: str, root: str | Path, clock: Clock | None = None):
        self.provider_id = provider_id
        self.root = Path(root)
        self._clock = clock or SystemClock()
        self.kinds = [
            kind for kind in AssetKind if (self.root / f"{kind.value}s").is_dir()
        ]
        self.metric_overrides: dict[str, ProviderMetrics] = {}
        self.unavailable_refs: set[str] = set()

    def _asset_dir(self, kind: AssetKind, slug: str) -> Path:
        return self.root / f"{kind.value}s" / slug

    def _load_metadata(self, kind: AssetKind, slug: str) -> dict[str, Any]:
        path = self._asset_dir(kind, slug) / "metadata.json"
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ProviderUnavailable(f"fixture asset {slug!r} unreadable: {exc}") from exc

    def list_assets_since(
        self, since: datetime, kind: AssetKind, cursor: str | None = None
    ) -> tuple[list[AssetRef], str | None]:
        base = self.root / f"{kind.value}s"
        if not base.is_dir():
            return [], None
        refs = []
        for entry in sorted(base.iterdir()):
            if not (entry / "metadata.json").is_file():
                continue
            metadata = self._load_metadata(kind, entry.name)
            created = parse_rfc3339(metadata["created_at"])
            if created > since:
                refs.append(
                    AssetRef(
                        provider_id=self.provider_id,
                        kind=kind,
                        ref=entry.name,
                        created_at=created,
                    )
                )
        offset = int(cursor) if cursor else 0
        page = refs[offset : offset + LIST_PAGE_SIZE]
        next_cursor = str(offset + LIST_PAGE_SIZE) if offset + LIST_PAGE_SIZE < len(refs) else None
        return page, next_cursor

    def fetch_card(self, ref: AssetRef) -> RawAssetDoc:
        if ref.ref in self.unavailable_refs:
            raise ProviderUnavailable(f"asset {ref.ref!r} is unavailable")
        metadata = self._load_metadata(ref.kind, ref.ref)
        card_path = self._asset_dir(ref.kind, ref.ref) / "card.md"
        card_text = card_path.read_text(encoding="utf-8") if card_path.is_file() else ""
        return RawAssetDoc(
            ref=ref, metadata=metadata, card_text=card_text, fetched_at=self._clock.now()
        )

    def fetch_metrics(self, ref: AssetRef) -> ProviderMetrics:
        if ref.ref in self.unavailable_refs:
            raise ProviderUnavailable(f"asset {ref.ref!r} is unavailable")
        override = self.metric_overrides.get(ref.ref)
        if override is not None:
            return override
        metadata = self._load_metadata(ref.kind, ref.ref)
        return ProviderMetrics(
            downloads=int(metadata.get("downloads", 0)),
            likes=int(metadata.get("likes", 0)),
            commits=int(metadata.get("commits", 0)),
            contributors=int(metadata.get("contributors", 0)),
            as_of=self._clock.now(),
        )

    def fetch_linked_abstract(self, ref: AssetRef) -> str | None:
        path = self._asset_dir(ref.kind, ref.ref) / "abstract.txt"
        if path.is_file():
            return path.read_text(encoding="utf-8")
        return None


class HttpProvider(ProviderClient):
    """Client for a live registry exposing the JSON listing/card/metrics
    endpoints. Auth token (when set) is sent as a bearer header."""

    def __init__(
        self,
        provider_id: str,
        base_url: str,
        kinds: list[AssetKind] | None = None,
        token: str | None = None,
        clock: Clock | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.provider_id = provider_id
        self.base_url = base_url.rstrip("/")
        self.kinds = kinds or list(AssetKind)
        self._clock = clock or SystemClock()
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = httpx.Client(
            base_url=self.base_url, headers=headers, timeout=30.0, transport=transport
        )

    def _get(self, path: str, params: dict[str, str] | None = None) -> httpx.Response:
        try:
            response = self._client.get(path, params=params)
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"{self.provider_id}: {exc}") from exc
        if response.status_code == 404:
            raise ProviderUnavailable(f"{self.provider_id}: {path} not found")
        if response.status_code >= 400:
            raise ProviderUnavailable(
                f"{self.provider_id}: {path} returned {response.status_code}"
            )
        return response

    def list_assets_since(
        self, since: datetime, kind: AssetKind, cursor: str | None = None
    ) -> tuple[list[AssetRef], str | None]:
        params = {"since": since.isoformat(), "limit": str(LIST_PAGE_SIZE)}
        if cursor:
            params["cursor"] = cursor
        payload = self._get(f"/api/{kind.value}s", params).json()
        refs = [
            AssetRef(
                provider_id=self.provider_id,
                kind=kind,
                ref=item["id"],
                created_at=parse_rfc3339(item["created_at"]),
            )
            for item in payload.get("items", [])
        ]
        return refs, payload.get("next_cursor")

    def fetch_card(self, ref: AssetRef) -> RawAssetDoc:
        metadata = self._get(f"/api/{ref.kind.value}s/{ref.ref}").json()
        card = self._get(f"/api/{ref.kind.value}s/{ref.ref}/card").text
        return RawAssetDoc(
            ref=ref, metadata=metadata, card_text=card, fetched_at=self._clock.now()
        )

    def fetch_metrics(self, ref: AssetRef) -> ProviderMetrics:
        payload = self._get(f"/api/{ref.kind.value}s/{ref.ref}/metrics").json()
        return ProviderMetrics(
            downloads=int(payload.get("downloads", 0)),
            likes=int(payload.get("likes", 0)),
            commits=int(payload.get("commits", 0)),
            contributors=int(payload.get("contributors", 0)),
            as_of=self._clock.now(),
        )

    def fetch_linked_abstract(self, ref: AssetRef) -> str | None:
        try:
            return self._get(f"/api/{ref.kind.value}s/{ref.ref}/abstract").text
        except ProviderUnavailable:
            return None
