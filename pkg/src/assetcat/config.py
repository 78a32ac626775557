"""Service configuration: provider config file, environment, tuning knobs.

The provider config file is a UTF-8 JSON array of objects with keys
provider_id, base_url or fixture_path, rate_budget
({max_requests_per_minute, burst}), and kinds. The live provider API
token comes from the ASSETCAT_PROVIDER_TOKEN environment variable; the
store path from ASSETCAT_DB.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .catalog.types import AssetKind
from .errors import ParseError, ValidationError
from .ingest.providers import FixtureProvider, HttpProvider, ProviderClient
from .ingest.ratelimit import RateBudget, TokenBucket
from .timeutil import Clock

ENV_DB_PATH = "ASSETCAT_DB"
ENV_PROVIDER_TOKEN = "ASSETCAT_PROVIDER_TOKEN"
ENV_CORS_ORIGINS = "ASSETCAT_CORS_ORIGINS"


@dataclass
class ProviderConfig:
    provider_id: str
    base_url: str | None = None
    fixture_path: str | None = None
    rate_budget: RateBudget = field(default_factory=RateBudget)
    kinds: list[AssetKind] = field(default_factory=lambda: list(AssetKind))
    enabled: bool = True

    def validate(self) -> None:
        if not self.provider_id:
            raise ValidationError("provider_id must be non-empty")
        if (self.base_url is None) == (self.fixture_path is None):
            raise ValidationError(
                f"provider {self.provider_id!r} needs exactly one of base_url or fixture_path"
            )
        self.rate_budget.validate()


def load_provider_configs(path: str | Path) -> list[ProviderConfig]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"provider config is not valid JSON: {exc.msg}", exc.lineno, exc.colno)
    if not isinstance(payload, list):
        raise ParseError("provider config must be a top-level array")
    configs = []
    for raw in payload:
        budget_raw = raw.get("rate_budget", {})
        config = ProviderConfig(
            provider_id=raw.get("provider_id", ""),
            base_url=raw.get("base_url"),
            fixture_path=raw.get("fixture_path"),
            rate_budget=RateBudget(
                max_requests_per_minute=int(budget_raw.get("max_requests_per_minute", 120)),
                burst=int(budget_raw.get("burst", 20)),
            ),
            kinds=[AssetKind(k) for k in raw.get("kinds", ["model", "dataset"])],
            enabled=bool(raw.get("enabled", True)),
        )
        config.validate()
        configs.append(config)
    return configs


def build_providers(
    configs: list[ProviderConfig],
    fixture_mode: bool = False,
    token: str | None = None,
    clock: Clock | None = None,
    config_dir: Path | None = None,
) -> tuple[list[ProviderClient], dict[str, TokenBucket]]:
    """Instantiate clients and one shared rate limiter per provider.

    In fixture mode, live (base_url) providers are skipped so the whole
    pipeline runs offline.
    """
    token = token if token is not None else os.environ.get(ENV_PROVIDER_TOKEN)
    providers: list[ProviderClient] = []
    limiters: dict[str, TokenBucket] = {}
    for config in configs:
        if not config.enabled:
            continue
        if config.fixture_path is not None:
            root = Path(config.fixture_path)
            if not root.is_absolute() and config_dir is not None:
                root = config_dir / root
            provider: ProviderClient = FixtureProvider(config.provider_id, root, clock=clock)
            provider.kinds = [k for k in config.kinds if k in provider.kinds]
        else:
            if fixture_mode:
                continue
            provider = HttpProvider(
                config.provider_id,
                config.base_url or "",
                kinds=config.kinds,
                token=token,
                clock=clock,
            )
        providers.append(provider)
        limiters[config.provider_id] = TokenBucket(config.rate_budget, clock=clock)
    return providers, limiters


def db_path_from_env(default: str = "assetcat.db") -> str:
    return os.environ.get(ENV_DB_PATH, default)


def cors_origins_from_env() -> list[str] | None:
    raw = os.environ.get(ENV_CORS_ORIGINS)
    if not raw:
        return None
    return [origin.strip() for origin in raw.split(",") if origin.strip()]
