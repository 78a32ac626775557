"""Provider clients, rate limiting, scheduling, and the ingestion pipeline."""

from .pipeline import Candidate, IngestionService, JobRun, PipelineSettings, build_asset
from .providers import (
    AssetRef,
    FixtureProvider,
    HttpProvider,
    ProviderClient,
    ProviderMetrics,
    RawAssetDoc,
)
from .ratelimit import RateBudget, TokenBucket, acquire_request_permit
from .scheduler import DEFAULT_INTERVALS, Deferral, INGEST_JOB, REFRESH_JOB, Scheduler

__all__ = [
    "AssetRef",
    "Candidate",
    "DEFAULT_INTERVALS",
    "Deferral",
    "FixtureProvider",
    "HttpProvider",
    "INGEST_JOB",
    "IngestionService",
    "JobRun",
    "PipelineSettings",
    "ProviderClient",
    "ProviderMetrics",
    "RateBudget",
    "RawAssetDoc",
    "REFRESH_JOB",
    "Scheduler",
    "TokenBucket",
    "acquire_request_permit",
    "build_asset",
]
