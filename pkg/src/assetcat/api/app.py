"""HTTP layer exposing catalogue search, leaderboard, export, and workspace.

Handlers are stateless: every request reads one consistent store snapshot
and delegates to the corresponding module operation, so each endpoint's
response is a pure serialization of that operation's result. Every
non-2xx body is an ApiError with a stable machine-readable code; the
machine-readable endpoint listing lives at /api/v1/openapi.json.
"""

from __future__ import annotations

import logging

from fastapi import Depends, FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .. import __version__
from ..catalog.types import AssetKind, AssetRecord
from ..errors import AssetCatError, InvalidQuery, NotFound, Unauthenticated, UnknownFilterValue
from ..leaderboard.metrics import MetricRegistry, default_registry
from ..leaderboard.queries import list_filter_values, rank, trend_series
from ..leaderboard.types import FilterDimension, TrendAxis
from ..search.codec import filter_query_to_dict
from ..search.exports import ExportFormat, export, flat_record
from ..search.filters import apply_filters
from ..store.db import Database
from ..timeutil import to_rfc3339
from .params import parse_filter_params, parse_leaderboard_params

logger = logging.getLogger(__name__)

STATUS_BY_CODE = {
    "parse_error": 400,
    "validation_error": 400,
    "invalid_query": 400,
    "unsupported_format": 400,
    "unknown_filter_value": 400,
    "malformed_metadata": 400,
    "missing_documentation": 400,
    "insufficient_context": 400,
    "constraint_violation": 400,
    "duplicate_email": 409,
    "invalid_credentials": 401,
    "unauthenticated": 401,
    "forbidden": 403,
    "not_found": 404,
    "rate_budget_exhausted": 429,
    "provider_unavailable": 502,
    "store_unavailable": 500,
    "migration_conflict": 500,
    "internal_error": 500,
}


class RegisterBody(BaseModel):
    email: str
    secret: str


class ListBody(BaseModel):
    title: str


class ItemBody(BaseModel):
    asset_id: str


class PreferencesBody(BaseModel):
    preferences: list[dict]


def _error_response(status: int, code: str, message: str, field_errors: dict | None = None,
                    headers: dict | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "status": status,
            "code": code,
            "message": message,
            "field_errors": field_errors or {},
        },
        headers=headers,
    )


def _asset_detail(asset: AssetRecord, registry: MetricRegistry) -> dict:
    record = flat_record(asset, registry)
    record["card_text"] = asset.card_text
    record["abstract_text"] = asset.abstract_text
    record["eval_records"] = [
        {
            "benchmark": r.benchmark,
            "implementation": r.implementation,
            "language": r.language,
            "metric_name": r.metric_name,
            "metric_config": r.metric_config,
            "score": r.score,
            "reported_at": to_rfc3339(r.reported_at),
            "percent_normalized": r.percent_normalized,
            "unrecognized_metric": r.unrecognized_metric,
        }
        for r in asset.eval_records
    ]
    return record


def create_app(
    db: Database,
    registry: MetricRegistry | None = None,
    workspace=None,
    ingestion=None,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    registry = registry or default_registry()
    app = FastAPI(
        title="assetcat",
        version=__version__,
        openapi_url="/api/v1/openapi.json",
    )
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(AssetCatError)
    async def domain_error_handler(_request: Request, exc: AssetCatError):
        status = STATUS_BY_CODE.get(exc.code, 500)
        headers = None
        retry_after = getattr(exc, "retry_after", None)
        if status == 429 and retry_after:
            headers = {"Retry-After": f"{max(1, round(retry_after))}"}
        return _error_response(status, exc.code, exc.message, exc.field_errors, headers)

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(_request: Request, exc: RequestValidationError):
        field_errors = {
            ".".join(str(p) for p in err.get("loc", [])): err.get("msg", "invalid")
            for err in exc.errors()
        }
        return _error_response(400, "invalid_query", "request validation failed", field_errors)

    @app.exception_handler(Exception)
    async def fallback_handler(_request: Request, exc: Exception):
        logger.exception("unhandled error: %s", exc)
        return _error_response(500, "internal_error", "internal server error")

    def current_user(authorization: str | None = Header(default=None)):
        if workspace is None:
            raise Unauthenticated("workspace is not enabled")
        if not authorization or not authorization.startswith("Bearer "):
            raise Unauthenticated("missing bearer token")
        return workspace.authenticate(authorization.removeprefix("Bearer ").strip())

    # -- catalogue ---------------------------------------------------------

    def _page(request: Request, kind: AssetKind) -> dict:
        query = parse_filter_params(request.query_params, kind)
        page = apply_filters(query, db.snapshot())
        return {
            "total_matching": page.total_matching,
            "items": [flat_record(a, registry) for a in page.items],
            "applied_query": filter_query_to_dict(page.applied_query),
        }

    @app.get("/api/v1/models")
    def get_models(request: Request):
        return _page(request, AssetKind.MODEL)

    @app.get("/api/v1/datasets")
    def get_datasets(request: Request):
        return _page(request, AssetKind.DATASET)

    @app.post("/api/v1/assets/{asset_id:path}/refresh", status_code=200)
    def refresh_asset(asset_id: str):
        if ingestion is None:
            raise NotFound("on-demand refresh is not enabled")
        ingestion.refresh_asset(asset_id)
        return {"status": "refreshed", "asset_id": asset_id}

    @app.get("/api/v1/assets/{asset_id:path}")
    def get_asset(asset_id: str):
        asset = db.get_asset(asset_id)
        if asset is None:
            raise NotFound(f"asset {asset_id!r} is not catalogued")
        return _asset_detail(asset, registry)

    # -- leaderboard ---------------------------------------------------------

    @app.get("/api/v1/leaderboard")
    def get_leaderboard(request: Request):
        query = parse_leaderboard_params(request.query_params)
        ranking = rank(query, db.snapshot(), registry)
        return {
            "entries": [
                {
                    "rank": e.rank,
                    "asset_id": e.asset_id,
                    "name": e.name,
                    "score": e.score,
                    "parameter_count": e.parameter_count,
                    "created_at": to_rfc3339(e.created_at),
                }
                for e in ranking.entries
            ],
            "empty_reason": ranking.empty_reason,
        }

    @app.get("/api/v1/leaderboard/filters/{dimension}")
    def get_filter_values(dimension: str, request: Request):
        try:
            dim = FilterDimension(dimension)
        except ValueError:
            raise UnknownFilterValue(f"unknown filter dimension {dimension!r}") from None
        query = parse_leaderboard_params(request.query_params)
        return {"dimension": dim.value, "values": list_filter_values(dim, query, db.snapshot())}

    @app.get("/api/v1/leaderboard/trends")
    def get_trends(request: Request, axis: str = "time"):
        try:
            trend_axis = TrendAxis(axis)
        except ValueError:
            raise InvalidQuery(
                "axis must be 'time' or 'model_size'", {"axis": "invalid"}
            ) from None
        query = parse_leaderboard_params(request.query_params, extra_allowed={"axis"})
        points = trend_series(query, trend_axis, db.snapshot())
        return {
            "axis": trend_axis.value,
            "points": [
                {
                    "x": to_rfc3339(p.x) if trend_axis is TrendAxis.TIME else p.x,
                    "y": p.y,
                    "asset_id": p.asset_id,
                }
                for p in points
            ],
        }

    # -- export ---------------------------------------------------------------

    @app.get("/api/v1/export")
    def get_export(request: Request, kind: str, format: str = "json"):
        try:
            asset_kind = AssetKind(kind)
        except ValueError:
            raise InvalidQuery("kind must be 'model' or 'dataset'", {"kind": "invalid"}) from None
        query = parse_filter_params(
            request.query_params, asset_kind, extra_allowed={"kind", "format"}
        )
        payload, media_type = export(query, db.snapshot(), format, registry)
        extension = ExportFormat(format).value
        return Response(
            content=payload,
            media_type=media_type,
            headers={"Content-Disposition": f'attachment; filename="assets-export.{extension}"'},
        )

    # -- auth & workspace -------------------------------------------------------

    @app.post("/api/v1/auth/register", status_code=201)
    def register(body: RegisterBody):
        if workspace is None:
            raise NotFound("workspace is not enabled")
        user = workspace.register(body.email, body.secret)
        return {"user_id": user.user_id, "email": user.email}

    @app.post("/api/v1/auth/login")
    def login(body: RegisterBody):
        if workspace is None:
            raise NotFound("workspace is not enabled")
        token, expires = workspace.login(body.email, body.secret)
        return {"token": token, "expires_at": to_rfc3339(expires)}

    def _list_json(saved) -> dict:
        return {"list_id": saved.list_id, "title": saved.title, "items": saved.items}

    @app.get("/api/v1/lists")
    def get_lists(user=Depends(current_user)):
        return {"lists": [_list_json(s) for s in workspace.lists(user)]}

    @app.post("/api/v1/lists", status_code=201)
    def create_list(body: ListBody, user=Depends(current_user)):
        return _list_json(workspace.create_list(user, body.title))

    @app.get("/api/v1/lists/{list_id}")
    def get_list(list_id: str, user=Depends(current_user)):
        return _list_json(workspace.get_list(user, list_id))

    @app.put("/api/v1/lists/{list_id}")
    def rename_list(list_id: str, body: ListBody, user=Depends(current_user)):
        return _list_json(workspace.rename_list(user, list_id, body.title))

    @app.delete("/api/v1/lists/{list_id}", status_code=204)
    def delete_list(list_id: str, user=Depends(current_user)):
        workspace.delete_list(user, list_id)
        return Response(status_code=204)

    @app.post("/api/v1/lists/{list_id}/items", status_code=201)
    def add_list_item(list_id: str, body: ItemBody, user=Depends(current_user)):
        return _list_json(workspace.add_item(user, list_id, body.asset_id))

    @app.delete("/api/v1/lists/{list_id}/items/{asset_id:path}")
    def remove_list_item(list_id: str, asset_id: str, user=Depends(current_user)):
        return _list_json(workspace.remove_item(user, list_id, asset_id))

    @app.get("/api/v1/preferences")
    def get_preferences(user=Depends(current_user)):
        return {
            "preferences": [
                {
                    "preference_id": p.preference_id,
                    "criteria": p.criteria,
                    "invalid": p.invalid,
                }
                for p in workspace.preferences(user)
            ]
        }

    @app.put("/api/v1/preferences")
    def put_preferences(body: PreferencesBody, user=Depends(current_user)):
        replaced = workspace.replace_preferences(user, body.preferences)
        return {
            "preferences": [
                {"preference_id": p.preference_id, "criteria": p.criteria, "invalid": p.invalid}
                for p in replaced
            ]
        }

    @app.get("/api/v1/notifications")
    def get_notifications(offset: int = 0, limit: int = 50, user=Depends(current_user)):
        total, items = workspace.notifications(user, offset=offset, limit=limit)
        return {
            "total_matching": total,
            "unread": workspace.unread_count(user),
            "items": [
                {
                    "notification_id": n.notification_id,
                    "asset_id": n.asset_id,
                    "preference_id": n.preference_id,
                    "created_at": to_rfc3339(n.created_at),
                    "read": n.read,
                }
                for n in items
            ],
        }

    @app.post("/api/v1/notifications/{notification_id}/read")
    def mark_notification_read(notification_id: str, user=Depends(current_user)):
        workspace.mark_read(user, notification_id)
        return {"status": "ok"}

    # -- health -------------------------------------------------------------------

    @app.get("/api/v1/health")
    def health():
        return {
            "status": "ok",
            "version": __version__,
            "schema_version": db.schema_version(),
        }

    return app
