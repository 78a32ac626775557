"""User accounts, saved lists, tracked preferences, and alert matching.

An alert preference stores either a FilterQuery subset or a leaderboard
criteria subset; at ingestion time, newly catalogued assets are matched
under exactly the same predicate semantics as the live query paths, and
each (preference, asset) pair notifies at most once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta

from ..catalog.types import AssetKind, AssetRecord
from ..errors import (
    DuplicateEmail,
    Forbidden,
    InvalidCredentials,
    InvalidQuery,
    NotFound,
    Unauthenticated,
    ValidationError,
)
from ..leaderboard.queries import record_matches
from ..search.codec import filter_query_from_dict, leaderboard_query_from_dict
from ..search.filters import matches
from ..store.db import Batch, Database, new_id
from ..timeutil import Clock, SystemClock, parse_rfc3339, to_rfc3339
from .accounts import (
    hash_secret,
    new_token,
    token_hash,
    validate_email,
    validate_secret,
    verify_secret,
)

TOKEN_TTL = timedelta(hours=24)


@dataclass
class UserAccount:
    user_id: str
    email: str
    created_at: datetime


@dataclass
class SavedList:
    list_id: str
    owner: str
    title: str
    items: list[str]


@dataclass
class Preference:
    preference_id: str
    owner: str
    criteria: dict
    invalid: bool = False


@dataclass
class Notification:
    notification_id: str
    owner: str
    asset_id: str
    preference_id: str
    created_at: datetime
    read: bool = False


def validate_criteria(criteria: dict) -> None:
    """A preference is either a catalogue filter or a leaderboard subset;
    both validate under the same rules as live queries."""
    if not isinstance(criteria, dict) or "type" not in criteria:
        raise InvalidQuery("criteria must carry a 'type' field", {"type": "required"})
    kind = criteria["type"]
    query = criteria.get("query", {})
    if kind == "filter":
        filter_query_from_dict(query)
    elif kind == "leaderboard":
        parsed = leaderboard_query_from_dict(query)
        if not parsed.benchmark:
            raise InvalidQuery("leaderboard criteria need a benchmark", {"benchmark": "required"})
    else:
        raise InvalidQuery(f"unknown criteria type {kind!r}", {"type": "unknown"})


def _criteria_match(criteria: dict, asset: AssetRecord) -> bool:
    if asset.duplicate_of is not None:
        return False  # would not appear in the equivalent live query
    query = criteria.get("query", {})
    if criteria.get("type") == "filter":
        return matches(filter_query_from_dict(query), asset)
    parsed = leaderboard_query_from_dict(query)
    if asset.kind is not AssetKind.MODEL or asset.model is None:
        return False
    return any(record_matches(record, parsed) for record in asset.model.eval_records)


class Workspace:
    """Workspace operations over the shared store."""

    def __init__(self, db: Database, clock: Clock | None = None, token_ttl: timedelta = TOKEN_TTL):
        self.db = db
        self.clock = clock or SystemClock()
        self.token_ttl = token_ttl

    # -- accounts ------------------------------------------------------------

    def register(self, email: str, secret: str) -> UserAccount:
        email = validate_email(email)
        validate_secret(secret)
        now = self.clock.now()
        user = UserAccount(user_id=new_id(), email=email, created_at=now)
        with self.db.batch() as batch:
            row = batch.execute("SELECT 1 FROM users WHERE email = ?", (email,)).fetchone()
            if row is not None:
                raise DuplicateEmail(f"email {email!r} is already registered")
            batch.execute(
                "INSERT INTO users (user_id, email, credential_hash, created_at,"
                " row_created_at, row_updated_at) VALUES (?, ?, ?, ?, ?, ?)",
                (
                    user.user_id,
                    email,
                    hash_secret(secret),
                    to_rfc3339(now),
                    to_rfc3339(now),
                    to_rfc3339(now),
                ),
            )
        return user

    def login(self, email: str, secret: str) -> tuple[str, datetime]:
        """Verify credentials and issue an expiring opaque session token.

        The error is uniform regardless of which factor failed.
        """
        try:
            email = validate_email(email)
        except ValidationError:
            raise InvalidCredentials("invalid email or secret") from None
        rows = self.db.query(
            "SELECT user_id, credential_hash FROM users WHERE email = ?", (email,)
        )
        if not rows or not verify_secret(secret, rows[0]["credential_hash"]):
            raise InvalidCredentials("invalid email or secret")
        token = new_token()
        expires = self.clock.now() + self.token_ttl
        with self.db.batch() as batch:
            batch.execute(
                "INSERT INTO sessions (token_hash, user_id, expires_at, row_created_at,"
                " row_updated_at) VALUES (?, ?, ?, ?, ?)",
                (
                    token_hash(token),
                    rows[0]["user_id"],
                    to_rfc3339(expires),
                    to_rfc3339(self.clock.now()),
                    to_rfc3339(self.clock.now()),
                ),
            )
        return token, expires

    def authenticate(self, token: str) -> UserAccount:
        rows = self.db.query(
            "SELECT s.token_hash, s.expires_at, u.user_id, u.email, u.created_at"
            " FROM sessions s JOIN users u ON u.user_id = s.user_id WHERE s.token_hash = ?",
            (token_hash(token),),
        )
        if not rows:
            raise Unauthenticated("invalid or expired session token")
        row = rows[0]
        if parse_rfc3339(row["expires_at"]) < self.clock.now():
            with self.db.batch() as batch:
                batch.execute("DELETE FROM sessions WHERE token_hash = ?", (row["token_hash"],))
            raise Unauthenticated("invalid or expired session token")
        return UserAccount(
            user_id=row["user_id"],
            email=row["email"],
            created_at=parse_rfc3339(row["created_at"]),
        )

    # -- saved lists -----------------------------------------------------------

    def _owned_list(self, batch: Batch, user: UserAccount, list_id: str):
        row = batch.execute(
            "SELECT list_id, owner, title FROM saved_lists WHERE list_id = ?", (list_id,)
        ).fetchone()
        if row is None:
            raise NotFound(f"list {list_id!r} does not exist")
        if row["owner"] != user.user_id:
            raise Forbidden("list belongs to another user")
        return row

    def create_list(self, user: UserAccount, title: str) -> SavedList:
        if not title.strip():
            raise ValidationError("list title must be non-empty", {"title": "required"})
        now = to_rfc3339(self.clock.now())
        list_id = new_id()
        with self.db.batch() as batch:
            existing = batch.execute(
                "SELECT 1 FROM saved_lists WHERE owner = ? AND title = ?",
                (user.user_id, title),
            ).fetchone()
            if existing is not None:
                raise ValidationError(
                    f"a list titled {title!r} already exists", {"title": "duplicate"}
                )
            batch.execute(
                "INSERT INTO saved_lists (list_id, owner, title, row_created_at, row_updated_at)"
                " VALUES (?, ?, ?, ?, ?)",
                (list_id, user.user_id, title, now, now),
            )
        return SavedList(list_id=list_id, owner=user.user_id, title=title, items=[])

    def rename_list(self, user: UserAccount, list_id: str, title: str) -> SavedList:
        with self.db.batch() as batch:
            self._owned_list(batch, user, list_id)
            batch.execute(
                "UPDATE saved_lists SET title = ?, row_updated_at = ? WHERE list_id = ?",
                (title, to_rfc3339(self.clock.now()), list_id),
            )
        return self.get_list(user, list_id)

    def delete_list(self, user: UserAccount, list_id: str) -> None:
        with self.db.batch() as batch:
            self._owned_list(batch, user, list_id)
            batch.execute("DELETE FROM saved_lists WHERE list_id = ?", (list_id,))

    def get_list(self, user: UserAccount, list_id: str) -> SavedList:
        with self.db.batch() as batch:
            row = self._owned_list(batch, user, list_id)
            items = batch.execute(
                "SELECT asset_id FROM list_items WHERE list_id = ? ORDER BY position",
                (list_id,),
            ).fetchall()
        return SavedList(
            list_id=list_id,
            owner=user.user_id,
            title=row["title"],
            items=[r["asset_id"] for r in items],
        )

    def lists(self, user: UserAccount) -> list[SavedList]:
        rows = self.db.query(
            "SELECT list_id FROM saved_lists WHERE owner = ? ORDER BY title", (user.user_id,)
        )
        return [self.get_list(user, r["list_id"]) for r in rows]

    def add_item(self, user: UserAccount, list_id: str, asset_id: str) -> SavedList:
        """Adding an already-present asset is a no-op."""
        with self.db.batch() as batch:
            self._owned_list(batch, user, list_id)
            asset = batch.execute(
                "SELECT 1 FROM assets WHERE asset_id = ?", (asset_id,)
            ).fetchone()
            if asset is None:
                raise NotFound(f"asset {asset_id!r} is not catalogued")
            position = batch.execute(
                "SELECT COALESCE(MAX(position), -1) + 1 FROM list_items WHERE list_id = ?",
                (list_id,),
            ).fetchone()[0]
            now = to_rfc3339(self.clock.now())
            batch.execute(
                "INSERT OR IGNORE INTO list_items (list_id, asset_id, position,"
                " row_created_at, row_updated_at) VALUES (?, ?, ?, ?, ?)",
                (list_id, asset_id, position, now, now),
            )
        return self.get_list(user, list_id)

    def remove_item(self, user: UserAccount, list_id: str, asset_id: str) -> SavedList:
        with self.db.batch() as batch:
            self._owned_list(batch, user, list_id)
            batch.execute(
                "DELETE FROM list_items WHERE list_id = ? AND asset_id = ?",
                (list_id, asset_id),
            )
        return self.get_list(user, list_id)

    # -- preferences -----------------------------------------------------------

    def replace_preferences(self, user: UserAccount, criteria_list: list[dict]) -> list[Preference]:
        """PUT semantics: the user's preference set becomes exactly this."""
        for criteria in criteria_list:
            validate_criteria(criteria)
        now = to_rfc3339(self.clock.now())
        preferences = []
        with self.db.batch() as batch:
            batch.execute("DELETE FROM preferences WHERE owner = ?", (user.user_id,))
            for criteria in criteria_list:
                preference = Preference(
                    preference_id=new_id(), owner=user.user_id, criteria=criteria
                )
                batch.execute(
                    "INSERT INTO preferences (preference_id, owner, criteria, invalid_flag,"
                    " row_created_at, row_updated_at) VALUES (?, ?, ?, 0, ?, ?)",
                    (preference.preference_id, user.user_id, json.dumps(criteria), now, now),
                )
                preferences.append(preference)
        return preferences

    def preferences(self, user: UserAccount) -> list[Preference]:
        rows = self.db.query(
            "SELECT preference_id, owner, criteria, invalid_flag FROM preferences"
            " WHERE owner = ? ORDER BY row_created_at, preference_id",
            (user.user_id,),
        )
        return [
            Preference(
                preference_id=r["preference_id"],
                owner=r["owner"],
                criteria=json.loads(r["criteria"]),
                invalid=bool(r["invalid_flag"]),
            )
            for r in rows
        ]

    # -- notifications -----------------------------------------------------------

    def notifications(
        self, user: UserAccount, offset: int = 0, limit: int = 50
    ) -> tuple[int, list[Notification]]:
        total = self.db.count(
            "SELECT COUNT(*) FROM notifications WHERE owner = ?", (user.user_id,)
        )
        rows = self.db.query(
            "SELECT * FROM notifications WHERE owner = ?"
            " ORDER BY created_at DESC, notification_id LIMIT ? OFFSET ?",
            (user.user_id, limit, offset),
        )
        items = [
            Notification(
                notification_id=r["notification_id"],
                owner=r["owner"],
                asset_id=r["asset_id"],
                preference_id=r["preference_id"],
                created_at=parse_rfc3339(r["created_at"]),
                read=bool(r["read"]),
            )
            for r in rows
        ]
        return total, items

    def unread_count(self, user: UserAccount) -> int:
        return self.db.count(
            "SELECT COUNT(*) FROM notifications WHERE owner = ? AND read = 0", (user.user_id,)
        )

    def mark_read(self, user: UserAccount, notification_id: str) -> None:
        with self.db.batch() as batch:
            row = batch.execute(
                "SELECT owner FROM notifications WHERE notification_id = ?", (notification_id,)
            ).fetchone()
            if row is None:
                raise NotFound(f"notification {notification_id!r} does not exist")
            if row["owner"] != user.user_id:
                raise Forbidden("notification belongs to another user")
            batch.execute(
                "UPDATE notifications SET read = 1, row_updated_at = ? WHERE notification_id = ?",
                (to_rfc3339(self.clock.now()), notification_id),
            )

    # -- alert matching -----------------------------------------------------------

    def match_alerts(self, batch: Batch, new_assets: list[AssetRecord]) -> int:
        """Create notifications for every (preference, new asset) pair whose
        criteria match, inside the ingestion batch's transaction. The unique
        (preference, asset) key makes delivery at-most-once. Returns the
        number of notifications created.
        """
        rows = batch.execute(
            "SELECT preference_id, owner, criteria FROM preferences WHERE invalid_flag = 0"
        ).fetchall()
        created = 0
        now = to_rfc3339(self.clock.now())
        for row in rows:
            criteria = json.loads(row["criteria"])
            try:
                validate_criteria(criteria)
            except InvalidQuery:
                batch.execute(
                    "UPDATE preferences SET invalid_flag = 1, row_updated_at = ?"
                    " WHERE preference_id = ?",
                    (now, row["preference_id"]),
                )
                continue
            for asset in new_assets:
                if not _criteria_match(criteria, asset):
                    continue
                cursor = batch.execute(
                    "INSERT OR IGNORE INTO notifications (notification_id, owner, asset_id,"
                    " preference_id, created_at, read, row_created_at, row_updated_at)"
                    " VALUES (?, ?, ?, ?, ?, 0, ?, ?)",
                    (
                        new_id(),
                        row["owner"],
                        asset.asset_id,
                        row["preference_id"],
                        now,
                        now,
                        now,
                    ),
                )
                created += cursor.rowcount
        return created
