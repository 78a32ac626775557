"""Accounts, saved lists, tracked preferences, and the notification feed."""

from .accounts import hash_secret, new_token, token_hash, validate_email, verify_secret
from .service import (
    Notification,
    Preference,
    SavedList,
    TOKEN_TTL,
    UserAccount,
    Workspace,
    validate_criteria,
)

__all__ = [
    "Notification",
    "Preference",
    "SavedList",
    "TOKEN_TTL",
    "UserAccount",
    "Workspace",
    "hash_secret",
    "new_token",
    "token_hash",
    "validate_criteria",
    "validate_email",
    "verify_secret",
]
