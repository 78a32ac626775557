"""HTTP API for catalogue search, leaderboard, export, and workspace."""

from .app import create_app
from .params import parse_filter_params, parse_leaderboard_params

__all__ = ["create_app", "parse_filter_params", "parse_leaderboard_params"]
