"""Continuous catalogue of ML models and datasets for software-engineering
tasks, with a normalized leaderboard, faceted search, export, and alerting."""

__version__ = "0.1.0"
