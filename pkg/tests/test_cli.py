"""Service binary: run-once jobs and wiring over the fixture registry."""

from __future__ import annotations

import json

from assetcat.cli import main
from assetcat.store.db import Database

from .conftest import REPO_ROOT

CONFIG = REPO_ROOT / "fixtures" / "provider-config.json"


def test_run_once_ingest_then_refresh(tmp_path, capsys):
    db_path = tmp_path / "cli.db"
    code = main(
        ["--config", str(CONFIG), "--fixture-mode", "--run-once", "ingest", "--db", str(db_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "ingest: seen=15 catalogued=9 skipped=6" in out

    db = Database(db_path)
    assert len(db.snapshot()) == 9

    code = main(
        ["--config", str(CONFIG), "--fixture-mode", "--run-once", "refresh", "--db", str(db_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "refresh: seen=9" in out


def test_run_once_with_custom_taxonomy(tmp_path, capsys):
    taxonomy = [
        {
            "task_id": "code-generation",
            "task_name": "Code generation",
            "sdlc_stage": "implementation",
            "lexicon": ["code generation"],
        }
    ]
    taxonomy_path = tmp_path / "taxonomy.json"
    taxonomy_path.write_text(json.dumps(taxonomy), encoding="utf-8")
    db_path = tmp_path / "cli2.db"
    code = main(
        [
            "--config", str(CONFIG),
            "--fixture-mode",
            "--run-once", "ingest",
            "--db", str(db_path),
            "--taxonomy", str(taxonomy_path),
        ]
    )
    assert code == 0
    # Only the code-generation assets survive a one-task taxonomy.
    db = Database(db_path)
    snapshot = db.snapshot()
    assert snapshot
    for asset in snapshot:
        assert [t.task_id for t in asset.se_tasks] == ["code-generation"]
