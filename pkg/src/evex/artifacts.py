"""Run-directory artifact I/O.

Every artifact embeds the run-config hash for provenance: JSONL files carry
a meta header line, JSON files a top-level field, CSV files a leading
comment. Artifacts are timestamp-free so identical runs are byte-identical;
timestamps live only in the sidecar log.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

log = logging.getLogger("evex")

META_KEY = "__meta__"


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def write_jsonl(path: str | Path, rows: list[dict], meta: dict) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({META_KEY: meta}, sort_keys=True, ensure_ascii=False) + "\n")
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def read_jsonl(path: str | Path, expect_hash: str | None = None) -> list[dict]:
    """Rows of a JSONL artifact, header excluded. A hash mismatch warns."""
    rows: list[dict] = []
    with Path(path).open(encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            if i == 0 and META_KEY in raw:
                stored = raw[META_KEY].get("config_hash")
                if expect_hash and stored and stored != expect_hash:
                    log.warning(
                        "config hash mismatch for %s: artifact %s, current %s",
                        path, stored, expect_hash,
                    )
                continue
            rows.append(raw)
    return rows


def write_json(path: str | Path, payload: dict, cfg_hash: str) -> None:
    payload = dict(payload)
    payload["config_hash"] = cfg_hash
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def read_json(path: str | Path, expect_hash: str | None = None) -> dict:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    stored = payload.get("config_hash")
    if expect_hash and stored and stored != expect_hash:
        log.warning("config hash mismatch for %s: artifact %s, current %s", path, stored, expect_hash)
    return payload
